import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ppk import _pykernels
from ppk.poly import Poly
from ppk.search import BRUTE_LIMIT, ConstraintSystem, SearchBoundError, backend, solve

x = [Poly.var(i, 5) for i in range(6)]


def brute_oracle(system, domain):
    return [vals for vals in itertools.product(domain, repeat=system.nvars)
            if system.satisfied(vals)]


@st.composite
def systems(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 5))
    v = [Poly.var(i, p) for i in range(n)]
    polys = []
    for _ in range(draw(st.integers(0, 4))):
        poly = Poly.const(draw(st.integers(0, p - 1)), p)
        for _ in range(draw(st.integers(1, 3))):
            term = Poly.const(draw(st.integers(1, p - 1)), p)
            for _ in range(draw(st.integers(1, 2))):
                term = term * v[draw(st.integers(0, n - 1))]
            poly = poly + term
        polys.append(poly)
    return ConstraintSystem(n, polys, p)


@settings(max_examples=80, deadline=None)
@given(systems())
def test_pruned_equals_brute_and_oracle(system):
    dom = list(range(system.p))
    want = brute_oracle(system, dom)
    pruned = solve(system)
    brute = solve(system, mode="brute")
    assert [tuple(r) for r in pruned] == want
    assert [tuple(r) for r in brute] == want
    py = solve(system, kernel=_pykernels)
    assert np.array_equal(py, pruned)


@settings(max_examples=40, deadline=None)
@given(systems(), st.integers(1, 4))
def test_threads_and_order_do_not_change_output(system, threads):
    base = solve(system, threads=1)
    assert np.array_equal(solve(system, threads=threads), base)
    order = list(range(system.nvars))[::-1]
    assert np.array_equal(solve(system, order=order), base)


def test_simple_systems():
    s = ConstraintSystem(2, [x[0] * x[1] - 1], 5)
    rows = solve(s)
    assert [tuple(r) for r in rows] == [(1, 1), (2, 3), (3, 2), (4, 4)]
    assert len(solve(ConstraintSystem(3, [], 5))) == 125
    assert len(solve(ConstraintSystem(2, [Poly.const(1, 5)], 5))) == 0


def test_integer_domain():
    v = [Poly.var(i) for i in range(2)]
    s = ConstraintSystem(2, [v[0] * v[0] - v[1]])
    rows = solve(s, domain=range(-2, 3))
    assert [tuple(r) for r in rows] == [(-1, 1), (0, 0), (1, 1)]
    with pytest.raises(ValueError):
        solve(s)


def test_bound_and_argument_errors():
    v = [Poly.var(i, 5) for i in range(11)]
    s = ConstraintSystem(11, v[:10], 5)
    assert 5 ** 11 > BRUTE_LIMIT
    with pytest.raises(SearchBoundError):
        solve(s, mode="brute")
    # the pruned engine has no cap
    assert solve(s).tolist() == [[0] * 10 + [k] for k in range(5)]
    with pytest.raises(ValueError):
        solve(s, mode="annealing")
    with pytest.raises(ValueError):
        solve(s, max_nodes=100)


def test_seeded_sampling():
    s = ConstraintSystem(4, [x[0] * x[1] + x[2] * x[3] - 1], 5)
    all_rows = {tuple(r) for r in solve(s)}
    a = solve(s, seed=3, limit=10)
    assert np.array_equal(a, solve(s, seed=3, limit=10))
    assert np.array_equal(a, solve(s, seed=3, limit=10, kernel=_pykernels))
    assert len(a) == 10 and {tuple(r) for r in a} <= all_rows
    b = solve(s, seed=4, limit=10)
    assert not np.array_equal(a, b)


def test_node_budget():
    s = ConstraintSystem(6, [x[0] * x[1] * x[2] - x[3] * x[4] * x[5] - 1], 5)
    assert len(solve(s, seed=1, limit=1, max_nodes=3)) == 0
    assert len(solve(s, seed=1, limit=1, max_nodes=10 ** 6)) == 1


def test_backend_selection():
    assert backend() in ("cython", "python")
    env = dict(os.environ, PPK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from ppk.search import backend; print(backend())"],
                         env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"
