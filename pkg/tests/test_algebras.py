import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import all_dim2_prepoisson, bilinear
from ppk.algebras import (Algebra, FormError, IdentitySystem, MissingTable, check_connes_cocycle,
                          check_identities, check_symplectic, compatible_from_form,
                          form_compatibility_report, sub_adjacent, validate_form,
                          zinbiel_to_dendriform)
from ppk.catalog import abelian, one_dim, two_dim_family
from ppk.fields import GF, QQ

OMEGA = [[0, 1], [-1, 0]]
HOMOGENEOUS = ("zinbiel", "prelie", "commassoc", "lie")


@pytest.fixture(scope="module")
def f3_pool():
    return all_dim2_prepoisson(3)


def test_zero_algebra_passes_everything():
    A = abelian(3)
    full = A.with_tables(commassoc=QQ.zeros((3, 3, 3)), lie=QQ.zeros((3, 3, 3)),
                         dendriform_succ=QQ.zeros((3, 3, 3)), dendriform_prec=QQ.zeros((3, 3, 3)))
    for sys in IdentitySystem:
        assert check_identities(full, sys).passed, sys


@pytest.mark.parametrize("field", [QQ, GF(2), GF(3), GF(7)])
def test_two_dim_family_grid(field):
    grid = [-2, -1, 0, 1, 3] if field is QQ else range(field.p)
    for a, b, c in itertools.product(grid, repeat=3):
        rep = check_identities(two_dim_family(a, b, c, field), IdentitySystem.PREPOISSON)
        assert rep.passed, (a, b, c, rep.failed_identities)


def test_two_dim_family_rational_parameters():
    rep = check_identities(two_dim_family(Fraction(1, 2), Fraction(-7, 3), 5), "prepoisson")
    assert rep.passed


def test_one_dim_zinbiel_witness():
    rep = check_identities(one_dim(1), IdentitySystem.ZINBIEL)
    assert not rep.passed
    assert rep.witnesses[0].indices == (1, 1, 1)
    # x*(x*x) - 2 (x*x)*x = -1
    assert rep.witnesses[0].residual == (-1,)
    assert rep.to_json(QQ)["witnesses"][0]["residual"] == ["-1"]


def test_passed_iff_no_witnesses(f3_pool):
    rng = np.random.default_rng(3)
    f = GF(3)
    for _ in range(50):
        A = Algebra(2, f, {"zinbiel": f.random_array(rng, (2, 2, 2)),
                           "prelie": f.random_array(rng, (2, 2, 2))})
        rep = check_identities(A, "prepoisson")
        assert rep.passed == (not rep.witnesses) == (rep.failures == 0)
        assert len(rep.witnesses) <= 16
        keys = [w.indices for w in rep.witnesses]
        assert keys == sorted(keys)


def test_missing_table():
    A = Algebra(2, QQ, {"zinbiel": QQ.zeros((2, 2, 2))})
    with pytest.raises(MissingTable):
        check_identities(A, "prepoisson")
    with pytest.raises(MissingTable):
        sub_adjacent(A)
    with pytest.raises(MissingTable):
        zinbiel_to_dendriform(Algebra(2, QQ, {"prelie": QQ.zeros((2, 2, 2))}))


def test_shape_is_validated():
    with pytest.raises(ValueError):
        Algebra(2, QQ, {"zinbiel": QQ.zeros((2, 2, 3))})


def test_sub_adjacent_example(example):
    P = sub_adjacent(example)
    expected = QQ.zeros((2, 2, 2))
    expected[0, 0, 1] = 2
    assert QQ.equal(P.table("commassoc"), expected)
    assert QQ.is_zero(P.table("lie"))
    # brute-force table arithmetic on all basis pairs
    star, circ = example.table("zinbiel"), example.table("prelie")
    for i, j in itertools.product(range(2), repeat=2):
        ei, ej = [int(i == 0), int(i == 1)], [int(j == 0), int(j == 1)]
        sym = [u + v for u, v in zip(bilinear(star, ei, ej), bilinear(star, ej, ei))]
        br = [u - v for u, v in zip(bilinear(circ, ei, ej), bilinear(circ, ej, ei))]
        assert list(P.table("commassoc")[i, j]) == sym
        assert list(P.table("lie")[i, j]) == br
    assert QQ.is_zero(sub_adjacent(abelian(2)).table("commassoc"))


def test_sub_adjacent_is_poisson(f3_pool):
    assert len(f3_pool) == 345
    for A in f3_pool:
        assert check_identities(sub_adjacent(A), IdentitySystem.POISSON).passed


def test_dendriform_example(example):
    D = zinbiel_to_dendriform(example)
    e2 = [0, 1]
    assert list(D.table("dendriform_succ")[0, 0]) == e2
    assert list(D.table("dendriform_prec")[0, 0]) == e2
    for i, j in [(0, 1), (1, 0), (1, 1)]:
        assert QQ.is_zero(D.table("dendriform_succ")[i, j])
        assert QQ.is_zero(D.table("dendriform_prec")[i, j])
    assert check_identities(D, IdentitySystem.DENDRIFORM).passed


def test_dendriform_on_zinbiel_pool(f3_pool):
    for A in f3_pool:
        assert check_identities(zinbiel_to_dendriform(A), IdentitySystem.DENDRIFORM).passed


def test_nonzinbiel_image_fails_dendriform():
    assert not check_identities(zinbiel_to_dendriform(one_dim(1)), IdentitySystem.DENDRIFORM).passed


def cyclic_oracle(table, omega, field):
    n = table.shape[0]
    w = np.array(omega, dtype=object)
    E = np.eye(n, dtype=int)

    def om(u, v):
        return sum(u[a] * v[b] * w[a, b] for a in range(n) for b in range(n))
    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = E[i], E[j], E[k]
        total = (om(bilinear(table, x, y), z) + om(bilinear(table, y, z), x)
                 + om(bilinear(table, z, x), y))
        if field.scalar(total) != 0:
            return False
    return True


def test_connes_examples():
    assert check_connes_cocycle(QQ.zeros((2, 2, 2)), OMEGA, QQ).passed
    star = QQ.zeros((2, 2, 2))
    star[0, 0, 1] = 1
    rep = check_connes_cocycle(star, OMEGA, QQ)
    # e1,e1,e1: 3 ω(e2, e1) = -3
    assert not rep.passed and rep.witnesses[0].indices == (1, 1, 1)
    assert rep.passed == cyclic_oracle(star, OMEGA, QQ)
    # the same product over F3: the cyclic sum vanishes
    assert check_connes_cocycle(GF(3).array(star.tolist()), OMEGA, GF(3)).passed
    with pytest.raises(FormError):
        check_connes_cocycle(star, [[0, 1], [1, 0]], QQ)
    with pytest.raises(FormError):
        check_connes_cocycle(star, [[0, 0], [0, 0]], QQ)


def test_symplectic_examples(example):
    assert check_symplectic(QQ.zeros((2, 2, 2)), OMEGA, QQ).passed
    lie = sub_adjacent(example).table("lie")
    for w in (OMEGA, [[0, 3], [-3, 0]], [[0, Fraction(-1, 2)], [Fraction(1, 2), 0]]):
        assert check_symplectic(lie, w, QQ).passed


def test_symplectic_matches_oracle_f3():
    f = GF(3)
    rng = np.random.default_rng(11)
    omegas = [[[0, 1], [2, 0]], [[0, 2], [1, 0]]]
    for _ in range(60):
        t = f.random_array(rng, (2, 2, 2))
        lie = f.reduce(t - np.transpose(t, (1, 0, 2)))
        for w in omegas:
            assert check_symplectic(lie, w, f).passed == cyclic_oracle(lie, w, f)


def test_connes_matches_oracle_dim4():
    f = GF(5)
    rng = np.random.default_rng(2)
    w = [[0, 1, 0], [-1, 0, 0], [0, 0, 0]]
    with pytest.raises(FormError):
        validate_form(f, w)
    w4 = f.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 2], [0, 0, -2, 0]])
    for _ in range(10):
        t = f.random_array(rng, (4, 4, 4), sparsity=0.8)
        assert check_connes_cocycle(t, w4, f).passed == cyclic_oracle(t, w4, f)


def test_compatible_from_zero():
    zin, pre = compatible_from_form(QQ.zeros((2, 2, 2)), QQ.zeros((2, 2, 2)), OMEGA, QQ)
    assert QQ.is_zero(zin) and QQ.is_zero(pre)


def test_compatible_from_form_round_trip(f3_pool):
    f = GF(3)
    seen, checked = set(), 0
    for A in f3_pool:
        P = sub_adjacent(A)
        star, lie = P.table("commassoc"), P.table("lie")
        key = (tuple(star.ravel()), tuple(lie.ravel()))
        if key in seen:
            continue
        seen.add(key)
        for w in ([[0, 1], [2, 0]], [[0, 2], [1, 0]]):
            zin, pre = compatible_from_form(star, lie, w, f)
            B = Algebra(2, f, {"zinbiel": zin, "prelie": pre})
            # defining equations, with ⋆ and [ , ] taken from the inputs
            W = f.array(w)
            for i, j, k in itertools.product(range(2), repeat=3):
                lhs_s = sum(zin[i, j, m] * W[m, k] for m in range(2))
                rhs_s = sum(W[j, m] * star[i, k, m] for m in range(2))
                assert f.scalar(lhs_s - rhs_s) == 0
                lhs_o = sum(pre[i, j, m] * W[m, k] for m in range(2))
                rhs_o = -sum(W[j, m] * lie[i, k, m] for m in range(2))
                assert f.scalar(lhs_o - rhs_o) == 0
            back = sub_adjacent(B)
            assert f.equal(back.table("commassoc"), star)
            assert f.equal(back.table("lie"), lie)
            assert check_identities(B, IdentitySystem.PREPOISSON).passed
            assert form_compatibility_report(B, w).passed
            checked += 1
    assert checked == 2 * len(seen) and len(seen) == 17


def test_compatible_from_form_rejects_non_cocycle():
    star = QQ.zeros((2, 2, 2))
    star[0, 0, 1] = 1
    with pytest.raises(FormError):
        compatible_from_form(star, QQ.zeros((2, 2, 2)), OMEGA, QQ)
    with pytest.raises(FormError):
        compatible_from_form(QQ.zeros((2, 2, 2)), QQ.zeros((2, 2, 2)), [[0, 0], [0, 0]], QQ)


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.sampled_from([GF(3), GF(5), GF(7)]))
def test_rescaling_preserves_verdicts(seed, lam, f):
    lam = lam % f.p or 1
    rng = np.random.default_rng(seed)
    tables = {n: f.random_array(rng, (2, 2, 2), sparsity=0.5) for n in HOMOGENEOUS}
    A = Algebra(2, f, tables)
    B = A.scaled(lam)
    for sys in ("zinbiel", "prelie", "commassoc", "lie"):
        assert check_identities(A, sys).passed == check_identities(B, sys).passed


def test_rescaling_over_rationals(f3_pool):
    A = two_dim_family(2, -1, 3)
    for lam in (Fraction(1, 3), -2, 5):
        assert check_identities(A.scaled(lam), "zinbiel").passed
        assert check_identities(A.scaled(lam), "prelie").passed
    assert not check_identities(one_dim(1).scaled(Fraction(-2, 7)), "zinbiel").passed


def _zinbiel_at(t, x, y, z):
    left = bilinear(t, x, bilinear(t, y, z))
    r1 = bilinear(t, bilinear(t, y, x), z)
    r2 = bilinear(t, bilinear(t, x, y), z)
    return [a - b - c for a, b, c in zip(left, r1, r2)]


def _prelie_at(t, x, y, z):
    def assoc(u, v, w):
        return [a - b for a, b in zip(bilinear(t, bilinear(t, u, v), w),
                                      bilinear(t, u, bilinear(t, v, w)))]
    return [a - b for a, b in zip(assoc(x, y, z), assoc(y, x, z))]


def _compat_at(s, o, x, y, z):
    br = [a - b for a, b in zip(bilinear(o, x, y), bilinear(o, y, x))]
    l1 = bilinear(s, br, z)
    r1 = [a - b for a, b in zip(bilinear(o, x, bilinear(s, y, z)), bilinear(s, y, bilinear(o, x, z)))]
    sym = [a + b for a, b in zip(bilinear(s, x, y), bilinear(s, y, x))]
    l2 = bilinear(o, sym, z)
    r2 = [a + b for a, b in zip(bilinear(s, x, bilinear(o, y, z)), bilinear(s, y, bilinear(o, x, z)))]
    return [a - b for a, b in zip(l1, r1)] + [a - b for a, b in zip(l2, r2)]


def test_basis_sufficiency_spot_check(f3_pool):
    """Passing algebras also satisfy the identities at random non-basis vectors."""
    rng = np.random.default_rng(7)
    f = GF(3)
    for A in f3_pool[::7]:
        s = A.table("zinbiel").astype(int)
        o = A.table("prelie").astype(int)
        for _ in range(5):
            x, y, z = (list(rng.integers(0, 3, 2)) for _ in range(3))
            vals = _zinbiel_at(s, x, y, z) + _prelie_at(o, x, y, z) + _compat_at(s, o, x, y, z)
            assert all(v % 3 == 0 for v in vals)
    # a failing algebra fails somewhere off the basis too, as multilinearity predicts
    rng = np.random.default_rng(8)
    for _ in range(20):
        t = f.random_array(rng, (2, 2, 2)).astype(int)
        basis_ok = check_identities(Algebra(2, f, {"zinbiel": f.array(t.tolist())}), "zinbiel").passed
        pts = [list(rng.integers(0, 3, 2)) for _ in range(3)]
        if basis_ok:
            assert all(v % 3 == 0 for v in _zinbiel_at(t, *pts))


def test_rational_spot_check():
    A = two_dim_family(Fraction(3, 2), -1, 4)
    s, o = A.table("zinbiel"), A.table("prelie")
    x, y, z = [Fraction(1, 3), 2], [-1, Fraction(5, 7)], [4, -3]
    vals = _zinbiel_at(s, x, y, z) + _prelie_at(o, x, y, z) + _compat_at(s, o, x, y, z)
    assert all(v == 0 for v in vals)
