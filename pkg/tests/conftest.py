import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ppk.catalog import two_dim_family
from ppk.fields import GF, QQ

settings.register_profile("ppk", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ppk")


@pytest.fixture(scope="session")
def f3():
    return GF(3)


@pytest.fixture(scope="session")
def example():
    return two_dim_family(1, 1, 1, QQ)


def all_dim2_prepoisson(p):
    """Every pre-Poisson structure on a 2-dimensional F_p space, by exhaustive search."""
    from ppk.algebras import Algebra, IdentitySystem, identities_for
    from ppk.expr import residual
    from ppk.poly import residual_polys, symbolic_array
    from ppk.search import ConstraintSystem, solve
    f = GF(p)
    s, k = symbolic_array((2, 2, 2), 0, p)
    o, k = symbolic_array((2, 2, 2), k, p)
    polys = []
    for ident in identities_for(IdentitySystem.PREPOISSON):
        polys += residual_polys(residual(ident, {"zinbiel": s, "prelie": o}, {"A": 2}, f))
    rows = solve(ConstraintSystem(k, polys, p))
    return [Algebra(2, f, {"zinbiel": r[:8].reshape(2, 2, 2), "prelie": r[8:].reshape(2, 2, 2)})
            for r in rows]


def bilinear(table, x, y):
    """x·y for coordinate vectors, by explicit summation."""
    n = table.shape[0]
    out = [0] * n
    for i, j, k in itertools.product(range(n), repeat=3):
        out[k] += x[i] * y[j] * table[i, j, k]
    return out


def qq(v):
    return Fraction(v)


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    summary = dict(report.user_properties).get("summary", "")
    verdict = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE.append((name, verdict, summary))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict, summary in sorted(_ACCEPTANCE):
        number = int(name.split("_")[2])
        line = f"criterion {number:2d} {verdict}"
        terminalreporter.write_line(f"{line}: {summary}" if summary else line)
