"""Acceptance criteria 1-10, one test each.

Each test records a one-line summary with ``record_property("summary",
...)``; the terminal summary hook in ``conftest.py`` prints one
PASS/FAIL line per criterion after the run.
"""

import itertools
import time
from collections import Counter

import numpy as np

from conftest import all_dim2_prepoisson
from ppk.algebras import check_identities, sub_adjacent
from ppk.bialgebras import check_bialgebra, check_equivalent_characterizations, double_matched_pair
from ppk.catalog import abelian, two_dim_family
from ppk.extending import ERRATA, build_unified_product, extract_datum, verify_extending_structure
from ppk.fields import GF, QQ
from ppk.flags import enumerate_flag_datums
from ppk.generators import (InstanceSpec, abelian_crossed_matrices, algebras, extending_datums,
                            matched_pairs, representations)
from ppk.products import MP_MAPS, MatchedPair, induced_poisson_matched_pair, verify_matched_pair, \
    verify_abelian_crossed_matrices
from ppk.representations import RepKind, check_representation, dual_representation
from ppk.yangbaxter import coboundary_bialgebra, d_obstruction, search_solutions

F2, F3 = GF(2), GF(3)


def test_criterion_01_example_family(record_property):
    t = time.perf_counter()
    grid = list(itertools.product(range(-2, 3), repeat=3))
    ok = sum(check_identities(two_dim_family(a, b, c, QQ), "prepoisson").passed for a, b, c in grid)
    dt = time.perf_counter() - t
    record_property("summary", f"{ok}/{len(grid)} parameter triples pass over Q in {dt:.2f}s")
    assert ok == len(grid) == 125
    assert dt < 1.0


def test_criterion_02_dual_closure(record_property):
    t = time.perf_counter()
    total, ok, kinds = 0, 0, Counter()
    dims = ((1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 1), (3, 2))
    for field in (F3, QQ):
        for kind in RepKind:
            for i, dd in enumerate(dims):
                for rep in representations(InstanceSpec(200 + i, field, dd, 0.2, 8), kind):
                    assert check_representation(rep).passed
                    total += 1
                    good = check_representation(dual_representation(rep)).passed
                    ok += good
                    kinds[kind.value] += good
    dt = time.perf_counter() - t
    record_property("summary", f"{ok}/{total} duals pass ({dict(kinds)}) in {dt:.1f}s")
    assert total >= 500 and ok == total
    assert dt < 30.0


def test_criterion_03_strategy_agreement(record_property):
    datums = list(extending_datums(InstanceSpec(2026, F3, (2, 1), 0.0, 1000)))
    agree = {}
    for kind in ("zinbiel", "prelie", "prepoisson"):
        hits = 0
        for A, d in datums:
            rep = verify_extending_structure(A, d, "both", kind)
            hits += rep.notes["agreement"] and not rep.notes["equation_disagreements"]
        agree[kind] = hits
    printed = Counter()
    printed_verdicts = 0
    for A, d in datums:
        rep = verify_extending_structure(A, d, "both", "prepoisson", printed=True)
        printed.update(rep.notes["equation_disagreements"])
        printed_verdicts += rep.notes["agreement"]
    # the remaining slips only show once V has a second basis vector
    wide = Counter()
    wide_n = 60
    for A, d in extending_datums(InstanceSpec(4, F3, (2, 2), 0.0, wide_n)):
        wide.update(verify_extending_structure(A, d, "both", printed=True).notes["equation_disagreements"])
    n = len(datums)
    rates = ", ".join(f"{k} {v / n:.1%}" for k, v in sorted(printed.items())) or "none"
    wide_rates = ", ".join(f"{k} {v / wide_n:.1%}" for k, v in sorted(wide.items())) or "none"
    record_property("summary", (
        f"repaired lists over {n} datums: zinbiel {agree['zinbiel'] / n:.1%}, "
        f"prelie {agree['prelie'] / n:.1%}, prepoisson {agree['prepoisson'] / n:.1%}; "
        f"printed prepoisson list: verdict agreement {printed_verdicts / n:.1%}, "
        f"per-equation disagreement {rates}; at dim V=2 over {wide_n} datums: {wide_rates}"))
    assert agree["zinbiel"] == n and agree["prelie"] == n
    assert agree["prepoisson"] == n
    assert set(printed) <= set(ERRATA) and set(wide) <= set(ERRATA)


def test_criterion_04_extraction_round_trip(record_property):
    t = time.perf_counter()
    total = ok = 0
    for field, dims, mode in ((F3, (2, 1), "random"), (F3, (2, 2), "random"), (F3, (1, 2), "random"),
                              (GF(5), (2, 1), "random"), (QQ, (2, 1), "random")):
        for A, d in extending_datums(InstanceSpec(77, field, dims, 0.2, 50), mode):
            E = build_unified_product(A, d)
            A2, d2 = extract_datum(E, range(A.dim))
            E2 = build_unified_product(A2, d2)
            total += 1
            ok += all(field.equal(E2.table(k), E.table(k)) for k in E.tables)
    dt = time.perf_counter() - t
    record_property("summary", f"{ok}/{total} products rebuilt entrywise in {dt:.1f}s")
    assert total >= 200 and ok == total
    assert dt < 30.0


def test_criterion_05_sub_adjacent(record_property):
    pool = list(all_dim2_prepoisson(3))
    for field, n in ((F3, 2), (F3, 3), (GF(5), 3), (GF(7), 2), (QQ, 2), (QQ, 3)):
        pool += list(algebras(InstanceSpec(31, field, (n,), 0.2, 20)))
    for A, d in extending_datums(InstanceSpec(32, F3, (2, 1), 0.0, 40), "valid"):
        pool.append(build_unified_product(A, d))
    pool += [two_dim_family(a, b, c, QQ) for a, b, c in itertools.product(range(-2, 3), repeat=3)]
    total = ok = 0
    for A in pool:
        if not check_identities(A, "prepoisson").passed:
            continue
        total += 1
        ok += check_identities(sub_adjacent(A), "poisson").passed
    record_property("summary", f"{ok}/{total} pre-Poisson instances give Poisson sub-adjacent algebras")
    assert total >= 500 and ok == total


def test_criterion_06_d_equation_equivalence(record_property):
    t = time.perf_counter()
    symmetric = [np.array([[a, b], [b, c]]) for a, b, c in itertools.product(range(2), repeat=3)]
    base = list(algebras(InstanceSpec(61, F2, (2,), 0.0, 24), "zinbiel"))
    checks = ok = 0
    for A in base:
        for r in symmetric:
            z = [F2.is_zero(d_obstruction(A, r, v)) for v in ("D", "D1", "D2")]
            checks += 1
            ok += z[0] == z[1] == z[2]
    dt = time.perf_counter() - t
    nontrivial = sum(any(A.table("zinbiel").ravel()) for A in base)
    record_property("summary", f"{ok}/{checks} (algebra, r) pairs agree over {len(base)} Zinbiel "
                               f"algebras ({nontrivial} nonzero) in {dt:.2f}s")
    assert len(base) >= 20 and len(symmetric) == 8 and ok == checks
    assert dt < 10.0


def test_criterion_07_coboundary_end_to_end(record_property):
    t = time.perf_counter()
    pool = [two_dim_family(0, b, c, F3) for b, c in itertools.product(range(3), repeat=2)]
    pool += list(algebras(InstanceSpec(71, F3, (2,), 0.0, 12)))
    sols = ok = nonzero = 0
    for A in pool:
        for r in search_solutions(A, symmetric=True):
            data = coboundary_bialgebra(A, r)
            sols += 1
            nonzero += bool(data.delta_zinbiel.any() or data.delta_prelie.any())
            good = check_bialgebra("prepoisson", data).passed
            good &= check_equivalent_characterizations(data).as_tuple() == (True,) * 4
            ok += good
    dt = time.perf_counter() - t
    record_property("summary", f"{ok}/{sols} symmetric solutions on {len(pool)} algebras "
                               f"({nonzero} with nonzero comultiplications) in {dt:.1f}s")
    assert ok == sols and nonzero > 0
    assert dt < 60.0


def test_criterion_08_flag_bijection(record_property):
    t = time.perf_counter()
    A = abelian(2, F2)
    flags = {tuple(fd.to_vector()) for fd in enumerate_flag_datums(A, "prepoisson")}
    axio = {tuple(fd.to_vector()) for fd in enumerate_flag_datums(A, "prepoisson", source="axiomatic")}
    dt = time.perf_counter() - t
    record_property("summary", f"flag set {len(flags)}, axiomatic set {len(axio)}, "
                               f"equal={flags == axio} in {dt:.1f}s")
    assert flags == axio and flags
    assert dt < 60.0


def test_criterion_09_abelian_matrices(record_property):
    t = time.perf_counter()
    total = ok = valid = 0
    for m in abelian_crossed_matrices(InstanceSpec(90, F3, (2,), 0.0, 600)):
        rep = verify_abelian_crossed_matrices(F3, m)
        total += 1
        ok += rep.passed == rep.notes["axiomatic"]
        valid += rep.passed
    dt = time.perf_counter() - t
    record_property("summary", f"{ok}/{total} verdicts agree ({valid} valid) in {dt:.1f}s")
    assert total >= 500 and ok == total and 0 < valid < total
    assert dt < 30.0


def test_criterion_10_induced_poisson_pairs(record_property):
    pool = []
    for seed, dims in ((101, (2, 1)), (102, (1, 2)), (103, (2, 2)), (104, (1, 1))):
        pool += list(matched_pairs(InstanceSpec(seed, F3, dims, 0.0, 15)))
    pool += list(matched_pairs(InstanceSpec(105, GF(5), (2, 1), 0.0, 10)))
    for abc in ((0, 1, 0), (1, 0, 1), (2, 0, 2)):
        A = two_dim_family(*abc, F3)
        for r in search_solutions(A)[:4]:
            pool.append(double_matched_pair(coboundary_bialgebra(A, r)))
    rng = np.random.default_rng(10)
    for mp in list(pool[:30]):
        name = MP_MAPS["prepoisson"][int(rng.integers(8))]
        arr = np.array(mp.maps[name], copy=True)
        arr[tuple(int(rng.integers(s)) for s in arr.shape)] += 1
        pool.append(MatchedPair("prepoisson", mp.A1, mp.A2,
                                {**mp.maps, name: mp.field.reduce(arr)}))
    total = ok = 0
    for mp in pool:
        if not verify_matched_pair(mp).passed:
            continue
        total += 1
        ok += verify_matched_pair(induced_poisson_matched_pair(mp), "both").passed
    record_property("summary", f"{ok}/{total} passing pre-Poisson matched pairs induce Poisson ones")
    assert total >= 60 and ok == total
