import itertools

import numpy as np
import pytest

from ppk.catalog import abelian, one_dim, two_dim_family
from ppk.fields import GF, QQ
from ppk.flags import (FLAG_ERRATA, FlagDatum, bucket_flag_datums, datum_to_flag,
                       enumerate_flag_datums, flag_conditions, flag_equivalent, flag_to_datum,
                       flag_vector_size, verify_flag_datum)
from ppk.generators import InstanceSpec, flag_datums
from ppk.search import SearchBoundError

F2, F3 = GF(2), GF(3)


def vec_key(fd):
    return tuple(int(v) for v in fd.to_vector())


def test_vector_round_trip():
    assert flag_vector_size(2) == 30
    for fd in flag_datums(InstanceSpec(1, F3, (2,), 0.0, 10)):
        assert FlagDatum.from_vector(2, F3, fd.to_vector()).to_vector() == fd.to_vector()
        assert datum_to_flag(flag_to_datum(fd)).to_vector() == fd.to_vector()
    with pytest.raises(ValueError):
        FlagDatum.from_vector(2, F3, [0] * 29)


@pytest.mark.parametrize("kind", ["zinbiel", "prelie", "prepoisson"])
def test_zero_tuple_passes(kind, example):
    rep = verify_flag_datum(kind, example, FlagDatum.zero(2, QQ))
    assert rep.passed and rep.notes["agreement"]


def test_invalid_base_rejected():
    with pytest.raises(ValueError):
        verify_flag_datum("zinbiel", one_dim(1), FlagDatum.zero(1, QQ))
    with pytest.raises(ValueError):
        verify_flag_datum("zinbiel", abelian(2), FlagDatum.zero(3, QQ))
    with pytest.raises(ValueError):
        verify_flag_datum("lie", abelian(2), FlagDatum.zero(2, QQ))


def test_abelian_forces_tau_omega_zero_over_q():
    A = abelian(2)
    for name, val in (("tau", [1, 0]), ("omega", [0, -2]), ("omega", ["1/2", 1])):
        kw = {k: getattr(FlagDatum.zero(2, QQ), k) for k in FlagDatum.zero(2, QQ).__dataclass_fields__
              if k != "field"}
        kw[name] = QQ.array(val)
        rep = verify_flag_datum("zinbiel", A, FlagDatum(QQ, **kw))
        assert not rep.passed and rep.notes["agreement"]


def test_dim1_zero_algebra_f2_zinbiel():
    A = abelian(1, F2)
    found = enumerate_flag_datums(A, "zinbiel")
    keys = {vec_key(fd) for fd in found}
    assert vec_key(FlagDatum.zero(1, F2)) in keys
    for fd in found:
        assert not fd.tau.any() and not fd.omega.any()
    # brute force over the Zinbiel half as an oracle
    oracle = set()
    for vals in itertools.product(range(2), repeat=6):
        fd = FlagDatum.from_vector(1, F2, list(vals) + [0] * 6)
        if verify_flag_datum("zinbiel", A, fd).passed:
            oracle.add(vec_key(fd))
    assert keys == oracle


@pytest.mark.parametrize("kind", ["zinbiel", "prelie", "prepoisson"])
def test_flag_verdict_matches_axioms_on_random_f2(kind):
    A = abelian(2, F2)
    for fd in flag_datums(InstanceSpec(3, F2, (2,), 0.6, 300)):
        assert verify_flag_datum(kind, A, fd).notes["agreement"]


def test_flag_verdict_matches_axioms_on_random_f3():
    for abc in ((1, 1, 1), (0, 1, 0), (1, 0, 2)):
        A = two_dim_family(*abc, F3)
        for fd in flag_datums(InstanceSpec(sum(abc), F3, (2,), 0.7, 100)):
            assert verify_flag_datum("prepoisson", A, fd).notes["agreement"]


@pytest.mark.parametrize("kind", ["zinbiel", "prelie", "prepoisson"])
def test_flag_enumeration_equals_axiomatic_f3(kind):
    A = two_dim_family(0, 1, 0, F3)
    a = {vec_key(fd) for fd in enumerate_flag_datums(A, kind)}
    b = {vec_key(fd) for fd in enumerate_flag_datums(A, kind, source="axiomatic")}
    assert a == b and a


def test_brute_and_pruned_agree():
    A = abelian(1, F3)
    for kind in ("zinbiel", "prelie"):
        brute = [vec_key(fd) for fd in enumerate_flag_datums(A, kind, mode="brute")]
        pruned = [vec_key(fd) for fd in enumerate_flag_datums(A, kind)]
        assert brute == pruned == sorted(pruned)


def test_enumeration_bounds():
    with pytest.raises(SearchBoundError):
        enumerate_flag_datums(abelian(2, F3), "prepoisson", mode="brute")
    with pytest.raises(ValueError):
        enumerate_flag_datums(abelian(1, QQ), "zinbiel")
    with pytest.raises(ValueError):
        enumerate_flag_datums(one_dim(1, F3), "zinbiel")


def test_printed_flag_list_differs_over_f2():
    assert set(FLAG_ERRATA) <= {c.name for c in flag_conditions("prepoisson")}
    A = abelian(2, F2)
    corrected_hits = printed_only = 0
    for fd in enumerate_flag_datums(A, "prepoisson", source="axiomatic")[::7]:
        assert verify_flag_datum("prepoisson", A, fd).passed
        corrected_hits += 1
        printed_only += not verify_flag_datum("prepoisson", A, fd, printed=True).passed
    assert corrected_hits > 100 and printed_only > 0


def test_bucketing_is_a_partition():
    A = two_dim_family(1, 1, 1, F3)
    found = enumerate_flag_datums(A, "zinbiel")
    sample = found[:40]
    groups = bucket_flag_datums(A, sample)
    assert sorted(i for g in groups for i in g) == list(range(len(sample)))
    rel = np.zeros((len(sample), len(sample)), dtype=bool)
    for i, j in itertools.product(range(len(sample)), repeat=2):
        rel[i, j] = flag_equivalent(A, sample[i], sample[j]) is not None
    assert rel.diagonal().all()
    assert (rel == rel.T).all()
    # transitivity: the relation equals "same bucket"
    label = {i: gi for gi, g in enumerate(groups) for i in g}
    for i, j in itertools.product(range(len(sample)), repeat=2):
        assert rel[i, j] == (label[i] == label[j])


def test_equivalent_flags_give_isomorphic_products():
    from ppk.extending import MorphismPair, check_morphism_pair
    A = two_dim_family(1, 1, 1, F3)
    found = enumerate_flag_datums(A, "prepoisson")[:30]
    checked = 0
    for fd, fd2 in itertools.combinations(found, 2):
        w = flag_equivalent(A, fd, fd2)
        if w is None:
            continue
        delta, eps = w
        pair = MorphismPair(F3.array([list(delta)]), F3.array([[eps]]))
        v = check_morphism_pair(A, flag_to_datum(fd), flag_to_datum(fd2), pair)
        assert v.equivalent and v.agreement
        checked += 1
    assert checked == 33
