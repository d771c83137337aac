import random

import pytest
from hypothesis import given, strategies as st

from oracles import (naive_census, naive_dense, naive_double_diamonds, naive_jointed_diamonds,
                     naive_pair_class, random_packing)
from sparse4cs.composition import decompose_k2222
from sparse4cs.constructions import construct_any, construct_character_4cs, construct_cyclic_4cs9
from sparse4cs.design import Configuration, CyclePacking, FourCycle
from sparse4cs.errors import NotEdgeDisjoint, PreconditionViolated, Unsupported
from sparse4cs.scanner import (ScanReport, census_pairs, classify_pair, contains_dense_sub,
                               dense_tag, find_dense_configs, find_double_diamonds,
                               find_jointed_diamonds, is_strictly_r_sparse)

a, b, c, d, e, f, g, h = range(8)


def as_sets(witnesses):
    return {frozenset(tuple(x) for x in w) for w in witnesses}


def packing(cycles, v=None):
    cyc = [FourCycle(x) for x in cycles]
    return CyclePacking(v or max(max(x) for x in cyc) + 1, tuple(cyc))


def test_double_diamond_examples():
    assert len(find_double_diamonds(packing([(a, b, c, d), (a, e, c, f)]))) == 1
    assert find_double_diamonds(construct_cyclic_4cs9()) == []
    # (0,1,2,3) has diagonal {1,3}; so does (1,4,3,5)
    assert len(find_double_diamonds(packing([(0, 1, 2, 3), (1, 4, 3, 5)]))) == 1


def test_jointed_diamond_examples():
    jd = [(a, b, c, d), (a, e, b, g), (c, f, d, g)]
    found = find_jointed_diamonds(packing(jd))
    assert len(found) == 1 and found[0][0] == FourCycle((a, b, c, d))
    assert find_jointed_diamonds(packing([(a, b, c, d), (a, e, b, g), (c, f, d, h)])) == []
    assert find_jointed_diamonds(construct_character_4cs(17)) == []


def test_dense_examples():
    six3 = packing([(a, b, c, d), (a, e, c, f), (b, e, f, d)])
    assert len(find_dense_configs(six3, 4)[3]) == 1
    seven4 = packing([(a, b, c, d), (a, e, b, f), (c, f, d, g), (a, c, e, g)])
    dense = find_dense_configs(seven4, 4)
    assert len(dense[4]) == 1 and dense[3] == [] and dense[2] == []
    assert len(find_jointed_diamonds(seven4)) >= 1
    assert all(len(w) == 0 for w in find_dense_configs(construct_cyclic_4cs9(), 4).values())


def test_cyclic_nine_at_r6():
    dense = find_dense_configs(construct_cyclic_4cs9(), 6)
    assert [len(dense[j]) for j in range(2, 7)] == [0, 0, 0, 9, 84]
    assert is_strictly_r_sparse(construct_cyclic_4cs9(), 6, ).r_max == 4


def test_classify_pair():
    assert classify_pair((a, b, c, d), (a, e, c, f)) == "DoubleDiamond"
    assert classify_pair((a, b, c, d), (e, f, g, h)) == "EightTwo"
    assert classify_pair((a, b, c, d), (a, e, f, g)) == "SevenTwo"
    assert classify_pair((a, b, c, d), (a, e, b, f)) == "SixTwoOther"
    with pytest.raises(NotEdgeDisjoint):
        classify_pair((a, b, c, d), (a, b, e, f))
    with pytest.raises(NotEdgeDisjoint):
        classify_pair((a, b, c, d), (a, b, c, d))


def test_census():
    s9 = construct_cyclic_4cs9()
    assert census_pairs(s9)["DoubleDiamond"] == 0
    assert census_pairs(s9) == naive_census(s9.cycles)
    assert census_pairs(CyclePacking(5, ())) == dict.fromkeys(
        ("DoubleDiamond", "SixTwoOther", "SevenTwo", "EightTwo"), 0)
    s17 = construct_character_4cs(17)
    assert census_pairs(s17) == naive_census(s17.cycles)
    assert census_pairs(s17)["SixTwoOther"] == 68


def test_contains_dense_sub():
    # K_{2,2,2,2} is K_8 minus a perfect matching: six cycles on eight points
    eight6 = Configuration(decompose_k2222((0, 1, 2, 3), label=lambda x, s: 2 * x + s))
    assert (eight6.vertex_count, eight6.cycle_count) == (8, 6)
    assert contains_dense_sub(eight6, 5)
    seven4 = Configuration([(a, b, c, d), (a, e, b, f), (c, f, d, g), (a, c, e, g)])
    with pytest.raises(PreconditionViolated):
        contains_dense_sub(seven4, 4)
    with pytest.raises(PreconditionViolated):
        contains_dense_sub(seven4, 3)
    with pytest.raises(PreconditionViolated):
        contains_dense_sub(Configuration([]), 2)


def test_report_round_trip_and_limits():
    rep = is_strictly_r_sparse(packing([(a, b, c, d), (a, e, c, f)]), 4)
    assert not rep.strict and not rep
    assert rep.count("DoubleDiamond") == 1
    back = ScanReport.from_dict(rep.to_dict())
    assert back.to_dict() == rep.to_dict()
    with pytest.raises(Unsupported):
        is_strictly_r_sparse(construct_cyclic_4cs9(), 7)
    with pytest.raises(Unsupported):
        is_strictly_r_sparse(construct_cyclic_4cs9(), 5, max_r=4)
    with pytest.raises(ValueError):
        is_strictly_r_sparse(construct_cyclic_4cs9(), 1)


def test_witness_cap_keeps_counts_exact():
    cyc = [(a, b, c, d)] + [(a, 10 + 2 * i, c, 11 + 2 * i) for i in range(5)]
    rep = is_strictly_r_sparse(packing(cyc), 2, witness_cap=3)
    assert rep.count("DoubleDiamond") == 15
    assert len(rep.classes["DoubleDiamond"].witnesses) == 3


def test_fast_path_agrees_with_exhaustive():
    for s in (construct_cyclic_4cs9(), construct_character_4cs(41), construct_any(33)):
        fast = is_strictly_r_sparse(s, 4)
        full = is_strictly_r_sparse(s, 4, exhaustive=True)
        assert fast.method == "fast-path" and full.method == "exhaustive"
        assert fast.strictly_sparse == full.strictly_sparse is True


def _check_against_oracle(cycles, r):
    p = packing(cycles, 13)
    assert as_sets(find_double_diamonds(p)) == naive_double_diamonds(cycles)
    assert as_sets(find_jointed_diamonds(p)) == naive_jointed_diamonds(cycles)
    dense = find_dense_configs(p, r)
    for j in range(2, r + 1):
        assert as_sets(dense[j]) == naive_dense(cycles, j), j
    assert census_pairs(p) == naive_census(cycles)


@pytest.mark.parametrize("seed", range(12))
def test_oracle_equivalence_r6(seed):
    rng = random.Random(seed)
    cycles = random_packing(rng, rng.choice([7, 8, 9, 10]), rng.randint(4, 14))
    _check_against_oracle(cycles, 6)


@given(st.integers(0, 10**6), st.integers(7, 13), st.integers(2, 25))
def test_oracle_equivalence_property(seed, v, m):
    cycles = random_packing(random.Random(seed), v, m)
    _check_against_oracle(cycles, 4)


@given(st.integers(0, 10**6), st.integers(7, 12), st.integers(2, 14))
def test_witness_soundness_and_monotone_r(seed, v, m):
    cycles = random_packing(random.Random(seed), v, m)
    p = packing(cycles, 13)
    rep = is_strictly_r_sparse(p, 6, witness_cap=10**6)
    for j in range(2, 7):
        for w in rep.classes[dense_tag(j)].witnesses:
            assert len(w) == j and len(set().union(*map(set, w))) == j + 3
    for w in rep.classes["DoubleDiamond"].witnesses:
        assert naive_pair_class(*w) == "DoubleDiamond"
    assert rep.count("Dense(5,2)") == 0
    for r in range(2, 7):
        sub = is_strictly_r_sparse(p, r, exhaustive=True)
        assert sub.r_max == min(rep.r_max, r)
        if sub.r_max >= r:
            assert is_strictly_r_sparse(p, r - 1, exhaustive=True).r_max >= r - 1 if r > 2 else True


def test_system_with_double_diamond_not_strict():
    s = list(construct_cyclic_4cs9().cycles)
    # swap two cycles for a pair sharing the diagonal {0, 8}
    bad = packing(s + [(0, 9, 8, 10), (0, 11, 8, 12)], 13)
    rep = is_strictly_r_sparse(bad)
    assert not rep.strict and not rep.strictly_sparse


def test_parallel_scan_matches_serial(monkeypatch):
    import sparse4cs.scanner as sc
    monkeypatch.setattr(sc, "_PARALLEL_MIN_SEEDS", 1)
    s = construct_cyclic_4cs9()
    serial = find_dense_configs(s, 6)
    assert find_dense_configs(s, 6, threads=3) == serial
    rep = is_strictly_r_sparse(s, 6, threads=2, witness_cap=10**6)
    assert rep.classes[dense_tag(6)].witnesses == serial[6]
