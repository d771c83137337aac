import pytest
from hypothesis import given, strategies as st

from oracles import canon, diagonals, edges, images
from sparse4cs.design import (Configuration, CyclePacking, FourCycle, FourCycleSystem, as_system,
                              dihedral_images, format_packing, parse_packing, read_packing,
                              validate_packing, validate_system, write_packing)
from sparse4cs.errors import DuplicateVertex, ParseError

quads = st.lists(st.integers(0, 40), min_size=4, max_size=4, unique=True)


@given(quads, st.integers(0, 7))
def test_canonical_form_is_dihedral_invariant(q, k):
    c = FourCycle(q)
    assert FourCycle(images(q)[k]) == c
    assert tuple(c) == canon(q)
    assert set(dihedral_images(tuple(q))) == set(images(q))


@given(quads)
def test_edges_and_diagonals(q):
    c = FourCycle(q)
    assert {frozenset(e) for e in c.edges} == edges(q)
    assert {frozenset(d) for d in c.diagonals} == diagonals(q)
    assert c.vertex_set == frozenset(q)


def test_canonical_examples():
    assert FourCycle((5, 3, 9, 1)) == (1, 5, 3, 9)
    assert FourCycle((0, 9, 2, 3)) == (0, 3, 2, 9)
    assert FourCycle((2, 1, 0, 3)).relabel({0: 10, 1: 11, 2: 12, 3: 13}) == (10, 11, 12, 13)
    with pytest.raises(DuplicateVertex):
        FourCycle((1, 2, 1, 3))
    with pytest.raises(ValueError):
        FourCycle((1, 2, 3))


def test_validation():
    good = CyclePacking(6, ((0, 1, 2, 3), (0, 4, 1, 5)))
    assert validate_packing(good)
    bad = CyclePacking(6, ((0, 1, 2, 3), (0, 1, 4, 5)))
    rep = validate_packing(bad)
    assert not rep and "edge (0, 1)" in rep.message
    assert not validate_packing(CyclePacking(4, ((0, 1, 2, 7),)))
    assert not validate_system(CyclePacking(6, ((0, 1, 2, 3),)))
    assert not validate_system(CyclePacking(9, ((0, 1, 2, 3),)))


def test_system_needs_full_cover():
    # 9 cycles but two of them overlap: 9 * 4 edges cannot cover K_9 without repeats
    cyc = [FourCycle(((0 + a) % 9, (1 + a) % 9, (8 + a) % 9, (5 + a) % 9)) for a in range(9)]
    assert validate_system(FourCycleSystem(9, tuple(cyc)))
    cyc[0] = FourCycle((0, 2, 1, 3))
    assert not validate_system(FourCycleSystem(9, tuple(cyc)))


def test_configuration():
    c = Configuration([(0, 1, 2, 3), (0, 4, 1, 5)])
    assert c.vertex_count == 6 and c.cycle_count == 2
    assert c == Configuration([(1, 5, 0, 4), (3, 2, 1, 0)])


def test_text_round_trip(tmp_path):
    s = FourCycleSystem(9, tuple((a, (a + 1) % 9, (a + 8) % 9, (a + 5) % 9) for a in range(9)),
                        {"route": "cyclic"})
    text = format_packing(s)
    assert text.splitlines()[0] == "4CS v=9 cycles=9"
    assert "# route: cyclic" in text
    back = parse_packing(text)
    assert isinstance(back, FourCycleSystem) and back == s and back.meta == {"route": "cyclic"}
    write_packing(s, tmp_path / "s.txt")
    assert read_packing(tmp_path / "s.txt") == s
    assert format_packing(as_system(CyclePacking(9, s.cycles))) == format_packing(FourCycleSystem(9, s.cycles))


@pytest.mark.parametrize("text", [
    "",
    "4CX v=9 cycles=0\n",
    "4CP v=9 cycles=2\n0 1 2 3\n",
    "4CP v=9 cycles=2\n0 1 2 3\n3 2 1 0\n",
    "4CP v=9 cycles=1\n0 1 2\n",
    "4CP v=9 cycles=1\n0 1 2 2\n",
    "4CP v=nine cycles=1\n0 1 2 3\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_packing(text)


@given(st.lists(quads, max_size=12))
def test_parse_format_round_trip(qs):
    p = CyclePacking(41, tuple(FourCycle(q) for q in qs))
    assert parse_packing(format_packing(p)) == p
