import itertools
from collections import Counter

import pytest

from oracles import gdd_ok
from sparse4cs.errors import (BudgetExhausted, GddUnavailable, Infeasible, ParseError, Unsupported,
                              ValidationFailed)
from sparse4cs.gdd import (GroupDivisibleDesign, construct_ag24_gdd, construct_td4, cross_pair_count,
                           fixture_name, fixtures_dir, format_gdd, format_type, inflate_gdd, load_fixture,
                           load_gdd, parse_gdd, parse_type, provide_gdd, search_gdd, steiner_system,
                           store_gdd, td4_supported, validate_gdd)


def oracle(g):
    return gdd_ok(g.n, [list(x) for x in g.groups], [list(b) for b in g.blocks])


def test_type_strings():
    assert parse_type("2^9,5^1") == [2] * 9 + [5]
    assert parse_type("4 4 4 4") == [4] * 4
    assert format_type([5, 2, 2]) == "2^2,5^1"
    assert format_type(Counter({12: 6})) == "12^6"
    assert cross_pair_count([2] * 9 + [5]) == 234
    with pytest.raises(ParseError):
        parse_type("2^x")


def test_ag24():
    g = construct_ag24_gdd()
    assert (g.n, len(g.groups), len(g.blocks)) == (16, 4, 16)
    assert g.type_string == "4^4" and validate_gdd(g) and oracle(g)
    assert all(len(set(b1) & set(b2)) <= 1 for b1, b2 in itertools.combinations(g.blocks, 2))
    assert Counter(x for b in g.blocks for x in b) == Counter({x: 4 for x in range(16)})


@pytest.mark.parametrize("n", [3, 4, 5, 7, 8, 9, 12, 15, 16, 20])
def test_td4(n):
    g = construct_td4(n)
    assert g.type_string == f"{n}^4" and len(g.blocks) == n * n
    assert validate_gdd(g) and oracle(g)


def test_td4_unsupported():
    assert not td4_supported(6) and not td4_supported(2) and td4_supported(12)
    with pytest.raises(Unsupported):
        construct_td4(6)
    with pytest.raises(Unsupported):
        construct_td4(2)


def test_steiner_and_inflation():
    for u in (4, 13, 16):
        s = steiner_system(u)
        assert s.type_string == f"1^{u}" and oracle(s)
    assert steiner_system(25) is None
    g = inflate_gdd(steiner_system(13), construct_td4(4))
    assert g.type_string == "4^13" and oracle(g)
    assert len(g.blocks) == 13 * 16


def test_validation_failures():
    ag = construct_ag24_gdd()
    assert validate_gdd(GroupDivisibleDesign(5, ((0, 1, 2, 3, 4),), ()))
    blocks = list(ag.blocks)
    blocks[0] = blocks[1]
    assert not validate_gdd(GroupDivisibleDesign(16, ag.groups, tuple(blocks)))
    assert not validate_gdd(GroupDivisibleDesign(16, ag.groups, ag.blocks[1:]))
    inside = GroupDivisibleDesign(16, ag.groups, ag.blocks[1:] + ((0, 1, 2, 3),))
    assert not validate_gdd(inside)
    overlap = GroupDivisibleDesign(4, ((0, 1), (1, 2, 3)), ())
    assert not validate_gdd(overlap)


def test_search_small_types():
    for sig, nblocks in [("4^4", 16), ("2^7", 14), ("1^13", 13), ("2^1", 0), ("3^5", 15)]:
        g = search_gdd(sig, seed=0, budget=50_000)
        assert len(g.blocks) == nblocks and oracle(g)
        assert g.type_string == format_type(sig)
    with pytest.raises(Infeasible):
        search_gdd("2^4", seed=0)
    with pytest.raises(Infeasible):
        search_gdd("4^6", seed=0)


def test_search_2_9_5_1():
    g = search_gdd("2^9,5^1", seed=0, budget=30_000)
    assert g.n == 23 and len(g.blocks) == 39 and oracle(g)


def test_search_budget_is_enforced():
    with pytest.raises(BudgetExhausted):
        search_gdd("4^7", seed=0, budget=10, symmetry=None)


def test_search_is_deterministic():
    a = search_gdd("1^13", seed=4, budget=10_000, symmetry=None)
    b = search_gdd("1^13", seed=4, budget=10_000, symmetry=None)
    assert a == b


def test_file_round_trip(tmp_path):
    ag = construct_ag24_gdd()
    store_gdd(ag, tmp_path / "ag.gdd", ["demo"])
    text = (tmp_path / "ag.gdd").read_text()
    assert text.startswith("GDD n=16 type=4^4\n# demo\n")
    assert load_gdd(tmp_path / "ag.gdd") == ag
    assert format_gdd(parse_gdd(text), ["demo"]) == text


def test_bad_files():
    with pytest.raises(ValidationFailed):
        parse_gdd("GDD n=4 type=2^2\ngroup: 0 1\ngroup: 1 2\n")
    with pytest.raises(ValidationFailed):
        parse_gdd("GDD n=8 type=4^2\ngroup: 0 1 2 3\ngroup: 4 5 6 7\nblock: 0 1 4 5\n")
    with pytest.raises(ValidationFailed):
        parse_gdd("GDD n=4 type=2^2\ngroup: 0 1 2 3\n")
    with pytest.raises(ParseError):
        parse_gdd("group: 0 1\n")
    with pytest.raises(ParseError):
        parse_gdd("GDD n=2 type=2^1\nline: 0 1\n")


@pytest.mark.parametrize("path", sorted(fixtures_dir().glob("*.gdd")), ids=lambda p: p.name)
def test_fixtures_valid_and_byte_identical(path, tmp_path):
    text = path.read_text()
    g = parse_gdd(text)
    assert oracle(g)
    assert fixture_name(g.type_signature) == path.name
    comments = [ln[2:] for ln in text.splitlines() if ln.startswith("# ")]
    store_gdd(g, tmp_path / path.name, comments)
    assert (tmp_path / path.name).read_bytes() == path.read_bytes()


def test_provider(monkeypatch, tmp_path):
    assert provide_gdd("4^4")[1] == "AG(2,4)"
    assert provide_gdd("8^4")[1] == "TD(4,8)"
    g, src = provide_gdd("2^9,5^1")
    assert src.startswith("fixture") and len(g.blocks) == 39
    g, src = provide_gdd("4^13")
    assert "inflated" in src and oracle(g)
    monkeypatch.setenv("SPARSE4CS_FIXTURES", str(tmp_path))
    assert load_fixture("2^9,5^1") is None
    with pytest.raises(GddUnavailable):
        provide_gdd("2^9,5^1")
    g, src = provide_gdd("2^9,5^1", search_budget=30_000)
    assert src.startswith("search") and oracle(g)
