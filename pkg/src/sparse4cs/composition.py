"""Recursive constructions: a 4-GDD plus small strictly 4-sparse systems.

Doubling (cases 1-3): for a 4-GDD on points V, take W = (V x {0,1}) + {inf}.
Every group G carries a copy of a 4CS(2|G|+1) on (G x {0,1}) + {inf}, and
every block carries the six-cycle decomposition of K_{2,2,2,2} on B x {0,1}.
Point (x, s) gets label 2x + s and inf gets label 2|V|.

Quadrupling (case 4): every block of a 4-GDD of type 2^(3t) 5^1 is first
replaced by an AG(2,4) on B x {0,...,3}, giving a 4-GDD of type
8^(3t) 20^1 on points 4x + i, which is then doubled with a 4CS(17) and a
4CS(41) as ingredients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

from .constructions import construct_any, construct_character_4cs, construct_cyclic_4cs9
from .design import CyclePacking, FourCycle, FourCycleSystem, validate_system
from .errors import (DuplicatePoint, GddUnavailable, IngredientMismatch, NotAdmissible,
                     ValidationFailed, WrongType)
from .gdd import (GroupDivisibleDesign, construct_ag24_gdd, inflate_gdd,
                  provide_gdd, validate_gdd)
from .scanner import is_strictly_r_sparse


@dataclass
class CompositionPlan:
    case_id: int
    gdd: GroupDivisibleDesign
    ingredient_orders: dict[int, int]
    gdd_source: str = ""
    labeling: str = "(x, s) -> 2x + s, inf -> 2n"
    notes: dict[str, str] = field(default_factory=dict)


def decompose_k2222(block: Sequence[Hashable],
                    label: Callable[[Hashable, int], Hashable] | None = None) -> list[FourCycle]:
    """Six 4-cycles partitioning K_{2,2,2,2} on block x {0,1}.

    With block = (a, b, c, d) this is the orbit of ((a,0), (b,0), (c,1), (d,0))
    under rho = (a b c)(d) on the first coordinate and the swap of the second
    coordinate.  Vertices are (point, bit) pairs unless ``label`` maps them.
    """
    a, b, c, d = block
    if len({a, b, c, d}) != 4:
        raise DuplicatePoint(f"block {block!r} repeats a point")
    label = label or (lambda x, s: (x, s))
    rho = {a: b, b: c, c: a, d: d}
    base = [(a, 0), (b, 0), (c, 1), (d, 0)]
    out = []
    cyc = base
    for _ in range(3):
        for flip in (0, 1):
            out.append(FourCycle(label(x, s ^ flip) for x, s in cyc))
        cyc = [(rho[x], s) for x, s in cyc]
    return out


def _ingredient_map(group: Sequence[int], inf: int) -> dict[int, int]:
    """Order-preserving map of an ingredient on [0, 2m] onto (G x {0,1}) + {inf}."""
    g = sorted(group)
    m = {ell: 2 * g[ell // 2] + ell % 2 for ell in range(2 * len(g))}
    m[2 * len(g)] = inf
    return m


def _certify(s: FourCycleSystem, certify_limit: int) -> FourCycleSystem:
    rep = validate_system(s)
    if not rep:
        raise ValidationFailed(rep.message)
    if s.v <= certify_limit:
        scan = is_strictly_r_sparse(s, 4, exhaustive=True)
        if not scan.strictly_sparse:
            counts = {k: c.count for k, c in scan.classes.items() if c.count}
            raise ValidationFailed(f"composed 4CS({s.v}) is not strictly 4-sparse: {counts}")
    return s


def double_plus_one(gdd: GroupDivisibleDesign, ingredients: Mapping[int, CyclePacking], *,
                    certify_limit: int = 500, meta: Mapping[str, str] | None = None) -> FourCycleSystem:
    """A 4CS(2n+1) from a 4-GDD on n points; ``ingredients`` maps group size g to a 4CS(2g+1)."""
    rep = validate_gdd(gdd)
    if not rep:
        raise ValidationFailed(rep.message)
    for g in sorted(set(len(grp) for grp in gdd.groups)):
        ing = ingredients.get(g)
        if ing is None:
            raise IngredientMismatch(f"no ingredient for groups of size {g}")
        if ing.v != 2 * g + 1:
            raise IngredientMismatch(f"groups of size {g} need a 4CS({2 * g + 1}), got order {ing.v}")
    n = gdd.n
    inf = 2 * n
    cycles: list[FourCycle] = []
    for grp in gdd.groups:
        mapping = _ingredient_map(grp, inf)
        cycles.extend(c.relabel(mapping) for c in ingredients[len(grp)].cycles)
    for blk in gdd.blocks:
        cycles.extend(decompose_k2222(sorted(blk), label=lambda x, s: 2 * x + s))
    info = {
        "route": "composition",
        "gdd_type": gdd.type_string,
        "ingredients": " ".join(f"{g}->{ingredients[g].v}" for g in sorted(ingredients)
                                if any(len(grp) == g for grp in gdd.groups)),
        "labels": "(x, s) -> 2x + s, inf -> 2n",
    }
    info.update(meta or {})
    return _certify(FourCycleSystem(inf + 1, tuple(cycles), info), certify_limit)


def _case4_type(gdd: GroupDivisibleDesign) -> int:
    sig = gdd.type_signature
    twos = sig.get(2, 0)
    if set(sig) != {2, 5} or sig[5] != 1 or twos % 3 or twos < 9:
        raise WrongType(f"case 4 needs a 4-GDD of type 2^(3t)5^1 with t >= 3, got {gdd.type_string}")
    return twos // 3


def quadruple_case4(gdd: GroupDivisibleDesign, ing17: CyclePacking, ing41: CyclePacking, *,
                    certify_limit: int = 500, meta: Mapping[str, str] | None = None) -> FourCycleSystem:
    """A 4CS(48t+41) from a 4-GDD of type 2^(3t)5^1.

    Labels: (x, i, s) -> 8x + 2i + s for x a GDD point, i in 0..3, s in {0,1};
    inf -> 8n.
    """
    t = _case4_type(gdd)
    if ing17.v != 17:
        raise IngredientMismatch(f"groups of size 2 need a 4CS(17), got order {ing17.v}")
    if ing41.v != 41:
        raise IngredientMismatch(f"the group of size 5 needs a 4CS(41), got order {ing41.v}")
    inner = inflate_gdd(gdd, construct_ag24_gdd())
    info = {"case": "4", "t": str(t), "outer_gdd_type": gdd.type_string,
            "labels": "(x, i, s) -> 8x + 2i + s, inf -> 8n"}
    info.update(meta or {})
    return double_plus_one(inner, {8: ing17, 20: ing41}, certify_limit=certify_limit, meta=info)


def plan_for_order(v: int) -> tuple[int, str, dict[int, int]]:
    """(case id, GDD type, group size -> ingredient order) for a composed 4CS(v)."""
    if v % 8 != 1:
        raise NotAdmissible(f"v={v} is not congruent to 1 mod 8")
    if v % 24 == 1:
        t = (v - 1) // 24
        if t < 4:
            raise GddUnavailable(f"case 1 needs a 4-GDD of type 12^t with t >= 4 (v={v})")
        return 1, f"12^{t}", {12: 25}
    if v % 24 == 9:
        t = (v - 9) // 24
        if t < 1:
            raise GddUnavailable("case 2 needs t >= 1")
        return 2, f"4^{3 * t + 1}", {4: 9}
    if v % 48 == 17:
        t = (v - 17) // 48
        if t < 1:
            raise GddUnavailable("case 3 needs t >= 1")
        return 3, f"8^{3 * t + 1}", {8: 17}
    t = (v - 41) // 48
    if t < 3:
        raise GddUnavailable(f"case 4 needs a 4-GDD of type 2^(3t)5^1 with t >= 3 (v={v})")
    return 4, f"2^{3 * t},5^1", {2: 17, 5: 41}


_BASE_INGREDIENTS = {
    9: construct_cyclic_4cs9,
    17: lambda: construct_character_4cs(17),
    25: lambda: construct_character_4cs(25),
    41: lambda: construct_character_4cs(41),
}


def _ingredient(order: int) -> FourCycleSystem:
    make = _BASE_INGREDIENTS.get(order)
    return make() if make else construct_any(order)


def compose_for_order(v: int, *, gdd: GroupDivisibleDesign | None = None, search_budget: int = 0,
                      certify_limit: int = 500) -> FourCycleSystem:
    """Strictly 4-sparse 4CS(v) by the composition case matching v.

    A supplied ``gdd`` replaces the one the case would look up.  A GDD of
    type 2^(3t)5^1 goes through case 4; any other GDD on (v-1)/2 points is
    doubled with ingredients 4CS(2g+1) built recursively.
    """
    if gdd is not None:
        sig = gdd.type_signature
        if set(sig) == {2, 5}:
            if 8 * gdd.n + 1 != v:
                raise WrongType(f"a {gdd.type_string} GDD gives order {8 * gdd.n + 1}, not {v}")
            return quadruple_case4(gdd, _ingredient(17), _ingredient(41), certify_limit=certify_limit,
                                   meta={"gdd_source": "supplied"})
        if 2 * gdd.n + 1 != v:
            raise WrongType(f"a GDD on {gdd.n} points gives order {2 * gdd.n + 1}, not {v}")
        ings = {g: _ingredient(2 * g + 1) for g in sig}
        return double_plus_one(gdd, ings, certify_limit=certify_limit,
                               meta={"case": "supplied GDD", "gdd_source": "supplied"})

    case, sig, orders = plan_for_order(v)
    g, source = provide_gdd(sig, search_budget=search_budget)
    meta = {"case": str(case), "gdd_source": source}
    if case == 4:
        return quadruple_case4(g, _ingredient(17), _ingredient(41), certify_limit=certify_limit, meta=meta)
    ings = {size: _ingredient(order) for size, order in orders.items()}
    return double_plus_one(g, ings, certify_limit=certify_limit, meta=meta)


def expected_cycle_count(gdd: GroupDivisibleDesign) -> int:
    """sum_G (2|G|+1)(2|G|)/8 + 6 * |blocks| for a doubled GDD."""
    return sum((2 * len(g) + 1) * (2 * len(g)) // 8 for g in gdd.groups) + 6 * len(gdd.blocks)
