"""Direct constructions of strictly 4-sparse 4-cycle systems.

* the character construction on GF(q), q = 1 (mod 8) and not a power of 3:
  develop the base cycle (0, x, x-1, x^2) under z -> z*alpha^(4n) + y;
* the cyclic 4CS(9) developed from (0, 1, 8, 5) modulo 9;
* :func:`construct_any`, which dispatches every admissible order to one of
  the above or to a recursive composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .design import FourCycle, FourCycleSystem, validate_system
from .errors import BadOrder, NoWitness, NotAdmissible, ValidationFailed
from .field import FieldSpec, make_field_of_order, prime_power


@dataclass(frozen=True)
class CharacterBase:
    q: int
    x: int
    base_cycle: tuple[int, int, int, int]


def _check_character_order(q: int) -> None:
    pk = prime_power(q)
    if pk is None or q % 8 != 1:
        raise BadOrder(f"q={q} is not a prime power congruent to 1 mod 8")
    if pk[0] == 3:
        raise BadOrder(f"q={q} is a power of 3")


def base_x_candidates(f: FieldSpec) -> Iterator[CharacterBase]:
    """Every x in GF(q), in element order, satisfying the three character conditions.

    With ind = log_alpha the conditions chi(x^2) = -1, chi((x^2-x+1)^2) = -1
    and chi(x(x^2-x+1)) = 1 read: ind(x) odd, ind(x^2-x+1) odd and
    ind(x) + ind(x^2-x+1) = 0 (mod 4).
    """
    _check_character_order(f.q)
    one = 1
    for x in range(2, f.q):
        x2 = f.mul(x, x)
        w = f.add(f.sub(x2, x), one)
        if w == 0:
            continue
        lx, lw = f.log(x), f.log(w)
        if lx % 2 == 1 and lw % 2 == 1 and (lx + lw) % 4 == 0:
            xm1 = f.sub(x, one)
            if x2 in (0, x, xm1):
                continue
            yield CharacterBase(f.q, x, (0, x, xm1, x2))


def find_base_x(f: FieldSpec) -> CharacterBase:
    for base in base_x_candidates(f):
        return base
    raise NoWitness(f"no base element found in GF({f.q})")


def construct_character_4cs(q: int, x: int | None = None) -> FourCycleSystem:
    """The 4CS(q) developed from (0, x, x-1, x^2) by z -> z*alpha^(4n) + y.

    ``x`` defaults to the first valid base element; any other valid one may
    be passed to obtain a different system of the same order.
    """
    _check_character_order(q)
    f = make_field_of_order(q)
    if x is None:
        base = find_base_x(f)
    else:
        base = next((b for b in base_x_candidates(f) if b.x == x), None)
        if base is None:
            raise NoWitness(f"x={x} does not satisfy the character conditions in GF({q})")
    cycles = []
    for n in range((q - 1) // 8):
        m = f.alpha_power(4 * n)
        scaled = [f.mul(c, m) for c in base.base_cycle]
        for y in range(q):
            cycles.append(FourCycle(f.add(s, y) for s in scaled))
    meta = {
        "route": "character",
        "q": str(q),
        "modulus": " ".join(map(str, f.modulus)),
        "alpha": str(f.alpha),
        "x": str(base.x),
        "labels": "field element c0 + c1*p + ... (constant term first)",
    }
    s = FourCycleSystem(q, tuple(cycles), meta)
    _require_system(s)
    return s


def construct_cyclic_4cs9() -> FourCycleSystem:
    cycles = [FourCycle(((0 + a) % 9, (1 + a) % 9, (8 + a) % 9, (5 + a) % 9)) for a in range(9)]
    s = FourCycleSystem(9, tuple(cycles), {"route": "cyclic", "base": "0 1 8 5 mod 9"})
    _require_system(s)
    return s


def _require_system(s: FourCycleSystem) -> None:
    rep = validate_system(s)
    if not rep:
        raise ValidationFailed(rep.message)


def character_applies(v: int) -> bool:
    pk = prime_power(v)
    return pk is not None and v % 8 == 1 and pk[0] != 3


def construct_any(v: int, *, route: str = "auto", gdd=None, search_budget: int = 0,
                  certify_limit: int = 500) -> FourCycleSystem:
    """A strictly 4-sparse 4CS(v) for any admissible v.

    ``route`` is ``"auto"``, ``"cyclic"``, ``"character"`` or ``"composition"``.
    ``gdd`` overrides the GDD the composition would otherwise look up.
    """
    if v % 8 != 1 or v < 1:
        raise NotAdmissible(f"v={v} is not congruent to 1 mod 8")
    if v == 1:
        return FourCycleSystem(1, (), {"route": "trivial"})
    if route == "auto":
        if v == 9:
            route = "cyclic"
        elif character_applies(v):
            route = "character"
        else:
            route = "composition"
    if route == "cyclic":
        if v != 9:
            raise BadOrder("the cyclic construction only gives order 9")
        return construct_cyclic_4cs9()
    if route == "character":
        return construct_character_4cs(v)
    if route == "composition":
        from .composition import compose_for_order

        return compose_for_order(v, gdd=gdd, search_budget=search_budget,
                                 certify_limit=certify_limit)
    raise ValueError(f"unknown route {route!r}")
