"""4-GDDs: validation, direct constructions, exact-cover search and files.

Points are dense labels 0..n-1.  Blocks are stored as sorted 4-tuples and
groups as sorted tuples ordered by their smallest point, so two designs with
the same groups and blocks compare equal and serialise identically.
"""

from __future__ import annotations

import itertools
import os
import random
import re
from collections import Counter
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .design import ValidationReport
from .errors import (BudgetExhausted, GddUnavailable, Infeasible, ParseError,
                     Unsupported, ValidationFailed)
from .field import make_field, prime_factors, prime_power

FIXTURES_ENV = "SPARSE4CS_FIXTURES"


@dataclass(frozen=True)
class GroupDivisibleDesign:
    n: int
    groups: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        groups = sorted((tuple(sorted(g)) for g in self.groups), key=lambda g: (g[0] if g else -1, g))
        object.__setattr__(self, "groups", tuple(groups))
        object.__setattr__(self, "blocks", tuple(sorted(tuple(sorted(b)) for b in self.blocks)))

    @property
    def type_signature(self) -> Counter:
        return Counter(len(g) for g in self.groups)

    @property
    def type_string(self) -> str:
        return format_type(self.type_signature)

    def group_of(self) -> dict[int, int]:
        return {x: i for i, g in enumerate(self.groups) for x in g}


def parse_type(sig) -> list[int]:
    """Group sizes from ``"2^9,5^1"``, ``"4 4 4 4"``, a Counter or a list of sizes."""
    if isinstance(sig, Counter) or isinstance(sig, dict):
        return sorted(s for s, t in sig.items() for _ in range(t))
    if isinstance(sig, str):
        sizes = []
        for part in re.split(r"[,\s]+", sig.strip()):
            if not part:
                continue
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", part)
            if not m:
                raise ParseError(f"bad type component {part!r}")
            sizes += [int(m.group(1))] * int(m.group(2) or 1)
        return sorted(sizes)
    return sorted(int(s) for s in sig)


def format_type(sig) -> str:
    counts = Counter(parse_type(sig)) if not isinstance(sig, Counter) else sig
    return ",".join(f"{s}^{t}" for s, t in sorted(counts.items()))


def cross_pair_count(sizes: Sequence[int]) -> int:
    n = sum(sizes)
    return comb(n, 2) - sum(comb(g, 2) for g in sizes)


def validate_gdd(g: GroupDivisibleDesign) -> ValidationReport:
    where: dict[int, int] = {}
    for gi, grp in enumerate(g.groups):
        if not grp:
            return ValidationReport(False, "empty group", (gi,))
        for x in grp:
            if not 0 <= x < g.n:
                return ValidationReport(False, f"point {x} out of range", (x,))
            if x in where:
                return ValidationReport(False, f"point {x} lies in two groups", (x, where[x], gi))
            where[x] = gi
    if len(where) != g.n:
        missing = next(x for x in range(g.n) if x not in where)
        return ValidationReport(False, f"point {missing} lies in no group", (missing,))
    covered: dict[tuple[int, int], tuple] = {}
    for b in g.blocks:
        if len(b) != 4 or len(set(b)) != 4:
            return ValidationReport(False, f"block {b} is not a 4-set", (b,))
        gs = [where.get(x) for x in b]
        if None in gs:
            return ValidationReport(False, f"block {b} has a point outside the design", (b,))
        if len(set(gs)) != 4:
            return ValidationReport(False, f"block {b} meets a group twice", (b,))
        for e in itertools.combinations(b, 2):
            if e in covered:
                return ValidationReport(False, f"pair {e} covered twice", (e, covered[e], b))
            covered[e] = b
    want = cross_pair_count([len(grp) for grp in g.groups])
    if len(covered) != want:
        for e in itertools.combinations(range(g.n), 2):
            if where[e[0]] != where[e[1]] and e not in covered:
                return ValidationReport(False, f"cross pair {e} not covered", (e,))
    return ValidationReport(True, f"4-GDD of type {g.type_string} with {len(g.blocks)} blocks")


def _require(g: GroupDivisibleDesign) -> GroupDivisibleDesign:
    rep = validate_gdd(g)
    if not rep:
        raise ValidationFailed(rep.message)
    return g


# -- direct constructions --

def construct_ag24_gdd() -> GroupDivisibleDesign:
    """Affine plane over GF(4) with the lines x = c as groups.

    Point (x, y) gets label 4x + y, so group c is {4c, ..., 4c+3} and every
    block lists one point per group in group order.
    """
    f = make_field(2, 2)
    groups = [tuple(4 * x + y for y in range(4)) for x in range(4)]
    blocks = [tuple(4 * x + f.add(f.mul(m, x), b) for x in range(4))
              for m in range(4) for b in range(4)]
    return _require(GroupDivisibleDesign(16, tuple(groups), tuple(blocks)))


def _td4_prime_power(n: int) -> list[tuple[int, int, int, int]]:
    """Rows (x0, x1, x2, x3) of a TD(4, n), one coordinate per group."""
    pk = prime_power(n)
    f = make_field(*pk)
    rows = []
    if n >= 4:
        coef = (0, 1, 2, 3)
        for a in range(n):
            for b in range(n):
                rows.append(tuple(f.add(f.mul(c, a), b) for c in coef))
    else:
        # GF(3) has only three elements: the slope itself fills the first group.
        for a in range(n):
            for b in range(n):
                rows.append((a,) + tuple(f.add(f.mul(c, a), b) for c in range(3)))
    return rows


def _td4_rows(n: int) -> list[tuple[int, ...]]:
    if n in (2, 6):
        raise Unsupported(f"no TD(4,{n}) exists")
    if n < 2:
        raise Unsupported(f"TD(4,{n}) is degenerate")
    if prime_power(n) is not None:
        return _td4_prime_power(n)
    parts = [p ** _multiplicity(n, p) for p in prime_factors(n)]
    if any(q < 3 for q in parts):
        raise Unsupported(f"TD(4,{n}) is not reachable by a MacNeish product")
    rows = _td4_rows(parts[0])
    m = parts[0]
    for q in parts[1:]:
        other = _td4_rows(q)
        rows = [tuple(x * q + y for x, y in zip(r1, r2)) for r1 in rows for r2 in other]
        m *= q
    return rows


def _multiplicity(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _td_from_rows(n: int, rows: Iterable[Sequence[int]]) -> GroupDivisibleDesign:
    groups = [tuple(i * n + x for x in range(n)) for i in range(4)]
    blocks = [tuple(i * n + x for i, x in enumerate(r)) for r in rows]
    return GroupDivisibleDesign(4 * n, tuple(groups), tuple(blocks))


def construct_td4(n: int) -> GroupDivisibleDesign:
    """TD(4, n) as a 4-GDD of type n^4; point x of group i has label i*n + x.

    Prime powers use the rows (e0*a + b, ..., e3*a + b) over a, b in GF(n)
    with e0..e3 the field elements 0..3 (for n = 3 the first coordinate is
    the slope a instead).  Other n are MacNeish products of their prime-power
    parts.
    """
    return _require(_td_from_rows(n, _td4_rows(n)))


def td4_supported(n: int) -> bool:
    try:
        _td4_rows_check(n)
    except Unsupported:
        return False
    return True


def _td4_rows_check(n: int) -> None:
    if n < 3 or n == 6:
        raise Unsupported(n)
    if prime_power(n) is None and any(p ** _multiplicity(n, p) < 3 for p in prime_factors(n)):
        raise Unsupported(n)


def _rows_of(td: GroupDivisibleDesign) -> tuple[int, list[tuple[int, ...]]]:
    if len(td.groups) != 4 or len({len(g) for g in td.groups}) != 1:
        raise Unsupported("inflation needs a transversal design with 4 equal groups")
    w = len(td.groups[0])
    pos = {}
    for i, grp in enumerate(td.groups):
        for k, x in enumerate(grp):
            pos[x] = (i, k)
    rows = []
    for b in td.blocks:
        r = [0] * 4
        for x in b:
            i, k = pos[x]
            r[i] = k
        rows.append(tuple(r))
    return w, rows


def inflate_gdd(g: GroupDivisibleDesign, td: GroupDivisibleDesign) -> GroupDivisibleDesign:
    """Give every point weight w, placing a TD(4, w) on each block.

    Point (x, k) gets label x*w + k.  Each block's sorted points take the
    roles of the transversal design's groups in order.  The result has type
    (w*g)^t wherever g had groups of size g.
    """
    w, rows = _rows_of(td)
    groups = [tuple(x * w + k for x in grp for k in range(w)) for grp in g.groups]
    blocks = []
    for b in g.blocks:
        for r in rows:
            blocks.append(tuple(b[i] * w + r[i] for i in range(4)))
    return _require(GroupDivisibleDesign(g.n * w, tuple(groups), tuple(blocks)))


def steiner_system(u: int) -> GroupDivisibleDesign | None:
    """A few S(2,4,u), as GDDs of type 1^u, from direct constructions."""
    if u == 1:
        return GroupDivisibleDesign(1, ((0,),), ())
    if u == 4:
        return GroupDivisibleDesign(4, tuple((x,) for x in range(4)), ((0, 1, 2, 3),))
    if u == 13:
        blocks = [tuple((x + s) % 13 for x in (0, 1, 3, 9)) for s in range(13)]
        return _require(GroupDivisibleDesign(13, tuple((x,) for x in range(13)), tuple(blocks)))
    if u == 16:
        ag = construct_ag24_gdd()
        blocks = ag.blocks + ag.groups
        return _require(GroupDivisibleDesign(16, tuple((x,) for x in range(16)), blocks))
    return None


# -- exact-cover search --

def _check_feasible(sizes: Sequence[int]) -> None:
    n = sum(sizes)
    if cross_pair_count(sizes) % 6:
        raise Infeasible(f"cross-pair count {cross_pair_count(sizes)} is not divisible by 6")
    for s in set(sizes):
        if (n - s) % 3:
            raise Infeasible(f"points in groups of size {s} meet {n - s} others, not divisible by 3")
    if sorted(sizes) in ([2] * 4, [6] * 4):
        raise Infeasible(f"no 4-GDD of type {format_type(sizes)} exists")


def _exact_cover(row_cols: list[list[int]], ncols: int, rng: random.Random,
                 budget: int, what: str) -> list[int] | None:
    """Algorithm X over sets: returns chosen row indices, or None if none exist."""
    col_rows: list[set[int]] = [set() for _ in range(ncols)]
    for ri, cols in enumerate(row_cols):
        for c in cols:
            col_rows[c].add(ri)
    tiebreak = [rng.random() for _ in range(ncols)]
    alive = set(range(ncols))
    solution: list[int] = []
    nodes = 0

    def select(ri: int) -> list[int]:
        removed = []
        for c in row_cols[ri]:
            for rj in col_rows[c]:
                for c2 in row_cols[rj]:
                    if c2 != c:
                        col_rows[c2].discard(rj)
            alive.discard(c)
            removed.append(c)
        return removed

    def deselect(removed: list[int]) -> None:
        for c in reversed(removed):
            alive.add(c)
            for rj in col_rows[c]:
                for c2 in row_cols[rj]:
                    if c2 != c:
                        col_rows[c2].add(rj)

    def solve() -> bool:
        nonlocal nodes
        if not alive:
            return True
        c = min(alive, key=lambda x: (len(col_rows[x]), tiebreak[x]))
        cand = sorted(col_rows[c])
        rng.shuffle(cand)
        for ri in cand:
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted(f"no {what} within {budget} nodes")
            removed = select(ri)
            solution.append(ri)
            if solve():
                return True
            solution.pop()
            deselect(removed)
        return False

    return solution if solve() else None


def cyclic_symmetry(sizes: Sequence[int], m: int = 3) -> list[int]:
    """A permutation of order m preserving the consecutive group layout of ``sizes``.

    Equal-size groups are rotated m at a time; each leftover group is mapped
    to itself with its points rotated in m-cycles and the remainder fixed.
    """
    groups, start = [], 0
    for s in sorted(sizes):
        groups.append(list(range(start, start + s)))
        start += s
    perm = list(range(start))
    by_size: dict[int, list[list[int]]] = {}
    for g in groups:
        by_size.setdefault(len(g), []).append(g)

    def rotate(points):
        for a, b in zip(points, points[1:] + points[:1]):
            perm[a] = b

    for same in by_size.values():
        full = len(same) - len(same) % m
        for i in range(0, full, m):
            for pts in zip(*same[i:i + m]):
                rotate(list(pts))
        for g in same[full:]:
            for i in range(0, len(g) - len(g) % m, m):
                rotate(g[i:i + m])
    return perm


def search_gdd(type_signature, seed: int = 0, budget: int = 1_000_000,
               symmetry: int | Sequence[int] | None = 3) -> GroupDivisibleDesign:
    """Find a 4-GDD of the given type by randomized exact-cover search.

    Columns are the cross pairs, rows the 4-sets meeting four distinct
    groups.  The search branches on the pair with fewest candidate blocks,
    breaking ties and ordering rows with a generator seeded by ``seed``;
    ``budget`` caps the number of rows tried.

    With ``symmetry`` the same problem is solved modulo a point permutation
    that preserves the groups: columns become pair orbits and rows become
    block orbits covering each pair at most once.  An int m uses
    :func:`cyclic_symmetry` of order m, a sequence is taken as the
    permutation itself, and ``None`` searches the plain problem.  Under a
    symmetry an exhausted search does not mean the type is infeasible.
    """
    sizes = parse_type(type_signature)
    _check_feasible(sizes)
    groups, start = [], 0
    for s in sizes:
        groups.append(tuple(range(start, start + s)))
        start += s
    n = start
    if len(groups) < 4:
        if cross_pair_count(sizes):
            raise Infeasible("fewer than four groups but cross pairs to cover")
        return _require(GroupDivisibleDesign(n, tuple(groups), ()))

    if symmetry is None or symmetry == 1:
        perm = list(range(n))
    elif isinstance(symmetry, int):
        perm = cyclic_symmetry(sizes, symmetry)
    else:
        perm = list(symmetry)
    powers = [list(range(n))]
    while True:
        nxt = [perm[x] for x in powers[-1]]
        if nxt == powers[0]:
            break
        powers.append(nxt)
    where = {x: i for i, g in enumerate(groups) for x in g}
    if any(len({where[g[x]] for x in grp}) != 1 for g in powers for grp in groups):
        raise ValueError("symmetry does not map groups to groups")

    pair_orbit: dict[tuple[int, int], int] = {}
    for i, j in itertools.combinations(range(len(groups)), 2):
        for a in groups[i]:
            for b in groups[j]:
                if (a, b) not in pair_orbit:
                    oid = len(set(pair_orbit.values()))
                    for g in powers:
                        x, y = g[a], g[b]
                        pair_orbit[(x, y) if x < y else (y, x)] = oid
    ncols = len(set(pair_orbit.values()))

    rows: list[list[tuple[int, ...]]] = []
    row_cols: list[list[int]] = []
    for gs in itertools.combinations(groups, 4):
        for b in itertools.product(*gs):
            orbit = {tuple(sorted(g[x] for x in b)) for g in powers}
            if min(orbit) != b:
                continue
            seen: set[tuple[int, int]] = set()
            ok = True
            for blk in orbit:
                for e in itertools.combinations(blk, 2):
                    if e in seen:
                        ok = False
                        break
                    seen.add(e)
                if not ok:
                    break
            if ok:
                rows.append(sorted(orbit))
                row_cols.append(sorted({pair_orbit[e] for e in itertools.combinations(b, 2)}))

    rng = random.Random(seed)
    what = f"{format_type(sizes)} GDD (seed {seed})"
    chosen = _exact_cover(row_cols, ncols, rng, budget, what)
    if chosen is None:
        if len(powers) > 1:
            raise BudgetExhausted(f"no {what} with the requested symmetry")
        raise Infeasible(f"no 4-GDD of type {format_type(sizes)} exists")
    blocks = [blk for ri in chosen for blk in rows[ri]]
    return _require(GroupDivisibleDesign(n, tuple(groups), tuple(blocks)))


# -- text format and fixtures --

def format_gdd(g: GroupDivisibleDesign, comments: Iterable[str] = ()) -> str:
    lines = [f"GDD n={g.n} type={g.type_string}"]
    lines += [f"# {c}" for c in comments]
    lines += ["group: " + " ".join(map(str, grp)) for grp in g.groups]
    lines += ["block: " + " ".join(map(str, b)) for b in g.blocks]
    return "\n".join(lines) + "\n"


def parse_gdd(text: str, validate: bool = True) -> GroupDivisibleDesign:
    header = None
    groups, blocks = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            m = re.fullmatch(r"GDD\s+n=(\d+)\s+type=(\S+)", line)
            if not m:
                raise ParseError(f"line {lineno}: bad header {line!r}")
            header = (int(m.group(1)), m.group(2))
            continue
        kind, sep, rest = line.partition(":")
        if not sep or kind.strip() not in ("group", "block"):
            raise ParseError(f"line {lineno}: expected 'group:' or 'block:', got {line!r}")
        try:
            pts = tuple(int(x) for x in rest.split())
        except ValueError as e:
            raise ParseError(f"line {lineno}: {e}") from e
        (groups if kind.strip() == "group" else blocks).append(pts)
    if header is None:
        raise ParseError("missing GDD header")
    n, sig = header
    g = GroupDivisibleDesign(n, tuple(groups), tuple(blocks))
    if validate:
        rep = validate_gdd(g)
        if not rep:
            raise ValidationFailed(rep.message)
        if Counter(parse_type(sig)) != g.type_signature:
            raise ValidationFailed(f"header type {sig} does not match groups ({g.type_string})")
    return g


def load_gdd(path) -> GroupDivisibleDesign:
    return parse_gdd(Path(path).read_text())


def store_gdd(g: GroupDivisibleDesign, path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_gdd(g, comments))


def fixtures_dir() -> Path:
    env = os.environ.get(FIXTURES_ENV)
    return Path(env) if env else Path(__file__).parent / "fixtures"


def fixture_name(type_signature) -> str:
    return format_type(type_signature).replace(",", "-") + ".gdd"


def load_fixture(type_signature) -> GroupDivisibleDesign | None:
    path = fixtures_dir() / fixture_name(type_signature)
    return load_gdd(path) if path.exists() else None


def provide_gdd(type_signature, *, search_budget: int = 0, seed: int = 0,
                _depth: int = 0) -> tuple[GroupDivisibleDesign, str]:
    """A validated 4-GDD of the given type, plus a note on where it came from.

    Tries, in order: AG(2,4) for 4^4, TD(4,n) for n^4, a stored fixture,
    inflation of a smaller uniform GDD by a TD(4,w), and finally search when
    ``search_budget`` is positive.
    """
    sizes = parse_type(type_signature)
    sig = format_type(sizes)
    counts = Counter(sizes)
    if sig == "4^4":
        return construct_ag24_gdd(), "AG(2,4)"
    if len(counts) == 1:
        (g, u), = counts.items()
        if u == 4 and td4_supported(g):
            return construct_td4(g), f"TD(4,{g})"
        if g == 1:
            s = steiner_system(u)
            if s is not None:
                return s, f"S(2,4,{u})"
    fx = load_fixture(sizes)
    if fx is not None:
        return fx, f"fixture {fixture_name(sizes)}"
    if len(counts) == 1 and _depth < 4:
        (g, u), = counts.items()
        for w in sorted((d for d in range(3, g + 1) if g % d == 0), reverse=True):
            if not td4_supported(w):
                continue
            try:
                base, how = provide_gdd({g // w: u}, _depth=_depth + 1)
            except (GddUnavailable, Infeasible):
                continue
            td = construct_ag24_gdd() if w == 4 else construct_td4(w)
            return inflate_gdd(base, td), f"{how} inflated by TD(4,{w})"
    if search_budget > 0:
        return search_gdd(sizes, seed=seed, budget=search_budget), f"search seed={seed}"
    raise GddUnavailable(f"no 4-GDD of type {sig} available (no construction or fixture)")
