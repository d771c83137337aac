"""Detection and counting of forbidden configurations in 4-cycle packings.

All detectors work from three indexes over the cycle list: vertex -> cycles,
vertex pair -> cycles containing both ends (as an edge or a diagonal), and
diagonal -> cycles.

Dense (j+3, j)-configurations are found by seeding from *close pairs*, two
cycles sharing at least two vertices.  Counting incidences shows every
(j+3, j)-configuration with 2 <= j <= 8 contains one: its j cycles put 4j
incidences on j+3 vertices, and the balanced degree sequence already gives
sum_x C(deg x, 2) > C(j, 2), so some pair of cycles meets twice.  Once a seed
is fixed every other member lies inside the final (j+3)-set, hence meets the
current union U in at least 4 - (j+3-|U|) vertices.  For j <= 6 that bound is
>= 1 after the seed, so candidates come straight from the indexes and the
remaining members can be added in increasing index order.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .design import Configuration, CyclePacking, FourCycle
from .errors import NotEdgeDisjoint, PreconditionViolated, Unsupported

DEFAULT_MAX_R = 6
HARD_MAX_R = 6
DEFAULT_WITNESS_CAP = 100

DOUBLE_DIAMOND = "DoubleDiamond"
SIX_TWO_OTHER = "SixTwoOther"
SEVEN_TWO = "SevenTwo"
EIGHT_TWO = "EightTwo"
SIX_THREE_A = "SixThreeA"
SIX_THREE_B = "SixThreeB"
SEVEN_FOUR = "SevenFour"
JOINTED_DIAMOND = "JointedDiamond"
PAIR_CLASSES = (DOUBLE_DIAMOND, SIX_TWO_OTHER, SEVEN_TWO, EIGHT_TWO)


def dense_tag(j: int) -> str:
    return f"Dense({j + 3},{j})"


class _Index:
    def __init__(self, cycles: Sequence[FourCycle]):
        self.cycles = list(cycles)
        self.vsets = [frozenset(c) for c in self.cycles]
        self.by_vertex: dict[int, list[int]] = defaultdict(list)
        self.by_pair: dict[tuple[int, int], list[int]] = defaultdict(list)
        self.by_diag: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i, c in enumerate(self.cycles):
            for x in c:
                self.by_vertex[x].append(i)
            for e in itertools.combinations(sorted(c), 2):
                self.by_pair[e].append(i)
            for d in c.diagonals:
                self.by_diag[d].append(i)

    def close_pairs(self) -> list[tuple[int, int]]:
        out = set()
        for ids in self.by_pair.values():
            if len(ids) > 1:
                out.update(itertools.combinations(ids, 2))
        return sorted(out)

    def meeting(self, u: frozenset[int], need: int) -> set[int]:
        """Cycles with at least ``need`` vertices in u."""
        if need >= 2:
            found = set()
            for e in itertools.combinations(sorted(u), 2):
                found.update(self.by_pair.get(e, ()))
        else:
            found = set()
            for x in u:
                found.update(self.by_vertex.get(x, ()))
        vs = self.vsets
        return {i for i in found if len(vs[i] & u) >= need}


def _cycles_of(p) -> Sequence[FourCycle]:
    if isinstance(p, CyclePacking):
        return p.cycles
    return sorted(FourCycle(c) for c in p)


def find_double_diamonds(p) -> list[tuple[FourCycle, FourCycle]]:
    """Pairs of distinct cycles sharing a diagonal."""
    idx = _Index(_cycles_of(p))
    out = set()
    for ids in idx.by_diag.values():
        for i, k in itertools.combinations(ids, 2):
            out.add(tuple(sorted((idx.cycles[i], idx.cycles[k]))))
    return sorted(out)


def _opposite_edge_pairs(c: FourCycle):
    a, b, cc, d = c
    yield (a, b), (cc, d)
    yield (b, cc), (d, a)


def _key(e):
    return e if e[0] < e[1] else (e[1], e[0])


def _jointed(idx: _Index) -> dict[frozenset, tuple[FourCycle, FourCycle, FourCycle]]:
    found: dict[frozenset, tuple] = {}
    cyc, vs = idx.cycles, idx.vsets
    for ji, joint in enumerate(cyc):
        for e1, e2 in _opposite_edge_pairs(joint):
            l1 = idx.by_diag.get(_key(e1), ())
            l2 = idx.by_diag.get(_key(e2), ())
            if not l1 or not l2:
                continue
            for i2 in l1:
                d2 = [d for d in cyc[i2].diagonals if d != _key(e1)][0]
                for i3 in l2:
                    if i3 == i2:
                        continue
                    d3 = [d for d in cyc[i3].diagonals if d != _key(e2)][0]
                    if len(set(d2) & set(d3)) != 1:
                        continue
                    if len(vs[ji] | vs[i2] | vs[i3]) != 7:
                        continue
                    key = frozenset((ji, i2, i3))
                    if key not in found:
                        o2, o3 = sorted((cyc[i2], cyc[i3]))
                        found[key] = (joint, o2, o3)
    return found


def find_jointed_diamonds(p) -> list[tuple[FourCycle, FourCycle, FourCycle]]:
    """Jointed-diamonds as (joint cycle, other, other)."""
    return sorted(_jointed(_Index(_cycles_of(p))).values())


def _dense(idx: _Index, j: int, seeds: Iterable[tuple[int, int]] | None = None) -> set[tuple[int, ...]]:
    target = j + 3
    vs = idx.vsets
    found: set[tuple[int, ...]] = set()

    def grow(chosen: list[int], u: frozenset, last: int, left: int):
        if left == 0:
            if len(u) == target:
                found.add(tuple(sorted(chosen)))
            return
        slack = target - len(u)
        need = 4 - slack
        assert need >= 1, "seeded search requires j <= 6"
        for c in sorted(idx.meeting(u, need)):
            if c > last and c not in chosen:
                chosen.append(c)
                grow(chosen, u | vs[c], c, left - 1)
                chosen.pop()

    for i, k in idx.close_pairs() if seeds is None else seeds:
        u = vs[i] | vs[k]
        if len(u) > target:
            continue
        grow([i, k], u, -1, j - 2)
    return found


_PARALLEL_MIN_SEEDS = 2000


def _dense_chunk(args) -> dict[int, set[tuple[int, ...]]]:
    cycles, js, seeds = args
    idx = _Index(cycles)
    return {j: _dense(idx, j, seeds) for j in js}


def _dense_all(idx: _Index, js: Sequence[int], threads: int = 1) -> dict[int, list[tuple[FourCycle, ...]]]:
    """Dense witnesses for each j, split over worker processes by seed pair.

    Results are merged as sets and sorted, so the output does not depend on
    the number of workers.
    """
    seeds = idx.close_pairs()
    if threads > 1 and len(seeds) >= _PARALLEL_MIN_SEEDS and js:
        from concurrent.futures import ProcessPoolExecutor

        step = -(-len(seeds) // (4 * threads))
        chunks = [(idx.cycles, list(js), seeds[s:s + step]) for s in range(0, len(seeds), step)]
        merged: dict[int, set] = {j: set() for j in js}
        with ProcessPoolExecutor(max_workers=threads) as ex:
            for part in ex.map(_dense_chunk, chunks):
                for j, found in part.items():
                    merged[j] |= found
    else:
        merged = {j: _dense(idx, j, seeds) for j in js}
    return {j: sorted(tuple(idx.cycles[i] for i in t) for t in merged[j]) for j in js}


def find_dense_configs(p, r: int, max_r: int = DEFAULT_MAX_R,
                       threads: int = 1) -> dict[int, list[tuple[FourCycle, ...]]]:
    """All sets of j cycles spanning exactly j+3 vertices, for 2 <= j <= r."""
    if r < 2:
        raise ValueError("r must be at least 2")
    if max_r > HARD_MAX_R:
        raise Unsupported(f"dense search is only complete up to r={HARD_MAX_R}")
    if r > max_r:
        raise Unsupported(f"r={r} exceeds the configured limit {max_r}")
    return _dense_all(_Index(_cycles_of(p)), range(2, r + 1), threads)


def classify_pair(c1, c2) -> str:
    c1, c2 = FourCycle(c1), FourCycle(c2)
    if c1 == c2:
        raise NotEdgeDisjoint("a cycle is not a pair")
    if set(c1.edges) & set(c2.edges):
        raise NotEdgeDisjoint(f"{c1} and {c2} share an edge")
    n = len(set(c1) | set(c2))
    if n == 8:
        return EIGHT_TWO
    if n == 7:
        return SEVEN_TWO
    if n == 6:
        return DOUBLE_DIAMOND if set(c1.diagonals) & set(c2.diagonals) else SIX_TWO_OTHER
    raise AssertionError(f"edge-disjoint 4-cycles on {n} vertices")


def census_pairs(p) -> dict[str, int]:
    """Number of cycle pairs in each of the four two-cycle classes."""
    idx = _Index(_cycles_of(p))
    counts = dict.fromkeys(PAIR_CLASSES, 0)
    vs, cyc = idx.vsets, idx.cycles
    diags = [set(c.diagonals) for c in cyc]
    touching = 0
    for i, c in enumerate(cyc):
        nbrs = set()
        for x in c:
            nbrs.update(idx.by_vertex[x])
        for k in nbrs:
            if k <= i:
                continue
            touching += 1
            shared = len(vs[i] & vs[k])
            if shared == 1:
                counts[SEVEN_TWO] += 1
            elif shared == 2:
                counts[DOUBLE_DIAMOND if diags[i] & diags[k] else SIX_TWO_OTHER] += 1
            else:
                raise NotEdgeDisjoint(f"{c} and {cyc[k]} share {shared} vertices")
    counts[EIGHT_TWO] = comb(len(cyc), 2) - touching
    return counts


def contains_dense_sub(c: Configuration, j: int) -> bool:
    """Whether some j of the configuration's cycles span exactly j+3 vertices.

    Plain subset enumeration; the configuration must itself be a
    (j+3, j+d)-configuration with d >= 1.
    """
    if not isinstance(c, Configuration):
        c = Configuration(c)
    if j < 1 or c.vertex_count != j + 3 or c.cycle_count <= j:
        raise PreconditionViolated(
            f"expected a ({j + 3}, >{j})-configuration, got ({c.vertex_count},{c.cycle_count})")
    for sub in itertools.combinations(c.cycles, j):
        if len(frozenset().union(*sub)) == j + 3:
            return True
    return False


@dataclass
class ClassCount:
    count: int
    witnesses: list = field(default_factory=list)


@dataclass
class ScanReport:
    order: int
    cycles: int
    r: int
    r_max: int
    strict: bool
    classes: dict[str, ClassCount]
    method: str = "exhaustive"

    @property
    def strictly_sparse(self) -> bool:
        """Strict and r-sparse at the requested r."""
        return self.strict and self.r_max >= self.r

    def __bool__(self) -> bool:
        return self.strictly_sparse

    def count(self, tag: str) -> int:
        return self.classes[tag].count if tag in self.classes else 0

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "cycles": self.cycles,
            "r": self.r,
            "strict": self.strict,
            "rMax": self.r_max,
            "method": self.method,
            "classes": {
                tag: {"count": cc.count, "witnesses": [[list(c) for c in w] for w in cc.witnesses]}
                for tag, cc in self.classes.items()
            },
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ScanReport":
        classes = {
            tag: ClassCount(v["count"], [tuple(FourCycle(c) for c in w) for w in v["witnesses"]])
            for tag, v in d["classes"].items()
        }
        return cls(d["order"], d["cycles"], d["r"], d["rMax"], d["strict"], classes, d.get("method", "exhaustive"))


def _capped(items: Iterable, cap: int) -> list:
    out = []
    for w in items:
        if len(out) >= cap:
            break
        out.append(w)
    return out


def is_strictly_r_sparse(p: CyclePacking, r: int = 4, *, exhaustive: bool = False,
                         census: bool = False, witness_cap: int = DEFAULT_WITNESS_CAP,
                         max_r: int = DEFAULT_MAX_R, threads: int = 1) -> ScanReport:
    """Scan for double-diamonds and (j+3, j)-configurations, 2 <= j <= r.

    For r = 4 jointed-diamonds are checked first: with no double-diamond
    (which sits inside both kinds of (6,3)) and no jointed-diamond (which sits
    inside the (7,4)), nothing remains to search for, so the dense search is
    skipped unless ``exhaustive`` is set.  Jointed-diamonds are reported for
    every r >= 3.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if r > max_r or max_r > HARD_MAX_R:
        raise Unsupported(f"r={r} exceeds the configured limit {min(max_r, HARD_MAX_R)}")
    cycles = _cycles_of(p)
    idx = _Index(cycles)
    classes: dict[str, ClassCount] = {}

    dd = set()
    for ids in idx.by_diag.values():
        for i, k in itertools.combinations(ids, 2):
            dd.add(tuple(sorted((idx.cycles[i], idx.cycles[k]))))
    classes[DOUBLE_DIAMOND] = ClassCount(len(dd), _capped(sorted(dd), witness_cap))

    jd = None
    if r >= 3:
        jd = sorted(_jointed(idx).values())
        classes[JOINTED_DIAMOND] = ClassCount(len(jd), _capped(jd, witness_cap))

    method = "exhaustive"
    if r == 4 and not exhaustive and not dd and not jd:
        method = "fast-path"
        for j in range(2, r + 1):
            classes[dense_tag(j)] = ClassCount(0, [])
    else:
        for j, found in _dense_all(idx, range(2, r + 1), threads).items():
            classes[dense_tag(j)] = ClassCount(len(found), _capped(found, witness_cap))

    r_max = 1
    for j in range(2, r + 1):
        if classes[dense_tag(j)].count:
            break
        r_max = j
    if census:
        for tag, n in census_pairs(cycles).items():
            classes.setdefault(tag, ClassCount(n, []))
            classes[tag].count = n
    order = p.v if isinstance(p, CyclePacking) else max((max(c) for c in cycles), default=-1) + 1
    return ScanReport(order, len(cycles), r, r_max, not dd, classes, method)
