"""Randomized deletion method for strictly r-sparse 4-cycle packings.

Each of the N = 3*C(v,4) 4-cycles on v points is kept independently with
probability p = c'/v^2.  Then one cycle is deleted from every pair that
spans at most six points (this catches the (4,2)- and (6,2)-configurations
and every pair sharing an edge) and from every (j+3, j)-configuration,
2 <= j <= r, among the survivors.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from statistics import median
from typing import Iterable

import numpy as np

from .design import CyclePacking, FourCycle, validate_packing
from .errors import BadCPrime, ValidationFailed
from .scanner import DEFAULT_MAX_R, find_dense_configs, is_strictly_r_sparse

C_PRIME_LIMIT = Fraction(1, 44)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


def check_c_prime(c_prime) -> Fraction:
    c = as_fraction(c_prime)
    if not 0 < c < C_PRIME_LIMIT:
        raise BadCPrime(f"c' must lie strictly between 0 and 1/44, got {c}")
    return c


def cycles_on(quad: tuple[int, int, int, int]) -> tuple[FourCycle, FourCycle, FourCycle]:
    a, b, c, d = sorted(quad)
    return FourCycle((a, b, c, d)), FourCycle((a, b, d, c)), FourCycle((a, c, b, d))


def _unrank_quad(m: int) -> tuple[int, int, int, int]:
    """The m-th 4-subset of {0, 1, ...} in colexicographic order."""
    out = []
    for k in (4, 3, 2, 1):
        lo, hi = k - 1, k
        while comb(hi, k) <= m:
            hi *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if comb(mid, k) <= m:
                lo = mid
            else:
                hi = mid
        out.append(lo)
        m -= comb(lo, k)
    return tuple(reversed(out))


def cycle_of_index(i: int) -> FourCycle:
    """Index i in [0, 3 C(v,4)) names the (i mod 3)-th cycle on the (i div 3)-th 4-set."""
    return cycles_on(_unrank_quad(i // 3))[i % 3]


def sample_random_cycles(v: int, c_prime, seed: int) -> list[FourCycle]:
    """Each 4-cycle on v points independently with probability c'/v^2.

    Drawn as t ~ Binomial(N, p) followed by t distinct indices chosen
    uniformly from range(N), which has the same distribution without
    listing all N = 3 C(v,4) cycles.
    """
    c = check_c_prime(c_prime)
    if v < 4:
        return []
    rng = np.random.default_rng(seed)
    n_all = 3 * comb(v, 4)
    t = int(rng.binomial(n_all, float(c / (v * v))))
    picks = rng.choice(n_all, size=t, replace=False)
    return sorted(cycle_of_index(int(i)) for i in picks)


@dataclass
class PackerConfig:
    v: int
    r: int = 4
    c_prime: Fraction = Fraction(1, 88)
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        self.c_prime = check_c_prime(self.c_prime)
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.r < 2:
            raise ValueError("r must be at least 2")
        if self.r > DEFAULT_MAX_R:
            raise ValueError(f"r must be at most {DEFAULT_MAX_R}")


@dataclass
class PackerOutcome:
    packing: CyclePacking
    sampled: int
    deleted: int
    bad_pair_count: int
    bad_dense_count: int
    bound: Fraction
    seed: int | None = None
    r: int = 4
    c_prime: Fraction = Fraction(1, 88)
    certified: bool = False
    dense_by_j: dict[int, int] = field(default_factory=dict)

    @property
    def retained(self) -> int:
        return len(self.packing.cycles)

    def to_dict(self, with_cycles: bool = True) -> dict:
        d = {
            "order": self.packing.v,
            "r": self.r,
            "cPrime": str(self.c_prime),
            "seed": self.seed,
            "sampled": self.sampled,
            "deleted": self.deleted,
            "retained": self.retained,
            "badPairCount": self.bad_pair_count,
            "badDenseCount": self.bad_dense_count,
            "denseByJ": {str(j): n for j, n in self.dense_by_j.items()},
            "bound": str(self.bound),
            "boundFloat": float(self.bound),
            "certified": self.certified,
        }
        if with_cycles:
            d["cycles"] = [list(c) for c in self.packing.cycles]
        return d


def guaranteed_bound(v: int, c_prime) -> Fraction:
    """c'(1 - 44c')/16 * v^2."""
    c = as_fraction(c_prime)
    return c * (1 - 44 * c) / 16 * v * v


def _greedy_hitting_set(members: list[FourCycle], conflicts: Iterable[tuple[int, ...]]) -> set[int]:
    """Delete the cycle in the most unresolved conflicts until none remain.

    Ties go to the smallest cycle in canonical order.
    """
    confs = [frozenset(c) for c in conflicts]
    touching: dict[int, set[int]] = defaultdict(set)
    for k, conf in enumerate(confs):
        for i in conf:
            touching[i].add(k)
    live = set(range(len(confs)))
    deleted: set[int] = set()
    while live:
        i = max(touching, key=lambda x: (len(touching[x]), [-y for y in members[x]]))
        deleted.add(i)
        for k in list(touching[i]):
            live.discard(k)
            for other in confs[k]:
                if other != i:
                    touching[other].discard(k)
                    if not touching[other]:
                        del touching[other]
        del touching[i]
    return deleted


def _close_pairs(cycles: list[FourCycle]) -> list[tuple[int, int]]:
    by_pair: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, c in enumerate(cycles):
        for e in itertools.combinations(sorted(c), 2):
            by_pair[e].append(i)
    out = set()
    for ids in by_pair.values():
        out.update(itertools.combinations(ids, 2))
    return sorted(out)


def prune_bad(cycles: Iterable, r: int, v: int | None = None, c_prime=Fraction(1, 88),
              seed: int | None = None) -> PackerOutcome:
    """Delete one cycle from each bad pair, then from each dense configuration.

    Dense (j+3, j)-configurations are handled for j = 2, ..., r in turn,
    each stage searching only the cycles the previous stages kept.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    members = sorted(set(FourCycle(c) for c in cycles))
    if v is None:
        v = max((max(c) for c in members), default=-1) + 1
    pairs = _close_pairs(members)
    gone = _greedy_hitting_set(members, pairs)
    survivors = [c for i, c in enumerate(members) if i not in gone]

    # one stage per j on the current survivors, so the result for r+1 is a
    # subset of the result for r
    dense_by_j: dict[int, int] = {}
    n_confs = n_gone2 = 0
    kept = survivors
    for j in range(2, r + 1):
        found = find_dense_configs(kept, j, max_r=max(j, DEFAULT_MAX_R))[j] if kept else []
        dense_by_j[j] = len(found)
        if not found:
            continue
        pos = {c: i for i, c in enumerate(kept)}
        gone2 = _greedy_hitting_set(kept, [tuple(pos[c] for c in w) for w in found])
        n_confs += len(found)
        n_gone2 += len(gone2)
        kept = [c for i, c in enumerate(kept) if i not in gone2]

    packing = CyclePacking(v, tuple(kept), {"route": "deletion", "r": str(r), "c_prime": str(c_prime),
                                            "seed": str(seed)})
    out = PackerOutcome(packing, len(members), len(gone) + n_gone2, len(pairs), n_confs,
                        guaranteed_bound(v, c_prime), seed, r, as_fraction(c_prime), dense_by_j=dense_by_j)
    rep = validate_packing(packing)
    if not rep:
        raise ValidationFailed(rep.message)
    scan = is_strictly_r_sparse(packing, r, exhaustive=True)
    if not scan.strictly_sparse or _close_pairs(list(packing.cycles)):
        raise ValidationFailed("pruned packing failed certification")
    out.certified = True
    return out


def _one_trial(args) -> PackerOutcome:
    v, r, c_prime, seed = args
    return prune_bad(sample_random_cycles(v, c_prime, seed), r, v=v, c_prime=c_prime, seed=seed)


def run_trials(cfg: PackerConfig, threads: int = 1) -> list[PackerOutcome]:
    """One outcome per trial; trial i uses seed cfg.seed + i."""
    jobs = [(cfg.v, cfg.r, cfg.c_prime, cfg.seed + i) for i in range(cfg.trials)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_one_trial, jobs))
    return [_one_trial(j) for j in jobs]


def random_sparse_packing(cfg: PackerConfig, threads: int = 1) -> PackerOutcome:
    """The outcome with the most retained cycles, ties to the larger seed."""
    return max(run_trials(cfg, threads), key=lambda o: (o.retained, o.seed))


def median_retained(outcomes: list[PackerOutcome]) -> float:
    return median(o.retained for o in outcomes)


@dataclass
class Bounds:
    v: int
    c_prime: Fraction
    r: int
    p: Fraction
    expected_cycles: Fraction
    pair_term: Fraction
    markov_threshold: Fraction
    bad_config_bound: Fraction
    guaranteed: Fraction
    chernoff_tail: float

    def to_dict(self) -> dict:
        out = {"v": self.v, "cPrime": str(self.c_prime), "r": self.r}
        for name in ("p", "expected_cycles", "pair_term", "markov_threshold", "bad_config_bound",
                     "guaranteed"):
            val = getattr(self, name)
            out[name] = {"exact": str(val), "approx": float(val)}
        out["chernoff_tail"] = self.chernoff_tail
        return out


def expected_bounds(v: int, c_prime, r: int = 4) -> Bounds:
    """Exact rational evaluation of the quantities in the deletion argument.

    ``bad_config_bound`` is the full union bound
    C(v,4)C(3,2)p^2 + C(v,6)C(45,2)p^2 + sum_j C(v,j+3) C(3C(j+3,4), j) p^j,
    whose leading term is ``pair_term`` = 11c'^2 v^2 / 8.
    """
    c = as_fraction(c_prime)
    if v == 0:
        z = Fraction(0)
        return Bounds(0, c, r, z, z, z, z, z, z, 1.0)
    p = c / (v * v)
    e_t = p * 3 * comb(v, 4)
    pair_term = Fraction(11, 8) * c * c * v * v
    bad = comb(v, 4) * comb(3, 2) * p ** 2 + comb(v, 6) * comb(45, 2) * p ** 2
    for j in range(2, r + 1):
        bad += comb(v, j + 3) * comb(3 * comb(j + 3, 4), j) * p ** j
    return Bounds(v, c, r, p, e_t, pair_term, 2 * pair_term, bad, guaranteed_bound(v, c),
                  math.exp(-float(e_t) / 8))
