"""4-cycles, packings, systems, validation and the plain-text file format."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DuplicateVertex, ParseError

Edge = tuple[int, int]


def _pair(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def dihedral_images(verts: tuple[int, int, int, int]) -> list[tuple[int, ...]]:
    """All 8 rotations and reflections of a cyclic quadruple."""
    out = []
    for s in range(4):
        rot = verts[s:] + verts[:s]
        out.append(rot)
        out.append((rot[0], rot[3], rot[2], rot[1]))
    return out


class FourCycle(tuple):
    """A 4-cycle in canonical form.

    The canonical representative is the lexicographically least of the 8
    dihedral images, i.e. it starts at the smallest vertex and walks toward
    the smaller of its two neighbours.  Being a tuple, two FourCycles compare
    and hash equal exactly when they describe the same cycle.
    """

    __slots__ = ()

    def __new__(cls, verts: Iterable[int]):
        v = tuple(verts)
        if len(v) != 4:
            raise ValueError(f"a 4-cycle needs 4 vertices, got {v!r}")
        if len(set(v)) != 4:
            raise DuplicateVertex(f"repeated vertex in {v!r}")
        s = v.index(min(v))
        a, b, c, d = v[s:] + v[:s]
        if d < b:
            b, d = d, b
        return super().__new__(cls, (a, b, c, d))

    @property
    def edges(self) -> tuple[Edge, Edge, Edge, Edge]:
        a, b, c, d = self
        return (_pair(a, b), _pair(b, c), _pair(c, d), _pair(a, d))

    @property
    def diagonals(self) -> tuple[Edge, Edge]:
        a, b, c, d = self
        return (_pair(a, c), _pair(b, d))

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self)

    def relabel(self, mapping) -> "FourCycle":
        return FourCycle(mapping[x] for x in self)


def canonicalize(raw: Iterable[int]) -> FourCycle:
    return FourCycle(raw)


@dataclass(frozen=True)
class CyclePacking:
    """An edge-disjoint set of 4-cycles on the vertices 0..v-1.

    ``cycles`` is kept sorted so iteration order, serialisation and scans are
    deterministic.  Edge-disjointness is not enforced on construction; use
    :func:`validate_packing`.
    """

    v: int
    cycles: tuple[FourCycle, ...]
    meta: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        cyc = sorted(set(c if isinstance(c, FourCycle) else FourCycle(c) for c in self.cycles))
        object.__setattr__(self, "cycles", tuple(cyc))

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __contains__(self, c) -> bool:
        return FourCycle(c) in self._cycle_set

    @property
    def _cycle_set(self) -> frozenset:
        s = self.__dict__.get("_cs")
        if s is None:
            s = frozenset(self.cycles)
            object.__setattr__(self, "_cs", s)
        return s

    tag = "4CP"


class FourCycleSystem(CyclePacking):
    """A packing whose edges partition K_v."""

    tag = "4CS"


@dataclass(frozen=True, init=False)
class Configuration:
    cycles: frozenset[FourCycle]

    def __init__(self, cycles: Iterable):
        object.__setattr__(self, "cycles", frozenset(FourCycle(c) for c in cycles))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset().union(*self.cycles) if self.cycles else frozenset()

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def cycle_count(self) -> int:
        return len(self.cycles)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = ""
    witness: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_packing(p: CyclePacking) -> ValidationReport:
    seen: dict[Edge, FourCycle] = {}
    for c in p.cycles:
        for x in c:
            if not 0 <= x < p.v:
                return ValidationReport(False, f"vertex {x} out of range for v={p.v}", (c,))
        for e in c.edges:
            other = seen.get(e)
            if other is not None:
                return ValidationReport(False, f"edge {e} in two cycles", (e, other, c))
            seen[e] = c
    return ValidationReport(True, f"{len(p.cycles)} edge-disjoint cycles")


def validate_system(s: CyclePacking) -> ValidationReport:
    v = s.v
    if v % 8 != 1:
        return ValidationReport(False, f"order {v} is not 1 mod 8", (v,))
    want = v * (v - 1) // 8
    if len(s.cycles) != want:
        return ValidationReport(False, f"{len(s.cycles)} cycles, expected {want}", (len(s.cycles),))
    rep = validate_packing(s)
    if not rep:
        return rep
    covered = {e for c in s.cycles for e in c.edges}
    if len(covered) != comb(v, 2):
        for e in itertools.combinations(range(v), 2):
            if e not in covered:
                return ValidationReport(False, f"pair {e} not covered", (e,))
    return ValidationReport(True, f"4CS({v}) with {want} cycles")


def as_system(p: CyclePacking) -> FourCycleSystem:
    return FourCycleSystem(p.v, p.cycles, dict(p.meta))


# -- text format --

def format_packing(p: CyclePacking) -> str:
    lines = [f"{p.tag} v={p.v} cycles={len(p.cycles)}"]
    for key, value in p.meta.items():
        lines.append(f"# {key}: {value}")
    lines.extend(" ".join(map(str, c)) for c in p.cycles)
    return "\n".join(lines) + "\n"


def parse_packing(text: str) -> CyclePacking:
    header = None
    meta: dict[str, str] = {}
    cycles: list[FourCycle] = []
    seen: set[FourCycle] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = _parse_header(line, lineno)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ParseError(f"line {lineno}: expected 4 labels, got {line!r}")
        try:
            c = FourCycle(int(x) for x in parts)
        except ValueError as e:
            raise ParseError(f"line {lineno}: {e}") from e
        if c in seen:
            raise ParseError(f"line {lineno}: duplicate cycle {c}")
        seen.add(c)
        cycles.append(c)
    if header is None:
        raise ParseError("missing header line")
    tag, v, n = header
    if n != len(cycles):
        raise ParseError(f"header declares {n} cycles, found {len(cycles)}")
    cls = FourCycleSystem if tag == "4CS" else CyclePacking
    return cls(v, tuple(cycles), meta)


def _parse_header(line: str, lineno: int) -> tuple[str, int, int]:
    parts = line.split()
    if len(parts) != 3 or parts[0] not in ("4CP", "4CS"):
        raise ParseError(f"line {lineno}: bad header {line!r}")
    try:
        fields = dict(p.split("=", 1) for p in parts[1:])
        return parts[0], int(fields["v"]), int(fields["cycles"])
    except (KeyError, ValueError) as e:
        raise ParseError(f"line {lineno}: bad header {line!r}") from e


def read_packing(path) -> CyclePacking:
    return parse_packing(Path(path).read_text())


def write_packing(p: CyclePacking, path) -> None:
    Path(path).write_text(format_packing(p))
