"""Matroids, lattices of flats, and Bergman fans.

The ambient lattice of a Bergman fan is Z^E / Z e_E, realized by dropping
the last coordinate (so e_last maps to minus the sum of the others); this
gives deterministic coordinates for golden tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, FrozenSet, Sequence

from . import InputFormatError, NotSimpleError
from .polyhedral import FaceComplex, make_fan

MAX_GROUND = 20


@dataclass(frozen=True)
class Matroid:
    ground: tuple[int, ...]
    rank_fn: Callable[[FrozenSet[int]], int]
    name: str = "matroid"

    def rank(self, subset) -> int:
        return self.rank_fn(frozenset(subset))

    @property
    def full_rank(self) -> int:
        return self.rank(self.ground)

    def closure(self, subset) -> frozenset:
        s = frozenset(subset)
        r = self.rank(s)
        return frozenset(e for e in self.ground if self.rank(s | {e}) == r)

    def is_simple(self) -> bool:
        if any(self.rank({e}) == 0 for e in self.ground):
            return False
        for a, b in itertools.combinations(self.ground, 2):
            if self.rank({a, b}) < 2:
                return False
        return True

    def check_rank_axioms(self) -> bool:
        """Spot-verify the rank axioms on all subsets (|E| <= 12 only)."""
        if len(self.ground) > 12:
            return True
        subsets = [frozenset(c) for k in range(len(self.ground) + 1)
                   for c in itertools.combinations(self.ground, k)]
        ranks = {s: self.rank(s) for s in subsets}
        if ranks[frozenset()] != 0:
            return False
        for s in subsets:
            for e in self.ground:
                up = ranks[s | {e}]
                if not (ranks[s] <= up <= ranks[s] + 1):
                    return False
        for s, t in itertools.product(subsets, repeat=2):
            if ranks[s | t] + ranks[s & t] > ranks[s] + ranks[t]:
                return False
        return True


def uniform_matroid(n: int, r: int) -> Matroid:
    ground = tuple(range(n))
    return Matroid(ground, lambda s: min(len(s), r), name=f"U({r},{n})")


def boolean_matroid(n: int) -> Matroid:
    return Matroid(tuple(range(n)), lambda s: len(s), name=f"B{n}")


def graphic_matroid(edges: Sequence[tuple[int, int]]) -> Matroid:
    edges = [tuple(e) for e in edges]
    ground = tuple(range(len(edges)))

    def rk(s: frozenset) -> int:
        verts = {v for i in s for v in edges[i]}
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        comps = len(verts)
        for i in s:
            a, b = find(edges[i][0]), find(edges[i][1])
            if a != b:
                parent[a] = b
                comps -= 1
        return len(verts) - comps

    return Matroid(ground, rk, name=f"graphic({len(edges)} edges)")


def bases_matroid(ground_size: int, bases: Sequence[Sequence[int]]) -> Matroid:
    bsets = [frozenset(b) for b in bases]
    if not bsets:
        raise InputFormatError("a matroid needs at least one basis")

    def rk(s: frozenset) -> int:
        return max(len(s & b) for b in bsets)

    return Matroid(tuple(range(ground_size)), rk, name="bases")


def matroid_from_json(data: dict) -> Matroid:
    try:
        kind = data["type"]
        if kind == "uniform":
            return uniform_matroid(int(data["n"]), int(data["r"]))
        if kind == "boolean":
            return boolean_matroid(int(data["n"]))
        if kind == "graphic":
            return graphic_matroid([tuple(e) for e in data["edges"]])
        if kind == "bases":
            return bases_matroid(int(data["ground"]), data["bases"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed matroid JSON: {exc}") from exc
    raise InputFormatError(f"unknown matroid type {kind!r}")


@dataclass(frozen=True)
class FlatLattice:
    """All flats of a matroid, graded by rank, with cover relations."""

    by_rank: tuple[tuple[frozenset, ...], ...]
    covers: frozenset

    @property
    def proper_flats(self) -> list[frozenset]:
        out = []
        for r, level in enumerate(self.by_rank):
            if 0 < r < len(self.by_rank) - 1:
                out.extend(level)
        return out


def flats(m: Matroid) -> FlatLattice:
    """Enumerate all flats by repeated closure, graded by rank."""
    if len(m.ground) > MAX_GROUND:
        raise NotSimpleError(f"ground set larger than {MAX_GROUND}")
    if not m.is_simple():
        raise NotSimpleError("matroid has loops or parallel elements")
    bottom = m.closure(())
    found = {bottom}
    frontier = [bottom]
    covers = set()
    while frontier:
        new = []
        for f in frontier:
            for e in sorted(set(m.ground) - f):
                g = m.closure(f | {e})
                if g not in found:
                    found.add(g)
                    new.append(g)
        frontier = new
    top_rank = m.full_rank
    by_rank: list[list[frozenset]] = [[] for _ in range(top_rank + 1)]
    for f in found:
        by_rank[m.rank(f)].append(f)
    for level in by_rank:
        level.sort(key=sorted)
    flat_list = [f for level in by_rank for f in level]
    for a in flat_list:
        for b in flat_list:
            if a < b and m.rank(b) == m.rank(a) + 1:
                covers.add((tuple(sorted(a)), tuple(sorted(b))))
    return FlatLattice(tuple(tuple(level) for level in by_rank), frozenset(covers))


def _flat_vector(flat: frozenset, n: int) -> tuple[int, ...]:
    """e_F in Z^E / Z e_E with the last coordinate dropped."""
    v = [1 if i in flat else 0 for i in range(n - 1)]
    if (n - 1) in flat:
        v = [x - 1 for x in v]
    return tuple(v)


def bergman_fan(m: Matroid) -> FaceComplex:
    """The fan of flag cones of proper flats, in Z^E / Z e_E coordinates."""
    lat = flats(m)
    n = len(m.ground)
    proper = lat.proper_flats
    chains: list[list[frozenset]] = [[]]
    # Flags of proper flats = chains in the (proper part of the) flat lattice.
    def extend(chain: list[frozenset]):
        last = chain[-1] if chain else frozenset()
        for f in proper:
            if last < f:
                nxt = chain + [f]
                chains.append(nxt)
                extend(nxt)

    extend([])
    cones = []
    for chain in chains:
        cones.append([_flat_vector(f, n) for f in chain])
    fan = make_fan(n - 1, cones, validate=False)
    return fan
