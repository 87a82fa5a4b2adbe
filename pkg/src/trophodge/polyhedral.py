"""Polyhedral complexes, fans, and canonical compactifications.

A FaceComplex holds simplicial rational polyhedra in one ambient lattice.
Faces of a compactified complex live in quotient strata indexed by their
sedentarity cone; each stratum carries a deterministic integer presentation
(projection and section) so that all quotient computations are reproducible.

The sign function on codimension-one face pairs is derived from stored
orientation bases: each face is oriented by the HNF-reduced basis of its
tangent lattice.  For incidences that raise sedentarity the normal direction
is taken pointing inward (away from infinity); the d^2 = 0 tests pin this
convention.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import InputFormatError, NotAFanError, NotCodimOneError, NotUnimodularError
from .lattice import (
    apply_rows,
    primitive,
    quotient_presentation,
    saturate,
    spans_unimodularly,
)
from .linalg import RationalMatrix, rat, solve

Point = tuple[Fraction, ...]
IntVec = tuple[int, ...]
SedKey = tuple[IntVec, ...]


# ---------------------------------------------------------------------------
# Exact feasibility checking (Fourier-Motzkin)

def fm_feasible(constraints: list[tuple[tuple[Fraction, ...], Fraction, bool]], nvars: int) -> bool:
    """Whether a system of linear constraints coeffs.x + const >= 0 (or > 0
    when the strict flag is set) has a solution.  Exact, small systems only."""
    cons = [(tuple(rat(c) for c in coeffs), rat(const), strict) for coeffs, const, strict in constraints]
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for coeffs, const, strict in cons:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, const, strict))
            elif c < 0:
                neg.append((coeffs, const, strict))
            else:
                rest.append((coeffs, const, strict))
        new = rest
        for cp, kp, sp in pos:
            for cn, kn, sn in neg:
                # cp.x + kp >= 0 and cn.x + kn >= 0; eliminate x_var.
                a, b = cp[var], -cn[var]
                coeffs = tuple(b * cp[j] + a * cn[j] for j in range(nvars))
                new.append((coeffs, b * kp + a * kn, sp or sn))
        cons = new
    for coeffs, const, strict in cons:
        if strict:
            if const <= 0:
                return False
        elif const < 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Faces

@dataclass(frozen=True)
class Face:
    """One face of a complex, with geometry in its stratum's coordinates."""

    index: int
    vertices: tuple[Point, ...]
    rays: tuple[IntVec, ...]
    sedentarity: SedKey
    tangent: tuple[IntVec, ...]
    unimodular: bool
    pairs: tuple[tuple[int, SedKey], ...] = ()

    @property
    def dim(self) -> int:
        return len(self.tangent)

    @property
    def key(self):
        return (self.sedentarity, frozenset(self.vertices), frozenset(self.rays))


def _int_vec(v: Sequence) -> IntVec:
    out = []
    for x in v:
        f = rat(x)
        if f.denominator != 1:
            raise NotUnimodularError(f"non-integral lattice vector {v}")
        out.append(int(f))
    return tuple(out)


def _make_face(index: int, vertices, rays, sed: SedKey, pairs) -> Face:
    from math import gcd

    vertices = tuple(sorted({tuple(rat(x) for x in v) for v in vertices}))
    rays = tuple(sorted({tuple(int(x) for x in r) for r in rays}))
    rank = len(vertices[0])
    v0 = vertices[0]
    gens: list[IntVec] = []
    integral = True
    for v in vertices[1:]:
        diff = [a - b for a, b in zip(v, v0)]
        scale = 1
        for x in diff:
            scale = scale * x.denominator // gcd(scale, x.denominator)
        if scale != 1:
            integral = False
        gens.append(tuple(int(x * scale) for x in diff))
    gens.extend(tuple(r) for r in rays)
    tangent = tuple(saturate(gens, rank)) if gens else ()
    uni = integral and len(gens) == len(tangent) and spans_unimodularly(gens)
    return Face(index, vertices, rays, sed, tangent, uni, tuple(pairs))


# ---------------------------------------------------------------------------
# Complexes

class FaceComplex:
    """A finite face complex, possibly compactified (faces carry sedentarity)."""

    def __init__(self, rank: int, faces: list[Face], order: set[tuple[int, int]],
                 open_complex: Optional["FaceComplex"] = None):
        self.rank = rank
        self.faces = faces
        self.order = frozenset(order)  # strict relations (sub, super)
        self.open_complex = open_complex
        self.dim = max((f.dim for f in faces), default=0)
        self._below: dict[int, set[int]] = {f.index: set() for f in faces}
        self._above: dict[int, set[int]] = {f.index: set() for f in faces}
        for a, b in self.order:
            self._below[b].add(a)
            self._above[a].add(b)
        self._strata: dict[SedKey, tuple[int, list[IntVec], list[IntVec]]] = {}
        for f in faces:
            if f.sedentarity not in self._strata:
                self._strata[f.sedentarity] = _stratum_presentation(rank, f.sedentarity)
        self._star_cache: dict[int, "StarFan"] = {}

    # -- basic queries ------------------------------------------------------

    def faces_of_dim(self, k: int) -> list[Face]:
        return [f for f in self.faces if f.dim == k]

    def subfaces(self, idx: int) -> set[int]:
        return self._below[idx]

    def cofaces(self, idx: int) -> set[int]:
        return self._above[idx]

    def covers_of(self, idx: int) -> list[int]:
        d = self.faces[idx].dim
        return sorted(j for j in self._above[idx] if self.faces[j].dim == d + 1)

    def covered_by(self, idx: int) -> list[int]:
        d = self.faces[idx].dim
        return sorted(j for j in self._below[idx] if self.faces[j].dim == d - 1)

    def stratum(self, sed: SedKey) -> tuple[int, list[IntVec], list[IntVec]]:
        """(rank, projection rows, section rows) for a sedentarity stratum."""
        if sed not in self._strata:
            self._strata[sed] = _stratum_presentation(self.rank, sed)
        return self._strata[sed]

    @property
    def is_fan(self) -> bool:
        zero = tuple(Fraction(0) for _ in range(self.rank))
        return all(f.sedentarity == () and f.vertices == (zero,) for f in self.faces)

    def is_pure(self, d: Optional[int] = None) -> bool:
        d = self.dim if d is None else d
        tops = {f.index for f in self.faces_of_dim(d)}
        for f in self.faces:
            if f.dim < d and not (self._above[f.index] & tops):
                return False
        return True

    def bounded_face_indices(self) -> list[int]:
        """Faces whose closure avoids infinity: sedentarity zero and no rays."""
        return [f.index for f in self.faces if f.sedentarity == () and not f.rays]

    # -- sign function ------------------------------------------------------

    def same_sed_cover_pairs(self) -> list[tuple[int, int]]:
        out = []
        for a, b in self.order:
            if self.faces[b].dim == self.faces[a].dim + 1 and \
               self.faces[a].sedentarity == self.faces[b].sedentarity:
                out.append((a, b))
        return sorted(out)

    def direction_into(self, gamma: Face, delta: Face) -> IntVec:
        """An integer tangent vector of delta pointing from gamma into delta."""
        gverts = set(gamma.vertices)
        for v in delta.vertices:
            if v not in gverts:
                return _int_vec(tuple(a - b for a, b in zip(v, gamma.vertices[0])))
        for r in delta.rays:
            if r not in set(gamma.rays):
                return r
        raise NotCodimOneError(f"no direction from face {gamma.index} into {delta.index}")

    def sign(self, gamma_idx: int, delta_idx: int) -> int:
        """Orientation sign for a same-sedentarity codimension-one pair."""
        gamma, delta = self.faces[gamma_idx], self.faces[delta_idx]
        if gamma.sedentarity != delta.sedentarity:
            raise NotCodimOneError("faces have different sedentarity")
        if delta.dim != gamma.dim + 1 or (gamma_idx, delta_idx) not in self.order:
            raise NotCodimOneError("not a codimension-one face pair")
        u = self.direction_into(gamma, delta)
        rows = [list(map(Fraction, b)) for b in gamma.tangent] + [list(map(Fraction, u))]
        det = _det_in_basis(rows, delta.tangent)
        if det not in (1, -1):
            raise NotUnimodularError("sign undefined: pair is not unimodular")
        return det

    def infinity_sign(self, gamma_idx: int, delta_idx: int) -> int:
        """Orientation sign for a sedentarity-raising codimension-one pair.

        gamma sits in a deeper stratum; the normal is taken pointing inward,
        i.e. away from infinity.
        """
        gamma, delta = self.faces[gamma_idx], self.faces[delta_idx]
        if delta.dim != gamma.dim + 1 or (gamma_idx, delta_idx) not in self.order:
            raise NotCodimOneError("not a codimension-one face pair")
        extra = set(gamma.sedentarity) - set(delta.sedentarity)
        if len(extra) != 1:
            raise NotCodimOneError("sedentarity does not rise by one ray")
        ray_amb = next(iter(extra))
        _, p_delta, s_delta = self.stratum(delta.sedentarity)
        _, p_gamma, _ = self.stratum(gamma.sedentarity)
        rho = primitive(apply_rows(p_delta, ray_amb))
        # Map from delta's stratum to gamma's: Q = P_gamma . S_delta.
        q_rows = _compose(p_gamma, s_delta)
        lifts = []
        for b in gamma.tangent:
            lifts.append(_lift_through(q_rows, delta.tangent, b))
        rows = lifts + [[-Fraction(x) for x in rho]]
        det = _det_in_basis(rows, delta.tangent)
        if det not in (1, -1):
            raise NotUnimodularError("infinity sign undefined: pair is not unimodular")
        return det

    def incidence_sign(self, gamma_idx: int, delta_idx: int) -> int:
        if self.faces[gamma_idx].sedentarity == self.faces[delta_idx].sedentarity:
            return self.sign(gamma_idx, delta_idx)
        return self.infinity_sign(gamma_idx, delta_idx)

    def primitive_normal(self, gamma_idx: int, delta_idx: int) -> IntVec:
        """e_{delta/gamma}: the primitive generator of delta's ray in N^gamma."""
        gamma, delta = self.faces[gamma_idx], self.faces[delta_idx]
        if gamma.sedentarity != delta.sedentarity:
            raise NotCodimOneError("faces have different sedentarity")
        if delta.dim != gamma.dim + 1 or (gamma_idx, delta_idx) not in self.order:
            raise NotCodimOneError("not a codimension-one face pair")
        srank, _, _ = self.stratum(gamma.sedentarity)
        proj, _ = quotient_presentation([list(b) for b in gamma.tangent], srank)
        u = self.direction_into(gamma, delta)
        return primitive(apply_rows(proj, u))

    def star_fan(self, idx: int) -> "StarFan":
        if idx not in self._star_cache:
            self._star_cache[idx] = _build_star_fan(self, idx)
        return self._star_cache[idx]


def _compose(a_rows: Sequence[Sequence[int]], b_section: Sequence[Sequence[int]]):
    """Rows of A . S where S's columns are the given section rows."""
    return [tuple(sum(ar[j] * bs[j] for j in range(len(bs))) for bs in b_section) for ar in a_rows]


def _lift_through(q_rows, delta_tangent, target) -> list[Fraction]:
    """Some w in span(delta_tangent) with Q.w = target (rational)."""
    cols = len(delta_tangent)
    m = RationalMatrix(len(q_rows), cols)
    for j, t in enumerate(delta_tangent):
        img = apply_rows(q_rows, t)
        for i, v in enumerate(img):
            m[i, j] = Fraction(v)
    c = solve(m, [Fraction(x) for x in target])
    if c is None:
        raise NotCodimOneError("tangent lift failed")
    n = len(delta_tangent[0])
    return [sum(c[j] * Fraction(delta_tangent[j][i]) for j in range(cols)) for i in range(n)]


def _det_in_basis(rows: list[list[Fraction]], basis: tuple[IntVec, ...]) -> Fraction:
    """Determinant of the coordinate matrix of rows over the given basis."""
    k = len(basis)
    if len(rows) != k:
        raise NotCodimOneError("dimension mismatch in orientation computation")
    if k == 0:
        return Fraction(1)
    bmat = RationalMatrix(len(basis[0]), k)
    for j, b in enumerate(basis):
        for i, v in enumerate(b):
            bmat[i, j] = Fraction(v)
    coords = []
    for r in rows:
        c = solve(bmat, r)
        if c is None:
            raise NotCodimOneError("vector outside face tangent space")
        coords.append(c)
    det = _det_fraction(coords)
    return det


def _det_fraction(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    a = [row[:] for row in a]
    det = Fraction(1)
    for k in range(n):
        piv = None
        for i in range(k, n):
            if a[i][k] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def _stratum_presentation(rank: int, sed: SedKey):
    if not sed:
        eye = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
        return rank, eye, eye
    proj, section = quotient_presentation([list(r) for r in sed], rank)
    return rank - len(sed), [tuple(r) for r in proj], [tuple(s) for s in section]


# ---------------------------------------------------------------------------
# Construction of plain complexes

def build_complex(rank: int, vertices: Sequence[Sequence], rays: Sequence[Sequence[int]],
                  face_specs: Sequence[tuple[Sequence[int], Sequence[int]]],
                  validate: bool = True) -> FaceComplex:
    """Build a complex in R^rank from vertex/ray pools and (V, R) index pairs.

    Faces must be simplicial; the closure and pairwise-intersection axioms
    are checked when validate is set.
    """
    vpool = [tuple(rat(x) for x in v) for v in vertices]
    rpool = [primitive(tuple(int(x) for x in r)) for r in rays]
    for v in vpool:
        if len(v) != rank:
            raise InputFormatError("vertex of wrong length")
    for r in rpool:
        if len(r) != rank:
            raise InputFormatError("ray of wrong length")

    seen: dict[tuple[frozenset, frozenset], tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for vs, rs in face_specs:
        if not vs:
            raise InputFormatError("every face needs at least one vertex")
        if any(not 0 <= v < len(vpool) for v in vs) or any(not 0 <= r < len(rpool) for r in rs):
            raise InputFormatError(f"face {vs}/{rs} references a missing vertex or ray")
        key = (frozenset(vs), frozenset(rs))
        seen[key] = (tuple(sorted(set(vs))), tuple(sorted(set(rs))))
    if validate:
        for vs, rs in list(seen.values()):
            for kv in range(1, len(vs) + 1):
                for sub_v in itertools.combinations(vs, kv):
                    for kr in range(0, len(rs) + 1):
                        for sub_r in itertools.combinations(rs, kr):
                            if (frozenset(sub_v), frozenset(sub_r)) not in seen:
                                raise InputFormatError(
                                    f"closure violated: face {sub_v}/{sub_r} missing")

    specs = sorted(seen.values(), key=lambda fr: (len(fr[0]) + len(fr[1]), fr))
    faces: list[Face] = []
    for i, (vs, rs) in enumerate(specs):
        verts = [vpool[j] for j in vs]
        ras = [rpool[j] for j in rs]
        gens_matrix = []
        v0 = verts[0]
        for v in verts[1:]:
            gens_matrix.append([rat(a) - rat(b) for a, b in zip(v, v0)])
        gens_matrix.extend([[Fraction(x) for x in r] for r in ras])
        if gens_matrix:
            from .linalg import rank as qrank
            if qrank(RationalMatrix.from_rows(gens_matrix)) != len(gens_matrix):
                raise InputFormatError(f"face {vs}/{rs} is not simplicial")
        faces.append(_make_face(i, verts, ras, (), [(i, ())]))

    order = set()
    spec_index = {(frozenset(vs), frozenset(rs)): i for i, (vs, rs) in enumerate(specs)}
    for i, (vs, rs) in enumerate(specs):
        for j, (vs2, rs2) in enumerate(specs):
            if i != j and set(vs) <= set(vs2) and set(rs) <= set(rs2):
                order.add((i, j))

    cx = FaceComplex(rank, faces, order)
    if validate:
        _validate_intersections(cx, specs, vpool, rpool, spec_index)
    return cx


def _validate_intersections(cx: FaceComplex, specs, vpool, rpool, spec_index) -> None:
    """Pairwise intersections must be the face spanned by shared generators."""
    n = len(specs)
    for i in range(n):
        for j in range(i + 1, n):
            vs1, rs1 = specs[i]
            vs2, rs2 = specs[j]
            if set(vs1) <= set(vs2) and set(rs1) <= set(rs2):
                continue
            if set(vs2) <= set(vs1) and set(rs2) <= set(rs1):
                continue
            _check_pair_intersection(cx.rank, [vpool[k] for k in vs1], [rpool[k] for k in rs1],
                                     [vpool[k] for k in vs2], [rpool[k] for k in rs2],
                                     shared_v=[vpool[k] for k in set(vs1) & set(vs2)],
                                     shared_r=[rpool[k] for k in set(rs1) & set(rs2)])
            common = (frozenset(set(vs1) & set(vs2)), frozenset(set(rs1) & set(rs2)))
            if set(vs1) & set(vs2) and common not in spec_index:
                raise InputFormatError("intersection axiom violated: common face missing")


def _check_pair_intersection(rank, v1, r1, v2, r2, shared_v, shared_r) -> None:
    """Exact check that P1 and P2 meet exactly in their shared-generator face."""
    g1 = [("v", v) for v in v1] + [("r", tuple(map(Fraction, r))) for r in r1]
    g2 = [("v", v) for v in v2] + [("r", tuple(map(Fraction, r))) for r in r2]
    nv = len(g1) + len(g2)
    eqs: list[tuple[list[Fraction], Fraction]] = []
    for c in range(rank):
        row = [g[1][c] for g in g1] + [-g[1][c] for g in g2]
        eqs.append((row, Fraction(0)))
    row = [Fraction(1) if g[0] == "v" else Fraction(0) for g in g1] + [Fraction(0)] * len(g2)
    eqs.append((row, Fraction(-1)))
    row = [Fraction(0)] * len(g1) + [Fraction(1) if g[0] == "v" else Fraction(0) for g in g2]
    eqs.append((row, Fraction(-1)))
    mat = RationalMatrix.from_rows([e[0] for e in eqs])
    rhs = [-e[1] for e in eqs]
    part = solve(mat, rhs)
    if part is None:
        return  # empty intersection
    from .linalg import kernel_basis
    kern = kernel_basis(mat).basis
    npar = len(kern)

    def coord_expr(idx):
        coeffs = tuple(Fraction(k[idx]) for k in kern)
        return coeffs, part[idx]

    shared_vset = {tuple(v) for v in shared_v}
    shared_rset = {tuple(map(Fraction, r)) for r in shared_r}
    extra_coords = []
    for pos, (kind, vec) in enumerate(g1 + g2):
        ok = (kind == "v" and tuple(vec) in shared_vset) or (kind == "r" and tuple(vec) in shared_rset)
        if not ok:
            extra_coords.append(pos)
    base = []
    for pos in range(nv):
        coeffs, const = coord_expr(pos)
        base.append((coeffs, const, False))
    if not shared_vset:
        if fm_feasible(base, npar):
            raise InputFormatError("intersection axiom violated: disjoint faces overlap")
        return
    for pos in extra_coords:
        coeffs, const = coord_expr(pos)
        if fm_feasible(base + [(coeffs, const, True)], npar):
            raise InputFormatError("intersection axiom violated: overlap beyond common face")


# ---------------------------------------------------------------------------
# Fans

def make_fan(rank: int, cones: Sequence[Sequence[IntVec]], validate: bool = True) -> FaceComplex:
    """Build a fan from a list of cones given by primitive ray tuples.

    The face closure (all ray subsets) is added automatically.
    """
    rays: list[IntVec] = []
    ray_index: dict[IntVec, int] = {}
    cone_sets: set[frozenset[int]] = set()
    for cone in cones:
        idxs = []
        for r in cone:
            r = primitive(tuple(int(x) for x in r))
            if r not in ray_index:
                ray_index[r] = len(rays)
                rays.append(r)
            idxs.append(ray_index[r])
        for k in range(len(idxs) + 1):
            for sub in itertools.combinations(sorted(idxs), k):
                cone_sets.add(frozenset(sub))
    cone_sets.add(frozenset())
    origin = tuple(Fraction(0) for _ in range(rank))
    specs = [([0], sorted(s)) for s in cone_sets]
    return build_complex(rank, [origin], rays, specs, validate=validate)


def recession_fan(y: FaceComplex) -> FaceComplex:
    """The fan of recession cones of the faces of y; rejects improper overlaps."""
    if any(f.sedentarity != () for f in y.faces):
        raise NotAFanError("recession fan needs a complex in a single R^n")
    cone_sets: set[tuple[IntVec, ...]] = set()
    for f in y.faces:
        cone_sets.add(tuple(sorted(f.rays)))
    cones = sorted(cone_sets)
    for c in cones:
        for k in range(len(c)):
            for sub in itertools.combinations(c, k):
                if tuple(sorted(sub)) not in cone_sets:
                    raise NotAFanError("recession cones are not closed under faces")
    for c1, c2 in itertools.combinations(cones, 2):
        if not _cones_meet_properly(y.rank, c1, c2):
            raise NotAFanError(f"recession cones {c1} and {c2} overlap improperly")
    return make_fan(y.rank, [list(c) for c in cones], validate=False)


def _cones_meet_properly(rank: int, r1: tuple[IntVec, ...], r2: tuple[IntVec, ...]) -> bool:
    """cone(r1) and cone(r2) must intersect exactly in cone(r1 & r2)."""
    common = set(r1) & set(r2)
    nv = len(r1) + len(r2)
    if nv == 0:
        return True
    eqs = []
    for c in range(rank):
        eqs.append([Fraction(r[c]) for r in r1] + [-Fraction(r[c]) for r in r2])
    mat = RationalMatrix.from_rows(eqs) if eqs else RationalMatrix(0, nv)
    from .linalg import kernel_basis
    kern = kernel_basis(mat).basis
    npar = len(kern)
    base = []
    for pos in range(nv):
        coeffs = tuple(Fraction(k[pos]) for k in kern)
        base.append((coeffs, Fraction(0), False))
    gens = list(r1) + list(r2)
    for pos, g in enumerate(gens):
        if g in common:
            continue
        coeffs = tuple(Fraction(k[pos]) for k in kern)
        if fm_feasible(base + [(coeffs, Fraction(0), True)], npar):
            return False
    return True


# ---------------------------------------------------------------------------
# Canonical compactification

def compactify(y: FaceComplex) -> FaceComplex:
    """Face complex of the canonical compactification of y.

    Faces are merged (gamma, sigma) pairs with sigma a face of the recession
    cone of gamma, realized by projecting gamma to the sigma-stratum;
    sedentarity of the new face is sigma, and the face order follows the
    orbit-stratum combinatorics.
    """
    rec = recession_fan(y)
    for f in rec.faces:
        if not f.unimodular:
            raise NotUnimodularError("recession fan is not unimodular")

    records: dict[tuple, dict] = {}
    for f in y.faces:
        ray_set = list(f.rays)
        for k in range(len(ray_set) + 1):
            for sub in itertools.combinations(sorted(ray_set), k):
                sed: SedKey = tuple(sorted(sub))
                _, proj, _ = _sed_presented(y, sed)
                pverts = {apply_rows_frac(proj, v) for v in f.vertices}
                prays = set()
                for r in f.rays:
                    img = apply_rows(proj, r)
                    if any(img):
                        prays.add(primitive(img))
                key = (sed, frozenset(pverts), frozenset(prays))
                rec_entry = records.setdefault(key, {"pairs": set(), "verts": pverts, "rays": prays, "sed": sed})
                rec_entry["pairs"].add((f.index, sed))

    keys = sorted(records, key=lambda k: (len(records[k]["verts"]) - 1 + len(records[k]["rays"]),
                                          k[0], tuple(sorted(k[1])), tuple(sorted(k[2]))))
    faces = []
    key_index = {}
    for i, k in enumerate(keys):
        entry = records[k]
        faces.append(_make_face(i, entry["verts"], entry["rays"], entry["sed"],
                                sorted(entry["pairs"])))
        key_index[k] = i

    order = set()
    for i, ki in enumerate(keys):
        for j, kj in enumerate(keys):
            if i == j:
                continue
            if _pair_leq(y, records[ki]["pairs"], records[kj]["pairs"]):
                order.add((i, j))
    return FaceComplex(y.rank, faces, order, open_complex=y)


def _pair_leq(y: FaceComplex, pairs_a, pairs_b) -> bool:
    for (ga, sa) in pairs_a:
        for (gb, sb) in pairs_b:
            if set(sb) <= set(sa) and (ga == gb or (ga, gb) in y.order):
                return True
    return False


def _sed_presented(y: FaceComplex, sed: SedKey):
    if not hasattr(y, "_sed_pres"):
        y._sed_pres = {}
    if sed not in y._sed_pres:
        y._sed_pres[sed] = _stratum_presentation(y.rank, sed)
    return y._sed_pres[sed]


def apply_rows_frac(rows: Sequence[Sequence[int]], vec: Sequence[Fraction]) -> Point:
    return tuple(sum(Fraction(r[j]) * rat(vec[j]) for j in range(len(vec))) for r in rows)


# ---------------------------------------------------------------------------
# Star fans

@dataclass
class StarFan:
    """The fan of projected cofaces of a face, with labels back to the complex.

    Rays are labelled by the covering faces, cones by the cofaces they come
    from; the zero cone is labelled by the base face itself.
    """

    complex: FaceComplex
    base: int
    rank: int
    ray_labels: tuple[int, ...]
    ray_vectors: tuple[IntVec, ...]
    cones: tuple[tuple[int, frozenset], ...]  # (coface label, ray positions)

    def __post_init__(self):
        self._cone_by_rays = {rays: label for label, rays in self.cones}
        self._cone_by_label = {label: rays for label, rays in self.cones}
        self._ray_pos = {label: i for i, label in enumerate(self.ray_labels)}

    @property
    def dim(self) -> int:
        return max((len(r) for _, r in self.cones), default=0)

    def is_cone(self, ray_positions: frozenset) -> bool:
        return ray_positions in self._cone_by_rays

    def cone_label(self, ray_positions: frozenset) -> int:
        return self._cone_by_rays[ray_positions]

    def cone_rays(self, label: int) -> frozenset:
        return self._cone_by_label[label]

    def ray_position(self, label: int) -> int:
        return self._ray_pos[label]

    def cones_of_dim(self, k: int) -> list[tuple[int, frozenset]]:
        return sorted(((lbl, rays) for lbl, rays in self.cones if len(rays) == k),
                      key=lambda c: tuple(sorted(c[1])))

    @property
    def unimodular(self) -> bool:
        for _, rays in self.cones:
            if not spans_unimodularly([self.ray_vectors[i] for i in sorted(rays)]):
                return False
        return True


def _build_star_fan(cx: FaceComplex, idx: int) -> StarFan:
    base = cx.faces[idx]
    srank, _, _ = cx.stratum(base.sedentarity)
    qrank = srank - base.dim
    proj, _ = quotient_presentation([list(b) for b in base.tangent], srank)
    cover_ids = [j for j in cx.covers_of(idx) if cx.faces[j].sedentarity == base.sedentarity]
    ray_labels = tuple(cover_ids)
    ray_vectors = []
    for j in cover_ids:
        u = cx.direction_into(base, cx.faces[j])
        ray_vectors.append(primitive(apply_rows(proj, u)))
    cones = [(idx, frozenset())]
    for eta in sorted(cx.cofaces(idx)):
        fe = cx.faces[eta]
        if fe.sedentarity != base.sedentarity:
            continue
        through = frozenset(cover_ids.index(z) for z in cover_ids
                            if z == eta or (z, eta) in cx.order)
        if len(through) != fe.dim - base.dim:
            raise NotAFanError("star fan interval has unexpected rank")
        cones.append((eta, through))
    return StarFan(cx, idx, qrank, ray_labels, tuple(ray_vectors), tuple(cones))


def star_fan(y: FaceComplex, delta_idx: int) -> StarFan:
    return y.star_fan(delta_idx)


# ---------------------------------------------------------------------------
# Products (used for fixtures such as the plane built from two line complexes)

def product_complex(a: FaceComplex, b: FaceComplex) -> FaceComplex:
    """Product of two plain complexes; all product faces must stay simplicial."""
    verts = []
    vmap = {}
    rays = []
    rmap = {}
    specs = []
    for fa in a.faces:
        for fb in b.faces:
            vs = []
            for va in fa.vertices:
                for vb in fb.vertices:
                    v = va + vb
                    if v not in vmap:
                        vmap[v] = len(verts)
                        verts.append(v)
                    vs.append(vmap[v])
            rs = []
            for ra in fa.rays:
                r = ra + tuple(0 for _ in range(b.rank))
                if r not in rmap:
                    rmap[r] = len(rays)
                    rays.append(r)
                rs.append(rmap[r])
            for rb in fb.rays:
                r = tuple(0 for _ in range(a.rank)) + rb
                if r not in rmap:
                    rmap[r] = len(rays)
                    rays.append(r)
                rs.append(rmap[r])
            specs.append((vs, rs))
    return build_complex(a.rank + b.rank, verts, rays, specs)


# ---------------------------------------------------------------------------
# JSON interface

def complex_to_json(y: FaceComplex) -> dict:
    verts = sorted({v for f in y.faces for v in f.vertices})
    rays = sorted({r for f in y.faces for r in f.rays})
    vmap = {v: i for i, v in enumerate(verts)}
    rmap = {r: i for i, r in enumerate(rays)}
    entries = []
    for f in y.faces:
        vs = sorted(vmap[v] for v in f.vertices)
        rs = sorted(rmap[r] for r in f.rays)
        entries.append((len(vs) + len(rs), tuple(vs), tuple(rs)))
    entries.sort()
    return {
        "lattice_rank": y.rank,
        "vertices": [[str(x) for x in v] for v in verts],
        "rays": [list(r) for r in rays],
        "faces": [{"vertices": list(vs), "rays": list(rs)} for _, vs, rs in entries],
    }


def complex_from_json(data: dict, validate: bool = True) -> FaceComplex:
    try:
        rank = int(data["lattice_rank"])
        vertices = [[rat(x) for x in v] for v in data.get("vertices", [])]
        rays = [[int(x) for x in r] for r in data.get("rays", [])]
        face_specs = [(spec.get("vertices", []), spec.get("rays", []))
                      for spec in data["faces"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed complex JSON: {exc}") from exc
    if not vertices:
        # Fan form: implicit origin vertex.
        vertices = [[Fraction(0)] * rank]
        face_specs = [([0], rs) for _, rs in face_specs]
        has_origin = any(not rs for _, rs in face_specs)
        if not has_origin:
            face_specs.append(([0], []))
    return build_complex(rank, vertices, rays, face_specs, validate=validate)


def load_complex(path: str, validate: bool = True) -> FaceComplex:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return complex_from_json(data, validate=validate)
