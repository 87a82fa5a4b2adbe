"""Multi-tangent coefficient spaces, cellular cochain complexes, and tropical
cohomology of compactified complexes.

The coefficient space at a face sums the p-th wedge powers of the tangent
spaces of its cofaces of equal sedentarity, inside the wedge power of the
face's stratum.  The cochain differential runs over all codimension-one
incidences of the face order: same-sedentarity incidences contribute duals
of inclusions, sedentarity-raising incidences contribute duals of the wedge
power of the stratum projection, each multiplied by the orientation sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import DegeneratePairingError
from .linalg import RationalMatrix, kernel_basis
from .polyhedral import FaceComplex, _compose, _det_fraction

Vec = list[Fraction]


# ---------------------------------------------------------------------------
# Small quotient-space helper (cohomology = cocycles / coboundaries)

def _leading(vec: list[Fraction]) -> Optional[int]:
    return next((j for j, v in enumerate(vec) if v != 0), None)


def _rref_insert_plain(pivots: dict[int, list[Fraction]], vec: list[Fraction]) -> bool:
    while True:
        lead = _leading(vec)
        if lead is None:
            return False
        if lead in pivots:
            c = vec[lead]
            prow = pivots[lead]
            for j in range(lead, len(vec)):
                vec[j] -= c * prow[j]
            continue
        inv = vec[lead]
        pivots[lead] = [v / inv for v in vec]
        return True


class QuotientBasis:
    """Basis handling for a quotient (span Z)/(span B) of row vectors.

    Stored rows satisfy: row = sum_j coeffs[j] * reduce_b(representative_j),
    so coordinates of an arbitrary vector's class are recovered by tracked
    elimination.
    """

    def __init__(self, ambient_dim: int, zrows: Sequence[Sequence[Fraction]],
                 brows: Sequence[Sequence[Fraction]]):
        self.ambient_dim = ambient_dim
        self._b_pivots: dict[int, list[Fraction]] = {}
        for r in brows:
            _rref_insert_plain(self._b_pivots, [Fraction(x) for x in r])
        self.representatives: list[list[Fraction]] = []
        self._rep_pivots: dict[int, tuple[list[Fraction], list[Fraction]]] = {}
        for r in zrows:
            vec = self._reduce_b([Fraction(x) for x in r])
            coeffs = [Fraction(0)] * len(self.representatives)
            lead = self._track_eliminate(vec, coeffs)
            if lead is None:
                continue
            inv = vec[lead]
            row = [v / inv for v in vec]
            cf = [c / inv for c in coeffs] + [Fraction(1) / inv]
            self.representatives.append([Fraction(x) for x in r])
            self._rep_pivots[lead] = (row, cf)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def _reduce_b(self, vec: list[Fraction]) -> list[Fraction]:
        # Rows are echelon (zeros before each pivot), so one increasing pass
        # over pivot columns clears them all.
        for lead in sorted(self._b_pivots):
            c = vec[lead]
            if c != 0:
                prow = self._b_pivots[lead]
                for j in range(len(vec)):
                    vec[j] -= c * prow[j]
        return vec

    def _track_eliminate(self, vec: list[Fraction], coeffs: list[Fraction]) -> Optional[int]:
        """Reduce vec by stored pivot rows, accumulating rep coefficients;
        returns the leading index left over, or None when fully reduced."""
        while True:
            lead = _leading(vec)
            if lead is None:
                return None
            if lead not in self._rep_pivots:
                return lead
            prow, pcf = self._rep_pivots[lead]
            c = vec[lead]
            for j in range(len(vec)):
                vec[j] -= c * prow[j]
            for j, pc in enumerate(pcf):
                coeffs[j] -= c * pc

    def coordinates(self, vec: Sequence[Fraction]) -> list[Fraction]:
        """Coordinates of a vector's class over the representative basis."""
        v = self._reduce_b([Fraction(x) for x in vec])
        coeffs = [Fraction(0)] * self.dim
        lead = self._track_eliminate(v, coeffs)
        if lead is not None:
            raise DegeneratePairingError("vector is not a cocycle of this space")
        return [-c for c in coeffs]

    def is_zero_class(self, vec: Sequence[Fraction]) -> bool:
        return all(c == 0 for c in self.coordinates(vec))


# ---------------------------------------------------------------------------
# Graded complexes

@dataclass
class GradedComplex:
    """A bounded cochain complex of finite-dimensional Q vector spaces.

    diffs[k] maps degree k to degree k+1 and has shape (dim_{k+1}, dim_k).
    """

    terms: dict[int, int]
    diffs: dict[int, RationalMatrix]
    labels: dict[int, list] = field(default_factory=dict)

    def dim(self, k: int) -> int:
        return self.terms.get(k, 0)

    @property
    def support(self) -> list[int]:
        return sorted(k for k, d in self.terms.items() if d > 0)

    def differential(self, k: int) -> RationalMatrix:
        if k in self.diffs:
            return self.diffs[k]
        return RationalMatrix(self.dim(k + 1), self.dim(k))

    def check(self) -> bool:
        """d o d = 0, verified exactly."""
        for k in list(self.terms):
            m = self.differential(k + 1).matmul(self.differential(k))
            if not m.is_zero():
                return False
        return True

    def cocycle_rows(self, k: int) -> list[list[Fraction]]:
        n = self.dim(k)
        if n == 0:
            return []
        d = self.differential(k)
        if d.is_zero():
            return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        return [list(v) for v in kernel_basis(d).basis]

    def coboundary_rows(self, k: int) -> list[list[Fraction]]:
        d = self.differential(k - 1)
        return [d.column(j) for j in range(d.cols)] if self.dim(k) else []

    def h_basis(self, k: int) -> QuotientBasis:
        return QuotientBasis(self.dim(k), self.cocycle_rows(k), self.coboundary_rows(k))

    def h_dim(self, k: int) -> int:
        return self.h_basis(k).dim

    def h_dims(self) -> dict[int, int]:
        return {k: self.h_dim(k) for k in self.support}

    def shift(self, n: int) -> "GradedComplex":
        """The complex E[n] with E[n]^k = E^(n+k); differentials keep signs
        (only ranks and maps are consumed downstream)."""
        return GradedComplex({k - n: v for k, v in self.terms.items()},
                             {k - n: m for k, m in self.diffs.items()},
                             {k - n: v for k, v in self.labels.items()})


def induced_map(src: GradedComplex, dst: GradedComplex,
                chain_maps: dict[int, RationalMatrix], k: int,
                src_h: Optional[QuotientBasis] = None,
                dst_h: Optional[QuotientBasis] = None) -> RationalMatrix:
    """Matrix of the induced map H^k(src) -> H^k(dst) of a chain map."""
    src_h = src_h or src.h_basis(k)
    dst_h = dst_h or dst.h_basis(k)
    cm = chain_maps.get(k)
    out = RationalMatrix(dst_h.dim, src_h.dim)
    for j, rep in enumerate(src_h.representatives):
        img = cm.mul_vec(rep) if cm is not None else [Fraction(0)] * dst.dim(k)
        for i, c in enumerate(dst_h.coordinates(img)):
            out[i, j] = c
    return out


# ---------------------------------------------------------------------------
# Wedge coordinates

def wedge_vector(vectors: Sequence[Sequence], m: int) -> Vec:
    """Coordinates of v_1 ^ ... ^ v_p in the lex basis of Lambda^p(Q^m)."""
    p = len(vectors)
    coords = []
    for idx in itertools.combinations(range(m), p):
        minor = [[Fraction(v[i]) for i in idx] for v in vectors]
        coords.append(_det_fraction(minor))
    return coords


def wedge_map_matrix(q_rows: Sequence[Sequence[int]], m_src: int, p: int) -> RationalMatrix:
    """Matrix of Lambda^p(Q) in lex wedge bases, for Q given by rows."""
    m_dst = len(q_rows)
    src_idx = list(itertools.combinations(range(m_src), p))
    dst_idx = list(itertools.combinations(range(m_dst), p))
    out = RationalMatrix(len(dst_idx), len(src_idx))
    for j, I in enumerate(src_idx):
        for i, J in enumerate(dst_idx):
            minor = [[Fraction(q_rows[r][c]) for c in I] for r in J]
            out[i, j] = _det_fraction(minor)
    return out


class CoefficientSpace:
    """F_p at a face: the sum of wedge powers of same-sedentarity coface
    tangents, with a canonical reduced basis."""

    def __init__(self, complex_: FaceComplex, face_idx: int, p: int):
        self.face = face_idx
        self.p = p
        face = complex_.faces[face_idx]
        m, _, _ = complex_.stratum(face.sedentarity)
        self.stratum_rank = m
        self.ambient_dim = _binom(m, p)
        rows = []
        for eta in sorted({face_idx} | {
                j for j in complex_.cofaces(face_idx)
                if complex_.faces[j].sedentarity == face.sedentarity}):
            tangent = complex_.faces[eta].tangent
            if len(tangent) < p:
                continue
            for sub in itertools.combinations(tangent, p):
                rows.append(wedge_vector(sub, m))
        self._pivots: dict[int, list[Fraction]] = {}
        self.basis: list[list[Fraction]] = []
        for r in rows:
            r0 = list(r)
            if self._insert(r0):
                pass
        self.basis = [self._pivots[k] for k in sorted(self._pivots)]

    def _insert(self, vec: list[Fraction]) -> bool:
        while True:
            lead = next((j for j, v in enumerate(vec) if v != 0), None)
            if lead is None:
                return False
            if lead in self._pivots:
                c = vec[lead]
                prow = self._pivots[lead]
                for j in range(lead, len(vec)):
                    vec[j] -= c * prow[j]
                continue
            inv = vec[lead]
            self._pivots[lead] = [v / inv for v in vec]
            return True

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, vec: Sequence[Fraction]) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        coords_by_lead = {}
        while True:
            lead = next((j for j, x in enumerate(v) if x != 0), None)
            if lead is None:
                break
            if lead not in self._pivots:
                raise DegeneratePairingError("vector outside coefficient space")
            c = v[lead]
            prow = self._pivots[lead]
            for j in range(len(v)):
                v[j] -= c * prow[j]
            coords_by_lead[lead] = c
        return [coords_by_lead.get(k, Fraction(0)) for k in sorted(self._pivots)]


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def coefficient_space(x: FaceComplex, delta_idx: int, p: int) -> CoefficientSpace:
    return _fp_spaces(x, p)[delta_idx]


def _fp_spaces(x: FaceComplex, p: int) -> dict[int, CoefficientSpace]:
    cache = getattr(x, "_fp_cache", None)
    if cache is None:
        cache = {}
        x._fp_cache = cache
    if p not in cache:
        cache[p] = {f.index: CoefficientSpace(x, f.index, p) for f in x.faces}
    return cache[p]


def _chain_map_block(x: FaceComplex, spaces, gamma: int, delta: int) -> RationalMatrix:
    """Matrix of F_p(delta) -> F_p(gamma) for a codimension-one incidence."""
    fg, fd = x.faces[gamma], x.faces[delta]
    sg, sd = spaces[gamma], spaces[delta]
    out = RationalMatrix(sg.dim, sd.dim)
    if sd.dim == 0:
        return out
    if fg.sedentarity == fd.sedentarity:
        for j, b in enumerate(sd.basis):
            for i, c in enumerate(sg.coordinates(b)):
                out[i, j] = c
        return out
    _, p_gamma, _ = x.stratum(fg.sedentarity)
    _, _, s_delta = x.stratum(fd.sedentarity)
    q_rows = _compose(p_gamma, s_delta)
    wm = wedge_map_matrix(q_rows, sd.stratum_rank, sd.p)
    for j, b in enumerate(sd.basis):
        img = wm.mul_vec(b)
        if all(v == 0 for v in img):
            continue
        for i, c in enumerate(sg.coordinates(img)):
            out[i, j] = c
    return out


def cochain_complex(x: FaceComplex, p: int) -> GradedComplex:
    """The cellular cochain complex C^{p,*} with signed dual differentials."""
    cache = getattr(x, "_cochain_cache", None)
    if cache is None:
        cache = {}
        x._cochain_cache = cache
    if p in cache:
        return cache[p]
    spaces = _fp_spaces(x, p)
    by_dim: dict[int, list[int]] = {}
    for f in x.faces:
        by_dim.setdefault(f.dim, []).append(f.index)
    for v in by_dim.values():
        v.sort()
    offsets: dict[int, dict[int, int]] = {}
    terms = {}
    labels = {}
    for q, idxs in by_dim.items():
        off = {}
        pos = 0
        lab = []
        for i in idxs:
            off[i] = pos
            pos += spaces[i].dim
            lab.extend((i, t) for t in range(spaces[i].dim))
        offsets[q] = off
        terms[q] = pos
        labels[q] = lab
    diffs = {}
    for q in sorted(terms):
        if q + 1 not in terms:
            continue
        d = RationalMatrix(terms[q + 1], terms[q])
        for delta in by_dim.get(q + 1, []):
            for gamma in x.covered_by(delta):
                sign = x.incidence_sign(gamma, delta)
                block = _chain_map_block(x, spaces, gamma, delta)
                # Cochain differential: transpose of the chain-level block.
                for (i, j), v in block.entries.items():
                    d[offsets[q + 1][delta] + j, offsets[q][gamma] + i] = \
                        d[offsets[q + 1][delta] + j, offsets[q][gamma] + i] + sign * v
        diffs[q] = d
    gc = GradedComplex(terms, diffs, labels)
    assert gc.check(), "cellular differential does not square to zero"
    cache[p] = gc
    return gc


def tropical_cohomology(x: FaceComplex, p: int) -> list[int]:
    """Dimensions h^{p,q} for q = 0..dim(x)."""
    gc = cochain_complex(x, p)
    return [gc.h_dim(q) for q in range(x.dim + 1)]


def hodge_diamond(x: FaceComplex) -> list[list[int]]:
    return [tropical_cohomology(x, p) for p in range(x.dim + 1)]


def euler_characteristics_match(x: FaceComplex, p: int) -> bool:
    gc = cochain_complex(x, p)
    chain_side = sum((-1) ** q * gc.dim(q) for q in range(x.dim + 1))
    h_side = sum((-1) ** q * gc.h_dim(q) for q in range(x.dim + 1))
    return chain_side == h_side


def poincare_pairing(x: FaceComplex, p: int) -> dict[int, list[list[Fraction]]]:
    """Poincare pairing matrices H^{p,q} x H^{d-p,d-q} for all q.

    Realized through the Steenbrink polarization, which restricts to the
    Poincare duality pairing on tropical cohomology; each returned matrix
    must be square and nondegenerate, else DegeneratePairingError.
    """
    from .steenbrink import build_steenbrink, cohomology_pairing_matrix

    st = build_steenbrink(x)
    d = st.dim
    out = {}
    for q in range(d + 1):
        mat = cohomology_pairing_matrix(st, p, q)
        out[q] = mat
        n = len(mat)
        m = len(mat[0]) if mat else 0
        if n != m:
            raise DegeneratePairingError(f"pairing block (p={p},q={q}) is not square")
        if n:
            from .linalg import rank as _rank

            if _rank(RationalMatrix.from_rows(mat)) != n:
                raise DegeneratePairingError(f"pairing block (p={p},q={q}) degenerate")
    return out
