"""Exact linear algebra over the rationals.

Rank, kernel and image bases, particular solutions and quotient dimensions,
computed by fraction-free (Bareiss) elimination on integer-scaled rows with
deterministic pivoting: pivots are chosen column by column, taking the first
row with a nonzero entry.  All results are exact; there is no tolerance
anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import NotASubspaceError

Rational = Fraction

# Matrices narrower than this are eliminated on dense row lists; wider ones
# on sparse row dicts.
_DENSE_COLS = 64


def rat(value) -> Fraction:
    """Parse a rational from an int, Fraction, or a "p/q" / "p" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def fmt_rat(value: Fraction) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    return str(Fraction(value))


class RationalMatrix:
    """A rows x cols matrix over Q with sparse entry storage."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[dict] = None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = v

    @classmethod
    def from_rows(cls, data: Sequence[Sequence]) -> "RationalMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        m = cls(rows, cols)
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                m[i, j] = rat(v)
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        m = cls(n, n)
        for i in range(n):
            m[i, i] = Fraction(1)
        return m

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def __setitem__(self, key, value) -> None:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry {key} out of bounds for {self.rows}x{self.cols}")
        v = rat(value)
        if v == 0:
            self.entries.pop(key, None)
        else:
            self.entries[key] = v

    def row(self, i: int) -> list[Fraction]:
        return [self[i, j] for j in range(self.cols)]

    def column(self, j: int) -> list[Fraction]:
        return [self[i, j] for i in range(self.rows)]

    def to_lists(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        t = RationalMatrix(self.cols, self.rows)
        for (i, j), v in self.entries.items():
            t.entries[(j, i)] = v
        return t

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, dict[int, Fraction]] = {}
        for (i, k), v in other.entries.items():
            by_row.setdefault(i, {})[k] = v
        out = RationalMatrix(self.rows, other.cols)
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in self.entries.items():
            for k, w in by_row.get(j, {}).items():
                key = (i, k)
                acc[key] = acc.get(key, Fraction(0)) + v * w
        for key, v in acc.items():
            if v != 0:
                out.entries[key] = v
        return out

    def mul_vec(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * rat(vec[j])
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"RationalMatrix({self.rows}x{self.cols}, {len(self.entries)} nonzero)"


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of Q^n given by an independent basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for v in self.basis:
            if len(v) != self.ambient_dim:
                raise ValueError("basis vector of wrong length")
        if self.basis and rank(RationalMatrix.from_rows(self.basis)) != len(self.basis):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)


def _integer_rows(m: RationalMatrix) -> list:
    """Scale each row by the lcm of denominators; returns dense lists or
    sparse dicts depending on the width."""
    dense = m.cols < _DENSE_COLS
    rows = []
    for i in range(m.rows):
        items = [(j, v) for (r, j), v in m.entries.items() if r == i]
        scale = 1
        for _, v in items:
            scale = scale * v.denominator // _gcd(scale, v.denominator)
        if dense:
            row = [0] * m.cols
            for j, v in items:
                row[j] = int(v * scale)
            rows.append(row)
        else:
            rows.append({j: int(v * scale) for j, v in items if v != 0})
    return rows


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _bareiss(rows: list, cols: int) -> tuple[list, list[tuple[int, int]]]:
    """Fraction-free elimination in place; returns (rows, pivots).

    Pivot selection is deterministic: columns left to right, first row (in
    the current order) with a nonzero entry.
    """
    dense = bool(rows) and isinstance(rows[0], list)
    nrows = len(rows)
    pivots: list[tuple[int, int]] = []
    prev = 1
    pr = 0
    for pc in range(cols):
        sel = None
        for i in range(pr, nrows):
            val = rows[i][pc] if dense else rows[i].get(pc, 0)
            if val != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != pr:
            rows[pr], rows[sel] = rows[sel], rows[pr]
        piv = rows[pr][pc]
        for i in range(pr + 1, nrows):
            if dense:
                head = rows[i][pc]
                width = len(rows[i])
                for j in range(pc, width):
                    num = rows[i][j] * piv - head * rows[pr][j]
                    q, rem = divmod(num, prev)
                    assert rem == 0, "Bareiss division not exact"
                    rows[i][j] = q
            else:
                head = rows[i].get(pc, 0)
                support = set(rows[i]) | set(rows[pr])
                new = {}
                for j in support:
                    if j < pc:
                        if j in rows[i]:
                            new[j] = rows[i][j]
                        continue
                    num = rows[i].get(j, 0) * piv - head * rows[pr].get(j, 0)
                    q, rem = divmod(num, prev)
                    assert rem == 0, "Bareiss division not exact"
                    if q:
                        new[j] = q
                rows[i] = new
        pivots.append((pr, pc))
        prev = piv
        pr += 1
        if pr == nrows:
            break
    return rows, pivots


def _echelon(m: RationalMatrix) -> tuple[list, list[tuple[int, int]]]:
    return _bareiss(_integer_rows(m), m.cols)


def rank(m: RationalMatrix) -> int:
    """Rank over Q."""
    _, pivots = _echelon(m)
    return len(pivots)


def kernel_basis(m: RationalMatrix) -> Subspace:
    """Basis of the right kernel {x : m.x = 0}; dim = cols - rank."""
    rows, pivots = _echelon(m)
    dense = bool(rows) and isinstance(rows[0], list)
    pivot_cols = [pc for _, pc in pivots]
    free_cols = [j for j in range(m.cols) if j not in pivot_cols]
    basis = []
    for f in free_cols:
        x = [Fraction(0)] * m.cols
        x[f] = Fraction(1)
        for pr, pc in reversed(pivots):
            row = rows[pr]
            s = Fraction(0)
            if dense:
                for j in range(pc + 1, m.cols):
                    if row[j]:
                        s += row[j] * x[j]
                piv = row[pc]
            else:
                for j, v in row.items():
                    if j > pc:
                        s += v * x[j]
                piv = row[pc]
            x[pc] = -s / piv
        basis.append(tuple(x))
    return Subspace(m.cols, tuple(basis))


def solve(m: RationalMatrix, b: Sequence) -> Optional[list[Fraction]]:
    """A particular solution of m.x = b, or None when inconsistent.

    Deterministic: pivot variables are solved bottom-up and all free
    variables are set to zero.
    """
    b = [rat(v) for v in b]
    if len(b) != m.rows:
        raise ValueError("shape mismatch")
    aug = RationalMatrix(m.rows, m.cols + 1)
    for key, v in m.entries.items():
        aug.entries[key] = v
    for i, v in enumerate(b):
        if v != 0:
            aug.entries[(i, m.cols)] = v
    rows, pivots = _bareiss(_integer_rows(aug), m.cols)
    dense = bool(rows) and isinstance(rows[0], list)

    def entry(row, j):
        return row[j] if dense else row.get(j, 0)

    used = {pr for pr, _ in pivots}
    for i in range(len(rows)):
        if i in used:
            continue
        if entry(rows[i], m.cols) != 0:
            return None
    x = [Fraction(0)] * m.cols
    for pr, pc in reversed(pivots):
        row = rows[pr]
        s = Fraction(entry(row, m.cols))
        if dense:
            for j in range(pc + 1, m.cols):
                if row[j]:
                    s -= row[j] * x[j]
        else:
            for j, v in row.items():
                if pc < j < m.cols:
                    s -= v * x[j]
        x[pc] = s / entry(row, pc)
    return x


def quotient_dim(ambient: Subspace, sub: Subspace) -> int:
    """dim(ambient) - dim(sub), after checking sub is contained in ambient."""
    if ambient.ambient_dim != sub.ambient_dim:
        raise NotASubspaceError("ambient dimensions differ")
    if sub.dim:
        joint = RationalMatrix.from_rows(list(ambient.basis) + list(sub.basis))
        if rank(joint) != ambient.dim:
            raise NotASubspaceError("sub is not contained in ambient")
    return ambient.dim - sub.dim


def row_space_rank(rows: Iterable[Sequence]) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return rank(RationalMatrix.from_rows(rows))


def in_span(vectors: Sequence[Sequence], target: Sequence) -> bool:
    """Whether target lies in the span of the given vectors."""
    if all(rat(t) == 0 for t in target):
        return True
    if not vectors:
        return False
    m = RationalMatrix.from_rows(vectors).transpose()
    return solve(m, list(target)) is not None
