"""Exact linear algebra over the rationals.

Everything here is built on ``fractions.Fraction``; there is no floating
point anywhere in the engine.  The central object is :class:`Subspace`, the
canonical (reduced row echelon) presentation of a linear subspace of K^n.
Canonicality means two spanning sets of the same subspace always produce
bit-identical bases, so subspace equality is plain data equality.

Basis rows are stored sparsely (index -> Fraction dicts).  The reduced
echelon basis of the spans that show up in graded-algebra computations is
typically very sparse even when the subspace has high dimension, and the
dense matrices of, say, a degree-8 tensor power would not fit in memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DimensionMismatch

SparseVec = dict[int, Fraction]
VecLike = Union[Sequence, SparseVec]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_sparse(vec: VecLike) -> SparseVec:
    """Normalize a dense sequence or sparse dict into a sparse dict of Fractions."""
    if isinstance(vec, dict):
        return {i: Fraction(c) for i, c in vec.items() if c}
    return {i: Fraction(c) for i, c in enumerate(vec) if c}


def to_dense(vec: SparseVec, length: int) -> list[Fraction]:
    out = [_ZERO] * length
    for i, c in vec.items():
        out[i] = c
    return out


class Matrix:
    """Dense matrix of Fractions, row-major.

    Used for the small matrices of the engine (boundary maps, pairing
    matrices, twists, representations); large structured spans live in
    :class:`Subspace` instead.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence):
        if len(entries) != rows * cols:
            raise DimensionMismatch(
                f"matrix {rows}x{cols} needs {rows * cols} entries, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self.entries = [Fraction(e) for e in entries]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise DimensionMismatch("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [_ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls.zero(n, n)
        for i in range(n):
            m.entries[i * n + i] = _ONE
        return m

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def __setitem__(self, ij: tuple[int, int], value) -> None:
        i, j = ij
        self.entries[i * self.cols + j] = Fraction(value)

    def row(self, i: int) -> list[Fraction]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_list(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries)))

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        return Matrix(
            self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in subtraction")
        return Matrix(
            self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = Matrix.zero(self.rows, other.cols)
        for i in range(self.rows):
            base = i * self.cols
            for k in range(self.cols):
                a = self.entries[base + k]
                if not a:
                    continue
                obase = k * other.cols
                tbase = i * other.cols
                for j in range(other.cols):
                    b = other.entries[obase + j]
                    if b:
                        out.entries[tbase + j] += a * b
        return out

    def mul_vec(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise DimensionMismatch("vector length does not match column count")
        v = [Fraction(x) for x in v]
        return [
            sum((self.entries[i * self.cols + j] * v[j] for j in range(self.cols)), _ZERO)
            for i in range(self.rows)
        ]

    def transpose(self) -> "Matrix":
        out = Matrix.zero(self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j]
        return out

    def is_zero(self) -> bool:
        return all(not e for e in self.entries)

    def rank(self) -> int:
        b = _RrefBuilder(self.cols)
        for i in range(self.rows):
            b.insert(to_sparse(self.row(i)))
        return len(b.rows)

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols}, {self.row_list()!r})"


class _RrefBuilder:
    """Incremental reduced row echelon form over sparse rows.

    Maintains the invariant that ``self.rows`` maps pivot column -> row,
    every row is fully reduced against every other, and each pivot entry
    is 1.  The reduced echelon basis of a row space is unique, so the
    insertion order never changes the final result.
    """

    def __init__(self, ambient: int):
        self.ambient = ambient
        self.rows: dict[int, SparseVec] = {}
        # column -> set of pivots whose row has a nonzero entry in that
        # column (excluding the pivot entry itself)
        self.col_index: dict[int, set[int]] = {}

    def insert(self, vec: SparseVec) -> Optional[int]:
        v = {i: c for i, c in vec.items() if c}
        for i in v:
            if not 0 <= i < self.ambient:
                raise DimensionMismatch(f"coordinate {i} outside ambient {self.ambient}")
        # One pass suffices: existing rows are mutually reduced, so their
        # non-pivot supports contain no pivot columns and reductions never
        # reintroduce a pivot coordinate into v.
        for j in sorted(k for k in v if k in self.rows):
            c = v.pop(j)
            for k, a in self.rows[j].items():
                if k == j:
                    continue
                ca = c * a
                old = v.get(k)
                if old is None:
                    v[k] = -ca
                else:
                    nw = old - ca
                    if nw:
                        v[k] = nw
                    else:
                        del v[k]
        if not v:
            return None
        return self._install(min(v), v)

    def _install(self, piv: int, v: SparseVec) -> int:
        c = v[piv]
        if c != 1:
            v = {k: a / c for k, a in v.items()}
        holders = self.col_index.pop(piv, None)
        if holders:
            for p in holders:
                row = self.rows[p]
                f = row.pop(piv)
                for k, a in v.items():
                    if k == piv:
                        continue
                    fa = f * a
                    old = row.get(k)
                    if old is None:
                        row[k] = -fa
                        self.col_index.setdefault(k, set()).add(p)
                    else:
                        nw = old - fa
                        if nw:
                            row[k] = nw
                        else:
                            del row[k]
                            self.col_index[k].discard(p)
        self.rows[piv] = v
        for k in v:
            if k != piv:
                self.col_index.setdefault(k, set()).add(piv)
        return piv

    def finish(self) -> tuple[tuple[int, ...], tuple[SparseVec, ...]]:
        pivots = tuple(sorted(self.rows))
        return pivots, tuple(self.rows[p] for p in pivots)


@dataclass(frozen=True)
class Subspace:
    """Canonical presentation of a subspace of K^ambient_dim.

    ``rows[k]`` is the basis row with pivot ``pivots[k]``; rows are in
    reduced echelon form (pivot entries 1, pivot columns otherwise zero,
    pivots strictly increasing).  Instances must be treated as immutable.
    """

    ambient_dim: int
    pivots: tuple[int, ...]
    rows: tuple[SparseVec, ...]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def is_zero(self) -> bool:
        return not self.pivots

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def nonpivots(self) -> list[int]:
        pset = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in pset]

    def basis_matrix(self) -> Matrix:
        m = Matrix.zero(self.dim, self.ambient_dim)
        for i, row in enumerate(self.rows):
            base = i * self.ambient_dim
            for j, c in row.items():
                m.entries[base + j] = c
        return m

    def coords_of(self, vec: VecLike) -> Optional[list[Fraction]]:
        """Expansion of ``vec`` in the basis, or None if it lies outside."""
        v = to_sparse(vec)
        coords = [v.get(p, _ZERO) for p in self.pivots]
        residual = dict(v)
        for c, row in zip(coords, self.rows):
            if not c:
                continue
            for j, a in row.items():
                old = residual.get(j, _ZERO)
                nw = old - c * a
                if nw:
                    residual[j] = nw
                elif j in residual:
                    del residual[j]
        if any(residual.values()):
            return None
        return coords

    def contains(self, vec: VecLike) -> bool:
        return self.coords_of(vec) is not None

    def linear_combination(self, coords: Sequence) -> SparseVec:
        out: SparseVec = {}
        for c, row in zip(coords, self.rows):
            c = Fraction(c)
            if not c:
                continue
            for j, a in row.items():
                nw = out.get(j, _ZERO) + c * a
                if nw:
                    out[j] = nw
                elif j in out:
                    del out[j]
        return out

    def key(self) -> tuple:
        return (
            self.ambient_dim,
            self.pivots,
            tuple(tuple(sorted(r.items())) for r in self.rows),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Subspace(dim {self.dim} of K^{self.ambient_dim}, pivots {list(self.pivots)})"


def rref_canonicalize(rows: Iterable[VecLike], ambient_dim: int) -> Subspace:
    """Canonical subspace spanned by ``rows`` inside K^ambient_dim.

    Dense rows must have length exactly ``ambient_dim``; sparse rows may
    not touch coordinates outside the ambient space.
    """
    b = _RrefBuilder(ambient_dim)
    for row in rows:
        if not isinstance(row, dict) and len(row) != ambient_dim:
            raise DimensionMismatch(
                f"row of length {len(row)} in ambient dimension {ambient_dim}"
            )
        b.insert(to_sparse(row))
    pivots, out = b.finish()
    return Subspace(ambient_dim, pivots, out)


def zero_space(ambient_dim: int) -> Subspace:
    return Subspace(ambient_dim, (), ())


def full_space(ambient_dim: int) -> Subspace:
    return Subspace(
        ambient_dim,
        tuple(range(ambient_dim)),
        tuple({i: _ONE} for i in range(ambient_dim)),
    )


def _kernel_of_rref(ambient: int, pivots: tuple[int, ...], rows: tuple[SparseVec, ...]) -> Subspace:
    pset = set(pivots)
    free = [j for j in range(ambient) if j not in pset]
    gens: list[SparseVec] = []
    for f in free:
        v: SparseVec = {f: _ONE}
        for p, row in zip(pivots, rows):
            a = row.get(f)
            if a:
                v[p] = -a
        gens.append(v)
    return rref_canonicalize(gens, ambient)


def kernel(m: Matrix) -> Subspace:
    """Canonical basis of the right kernel {v : m v = 0}."""
    b = _RrefBuilder(m.cols)
    for i in range(m.rows):
        b.insert(to_sparse(m.row(i)))
    pivots, rows = b.finish()
    return _kernel_of_rref(m.cols, pivots, rows)


def kernel_sparse(equations: Iterable[SparseVec], unknowns: int) -> Subspace:
    """Kernel of a system given as sparse equation rows over ``unknowns``."""
    b = _RrefBuilder(unknowns)
    for eq in equations:
        b.insert(to_sparse(eq))
    pivots, rows = b.finish()
    return _kernel_of_rref(unknowns, pivots, rows)


def annihilator(s: Subspace) -> Subspace:
    """Annihilator in the dual coordinate space (same ambient dimension)."""
    return _kernel_of_rref(s.ambient_dim, s.pivots, s.rows)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Canonical basis of the intersection of two subspaces."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(
            f"ambient mismatch: {a.ambient_dim} vs {b.ambient_dim}"
        )
    if a.is_zero() or b.is_zero():
        return zero_space(a.ambient_dim)
    if a.is_full():
        return b
    if b.is_full():
        return a
    # stacked-kernel method: solve sum a_i alpha_i - sum b_j beta_j = 0
    # coordinate by coordinate, unknowns (alpha, beta)
    na = a.dim
    equations: dict[int, SparseVec] = {}
    for i, row in enumerate(a.rows):
        for coord, c in row.items():
            equations.setdefault(coord, {})[i] = c
    for j, row in enumerate(b.rows):
        for coord, c in row.items():
            equations.setdefault(coord, {})[na + j] = -c
    ker = kernel_sparse(equations.values(), na + b.dim)
    gens = [
        a.linear_combination([kv.get(i, _ZERO) for i in range(na)])
        for kv in ker.rows
    ]
    return rref_canonicalize(gens, a.ambient_dim)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(
            f"ambient mismatch: {a.ambient_dim} vs {b.ambient_dim}"
        )
    return rref_canonicalize(list(a.rows) + list(b.rows), a.ambient_dim)


@dataclass(frozen=True)
class SolveResult:
    solution: Optional[list[Fraction]]
    consistent: bool
    unique: bool


def solve_linear(m: Matrix, b: Sequence) -> SolveResult:
    """Some solution of m x = b, with consistency and uniqueness flags.

    Inconsistency is a value, not an error.  The returned solution sets all
    free variables to zero.
    """
    if len(b) != m.rows:
        raise DimensionMismatch("right-hand side length does not match row count")
    aug = m.cols  # augmented column index
    builder = _RrefBuilder(m.cols + 1)
    for i in range(m.rows):
        row = to_sparse(m.row(i))
        bi = Fraction(b[i])
        if bi:
            row[aug] = bi
        builder.insert(row)
    pivots, rows = builder.finish()
    if aug in pivots:
        return SolveResult(None, False, False)
    x = [_ZERO] * m.cols
    for p, row in zip(pivots, rows):
        x[p] = row.get(aug, _ZERO)
    unique = len(pivots) == m.cols
    return SolveResult(x, True, unique)
