"""Lie prealgebras, their representations and generalized
Chevalley-Eilenberg complexes.

A prealgebra is a nonhomogeneous presentation with no constant terms.  It
is a Lie prealgebra when its quadratic part is certified Koszul of finite
global dimension with Poincare duality and the presentation passes the PBW
battery; the dual algebra is then finite dimensional and carries the
differential built in :mod:`koszul.nonhomog`.

For a left representation V the cochain complex lives on V (x) dual and
its differential combines the generator action with the dual differential;
with the engine's sign convention for the generator differential the
combination that squares to zero is

    delta_V(v (x) a) = sum_l (X_l v) (x) (w_l a) - v (x) delta(a).

For the trivial representation this is exactly the classical
Chevalley-Eilenberg differential when the prealgebra is a Lie algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    InternalInconsistency,
    NonFiniteDual,
    RepresentationError,
)
from .linalg import Matrix
from .nonhomog import (
    CurvedDGA,
    NonhomogeneousPresentation,
    PbwConditions,
    build_curved_dual,
    check_pbw_conditions,
    pbw_verdict,
    PBW_CERTIFIED,
)
from .homology import GorensteinReport, gorenstein_check
from .quadratic import QuadraticAlgebra

_ZERO = Fraction(0)
_ONE = Fraction(1)


class Prealgebra(NonhomogeneousPresentation):
    """A nonhomogeneous presentation with vanishing constant part."""

    def __init__(self, algebra: QuadraticAlgebra, phi: Sequence[Sequence]):
        super().__init__(algebra, phi, [_ZERO] * algebra.relations.dim)

    @classmethod
    def from_presentation(cls, p: NonhomogeneousPresentation) -> "Prealgebra":
        if not p.phi0_is_zero():
            raise DimensionMismatch(
                "prealgebras carry no constant terms (phi0 must vanish)"
            )
        return cls(p.algebra, p.phi)


@dataclass(frozen=True)
class Representation:
    """Generator action matrices on a module V, with a side marker."""

    name: str
    side: str  # "left" or "right"
    dim: int
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise RepresentationError(f"unknown side {self.side!r}")
        for m in self.matrices:
            if m.rows != self.dim or m.cols != self.dim:
                raise RepresentationError(
                    f"action matrices must be {self.dim}x{self.dim}"
                )

    @classmethod
    def trivial(cls, d: int, side: str = "left") -> "Representation":
        return cls("trivial", side, 1, tuple(Matrix.zero(1, 1) for _ in range(d)))


@dataclass(frozen=True)
class LiePrealgebraReport:
    gorenstein: GorensteinReport
    conditions: PbwConditions
    pbw: str
    is_lie_prealgebra: bool


def lie_prealgebra_check(
    p: Prealgebra, m_max: Optional[int] = None, n_max: Optional[int] = None
) -> LiePrealgebraReport:
    """Both halves of the definition: Poincare duality and PBW."""
    g = gorenstein_check(p.algebra, m_max, n_max)
    conds = check_pbw_conditions(p)
    verdict = pbw_verdict(p, conds, g.certificate)
    return LiePrealgebraReport(
        g, conds, verdict, g.gorenstein and verdict == PBW_CERTIFIED
    )


def verify_representation(
    p: NonhomogeneousPresentation, rho: Representation
) -> tuple[bool, Optional[int]]:
    """Check that every canonical relation annihilates the module.

    For each relation r with quadratic coefficients c_{ij}: the operator
    sum c_{ij} X_i X_j - sum phi(r)_l X_l - phi0(r) must vanish (factors
    composed in reverse order for right modules).  Returns the verdict and
    the index of the first offending relation.
    """
    d = p.d
    if len(rho.matrices) != d:
        raise RepresentationError("one action matrix per generator required")
    for idx, rel in enumerate(p.algebra.relations.rows):
        acc = Matrix.zero(rho.dim, rho.dim)
        for rank2, c in rel.items():
            i, j = divmod(rank2, d)
            prod = (
                rho.matrices[i] * rho.matrices[j]
                if rho.side == "left"
                else rho.matrices[j] * rho.matrices[i]
            )
            acc = acc + prod.scale(c)
        for lam, c in enumerate(p.phi[idx]):
            if c:
                acc = acc - rho.matrices[lam].scale(c)
        c0 = p.phi0[idx]
        if c0:
            acc = acc - Matrix.identity(rho.dim).scale(c0)
        if not acc.is_zero():
            return False, idx
    return True, None


def dual_top_degree(dual: QuadraticAlgebra, bound: int = 12) -> int:
    """Top nonzero degree of a finite-dimensional dual algebra."""
    top = 0
    for n in range(1, bound + 2):
        dim = dual.dim(n)
        if dim == 0:
            return top
        top = n
    raise NonFiniteDual(f"dual algebra still nonzero in degree {bound + 1}")


@dataclass(frozen=True)
class CEComplex:
    """A (co)chain complex on V (x) dual with exact-rank (co)homology.

    ``differentials[n]`` maps the degree-n term to degree n+1 for cochain
    complexes and to degree n-1 for chain complexes.
    """

    kind: str  # "cochain" or "chain"
    module_dim: int
    term_dims: list[int]
    differentials: list[Matrix]
    homology: list[int]

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * d for n, d in enumerate(self.term_dims))


def _cochain_matrices(
    cdga: CurvedDGA, rho: Representation, top: int
) -> tuple[list[int], list[Matrix]]:
    dual = cdga.dual
    dims = [rho.dim * dual.dim(n) for n in range(top + 1)]
    mats = []
    for n in range(top):
        src_words = dual.dim(n)
        dst_words = dual.dim(n + 1)
        mat = Matrix.zero(rho.dim * dst_words, rho.dim * src_words)
        for a_idx in range(src_words):
            delta_a = cdga.delta_class(n, {a_idx: _ONE})
            for lam in range(dual.d):
                left = dual.multiply(1, n, {lam: _ONE}, {a_idx: _ONE})
                X = rho.matrices[lam]
                for k, c in enumerate(left):
                    if not c:
                        continue
                    for v2 in range(rho.dim):
                        for v in range(rho.dim):
                            x = X[v2, v]
                            if x:
                                mat[v2 * dst_words + k, v * src_words + a_idx] += x * c
            for k, c in enumerate(delta_a):
                if not c:
                    continue
                for v in range(rho.dim):
                    mat[v * dst_words + k, v * src_words + a_idx] -= c
        mats.append(mat)
    return dims, mats


def _homology_of(term_dims: list[int], ranks: list[int]) -> list[int]:
    out = []
    for n, dim_n in enumerate(term_dims):
        rank_out = ranks[n] if n < len(ranks) else 0
        rank_in = ranks[n - 1] if n >= 1 else 0
        h = dim_n - rank_out - rank_in
        if h < 0:
            raise InternalInconsistency("negative cohomology dimension")
        out.append(h)
    return out


def ce_cochain_complex(
    p: Prealgebra,
    rho: Representation,
    cdga: Optional[CurvedDGA] = None,
    top: Optional[int] = None,
) -> CEComplex:
    """Cochain complex of a left representation over the dual algebra.

    Requires a valid left representation of a quadratic-linear presentation
    with finite-dimensional dual; the differential is verified to square to
    zero exactly.
    """
    if rho.side != "left":
        raise RepresentationError("cochain complexes take left representations")
    ok, offending = verify_representation(p, rho)
    if not ok:
        raise RepresentationError(
            f"relation {offending} does not annihilate the module"
        )
    if cdga is None:
        cdga = build_curved_dual(p)
    if any(cdga.curvature):
        raise RepresentationError("cochain complexes need vanishing curvature")
    if top is None:
        top = dual_top_degree(cdga.dual)
    dims, mats = _cochain_matrices(cdga, rho, top)
    for n in range(1, len(mats)):
        if not (mats[n] * mats[n - 1]).is_zero():
            raise InternalInconsistency(
                f"cochain differential does not square to zero at degree {n}"
            )
    ranks = [m.rank() for m in mats]
    return CEComplex("cochain", rho.dim, dims, mats, _homology_of(dims, ranks))


def ce_chain_complex(
    p: Prealgebra,
    rho: Representation,
    cdga: Optional[CurvedDGA] = None,
    top: Optional[int] = None,
) -> CEComplex:
    """Chain complex of a right representation on W (x) dual-of-dual.

    Implemented by transposition: the right module W induces the left
    module on W* with transposed action matrices, and the boundary on
    W (x) (dual_n)* is the transpose of the cochain differential of W*.
    """
    if rho.side != "right":
        raise RepresentationError("chain complexes take right representations")
    ok, offending = verify_representation(p, rho)
    if not ok:
        raise RepresentationError(
            f"relation {offending} does not annihilate the module"
        )
    dual_rho = Representation(
        rho.name + "^*", "left", rho.dim, tuple(m.transpose() for m in rho.matrices)
    )
    if cdga is None:
        cdga = build_curved_dual(p)
    if any(cdga.curvature):
        raise RepresentationError("chain complexes need vanishing curvature")
    if top is None:
        top = dual_top_degree(cdga.dual)
    dims, mats = _cochain_matrices(cdga, dual_rho, top)
    boundaries = [m.transpose() for m in mats]  # boundary_n : C_n -> C_{n-1}
    for n in range(1, len(boundaries)):
        if not (boundaries[n - 1] * boundaries[n]).is_zero():
            raise InternalInconsistency(
                f"chain boundary does not square to zero at degree {n}"
            )
    ranks = [m.rank() for m in boundaries]
    homology = []
    for n, dim_n in enumerate(dims):
        rank_out = ranks[n - 1] if n >= 1 else 0  # boundary_n has index n-1
        rank_in = ranks[n] if n < len(ranks) else 0
        h = dim_n - rank_out - rank_in
        if h < 0:
            raise InternalInconsistency("negative homology dimension")
        homology.append(h)
    return CEComplex("chain", rho.dim, dims, boundaries, homology)


def module_compatibility_identity(
    p: Prealgebra, rho: Representation, cdga: Optional[CurvedDGA] = None
) -> bool:
    """The degree-2 identity forcing delta_V^2 = 0 for valid left modules.

    sum_{mn} X_m X_n (x) [w_m w_n] - sum_l X_l (x) delta(w_l) must vanish
    in Hom(V, V) (x) dual_2; the sign on the second term matches the
    engine's differential convention.
    """
    if cdga is None:
        cdga = build_curved_dual(p)
    dual = cdga.dual
    d = p.d
    dim2 = dual.dim(2)
    acc = [Matrix.zero(rho.dim, rho.dim) for _ in range(dim2)]
    for m_idx in range(d):
        for n_idx in range(d):
            cls = dual.normal_form(2, {m_idx * d + n_idx: _ONE})
            prod = rho.matrices[m_idx] * rho.matrices[n_idx]
            for k, c in enumerate(cls):
                if c:
                    acc[k] = acc[k] + prod.scale(c)
    for lam in range(d):
        for k, c in enumerate(cdga.delta_gen[lam]):
            if c:
                acc[k] = acc[k] - rho.matrices[lam].scale(c)
    return all(m.is_zero() for m in acc)
