"""Koszul complex homology, Koszulity certificates, global dimension and
the Gorenstein property.

Every homology dimension is an exact rank-nullity computation over the
rationals.  Koszulity and global dimension are certified only up to an
explicit degree bound; reports must carry that label, since the genuine
statements quantify over all degrees.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DegreeError, InternalInconsistency, NonFiniteDual
from .linalg import Matrix, SparseVec, Subspace
from .quadratic import QuadraticAlgebra

_ZERO = Fraction(0)

TRUNCATION_NOTE = (
    "finite-degree certificate: statements are verified only up to the stated "
    "bound and are not proofs for all degrees"
)


def _koszul_tail_coords(A: QuadraticAlgebra, n: int, kvec: SparseVec) -> list[SparseVec]:
    """Split a K_n basis vector by its first tensor factor.

    Returns, for each letter i, the coordinates of the tail in the K_{n-1}
    basis.  The tails are guaranteed to lie in K_{n-1}; if one does not,
    the cached subspaces are inconsistent.
    """
    d = A.d
    shift = d ** (n - 1)
    prev = A.koszul_subspace(n - 1)
    tails: list[SparseVec] = []
    for i in range(d):
        tail = {
            rank - i * shift: c
            for rank, c in kvec.items()
            if i * shift <= rank < (i + 1) * shift
        }
        coords = prev.coords_of(tail)
        if coords is None:
            raise InternalInconsistency(
                f"tail of a K_{n} vector does not lie in K_{n - 1}"
            )
        tails.append({j: c for j, c in enumerate(coords) if c})
    return tails


def koszul_boundary(A: QuadraticAlgebra, n: int, m: int) -> Matrix:
    """Matrix of d: A_{m-n} (x) K_n -> A_{m-n+1} (x) K_{n-1} in total degree m.

    Columns are indexed by (standard word of A_{m-n}, K_n basis vector)
    pairs, flattened with the K index fastest; rows likewise for the target.
    """
    if n < 1 or n > m:
        raise DegreeError(f"boundary needs 1 <= n <= m, got n={n}, m={m}")
    src_alg = A.component(m - n)
    dst_alg = A.component(m - n + 1)
    kn = A.koszul_subspace(n)
    kprev = A.koszul_subspace(n - 1)
    mat = Matrix.zero(dst_alg.dim * kprev.dim, src_alg.dim * kn.dim)
    if kn.dim == 0:
        return mat
    splits = [_koszul_tail_coords(A, n, kvec) for kvec in kn.rows]
    for u_idx in range(src_alg.dim):
        for b_idx, tails in enumerate(splits):
            col = u_idx * kn.dim + b_idx
            for i, tail in enumerate(tails):
                if not tail:
                    continue
                head = A.component(m - n + 1).extension[(u_idx, i)]
                for u2_idx, a in head.items():
                    for t_idx, c in tail.items():
                        row = u2_idx * kprev.dim + t_idx
                        mat[row, col] += a * c
    return mat


@dataclass(frozen=True)
class SliceHomology:
    """Homology of the Koszul complex in one total degree."""

    total_degree: int
    chain_dims: dict[int, int]
    boundary_ranks: dict[int, int]
    homology: dict[int, int]


@dataclass(frozen=True)
class KoszulityCertificate:
    m_max: int
    certified: bool
    slices: list[SliceHomology]
    failures: list[tuple[int, int, int]]  # (total degree, homological degree, dim H)
    note: str = TRUNCATION_NOTE

    def homology_table(self) -> dict[int, dict[int, int]]:
        return {s.total_degree: dict(s.homology) for s in self.slices}


def _slice_homology(A: QuadraticAlgebra, m: int) -> SliceHomology:
    top = m
    dims: dict[int, int] = {}
    for n in range(m + 1):
        dims[n] = A.dim(m - n) * A.koszul_subspace(n).dim
        if A.koszul_subspace(n).dim == 0:
            top = n
            break
    boundaries: dict[int, Matrix] = {}
    ranks: dict[int, int] = {}
    for n in range(1, top + 1):
        if dims.get(n, 0) == 0 or dims.get(n - 1, 0) == 0:
            ranks[n] = 0
            continue
        boundaries[n] = koszul_boundary(A, n, m)
        ranks[n] = boundaries[n].rank()
    # d o d must vanish exactly
    for n in range(2, top + 1):
        if n in boundaries and (n - 1) in boundaries:
            if not (boundaries[n - 1] * boundaries[n]).is_zero():
                raise InternalInconsistency(
                    f"boundary composite nonzero in total degree {m} at n={n}"
                )
    homology: dict[int, int] = {}
    for n in range(0, max(dims) + 1 if dims else 0):
        dim_n = dims.get(n, 0)
        rank_out = ranks.get(n, 0)  # d_n : C_n -> C_{n-1}
        rank_in = ranks.get(n + 1, 0)
        homology[n] = dim_n - rank_out - rank_in
        if homology[n] < 0:
            raise InternalInconsistency("negative homology dimension")
    return SliceHomology(m, dims, ranks, homology)


def default_certificate_bound(A: QuadraticAlgebra, probe_cap: int = 8) -> int:
    """2 * (first vanishing degree of the Koszul subspaces) + 2, capped."""
    for n in range(probe_cap + 1):
        if A.koszul_subspace(n).dim == 0:
            return 2 * n + 2
    return probe_cap


def koszulity_certificate(A: QuadraticAlgebra, m_max: int) -> KoszulityCertificate:
    """Check H_n = 0 for n >= 1 in every total degree m <= m_max."""
    if m_max < 2:
        raise DegreeError("certificates need m_max >= 2")
    slices = []
    failures = []
    for m in range(m_max + 1):
        s = _slice_homology(A, m)
        slices.append(s)
        for n, h in s.homology.items():
            if n >= 1 and h != 0:
                failures.append((m, n, h))
        # H_0 must be K in degree 0 and vanish afterwards
        h0 = s.homology.get(0, 0)
        if m == 0 and h0 != 1:
            raise InternalInconsistency("H_0 in total degree 0 is not K")
        if m >= 1 and h0 != 0:
            failures.append((m, 0, h0))
    return KoszulityCertificate(m_max, not failures, slices, failures)


def global_dimension(A: QuadraticAlgebra, n_max: int) -> Optional[int]:
    """Largest D <= n_max with K_D nonzero, or None if K_{n_max} is nonzero.

    Valid because the dual is generated in degree 1: once a Koszul subspace
    vanishes, all higher ones vanish.
    """
    last_nonzero = 0
    for n in range(n_max + 1):
        if A.koszul_subspace(n).dim == 0:
            return last_nonzero
        last_nonzero = n
    return None


@dataclass(frozen=True)
class FrobeniusReport:
    top_degree: int
    dims: list[int]
    pairing_ranks: list[int]
    pairing_matrices: list[Matrix]
    frobenius: bool
    failure: Optional[str] = None


def frobenius_check(B: QuadraticAlgebra, top: int, probe: int = 1) -> FrobeniusReport:
    """Graded Frobenius test: dim B_top = 1 and all pairings into it perfect.

    ``B`` must vanish above ``top``; the first ``probe`` degrees beyond are
    checked and a violation raises :class:`NonFiniteDual`.
    """
    dims = [B.dim(n) for n in range(top + 1)]
    for n in range(top + 1, top + 1 + probe):
        if B.dim(n) != 0:
            raise NonFiniteDual(
                f"algebra does not vanish above the claimed top degree {top}"
            )
    if dims[top] == 0:
        raise DegreeError(f"top component B_{top} is zero")
    matrices: list[Matrix] = []
    ranks: list[int] = []
    ok = dims[top] == 1
    failure = None if ok else f"dim B_{top} = {dims[top]} != 1"
    for n in range(top + 1):
        left, right = dims[n], dims[top - n]
        pairing = Matrix.zero(left, right)
        if dims[top] == 1:
            for i in range(left):
                ei = [_ZERO] * left
                ei[i] = Fraction(1)
                for j in range(right):
                    ej = [_ZERO] * right
                    ej[j] = Fraction(1)
                    prod = B.multiply(n, top - n, ei, ej)
                    pairing[i, j] = prod[0]
        matrices.append(pairing)
        r = pairing.rank()
        ranks.append(r)
        if r != left:
            ok = False
            if failure is None:
                failure = f"pairing B_{n} x B_{top - n} has rank {r} < {left}"
    return FrobeniusReport(top, dims, ranks, matrices, ok, failure)


@dataclass(frozen=True)
class GorensteinReport:
    certificate: KoszulityCertificate
    global_dim: Optional[int]
    dual_dims: list[int]
    frobenius: Optional[FrobeniusReport]
    gorenstein: bool
    poincare_symmetric: Optional[bool]
    note: str = TRUNCATION_NOTE


def gorenstein_check(
    A: QuadraticAlgebra, m_max: Optional[int] = None, n_max: Optional[int] = None
) -> GorensteinReport:
    """Koszulity certificate + finite global dimension + Frobenius dual.

    The dual dimensions are computed from the dual algebra's own graded
    components and cross-checked against the Koszul subspaces; a mismatch
    would contradict the duality identity and raises.
    """
    if m_max is None:
        m_max = default_certificate_bound(A)
    if n_max is None:
        n_max = m_max
    cert = koszulity_certificate(A, m_max)
    D = global_dimension(A, n_max)
    dual = A.koszul_dual()
    if D is None:
        dual_dims = [dual.dim(n) for n in range(n_max + 1)]
        for n in range(n_max + 1):
            if dual_dims[n] != A.koszul_subspace(n).dim:
                raise InternalInconsistency(
                    f"dual dimension mismatch in degree {n}"
                )
        return GorensteinReport(cert, None, dual_dims, None, False, None)
    dual_dims = [dual.dim(n) for n in range(D + 2)]
    for n in range(D + 2):
        if dual_dims[n] != A.koszul_subspace(n).dim:
            raise InternalInconsistency(f"dual dimension mismatch in degree {n}")
    frob = frobenius_check(dual, D)
    gorenstein = cert.certified and frob.frobenius
    symmetric = all(dual_dims[n] == dual_dims[D - n] for n in range(D + 1))
    return GorensteinReport(cert, D, dual_dims[: D + 1], frob, gorenstein, symmetric)


@dataclass(frozen=True)
class LComplexReport:
    """Cohomology of the dual cochain complex, sliced by weight.

    The differential raises both the dual degree n and the algebra degree
    p by one, so the preserved grading is the weight t = p - n; the slice
    at weight t is the complex with terms B_n (x) A_{n+t}.  ``cohomology``
    maps t -> {n: dim H^n} for the degrees whose outgoing term still lies
    inside the truncation window.
    """

    m_max: int
    cohomology: dict[int, dict[int, int]]
    delta_shape: Optional[int]  # D if H is exactly K in degree D, else None
    note: str = TRUNCATION_NOTE

    def total_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for table in self.cohomology.values():
            for n, h in table.items():
                out[n] = out.get(n, 0) + h
        return out


def _l_delta_matrix(A: QuadraticAlgebra, dual: QuadraticAlgebra, n: int, p: int) -> Matrix:
    """delta: B_n (x) A_p -> B_{n+1} (x) A_{p+1}, left multiplication by
    the canonical element sum_l (dual gen l) (x) (gen l)."""
    src = dual.dim(n) * A.dim(p)
    dst = dual.dim(n + 1) * A.dim(p + 1)
    mat = Matrix.zero(dst, src)
    if src == 0 or dst == 0:
        return mat
    ap1 = A.dim(p + 1)
    for i in range(dual.dim(n)):
        ei = {i: Fraction(1)}
        for u in range(A.dim(p)):
            eu = {u: Fraction(1)}
            col = i * A.dim(p) + u
            for lam in range(A.d):
                left = dual.multiply(1, n, {lam: 1}, ei)
                right = A.multiply(1, p, {lam: 1}, eu)
                for i2, c2 in enumerate(left):
                    if not c2:
                        continue
                    for u2, c3 in enumerate(right):
                        if c3:
                            mat[i2 * ap1 + u2, col] += c2 * c3
    return mat


def l_complex_cohomology(A: QuadraticAlgebra, m_max: int) -> LComplexReport:
    """Truncated cohomology table of the dual cochain complex.

    Serves as an independent cross-check of the Gorenstein verdict: within
    the window the cohomology must be a single K in the top dual degree.
    """
    dual = A.koszul_dual()
    cohomology: dict[int, dict[int, int]] = {}
    for t in range(-m_max, m_max + 1):
        n_lo = max(0, -t)
        # matrices delta_n for n in [n_lo, n_hi] with n+1 and n+1+t inside window
        table: dict[int, int] = {}
        mats: dict[int, Matrix] = {}
        ranks: dict[int, int] = {}
        n = n_lo
        while n <= m_max and n + t <= m_max:
            if n + 1 <= m_max and n + 1 + t <= m_max:
                mats[n] = _l_delta_matrix(A, dual, n, n + t)
                ranks[n] = mats[n].rank()
            n += 1
        for n in sorted(mats):
            if n - 1 in mats and not (mats[n] * mats[n - 1]).is_zero():
                raise InternalInconsistency(
                    f"delta squared nonzero at weight {t}, degree {n}"
                )
            dim_n = dual.dim(n) * A.dim(n + t)
            h = dim_n - ranks[n] - ranks.get(n - 1, 0)
            if h < 0:
                raise InternalInconsistency("negative cohomology dimension")
            if h or dim_n:
                table[n] = h
        if table:
            cohomology[t] = table
    totals: dict[int, int] = {}
    for table in cohomology.values():
        for n, h in table.items():
            totals[n] = totals.get(n, 0) + h
    nonzero = {n: h for n, h in totals.items() if h}
    delta_shape = None
    if len(nonzero) == 1:
        (n, h), = nonzero.items()
        if h == 1 and cohomology.get(-n, {}).get(n, 0) == 1:
            delta_shape = n
    return LComplexReport(m_max, cohomology, delta_shape)
