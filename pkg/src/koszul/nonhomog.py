"""Nonhomogeneous quadratic presentations and their curved differential duals.

A presentation stores the quadratic part A(E, R) together with the linear
and constant correction maps phi: R -> E and phi0: R -> K on the canonical
basis of R, encoding the relations r - phi(r) - phi0(r) 1.  The PBW
condition battery evaluates three linear conditions on the overlap space
(R (x) E) ^ (E (x) R), and the dual side rebuilds the same verdicts from
the curved differential structure on the dual algebra; the two batteries
must agree condition by condition.

Sign convention: the generator differential is the transpose of phi in the
direct pairing, delta(w_l)(r) = + w_l(phi(r)), which reproduces the known
differential of the twisted three-generator enveloping algebra; the curved
conditions delta^2 = [F, .], delta(F) = 0 with F(r) = -phi0(r) are
equivalent to the PBW battery under this convention (the square of the
differential does not feel the overall sign).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch, InternalInconsistency, SpecError
from .linalg import Matrix, SparseVec, Subspace, rref_canonicalize, solve_linear
from .quadratic import QuadraticAlgebra, Word, koszul_subspace
from .homology import KoszulityCertificate

_ZERO = Fraction(0)
_ONE = Fraction(1)

NCPoly = dict[Word, Fraction]  # words of length <= 2 -> coefficient


class NonhomogeneousPresentation:
    """(R, phi, phi0) with phi, phi0 given on the canonical basis of R."""

    def __init__(
        self,
        algebra: QuadraticAlgebra,
        phi: Sequence[Sequence],
        phi0: Sequence,
    ):
        r = algebra.relations.dim
        if len(phi) != r or any(len(row) != algebra.d for row in phi):
            raise DimensionMismatch("phi must be (dim R) x d")
        if len(phi0) != r:
            raise DimensionMismatch("phi0 must have one entry per relation")
        self.algebra = algebra
        self.phi = [[Fraction(c) for c in row] for row in phi]
        self.phi0 = [Fraction(c) for c in phi0]

    @property
    def d(self) -> int:
        return self.algebra.d

    def key(self) -> tuple:
        return (
            self.algebra.key(),
            tuple(tuple(row) for row in self.phi),
            tuple(self.phi0),
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NonhomogeneousPresentation)
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash(self.key())

    def phi_is_zero(self) -> bool:
        return all(not c for row in self.phi for c in row)

    def phi0_is_zero(self) -> bool:
        return all(not c for c in self.phi0)

    def phi_of(self, coords: Sequence[Fraction]) -> list[Fraction]:
        """phi applied to an element of R given in canonical coordinates."""
        out = [_ZERO] * self.d
        for c, row in zip(coords, self.phi):
            if c:
                for i, a in enumerate(row):
                    out[i] += c * a
        return out

    def phi0_of(self, coords: Sequence[Fraction]) -> Fraction:
        return sum((c * a for c, a in zip(coords, self.phi0)), _ZERO)

    @classmethod
    def from_polynomials(
        cls,
        d: int,
        polys: Sequence[NCPoly],
        names: Optional[Sequence[str]] = None,
    ) -> "NonhomogeneousPresentation":
        """Build a presentation from inhomogeneous relation polynomials.

        Stacks (quadratic | linear | constant) coordinate rows and reduces;
        with leftmost pivots all pivots must land in the quadratic block,
        which is exactly the condition that no combination of the relations
        degenerates to lower degree.  The quadratic block of the reduced
        rows is then the canonical basis of R and the trailing blocks read
        off -phi and -phi0 on it.
        """
        width = d * d + d + 1
        rows = []
        for poly in polys:
            row: SparseVec = {}
            for word, c in poly.items():
                if not c:
                    continue
                if len(word) == 2:
                    row[word[0] * d + word[1]] = c
                elif len(word) == 1:
                    row[d * d + word[0]] = c
                elif len(word) == 0:
                    row[d * d + d] = c
                else:
                    raise DimensionMismatch("relation of degree > 2")
            rows.append(row)
        stacked = rref_canonicalize(rows, width)
        for p in stacked.pivots:
            if p >= d * d:
                raise SpecError(
                    "a combination of the relations has no quadratic part",
                    0,
                    0,
                )
        rel_rows = []
        phi = []
        phi0 = []
        for row in stacked.rows:
            rel_rows.append({k: c for k, c in row.items() if k < d * d})
            phi.append([-row.get(d * d + i, _ZERO) for i in range(d)])
            phi0.append(-row.get(d * d + d, _ZERO))
        algebra = QuadraticAlgebra.from_relation_rows(d, rel_rows, names)
        return cls(algebra, phi, phi0)

    def classify(self) -> str:
        phi_zero = self.phi_is_zero()
        phi0_zero = self.phi0_is_zero()
        if phi_zero and phi0_zero:
            return "homogeneous"
        if phi0_zero:
            return "quadratic-linear"
        if phi_zero:
            return "central-curvature"
        return "mixed"


def overlap_space(p) -> Subspace:
    """K_3 = (R (x) E) ^ (E (x) R) inside E^(tensor 3)."""
    R = p.relations if isinstance(p, QuadraticAlgebra) else p.algebra.relations
    return koszul_subspace(R, 3)


def _last_slices(t: SparseVec, d: int) -> list[SparseVec]:
    """Slices t[.,.,j] for each last letter j, as degree-2 vectors."""
    out: list[SparseVec] = [{} for _ in range(d)]
    for rank3, c in t.items():
        rank2, j = divmod(rank3, d)
        out[j][rank2] = c
    return out


def _first_slices(t: SparseVec, d: int) -> list[SparseVec]:
    """Slices t[i,.,.] for each first letter i."""
    dd = d * d
    out: list[SparseVec] = [{} for _ in range(d)]
    for rank3, c in t.items():
        i, rank2 = divmod(rank3, dd)
        out[i][rank2] = c
    return out


def _r_coords(p: NonhomogeneousPresentation, vec2: SparseVec) -> Optional[list[Fraction]]:
    return p.algebra.relations.coords_of(vec2)


def _psi(p: NonhomogeneousPresentation, t: SparseVec) -> SparseVec:
    """(phi (x) I - I (x) phi) applied to an overlap vector, in E (x) E."""
    d = p.d
    out: SparseVec = {}
    for j, sl in enumerate(_last_slices(t, d)):
        coords = _r_coords(p, sl)
        if coords is None:
            raise InternalInconsistency("overlap slice not in R")
        for i, c in enumerate(p.phi_of(coords)):
            if c:
                k = i * d + j
                out[k] = out.get(k, _ZERO) + c
    for i, sl in enumerate(_first_slices(t, d)):
        coords = _r_coords(p, sl)
        if coords is None:
            raise InternalInconsistency("overlap slice not in R")
        for j, c in enumerate(p.phi_of(coords)):
            if c:
                k = i * d + j
                out[k] = out.get(k, _ZERO) - c
    return {k: c for k, c in out.items() if c}


@dataclass(frozen=True)
class PbwConditions:
    """Verdicts for the three overlap conditions.

    ``b`` and ``c`` are None ("not evaluable") when (a) fails, because their
    statements compose phi with a vector that is then not known to lie in R.
    """

    a: bool
    b: Optional[bool]
    c: Optional[bool]
    witness: Optional[dict] = None

    def all_pass(self) -> bool:
        return self.a and bool(self.b) and bool(self.c)


def check_pbw_conditions(p: NonhomogeneousPresentation) -> PbwConditions:
    """Evaluate the overlap conditions on a basis of (R(x)E) ^ (E(x)R)."""
    d = p.d
    overlap = overlap_space(p)
    a_ok = True
    witness = None
    psis: list[Optional[SparseVec]] = []
    for idx, t in enumerate(overlap.rows):
        psi_t = _psi(p, t)
        psis.append(psi_t)
        if not p.algebra.relations.contains(psi_t):
            a_ok = False
            if witness is None:
                witness = {
                    "condition": "a",
                    "overlap_index": idx,
                    "image": {k: str(v) for k, v in sorted(psi_t.items())},
                }
    if not a_ok:
        return PbwConditions(False, None, None, witness)
    b_ok = True
    c_ok = True
    for idx, (t, psi_t) in enumerate(zip(overlap.rows, psis)):
        coords = _r_coords(p, psi_t)
        # condition (b): phi(psi(t)) + (phi0 (x) I - I (x) phi0)(t) = 0 in E
        vec_e = p.phi_of(coords)
        for j, sl in enumerate(_last_slices(t, d)):
            vec_e[j] += p.phi0_of(_r_coords(p, sl))
        for i, sl in enumerate(_first_slices(t, d)):
            vec_e[i] -= p.phi0_of(_r_coords(p, sl))
        if any(vec_e):
            b_ok = False
            if witness is None:
                witness = {
                    "condition": "b",
                    "overlap_index": idx,
                    "image": [str(v) for v in vec_e],
                }
        # condition (c): phi0(psi(t)) = 0
        if p.phi0_of(coords):
            c_ok = False
            if witness is None:
                witness = {
                    "condition": "c",
                    "overlap_index": idx,
                    "value": str(p.phi0_of(coords)),
                }
    return PbwConditions(True, b_ok, c_ok, witness)


PBW_CERTIFIED = "pbw-certified"
PBW_CONDITIONS_FAILED = "conditions-failed"
PBW_UNDETERMINED = "undetermined"


def pbw_verdict(
    p: NonhomogeneousPresentation,
    conditions: Optional[PbwConditions] = None,
    certificate: Optional[KoszulityCertificate] = None,
) -> str:
    """Combine the condition battery with a Koszulity certificate.

    Necessity of the conditions is unconditional; sufficiency needs the
    quadratic part to be Koszul, which we only ever certify up to a bound.
    """
    if conditions is None:
        conditions = check_pbw_conditions(p)
    if conditions.a is False or conditions.b is False or conditions.c is False:
        return PBW_CONDITIONS_FAILED
    if certificate is not None and certificate.certified and conditions.all_pass():
        return PBW_CERTIFIED
    return PBW_UNDETERMINED


class CurvedDGA:
    """Curved differential structure (dual algebra, delta, F).

    ``delta_gen[l]`` is the degree-2 class of delta applied to the l-th dual
    generator, on the standard basis of the dual's degree-2 component;
    ``curvature`` is the degree-2 class of F.
    """

    def __init__(
        self,
        dual: QuadraticAlgebra,
        delta_gen: list[list[Fraction]],
        curvature: list[Fraction],
    ):
        self.dual = dual
        self.delta_gen = delta_gen
        self.curvature = curvature

    def delta_word(self, word: Word) -> list[Fraction]:
        """Antiderivation applied to a dual monomial, landing one degree up."""
        n = len(word)
        out = [_ZERO] * self.dual.dim(n + 1)
        sign = _ONE
        for k in range(n):
            prefix = self.dual.normal_form_word(word[:k])
            suffix = self.dual.normal_form_word(word[k + 1 :])
            mid = self.delta_gen[word[k]]
            left = self.dual.multiply(k, 2, prefix, mid)
            term = self.dual.multiply(k + 2, n - k - 1, left, suffix)
            for i, c in enumerate(term):
                out[i] += sign * c
            sign = -sign
        return out

    def delta_class(self, n: int, vec) -> list[Fraction]:
        """delta on a degree-n class via its standard-word representative.

        Canonical exactly when delta kills the dual relations (condition a');
        the verification routine uses this same computation on the relation
        representatives themselves.
        """
        comp = self.dual.component(n)
        out = [_ZERO] * self.dual.dim(n + 1)
        items = vec.items() if isinstance(vec, dict) else enumerate(vec)
        for i, c in items:
            if not c:
                continue
            for k, a in enumerate(self.delta_word(comp.standard_words[i])):
                out[k] += c * a
        return out


def build_curved_dual(p: NonhomogeneousPresentation) -> CurvedDGA:
    """Dual triple: delta on generators from phi, curvature from phi0.

    The degree-2 dual component is canonically the dual space of R; the
    class of delta(w_l) is pinned by its pairings with the canonical basis
    relations, delta(w_l)(r_a) = phi(r_a)_l, and F by F(r_a) = -phi0(r_a).
    """
    dual = p.algebra.koszul_dual()
    comp2 = dual.component(2)
    rel_rows = p.algebra.relations.rows
    r = len(rel_rows)
    if comp2.dim != r:
        raise InternalInconsistency("dual degree-2 dimension differs from dim R")
    pairing = Matrix.zero(r, r)
    for a_idx, rel in enumerate(rel_rows):
        for s_idx, word in enumerate(comp2.standard_words):
            pairing[a_idx, s_idx] = rel.get(word[0] * p.d + word[1], _ZERO)
    delta_gen = []
    for lam in range(p.d):
        rhs = [p.phi[a][lam] for a in range(r)]
        res = solve_linear(pairing, rhs)
        if not res.consistent or not res.unique:
            raise InternalInconsistency("degenerate pairing between R and its dual")
        delta_gen.append(res.solution)
    res = solve_linear(pairing, [-c for c in p.phi0])
    if not res.consistent or not res.unique:
        raise InternalInconsistency("degenerate pairing between R and its dual")
    return CurvedDGA(dual, delta_gen, res.solution)


@dataclass(frozen=True)
class CurvedConditions:
    a: bool
    b: Optional[bool]
    c: Optional[bool]
    witness: Optional[dict] = None

    def all_pass(self) -> bool:
        return self.a and bool(self.b) and bool(self.c)


def verify_curved_dual(c: CurvedDGA) -> CurvedConditions:
    """Check the curved-differential conditions on the dual side.

    (a') the antiderivation lift kills every canonical dual relation in
    degree 3; (b') delta^2 = [F, .] on generators, which extends to all of
    the dual because both sides are degree-2 derivations of it; (c')
    delta(F) = 0.  Verdicts must coincide with the overlap battery.
    """
    dual = c.dual
    d = dual.d
    a_ok = True
    witness = None
    for idx, rho in enumerate(dual.relations.rows):
        image = [_ZERO] * dual.dim(3)
        for rank2, coeff in rho.items():
            i, j = divmod(rank2, d)
            # lift of delta on the representative tensor e*_i (x) e*_j
            left = dual.multiply(2, 1, c.delta_gen[i], {j: _ONE})
            right = dual.multiply(1, 2, {i: _ONE}, c.delta_gen[j])
            for k in range(dual.dim(3)):
                image[k] += coeff * (left[k] - right[k])
        if any(image):
            a_ok = False
            if witness is None:
                witness = {
                    "condition": "a'",
                    "relation_index": idx,
                    "image": [str(v) for v in image],
                }
            break
    if not a_ok:
        return CurvedConditions(False, None, None, witness)
    b_ok = True
    for lam in range(d):
        dd = c.delta_class(2, c.delta_gen[lam])
        fw = dual.multiply(2, 1, c.curvature, {lam: _ONE})
        wf = dual.multiply(1, 2, {lam: _ONE}, c.curvature)
        commutator = [x - y for x, y in zip(fw, wf)]
        if dd != commutator:
            b_ok = False
            if witness is None:
                witness = {
                    "condition": "b'",
                    "generator": lam,
                    "delta_squared": [str(v) for v in dd],
                    "bracket": [str(v) for v in commutator],
                }
            break
    df = c.delta_class(2, c.curvature)
    c_ok = not any(df)
    if not c_ok and witness is None:
        witness = {"condition": "c'", "image": [str(v) for v in df]}
    return CurvedConditions(True, b_ok, c_ok, witness)


def curvature_is_central(c: CurvedDGA) -> bool:
    """All degree-1 commutators with F vanish exactly."""
    dual = c.dual
    for lam in range(dual.d):
        fw = dual.multiply(2, 1, c.curvature, {lam: _ONE})
        wf = dual.multiply(1, 2, {lam: _ONE}, c.curvature)
        if fw != wf:
            return False
    return True


def classify(p: NonhomogeneousPresentation) -> str:
    return p.classify()
