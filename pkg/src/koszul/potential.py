"""Twisted potentials of Koszul-Gorenstein quadratic algebras.

A degree-D potential w is stored by its components on length-D words.  The
twist Q is the unique matrix with

    w[(mu,) + rest] = sum_nu Q[nu][mu] * w[rest + (nu,)]

for all mu and all length D-1 words rest; this component convention is the
one that reproduces the known diagonal twist of the deformed
three-generator example and is locked by a regression test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    DegreeError,
    InconsistentCertificate,
    InternalInconsistency,
    NotGorenstein,
    NotTwistedCyclic,
    OneSiteDegenerate,
)
from .linalg import Matrix, Subspace, rref_canonicalize, solve_linear, zero_space
from .quadratic import QuadraticAlgebra, Word, all_words, word_rank, word_unrank
from .homology import GorensteinReport, gorenstein_check

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class TwistedPotential:
    """Components of a degree-D tensor over length-D words (zeros omitted)."""

    d: int
    degree: int
    components: dict[Word, Fraction]

    def component(self, word: Word) -> Fraction:
        return self.components.get(word, _ZERO)

    def first_index_matrix(self) -> Matrix:
        """d x d^(D-1) matrix, first index against the remaining ones."""
        cols = self.d ** (self.degree - 1)
        m = Matrix.zero(self.d, cols)
        for word, c in self.components.items():
            m[word[0], word_rank(word[1:], self.d)] = c
        return m

    def one_site_nondegenerate(self) -> bool:
        return self.first_index_matrix().rank() == self.d


def _normalize(d: int, degree: int, comps: dict[Word, Fraction]) -> dict[Word, Fraction]:
    comps = {w: c for w, c in comps.items() if c}
    if not comps:
        return comps
    lead = comps[min(comps)]  # first nonzero component in lex word order
    if lead == 1:
        return comps
    return {w: c / lead for w, c in comps.items()}


def potential_from_vector(d: int, degree: int, vec) -> TwistedPotential:
    """Build a potential from coordinates over length-``degree`` words."""
    if isinstance(vec, dict):
        comps = {word_unrank(r, degree, d): Fraction(c) for r, c in vec.items() if c}
    else:
        comps = {
            word_unrank(r, degree, d): Fraction(c) for r, c in enumerate(vec) if c
        }
    return TwistedPotential(d, degree, _normalize(d, degree, comps))


def extract_potential(
    A: QuadraticAlgebra,
    D: Optional[int] = None,
    report: Optional[GorensteinReport] = None,
) -> tuple[TwistedPotential, Matrix]:
    """Extract the twisted potential of a Koszul-Gorenstein algebra.

    Runs (or accepts) a Gorenstein check; the potential is the normalized
    generator of the one-dimensional top Koszul subspace.  Preregularity is
    then verified: a failure after a Gorenstein pass cannot be repaired and
    raises :class:`InternalInconsistency`.
    """
    if report is None:
        report = gorenstein_check(A)
    if not report.gorenstein or report.global_dim is None:
        raise NotGorenstein(
            "potential extraction needs a certified Koszul-Gorenstein algebra"
        )
    if D is None:
        D = report.global_dim
    elif D != report.global_dim:
        raise InconsistentCertificate(
            f"requested degree {D} but certified global dimension is {report.global_dim}"
        )
    top = A.koszul_subspace(D)
    if top.dim != 1:
        raise InconsistentCertificate(
            f"top Koszul subspace has dimension {top.dim}, expected 1"
        )
    w = potential_from_vector(A.d, D, top.rows[0])
    try:
        if not w.one_site_nondegenerate():
            raise OneSiteDegenerate("extracted tensor is 1-site degenerate")
        q = solve_qw(w)
    except (OneSiteDegenerate, NotTwistedCyclic) as exc:
        raise InternalInconsistency(
            f"Gorenstein algebra produced a non-preregular tensor: {exc}"
        ) from exc
    return w, q


def solve_qw(w: TwistedPotential) -> Matrix:
    """Solve the twisted-cyclicity system for the twist matrix.

    The system decouples per first index mu: W q_mu = b_mu with W the
    last-index matrix.  Inconsistency means w is not twisted-cyclic; a
    consistent but underdetermined system contradicts 1-site nondegeneracy.
    """
    d, D = w.d, w.degree
    if D < 1:
        raise DegreeError("potentials have degree >= 1")
    rest_words = all_words(D - 1, d)
    # W[rest][nu] = w[rest + (nu,)]
    W = Matrix.zero(len(rest_words), d)
    for r_idx, rest in enumerate(rest_words):
        for nu in range(d):
            W[r_idx, nu] = w.component(rest + (nu,))
    q = Matrix.zero(d, d)
    for mu in range(d):
        b = [w.component((mu,) + rest) for rest in rest_words]
        res = solve_linear(W, b)
        if not res.consistent:
            raise NotTwistedCyclic(
                f"cyclicity system inconsistent at first index {mu}"
            )
        if not res.unique:
            raise OneSiteDegenerate(
                "twist underdetermined: the tensor is 1-site degenerate"
            )
        for nu in range(d):
            q[nu, mu] = res.solution[nu]
    if q.rank() != d:
        raise NotTwistedCyclic("the solved twist matrix is singular")
    _verify_twist(w, q)
    return q


def _verify_twist(w: TwistedPotential, q: Matrix) -> None:
    d, D = w.d, w.degree
    for word, c in w.components.items():
        rest = word[1:]
        acc = _ZERO
        for nu in range(d):
            acc += q[nu, word[0]] * w.component(rest + (nu,))
        if acc != c:
            raise InternalInconsistency("twist verification failed")


def twist_fixes_potential(w: TwistedPotential, q: Matrix) -> bool:
    """Iterating the cyclicity rotation D times must return w exactly."""
    comps = dict(w.components)
    for _ in range(w.degree):
        comps = _rotate(w.d, w.degree, comps, q)
    return comps == w.components


def _rotate(d: int, D: int, comps: dict[Word, Fraction], q: Matrix) -> dict[Word, Fraction]:
    """One cyclicity step: w'[(mu,)+rest] = sum_nu q[nu][mu] w[rest+(nu,)]."""
    out: dict[Word, Fraction] = {}
    for rest in all_words(D - 1, d):
        col = [comps.get(rest + (nu,), _ZERO) for nu in range(d)]
        if not any(col):
            continue
        for mu in range(d):
            acc = sum((q[nu, mu] * col[nu] for nu in range(d)), _ZERO)
            if acc:
                out[(mu,) + rest] = acc
    return out


def relations_from_potential(w: TwistedPotential) -> Subspace:
    """Span of the degree-2 contractions of w over all leading index words."""
    d, D = w.d, w.degree
    if D < 2:
        return zero_space(d * d)
    rows: list[dict[int, Fraction]] = []
    for lead in all_words(D - 2, d):
        row: dict[int, Fraction] = {}
        for mu in range(d):
            for nu in range(d):
                c = w.component(lead + (mu, nu))
                if c:
                    row[mu * d + nu] = c
        if row:
            rows.append(row)
    return rref_canonicalize(rows, d * d)


def calabi_yau_check(w: TwistedPotential, q: Matrix) -> bool:
    """True iff the twist is (-1)^(D+1) times the identity."""
    sign = _ONE if w.degree % 2 == 1 else -_ONE
    return q == Matrix.identity(w.d).scale(sign)


def levi_civita_potential(d: int) -> TwistedPotential:
    """The fully antisymmetric degree-d tensor with leading component 1."""
    from itertools import permutations

    comps: dict[Word, Fraction] = {}
    for perm in permutations(range(d)):
        comps[perm] = Fraction(_perm_sign(perm))
    return TwistedPotential(d, d, _normalize(d, d, comps))


def _perm_sign(perm: Word) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
