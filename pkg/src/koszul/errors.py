"""Exception hierarchy for the engine.

Verdicts (a check that comes out false) are values, not exceptions; the
classes here signal misuse, malformed input, or a contradiction between
results that are supposed to be equivalent.
"""


class EngineError(Exception):
    """Base class for all engine errors."""


class DimensionMismatch(EngineError):
    """Vector or matrix sizes do not match the ambient space."""


class DegreeError(EngineError):
    """A graded degree outside the meaningful range was requested."""


class NotGorenstein(EngineError):
    """Potential extraction requested for an algebra without Poincare duality."""


class NotTwistedCyclic(EngineError):
    """No invertible twist satisfies the cyclicity system for this tensor."""


class OneSiteDegenerate(EngineError):
    """The twist system is underdetermined: 1-site nondegeneracy fails."""


class NonFiniteDual(EngineError):
    """The dual algebra does not vanish within the probed degree bound."""


class RepresentationError(EngineError):
    """A representation block is malformed or violates the relations."""


class InconsistentCertificate(EngineError):
    """Cached certificate data contradicts a recomputed quantity."""


class InternalInconsistency(EngineError):
    """Two routes that must agree exactly disagreed; maps to exit code 2."""


class SpecError(EngineError):
    """Parse-stage failure in an algebra spec file, with location info."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col
