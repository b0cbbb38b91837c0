"""Exception types shared across the package.

Everything derives from MtgError so callers can catch library failures
with one except clause.  Decode failures form their own small hierarchy
because the PKC layer treats them as a value-level outcome (a malformed
ciphertext), not a bug.
"""


class MtgError(Exception):
    """Base class for all library errors."""


# --- field construction -------------------------------------------------

class NotPrime(MtgError):
    pass


class ReducibleModulus(MtgError):
    pass


class DegreeMismatch(MtgError):
    pass


class LevelMismatch(MtgError):
    pass


class DivisionByZero(MtgError, ZeroDivisionError):
    pass


class TooLarge(MtgError):
    """An enumeration bound was exceeded."""


# --- polynomials --------------------------------------------------------

class ZeroPolynomial(MtgError):
    pass


class ZeroModulus(MtgError):
    pass


class BadDegrees(MtgError):
    """eea_trace requires deg S < deg G."""


# --- matrices -----------------------------------------------------------

class IndexOutOfRange(MtgError):
    pass


class Duplicate(MtgError):
    pass


# --- code construction --------------------------------------------------

class ParamViolation(MtgError):
    pass


class GoppaRootInSupport(ParamViolation):
    pass


# --- decoding -----------------------------------------------------------

class LengthMismatch(MtgError):
    pass


class UnsupportedTwistCount(MtgError):
    """The decoder handles at most one twist."""


class DecodeFailure(MtgError):
    """No admissible locator/evaluator pair: more errors than the radius,
    or an inconsistent syndrome."""


class RootNotInSupport(DecodeFailure):
    pass


class MagnitudeOutsideBaseField(DecodeFailure):
    pass


class RepeatedRoot(DecodeFailure):
    pass


class UnexpectedDegree(MtgError):
    """deg sigma_nu > t/2; impossible for a well-formed trace."""


# --- public-key scheme --------------------------------------------------

class ParamInfeasible(MtgError):
    pass


class RetryExhausted(MtgError):
    pass


class WrongWeight(MtgError):
    pass


class WeightOutOfRange(MtgError):
    pass


class DecryptFailure(MtgError):
    """Ciphertext did not decode; signalled as a value by the CLI."""


# --- key-recovery lab ---------------------------------------------------

class NoCandidate(MtgError):
    pass


class MultipleCandidates(MtgError):
    def __init__(self, candidates):
        super().__init__(f"{len(candidates)} candidates passed the syndrome test")
        self.candidates = candidates


class EpsilonTooSmall(MtgError):
    pass


# --- quasi-cyclic constructions ----------------------------------------

class EvenCharacteristic(MtgError):
    pass


class ZeroShift(MtgError):
    pass


class FixedPointInSupport(MtgError):
    pass


class BadT(MtgError):
    """Quasi-cyclic construction requires t = 1 + p^s."""


class SupportNotInvariant(MtgError):
    pass
