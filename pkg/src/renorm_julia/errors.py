"""Exception and warning types shared across the package."""


class RenormJuliaError(Exception):
    """Base class for all package errors."""


class PoleError(RenormJuliaError, ZeroDivisionError):
    """A finite-only routine was asked to evaluate at a pole."""


class DomainError(RenormJuliaError, ValueError):
    """Argument outside the domain where the operation is defined."""


class BranchAmbiguity(RenormJuliaError):
    """Two inverse branches are indistinguishable at working precision."""


class NonConvergence(RenormJuliaError):
    """An orbit failed to settle within the allotted iterations."""


class TruncationFailure(RenormJuliaError):
    """A series did not meet its halting rule within ``max_terms``."""


class Undecided(RenormJuliaError):
    """Basin membership could not be established (point near the Julia set)."""


class NonContraction(RenormJuliaError):
    """Inverse-branch iteration failed to contract onto a periodic point."""


class NearIntegerResonance(RenormJuliaError, ValueError):
    """ln(2b)/chi is too close to an integer for the exponent formula."""


class UnsupportedOrder(RenormJuliaError, ValueError):
    """Requested derivative order exceeds what the jets carry (4)."""


class SizeGuard(RenormJuliaError, ValueError):
    """Requested problem size exceeds an enumeration/memory guard."""


class BranchWarning(RuntimeWarning):
    """A principal-branch power was taken on its cut."""
