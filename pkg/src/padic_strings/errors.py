"""Exception types shared across the package."""


class PadicStringsError(Exception):
    """Base class for all package-specific errors."""


class PrecisionError(PadicStringsError):
    """An affine image needs more digits than the map's working precision holds."""


class PoleProximityError(PadicStringsError):
    """Zeta evaluation requested too close to a pole.

    The offending denominator root (in the z variable) is attached as ``z_root``.
    """

    def __init__(self, message, z_root):
        super().__init__(message)
        self.z_root = z_root


class RootFindingError(PadicStringsError):
    """Polynomial root finder failed to converge; the polynomial is attached."""

    def __init__(self, message, coefficients):
        super().__init__(message)
        self.coefficients = tuple(coefficients)


class InternalConsistencyError(PadicStringsError):
    """Two independent computations of the same quantity disagree.

    Raised when a built-in cross-check fails (residue formulas, conjugate
    symmetry of tube series, closed-form identities).  CLI maps this to exit
    code 2.
    """
