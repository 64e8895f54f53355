"""Exception hierarchy.

Every numerical failure raised by the library derives from
:class:`NumericalError`; the CLI maps those to exit code 3.
"""


class NumericalError(ArithmeticError):
    """Base class for named numerical failures."""


class ZeroLeadingMinor(NumericalError):
    """A leading initial minor vanished, so the closed-form LU does not exist."""


class ZeroPivot(NumericalError):
    """Unpivoted elimination hit an exact zero pivot."""


class SingularBlock(NumericalError):
    pass


class DegenerateFactorization(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class ComplexSpectrum(NumericalError):
    """Imaginary parts too large for a matrix declared totally positive."""


class ImagResidueTooLarge(NumericalError):
    pass


class VerificationFailed(NumericalError):
    """A built-in residual check of an algebraic identity failed."""


class RepeatedEigenvalue(NumericalError):
    pass


class SpectrumMismatch(NumericalError):
    pass
