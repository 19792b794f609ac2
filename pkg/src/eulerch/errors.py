"""Exception hierarchy shared by all modules."""


class EulerchError(Exception):
    """Base class for every error raised by this package."""


class SingularMatrix(EulerchError):
    """A matrix that must be invertible has determinant zero."""


class InvalidComplex(EulerchError):
    """A validation check failed; the message names the first failed check."""


class SignInconsistency(EulerchError):
    """No consistent incidence-sign assignment exists for a cell poset."""


class NoConsistentSigns(EulerchError):
    """The sign system of a subdivision chain map has no {-1,1} solution."""


class CompositionMismatch(EulerchError):
    """Two aggregations were composed across different middle complexes."""


class NotComposable(EulerchError):
    """A chain of aggregations does not link up source-to-target."""


class FunctorialityBroken(EulerchError):
    """A local system fails strict functoriality on some 2-simplex."""


class NotASphere(EulerchError):
    """A stalk of a bundle triangulation is not homologically spherical."""


class NotACycle(EulerchError):
    """A chain offered as a cycle has nonzero simplicial boundary."""


class NotNilpotent(EulerchError):
    """A perturbation's F*psi fails to vanish within the filtration bound."""


class NotADifferential(EulerchError):
    """A perturbed differential fails to square to zero."""


class NotSquareZero(EulerchError):
    """A twisted differential fails to square to zero."""


class WorkspaceError(EulerchError):
    """A file failed to parse or a cross-reference cannot be resolved."""
