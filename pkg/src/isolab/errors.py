"""Exception types shared across the package."""


class IsolabError(Exception):
    """Base class for package-specific errors."""


class InputContractError(IsolabError, ValueError):
    """An argument violates a documented precondition."""


class StereographicPoleError(IsolabError, ValueError):
    """Stereographic projection evaluated at (or too near) its own pole."""


class FamilyIntegrityError(IsolabError):
    """A constructed family produced values a genuine family cannot produce,
    e.g. the sphere restriction left [-1, 1]; usually a calibration bug."""


class FamilyRejectedError(IsolabError):
    """A user-supplied polynomial failed structural verification."""

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class StartAtFocalError(IsolabError):
    """Level projection started where the normal direction is undefined."""


class SamplingError(IsolabError):
    """Rejection sampling exhausted its retry budget."""


class FocalDegeneracyError(IsolabError):
    """A shape operator was requested where the level is singular."""


class ClusteringError(IsolabError):
    """Eigenvalue clustering was ambiguous or structurally impossible."""


class FocalCrossingError(IsolabError):
    """Parallel transport of a curvature hit a focal distance."""

    def __init__(self, message, t_critical):
        super().__init__(message)
        self.t_critical = t_critical


class PoleIsFocalError(IsolabError):
    """A distance-function pole lies on the focal set, where the normal
    great circle through it is not unique."""


class NearFocalPoleError(IsolabError):
    """A focal parameter sits numerically on top of the critical distance,
    so the index count is undefined (the pole is effectively focal)."""


class ConvergenceError(IsolabError):
    """An iterative solve did not reach its tolerance."""


class MeshExportError(IsolabError):
    """Mesh export unavailable for the requested family or configuration."""
