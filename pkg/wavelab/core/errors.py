from typing import Any, Dict, Optional


class WavelabError(Exception):
    """Base class for every failure the library reports to its callers."""

    code = "wavelab_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message, "details": self.details}


class StateDomainError(WavelabError):
    """Raised when a state leaves the open cone rho > 0, p > 0, or a rescaling vanishes."""

    code = "state_domain"


class DegenerateFamilyError(WavelabError):
    """Raised when a field family is wedge-dependent at a sampled state."""

    code = "degenerate_family"


class QuadratureError(WavelabError):
    code = "quadrature_nonconvergence"


class IntegrationError(WavelabError):
    """Raised when an ODE integration fails or leaves the positive cone."""

    code = "integration_failure"


class CFLViolationError(WavelabError):
    code = "cfl_violation"


class NonDiagonalizableError(WavelabError):
    code = "non_diagonalizable"


class PositivityLossError(WavelabError):
    code = "positivity_loss"


class GradientBlowupError(WavelabError):
    code = "gradient_blowup"


class DetectionError(WavelabError):
    """Raised when wave tracking cannot produce a consistent index."""

    code = "detection_failure"


class ClosureError(WavelabError):
    """Raised when a bracket is not expressible with state-independent graded coefficients."""

    code = "not_closed_in_graded_ansatz"


class ImmersionError(WavelabError):
    code = "immersion_failure"


class GeometryDomainError(WavelabError):
    code = "geometry_domain"


class FoliationInputError(WavelabError):
    code = "foliation_input"


class ScenarioError(WavelabError):
    """Raised when a scenario file does not parse against the schema."""

    code = "schema_violation"


class InternalError(WavelabError):
    """Wraps an unexpected exception at the CLI boundary."""

    code = "internal_error"
