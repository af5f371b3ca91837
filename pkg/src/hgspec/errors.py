from __future__ import annotations

from typing import Any

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_RESOURCE = 3
EXIT_VERIFICATION = 4


class HypergroupError(RuntimeError):
    """Base class; `kind` and `exit_code` feed the CLI error record."""
    kind = "error"
    exit_code = EXIT_DOMAIN

    def details(self) -> dict[str, Any]:
        return {}


# --- domain errors (exit 2) ---

class ParameterDomainError(HypergroupError, ValueError):
    """Raised when r (or lambda, or an argument) is outside the operation's domain."""
    kind = "parameter_domain"


class DegreeError(HypergroupError, ValueError):
    """Raised for negative or non-integer degrees."""
    kind = "degree"


class ArgumentOrderError(HypergroupError, ValueError):
    """Raised when the closed-form product is called with m > n."""
    kind = "argument_order"


class SingularityError(HypergroupError, ZeroDivisionError):
    """Raised at a pole of the generating function 1-r-zt+rz^2."""
    kind = "singularity"

    def __init__(self, message: str, *, z: complex, t: complex):
        super().__init__(message)
        self.z = z
        self.t = t

    def details(self) -> dict[str, Any]:
        return {"z": str(self.z), "t": str(self.t)}


class BranchAmbiguityError(HypergroupError, ValueError):
    """Raised when the branch square root is requested strictly inside the cut without a side."""
    kind = "branch_ambiguity"


class OnCutError(HypergroupError, ValueError):
    """Raised when an inverse branch or the Cauchy transform is evaluated on the cut."""
    kind = "on_cut"


class PoleError(HypergroupError, ZeroDivisionError):
    """Raised by w(z) at z = 0 and by a functional's closed form at its pole."""
    kind = "pole"


class SeriesDomainError(HypergroupError, ValueError):
    """Raised when a functional's series is evaluated outside its domain."""
    kind = "series_domain"

    def __init__(self, message: str, *, abs_z: float, radius: float):
        super().__init__(message)
        self.abs_z = abs_z
        self.radius = radius

    def details(self) -> dict[str, Any]:
        return {"abs_z": self.abs_z, "radius": self.radius}


class RegimeError(HypergroupError, ValueError):
    """Raised when a functional is not in A* (or otherwise outside the closed-form families)."""
    kind = "regime"

    def __init__(self, message: str, *, regime: Any = None):
        super().__init__(message)
        self.regime = regime

    def details(self) -> dict[str, Any]:
        if self.regime is None:
            return {}
        return {"regime": self.regime.to_json() if hasattr(self.regime, "to_json") else str(self.regime)}


# --- resource errors (exit 3) ---

class ResourceBoundError(HypergroupError):
    """Raised when a requested size exceeds a configured bound."""
    kind = "resource_bound"
    exit_code = EXIT_RESOURCE

    def __init__(self, message: str, *, requested: int, limit: int):
        super().__init__(message)
        self.requested = requested
        self.limit = limit

    def details(self) -> dict[str, Any]:
        return {"requested": self.requested, "limit": self.limit}


# --- verification errors (exit 4) ---

class VerificationError(HypergroupError):
    """Raised when an oracle cross-check disagrees."""
    kind = "verification"
    exit_code = EXIT_VERIFICATION


class QuadratureAccuracyError(VerificationError):
    """Raised when adaptive quadrature misses its target error."""
    kind = "quadrature_accuracy"

    def __init__(self, message: str, *, achieved: float, target: float):
        super().__init__(message)
        self.achieved = achieved
        self.target = target

    def details(self) -> dict[str, Any]:
        return {"achieved": self.achieved, "target": self.target}


class DivergenceError(VerificationError):
    """Raised (strict mode) when the Stieltjes extrapolation does not converge."""
    kind = "divergence"

    def __init__(self, message: str, *, residual: float):
        super().__init__(message)
        self.residual = residual

    def details(self) -> dict[str, Any]:
        return {"residual": self.residual}
