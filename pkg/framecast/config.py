"""
Framecast configuration
Numerical tolerances shared by every service, read once from the environment
"""

import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from framecast.errors import ConfigurationError

# Load environment variables
load_dotenv()


class Tolerances(BaseModel):
    """Tolerance block echoed into every report"""
    tol_identity: float = Field(1e-9, gt=0, description="Identity / residual tolerance")
    rank_tol: float = Field(1e-10, gt=0, lt=1, description="Relative singular value cutoff (times sigma_max)")
    radius_margin: float = Field(1e-8, ge=0, lt=1, description="Stein solver refuses radius >= 1 - margin")
    node_merge_tol: float = Field(1e-8, ge=0, description="Relative spectral node merge distance")
    stein_direct_max_dim: int = Field(32, ge=1, description="Largest dim solved by the Kronecker system")
    default_trials: int = Field(10_000, ge=1, description="Default sampling trials")
    default_seed: int = Field(0, description="Default random seed")

    model_config = {"frozen": True}

    def override(self, **changes) -> "Tolerances":
        """Return a validated copy with the non-None changes applied"""
        values = self.model_dump()
        values.update({key: value for key, value in changes.items() if value is not None})
        try:
            return Tolerances(**values)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid tolerance override: {e.errors()[0]['msg']}")

    def as_meta(self) -> dict:
        return {
            "tol_identity": self.tol_identity,
            "rank_tol": self.rank_tol,
            "radius_margin": self.radius_margin,
            "node_merge_tol": self.node_merge_tol,
        }


# Environment variable -> field
ENV_OVERRIDES = {
    "FRAMECAST_TOL_IDENTITY": "tol_identity",
    "FRAMECAST_RANK_TOL": "rank_tol",
    "FRAMECAST_RADIUS_MARGIN": "radius_margin",
    "FRAMECAST_NODE_MERGE_TOL": "node_merge_tol",
}


def load_tolerances(environ: Optional[dict] = None) -> Tolerances:
    """Build tolerances from environment variables, falling back to defaults"""
    environ = os.environ if environ is None else environ
    changes = {}
    for variable, field_name in ENV_OVERRIDES.items():
        raw = environ.get(variable)
        if raw is None or raw.strip() == "":
            continue
        try:
            changes[field_name] = float(raw)
        except ValueError:
            raise ConfigurationError(f"{variable} must be a number, got {raw!r}")
    return Tolerances().override(**changes)


try:
    settings = load_tolerances()
except ConfigurationError:
    # the CLI reloads and reports the bad variable; library use falls back to defaults
    settings = Tolerances()


def get_tolerances() -> Tolerances:
    """Return the process-wide tolerance settings"""
    return settings


def resolve(tol: Optional[Tolerances]) -> Tolerances:
    return settings if tol is None else tol
