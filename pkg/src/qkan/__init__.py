"""Finite quantaloids, enriched categories and distributors, the Kan adjunction
they induce, and exhaustive checks of regularity and complete distributivity."""
from .errors import (
    BudgetExceeded,
    InternalError,
    PreconditionError,
    QkanError,
    StructureError,
    TypeMismatch,
    ValidationError,
)
from .lattice import FiniteLattice
from .quantaloid import Arrow, GirardFamily, Quantaloid, build, girard_search
from .qcat import QCategory, QFunctor
from .qdist import QDistributor, dist_compose, dist_residual, is_regular, phi_bar
from .presheaf import is_ccd, is_complete, is_opccd
from .kan import kphi, rphi
from .workspace import Workspace, parse_workspace

__all__ = [
    "Arrow",
    "BudgetExceeded",
    "FiniteLattice",
    "GirardFamily",
    "InternalError",
    "PreconditionError",
    "QCategory",
    "QDistributor",
    "QFunctor",
    "QkanError",
    "Quantaloid",
    "StructureError",
    "TypeMismatch",
    "ValidationError",
    "Workspace",
    "build",
    "dist_compose",
    "dist_residual",
    "girard_search",
    "is_ccd",
    "is_complete",
    "is_opccd",
    "is_regular",
    "kphi",
    "parse_workspace",
    "phi_bar",
    "rphi",
]
