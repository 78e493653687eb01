"""Exact symbolic engine for level-two motivic iterated integrals.

The public surface: canonical values (core, shuffle, families), the graded
derivations (coaction), the letter-image engine (decompose), exact period
numerics, and the unramifiedness decision procedure (descent).
"""

from .coaction import TensorElem, dr, to_value
from .config import Settings, current_settings, resolve_settings, set_settings
from .core import EulerIndex, FamilyIndex, IntegralWord, LinComb
from .decompose import (
    FWord,
    get_engine,
    is_zero_H,
    l_project,
    phi,
    phi_text,
    product_span_contains,
    y_r,
)
from .descent import (
    Certificate,
    classify,
    descend,
    is_unramified,
    predicted_status,
    rational_zeta_multiple,
    search_unramified,
    verify_certificate,
)
from .errors import MotivixError
from .families import (
    family_value,
    log2_value,
    t_value,
    tz_value,
    zeta_value,
)
from .numerics import PeriodValue, load_period_table, period, reconstruct_rational
from .shuffle import canonicalize

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "EulerIndex",
    "FWord",
    "FamilyIndex",
    "IntegralWord",
    "LinComb",
    "MotivixError",
    "PeriodValue",
    "Settings",
    "TensorElem",
    "canonicalize",
    "classify",
    "current_settings",
    "descend",
    "dr",
    "family_value",
    "get_engine",
    "is_unramified",
    "is_zero_H",
    "l_project",
    "log2_value",
    "load_period_table",
    "period",
    "phi",
    "phi_text",
    "predicted_status",
    "product_span_contains",
    "rational_zeta_multiple",
    "reconstruct_rational",
    "resolve_settings",
    "search_unramified",
    "set_settings",
    "t_value",
    "to_value",
    "tz_value",
    "verify_certificate",
    "y_r",
    "zeta_value",
    "__version__",
]
