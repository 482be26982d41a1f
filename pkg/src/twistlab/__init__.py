"""Exact construction, verification and classification of twisting maps."""

from .coeffring import QQ, ZZ, Ring, RingValue, binomial
from .errors import (ExtensionError, HypothesisError, InternalError, StructuralError,
                     TwistError)
from .polyalg import BiPoly, Poly, QuotPoly, TruncPoly, parse_poly
from .twistcore import AlphaFamily, VerificationReport, verify_axioms

__all__ = [
    "QQ", "ZZ", "Ring", "RingValue", "binomial",
    "TwistError", "StructuralError", "HypothesisError", "ExtensionError", "InternalError",
    "Poly", "QuotPoly", "TruncPoly", "BiPoly", "parse_poly",
    "AlphaFamily", "VerificationReport", "verify_axioms",
]
