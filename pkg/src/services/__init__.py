"""Core computation services"""

from .normal_ordering import SupportShapeError, apply_to_poly, extract_stirling, op_mul, op_pow
from .numeric_series import ConvergenceError
from .pq_functions import UndefinedParameterError, h_param, pq_number, qh_binomial
from .stirling_service import StirlingError, StirlingService, get_stirling_service
from .touchard_service import TouchardService
from .verification_service import VerificationError, VerificationService, get_verification_service
from .word_parser import WordSyntaxError, evaluate_word, parse_word

__all__ = [
    "SupportShapeError",
    "apply_to_poly",
    "extract_stirling",
    "op_mul",
    "op_pow",
    "ConvergenceError",
    "UndefinedParameterError",
    "h_param",
    "pq_number",
    "qh_binomial",
    "StirlingError",
    "StirlingService",
    "get_stirling_service",
    "TouchardService",
    "VerificationError",
    "VerificationService",
    "get_verification_service",
    "WordSyntaxError",
    "evaluate_word",
    "parse_word",
]
