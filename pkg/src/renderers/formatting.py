"""Shared value formatting for the renderers"""

from fractions import Fraction
from typing import Dict, List, Mapping

import mpmath

from ..models.laurent import VARIABLES, EvaluationError, Polynomial, Scalar
from ..utils.config import get_config


class RenderError(Exception):
    """Raised when rendering fails"""

    pass


def decimal_string(value: Fraction) -> str:
    """Fraction as a decimal string at the configured working precision"""
    digits = get_config().working_digits
    with mpmath.workdps(digits):
        return mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator, digits)


def evaluate_at(poly: Polynomial, point: Mapping[str, Scalar]) -> Fraction:
    """Evaluate with RenderError instead of EvaluationError"""
    try:
        return poly.evaluate(point)
    except EvaluationError as e:
        raise RenderError(f"Cannot evaluate {poly} at {dict(point)}: {e}") from e


def _latex_coefficient(c: Fraction, bare: bool) -> str:
    magnitude = abs(c)
    if magnitude.denominator != 1:
        return f"\\frac{{{magnitude.numerator}}}{{{magnitude.denominator}}}"
    if magnitude == 1 and not bare:
        return ""
    return str(magnitude.numerator)


def polynomial_to_latex(poly: Polynomial) -> str:
    """LaTeX math for a Laurent polynomial, e.g. q^{2} + p q^{3}"""
    if poly.is_zero():
        return "0"
    pieces: List[str] = []
    for mono, c in poly.sorted_terms():
        factors = []
        for name, e in zip(VARIABLES, mono):
            if e == 1:
                factors.append(name)
            elif e:
                factors.append(f"{name}^{{{e}}}")
        body = " ".join(filter(None, [_latex_coefficient(c, not factors), *factors]))
        sign = "-" if c < 0 else "+"
        pieces.append(f"{sign} {body}")
    text = " ".join(pieces)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def point_label(point: Mapping[str, Scalar]) -> Dict[str, str]:
    return {name: str(Fraction(value)) for name, value in point.items()}
