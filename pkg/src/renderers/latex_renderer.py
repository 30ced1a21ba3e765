"""LaTeX renderer

Tabular environments built from jinja2 templates. The templates use
((* *)) / ((( ))) delimiters so LaTeX braces need no escaping.
"""

from typing import Dict, List

from jinja2 import DictLoader, Environment, StrictUndefined, TemplateError
from pydantic import BaseModel

from ..models.schema import (
    NumericResultDocument,
    OperatorExprDocument,
    PolynomialDocument,
    StirlingTableDocument,
    VerificationReport,
    polynomial_from_records,
)
from ..utils.logger import get_logger
from .formatting import RenderError, polynomial_to_latex

logger = get_logger(__name__)

TEMPLATES: Dict[str, str] = {
    "triangle.tex": r"""% ((( caption )))
\begin{tabular}{r|((( "c" * columns )))}
$n \backslash k$ & ((( header | join(" & ") ))) \\
\hline
((* for row in rows *))
((( row.n ))) & ((( row.cells | join(" & ") ))) \\
((* endfor *))
\end{tabular}
""",
    "expression.tex": r"""% ((( caption )))
\begin{tabular}{l|l}
term & coefficient \\
\hline
((* for term in terms *))
$((( term.word )))$ & $((( term.coeff )))$ \\
((* endfor *))
\end{tabular}
""",
    "value.tex": r"""% ((( caption )))
\[
((( lhs ))) = ((( value )))
\]
""",
    "report.tex": r"""% ((( caption )))
\begin{tabular}{l|l|l}
check & parameters & verdict \\
\hline
((* for row in rows *))
((( row.name ))) & ((( row.params ))) & ((( row.verdict ))) \\
((* endfor *))
\end{tabular}
""",
}

_SPECIALS = {"&": r"\&", "%": r"\%", "$": r"\$", "#": r"\#", "_": r"\_", "{": r"\{", "}": r"\}",
             "~": r"\textasciitilde{}", "^": r"\textasciicircum{}", "\\": r"\textbackslash{}"}


def escape_text(text: str) -> str:
    """Escape LaTeX specials in plain text cells"""
    return "".join(_SPECIALS.get(ch, ch) for ch in text)


def _operator_word(x: int, n: int, d: int) -> str:
    parts = []
    for name, e in (("X", x), ("N_p", n), ("D_{p,q}", d)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{{{e}}}")
    return " ".join(parts) or "1"


class LaTeXRenderer:
    """Render result documents as LaTeX tabulars"""

    def __init__(self):
        self.env = Environment(
            loader=DictLoader(TEMPLATES),
            block_start_string="((*",
            block_end_string="*))",
            variable_start_string="(((",
            variable_end_string=")))",
            comment_start_string="((=",
            comment_end_string="=))",
            trim_blocks=True,
            lstrip_blocks=True,
            autoescape=False,
            undefined=StrictUndefined,
        )

    def render(self, document: BaseModel) -> str:
        try:
            if isinstance(document, StirlingTableDocument):
                return self._triangle(document)
            if isinstance(document, OperatorExprDocument):
                return self._expression(document)
            if isinstance(document, PolynomialDocument):
                value = polynomial_to_latex(polynomial_from_records(document.value))
                return self._render("value.tex", caption=escape_text(document.label),
                                    lhs=self._label_math(document.label, document.params), value=value)
            if isinstance(document, NumericResultDocument):
                return self._render("value.tex", caption=escape_text(document.label),
                                    lhs=self._label_math(document.label, document.params), value=document.value)
            if isinstance(document, VerificationReport):
                return self._report(document)
        except TemplateError as e:
            logger.error("LaTeX rendering failed", document=type(document).__name__, error=str(e))
            raise RenderError(f"Failed to render LaTeX: {e}") from e
        raise RenderError(f"No LaTeX layout for {type(document).__name__}")

    def _render(self, name: str, **context) -> str:
        text = self.env.get_template(name).render(**context)
        logger.debug("LaTeX rendered", template=name, size_bytes=len(text))
        return text

    @staticmethod
    def _label_math(label: str, params: Dict[str, str]) -> str:
        args = ", ".join(f"{k}={v}" for k, v in params.items())
        name = r"\mathrm{" + escape_text(label) + "}"
        return f"{name}({args})" if args else name

    def _triangle(self, document: StirlingTableDocument) -> str:
        size = len(document.rows)
        rows: List[Dict[str, object]] = []
        for n, row in enumerate(document.rows):
            cells = [f"${polynomial_to_latex(polynomial_from_records(c))}$" for c in row]
            cells += [""] * (size - len(cells))
            rows.append({"n": n, "cells": cells})
        return self._render("triangle.tex", caption=escape_text(document.variant.label()),
                            columns=size, header=[str(k) for k in range(size)], rows=rows)

    def _expression(self, document: OperatorExprDocument) -> str:
        terms = [
            {"word": _operator_word(t.x, t.n, t.d), "coeff": polynomial_to_latex(polynomial_from_records(t.coeff))}
            for t in document.terms
        ]
        return self._render("expression.tex", caption=escape_text(document.word or "normal form"), terms=terms)

    def _report(self, report: VerificationReport) -> str:
        rows = [
            {"name": escape_text(c.name),
             "params": escape_text(", ".join(f"{k}={v}" for k, v in c.params.items())),
             "verdict": c.verdict.value}
            for c in report.checks
        ]
        rows += [
            {"name": escape_text(f"{r.identity} ({r.form.value})"),
             "params": escape_text(", ".join(f"{k}={v}" for k, v in r.params.items())),
             "verdict": r.verdict.value}
            for r in report.spivey
        ]
        return self._render("report.tex", caption=f"{report.identity.value}: {report.verdict.value}", rows=rows)
