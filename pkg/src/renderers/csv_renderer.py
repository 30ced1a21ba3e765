"""CSV renderer

One header row, then one row per entry. Polynomial values are evaluated at
a rational point and written as decimal strings next to the exact value.
"""

import csv
import io
from typing import Dict, List, Mapping, Optional, Sequence

from pydantic import BaseModel

from ..models.laurent import Scalar
from ..models.schema import (
    NumericResultDocument,
    OperatorExprDocument,
    PolynomialDocument,
    StirlingTableDocument,
    VerificationReport,
    polynomial_from_records,
)
from ..utils.logger import get_logger
from .formatting import RenderError, decimal_string, evaluate_at

logger = get_logger(__name__)

DEFAULT_POINT: Dict[str, Scalar] = {"p": 1, "q": 1, "h": 1, "x": 1}


def _params(params: Mapping[str, str]) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items())


class CSVRenderer:
    """Render result documents as CSV, evaluating polynomials at `point`"""

    def __init__(self, point: Optional[Mapping[str, Scalar]] = None):
        self.point = {**DEFAULT_POINT, **(point or {})}

    def render(self, document: BaseModel) -> str:
        if isinstance(document, StirlingTableDocument):
            header, rows = self._table(document)
        elif isinstance(document, OperatorExprDocument):
            header, rows = self._expr(document)
        elif isinstance(document, PolynomialDocument):
            header, rows = self._polynomial(document)
        elif isinstance(document, NumericResultDocument):
            header = ["label", "params", "value", "terms_used"]
            rows = [[document.label, _params(document.params), document.value, str(document.terms_used)]]
        elif isinstance(document, VerificationReport):
            header, rows = self._report(document)
        else:
            raise RenderError(f"No CSV layout for {type(document).__name__}")
        return self._write(header, rows)

    def _value_cells(self, records) -> List[str]:
        value = evaluate_at(polynomial_from_records(records), self.point)
        return [str(value), decimal_string(value)]

    def _table(self, document: StirlingTableDocument):
        header = ["n", "k", "exact", "value"]
        rows = [
            [str(n), str(k), *self._value_cells(entry)]
            for n, row in enumerate(document.rows)
            for k, entry in enumerate(row)
        ]
        return header, rows

    def _expr(self, document: OperatorExprDocument):
        header = ["x", "N", "D", "exact", "value"]
        rows = [[str(t.x), str(t.n), str(t.d), *self._value_cells(t.coeff)] for t in document.terms]
        return header, rows

    def _polynomial(self, document: PolynomialDocument):
        header = ["label", "params", "exact", "value"]
        return header, [[document.label, _params(document.params), *self._value_cells(document.value)]]

    def _report(self, report: VerificationReport):
        header = ["identity", "check", "params", "verdict", "residual"]
        rows = [[report.identity.value, c.name, _params(c.params), c.verdict.value, c.residual or ""]
                for c in report.checks]
        rows += [[r.identity, r.form.value, _params(r.params), r.verdict.value, r.note or ""]
                 for r in report.spivey]
        return header, rows

    @staticmethod
    def _write(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        logger.debug("CSV rendered", rows=len(rows))
        return buffer.getvalue()
