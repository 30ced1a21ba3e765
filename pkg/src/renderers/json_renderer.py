"""JSON renderer

Documents are pydantic models; JSON is their canonical serialization, so
output for fixed inputs is byte-identical across runs.
"""

from pydantic import BaseModel

from ..utils.logger import get_logger
from .formatting import RenderError

logger = get_logger(__name__)


class JSONRenderer:
    """Render any result document as indented JSON"""

    def render(self, document: BaseModel) -> str:
        """Serialize a document

        Args:
            document: Any pydantic result document

        Returns:
            JSON text with a trailing newline
        """
        try:
            text = document.model_dump_json(indent=2, by_alias=True)
        except (TypeError, ValueError) as e:
            logger.error("JSON rendering failed", document=type(document).__name__, error=str(e))
            raise RenderError(f"Failed to render JSON: {e}") from e
        logger.debug("JSON rendered", document=type(document).__name__, size_bytes=len(text))
        return text + "\n"
