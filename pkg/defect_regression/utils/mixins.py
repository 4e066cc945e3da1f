import json
import logging
import math
from abc import ABCMeta, abstractmethod
from pathlib import Path
from typing import Any

from typing_extensions import Self

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.typing import JsonDict, StrPath

logger = logging.getLogger(__name__)


def _sanitize(value: Any) -> Any:
    """Replace the non-finite floats of a JSON-like structure by None (strict JSON has no NaN)."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_sanitize(v) for v in value]
    return value


class JsonMixin(metaclass=ABCMeta):
    """Mixin for classes that can be serialized to and from JSON."""

    @classmethod
    @abstractmethod
    def from_dict(cls, data: JsonDict) -> Self:
        """Create an element from a dictionary created with its `to_dict` method.

        Args:
            data:
                The dictionary containing the element's data.

        Returns:
            The created element.
        """
        raise NotImplementedError

    @classmethod
    def from_json(cls, path: StrPath) -> Self:
        """Construct an element from a JSON file created with :meth:`to_json`.

        Args:
            path:
                The path to the JSON file.

        Returns:
            The constructed element.
        """
        path = Path(path).expanduser()
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            msg = f"The file {path} is not a valid JSON document: {e}"
            logger.error(msg)
            raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_MODEL_DOCUMENT) from e
        return cls.from_dict(data=data)

    @abstractmethod
    def _to_dict(self) -> JsonDict:
        """Create a dictionary of the element data."""
        raise NotImplementedError

    def to_dict(self) -> JsonDict:
        """Convert the element to a dictionary.

        Non-finite numbers are converted to None.

        Returns:
            A JSON serializable dictionary with the element's data.
        """
        return _sanitize(self._to_dict())

    def to_json(self, path: StrPath) -> Path:
        """Save the current element to a JSON file.

        The output is deterministic: keys keep their insertion order, floats are written with their
        shortest round-trip representation and the file ends with a newline.

        Args:
            path:
                The path to the output file to write the element to.

        Returns:
            The path to the written file.
        """
        res = self.to_dict()
        output = json.dumps(res, ensure_ascii=False, indent=2, allow_nan=False)
        path = Path(path).expanduser().resolve()
        path.write_text(output + "\n", encoding="utf-8")
        logger.debug(f"Wrote {type(self).__name__} to {str(path)!r}.")
        return path
