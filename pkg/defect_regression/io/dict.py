"""
This module is not intended to be used by external users. It can be modified in the future without any
notice. Use instead the methods `FittedModel.to_dict`, `FittedModel.from_dict`, `FittedModel.to_json` and
`FittedModel.from_json` to persist models.
"""

import logging
import math
from typing import TYPE_CHECKING, Any, Final

import numpy as np

from defect_regression.exceptions import DefectRegressionException, DefectRegressionExceptionCode
from defect_regression.typing import JsonDict

if TYPE_CHECKING:
    from defect_regression.models.fitted import FittedModel

logger = logging.getLogger(__name__)

MODEL_SCHEMA_VERSION: Final = 1
"""The version of the model documents written by this package."""

_STATISTICS: Final = ("s", "sse", "sst", "r_squared", "adj_r_squared")
_OPTIONAL_STATISTICS: Final = ("f_stat", "f_p_value")  # undefined (null) for intercept-only models


def model_to_dict(model: "FittedModel") -> JsonDict:
    """Return a dictionary of the model that can be serialized to JSON.

    Non-finite numbers are left as is; the JSON writer replaces them by null.
    """
    terms = list(model.term_names)
    res: JsonDict = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "spec": model.spec.to_dict(),
        "n": model.n,
        "p": model.p,
        "term_order": terms,
        "coefficients": dict(zip(terms, map(float, model.coefficients), strict=True)),
        "s": float(model.s),
        "sse": float(model.sse),
        "sst": float(model.sst),
        "r_squared": float(model.r_squared),
        "adj_r_squared": float(model.adj_r_squared),
        "f_stat": float(model.f_stat),
        "f_p_value": float(model.f_p_value),
        "std_errors": dict(zip(terms, map(float, model.std_errors), strict=True)),
        "t_stats": dict(zip(terms, map(float, model.t_stats), strict=True)),
        "p_values": dict(zip(terms, map(float, model.p_values), strict=True)),
        "xtx_inv": [[float(v) for v in row] for row in model.xtx_inv],
        "degenerate": model.degenerate,
    }
    if model.fitted is not None and model.residuals is not None:
        res["project_ids"] = list(model.project_ids) if model.project_ids is not None else None
        res["fitted"] = [float(v) for v in model.fitted]
        res["residuals"] = [float(v) for v in model.residuals]
    return res


def _bad_document(msg: str) -> DefectRegressionException:
    logger.error(msg)
    return DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_MODEL_DOCUMENT)


def _get(data: JsonDict, key: str) -> Any:
    try:
        return data[key]
    except KeyError:
        raise _bad_document(f"The model document is missing the field {key!r}.") from None


def _number(value: Any, field: str, *, allow_null: bool = False) -> float:
    if value is None and allow_null:
        return math.nan
    if isinstance(value, bool) or not isinstance(value, int | float) or not math.isfinite(value):
        raise _bad_document(f"The field {field!r} of the model document must be a finite number, got {value!r}.")
    return float(value)


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _bad_document(f"The field {field!r} of the model document must be an integer, got {value!r}.")
    return value


def _term_values(data: JsonDict, key: str, terms: list[str], *, allow_null: bool = False) -> np.ndarray:
    values = _get(data, key)
    if not isinstance(values, dict) or list(values) != terms:
        raise _bad_document(
            f"The field {key!r} of the model document must map the terms {', '.join(terms)} in this order."
        )
    return np.array([_number(values[t], f"{key}.{t}", allow_null=allow_null) for t in terms], dtype=np.float64)


def _vector(data: JsonDict, key: str, n: int) -> np.ndarray:
    values = _get(data, key)
    if not isinstance(values, list) or len(values) != n:
        raise _bad_document(f"The field {key!r} of the model document must be a list of {n} numbers.")
    return np.array([_number(v, f"{key}[{i}]") for i, v in enumerate(values)], dtype=np.float64)


def model_from_dict(data: JsonDict) -> JsonDict:
    """Validate a model document and return the keyword arguments of a fitted model.

    Args:
        data:
            The dictionary created by :func:`model_to_dict` (usually read from a JSON file).

    Returns:
        The fields of the model, ready to be passed to the `FittedModel` constructor.
    """
    from defect_regression.models.spec import ModelSpec

    if not isinstance(data, dict):
        raise _bad_document(f"The model document must be a JSON object, got {type(data).__name__}.")
    version = data.get("schema_version")
    if version != MODEL_SCHEMA_VERSION:
        msg = f"Unsupported model schema version {version!r}; this version reads version {MODEL_SCHEMA_VERSION}."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.BAD_SCHEMA_VERSION)
    if "xtx_inv" not in data:
        msg = "The model document has no 'xtx_inv' field: the model cannot produce intervals."
        logger.error(msg)
        raise DefectRegressionException(msg=msg, code=DefectRegressionExceptionCode.MISSING_INTERVAL_DATA)

    spec_data = _get(data, "spec")
    if not isinstance(spec_data, dict):
        raise _bad_document(f"The field 'spec' of the model document must be an object, got {spec_data!r}.")
    target = spec_data.get("target")
    if "target" in spec_data and not isinstance(target, str):
        raise _bad_document(f"The field 'spec.target' of the model document must be a string, got {target!r}.")
    predictors = spec_data.get("predictors")
    if "predictors" in spec_data and (
        not isinstance(predictors, list) or not all(isinstance(name, str) for name in predictors)
    ):
        raise _bad_document(
            f"The field 'spec.predictors' of the model document must be a list of strings, got {predictors!r}."
        )
    try:
        spec = ModelSpec.from_dict(spec_data)
    except KeyError as e:
        raise _bad_document(f"The model specification is missing the field {e.args[0]!r}.") from e

    n = _integer(_get(data, "n"), "n")
    p = _integer(_get(data, "p"), "p")
    terms = _get(data, "term_order")
    if terms != list(spec.term_names):
        raise _bad_document(
            f"The term order {terms!r} of the model document does not match its specification "
            f"{list(spec.term_names)!r}."
        )
    coefficients = _get(data, "coefficients")
    if not isinstance(coefficients, dict):
        raise _bad_document(f"The field 'coefficients' of the model document must be an object, got {coefficients!r}.")
    n_coefficients = len(coefficients)
    if p != len(terms) or p != n_coefficients:
        raise _bad_document(
            f"The model document declares p={p} but has {n_coefficients} coefficient(s) for {len(terms)} term(s)."
        )
    if n <= p:
        raise _bad_document(f"The model document declares n={n} observation(s) for p={p} parameter(s).")

    xtx_inv = _get(data, "xtx_inv")
    square = isinstance(xtx_inv, list) and len(xtx_inv) == p
    if not square or any(not isinstance(r, list) or len(r) != p for r in xtx_inv):
        raise _bad_document(f"The field 'xtx_inv' of the model document must be a {p}×{p} matrix (list of rows).")

    degenerate = data.get("degenerate", False)
    if not isinstance(degenerate, bool):
        raise _bad_document(f"The field 'degenerate' of the model document must be a boolean, got {degenerate!r}.")

    res: JsonDict = {
        "spec": spec,
        "n": n,
        "coefficients": _term_values(data, "coefficients", terms),
        "std_errors": _term_values(data, "std_errors", terms),
        "t_stats": _term_values(data, "t_stats", terms, allow_null=True),
        "p_values": _term_values(data, "p_values", terms),
        "xtx_inv": np.array(
            [[_number(v, f"xtx_inv[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(xtx_inv)],
            dtype=np.float64,
        ),
        "degenerate": degenerate,
    }
    for key in _STATISTICS:
        res[key] = _number(_get(data, key), key)
    for key in _OPTIONAL_STATISTICS:
        res[key] = _number(_get(data, key), key, allow_null=True)

    if "fitted" in data or "residuals" in data:
        res["fitted"] = _vector(data, "fitted", n)
        res["residuals"] = _vector(data, "residuals", n)
        project_ids = data.get("project_ids")
        if project_ids is not None:
            if not isinstance(project_ids, list) or len(project_ids) != n:
                raise _bad_document(f"The field 'project_ids' of the model document must be a list of {n} names.")
            res["project_ids"] = tuple(str(i) for i in project_ids)
    return res
