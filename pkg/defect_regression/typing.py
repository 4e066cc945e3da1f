"""
Type aliases used by Defect Regression.
"""

import os
from typing import Any, TypeAlias

import numpy as np
from numpy.typing import NDArray

Id: TypeAlias = str
"""The type of the identifier of a project record."""

JsonDict: TypeAlias = dict[str, Any]
"""A dictionary that can be serialized to JSON."""

StrPath: TypeAlias = str | os.PathLike[str]
"""The type of the paths accepted by the I/O functions."""

FloatArray: TypeAlias = NDArray[np.float64]
"""A numpy array of 64-bit floats (vectors and matrices alike)."""

__all__ = ["Id", "JsonDict", "StrPath", "FloatArray"]
