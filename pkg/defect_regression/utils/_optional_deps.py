"""
Lazy access to the optional dependencies of the package.

>>> from defect_regression.utils import _optional_deps
>>> Figure = _optional_deps.matplotlib_figure.Figure
"""

import importlib
from types import ModuleType
from typing import Final

_EXTRAS: Final = {
    "matplotlib": ("matplotlib", "plot"),
    "matplotlib_figure": ("matplotlib.figure", "plot"),
}


def __getattr__(name: str) -> ModuleType:
    try:
        module_name, extra = _EXTRAS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}") from None
    try:
        return importlib.import_module(module_name)
    except ImportError as e:
        msg = (
            f"'{module_name.split('.')[0]}' is required for this feature. Install it with the {extra!r} "
            f'extra: `pip install "defect-regression[{extra}]"`.'
        )
        raise ImportError(msg) from e
