"""
Units registry used by Defect Regression.

Code size is expressed in lines of code (``loc``) or thousands of lines of code (``kloc``), effort in
person-days. Functions decorated with :func:`ureg_wraps` accept plain floats (assumed to already be in
the declared unit) or :data:`Q_` quantities in any compatible unit.

>>> from defect_regression.units import Q_
>>> Q_(1.5, "kloc").m_as("loc")
1500.0
"""

from collections.abc import Callable
from typing import Any, TypeVar

from pint import UnitRegistry

FuncT = TypeVar("FuncT", bound=Callable[..., Any])

ureg: UnitRegistry = UnitRegistry()
"""The unit registry of the package."""

ureg.define("line_of_code = [code_size] = loc")
ureg.define("kilo_line_of_code = 1000 * line_of_code = kloc")
ureg.define("person_day = [effort]")

Q_ = ureg.Quantity
"""The quantity class of the package registry."""


def ureg_wraps(
    ret: str | tuple[str | None, ...] | None, args: tuple[str | None, ...], strict: bool = False
) -> Callable[[FuncT], FuncT]:
    """Wraps a function to convert its quantity arguments to the given units.

    Args:
        ret:
            The units of the return value(s), or None to return the raw value.

        args:
            The units of each positional argument, None for arguments that are not converted.

        strict:
            If False (default), plain numbers are accepted and assumed to be in the declared units.
    """
    return ureg.wraps(ret, args, strict)


__all__ = ["ureg", "Q_", "ureg_wraps"]
