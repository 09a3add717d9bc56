"""Complex power flow solutions by homotopy continuation."""

from ._core import (
    System,
    bezout_bound,
    complex_bound,
    eliminant,
    four_bus,
    group_order,
    load_system,
    monodromy,
    parse_system,
    solve,
    survey,
)

__all__ = [
    "System",
    "bezout_bound",
    "complex_bound",
    "eliminant",
    "four_bus",
    "group_order",
    "load_system",
    "monodromy",
    "parse_system",
    "solve",
    "survey",
]
