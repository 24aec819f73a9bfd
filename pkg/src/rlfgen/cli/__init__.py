"""Command-line surface: expression parser, system files and subcommands."""

from .parser import ParseError, parse_grid, parse_point, parse_poly, parse_rational
from .system import SystemDefinition, SystemDefinitionError, load_system, system_from_dict

__all__ = ["ParseError", "parse_grid", "parse_point", "parse_poly", "parse_rational",
           "SystemDefinition", "SystemDefinitionError", "load_system", "system_from_dict"]
