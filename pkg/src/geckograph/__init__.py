"""GeckoGraph: graphical notation for polymorphic type signatures."""

from geckograph.syntax import parse_scheme, print_scheme

__all__ = ["parse_scheme", "print_scheme"]
__version__ = "0.1.0"
