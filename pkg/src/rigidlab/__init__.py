"""Unit-distance configuration varieties, Groebner elimination and rigidity tools."""

__version__ = "0.1.0"
