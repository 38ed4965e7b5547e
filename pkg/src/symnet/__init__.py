"""SymNet - symmetry learning for attribute-object compositions."""

__version__ = "0.1.0"
