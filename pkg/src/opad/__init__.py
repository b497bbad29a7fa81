"""Operations on cosimplicial monoids from lattice paths."""

__version__ = "0.1.0"
