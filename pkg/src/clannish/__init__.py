"""String and clannish algebras: modules, coefficient quivers, hyperfiniteness witnesses."""

__version__ = "0.1.0"
