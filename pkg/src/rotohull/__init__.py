"""rotohull: exact topological invariants of rotational tiling hulls."""

__version__ = "0.1.0"
