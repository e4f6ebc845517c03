"""List coloring of girth-5 graphs embedded on surfaces.

Graphs live on (possibly non-orientable) surfaces as combinatorial maps;
the solvers decide whether a precoloring on a set of distinguished
vertices extends to a full coloring from 3-element lists, find such
colorings, and test choosability.
"""

__version__ = "0.1.0"
