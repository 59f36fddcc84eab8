"""sqmlab — a verification lab for single-slab spacetime quantum mechanics.

Dense, desk-scale numerics: history states on discrete clocks, cyclic
time-shift trace identities, spacetime density operators, constraint
classification with Dirac brackets, tau-regulated Gaussian and Wick
perturbation theory on finite mode grids, and a fermionic sector.
Every identity is checked against an independent standard-quantum-
mechanics oracle; the `sqmlab` CLI packages those checks as
reproducible experiments.
"""

__version__ = "0.1.0"

from .linalg import Ket, Operator  # noqa: F401
