"""latticewitness: separability and entanglement certification for
sigma-diagonal bipartite states, built around 16x16 lattice states.

Headline entry points: `lattice.classify` for a single subset,
`lattice.survey_all` for the exhaustive sweep, `criteria` for numeric
detectors and witnesses, and the `lw` command-line tool.
"""

from . import cli, criteria, lattice, linalg, maps, pauli, states
from .lattice import classify, survey_all, uniform_covering
from .states import lattice_state, sigma_diagonal_state

__version__ = "0.1.0"

__all__ = [
    "cli", "criteria", "lattice", "linalg", "maps", "pauli", "states",
    "classify", "survey_all", "uniform_covering",
    "lattice_state", "sigma_diagonal_state",
    "__version__",
]
