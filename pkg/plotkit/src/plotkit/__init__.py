"""Figure regeneration for the two-qubit synchronization simulator.

Consumes only the simulator's documented CSV schemas (trajectory, sweep,
quadruplet populations) and renders the five reference figures.  Rendering
is deterministic: identical inputs produce byte-identical images.
"""

from .io import (SchemaError, load_quad_populations, load_sweep, load_trajectory,
                 QUAD_COLUMNS, SWEEP_COLUMNS, TRAJECTORY_COLUMNS)
from .figures import FIGURES, plot_heatmap, plot_trajectory

__version__ = "0.1.0"

__all__ = ["SchemaError", "load_quad_populations", "load_sweep", "load_trajectory",
           "QUAD_COLUMNS", "SWEEP_COLUMNS", "TRAJECTORY_COLUMNS",
           "FIGURES", "plot_heatmap", "plot_trajectory", "__version__"]
