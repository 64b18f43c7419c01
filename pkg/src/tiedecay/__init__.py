"""Simulation and analytics toolkit for continuous-time tie-decay networks.

Four per-edge growth mechanisms are covered, each paired with closed-form
stationary analytics and giant-component criteria:

* additive boost with exponential decay (``tiedecay.additive``),
* reset-to-unity with exponential decay (``tiedecay.reset``),
* an unbiased multiplicative random walk (``tiedecay.walk``),
* a drift-biased multiplicative walk with a hard upper bound
  (``tiedecay.walk`` and the density solver ``tiedecay.fdsolver``).

``tiedecay.graph`` thresholds tie strengths into active-edge graphs and runs
the component census; ``tiedecay.sir`` layers SIR contagion on top of the
reset model's stationary contact activity; ``tiedecay.experiments`` and the
``tiedecay`` CLI drive reproducible sweeps that emit manifest-stamped CSVs.
"""

__version__ = "0.1.0"

from .graph import (
    ComponentReport,
    Threshold,
    TieMatrix,
    components,
    er_gcc_criterion,
    threshold_edges,
)

__all__ = [
    "ComponentReport",
    "Threshold",
    "TieMatrix",
    "components",
    "er_gcc_criterion",
    "threshold_edges",
    "__version__",
]
