"""Jittered kd-tree stratification of the unit hypercube.

Equal-volume strata for *any* sample count n in any dimension d, one
jittered sample per stratum, drawn independently in O(log n) each --
plus the baseline samplers, discrepancy measures, test integrands, and
the MSE convergence harness used to study them.
"""

from .kdtree import (
    CellBounds,
    all_cell_bounds,
    batch_cell_bounds,
    cell_bounds,
    exact_cell_bounds,
    jittered_points,
    locate_cell,
)
from .samplers import (
    KINDS,
    SampleSet,
    SamplerSpec,
    apply_shift,
    generate,
    halton_point,
    latin_hypercube,
    pad_2d,
    randomize_shift,
    sobol_point,
)
from .integrands import (
    GaussianMixture,
    PiecewiseConstant,
    load_integrand,
    make_gmm,
    make_pwconst,
)
from .discrepancy import (
    l2_star_discrepancy,
    linf_star_discrepancy,
    mean_l2_discrepancy,
    stratified_linf_bound,
)
from .harness import (
    ConvergenceRecord,
    ExperimentPlan,
    IntegrandDescriptor,
    estimate,
    load_plan,
    run_mse,
    run_plan,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "CellBounds",
    "ConvergenceRecord",
    "ExperimentPlan",
    "GaussianMixture",
    "IntegrandDescriptor",
    "KINDS",
    "PiecewiseConstant",
    "SampleSet",
    "SamplerSpec",
    "all_cell_bounds",
    "apply_shift",
    "batch_cell_bounds",
    "cell_bounds",
    "estimate",
    "exact_cell_bounds",
    "generate",
    "halton_point",
    "jittered_points",
    "l2_star_discrepancy",
    "latin_hypercube",
    "linf_star_discrepancy",
    "load_integrand",
    "load_plan",
    "locate_cell",
    "make_gmm",
    "make_pwconst",
    "mean_l2_discrepancy",
    "pad_2d",
    "randomize_shift",
    "run_mse",
    "run_plan",
    "sobol_point",
    "stratified_linf_bound",
    "write_csv",
]
