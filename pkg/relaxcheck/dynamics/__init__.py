from .datamodel import (
    DensityMatrix,
    ExpectationMode,
    ExpectationSeries,
    GridSpec,
    PhysicalityReport,
    SnapshotDiagnostics,
    Trajectory,
)
from .evolve import (
    bell_state,
    evolve,
    evolve_state,
    expectation_series,
    fit_decay_rate,
    partial_transpose_generator,
    physicality_report,
    validate_grid,
)
