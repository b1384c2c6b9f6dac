"""Low autocorrelation binary sequences: energy lattice analysis and optimum search."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    AutocorrelationProfile,
    BinarySequence,
    EnergyDecomposition,
    InconsistentEnergyError,
    LabsError,
    MeritUndefinedError,
    ParseError,
    SymmetryOrbit,
    TheoreticalBounds,
    autocorrelation,
    canonical_form,
    decompose_energy,
    deviation,
    e_max,
    e_min,
    energy,
    f_max,
    merit_factor,
    n_max,
    pair_count_m,
    parse_sequence,
    symmetry_orbit,
    theoretical_bounds,
)
from .levels import LevelRow, LevelTable, build_level_table  # noqa: E402
from .search import (  # noqa: E402
    SearchOptions,
    SearchResult,
    SearchSpaceStats,
    count_search_space,
    exhaustive_search,
    flip_energy_delta,
    heuristic_search,
)
from .records import (  # noqa: E402
    BarkerAnalysis,
    FitModel,
    RecordEntry,
    barker_check,
    barker_deviation,
    barker_roots,
    builtin_records,
    extrapolate,
    fit_quadratic,
    load_records,
)
