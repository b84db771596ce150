"""Basis shape loci: transversal matroids, positroids and their presentations."""

from .errors import (
    AnomalyError,
    CapabilityError,
    ConsistencyError,
    DomainError,
    EmptyMatroidError,
    PreconditionError,
    RankDeficientError,
    ShapeLociError,
)
from .matroid import Matroid, dual, flacets, flats, minor, uniform
from .positroid import (
    crossings,
    expected_codimension,
    interval_envelope,
    interval_rank_matrix,
    is_noncrossing,
    is_positroid,
    is_transversal,
)
from .pivot import exact_subsystems, gale_minimal, pivot_targets
from .transversal import (
    SetSystem,
    is_minimal_presentation,
    locus_dimension,
    nmd,
    reduce_to_minimal,
    transversal_matroid,
)
from .wilson import WilsonLoopDiagram, is_admissible, to_set_system, uncross

__version__ = "0.1.0"
