"""whlab: length minimization in free groups with search-order heuristics.

The library covers reduced words, Nielsen and type-II Whitehead moves,
weighted word graphs and their feature vectors, a greedy reduction
engine with pluggable search orders, center-model training, corpus
generation, and a benchmark harness. The ``whlab`` command line wires
these into reproducible runs.
"""

__version__ = "0.1.0"

from .automorphisms import (
    NielsenAuto,
    WhiteheadAuto,
    apply,
    apply_sequence,
    enumerate_nielsen,
    enumerate_whitehead,
    get_universe,
    inverse_auto,
)
from .bench import (
    nielsen_reducible_fraction,
    pearson_correlation,
    run_strategy_benchmark,
)
from .clustering import (
    CentroidModel,
    KMeansModel,
    assign_ordering,
    avg_r_max,
    estimate_lambda_centers,
    evaluate_clusters,
    goodness_g_max,
    goodness_r,
    kmeans,
    r_max,
)
from .datagen import (
    GenConfig,
    generate_corpus,
    random_nonminimal_c1,
    random_primitive,
    random_reduced_word,
)
from .engine import (
    CentroidStrategy,
    MaxWeightStrategy,
    NielsenFirstStrategy,
    RandomStrategy,
    find_length_reducer,
    is_minimal,
    make_strategy,
    orbit_min_length_bruteforce,
    whitehead_reduce,
)
from .errors import (
    DataFormatError,
    EmptyWordError,
    InvalidInputError,
    OrbitSearchError,
    WhlabError,
)
from .graph import (
    edge_autos,
    edge_indexer,
    feature_vector,
    max_weight_ordering,
    whitehead_graph,
)
from .words import (
    Word,
    cyclic_normal_form,
    cyclic_reduce,
    free_reduce,
    invert,
    word_from_text,
    word_to_text,
)

__all__ = [name for name in dir() if not name.startswith("_")]
