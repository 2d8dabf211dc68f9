"""Constructive Ramsey arrowing toolkit for the Hajos graph against stars
and fans: bitset graphs, pattern detectors, extremal constructions,
proof-following witness extraction with replayable traces, exhaustive and
randomized verification, and DIMACS CNF emission."""

from .constructions import (
    EXACT_CHROMATIC_MAX_ORDER,
    ChromaticInfo,
    InvalidParameters,
    OrderTooLargeForExact,
    ParityError,
    burr_construction,
    chromatic_info,
    complete_multipartite,
    disjoint_union,
    fan_lower,
    join,
    star_even_lower,
    star_odd_lower,
)
from .detectors import (
    BlueFan,
    BlueStar,
    HajosEmbedding,
    RedHajos,
    W4Embedding,
    Witness,
    find_blue_fan,
    find_blue_star,
    find_hajos,
    find_k4,
    find_k5_minus_e,
    find_triangle,
    find_w4,
    hajos_graph,
    verify_witness,
    witness_from_json,
)
from .extract import (
    CaseTag,
    Fan,
    InputSizeError,
    ProofGap,
    ProofTrace,
    Star,
    TraceEvent,
    arrow_witness,
    extract_fan,
    extract_star,
    fan_order,
    replay_trace,
    star_order,
    threshold_order,
)
from .graphs import (
    MAX_ORDER,
    EndpointOutOfRange,
    Graph,
    GraphError,
    LoopEdge,
    MalformedGraph6,
    OrderTooLarge,
    bit_list,
    bits,
    from_graph6,
    mask_of,
    to_graph6,
)
from .matching import (
    ORACLE_MAX_ORDER,
    OrderTooLargeForOracle,
    brute_force_maximum_matching,
    is_matching,
    matching_of_size,
    maximum_matching,
)
from .sat import (
    Assignment,
    CnfFormula,
    CounterBlock,
    EdgeVarMap,
    IncompleteAssignment,
    MalformedDimacs,
    OrderMismatch,
    assignment_from_graph,
    emit_star_arrowing_cnf,
    eval_cnf,
    graph_from_assignment,
    hajos_automorphism_count,
    parse_dimacs,
    to_dimacs,
)
from .verify import (
    ComponentShape,
    TooManyColorings,
    VerificationReport,
    component_shapes,
    enumerate_path_cycle_graphs,
    random_sweep,
    verify_all_colorings,
    verify_construction,
    verify_star_upper_via_structure,
)

__version__ = "0.1.0"
