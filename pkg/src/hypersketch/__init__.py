"""Cut sparsification for weighted hypergraphs, SAT value sketches and Max-Cut gadgets."""

from .contract import (
    ContractionState,
    contract_algorithm,
    contract_edge,
    contraction_trials,
    enumerate_near_min_cuts,
    q_bound,
    sunflower,
)
from .hypercore import (
    Cut,
    Hyperedge,
    Hypergraph,
    InvalidArgumentError,
    ParseError,
    ResourceLimitError,
    cut_weight,
    enumerate_cuts_below,
    induced_subhypergraph,
    parse_hypergraph,
    serialize_hypergraph,
)
from .maxcutlab import (
    BhhInstance,
    GadgetGraph,
    build_gadget,
    exact_max_cut,
    gadget_expected_value,
    gen_bhh,
    two_party_estimate,
)
from .mincut import StrongConnectivityMap, k_strong_check, min_cut, strong_connectivities
from .satsketch import (
    CnfFormula,
    SatSketch,
    assignment_to_cut,
    cnf_to_hypergraph,
    estimate_value,
    exact_value,
    parse_dimacs,
    sketch_formula,
)
from .sparsify import (
    SparsifierReport,
    SparsifyParams,
    rho,
    sampling_probability,
    sparsify,
    streaming_sparsify,
    verify_sparsifier,
)

__version__ = "0.1.0"
