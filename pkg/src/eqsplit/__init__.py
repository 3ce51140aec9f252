"""Equal-order, equal-size disjoint induced subgraphs: solvers, oracles, bounds."""

from .balance import SignAssignment, ValueGroups, group_by_value, pick_agreeing_pair, sign_balance
from .estimators import ExactSplitter, RandomizedSplitter, as_graph
from .generators import FAMILIES, FamilySpec, enumerate_all_graphs, generate, perturb
from .graph import (
    EdgeListError,
    Graph,
    LoopFreeMultigraph,
    contract_pairs,
    cross_edge_count,
    degree,
    degree_difference,
    degree_sum,
    difference_neighbourhood,
    induced_edge_count,
    induced_subgraph,
    is_clone_pair,
    parse_edge_list,
    read_edge_list,
    to_edge_list_text,
)
from .oracle import (
    EXHAUSTIVE_LIMIT,
    SizeLimitError,
    SplitResult,
    Splitting,
    SplittableVerdict,
    check_split,
    exact_f,
    is_splittable_bruteforce,
    is_splittable_dp,
    min_deletion_split,
)
from .probability import (
    BinomialSpec,
    BoundVerdict,
    MC_CLAIMS,
    bernstein_upper_bound,
    binomial_pmf,
    binsmall_lower_bound,
    monte_carlo_verdict,
    parity_probability,
    spacesplit_lower_bound,
)
from .splitter import (
    CaseTrace,
    ClumpDecomposition,
    GadgetInventory,
    ParameterizationError,
    SplitError,
    SplitParams,
    classify_gadget,
    clump_decompose,
    construct_splitting,
    estimate_gadget_probability,
    find_clone_matching,
    find_large_pairs,
    pigeonhole_pairs,
    random_delete,
    select_case,
    split,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
