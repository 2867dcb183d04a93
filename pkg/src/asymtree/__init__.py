"""Asymmetrizing sets of finite and finitely presented infinite trees."""

from .cardinal import Cardinal, binom, power, product_family, sum_family, two_pow
from .engine import (
    AsymSet,
    count_rooted,
    count_unrooted,
    enumerate_asym_sets,
    find_asym_set,
    motion,
    motion_rooted,
    verify_asym_set,
)
from .presented import (
    PresentedReport,
    TreePresentation,
    asym_certificate,
    classify,
    count_presented,
    minimize,
    motion_presented,
    parse_presentation,
    rank_presented,
    unfold,
)
from .treelike import (
    asymmetrize_treelike,
    check_treelike,
    contract_even_levels,
    extract_forest,
    lift_asym_set,
)
from .trees import (
    CenterResult,
    RootedGraph,
    RootedTree,
    UnrootedTree,
    ahu_canonical,
    center,
    parse_rooted,
    parse_rooted_graph,
    parse_unrooted,
    serialize_rooted,
    similarity,
    subtree_size,
)

__all__ = [name for name in dir() if not name.startswith("_")]
