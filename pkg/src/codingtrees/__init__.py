"""Coding trees for countable lower 1-transitive linear orders."""
from codingtrees.coding_tree import (
    CodingTree,
    Label,
    canonicalize,
    from_json,
    is_valid,
    iso_code,
    left_forest,
    lower_isomorphic,
    signature,
    to_dot,
    to_json,
    tree_iso,
    truncate,
    validate,
)
from codingtrees.kernels import BACKEND
from codingtrees.order_expr import compile_expr, compile_text, elaborate, parse, to_text
from codingtrees.points import (
    TOP,
    Ordering,
    Point,
    between,
    col,
    compare,
    default_point,
    enumerate_interval,
    fin_equiv,
    level_equiv,
    make_point,
    predecessor,
    random_point,
    successor,
)
from codingtrees.transitivity import (
    Witness,
    audit_witness,
    cross_tree_witness,
    initial_segment_witness,
    invariance_check,
    phi_i,
)

__all__ = [name for name in dir() if not name.startswith("_")]
