import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codingtrees.checks import FIXTURES, condition9_mutants, duplicate_left_child, fixture_tree
from codingtrees.coding_tree import (
    QDOT,
    SINGLETON,
    WSTAR,
    CodingTree,
    Label,
    Q,
    Vertex,
    Z,
    canonicalize,
    from_json,
    iso_code,
    left_forest,
    lower_isomorphic,
    qn,
    qn_dot,
    signature,
    to_dot,
    to_json,
    tree_iso,
    truncate,
    validate,
)
from codingtrees.errors import DecodeError, InvalidInput, InvalidTree, LevelOutOfRange, NotAParent
from codingtrees.order_expr import compile_text

LEAF = (SINGLETON, ())


def spec(label, *kids):
    return (label, tuple(kids))


def brute_iso(t1, v1, t2, v2) -> bool:
    """Isomorphism by trying every pairing of left children."""
    if t1.label(v1) != t2.label(v2) or t1.level(v1) != t2.level(v2):
        return False
    r1, r2 = t1.right_child(v1), t2.right_child(v2)
    if (r1 is None) != (r2 is None):
        return False
    if r1 is not None and not brute_iso(t1, r1, t2, r2):
        return False
    l1, l2 = t1.left_children(v1), t2.left_children(v2)
    if len(l1) != len(l2):
        return False
    return any(all(brute_iso(t1, a, t2, b) for a, b in zip(l1, perm))
               for perm in itertools.permutations(l2))


# ---------------------------------------------------------------- labels


@pytest.mark.parametrize("label, arity, text", [
    (Z, 1, "Z"), (WSTAR, 2, "w*"), (Q, 1, "Q"), (QDOT, 2, "Qd"),
    (qn(3), 3, "Q_3"), (qn_dot(2), 3, "Qd_2"), (SINGLETON, 0, "1"),
])
def test_label_arity_and_text(label, arity, text):
    assert label.arity == arity
    assert str(label) == text
    assert Label.from_json(label.to_json()) == label


def test_label_rejects_bad_arity():
    with pytest.raises(ValueError):
        qn(1)
    with pytest.raises(ValueError):
        Label("Z", 3)
    with pytest.raises(DecodeError):
        Label.from_json({"Qn": 1})


def test_lower_classes():
    assert Z.lower_class == WSTAR.lower_class
    assert Q.lower_class == QDOT.lower_class
    assert qn(2).lower_class == qn_dot(2).lower_class != qn(3).lower_class


# ---------------------------------------------------------------- validation


@pytest.mark.parametrize("expr", FIXTURES)
def test_fixtures_validate(expr):
    assert validate(fixture_tree(expr)).ok


def test_v1_two_parents():
    t = CodingTree((Vertex(WSTAR, 1, (1, 1)), Vertex(SINGLETON, 0)), 0)
    assert "V1" in validate(t).rules()


def test_v1_unreachable():
    t = CodingTree((Vertex(Z, 1, (1,)), Vertex(SINGLETON, 0), Vertex(SINGLETON, 0)), 0)
    assert "V1" in validate(t).rules()


def test_v2_level_gap():
    t = CodingTree((Vertex(Z, 2, (1,)), Vertex(SINGLETON, 0)), 0)
    assert "V2" in validate(t).rules()


def test_v3_arity():
    t = CodingTree.from_spec(spec(Q, spec(Z, LEAF), spec(WSTAR, LEAF, LEAF)))
    assert validate(t).rules() == {"V3"}


def test_v4_mixed_level():
    t = CodingTree.from_spec(spec(WSTAR, spec(Z, LEAF), spec(Q, LEAF)))
    assert validate(t).rules() == {"V4"}


def test_v5_left_forests_differ():
    left = spec(Z, spec(Z, LEAF))
    right = spec(Z, spec(WSTAR, LEAF, LEAF))
    t = CodingTree.from_spec(spec(WSTAR, left, right))
    assert validate(t).rules() == {"V5"}


def test_v6_isomorphic_left_siblings():
    t = CodingTree.from_spec(spec(qn(2), spec(Z, LEAF), spec(Z, LEAF)))
    assert validate(t).rules() == {"V6"}


# ---------------------------------------------------------------- isomorphism


def test_z3_class_pairwise():
    trees = [fixture_tree(e) for e in FIXTURES[:4]]
    for a, b in itertools.combinations(trees, 2):
        assert tree_iso(a, b) is None
        assert lower_isomorphic(a, b)


def test_tree_iso_map_is_structural():
    t1 = compile_text("Q_2(w*, Z)")
    t2 = compile_text("Q_2(Z, w*)")
    m = tree_iso(t1, t2)
    assert m is not None and m[t1.root] == t2.root
    for a, b in m.items():
        assert t1.label(a) == t2.label(b)
        assert tuple(m[c] for c in t1.children(a)) in {
            tuple(p) for p in itertools.permutations(t2.children(b))}


label_pool = [Z, WSTAR, Q, QDOT, qn(2), qn_dot(2)]


@st.composite
def random_specs(draw, depth=3):
    if depth == 0:
        return LEAF
    label = draw(st.sampled_from(label_pool))
    kid = random_specs(depth=depth - 1)
    return (label, tuple(draw(kid) for _ in range(label.arity)))


small_trees = random_specs().map(CodingTree.from_spec).filter(lambda t: len(t) <= 12)


@given(small_trees, small_trees)
@settings(max_examples=300, deadline=None)
def test_iso_code_matches_brute_force(t1, t2):
    assert (iso_code(t1) == iso_code(t2)) == brute_iso(t1, t1.root, t2, t2.root)
    assert (tree_iso(t1, t2) is not None) == brute_iso(t1, t1.root, t2, t2.root)


@given(small_trees)
@settings(max_examples=200, deadline=None)
def test_iso_code_invariant_under_left_shuffle(t):
    def shuffled(v):
        kids = [shuffled(c) for c in t.left_children(v)][::-1]
        r = t.right_child(v)
        return (t.label(v), tuple(kids + ([shuffled(r)] if r is not None else [])))

    u = CodingTree.from_spec(shuffled(t.root))
    assert iso_code(u) == iso_code(t)
    assert tree_iso(t, u) is not None


# ---------------------------------------------------------------- forests and signatures


def test_left_forest_of_leaf():
    t = fixture_tree("Z^2")
    leaf = t.by_level[0][0]
    with pytest.raises(NotAParent):
        left_forest(t, leaf)


def test_left_forest_excludes_right_child():
    t = fixture_tree("w*.Z + w*")
    assert len(left_forest(t, t.root)) == 1


def test_signature_rejects_broken_trees():
    with pytest.raises(InvalidTree):
        signature(CodingTree.from_spec(spec(Z, LEAF, LEAF)))


def test_signature_classes():
    assert not lower_isomorphic(fixture_tree("Z^2"), fixture_tree("Q.Z"))
    assert not lower_isomorphic(fixture_tree("Z^2"), fixture_tree("Z^3"))
    assert lower_isomorphic(fixture_tree("Qd.Z + w*"), fixture_tree("Q.Z"))


# ---------------------------------------------------------------- canonicalization


@pytest.mark.parametrize("expr", FIXTURES)
def test_compile_output_is_canonical(expr):
    t = fixture_tree(expr)
    assert canonicalize(t) == t


def test_canonicalize_merges_duplicates():
    t = CodingTree.from_spec(spec(qn(3), spec(Z, LEAF), spec(WSTAR, LEAF, LEAF), spec(Z, LEAF)))
    c = canonicalize(t)
    assert validate(c).ok
    assert c.label(c.root) == qn(2)
    t1 = CodingTree.from_spec(spec(qn_dot(2), spec(Z, LEAF), spec(Z, LEAF), spec(Z, LEAF)))
    assert canonicalize(t1).label(0) == QDOT


def test_canonicalize_requires_v1_to_v5():
    with pytest.raises(InvalidInput):
        canonicalize(CodingTree.from_spec(spec(Z, LEAF, LEAF)))


def test_mutants_recover_original():
    for expr, m in condition9_mutants(30, 11):
        c = canonicalize(m)
        assert c == fixture_tree(expr)
        assert signature(m) == signature(c)


def test_duplicate_left_child_widens_label():
    t = fixture_tree("Q_2(w*, Z)")
    code = iso_code(t, t.left_children(t.root)[0])
    m = duplicate_left_child(t, t.height, code, 2)
    assert m.label(m.root) == qn(4)
    assert validate(m).rules() == {"V6"}


# ---------------------------------------------------------------- truncation


def test_truncate_z3():
    assert tree_iso(truncate(fixture_tree("Z^3"), 1), fixture_tree("Z^2")) is not None


def test_truncate_merges_siblings():
    t = truncate(fixture_tree("Q_2(w*, Z)"), 1)
    assert tree_iso(t, compile_text("Q")) is not None


def test_truncate_bounds():
    t = fixture_tree("Z^2")
    assert truncate(t, 0) is t
    assert len(truncate(t, 2)) == 1
    with pytest.raises(LevelOutOfRange):
        truncate(t, 3)


@pytest.mark.parametrize("expr", FIXTURES)
def test_truncations_validate(expr):
    t = fixture_tree(expr)
    for i in range(t.height + 1):
        assert validate(truncate(t, i)).ok


# ---------------------------------------------------------------- serialization


@pytest.mark.parametrize("expr", FIXTURES)
def test_json_round_trip(expr):
    t = fixture_tree(expr)
    assert from_json(to_json(t)) == t


def test_json_layout():
    doc = json.loads(to_json(fixture_tree("w*.Z + w*")))
    assert doc["root"] == 0
    root = doc["vertices"][0]
    assert root["label"] == "w*" and root["right_child"] == root["children"][-1]
    doc = json.loads(to_json(fixture_tree("Q_2(w*, Z) + Z")))
    assert doc["vertices"][0]["label"] == {"QnDot": 2}


@pytest.mark.parametrize("mutate", [
    lambda d: "not json",
    lambda d: {**d, "root": 99},
    lambda d: {**d, "vertices": d["vertices"][1:]},
    lambda d: {**d, "vertices": [{**d["vertices"][0], "right_child": None}] + d["vertices"][1:]},
    lambda d: {**d, "vertices": [{**d["vertices"][0], "label": "R"}] + d["vertices"][1:]},
    lambda d: {**d, "vertices": [{**d["vertices"][0], "children": [1, 1]}] + d["vertices"][1:]},
])
def test_json_decode_errors(mutate):
    doc = json.loads(to_json(fixture_tree("w*.Z + w*")))
    bad = mutate(doc)
    with pytest.raises(DecodeError):
        from_json(bad if isinstance(bad, str) else json.dumps(bad))


def test_dot_export():
    dot = to_dot(fixture_tree("w*.Z + Z"))
    assert dot.startswith("digraph")
    assert 'n0 [label="w* (level 2)"];' in dot
    assert "n0 -> n3 [style=bold];" in dot
    assert "n0 -> n1;" in dot
