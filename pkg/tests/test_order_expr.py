import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codingtrees.coding_tree import canonicalize, is_valid
from codingtrees.errors import (
    ArityError,
    CodingTreeError,
    ExprSyntaxError,
    IsomorphicLeftChildren,
    LevelMisalignment,
    NotLowerIsomorphic,
    SyntaxShapeError,
)
from codingtrees.order_expr import (
    QDotProd,
    QnDotMix,
    QnMix,
    QProd,
    Singleton,
    WStarProd,
    ZProd,
    compile_expr,
    compile_text,
    elaborate,
    parse,
    print_expr,
    to_text,
)

ONE = Singleton()


def labels_by_level(t):
    return [sorted(str(t.label(v)) for v in t.by_level[lvl]) for lvl in range(t.height, -1, -1)]


@pytest.mark.parametrize("text, expected", [
    ("1", ONE),
    ("Z", ZProd(ONE)),
    ("Z^3", ZProd(ZProd(ZProd(ONE)))),
    ("Z.Z.Z", ZProd(ZProd(ZProd(ONE)))),
    ("w*.Z^2 + Z^2", WStarProd(ZProd(ZProd(ONE)), ZProd(ZProd(ONE)))),
    ("Q.1", QProd(ONE)),
    ("Qd.Z + w*", QDotProd(ZProd(ONE), WStarProd(ONE))),
    ("Q_2(w*, Z)", QnMix((WStarProd(ONE), ZProd(ONE)))),
    ("Q_2(w*, Z) + Z", QnDotMix((WStarProd(ONE), ZProd(ONE)), ZProd(ONE))),
    ("Qd_2(Q, Qd)", QnDotMix((QProd(ONE), QDotProd(ONE)))),
    ("w*.Z^2 + w*.Z + Z", WStarProd(ZProd(ZProd(ONE)), WStarProd(ZProd(ONE), ZProd(ONE)))),
])
def test_parse_examples(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text, canonical", [
    ("Z.Z", "Z^2"),
    ("  w* . Z^2+Z^2 ", "w*.Z^2 + Z^2"),
    ("Q.1", "Q"),
    ("(Z)", "Z"),
    ("Z.(w*.Z + Z)", "Z.(w*.Z + Z)"),
    ("Qd_2(Q, Qd)", "Qd_2(Q, Qd)"),
    ("Q_2(w*,Z)+w*", "Q_2(w*, Z) + w*"),
])
def test_print_canonical(text, canonical):
    assert to_text(parse(text)) == canonical
    assert print_expr(parse(canonical)) == canonical


@pytest.mark.parametrize("text, position", [
    ("", 0),
    ("Z +", 3),
    ("Z.(w*.Z + Z", 11),
    ("Q_2(Z, w*", 9),
    ("X", 0),
    ("Z Z", 2),
])
def test_syntax_error_positions(text, position):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.position == position


@pytest.mark.parametrize("text", ["Z + Z", "Q + Z", "1.Z", "Q_2(Z, w*).Z", "w*^2", "Z^0"])
def test_shape_errors(text):
    with pytest.raises(SyntaxShapeError):
        parse(text)


@pytest.mark.parametrize("text", ["Q_1(Z)", "Q_3(Z, w*)", "Qd_2(Z)"])
def test_arity_errors(text):
    with pytest.raises(ArityError):
        parse(text)


def test_elaborate_fills_tails():
    assert elaborate(parse("w*.Z")) == WStarProd(ZProd(ONE), ZProd(ONE))
    assert elaborate(parse("Qd_2(Q, Qd)")).tail == QProd(ONE)
    # explicit tails survive
    assert elaborate(parse("w*.Z + w*")).tail == WStarProd(ONE, ONE)


@pytest.mark.parametrize("text, exc", [
    ("w*.Z^2 + Z", LevelMisalignment),
    ("Q_2(Z, Q)", NotLowerIsomorphic),
    ("w*.Z + Q", NotLowerIsomorphic),
    ("Q_2(Z, Z)", IsomorphicLeftChildren),
    ("Q_2(w*.Z + Z, w*.Z)", IsomorphicLeftChildren),
])
def test_compile_errors(text, exc):
    with pytest.raises(exc):
        compile_text(text)


def test_z3_class_trees():
    z3, t2, t3, t4 = (compile_text(e) for e in
                      ("Z^3", "w*.Z^2 + Z^2", "w*.Z^2 + w*.Z + Z", "w*.Z^2 + w*.Z + w*"))
    assert labels_by_level(z3) == [["Z"], ["Z"], ["Z"], ["1"]]
    assert labels_by_level(t2) == [["w*"], ["Z", "Z"], ["Z", "Z"], ["1", "1"]]
    assert labels_by_level(t3) == [["w*"], ["Z", "w*"], ["Z", "Z", "Z"], ["1", "1", "1"]]
    assert labels_by_level(t4) == [["w*"], ["Z", "w*"], ["Z", "Z", "w*"], ["1"] * 4]


def test_right_child_is_tail():
    t = compile_text("w*.Z + w*")
    r = t.right_child(t.root)
    assert str(t.label(r)) == "w*"
    assert str(t.label(t.left_children(t.root)[0])) == "Z"


# ---------------------------------------------------------------- properties

leaf = st.just(ONE)


def _extend(children):
    tail = st.none() | children
    parts = st.lists(children, min_size=2, max_size=3).map(tuple)
    return st.one_of(
        children.map(ZProd),
        children.map(QProd),
        st.builds(WStarProd, children, tail),
        st.builds(QDotProd, children, tail),
        parts.map(QnMix),
        st.builds(QnDotMix, parts, tail),
    )


exprs = st.recursive(leaf, _extend, max_leaves=8)


@given(exprs)
@settings(max_examples=300, deadline=None)
def test_print_parse_round_trip(e):
    assert parse(to_text(e)) == e


@given(exprs)
@settings(max_examples=300, deadline=None)
def test_compile_is_valid_and_canonical(e):
    try:
        t = compile_expr(e)
    except CodingTreeError:
        return
    assert is_valid(t)
    assert canonicalize(t) == t
