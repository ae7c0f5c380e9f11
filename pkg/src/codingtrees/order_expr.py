"""A small textual language for lower 1-transitive orders.

Grammar (ASCII; ``w*`` is omega-star, ``Qd`` is Q with a top point)::

    expr := sum
    sum  := prod ('+' prod)*
    prod := atom ('.' prod)? | atom '^' nat
    atom := '1' | 'Z' | 'w*' | 'Q' | 'Qd'
          | 'Q_' nat '(' expr (',' expr)* ')' | 'Qd_' nat '(' expr (',' expr)* ')'
          | '(' expr ')'

``A + B`` is only meaningful when ``A`` ends in a right endpoint: ``B``
becomes the tail of a ``w*``/``Qd``/``Qd_n`` head, and ``Q_n(...) + B`` is
read as ``Qd_n(...)`` with tail ``B``.  Sums associate to the right.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Union

from codingtrees.coding_tree import (
    QDOT,
    SINGLETON,
    WSTAR,
    CodingTree,
    Label,
    Q,
    Z,
    iso_code,
    qn,
    qn_dot,
    signature,
    validate,
)
from codingtrees.errors import (
    ArityError,
    ExprSyntaxError,
    InvalidTree,
    IsomorphicLeftChildren,
    LevelMisalignment,
    NotLowerIsomorphic,
    SyntaxShapeError,
)

# ---------------------------------------------------------------- AST


@dataclass(frozen=True)
class Singleton:
    pass


@dataclass(frozen=True)
class ZProd:
    body: "OrderExpr"


@dataclass(frozen=True)
class QProd:
    body: "OrderExpr"


@dataclass(frozen=True)
class WStarProd:
    body: "OrderExpr"
    tail: Optional["OrderExpr"] = None


@dataclass(frozen=True)
class QDotProd:
    body: "OrderExpr"
    tail: Optional["OrderExpr"] = None


@dataclass(frozen=True)
class QnMix:
    parts: tuple["OrderExpr", ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ArityError(f"Q_n needs at least 2 parts, got {len(self.parts)}")


@dataclass(frozen=True)
class QnDotMix:
    parts: tuple["OrderExpr", ...]
    tail: Optional["OrderExpr"] = None

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ArityError(f"Qd_n needs at least 2 parts, got {len(self.parts)}")


OrderExpr = Union[Singleton, ZProd, QProd, WStarProd, QDotProd, QnMix, QnDotMix]

_TAILED = (WStarProd, QDotProd, QnDotMix)


# ---------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, expected: str):
        raise ExprSyntaxError(self.pos, expected, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, token: str) -> bool:
        self.skip()
        return self.text.startswith(token, self.pos)

    def accept(self, token: str) -> bool:
        if self.peek(token):
            self.pos += len(token)
            return True
        return False

    def expect(self, token: str):
        if not self.accept(token):
            self.fail(repr(token))

    def nat(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("a natural number")
        return int(self.text[start:self.pos])

    def parse(self) -> OrderExpr:
        e = self.sum()
        self.skip()
        if self.pos != len(self.text):
            self.fail("'+', '.' or end of input")
        return e

    def sum(self) -> OrderExpr:
        items = [self.prod()]
        positions = [self.pos]
        while self.accept("+"):
            items.append(self.prod())
            positions.append(self.pos)
        result = items[-1]
        for head, at in zip(reversed(items[:-1]), reversed(positions[:-1])):
            result = _attach_tail(head, result, at)
        return result

    def prod(self) -> OrderExpr:
        self.skip()
        start = self.pos
        head = self.atom()
        if self.accept("^"):
            k = self.nat()
            if head != ("Z",):
                raise SyntaxShapeError(f"at position {start}: only Z takes a power")
            if k < 1:
                raise SyntaxShapeError(f"at position {start}: Z^0 is not an order of this language")
            e: OrderExpr = Singleton()
            for _ in range(k):
                e = ZProd(e)
            return e
        if self.accept("."):
            if not isinstance(head, tuple) or head[0] == "1":
                raise SyntaxShapeError(
                    f"at position {start}: only Z, w*, Q, Qd can multiply on the left")
            return _product(head[0], self.prod())
        if isinstance(head, tuple):
            return _product(head[0], Singleton()) if head[0] != "1" else Singleton()
        return head

    def atom(self):
        """Bare label names come back as 1-tuples so '.' can see them."""
        self.skip()
        if self.accept("Qd_"):
            n = self.nat()
            return QnDotMix(self.parts(n))
        if self.accept("Q_"):
            n = self.nat()
            return QnMix(self.parts(n))
        for name in ("w*", "Qd", "Q", "Z", "1"):
            if self.accept(name):
                return (name,)
        if self.accept("("):
            e = self.sum()
            self.expect(")")
            return e
        self.fail("one of 1, Z, w*, Q, Qd, Q_n(...), Qd_n(...), '('")

    def parts(self, n: int) -> tuple[OrderExpr, ...]:
        if n < 2:
            raise ArityError(f"at position {self.pos}: Q_n needs n >= 2, got {n}")
        self.expect("(")
        parts = [self.sum()]
        while self.accept(","):
            parts.append(self.sum())
        self.expect(")")
        if len(parts) != n:
            raise ArityError(f"Q_{n} given {len(parts)} parts")
        return tuple(parts)


def _product(name: str, body: OrderExpr) -> OrderExpr:
    return {"Z": ZProd, "Q": QProd, "w*": WStarProd, "Qd": QDotProd}[name](body)


def _attach_tail(head: OrderExpr, tail: OrderExpr, at: int) -> OrderExpr:
    if isinstance(head, _TAILED) and head.tail is None:
        return replace(head, tail=tail)
    if isinstance(head, QnMix):
        return QnDotMix(head.parts, tail)
    raise SyntaxShapeError(
        f"at position {at}: '+' must follow a w*, Qd, Q_n or Qd_n head without a tail")


def parse(text: str) -> OrderExpr:
    return _Parser(text).parse()


# ---------------------------------------------------------------- printing


def to_text(e: OrderExpr) -> str:
    """Canonical surface form; ``parse(to_text(e)) == e``."""
    if isinstance(e, Singleton):
        return "1"
    if isinstance(e, ZProd):
        k, inner = 0, e
        while isinstance(inner, ZProd):
            k, inner = k + 1, inner.body
        if isinstance(inner, Singleton):
            return "Z" if k == 1 else f"Z^{k}"
        return "Z" + _body_text(e.body)
    if isinstance(e, QProd):
        return "Q" + _body_text(e.body)
    if isinstance(e, (WStarProd, QDotProd)):
        head = ("w*" if isinstance(e, WStarProd) else "Qd") + _body_text(e.body)
        return head if e.tail is None else f"{head} + {to_text(e.tail)}"
    parts = ", ".join(to_text(p) for p in e.parts)
    if isinstance(e, QnMix):
        return f"Q_{len(e.parts)}({parts})"
    if e.tail is None:
        return f"Qd_{len(e.parts)}({parts})"
    return f"Q_{len(e.parts)}({parts}) + {to_text(e.tail)}"


def _body_text(body: OrderExpr) -> str:
    if isinstance(body, Singleton):
        return ""
    text = to_text(body)
    if isinstance(body, _TAILED) and body.tail is not None:
        text = f"({text})"
    return "." + text


# ``print`` is the operation's name in the order language; keep the builtin intact
print_expr = to_text


# ---------------------------------------------------------------- elaboration


def elaborate(e: OrderExpr) -> OrderExpr:
    """Fill missing tails: ``w*.A`` means ``w*.A + A``; ``Qd_n(A, ...)`` takes ``A``."""
    if isinstance(e, Singleton):
        return e
    if isinstance(e, (ZProd, QProd)):
        return type(e)(elaborate(e.body))
    if isinstance(e, (WStarProd, QDotProd)):
        body = elaborate(e.body)
        return type(e)(body, body if e.tail is None else elaborate(e.tail))
    parts = tuple(elaborate(p) for p in e.parts)
    if isinstance(e, QnMix):
        return QnMix(parts)
    return QnDotMix(parts, parts[0] if e.tail is None else elaborate(e.tail))


# ---------------------------------------------------------------- compilation


def compile_expr(e: OrderExpr) -> CodingTree:
    """Compile an expression into its coding tree (tails are elaborated first)."""
    spec = _compile(elaborate(e))
    t = CodingTree.from_spec(spec)
    report = validate(t)
    if not report.ok:
        raise InvalidTree(f"compiled tree failed validation:\n{report}")
    return t


def compile_text(text: str) -> CodingTree:
    return compile_expr(parse(text))


def _compile(e: OrderExpr):
    if isinstance(e, Singleton):
        return (SINGLETON, ())
    if isinstance(e, ZProd):
        return (Z, (_compile(e.body),))
    if isinstance(e, QProd):
        return (Q, (_compile(e.body),))
    if isinstance(e, (WStarProd, QDotProd)):
        label = WSTAR if isinstance(e, WStarProd) else QDOT
        return _combine(label, [_compile(e.body)], _compile(e.tail))
    n = len(e.parts)
    if n < 2:
        raise ArityError(f"Q_n needs n >= 2, got {n}")
    parts = [_compile(p) for p in e.parts]
    if isinstance(e, QnMix):
        return _combine(qn(n), parts, None)
    return _combine(qn_dot(n), parts, _compile(e.tail))


def _combine(label: Label, left: list, right):
    kids = left + ([right] if right is not None else [])
    trees = [CodingTree.from_spec(k) for k in kids]
    heights = {t.height for t in trees}
    if len(heights) > 1:
        raise LevelMisalignment(
            f"{label}: combined subtrees have heights {sorted(heights)}")
    sigs = [signature(t) for t in trees]
    if any(s != sigs[0] for s in sigs[1:]):
        raise NotLowerIsomorphic(f"{label}: parts/tail are not pairwise lower isomorphic")
    codes = [iso_code(t) for t in trees[:len(left)]]
    if len(set(codes)) != len(codes):
        raise IsomorphicLeftChildren(f"{label}: two left children compile to isomorphic trees")
    return (label, tuple(kids))
