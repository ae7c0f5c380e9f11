"""Points of the order encoded by a coding tree.

A point is a decoding function: one value per vertex on a root-to-leaf
branch.  Only the values are stored, root level first; the branch is read
off them.  Value domains per label:

=========  ======================================  ==============================
label      values                                  routing
=========  ======================================  ==============================
Z          int                                     single child
w*         int <= 0                                0 -> right child, else left
Q          Fraction                                single child
Qd         Fraction or TOP                         TOP -> right child, else left
Q_n        Fraction                                left child ``col(value, n)``
Qd_n       Fraction or TOP                         TOP -> right, else ``col``
=========  ======================================  ==============================
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from codingtrees import kernels
from codingtrees.coding_tree import CodingTree, Label, ValidationReport, Violation
from codingtrees.errors import (
    DecodeError,
    EmptyInterval,
    InfiniteInterval,
    InvalidPoint,
    LevelOutOfRange,
)


class _Top:
    """Greatest element of the ``Qd`` and ``Qd_n`` value sets."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("codingtrees.TOP")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()

Value = Union[int, Fraction, _Top]


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class Point:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def at_level(self, t: CodingTree, level: int) -> Value:
        return self.values[t.height - level]


# ---------------------------------------------------------------- colours


def col(q, n: int) -> int:
    """Colour of a rational in the dense n-colouring: numerator mod n, lowest terms."""
    return Fraction(q).numerator % n


def between(a, b, colour: int = 0, n: int = 1) -> Fraction:
    """First rational strictly between ``a`` and ``b`` with the given colour,
    searching denominators upward and, per denominator, numerators upward."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise EmptyInterval(f"no rational strictly between {a} and {b}")
    if not 0 <= colour < n:
        raise ValueError(f"colour {colour} outside 0..{n - 1}")
    p, d = kernels.between_search(a.numerator, a.denominator, b.numerator, b.denominator, colour, n)
    return Fraction(p, d)


# ---------------------------------------------------------------- decoding


def _domain_error(label: Label, x) -> Optional[str]:
    if label.kind == "1":
        return "leaves carry no value"
    if label.is_discrete:
        if type(x) is not int:
            return f"{label} needs an int, got {x!r}"
        if label.kind == "w*" and x > 0:
            return f"w* values are <= 0, got {x}"
        return None
    if x is TOP:
        return None if label.has_endpoint else f"{label} has no top value"
    if not isinstance(x, Fraction):
        return f"{label} needs a Fraction, got {x!r}"
    return None


def route(t: CodingTree, v: int, x: Value) -> int:
    """Child of ``v`` taken by a point whose value at ``v`` is ``x``."""
    label = t.label(v)
    if label.kind in ("Z", "Q"):
        return t.children(v)[0]
    if label.kind == "w*":
        return t.children(v)[-1] if x == 0 else t.children(v)[0]
    if x is TOP:
        return t.children(v)[-1]
    if label.kind == "Qd":
        return t.children(v)[0]
    return t.left_children(v)[col(x, label.n)]


def branch(t: CodingTree, p: Point) -> list[int]:
    """Vertices on the branch of ``p``, root first, ending at the leaf."""
    v, path = t.root, [t.root]
    for x in p.values:
        v = route(t, v, x)
        path.append(v)
    return path


def validate_point(t: CodingTree, p: Point, path: Optional[Sequence[int]] = None) -> ValidationReport:
    """Check ``p`` against ``t``.

    With ``path`` (a claimed leaf-branch, root first) the routing clauses are
    checked against it: endpoint value iff right child, and the colour of the
    value at ``Q_n``/``Qd_n`` vertices matching the left child taken.
    """
    out = []
    if len(p.values) != t.height:
        out.append(Violation("length", (), f"expected {t.height} values, got {len(p.values)}"))
        return ValidationReport(out)
    if path is not None and (len(path) != t.height + 1 or path[0] != t.root):
        out.append(Violation("branch", tuple(path), "not a root-to-leaf branch"))
        return ValidationReport(out)
    v = t.root
    for k, x in enumerate(p.values):
        label = t.label(v)
        err = _domain_error(label, x)
        if err:
            out.append(Violation("domain", (v,), f"value {k}: {err}"))
            break
        nxt = route(t, v, x)
        if path is not None and path[k + 1] != nxt:
            claimed = path[k + 1]
            if claimed not in t.children(v):
                out.append(Violation("branch", (v, claimed), f"{claimed} is not a child of {v}"))
            elif claimed == t.right_child(v) or nxt == t.right_child(v):
                out.append(Violation(
                    "endpoint", (v, claimed), "value is the endpoint iff the right child is taken"))
            else:
                out.append(Violation(
                    "colour", (v, claimed),
                    f"value {x} has colour {col(x, label.n)}, "
                    f"child {claimed} has colour {t.left_children(v).index(claimed)}"))
            break
        v = nxt
    return ValidationReport(out)


def check_point(t: CodingTree, p: Point) -> None:
    report = validate_point(t, p)
    if not report.ok:
        raise InvalidPoint(str(report))


def make_point(t: CodingTree, values: Iterable) -> Point:
    """Build a point, coercing ints/strings into the domain of each vertex.

    Accepts ints, Fractions, ``"p/q"`` strings and ``"top"``.
    """
    out, v = [], t.root
    for x in values:
        label = t.label(v)
        if isinstance(x, str):
            x = TOP if x.strip().lower() in ("top", "t", "+inf") else Fraction(x.strip())
        if label.is_dense and type(x) is int:
            x = Fraction(x)
        elif label.is_discrete and isinstance(x, Fraction) and x.denominator == 1:
            x = int(x)
        out.append(x)
        if label.kind == "1" or _domain_error(label, x):
            break
        v = route(t, v, x)
    p = Point(tuple(out))
    check_point(t, p)
    return p


# ---------------------------------------------------------------- order


def compare(t: CodingTree, p: Point, q: Point, check: bool = True) -> Ordering:
    """Order of two points: decided by the values at the highest level where
    they differ.  A diverging branch always shows up as differing values at
    the divergence vertex, so no branch bookkeeping is needed."""
    if check:
        check_point(t, p)
        check_point(t, q)
    return Ordering(kernels.lex_compare(p.values, q.values))


def default_point(t: CodingTree) -> Point:
    """Endpoint value wherever there is one, else 0 (colour 0 at ``Q_n``)."""
    values, v = [], t.root
    while t.children(v):
        label = t.label(v)
        if label.kind == "w*":
            x = 0
        elif label.has_endpoint:
            x = TOP
        elif label.kind == "Z":
            x = 0
        else:
            x = Fraction(0)
        values.append(x)
        v = route(t, v, x)
    return Point(tuple(values))


def _zigzag():
    k = 0
    yield 0
    while True:
        k += 1
        yield k
        yield -k


def _random_rational(rng: random.Random, magnitude: int, colour: int, n: int) -> Fraction:
    d = rng.randint(1, magnitude)
    p = rng.randint(-magnitude, magnitude)
    if n == 1:
        return Fraction(p, d)
    for step in _zigzag():
        x = Fraction(p + step, d)
        if col(x, n) == colour:
            return x
    raise AssertionError("unreachable")


def _random_value(t: CodingTree, v: int, rng: random.Random, magnitude: int) -> Value:
    label = t.label(v)
    if label.kind == "Z":
        return rng.randint(-magnitude, magnitude)
    if label.kind == "w*":
        return min(rng.randint(-magnitude, magnitude), 0)
    choice = rng.randrange(len(t.children(v)))
    if label.has_endpoint and choice == len(t.children(v)) - 1:
        return TOP
    n = label.colours
    return _random_rational(rng, magnitude, choice if n > 1 else 0, n)


def _random_below_value(t: CodingTree, v: int, bound: Value, rng: random.Random, magnitude: int) -> Value:
    label = t.label(v)
    if label.is_discrete:
        return bound - rng.randint(1, magnitude)
    n = label.colours
    x = _random_rational(rng, magnitude, rng.randrange(n), n)
    if bound is not TOP and x >= bound:
        # shifting by a multiple of n keeps the numerator's residue mod n
        j = (x - bound) // n + 1
        x -= n * j
    return x


def random_completion(t: CodingTree, v: int, rng: random.Random, magnitude: int) -> list:
    """Random values for the branch from ``v`` down to a leaf."""
    values = []
    while t.children(v):
        x = _random_value(t, v, rng, magnitude)
        values.append(x)
        v = route(t, v, x)
    return values


def random_point_rng(t: CodingTree, rng: random.Random, magnitude: int = 10) -> Point:
    if magnitude < 1:
        raise ValueError("magnitude must be >= 1")
    return Point(tuple(random_completion(t, t.root, rng, magnitude)))


def random_point(t: CodingTree, seed, magnitude: int = 10) -> Point:
    """Seeded random point: ints in ``[-magnitude, magnitude]``, rationals with
    numerator and denominator about that size, nudged to the colour needed."""
    return random_point_rng(t, random.Random(seed), magnitude)


def random_point_below(t: CodingTree, f: Point, rng: random.Random, magnitude: int = 10) -> Optional[Point]:
    """A random point strictly below ``f``; None when the tree has one point."""
    if t.height == 0:
        return None
    k = rng.randrange(t.height)
    path = branch(t, f)
    v = path[k]
    x = _random_below_value(t, v, f.values[k], rng, magnitude)
    tail = random_completion(t, route(t, v, x), rng, magnitude)
    return Point(f.values[:k] + (x,) + tuple(tail))


# ---------------------------------------------------------------- discreteness


def _bottom_label(t: CodingTree, p: Point) -> Optional[Label]:
    if t.height == 0:
        return None
    return t.label(branch(t, p)[-2])


def successor(t: CodingTree, p: Point) -> Optional[Point]:
    """Immediate successor, decided by the level-1 label alone.

    No label has a least element, so a step never carries into higher levels.
    """
    check_point(t, p)
    label = _bottom_label(t, p)
    if label is None or label.is_dense:
        return None
    x = p.values[-1]
    if label.kind == "w*" and x == 0:
        return None
    return Point(p.values[:-1] + (x + 1,))


def predecessor(t: CodingTree, p: Point) -> Optional[Point]:
    check_point(t, p)
    label = _bottom_label(t, p)
    if label is None or label.is_dense:
        return None
    return Point(p.values[:-1] + (p.values[-1] - 1,))


def fin_equiv(t: CodingTree, p: Point, q: Point) -> bool:
    """True iff the closed interval between ``p`` and ``q`` is finite."""
    check_point(t, p)
    check_point(t, q)
    if p == q:
        return True
    label = _bottom_label(t, p)
    return label.is_discrete and p.values[:-1] == q.values[:-1]


def enumerate_interval(t: CodingTree, p: Point, q: Point, max_steps: int = 10**6) -> list[Point]:
    """All points ``r`` with ``p <= r <= q``, in order."""
    if compare(t, p, q) is Ordering.GREATER:
        raise ValueError("enumerate_interval needs p <= q")
    if p == q:
        return [p]
    if not fin_equiv(t, p, q):
        raise InfiniteInterval(f"[{p.values}, {q.values}] is infinite")
    out = [p]
    while out[-1] != q:
        if len(out) > max_steps:
            raise InfiniteInterval(f"more than {max_steps} points")
        out.append(successor(t, out[-1]))
    return out


def level_equiv(t: CodingTree, p: Point, q: Point, i: int) -> bool:
    """Same part of the level-``i`` partition: values agree at every level above ``i``."""
    if not 0 <= i <= t.height:
        raise LevelOutOfRange(f"level {i} outside 0..{t.height}")
    cut = t.height - i
    return p.values[:cut] == q.values[:cut]


# ---------------------------------------------------------------- JSON


def value_to_json(x: Value) -> dict:
    if x is TOP:
        return {"top": True}
    if type(x) is int:
        return {"int": x}
    return {"rat": f"{x.numerator}/{x.denominator}"}


def value_from_json(obj) -> Value:
    if not isinstance(obj, dict) or len(obj) != 1:
        raise DecodeError(f"bad value {obj!r}")
    (key, val), = obj.items()
    if key == "top" and val is True:
        return TOP
    if key == "int" and type(val) is int:
        return val
    if key == "rat" and isinstance(val, str):
        try:
            num, _, den = val.partition("/")
            x = Fraction(int(num), int(den or 1))
        except (ValueError, ZeroDivisionError):
            raise DecodeError(f"bad rational {val!r}") from None
        return x
    raise DecodeError(f"bad value {obj!r}")


def point_to_json(p: Point) -> dict:
    return {"values": [value_to_json(x) for x in p.values]}


def point_from_json(obj) -> Point:
    if not isinstance(obj, dict) or not isinstance(obj.get("values"), list):
        raise DecodeError("expected {'values': [...]}")
    return Point(tuple(value_from_json(x) for x in obj["values"]))


def parse_point_literal(t: CodingTree, text: str) -> Point:
    """Read ``(0, 1/2, top)``-style literals."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    items = [s for s in (part.strip() for part in body.split(",")) if s]
    raw: list = []
    for s in items:
        try:
            raw.append(int(s))
        except ValueError:
            raw.append(s)
    try:
        return make_point(t, raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise DecodeError(f"bad point literal {text!r}: {exc}") from None
