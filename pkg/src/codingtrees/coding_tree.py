"""Finite coding trees: the labelled, levelled trees that classify countable
lower 1-transitive linear orders.

Vertex identities are list indices.  Leaves sit at level 0 and every other
vertex sits one level above its children.  For labels with an endpoint
(``w*``, ``Qd``, ``Qd_n``) the last child is the right child; every other
child is a left child, and the ``m``-th left child of a ``Q_n``/``Qd_n``
vertex carries colour ``m``.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union

from codingtrees.errors import (
    DecodeError,
    InvalidInput,
    InvalidTree,
    LevelOutOfRange,
    NotAParent,
)

# ---------------------------------------------------------------- labels

_KINDS = ("Z", "w*", "Q", "Qd", "Qn", "Qdn", "1")


@dataclass(frozen=True)
class Label:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown label kind {self.kind!r}")
        if self.kind in ("Qn", "Qdn"):
            if not isinstance(self.n, int) or self.n < 2:
                raise ValueError(f"{self.kind} needs a finite n >= 2, got {self.n!r}")
        elif self.n != 0:
            raise ValueError(f"label {self.kind} takes no arity")

    @property
    def has_endpoint(self) -> bool:
        return self.kind in ("w*", "Qd", "Qdn")

    @property
    def is_dense(self) -> bool:
        return self.kind in ("Q", "Qd", "Qn", "Qdn")

    @property
    def is_discrete(self) -> bool:
        return self.kind in ("Z", "w*")

    @property
    def colours(self) -> int:
        """Number of colours carried by the values (1 when uncoloured)."""
        return self.n if self.kind in ("Qn", "Qdn") else 1

    @property
    def arity(self) -> int:
        return {"Z": 1, "Q": 1, "w*": 2, "Qd": 2, "1": 0}.get(
            self.kind, self.n + (self.kind == "Qdn")
        )

    @property
    def lower_class(self) -> str:
        """Identifier of the lower-isomorphism class of the label's order."""
        if self.kind in ("Z", "w*"):
            return "Z"
        if self.kind in ("Q", "Qd"):
            return "Q"
        if self.kind in ("Qn", "Qdn"):
            return f"Q_{self.n}"
        return "1"

    def __str__(self) -> str:
        if self.kind == "Qn":
            return f"Q_{self.n}"
        if self.kind == "Qdn":
            return f"Qd_{self.n}"
        return self.kind

    def to_json(self):
        if self.kind == "Qn":
            return {"Qn": self.n}
        if self.kind == "Qdn":
            return {"QnDot": self.n}
        return self.kind

    @classmethod
    def from_json(cls, obj) -> "Label":
        if isinstance(obj, str) and obj in ("Z", "w*", "Q", "Qd", "1"):
            return cls(obj)
        if isinstance(obj, dict) and len(obj) == 1:
            (key, n), = obj.items()
            if key in ("Qn", "QnDot") and type(n) is int and n >= 2:
                return cls("Qn" if key == "Qn" else "Qdn", n)
        raise DecodeError(f"bad label {obj!r}")


Z = Label("Z")
WSTAR = Label("w*")
Q = Label("Q")
QDOT = Label("Qd")
SINGLETON = Label("1")


def qn(n: int) -> Label:
    return Label("Qn", n)


def qn_dot(n: int) -> Label:
    return Label("Qdn", n)


def label_lower_equiv(a: Label, b: Label) -> bool:
    return a.lower_class == b.lower_class


# ---------------------------------------------------------------- trees


@dataclass(frozen=True)
class Vertex:
    label: Label
    level: int
    children: tuple[int, ...] = ()


# nested (label, (subspec, ...)) form used to build trees
TreeSpec = tuple


@dataclass(frozen=True)
class CodingTree:
    vertices: tuple[Vertex, ...]
    root: int = 0

    def __len__(self) -> int:
        return len(self.vertices)

    def label(self, v: int) -> Label:
        return self.vertices[v].label

    def level(self, v: int) -> int:
        return self.vertices[v].level

    def children(self, v: int) -> tuple[int, ...]:
        return self.vertices[v].children

    @property
    def height(self) -> int:
        return self.vertices[self.root].level

    def left_children(self, v: int) -> tuple[int, ...]:
        kids = self.vertices[v].children
        if self.vertices[v].label.has_endpoint:
            return kids[:-1]
        return kids

    def right_child(self, v: int) -> Optional[int]:
        vx = self.vertices[v]
        if vx.label.has_endpoint and vx.children:
            return vx.children[-1]
        return None

    @cached_property
    def parent(self) -> dict[int, int]:
        return {c: v for v, vx in enumerate(self.vertices) for c in vx.children}

    @cached_property
    def by_level(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = defaultdict(list)
        for v in self.preorder():
            out[self.vertices[v].level].append(v)
        return dict(out)

    def preorder(self, start: Optional[int] = None) -> list[int]:
        order, stack, seen = [], [self.root if start is None else start], set()
        while stack:
            v = stack.pop()
            if v in seen or not 0 <= v < len(self.vertices):
                continue
            seen.add(v)
            order.append(v)
            stack.extend(reversed(self.vertices[v].children))
        return order

    @cached_property
    def _codes(self) -> dict[int, str]:
        codes: dict[int, str] = {}
        for v in reversed(self.preorder()):
            vx = self.vertices[v]
            left = [codes[c] for c in self.left_children(v)]
            r = self.right_child(v)
            codes[v] = _code(vx.label, vx.level, left, None if r is None else codes[r])
        return codes

    def to_spec(self, v: Optional[int] = None) -> TreeSpec:
        v = self.root if v is None else v
        vx = self.vertices[v]
        return (vx.label, tuple(self.to_spec(c) for c in vx.children))

    @classmethod
    def from_spec(cls, spec: TreeSpec) -> "CodingTree":
        """Build a tree from nested ``(label, children)`` pairs.

        Ids follow preorder; each level is one more than the tallest child.
        """
        vertices: list = []

        def build(node) -> tuple[int, int]:
            label, kids = node
            vid = len(vertices)
            vertices.append(None)
            built = [build(k) for k in kids]
            level = 1 + max(h for _, h in built) if built else 0
            vertices[vid] = Vertex(label, level, tuple(i for i, _ in built))
            return vid, level

        build(spec)
        return cls(tuple(vertices), 0)


def _code(label: Label, level: int, left: Iterable[str], right: Optional[str]) -> str:
    return f"{label}@{level}[{','.join(sorted(left))}|{right or ''}]"


def iso_code(t: CodingTree, v: Optional[int] = None) -> str:
    """Canonical string deciding isomorphism of the subtree rooted at ``v``.

    Left children are compared as a multiset, right children matched to right
    children; labels and levels must agree.
    """
    return t._codes[t.root if v is None else v]


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    rule: str
    vertices: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.message} (vertices {list(self.vertices)})"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(map(str, self.violations))


def validate(t: CodingTree) -> ValidationReport:
    """Check the coding-tree axioms, reporting every violated rule V1-V7."""
    out: list[Violation] = []
    verts = t.vertices
    n = len(verts)

    # V1: rooted tree shape
    parents: dict[int, list[int]] = defaultdict(list)
    for v, vx in enumerate(verts):
        for c in vx.children:
            if 0 <= c < n:
                parents[c].append(v)
            else:
                out.append(Violation("V1", (v,), f"child id {c} does not exist"))
    if not 0 <= t.root < n:
        out.append(Violation("V1", (), f"root id {t.root} does not exist"))
        return ValidationReport(out)
    for v in range(n):
        if v == t.root and parents[v]:
            out.append(Violation("V1", (v, *parents[v]), "root has a parent"))
        elif v != t.root and len(parents[v]) != 1:
            what = "no parent" if not parents[v] else "several parents"
            out.append(Violation("V1", (v, *parents[v]), f"vertex has {what}"))
    reached = set(t.preorder())
    if len(reached) != n:
        out.append(Violation("V1", tuple(sorted(set(range(n)) - reached)), "unreachable from root"))
    shaped = not out

    # V2: levels
    for v, vx in enumerate(verts):
        for c in vx.children:
            if 0 <= c < n and verts[c].level != vx.level - 1:
                out.append(Violation("V2", (v, c), "child is not exactly one level below its parent"))
        if not vx.children and vx.level != 0:
            out.append(Violation("V2", (v,), "leaf above level 0"))
        if vx.children and vx.level == 0:
            out.append(Violation("V2", (v,), "parent at level 0"))
    if shaped:
        height = _longest_path(t)
        if verts[t.root].level != height:
            out.append(Violation("V1", (t.root,), f"root level {verts[t.root].level} != height {height}"))

    # V3: arity
    for v, vx in enumerate(verts):
        if len(vx.children) != vx.label.arity:
            out.append(Violation(
                "V3", (v,), f"label {vx.label} needs {vx.label.arity} children, has {len(vx.children)}"))

    # V4: labels on one level are lower-equivalent
    levels: dict[int, list[int]] = defaultdict(list)
    for v, vx in enumerate(verts):
        levels[vx.level].append(v)
    for lvl, vs in sorted(levels.items()):
        classes = {verts[v].label.lower_class for v in vs}
        if len(classes) > 1:
            out.append(Violation("V4", tuple(vs), f"level {lvl} mixes label classes {sorted(classes)}"))

    if shaped:
        # V5: left forests uniform per level
        for lvl, vs in sorted(levels.items()):
            forests = {_forest_code(t, v) for v in vs}
            if len(forests) > 1:
                out.append(Violation("V5", tuple(vs), f"left forests at level {lvl} are not isomorphic"))
        # V6: left siblings pairwise non-isomorphic
        for v in range(n):
            codes = [t._codes[c] for c in t.left_children(v)]
            if len(set(codes)) != len(codes):
                out.append(Violation("V6", (v,), "isomorphic left children"))
        # V7: every vertex is a leaf or above one
        for v in range(n):
            if not any(not verts[u].children for u in t.preorder(v)):
                out.append(Violation("V7", (v,), "no leaf below vertex"))
    return ValidationReport(out)


def _longest_path(t: CodingTree) -> int:
    depth = {}
    for v in reversed(t.preorder()):
        kids = t.vertices[v].children
        depth[v] = 1 + max(depth[c] for c in kids) if kids else 0
    return depth[t.root]


def _forest_code(t: CodingTree, v: int) -> tuple[str, ...]:
    return tuple(sorted(t._codes[c] for c in t.left_children(v)))


def is_valid(t: CodingTree) -> bool:
    return validate(t).ok


# ---------------------------------------------------------------- isomorphism


def tree_iso(t1: CodingTree, t2: CodingTree) -> Optional[dict[int, int]]:
    """The isomorphism between two trees as a vertex map, or None."""
    return subtree_iso(t1, t1.root, t2, t2.root)


def subtree_iso(t1: CodingTree, v1: int, t2: CodingTree, v2: int) -> Optional[dict[int, int]]:
    if iso_code(t1, v1) != iso_code(t2, v2):
        return None
    mapping: dict[int, int] = {}
    stack = [(v1, v2)]
    while stack:
        a, b = stack.pop()
        mapping[a] = b
        stack.extend(match_left_children(t1, a, t2, b))
        ra, rb = t1.right_child(a), t2.right_child(b)
        if ra is not None:
            stack.append((ra, rb))
    return mapping


def match_left_children(t1: CodingTree, v1: int, t2: CodingTree, v2: int) -> list[tuple[int, int]]:
    """Pair the left children of two vertices with isomorphic left forests.

    Siblings with equal codes (possible only in trees breaking V6) are paired
    in sibling order.
    """
    pool: dict[str, list[int]] = defaultdict(list)
    for c in t2.left_children(v2):
        pool[iso_code(t2, c)].append(c)
    pairs = []
    for c in t1.left_children(v1):
        pairs.append((c, pool[iso_code(t1, c)].pop(0)))
    return pairs


@dataclass(frozen=True)
class Forest:
    tree: CodingTree
    roots: tuple[int, ...]

    @property
    def code(self) -> tuple[str, ...]:
        return tuple(sorted(iso_code(self.tree, r) for r in self.roots))

    def __len__(self) -> int:
        return len(self.roots)


def left_forest(t: CodingTree, v: int) -> Forest:
    if not t.children(v):
        raise NotAParent(f"vertex {v} is a leaf")
    return Forest(t, t.left_children(v))


# ---------------------------------------------------------------- classification


Signature = tuple[tuple[str, tuple[str, ...]], ...]


def signature(t: CodingTree) -> Signature:
    """Per-level ``(label class, left-forest code)`` pairs, root level first.

    Trees that only break V6 are read through ``canonicalize`` first, so the
    signature is constant on each merge class.
    """
    rules = validate(t).rules()
    if rules - {"V6"}:
        raise InvalidTree(f"tree violates {sorted(rules)}")
    if rules:
        t = canonicalize(t)
    sig = []
    for lvl in range(t.height, -1, -1):
        v = t.by_level[lvl][0]
        sig.append((t.label(v).lower_class, _forest_code(t, v)))
    return tuple(sig)


def lower_isomorphic(t1: CodingTree, t2: CodingTree) -> bool:
    return signature(t1) == signature(t2)


def canonicalize(t: CodingTree) -> CodingTree:
    """Merge isomorphic left siblings bottom-up until V6 holds.

    The first sibling of each isomorphism class is kept.  A ``Q_n``/``Qd_n``
    vertex left with ``k`` classes becomes ``Q_k``/``Qd_k``, or ``Q``/``Qd``
    when ``k == 1``.
    """
    bad = validate(t).rules() - {"V6"}
    if bad:
        raise InvalidInput(f"canonicalize needs V1-V5, tree violates {sorted(bad)}")

    def canon(v: int) -> tuple[TreeSpec, str]:
        label = t.label(v)
        left, seen = [], set()
        for c in t.left_children(v):
            spec, code = canon(c)
            if code not in seen:
                seen.add(code)
                left.append((spec, code))
        r = t.right_child(v)
        right = canon(r) if r is not None else None
        k = len(left)
        if label.kind == "Qn" and k < label.n:
            label = qn(k) if k >= 2 else Q
        elif label.kind == "Qdn" and k < label.n:
            label = qn_dot(k) if k >= 2 else QDOT
        kids = tuple(s for s, _ in left) + ((right[0],) if right else ())
        code = _code(label, t.level(v), (c for _, c in left), right[1] if right else None)
        return (label, kids), code

    spec, _ = canon(t.root)
    return CodingTree.from_spec(spec)


def truncate(t: CodingTree, i: int) -> CodingTree:
    """Cut the tree below level ``i``; level-``i`` vertices become leaves.

    This is the tree of the quotient order by the level-``i`` partition, so
    siblings made isomorphic by the cut are merged.
    """
    if not 0 <= i <= t.height:
        raise LevelOutOfRange(f"level {i} outside 0..{t.height}")
    if i == 0:
        return t

    def cut(v: int) -> TreeSpec:
        if t.level(v) == i:
            return (SINGLETON, ())
        return (t.label(v), tuple(cut(c) for c in t.children(v)))

    return canonicalize(CodingTree.from_spec(cut(t.root)))


# ---------------------------------------------------------------- serialization


def to_json(t: CodingTree) -> bytes:
    doc = {
        "vertices": [
            {
                "id": v,
                "label": vx.label.to_json(),
                "level": vx.level,
                "children": list(vx.children),
                "right_child": t.right_child(v),
            }
            for v, vx in enumerate(t.vertices)
        ],
        "root": t.root,
    }
    return json.dumps(doc).encode()


def from_json(data: Union[bytes, str]) -> CodingTree:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise DecodeError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("vertices"), list) or "root" not in doc:
        raise DecodeError("expected an object with 'vertices' and 'root'")
    raw = doc["vertices"]
    try:
        by_id = {}
        for item in raw:
            vid = item["id"]
            if type(vid) is not int or vid in by_id:
                raise DecodeError(f"bad or duplicate vertex id {vid!r}")
            by_id[vid] = item
        if set(by_id) != set(range(len(raw))):
            raise DecodeError("vertex ids must be 0..N-1")
        verts = []
        seen_child: dict[int, int] = {}
        for vid in range(len(raw)):
            item = by_id[vid]
            label = Label.from_json(item["label"])
            level, kids = item["level"], item["children"]
            if type(level) is not int or level < 0:
                raise DecodeError(f"vertex {vid}: bad level {level!r}")
            if not isinstance(kids, list) or any(type(c) is not int or c not in by_id for c in kids):
                raise DecodeError(f"vertex {vid}: bad children {kids!r}")
            for c in kids:
                if c in seen_child:
                    raise DecodeError(f"vertex {c} has two parents ({seen_child[c]}, {vid})")
                seen_child[c] = vid
            expected_right = kids[-1] if label.has_endpoint and kids else None
            if item.get("right_child") != expected_right:
                raise DecodeError(f"vertex {vid}: right_child must be {expected_right}")
            verts.append(Vertex(label, level, tuple(kids)))
    except (KeyError, TypeError) as exc:
        raise DecodeError(f"malformed vertex record: {exc}") from None
    root = doc["root"]
    if type(root) is not int or root not in by_id:
        raise DecodeError(f"bad root {root!r}")
    if root in seen_child:
        raise DecodeError("root has a parent")
    return CodingTree(tuple(verts), root)


def to_dot(t: CodingTree, name: str = "coding_tree") -> str:
    lines = [f"digraph {name} {{"]
    for v in t.preorder():
        vx = t.vertices[v]
        lines.append(f'  n{v} [label="{vx.label} (level {vx.level})"];')
    for v in t.preorder():
        r = t.right_child(v)
        for c in t.children(v):
            style = " [style=bold]" if c == r else ""
            lines.append(f"  n{v} -> n{c}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
