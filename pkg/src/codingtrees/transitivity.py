"""Executable lower 1-transitivity.

For points ``f`` and ``g`` the initial segment ``(-inf, f]`` splits into the
blocks ``Gamma^f_i``: points agreeing with ``f`` above level ``i`` and lying
below it at level ``i``.  A block is carried onto ``Gamma^g_i`` by

* copying ``g`` above level ``i``,
* an order isomorphism of value segments at level ``i``
  (``{v <= f_i}`` onto ``{w <= g_i}``), and
* transporting the lower values along the isomorphism of left forests.

``Witness`` patches these maps together.  Dense segment maps are built lazily
by back-and-forth and memoized, so a witness is consistent across queries but
only ever materialized on the points it has been asked about.
"""
from __future__ import annotations

import bisect
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from codingtrees.coding_tree import (
    CodingTree,
    Label,
    label_lower_equiv,
    match_left_children,
    signature,
    subtree_iso,
)
from codingtrees.errors import (
    InvalidPoint,
    LabelMismatch,
    LevelOutOfRange,
    NotInGamma,
    NotIsomorphic,
    NotStrictlyBelow,
    SignatureMismatch,
)
from codingtrees.points import (
    TOP,
    Ordering,
    Point,
    Value,
    between,
    branch,
    check_point,
    col,
    compare,
    level_equiv,
    point_to_json,
    random_point_below,
    random_completion,
    route,
    value_to_json,
)
from codingtrees import kernels

# ---------------------------------------------------------------- value maps


class SegmentIso:
    """Order isomorphism from ``{v <= a}`` in one label's values onto
    ``{w <= b}`` in a lower-equivalent label's values, with ``a -> b``.

    ``a = b = None`` gives an isomorphism of the whole value set (``TOP`` to
    ``TOP``), used to recolour values when transporting along a forest map.
    Coloured labels map colour ``m`` below the anchor to ``colour_map[m]``.
    """

    def __init__(self, label_a: Label, a: Optional[Value], label_b: Label, b: Optional[Value],
                 colour_map: Optional[Sequence[int]] = None):
        if not label_lower_equiv(label_a, label_b):
            raise LabelMismatch(f"{label_a} and {label_b} are not lower-equivalent")
        if (a is None) != (b is None):
            raise ValueError("anchor must be given on both sides or neither")
        self.label_a, self.label_b = label_a, label_b
        self.a, self.b = a, b
        self.n = label_a.colours
        cmap = tuple(range(self.n)) if colour_map is None else tuple(colour_map)
        if sorted(cmap) != list(range(self.n)):
            raise ValueError(f"colour map {cmap} is not a permutation of 0..{self.n - 1}")
        self.colour_map = cmap
        self._inverse_cmap = tuple(cmap.index(m) for m in range(self.n))
        self.discrete = label_a.is_discrete
        # memo of (source, image) pairs strictly below the anchor, sorted on both sides
        self._src: list = []
        self._dst: list = []

    @property
    def identity_like(self) -> bool:
        return self.a is None and self.colour_map == tuple(range(self.n))

    def pairs(self) -> list[tuple[Value, Value]]:
        out = list(zip(self._src, self._dst))
        if self.a is not None:
            out.append((self.a, self.b))
        return out

    def __call__(self, v: Value) -> Value:
        return self._map(v, forward=True)

    def inverse(self, w: Value) -> Value:
        return self._map(w, forward=False)

    def _map(self, v, forward: bool):
        anchor, image = (self.a, self.b) if forward else (self.b, self.a)
        label = self.label_a if forward else self.label_b
        if self.discrete:
            if type(v) is not int or (label.kind == "w*" and v > 0):
                raise ValueError(f"{v!r} is not a value of {label}")
            if anchor is None:
                return v
            if v > anchor:
                raise ValueError(f"{v} is above the segment bound {anchor}")
            return v - anchor + image
        if anchor is not None and v == anchor:
            return image
        if v is TOP:
            if anchor is None and label.has_endpoint:
                return TOP
            raise ValueError(f"TOP is not in the segment of {label} below {anchor!r}")
        if not isinstance(v, Fraction):
            raise ValueError(f"{v!r} is not a rational")
        if anchor is not None and not v < anchor:
            raise ValueError(f"{v} is above the segment bound {anchor}")
        keys, vals = (self._src, self._dst) if forward else (self._dst, self._src)
        idx = bisect.bisect_left(keys, v)
        if idx < len(keys) and keys[idx] == v:
            return vals[idx]
        lo = vals[idx - 1] if idx > 0 else None
        hi = vals[idx] if idx < len(vals) else image
        if hi is TOP:
            hi = None
        if self.n > 1:
            cmap = self.colour_map if forward else self._inverse_cmap
            colour = cmap[col(v, self.n)]
        else:
            colour = 0
        w = _pick(v, lo, hi, colour, self.n)
        src, dst = (v, w) if forward else (w, v)
        pos = bisect.bisect_left(self._src, src)
        self._src.insert(pos, src)
        self._dst.insert(pos, dst)
        return w


def _pick(v: Fraction, lo, hi, colour: int, n: int) -> Fraction:
    """A rational of the given colour strictly inside ``(lo, hi)``; ``None``
    bounds are unbounded.  ``v`` itself is used when it qualifies."""
    if (lo is None or lo < v) and (hi is None or v < hi) and (n == 1 or col(v, n) == colour):
        return v
    if lo is not None and hi is not None:
        return between(lo, hi, colour, n)
    if lo is None and hi is None:
        return between(v - 1, v + 1, colour, n)
    if lo is None:
        return between(hi - 1, hi, colour, n)
    return between(lo, lo + 1, colour, n)


def segment_iso(label_a: Label, a: Value, label_b: Label, b: Value,
                colour_map: Optional[Sequence[int]] = None) -> SegmentIso:
    return SegmentIso(label_a, a, label_b, b, colour_map)


# ---------------------------------------------------------------- forests


@dataclass
class ForestIso:
    tree_a: CodingTree
    vertex_a: int
    tree_b: CodingTree
    vertex_b: int
    mapping: dict[int, int]

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    @property
    def inverse_mapping(self) -> dict[int, int]:
        return {b: a for a, b in self.mapping.items()}

    def colour_map(self, va: Optional[int] = None) -> tuple[int, ...]:
        """Left-child index of ``va`` -> left-child index of its image."""
        ta, tb = self.tree_a, self.tree_b
        if va is None:
            va, vb = self.vertex_a, self.vertex_b
        else:
            vb = self.mapping[va]
        left_b = tb.left_children(vb)
        return tuple(left_b.index(self.mapping[c]) for c in ta.left_children(va))


def forest_iso_map(t: CodingTree, v1: int, v2: int, t2: Optional[CodingTree] = None) -> ForestIso:
    """The isomorphism between the left forests of ``v1`` (in ``t``) and
    ``v2`` (in ``t2``, default ``t``).  Left siblings are pairwise
    non-isomorphic in a coding tree, so the matching is forced."""
    t2 = t if t2 is None else t2
    pairs = []
    try:
        pairs = match_left_children(t, v1, t2, v2)
    except (IndexError, KeyError):
        pass
    if len(t.left_children(v1)) != len(t2.left_children(v2)) or len(pairs) != len(t.left_children(v1)):
        raise NotIsomorphic(f"left forests of {v1} and {v2} differ")
    mapping: dict[int, int] = {}
    for a, b in pairs:
        sub = subtree_iso(t, a, t2, b)
        if sub is None:
            raise NotIsomorphic(f"left forests of {v1} and {v2} differ")
        mapping.update(sub)
    return ForestIso(t, v1, t2, v2, mapping)


# ---------------------------------------------------------------- witnesses


def gamma_index(t: CodingTree, f: Point, p: Point) -> int:
    """Level of the block ``Gamma^f_i`` containing ``p``: the highest level
    where ``p`` and ``f`` differ (``p`` is smaller there)."""
    if compare(t, p, f) is not Ordering.LESS:
        raise NotStrictlyBelow(f"{p.values} is not strictly below {f.values}")
    return t.height - kernels.first_difference(p.values, f.values)


class _LevelMap:
    """Gamma^f_i -> Gamma^g_i for one level, in both directions."""

    def __init__(self, w: "Witness", k: int):
        ta, tb = w.tree_a, w.tree_b
        self.k = k
        self.xa, self.xb = w.path_a[k], w.path_b[k]
        self.psi = forest_iso_map(ta, self.xa, self.xb, tb)
        self.psi_inv = self.psi.inverse_mapping
        self.segment = SegmentIso(
            ta.label(self.xa), w.anchor_a.values[k],
            tb.label(self.xb), w.anchor_b.values[k],
            self.psi.colour_map() if ta.label(self.xa).colours > 1 else None,
        )
        self._recolour: dict[int, SegmentIso] = {}

    def recolour(self, y: int) -> Optional[SegmentIso]:
        """Value map at forest vertex ``y`` (source side); None means identity."""
        if y not in self._recolour:
            ta, tb = self.psi.tree_a, self.psi.tree_b
            label = ta.label(y)
            iso = None
            if label.colours > 1:
                cmap = self.psi.colour_map(y)
                if cmap != tuple(range(label.n)):
                    iso = SegmentIso(label, None, tb.label(self.psi[y]), None, cmap)
            self._recolour[y] = iso
        return self._recolour[y]

    def apply(self, p: Point, prefix: tuple, forward: bool, used: list) -> Point:
        k = self.k
        ta, tb = self.psi.tree_a, self.psi.tree_b
        src_tree, dst_tree = (ta, tb) if forward else (tb, ta)
        x_src, x_dst = (self.xa, self.xb) if forward else (self.xb, self.xa)
        vmap = self.psi.mapping if forward else self.psi_inv
        top = p.values[k]
        image = self.segment(top) if forward else self.segment.inverse(top)
        used.append((src_tree.height - k, top, image))
        out = list(prefix) + [image]
        y = route(src_tree, x_src, top)
        y_img = route(dst_tree, x_dst, image)
        if vmap.get(y) != y_img:
            raise AssertionError("segment map and forest map disagree on the child taken")
        for x in p.values[k + 1:]:
            y_src = y if forward else vmap[y]  # key recolour maps on the source tree
            iso = self.recolour(y_src)
            if iso is None or x is TOP:
                x_img = x
            else:
                x_img = iso(x) if forward else iso.inverse(x)
                used.append((src_tree.height - len(out), x, x_img))
            out.append(x_img)
            y_next = route(src_tree, y, x)
            y_img_next = route(dst_tree, vmap[y], x_img)
            if vmap.get(y_next) != y_img_next:
                raise AssertionError("transport left the forest image")
            y = y_next
        return Point(tuple(out))


class Witness:
    """Order isomorphism ``(-inf, f] -> (-inf, g]`` built from per-level maps.

    Works across two trees when they have the same signature; the
    single-tree case passes the same tree twice.  Each instance memoizes its
    segment maps, so concurrent queries need external locking.
    """

    def __init__(self, tree_a: CodingTree, f: Point, tree_b: CodingTree, g: Point,
                 _levels: Optional[dict] = None, _reverse: bool = False):
        self.tree_a, self.tree_b = tree_a, tree_b
        self.anchor_a, self.anchor_b = f, g
        self.path_a, self.path_b = branch(tree_a, f), branch(tree_b, g)
        self._levels: dict[int, _LevelMap] = {} if _levels is None else _levels
        self._reverse = _reverse
        self.trace: list[dict] = []

    @property
    def source(self) -> tuple[CodingTree, Point]:
        return (self.tree_b, self.anchor_b) if self._reverse else (self.tree_a, self.anchor_a)

    @property
    def target(self) -> tuple[CodingTree, Point]:
        return (self.tree_a, self.anchor_a) if self._reverse else (self.tree_b, self.anchor_b)

    def level_map(self, k: int) -> _LevelMap:
        if k not in self._levels:
            self._levels[k] = _LevelMap(self, k)
        return self._levels[k]

    def __call__(self, p: Point) -> Point:
        src_tree, f = self.source
        _, g = self.target
        check_point(src_tree, p)
        if p == f:
            self.trace.append({"p": p, "image": g, "level": None, "pairs": []})
            return g
        level = gamma_index(src_tree, f, p)
        image, used = self._phi(level, p)
        self.trace.append({"p": p, "image": image, "level": level, "pairs": used})
        return image

    def _phi(self, level: int, p: Point) -> tuple[Point, list]:
        src_tree, _ = self.source
        _, g = self.target
        k = src_tree.height - level
        used: list = []
        image = self.level_map(k).apply(p, g.values[:k], not self._reverse, used)
        return image, used

    def phi_level(self, level: int, p: Point) -> Point:
        """The block map at one level; ``p`` must lie in that block."""
        src_tree, f = self.source
        check_point(src_tree, p)
        try:
            actual = gamma_index(src_tree, f, p)
        except NotStrictlyBelow:
            raise NotInGamma(f"{p.values} is not below the anchor") from None
        if actual != level:
            raise NotInGamma(f"{p.values} lies in the block at level {actual}, not {level}")
        return self._phi(level, p)[0]

    def inverse(self) -> "Witness":
        """The inverse map, sharing this witness's memo tables."""
        inv = Witness(self.tree_a, self.anchor_a, self.tree_b, self.anchor_b,
                      _levels=self._levels, _reverse=not self._reverse)
        return inv

    def trace_json(self) -> str:
        def enc(x):
            return None if x is None else value_to_json(x)

        rows = [
            {
                "p": point_to_json(r["p"]),
                "image": point_to_json(r["image"]),
                "level": r["level"],
                "segment_pairs": [
                    {"level": lvl, "from": enc(a), "to": enc(b)} for lvl, a, b in r["pairs"]
                ],
            }
            for r in self.trace
        ]
        return json.dumps(rows, indent=1)


def initial_segment_witness(t: CodingTree, f: Point, g: Point) -> Witness:
    check_point(t, f)
    check_point(t, g)
    return Witness(t, f, t, g)


def cross_tree_witness(t1: CodingTree, f: Point, t2: CodingTree, g: Point) -> Witness:
    if signature(t1) != signature(t2):
        raise SignatureMismatch("trees have different signatures")
    check_point(t1, f)
    check_point(t2, g)
    return Witness(t1, f, t2, g)


def phi_i(t: CodingTree, f: Point, g: Point, i: int, p: Point,
          witness: Optional[Witness] = None) -> Point:
    """Image of ``p`` (in the level-``i`` block below ``f``) in the level-``i`` block below ``g``."""
    w = witness if witness is not None else initial_segment_witness(t, f, g)
    return w.phi_level(i, p)


# ---------------------------------------------------------------- expanded tree


def expanded_vertex(t: CodingTree, p: Point, i: int) -> tuple[int, tuple]:
    """Vertex of the expanded tree above ``p`` at level ``i``: the branch
    vertex there plus the values of ``p`` strictly above it."""
    if not 0 <= i <= t.height:
        raise LevelOutOfRange(f"level {i} outside 0..{t.height}")
    k = t.height - i
    return branch(t, p)[k], tuple(p.values[:k])


def leaf_precedes(t: CodingTree, p: Point, q: Point) -> bool:
    """Leaf order of the expanded tree, computed from expanded vertices only."""
    for j in range(t.height + 1):
        if expanded_vertex(t, p, j) == expanded_vertex(t, q, j):
            break
    if j == 0:
        return False
    # children of the common vertex are ordered by the value taken there
    return expanded_vertex(t, p, j - 1)[1][-1] < expanded_vertex(t, q, j - 1)[1][-1]


# ---------------------------------------------------------------- audits


@dataclass
class AuditReport:
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        head = f"{self.checked} checks, {len(self.violations)} violations"
        return "\n".join([head, *self.violations[:20]])


def sample_below(t: CodingTree, f: Point, rng: random.Random, count: int, magnitude: int = 10) -> list[Point]:
    """``count`` points ``<= f``: mostly strictly below, ``f`` itself included."""
    out = [f]
    while len(out) < count:
        p = random_point_below(t, f, rng, magnitude)
        if p is None:
            break
        out.append(p)
    return out


def audit_witness(w: Witness, probes: int, seed, magnitude: int = 10) -> AuditReport:
    """Order preservation, landing below the target anchor, and inverse round
    trips on ``probes`` sampled pairs."""
    src_tree, f = w.source
    dst_tree, g = w.target
    rng = random.Random(seed)
    report = AuditReport()
    pts = sample_below(src_tree, f, rng, max(2, probes // 4 + 1), magnitude)
    images = {}
    inv = w.inverse()
    for p in pts:
        img = w(p)
        images[p] = img
        report.checked += 1
        if compare(dst_tree, img, g) is Ordering.GREATER:
            report.violations.append(f"image {img.values} of {p.values} is above {g.values}")
        back = inv(img)
        if back != p:
            report.violations.append(f"inverse round trip {p.values} -> {img.values} -> {back.values}")
    for _ in range(probes):
        p, q = rng.choice(pts), rng.choice(pts)
        report.checked += 1
        if compare(src_tree, p, q, check=False) != compare(dst_tree, images[p], images[q], check=False):
            report.violations.append(f"order not preserved on {p.values}, {q.values}")
    return report


def invariance_check(t: CodingTree, i: int, f: Point, g: Point, sample_count: int, seed,
                     magnitude: int = 10) -> AuditReport:
    """The level-``i`` partition is preserved by the witness ``(-inf,f] -> (-inf,g]``."""
    if not 0 <= i <= t.height:
        raise LevelOutOfRange(f"level {i} outside 0..{t.height}")
    w = initial_segment_witness(t, f, g)
    rng = random.Random(seed)
    pts = sample_below(t, f, rng, max(2, sample_count // 4 + 1), magnitude)
    # pairs sharing a block are rare among random points; add near neighbours
    pts += [_nudge(t, p, rng, magnitude) for p in pts]
    pts = [p for p in pts if p is not None and compare(t, p, f) is not Ordering.GREATER]
    images = {p: w(p) for p in pts}
    report = AuditReport()
    for _ in range(sample_count):
        p, q = rng.choice(pts), rng.choice(pts)
        report.checked += 1
        if level_equiv(t, p, q, i) != level_equiv(t, images[p], images[q], i):
            report.violations.append(
                f"level {i}: {p.values} ~ {q.values} is {level_equiv(t, p, q, i)} "
                f"but the images disagree")
    return report


def _nudge(t: CodingTree, p: Point, rng: random.Random, magnitude: int) -> Optional[Point]:
    """A random point sharing ``p``'s values down to a random level."""
    if t.height == 0:
        return None
    k = rng.randrange(t.height + 1)
    if k == t.height:
        return p
    v = branch(t, p)[k]
    return Point(p.values[:k] + tuple(random_completion(t, v, rng, magnitude)))
