"""Fixture orders, seeded mutants and the property suites run by ``codingtrees check``."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from codingtrees.coding_tree import (
    CodingTree,
    TreeSpec,
    iso_code,
    qn,
    qn_dot,
    validate,
)
from codingtrees.order_expr import compile_text
from codingtrees.points import (
    Ordering,
    between,
    col,
    compare,
    level_equiv,
    random_point_rng,
)
from codingtrees.transitivity import (
    audit_witness,
    initial_segment_witness,
    invariance_check,
    leaf_precedes,
)

# the lower isomorphism class of Z^3, one coding tree per order
Z3_CLASS = ("Z^3", "w*.Z^2 + Z^2", "w*.Z^2 + w*.Z + Z", "w*.Z^2 + w*.Z + w*")
Z2_CLASS = ("Z^2", "w*.Z + Z", "w*.Z + w*")
Q2_CLASS = ("Q_2(w*, Z)", "Q_2(w*, Z) + Z", "Q_2(w*, Z) + w*")
EXTRA = (
    "Q",
    "Q.Z",
    "Z.Q",
    "Qd.Z + w*",
    "Qd_2(Q, Qd)",
    "Q_2(Z^2, w*.Z + Z)",
    "w*.Q_2(w*, Z) + Q_2(Z, w*)",
    "Q_3(Z.Q, w*.Q + Q, w*.Q + Qd)",
)
CLASSES = (Z3_CLASS, Z2_CLASS, Q2_CLASS)
FIXTURES = Z3_CLASS + Z2_CLASS + Q2_CLASS + EXTRA


@lru_cache(maxsize=None)
def fixture_tree(expr: str) -> CodingTree:
    return compile_text(expr)


# ---------------------------------------------------------------- mutants

_WIDEN = {"Q": lambda n, k: qn(1 + k), "Qd": lambda n, k: qn_dot(1 + k),
          "Qn": lambda n, k: qn(n + k), "Qdn": lambda n, k: qn_dot(n + k)}


def duplicate_left_child(t: CodingTree, level: int, code: str, copies: int) -> CodingTree:
    """At every vertex of ``level``, repeat the first left child with iso code
    ``code`` ``copies`` more times and widen the label to match.

    The result keeps V1-V5 and breaks V6; the order it encodes is unchanged.
    """

    def build(v: int) -> TreeSpec:
        label = t.label(v)
        kids = [build(c) for c in t.children(v)]
        if t.level(v) != level:
            return (label, tuple(kids))
        left = list(t.left_children(v))
        at = next(i for i, c in enumerate(left) if iso_code(t, c) == code)
        kids[at + 1:at + 1] = [kids[at]] * copies
        return (_WIDEN[label.kind](label.n, copies), tuple(kids))

    return CodingTree.from_spec(build(t.root))


def condition9_mutants(count: int, seed) -> list[tuple[str, CodingTree]]:
    """``count`` seeded mutants of the fixtures with a dense mixing level,
    each violating only the left-sibling rule (V6)."""
    rng = random.Random(seed)
    pool = []
    for expr in FIXTURES:
        t = fixture_tree(expr)
        if any(t.label(v).kind in _WIDEN for v in range(len(t))):
            pool.append(expr)
    out = []
    while len(out) < count:
        expr = rng.choice(pool)
        m = fixture_tree(expr)
        for _ in range(rng.randint(1, 2)):
            levels = sorted({m.level(v) for v in range(len(m)) if m.label(v).kind in _WIDEN})
            lvl = rng.choice(levels)
            v0 = m.by_level[lvl][0]
            code = iso_code(m, rng.choice(m.left_children(v0)))
            m = duplicate_left_child(m, lvl, code, rng.randint(1, 2))
        assert validate(m).rules() == {"V6"}, validate(m)
        out.append((expr, m))
    return out


# ---------------------------------------------------------------- suites


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, what: str = "") -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 20:
                self.failures.append(what)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def __str__(self) -> str:
        return f"{self.name}: {self.passed} passed, {self.failed} failed"


def order_suite(t: CodingTree, seed, trials: int = 1000, magnitude: int = 10) -> SuiteResult:
    """Trichotomy, antisymmetry and transitivity of ``compare`` on random
    points, plus agreement with the expanded tree's leaf order."""
    rng = random.Random(seed)
    res = SuiteResult("order")
    pts = [random_point_rng(t, rng, magnitude) for _ in range(max(3, trials // 4))]
    # small magnitudes make equal and neighbouring points common
    pts += [random_point_rng(t, rng, 1) for _ in range(max(3, trials // 8))]
    for _ in range(trials):
        p, q, r = rng.choice(pts), rng.choice(pts), rng.choice(pts)
        pq, qp = compare(t, p, q), compare(t, q, p)
        res.record(pq.value == -qp.value, f"trichotomy {p.values} {q.values}")
        res.record((pq is Ordering.EQUAL) == (p == q), f"antisymmetry {p.values} {q.values}")
        qr = compare(t, q, r)
        if pq is qr and pq is not Ordering.EQUAL:
            res.record(compare(t, p, r) is pq, f"transitivity {p.values} {q.values} {r.values}")
        res.record(leaf_precedes(t, p, q) == (pq is Ordering.LESS), f"leaf order {p.values} {q.values}")
    return res


def transitivity_suite(t: CodingTree, seed, anchors: int = 20, probes: int = 1000,
                       magnitude: int = 10) -> SuiteResult:
    """Initial-segment witnesses for seeded anchor pairs: order preserved,
    images below the target anchor, inverse round trips exact."""
    rng = random.Random(seed)
    res = SuiteResult("transitivity")
    for a in range(anchors):
        f, g = random_point_rng(t, rng, magnitude), random_point_rng(t, rng, magnitude)
        w = initial_segment_witness(t, f, g)
        res.record(w(f) == g, f"anchor {f.values} does not map to {g.values}")
        report = audit_witness(w, probes, rng.randrange(2**32), magnitude)
        res.passed += report.checked - len(report.violations)
        res.failed += len(report.violations)
        res.failures.extend(report.violations[: max(0, 20 - len(res.failures))])
    return res


def invariance_suite(t: CodingTree, seed, samples: int = 200, anchors: int = 2,
                     magnitude: int = 10) -> SuiteResult:
    """Level partitions are preserved by witnesses and nest into a chain."""
    rng = random.Random(seed)
    res = SuiteResult("invariance")
    for _ in range(anchors):
        f, g = random_point_rng(t, rng, magnitude), random_point_rng(t, rng, magnitude)
        for i in range(t.height + 1):
            report = invariance_check(t, i, f, g, samples, rng.randrange(2**32), magnitude)
            res.passed += report.checked - len(report.violations)
            res.failed += len(report.violations)
            res.failures.extend(report.violations[: max(0, 20 - len(res.failures))])
    pts = [random_point_rng(t, rng, 2) for _ in range(samples)]
    for _ in range(samples):
        p, q = rng.choice(pts), rng.choice(pts)
        for i in range(t.height + 1):
            for j in range(i, t.height + 1):
                if level_equiv(t, p, q, i):
                    res.record(level_equiv(t, p, q, j),
                               f"level {i} does not refine level {j} at {p.values}, {q.values}")
    return res


def density_suite(seed, pairs: int = 1000, max_colours: int = 4) -> SuiteResult:
    """``between`` returns strictly intermediate points of every colour."""
    rng = random.Random(seed)
    res = SuiteResult("density")
    from fractions import Fraction

    for _ in range(pairs):
        a = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        b = a + Fraction(rng.randint(1, 20), rng.randint(1, 400))
        n = rng.randint(1, max_colours)
        seen = set()
        for c in range(n):
            x = between(a, b, c, n)
            res.record(a < x < b and col(x, n) == c, f"between({a}, {b}, {c}, {n}) = {x}")
            seen.add(col(x, n))
        res.record(seen == set(range(n)), f"colours missing in ({a}, {b})")
    return res


SUITES = {
    "order": order_suite,
    "transitivity": transitivity_suite,
    "invariance": invariance_suite,
}
