"""Bottleneck distance between barcodes and persistence diagrams.

Intervals <b,d> are identified with points (b, d) in the extended upper
half-plane, keeping their decoration as an optional tag.  An epsilon
matching is a partial injection moving matched points at most epsilon in
the sup-norm and deleting only points of persistence at most 2*epsilon;
its existence is decided by maximum bipartite matching after the usual
diagonal augmentation.  All arithmetic is exact: costs are rationals (or
infinity), and the infimum is found by bisecting the finite candidate
cost set, so the returned value is attained, never approximated.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import MissingDecorationError, SignedDiagramError
from .poset import ZZInterval

INF = math.inf

DECORATIONS = ("o", "co", "oc", "c")


def _as_coord(x):
    if x in (INF, -INF):
        return x
    return Fraction(x)


def make_point(birth, death, tag=None):
    b, d = _as_coord(birth), _as_coord(death)
    if not (b == d or b < d):
        raise SignedDiagramError(f"need birth <= death, got ({birth}, {death})")
    return (b, d, tag)


def intervals_to_points(bars) -> list:
    """Flatten a barcode / diagram mapping into a decorated point multiset.

    Keys may be ZZIntervals (decoration kept as tag) or (a, b) pairs
    (tagged closed).  Zero entries are skipped; negative entries have no
    matching semantics and are rejected.
    """
    points = []
    for key, mult in bars.items():
        if mult == 0:
            continue
        if mult < 0:
            raise SignedDiagramError(
                f"diagram entry {key} has negative multiplicity {mult}"
            )
        if isinstance(key, ZZInterval):
            pt = make_point(key.b, key.d, key.decoration)
        else:
            a, b = key
            pt = make_point(a, b, "c")
        points.extend([pt] * mult)
    return points


def _coord_dist(x, y):
    if x == y:
        return Fraction(0)
    return abs(x - y)


def _linf(u, v):
    return max(_coord_dist(u[0], v[0]), _coord_dist(u[1], v[1]))


def _deletion_eps(u):
    """Smallest epsilon allowing u to stay unmatched: (death - birth) / 2."""
    return _coord_dist(u[0], u[1]) / 2


def _max_bipartite_matching(n_left, n_right, adj):
    """Kuhn's augmenting-path matching; adj[i] lists right neighbors of i."""
    match_right = [-1] * n_right

    def try_augment(i, seen):
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if match_right[j] == -1 or try_augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    size = 0
    for i in range(n_left):
        if try_augment(i, set()):
            size += 1
    return size


def epsilon_matching_exists(xs, ys, eps) -> bool:
    """Whether a partial injection within cost ``eps`` exists.

    Left side = X points plus one diagonal proxy per Y point; right side
    = Y points plus one diagonal proxy per X point.  A perfect matching
    of the augmented graph is exactly an epsilon matching.
    """
    nx, ny = len(xs), len(ys)
    n = nx + ny
    adj = [[] for _ in range(n)]
    for i, u in enumerate(xs):
        for j, v in enumerate(ys):
            if _linf(u, v) <= eps:
                adj[i].append(j)
        if _deletion_eps(u) <= eps:
            adj[i].append(ny + i)
    for j in range(ny):
        left = nx + j
        if _deletion_eps(ys[j]) <= eps:
            adj[left].append(j)
        for i in range(nx):
            adj[left].append(ny + i)
    return _max_bipartite_matching(n, n, adj) == n


def bottleneck(xs, ys):
    """Exact bottleneck distance between two point multisets.

    Returns a Fraction, or infinity when some essential point cannot be
    matched at any finite cost.
    """
    xs, ys = list(xs), list(ys)
    if not xs and not ys:
        return Fraction(0)
    candidates = {Fraction(0)}
    for u in xs:
        for v in ys:
            c = _linf(u, v)
            if c != INF:
                candidates.add(c)
    for u in xs + ys:
        c = _deletion_eps(u)
        if c != INF:
            candidates.add(c)
    ordered = sorted(candidates)
    if not epsilon_matching_exists(xs, ys, ordered[-1]):
        return INF
    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if epsilon_matching_exists(xs, ys, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    return ordered[lo]


def bottleneck_per_decoration(xs, ys):
    """Per-decoration bottleneck distances and their maximum.

    Every point must carry a decoration tag; points of different
    decorations are never matched to each other.
    """
    for u in list(xs) + list(ys):
        if u[2] not in DECORATIONS:
            raise MissingDecorationError(f"point {u} lacks a decoration tag")
    per = {}
    for tag in DECORATIONS:
        per[tag] = bottleneck(
            [u for u in xs if u[2] == tag], [v for v in ys if v[2] == tag]
        )
    overall = max(per.values())
    return per, overall
