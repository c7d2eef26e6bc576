"""Poset-indexed diagrams of finite dimensional GF(p) vector spaces.

A diagram assigns a dimension to every poset element and a matrix to every
cover edge (mapping up the order).  The rank of a restriction to a
connected subposet I is the rank of the canonical limit-to-colimit map of
the restricted diagram; the limit is cut out by the cover constraints of
the subposet, the colimit is the cokernel of the matching relation matrix.
Inclusion-exclusion over entourages turns ranks into persistence diagram
values, and over zigzag windows into barcodes.

Diagrams indexed by ZZ or Z are carried on finite windows and implicitly
zero outside, so any rank query on an interval that leaves the window
returns 0 (the limit leg through a zero space kills the canonical map).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import exactfield as xf
from .errors import (
    InvalidIntervalError,
    NonMonotoneCriticalValuesError,
    NotConnectedError,
    NotLinearError,
    NotZigzagError,
    ShapeMismatchError,
)
from .exactfield import Matrix
from .poset import Poset, Subposet, ZZInterval, ZZWindow, ZWindow, zz_extend


@dataclass
class Cone:
    """A (co)cone object dimension together with one leg matrix per node."""

    dim: int
    legs: dict  # node label -> Matrix


class VecDiagram:
    """A functor from a finite poset (or index window) to GF(p) vector spaces.

    ``dims`` maps node labels to dimensions, ``maps`` maps cover pairs
    (source label, target label) to matrices of shape dims[target] x
    dims[source].  Missing cover maps default to zero matrices.
    Instances are immutable after construction.
    """

    def __init__(self, poset: Poset, dims, maps, p: int = 2, index: str = "poset",
                 window=None):
        self.poset = poset
        self.index = index
        self.window = window
        self.p = p
        self.dims = tuple(int(dims[e]) for e in poset.elements)
        if any(d < 0 for d in self.dims):
            raise ShapeMismatchError("dimensions must be non-negative")
        self.maps = {}
        by_index = {}
        for (a, b), m in maps.items():
            qi, pi = poset.index[a], poset.index[b]
            by_index[(qi, pi)] = m
        for (qi, pi) in poset.covers:
            m = by_index.pop((qi, pi), None)
            if m is None:
                m = Matrix.zeros(self.dims[pi], self.dims[qi], p)
            if m.p != p:
                raise ShapeMismatchError("cover map modulus differs from diagram field")
            if (m.rows, m.cols) != (self.dims[pi], self.dims[qi]):
                raise ShapeMismatchError(
                    f"map on cover ({poset.elements[qi]!r}, {poset.elements[pi]!r}) "
                    f"has shape {m.rows}x{m.cols}, expected "
                    f"{self.dims[pi]}x{self.dims[qi]}"
                )
            self.maps[(qi, pi)] = m
        if by_index:
            qi, pi = next(iter(by_index))
            raise ShapeMismatchError(
                f"({poset.elements[qi]!r}, {poset.elements[pi]!r}) is not a cover edge"
            )
        self._ranks = {}
        self._composites = {}

    # -- constructors over index windows ------------------------------------

    @classmethod
    def over_zz(cls, window: ZZWindow, dims, maps, p: int = 2) -> "VecDiagram":
        full = {n: dims.get(n, 0) for n in window.nodes()}
        return cls(window.to_poset(), full, maps, p, index="zz", window=window)

    @classmethod
    def over_z(cls, window: ZWindow, dims, maps, p: int = 2) -> "VecDiagram":
        full = {n: dims.get(n, 0) for n in window.nodes()}
        return cls(window.to_poset(), full, maps, p, index="z", window=window)

    def dim_of(self, label) -> int:
        return self.dims[self.poset.index[label]]

    def map_of(self, a, b) -> Matrix:
        return self.maps[(self.poset.index[a], self.poset.index[b])]

    def composite(self, qi: int, pi: int) -> Matrix:
        """Matrix of q <= p, composed along the first cover chain found."""
        if qi == pi:
            return Matrix.identity(self.dims[qi], self.p)
        key = (qi, pi)
        cached = self._composites.get(key)
        if cached is not None:
            return cached
        # walk up covers towards pi, smallest successor first
        for mid in self.poset._up_covers[qi]:
            if self.poset.leq(mid, pi):
                result = xf.matmul(self.composite(mid, pi), self.maps[(qi, mid)])
                self._composites[key] = result
                return result
        raise NotConnectedError("no cover chain between comparable elements")


def validate_functoriality(diagram: VecDiagram) -> list:
    """Return label pairs (s, t) where two cover paths s -> t disagree.

    Empty list means the data is a genuine functor.  Tree-shaped Hasse
    diagrams (all zigzag windows) have no parallel paths and always pass.
    """
    poset = diagram.poset
    n = len(poset)
    violations = []
    for s in range(n):
        composite = {s: Matrix.identity(diagram.dims[s], diagram.p)}
        order = sorted(t for t in range(n) if poset.leq(s, t))
        for t in order:
            if t == s:
                continue
            candidates = []
            for (qi, pi) in poset.covers:
                if pi == t and qi in composite:
                    candidates.append(xf.matmul(diagram.maps[(qi, pi)], composite[qi]))
            if not candidates:
                continue
            first = candidates[0]
            if any(c != first for c in candidates[1:]):
                violations.append((poset.elements[s], poset.elements[t]))
            composite[t] = first
    return violations


# ---------------------------------------------------------------------------
# Limits, colimits, and the canonical LC rank
# ---------------------------------------------------------------------------


def _blocks(diagram, nodes):
    offs = {}
    total = 0
    for s in nodes:
        offs[s] = total
        total += diagram.dims[s]
    return offs, total


def _limit_kernel(diagram, nodes, subcovers):
    """Kernel basis of the stacked cover constraints x_p = phi(q,p) x_q."""
    offs, total = _blocks(diagram, nodes)
    rows = sum(diagram.dims[p] for (_, p) in subcovers)
    c = np.zeros((rows, total), dtype=np.int64)
    r0 = 0
    for (q, p) in subcovers:
        dp = diagram.dims[p]
        phi = diagram.composite(q, p)
        c[r0:r0 + dp, offs[p]:offs[p] + dp] = np.eye(dp, dtype=np.int64)
        c[r0:r0 + dp, offs[q]:offs[q] + diagram.dims[q]] = (-phi.a) % diagram.p
        r0 += dp
    return offs, total, xf.kernel_basis(Matrix(c, diagram.p))


def _colimit_projection(diagram, nodes, subcovers):
    """Cokernel projection of the relation matrix with columns i_q v - i_p phi v."""
    offs, total = _blocks(diagram, nodes)
    cols = sum(diagram.dims[q] for (q, _) in subcovers)
    r = np.zeros((total, cols), dtype=np.int64)
    c0 = 0
    for (q, p) in subcovers:
        dq = diagram.dims[q]
        phi = diagram.composite(q, p)
        r[offs[q]:offs[q] + dq, c0:c0 + dq] = np.eye(dq, dtype=np.int64)
        r[offs[p]:offs[p] + diagram.dims[p], c0:c0 + dq] = (-phi.a) % diagram.p
        c0 += dq
    q_matrix, _ = xf.cokernel_projection(Matrix(r, diagram.p))
    return offs, total, q_matrix


def _subset_context(diagram, sub: Subposet):
    if not diagram.poset.is_connected(sub):
        raise NotConnectedError("restriction target must be a connected subposet")
    nodes = sorted(sub)
    subcovers = diagram.poset.subposet_covers(sub)
    return nodes, subcovers


def limit(diagram: VecDiagram, sub: Subposet) -> Cone:
    """Limit of the restriction to ``sub``: dimension and projection legs."""
    nodes, subcovers = _subset_context(diagram, sub)
    offs, _, k = _limit_kernel(diagram, nodes, subcovers)
    legs = {}
    for s in nodes:
        block = k.a[offs[s]:offs[s] + diagram.dims[s], :]
        legs[diagram.poset.elements[s]] = Matrix(block, diagram.p)
    return Cone(k.cols, legs)


def colimit(diagram: VecDiagram, sub: Subposet) -> Cone:
    """Colimit of the restriction to ``sub``: dimension and injection legs."""
    nodes, subcovers = _subset_context(diagram, sub)
    offs, _, q_matrix = _colimit_projection(diagram, nodes, subcovers)
    legs = {}
    for s in nodes:
        block = q_matrix.a[:, offs[s]:offs[s] + diagram.dims[s]]
        legs[diagram.poset.elements[s]] = Matrix(block, diagram.p)
    return Cone(q_matrix.rows, legs)


def lc_rank(diagram: VecDiagram, sub: Subposet) -> int:
    """Rank of the canonical limit-to-colimit map of the restriction.

    Anchored at the smallest node of the subposet; by the canonical-map
    property the anchor choice does not matter.
    """
    sub = frozenset(sub)
    cached = diagram._ranks.get(sub)
    if cached is not None:
        return cached
    nodes, subcovers = _subset_context(diagram, sub)
    if any(diagram.dims[s] == 0 for s in nodes):
        # the canonical map factors through a zero space
        diagram._ranks[sub] = 0
        return 0
    anchor = nodes[0]
    offs, _, k = _limit_kernel(diagram, nodes, subcovers)
    _, _, q_matrix = _colimit_projection(diagram, nodes, subcovers)
    pi = Matrix(k.a[offs[anchor]:offs[anchor] + diagram.dims[anchor], :], diagram.p)
    inj = Matrix(q_matrix.a[:, offs[anchor]:offs[anchor] + diagram.dims[anchor]], diagram.p)
    value = xf.rank(xf.matmul(inj, pi))
    diagram._ranks[sub] = value
    return value


# ---------------------------------------------------------------------------
# Interval bookkeeping per index kind
# ---------------------------------------------------------------------------


def _require(diagram, kind):
    if diagram.index != kind:
        raise {"zz": NotZigzagError, "z": NotLinearError}.get(kind, ShapeMismatchError)(
            f"operation requires a {kind!r}-indexed diagram, got {diagram.index!r}"
        )


def rank_at(diagram: VecDiagram, interval) -> int:
    """Rank at an interval/subposet, with the zero convention off-window.

    Accepts a ZZInterval (zz index), an (a, b) pair (z index) or an
    iterable of element labels (poset index).  None, or an interval not
    contained in the window, yields 0.
    """
    if interval is None:
        return 0
    if diagram.index == "zz":
        if not isinstance(interval, ZZInterval):
            raise InvalidIntervalError("zz-indexed diagrams take ZZInterval queries")
        if not diagram.window.contains(interval):
            return 0
        return lc_rank(diagram, diagram.window.node_subset(interval))
    if diagram.index == "z":
        a, b = interval
        if not diagram.window.contains((a, b)):
            return 0
        return lc_rank(diagram, diagram.window.node_subset((a, b)))
    return lc_rank(diagram, diagram.poset.indices_of(interval))


def _interval_carrier(diagram, size_cap=None):
    """Canonical query keys and their node subsets for this diagram."""
    if diagram.index == "zz":
        return [(iv, diagram.window.node_subset(iv)) for iv in diagram.window.intervals()]
    if diagram.index == "z":
        return [(iv, diagram.window.node_subset(iv)) for iv in diagram.window.intervals()]
    cap = size_cap if size_cap is not None else len(diagram.poset)
    out = []
    for sub in diagram.poset.connected_subposets(cap):
        out.append((diagram.poset.labels_of(sub), sub))
    return out


def rank_invariant(diagram: VecDiagram, carrier=None, size_cap=None) -> dict:
    """Pointwise LC rank over a carrier of connected subposets.

    Default carrier: every interval of the window (zz/z), or every
    connected subposet up to ``size_cap`` (poset index).  An explicit
    carrier is any iterable of query keys accepted by :func:`rank_at`.
    """
    if carrier is not None:
        return {key: rank_at(diagram, key) for key in carrier}
    out = {}
    for key, sub in _interval_carrier(diagram, size_cap):
        out[key] = lc_rank(diagram, sub)
    return out


def _zz_four_term(rank_fn, iv: ZZInterval, window) -> int:
    return (
        rank_fn(iv)
        - rank_fn(zz_extend(iv, "minus", window))
        - rank_fn(zz_extend(iv, "plus", window))
        + rank_fn(zz_extend(iv, "both", window))
    )


def _z_four_term(rank_fn, iv) -> int:
    a, b = iv
    return rank_fn((a, b)) - rank_fn((a - 1, b)) - rank_fn((a, b + 1)) + rank_fn((a - 1, b + 1))


def persistence_diagram_at(diagram: VecDiagram, interval) -> int:
    """Alternating entourage sum at one query point.

    Over windows this is the four-term inclusion-exclusion with the
    off-window terms set to 0; over a plain poset it sums rk over the
    n-th entourages of the subposet with alternating signs.
    """
    if diagram.index == "zz":
        return _zz_four_term(lambda iv: rank_at(diagram, iv), interval, diagram.window)
    if diagram.index == "z":
        return _z_four_term(lambda iv: rank_at(diagram, iv), interval)
    sub = diagram.poset.indices_of(interval)
    value = lc_rank(diagram, sub)
    nbd = diagram.poset.neighborhood(sub)
    for n in range(1, len(nbd) + 1):
        sign = -1 if n % 2 else 1
        value += sign * sum(lc_rank(diagram, j) for j in diagram.poset.entourage(sub, n))
    return value


def persistence_diagram_via_mobius(diagram: VecDiagram, interval) -> int:
    """Moebius-inversion form: sum of rk(J) * mu(J, I) over connected J >= I.

    Cross-checks :func:`persistence_diagram_at`; the two agree because the
    alternating entourage sum is the Moebius inversion of the rank
    invariant over Con^op of the carrier.
    """
    poset = diagram.poset
    if diagram.index in ("zz", "z"):
        sub = diagram.window.node_subset(interval)
    else:
        sub = poset.indices_of(interval)
    total = 0
    for j in poset.connected_supersets(sub):
        mu = poset.mobius_conop(j, sub)
        if mu:
            total += lc_rank(diagram, j) * mu
    return total


def persistence_diagram(diagram: VecDiagram, size_cap=None) -> dict:
    """Batch persistence diagram over the default carrier."""
    out = {}
    for key, _ in _interval_carrier(diagram, size_cap):
        out[key] = persistence_diagram_at(diagram, key)
    return out


def zigzag_barcode(diagram: VecDiagram) -> Counter:
    """Barcode of a zigzag-window diagram by four-term inclusion-exclusion.

    Emits only intervals with positive multiplicity.  This is the shipped
    extraction path; no matrix-reduction zigzag algorithm is involved.
    """
    _require(diagram, "zz")
    bars = Counter()
    for iv in diagram.window.intervals():
        mult = persistence_diagram_at(diagram, iv)
        if mult > 0:
            bars[iv] = mult
    return bars


def z_barcode(diagram: VecDiagram) -> Counter:
    """Barcode of a Z-window diagram via the padded four-term formula."""
    _require(diagram, "z")
    bars = Counter()
    for iv in diagram.window.intervals():
        mult = persistence_diagram_at(diagram, iv)
        if mult > 0:
            bars[iv] = mult
    return bars


def barcode(diagram: VecDiagram) -> Counter:
    if diagram.index == "zz":
        return zigzag_barcode(diagram)
    if diagram.index == "z":
        return z_barcode(diagram)
    raise NotZigzagError("barcodes are computed over zz or z windows only")


# ---------------------------------------------------------------------------
# Building diagrams from barcodes
# ---------------------------------------------------------------------------


def _bar_members(carrier, bar):
    if isinstance(carrier, ZZWindow):
        if not isinstance(bar, ZZInterval) or not carrier.contains(bar):
            raise InvalidIntervalError(f"bar {bar} does not fit the window")
        return bar.nodes()
    if isinstance(carrier, ZWindow):
        if not carrier.contains(bar):
            raise InvalidIntervalError(f"bar {bar} does not fit the window")
        a, b = bar
        return frozenset(range(a, b + 1))
    sub = carrier.indices_of(bar)
    if not carrier.is_interval(sub):
        raise InvalidIntervalError(f"bar {tuple(bar)} is not an interval of the poset")
    return frozenset(carrier.elements[i] for i in sub)


def synthesize_from_barcode(carrier, bars, p: int = 2) -> VecDiagram:
    """Direct sum of interval modules, one summand per bar (with multiplicity).

    Node dimension = number of bars containing the node; each cover map is
    the 0/1 block matrix that is the identity between copies of the same
    bar and zero elsewhere.
    """
    instances = []
    for bar, mult in bars.items():
        if mult < 0:
            raise InvalidIntervalError("bar multiplicities must be non-negative")
        members = _bar_members(carrier, bar)
        instances.extend([members] * mult)
    if isinstance(carrier, (ZZWindow, ZWindow)):
        poset = carrier.to_poset()
        nodes = poset.elements
    else:
        poset = carrier
        nodes = poset.elements
    node_bars = {node: [i for i, m in enumerate(instances) if node in m] for node in nodes}
    dims = {node: len(node_bars[node]) for node in nodes}
    maps = {}
    for (qi, pi) in poset.covers:
        q, t = poset.elements[qi], poset.elements[pi]
        rows, cols = node_bars[t], node_bars[q]
        m = np.zeros((len(rows), len(cols)), dtype=np.int64)
        row_of = {b: r for r, b in enumerate(rows)}
        for c, b in enumerate(cols):
            if b in row_of:
                m[row_of[b], c] = 1
        maps[(q, t)] = Matrix(m, p)
    if isinstance(carrier, ZZWindow):
        return VecDiagram.over_zz(carrier, dims, maps, p)
    if isinstance(carrier, ZWindow):
        return VecDiagram.over_z(carrier, dims, maps, p)
    return VecDiagram(poset, dims, maps, p)


# ---------------------------------------------------------------------------
# Derived invariants
# ---------------------------------------------------------------------------


def decomposability_obstruction(diagram: VecDiagram, size_cap=None):
    """First witness that the diagram is not interval decomposable, if any.

    Scans the canonical carrier; returns (key, dgm value) for the first
    query point that is either a non-interval connected subposet with
    non-zero diagram value, or any point with negative value.  None is
    inconclusive: interval-indecomposable diagrams can pass this test.
    """
    for key, sub in _interval_carrier(diagram, size_cap):
        value = persistence_diagram_at(diagram, key)
        if value < 0:
            return key, value
        if diagram.index == "poset" and value != 0 and not diagram.poset.is_interval(sub):
            return key, value
    return None


def standard_rank_invariant(diagram: VecDiagram) -> dict:
    """Classical rank invariant (a, b) -> rank phi(a <= b) of a Z-window diagram."""
    _require(diagram, "z")
    poset = diagram.poset
    out = {}
    for (a, b) in diagram.window.intervals():
        out[(a, b)] = xf.rank(diagram.composite(poset.index[a], poset.index[b]))
    return out


def pairwise_image_rank(diagram: VecDiagram, include_reflexive: bool = False) -> dict:
    """Rank of phi(a <= b) over comparable pairs (strict by default).

    The strict version is the classical pairwise invariant; it can agree
    on diagrams whose zigzag barcodes differ.  Reflexive pairs (a, a),
    whose rank is the node dimension, are included only on request.
    """
    poset = diagram.poset
    out = {}
    n = len(poset)
    for qi in range(n):
        for pi in range(n):
            if qi == pi and not include_reflexive:
                continue
            if poset.leq(qi, pi):
                key = (poset.elements[qi], poset.elements[pi])
                out[key] = xf.rank(diagram.composite(qi, pi))
    return out


# ---------------------------------------------------------------------------
# Re-indexing
# ---------------------------------------------------------------------------


def reindex_R_to_Z(critical_values, dims, maps, p: int = 2) -> VecDiagram:
    """Discretize a constructible R-indexed module onto the Z window [1, n].

    ``critical_values`` must be strictly increasing; ``dims[i]`` is the
    dimension at the i-th critical value and ``maps[i]`` the matrix from
    the i-th to the (i+1)-th.  A bar [s_i, s_j) of the original module
    corresponds to the window bar [i, j-1].
    """
    s = list(critical_values)
    if any(not a < b for a, b in zip(s, s[1:])):
        raise NonMonotoneCriticalValuesError("critical values must be strictly increasing")
    if len(dims) != len(s) or len(maps) != max(len(s) - 1, 0):
        raise ShapeMismatchError("need one space per critical value and one map per gap")
    window = ZWindow(1, len(s))
    dmap = {i + 1: dims[i] for i in range(len(s))}
    mmap = {(i + 1, i + 2): maps[i] for i in range(len(maps))}
    return VecDiagram.over_z(window, dmap, mmap, p)


def reindex_Z_to_ZZ(diagram: VecDiagram) -> VecDiagram:
    """Duplicate a Z-window diagram onto a zigzag window.

    Each edge node carries a copy of the space below it, with an identity
    leg down and the original map up; a bar [a, b] becomes [a, b+1).  The
    target window gains one extra vertex (of dimension 0) on the right so
    the shifted bars still fit.
    """
    _require(diagram, "z")
    lo, hi = diagram.window.lo, diagram.window.hi
    out_window = ZZWindow(lo, hi + 1)
    dims = {}
    maps = {}
    for i in range(lo, hi + 1):
        dims[("v", i)] = diagram.dim_of(i)
    dims[("v", hi + 1)] = 0
    for i in range(lo + 1, hi + 2):
        d = diagram.dim_of(i - 1)
        dims[("e", i)] = d
        maps[(("e", i), ("v", i - 1))] = Matrix.identity(d, diagram.p)
        if i <= hi:
            maps[(("e", i), ("v", i))] = diagram.map_of(i - 1, i)
        else:
            maps[(("e", i), ("v", i))] = Matrix.zeros(0, d, diagram.p)
    return VecDiagram.over_zz(out_window, dims, maps, diagram.p)
