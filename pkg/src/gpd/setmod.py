"""Zigzag- and Z-indexed diagrams of finite sets: Reeb graphs and merge trees.

A zigzag window diagram of sets is exactly the combinatorial data of a
Reeb graph: vertex elements live over integer heights, edge elements over
unit intervals, and each edge element is attached to one vertex on each
side.  Colimits of interval restrictions are connected components and are
computed by union-find; limits are never materialized.  A class is "full"
when its support covers the whole restriction interval, and it "has a
section" when one element per node can be chosen compatibly, decided by a
single feasibility sweep along the window.  The number of full classes
with a section is the set-valued rank of the restriction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import vecmod
from .errors import (
    DanglingEdgeError,
    EmptyDiagramError,
    InputFormatError,
    InvalidIntervalError,
    NotLinearError,
    NotZigzagError,
)
from .exactfield import Matrix
from .poset import ZZInterval, ZZWindow, ZWindow, zz_extend
from .vecmod import VecDiagram


class SetDiagram:
    """A functor from a zigzag or linear window to finite sets.

    ``sets`` maps window nodes to element label sequences; ``maps`` sends
    each cover pair (source node, target node) to a {source: target}
    assignment.  Every map must be total into the target node's set.
    """

    def __init__(self, window, sets, maps):
        if not isinstance(window, (ZZWindow, ZWindow)):
            raise InputFormatError("set diagrams are indexed by zz or z windows")
        self.window = window
        self.index = "zz" if isinstance(window, ZZWindow) else "z"
        self.sets = {}
        for node in window.nodes():
            elems = tuple(sets.get(node, ()))
            if len(set(elems)) != len(elems):
                raise InputFormatError(f"duplicate element labels at node {node!r}")
            self.sets[node] = elems
        self.maps = {}
        for (src, dst) in window.covers():
            table = dict(maps.get((src, dst), {}))
            source = self.sets[src]
            target = set(self.sets[dst])
            for x in source:
                if x not in table:
                    raise InputFormatError(f"map {src!r}->{dst!r} is not total: {x!r} unmapped")
                if table[x] not in target:
                    raise InputFormatError(
                        f"map {src!r}->{dst!r} sends {x!r} outside the target node"
                    )
            extra = set(table) - set(source)
            if extra:
                raise InputFormatError(f"map {src!r}->{dst!r} mentions unknown {extra}")
            self.maps[(src, dst)] = table
        self._full_cache = {}
        self._rank_cache = {}

    def is_empty(self) -> bool:
        return all(len(v) == 0 for v in self.sets.values())

    def _interval_nodes(self, interval):
        if self.index == "zz":
            if not isinstance(interval, ZZInterval):
                raise InvalidIntervalError("zz-indexed diagrams take ZZInterval queries")
            if not self.window.contains(interval):
                return None
            key = lambda n: 2 * n[1] if n[0] == "v" else 2 * n[1] - 1
            return sorted(interval.nodes(), key=key)
        a, b = interval
        if not self.window.contains((a, b)):
            return None
        return list(range(a, b + 1))

    def intervals(self):
        return self.window.intervals()

    def full_interval(self):
        if self.index == "zz":
            return ZZInterval(self.window.lo, self.window.hi)
        return (self.window.lo, self.window.hi)


@dataclass
class ComponentTable:
    """Colimit classes of a restriction, with supports and membership."""

    nodes: list
    classes: list        # list of lists of (node, label)
    supports: list       # frozenset of nodes per class
    class_of: dict       # (node, label) -> class id

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def members(self, cid: int, node):
        return [x for (n, x) in self.classes[cid] if n == node]


def colimit_components(diagram: SetDiagram, interval) -> ComponentTable:
    """Union-find colimit of the restriction to ``interval``."""
    nodes = diagram._interval_nodes(interval)
    if nodes is None:
        nodes = []
    items = [(n, x) for n in nodes for x in diagram.sets[n]]
    parent = {it: it for it in items}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    node_set = set(nodes)
    for (src, dst), table in diagram.maps.items():
        if src in node_set and dst in node_set:
            for x, y in table.items():
                rx, ry = find((src, x)), find((dst, y))
                if rx != ry:
                    parent[rx] = ry
    grouped = {}
    for it in items:
        grouped.setdefault(find(it), []).append(it)
    classes = sorted(grouped.values(), key=lambda cls: min(cls))
    class_of = {}
    supports = []
    for cid, cls in enumerate(classes):
        for it in cls:
            class_of[it] = cid
        supports.append(frozenset(n for (n, _) in cls))
    return ComponentTable(nodes, classes, supports, class_of)


def count_full(diagram: SetDiagram, interval) -> int:
    """Number of colimit classes supported on the whole interval."""
    if interval is None:
        return 0
    cached = diagram._full_cache.get(interval)
    if cached is not None:
        return cached
    nodes = diagram._interval_nodes(interval)
    if nodes is None or any(len(diagram.sets[n]) == 0 for n in nodes):
        value = 0
    else:
        table = colimit_components(diagram, interval)
        all_nodes = frozenset(nodes)
        value = sum(1 for supp in table.supports if supp == all_nodes)
    diagram._full_cache[interval] = value
    return value


def _edge_nodes(nodes):
    return [n for n in nodes if isinstance(n, tuple) and n[0] == "e"]


def _class_has_section(diagram: SetDiagram, nodes, table: ComponentTable, cid: int) -> bool:
    """Feasibility sweep: can one element per node be chosen inside the class?

    Over a zigzag each edge element pins both adjacent vertices, so it is
    enough to thread compatible edge choices left to right; over a chain
    the leftmost node determines everything.
    """
    if diagram.index == "z":
        return bool(table.members(cid, nodes[0]))
    edges = _edge_nodes(nodes)
    if not edges:
        return bool(table.members(cid, nodes[0]))
    feasible = set(table.members(cid, edges[0]))
    for prev, cur in zip(edges, edges[1:]):
        shared = ("v", prev[1])  # vertex between consecutive edge nodes
        tops = {diagram.maps[(prev, shared)][f] for f in feasible}
        feasible = {
            f for f in table.members(cid, cur)
            if diagram.maps[(cur, shared)][f] in tops
        }
        if not feasible:
            return False
    return bool(feasible)


def has_section(diagram: SetDiagram, interval, class_id: int,
                table: ComponentTable = None) -> bool:
    nodes = diagram._interval_nodes(interval)
    if nodes is None:
        return False
    if table is None:
        table = colimit_components(diagram, interval)
    return _class_has_section(diagram, nodes, table, class_id)


def set_lc_rank(diagram: SetDiagram, interval) -> int:
    """Number of full classes admitting a section = |im| of the LC map."""
    if interval is None:
        return 0
    cached = diagram._rank_cache.get(interval)
    if cached is not None:
        return cached
    nodes = diagram._interval_nodes(interval)
    if nodes is None or any(len(diagram.sets[n]) == 0 for n in nodes):
        value = 0
    else:
        table = colimit_components(diagram, interval)
        all_nodes = frozenset(nodes)
        value = 0
        for cid in range(table.n_classes):
            if table.supports[cid] == all_nodes and _class_has_section(
                diagram, nodes, table, cid
            ):
                value += 1
    diagram._rank_cache[interval] = value
    return value


def set_rank_invariant(diagram: SetDiagram) -> dict:
    return {iv: set_lc_rank(diagram, iv) for iv in diagram.intervals()}


def set_persistence_diagram_at(diagram: SetDiagram, interval) -> int:
    """Four-term inclusion-exclusion on the set rank, zero off-window."""
    if diagram.index == "zz":
        return (
            set_lc_rank(diagram, interval)
            - set_lc_rank(diagram, zz_extend(interval, "minus", diagram.window))
            - set_lc_rank(diagram, zz_extend(interval, "plus", diagram.window))
            + set_lc_rank(diagram, zz_extend(interval, "both", diagram.window))
        )
    a, b = interval

    def rk(iv):
        return set_lc_rank(diagram, iv) if diagram.window.contains(iv) else 0

    return rk((a, b)) - rk((a - 1, b)) - rk((a, b + 1)) + rk((a - 1, b + 1))


def set_persistence_diagram(diagram: SetDiagram) -> dict:
    return {iv: set_persistence_diagram_at(diagram, iv) for iv in diagram.intervals()}


def linearize(diagram: SetDiagram, p: int = 2) -> VecDiagram:
    """Free functor: spans each node set, sends maps to 0/1 matrices."""
    dims = {n: len(elems) for n, elems in diagram.sets.items()}
    index_of = {n: {x: i for i, x in enumerate(elems)} for n, elems in diagram.sets.items()}
    maps = {}
    for (src, dst), table in diagram.maps.items():
        m = np.zeros((dims[dst], dims[src]), dtype=np.int64)
        for x, y in table.items():
            m[index_of[dst][y], index_of[src][x]] = 1
        maps[(src, dst)] = Matrix(m, p)
    if diagram.index == "zz":
        return VecDiagram.over_zz(diagram.window, dims, maps, p)
    return VecDiagram.over_z(diagram.window, dims, maps, p)


def levelset_barcode(diagram: SetDiagram) -> Counter:
    """0-th level set barcode, computed purely from full-component counts.

    Multiplicity of each interval is the four-term alternating sum of the
    full function; by full-is-rank this equals the zigzag barcode of the
    linearized diagram, without touching any matrix.
    """
    if diagram.index != "zz":
        raise NotZigzagError("level set barcodes are defined over zigzag windows")
    bars = Counter()
    for iv in diagram.intervals():
        mult = (
            count_full(diagram, iv)
            - count_full(diagram, zz_extend(iv, "minus", diagram.window))
            - count_full(diagram, zz_extend(iv, "plus", diagram.window))
            + count_full(diagram, zz_extend(iv, "both", diagram.window))
        )
        if mult > 0:
            bars[iv] = mult
    return bars


def is_untwisted(diagram: SetDiagram):
    """Whether the set rank equals the linearized rank on every interval.

    Returns (flag, witness): the witness is the first interval, in
    canonical order, where a full component lacks a section.
    """
    if diagram.index != "zz":
        raise NotZigzagError("untwistedness is defined for zigzag-window diagrams")
    lin = linearize(diagram)
    for iv in diagram.intervals():
        if set_lc_rank(diagram, iv) != vecmod.rank_at(lin, iv):
            return False, iv
    return True, None


def decompose(diagram: SetDiagram) -> list:
    """Split into indecomposable summands (path components of the Reeb graph).

    One summand per colimit class over the full window; each summand's
    colimit is a singleton, and their disjoint union is the input.
    """
    if diagram.is_empty():
        raise EmptyDiagramError("cannot decompose the empty diagram")
    table = colimit_components(diagram, diagram.full_interval())
    out = []
    for cid in range(table.n_classes):
        member = set(table.classes[cid])
        sets = {
            n: tuple(x for x in elems if (n, x) in member)
            for n, elems in diagram.sets.items()
        }
        maps = {
            cover: {x: y for x, y in table_.items() if (cover[0], x) in member}
            for cover, table_ in diagram.maps.items()
        }
        out.append(SetDiagram(diagram.window, sets, maps))
    return out


def merge_tree_rank(diagram: SetDiagram) -> dict:
    """Rank invariant of a Z-window diagram: image size of each composite."""
    if diagram.index != "z":
        raise NotLinearError("merge tree ranks are defined for z-window diagrams")
    out = {}
    for (a, b) in diagram.intervals():
        current = set(diagram.sets[a])
        for i in range(a, b):
            step = diagram.maps[(i, i + 1)]
            current = {step[x] for x in current}
        out[(a, b)] = len(current)
    return out


def reeb_dot(diagram: SetDiagram) -> str:
    """Deterministic DOT rendering of the Reeb graph realization.

    One graph node per vertex element (labeled with its height), one
    undirected edge per edge element joining its two attached vertices.
    Isolated vertices are emitted.
    """
    if diagram.index != "zz":
        raise NotZigzagError("DOT output is defined for zigzag-window diagrams")

    def vid(i, label):
        return f'"v{i}:{label}"'

    lines = ["graph reeb {"]
    for i in range(diagram.window.lo, diagram.window.hi + 1):
        for label in diagram.sets[("v", i)]:
            lines.append(f'  {vid(i, label)} [label="{label} (h={i})"];')
    for i in range(diagram.window.lo + 1, diagram.window.hi + 1):
        node = ("e", i)
        down = diagram.maps.get((node, ("v", i - 1)))
        up = diagram.maps.get((node, ("v", i)))
        for label in diagram.sets[node]:
            if down is None or up is None or label not in down or label not in up:
                raise DanglingEdgeError(f"edge element {label!r} at {node!r} lacks an endpoint")
            lines.append(
                f'  {vid(i - 1, down[label])} -- {vid(i, up[label])} [label="{label}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
