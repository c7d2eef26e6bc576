"""Finite posets, Hasse diagrams, connected subposets, and zigzag intervals.

A poset is stored as a list of element labels together with its cover
relation (the transitive reduction of the order).  Subposets are handled
as frozensets of element indices.  The central notion is ``Con(P)``: the
collection of subsets whose induced subgraph of the Hasse diagram is
connected.  On ``Con(P)`` ordered by reverse inclusion we compute the
Moebius function recursively, which is what turns rank invariants into
persistence diagrams downstream.

The zigzag index poset ZZ = {(i,j) : j = i or j = i-1} is handled through
finite windows.  A window [lo, hi] materializes the nodes

    ("v", lo), ("e", lo+1), ("v", lo+1), ..., ("e", hi), ("v", hi)

where ("v", i) is the vertex at height i and ("e", i) is the edge node
spanning heights [i-1, i]; each edge node is covered by its two adjacent
vertex nodes.  Intervals of ZZ are written <b,d> with a decoration on each
side: closed ends include the boundary vertex, open ends stop at the
hanging edge node.  A diagram on a window is implicitly zero/empty outside
it, so any rank query on an interval that leaves the window is 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import (
    CycleDetectedError,
    EmptySubsetError,
    InvalidIntervalError,
    NotConnectedError,
    NotNestedError,
    UnknownElementError,
)

Subposet = frozenset  # of element indices into a Poset

CLOSED = "closed"
OPEN = "open"


class Poset:
    """Immutable finite poset given by elements and a valid cover relation.

    Do not call directly with unreduced relations; use :func:`build_poset`,
    which closes, checks for cycles, and transitively reduces the input.
    """

    def __init__(self, elements, covers):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise UnknownElementError("duplicate element labels")
        self.covers = frozenset(covers)  # (i, j): elements[j] covers elements[i]
        n = len(self.elements)
        self._leq = [[False] * n for _ in range(n)]
        for i in range(n):
            self._leq[i][i] = True
        for (i, j) in self.covers:
            self._leq[i][j] = True
        # transitive closure of the cover relation
        for k in range(n):
            lk = self._leq[k]
            for i in range(n):
                if self._leq[i][k]:
                    li = self._leq[i]
                    for j in range(n):
                        if lk[j]:
                            li[j] = True
        self._adj = [set() for _ in range(n)]
        for (i, j) in self.covers:
            self._adj[i].add(j)
            self._adj[j].add(i)
        self._up_covers = [sorted(j for (i, j) in self.covers if i == s) for s in range(n)]
        self._mobius_memo = {}

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and self.elements == other.elements
            and self.covers == other.covers
        )

    def __hash__(self):
        return hash((self.elements, self.covers))

    def __repr__(self):
        return f"Poset({list(self.elements)!r}, covers={sorted(self.covers)})"

    # -- basic order queries ------------------------------------------------

    def leq(self, i, j):
        return self._leq[i][j]

    def indices_of(self, labels) -> Subposet:
        try:
            return frozenset(self.index[x] for x in labels)
        except KeyError as exc:
            raise UnknownElementError(f"unknown element {exc.args[0]!r}") from None

    def labels_of(self, sub: Subposet):
        return tuple(self.elements[i] for i in sorted(sub))

    def _check_subset(self, sub):
        if not sub:
            raise EmptySubsetError("subposet must be non-empty")
        if not all(0 <= i < len(self.elements) for i in sub):
            raise UnknownElementError("index out of range")

    # -- connectivity, intervals, neighborhoods -----------------------------

    def is_connected(self, sub: Subposet) -> bool:
        """Whether the induced subgraph of Hasse(P) on ``sub`` is connected."""
        self._check_subset(sub)
        sub = frozenset(sub)
        start = next(iter(sub))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self._adj[x]:
                if y in sub and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(sub)

    def is_interval(self, sub: Subposet) -> bool:
        """Convex and comparability-connected, i.e. an interval of the poset."""
        self._check_subset(sub)
        sub = frozenset(sub)
        n = len(self.elements)
        # convexity: r <= s <= t with r,t inside forces s inside
        for r in sub:
            for t in sub:
                if not self._leq[r][t]:
                    continue
                for s in range(n):
                    if s not in sub and self._leq[r][s] and self._leq[s][t]:
                        return False
        # connectivity through comparable pairs within the subset
        start = next(iter(sub))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in sub:
                if y not in seen and (self._leq[x][y] or self._leq[y][x]):
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(sub)

    def neighborhood(self, sub: Subposet) -> Subposet:
        """Points outside ``sub`` that are Hasse-adjacent to it."""
        if not self.is_connected(sub):
            raise NotConnectedError("neighborhood requires a connected subposet")
        out = set()
        for x in sub:
            out.update(y for y in self._adj[x] if y not in sub)
        return frozenset(out)

    def perimeter(self, sub: Subposet) -> int:
        return len(self.neighborhood(sub))

    def entourage(self, sub: Subposet, n: int) -> list:
        """All supersets of ``sub`` obtained by adjoining exactly n neighbors.

        Empty for n > perimeter.  Every returned set is again connected,
        since each added point is Hasse-adjacent to the original set.
        """
        if n < 1:
            raise ValueError("entourage order must be positive")
        nbd = sorted(self.neighborhood(sub))
        if n > len(nbd):
            return []
        return [frozenset(sub) | frozenset(extra) for extra in itertools.combinations(nbd, n)]

    def connected_subposets(self, size_cap: int) -> Iterator[Subposet]:
        """All members of Con(P) of size <= size_cap.

        Yields each exactly once, ordered lexicographically on the sorted
        index tuples, so repeated runs and CLI output are reproducible.
        """
        if size_cap < 1:
            raise ValueError("size_cap must be >= 1")
        found = set()
        frontier = [frozenset([i]) for i in range(len(self.elements))]
        found.update(frontier)
        while frontier:
            nxt = []
            for sub in frontier:
                if len(sub) >= size_cap:
                    continue
                for x in sub:
                    for y in self._adj[x]:
                        if y not in sub:
                            grown = sub | {y}
                            if grown not in found:
                                found.add(grown)
                                nxt.append(grown)
            frontier = nxt
        for sub in sorted(found, key=lambda s: tuple(sorted(s))):
            yield sub

    def connected_supersets(self, sub: Subposet) -> list:
        """All J in Con(P) with J containing ``sub`` (including sub itself)."""
        if not self.is_connected(sub):
            raise NotConnectedError("superset enumeration requires a connected subposet")
        sub = frozenset(sub)
        found = {sub}
        frontier = [sub]
        while frontier:
            nxt = []
            for s in frontier:
                for x in s:
                    for y in self._adj[x]:
                        if y not in s:
                            grown = s | {y}
                            if grown not in found:
                                found.add(grown)
                                nxt.append(grown)
            frontier = nxt
        return sorted(found, key=lambda s: tuple(sorted(s)))

    def subposet_covers(self, sub: Subposet) -> list:
        """Cover relation of the induced subposet on ``sub``.

        This is the transitive reduction of <= restricted to ``sub``, not
        the ambient covers with both ends in ``sub``: a connected subposet
        need not be convex, so comparabilities can exist whose ambient
        cover chains leave the subset.
        """
        sub = sorted(sub)
        covers = []
        for q in sub:
            for p in sub:
                if q == p or not self._leq[q][p]:
                    continue
                if any(r != q and r != p and self._leq[q][r] and self._leq[r][p] for r in sub):
                    continue
                covers.append((q, p))
        return covers

    # -- Moebius function of Con^op(P) --------------------------------------

    def mobius_conop(self, J: Subposet, I: Subposet) -> int:
        """Moebius value mu(J, I) of Con^op(P) for nested connected J >= I.

        Computed by the defining recursion over the (finite) segment
        [J, I] = {K in Con(P) : I <= K <= J}: mu(J, J) = 1 and

            mu(J, I) = - sum of mu(J, K) over K with I < K <= J.

        Values are memoized per poset instance.
        """
        J = frozenset(J)
        I = frozenset(I)
        if not I <= J:
            raise NotNestedError("I must be contained in J")
        if not self.is_connected(J) or not self.is_connected(I):
            raise NotConnectedError("mobius_conop requires connected subposets")
        return self._mobius(J, I)

    def _mobius(self, J, I):
        if J == I:
            return 1
        key = (J, I)
        cached = self._mobius_memo.get(key)
        if cached is not None:
            return cached
        total = 0
        diff = sorted(J - I)
        for r in range(1, len(diff) + 1):
            for extra in itertools.combinations(diff, r):
                K = I | frozenset(extra)
                if K != I and self.is_connected(K):
                    total -= self._mobius(J, K)
        self._mobius_memo[key] = total
        return total


def build_poset(elements, relations) -> Poset:
    """Build a Poset from declared elements and order-generating pairs.

    ``relations`` are pairs (a, b) meaning a <= b.  The reflexive-transitive
    closure is formed, cyclic input is rejected, and transitively implied
    pairs are removed so the stored covers form a true Hasse diagram.
    """
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise UnknownElementError("duplicate element labels")
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    leq = [[False] * n for _ in range(n)]
    for i in range(n):
        leq[i][i] = True
    for (a, b) in relations:
        if a not in index or b not in index:
            raise UnknownElementError(f"relation ({a!r}, {b!r}) mentions undeclared element")
        leq[index[a]][index[b]] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                li = leq[i]
                lk = leq[k]
                for j in range(n):
                    if lk[j]:
                        li[j] = True
    for i in range(n):
        for j in range(n):
            if i != j and leq[i][j] and leq[j][i]:
                raise CycleDetectedError(
                    f"elements {elements[i]!r} and {elements[j]!r} lie on a cycle"
                )
    covers = []
    for i in range(n):
        for j in range(n):
            if i == j or not leq[i][j]:
                continue
            if any(k != i and k != j and leq[i][k] and leq[k][j] for k in range(n)):
                continue
            covers.append((i, j))
    return Poset(elements, covers)


# ---------------------------------------------------------------------------
# Zigzag intervals and finite index windows
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class ZZInterval:
    """An interval <b,d> of the zigzag poset, with end decorations.

    Node content (independent of window): edge nodes ("e", i) for
    b < i <= d always, vertex nodes ("v", i) for b <= i <= d except open
    endpoints.  A one-point interval is either [b,b] (single vertex) or
    (b, b+1) (single edge).
    """

    b: int
    d: int
    left: str = CLOSED
    right: str = CLOSED

    def __post_init__(self):
        if self.left not in (OPEN, CLOSED) or self.right not in (OPEN, CLOSED):
            raise InvalidIntervalError("decorations must be 'open' or 'closed'")
        if self.b > self.d:
            raise InvalidIntervalError(f"need b <= d, got b={self.b}, d={self.d}")
        if self.b == self.d and (self.left == OPEN or self.right == OPEN):
            raise InvalidIntervalError("a one-vertex interval [b,b] must be closed on both sides")

    @property
    def decoration(self) -> str:
        """Two-letter tag: c, co, oc or o."""
        tag = {(CLOSED, CLOSED): "c", (CLOSED, OPEN): "co", (OPEN, CLOSED): "oc",
               (OPEN, OPEN): "o"}
        return tag[(self.left, self.right)]

    def nodes(self) -> frozenset:
        out = set()
        for i in range(self.b, self.d + 1):
            if i == self.b and self.left == OPEN:
                continue
            if i == self.d and self.right == OPEN:
                continue
            out.add(("v", i))
        for i in range(self.b + 1, self.d + 1):
            out.add(("e", i))
        return frozenset(out)

    def contains(self, other: "ZZInterval") -> bool:
        return other.nodes() <= self.nodes()

    def sort_key(self):
        return (self.b, self.d, self.left == OPEN, self.right == OPEN)

    def __str__(self):
        lb = "[" if self.left == CLOSED else "("
        rb = "]" if self.right == CLOSED else ")"
        return f"{lb}{self.b},{self.d}{rb}"

    @staticmethod
    def parse(spec: str) -> "ZZInterval":
        """Parse '[b,d]', '[b,d)', '(b,d]' or '(b,d)' with integer b, d."""
        s = spec.strip()
        if len(s) < 5 or s[0] not in "[(" or s[-1] not in "])":
            raise InvalidIntervalError(f"bad interval spec {spec!r}")
        left = CLOSED if s[0] == "[" else OPEN
        right = CLOSED if s[-1] == "]" else OPEN
        body = s[1:-1].split(",")
        if len(body) != 2:
            raise InvalidIntervalError(f"bad interval spec {spec!r}")
        try:
            b, d = int(body[0]), int(body[1])
        except ValueError:
            raise InvalidIntervalError(f"bad interval spec {spec!r}") from None
        return ZZInterval(b, d, left, right)


def zz_extend(iv: ZZInterval, side: str, window: Optional["ZZWindow"] = None):
    """Extend an interval by one zigzag point: I-, I+ or both (I+-).

    Closing an open end adds the boundary vertex; widening a closed end
    adds the next hanging edge.  With a window given, returns None when
    the extension leaves it; rank queries treat that sentinel as 0.
    """
    if side not in ("minus", "plus", "both"):
        raise ValueError("side must be 'minus', 'plus' or 'both'")
    b, d, left, right = iv.b, iv.d, iv.left, iv.right
    if side in ("minus", "both"):
        if left == OPEN:
            left = CLOSED
        else:
            left = OPEN
            b -= 1
    if side in ("plus", "both"):
        if right == OPEN:
            right = CLOSED
        else:
            right = OPEN
            d += 1
    out = ZZInterval(b, d, left, right)
    if window is not None and not window.contains(out):
        return None
    return out


def _vkey(node):
    # left-to-right position of a window node: vertex i at 2i, edge i at 2i-1
    kind, i = node
    return 2 * i if kind == "v" else 2 * i - 1


class ZZWindow:
    """Finite zigzag window with vertex heights lo..hi."""

    def __init__(self, lo: int, hi: int):
        if lo > hi:
            raise InvalidIntervalError(f"bad window [{lo},{hi}]")
        self.lo = lo
        self.hi = hi
        self._poset = None

    def __eq__(self, other):
        return isinstance(other, ZZWindow) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash(("zz", self.lo, self.hi))

    def __repr__(self):
        return f"ZZWindow({self.lo}, {self.hi})"

    def nodes(self) -> list:
        out = [("v", self.lo)]
        for i in range(self.lo + 1, self.hi + 1):
            out.append(("e", i))
            out.append(("v", i))
        return out

    def covers(self) -> list:
        out = []
        for i in range(self.lo + 1, self.hi + 1):
            out.append((("e", i), ("v", i - 1)))
            out.append((("e", i), ("v", i)))
        return out

    def to_poset(self) -> Poset:
        if self._poset is None:
            elems = self.nodes()
            idx = {e: i for i, e in enumerate(elems)}
            self._poset = Poset(elems, [(idx[a], idx[b]) for (a, b) in self.covers()])
        return self._poset

    def contains(self, iv: ZZInterval) -> bool:
        return self.lo <= iv.b and iv.d <= self.hi

    def intervals(self) -> list:
        """Every interval of the window, in canonical order."""
        out = []
        for b in range(self.lo, self.hi + 1):
            for d in range(b, self.hi + 1):
                if b == d:
                    out.append(ZZInterval(b, d))
                else:
                    for left in (CLOSED, OPEN):
                        for right in (CLOSED, OPEN):
                            out.append(ZZInterval(b, d, left, right))
        return sorted(out, key=ZZInterval.sort_key)

    def node_subset(self, iv: ZZInterval) -> Subposet:
        poset = self.to_poset()
        return frozenset(poset.index[n] for n in iv.nodes())


class ZWindow:
    """Finite linear window lo..hi; intervals are integer pairs [a, b]."""

    def __init__(self, lo: int, hi: int):
        if lo > hi:
            raise InvalidIntervalError(f"bad window [{lo},{hi}]")
        self.lo = lo
        self.hi = hi
        self._poset = None

    def __eq__(self, other):
        return isinstance(other, ZWindow) and (self.lo, self.hi) == (other.lo, other.hi)

    def __hash__(self):
        return hash(("z", self.lo, self.hi))

    def __repr__(self):
        return f"ZWindow({self.lo}, {self.hi})"

    def nodes(self) -> list:
        return list(range(self.lo, self.hi + 1))

    def covers(self) -> list:
        return [(i, i + 1) for i in range(self.lo, self.hi)]

    def to_poset(self) -> Poset:
        if self._poset is None:
            elems = self.nodes()
            idx = {e: i for i, e in enumerate(elems)}
            self._poset = Poset(elems, [(idx[a], idx[b]) for (a, b) in self.covers()])
        return self._poset

    def contains(self, iv) -> bool:
        a, b = iv
        return self.lo <= a <= b <= self.hi

    def intervals(self) -> list:
        return [(a, b) for a in range(self.lo, self.hi + 1) for b in range(a, self.hi + 1)]

    def node_subset(self, iv) -> Subposet:
        a, b = iv
        poset = self.to_poset()
        return frozenset(poset.index[i] for i in range(a, b + 1))
