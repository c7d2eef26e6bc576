"""Shared builders, fixtures-as-objects and independent brute-force oracles.

Oracles here deliberately avoid the library's computation paths: interval
containment is checked on node sets, components are recomputed with a
local union-find, sections by exhaustive tuple search, and bottleneck by
enumerating all partial injections.
"""

import itertools
from fractions import Fraction
from pathlib import Path

from gpd import SetDiagram, VecDiagram, ZZInterval, ZZWindow, ZWindow, build_poset
from gpd.exactfield import Matrix
from gpd.poset import CLOSED, OPEN

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


# ---------------------------------------------------------------------------
# the worked examples as library objects
# ---------------------------------------------------------------------------


def star_poset():
    return build_poset(["a", "b", "c", "d"], [("a", "b"), ("c", "b"), ("d", "b")])


def amit_diagram():
    return VecDiagram(
        star_poset(),
        {"a": 1, "b": 2, "c": 1, "d": 1},
        {
            ("a", "b"): Matrix([[1], [0]]),
            ("c", "b"): Matrix([[0], [1]]),
            ("d", "b"): Matrix([[1], [1]]),
        },
    )


def alex_g_diagram():
    return VecDiagram(
        star_poset(),
        {"a": 1, "b": 3, "c": 1, "d": 1},
        {
            ("a", "b"): Matrix([[1], [0], [0]]),
            ("c", "b"): Matrix([[0], [1], [0]]),
            ("d", "b"): Matrix([[1], [1], [0]]),
        },
    )


def alex_h_diagram():
    return VecDiagram(
        star_poset(),
        {"a": 1, "b": 3, "c": 1, "d": 1},
        {
            ("a", "b"): Matrix([[1], [0], [0]]),
            ("c", "b"): Matrix([[0], [1], [0]]),
            ("d", "b"): Matrix([[0], [0], [1]]),
        },
    )


def curry_diagram():
    return SetDiagram(
        ZZWindow(1, 4),
        {
            ("v", 1): ["a"],
            ("e", 2): ["e"],
            ("v", 2): ["b1", "b2"],
            ("e", 3): ["f1", "f2", "f3"],
            ("v", 3): ["c1", "c2"],
            ("e", 4): ["g"],
            ("v", 4): ["d"],
        },
        {
            (("e", 2), ("v", 1)): {"e": "a"},
            (("e", 2), ("v", 2)): {"e": "b1"},
            (("e", 3), ("v", 2)): {"f1": "b1", "f2": "b2", "f3": "b2"},
            (("e", 3), ("v", 3)): {"f1": "c2", "f2": "c1", "f3": "c2"},
            (("e", 4), ("v", 3)): {"g": "c1"},
            (("e", 4), ("v", 4)): {"g": "d"},
        },
    )


def reeb_diagram():
    return SetDiagram(
        ZZWindow(1, 3),
        {
            ("v", 1): ["v1", "v2"],
            ("e", 2): ["e1", "e2"],
            ("v", 2): ["v3", "v4"],
            ("e", 3): ["e3", "e4"],
            ("v", 3): ["v5", "v6"],
        },
        {
            (("e", 2), ("v", 1)): {"e1": "v1", "e2": "v2"},
            (("e", 2), ("v", 2)): {"e1": "v3", "e2": "v4"},
            (("e", 3), ("v", 2)): {"e3": "v3", "e4": "v3"},
            (("e", 3), ("v", 3)): {"e3": "v5", "e4": "v6"},
        },
    )


def tight_m_diagram():
    return SetDiagram(
        ZZWindow(1, 2),
        {("v", 1): ["p"], ("e", 2): ["x", "y"], ("v", 2): ["q"]},
        {(("e", 2), ("v", 1)): {"x": "p", "y": "p"},
         (("e", 2), ("v", 2)): {"x": "q", "y": "q"}},
    )


def tight_n_diagram():
    return SetDiagram(
        ZZWindow(1, 2),
        {("v", 1): ["p"], ("e", 2): ["x"], ("v", 2): ["q"]},
        {(("e", 2), ("v", 1)): {"x": "p"}, (("e", 2), ("v", 2)): {"x": "q"}},
    )


def criticism_m_diagram():
    w = ZZWindow(0, 2)
    one = Matrix([[1]])
    return VecDiagram.over_zz(
        w,
        {("v", 0): 1, ("e", 1): 1, ("v", 1): 1, ("e", 2): 1, ("v", 2): 1},
        {
            (("e", 1), ("v", 0)): one,
            (("e", 1), ("v", 1)): one,
            (("e", 2), ("v", 1)): one,
            (("e", 2), ("v", 2)): one,
        },
    )


def criticism_n_diagram():
    w = ZZWindow(0, 2)
    return VecDiagram.over_zz(
        w,
        {("v", 0): 1, ("e", 1): 2, ("v", 1): 1, ("e", 2): 2, ("v", 2): 1},
        {
            (("e", 1), ("v", 0)): Matrix([[0, 1]]),
            (("e", 1), ("v", 1)): Matrix([[1, 0]]),
            (("e", 2), ("v", 1)): Matrix([[0, 1]]),
            (("e", 2), ("v", 2)): Matrix([[1, 0]]),
        },
    )


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


def random_zz_set_diagram(rng, max_half_width=2, max_elems=4):
    """Random Reeb graph on a window of at most 2*max_half_width+1 nodes."""
    lo = rng.randint(-2, 2)
    hi = lo + rng.randint(0, max_half_width)
    window = ZZWindow(lo, hi)
    sizes = {("v", i): rng.randint(0, max_elems) for i in range(lo, hi + 1)}
    for i in range(lo + 1, hi + 1):
        if sizes[("v", i - 1)] == 0 or sizes[("v", i)] == 0:
            sizes[("e", i)] = 0
        else:
            sizes[("e", i)] = rng.randint(0, max_elems)
    sets = {n: [f"{n[0]}{n[1]}x{k}" for k in range(sz)] for n, sz in sizes.items()}
    maps = {}
    for i in range(lo + 1, hi + 1):
        for tgt in (("v", i - 1), ("v", i)):
            maps[(("e", i), tgt)] = {x: rng.choice(sets[tgt]) for x in sets[("e", i)]}
    return SetDiagram(window, sets, maps)


def random_z_set_diagram(rng, max_width=4, max_elems=4):
    lo = rng.randint(-2, 2)
    hi = lo + rng.randint(0, max_width)
    window = ZWindow(lo, hi)
    sets = {i: [f"n{i}x{k}" for k in range(rng.randint(1, max_elems))]
            for i in range(lo, hi + 1)}
    maps = {}
    for i in range(lo, hi):
        maps[(i, i + 1)] = {x: rng.choice(sets[i + 1]) for x in sets[i]}
    return SetDiagram(window, sets, maps)


def random_barcode(rng, window, max_bars=6):
    bars = {}
    pool = window.intervals()
    for _ in range(rng.randint(0, max_bars)):
        iv = rng.choice(pool)
        bars[iv] = bars.get(iv, 0) + 1
    return bars


def random_zz_vec_diagram(rng, p=2, max_half_width=2, max_dim=3):
    lo = rng.randint(-2, 2)
    hi = lo + rng.randint(0, max_half_width)
    window = ZZWindow(lo, hi)
    dims = {n: rng.randint(0, max_dim) for n in window.nodes()}
    maps = {}
    for (src, dst) in window.covers():
        rows, cols = dims[dst], dims[src]
        maps[(src, dst)] = Matrix(
            [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], p,
            shape=(rows, cols),
        )
    return VecDiagram.over_zz(window, dims, maps, p)


def random_tree_poset(rng, max_size=5):
    """Random poset whose Hasse diagram is a tree (no parallel paths)."""
    n = rng.randint(1, max_size)
    labels = [f"x{i}" for i in range(n)]
    relations = []
    for i in range(1, n):
        j = rng.randrange(i)
        if rng.random() < 0.5:
            relations.append((labels[i], labels[j]))
        else:
            relations.append((labels[j], labels[i]))
    return build_poset(labels, relations)


def random_vec_on_tree(rng, poset, p=2, max_dim=3):
    dims = {e: rng.randint(0, max_dim) for e in poset.elements}
    maps = {}
    for (qi, pi) in poset.covers:
        q, t = poset.elements[qi], poset.elements[pi]
        rows, cols = dims[t], dims[q]
        maps[(q, t)] = Matrix(
            [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], p,
            shape=(rows, cols),
        )
    return VecDiagram(poset, dims, maps, p)


def random_half_integer_points(rng, max_points=6):
    pts = []
    for _ in range(rng.randint(0, max_points)):
        b = Fraction(rng.randint(-6, 12), 2)
        d = b + Fraction(rng.randint(0, 10), 2)
        pts.append((b, d, None))
    return pts


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def brute_connected_subsets(poset, size_cap):
    """All connected subsets by filtering every subset of elements."""
    n = len(poset.elements)
    out = []
    for r in range(1, min(size_cap, n) + 1):
        for combo in itertools.combinations(range(n), r):
            if poset.is_connected(frozenset(combo)):
                out.append(frozenset(combo))
    return sorted(out, key=lambda s: tuple(sorted(s)))


def containment_rank(bars, interval):
    """Prop.-bridge oracle: total multiplicity of bars containing interval."""
    nodes = interval.nodes()
    return sum(mult for bar, mult in bars.items() if nodes <= bar.nodes())


def brute_components(diagram, interval):
    """Local union-find recomputation of colimit classes."""
    nodes = diagram._interval_nodes(interval)
    if nodes is None:
        return []
    items = [(n, x) for n in nodes for x in diagram.sets[n]]
    parent = {it: it for it in items}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for (src, dst), table in diagram.maps.items():
        if src in set(nodes) and dst in set(nodes):
            for a, b in table.items():
                ra, rb = find((src, a)), find((dst, b))
                if ra != rb:
                    parent[ra] = rb
    groups = {}
    for it in items:
        groups.setdefault(find(it), set()).add(it)
    return list(groups.values())


def brute_set_rank(diagram, interval):
    """Count full classes hit by some section, by exhaustive tuple search."""
    nodes = diagram._interval_nodes(interval)
    if nodes is None or any(not diagram.sets[n] for n in nodes):
        return 0
    comps = brute_components(diagram, interval)
    full = [c for c in comps if {n for n, _ in c} == set(nodes)]
    hit = set()
    for combo in itertools.product(*[diagram.sets[n] for n in nodes]):
        assign = dict(zip(nodes, combo))
        ok = True
        for (src, dst), table in diagram.maps.items():
            if src in assign and dst in assign and table[assign[src]] != assign[dst]:
                ok = False
                break
        if ok:
            witness = (nodes[0], assign[nodes[0]])
            for idx, c in enumerate(full):
                if witness in c:
                    hit.add(idx)
    return len(hit)


def brute_bottleneck(xs, ys):
    """Minimize over every partial injection between two point multisets."""
    import math

    def linf(u, v):
        def c(a, b):
            return Fraction(0) if a == b else abs(a - b)

        return max(c(u[0], v[0]), c(u[1], v[1]))

    def delcost(u):
        return (Fraction(0) if u[0] == u[1] else abs(u[1] - u[0])) / 2

    best = math.inf
    ny = len(ys)

    def rec(i, used, cur):
        nonlocal best
        if cur >= best:
            return
        if i == len(xs):
            rest = max(
                (delcost(ys[j]) for j in range(ny) if j not in used),
                default=Fraction(0),
            )
            best = min(best, max(cur, rest))
            return
        rec(i + 1, used, max(cur, delcost(xs[i])))
        for j in range(ny):
            if j not in used:
                rec(i + 1, used | {j}, max(cur, linf(xs[i], ys[j])))

    rec(0, frozenset(), Fraction(0))
    return best


def zz_interval_pool(window):
    return window.intervals()


def closed(b, d):
    return ZZInterval(b, d, CLOSED, CLOSED)


def co(b, d):
    return ZZInterval(b, d, CLOSED, OPEN)


def oc(b, d):
    return ZZInterval(b, d, OPEN, CLOSED)


def op(b, d):
    return ZZInterval(b, d, OPEN, OPEN)
