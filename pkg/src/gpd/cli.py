"""Batch command line front end.

Reads diagram files (JSON), dispatches the library computations, and
emits machine readable JSON (DOT for the graph export).  Exit codes:
0 success, 1 semantic negative (validation violations, a failed
--mobius-check, an obstruction under --expect-decomposable), 2 on
parse/validation errors, reported as a JSON object on stderr.

File schema::

    {
      "kind":   "vec" | "set",
      "index":  "zz" | "z" | "poset",
      "window": [lo, hi],                    # zz / z
      "poset":  {"elements": [...], "relations": [[a, b], ...]},
      "field":  2,                           # vec only, prime, default 2
      "spaces": {node: dimension | [labels]},
      "maps":   {"SRC->DST": rows | {"src": "dst"}}
    }

ZZ nodes are written "v3" (vertex at height 3) or "e3" (edge spanning
[2, 3]); Z nodes are bare integers as strings; poset nodes are element
labels.  Matrices are arrays of rows of integers mod the field.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import metrics, setmod, vecmod
from .errors import GPDError, InputFormatError, InvalidIntervalError
from .exactfield import Matrix, is_prime
from .poset import ZZInterval, ZZWindow, ZWindow, build_poset
from .setmod import SetDiagram
from .vecmod import VecDiagram

_ZZ_NODE = re.compile(r"^([ve])(-?\d+)$")


def _parse_zz_node(key):
    m = _ZZ_NODE.match(key)
    if not m:
        raise InputFormatError(f"bad zz node key {key!r} (want v<i> or e<i>)")
    return (m.group(1), int(m.group(2)))


def _parse_map_key(key):
    if "->" not in key:
        raise InputFormatError(f"bad map key {key!r} (want SRC->DST)")
    src, dst = key.split("->", 1)
    return src.strip(), dst.strip()


def format_node(node):
    if isinstance(node, tuple):
        return f"{node[0]}{node[1]}"
    return str(node)


def format_interval(diagram, key):
    if isinstance(key, ZZInterval):
        return str(key)
    if isinstance(key, tuple) and key and isinstance(key[0], int):
        return f"[{key[0]},{key[1]}]"
    return "{" + ",".join(str(x) for x in key) + "}"


def parse_interval(diagram, spec):
    """Parse an --interval argument against the diagram's index kind."""
    s = spec.strip()
    if getattr(diagram, "index", None) == "poset":
        if not (s.startswith("{") and s.endswith("}")):
            raise InputFormatError(f"poset interval spec must look like {{a,b}}, got {spec!r}")
        labels = [x.strip() for x in s[1:-1].split(",") if x.strip()]
        if not labels:
            raise InputFormatError("empty element set")
        return tuple(labels)
    iv = ZZInterval.parse(s)
    if diagram.index == "z":
        if iv.decoration != "c":
            raise InputFormatError("z-window intervals are closed: use [a,b]")
        return (iv.b, iv.d)
    return iv


def load_file(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path} is not valid JSON: {exc}") from None


def build_diagram(doc, check: bool = True):
    """Construct a diagram object from a parsed file document."""
    kind = doc.get("kind")
    index = doc.get("index")
    if kind not in ("vec", "set"):
        raise InputFormatError(f"kind must be 'vec' or 'set', got {kind!r}")
    if index not in ("zz", "z", "poset"):
        raise InputFormatError(f"index must be 'zz', 'z' or 'poset', got {index!r}")
    spaces = doc.get("spaces", {})
    raw_maps = doc.get("maps", {})

    if index == "poset":
        if kind == "set":
            raise InputFormatError("set diagrams are supported over zz and z windows only")
        pdoc = doc.get("poset")
        if not pdoc or "elements" not in pdoc:
            raise InputFormatError("poset index requires a 'poset' object")
        poset = build_poset(pdoc["elements"], [tuple(r) for r in pdoc.get("relations", [])])
        node_of = lambda k: k
    else:
        window_doc = doc.get("window")
        if (
            not isinstance(window_doc, list)
            or len(window_doc) != 2
            or not all(isinstance(x, int) for x in window_doc)
        ):
            raise InputFormatError("'window' must be [lo, hi] with integers")
        lo, hi = window_doc
        if lo > hi:
            raise InputFormatError(f"bad window [{lo},{hi}]")
        if index == "zz":
            window = ZZWindow(lo, hi)
            node_of = _parse_zz_node
        else:
            window = ZWindow(lo, hi)

            def node_of(k):
                try:
                    return int(k)
                except ValueError:
                    raise InputFormatError(f"bad z node key {k!r}") from None

    if kind == "vec":
        p = doc.get("field", 2)
        if not isinstance(p, int) or not is_prime(p):
            raise InputFormatError(f"'field' must be a prime integer, got {p!r}")
        dims = {}
        for key, val in spaces.items():
            if not isinstance(val, int) or val < 0:
                raise InputFormatError(f"space {key!r} must be a non-negative dimension")
            dims[node_of(key)] = val
        maps = {}
        for key, rows in raw_maps.items():
            src, dst = _parse_map_key(key)
            src_n, dst_n = node_of(src), node_of(dst)
            shape = (dims.get(dst_n, 0), dims.get(src_n, 0))
            maps[(src_n, dst_n)] = Matrix(rows if rows else [], p, shape=shape)
        if index == "poset":
            diagram = VecDiagram(poset, {e: dims.get(e, 0) for e in poset.elements}, maps, p)
        elif index == "zz":
            diagram = VecDiagram.over_zz(window, dims, maps, p)
        else:
            diagram = VecDiagram.over_z(window, dims, maps, p)
        if check:
            bad = vecmod.validate_functoriality(diagram)
            if bad:
                raise InputFormatError(
                    "diagram is not functorial at " + ", ".join(f"({s!r},{t!r})" for s, t in bad)
                )
        return diagram

    sets = {}
    for key, val in spaces.items():
        if not isinstance(val, list):
            raise InputFormatError(f"set node {key!r} must list its elements")
        sets[node_of(key)] = [str(x) for x in val]
    maps = {}
    for key, table in raw_maps.items():
        src, dst = _parse_map_key(key)
        if not isinstance(table, dict):
            raise InputFormatError(f"set map {key!r} must be a src->dst object")
        maps[(node_of(src), node_of(dst))] = {str(a): str(b) for a, b in table.items()}
    return SetDiagram(window, sets, maps)


def load_diagram(path, check: bool = True):
    return build_diagram(load_file(path), check=check)


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------


def _worker_pool():
    try:
        n = int(os.environ.get("GPD_THREADS", "1"))
    except ValueError:
        raise InputFormatError("GPD_THREADS must be a positive integer") from None
    if n < 1:
        raise InputFormatError("GPD_THREADS must be a positive integer")
    return n


def _map_ordered(fn, items):
    """Apply fn over items, fanning out when GPD_THREADS > 1.

    Results are assembled in input order, so scheduling cannot change
    the output.
    """
    n = _worker_pool()
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _carrier(diagram, cap):
    if diagram.index in ("zz", "z"):
        return list(diagram.window.intervals())
    return [key for key, _ in vecmod._interval_carrier(diagram, cap)]


def _rank_fn(diagram):
    if isinstance(diagram, SetDiagram):
        return lambda iv: setmod.set_lc_rank(diagram, iv)
    return lambda iv: vecmod.rank_at(diagram, iv)


def _dgm_fn(diagram):
    if isinstance(diagram, SetDiagram):
        return lambda iv: setmod.set_persistence_diagram_at(diagram, iv)
    return lambda iv: vecmod.persistence_diagram_at(diagram, iv)


def cmd_validate(args):
    doc = load_file(args.file)
    try:
        diagram = build_diagram(doc, check=False)
    except GPDError as exc:
        print(json.dumps({"ok": False, "violations": [str(exc)]}))
        return 1
    if isinstance(diagram, VecDiagram):
        bad = vecmod.validate_functoriality(diagram)
        if bad:
            report = [{"pair": [format_node(s), format_node(t)]} for s, t in bad]
            print(json.dumps({"ok": False, "violations": report}))
            return 1
    print(json.dumps({"ok": True}))
    return 0


def _query_keys(diagram, args):
    if args.interval is not None:
        return [parse_interval(diagram, args.interval)], True
    if not args.all:
        raise InputFormatError("provide --interval SPEC or --all")
    return _carrier(diagram, args.cap), False


def cmd_rank(args):
    diagram = load_diagram(args.file)
    keys, single = _query_keys(diagram, args)
    values = _map_ordered(_rank_fn(diagram), keys)
    if single:
        print(json.dumps({"interval": format_interval(diagram, keys[0]), "rank": values[0]}))
    else:
        print(json.dumps({format_interval(diagram, k): v for k, v in zip(keys, values)}))
    return 0


def cmd_diagram(args):
    diagram = load_diagram(args.file)
    keys, single = _query_keys(diagram, args)
    values = _map_ordered(_dgm_fn(diagram), keys)
    if args.mobius_check:
        if isinstance(diagram, SetDiagram):
            raise InputFormatError("--mobius-check applies to vec diagrams")
        for k, v in zip(keys, values):
            other = vecmod.persistence_diagram_via_mobius(diagram, k)
            if other != v:
                print(
                    json.dumps(
                        {
                            "mobius_check": "failed",
                            "interval": format_interval(diagram, k),
                            "entourage_sum": v,
                            "mobius_sum": other,
                        }
                    )
                )
                return 1
    if single:
        print(json.dumps({"interval": format_interval(diagram, keys[0]), "value": values[0]}))
    else:
        print(json.dumps({format_interval(diagram, k): v for k, v in zip(keys, values)}))
    return 0


def _barcode_of(diagram):
    if isinstance(diagram, VecDiagram):
        return vecmod.barcode(diagram)
    if diagram.index == "zz":
        return setmod.levelset_barcode(diagram)
    # merge tree path: set rank equals linearized rank over z windows
    bars = {}
    for iv in diagram.intervals():
        mult = setmod.set_persistence_diagram_at(diagram, iv)
        if mult > 0:
            bars[iv] = mult
    return bars


def _sorted_bars(diagram, bars):
    def key(item):
        iv = item[0]
        if isinstance(iv, ZZInterval):
            return iv.sort_key()
        return (iv[0], iv[1], False, False)

    return sorted(bars.items(), key=key)


def cmd_barcode(args):
    diagram = load_diagram(args.file)
    bars = _barcode_of(diagram)
    out = [
        {"interval": format_interval(diagram, iv), "mult": mult}
        for iv, mult in _sorted_bars(diagram, bars)
    ]
    print(json.dumps(out))
    return 0


def cmd_full(args):
    diagram = load_diagram(args.file)
    if not isinstance(diagram, SetDiagram):
        raise InputFormatError("'full' applies to set diagrams")
    iv = parse_interval(diagram, args.interval)
    print(json.dumps({"interval": format_interval(diagram, iv),
                      "full": setmod.count_full(diagram, iv)}))
    return 0


def cmd_untwisted(args):
    diagram = load_diagram(args.file)
    if not isinstance(diagram, SetDiagram):
        raise InputFormatError("'untwisted' applies to set diagrams")
    flag, witness = setmod.is_untwisted(diagram)
    print(
        json.dumps(
            {
                "untwisted": flag,
                "witness": None if witness is None else format_interval(diagram, witness),
            }
        )
    )
    return 0


def cmd_obstruction(args):
    diagram = load_diagram(args.file)
    if not isinstance(diagram, VecDiagram):
        raise InputFormatError("'obstruction' applies to vec diagrams")
    hit = vecmod.decomposability_obstruction(diagram, args.cap)
    if hit is None:
        print(json.dumps({"obstruction": None}))
        return 0
    key, value = hit
    print(json.dumps({"obstruction": {"interval": format_interval(diagram, key),
                                      "value": value}}))
    return 1 if args.expect_decomposable else 0


def _points_of(diagram):
    if isinstance(diagram, VecDiagram):
        return metrics.intervals_to_points(_barcode_of(diagram))
    return metrics.intervals_to_points(setmod.set_persistence_diagram(diagram))


def _format_eps(value):
    if value == math.inf:
        return {"bottleneck": "inf", "decimal": None}
    frac = Fraction(value)
    return {"bottleneck": f"{frac.numerator}/{frac.denominator}", "decimal": float(frac)}


def cmd_bottleneck(args):
    xs = _points_of(load_diagram(args.file_a))
    ys = _points_of(load_diagram(args.file_b))
    if args.per_decoration:
        per, overall = metrics.bottleneck_per_decoration(xs, ys)
        out = _format_eps(overall)
        out["per_decoration"] = {tag: _format_eps(v) for tag, v in sorted(per.items())}
        print(json.dumps(out))
        return 0
    print(json.dumps(_format_eps(metrics.bottleneck(xs, ys))))
    return 0


def cmd_dot(args):
    diagram = load_diagram(args.file)
    if not isinstance(diagram, SetDiagram):
        raise InputFormatError("'dot' applies to set diagrams")
    sys.stdout.write(setmod.reeb_dot(diagram))
    return 0


# ---------------------------------------------------------------------------


def make_parser():
    parser = argparse.ArgumentParser(
        prog="gpd",
        description="Generalized rank invariants and persistence diagrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)

    def add_query(p):
        p.add_argument("file")
        p.add_argument("--interval", help="interval spec, e.g. '[2,3)' or '{b}'")
        p.add_argument("--all", action="store_true", help="query every interval")
        p.add_argument("--cap", type=int, default=None,
                       help="size cap for poset carriers with --all")

    p = sub.add_parser("rank", help="generalized rank invariant")
    add_query(p)
    p.set_defaults(fn=cmd_rank)

    p = sub.add_parser("diagram", help="persistence diagram values")
    add_query(p)
    p.add_argument("--mobius-check", action="store_true",
                   help="cross-check against the Moebius inversion form")
    p.set_defaults(fn=cmd_diagram)

    p = sub.add_parser("barcode", help="barcode of a window diagram")
    p.add_argument("file")
    p.set_defaults(fn=cmd_barcode)

    p = sub.add_parser("full", help="full-component count of a set diagram")
    p.add_argument("file")
    p.add_argument("--interval", required=True)
    p.set_defaults(fn=cmd_full)

    p = sub.add_parser("untwisted", help="untwistedness of a Reeb graph")
    p.add_argument("file")
    p.set_defaults(fn=cmd_untwisted)

    p = sub.add_parser("obstruction", help="interval-decomposability obstruction")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--expect-decomposable", action="store_true")
    p.set_defaults(fn=cmd_obstruction)

    p = sub.add_parser("bottleneck", help="bottleneck distance between two files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--per-decoration", action="store_true")
    p.set_defaults(fn=cmd_bottleneck)

    p = sub.add_parser("dot", help="Reeb graph as DOT text")
    p.add_argument("file")
    p.set_defaults(fn=cmd_dot)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GPDError as exc:
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        return 2


if __name__ == "__main__":
    sys.exit(main())
