"""Benchmark front end: run scenarios, mutate maps, render traces.

Subcommands:
  run        execute a scenario file, one CSV row per query
  dynamic    execute a mixed query / insert / remove event script
  render     draw a map, and optionally one query, as an SVG file
  gen-mscen  write random multi-target scenario lines for a map

Maps are either the native polygon text (``E``/``O`` lines) or grid
benchmark maps; the loader sniffs which.  Scenario files use the grid
benchmark ``.scen`` version 1 layout (cell coordinates address corners,
y flipped to grow upward), or ``.mscen`` lines ``sx sy k tx1 ty1 ...``
in world coordinates.  Exit codes: 2 for unreadable input, 3 for a
mutation the environment rejects.
"""
from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from dataclasses import dataclass

from .environment import MapError, load_grid_map, load_polygon_map
from .oracle import VisibilityOracle
from .search import EngineConfig, SearchEngine, SearchError, Stats
from .svg import write_svg


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioQuery:
    start: tuple
    targets: list
    expected_length: float | None = None


RUN_HEADER = [
    "query_id", "length", "time_ns", "rays", "cache_hits",
    "expansions", "swept", "skips", "bypasses", "blocked",
]
DYNAMIC_HEADER = [
    "event", "kind", "length", "time_ns", "cum_search_ns",
    "rays", "cache_hits", "cache_resets",
]


# -- input parsing ----------------------------------------------------------


def _load_map(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.split()[0] in ("E", "O"):
            return load_polygon_map(text)
        return load_grid_map(text)
    raise MapError("map file %r is empty" % path)


def _load_scenario(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".mscen"):
        return _parse_mscen(text)
    return _parse_scen(text)


def _parse_scen(text):
    """Grid benchmark scenarios, version 1.

    Columns: bucket, map, width, height, sx, sy, gx, gy, optimal.  Cell
    row sy counts downward from the top, so the world point is
    (sx, height - sy).  The optimal column is a grid-moves length, kept
    only as a label.
    """
    queries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0].lower() == "version":
            if fields[1:] != ["1"]:
                raise ScenarioError("line %d: unsupported version %r" % (lineno, line))
            continue
        if len(fields) < 9:
            raise ScenarioError("line %d: expected 9 columns, got %d" % (lineno, len(fields)))
        try:
            height = int(fields[3])
            sx, sy, gx, gy = (int(v) for v in fields[4:8])
            expected = float(fields[8])
        except ValueError:
            raise ScenarioError("line %d: bad number" % lineno)
        queries.append(
            ScenarioQuery((sx, height - sy), [(gx, height - gy)], expected)
        )
    return queries


def _parse_mscen(text):
    queries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            nums = [int(v) for v in line.split()]
        except ValueError:
            raise ScenarioError("line %d: coordinates must be integers" % lineno)
        if len(nums) < 5 or len(nums) != 3 + 2 * nums[2]:
            raise ScenarioError("line %d: want sx sy k and 2k coordinates" % lineno)
        targets = list(zip(nums[3::2], nums[4::2]))
        queries.append(ScenarioQuery((nums[0], nums[1]), targets))
    return queries


def _parse_script(text):
    """Dynamic scripts: Q sx sy tx ty | I x1 y1 x2 y2 x3 y3 ... | R pid."""
    events = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            nums = [int(v) for v in fields[1:]]
        except ValueError:
            raise ScenarioError("line %d: coordinates must be integers" % lineno)
        kind = fields[0].upper()
        if kind == "Q" and len(nums) == 4:
            events.append(("query", (nums[0], nums[1]), (nums[2], nums[3])))
        elif kind == "I" and len(nums) >= 6 and len(nums) % 2 == 0:
            events.append(("insert", list(zip(nums[0::2], nums[1::2])), None))
        elif kind == "R" and len(nums) == 1:
            events.append(("remove", nums[0], None))
        else:
            raise ScenarioError("line %d: bad event %r" % (lineno, line))
    return events


# -- shared helpers ---------------------------------------------------------


def _config_from(args):
    return EngineConfig(
        scan_mode=args.scan_mode,
        refine=args.refine,
        blocking=args.blocking,
        skip=args.skip,
        bypass=args.bypass,
        cache=args.cache,
        skip_budget=args.skip_budget,
        heuristic=args.heuristic,
    )


def _aggregate_ns(times):
    """Median-style protocol: drop the best and worst run, average the rest."""
    if len(times) >= 3:
        times = sorted(times)[1:-1]
    return int(sum(times) / len(times))


def _fmt_len(x):
    return "inf" if x is None else repr(float(x))


def _matches(got, want):
    if got is None or want is None:
        return got is None and want is None
    return abs(got - want) <= 1e-9 * max(1.0, want)


def _total(lengths):
    if any(v is None for v in lengths):
        return None
    return sum(lengths)


# -- subcommands ------------------------------------------------------------


def cmd_run(args):
    env = _load_map(args.map)
    queries = _load_scenario(args.scen)
    engine = SearchEngine(env, _config_from(args))
    oracle = VisibilityOracle(env) if args.check_oracle else None

    writer = csv.writer(sys.stdout)
    header = RUN_HEADER + (["optimal", "match"] if oracle else [])
    writer.writerow(header)
    for qid, q in enumerate(queries):
        times = []
        results = None
        bad = None
        for rep in range(max(1, args.reps)):
            t0 = time.perf_counter_ns()
            try:
                res = engine.find_paths_multi(q.start, q.targets)
            except SearchError as exc:
                res, bad = None, exc
            times.append(time.perf_counter_ns() - t0)
            if rep == 0:
                results = res
        if results is None:
            print("query %d: %s" % (qid, bad), file=sys.stderr)
            stats, length = Stats(), float("nan")
        else:
            stats = results[0].stats
            length = _total([r.length for r in results])
        row = [
            qid, _fmt_len(length), _aggregate_ns(times),
            stats.rays, stats.cache_hits, stats.expansions, stats.swept,
            stats.skips, stats.bypasses, stats.blocked,
        ]
        if oracle:
            if results is None:
                row += ["nan", "true"]
            else:
                opt = oracle.shortest_multi(q.start, q.targets)
                ok = all(_matches(r.length, o) for r, o in zip(results, opt))
                row += [_fmt_len(_total(opt)), "true" if ok else "false"]
        writer.writerow(row)
    return 0


def cmd_dynamic(args):
    env = _load_map(args.map)
    with open(args.script, encoding="utf-8") as fh:
        events = _parse_script(fh.read())
    engine = SearchEngine(env, _config_from(args))
    oracle = None

    writer = csv.writer(sys.stdout)
    header = DYNAMIC_HEADER + (["optimal", "match"] if args.check_oracle else [])
    writer.writerow(header)
    cum = 0
    for idx, (kind, a, b) in enumerate(events):
        if kind == "query":
            t0 = time.perf_counter_ns()
            try:
                res = engine.find_path(a, b)
            except SearchError as exc:
                res = None
                print("event %d: %s" % (idx, exc), file=sys.stderr)
            dt = time.perf_counter_ns() - t0
            cum += dt
            stats = res.stats if res is not None else Stats()
            length = res.length if res is not None else float("nan")
            row = [
                idx, kind, _fmt_len(length), dt, cum,
                stats.rays, stats.cache_hits, engine.cache_resets,
            ]
            if args.check_oracle:
                if res is None:
                    row += ["nan", "true"]
                else:
                    if oracle is None:
                        oracle = VisibilityOracle(engine.env)
                    opt = oracle.shortest(a, b)
                    ok = _matches(res.length, opt)
                    row += [_fmt_len(opt), "true" if ok else "false"]
        else:
            t0 = time.perf_counter_ns()
            try:
                if kind == "insert":
                    engine.insert_obstacle(a)
                else:
                    engine.remove_obstacle(a)
            except MapError as exc:
                print("event %d: %s rejected: %s" % (idx, kind, exc), file=sys.stderr)
                return 3
            dt = time.perf_counter_ns() - t0
            oracle = None
            row = [idx, kind, "", dt, cum, "", "", engine.cache_resets]
            if args.check_oracle:
                row += ["", ""]
        writer.writerow(row)
    return 0


def cmd_render(args):
    env = _load_map(args.map)
    result = None
    if args.query:
        engine = SearchEngine(env, _config_from(args))
        s, t = tuple(args.query[:2]), tuple(args.query[2:])
        try:
            result = engine.find_path(s, t, trace=args.trace)
        except SearchError as exc:
            print("query: %s" % exc, file=sys.stderr)
            return 2
    write_svg(args.out, env, result, scale=args.scale, trace=args.trace)
    return 0


def cmd_oracle(args):
    env = _load_map(args.map)
    got = VisibilityOracle(env).shortest(
        (args.coords[0], args.coords[1]), (args.coords[2], args.coords[3])
    )
    print(_fmt_len(got))
    return 0


def cmd_gen_mscen(args):
    env = _load_map(args.map)
    rng = random.Random(args.seed)
    x0, y0, x1, y1 = env.bbox()
    if args.mode == "sparse" and args.count > args.grid * args.grid:
        raise ScenarioError(
            "sparse mode needs count <= grid cells (%d > %d)"
            % (args.count, args.grid * args.grid)
        )

    def cell_box(ci, cj):
        g = args.grid
        return (
            x0 + (x1 - x0) * ci // g, y0 + (y1 - y0) * cj // g,
            x0 + (x1 - x0) * (ci + 1) // g, y0 + (y1 - y0) * (cj + 1) // g,
        )

    def free_in(box, tries=200):
        bx0, by0, bx1, by1 = box
        for _ in range(tries):
            p = (rng.randint(bx0, bx1), rng.randint(by0, by1))
            if env.classify_point(p) == "free":
                return p
        return None

    cells = [(i, j) for i in range(args.grid) for j in range(args.grid)]
    for _ in range(args.lines):
        start = free_in((x0, y0, x1, y1))
        targets = None
        for _ in range(200):
            if args.mode == "clustered":
                box = cell_box(*rng.choice(cells))
                got = [free_in(box) for _ in range(args.count)]
            else:
                got = [free_in(cell_box(*c)) for c in rng.sample(cells, args.count)]
            if all(p is not None for p in got):
                targets = got
                break
        if start is None or targets is None:
            raise ScenarioError("could not place points; map too crowded for --grid %d" % args.grid)
        coords = " ".join("%d %d" % p for p in targets)
        print("%d %d %d %s" % (start[0], start[1], args.count, coords))
    return 0


# -- argument wiring --------------------------------------------------------


def _build_parser():
    engine_flags = argparse.ArgumentParser(add_help=False)
    engine_flags.add_argument("--scan-mode", choices=("convex", "forward"), default="convex")
    engine_flags.add_argument("--refine", choices=("ray", "sector"), default="ray")
    engine_flags.add_argument("--blocking", action=argparse.BooleanOptionalAction, default=True)
    engine_flags.add_argument("--skip", action=argparse.BooleanOptionalAction, default=True)
    engine_flags.add_argument("--bypass", action=argparse.BooleanOptionalAction, default=True)
    engine_flags.add_argument("--cache", action=argparse.BooleanOptionalAction, default=False)
    engine_flags.add_argument("--skip-budget", type=int, default=16)
    engine_flags.add_argument("--heuristic", choices=("nearest", "zero"), default="nearest")

    ap = argparse.ArgumentParser(prog="raypath", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True,
                            metavar="{run,dynamic,render,gen-mscen}")

    p = sub.add_parser("run", parents=[engine_flags],
                       help="run a scenario, CSV per query on stdout")
    p.add_argument("--map", required=True)
    p.add_argument("--scen", required=True)
    p.add_argument("--reps", type=int, default=7,
                   help="timing repetitions per query (default 7)")
    p.add_argument("--check-oracle", action="store_true",
                   help="append optimal/match columns from the brute-force oracle")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("dynamic", parents=[engine_flags],
                       help="run a query/insert/remove script, CSV per event")
    p.add_argument("--map", required=True)
    p.add_argument("--script", required=True)
    p.add_argument("--check-oracle", action="store_true")
    p.set_defaults(func=cmd_dynamic)

    p = sub.add_parser("render", parents=[engine_flags],
                       help="write an SVG of the map, optionally with a query")
    p.add_argument("--map", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--query", type=int, nargs=4, metavar=("SX", "SY", "TX", "TY"))
    p.add_argument("--trace", action="store_true",
                   help="draw every ray (dashed) and scan step (dotted)")
    p.add_argument("--scale", type=int, default=12)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("oracle")  # debugging aid, left out of the usage line
    p.add_argument("--map", required=True)
    p.add_argument("coords", type=int, nargs=4, metavar="C")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen-mscen",
                       help="generate multi-target scenario lines on stdout")
    p.add_argument("--map", required=True)
    p.add_argument("--mode", choices=("clustered", "sparse"), default="clustered")
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--lines", type=int, default=50)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_gen_mscen)
    return ap


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MapError, ScenarioError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
