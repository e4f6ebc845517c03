"""Command-line front end producing versioned JSON run reports.

Subcommands: decide (list-colorability with marked faces and pins),
extend (forced subgraph extension), color (explicit coloring search),
choosable (3-choosability, with an optional behavior-table dump),
verify (solver vs. brute force on one instance), stats (map report,
optional DOT dump) and bench (planar scaling harness).

Exit codes: 0 for a yes answer, 1 for a no, 2 for any error.  Reports
go to stdout as JSON with sorted keys; two runs with the same inputs,
parameters and seed differ at most in the "timings" section.
"""

import argparse
import json
import math
import random
import sys
import time
from dataclasses import asdict, dataclass, field, fields

from . import __version__
from .choosability import decide_choosable, profile_set
from .colorer import SolverParams
from .embedding import parse_lists, parse_map, require_girth
from .errors import EmbeddingError, PreconditionError, SurfcolorError
from .instances import add_pentagon_gadgets, hex_wall
from .oracle import OracleLimitError, brute_colorable, check_coloring
from .solver import decide, decide_precolored_subgraph, find_coloring

REPORT_SCHEMA = "surfcolor.report/1"


@dataclass
class RunReport:
    """Everything one invocation did, ready for JSON output."""

    command: str
    answer: object = None
    witness: object = None
    timings: dict = field(default_factory=dict)
    instance: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    seed: object = None

    def to_json(self):
        body = {
            "schema": REPORT_SCHEMA,
            "version": __version__,
            "command": self.command,
            "answer": self.answer,
            "witness": self.witness,
            "instance": self.instance,
            "params": self.params,
            "seed": self.seed,
            "timings": self.timings,
        }
        return json.dumps(body, sort_keys=True, indent=2)

    @property
    def exit_code(self):
        if self.answer is False:
            return 1
        return 0


class _Phases:
    """Wall-clock accounting, one entry per named phase."""

    def __init__(self):
        self.seconds = {}

    def run(self, name, thunk):
        t0 = time.perf_counter()
        out = thunk()
        self.seconds[name] = round(time.perf_counter() - t0, 6)
        return out


def _instance_stats(m, pinned=(), faces=()):
    g = m.girth(cap=9)
    return {
        "vertices": m.num_vertices,
        "edges": m.num_edges,
        "faces": m.num_faces,
        "genus": m.euler_genus() if m.num_edges else 0,
        "girth": None if g == math.inf else g,
        "marked_faces": len(tuple(faces)),
        "pinned": len(tuple(pinned)),
    }


def _load_params(args):
    """SolverParams from an optional JSON file plus --set overrides,
    and a JSON-ready record of what was used."""
    known = {f.name for f in fields(SolverParams)}
    values = {}
    if getattr(args, "params", None):
        with open(args.params) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise PreconditionError("params file must hold a JSON object")
        values.update(data)
    for item in getattr(args, "set", None) or ():
        key, sep, raw = item.partition("=")
        if not sep:
            raise PreconditionError("--set needs key=value, got %r" % item)
        try:
            values[key] = json.loads(raw)
        except ValueError:
            values[key] = raw
    unknown = sorted(set(values) - known)
    if unknown:
        raise PreconditionError("unknown parameters %s" % unknown)
    params = SolverParams(**values)
    record = asdict(params)
    record["overridden"] = sorted(values)
    return params, record


def _read_map(args, phases):
    with open(args.mapfile) as fh:
        text = fh.read()
    m = phases.run("parse", lambda: parse_map(text))
    if not getattr(args, "skip_girth_check", False):
        def gate():
            try:
                require_girth(m, 5)
            except EmbeddingError as exc:
                raise PreconditionError(
                    "girth below five (pass --skip-girth-check to let the "
                    "operation's own checks speak): %s" % exc)
        phases.run("girth_check", gate)
    return m


def _read_lists(args, m):
    if getattr(args, "lists", None):
        with open(args.lists) as fh:
            return parse_lists(fh.read())
    return {v: (1, 2, 3) for v in m.vertex_ids()}


def _csv_ints(text):
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise PreconditionError("expected comma-separated integers, got %r"
                                % text)


# -- subcommand bodies ----------------------------------------------------


def _cmd_decide(args):
    phases = _Phases()
    params, record = _load_params(args)
    m = _read_map(args, phases)
    lists = _read_lists(args, m)
    faces = _csv_ints(args.faces)
    pinned = _csv_ints(args.pinned)
    answer = phases.run("solve", lambda: decide(
        m, faces=faces, pinned=pinned, lists=lists, params=params))
    return RunReport("decide", answer=answer, timings=phases.seconds,
                     instance=_instance_stats(m, pinned, faces),
                     params=record, seed=args.seed)


def _cmd_extend(args):
    phases = _Phases()
    params, record = _load_params(args)
    m = _read_map(args, phases)
    lists = _read_lists(args, m)
    sub = (_csv_ints(args.subgraph_vertices), _csv_ints(args.subgraph_edges))
    answer = phases.run("solve", lambda: decide_precolored_subgraph(
        m, sub, lists, params=params))
    return RunReport("extend", answer=answer, timings=phases.seconds,
                     instance=_instance_stats(m, sub[0]),
                     params=record, seed=args.seed)


def _cmd_color(args):
    phases = _Phases()
    params, record = _load_params(args)
    m = _read_map(args, phases)
    lists = _read_lists(args, m)
    sub = (_csv_ints(args.subgraph_vertices), _csv_ints(args.subgraph_edges))
    coloring = phases.run("solve", lambda: find_coloring(
        m, sub, lists, params=params))
    witness = None
    if coloring is not None:
        edges = [m.edge_endpoints(e) for e in m.edge_ids()]
        if not check_coloring(edges, lists, coloring):
            raise PreconditionError("search returned an improper coloring")
        witness = {str(v): coloring[v] for v in sorted(coloring)}
    return RunReport("color", answer=coloring is not None, witness=witness,
                     timings=phases.seconds,
                     instance=_instance_stats(m, sub[0]),
                     params=record, seed=args.seed)


def _cmd_choosable(args):
    phases = _Phases()
    params, record = _load_params(args)
    m = _read_map(args, phases)
    answer = phases.run("solve", lambda: decide_choosable(m, params=params))
    witness = None
    if args.profile is not None:
        boundary = _csv_ints(args.profile)
        prof = phases.run("profile", lambda: profile_set(
            m, boundary, params=params))
        witness = {
            "boundary": list(prof.vertices),
            "entries": [[list(map(list, ls)), sorted(map(list, ps))]
                        for ls, ps in prof.rows()],
            "all_extendable": prof.all_extendable,
        }
    return RunReport("choosable", answer=answer, witness=witness,
                     timings=phases.seconds, instance=_instance_stats(m),
                     params=record, seed=args.seed)


def _cmd_verify(args):
    phases = _Phases()
    params, record = _load_params(args)
    m = _read_map(args, phases)
    lists = _read_lists(args, m)
    faces = _csv_ints(args.faces)
    pinned = _csv_ints(args.pinned)
    got = phases.run("solve", lambda: decide(
        m, faces=faces, pinned=pinned, lists=lists, params=params))
    if m.num_vertices > params.brute_force_vertex_cap:
        raise PreconditionError(
            "%d vertices exceed the brute-force cap %d"
            % (m.num_vertices, params.brute_force_vertex_cap))
    edges = [m.edge_endpoints(e) for e in m.edge_ids()]
    want = phases.run("brute_force", lambda: brute_colorable(
        m.vertex_ids(), edges, lists))
    return RunReport("verify", answer=got == want,
                     witness={"solver": got, "brute_force": want},
                     timings=phases.seconds,
                     instance=_instance_stats(m, pinned, faces),
                     params=record, seed=args.seed)


def _cmd_stats(args):
    phases = _Phases()
    with open(args.mapfile) as fh:
        text = fh.read()
    m = phases.run("parse", lambda: parse_map(text))
    if args.dot:
        lines = ["graph surfcolor {"]
        for v in m.vertex_ids():
            lines.append("  %d;" % v)
        for e in m.edge_ids():
            u, w = m.edge_endpoints(e)
            lines.append("  %d -- %d;" % (u, w))
        lines.append("}")
        with open(args.dot, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    return RunReport("stats", timings=phases.seconds,
                     instance=_instance_stats(m))


def _cmd_bench(args):
    phases = _Phases()
    params, record = _load_params(args)
    sizes = _csv_ints(args.sizes)
    if not sizes:
        raise PreconditionError("bench needs at least one size")
    rng = random.Random(args.seed)
    rows = []
    seconds = []
    for target in sizes:
        k = max(3, math.isqrt(target))
        m = phases.run("build_%d" % target,
                       lambda: add_pentagon_gadgets(hex_wall(k, k),
                                                    args.gadgets, rng))
        lists = {v: (1, 2, 3) for v in m.vertex_ids()}
        t0 = time.perf_counter()
        ans = decide(m, lists=lists, params=params)
        dt = time.perf_counter() - t0
        phases.seconds["decide_%d" % target] = round(dt, 6)
        seconds.append(dt)
        rows.append({"target": target, "vertices": m.num_vertices,
                     "edges": m.num_edges, "answer": ans})
    phases.seconds["ratios"] = [
        round(b / a, 3) for a, b in zip(seconds, seconds[1:])]
    return RunReport("bench", answer=all(r["answer"] for r in rows),
                     witness=rows, timings=phases.seconds,
                     params=record, seed=args.seed)


# -- argument wiring --------------------------------------------------------


def _add_common(sub, lists_arg=True):
    sub.add_argument("mapfile", help="rotation-system map file")
    if lists_arg:
        sub.add_argument("--lists", help="list assignment file "
                         "(default: {1,2,3} everywhere)")
    sub.add_argument("--params", help="JSON file of solver parameters")
    sub.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override one solver parameter")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--skip-girth-check", action="store_true",
                     help="skip the upfront girth-5 gate")


def build_parser():
    top = argparse.ArgumentParser(
        prog="surfcolor",
        description="List-coloring decisions for graphs on surfaces.")
    top.add_argument("--version", action="version", version=__version__)
    subs = top.add_subparsers(dest="command", required=True)

    p = subs.add_parser("decide", help="list-colorability with marked "
                        "faces and pinned vertices")
    _add_common(p)
    p.add_argument("--faces", default="", help="marked face ids, comma-separated")
    p.add_argument("--pinned", default="", help="pinned vertex ids")
    p.set_defaults(func=_cmd_decide)

    p = subs.add_parser("extend", help="extendability of a forced subgraph")
    _add_common(p)
    p.add_argument("--subgraph-vertices", default="", help="forced vertex ids")
    p.add_argument("--subgraph-edges", default="", help="forced edge ids")
    p.set_defaults(func=_cmd_extend)

    p = subs.add_parser("color", help="search for an explicit coloring")
    _add_common(p)
    p.add_argument("--subgraph-vertices", default="", help="forced vertex ids")
    p.add_argument("--subgraph-edges", default="", help="forced edge ids")
    p.set_defaults(func=_cmd_color)

    p = subs.add_parser("choosable", help="3-choosability of the map")
    _add_common(p, lists_arg=False)
    p.add_argument("--profile", default=None, metavar="VERTICES",
                   help="also dump the behavior table over these "
                   "boundary vertices")
    p.set_defaults(func=_cmd_choosable)

    p = subs.add_parser("verify", help="cross-check the solver against "
                        "brute force on one instance")
    _add_common(p)
    p.add_argument("--faces", default="", help="marked face ids")
    p.add_argument("--pinned", default="", help="pinned vertex ids")
    p.set_defaults(func=_cmd_verify)

    p = subs.add_parser("stats", help="parse a map and report its shape")
    p.add_argument("mapfile")
    p.add_argument("--dot", help="also write the graph in DOT format here")
    p.set_defaults(func=_cmd_stats)

    p = subs.add_parser("bench", help="planar scaling benchmark")
    p.add_argument("--sizes", default="10000,20000,40000,80000",
                   help="target vertex counts, comma-separated")
    p.add_argument("--gadgets", type=int, default=10,
                   help="pentagon gadgets per instance")
    p.add_argument("--params", help="JSON file of solver parameters")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)

    return top


def run(argv=None):
    """Parse arguments, dispatch, and return the report."""
    args = build_parser().parse_args(argv)
    return args.func(args)


def main(argv=None):
    try:
        report = run(argv)
    except (SurfcolorError, OracleLimitError) as exc:
        print(json.dumps({"schema": REPORT_SCHEMA, "error": str(exc)},
                         sort_keys=True, indent=2))
        return 2
    except OSError as exc:
        print(json.dumps({"schema": REPORT_SCHEMA, "error": str(exc)},
                         sort_keys=True, indent=2))
        return 2
    print(report.to_json())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
