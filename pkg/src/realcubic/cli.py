"""Command-line front end.

Subcommands map one-to-one onto the library surface: `classify`, `lines`,
`curve` and `wall-label` run the numeric pipelines on user input, while
`graph`, `orbits`, `counts`, `walls` and `polotovsky` serialize the
combinatorial tables.  Data goes to stdout, diagnostics to stderr.  Exit
codes: 0 success, 2 mathematical rejection (singular or non-transversal
input), 1 computation failure, 64 usage error.

Output is deterministic: a fixed argv (including --seed) produces
byte-identical bytes on stdout.  JSON is rendered with sorted keys and a
two-space indent; `--format dot` is available for `graph` only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .algebra import complex_roots, resultant, strip_high, univ_degree
from .arrangements import load_extremal, polotovsky_closure
from .classify import (
    _plane_form,
    classify_surface,
    as_projective_cubic,
    wall_label,
)
from .combinat import (
    TOTAL_EXTENDED_WALLS,
    TOTAL_ORDINARY_WALLS,
    WALL_ARRANGEMENT_NOTE,
    cremona_orbits,
    load_wall_graph,
    oval_line_count,
    oval_line_count_incidence,
    point_labels,
    real_line_total,
    validate_wall_graph,
    wall_table,
)
from .config import Config
from .curve import (
    _apply_chart,
    _chart_candidates,
    _dehomogenize,
    _is_squarefree,
    analyze_cubic,
    conic_cubic_intersection,
    locate,
)
from .errors import (
    InternalInconsistency,
    MathematicalRejection,
    RealcubicError,
    SharedComponent,
)
from .lines import solve_lines

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_REJECTED = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the CLI contract reserves 2 for
    # mathematical rejection, so route usage trouble to 64 instead
    def error(self, message):
        raise UsageError(message)


def render_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def build_config(seed: int, tol) -> Config:
    cfg = Config()
    cfg.lines.seed = seed
    cfg.classify.seed = seed
    if tol is not None:
        if tol <= 0:
            raise UsageError("--tol must be positive")
        cfg.lines.residual_tol = tol
    return cfg


# ---------------------------------------------------------------------------
# payload builders
# ---------------------------------------------------------------------------

def classify_payload(surface: str, plane: str, cfg: Config) -> dict:
    return classify_surface(surface, plane, cfg).as_dict()


def lines_payload(surface: str, cfg: Config) -> list:
    lineset = solve_lines(as_projective_cubic(surface), cfg.lines)
    records = []
    for line in lineset.lines:
        pl = [[float(c.real), float(c.imag)] for c in line.plucker]
        records.append({
            "plucker": pl,
            "real": bool(line.real),
            "residual": float(line.residual),
        })
    records.sort(key=lambda r: tuple(
        (round(c[0], 9), round(c[1], 9)) for c in r["plucker"]))
    return records


def _normalized_triple(v) -> list:
    vals = [complex(t) for t in v]
    pivot = max(vals, key=abs)
    vals = [t / pivot for t in vals]
    return [[float(t.real), float(t.imag)] for t in vals]


def _fibre_y(b_aff, c_aff, x0: complex) -> complex:
    """The y over an isolated conic-cubic intersection at complex x0."""
    bq = [complex(sum(float(c) * x0 ** e[0] for e, c in p.terms.items()))
          for p in b_aff.coeffs_in("y")]
    cq = [complex(sum(float(c) * x0 ** e[0] for e, c in p.terms.items()))
          for p in c_aff.coeffs_in("y")]
    roots = np.roots(list(reversed(bq)))
    best, score = None, float("inf")
    for r in roots:
        val = abs(sum(c * r ** k for k, c in enumerate(cq)))
        if val < score:
            best, score = complex(r), val
    if best is None:
        raise InternalInconsistency("conic fibre has no roots")
    return best


def curve_payload(cubic: str, conic, cfg: Config) -> dict:
    C = _plane_form(cubic, 3, "cubic")
    analysis = analyze_cubic(C, cfg.sweep)
    payload = {
        "components": analysis.components,
        "oval_present": analysis.components == 2,
        "transversal": None,
        "intersections": [],
    }
    if conic is None:
        return payload
    B = _plane_form(conic, 2, "conic")

    for M in _chart_candidates(60):
        b_aff = _dehomogenize(_apply_chart(B, M))
        c_aff = _dehomogenize(_apply_chart(C, M))
        res = resultant(b_aff, c_aff, "y")
        if res.is_zero():
            raise SharedComponent("conic and cubic share a component")
        dense = strip_high([q.constant_value() for q in res.coeffs_in("x")])
        if univ_degree(dense) != 6 or not _is_squarefree(dense):
            continue
        break
    else:
        payload["transversal"] = False
        return payload
    payload["transversal"] = True

    entries = []
    real_points = conic_cubic_intersection(b_aff, c_aff)
    for u, v in real_points:
        original = tuple(
            float(M[i][0]) * u + float(M[i][1]) * v + float(M[i][2])
            for i in range(3))
        entries.append({
            "point": _normalized_triple(original),
            "component": locate(analysis, original),
            "real": True,
        })
    complex_xs = sorted(complex_roots([float(c) for c in dense]),
                        key=lambda r: -abs(r.imag))[:6 - len(real_points)]
    if complex_xs and min(abs(r.imag) for r in complex_xs) < 1e-9:
        raise InternalInconsistency("real/complex root split disagrees "
                                    "with the exact real count")
    for x0 in complex_xs:
        y0 = _fibre_y(b_aff, c_aff, x0)
        original = tuple(
            complex(M[i][0]) * x0 + complex(M[i][1]) * y0 + complex(M[i][2])
            for i in range(3))
        entries.append({
            "point": _normalized_triple(original),
            "component": None,
            "real": False,
        })
    entries.sort(key=lambda rec: (not rec["real"],
                                  tuple(map(tuple, rec["point"]))))
    payload["intersections"] = entries
    return payload


def wall_label_payload(conic: str, cubic: str) -> dict:
    return wall_label(conic, cubic).as_dict()


def graph_payload() -> dict:
    g = load_wall_graph()
    issues = validate_wall_graph(g)
    return {
        "vertices": [g.vertices[cid] for cid in sorted(g.vertices)],
        "edges": sorted(g.edges, key=lambda e: (e["u"], e["v"])),
        "issues": issues,
    }


def graph_dot() -> str:
    g = load_wall_graph()
    out = ["graph wall_crossing {"]
    out.append("  node [shape=circle];")
    for cid in sorted(g.vertices):
        v = g.vertices[cid]
        lab = ",".join(str(t) for t in v["label"])
        style = " style=filled fillcolor=gray80" if v.get("black") else ""
        out.append(f'  {cid} [label="{cid}\\n({lab})"{style}];')
    for e in sorted(g.edges, key=lambda e: (e["u"], e["v"])):
        w = ",".join(str(t) for t in e["wall"])
        out.append(f'  {e["u"]} -- {e["v"]} [label="({w})"];')
    out.append("}")
    return "\n".join(out) + "\n"


def orbits_payload(mu) -> dict:
    def table(m: int) -> dict:
        return {
            "mu": m,
            "orbits": [[list(lab) for lab in orbit]
                       for orbit in cremona_orbits(m)],
        }
    if mu is None:
        return {"tables": [table(m) for m in range(4)]}
    return table(mu)


def counts_payload() -> dict:
    tables = []
    for m in range(4):
        total = real_line_total(m)
        rows = []
        for lab in sorted(point_labels(m)):
            n = oval_line_count(lab, m)
            rows.append({
                "label": list(lab),
                "oval_lines": n,
                "oval_lines_incidence": oval_line_count_incidence(lab, m),
                "pseudoline_lines": total - n,
            })
        tables.append({"mu": m, "real_line_total": total, "labels": rows})
    return {"tables": tables}


def walls_payload() -> dict:
    return {
        "rows": wall_table(),
        "total_ordinary": TOTAL_ORDINARY_WALLS,
        "total_extended": TOTAL_EXTENDED_WALLS,
        "note": WALL_ARRANGEMENT_NOTE,
    }


def polotovsky_payload() -> dict:
    closure = polotovsky_closure(load_extremal())
    levels: dict = {}
    ordered = [arr for _, arr in sorted(closure.items())]
    for arr in ordered:
        levels[str(arr.crossings())] = levels.get(str(arr.crossings()), 0) + 1
    return {
        "count": len(ordered),
        "levels": levels,
        "arrangements": [arr.as_dict() for arr in ordered],
    }


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _classify_text(rep: dict) -> str:
    lines = [f"class {rep['class_id']} ({rep['projective_class']}): "
             f"{rep['real_lines']} real lines"]
    lines.append(f"  section components: {rep['curve_components']}")
    if rep["oval_line_count"] is not None:
        lines.append(f"  lines meeting the oval: {rep['oval_line_count']}")
    lines.append(f"  complement components: {rep['b0_complement']}")
    if rep["oval_in_sphere"] is not None:
        lines.append(f"  oval on the spherical part: {rep['oval_in_sphere']}")
    for w in rep["warnings"]:
        lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"


def _lines_text(records: list) -> str:
    n_real = sum(1 for r in records if r["real"])
    worst = max(r["residual"] for r in records)
    out = [f"{len(records)} lines, {n_real} real, max residual {worst:.3g}"]
    for i, r in enumerate(records):
        kind = "real   " if r["real"] else "complex"
        head = ", ".join(f"{c[0]:+.6f}{c[1]:+.6f}j" for c in r["plucker"][:3])
        out.append(f"  {i:2d} {kind} [{head}, ...]")
    return "\n".join(out) + "\n"


def _curve_text(payload: dict) -> str:
    out = [f"components: {payload['components']}"
           + (" (oval + pseudoline)" if payload["oval_present"] else "")]
    if payload["transversal"] is None:
        return out[0] + "\n"
    out.append(f"transversal: {payload['transversal']}")
    for rec in payload["intersections"]:
        where = rec["component"] or "complex"
        pt = ", ".join(f"{c[0]:.6f}{c[1]:+.6f}j" for c in rec["point"])
        out.append(f"  {where}: [{pt}]")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# batch mode
# ---------------------------------------------------------------------------

_BATCH_PRIMARY = {"classify": "surface", "lines": "surface", "curve": "cubic"}


def _parse_batch_line(cmd: str, line: str) -> dict:
    if line.lstrip().startswith("{"):
        try:
            entry = json.loads(line)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad batch line: {exc}")
        if not isinstance(entry, dict):
            raise UsageError("batch JSON lines must be objects")
        return entry
    primary = _BATCH_PRIMARY.get(cmd)
    if primary is None:
        raise UsageError(f"{cmd} batch lines must be JSON objects")
    return {primary: line.strip()}


def _batch_worker(job) -> dict:
    cmd, entry, seed, tol = job
    try:
        cfg = build_config(seed, tol)
        if cmd == "classify":
            out = classify_payload(entry["surface"],
                                   entry.get("plane", "w"), cfg)
        elif cmd == "lines":
            out = {"lines": lines_payload(entry["surface"], cfg)}
        elif cmd == "curve":
            out = curve_payload(entry["cubic"], entry.get("conic"), cfg)
        else:
            out = wall_label_payload(entry["conic"], entry["cubic"])
        return {"ok": True, "result": out}
    except MathematicalRejection as exc:
        return {"ok": False, "rejected": True,
                "error": {"type": type(exc).__name__, "message": str(exc)}}
    except (RealcubicError, ValueError, TypeError, KeyError) as exc:
        return {"ok": False, "rejected": False,
                "error": {"type": type(exc).__name__, "message": str(exc)}}


def run_batch(cmd: str, path: str, seed: int, tol, jobs) -> tuple:
    try:
        if path == "-":
            raw = [ln.rstrip("\n") for ln in sys.stdin]
        else:
            with open(path) as fh:
                raw = [ln.rstrip("\n") for ln in fh]
    except OSError as exc:
        raise UsageError(f"cannot read batch file: {exc}")
    entries = [_parse_batch_line(cmd, ln) for ln in raw
               if ln.strip() and not ln.lstrip().startswith("#")]
    if not entries:
        raise UsageError("batch file holds no inputs")
    build_config(seed, tol)        # validate once, outside the workers
    workers = jobs or min(8, os.cpu_count() or 1)
    jobs_arg = [(cmd, e, seed, tol) for e in entries]
    if workers == 1 or len(entries) == 1:
        results = [_batch_worker(j) for j in jobs_arg]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_batch_worker, jobs_arg))
    code = EXIT_OK
    if any(not r["ok"] and not r.get("rejected") for r in results):
        code = EXIT_FAILURE
    elif any(not r["ok"] for r in results):
        code = EXIT_REJECTED
    payload = [r["result"] if r["ok"] else {"error": r["error"]}
               for r in results]
    return payload, code


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="realcubic",
                description="deformation classes of real affine cubic "
                            "surfaces and their combinatorics")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd")

    def common(sp, batchable=False):
        sp.add_argument("--seed", type=int, default=0,
                        help="random seed for the numeric pipelines")
        sp.add_argument("--tol", type=float, default=None,
                        help="residual tolerance override for line solving")
        sp.add_argument("--format", choices=("json", "dot", "text"),
                        default="json")
        if batchable:
            sp.add_argument("--batch", metavar="FILE",
                            help="file of inputs, one per line ('-' for "
                                 "stdin); results come back in input order")
            sp.add_argument("--jobs", type=int, default=None,
                            help="parallel workers for --batch")

    sp = sub.add_parser("classify", help="deformation class of a surface")
    sp.add_argument("--surface", help="cubic in x,y,z (affine) or x,y,z,w")
    sp.add_argument("--plane", default="w", help="plane at infinity")
    common(sp, batchable=True)

    sp = sub.add_parser("lines", help="the 27 lines of a cubic surface")
    sp.add_argument("--surface")
    common(sp, batchable=True)

    sp = sub.add_parser("curve", help="plane cubic topology and "
                                      "conic-cubic intersections")
    sp.add_argument("--cubic", help="plane cubic in x,y[,z]")
    sp.add_argument("--conic", default=None, help="optional conic to "
                                                  "intersect with")
    common(sp, batchable=True)

    sp = sub.add_parser("wall-label", help="crossing label of a nodal wall")
    sp.add_argument("--conic")
    sp.add_argument("--cubic")
    common(sp, batchable=True)

    for name, helptext in (
            ("graph", "wall-crossing graph (json or dot)"),
            ("orbits", "Cremona orbits of point labels"),
            ("counts", "oval line counts for all labels"),
            ("walls", "wall-count table"),
            ("polotovsky", "closure of the extremal conic-cubic "
                           "arrangements")):
        sp = sub.add_parser(name, help=helptext)
        if name == "orbits":
            sp.add_argument("--mu", type=int, choices=(0, 1, 2, 3),
                            default=None)
        common(sp)
    return p


def _dispatch(ns) -> tuple:
    """Run one subcommand; returns (stdout text, exit code)."""
    if not ns.cmd:
        raise UsageError("a subcommand is required (see --help)")
    fmt = ns.format
    if fmt == "dot" and ns.cmd != "graph":
        raise UsageError("--format dot applies to the graph subcommand only")

    if getattr(ns, "batch", None):
        given = [f for f in ("surface", "cubic", "conic")
                 if getattr(ns, f, None)]
        if given:
            raise UsageError(f"--batch excludes --{given[0]}")
        if fmt != "json":
            raise UsageError("--batch output is json only")
        payload, code = run_batch(ns.cmd, ns.batch, ns.seed, ns.tol,
                                  getattr(ns, "jobs", None))
        return render_json(payload), code

    if ns.cmd == "classify":
        if not ns.surface:
            raise UsageError("classify needs --surface or --batch")
        rep = classify_payload(ns.surface, ns.plane,
                               build_config(ns.seed, ns.tol))
        return (_classify_text(rep) if fmt == "text"
                else render_json(rep)), EXIT_OK
    if ns.cmd == "lines":
        if not ns.surface:
            raise UsageError("lines needs --surface or --batch")
        records = lines_payload(ns.surface, build_config(ns.seed, ns.tol))
        return (_lines_text(records) if fmt == "text"
                else render_json(records)), EXIT_OK
    if ns.cmd == "curve":
        if not ns.cubic:
            raise UsageError("curve needs --cubic or --batch")
        payload = curve_payload(ns.cubic, ns.conic,
                                build_config(ns.seed, ns.tol))
        return (_curve_text(payload) if fmt == "text"
                else render_json(payload)), EXIT_OK
    if ns.cmd == "wall-label":
        if not (ns.conic and ns.cubic):
            raise UsageError("wall-label needs --conic and --cubic, "
                             "or --batch")
        payload = wall_label_payload(ns.conic, ns.cubic)
        return render_json(payload), EXIT_OK
    if ns.cmd == "graph":
        if fmt == "dot":
            return graph_dot(), EXIT_OK
        payload = graph_payload()
        code = EXIT_OK if not payload["issues"] else EXIT_FAILURE
        return render_json(payload), code
    if ns.cmd == "orbits":
        return render_json(orbits_payload(ns.mu)), EXIT_OK
    if ns.cmd == "counts":
        return render_json(counts_payload()), EXIT_OK
    if ns.cmd == "walls":
        return render_json(walls_payload()), EXIT_OK
    if ns.cmd == "polotovsky":
        return render_json(polotovsky_payload()), EXIT_OK
    raise InternalInconsistency(f"unhandled subcommand {ns.cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        out, code = _dispatch(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MathematicalRejection as exc:
        print(f"rejected ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_REJECTED
    except (ValueError, TypeError) as exc:
        # input coercion trouble: bad polynomial text, wrong variables
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RealcubicError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_FAILURE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
