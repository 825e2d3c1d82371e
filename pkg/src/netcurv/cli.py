"""Command-line front end: validation, curvature, densities, classification,
cone areas, example emission and projection plots."""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys

import numpy as np

from . import cone_area, cone_density, curvature, examples, io as graphio
from . import plotting, spaces, steiner
from .graph import EmbeddedGraph, validate
from .quadrature import QuadratureConfig
from .spaces import GeometryError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_NUMERIC_CODES = {"QUADRATURE_NONCONVERGED", "SEARCH_FAILED", "DESCENT_ORACLE_MISMATCH",
                  "ORACLE_MISMATCH"}


def _fmt(value):
    """Round every float to 12 significant digits, recursively."""
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, (np.floating,)):
        return float(f"{float(value):.12g}")
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_fmt(float(v)) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    return value


def _flatten(prefix, value, rows):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, value))


def _emit(report, args):
    report = _fmt(report)
    if args.format == "csv":
        buf = _io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["key", "value"])
        rows = []
        _flatten("", report, rows)
        for key, val in rows:
            writer.writerow([key, val])
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(code, message, status):
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")
    return status


def _load_graph(args) -> EmbeddedGraph:
    if args.example:
        name, _, raw = args.example.partition(":")
        params = [float(p) for p in raw.split(",") if p] if raw else []
        return examples.builtin_example(name, params)
    if not args.input:
        raise graphio.SchemaError("provide --input PATH or --example NAME[:p1,p2,...]")
    return graphio.load_graph(args.input)


def _parse_apex(args, graph):
    if args.apex is None:
        raise graphio.SchemaError("this command needs --apex X,Y,Z")
    parts = [float(p) for p in args.apex.split(",")]
    if graph.space.curved and len(parts) == 3:
        # convenience: lift flat coordinates onto the model surface
        return spaces.lift_point(graph.space, np.array(parts))
    if len(parts) != graph.space.dim:
        raise graphio.SchemaError(
            f"apex needs {graph.space.dim} coordinates for this ambient")
    return np.array(parts)


def _steiner_payload(res):
    return {
        "e0": res.e0,
        "angle_sum": res.angle_sum,
        "tc": res.tc,
        "method": res.method,
        "certificate": res.certificate,
    }


def _classification_payload(sing):
    return {
        "class": sing.label,
        "tc": sing.tc,
        "threshold_y": sing.threshold_y,
        "threshold_t": sing.threshold_t,
        "boundary_case": sing.boundary,
        "margins": sing.margins,
        "notes": list(sing.notes),
    }


def _run(args):
    cfg = QuadratureConfig(rel_tol=args.tol) if args.tol else QuadratureConfig()

    if args.command == "example":
        name, _, raw = (args.example or "").partition(":")
        params = [float(p) for p in raw.split(",") if p] if raw else []
        if not name:
            raise graphio.SchemaError("example command needs --example NAME")
        graph = examples.builtin_example(name, params)
        if args.emit or args.out:
            if not args.out:
                raise graphio.SchemaError("--emit needs --out PATH")
            graphio.save_graph(graph, args.out)
        summary = {"example": name, "vertices": len(graph.vertices),
                   "arcs": len(graph.arcs),
                   "written": args.out if (args.emit or args.out) else None}
        sys.stdout.write(json.dumps(_fmt(summary), indent=2, sort_keys=True) + "\n")
        return EXIT_OK

    graph = _load_graph(args)
    report = validate(graph)

    if args.command == "validate":
        payload = {"ok": report.ok,
                   "violations": [{"code": v.code, "location": v.location,
                                   "detail": v.detail} for v in report.violations]}
        _emit(payload, args)
        return EXIT_OK if report.ok else EXIT_VALIDATION

    if not report.ok:
        return _fail(report.violations[0].code,
                     f"graph fails validation at {report.violations[0].location}",
                     EXIT_VALIDATION)

    if args.command == "tc":
        rep = curvature.total_curvature(graph, cfg, seed=args.seed)
        payload = {
            "total": rep.total,
            "arc_total": rep.arc_total(),
            "vertex_total": rep.vertex_total(),
            "per_arc": rep.per_arc,
            "per_vertex": {k: _steiner_payload(v) for k, v in rep.per_vertex.items()},
        }
        _emit(payload, args)
        return EXIT_OK

    if args.command == "steiner":
        payload = {v.id: _steiner_payload(steiner.vertex_tc(graph, v.id, seed=args.seed))
                   for v in graph.vertices}
        _emit(payload, args)
        return EXIT_OK

    if args.command == "cone-density":
        apex = _parse_apex(args, graph)
        rep = cone_density.cone_density_gb(graph, apex, cfg)
        payload = {
            "apex": rep.apex,
            "density_gb": rep.density_gb,
            "density_projection": rep.density_projection,
            "discrepancy": rep.discrepancy,
            "per_arc_signed": rep.per_arc_signed,
            "endpoint_angle_terms": {f"{aid}:{end}": v for (aid, end), v
                                     in rep.endpoint_angle_terms.items()},
        }
        _emit(payload, args)
        if args.svg:
            plotting.render_projection(graph, apex, args.svg, cfg=cfg)
        return EXIT_OK

    if args.command == "classify":
        sing = cone_density.classify(graph, cfg, seed=args.seed)
        _emit(_classification_payload(sing), args)
        return EXIT_OK

    if args.command == "cone-area":
        apex = _parse_apex(args, graph)
        rep = cone_area.cone_area_report(graph, apex, cfg)
        payload = {"apex": rep.apex, "area_induced": rep.area_induced,
                   "area_comparison": rep.area_comparison,
                   "density_comparison": rep.density_comparison}
        _emit(payload, args)
        return EXIT_OK

    if args.command == "corrected-classify":
        rep = cone_area.corrected_classify(graph, cfg, budget=args.budget,
                                           seed=args.seed)
        payload = {
            "corrected_tc": rep.corrected_tc,
            "raw_tc": rep.raw_tc,
            "extremal_area": rep.extremal_area,
            "extremal_apex": rep.extremal_apex,
            "approximate": rep.approximate,
            "classification": _classification_payload(rep.singularity),
        }
        _emit(payload, args)
        return EXIT_OK

    if args.command == "plot":
        apex = _parse_apex(args, graph)
        target = args.svg or args.out
        if not target:
            raise graphio.SchemaError("plot needs --svg PATH (or --out PATH)")
        plotting.render_projection(graph, apex, target, cfg=cfg)
        sys.stdout.write(json.dumps({"written": target}) + "\n")
        return EXIT_OK

    raise graphio.SchemaError(f"unknown command {args.command!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="netcurv",
        description="Total curvature, cone densities and singularity "
                    "classification for embedded graphs.")
    parser.add_argument("command", choices=[
        "validate", "tc", "steiner", "cone-density", "classify",
        "cone-area", "corrected-classify", "example", "plot"])
    parser.add_argument("--input", help="graph JSON file")
    parser.add_argument("--example", help="builtin example NAME[:p1,p2,...]")
    parser.add_argument("--apex", help="apex coordinates X,Y,Z (curved: 4 or lifted 3)")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=None,
                        help="relative quadrature tolerance")
    parser.add_argument("--out", help="write the report to a file")
    parser.add_argument("--svg", help="write a projection figure to a file")
    parser.add_argument("--emit", action="store_true",
                        help="with the example command: write the graph file")
    parser.add_argument("--budget", type=int, default=400,
                        help="evaluation budget for extremal-area searches")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except graphio.SchemaError as e:
        return _fail("SCHEMA", str(e), EXIT_IO)
    except FileNotFoundError as e:
        return _fail("IO", str(e), EXIT_IO)
    except OSError as e:
        return _fail("IO", str(e), EXIT_IO)
    except GeometryError as e:
        status = EXIT_NUMERIC if e.code in _NUMERIC_CODES else EXIT_VALIDATION
        return _fail(e.code, str(e), status)


if __name__ == "__main__":
    sys.exit(main())
