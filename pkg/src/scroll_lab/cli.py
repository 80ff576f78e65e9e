"""Command-line interface: analyze-net, analyze-quadric, self-test."""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DEGENERATE = 2
EXIT_UNRESOLVED = 3
EXIT_MALFORMED = 64
EXIT_NOT_IN_SPAN = 65
EXIT_RANK = 66

VERSION = "0.1.0"
DEFAULT_SEED = 1


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    tol_nullspace: float = 1e-8
    tol_cluster: float = 1e-6
    tol_residual: float = 1e-8
    samples: int = 120
    lines: int = 60
    pts_per_line: int = 6
    sweep: int = 2000
    ruling_swap: bool = False
    out: Optional[str] = None

    def validate(self):
        for name in ("tol_nullspace", "tol_cluster", "tol_residual"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.lines < 40:
            raise ValueError("--lines must be at least 40")
        if self.samples < self.lines:
            raise ValueError("--samples must be at least --lines")
        if self.pts_per_line < 5:
            raise ValueError("--pts-per-line must be at least 5")
        if self.sweep < 8:
            raise ValueError("--sweep must be at least 8")
        return self

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


class InputError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def data_path(name: str) -> Path:
    return Path(str(resources.files("scroll_lab") / "data" / name))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def sha256_of(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(EXIT_MALFORMED, f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(EXIT_MALFORMED, f"malformed JSON in {path}: {exc}") from exc


def _load_quartic(path):
    from .curvelab import QuarticInputError, PlaneQuartic, check_smooth_quartic
    data = _read_json(path)
    try:
        f = PlaneQuartic.from_json(data)
    except (QuarticInputError, KeyError, TypeError, ValueError) as exc:
        raise InputError(EXIT_MALFORMED, f"malformed quartic: {exc}") from exc
    cert = check_smooth_quartic(f)
    f.certificate = cert
    if not f.is_smooth():
        raise InputError(EXIT_MALFORMED, f"quartic is not smooth ({cert.status})")
    return f, data


def _write_outputs(cfg, report_json, artifacts):
    if not cfg.out:
        return []
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, obj in [("report.json", report_json)] + artifacts:
        (out / name).write_text(dumps(obj))
        written.append(str(out / name))
    return written


def _emit(cfg, report_json, artifacts, json_only):
    written = _write_outputs(cfg, report_json, artifacts)
    if json_only:
        sys.stdout.write(dumps(report_json))
        return
    r = report_json
    print(f"classification:        {r['classification']}  ({r['classification_reason']})")
    for key in ("scroll_degree", "double_curve_degree", "triple_count", "multiplicity_profile"):
        v = r[key]["value"]
        print(f"{key + ':':<23}{v if v is not None else 'null  (' + r[key]['reason'] + ')'}")
    for w in written:
        print(f"wrote {w}")


def _wrap(report, cfg, inputs):
    body = report.to_json()
    body["config"] = cfg.to_json()
    body["input_hashes"] = {k: sha256_of(v) for k, v in sorted(inputs.items())}
    body["version"] = VERSION
    return body


def _provenance(body):
    return {"input_hashes": body["input_hashes"], "seed": body["config"]["seed"],
            "tolerances": body["tolerances"]}


def cmd_analyze_net(args, cfg) -> int:
    from .netlab import DEGENERATE, NetInputError, NetOfQuadrics
    from .scrollab.classify import CASE_A, classify_net
    path = args.net or data_path("example_net.json")
    data = _read_json(path)
    try:
        net = NetOfQuadrics.from_json(data)
    except NetInputError as exc:
        raise InputError(EXIT_MALFORMED, str(exc)) from exc
    report = classify_net(net, cfg)
    body = _wrap(report, cfg, {"net": data})
    arts = []
    if "octic" in report.artifacts:
        oct_json = report.artifacts["octic"].to_json()
        oct_json["provenance"] = _provenance(body)
        ts = report.artifacts["trisecants"]
        samples = {"gamma": report.artifacts["gamma"].to_json(),
                   "trisecants": [t.to_json() for t in ts.lines]}
        arts = [("octic.json", oct_json), ("samples.json", samples)]
    _emit(cfg, body, arts, args.json_only)
    if net.status == DEGENERATE:
        print(f"degenerate net: {net.reason}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK if report.classification == CASE_A else EXIT_UNRESOLVED


def cmd_analyze_quadric(args, cfg) -> int:
    from .curvelab import in_bicanonical_span, pullback_residual, sample_curve_points
    from .scrollab.classify import UNRESOLVED, classify_scroll
    from .scrollab.frame import QuadricForm6
    from .scrollab.special import construct_case_b, random_bicanonical_quadric
    f, fdata = _load_quartic(args.quartic or data_path("example_quartic.json"))
    inputs = {"quartic": fdata}
    if args.case_b:
        Q = construct_case_b(f, cfg.seed)
        inputs["quadric"] = {"construction": "case-b", "seed": cfg.seed}
    elif args.random or not args.quadric:
        Q = random_bicanonical_quadric(f, cfg.seed)
        inputs["quadric"] = {"construction": "random", "seed": cfg.seed}
    else:
        qdata = _read_json(args.quadric)
        try:
            Q = QuadricForm6.from_json(qdata)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(EXIT_MALFORMED, f"malformed quadric: {exc}") from exc
        inputs["quadric"] = qdata
    if Q.rank < 6:
        raise InputError(EXIT_RANK, f"quadric has rank {Q.rank}, need 6")
    if Q.exact is not None:
        through = in_bicanonical_span(Q.exact, f)
    else:
        through = pullback_residual(Q.gram, f, sample_curve_points(f, 20, cfg.seed)) < cfg.tol_residual
    if not through:
        raise InputError(EXIT_NOT_IN_SPAN, "quadric is not in |I_C(2)|: it does not contain the "
                                           "lifted curve")
    report = classify_scroll(Q, f, cfg)
    body = _wrap(report, cfg, inputs)
    body["quadric"] = Q.to_json()
    arts = []
    if "octic" in report.artifacts:
        oct_json = report.artifacts["octic"].to_json()
        oct_json["provenance"] = _provenance(body)
        arts = [("octic.json", oct_json), ("samples.json", report.artifacts["line_map"].to_json())]
    _emit(cfg, body, arts, args.json_only)
    return EXIT_UNRESOLVED if report.classification == UNRESOLVED else EXIT_OK


def cmd_self_test(args, cfg) -> int:
    from .selftest import run_self_test
    golden = Path(args.golden) if args.golden else data_path("golden")
    t0 = time.perf_counter()
    rows = run_self_test(golden, cfg.seed)
    failed = [r for r in rows if not r["passed"]]
    if args.json_only:
        sys.stdout.write(dumps({"checks": rows, "passed": not failed}))
    else:
        width = max(len(r["name"]) for r in rows)
        for r in rows:
            print(f"{r['name']:<{width}}  {'PASS' if r['passed'] else 'FAIL'}  {r['detail']}")
        print(f"{len(rows) - len(failed)}/{len(rows)} passed in {time.perf_counter() - t0:.1f} s")
    for r in failed:
        print(f"self-test failure: {r['name']}: {r['detail']}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $SCROLL_LAB_SEED or 1)")
    common.add_argument("--tol-nullspace", type=float, default=1e-8)
    common.add_argument("--tol-cluster", type=float, default=1e-6)
    common.add_argument("--tol-residual", type=float, default=1e-8)
    common.add_argument("--samples", type=int, default=120, help="curve samples")
    common.add_argument("--lines", type=int, default=60, help="lines used to fit the scroll")
    common.add_argument("--pts-per-line", type=int, default=6)
    common.add_argument("--sweep", type=int, default=2000, help="triple-locus sweep resolution")
    common.add_argument("--out", default=None, help="directory for report and artifacts")
    common.add_argument("--ruling-swap", action="store_true", help="use the other ruling")
    common.add_argument("--json-only", action="store_true", help="print only the JSON report")

    p = _Parser(prog="scroll-lab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    net = sub.add_parser("analyze-net", parents=[common], help="scroll of trisecants of a net")
    net.add_argument("net", nargs="?", help="net JSON (default: bundled example)")
    quad = sub.add_parser("analyze-quadric", parents=[common], help="scroll of a quadric through C")
    quad.add_argument("quartic", nargs="?", help="quartic JSON (default: bundled example)")
    quad.add_argument("quadric", nargs="?", help="6x6 Gram matrix JSON")
    g = quad.add_mutually_exclusive_group()
    g.add_argument("--random", action="store_true", help="seeded random quadric through C")
    g.add_argument("--case-b", action="store_true", help="quadric containing the Veronese surface")
    st = sub.add_parser("self-test", parents=[common], help="exact-vs-oracle suites")
    st.add_argument("--golden", default=None, help="directory of golden files")
    return p


def config_from_args(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("SCROLL_LAB_SEED")
        seed = int(env) if env else DEFAULT_SEED
    return RunConfig(seed, args.tol_nullspace, args.tol_cluster, args.tol_residual, args.samples,
                     args.lines, args.pts_per_line, args.sweep, args.ruling_swap, args.out).validate()


COMMANDS = {"analyze-net": cmd_analyze_net, "analyze-quadric": cmd_analyze_quadric,
            "self-test": cmd_self_test}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return COMMANDS[args.command](args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
