"""Batch command-line front end.

Every invocation emits one machine-readable report (JSON by default)
following the ``ap-corona/v1`` schema shipped in ``schemas/``.  Exit codes
separate three outcomes: 0 success, 2 a *definitive negative mathematical
answer* (membership refusal, saturation witness, hull rejection, vanishing
corona infimum, failed verification), 1 an actual error.  Reports are
byte-identical across runs for identical inputs and seed, except for the
wall-time field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from mpmath import iv

from . import __version__
from .algebra import APPolynomial, FrequencyBasis, make_basis
from .completion import APMatrix, complete_matrix, verify_completion
from .corona import CoronaConfig, certify_infimum, invert, solve_bezout
from .errors import (
    APCoronaError,
    ConfigError,
    CoronaConditionError,
    ExpressionError,
    InfimumZeroError,
    NotInvertibleError,
)
from .expressions import (
    parse_ap_expression,
    parse_frequency,
    render,
    render_frequency,
)
from .factor import exp_truncated, logarithm_with_path
from .hull import (
    CoordinateModel,
    HullPoint,
    default_test_family,
    embed_point,
    hull_membership_test,
)
from .semigroup import Semigroup

SCHEMA_ID = "ap-corona/v1"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _iv_namespace() -> dict:
    # rebuilt per call so constants pick up the current interval precision
    return {
        "sqrt": iv.sqrt,
        "cbrt": lambda x: iv.mpf(x) ** (iv.mpf(1) / iv.mpf(3)),
        "root": lambda x, n: iv.mpf(x) ** (iv.mpf(1) / iv.mpf(n)),
        "log": iv.log,
        "exp": iv.exp,
        "pi": +iv.pi,
        "euler": +iv.e,
    }


def parse_basis_value(text: str):
    """Exact rational if the text is one, otherwise a re-evaluable interval
    thunk over a whitelisted mpmath namespace (sqrt, root, log, exp, pi)."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    code = compile(text, "<basis-value>", "eval")
    for name in code.co_names:
        if name not in _iv_namespace():
            raise ConfigError(f"unknown name {name!r} in basis value {text!r}")

    def thunk():
        return eval(code, {"__builtins__": {}}, _iv_namespace())

    try:
        thunk()
    except Exception as exc:
        raise ConfigError(f"cannot evaluate basis value {text!r}: {exc}")
    return thunk


@dataclass
class SessionConfig:
    """Declarations shared by all commands."""

    basis_decl: list[tuple[str, str]] = field(default_factory=list)
    generators: list[str] = field(default_factory=list)
    degree_bound: int | None = None
    grid_step: float | None = None
    strip_width: float | None = None
    tail_height: float | None = None
    tolerance: float = 1e-9
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if self.grid_step is not None and self.grid_step <= 0:
            raise ConfigError("grid step must be positive")
        if self.output_format not in ("json", "text"):
            raise ConfigError("format must be json or text")

    def build_basis(self) -> FrequencyBasis:
        entries = [("one", 1)]
        for label, text in self.basis_decl:
            if label == "one":
                continue
            entries.append((label, parse_basis_value(text)))
        return make_basis(entries)

    def build_semigroup(self, basis: FrequencyBasis) -> Semigroup:
        if not self.generators:
            raise ConfigError("no semigroup generators declared (--gens)")
        return Semigroup([parse_frequency(g, basis) for g in self.generators],
                         basis)

    def corona_config(self) -> CoronaConfig:
        return CoronaConfig(grid_step=self.grid_step,
                            strip_width=self.strip_width,
                            tail_height=self.tail_height)


def _parse_kv_file(path: str) -> dict[str, str]:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _split_decls(text: str) -> list[tuple[str, str]]:
    decls = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ConfigError(f"basis entries look like label=value, got {chunk!r}")
        label, value = chunk.split("=", 1)
        decls.append((label.strip(), value.strip()))
    return decls


def build_session(args: argparse.Namespace) -> SessionConfig:
    values: dict[str, str] = {}
    if getattr(args, "config", None):
        values.update(_parse_kv_file(args.config))
    cfg = SessionConfig()
    if "basis" in values:
        cfg.basis_decl = _split_decls(values["basis"])
    if "generators" in values:
        cfg.generators = [g.strip() for g in values["generators"].split(",") if g.strip()]
    for key in ("degree_bound", "seed"):
        if key in values:
            setattr(cfg, key, int(values[key]))
    for key in ("grid_step", "strip_width", "tail_height", "tolerance"):
        if key in values:
            setattr(cfg, key, float(values[key]))
    if "format" in values:
        cfg.output_format = values["format"]

    if getattr(args, "basis", None):
        cfg.basis_decl = _split_decls(args.basis)
    if getattr(args, "gens", None):
        cfg.generators = [g.strip() for g in args.gens.split(",") if g.strip()]
    for attr, key in (("degree_bound", "degree_bound"), ("seed", "seed")):
        v = getattr(args, attr, None)
        if v is not None:
            setattr(cfg, key, v)
    for attr in ("grid_step", "strip_width", "tail_height"):
        v = getattr(args, attr, None)
        if v is not None:
            setattr(cfg, attr, v)
    if getattr(args, "tol", None) is not None:
        cfg.tolerance = args.tol
    if getattr(args, "format", None):
        cfg.output_format = args.format
    cfg.__post_init__()
    return cfg


# -- serialization helpers ------------------------------------------------------


def _cplx(c: complex) -> list[float]:
    return [c.real, c.imag]


def _poly_payload(p: APPolynomial) -> dict:
    return {
        "expression": render(p),
        "terms": [
            {"frequency": render_frequency(f), "coefficient": _cplx(c)}
            for f, c in sorted(p.items(), key=lambda t: (t[0].value_float(),
                                                         str(t[0].coords)))
        ],
        "l1_norm": p.l1_norm(),
    }


def _certificate_payload(cert) -> dict:
    return {
        "lower_bound": cert.lower_bound,
        "mode": cert.mode,
        "certified": cert.is_certified,
        "infimum_zero": cert.infimum_zero,
        "tail_height": cert.tail_height if cert.tail_height != float("inf") else None,
        "strip_width": cert.strip_width,
        "grid_step": cert.grid_step,
        "lipschitz": cert.lipschitz,
        "grid_min": None if cert.grid_min == float("inf") else cert.grid_min,
        "tail_bound": cert.tail_bound,
        "constant_mass": cert.constant_mass,
        "n_grid_points": cert.n_grid_points,
    }


def _matrix_payload(m: APMatrix) -> list[list[str]]:
    return [[render(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def _load_matrix_arg(spec: str, basis: FrequencyBasis, sg: Semigroup) -> APMatrix:
    text = Path(spec[1:]).read_text() if spec.startswith("@") else spec
    data = json.loads(text)
    rows = [[parse_ap_expression(cell, basis) for cell in row] for row in data]
    return APMatrix(rows, sg, validate=False)


# -- command implementations ------------------------------------------------------


def _cmd_spectrum(args, cfg, basis, report):
    p = parse_ap_expression(args.f, basis)
    report["result"] = {
        "polynomial": _poly_payload(p),
        "spectrum": [render_frequency(f) for f in p.spectrum()],
        "size": len(p),
    }
    return EXIT_OK


def _cmd_member(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    freq = parse_frequency(args.freq, basis)
    cert = sg.membership(freq)
    report["result"] = {
        "frequency": render_frequency(freq),
        "generators": [render_frequency(g) for g in sg.generators],
        "member": cert.is_member,
        "combo": (None if cert.combo is None
                  else {render_frequency(sg.generators[i]): k
                        for i, k in sorted(cert.combo.items())}),
        "search_bound": cert.search_bound,
    }
    return EXIT_OK if cert.is_member else EXIT_NEGATIVE


def _cmd_saturate(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    result = sg.saturation_check(args.bound)
    report["result"] = {
        "generators": [render_frequency(g) for g in sg.generators],
        "status": result.status,
        "witness": (None if result.witness is None
                    else render_frequency(result.witness)),
        "searched_bound": result.searched_bound,
    }
    return EXIT_NEGATIVE if result.status == "witness" else EXIT_OK


def _cmd_hull_test(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    tracked = [parse_frequency(t.strip(), basis)
               for t in (args.tracked.split(";") if args.tracked else [])
               if t.strip()]
    model = CoordinateModel(sg, tracked)
    if args.z is not None:
        re_, im = (float(x) for x in args.z.split(","))
        point = embed_point(model, complex(re_, im))
        origin = {"embedded": [re_, im]}
    elif args.assign is not None:
        assignment = {}
        for chunk in args.assign.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            freq_text, value_text = chunk.split(":", 1)
            freq = parse_frequency(freq_text.strip(), basis)
            value = parse_ap_expression(value_text.strip(), basis)
            if value.spectrum() and any(not f.is_zero for f in value.spectrum()):
                raise ConfigError("assignment values must be complex constants")
            assignment[freq] = value.constant_coefficient
        point = HullPoint(model, assignment)
        origin = {"assigned": len(assignment)}
    else:
        raise ConfigError("hull-test needs --z or --assign")
    family = default_test_family(model, args.degree)
    outcome = hull_membership_test(point, family)
    report["result"] = {
        "tracked": [render_frequency(f) for f in model.tracked],
        "origin": origin,
        "status": outcome.status,
        "tested_polynomials": outcome.tested,
        "witness": None if outcome.witness is None else outcome.witness.render(),
        "witness_value": outcome.witness_value,
        "witness_bound": outcome.witness_bound,
    }
    return EXIT_NEGATIVE if outcome.rejected else EXIT_OK


def _cmd_corona_certify(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    fs = [parse_ap_expression(t, basis) for t in args.f]
    cert = certify_infimum(fs, sg, cfg.corona_config())
    report["result"] = {
        "functions": [render(f) for f in fs],
        "certificate": _certificate_payload(cert),
    }
    return EXIT_NEGATIVE if (cert.infimum_zero or cert.lower_bound <= 0) else EXIT_OK


def _cmd_corona_solve(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    fs = [parse_ap_expression(t, basis) for t in args.f]
    cert = certify_infimum(fs, sg, cfg.corona_config())
    if cert.infimum_zero:
        report["result"] = {"certificate": _certificate_payload(cert)}
        return EXIT_NEGATIVE
    degree = cfg.degree_bound or 16
    sol = solve_bezout(fs, sg, degree, cfg.tolerance)
    report["result"] = {
        "functions": [render(f) for f in fs],
        "certificate": _certificate_payload(cert),
        "partners": [_poly_payload(g) for g in sol.partners],
        "residual_upper": sol.residual_upper,
        "pre_correction_residual": sol.pre_correction_residual,
        "neumann_order": sol.neumann_order,
        "truncation": [render_frequency(f) for f in sol.truncation],
    }
    return EXIT_OK


def _cmd_invert(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    f = parse_ap_expression(args.f, basis)
    u = invert(f, sg, cfg.tolerance, degree_bound=cfg.degree_bound)
    report["result"] = {
        "function": render(f),
        "inverse": _poly_payload(u),
        "residual_upper": (1 - f * u).l1_norm(),
    }
    return EXIT_OK


def _cmd_log(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    f = parse_ap_expression(args.f, basis)
    cert = certify_infimum([f], sg, cfg.corona_config())
    if cert.infimum_zero or cert.lower_bound <= 0:
        report["result"] = {
            "function": render(f),
            "certificate": _certificate_payload(cert),
        }
        return EXIT_NEGATIVE
    g, path = logarithm_with_path(f, sg, cert, cfg.tolerance)
    report["result"] = {
        "function": render(f),
        "certificate": _certificate_payload(cert),
        "logarithm": _poly_payload(g),
        "verified_residual": path.verified_residual,
        "t_schedule": list(path.t_schedule),
        "polish_rounds": path.polish_rounds,
        "scalar_log": _cplx(path.scalar_log),
    }
    return EXIT_OK


def _cmd_exp(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    g = parse_ap_expression(args.g, basis)
    result = exp_truncated(g, sg, args.order)
    report["result"] = {
        "exponent": render(g),
        "exponential": _poly_payload(result.poly),
        "tail_bound": result.tail_bound,
        "order": result.order,
    }
    return EXIT_OK


def _cmd_complete(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    a = _load_matrix_arg(args.matrix, basis, sg)
    result = complete_matrix(a, cfg.tolerance, degree_bound=cfg.degree_bound,
                             config=cfg.corona_config())
    report["result"] = {
        "original": _matrix_payload(a),
        "completed": _matrix_payload(result.completed),
        "det_residual": result.det_residual,
        "certificate": _certificate_payload(result.certificate),
        "bezout_residual": result.bezout.residual_upper,
    }
    return EXIT_OK


def _cmd_verify(args, cfg, basis, report):
    sg = cfg.build_semigroup(basis)
    a = _load_matrix_arg(args.matrix, basis, sg)
    completed = _load_matrix_arg(args.completed, basis, sg)
    rep = verify_completion(a, completed, cfg.tolerance)
    report["result"] = {
        "original_columns_intact": rep.original_columns_intact,
        "determinant_residual": rep.determinant_residual,
        "determinant_ok": rep.determinant_ok,
        "spectra_ok": rep.spectra_ok,
        "spectrum_violation": rep.spectrum_violation,
        "tolerance": rep.tolerance,
        "passed": rep.passed,
    }
    return EXIT_OK if rep.passed else EXIT_NEGATIVE


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "member": _cmd_member,
    "saturate": _cmd_saturate,
    "hull-test": _cmd_hull_test,
    "corona-certify": _cmd_corona_certify,
    "corona-solve": _cmd_corona_solve,
    "invert": _cmd_invert,
    "log": _cmd_log,
    "exp": _cmd_exp,
    "complete": _cmd_complete,
    "verify": _cmd_verify,
}

#: errors that represent a definitive negative mathematical answer rather
#: than a failure of the computation
_NEGATIVE_ERRORS = (NotInvertibleError, InfimumZeroError, CoronaConditionError)


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", help="key = value config file")
    sub.add_argument("--basis", help="basis declarations, e.g. 'one=1,s=sqrt(2)'")
    sub.add_argument("--gens", help="semigroup generators, e.g. '2,3' or '1,s'")
    sub.add_argument("--tol", type=float, help="tolerance for solvers")
    sub.add_argument("--degree-bound", dest="degree_bound", type=int)
    sub.add_argument("--grid-step", dest="grid_step", type=float)
    sub.add_argument("--strip-width", dest="strip_width", type=float)
    sub.add_argument("--tail-height", dest="tail_height", type=float)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--format", choices=("json", "text"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ap-corona",
        description="Certified computation in semigroup-constrained almost "
                    "periodic polynomial algebras")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("spectrum", help="spectrum of a polynomial")
    p.add_argument("--f", required=True, help="polynomial expression")
    _add_common(p)

    p = subs.add_parser("member", help="semigroup membership certificate")
    p.add_argument("--freq", required=True, help="frequency, e.g. '7' or '3+2*s'")
    _add_common(p)

    p = subs.add_parser("saturate", help="group-intersection saturation test")
    p.add_argument("--bound", type=float, default=None)
    _add_common(p)

    p = subs.add_parser("hull-test", help="hull membership semi-decision")
    p.add_argument("--z", help="embed the half-plane point 're,im'")
    p.add_argument("--assign", help="explicit point 'freq:value;freq:value'")
    p.add_argument("--tracked", help="extra tracked frequencies 'f1;f2'")
    p.add_argument("--degree", type=int, default=3)
    _add_common(p)

    p = subs.add_parser("corona-certify", help="certified corona lower bound")
    p.add_argument("--f", action="append", required=True,
                   help="repeatable polynomial expression")
    _add_common(p)

    p = subs.add_parser("corona-solve", help="Bezout partners")
    p.add_argument("--f", action="append", required=True)
    _add_common(p)

    p = subs.add_parser("invert", help="approximate inverse")
    p.add_argument("--f", required=True)
    _add_common(p)

    p = subs.add_parser("log", help="constructive logarithm")
    p.add_argument("--f", required=True)
    _add_common(p)

    p = subs.add_parser("exp", help="truncated exponential")
    p.add_argument("--g", required=True)
    p.add_argument("--order", type=int, default=20)
    _add_common(p)

    p = subs.add_parser("complete", help="determinant-1 matrix completion")
    p.add_argument("--matrix", required=True,
                   help="JSON array-of-arrays of expressions, or @file.json")
    _add_common(p)

    p = subs.add_parser("verify", help="check a claimed completion")
    p.add_argument("--matrix", required=True)
    p.add_argument("--completed", required=True)
    _add_common(p)

    return parser


def run_command(argv: list[str]) -> tuple[int, dict, str]:
    """Dispatch one invocation; returns (exit code, report, format)."""
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    report: dict = {
        "schema": SCHEMA_ID,
        "command": args.command,
        "status": "ok",
        "inputs": {
            k: v for k, v in sorted(vars(args).items())
            if k not in ("command",) and v is not None
        },
    }
    out_format = "json"
    try:
        cfg = build_session(args)
        out_format = cfg.output_format
        report["inputs"]["seed"] = cfg.seed
        basis = cfg.build_basis()
        code = _COMMANDS[args.command](args, cfg, basis, report)
        if code == EXIT_NEGATIVE:
            report["status"] = "negative"
    except _NEGATIVE_ERRORS as exc:
        report["status"] = "negative"
        report["error"] = {"code": exc.code, "message": str(exc)}
        code = EXIT_NEGATIVE
    except APCoronaError as exc:
        report["status"] = "error"
        report["error"] = {"code": exc.code, "message": str(exc)}
        code = EXIT_ERROR
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        report["status"] = "error"
        report["error"] = {"code": "error", "message": str(exc)}
        code = EXIT_ERROR
    report["wall_time_ms"] = (time.perf_counter() - started) * 1000.0
    return code, report, out_format


def _as_text(report: dict) -> str:
    lines = [f"command: {report['command']}", f"status: {report['status']}"]
    if "error" in report:
        lines.append(f"error[{report['error']['code']}]: {report['error']['message']}")
    for key, value in sorted(report.get("result", {}).items()):
        lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    lines.append(f"wall_time_ms: {report['wall_time_ms']:.1f}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    code, report, out_format = run_command(
        sys.argv[1:] if argv is None else argv)
    if out_format == "text":
        print(_as_text(report))
    else:
        print(json.dumps(report, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
