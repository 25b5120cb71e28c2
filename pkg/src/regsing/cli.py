"""Command-line front end.

Reads UTF-8 JSON operator or cone descriptions, dispatches the
computations, and prints machine-readable reports (JSON or CSV) with
floats at 17 significant digits.  Output is byte-identical across runs
on identical input; every report embeds the input's sha256 and the tool
version.

Operator document:

    {"R": 1.0, "lambdas": [-0.25, 0.11], "q0": 1,
     "A": [[{"re": 1, "im": 0}, ...], ...], "B": [[...], ...],
     "regular_bc": {"type": "robin", "alpha": 0.5}}

Cone document:

    {"m": 2, "ccl_spectra": {"0": [[0.0, 1], [1.0, 2], [4.0, 2]], ...},
     "harmonic_dims": {"0": 1, "1": 1}}

Exit codes: 0 success, 2 malformed input or failed validation,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from ._numutil import NumericalError
from .cone import (
    ConeSpec,
    ConeSpecError,
    component_report,
    cone_determinant,
    contribution_sets,
)
from .determinant import det_zeta_auto, zeta_eval
from .eigenfunction import (
    SecularEvaluator,
    asymptotic_log_F_imag,
    find_spectrum,
    log_F_imag,
    verify_contour_decay,
)
from .operators import (
    BoundaryMatrices,
    Dirichlet,
    OperatorSpec,
    OperatorSpecError,
    Robin,
    validate,
)
from .special import SpecialFunctionDomainError

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERICAL = 3

COMMANDS = (
    "validate",
    "eval-f",
    "f-at-zero",
    "spectrum",
    "det",
    "zeta",
    "cone",
    "verify-asymptotics",
    "verify-contour",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    tol: float = 1e-8
    mu_max: float = 100.0
    t_abs: float = 0.1
    fmt: str = "json"
    theta: float = math.pi / 4.0
    a_list: tuple[float, ...] = ()
    mu: complex | None = None
    s: float = 1.0
    degree: int | None = None
    deterministic: bool = field(default=True, init=False)

    def __post_init__(self):
        if not (0.0 < self.tol <= 1e-2):
            raise SchemaError(f"tol must lie in (0, 1e-2], got {self.tol}")
        if not (self.mu_max > 0.0):
            raise SchemaError(f"mu-max must be positive, got {self.mu_max}")
        if self.fmt not in ("json", "csv"):
            raise SchemaError(f"format must be json or csv, got {self.fmt!r}")


class SchemaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Deterministic serialization, 17 significant digits
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if isinstance(x, bool):  # bool is an int subclass; keep it out of %g
        return "true" if x else "false"
    if not math.isfinite(x):
        raise NumericalError(f"non-finite number in report: {x!r}")
    out = format(float(x), ".17g")
    return out


def serialize(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return serialize({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join("  " * (indent + 1) + serialize(v, indent + 1) for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in obj:  # insertion order is part of the deterministic contract
            items.append(
                "  " * (indent + 1) + json.dumps(str(key)) + ": " + serialize(obj[key], indent + 1)
            )
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


# ---------------------------------------------------------------------------
# Input documents
# ---------------------------------------------------------------------------

def _load_json(path: str) -> tuple[dict, str]:
    try:
        raw = open(path, "rb").read()
    except OSError as exc:
        raise SchemaError(f"cannot read input file: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"input is not valid UTF-8 JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top-level JSON value must be an object")
    return doc, digest


def _complex_entry(cell, where: str) -> complex:
    if not isinstance(cell, dict) or set(cell) != {"re", "im"}:
        raise SchemaError(f'{where}: matrix entries must be {{"re": .., "im": ..}} objects')
    re, im = cell["re"], cell["im"]
    if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
        raise SchemaError(f"{where}: re/im must be numbers")
    return complex(re, im)


def _matrix(doc, name: str, q: int) -> np.ndarray:
    rows = doc.get(name)
    if not isinstance(rows, list) or len(rows) != q:
        raise SchemaError(f'"{name}" must be a {q}x{q} array of entries')
    out = np.zeros((q, q), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != q:
            raise SchemaError(f'"{name}" row {i} must have {q} entries')
        for j, cell in enumerate(row):
            out[i, j] = _complex_entry(cell, f"{name}[{i}][{j}]")
    return out


def parse_operator_document(doc: dict) -> OperatorSpec:
    for key in ("R", "lambdas", "q0", "A", "B", "regular_bc"):
        if key not in doc:
            raise SchemaError(f'operator document is missing "{key}"')
    lambdas = doc["lambdas"]
    if not isinstance(lambdas, list) or not lambdas or not all(
        isinstance(v, (int, float)) for v in lambdas
    ):
        raise SchemaError('"lambdas" must be a non-empty list of numbers')
    q = len(lambdas)
    bc = doc["regular_bc"]
    if not isinstance(bc, dict) or "type" not in bc:
        raise SchemaError('"regular_bc" must carry a "type"')
    if bc["type"] == "dirichlet":
        regular_bc: Dirichlet | Robin = Dirichlet()
    elif bc["type"] == "robin":
        if "alpha" not in bc or not isinstance(bc["alpha"], (int, float)):
            raise SchemaError('robin condition needs a numeric "alpha"')
        regular_bc = Robin(alpha=float(bc["alpha"]))
    else:
        raise SchemaError(f'unknown regular_bc type {bc["type"]!r}')
    try:
        return OperatorSpec(
            r=float(doc["R"]),
            lambdas=tuple(float(v) for v in lambdas),
            q0=int(doc["q0"]),
            boundary=BoundaryMatrices(_matrix(doc, "A", q), _matrix(doc, "B", q)),
            regular_bc=regular_bc,
        )
    except OperatorSpecError as exc:
        raise SchemaError(str(exc)) from exc


def parse_cone_document(doc: dict) -> ConeSpec:
    for key in ("m", "ccl_spectra", "harmonic_dims"):
        if key not in doc:
            raise SchemaError(f'cone document is missing "{key}"')
    raw = doc["ccl_spectra"]
    if not isinstance(raw, dict):
        raise SchemaError('"ccl_spectra" must map degree -> [[lambda, mult], ...]')
    spectra = {}
    for key, entries in raw.items():
        try:
            j = int(key)
        except (TypeError, ValueError):
            raise SchemaError(f"cross-section degree key {key!r} is not an integer") from None
        if not isinstance(entries, list):
            raise SchemaError(f"degree {j}: expected a list of [lambda, mult] pairs")
        pairs = []
        for item in entries:
            if (
                not isinstance(item, list)
                or len(item) != 2
                or not isinstance(item[0], (int, float))
                or not isinstance(item[1], int)
            ):
                raise SchemaError(f"degree {j}: entries must be [lambda, mult] with integer mult")
            pairs.append((float(item[0]), int(item[1])))
        spectra[j] = tuple(pairs)
    dims_raw = doc["harmonic_dims"]
    if not isinstance(dims_raw, dict):
        raise SchemaError('"harmonic_dims" must map degree -> dimension')
    dims = {}
    for key, val in dims_raw.items():
        try:
            dims[int(key)] = int(val)
        except (TypeError, ValueError):
            raise SchemaError(f"bad harmonic dimension entry {key!r}: {val!r}") from None
    try:
        return ConeSpec(m=int(doc["m"]), ccl_spectra=spectra, harmonic_dims=dims)
    except ConeSpecError as exc:
        raise SchemaError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Command implementations (each returns report dict + csv rows)
# ---------------------------------------------------------------------------

def _violations_payload(spec: OperatorSpec):
    issues = validate(spec)
    return issues, {
        "ok": not issues,
        "violations": [{"name": v.name, "detail": v.detail} for v in issues],
    }


def _cmd_validate(cfg: RunConfig, doc: dict):
    spec = parse_operator_document(doc)
    issues, payload = _violations_payload(spec)
    rows = [["ok", str(not issues).lower()]] + [["violation", v.name] for v in issues]
    return payload, [["field", "value"]] + rows, EXIT_SCHEMA if issues else EXIT_OK


def _require_valid(spec: OperatorSpec) -> None:
    issues = validate(spec)
    if issues:
        raise SchemaError(
            "operator failed validation: " + "; ".join(v.name for v in issues)
        )


def _cmd_eval_f(cfg: RunConfig, doc: dict):
    if cfg.mu is None:
        raise SchemaError("eval-f needs --mu")
    spec = parse_operator_document(doc)
    _require_valid(spec)
    ev = SecularEvaluator(spec)
    mant, logs = ev.scaled(cfg.mu)
    value = mant * np.exp(logs) if logs < 700 else complex(float("inf"), 0)
    payload = {
        "mu": {"re": cfg.mu.real, "im": cfg.mu.imag},
        "value": {"re": value.real, "im": value.imag},
        "mantissa": {"re": mant.real, "im": mant.imag},
        "log_scale": logs,
    }
    rows = [["field", "value"], ["re", _fmt_float(value.real)], ["im", _fmt_float(value.imag)]]
    return payload, rows, EXIT_OK


def _cmd_f_at_zero(cfg: RunConfig, doc: dict):
    spec = parse_operator_document(doc)
    _require_valid(spec)
    val = SecularEvaluator(spec).value_at_zero()
    payload = {"f_zero": val.real if abs(val.imag) < 1e-10 * (1 + abs(val)) else val}
    rows = [["field", "value"], ["f_zero", _fmt_float(val.real)]]
    return payload, rows, EXIT_OK


def _cmd_spectrum(cfg: RunConfig, doc: dict):
    spec = parse_operator_document(doc)
    _require_valid(spec)
    sp = find_spectrum(spec, cfg.mu_max)
    payload = {
        "mu_max": sp.mu_max,
        "certified": sp.certified,
        "positive": list(sp.positive),
        "negative": list(sp.negative),
        "eigenvalues": [m * m for m in sp.positive] + [-x * x for x in sp.negative],
    }
    rows = [["index", "axis", "root", "eigenvalue"]]
    for i, m in enumerate(sp.positive, start=1):
        rows.append([str(i), "real", _fmt_float(m), _fmt_float(m * m)])
    for i, x in enumerate(sp.negative, start=1):
        rows.append([str(i), "imag", _fmt_float(x), _fmt_float(-x * x)])
    return payload, rows, EXIT_OK


def _cmd_det(cfg: RunConfig, doc: dict):
    spec = parse_operator_document(doc)
    _require_valid(spec)
    report = det_zeta_auto(spec, t_abs=cfg.t_abs, kernel_tol=cfg.tol)
    payload = {
        "value": report.value,
        "method": report.method,
        "k0": report.kernel_dim_proxy,
        "log_singular": report.log_singular,
        "diagnostics": dict(report.diagnostics),
    }
    rows = [
        ["field", "value"],
        ["value", _fmt_float(report.value)],
        ["method", report.method],
        ["k0", str(report.kernel_dim_proxy)],
    ]
    return payload, rows, EXIT_OK


def _cmd_zeta(cfg: RunConfig, doc: dict):
    spec = parse_operator_document(doc)
    _require_valid(spec)
    sp = find_spectrum(spec, cfg.mu_max)
    rep = zeta_eval(spec, cfg.s, spectrum=sp, t_abs=cfg.t_abs)
    payload = {
        "s": rep.s,
        "direct": rep.direct,
        "direct_error": rep.direct_error,
        "contour": rep.contour,
        "contour_error": rep.contour_error,
        "n_roots": len(sp.positive),
    }
    rows = [["field", "value"]] + [[k, _fmt_float(v) if isinstance(v, float) else str(v)]
                                   for k, v in payload.items()]
    return payload, rows, EXIT_OK


def _cmd_cone(cfg: RunConfig, doc: dict):
    cone = parse_cone_document(doc)
    degrees = [cfg.degree] if cfg.degree is not None else list(range(cone.m + 1))
    out = {}
    rows = [["degree", "value", "window_active"]]
    for k in degrees:
        contrib = contribution_sets(cone, k)
        with warnings.catch_warnings():
            # window notes are already part of the report payload
            warnings.simplefilter("ignore")
            value = cone_determinant(cone, k)
            factors = component_report(cone, k)
        out[str(k)] = {
            "value": value,
            "window_active": contrib.window_active,
            "p_factor": contrib.p_factor,
            "factors": [
                {
                    "source": f.source,
                    "nu": f.nu,
                    "multiplicity": f.multiplicity,
                    "value": f.value,
                }
                for f in factors
            ],
            "warnings": list(contrib.warnings),
        }
        rows.append([str(k), _fmt_float(value), str(contrib.window_active).lower()])
    return {"degrees": out}, rows, EXIT_OK


def _cmd_verify_asymptotics(cfg: RunConfig, doc: dict):
    spec = parse_operator_document(doc)
    _require_valid(spec)
    xs = list(cfg.a_list) if cfg.a_list else [20.0, 40.0, 80.0]
    entries = []
    errs = []
    for x in xs:
        actual = log_F_imag(spec, x)
        model = asymptotic_log_F_imag(spec, x)
        rel = abs(model - actual) / abs(actual)
        errs.append(rel)
        entries.append(
            {
                "x": x,
                "actual": {"re": actual.real, "im": actual.imag},
                "model": {"re": model.real, "im": model.imag},
                "rel_error": rel,
            }
        )
    decreasing = all(a > b for a, b in zip(errs, errs[1:]))
    payload = {"points": entries, "strictly_decreasing": decreasing}
    rows = [["x", "rel_error"]] + [[_fmt_float(e["x"]), _fmt_float(e["rel_error"])] for e in entries]
    return payload, rows, EXIT_OK


def _cmd_verify_contour(cfg: RunConfig, doc: dict):
    spec = parse_operator_document(doc)
    _require_valid(spec)
    if not cfg.a_list:
        raise SchemaError("verify-contour needs --a-list")
    mags = verify_contour_decay(spec, cfg.s, list(cfg.a_list), theta=cfg.theta)
    decreasing = all(a > b for a, b in zip(mags, mags[1:]))
    payload = {
        "s": cfg.s,
        "theta": cfg.theta,
        "a_list": list(cfg.a_list),
        "magnitudes": mags,
        "strictly_decreasing": decreasing,
        "last_below_half_first": bool(mags[-1] < 0.5 * mags[0]) if len(mags) > 1 else True,
    }
    rows = [["a", "magnitude"]] + [
        [_fmt_float(a), _fmt_float(m)] for a, m in zip(cfg.a_list, mags)
    ]
    return payload, rows, EXIT_OK


_HANDLERS = {
    "validate": _cmd_validate,
    "eval-f": _cmd_eval_f,
    "f-at-zero": _cmd_f_at_zero,
    "spectrum": _cmd_spectrum,
    "det": _cmd_det,
    "zeta": _cmd_zeta,
    "cone": _cmd_cone,
    "verify-asymptotics": _cmd_verify_asymptotics,
    "verify-contour": _cmd_verify_contour,
}


def _parse_mu(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise SchemaError(f"cannot parse --mu value {text!r}") from None


def _parse_a_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise SchemaError(f"cannot parse --a-list value {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regsing",
        description="Spectra and zeta determinants of regular-singular operators",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("input", help="path to the JSON description")
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--mu-max", type=float, default=100.0, dest="mu_max")
    parser.add_argument("--t", type=float, default=0.1, dest="t_abs")
    parser.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    parser.add_argument("--theta", type=float, default=math.pi / 4.0)
    parser.add_argument("--a-list", type=str, default="", dest="a_list")
    parser.add_argument("--mu", type=str, default=None)
    parser.add_argument("--s", type=float, default=1.0)
    parser.add_argument("--degree", type=int, default=None)
    return parser


def run(cfg: RunConfig) -> int:
    doc, digest = _load_json(cfg.input_path)
    handler = _HANDLERS[cfg.command]
    payload, rows, code = handler(cfg, doc)
    if cfg.fmt == "json":
        envelope = {
            "tool": "regsing",
            "version": __version__,
            "command": cfg.command,
            "input_sha256": digest,
            "deterministic": True,
            "report": payload,
        }
        sys.stdout.write(serialize(envelope) + "\n")
    else:
        lines = [",".join(cell for cell in row) for row in rows]
        header = f"# regsing {__version__} {cfg.command} sha256:{digest}"
        sys.stdout.write(header + "\n" + "\n".join(lines) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            input_path=args.input,
            tol=args.tol,
            mu_max=args.mu_max,
            t_abs=args.t_abs,
            fmt=args.fmt,
            theta=args.theta,
            a_list=_parse_a_list(args.a_list),
            mu=_parse_mu(args.mu) if args.mu is not None else None,
            s=args.s,
            degree=args.degree,
        )
        return run(cfg)
    except (SchemaError, OperatorSpecError, ConeSpecError) as exc:
        sys.stderr.write(f"regsing: input error: {exc}\n")
        return EXIT_SCHEMA
    except (NumericalError, SpecialFunctionDomainError, ValueError) as exc:
        sys.stderr.write(f"regsing: numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
