"""Command-line front end.

    bzeta <command> [--config FILE] [--key value ...]
    bzeta run JOB.json
    bzeta batch JOBS.ndjson [--workers K]
    bzeta defaults

Each ``--key value`` pair is parsed as JSON (falling back to a bare
string).  Keys naming a configuration entry override the configuration;
all others become command parameters.  Indices in parameters (Lambda,
sigma, pole contributors) are 1-based.

Exit codes: 0 success, 2 precondition violation, 3 non-convergence,
4 malformed job.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

import jsonschema
import numpy as np

from . import applications as app
from . import contour, domain, evaluator, group
from .errors import BZetaError, ConvergenceError, PreconditionError, SeriesError
from .numeric import PrecisionConfig, e2pi
from .result import EvalResult

COMMANDS = (
    "eval-zeta",
    "eval-L",
    "special-value",
    "residue",
    "rho",
    "verify-transform",
    "verify-cocycle",
    "fixed-points",
    "lambert-ex1",
    "lambert-ex2",
    "gamma-product",
    "kronecker",
    "classify",
)

_PRECISION_KEYS = tuple(f.name for f in dataclasses.fields(PrecisionConfig))
_QUAD_KEYS = tuple(f.name for f in dataclasses.fields(contour.QuadratureConfig))

DEFAULT_CONFIG = {
    **PrecisionConfig().to_dict(),
    **contour.QuadratureConfig().to_dict(),
    "zeta_max_index": 2000,
    "lambert_M": 40,
    "lambert_M_max": 16384,
    "gamma_trunc": 60,
    "derivative_h": 1e-4,
    "denom_bound": 10000,
    "timing": False,
}


class JobError(BZetaError):
    """A job that does not match the schema or lacks required parameters."""


STATUS = {"ok": 0, "precondition": 2, "convergence": 3, "schema": 4}


def _status_of(exc: BaseException) -> int:
    if isinstance(exc, (JobError, jsonschema.ValidationError, json.JSONDecodeError)):
        return 4
    if isinstance(exc, PreconditionError):
        return 2
    if isinstance(exc, (ConvergenceError, SeriesError)):
        return 3
    return 2 if isinstance(exc, BZetaError) else 1


def load_schema(name: str) -> dict:
    return json.loads(resources.files("bzeta").joinpath("schema", name).read_text())


# ---------------------------------------------------------------------------
# configuration


def load_config_file(path: str | None) -> dict:
    path = path or os.environ.get("BZETA_CONFIG")
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise JobError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise JobError("a config file holds one JSON object")
    return data


def merge_config(*layers: dict) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    for layer in layers:
        for k, v in (layer or {}).items():
            if k not in DEFAULT_CONFIG:
                raise JobError(f"unknown config key {k!r}")
            cfg[k] = v
    return cfg


def build_configs(cfg: dict) -> tuple:
    try:
        prec = PrecisionConfig(**{k: cfg[k] for k in _PRECISION_KEYS})
        quad = contour.QuadratureConfig(**{k: cfg[k] for k in _QUAD_KEYS})
    except TypeError as exc:
        raise JobError(f"bad config value: {exc}") from exc
    return prec, quad


# ---------------------------------------------------------------------------
# parameter parsing


def _need(params: dict, key: str):
    if key not in params:
        raise JobError(f"missing parameter {key!r}")
    return params[key]


def parse_complex(v) -> complex:
    if isinstance(v, bool):
        raise JobError("expected a number, got a boolean")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return complex(float(v["re"]), float(v["im"]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise JobError(f"cannot read {v!r} as a complex number")


def parse_real(v) -> float:
    z = parse_complex(v)
    if z.imag != 0:
        raise JobError(f"expected a real number, got {v!r}")
    return z.real


def parse_int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
        raise JobError(f"expected an integer, got {v!r}")
    return int(v)


def parse_vector(v, real: bool = False) -> list:
    if not isinstance(v, list) or not v:
        raise JobError(f"expected a non-empty list, got {v!r}")
    return [parse_real(x) if real else parse_complex(x) for x in v]


def parse_point(params: dict) -> domain.DomainPoint:
    ex = params.get("point")
    if ex is not None:
        N = parse_int(_need(params, "N"))
        if ex == "example-1":
            return group.example1_point(N, parse_real(params.get("c", 0.0)))
        if ex == "example-2":
            return group.example2_point(N)
        if ex == "gamma":
            return app.gamma_point(N)
        raise JobError(f"unknown named point {ex!r}")
    a = parse_vector(_need(params, "a"))
    theta = parse_vector(params["theta"], real=True) if "theta" in params else [0.0] * len(a)
    if "x" in params:
        x = parse_vector(params["x"], real=True)
        if len(x) != len(a):
            raise JobError("x and a differ in length")
        w = sum(xi * ai for xi, ai in zip(x, a))
    else:
        w = parse_complex(_need(params, "w"))
    return domain.DomainPoint.make(w, a, theta)


def parse_group(v, N: int | None = None) -> group.GroupElement:
    if isinstance(v, str):
        if N is None:
            raise JobError("a named group element needs N")
        if v == "example-1":
            return group.example1_element(N)
        if v == "example-2":
            return group.example2_element(N)
        raise JobError(f"unknown named group element {v!r}")
    if not isinstance(v, dict):
        raise JobError("g must be an object {Lambda, sigma, alpha} or a name")
    d = dict(v)
    if N is not None:
        d.setdefault("N", N)
    if "alpha" in d:
        d["alpha"] = parse_complex(d["alpha"])
    if "N" not in d and "sigma" not in d:
        raise JobError("g needs N or sigma")
    try:
        return group.GroupElement.from_dict(d)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise JobError(f"bad group element: {exc}") from exc


# ---------------------------------------------------------------------------
# serialization


def fmt_real(x: float, digits: int) -> str:
    return format(float(x), f".{digits}g")


def fmt_complex(z: complex, digits: int) -> dict:
    z = complex(z)
    return {"re": fmt_real(z.real, digits), "im": fmt_real(z.imag, digits)}


def to_jsonable(obj, digits: int = 17):
    if isinstance(obj, (bool, type(None), str)):
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return fmt_complex(complex(obj), digits)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else fmt_real(x, digits)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted(to_jsonable(v, digits) for v in obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v, digits) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict(), digits)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _residual(label: str, abs_r: float, rel_r: float, digits: int) -> dict:
    return {"label": label, "abs": fmt_real(abs_r, digits), "rel": fmt_real(rel_r, digits)}


# ---------------------------------------------------------------------------
# command handlers: each returns a partial document


def _from_result(r: EvalResult, **extra) -> dict:
    out = {"value": r.value, "err": r.abs_error_estimate, "method": r.method, "meta": dict(r.meta)}
    out.update(extra)
    return out


def cmd_eval_zeta(P, prec, quad, cfg, seed):
    s = parse_complex(_need(P, "s"))
    p = parse_point(P)
    method = P.get("method", "hankel")
    if not domain.in_T_plus(p, prec):
        raise PreconditionError("the zeta series is defined for Re(w) > 0 and Re(a_l) > 0; use eval-L elsewhere")
    if method == "series":
        return _from_result(evaluator.zeta_series(s, p, int(cfg["zeta_max_index"]), prec))
    if method == "hankel":
        return _from_result(contour.hankel_L(s, p, quad, prec))
    raise JobError(f"unknown method {method!r}")


def cmd_eval_L(P, prec, quad, cfg, seed):
    s = parse_complex(_need(P, "s"))
    return _from_result(contour.L_extended(s, parse_point(P), quad, prec))


def cmd_special_value(P, prec, quad, cfg, seed):
    k = parse_int(_need(P, "k"))
    p = parse_point(P)
    v = evaluator.special_value(p, k, prec)
    return {"value": v, "err": 0.0, "method": "laurent", "meta": {"s": -k}}


def cmd_residue(P, prec, quad, cfg, seed):
    p = parse_point(P)
    if "u0" in P:
        s = parse_complex(_need(P, "s"))
        contrib = tuple((parse_int(l) - 1, parse_int(m)) for l, m in _need(P, "contributors"))
        pole = contour.Pole(parse_complex(P["u0"]), len(contrib), contrib)
        v = contour.residue_at(p, s, pole, prec)
        return {"value": v, "err": 0.0, "method": "laurent", "meta": {"pole": pole}}
    k = parse_int(_need(P, "k"))
    v = evaluator.residue_at_integer(p, k, prec)
    return {"value": v, "err": 0.0, "method": "laurent", "meta": {"pole_s": k}}


def cmd_rho(P, prec, quad, cfg, seed):
    s = parse_complex(_need(P, "s"))
    psi = parse_real(_need(P, "psi"))
    R_max = parse_real(P["R_max"]) if "R_max" in P else None
    return _from_result(contour.rho(s, parse_point(P), psi, R_max, quad, prec))


def cmd_verify_transform(P, prec, quad, cfg, seed):
    s = parse_complex(_need(P, "s"))
    if "random" in P:
        n = parse_int(P["random"])
        N = parse_int(_need(P, "N"))
        g = parse_group(_need(P, "g"), N)
        rng = np.random.default_rng(seed)
        pts = [domain.sample_pol_point(N, rng, avoid=[g.psi]) for _ in range(n)]
    else:
        pts = [parse_point(P)]
        g = parse_group(_need(P, "g"), pts[0].N)
    digits = prec.output_digits
    residuals = []
    reports = []
    for i, p in enumerate(pts):
        r = contour.verify_transform(g, p, s, quad, prec)
        residuals.append(_residual(f"point {i}", r.abs_residual, r.rel_residual, digits))
        reports.append({"point": p, **r.to_dict()})
    worst = max(float(x["abs"]) for x in residuals)
    tol = parse_real(P.get("tol", 1e-6))
    first = reports[0]
    return {
        "value": first["lhs"] - first["rhs"] if len(pts) == 1 else None,
        "err": None,
        "method": "identity-check",
        "meta": {"g": g, "reports": reports},
        "residuals": residuals,
        "verdict": {"passed": worst < tol, "max_abs_residual": fmt_real(worst, digits), "tol": tol},
    }


def _random_element(N, rng, alphas):
    Lam = frozenset(int(i) for i in np.nonzero(rng.integers(0, 2, N))[0])
    sigma = tuple(int(i) for i in rng.permutation(N))
    alpha = alphas[int(rng.integers(0, len(alphas)))]
    return group.GroupElement(N, Lam, sigma, alpha)


def cmd_verify_cocycle(P, prec, quad, cfg, seed):
    N = parse_int(_need(P, "N"))
    trials = parse_int(P.get("trials", 100))
    alphas = [parse_complex(a) for a in P.get("alphas", [1, "1j", {"re": -0.5, "im": math.sqrt(3) / 2}])]
    ks = range(parse_int(P.get("k_min", -6)), parse_int(P.get("k_max", 6)) + 1)
    rng = np.random.default_rng(seed)
    worst = {"composition": 0.0, "inverse": 0.0, "cocycle": 0.0}
    for _ in range(trials):
        g = _random_element(N, rng, alphas)
        h = _random_element(N, rng, alphas)
        a = rng.normal(size=N) + 1j * rng.normal(size=N)
        p = domain.DomainPoint.make(complex(rng.normal(), rng.normal()), a, rng.uniform(0, 1, N))
        gh = group.compose(g, h)
        worst["composition"] = max(worst["composition"], group.act(gh, p).max_abs_diff(group.act(g, group.act(h, p))))
        gi = group.inverse(g)
        e = group.compose(g, gi)
        d_inv = max(
            group.act(gi, group.act(g, p)).max_abs_diff(p),
            0.0 if (not e.Lambda and e.sigma == tuple(range(N))) else 1.0,
            abs(e.alpha - 1),
        )
        worst["inverse"] = max(worst["inverse"], d_inv)
        hp = group.act(h, p)
        for k in ks:
            lhs = group.j_factor(gh, k, p.theta)
            rhs = group.j_factor(g, k, hp.theta) * group.j_factor(h, k, p.theta)
            worst["cocycle"] = max(worst["cocycle"], abs(lhs - rhs))
    digits = prec.output_digits
    tol = parse_real(P.get("tol", 1e-10))
    residuals = [_residual(k, v, v, digits) for k, v in worst.items()]
    return {
        "value": None,
        "err": None,
        "method": "identity-check",
        "meta": {"trials": trials, "k_range": [ks.start, ks.stop - 1]},
        "residuals": residuals,
        "verdict": {"passed": max(worst.values()) < tol, "tol": tol},
    }


def cmd_fixed_points(P, prec, quad, cfg, seed):
    N = parse_int(P["N"]) if "N" in P else None
    g = parse_group(_need(P, "g"), N)
    space = group.fixed_point_space(g, prec)
    meta = {"g": g, "space": space}
    residuals = []
    digits = prec.output_digits
    name = P["g"] if isinstance(P["g"], str) else None
    if name is not None:
        pt = group.example1_point(g.N, parse_real(P.get("c", 0.0))) if name == "example-1" else group.example2_point(g.N)
        r = group.fixed_residual(g, pt)
        meta.update({"example_point": pt, "example_is_fixed": group.is_fixed(g, pt, prec), "in_space": space.contains(pt, prec)})
        residuals.append(_residual("g(delta) - delta", r, r, digits))
    return {"value": None, "err": None, "method": "eigenspace", "meta": meta, "residuals": residuals}


def _field_basis_c(c: float) -> list:
    if abs(c) < 1e-12 or abs(c - 0.5) < 1e-12:
        return [1.0]
    return [1.0, e2pi(c)]


def cmd_lambert_ex1(P, prec, quad, cfg, seed):
    N = parse_int(_need(P, "N"))
    c = parse_real(P.get("c", 0.0))
    k = parse_int(_need(P, "k"))
    M = parse_int(P.get("M", cfg["lambert_M"]))
    r = app.lambert_ex1(N, c, k, M, quad.target_tol, int(cfg["lambert_M_max"]), prec)
    basis = [parse_complex(b) for b in P["basis"]] if "basis" in P else _field_basis_c(c)
    v = app.detect_rational(r.value, parse_int(P.get("denom_bound", cfg["denom_bound"])), basis, prec)
    return _from_result(r, verdict=v.to_dict())


def cmd_lambert_ex2(P, prec, quad, cfg, seed):
    N = parse_int(_need(P, "N"))
    k = parse_int(_need(P, "k"))
    M = parse_int(P.get("M", cfg["lambert_M"]))
    if P.get("twosided", False):
        r = app.lambert_ex2_twosided(N, k, M, quad.target_tol, int(cfg["lambert_M_max"]))
        return _from_result(r)
    r = app.lambert_ex2(N, k, M, quad.target_tol, int(cfg["lambert_M_max"]), prec)
    if "basis" in P:
        basis = [parse_complex(b) for b in P["basis"]]
    else:
        basis = [1.0] if N % 2 else app.cyclotomic_basis(2 * N)
    v = app.detect_rational(r.value, parse_int(P.get("denom_bound", cfg["denom_bound"])), basis, prec)
    return _from_result(r, verdict=v.to_dict())


def cmd_gamma_product(P, prec, quad, cfg, seed):
    N = parse_int(_need(P, "N"))
    trunc = parse_int(P.get("trunc", cfg["gamma_trunc"]))
    check = bool(P.get("cross_check", False))
    r = app.gamma_product(N, trunc, check, quad, prec, float(cfg["derivative_h"]))
    out = _from_result(r)
    if check:
        d = prec.output_digits
        ref = r.meta["exp_L_prime_0"]
        out["residuals"] = [
            _residual("product vs exp(L'(0))", r.meta["cross_check_residual"], r.meta["cross_check_residual"] / abs(ref), d),
            _residual("reciprocal vs exp(L'(0))", r.meta["reciprocal_residual"], r.meta["reciprocal_residual"] / abs(ref), d),
        ]
    return out


def cmd_kronecker(P, prec, quad, cfg, seed):
    k = parse_int(_need(P, "k"))
    p = parse_point(P)
    g = parse_group(_need(P, "g"), p.N)
    r = app.kronecker_limit(g, p, k, quad, prec, float(cfg["derivative_h"]))
    out = _from_result(r)
    if P.get("compare", False) and r.meta["quantity"] == "rho" and k <= 0:
        direct = contour.rho(k, p, group.psi_angle(g), q=quad, cfg=prec)
        d = abs(direct.value - r.value)
        out["meta"]["rho_direct"] = direct.value
        out["residuals"] = [_residual("rho direct vs predicted", d, d / max(abs(direct.value), 1e-300), prec.output_digits)]
    return out


def cmd_classify(P, prec, quad, cfg, seed):
    p = parse_point(P)
    rep = domain.classify(p, prec).to_dict()
    if "psi" in P:
        psi = parse_real(P["psi"])
        rep["in_D_psi"] = domain.in_D_psi(p, psi, False, prec)
        rep["in_D_tilde_psi"] = domain.in_D_psi(p, psi, True, prec)
    return {"value": None, "err": None, "method": "classification", "meta": rep}


HANDLERS = {
    "eval-zeta": cmd_eval_zeta,
    "eval-L": cmd_eval_L,
    "special-value": cmd_special_value,
    "residue": cmd_residue,
    "rho": cmd_rho,
    "verify-transform": cmd_verify_transform,
    "verify-cocycle": cmd_verify_cocycle,
    "fixed-points": cmd_fixed_points,
    "lambert-ex1": cmd_lambert_ex1,
    "lambert-ex2": cmd_lambert_ex2,
    "gamma-product": cmd_gamma_product,
    "kronecker": cmd_kronecker,
    "classify": cmd_classify,
}


# ---------------------------------------------------------------------------
# running jobs


def normalize_job(job) -> dict:
    """Validate a JobSpec and fold flat parameter keys into ``params``."""
    jsonschema.validate(job, load_schema("job.json"))
    params = dict(job.get("params", {}))
    for k, v in job.items():
        if k not in ("command", "params", "config", "seed"):
            params[k] = v
    return {"command": job["command"], "params": params, "config": job.get("config", {}), "seed": job.get("seed")}


def run(job, base_config: dict | None = None) -> tuple:
    """Execute one job; returns (document, exit status)."""
    echo = {"command": None, "params": {}, "config": {}, "seed": None}
    digits = 17
    timing = False
    t0 = time.perf_counter()
    try:
        spec = normalize_job(job)
        cfg = merge_config(base_config or {}, spec["config"])
        echo = {"command": spec["command"], "params": spec["params"], "config": cfg, "seed": spec["seed"]}
        prec, quad = build_configs(cfg)
        digits = prec.output_digits
        timing = bool(cfg.get("timing", False))
        seed = 0 if spec["seed"] is None else spec["seed"]
        part = HANDLERS[spec["command"]](spec["params"], prec, quad, cfg, seed)
        doc = {
            "status": 0,
            "input_echo": echo,
            "value": None if part["value"] is None else fmt_complex(part["value"], digits),
            "abs_error_estimate": None if part.get("err") is None else fmt_real(part["err"], digits),
            "method": part.get("method"),
            "meta": to_jsonable(part.get("meta", {}), digits),
        }
        if "residuals" in part:
            doc["residuals"] = part["residuals"]
        if "verdict" in part:
            doc["verdict"] = to_jsonable(part["verdict"], digits)
        status = 0
    except Exception as exc:  # every failure becomes an error document
        status = _status_of(exc)
        if status == 1:
            if not isinstance(exc, ValueError):
                raise
            status = 2
        doc = {
            "status": status,
            "input_echo": to_jsonable(echo, digits),
            "value": None,
            "abs_error_estimate": None,
            "method": None,
            "meta": {},
            "error": {"type": type(exc).__name__, "message": str(exc).splitlines()[0] if str(exc) else type(exc).__name__},
        }
    doc["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 3) if timing else None
    return doc, status


def dumps(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":"), allow_nan=False)


def _run_line(args) -> tuple:
    line, base = args
    try:
        job = json.loads(line)
    except json.JSONDecodeError as exc:
        doc = {
            "status": 4,
            "input_echo": {"command": None, "params": {}, "config": {}, "seed": None},
            "value": None,
            "abs_error_estimate": None,
            "method": None,
            "meta": {},
            "error": {"type": "JSONDecodeError", "message": str(exc)},
            "runtime_ms": None,
        }
        return dumps(doc), 4
    doc, status = run(job, base)
    return dumps(doc), status


def batch(lines, base_config: dict | None = None, workers: int = 1) -> list:
    """One output line per non-blank input line, in input order."""
    items = [(ln, base_config) for ln in lines if ln.strip()]
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_run_line, items))
    return [_run_line(it) for it in items]


# ---------------------------------------------------------------------------
# argument handling


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_overrides(tokens: list) -> dict:
    out = {}
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if not tok.startswith("--") or len(tok) == 2:
            raise JobError(f"unexpected argument {tok!r}; use --key value")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(tokens):
                raise JobError(f"flag {tok} needs a value")
            val = tokens[i + 1]
            i += 2
        out[key.replace("-", "_") if key.replace("-", "_") in DEFAULT_CONFIG else key] = _parse_value(val)
    return out


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = argparse.ArgumentParser(prog="bzeta", description="Twisted Barnes zeta toolkit.", allow_abbrev=False)
    ap.add_argument("command", help="|".join(COMMANDS + ("run", "batch", "defaults")))
    ap.add_argument("file", nargs="?", help="job file for run, job list for batch")
    ap.add_argument("--config", help="JSON config file (falls back to $BZETA_CONFIG)")
    ap.add_argument("--seed", type=int, help="seed for randomized suites")
    ap.add_argument("--workers", type=int, default=1, help="parallel workers for batch")
    ap.add_argument("--pretty", action="store_true", help="indent the JSON output")
    args, rest = ap.parse_known_args(argv)

    def emit(doc):
        print(json.dumps(doc, indent=2, allow_nan=False) if args.pretty else dumps(doc))

    try:
        overrides = parse_overrides(rest)
        base = load_config_file(args.config)
        merge_config(base)
    except JobError as exc:
        print(f"bzeta: {exc}", file=sys.stderr)
        return 4
    cfg_over = {k: v for k, v in overrides.items() if k in DEFAULT_CONFIG}
    params = {k: v for k, v in overrides.items() if k not in DEFAULT_CONFIG}
    base = {**base, **cfg_over}

    if args.command == "defaults":
        emit({"config": DEFAULT_CONFIG, "commands": list(COMMANDS)})
        return 0
    if args.command == "batch":
        if not args.file:
            print("bzeta: batch needs a file", file=sys.stderr)
            return 4
        with open(args.file) as fh:
            lines = fh.read().splitlines()
        for n, (text, status) in enumerate(batch(lines, base, args.workers), 1):
            print(text)
            if status:
                print(f"bzeta: batch document {n} has status {status}", file=sys.stderr)
        return 0
    if args.command == "run":
        if not args.file:
            print("bzeta: run needs a job file", file=sys.stderr)
            return 4
        try:
            with open(args.file) as fh:
                job = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"bzeta: {exc}", file=sys.stderr)
            return 4
        if args.seed is not None:
            job["seed"] = args.seed
    else:
        if args.file:
            print(f"bzeta: unexpected argument {args.file!r}", file=sys.stderr)
            return 4
        job = {"command": args.command, "params": params}
        if args.seed is not None:
            job["seed"] = args.seed
    doc, status = run(job, base)
    emit(doc)
    if status:
        print(f"bzeta: {doc['error']['type']}: {doc['error']['message']}", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
