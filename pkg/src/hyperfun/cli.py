"""Command-line front end.

    hyperfun COMMAND [CONFIG] [-o OUTPUT] [--format csv|json]

CONFIG is a JSON document (a path, or ``-``/absent for stdin).  Exit status
is 0 on success, 2 when the configuration or a grid point is invalid, and 3
on a numerical failure (non-convergence, a pole, or a failed certification).
Every failure also writes one JSON error record to stderr.
"""
from __future__ import annotations

import argparse
import io
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .confluent import EvalPoint, ha_eval
from .decomposition import (fa_decomposed, fa_decomposed_transformed, fa_recursive,
                            ha_decomposed)
from .errors import ConvergenceError, DomainError, HyperfunError, PoleError
from .helmholtz import (PointPair, SingularConfig, evaluate_ha, q_k, singularity_limit,
                        singularity_probe, singularity_target)
from .multiseries import HaParams, lauricella_fa
from .scalar import DEFAULT_TRUNCATION, Truncation
from .verify import FD_TRUNCATION, hypergeometric_system_residual, helmholtz_residual

__all__ = ["COMMANDS", "JobConfig", "ConfigError", "parse_job",
           "run_job", "format_csv", "format_json", "main"]

COMMANDS = ("eval-ha", "eval-fa", "eval-q", "verify-pde", "verify-system",
            "verify-decomposition", "singularity-scan")
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

DEFAULT_THRESHOLDS = {
    "verify-pde": 1e-5,
    "verify-system": 1e-9,
    "verify-decomposition": 1e-8,
    "singularity-scan": 0.01,
}
# accepted empirical convergence order of the finite-difference residual
ORDER_WINDOW = (1.7, 2.3)


class ConfigError(ValueError):
    """The job document does not describe a valid job."""


@dataclass
class JobConfig:
    command: str
    config: SingularConfig | HaParams
    grid: list[tuple[float, ...]]
    output_path: str | None = None
    output_format: str = "csv"
    truncation: Truncation | None = None
    extra: dict[str, Any] = field(default_factory=dict)


# --------------------------------------------------------------------- parsing

def _floats(value, what: str) -> tuple[float, ...]:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{what} must be a nonempty list of numbers")
    try:
        out = tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must contain only numbers") from None
    if not all(math.isfinite(v) for v in out):
        raise ConfigError(f"{what} must be finite")
    return out


def _grid(spec) -> list[tuple[float, ...]]:
    if not isinstance(spec, dict):
        raise ConfigError("grid must be an object with 'points' or 'axes'")
    if "points" in spec:
        pts = spec["points"]
        if not isinstance(pts, list) or not pts:
            raise ConfigError("grid.points must be a nonempty list")
        return [_floats(p, "grid point") for p in pts]
    if "axes" in spec:
        axes = spec["axes"]
        if not isinstance(axes, list) or not axes:
            raise ConfigError("grid.axes must be a nonempty list")
        values = []
        for ax in axes:
            if isinstance(ax, (int, float)) and not isinstance(ax, bool):
                values.append([float(ax)])
                continue
            try:
                start, stop, num = float(ax["start"]), float(ax["stop"]), int(ax["num"])
            except (KeyError, TypeError, ValueError):
                raise ConfigError("each axis needs numeric start, stop and num") from None
            if num < 1:
                raise ConfigError("axis num must be >= 1")
            if ax.get("log", False):
                if start <= 0 or stop <= 0:
                    raise ConfigError("log axes need positive endpoints")
                values.append([float(v) for v in np.geomspace(start, stop, num)])
            else:
                values.append([float(v) for v in np.linspace(start, stop, num)])
        return [tuple(p) for p in itertools.product(*values)]
    raise ConfigError("grid must contain 'points' or 'axes'")


def _truncation(spec) -> Truncation | None:
    if spec is None:
        return None
    if not isinstance(spec, dict):
        raise ConfigError("truncation must be an object")
    unknown = set(spec) - {"max_order", "rel_tol", "term_cap"}
    if unknown:
        raise ConfigError(f"unknown truncation fields {sorted(unknown)}")
    try:
        return Truncation(**spec)
    except (TypeError, DomainError) as exc:
        raise ConfigError(f"bad truncation: {exc}") from None


def _model(command: str, spec) -> SingularConfig | HaParams:
    if not isinstance(spec, dict):
        raise ConfigError("config must be an object")
    helmholtz = command in ("eval-q", "verify-pde", "singularity-scan")
    try:
        if helmholtz:
            m = spec["m"]
            if not isinstance(m, int) or isinstance(m, bool):
                raise ConfigError("config.m must be an integer")
            cfg = SingularConfig(m, _floats(spec["alpha"], "config.alpha"),
                                 _floats(spec.get("lambda_sq", [0.0]), "config.lambda_sq"))
            if "n" in spec and spec["n"] != cfg.n:
                raise ConfigError("config.n disagrees with the length of alpha")
            return cfg
        return HaParams(float(spec["a"]), _floats(spec["b"], "config.b"),
                        _floats(spec["c"], "config.c"))
    except KeyError as exc:
        raise ConfigError(f"config lacks field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config: {exc}") from None


def parse_job(doc: dict, command: str | None = None) -> JobConfig:
    """Validate a job document; raises :class:`ConfigError`."""
    if not isinstance(doc, dict):
        raise ConfigError("job document must be a JSON object")
    cmd = doc.get("command", command)
    if command is not None and cmd != command:
        raise ConfigError(f"document is for {cmd!r}, command line asked for {command!r}")
    if cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}")
    model = _model(cmd, doc.get("config"))
    if cmd == "singularity-scan" and "grid" not in doc:
        grid = [(float(r),) for r in _floats(doc.get("radii"), "radii")]
    else:
        grid = _grid(doc.get("grid"))
    out = doc.get("output", {}) or {}
    if not isinstance(out, dict):
        raise ConfigError("output must be an object")
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format must be 'csv' or 'json'")
    extra = {k: v for k, v in doc.items()
             if k not in ("command", "config", "grid", "output", "truncation")}
    job = JobConfig(cmd, model, grid, out.get("path"), fmt, _truncation(doc.get("truncation")),
                    extra)
    _check_shapes(job)
    return job


def _check_shapes(job: JobConfig):
    cfg = job.config
    width: int | None
    if isinstance(cfg, SingularConfig):
        keys = ["x0"] + (["direction"] if "direction" in job.extra else [])
        for key in keys:
            if len(_floats(job.extra.get(key), key)) != cfg.m:
                raise ConfigError(f"{key} must have m = {cfg.m} coordinates")
        for k in _ks(job):
            if not 0 <= k <= cfg.n:
                raise ConfigError(f"k={k} outside [0, {cfg.n}]")
        width = 1 if job.command == "singularity-scan" else cfg.m
    elif job.command == "eval-fa":
        width = cfg.n
    elif job.command == "verify-decomposition":
        width = None
        for pt in job.grid:
            if len(pt) < cfg.n:
                raise ConfigError(f"grid points need at least n = {cfg.n} coordinates")
    else:
        width = None
        for pt in job.grid:
            if len(pt) <= cfg.n:
                raise ConfigError(f"{job.command} points need n = {cfg.n} ξ-values "
                                  "followed by at least one η-value")
    if width is not None and any(len(pt) != width for pt in job.grid):
        raise ConfigError(f"grid points must have {width} coordinates")
    if job.command != "verify-decomposition" and len({len(pt) for pt in job.grid}) != 1:
        raise ConfigError("all grid points must have the same length")


def _ks(job: JobConfig) -> list[int]:
    n = job.config.n
    ks = job.extra.get("k")
    if ks is None:
        return list(range(n + 1))
    if isinstance(ks, int) and not isinstance(ks, bool):
        ks = [ks]
    if not isinstance(ks, list) or not all(isinstance(k, int) and not isinstance(k, bool)
                                           for k in ks):
        raise ConfigError("k must be an integer or a list of integers")
    return ks


# ------------------------------------------------------------------- execution

def worker_count() -> int:
    raw = os.environ.get("HYPERFUN_THREADS")
    if raw is None or raw == "":
        return max(1, min(8, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"HYPERFUN_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("HYPERFUN_THREADS must be >= 1")
    return n


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    """Apply ``fn`` over ``items``; results keep input order."""
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    summary: dict[str, Any] = field(default_factory=dict)


def _trunc(job: JobConfig) -> Truncation:
    return job.truncation or DEFAULT_TRUNCATION


def _eval_ha(job, workers):
    P, tr = job.config, _trunc(job)
    n = P.n
    p = len(job.grid[0]) - n
    cols = [f"xi{i + 1}" for i in range(n)] + [f"eta{j + 1}" for j in range(p)] + ["value"]
    route = job.extra.get("route", "auto")

    def one(pt):
        ep = EvalPoint(pt[:n], pt[n:])
        if route == "auto" and sum(abs(v) for v in ep.xi) < 1.0 and any(v > 0 for v in ep.xi):
            return list(pt) + [ha_eval(P, ep, tr)]
        return list(pt) + [evaluate_ha(P, ep, tr, route)]

    return Table(cols, _map(one, job.grid, workers))


_FA_METHODS = {
    "series": lauricella_fa,
    "decomposed": fa_decomposed,
    "transformed": fa_decomposed_transformed,
    "recursive": fa_recursive,
}


def _eval_fa(job, workers):
    P, tr = job.config, _trunc(job)
    method = job.extra.get("method", "series")
    if method not in _FA_METHODS:
        raise ConfigError(f"method must be one of {sorted(_FA_METHODS)}")
    fn = _FA_METHODS[method]
    cols = [f"x{i + 1}" for i in range(P.n)] + ["value"]
    return Table(cols, _map(lambda x: list(x) + [fn(P, x, tr)], job.grid, workers))


def _x0(job) -> tuple[float, ...]:
    return _floats(job.extra.get("x0"), "x0")


def _eval_q(job, workers):
    cfg, tr = job.config, _trunc(job)
    x0, ks = _x0(job), _ks(job)
    cols = [f"x{i + 1}" for i in range(cfg.m)] + ["k", "value"]
    tasks = [(x, k) for x in job.grid for k in ks]
    return Table(cols, _map(lambda t: list(t[0]) + [t[1], q_k(cfg, PointPair(t[0], x0), t[1], tr)],
                            tasks, workers))


def _verify_pde(job, workers):
    cfg = job.config
    tr = job.truncation or FD_TRUNCATION
    x0, ks = _x0(job), _ks(job)
    h = job.extra.get("h")
    thr = float(job.extra.get("threshold", DEFAULT_THRESHOLDS["verify-pde"]))
    cols = [f"x{i + 1}" for i in range(cfg.m)] + ["k", "relative_residual", "order_estimate",
                                                  "step", "order_resolved", "passed"]

    def one(t):
        x, k = t
        rep = helmholtz_residual(cfg, lambda y: q_k(cfg, PointPair(tuple(y), x0), k, tr), x,
                                 None if h is None else float(h))
        in_window = ORDER_WINDOW[0] <= rep.order_estimate <= ORDER_WINDOW[1]
        ok = bool(rep.relative < thr and (in_window or not rep.order_resolved))
        return list(x) + [k, rep.relative, rep.order_estimate, rep.step,
                          rep.order_resolved, ok]

    rows = _map(one, [(x, k) for x in job.grid for k in ks], workers)
    return Table(cols, rows, {"threshold": thr, "order_window": list(ORDER_WINDOW),
                              "passed": all(r[-1] for r in rows)})


def _verify_system(job, workers):
    P, tr = job.config, _trunc(job)
    n = P.n
    ks = _ks(job)
    thr = float(job.extra.get("threshold", DEFAULT_THRESHOLDS["verify-system"]))
    p = len(job.grid[0]) - n
    cols = ([f"xi{i + 1}" for i in range(n)] + [f"eta{j + 1}" for j in range(p)]
            + ["k", "equation", "relative_residual", "passed"])

    def one(t):
        pt, k = t
        reps = hypergeometric_system_residual(P, EvalPoint(pt[:n], pt[n:]), k, tr)
        return [list(pt) + [k, r.label, r.relative, bool(r.relative < thr)] for r in reps]

    rows = [row for block in _map(one, [(pt, k) for pt in job.grid for k in ks], workers)
            for row in block]
    return Table(cols, rows, {"threshold": thr, "passed": all(r[-1] for r in rows)})


def _verify_decomposition(job, workers):
    P, tr = job.config, _trunc(job)
    n = P.n
    thr = float(job.extra.get("threshold", DEFAULT_THRESHOLDS["verify-decomposition"]))
    cols = ["point", "method", "reference", "value", "relative_difference", "passed"]

    def one(pt):
        out = []
        if len(pt) == n:
            ref = lauricella_fa(P, pt, tr)
            methods = [("decomposed", fa_decomposed), ("transformed", fa_decomposed_transformed)]
            if n in (2, 3):
                methods.append(("recursive", fa_recursive))
            for name, fn in methods:
                v = fn(P, pt, tr)
                out.append((name, ref, v))
        elif len(pt) > n:
            ep = EvalPoint(pt[:n], pt[n:])
            ref = ha_eval(P, ep, tr)
            out.append(("ha-decomposed", ref, ha_decomposed(P, ep, tr)))
        else:
            raise DomainError(f"point {pt} has fewer than n = {n} coordinates")
        label = " ".join(_fmt_float(v) for v in pt)
        return [[label, name, ref, v, abs(v - ref) / abs(ref) if ref else abs(v),
                 (abs(v - ref) / abs(ref) if ref else abs(v)) < thr] for name, ref, v in out]

    rows = [row for block in _map(one, job.grid, workers) for row in block]
    return Table(cols, rows, {"threshold": thr, "passed": all(r[-1] for r in rows)})


def _singularity_scan(job, workers):
    cfg, tr = job.config, _trunc(job)
    x0 = _x0(job)
    direction = _floats(job.extra.get("direction", [1.0] * cfg.m), "direction")
    radii = [p[0] for p in job.grid]
    ks = _ks(job) if "k" in job.extra else [0]
    thr = float(job.extra.get("threshold", DEFAULT_THRESHOLDS["singularity-scan"]))
    limit, printed = singularity_limit(cfg), singularity_target(cfg)
    cols = ["r", "k", "scaled", "target", "relative_gap", "printed_target", "printed_gap"]
    blocks = _map(lambda k: [(k, r, v) for r, v in singularity_probe(cfg, x0, direction, radii,
                                                                     k, tr)], ks, workers)
    rows = [[r, k, v, limit, abs(v - limit) / limit, printed, abs(v - printed) / printed]
            for block in blocks for k, r, v in block]
    final = [row for row in rows if row[0] == min(radii)]
    return Table(cols, rows, {"threshold": thr,
                              "passed": all(row[4] < thr for row in final)})


_RUNNERS = {
    "eval-ha": _eval_ha,
    "eval-fa": _eval_fa,
    "eval-q": _eval_q,
    "verify-pde": _verify_pde,
    "verify-system": _verify_system,
    "verify-decomposition": _verify_decomposition,
    "singularity-scan": _singularity_scan,
}


def run_job(job: JobConfig, workers: int | None = None) -> Table:
    try:
        return _RUNNERS[job.command](job, workers or worker_count())
    except DomainError as exc:
        # domain violations at grid points are input errors
        raise ConfigError(str(exc)) from exc


# ------------------------------------------------------------------ formatting

def _fmt_float(v: float) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def format_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(_csv_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _csv_cell(v) -> str:
    s = _fmt_float(v)
    if any(ch in s for ch in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _json_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return format(v, ".17g") if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}"
                               for k, x in v.items()) + "}"
    return json.dumps(v)


def format_json(table: Table, command: str) -> str:
    """``{"command", "columns", "rows", ...summary}``; floats at 17 digits."""
    lines = ["{", f'  "command": {json.dumps(command)},',
             f'  "columns": {_json_value(table.columns)},']
    for k, v in table.summary.items():
        lines.append(f"  {json.dumps(k)}: {_json_value(v)},")
    lines.append('  "rows": [')
    body = [f"    {_json_value(list(r))}" for r in table.rows]
    lines.append(",\n".join(body))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------------ main

def _error(kind: str, message: str, code: int) -> int:
    rec = {"error": kind, "message": message, "exit_code": code}
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperfun",
                                 description="Evaluate and certify confluent hypergeometric "
                                             "functions and fundamental solutions.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("config", nargs="?", default="-",
                    help="JSON job document; '-' or absent reads stdin")
    ap.add_argument("-o", "--output", help="output path (overrides output.path; '-' is stdout)")
    ap.add_argument("--format", choices=("csv", "json"), help="overrides output.format")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config == "-":
            text = sys.stdin.read()
        else:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        job = parse_job(doc, args.command)
        if args.output:
            job.output_path = args.output
        if args.format:
            job.output_format = args.format
        workers = worker_count()
        table = run_job(job, workers)
    except OSError as exc:
        return _error("io", str(exc), EXIT_CONFIG)
    except ConfigError as exc:
        return _error("config", str(exc), EXIT_CONFIG)
    except (ConvergenceError, PoleError) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_NUMERIC)
    except HyperfunError as exc:
        return _error(type(exc).__name__, str(exc), EXIT_NUMERIC)

    text = format_csv(table) if job.output_format == "csv" else format_json(table, job.command)
    try:
        if job.output_path in (None, "-"):
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            with open(job.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        return _error("io", str(exc), EXIT_CONFIG)
    if table.summary.get("passed") is False:
        return _error("certification-failed",
                      f"{job.command}: some residuals exceed threshold "
                      f"{table.summary.get('threshold')}", EXIT_NUMERIC)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
