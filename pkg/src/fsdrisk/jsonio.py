"""JSON and CSV input and output.

One file format per object kind: distributions (atom lists or a named
continuous family), step curves, kernels, measures, tabulated kernel
grids, and check reports.  Infinities travel as the strings "inf" and
"-inf" in JSON and as those bare words in CSV; NaN is rejected wherever
it appears.  Rejections raise InputError carrying a stable code so the
command line can map them to exit status and a terse message:

    NO_FILE     missing or unreadable input file
    BAD_JSON    input is not JSON at all
    BAD_SCHEMA  JSON is well-formed but not the expected shape
    NAN_VALUE   a NaN appeared where a value was expected
    MASS_SUM    atom masses do not sum to one
"""

from __future__ import annotations

import csv
import json
import math
from math import fsum
from pathlib import Path
from typing import Any, TextIO, Union

from .dist import MASS_TOL, ContinuousCDF, DiscreteDist
from .engine import PsiGrid, RecoveredLambda, RepresentationReport
from .harness import PairWitness, PointWitness, ProbeWitness, StabilityReport, Witness
from .kernels import (
    BenchmarkLossKernel,
    GridKernel,
    LambdaKernel,
    PinnedKernel,
    PsiKernel,
    VarKernel,
)
from .measures import (
    RiskMeasure,
    benchmark_loss_measure,
    expected_shortfall_measure,
    lambda_quantile_measure,
    pinned_measure,
    var_measure,
)
from .steps import DEC, INC, MonotoneStep

INF = math.inf

Distribution = Union[DiscreteDist, ContinuousCDF]


class InputError(ValueError):
    """Input rejection with a stable machine-readable code."""

    def __init__(self, code: str, message: str):
        super().__init__(f"[{code}] {message}")
        self.code = code
        self.message = message


def dump_num(v: float) -> Any:
    """JSON-safe number; infinities become sentinel strings."""
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return float(v)


def parse_num(v: Any, where: str) -> float:
    """Read a number, accepting the infinity sentinels, rejecting NaN."""
    if isinstance(v, bool):
        raise InputError("BAD_SCHEMA", f"{where}: expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        f = float(v)
        if math.isnan(f):
            raise InputError("NAN_VALUE", f"{where}: NaN is not a usable value")
        return f
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf"):
            return INF
        if s == "-inf":
            return -INF
        if s == "nan":
            raise InputError("NAN_VALUE", f"{where}: NaN is not a usable value")
    raise InputError("BAD_SCHEMA", f"{where}: expected a number, got {v!r}")


def parse_json_text(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("BAD_JSON", f"malformed JSON: {exc}") from None


def load_json_file(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        raise InputError("NO_FILE", f"no such file: {p}") from None
    except OSError as exc:
        raise InputError("NO_FILE", f"cannot read {p}: {exc}") from None
    return parse_json_text(text)


def dump_json(obj: Any) -> str:
    """Canonical rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- distributions --------------------------------------------------------


def distribution_to_obj(dist: Distribution) -> dict:
    if isinstance(dist, ContinuousCDF):
        if not dist.name.startswith("uniform"):
            raise ValueError(f"no file form for continuous family {dist.name!r}")
        lo, hi = dist.support
        return {"family": "uniform", "a": lo, "b": hi}
    return {"atoms": [{"x": dump_num(x), "p": dump_num(p)} for x, p in dist.atoms]}


def parse_distribution_obj(obj: Any) -> Distribution:
    if not isinstance(obj, dict):
        raise InputError("BAD_SCHEMA", "distribution must be a JSON object")
    if "atoms" in obj:
        raw = obj["atoms"]
        if not isinstance(raw, list) or not raw:
            raise InputError("BAD_SCHEMA", "atoms must be a non-empty list")
        atoms = []
        for i, entry in enumerate(raw):
            if not isinstance(entry, dict) or "x" not in entry or "p" not in entry:
                raise InputError("BAD_SCHEMA", f"atom {i} must be an object with keys x and p")
            x = parse_num(entry["x"], f"atom {i} x")
            p = parse_num(entry["p"], f"atom {i} p")
            if not math.isfinite(x):
                raise InputError("BAD_SCHEMA", f"atom {i}: position must be finite, got {x}")
            if not 0.0 < p <= 1.0:
                raise InputError("BAD_SCHEMA", f"atom {i}: mass must lie in (0, 1], got {p}")
            atoms.append((x, p))
        total = fsum(p for _, p in atoms)
        if abs(total - 1.0) > MASS_TOL:
            raise InputError("MASS_SUM", f"atom masses sum to {total!r}, need 1 within {MASS_TOL}")
        return DiscreteDist.from_atoms(atoms)
    if obj.get("family") == "uniform":
        a = parse_num(obj.get("a"), "uniform bound a")
        b = parse_num(obj.get("b"), "uniform bound b")
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise InputError("BAD_SCHEMA", f"uniform needs finite bounds a < b, got {a}, {b}")
        return ContinuousCDF.uniform(a, b)
    raise InputError("BAD_SCHEMA", "distribution needs an atoms list or family: uniform")


def parse_distribution_file(path: str | Path) -> Distribution:
    return parse_distribution_obj(load_json_file(path))


def save_distribution_file(dist: Distribution, path: str | Path) -> None:
    Path(path).write_text(dump_json(distribution_to_obj(dist)))


# -- step curves ----------------------------------------------------------


def step_to_obj(step: MonotoneStep) -> dict:
    obj = {
        "breakpoints": [dump_num(b) for b in step.breakpoints],
        "values": [dump_num(v) for v in step.values],
        "direction": step.direction,
    }
    if step.at_one is not None:
        obj["at_one"] = dump_num(step.at_one)
    return obj


def parse_step_obj(obj: Any, where: str = "step") -> MonotoneStep:
    if not isinstance(obj, dict):
        raise InputError("BAD_SCHEMA", f"{where}: expected a step object")
    for key in ("breakpoints", "values"):
        if not isinstance(obj.get(key), list):
            raise InputError("BAD_SCHEMA", f"{where}: needs a list under {key!r}")
    bps = [parse_num(v, f"{where}.breakpoints[{i}]") for i, v in enumerate(obj["breakpoints"])]
    vals = [parse_num(v, f"{where}.values[{i}]") for i, v in enumerate(obj["values"])]
    direction = obj.get("direction", INC)
    if direction not in (INC, DEC):
        raise InputError("BAD_SCHEMA", f"{where}: direction must be {INC!r} or {DEC!r}")
    at_one = parse_num(obj["at_one"], f"{where}.at_one") if "at_one" in obj else None
    try:
        return MonotoneStep(tuple(bps), tuple(vals), direction, at_one)
    except ValueError as exc:
        raise InputError("BAD_SCHEMA", f"{where}: {exc}") from None


# -- kernels and measures -------------------------------------------------


def kernel_to_obj(kernel: PsiKernel) -> dict:
    if isinstance(kernel, VarKernel):
        return {"kind": "var", "alpha": dump_num(kernel.alpha)}
    if isinstance(kernel, BenchmarkLossKernel):
        if not isinstance(kernel.h, MonotoneStep):
            raise ValueError("only step benchmark curves have a JSON form")
        return {"kind": "benchmark_loss", "h": step_to_obj(kernel.h)}
    if isinstance(kernel, LambdaKernel):
        return {"kind": "lambda", "Lambda": step_to_obj(kernel.lam)}
    if isinstance(kernel, PinnedKernel):
        return {"kind": "pinned", "x0": dump_num(kernel.x0), "g": step_to_obj(kernel.g)}
    if isinstance(kernel, GridKernel):
        return {
            "x_grid": [dump_num(v) for v in kernel.x_grid],
            "p_grid": [dump_num(v) for v in kernel.p_grid],
            "table": [[dump_num(v) for v in row] for row in kernel.table],
        }
    raise ValueError(f"no JSON form for kernel type {type(kernel).__name__}")


def parse_kernel_obj(obj: Any) -> PsiKernel:
    if not isinstance(obj, dict):
        raise InputError("BAD_SCHEMA", "kernel must be a JSON object")
    if "kind" not in obj and "table" in obj:
        return _parse_grid_kernel(obj)
    kind = obj.get("kind")
    try:
        if kind == "var":
            return VarKernel(parse_num(obj.get("alpha"), "var alpha"))
        if kind == "benchmark_loss":
            return BenchmarkLossKernel(parse_step_obj(obj.get("h"), "h"))
        if kind == "lambda":
            return LambdaKernel(parse_step_obj(obj.get("Lambda"), "Lambda"))
        if kind == "pinned":
            x0 = parse_num(obj.get("x0"), "pinned x0")
            return PinnedKernel(x0, parse_step_obj(obj.get("g"), "g"))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError("BAD_SCHEMA", f"kernel {kind!r}: {exc}") from None
    raise InputError("BAD_SCHEMA", f"unknown kernel kind {kind!r}")


def _parse_grid_kernel(obj: dict) -> GridKernel:
    xg, pg, table = _parse_grid_fields(obj)
    try:
        return GridKernel(xg, pg, table)
    except ValueError as exc:
        raise InputError("BAD_SCHEMA", f"kernel grid: {exc}") from None


def _parse_grid_fields(obj: dict) -> tuple[tuple, tuple, tuple]:
    for key in ("x_grid", "p_grid", "table"):
        if not isinstance(obj.get(key), list):
            raise InputError("BAD_SCHEMA", f"grid needs a list under {key!r}")
    xg = tuple(parse_num(v, f"x_grid[{i}]") for i, v in enumerate(obj["x_grid"]))
    pg = tuple(parse_num(v, f"p_grid[{i}]") for i, v in enumerate(obj["p_grid"]))
    table = []
    for i, row in enumerate(obj["table"]):
        if not isinstance(row, list):
            raise InputError("BAD_SCHEMA", f"table[{i}] must be a list")
        table.append(tuple(parse_num(v, f"table[{i}][{j}]") for j, v in enumerate(row)))
    return xg, pg, tuple(table)


def parse_measure_obj(obj: Any) -> RiskMeasure:
    if not isinstance(obj, dict):
        raise InputError("BAD_SCHEMA", "measure must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "var":
            return var_measure(parse_num(obj.get("alpha"), "var alpha"))
        if kind == "benchmark_loss":
            return benchmark_loss_measure(parse_step_obj(obj.get("h"), "h"))
        if kind == "lambda":
            return lambda_quantile_measure(parse_step_obj(obj.get("Lambda"), "Lambda"))
        if kind == "pinned":
            x0 = parse_num(obj.get("x0"), "pinned x0")
            return pinned_measure(x0, parse_step_obj(obj.get("g"), "g"))
        if kind == "expected_shortfall":
            return expected_shortfall_measure(parse_num(obj.get("alpha"), "shortfall alpha"))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError("BAD_SCHEMA", f"measure {kind!r}: {exc}") from None
    raise InputError("BAD_SCHEMA", f"unknown measure kind {kind!r}")


# emitted objects must parse back, so factory names map onto the file
# kinds and parameter keys parse_measure_obj knows
_MEASURE_KIND = {
    "var": "var",
    "benchmark_loss_var": "benchmark_loss",
    "lambda_quantile": "lambda",
    "expected_shortfall": "expected_shortfall",
    "pinned": "pinned",
}
_MEASURE_KEY = {"level_curve": "Lambda"}


def measure_to_obj(measure: RiskMeasure) -> dict:
    kind = _MEASURE_KIND.get(measure.name)
    if kind is None:
        raise ValueError(f"no JSON form for measure {measure.name!r}")
    obj: dict[str, Any] = {"kind": kind}
    for key, value in measure.params:
        key = _MEASURE_KEY.get(key, key)
        if isinstance(value, MonotoneStep):
            obj[key] = step_to_obj(value)
        elif isinstance(value, (int, float)) and not isinstance(value, bool):
            obj[key] = dump_num(float(value))
        else:
            raise ValueError(f"measure parameter {key!r} has no JSON form")
    return obj


# -- kernel grids from the constructive engine ----------------------------


def psi_grid_to_obj(grid: PsiGrid) -> dict:
    return {
        "x_grid": [dump_num(v) for v in grid.x_grid],
        "p_grid": [dump_num(v) for v in grid.p_grid],
        "table": [[dump_num(v) for v in row] for row in grid.table],
        "y_max": dump_num(grid.y_max),
        "tol": grid.tol,
    }


def parse_psi_grid_obj(obj: Any) -> PsiGrid:
    if not isinstance(obj, dict):
        raise InputError("BAD_SCHEMA", "kernel grid must be a JSON object")
    xg, pg, table = _parse_grid_fields(obj)
    y_max = parse_num(obj["y_max"], "y_max") if "y_max" in obj else xg[-1] + (xg[-1] - xg[0])
    tol = parse_num(obj["tol"], "tol") if "tol" in obj else 1e-9
    try:
        return PsiGrid(xg, pg, table, y_max, tol)
    except ValueError as exc:
        raise InputError("BAD_SCHEMA", f"kernel grid: {exc}") from None


# -- reports --------------------------------------------------------------


def witness_to_obj(w: Witness) -> dict:
    if isinstance(w, PairWitness):
        return {
            "type": "pair",
            "trial": w.trial,
            "f": distribution_to_obj(w.f),
            "g": distribution_to_obj(w.g),
            "lhs": dump_num(w.lhs),
            "rhs": dump_num(w.rhs),
            "gap": dump_num(w.gap),
        }
    if isinstance(w, PointWitness):
        return {
            "type": "point",
            "x": dump_num(w.x),
            "y": dump_num(w.y),
            "value_x": dump_num(w.value_x),
            "value_y": dump_num(w.value_y),
            "gap": dump_num(w.gap),
        }
    if isinstance(w, ProbeWitness):
        return {
            "type": "probe",
            "n": w.n,
            "value": dump_num(w.value),
            "reference": dump_num(w.reference),
            "gap": dump_num(w.gap),
            "reason": w.reason,
        }
    raise ValueError(f"no JSON form for witness type {type(w).__name__}")


def report_to_obj(report: StabilityReport) -> dict:
    obj = {
        "axiom": report.axiom,
        "seed": report.seed,
        "trials": report.trials,
        "violations": report.violations,
        "worst_gap": dump_num(report.worst_gap),
        "witness": None if report.witness is None else witness_to_obj(report.witness),
        "verdict": report.verdict,
    }
    if report.tail_gap is not None:
        obj["tail_gap"] = dump_num(report.tail_gap)
    return obj


def report_to_json(report: StabilityReport) -> str:
    return dump_json(report_to_obj(report))


def representation_report_to_obj(report: RepresentationReport) -> dict:
    return {
        "count": report.count,
        "tol": report.tol,
        "max_error": dump_num(report.max_error),
        "worst_index": report.worst_index,
        "failures": [
            {"index": i, "direct": dump_num(d), "recovered": dump_num(r), "error": dump_num(e)}
            for i, d, r, e in report.failures
        ],
    }


def recovered_lambda_to_obj(rec: RecoveredLambda) -> dict:
    return {
        "x_grid": [dump_num(v) for v in rec.x_grid],
        "lambda_hat": [dump_num(v) for v in rec.lam_hat],
        "f_hat": [dump_num(v) for v in rec.f_hat],
        "lambda_violations": list(rec.lam_violations),
        "f_violations": list(rec.f_violations),
        "tol": rec.tol,
        "probe_count": rec.probe_count,
        "cross_max_error": dump_num(rec.cross_max_error),
    }


# -- superlevel boundaries ------------------------------------------------


def superlevel_rows(
    kernel: PsiKernel,
    threshold: float,
    x_range: tuple[float, float],
    resolution: int = 101,
) -> list[tuple[float, float | None, bool]]:
    """Boundary of the region where the kernel meets a threshold.

    Both axes are sampled on regular grids of the given resolution, p
    over [0, 1].  Each row holds the largest sampled p at which
    psi(x, p) >= threshold, or None when no sampled level qualifies.
    """
    lo, hi = (float(x_range[0]), float(x_range[1]))
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"x range must be a finite interval, got {x_range}")
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    steps = resolution - 1
    xs = [lo + (hi - lo) * k / steps for k in range(resolution)]
    ps = [k / steps for k in range(resolution)]
    rows: list[tuple[float, float | None, bool]] = []
    for x in xs:
        boundary = None
        for p in ps:
            if kernel.eval(x, p) >= threshold:
                boundary = p
        rows.append((x, boundary, boundary is not None))
    return rows


def csv_num(v: float) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return repr(float(v))


def write_superlevel_csv(rows: list[tuple[float, float | None, bool]], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["x", "p_boundary", "reachable"])
    for x, p, reachable in rows:
        writer.writerow([csv_num(x), "none" if p is None else csv_num(p), "true" if reachable else "false"])
