"""Experiment sweeps: generate, validate, count, bound-check, report.

A sweep spec is a JSON document {"rows": [{"id": ..., "generator":
{...GeneratorSpec fields...}, "constants": {...}, "partition": bool,
"levels": int}]}. Each row runs in isolation: a failing row records its
error and the sweep continues. Rows are emitted in config-id order and
the output is byte-stable for a fixed spec and seed (ms_elapsed excluded
unless stable timing is requested).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .confio import rows_to_csv, rows_to_json
from .errors import IncidenceLabError, InvalidInputError
from .generators import GeneratorSpec, generate
from .incidence import evaluate_bounds, incidence_count_bruteforce
from .partition import (build_partition, choose_partition_degree,
                        incidence_count_partitioned)
from .veronese import degrees_of_freedom


def _fmt_fraction(x: Fraction, digits: int = 12) -> str:
    """Deterministic decimal rendering, rounded up so printed bound
    constants still pass when re-checked."""
    if x == 0:
        return "0"
    neg = x < 0
    x = abs(x)
    v = x * 10 ** digits
    scaled = -((-v.numerator) // v.denominator)  # ceiling
    s = str(scaled).rjust(digits + 1, "0")
    whole, frac = s[:-digits], s[-digits:]
    frac = frac.rstrip("0")
    out = whole + ("." + frac if frac else "")
    return "-" + out if neg else out


def _fmt_float(v: float) -> str:
    return f"{v:.6f}"


@dataclass
class SweepResultRow:
    config_id: str
    field: str = ""
    d: int | str = ""
    A: int | str = ""
    n_points: int | str = ""
    n_curves: int | str = ""
    incidences: int | str = ""
    rhs_initial: str = ""
    rhs_trivial: str = ""
    rhs_main: str = ""
    rhs_family: str = ""
    c_min_initial: str = ""
    c_min_trivial: str = ""
    c_min_main: str = ""
    c_min_family: str = ""
    deg_Q: int | str = ""
    max_cell: int | str = ""
    sum_Li: int | str = ""
    ms_elapsed: str = "0"
    error: str = ""
    extras: dict = dc_field(default_factory=dict)

    def as_dict(self) -> dict:
        d = {
            "config_id": self.config_id, "field": self.field, "d": self.d,
            "A": self.A, "n_points": self.n_points, "n_curves": self.n_curves,
            "incidences": self.incidences, "rhs_initial": self.rhs_initial,
            "rhs_trivial": self.rhs_trivial, "rhs_main": self.rhs_main,
            "rhs_family": self.rhs_family, "c_min_initial": self.c_min_initial,
            "c_min_trivial": self.c_min_trivial, "c_min_main": self.c_min_main,
            "c_min_family": self.c_min_family, "deg_Q": self.deg_Q,
            "max_cell": self.max_cell, "sum_Li": self.sum_Li,
            "ms_elapsed": self.ms_elapsed,
        }
        if self.error:
            d["error"] = self.error
        d.update(self.extras)
        return d


def run_row(row_spec: dict, stable_timing: bool = False) -> SweepResultRow:
    """Generate, count (brute + partitioned where applicable), evaluate bounds."""
    config_id = str(row_spec.get("id", ""))
    t0 = time.monotonic()
    try:
        gen = GeneratorSpec.from_dict(dict(row_spec["generator"]))
        out = generate(gen)
        cfg = out.config
        A = degrees_of_freedom(cfg.d).dof
        report = incidence_count_bruteforce(cfg)
        constants = {k: Fraction(str(v))
                     for k, v in row_spec.get("constants", {}).items()}
        report = evaluate_bounds(cfg, constants=constants, family=out.family,
                                 report=report)
        row = SweepResultRow(
            config_id=config_id, field=cfg.field.tag, d=cfg.d, A=A,
            n_points=cfg.n_points, n_curves=cfg.n_curves,
            incidences=report.incidence_count,
            rhs_initial=str(report.bound("initial").rhs_exact),
            rhs_trivial=str(report.bound("trivial").rhs_exact),
            rhs_main=_fmt_float(report.bound("main").rhs_approx),
            c_min_initial=_fmt_fraction(report.bound("initial").c_min),
            c_min_trivial=_fmt_fraction(report.bound("trivial").c_min),
            c_min_main=_fmt_fraction(report.bound("main").c_min),
        )
        fam = report.bound("family")
        if fam is not None:
            row.rhs_family = str(fam.rhs_exact)
            row.c_min_family = _fmt_fraction(fam.c_min)
        wants_partition = row_spec.get("partition", True)
        if wants_partition and cfg.field.kind == "rational" and cfg.n_points \
                and cfg.n_curves:
            regime = choose_partition_degree(cfg.n_points, cfg.n_curves, A)
            levels = row_spec.get("levels", regime.levels if not regime.skip else 0)
            if levels:
                part = build_partition(cfg.points, levels,
                                       seed=int(gen.seed) ^ 0xA5A5)
                _rep, ledger = incidence_count_partitioned(cfg, part)
                row.deg_Q = part.deg_q
                row.max_cell = part.max_occupancy
                row.sum_Li = ledger.sum_visited_cells
    except IncidenceLabError as e:
        row = SweepResultRow(config_id=config_id, error=f"{type(e).__name__}: {e}")
    if not stable_timing:
        row.ms_elapsed = str(int((time.monotonic() - t0) * 1000))
    return row


def run_sweep(spec: dict, stable_timing: bool = False) -> list[SweepResultRow]:
    rows_spec = spec.get("rows", [])
    rows = [run_row(r, stable_timing=stable_timing) for r in rows_spec]
    rows.sort(key=lambda r: r.config_id)
    return rows


def load_sweep_spec(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def emit_report(rows, fmt: str, path: str) -> None:
    """Write rows as CSV (fixed column order) or JSON (sorted keys)."""
    if fmt == "csv":
        payload = rows_to_csv(rows)
    elif fmt == "json":
        payload = rows_to_json(rows)
    else:
        raise InvalidInputError(f"unknown report format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)


def fit_exponent(pairs) -> tuple[float, float, float]:
    """Least squares on (log x, log y): returns (slope, intercept, rms residual)."""
    if len(pairs) < 2:
        raise InvalidInputError("need at least two data points")
    for x, y in pairs:
        if x <= 0 or y <= 0:
            raise InvalidInputError("log-log fit needs positive values")
    xs = [math.log(float(x)) for x, _ in pairs]
    ys = [math.log(float(y)) for _, y in pairs]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise InvalidInputError("x values are all equal; slope undefined")
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    intercept = my - slope * mx
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    return slope, intercept, math.sqrt(ss_res / n)


def fit_from_rows(rows, x_col: str, y_col: str):
    pairs = []
    for r in rows:
        d = r.as_dict() if hasattr(r, "as_dict") else r
        xs, ys = d.get(x_col, ""), d.get(y_col, "")
        if xs == "" or ys == "":
            continue
        pairs.append((float(xs), float(ys)))
    return fit_exponent(pairs)
