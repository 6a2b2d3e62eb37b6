"""Exact serialization: configuration JSON, CSV/JSON reports.

Scalars travel as exact strings ('p/q', or 'p/q+r/s i' over Q(i)), so a
configuration round-trips bit-for-bit. Report emission is byte-stable
for identical inputs: fixed column order, fixed float formatting, sorted
JSON keys.
"""

from __future__ import annotations

import csv
import io
import json

from .errors import InvalidInputError
from .fields import Field
from .incidence import PlaneCurve, PointConfiguration, make_curve
from .poly import BiPoly


def config_to_dict(cfg: PointConfiguration) -> dict:
    f = cfg.field
    return {
        "field": f.tag,
        "d": cfg.d,
        "points": [[f.format(x), f.format(y)] for x, y in cfg.points],
        "curves": [
            {f"{i},{j}": f.format(c) for (i, j), c in sorted(curve.poly.coeffs.items())}
            for curve in cfg.curves
        ],
    }


def config_from_dict(doc: dict) -> PointConfiguration:
    try:
        field = Field.from_tag(doc["field"])
        d = int(doc["d"])
        points = [(field.parse(str(x)), field.parse(str(y)))
                  for x, y in doc["points"]]
        curves = []
        for cdict in doc["curves"]:
            coeffs = {}
            for key, val in cdict.items():
                ij = key.split(",")
                if len(ij) != 2:
                    raise InvalidInputError(f"bad exponent key {key!r}")
                i, j = int(ij[0]), int(ij[1])
                if i < 0 or j < 0 or i + j > d:
                    raise InvalidInputError(
                        f"exponent {key!r} outside degree bound {d}")
                coeffs[(i, j)] = field.parse(str(val))
            curves.append(make_curve(BiPoly(field, coeffs)))
        return PointConfiguration(field, d, points, curves)
    except (KeyError, TypeError, ValueError) as e:
        raise InvalidInputError(f"malformed configuration document: {e}") from e


def save_config(cfg: PointConfiguration, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path: str) -> PointConfiguration:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


CSV_COLUMNS = [
    "config_id", "field", "d", "A", "n_points", "n_curves", "incidences",
    "rhs_initial", "rhs_trivial", "rhs_main", "rhs_family",
    "c_min_initial", "c_min_trivial", "c_min_main", "c_min_family",
    "deg_Q", "max_cell", "sum_Li", "ms_elapsed",
]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = r.as_dict()
        w.writerow([d.get(c, "") for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    return json.dumps([r.as_dict() for r in rows], indent=2, sort_keys=True) + "\n"
