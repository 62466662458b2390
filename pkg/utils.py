import dataclasses
import json
import math
import sys
from fractions import Fraction

import numpy as np
import pandas as pd

from algebra.poly import rational_str


def to_jsonable(obj):
    """Exact rationals become strings, numpy scalars plain numbers, reports their to_dict()."""
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(obj, path=None):
    text = dumps(obj)
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def write_csv(frame, path):
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.17g")


def summarize_report(report):
    """One row per verification in a saved report: name, verdict, measured, target, tolerance."""
    rows = []
    for name, result in (report.get("verifications") or {}).items():
        fit = result.get("fit") or {}
        rows.append({
            "verification": name,
            "verdict": result.get("verdict"),
            "measured": fit.get("slope", result.get("margin")),
            "target": fit.get("target"),
            "tolerance": fit.get("tolerance"),
            "rSquared": fit.get("rSquared"),
        })
    return pd.DataFrame(rows, columns=["verification", "verdict", "measured", "target", "tolerance", "rSquared"])


def calculate_avg_std(df):
    """Mean and standard deviation of every numeric column."""
    numeric = df.select_dtypes(include=["number"])
    return pd.DataFrame({"mean": numeric.mean(), "std": numeric.std()})
