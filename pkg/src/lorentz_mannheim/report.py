"""Residual tables, verdicts and their CSV / JSON serialization.

Floats are written with 17 significant digits so every binary64 value
survives a round trip; non-applicable cells are empty (CSV) or null (JSON).
"""
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import lorentz, mannheim
from .errors import EmptyReport, UnsupportedFormat

DEFAULT_TOLERANCES = {
    "distance": 1e-8,
    "angle": 1e-7,
    "identity": 1e-6,
    "torsion": 1e-6,
    "torsion_ratio": 1e-6,
    "orthogonality": 1e-7,
    "fm": 1e-6,
    "speed": 1e-6,
    "frenet": 1e-6,
    "zero": 1e-6,
}

PAIR_COLUMNS = ["s", "s_star", "distance", "phi",
                "res_i", "res_ii", "res_iii", "res_iv",
                "res_v", "res_vi", "res_vii", "res_viii",
                "res_torsion", "res_orth_g", "res_orth_gt"]
ROMAN = ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii"]


@dataclass(frozen=True)
class Verdict:
    name: str
    tolerance: float
    max_residual: float
    mean_residual: float
    passed: bool
    count: int


@dataclass
class Report:
    kind: str
    columns: list
    data: dict
    verdicts: list
    meta: dict = field(default_factory=dict)
    extra_columns: list = field(default_factory=list)
    Z: list = field(default_factory=list)
    N: list = field(default_factory=list)

    @property
    def passed(self):
        return all(v.passed for v in self.verdicts)


def merge_tolerances(overrides=None):
    tol = dict(DEFAULT_TOLERANCES)
    for k, v in (overrides or {}).items():
        if k not in tol:
            raise ValueError(f"unknown tolerance {k!r}; known: {sorted(tol)}")
        if not v > 0:
            raise ValueError(f"tolerance {k} must be positive")
        tol[k] = float(v)
    return tol


def _as_columns(rows):
    if isinstance(rows, dict):
        return {k: np.atleast_1d(np.asarray(v, dtype=float)) for k, v in rows.items()}
    rows = list(rows)
    if not rows:
        return {}
    keys = sorted({k for r in rows for k in r})
    return {k: np.array([r.get(k, np.nan) for r in rows], dtype=float) for k in keys}


def aggregate(rows, tolerances):
    """One Verdict per named residual column.

    ``rows`` is a column mapping or a list of records; ``tolerances`` maps
    a column name to its tolerance, or a verdict name to (column, tolerance).
    Columns that are entirely empty (NaN) are not applicable and produce no
    verdict; a NaN inside an applicable column counts as a failure.
    """
    cols = _as_columns(rows)
    if not cols or all(v.size == 0 for v in cols.values()):
        raise EmptyReport("no rows to aggregate")
    out = []
    for name in sorted(tolerances):
        spec = tolerances[name]
        col, tol = (spec if isinstance(spec, tuple) else (name, spec))
        if col not in cols:
            continue
        x = np.abs(cols[col])
        if x.size == 0 or np.all(np.isnan(x)):
            continue
        bad = ~np.isfinite(x)
        mx = math.inf if bad.any() else float(np.max(x))
        mean = math.inf if bad.any() else float(np.mean(x))
        out.append(Verdict(name, float(tol), mx, mean, bool(mx < tol), int(x.size)))
    if not out:
        raise EmptyReport("no applicable residual columns")
    return out


def column_stats(data):
    stats = {}
    for k in sorted(data):
        x = np.asarray(data[k], dtype=float)
        x = x[np.isfinite(x)]
        if x.size:
            stats[k] = {"max": float(np.max(x)), "mean": float(np.mean(x)), "std": float(np.std(x))}
        else:
            stats[k] = {"max": None, "mean": None, "std": None}
    return stats


# ------------------------------------------------------------ pair report

def _nan(n):
    return np.full(n, np.nan)


def pair_report(ps, lam, mu, case_id, convention="stated", tolerances=None, meta=None):
    """Run every pair check on PairSamples and collect a Report."""
    tol = merge_tolerances(tolerances)
    n = ps.s.size
    (e1, e2), (et1, et2) = mannheim.CASES[case_id]
    phi, ids = mannheim.check_lemma1_identities(ps, lam, mu, case_id, convention)
    dist = mannheim.minkowski_distance(ps.alpha, ps.beta)
    pred = mannheim.partner_torsion(ps.g.kappa, ps.g.tau, lam, mu, case_id, convention)
    res_tor = np.abs(ps.gt.tau - pred) / np.abs(ps.gt.tau)
    og, ogt = mannheim.check_orthogonality(ps.alpha, ps.beta, ps.g.T, ps.gt.T)
    data = {"s": ps.s, "s_star": ps.s_star, "distance": dist, "phi": phi,
            "res_torsion": res_tor, "res_orth_g": og, "res_orth_gt": ogt}
    for r in ROMAN:
        data["res_" + r] = ids.get("res_" + r, _nan(n))

    extra = {}
    extra["res_distance"] = np.abs(dist - np.mean(dist))
    extra["res_lambda"] = np.abs(dist - abs(lam))
    extra["res_phi_const"] = np.abs(phi - np.mean(phi))
    extra["res_fm"] = np.linalg.norm(ps.g.N - mu * ps.gt.B, axis=-1)
    bb = lorentz.minkowski_dot(ps.gt.B, ps.gt.B)
    mu_i = np.where(lorentz.minkowski_dot(ps.g.N, ps.gt.B) / bb >= 0, 1, -1)
    extra["res_mu"] = np.abs(mu_i - mu).astype(float)
    q = mannheim.remark1_quantity(ps.g.kappa, ps.g.tau, ps.gt.tau, case_id, convention)
    extra["torsion_ratio"] = q
    extra["res_torsion_ratio"] = np.abs(q - np.mean(q))
    speed = 1.0 / ps.dsstar_ds
    tt = ps.gt.tau
    if convention == "derived":
        extra["res_speed_formula"] = np.abs(speed - np.sqrt(np.abs(et1 + et2 * lam ** 2 * tt ** 2)))
        extra["res_curvature_formula"] = np.abs(ps.g.kappa - abs(lam) * tt ** 2 * ps.dsstar_ds ** 2)
    else:
        # the radicand can be negative; compare squares so the residual stays finite
        extra["res_speed_formula"] = np.abs(speed ** 2 - (et1 - et2 * lam ** 2 * tt ** 2))
        S = np.sin(phi) if case_id == 3 else np.sinh(phi)
        extra["res_curvature_formula"] = np.abs(ps.g.kappa - mu * ps.dsstar_ds * tt * S)
    for k in ("rel_ds", "rel_tau_t", "rel_tau", "rel_kappa", "res_cos0"):
        if k in ids:
            extra[k] = ids[k]
    data.update(extra)

    checks = {
        "lambda_constancy": ("res_distance", tol["distance"]),
        "lambda_value": ("res_lambda", tol["distance"]),
        "torsion_formula": ("res_torsion", tol["torsion"]),
        "torsion_ratio": ("res_torsion_ratio", tol["torsion_ratio"]),
        "orthogonality_g": ("res_orth_g", tol["orthogonality"]),
        "orthogonality_gt": ("res_orth_gt", tol["orthogonality"]),
        "fm_property": ("res_fm", tol["fm"]),
        "mu_constant": ("res_mu", tol["fm"]),
        "speed_formula": ("res_speed_formula", tol["speed"]),
        "curvature_formula": ("res_curvature_formula", tol["identity"]),
        "case3_cos0": ("res_cos0", tol["identity"]),
    }
    if convention == "stated":
        checks["angle_constancy"] = ("res_phi_const", tol["angle"])
    for r in ROMAN:
        checks["identity_" + r] = ("res_" + r, tol["identity"])
    for k in ("rel_ds", "rel_tau_t", "rel_tau", "rel_kappa"):
        checks["speed_relation_" + k[4:]] = (k, tol["identity"])
    verdicts = aggregate(data, checks)
    m = {"case": case_id, "lambda": float(lam), "mu": int(mu), "convention": convention,
         "signature": lorentz.get_signature(), "samples": int(n),
         "eps": [int(e1), int(e2), int(et1), int(et2)],
         "iv_sign_violations": mannheim.iv_sign_violations(ps.g.kappa, ps.g.tau, tt, lam, mu, case_id)}
    m.update(meta or {})
    return Report("pair", list(PAIR_COLUMNS), data, verdicts, m,
                  extra_columns=sorted(k for k in data if k not in PAIR_COLUMNS))


# ----------------------------------------------------------- serializers

def _fmt(x):
    if x is None:
        return ""
    x = float(x)
    if not math.isfinite(x):
        return ""
    return "%.17g" % x


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(json.dumps(str(k)) + ": " + _json_value(v[k]) for k in v) + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _meta_line(meta):
    return "# " + " ".join(f"{k}={_json_value(meta[k]).replace(' ', '')}" for k in sorted(meta)) + "\n"


def _to_struct(report):
    cols = list(report.columns) + list(report.extra_columns)
    n = len(report.data[cols[0]]) if cols else 0
    rows = [{c: float(report.data[c][i]) for c in cols} for i in range(n)]
    return {
        "kind": report.kind,
        "meta": {k: report.meta[k] for k in sorted(report.meta)},
        "columns": list(report.columns),
        "extra_columns": list(report.extra_columns),
        "rows": rows,
        "aggregates": column_stats({c: report.data[c] for c in cols}),
        "verdicts": [{"name": v.name, "tolerance": v.tolerance, "max_residual": v.max_residual,
                      "mean_residual": v.mean_residual, "passed": v.passed, "count": v.count}
                     for v in report.verdicts],
        "Z": [list(map(float, z)) for z in report.Z],
        "N": [list(map(float, z)) for z in report.N],
    }


def serialize(report, fmt="csv"):
    """Bytes of the report in ``csv`` or ``json``."""
    if fmt not in ("csv", "json"):
        raise UnsupportedFormat(f"unsupported format {fmt!r}; use csv or json")
    if not report.verdicts:
        raise EmptyReport("report has no verdicts")
    if fmt == "json":
        return (_json_value(_to_struct(report)) + "\n").encode()
    buf = io.StringIO()
    buf.write(_meta_line(report.meta))
    buf.write(",".join(report.columns) + "\n")
    n = len(report.data[report.columns[0]])
    for i in range(n):
        buf.write(",".join(_fmt(report.data[c][i]) for c in report.columns) + "\n")
    return buf.getvalue().encode()


def parse_json(blob):
    """Inverse of ``serialize(report, "json")``."""
    d = json.loads(blob)
    cols = d["columns"] + d["extra_columns"]
    data = {c: np.array([np.nan if r[c] is None else r[c] for r in d["rows"]], dtype=float) for c in cols}
    verdicts = [Verdict(v["name"], v["tolerance"],
                        math.inf if v["max_residual"] is None else v["max_residual"],
                        math.inf if v["mean_residual"] is None else v["mean_residual"],
                        v["passed"], v["count"]) for v in d["verdicts"]]
    return Report(d["kind"], d["columns"], data, verdicts, d["meta"], d["extra_columns"],
                  [tuple(z) for z in d["Z"]], [tuple(z) for z in d["N"]])


def write_summary(report, stream):
    """Human-readable verdict table."""
    for v in report.verdicts:
        flag = "PASS" if v.passed else "FAIL"
        stream.write(f"{flag}  {v.name:<24} max={v.max_residual:.3e}  tol={v.tolerance:.1e}  n={v.count}\n")
