"""Command-line front end.

Exit codes: 0 all checks pass, 1 some check failed, 2 bad input or
configuration, 3 geometric error (the requested object does not exist).
"""
import argparse
import csv
import json
import sys

import numpy as np

from . import curves, frenet, lorentz, mannheim, report
from .errors import BadParams, GeometryError, SpecError, TooFewSamples

EXIT_OK, EXIT_FAIL, EXIT_SPEC, EXIT_GEOM = 0, 1, 2, 3


# ------------------------------------------------------------------ inputs

def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read curve spec {path}: {exc}") from None


def curve_from_spec(spec):
    """Curve from a spec mapping; adds the ``offset`` form to the curves schema.

    {"offset": {"base": <curve spec>, "lambda": L}} is the curve base + L B
    of the base, parametrized by the arc length of the base.
    """
    if isinstance(spec, dict) and "offset" in spec:
        off = spec["offset"]
        if not isinstance(off, dict) or "base" not in off or "lambda" not in off:
            raise SpecError("offset spec needs 'base' and 'lambda'")
        base = curve_from_spec(off["base"])
        return mannheim.construct_partner_curve(base, float(off["lambda"]))[0]
    return curves.curve_from_spec(spec)


def load_spec(path):
    spec = _read_json(path)
    return curve_from_spec(spec), spec


def read_correspondence(path):
    try:
        with open(path, newline="") as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
    except OSError as exc:
        raise SpecError(f"cannot read correspondence {path}: {exc}") from None
    rows = list(csv.reader(lines))
    if not rows or [c.strip() for c in rows[0][:2]] != ["s", "s_star"]:
        raise SpecError("correspondence file needs a header 's,s_star'")
    try:
        data = np.array([[float(r[0]), float(r[1])] for r in rows[1:] if r], dtype=float)
    except (ValueError, IndexError):
        raise SpecError("correspondence rows must be two numbers") from None
    if data.ndim != 2 or data.shape[0] < curves.MIN_SAMPLES:
        raise TooFewSamples(f"correspondence needs at least {curves.MIN_SAMPLES} rows")
    return data[:, 0], data[:, 1]


def _parse_tol(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise SpecError(f"--tol expects name=value, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise SpecError(f"bad tolerance value in {item!r}") from None
    try:
        return report.merge_tolerances(out)
    except ValueError as exc:
        raise SpecError(str(exc)) from None


def _parse_lambdas(text):
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SpecError("--lambdas range is start:stop:count")
        try:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise SpecError("bad --lambdas range") from None
        lams = np.linspace(a, b, n) if n > 0 else np.array([])
    else:
        try:
            lams = np.array([float(x) for x in text.split(",") if x.strip()])
        except ValueError:
            raise SpecError("bad --lambdas list") from None
    if lams.size == 0:
        raise SpecError("empty lambda range")
    if np.any(lams == 0):
        raise SpecError("lambda range must exclude 0")
    return lams


def _check_lambda(lam):
    if lam is None:
        raise SpecError("--lambda is required")
    if lam == 0 or not np.isfinite(lam):
        raise BadParams("lambda must be finite and nonzero")
    return lam


# ----------------------------------------------------------------- outputs

def _emit(blob, path):
    if path is None:
        sys.stdout.buffer.write(blob)
        sys.stdout.flush()
        return
    try:
        with open(path, "wb") as fh:
            fh.write(blob)
    except OSError as exc:
        raise SpecError(f"cannot write {path}: {exc}") from None


def _finish(rep, args):
    _emit(report.serialize(rep, args.format), args.out)
    if args.out is not None:
        report.write_summary(rep, sys.stderr)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _write_table(path, header, cols):
    lines = [",".join(header)]
    for row in zip(*cols):
        lines.append(",".join("%.17g" % float(x) for x in row))
    _emit(("\n".join(lines) + "\n").encode(), path)


# ---------------------------------------------------------------- commands

def cmd_frenet(args):
    curve, _ = load_spec(args.spec)
    tol = _parse_tol(args.tol)
    amap = curves.arclength_map(curve)
    s = np.linspace(0.0, amap.total, args.samples)
    fd = frenet.frenet_apparatus(curve, amap, s)
    res = frenet.frenet_residual(curve, amap, s)
    data = {"s": s, "kappa": fd.kappa, "tau": fd.tau,
            "eps1": fd.eps1.astype(float), "eps2": fd.eps2.astype(float)}
    for name, v in (("T", fd.T), ("N", fd.N), ("B", fd.B)):
        for j in range(3):
            data[f"{name}{j + 1}"] = v[:, j]
    data["res_T"], data["res_N"], data["res_B"] = res[:, 0], res[:, 1], res[:, 2]
    cols = list(data)
    verdicts = report.aggregate(data, {"frenet_T": ("res_T", tol["frenet"]),
                                       "frenet_N": ("res_N", tol["frenet"]),
                                       "frenet_B": ("res_B", tol["frenet"])})
    meta = {"command": "frenet", "spec": args.spec, "samples": args.samples,
            "signature": lorentz.get_signature(), "length": amap.total}
    return _finish(report.Report("frenet", cols, data, verdicts, meta), args)


def cmd_partner(args):
    lam = _check_lambda(args.lam)
    gt, raw = load_spec(args.spec)
    tol = _parse_tol(args.tol)
    g, link = mannheim.construct_partner_curve(gt, lam, args.mu)
    ps = mannheim.sample_pair(g, link, args.samples)
    rep = report.pair_report(ps, link.lam, link.mu, link.case_id, args.convention, tol,
                             meta={"command": "partner", "spec": args.spec})
    if args.out is not None:
        stem = args.out
        _emit((report._json_value({"offset": {"base": raw, "lambda": lam}}) + "\n").encode(),
              stem + ".partner.json")
        _write_table(stem + ".partner.csv", ["s", "s_star", "x1", "x2", "x3"],
                     [ps.s, ps.s_star, ps.alpha[:, 0], ps.alpha[:, 1], ps.alpha[:, 2]])
        _write_table(stem + ".corr.csv", ["s", "s_star"], [ps.s, ps.s_star])
    return _finish(rep, args)


def _correspondence(args, g_map, gt_map):
    if args.correspondence:
        s, s_star = read_correspondence(args.correspondence)
    else:
        # shared anchor at s = s* = 0, matched by arc length
        top = min(g_map.total, gt_map.total)
        s = np.linspace(0.0, top, args.samples)
        s_star = s.copy()
    return s, s_star


def cmd_verify(args):
    g_curve, _ = load_spec(args.spec)
    gt_curve, _ = load_spec(args.conjugate)
    tol = _parse_tol(args.tol)
    g_map, gt_map = curves.arclength_map(g_curve), curves.arclength_map(gt_curve)
    s, s_star = _correspondence(args, g_map, gt_map)
    mannheim.check_monotone(s, s_star)
    ps = mannheim.sample_curves(g_curve, gt_curve, s, s_star, g_map, gt_map)
    case_id = mannheim.classify_case(ps.g, ps.gt)
    d0 = ps.alpha[0] - ps.beta[0]
    B0 = ps.gt.B[0]
    bb = lorentz.minkowski_dot(B0, B0)
    lam = args.lam if args.lam is not None else lorentz.minkowski_dot(d0, B0) / bb
    if lam == 0:
        raise GeometryError("corresponding points coincide; lambda is 0")
    mu = args.mu if args.mu is not None else (1 if lorentz.minkowski_dot(ps.g.N[0], B0) / bb >= 0 else -1)
    rep = report.pair_report(ps, lam, mu, case_id, args.convention, tol,
                             meta={"command": "verify", "spec": args.spec, "conjugate": args.conjugate})
    return _finish(rep, args)


def cmd_wm_check(args):
    g_curve, _ = load_spec(args.spec)
    gt_curve, _ = load_spec(args.conjugate)
    tol = _parse_tol(args.tol)
    g_map, gt_map = curves.arclength_map(g_curve), curves.arclength_map(gt_curve)
    s, s_star = _correspondence(args, g_map, gt_map)
    wm = mannheim.wm_validate(g_curve, gt_curve, s, s_star, tol["zero"], g_map, gt_map)
    inZ = np.abs(wm.dsstar_ds) < tol["zero"]
    with np.errstate(divide="ignore"):
        inN = np.abs(np.where(wm.dsstar_ds > 0, 1.0 / np.where(wm.dsstar_ds > 0, wm.dsstar_ds, 1.0), np.inf)) < tol["zero"]
    data = {"s": wm.s, "s_star": wm.s_star,
            "dsstar_ds": np.where(np.isfinite(wm.dsstar_ds), wm.dsstar_ds, np.nan),
            "res_orth_g": wm.res_orth_g, "res_orth_gt": wm.res_orth_gt,
            "in_Z": inZ.astype(float), "in_N": inN.astype(float),
            "z_interior": np.full(wm.s.size, float(wm.z_interior)),
            "n_interior": np.full(wm.s.size, float(wm.n_interior))}
    verdicts = report.aggregate(data, {"orthogonality_g": ("res_orth_g", tol["orthogonality"]),
                                       "orthogonality_gt": ("res_orth_gt", tol["orthogonality"]),
                                       "Z_void_interior": ("z_interior", 0.5),
                                       "N_void_interior": ("n_interior", 0.5)})
    cols = ["s", "s_star", "dsstar_ds", "res_orth_g", "res_orth_gt", "in_Z", "in_N"]
    meta = {"command": "wm-check", "spec": args.spec, "conjugate": args.conjugate,
            "tol_zero": tol["zero"], "signature": lorentz.get_signature()}
    rep = report.Report("wm", cols, data, verdicts, meta,
                        extra_columns=["z_interior", "n_interior"], Z=wm.Z, N=wm.N)
    return _finish(rep, args)


def cmd_sweep(args):
    lams = _parse_lambdas(args.lambdas)
    g_curve, _ = load_spec(args.spec)
    amap = curves.arclength_map(g_curve)
    s = np.linspace(0.0, amap.total, args.samples)
    fd = frenet.frenet_apparatus(g_curve, amap, s)
    case_id = args.case
    if case_id is None:
        matches = [c for c, (sg, _) in mannheim.CASES.items() if sg == (int(fd.eps1[0]), int(fd.eps2[0]))]
        if len(matches) != 1:
            raise SpecError(f"signature signs fit cases {matches}; pass --case")
        case_id = matches[0]
    if mannheim.CASES[case_id][0] != (int(fd.eps1[0]), int(fd.eps2[0])):
        raise mannheim.UnlistedConfiguration(f"curve signs do not match case {case_id}")
    mu = 1 if args.mu is None else args.mu
    rows = mannheim.torsion_sweep(fd.kappa, fd.tau, lams, mu, case_id, args.convention)
    data = {"lambda": np.array([r["lam"] for r in rows]),
            "tau_min": np.array([r["tau_min"] for r in rows]),
            "tau_max": np.array([r["tau_max"] for r in rows]),
            "tau_absmax": np.array([r["tau_absmax"] if np.isfinite(r["tau_absmax"]) else np.nan for r in rows]),
            "min_denominator": np.array([r["min_den"] for r in rows]),
            "closure": np.array([r["closure"] for r in rows]),
            "degenerate": np.array([float(r["degenerate"]) for r in rows])}
    # a row is fine when it is either finite or explicitly flagged degenerate
    data["unflagged_blowup"] = np.array([0.0 if (r["degenerate"] or np.isfinite(r["tau_absmax"])) else 1.0
                                         for r in rows])
    verdicts = report.aggregate(data, {"rows_accounted": ("unflagged_blowup", 0.5)})
    cols = ["lambda", "tau_min", "tau_max", "tau_absmax", "min_denominator", "closure", "degenerate"]
    meta = {"command": "sweep", "spec": args.spec, "case": case_id, "mu": mu,
            "convention": args.convention, "samples": args.samples, "signature": lorentz.get_signature()}
    rep = report.Report("sweep", cols, data, verdicts, meta, extra_columns=["unflagged_blowup"])
    return _finish(rep, args)


# ------------------------------------------------------------------ parser

def _samples(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("sample count must be an integer") from None
    if n < curves.MIN_SAMPLES:
        raise argparse.ArgumentTypeError(f"sample count must be >= {curves.MIN_SAMPLES}")
    return n


def _mu(text):
    if text not in ("1", "+1", "-1"):
        raise argparse.ArgumentTypeError("mu must be +1 or -1")
    return int(text)


def build_parser():
    p = argparse.ArgumentParser(prog="lorentz-mannheim",
                                description="Frenet frames and Mannheim pairs in Minkowski 3-space.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=_samples, default=200)
    common.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help=f"override a tolerance ({', '.join(sorted(report.DEFAULT_TOLERANCES))})")
    common.add_argument("--signature", choices=sorted(lorentz.SIGNATURES), default="ppm")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")
    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("--lambda", dest="lam", type=float, default=None)
    pair.add_argument("--mu", type=_mu, default=None)
    pair.add_argument("--convention", choices=["stated", "derived"], default="stated",
                      help="identity forms to check: as stated, or the corrected forms")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("frenet", parents=[common], help="Frenet apparatus and residuals")
    s.add_argument("spec")
    s.set_defaults(func=cmd_frenet)

    s = sub.add_parser("partner", parents=[common, pair], help="build the partner curve and check it")
    s.add_argument("spec")
    s.set_defaults(func=cmd_partner)

    s = sub.add_parser("verify", parents=[common, pair], help="check two given curves as a pair")
    s.add_argument("spec")
    s.add_argument("conjugate")
    s.add_argument("--correspondence", default=None, help="CSV with header s,s_star")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("wm-check", parents=[common], help="weakened-pair validation")
    s.add_argument("spec")
    s.add_argument("conjugate")
    s.add_argument("--correspondence", default=None, help="CSV with header s,s_star")
    s.set_defaults(func=cmd_wm_check)

    s = sub.add_parser("sweep", parents=[common, pair], help="partner torsion over a lambda range")
    s.add_argument("spec")
    s.add_argument("--lambdas", required=True, help="start:stop:count or a comma list")
    s.add_argument("--case", type=int, choices=sorted(mannheim.CASES), default=None)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SPEC if exc.code else EXIT_OK
    previous = lorentz.get_signature()
    lorentz.set_signature(args.signature)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except GeometryError as exc:
        print(f"geometry error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_GEOM
    finally:
        lorentz.set_signature(previous)


if __name__ == "__main__":
    sys.exit(main())
