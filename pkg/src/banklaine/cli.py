"""Batch command-line front end.

Four commands: `verify` (Bank-Laine identity and zero-sign suite), `lambda`
(zero census and convergence-exponent estimate), `qc` (the quasiregular
surgery demonstrations), and `rays` (critical rays of a polynomial
coefficient).  Reports are newline-terminated UTF-8 JSON; CSV and SVG
artifacts land in the output directory.  Identical configurations (seed
included) produce byte-identical JSON.

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 insufficient
data.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .blfun import BankLaineFunction, bl_residual, critical_rays, verify_zero_property
from .census import (
    ZeroCensus,
    census_to_csv,
    convergence_exponent,
    estimate_to_json,
    real_zeros_scan,
    sign_alternation_check,
)
from .coefficients import CoefficientFunction
from .errors import BanklaineError, InsufficientDataError
from .ode import solution_pair

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_INSUFFICIENT = 4


class UsageError(Exception):
    pass


def parse_coefficient_spec(spec: str):
    """Parse the mini-grammar: const:<c> | poly:<a0,a1,...> | trig:<eta,w1,w2,sign>
    | zeros:<generator>.

    Returns ("coeff", CoefficientFunction) or ("trig", params) or
    ("zeros", name).
    """
    if ":" not in spec:
        raise UsageError(f"malformed coefficient spec {spec!r} (missing ':')")
    tag, _, body = spec.partition(":")
    try:
        if tag == "const":
            return "coeff", CoefficientFunction.constant(complex(body))
        if tag == "poly":
            coeffs = [complex(tok) for tok in body.split(",") if tok != ""]
            if not coeffs:
                raise UsageError(f"empty polynomial spec {spec!r}")
            return "coeff", CoefficientFunction.polynomial(coeffs)
        if tag == "trig":
            toks = body.split(",")
            if len(toks) != 4:
                raise UsageError(f"trig spec needs eta,w1,w2,sign: {spec!r}")
            eta, w1, w2 = (float(t) for t in toks[:3])
            sign = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}.get(toks[3].strip())
            if sign is None:
                raise UsageError(f"bad sign token {toks[3]!r} in {spec!r}")
            return "trig", (eta, w1, w2, sign)
        if tag == "zeros":
            if body not in ("linear", "threehalves", "quadratic", "cubic"):
                raise UsageError(f"unknown synthetic generator {body!r}")
            return "zeros", body
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"cannot parse number in {spec!r}: {exc}") from exc
    raise UsageError(f"unknown coefficient tag {tag!r}")


def _bl_function(kind, payload):
    if kind == "trig":
        return BankLaineFunction.from_trig(*payload)
    if kind == "coeff":
        return BankLaineFunction.from_pair(solution_pair(payload))
    raise UsageError("synthetic zero sets have no evaluable function")


def _write_json(obj, path: Path) -> str:
    text = json.dumps(obj, sort_keys=True) + "\n"
    path.write_text(text, encoding="utf-8")
    return text


def _planted_census(name: str, r_max: float) -> ZeroCensus:
    exponent = {"linear": 1.0, "threehalves": 1.5, "quadratic": 2.0, "cubic": 3.0}[name]
    # oversample the sparse exponents so the counting staircase is smooth;
    # the dense ones are naturally smooth
    scale = {1.0: 10.0, 1.5: 4.0}.get(exponent, 1.0)
    kmax = int(math.ceil((scale * r_max) ** exponent))
    k = np.arange(1, kmax + 1)
    xs = (k ** (1.0 / exponent)) / scale
    xs = xs[xs <= r_max]
    zs = np.unique(np.concatenate([-xs, xs]))
    signs = [1 if i % 2 == 0 else -1 for i in range(len(zs))]
    return ZeroCensus(zeros=tuple(zs), signs=tuple(signs), radius_max=float(r_max))


def cmd_verify(args) -> int:
    kind, payload = parse_coefficient_spec(args.coeff)
    if kind == "zeros":
        raise UsageError("verify requires an evaluable coefficient spec")
    E = _bl_function(kind, payload)
    rng = np.random.default_rng(args.seed)
    a_fun = E.coefficient
    r_lo, r_hi = args.window

    resids = []
    box = max(abs(r_lo), abs(r_hi), 5.0)
    tries = 0
    while len(resids) < args.samples and tries < 50 * args.samples:
        tries += 1
        z = complex(rng.uniform(-box, box), rng.uniform(-2.0, 2.0))
        jet = E.jet_at(z)
        if abs(jet.e0) < 0.05:
            continue  # too close to a zero of E
        resids.append(abs(bl_residual(jet, a_fun(z))))
    max_resid = max(resids) if resids else math.inf

    ev = E.real_evaluator((r_lo, r_hi))
    census = real_zeros_scan(ev, (r_lo, r_hi), args.scan_step)
    all_ok = True
    for x in census.zeros:
        try:
            verify_zero_property(E, x, 1e-9 if kind == "trig" else 1e-8)
        except BanklaineError:
            all_ok = False
    alternating, _ = sign_alternation_check(census)

    report = {
        "max_residual": max_resid,
        "zero_count": len(census),
        "all_signs_ok": bool(all_ok and alternating),
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    text = _write_json(report, out / "verify_report.json")
    census_to_csv(census, ev, out / "census.csv")
    sys.stdout.write(text)
    return EXIT_OK


def cmd_lambda(args) -> int:
    kind, payload = parse_coefficient_spec(args.coeff)
    r_lo, r_hi = args.window
    # the slope needs a usable lever arm; a factor of 3 admits the canonical
    # (10, 60) window while rejecting degenerate requests
    if r_hi / max(r_lo, 1e-9) < 3.0:
        raise UsageError("lambda window is too narrow for a slope estimate")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if kind == "zeros":
        census = _planted_census(payload, r_hi)
        predicted = {"linear": 1.0, "threehalves": 1.5,
                     "quadratic": 2.0, "cubic": 3.0}[payload]
        evaluator = None
    else:
        E = _bl_function(kind, payload)
        ev = E.real_evaluator((-r_hi, r_hi))
        census = real_zeros_scan(ev, (-r_hi, r_hi), args.scan_step)
        evaluator = ev
        coeff = E.coefficient
        predicted = None
        if kind == "trig":
            predicted = 1.0
        elif coeff.is_polynomial and coeff.degree >= 1:
            predicted = (coeff.degree + 2) / 2.0

    try:
        est = convergence_exponent(census, (r_lo, r_hi))
    except InsufficientDataError as exc:
        n_in = len([x for x in census.zeros if r_lo <= abs(x) <= r_hi])
        sys.stderr.write(f"insufficient zeros for the estimate: {exc} "
                         f"(achieved {n_in})\n")
        return EXIT_INSUFFICIENT

    report = {
        "lambda_fit": est.lambda_fit,
        "lambda_series": est.lambda_series,
        "window": [est.window[0], est.window[1]],
        "residual": est.residual,
        "zero_count": len(census),
        "predicted": predicted,
        "difference": None if predicted is None else est.lambda_fit - predicted,
    }
    text = _write_json(report, out / "lambda_report.json")
    estimate_to_json(est, out / "lambda_estimate.json")
    if evaluator is not None:
        census_to_csv(census, evaluator, out / "census.csv")
    sys.stdout.write(text)
    return EXIT_OK


def cmd_qc(args) -> int:
    from .qc.surgery import (
        QuasiregularMapY,
        dilatation_rows_to_csv,
        growth_report_json,
        y_census_to_csv,
    )

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        ymap = QuasiregularMapY()
    except BanklaineError as exc:
        sys.stderr.write(f"interpolant setup failed: {exc}\n")
        return EXIT_NUMERICAL

    r_max = max(args.window[1], 200.0)
    zeros, poles = ymap.zero_pole_census(r_max)
    rs = np.geomspace(10.0, r_max, 40)
    ns = np.array([ymap.counting_function(r) for r in rs], dtype=float)
    A = np.vstack([np.log(rs), np.ones_like(rs)]).T
    (slope, _), *_ = np.linalg.lstsq(A, np.log(ns), rcond=None)

    threads = _thread_cap()
    n_s, n_t = args.grid
    z, mu, u = _sweep_parallel(ymap, n_s, n_t, threads)
    k_max = float(np.nanmax(mu))

    total, annuli = ymap.integrability_check(64.0, n_s=40, n_t_per_decade=32)

    growth = []
    for n in range(4, args.nmax + 1):
        m, skipped = ymap.growth_on_curve(n)
        growth.append((n, m, skipped))
    ns_arr = np.array([g[0] for g in growth], dtype=float)
    ms_arr = np.array([g[1] for g in growth])
    gamma_C = float(np.sum(ns_arr * ms_arr) / np.sum(ns_arr ** 2))

    report = {
        "slope_nY": float(slope),
        "k_max": k_max,
        "integral_value": float(total),
        "gamma_C": gamma_C,
    }
    text = _write_json(report, out / "qc_summary.json")

    y_census_to_csv(ymap, zeros, poles, out / "y_census.csv")
    rows = ymap.dilatation_field_rows(min(n_s, 41), min(n_t, 61))
    dilatation_rows_to_csv(rows, out / "dilatation_field.csv")
    growth_report_json(growth, out / "growth_report.json")
    _write_plots(out, rs, ns, rows, growth)
    sys.stdout.write(text)
    return EXIT_OK


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("BANKLAINE_THREADS", "1")))
    except ValueError:
        return 1


def _sweep_parallel(ymap, n_s, n_t, threads):
    if threads <= 1:
        return ymap.dilatation_sweep(n_s, n_t)
    from concurrent.futures import ThreadPoolExecutor

    # chunk the t-range; map evaluations are pure
    from .qc.surgery import T_POINTWISE, T_TOP
    edges = np.linspace(T_POINTWISE + 1, T_TOP, threads + 1)
    rows_per = max(4, n_t // threads)

    def work(i):
        return ymap.dilatation_sweep(n_s, rows_per, t_range=(edges[i], edges[i + 1]))

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(work, range(threads)))
    z = np.concatenate([p[0] for p in parts])
    mu = np.concatenate([p[1] for p in parts])
    u = np.concatenate([p[2] for p in parts])
    return z, mu, u


def _write_plots(out: Path, rs, ns, dilatation_rows, growth):
    """Static SVG summaries; failures never fail the run."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog(rs, ns, "o-", ms=3)
        ax.set_xlabel("r")
        ax.set_ylabel("n_Y(r)")
        ax.set_title("zero/pole counting function")
        fig.tight_layout()
        fig.savefig(out / "counting.svg")
        plt.close(fig)

        xs = [r[0] for r in dilatation_rows]
        ys = [r[1] for r in dilatation_rows]
        cs = [r[4] for r in dilatation_rows]
        fig, ax = plt.subplots(figsize=(5, 4))
        sc = ax.scatter(xs, ys, c=cs, s=4, cmap="viridis", vmin=0, vmax=1)
        fig.colorbar(sc, ax=ax, label="|mu|")
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.set_title("dilatation field")
        fig.tight_layout()
        fig.savefig(out / "dilatation.svg")
        plt.close(fig)

        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot([g[0] for g in growth], [g[1] for g in growth], "o-", ms=3)
        ax.set_xlabel("n")
        ax.set_ylabel("max log+ log+ |Y|")
        ax.set_title("growth along the level curves")
        fig.tight_layout()
        fig.savefig(out / "growth.svg")
        plt.close(fig)
    except Exception as exc:  # plotting is auxiliary
        sys.stderr.write(f"plotting skipped: {exc}\n")


def cmd_rays(args) -> int:
    kind, payload = parse_coefficient_spec(args.coeff)
    if kind != "coeff" or not payload.is_polynomial or payload.degree < 1:
        raise UsageError("rays requires a polynomial spec of degree >= 1")
    rays = critical_rays(payload)
    positive_axis = any(abs(th) < 1e-12 or abs(th - 2 * math.pi) < 1e-12
                        for th in rays)
    report = {
        "angles": rays,
        "count": len(rays),
        "positive_real_axis_critical": positive_axis,
    }
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    text = _write_json(report, out / "rays_report.json")
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="banklaine",
        description="Bank-Laine function laboratory: verification suites, "
                    "zero censuses, exponent estimates and the quasiregular "
                    "surgery demonstrations.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--coeff", default="const:0.25",
                        help="coefficient spec: const:c | poly:a0,a1,... | "
                             "trig:eta,w1,w2,sign | zeros:<name>")
        sp.add_argument("--window", nargs=2, type=float, default=[10.0, 60.0],
                        metavar=("RMIN", "RMAX"))
        sp.add_argument("--tol", type=float, default=1e-12)
        sp.add_argument("--out", default="banklaine_out")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--nmax", type=int, default=20)
        sp.add_argument("--samples", type=int, default=100)
        sp.add_argument("--scan-step", type=float, default=0.05)
        sp.add_argument("--grid", nargs=2, type=int, default=[45, 91],
                        metavar=("NS", "NT"))

    for name, fn in (("verify", cmd_verify), ("lambda", cmd_lambda),
                     ("qc", cmd_qc), ("rays", cmd_rays)):
        sp = sub.add_parser(name)
        common(sp)
        sp.set_defaults(func=fn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except InsufficientDataError as exc:
        sys.stderr.write(f"insufficient data: {exc}\n")
        return EXIT_INSUFFICIENT
    except BanklaineError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
