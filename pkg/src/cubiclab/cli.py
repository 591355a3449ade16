"""Command-line pipelines emitting plot-ready CSV and JSON.

Every run writes into one output directory and finishes with
``manifest.json`` listing the command, its parameters, the seed, the tool
version and the files produced. Wall-clock time goes to ``timing.json`` so
that manifests of seeded runs are byte-identical.

Exit codes: 0 success, 2 bad arguments or config, 3 numerical failure,
4 input/output error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .channels import NoPhotonsError, loss, subtract
from .characterize import (
    FitError,
    antidiag_im,
    antidiag_model,
    coord_kernel,
    default_grid,
    fidelity,
    fit_displacement,
    moments,
    negative_regions,
    photon_probs,
    r_metric,
    wigner,
    write_curve_csv,
)
from .focklab import DensityMatrix, as_density
from .herald import HeraldConfig, HeraldError, OptimizationError, herald, optimize_betas
from .imprint import ImprintError, quad_fit, sweep
from .states import coherent, cubic_state, fock, one_and_three, vacuum
from .tomo import (
    QuadratureRecord,
    RecordFormatError,
    TomoConfig,
    TomographyError,
    default_phases,
    read_density_json,
    reconstruct,
    sample,
    write_density_json,
)

OUT_ENV = "CUBICLAB_OUT"

EXIT_ARGS, EXIT_NUMERIC, EXIT_IO = 2, 3, 4
NUMERIC_ERRORS = (NoPhotonsError, FitError, ImprintError, TomographyError, OptimizationError, np.linalg.LinAlgError)


class ArgError(ValueError):
    pass


class Run:
    """Collects output files for one command and writes the manifest last."""

    def __init__(self, out, command, params, seed=None):
        self.out = Path(out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.command = command
        self.params = params
        self.seed = seed
        self.files = []
        self.t0 = time.perf_counter()

    def path(self, name):
        self.files.append(name)
        return self.out / name

    def json(self, name, obj):
        with open(self.path(name), "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def finish(self):
        self.json("timing.json", {"wall_clock_s": round(time.perf_counter() - self.t0, 6)})
        manifest = {
            "command": self.command,
            "parameters": self.params,
            "seed": self.seed,
            "version": __version__,
            "outputs": self.files,
        }
        with open(self.out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _state_from_args(kind, args):
    n = args.nmax
    if kind == "fock":
        return fock(args.n, n)
    if kind == "coherent":
        return coherent(args.alpha, n)
    if kind == "cubic":
        return cubic_state(args.chi, n)
    if kind == "one-and-three":
        return one_and_three(n)
    if kind == "one-and-three-perp":
        return one_and_three(n, perp=True)
    if kind == "vacuum":
        return vacuum(n)
    raise ArgError(f"unknown state kind {kind!r}")


def _degrade(state, eta):
    rho = as_density(state)
    return rho if eta is None or eta == 1 else loss(rho, eta)


def _summary(rho):
    m = moments(rho)
    return {
        "mean_x": m.mean_x,
        "mean_p": m.mean_p,
        "var_x": m.var_x,
        "var_p": m.var_p,
        "photon_probs": photon_probs(rho).tolist(),
    }


def _write_probs(run, name, rho):
    p = photon_probs(rho)
    write_curve_csv(run.path(name), np.arange(p.size), p, header=("n", "p"))


def cmd_state(args, run):
    state = _state_from_args(args.kind, args)
    rho = _degrade(state, args.eta)
    if args.eta is None or args.eta == 1:
        amps = state.data
        write_curve_csv(run.path("amplitudes.csv"), np.arange(amps.size), np.vstack([amps.real, amps.imag]), header=("n", "re", "im"))
    write_density_json(rho, run.path("density.json"))
    _write_probs(run, "photon_probs.csv", rho)
    run.json("summary.json", _summary(rho))


def _figure_state(args):
    rho = as_density(cubic_state(args.chi, args.nmax))
    return rho if args.eta is None else loss(rho, args.eta)


def cmd_figure(args, run):
    rho = _figure_state(args)
    grid = default_grid(-args.extent, args.extent, args.step)
    n = args.nmax
    summary = {"chi": args.chi, "eta": args.eta}
    if args.which == "fig2a":
        W = wigner(rho, grid)
        W.to_csv(run.path("wigner.csv"))
        write_density_json(rho, run.path("density.json"))
        summary.update(
            wigner_min=W.min(),
            r_0_13=r_metric(rho, one_and_three(n)),
            r_0_13perp=r_metric(rho, one_and_three(n, perp=True)),
            photon_probs=photon_probs(rho).tolist(),
        )
    elif args.which == "fig2b":
        sub, weight = subtract(rho, 1)
        sub2, _ = subtract(rho, 2)
        W = wigner(sub, grid)
        W.to_csv(run.path("wigner.csv"))
        write_density_json(sub, run.path("density.json"))
        summary.update(
            wigner_min=W.min(),
            negative_regions=negative_regions(W),
            subtraction_weight=weight,
            photon_probs=photon_probs(sub).tolist(),
            r_0_2=r_metric(sub, fock(2, n)),
            p1_after_two_subtractions=float(photon_probs(sub2)[1]),
        )
    elif args.which == "fig3":
        alphas = np.linspace(0, 1, args.points)
        ancilla = rho if args.ancilla == "cubic" else as_density(vacuum(n))
        curve = sweep(alphas, ancilla)
        curve.to_csv(run.path("moments.csv"))
        curve.rescaled().to_csv(run.path("moments_rescaled.csv"))
        c0, c1, c2, rms = quad_fit(curve)
        summary.update(ancilla=args.ancilla, c0=c0, c1=c1, c2=c2, rms=rms, mean_p_range=float(np.ptp(curve.mean_p)))
    elif args.which == "fig4":
        xs = default_grid(-3, 3, 0.02)
        raw = antidiag_im(rho, xs)
        dp, shifted = fit_displacement(rho, xs)
        fitted = antidiag_im(shifted, xs)
        model = antidiag_model(xs, args.chi)
        write_curve_csv(run.path("antidiag.csv"), xs, np.vstack([raw, fitted, model]), header=("x", "im_rho", "im_rho_shifted", "model"))
        summary.update(delta_p=dp, max_dev_shifted=float(np.max(np.abs(fitted - model))), max_dev_raw=float(np.max(np.abs(raw - model))))
    else:
        raise ArgError(f"unknown figure {args.which!r}")
    run.json("summary.json", summary)


def cmd_tomo(args, run):
    if args.sub == "simulate":
        state = _state_from_args(args.state, args)
        rho = _degrade(state, args.eta)
        rec = sample(rho, default_phases(args.phases), args.n_per_phase, seed=args.seed)
        rec.to_csv(run.path("samples.csv"))
        write_density_json(rho, run.path("truth.json"))
    else:
        rec = QuadratureRecord.from_csv(args.input)
        cfg = TomoConfig(nmax=args.nmax, bins=args.bins, max_iters=args.max_iters, tol=args.tol)
        history = []
        est = reconstruct(rec, cfg, history=history)
        write_density_json(est, run.path("rho.json"))
        report = {"iterations": len(history) - 1, "log_likelihood": history[-1], "samples": len(rec), "photon_probs": photon_probs(est).tolist()}
        if args.truth:
            truth = _resize(read_density_json(args.truth), est.dims[0])
            report["fidelity"] = fidelity(est, truth)
        run.json("report.json", report)


def _resize(rho, dim):
    """Truncate or zero-pad a single-mode state to ``dim`` levels, renormalized."""
    if rho.dims[0] == dim:
        return rho
    d = min(rho.dims[0], dim)
    out = np.zeros((dim, dim), dtype=complex)
    out[:d, :d] = rho.data[:d, :d]
    return DensityMatrix(out).normalize()


_TARGETS = {"cubic", "fock3", "one-and-three"}


def _target(name, chi, nmax):
    if name == "cubic":
        return cubic_state(chi, nmax)
    if name == "fock3":
        return fock(3, nmax)
    if name == "one-and-three":
        return one_and_three(nmax)
    raise ArgError(f"unknown target {name!r}")


def cmd_herald(args, run):
    try:
        cfg = HeraldConfig.from_json(args.config)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, json.JSONDecodeError):
            raise OSError(f"{args.config}: not valid JSON ({exc})") from exc
        raise ArgError(f"invalid herald config: {exc}") from exc
    summary = {"config": cfg.to_dict()}
    if args.optimize:
        target = _target(args.optimize, args.chi, cfg.nmax)
        cfg = optimize_betas(target, cfg, starts=args.starts, seed=args.seed)
        cfg.to_json(run.path("best_config.json"))
        summary["optimized_config"] = cfg.to_dict()
    try:
        rho, p = herald(cfg)
    except HeraldError as exc:
        summary.update(p_success=exc.p_success, state=None)
        run.json("summary.json", summary)
        return
    write_density_json(rho, run.path("state.json"))
    summary.update(p_success=p, photon_probs=photon_probs(rho).tolist())
    if args.optimize:
        summary["fidelity"] = fidelity(rho, _target(args.optimize, args.chi, cfg.nmax))
    run.json("summary.json", summary)


def _common(nmax=15):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nmax", type=int, default=nmax)
    common.add_argument("--chi", type=float, default=0.090)
    common.add_argument("--eta", type=float, default=None, help="apply loss with this transmittance")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help=f"output directory (default: ${OUT_ENV}/<command>)")
    return common


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="cubiclab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    kinds = ["fock", "coherent", "cubic", "one-and-three", "one-and-three-perp", "vacuum"]
    p = sub.add_parser("state", parents=[common], help="emit a state's amplitudes and photon statistics")
    p.add_argument("kind", choices=kinds)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.5)

    p = sub.add_parser("figure", parents=[common], help="plot data for one analysis figure")
    p.add_argument("which", choices=["fig2a", "fig2b", "fig3", "fig4"])
    p.add_argument("--extent", type=float, default=5.0)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--points", type=int, default=11)
    p.add_argument("--ancilla", choices=["cubic", "vacuum"], default="cubic")

    p = sub.add_parser("tomo", help="homodyne simulation and reconstruction")
    tsub = p.add_subparsers(dest="sub", required=True)
    s = tsub.add_parser("simulate", parents=[common])
    s.add_argument("--state", choices=kinds, default="cubic")
    s.add_argument("--n", type=int, default=0)
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--phases", type=int, default=12)
    s.add_argument("--n-per-phase", type=int, default=16667)
    r = tsub.add_parser("reconstruct", parents=[_common(nmax=10)])
    r.add_argument("--input", required=True)
    r.add_argument("--truth", default=None)
    r.add_argument("--bins", type=float, default=0.05)
    r.add_argument("--max-iters", type=int, default=5000)
    r.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("herald", parents=[common], help="heralded state from a JSON config")
    p.add_argument("config")
    p.add_argument("--optimize", choices=sorted(_TARGETS), default=None)
    p.add_argument("--starts", type=int, default=8)
    return parser


def _params(args):
    skip = {"out", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _default_out(args):
    name = args.command + ("-" + (getattr(args, "kind", None) or getattr(args, "which", None) or getattr(args, "sub", None) or "")).rstrip("-")
    root = os.environ.get(OUT_ENV, "cubiclab-runs")
    return Path(root) / name


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    out = args.out or _default_out(args)
    handlers = {"state": cmd_state, "figure": cmd_figure, "tomo": cmd_tomo, "herald": cmd_herald}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            run = Run(out, args.command if args.command != "tomo" else f"tomo {args.sub}", _params(args), seed=args.seed)
            handlers[args.command](args, run)
            run.finish()
    except ArgError as exc:
        print(f"cubiclab: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (OSError, RecordFormatError) as exc:
        print(f"cubiclab: io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NUMERIC_ERRORS as exc:
        print(f"cubiclab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"cubiclab: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    return 0


if __name__ == "__main__":
    sys.exit(main())
