"""Command line interface.

Subcommands cover the full experiment loop: ``synth`` and ``mask`` produce
deterministic inputs, ``complete`` runs the solver, ``eval`` scores a
reconstruction (optionally with per-slice output and figures), ``ingest``
stacks grayscale images into a tensor file, and ``report`` renders figures
from a saved trace.
"""

from __future__ import annotations

import argparse
import sys

from . import data, fileio, metrics, solver
from .tensor import project_mask


def _add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--method", default="nltfnn", choices=sorted(solver.PRESETS))
    sub.add_argument("--tau", type=float, default=None,
                     help="TV weight (default: method preset)")
    sub.add_argument("--a", type=float, nargs=3, default=None, metavar=("A1", "A2", "A3"),
                     help="mode weights; normalized to sum 1")
    sub.add_argument("--mu0", type=float, default=1e-4)
    sub.add_argument("--mumax", type=float, default=10.0)
    sub.add_argument("--rho", type=float, default=1.1)
    sub.add_argument("--eps", type=float, default=1e-8)
    sub.add_argument("--max-iter", type=int, default=500)


def cmd_synth(args) -> int:
    x = data.synth_lowrank(tuple(args.dims), tuple(args.ranks), args.seed)
    fileio.write_tensor(args.out, x)
    print(f"wrote {args.out}: dims {tuple(args.dims)}, ranks <= {tuple(args.ranks)}")
    return 0


def cmd_mask(args) -> int:
    mask = data.sample_mask(tuple(args.dims), args.sr, args.seed)
    fileio.write_mask(args.out, mask)
    print(f"wrote {args.out}: {mask.size} of {mask.dims[0] * mask.dims[1] * mask.dims[2]} entries")
    return 0


def cmd_complete(args) -> int:
    observed = fileio.read_tensor(args.observed)
    mask = fileio.read_mask(args.mask)
    if mask.dims != observed.shape:
        raise ValueError(
            f"mask dims {mask.dims} do not match tensor dims {observed.shape}"
        )
    overrides = dict(mu0=args.mu0, mu_max=args.mumax, rho=args.rho,
                     eps=args.eps, max_iter=args.max_iter)
    if args.tau is not None:
        overrides["tau"] = args.tau
    if args.a is not None:
        total = sum(args.a)
        if total <= 0:
            raise ValueError("mode weights must have a positive sum")
        overrides["a"] = tuple(v / total for v in args.a)
    cfg = solver.preset_config(args.method, **overrides)

    b = project_mask(observed, mask, keep="on")
    z, trace = solver.solve(b, mask, cfg)
    if args.clamp_observed:
        z = project_mask(z, mask, keep="off") + project_mask(b, mask, keep="on")
    fileio.write_tensor(args.out, z)
    if args.trace:
        fileio.write_trace_csv(trace, args.trace)
    print(f"{args.method}: {len(trace)} iterations, "
          f"final max |Z change| {trace.delta_inf[-1]:.3e}")
    return 0


def cmd_eval(args) -> int:
    truth = fileio.read_tensor(args.truth)
    recon = fileio.read_tensor(args.recon)
    want_slices = args.per_slice is not None or args.figures is not None
    report = metrics.evaluate(truth, recon, per_slice=want_slices)
    fileio.write_report_json(report, args.report)
    if args.per_slice is not None:
        fileio.write_per_slice_csv(report.per_slice, args.per_slice)
    if args.figures is not None:
        from . import plots

        plots.per_slice_figures(report.per_slice, args.figures)
    print(f"psnr {report.psnr:.4f}  ssim {report.ssim:.4f}  rse {report.rse:.4f}")
    return 0


def cmd_ingest(args) -> int:
    x = fileio.ingest_slices(args.dir)
    fileio.write_tensor(args.out, x)
    print(f"wrote {args.out}: dims {x.shape}")
    return 0


def cmd_report(args) -> int:
    trace = fileio.read_trace_csv(args.trace)
    from . import plots

    written = plots.trace_figures(trace, args.out_dir)
    print("wrote " + ", ".join(str(p) for p in written))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorfill", description="Low-rank 3-order tensor completion."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="generate a synthetic low-fibered-rank tensor")
    s.add_argument("--dims", type=int, nargs=3, required=True, metavar=("N1", "N2", "N3"))
    s.add_argument("--ranks", type=int, nargs=3, required=True, metavar=("R1", "R2", "R3"))
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("mask", help="sample a deterministic observation mask")
    s.add_argument("--dims", type=int, nargs=3, required=True, metavar=("N1", "N2", "N3"))
    s.add_argument("--sr", type=float, required=True, help="sampling rate in (0, 1]")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_mask)

    s = sub.add_parser("complete", help="recover a tensor from masked observations")
    s.add_argument("--observed", required=True, help="tensor file; off-mask entries are ignored")
    s.add_argument("--mask", required=True)
    _add_solver_flags(s)
    s.add_argument("--out", required=True)
    s.add_argument("--trace", default=None, help="write per-iteration CSV here")
    s.add_argument("--clamp-observed", action="store_true",
                   help="overwrite observed entries of the output with the input values")
    s.set_defaults(func=cmd_complete)

    s = sub.add_parser("eval", help="score a reconstruction against the ground truth")
    s.add_argument("--truth", required=True)
    s.add_argument("--recon", required=True)
    s.add_argument("--report", required=True, help="JSON output path")
    s.add_argument("--per-slice", default=None, help="per-slice CSV output path")
    s.add_argument("--figures", default=None, help="directory for per-slice figures")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("ingest", help="stack grayscale images into a tensor file")
    s.add_argument("--dir", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("report", help="render figures from a saved trace CSV")
    s.add_argument("--trace", required=True)
    s.add_argument("--out-dir", required=True)
    s.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # CLI boundary: report and exit nonzero
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
