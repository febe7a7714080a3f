"""Figure rendering for solver traces and per-slice metric curves."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def trace_figures(trace: dict[str, list[float]], out_dir) -> list[Path]:
    """Render convergence, residual and objective curves from a trace table.

    Returns the written file paths.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    it = trace["iter"]
    written = []

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(it, trace["delta_inf"], label="max |Z change|")
    ax.set_xlabel("iteration")
    ax.set_ylabel("change")
    ax2 = ax.twinx()
    ax2.semilogy(it, trace["mu"], color="tab:orange", label="mu")
    ax2.set_ylabel("penalty mu")
    ax.legend(loc="upper right")
    fig.tight_layout()
    path = out_dir / "convergence.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    for key in ("res_Y", "res_X", "res_F", "res_M", "res_B"):
        ax.semilogy(it, trace[key], label=key)
    ax.set_xlabel("iteration")
    ax.set_ylabel("constraint residual")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "residuals.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(it, trace["objective"])
    ax.set_xlabel("iteration")
    ax.set_ylabel("objective")
    fig.tight_layout()
    path = out_dir / "objective.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    if "rse" in trace:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.semilogy(it, trace["rse"])
        ax.set_xlabel("iteration")
        ax.set_ylabel("RSE")
        fig.tight_layout()
        path = out_dir / "rse.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def per_slice_figures(rows: list[tuple[int, float, float]], out_dir) -> list[Path]:
    """PSNR and SSIM per frontal slice as two figures."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    slices = [k for k, _, _ in rows]
    written = []
    for name, values in (
        ("per_slice_psnr.png", [p for _, p, _ in rows]),
        ("per_slice_ssim.png", [s for _, _, s in rows]),
    ):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(slices, values, marker="o", markersize=3)
        ax.set_xlabel("slice")
        ax.set_ylabel("PSNR (dB)" if "psnr" in name else "SSIM")
        fig.tight_layout()
        path = out_dir / name
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
