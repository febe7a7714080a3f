"""Reconstruction quality metrics: RSE, PSNR and SSIM.

PSNR is ``10 log10(peak^2 / MSE)``, capped at 99 dB.  SSIM uses the standard
construction: an 11x11 Gaussian window with sigma 1.5, stability constants
``C1 = (0.01 peak)^2`` and ``C2 = (0.03 peak)^2``, valid-region windowing,
averaged over windows and then over frontal slices.  For reporting, tensors
are rescaled by the ground truth's min/max so peak = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

PSNR_CAP = 99.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5


@dataclass
class MetricReport:
    psnr: float
    ssim: float
    rse: float
    per_slice: list[tuple[int, float, float]] | None = None

    def as_dict(self) -> dict:
        out = {"psnr": self.psnr, "ssim": self.ssim, "rse": self.rse}
        if self.per_slice is not None:
            out["per_slice"] = [
                {"slice": k, "psnr": p, "ssim": s} for k, p, s in self.per_slice
            ]
        return out


def rse(truth: np.ndarray, recon: np.ndarray) -> float:
    """Relative Frobenius error ||recon - truth||_F / ||truth||_F."""
    truth = np.asarray(truth, dtype=np.float64)
    recon = np.asarray(recon, dtype=np.float64)
    if truth.shape != recon.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {recon.shape}")
    denom = np.linalg.norm(truth.ravel())
    if denom == 0.0:
        raise ValueError("RSE is undefined for an all-zero reference")
    return float(np.linalg.norm((recon - truth).ravel()) / denom)


def psnr(truth: np.ndarray, recon: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB, capped at 99."""
    truth = np.asarray(truth, dtype=np.float64)
    recon = np.asarray(recon, dtype=np.float64)
    if truth.shape != recon.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {recon.shape}")
    if peak <= 0:
        raise ValueError("peak must be positive")
    mse = float(np.mean((recon - truth) ** 2))
    if mse == 0.0:
        return PSNR_CAP
    return min(10.0 * math.log10(peak * peak / mse), PSNR_CAP)


def _gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    half = (size - 1) // 2
    g = np.exp(-np.arange(-half, half + 1) ** 2 / (2.0 * sigma * sigma))
    w = np.outer(g, g)
    return w / w.sum()


def _ssim_slice(x: np.ndarray, y: np.ndarray, peak: float) -> float:
    w = _gaussian_window()
    c1 = (0.01 * peak) ** 2
    c2 = (0.03 * peak) ** 2
    mx = fftconvolve(x, w, mode="valid")
    my = fftconvolve(y, w, mode="valid")
    vx = fftconvolve(x * x, w, mode="valid") - mx * mx
    vy = fftconvolve(y * y, w, mode="valid") - my * my
    cov = fftconvolve(x * y, w, mode="valid") - mx * my
    num = (2.0 * mx * my + c1) * (2.0 * cov + c2)
    den = (mx * mx + my * my + c1) * (vx + vy + c2)
    return float(np.mean(num / den))


def ssim(truth: np.ndarray, recon: np.ndarray, peak: float = 1.0) -> float:
    """Mean SSIM over the frontal (mode-3) slices."""
    truth = np.asarray(truth, dtype=np.float64)
    recon = np.asarray(recon, dtype=np.float64)
    if truth.shape != recon.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {recon.shape}")
    n1, n2, n3 = truth.shape
    if n1 < SSIM_WINDOW or n2 < SSIM_WINDOW:
        raise ValueError(
            f"slices of shape {(n1, n2)} are smaller than the {SSIM_WINDOW}x"
            f"{SSIM_WINDOW} SSIM window"
        )
    vals = [_ssim_slice(truth[:, :, k], recon[:, :, k], peak) for k in range(n3)]
    return float(np.mean(vals))


def per_slice_metrics(
    truth: np.ndarray, recon: np.ndarray, peak: float = 1.0
) -> list[tuple[int, float, float]]:
    """(slice index, PSNR, SSIM) for each frontal slice independently."""
    truth = np.asarray(truth, dtype=np.float64)
    recon = np.asarray(recon, dtype=np.float64)
    if truth.shape != recon.shape:
        raise ValueError(f"shape mismatch: {truth.shape} vs {recon.shape}")
    out = []
    for k in range(truth.shape[2]):
        t = truth[:, :, k]
        r = recon[:, :, k]
        mse = float(np.mean((r - t) ** 2))
        p = PSNR_CAP if mse == 0.0 else min(10.0 * math.log10(peak**2 / mse), PSNR_CAP)
        out.append((k, p, _ssim_slice(t, r, peak)))
    return out


def evaluate(
    truth: np.ndarray, recon: np.ndarray, per_slice: bool = False
) -> MetricReport:
    """Full report with the [0,1] normalization convention.

    Both tensors are shifted and scaled by the ground truth's min and range,
    then scored with peak = 1.  RSE is reported on the raw tensors (it is
    scale-covariant already).
    """
    truth = np.asarray(truth, dtype=np.float64)
    recon = np.asarray(recon, dtype=np.float64)
    lo = float(truth.min())
    span = float(truth.max()) - lo
    if span <= 0:
        raise ValueError("ground truth has zero range; metrics are undefined")
    tn = (truth - lo) / span
    rn = (recon - lo) / span
    report = MetricReport(
        psnr=psnr(tn, rn, peak=1.0),
        ssim=ssim(tn, rn, peak=1.0),
        rse=rse(truth, recon),
    )
    if per_slice:
        report.per_slice = per_slice_metrics(tn, rn, peak=1.0)
    return report
