"""Proximal operators for the nuclear-norm and log-det spectral penalties.

The log-det penalty on a matrix is ``sum_k log(1 + sigma_k^2)``; its prox
reduces to independent scalar problems

    min_{x >= 0}  c*log(1 + x^2) + (x - s)^2 / 2

whose stationary points are nonnegative real roots of the cubic
``x^3 - s*x^2 + (1 + 2c)*x - s = 0``.  The global minimizer is selected by
objective value among those roots and 0.
"""

from __future__ import annotations

import numpy as np

from .tensor import (
    dct_mode,
    dft_mode,
    idct_mode,
    idft_mode,
    mode_slice_stack,
    stack_to_tensor,
)

SURROGATES = ("nuclear", "logdet")
SPECTRAL_MODES = ("none", "dft", "dct")

# Objective gaps below this count as ties; ties resolve to the smaller point.
_TIE_TOL = 1e-12


def soft_threshold(x, tau):
    """Soft shrinkage sgn(x) * max(|x| - tau, 0); works elementwise."""
    if np.any(np.asarray(tau) < 0):
        raise ValueError("soft threshold level must be nonnegative")
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


def _cubic_roots(s: np.ndarray, c: float) -> np.ndarray:
    """Real roots of x^3 - s*x^2 + (1+2c)*x - s, one row of 3 per entry of s.

    Rows are padded with zeros when fewer than three real roots exist.
    """
    s = np.asarray(s, dtype=np.float64)
    lin = 1.0 + 2.0 * c
    # Depressed form t^3 + p*t + q with x = t + s/3.
    p = lin - s * s / 3.0
    q = -2.0 * s**3 / 27.0 + s * lin / 3.0 - s
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    roots = np.zeros(s.shape + (3,), dtype=np.float64)
    one = disc > 0
    if np.any(one):
        rt = np.sqrt(disc[one])
        t = np.cbrt(-q[one] / 2.0 + rt) + np.cbrt(-q[one] / 2.0 - rt)
        # Single real root: duplicate it so the padding columns never become
        # half-converged Newton impostors of the true root.
        roots[one] = (t + s[one] / 3.0)[:, None]
    three = ~one
    if np.any(three):
        pm = p[three]
        qm = q[three]
        m = 2.0 * np.sqrt(np.maximum(-pm / 3.0, 0.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            arg = np.where(pm * m != 0.0, 3.0 * qm / (pm * m), 1.0)
        phi = np.arccos(np.clip(arg, -1.0, 1.0))
        for k in range(3):
            t = m * np.cos(phi / 3.0 - 2.0 * np.pi * k / 3.0)
            roots[three, k] = t + s[three] / 3.0

    # Newton polish on the original cubic; skip near-flat derivative.
    for _ in range(3):
        f = roots**3 - s[..., None] * roots**2 + lin * roots - s[..., None]
        fp = 3.0 * roots**2 - 2.0 * s[..., None] * roots + lin
        safe = np.abs(fp) > 1e-12
        roots = roots - np.where(safe, f, 0.0) / np.where(safe, fp, 1.0)
    return roots


def logdet_shrink(sigma: np.ndarray, c: float) -> np.ndarray:
    """Elementwise prox of c*log(1+x^2) at nonnegative points ``sigma``."""
    if c < 0:
        raise ValueError("prox parameter must be nonnegative")
    sigma = np.asarray(sigma, dtype=np.float64)
    if c == 0.0:
        return sigma.copy()
    flat = sigma.ravel()
    cands = np.concatenate(
        [np.zeros(flat.shape + (1,)), _cubic_roots(flat, c)], axis=-1
    )
    cands = np.clip(cands, 0.0, flat[:, None])
    cands = np.sort(cands, axis=-1)
    obj = c * np.log1p(cands**2) + 0.5 * (cands - flat[:, None]) ** 2
    best = obj.min(axis=-1, keepdims=True)
    first = (obj <= best + _TIE_TOL).argmax(axis=-1)
    out = cands[np.arange(flat.size), first]
    return out.reshape(sigma.shape)


def scalar_logdet_prox(s: float, c: float) -> float:
    """Global minimizer of c*log(1+x^2) + (x-s)^2/2 over x >= 0."""
    if s < 0 or c < 0:
        raise ValueError("scalar_logdet_prox requires s >= 0 and c >= 0")
    return float(logdet_shrink(np.array([s]), c)[0])


def matrix_svt(a: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding: shrink all singular values by ``tau``."""
    if tau < 0:
        raise ValueError("threshold must be nonnegative")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return (u * np.maximum(s - tau, 0.0)[..., None, :]) @ vh


def matrix_logdet_prox(a: np.ndarray, c: float) -> np.ndarray:
    """Apply the scalar log-det prox to each singular value of ``a``."""
    if c < 0:
        raise ValueError("prox parameter must be nonnegative")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return (u * logdet_shrink(s, c)[..., None, :]) @ vh


def _check_enum(value, allowed, what):
    if value not in allowed:
        raise ValueError(f"{what} must be one of {allowed}, got {value!r}")


def mode_prox(
    g: np.ndarray,
    mode: int,
    surrogate: str,
    weight: float,
    mu: float,
    spectral: str = "none",
) -> np.ndarray:
    """Slicewise spectral prox along ``mode`` with parameter ``weight / mu``.

    With ``spectral`` set, slices are shrunk in the DFT/DCT domain along the
    mode and transformed back; the result is real (any imaginary residue of
    the DFT round trip is discarded).
    """
    _check_enum(surrogate, SURROGATES, "surrogate")
    _check_enum(spectral, SPECTRAL_MODES, "spectral")
    if mu <= 0:
        raise ValueError("mu must be positive")
    if weight < 0:
        raise ValueError("weight must be nonnegative")
    g = np.asarray(g, dtype=np.float64)
    if weight == 0.0:
        return g.copy()

    if spectral == "dft":
        y = dft_mode(g, mode)
    elif spectral == "dct":
        y = dct_mode(g, mode)
    else:
        y = g

    c = weight / mu
    u, s, vh = np.linalg.svd(mode_slice_stack(y, mode), full_matrices=False)
    if surrogate == "nuclear":
        s = np.maximum(s - c, 0.0)
    else:
        s = logdet_shrink(s, c)
    y = stack_to_tensor((u * s[..., None, :]) @ vh, mode)

    if spectral == "dft":
        return idft_mode(y, mode).real
    if spectral == "dct":
        return idct_mode(y, mode)
    return y


def surrogate_value(
    x: np.ndarray, mode: int, surrogate: str, spectral: str = "none"
) -> float:
    """Sum over mode slices of the spectral penalty of each slice."""
    _check_enum(surrogate, SURROGATES, "surrogate")
    _check_enum(spectral, SPECTRAL_MODES, "spectral")
    if spectral == "dft":
        y = dft_mode(x, mode)
    elif spectral == "dct":
        y = dct_mode(x, mode)
    else:
        y = np.asarray(x)
    s = np.linalg.svd(mode_slice_stack(y, mode), compute_uv=False)
    if surrogate == "nuclear":
        return float(np.sum(s))
    return float(np.sum(np.log1p(s * s)))
