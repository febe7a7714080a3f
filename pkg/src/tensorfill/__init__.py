"""Low-rank 3-order tensor completion.

A single ADMM solver covers nuclear-norm and log-det fibered-rank
surrogates, fixed (identity/DFT/DCT) or learned orthogonal mode transforms,
and total-variation smoothing, with deterministic data plumbing and a CLI.
"""

from .data import Rng, sample_mask, synth_lowrank
from .metrics import MetricReport, evaluate, per_slice_metrics, psnr, rse, ssim
from .prox import (
    matrix_logdet_prox,
    matrix_svt,
    mode_prox,
    scalar_logdet_prox,
    soft_threshold,
    surrogate_value,
)
from .solver import (
    AdmmState,
    ConvergenceTrace,
    KktResiduals,
    PRESETS,
    SolverConfig,
    fibered_rank,
    init_state,
    kkt_residuals,
    objective,
    preset_config,
    solve,
    step_mu,
)
from .tensor import (
    ObservationMask,
    TensorNorms,
    dct_matrix,
    dct_mode,
    dft_mode,
    fold,
    idct_mode,
    idft_mode,
    mode_product,
    mode_slices,
    norms,
    project_mask,
    unfold,
)
from .transform import (
    TransformSet,
    orthogonality_residual,
    procrustes_rotation,
    update_transform,
)
from .tv import DiffField, diff_adjoint, diff_apply, tv_norm, tv_solve

__version__ = "0.1.0"

__all__ = [
    "AdmmState",
    "ConvergenceTrace",
    "DiffField",
    "KktResiduals",
    "MetricReport",
    "ObservationMask",
    "PRESETS",
    "Rng",
    "SolverConfig",
    "TensorNorms",
    "TransformSet",
    "dct_matrix",
    "dct_mode",
    "dft_mode",
    "diff_adjoint",
    "diff_apply",
    "evaluate",
    "fibered_rank",
    "fold",
    "idct_mode",
    "idft_mode",
    "init_state",
    "kkt_residuals",
    "matrix_logdet_prox",
    "matrix_svt",
    "mode_product",
    "mode_prox",
    "mode_slices",
    "norms",
    "objective",
    "orthogonality_residual",
    "per_slice_metrics",
    "preset_config",
    "procrustes_rotation",
    "project_mask",
    "psnr",
    "rse",
    "sample_mask",
    "scalar_logdet_prox",
    "soft_threshold",
    "solve",
    "ssim",
    "step_mu",
    "surrogate_value",
    "synth_lowrank",
    "tv_norm",
    "tv_solve",
    "unfold",
    "update_transform",
]
