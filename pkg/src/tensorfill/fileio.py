"""Binary tensor/mask files, delimited outputs and image-stack ingestion.

Tensor files ("TNS3") carry a u32 version, three u64 dims and the float64
payload in first-index-fastest order; mask files ("MSK3") carry dims, a u64
count and the sorted u64 offsets.  All integers and floats are little-endian
and round trips are bit-exact.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .metrics import MetricReport
from .solver import ConvergenceTrace
from .tensor import ObservationMask, check_tensor3, flatten, unflatten

TENSOR_MAGIC = b"TNS3"
MASK_MAGIC = b"MSK3"
FILE_VERSION = 1

TRACE_COLUMNS = (
    "iter", "mu", "delta_inf", "objective",
    "res_Y", "res_X", "res_F", "res_M", "res_B",
)


def write_tensor(path, x: np.ndarray) -> None:
    x = check_tensor3(x, "tensor")
    with open(path, "wb") as fh:
        fh.write(TENSOR_MAGIC)
        fh.write(struct.pack("<I", FILE_VERSION))
        fh.write(struct.pack("<QQQ", *x.shape))
        fh.write(flatten(x).astype("<f8").tobytes())


def read_tensor(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != TENSOR_MAGIC:
        raise ValueError(f"{path}: not a tensor file (bad magic)")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != FILE_VERSION:
        raise ValueError(f"{path}: unsupported tensor file version {version}")
    dims = struct.unpack_from("<QQQ", raw, 8)
    payload = raw[32:]
    expected = 8 * dims[0] * dims[1] * dims[2]
    if len(payload) != expected:
        raise ValueError(
            f"{path}: payload of {len(payload)} bytes, expected {expected}"
        )
    data = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return check_tensor3(unflatten(data, dims), str(path))


def write_mask(path, mask: ObservationMask) -> None:
    with open(path, "wb") as fh:
        fh.write(MASK_MAGIC)
        fh.write(struct.pack("<I", FILE_VERSION))
        fh.write(struct.pack("<QQQ", *mask.dims))
        fh.write(struct.pack("<Q", mask.size))
        fh.write(mask.indices.astype("<u8").tobytes())


def read_mask(path) -> ObservationMask:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != MASK_MAGIC:
        raise ValueError(f"{path}: not a mask file (bad magic)")
    (version,) = struct.unpack_from("<I", raw, 4)
    if version != FILE_VERSION:
        raise ValueError(f"{path}: unsupported mask file version {version}")
    dims = struct.unpack_from("<QQQ", raw, 8)
    (count,) = struct.unpack_from("<Q", raw, 32)
    payload = raw[40:]
    if len(payload) != 8 * count:
        raise ValueError(f"{path}: index payload of {len(payload)} bytes, "
                         f"expected {8 * count}")
    indices = np.frombuffer(payload, dtype="<u8").astype(np.int64)
    return ObservationMask(dims, indices)


def _fmt(v: float) -> str:
    return repr(float(v))


def write_trace_csv(trace: ConvergenceTrace, path) -> None:
    """One row per iteration; rse/psnr columns appear only when a ground
    truth was supplied to the solve."""
    columns = list(TRACE_COLUMNS)
    extra = bool(trace.rse)
    if extra:
        columns += ["rse", "psnr"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for i in range(len(trace)):
            row = [
                trace.iterations[i],
                _fmt(trace.mu[i]),
                _fmt(trace.delta_inf[i]),
                _fmt(trace.objective[i]),
                _fmt(trace.res_y[i]),
                _fmt(trace.res_x[i]),
                _fmt(trace.res_f[i]),
                _fmt(trace.res_m[i]),
                _fmt(trace.res_b[i]),
            ]
            if extra:
                row += [_fmt(trace.rse[i]), _fmt(trace.psnr[i])]
            writer.writerow(row)


def read_trace_csv(path) -> dict[str, list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or reader.fieldnames[: len(TRACE_COLUMNS)] != list(
            TRACE_COLUMNS
        ):
            raise ValueError(f"{path}: unexpected trace header {reader.fieldnames}")
        out: dict[str, list[float]] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in reader.fieldnames:
                out[name].append(float(row[name]))
    return out


def write_report_json(report: MetricReport, path) -> None:
    with open(path, "w") as fh:
        json.dump(report.as_dict(), fh, indent=2)
        fh.write("\n")


def write_per_slice_csv(rows: list[tuple[int, float, float]], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["slice", "psnr", "ssim"])
        for k, p, s in rows:
            writer.writerow([k, _fmt(p), _fmt(s)])


def ingest_slices(directory) -> np.ndarray:
    """Stack the grayscale images of a directory (lexicographic filename
    order) along mode 3, scaled from 8-bit to [0, 1]."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ValueError(f"{directory} is not a directory")
    paths = sorted(p for p in directory.iterdir() if p.is_file())
    if not paths:
        raise ValueError(f"no image files in {directory}")
    slices = []
    shape = None
    for p in paths:
        try:
            with Image.open(p) as img:
                arr = np.asarray(img.convert("L"), dtype=np.float64) / 255.0
        except (UnidentifiedImageError, OSError) as exc:
            raise ValueError(f"cannot read image {p}: {exc}") from exc
        if shape is None:
            shape = arr.shape
        elif arr.shape != shape:
            raise ValueError(
                f"image {p} has size {arr.shape}, expected {shape} like the rest"
            )
        slices.append(arr)
    return np.stack(slices, axis=2)
