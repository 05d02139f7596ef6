"""Exact-in-distribution fractional Brownian motion on regular grids.

Paths are generated by circulant embedding of the increment covariance
(FFT of the nested Toeplitz structure), which is exact when the circulant
spectrum is nonnegative; tiny negative eigenvalues from roundoff are
clipped, genuinely negative spectra fall back to a dense factorization for
moderate grids.  Per-path Philox streams keep batches reproducible for any
worker partitioning.
"""

from __future__ import annotations

import math
import struct
from functools import lru_cache

import numpy as np

from ..errors import EmbeddingFailure, SpecError
from ..montecarlo import block_rng

__all__ = [
    "fbm_simulate",
    "fbm_path",
    "two_sided_path",
    "write_paths_binary",
    "read_paths_binary",
    "paths_to_csv",
]

_MAGIC = b"FBM1"


def _is_pow2(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _fgn_autocov(H: float, n: int) -> np.ndarray:
    k = np.arange(n + 1, dtype=float)
    return 0.5 * (
        np.abs(k + 1) ** (2 * H) - 2 * np.abs(k) ** (2 * H) + np.abs(k - 1) ** (2 * H)
    )


@lru_cache(maxsize=16)
def _circulant_sqrt_spectrum(H: float, n: int) -> np.ndarray | None:
    """sqrt of the circulant eigenvalues for unit-spacing fGn, or None."""
    gamma = _fgn_autocov(H, n)
    c = np.concatenate([gamma[:n], gamma[n:n + 1], gamma[n - 1:0:-1]])
    lam = np.fft.fft(c).real
    floor = -1e-8 * lam.max()
    if lam.min() < floor:
        return None
    return np.sqrt(np.maximum(lam, 0.0))


@lru_cache(maxsize=8)
def _dense_increment_factor(H: float, n: int) -> np.ndarray:
    gamma = _fgn_autocov(H, n)
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    return np.linalg.cholesky(gamma[idx])


def _fgn_unit(H: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """n stationary fractional Gaussian noise values at unit spacing."""
    if H == 0.5:
        return rng.standard_normal(n)
    sqrt_lam = _circulant_sqrt_spectrum(H, n)
    if sqrt_lam is None:
        if n > 1 << 12:
            raise EmbeddingFailure(
                f"circulant spectrum negative for H={H}, n={n}; dense "
                f"fallback is limited to n <= 4096"
            )
        return _dense_increment_factor(H, n) @ rng.standard_normal(n)
    m = 2 * n
    z_edge = rng.standard_normal(2)
    z_mid = rng.standard_normal((n - 1, 2))
    w = np.zeros(m, dtype=complex)
    w[0] = sqrt_lam[0] * z_edge[0] / math.sqrt(m)
    w[n] = sqrt_lam[n] * z_edge[1] / math.sqrt(m)
    interior = sqrt_lam[1:n] * (z_mid[:, 0] + 1j * z_mid[:, 1]) / math.sqrt(2 * m)
    w[1:n] = interior
    w[n + 1:] = np.conj(interior[::-1])
    return np.fft.fft(w).real[:n]


def fbm_path(H: float, n_steps: int, T: float, rng: np.random.Generator) -> np.ndarray:
    """One path of B_H on the grid {k*T/n_steps}, length n_steps + 1."""
    if not (0 < H <= 1):
        raise SpecError(f"Hurst parameter must be in (0, 1], got {H}")
    if T <= 0:
        raise SpecError(f"horizon must be positive, got {T}")
    if H == 1.0:
        # Covariance t*t': the path is a random slope through the origin.
        z = rng.standard_normal()
        return np.linspace(0.0, T, n_steps + 1) * z
    if not _is_pow2(n_steps):
        raise SpecError(f"n_steps must be a power of two, got {n_steps}")
    dt = T / n_steps
    fgn = _fgn_unit(H, n_steps, rng) * dt ** H
    path = np.empty(n_steps + 1)
    path[0] = 0.0
    np.cumsum(fgn, out=path[1:])
    return path


def fbm_simulate(H: float, n_steps: int, T: float, seed: int) -> np.ndarray:
    """Single seeded path; stream key (seed, 0)."""
    return fbm_path(H, n_steps, T, block_rng(seed, 0))


def two_sided_path(H: float, half_steps: int, T: float, rng: np.random.Generator) -> np.ndarray:
    """B_H on {-T, ..., T} pinned to 0 at t=0, via increment stationarity.

    Returns 2*half_steps + 1 values; entry half_steps is exactly 0.
    """
    base = fbm_path(H, 2 * half_steps, 2 * T, rng)
    return base - base[half_steps]


# ---------------------------------------------------------------------------
# Path dumps
# ---------------------------------------------------------------------------

def write_paths_binary(path_file, H: float, T: float, paths: np.ndarray) -> None:
    """Little-endian float64 dump: magic 'FBM1', H, n_steps, n_paths, T."""
    arr = np.ascontiguousarray(np.atleast_2d(np.asarray(paths, dtype="<f8")))
    n_paths, n_points = arr.shape
    header = _MAGIC + struct.pack("<dqqd", H, n_points - 1, n_paths, T)
    with open(path_file, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes())


def read_paths_binary(path_file) -> tuple[float, float, np.ndarray]:
    with open(path_file, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise SpecError(f"not a path dump (magic {magic!r})")
        H, n_steps, n_paths, T = struct.unpack("<dqqd", fh.read(32))
        data = np.frombuffer(fh.read(), dtype="<f8")
    return H, T, data.reshape(int(n_paths), int(n_steps) + 1)


def paths_to_csv(H: float, T: float, paths: np.ndarray) -> str:
    arr = np.atleast_2d(np.asarray(paths, dtype=float))
    n_points = arr.shape[1]
    t = np.linspace(0.0, T, n_points)
    lines = ["t," + ",".join(f"path{i}" for i in range(arr.shape[0]))]
    for j in range(n_points):
        lines.append(",".join([repr(t[j])] + [repr(v) for v in arr[:, j]]))
    return "\n".join(lines) + "\n"
