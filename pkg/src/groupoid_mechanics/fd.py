"""Central finite differences for user-supplied coordinate fields.

Steps are relative per coordinate: ``h_k = rel_step * max(1, |x_k|)``.
"""

from __future__ import annotations

import numpy as np

__all__ = ["gradient", "jacobian"]


def _steps(x: np.ndarray, rel_step: float) -> np.ndarray:
    return rel_step * np.maximum(1.0, np.abs(x))


def gradient(f, x, rel_step: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar field at ``x``."""
    x = np.asarray(x, dtype=float)
    h = _steps(x, rel_step)
    out = np.zeros(x.size)
    for k in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[k] += h[k]
        xm[k] -= h[k]
        out[k] = (f(xp) - f(xm)) / (2.0 * h[k])
    return out


def jacobian(f, x, rel_step: float = 1e-5) -> np.ndarray:
    """Central-difference derivative of an array-valued field.

    Returns an array of shape ``(len(x),) + f(x).shape`` whose leading axis
    indexes the differentiation coordinate.
    """
    x = np.asarray(x, dtype=float)
    h = _steps(x, rel_step)
    base_shape = np.asarray(f(x), dtype=float).shape
    out = np.zeros((x.size,) + base_shape)
    for k in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[k] += h[k]
        xm[k] -= h[k]
        out[k] = (np.asarray(f(xp), dtype=float) - np.asarray(f(xm), dtype=float)) / (
            2.0 * h[k]
        )
    return out
