"""Error measures: relative discrete L2 distance, intensity discrepancy,
rectangular region masks, and log-log slope fits."""

import numpy as np

from .errors import UndefinedDenominatorError
from .fields import plane_wave
from .geometry import grid_coords


def region_masks(spec, box_half_width):
    """Boolean masks over the grid nodes, row-major order.

    Returns {"G": all nodes, "D": central box |u_i| < b, "G\\D": complement}.
    """
    uv = grid_coords(spec)
    b = float(box_half_width)
    if b <= 0:
        raise ValueError("box half-width must be positive")
    center = np.all(np.abs(uv) < b, axis=1)
    full = np.ones(len(uv), dtype=bool)
    return {"G": full, "D": center, "G\\D": ~center}


def rel_l2(u2, u1, mask=None):
    """|| u2 - u1 ||_2 / || u1 ||_2 over the masked nodes (uniform weights)."""
    u2 = np.asarray(u2)
    u1 = np.asarray(u1)
    if mask is not None:
        u2 = u2[mask]
        u1 = u1[mask]
    denom = np.sqrt(np.sum(np.abs(u1) ** 2))
    if denom == 0:
        raise UndefinedDenominatorError("reference function vanishes on the region")
    return float(np.sqrt(np.sum(np.abs(u2 - u1) ** 2)) / denom)


def discrepancy(field, params, points, psi1_rec, mask=None):
    """Relative L2 mismatch of reconstructed vs measured intensity, both
    shifted by -1: rel_l2(|psi0 + psi1_rec|^2 - 1, I - 1)."""
    from .hologram import intensity

    psi0 = plane_wave(points, params)
    i_true = intensity(field, params, points)
    i_rec = np.abs(psi0 + psi1_rec) ** 2
    return rel_l2(i_rec - 1.0, i_true - 1.0, mask)


def slope_estimate(samples):
    """Least-squares slope of log(error) vs log(scale).

    `samples` is a sequence of (scale, error) pairs, all positive, at
    least three distinct scales.
    """
    samples = list(samples)
    if len(samples) < 3:
        raise ValueError("need at least 3 samples")
    s = np.array([p[0] for p in samples], dtype=float)
    e = np.array([p[1] for p in samples], dtype=float)
    if np.any(s <= 0) or np.any(e <= 0):
        raise ValueError("scales and errors must be positive")
    if len(np.unique(s)) < len(s):
        raise ValueError("scales must be distinct")
    slope, _ = np.polyfit(np.log(s), np.log(e), 1)
    return float(slope)
