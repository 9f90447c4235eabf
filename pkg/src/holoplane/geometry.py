"""Measurement-plane geometry.

A measurement hyperplane is the set {x : (x, omega) = s} with unit normal
omega and distance s > 0 from the origin.  Directions theta in the open
half-sphere (theta, omega) > 0 are mapped to plane points by
x = s * theta / (theta, omega).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfHalfspaceError

_UNIT_TOL = 1e-9


def _as_unit(v, name="vector"):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n < 1e-14:
        raise ValueError(f"{name} must be nonzero")
    if abs(n - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector (|{name}| = {n!r})")
    return v / n


@dataclass(frozen=True)
class PlaneFrame:
    """Hyperplane with unit normal `omega` at distance `s`, plus an
    orthonormal basis of the parallel hyperplane through the origin."""

    omega: np.ndarray
    s: float
    basis: np.ndarray  # shape (d-1, d), rows orthonormal, orthogonal to omega

    @property
    def dim(self):
        return self.omega.shape[0]


def make_frame(omega, s):
    """Build a frame for the plane with normal `omega` and distance `s`.

    The in-plane basis is obtained by Gram-Schmidt over the standard basis
    vectors in index order, skipping near-degenerate candidates, so the
    result is deterministic across runs and platforms.
    """
    omega = _as_unit(omega, "omega")
    s = float(s)
    if s <= 0:
        raise ValueError("plane distance s must be positive")
    d = omega.shape[0]
    if d < 2:
        raise ValueError("dimension must be at least 2")

    rows = [omega]
    for i in range(d):
        if len(rows) == d:
            break
        cand = np.zeros(d)
        cand[i] = 1.0
        for r in rows:
            cand = cand - np.dot(cand, r) * r
        n = np.linalg.norm(cand)
        if n < 1e-6:
            continue
        rows.append(cand / n)
    basis = np.array(rows[1:])
    basis.setflags(write=False)
    omega.setflags(write=False)
    return PlaneFrame(omega=omega, s=s, basis=basis)


@dataclass(frozen=True)
class DirectionDecomp:
    """Split of an ambient vector into its in-plane part and the signed
    coefficient along the plane normal."""

    par: np.ndarray
    perp: float


def decompose(v, frame):
    """Decompose `v` into components parallel and perpendicular to the plane."""
    v = np.asarray(v, dtype=float)
    perp = float(np.dot(v, frame.omega))
    par = v - perp * frame.omega
    return DirectionDecomp(par=par, perp=perp)


def point_on_plane(theta, frame):
    """Map a direction in the open half-sphere to its plane point
    x = s * theta / (theta, omega)."""
    theta = _as_unit(theta, "theta")
    c = np.dot(theta, frame.omega)
    if c <= 1e-9:
        raise OutOfHalfspaceError(
            f"(theta, omega) = {c!r} <= 0: direction does not meet the plane"
        )
    return frame.s * theta / c


def in_exceptional_set(theta, k, eps, frame):
    """True iff the in-plane mismatch |k_par - kappa * theta_par| < eps.

    `eps` must lie in (0, 2*kappa); outside that range the set is empty or
    all of the half-sphere and the query is a mistake.
    """
    theta = _as_unit(theta, "theta")
    k = np.asarray(k, dtype=float)
    kappa = np.linalg.norm(k)
    if kappa <= 0:
        raise ValueError("wave vector k must be nonzero")
    eps = float(eps)
    if not 0 < eps < 2 * kappa:
        raise ValueError(f"eps must lie in (0, 2*kappa) = (0, {2 * kappa!r})")
    k_par = decompose(k, frame).par
    theta_par = decompose(theta, frame).par
    return bool(np.linalg.norm(k_par - kappa * theta_par) < eps)


def in_cap_delta(theta, delta, frame):
    """True iff theta lies in the near-normal cap |theta_par| < delta."""
    theta = _as_unit(theta, "theta")
    delta = float(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    return bool(np.linalg.norm(decompose(theta, frame).par) < delta)


@dataclass(frozen=True)
class GridSpec:
    """Square (d=3) or linear (d=2) patch of grid nodes on the plane.

    In-plane coordinates run over `n` equally spaced values from -h to +h,
    endpoints included.
    """

    frame: PlaneFrame
    half_width: float
    n: int
    axes: tuple = field(default=None)

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.n < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if self.axes is None:
            d = self.frame.dim
            object.__setattr__(self, "axes", tuple(range(d - 1)))
        if len(self.axes) != self.frame.dim - 1:
            raise ValueError("number of in-plane axes must be dim - 1")

    @property
    def coords(self):
        return np.linspace(-self.half_width, self.half_width, self.n)

    @property
    def size(self):
        return self.n ** (self.frame.dim - 1)


def grid_coords(spec):
    """In-plane coordinates of the grid nodes, shape (size, d-1), row-major.

    For d=3 the first axis varies slowest (rows), matching np.meshgrid with
    indexing='ij'.
    """
    c = spec.coords
    d = spec.frame.dim
    if d == 2:
        return c[:, None]
    mesh = np.meshgrid(*([c] * (d - 1)), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def grid_points(spec):
    """Ambient coordinates of the grid nodes, shape (size, d), row-major."""
    uv = grid_coords(spec)
    frame = spec.frame
    base = frame.s * frame.omega
    axes_basis = frame.basis[list(spec.axes)]
    return base + uv @ axes_basis


def expansion_oracles(x, zeta):
    """First-order direction and second-order norm approximations of
    y = x + zeta, used by tests to cross-check exact evaluation.

    Returns (yhat_approx, ynorm_approx) where
      yhat_approx  = theta + (zeta - theta (theta, zeta)) / |x|,
      ynorm_approx = |x| (1 + (theta, zeta)/|x|
                          + (|zeta|^2 - (theta, zeta)^2) / (2 |x|^2)).
    """
    x = np.asarray(x, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    r = np.linalg.norm(x)
    if r <= 0:
        raise ValueError("|x| must be positive")
    theta = x / r
    tz = np.dot(theta, zeta)
    yhat = theta + (zeta - theta * tz) / r
    ynorm = r * (1.0 + tz / r + (np.dot(zeta, zeta) - tz * tz) / (2 * r * r))
    return yhat, ynorm
