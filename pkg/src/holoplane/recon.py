"""Two-point recovery of the far-field pattern from plane intensity data.

For each plane point x with direction theta = x/|x| a second point
y = x + zeta is chosen with zeta parallel to the plane.  The pair of
normalized signals (a(x), a(y)) determines the far-field value f11(theta)
through a 2x2 linear system whose determinant is
D = 2i sin((k, zeta) + kappa |x| - kappa |y|).

Two offset choices are implemented:
  * bounded: zeta = -alpha (kappa theta_par - k_par) / |...|^2, which makes
    the leading phase exactly alpha but fails on the exceptional direction
    set where kappa theta_par is close to k_par;
  * sqrt-scaled: |zeta| grows like sqrt(|x|) and the step beta solves a
    quadratic so the second-order phase equals alpha; valid everywhere on
    the half-sphere.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDeterminantError,
    ExceptionalDirectionError,
    InfeasibleParametersError,
    OutOfPatchError,
)
from .geometry import grid_points
from .hologram import intensity_at, scattered_signal

DET_FLOOR = 1e-6

# Below this relative size kappa*theta_par - k_par is treated as exactly
# singular and the sqrt-scaled offset uses the fallback axis.
_SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class BoundedOffset:
    """Fixed-phase offset, valid outside the exceptional set."""

    alpha: float
    eps: float

    def __post_init__(self):
        if self.alpha == 0 or math.sin(self.alpha) == 0:
            raise ValueError("alpha must have sin(alpha) != 0")
        if self.eps <= 0:
            raise ValueError("eps must be positive")


@dataclass(frozen=True)
class SqrtScaled:
    """Offset with |zeta| = O(sqrt(|x|)), valid on the whole half-sphere."""

    alpha: float
    fallback_axis: int = 0

    def __post_init__(self):
        if self.alpha >= 0 or math.sin(self.alpha) == 0:
            raise ValueError("alpha must be negative with sin(alpha) != 0")


@dataclass(frozen=True)
class HybridStrategy:
    """Bounded offset outside the exceptional set, sqrt-scaled inside."""

    bounded: BoundedOffset
    sqrt: SqrtScaled


def _par(v, frame):
    return v - np.dot(v, frame.omega) * frame.omega


def zeta_bounded(theta, params, frame, alpha, eps):
    """Offset zeta = -alpha (kappa theta_par - k_par)/|...|^2.

    Guarantees (k - kappa theta, zeta) = alpha exactly and |zeta| <= |alpha|/eps.
    Raises ExceptionalDirectionError when |kappa theta_par - k_par| < eps.
    """
    theta = np.asarray(theta, dtype=float)
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    m = params.kappa * _par(theta, frame) - _par(params.k, frame)
    mn = np.linalg.norm(m)
    if mn < eps:
        raise ExceptionalDirectionError(
            f"|kappa*theta_par - k_par| = {mn!r} < eps = {eps!r}"
        )
    return -alpha * m / (mn * mn)


def beta_solve(alpha, kappa, r, theta_par, k_par, zeta_hat):
    """Step size beta solving
    beta |k_par - kappa theta_par| + (kappa / 2r) beta^2 ((theta_par, zeta_hat)^2 - 1) = alpha
    via the stable quadratic-root form."""
    theta_par = np.asarray(theta_par, dtype=float)
    k_par = np.asarray(k_par, dtype=float)
    zeta_hat = np.asarray(zeta_hat, dtype=float)
    if alpha >= 0:
        raise ValueError("alpha must be negative")
    mn = np.linalg.norm(k_par - kappa * theta_par)
    t2 = float(np.dot(theta_par, zeta_hat)) ** 2
    disc = mn * mn + (2.0 * kappa / r) * (t2 - 1.0) * alpha
    if disc < 0:
        raise InfeasibleParametersError(
            "negative discriminant in the step-size quadratic"
        )
    return 2.0 * alpha / (mn + math.sqrt(disc))


def zeta_sqrt(theta, params, frame, alpha, r, fallback_axis=0):
    """Sqrt-scaled offset, defined for every direction in the half-sphere.

    Away from the singular direction the offset points along
    kappa theta_par - k_par; on it the frame basis vector `fallback_axis`
    is used (the direction there is arbitrary).
    """
    theta = np.asarray(theta, dtype=float)
    theta_par = _par(theta, frame)
    k_par = _par(params.k, frame)
    m = params.kappa * theta_par - k_par
    mn = np.linalg.norm(m)
    if mn < _SINGULAR_TOL * params.kappa:
        zeta_hat = frame.basis[fallback_axis]
        beta = beta_solve(alpha, params.kappa, r, theta_par, k_par, zeta_hat)
        return beta * zeta_hat
    u = m / mn
    beta = beta_solve(alpha, params.kappa, r, theta_par, k_par, u)
    return -beta * u


def determinant(x, zeta, params):
    """D = 2i sin((k, zeta) + kappa |x| - kappa |x + zeta|); purely imaginary,
    |D| <= 2."""
    x = np.asarray(x, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    phase = (
        np.dot(params.k, zeta)
        + params.kappa * (np.linalg.norm(x) - np.linalg.norm(x + zeta))
    )
    return 2j * math.sin(phase)


def determinant_phase_expansion(x, zeta, params):
    """Second-order model of the determinant phase:
    (k - kappa theta, zeta) + (kappa / 2|x|) ((theta, zeta)^2 - |zeta|^2).
    Diagnostic only; the reconstruction uses the exact phase."""
    x = np.asarray(x, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    r = np.linalg.norm(x)
    theta = x / r
    tz = float(np.dot(theta, zeta))
    lead = float(np.dot(params.k - params.kappa * theta, zeta))
    return lead + (params.kappa / (2.0 * r)) * (tz * tz - float(zeta @ zeta))


def _phase_factor(params, x):
    # e^{i((k, x) - kappa |x|)}, the coefficient of f1 conjugate in the
    # linearized intensity.
    x = np.asarray(x, dtype=float)
    return np.exp(1j * (x @ params.k - params.kappa * np.linalg.norm(x, axis=-1)))


def f11(a_x, a_y, x, y, params, det_floor=DET_FLOOR):
    """Two-point far-field estimator
    f11 = (e^{i((k,y) - kappa|y|)} a(x) - e^{i((k,x) - kappa|x|)} a(y)) / D."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = determinant(x, y - x, params)
    if abs(d) <= det_floor:
        raise DegenerateDeterminantError(f"|D| = {abs(d)!r} <= {det_floor!r}")
    return (_phase_factor(params, y) * a_x - _phase_factor(params, x) * a_y) / d


def f11_refined_2d(f11_value, x, y, params):
    """Second-order d=2 correction removing the leading self-interference
    term |f11|^2 / sqrt(|x|) from the estimator."""
    if params.dim != 2:
        raise ValueError("refinement applies to d=2 only")
    x = np.asarray(x, dtype=float)
    d = determinant(x, np.asarray(y, dtype=float) - x, params)
    if abs(d) == 0:
        raise DegenerateDeterminantError("D = 0")
    corr = (
        (_phase_factor(params, y) - _phase_factor(params, x))
        * abs(f11_value) ** 2
        / (d * math.sqrt(np.linalg.norm(x)))
    )
    return f11_value - corr


@dataclass(frozen=True)
class PointFlags:
    in_exceptional_set: bool
    small_determinant: bool


@dataclass(frozen=True)
class ReconPointResult:
    x: np.ndarray
    theta: np.ndarray
    zeta: np.ndarray
    D: complex
    f11: complex
    psi1_rec: complex
    flags: PointFlags


@dataclass
class ReconGridResult:
    """Per-grid-point reconstruction, row-major grid order."""

    spec: object
    points: np.ndarray  # (m, d)
    theta: np.ndarray  # (m, d)
    zeta: np.ndarray  # (m, d)
    D: np.ndarray  # complex (m,)
    f11: np.ndarray  # complex (m,)
    psi1_rec: np.ndarray  # complex (m,)
    flag_exceptional: np.ndarray  # bool (m,)
    flag_small_d: np.ndarray  # bool (m,)

    @property
    def max_zeta(self):
        return float(np.linalg.norm(self.zeta, axis=1).max())

    def __len__(self):
        return self.points.shape[0]

    def __getitem__(self, i):
        return ReconPointResult(
            x=self.points[i],
            theta=self.theta[i],
            zeta=self.zeta[i],
            D=complex(self.D[i]),
            f11=complex(self.f11[i]),
            psi1_rec=complex(self.psi1_rec[i]),
            flags=PointFlags(
                in_exceptional_set=bool(self.flag_exceptional[i]),
                small_determinant=bool(self.flag_small_d[i]),
            ),
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))


def _zeta_for_grid(theta, theta_par, m, mn, r, params, frame, strategy):
    """Offsets for all grid directions at once.

    Returns (zeta, valid) where invalid rows (bounded strategy inside the
    exceptional set, no fallback) are zero and marked False.
    """
    npts, d = theta.shape
    zeta = np.zeros((npts, d))
    valid = np.ones(npts, dtype=bool)

    def sqrt_rows(rows, strat):
        if not np.any(rows):
            return
        sing = rows & (mn < _SINGULAR_TOL * params.kappa)
        reg = rows & ~sing
        if np.any(reg):
            u = m[reg] / mn[reg, None]
            t2 = np.einsum("ij,ij->i", theta_par[reg], u) ** 2
            disc = mn[reg] ** 2 + (2.0 * params.kappa / r[reg]) * (t2 - 1.0) * strat.alpha
            beta = 2.0 * strat.alpha / (mn[reg] + np.sqrt(disc))
            zeta[reg] = -beta[:, None] * u
        if np.any(sing):
            # theta_par vanishes on singular rows, so (theta_par, zeta_hat) = 0.
            zhat = frame.basis[strat.fallback_axis]
            disc = (2.0 * params.kappa / r[sing]) * (-1.0) * strat.alpha
            beta = 2.0 * strat.alpha / np.sqrt(disc)
            zeta[sing] = beta[:, None] * zhat[None, :]

    if isinstance(strategy, SqrtScaled):
        sqrt_rows(np.ones(npts, dtype=bool), strategy)
    elif isinstance(strategy, BoundedOffset):
        ok = mn >= strategy.eps
        zeta[ok] = -strategy.alpha * m[ok] / (mn[ok] ** 2)[:, None]
        valid = ok
    elif isinstance(strategy, HybridStrategy):
        ok = mn >= strategy.bounded.eps
        zeta[ok] = -strategy.bounded.alpha * m[ok] / (mn[ok] ** 2)[:, None]
        sqrt_rows(~ok, strategy.sqrt)
    else:
        raise TypeError(f"unknown strategy {strategy!r}")
    return zeta, valid


def reconstruct_grid(
    field,
    params,
    spec,
    strategy,
    mode="analytic",
    refine2d=False,
    hologram=None,
    flag_eps=0.1,
    det_floor=DET_FLOOR,
):
    """Run the two-point estimator at every grid node.

    `mode` selects how the intensity at the offset point y = x + zeta is
    obtained: `analytic` evaluates the forward model, `bilinear`
    interpolates the sampled hologram (which must then be supplied).
    Per-point failures (exceptional direction, offset leaving the patch,
    tiny determinant) are recorded in flags / NaN results; the grid run
    never aborts.
    """
    frame = spec.frame
    d = frame.dim
    pts = grid_points(spec)
    r = np.linalg.norm(pts, axis=1)
    theta = pts / r[:, None]
    theta_par = theta - (theta @ frame.omega)[:, None] * frame.omega
    k_par = _par(params.k, frame)
    m = params.kappa * theta_par - k_par
    mn = np.linalg.norm(m, axis=1)

    zeta, valid = _zeta_for_grid(theta, theta_par, m, mn, r, params, frame, strategy)
    y = pts + zeta
    ry = np.linalg.norm(y, axis=1)

    phase = (zeta @ params.k) + params.kappa * (r - ry)
    D = 2j * np.sin(phase)

    half = (d - 1) / 2.0
    if mode == "analytic":
        i_x = _intensity_vec(field, params, pts)
        i_y = _intensity_vec(field, params, y)
        a_x = r ** half * (i_x - 1.0)
        a_y = ry ** half * (i_y - 1.0)
    elif mode == "bilinear":
        if hologram is None:
            raise ValueError("bilinear mode needs a sampled hologram")
        a_x = r ** half * (hologram.values - 1.0)
        a_y = np.empty(len(pts))
        for idx in range(len(pts)):
            try:
                iy = intensity_at(hologram, y[idx], mode="bilinear")
            except OutOfPatchError:
                valid[idx] = False
                a_y[idx] = np.nan
                continue
            a_y[idx] = ry[idx] ** half * (iy - 1.0)
    else:
        raise ValueError(f"unknown lookup mode {mode!r}")

    e_x = np.exp(1j * ((pts @ params.k) - params.kappa * r))
    e_y = np.exp(1j * ((y @ params.k) - params.kappa * ry))

    with np.errstate(divide="ignore", invalid="ignore"):
        f11_vals = (e_y * a_x - e_x * a_y) / D
        if refine2d:
            # Self-interference removal; derived for d=2, where it improves
            # the error order, but the same algebra applies in any dimension.
            f11_vals = f11_vals - (e_y - e_x) * np.abs(f11_vals) ** 2 / (
                D * r ** half
            )
    f11_vals = np.where(valid, f11_vals, np.nan + 0j)
    psi1_rec = np.exp(1j * params.kappa * r) * r ** (-half) * f11_vals

    flag_exceptional = mn < flag_eps
    flag_small_d = np.abs(D) <= det_floor

    return ReconGridResult(
        spec=spec,
        points=pts,
        theta=theta,
        zeta=np.where(valid[:, None], zeta, np.nan),
        D=D,
        f11=f11_vals,
        psi1_rec=psi1_rec,
        flag_exceptional=flag_exceptional,
        flag_small_d=flag_small_d,
    )


def _intensity_vec(field, params, pts):
    from .hologram import intensity

    return intensity(field, params, pts)


def recon_to_csv(result, psi1_exact, path):
    """Write per-point results as CSV.

    d=3 header: i,j,x2,x3,re_psi1,im_psi1,re_psi1rec,im_psi1rec,
    re_f11,im_f11,abs_D,zeta_norm,flag_exceptional,flag_smallD.
    d=2 drops j and x3.
    """
    from .geometry import grid_coords

    spec = result.spec
    uv = grid_coords(spec)
    zn = np.linalg.norm(result.zeta, axis=1)
    with open(path, "w", newline="") as fh:
        if spec.frame.dim == 3:
            fh.write(
                "i,j,x2,x3,re_psi1,im_psi1,re_psi1rec,im_psi1rec,"
                "re_f11,im_f11,abs_D,zeta_norm,flag_exceptional,flag_smallD\n"
            )
        else:
            fh.write(
                "i,x2,re_psi1,im_psi1,re_psi1rec,im_psi1rec,"
                "re_f11,im_f11,abs_D,zeta_norm,flag_exceptional,flag_smallD\n"
            )
        for idx in range(len(result)):
            rec = result.psi1_rec[idx]
            f = result.f11[idx]
            ex = psi1_exact[idx]
            tail = (
                f"{ex.real:.10g},{ex.imag:.10g},{rec.real:.10g},{rec.imag:.10g},"
                f"{f.real:.10g},{f.imag:.10g},{abs(result.D[idx]):.10g},"
                f"{zn[idx]:.10g},{int(result.flag_exceptional[idx])},"
                f"{int(result.flag_small_d[idx])}\n"
            )
            if spec.frame.dim == 3:
                i, j = divmod(idx, spec.n)
                fh.write(f"{i},{j},{uv[idx, 0]:.10g},{uv[idx, 1]:.10g},{tail}")
            else:
                fh.write(f"{idx},{uv[idx, 0]:.10g},{tail}")
