"""Analytic series solution for scattering of plane elastic waves by a rigid disk.

Everything here is per angular mode n.  The 2x2 mode matrices couple the
compressional and shear potentials through the zero-displacement condition on
the circle; solving the 2x2 systems gives expansion coefficients, the far-field
matrix and the scattered field.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .medium import ElasticMedium, PlaneWaveSpec
from .specfun import bessel_j, bessel_y, cyl_derivative, hankel1

__all__ = [
    "ModeMatrices",
    "ModeCoefficients",
    "mode_matrices",
    "coefficients_p",
    "coefficients_s",
    "farfield_matrix",
    "farfield_matrix_grid",
    "farfield_channels",
    "scattered_field",
    "default_truncation",
    "TruncationWarning",
]


class TruncationWarning(UserWarning):
    """Raised when the requested series truncation leaves a visible tail."""


@dataclass(frozen=True)
class ModeMatrices:
    """Mode-n boundary matrices of the rigid disk of radius R.

    ``hn = jn + 1j * yn`` entrywise by construction; ``q`` holds the diagonal
    of Q = diag(1/sqrt(k_p), 1/sqrt(k_s)).
    """

    n: int
    t_p: float
    t_s: float
    hn: np.ndarray
    jn: np.ndarray
    yn: np.ndarray
    q: np.ndarray


@dataclass(frozen=True)
class ModeCoefficients:
    """Expansion coefficients (A_n, B_n) of the two scattered potentials."""

    n: int
    a: complex
    b: complex


def default_truncation(medium: ElasticMedium, radius: float) -> int:
    """Series length after which mode amplitudes decay super-exponentially."""
    return min(int(math.ceil(medium.k_s * radius)) + 30, 120)


def mode_matrices(n: int, radius: float, medium: ElasticMedium) -> ModeMatrices:
    """Boundary matrices H_n, J_n, Y_n and the diagonal Q for one mode."""
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    tp = medium.k_p * radius
    ts = medium.k_s * radius
    jn = np.array([
        [tp * cyl_derivative("J", n, tp), -1j * n * bessel_j(n, ts)],
        [1j * n * bessel_j(n, tp), ts * cyl_derivative("J", n, ts)],
    ])
    yn = np.array([
        [tp * cyl_derivative("Y", n, tp), -1j * n * bessel_y(n, ts)],
        [1j * n * bessel_y(n, tp), ts * cyl_derivative("Y", n, ts)],
    ])
    hn = jn + 1j * yn
    q = np.array([1.0 / math.sqrt(medium.k_p), 1.0 / math.sqrt(medium.k_s)])
    return ModeMatrices(n=int(n), t_p=tp, t_s=ts, hn=hn, jn=jn, yn=yn, q=q)


def _solve_2x2(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Cofactor solve with row scaling; reports a vanishing determinant."""
    scale = np.max(np.abs(mat), axis=1)
    if np.any(scale == 0):
        raise ArithmeticError("mode matrix has a zero row")
    a = mat / scale[:, None]
    b = rhs / scale
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if abs(det) < 1e-300:
        raise ArithmeticError(
            f"mode matrix determinant underflow (|det|={abs(det):.3e}); "
            "frequency coincides with an interior resonance?")
    return np.array([
        (b[0] * a[1, 1] - a[0, 1] * b[1]) / det,
        (a[0, 0] * b[1] - b[0] * a[1, 0]) / det,
    ])


def _coefficients(n: int, radius: float, medium: ElasticMedium, theta_d: float,
                  rhs: np.ndarray) -> ModeCoefficients:
    mm = mode_matrices(n, radius, medium)
    sol = _solve_2x2(mm.hn, rhs)
    phase = radius * (1j ** (n % 4)) * np.exp(-1j * n * theta_d)
    a, b = sol / mm.q * phase
    return ModeCoefficients(n=int(n), a=complex(a), b=complex(b))


def coefficients_p(n: int, radius: float, medium: ElasticMedium,
                   theta_d: float = 0.0) -> ModeCoefficients:
    """Potential coefficients for a unit compressional incident wave."""
    tp = medium.k_p * radius
    rhs = np.array([1j * cyl_derivative("J", n, tp),
                    -(n / tp) * bessel_j(n, tp)])
    return _coefficients(n, radius, medium, theta_d, rhs)


def coefficients_s(n: int, radius: float, medium: ElasticMedium,
                   theta_d: float = 0.0) -> ModeCoefficients:
    """Potential coefficients for a unit shear incident wave."""
    ts = medium.k_s * radius
    rhs = np.array([(n / ts) * bessel_j(n, ts),
                    1j * cyl_derivative("J", n, ts)])
    return _coefficients(n, radius, medium, theta_d, rhs)


def _mode_symbol(n: int, radius: float, medium: ElasticMedium) -> np.ndarray:
    """Q^-1 H_n^-1 J_n Q^2 for one mode (the far-field matrix summand)."""
    mm = mode_matrices(n, radius, medium)
    cols = np.column_stack([_solve_2x2(mm.hn, mm.jn[:, 0]),
                            _solve_2x2(mm.hn, mm.jn[:, 1])])
    return (cols / mm.q[:, None]) * (mm.q[None, :] ** 2)


def farfield_matrix_grid(theta, radius: float, medium: ElasticMedium,
                         truncation: int | None = None) -> np.ndarray:
    """2x2 far-field matrices of the rigid disk on a grid of angles.

    ``theta`` is the angle between observation and incidence directions.
    Returns shape (len(theta), 2, 2) ordered [[pp, ps], [sp, ss]].
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    n_max = default_truncation(medium, radius) if truncation is None else int(truncation)
    pref = math.sqrt(2 / math.pi) * np.exp(1j * np.pi / 4) * 1j
    out = np.zeros(theta.shape + (2, 2), dtype=complex)
    tail = 0.0
    for n in range(-n_max, n_max + 1):
        sym = _mode_symbol(n, radius, medium)
        out += np.exp(1j * n * theta)[..., None, None] * sym
        if abs(n) == n_max:
            tail = max(tail, float(np.max(np.abs(sym))))
    if tail > 1e-12:
        warnings.warn(
            f"far-field series tail term ~{tail:.2e} at |n|={n_max}; "
            "increase the truncation", TruncationWarning, stacklevel=2)
    return pref * out


def farfield_matrix(theta: float, radius: float, medium: ElasticMedium,
                    truncation: int | None = None) -> np.ndarray:
    """Far-field matrix (u_pp, u_ps; u_sp, u_ss) at one relative angle."""
    return farfield_matrix_grid(np.array([theta]), radius, medium, truncation)[0]


def scattered_field(x, wave: PlaneWaveSpec, radius: float, medium: ElasticMedium,
                    truncation: int | None = None) -> np.ndarray:
    """Scattered displacement at an exterior point x (|x| >= R)."""
    x = np.asarray(x, dtype=float)
    r = float(np.hypot(x[0], x[1]))
    if r < radius * (1 - 1e-12):
        raise ValueError(f"point with |x|={r} lies inside the disk of radius {radius}")
    theta_x = math.atan2(x[1], x[0])
    n_max = default_truncation(medium, radius) if truncation is None else int(truncation)
    kp, ks = medium.k_p, medium.k_s
    theta_d = wave.direction.theta
    nu = np.array([math.cos(theta_x), math.sin(theta_x)])
    tau = np.array([-math.sin(theta_x), math.cos(theta_x)])
    out = np.zeros(2, dtype=complex)
    for n in range(-n_max, n_max + 1):
        a = b = 0j
        if wave.c_p != 0:
            cp = coefficients_p(n, radius, medium, theta_d)
            a += wave.c_p * cp.a
            b += wave.c_p * cp.b
        if wave.c_s != 0:
            cs = coefficients_s(n, radius, medium, theta_d)
            a += wave.c_s * cs.a
            b += wave.c_s * cs.b
        hp_p = cyl_derivative("H1", n, kp * r)
        hp_s = cyl_derivative("H1", n, ks * r)
        h_p = hankel1(n, kp * r)
        h_s = hankel1(n, ks * r)
        nu_comp = math.sqrt(kp) * hp_p * a - (1j * n / (r * math.sqrt(ks))) * h_s * b
        tau_comp = (1j * n / (r * math.sqrt(kp))) * h_p * a + math.sqrt(ks) * hp_s * b
        out += np.exp(1j * n * theta_x) * (nu_comp * nu + tau_comp * tau)
    return out


def farfield_channels(theta_x, wave: PlaneWaveSpec, radius: float,
                      medium: ElasticMedium,
                      truncation: int | None = None,
                      center=(0.0, 0.0)):
    """P/S far-field channels of the disk response to one incident plane wave.

    ``center`` translates the disk; the channels pick up the translation
    phases exp(-i k_alpha z.xhat) exp(i k_beta z.d) per incidence type beta.
    """
    theta_x = np.asarray(theta_x, dtype=float)
    theta = theta_x - wave.direction.theta
    mats = farfield_matrix_grid(theta, radius, medium, truncation)
    z = np.asarray(center, dtype=float)
    d = wave.direction.d
    kp, ks = medium.k_p, medium.k_s
    if np.any(z != 0):
        ph_in_p = np.exp(1j * kp * (z @ d))
        ph_in_s = np.exp(1j * ks * (z @ d))
        zx = z[0] * np.cos(theta_x) + z[1] * np.sin(theta_x)
        ph_out_p = np.exp(-1j * kp * zx)
        ph_out_s = np.exp(-1j * ks * zx)
    else:
        ph_in_p = ph_in_s = 1.0
        ph_out_p = ph_out_s = 1.0
    p = ph_out_p * (wave.c_p * ph_in_p * mats[..., 0, 0] + wave.c_s * ph_in_s * mats[..., 0, 1])
    s = ph_out_s * (wave.c_p * ph_in_p * mats[..., 1, 0] + wave.c_s * ph_in_s * mats[..., 1, 1])
    return p, s
