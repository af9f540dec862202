"""Elastic medium parameters, incident plane waves and fundamental solutions.

Conventions: the propagation direction for angle ``theta`` is
``d = (cos, sin)``; the orthogonal direction is ``d_perp = (-sin, cos)``
(rotation by +90 degrees), used both for shear plane waves and for the
shear far-field channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as _sp

__all__ = [
    "ElasticMedium",
    "Direction",
    "PlaneWaveSpec",
    "plane_wave",
    "kupradze_tensor",
    "kupradze_matrix",
    "point_source_farfield",
    "point_source_farfield_grid",
]


@dataclass(frozen=True)
class ElasticMedium:
    """Homogeneous isotropic medium with Lame constants and angular frequency."""

    lam: float
    mu: float
    omega: float

    def __post_init__(self):
        for name in ("lam", "mu", "omega"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite number, got {v!r}")
        if self.mu <= 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if self.lam + 2 * self.mu <= 0:
            raise ValueError(f"lam + 2*mu must be > 0, got {self.lam + 2 * self.mu}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")

    @property
    def k_p(self) -> float:
        """Compressional wave number omega / sqrt(lam + 2 mu)."""
        return self.omega / math.sqrt(self.lam + 2 * self.mu)

    @property
    def k_s(self) -> float:
        """Shear wave number omega / sqrt(mu)."""
        return self.omega / math.sqrt(self.mu)

    def wavenumber(self, channel: str) -> float:
        if channel == "p":
            return self.k_p
        if channel == "s":
            return self.k_s
        raise ValueError(f"channel must be 'p' or 's', got {channel!r}")


@dataclass(frozen=True)
class Direction:
    """Unit direction on the circle, stored by its angle."""

    theta: float

    @property
    def d(self) -> np.ndarray:
        return np.array([math.cos(self.theta), math.sin(self.theta)])

    @property
    def d_perp(self) -> np.ndarray:
        return np.array([-math.sin(self.theta), math.cos(self.theta)])


@dataclass(frozen=True)
class PlaneWaveSpec:
    """Incident plane wave: compressional and shear amplitudes along one direction."""

    direction: Direction
    c_p: complex = 1.0
    c_s: complex = 0.0

    def __post_init__(self):
        if abs(self.c_p) + abs(self.c_s) == 0:
            raise ValueError("plane wave needs |c_p| + |c_s| > 0")


def plane_wave(x, wave: PlaneWaveSpec, medium: ElasticMedium) -> np.ndarray:
    """Displacement of the incident wave at points x (shape (..., 2))."""
    x = np.asarray(x, dtype=float)
    d = wave.direction.d
    dp = wave.direction.d_perp
    xd = x @ d
    out = (wave.c_p * np.exp(1j * medium.k_p * xd))[..., None] * d \
        + (wave.c_s * np.exp(1j * medium.k_s * xd))[..., None] * dp
    return out


def _h0_radial_parts(k: float, r):
    """(f, f'/r, f'') for f(r) = H0^(1)(k r), vectorized over r."""
    kr = k * r
    h0 = _sp.hankel1(0, kr)
    h1 = _sp.hankel1(1, kr)
    fp = -k * h1
    fpp = -k * k * h0 + k * h1 / r
    return h0, fp / r, fpp


def kupradze_matrix(xs, ys, medium: ElasticMedium) -> np.ndarray:
    """Fundamental-solution tensor for all point pairs.

    Returns an array of shape (len(xs), len(ys), 2, 2) with entry [i, q]
    equal to the Green tensor at (xs[i], ys[q]).
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    diff = xs[:, None, :] - ys[None, :, :]
    r = np.linalg.norm(diff, axis=-1)
    if np.any(r == 0):
        raise ValueError("source and evaluation points must be distinct")
    rv = diff / r[..., None]
    h0s, fprs, fpps = _h0_radial_parts(medium.k_s, r)
    _, fprp, fppp = _h0_radial_parts(medium.k_p, r)
    omega2 = medium.omega ** 2
    eye = np.eye(2)
    rr = rv[..., :, None] * rv[..., None, :]
    # grad grad^T f(r) = f'' rhat rhat^T + (f'/r)(I - rhat rhat^T)
    hess = (fpps - fppp)[..., None, None] * rr \
        + (fprs - fprp)[..., None, None] * (eye - rr)
    out = (1j / (4 * medium.mu)) * h0s[..., None, None] * eye \
        + (1j / (4 * omega2)) * hess
    return out


def kupradze_tensor(x, y, medium: ElasticMedium) -> np.ndarray:
    """Green tensor of the time-harmonic elasticity system at a single pair."""
    return kupradze_matrix(np.asarray(x, float)[None, :], np.asarray(y, float)[None, :],
                           medium)[0, 0]


def point_source_farfield(xhat_theta: float, y, a, medium: ElasticMedium):
    """Far-field pattern of a point source at y with polarization a.

    Returns (full 2-vector, p_part, s_part) observed in direction
    xhat = (cos, sin)(xhat_theta).
    """
    p, s = point_source_farfield_grid(np.array([xhat_theta]), y, a, medium)
    ct, st = math.cos(xhat_theta), math.sin(xhat_theta)
    xhat = np.array([ct, st])
    xperp = np.array([-st, ct])
    full = p[0] * xhat + s[0] * xperp
    return full, complex(p[0]), complex(s[0])


def point_source_farfield_grid(theta, y, a, medium: ElasticMedium):
    """P/S far-field channels of a point source, sampled on observation angles.

    ``a`` may be complex (superposed polarizations are linear in a).
    """
    theta = np.asarray(theta, dtype=float)
    y = np.asarray(y, dtype=float)
    a = np.asarray(a)
    kp, ks, omega = medium.k_p, medium.k_s, medium.omega
    ct, st = np.cos(theta), np.sin(theta)
    xhat_dot_a = ct * a[0] + st * a[1]
    xperp_dot_a = -st * a[0] + ct * a[1]
    xhat_dot_y = ct * y[0] + st * y[1]
    cp = (kp ** 2 / omega ** 2) * np.exp(1j * np.pi / 4) / math.sqrt(8 * np.pi * kp)
    cs = (ks ** 2 / omega ** 2) * np.exp(1j * np.pi / 4) / math.sqrt(8 * np.pi * ks)
    p = cp * np.exp(-1j * kp * xhat_dot_y) * xhat_dot_a
    s = cs * np.exp(-1j * ks * xhat_dot_y) * xperp_dot_a
    return p, s
