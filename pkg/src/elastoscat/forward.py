"""Synthetic far-field data: analytic disks and a fundamental-solutions solver.

Polygonal rigid scatterers are handled by the method of fundamental
solutions: point sources on a shrunk, corner-rounded copy of the boundary,
collocation of the zero-displacement condition on the boundary itself with
points graded toward the corners, and a ridge-regularized normal-equation
solve.  The superposition satisfies the elastic system exactly, so the
boundary residual at held-out points is the whole error indicator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .datasets import FarFieldData, FarFieldMatrixData, apply_noise, uniform_angles
from .disk import farfield_channels, farfield_matrix_grid
from .medium import (Direction, ElasticMedium, PlaneWaveSpec, kupradze_matrix,
                     plane_wave)

__all__ = [
    "DiskTarget",
    "PolygonScatterer",
    "MFSConfig",
    "MFSSolution",
    "MFSConvergenceError",
    "regular_polygon",
    "mfs_solve",
    "mfs_farfield",
    "generate_dataset",
]


@dataclass(frozen=True)
class DiskTarget:
    """Rigid disk target handled by the analytic series solution."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"radius must be > 0, got {self.radius}")


class MFSConvergenceError(RuntimeError):
    """Boundary residual of the fundamental-solutions fit exceeds the threshold."""

    def __init__(self, residual, threshold, diagnostics):
        super().__init__(
            f"MFS boundary residual {residual:.3e} exceeds threshold {threshold:.1e} "
            f"({diagnostics})")
        self.residual = residual
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class PolygonScatterer:
    """Convex polygon with counterclockwise vertices (K, 2)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise ValueError(f"need at least 3 planar vertices, got shape {v.shape}")
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(edges, axis=1)
        if np.any(lengths < 1e-12 * lengths.max()):
            raise ValueError("degenerate (zero-length) polygon edge")
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] \
            - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        if np.any(cross <= 0):
            raise ValueError("vertices must describe a convex counterclockwise polygon")
        object.__setattr__(self, "vertices", v)

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
        area = cross.sum() / 2.0
        return ((v + w) * cross[:, None]).sum(axis=0) / (6.0 * area)

    @property
    def inradius(self) -> float:
        """Distance from the centroid to the nearest edge (inscribed-circle proxy)."""
        c = self.centroid
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        e = w - v
        n = np.stack([e[:, 1], -e[:, 0]], axis=1)  # outward for CCW
        n /= np.linalg.norm(n, axis=1)[:, None]
        return float(np.min(np.abs((c[None, :] - v) * n).sum(axis=1)))

    def boundary_points(self, count: int, grading: float = 2.0) -> np.ndarray:
        """Collocation points on the boundary, graded toward the corners.

        Per edge, midpoint-offset parameters are pushed to both ends with the
        given polynomial exponent; corners themselves are never sampled.
        """
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        lengths = np.linalg.norm(w - v, axis=1)
        counts = np.maximum(1, np.round(count * lengths / lengths.sum()).astype(int))
        while counts.sum() > count:
            counts[np.argmax(counts)] -= 1
        while counts.sum() < count:
            counts[np.argmin(counts)] += 1
        pts = []
        for a, b, ne in zip(v, w, counts):
            u = (np.arange(ne) + 0.5) / ne
            xi = 2 * u - 1
            t = 0.5 * (1 + np.sign(xi) * np.abs(xi) ** grading)
            pts.append(a[None, :] + t[:, None] * (b - a)[None, :])
        return np.vstack(pts)

    def source_curve(self, count: int, retreat: float = 0.7,
                     rounding: float = 0.05) -> np.ndarray:
        """Point sources on the shrunk, corner-filleted copy of the boundary."""
        if not 0 < retreat < 1:
            raise ValueError(f"retreat must lie in (0, 1), got {retreat}")
        c = self.centroid
        v = c[None, :] + retreat * (self.vertices - c[None, :])
        rho = rounding * self.inradius * retreat
        k = len(v)
        segs = []  # list of (kind, data, length)
        t_pts = []
        for i in range(k):
            a, b_, d = v[i - 1], v[i], v[(i + 1) % k]
            u1 = (b_ - a) / np.linalg.norm(b_ - a)
            u2 = (d - b_) / np.linalg.norm(d - b_)
            cosψ = float(np.clip(u1 @ u2, -1.0, 1.0))
            psi = math.acos(cosψ)               # exterior (turn) angle
            delta = rho * math.tan(psi / 2.0)
            t1 = b_ - delta * u1
            t2 = b_ + delta * u2
            n1 = np.array([-u1[1], u1[0]])      # interior is left of travel
            center = t1 + rho * n1
            t_pts.append((t1, t2, center, psi))
        for i in range(k):
            t2_prev = t_pts[i - 1][1]
            t1_here, _, center, psi = t_pts[i]
            seg = t1_here - t2_prev
            segs.append(("line", (t2_prev, t1_here), float(np.linalg.norm(seg))))
            a0 = math.atan2(*(t_pts[i][0] - center)[::-1])
            segs.append(("arc", (center, a0, psi), rho * psi))
        total = sum(s[2] for s in segs)
        targets = (np.arange(count) + 0.5) / count * total
        pts = np.empty((count, 2))
        acc = 0.0
        si = 0
        for j, s_target in enumerate(targets):
            while acc + segs[si][2] < s_target:
                acc += segs[si][2]
                si += 1
            kind, dat, ln = segs[si]
            local = (s_target - acc) / ln if ln > 0 else 0.0
            if kind == "line":
                a, b_ = dat
                pts[j] = a + local * (b_ - a)
            else:
                center, a0, psi = dat
                ang = a0 + local * psi
                pts[j] = center + rho * np.array([math.cos(ang), math.sin(ang)])
        return pts


def regular_polygon(radius: float, n_vertices: int,
                    center=(0.0, 0.0)) -> PolygonScatterer:
    """Regular polygon inscribed in the circle of the given radius."""
    ang = 2 * np.pi * np.arange(n_vertices) / n_vertices
    v = np.stack([center[0] + radius * np.cos(ang),
                  center[1] + radius * np.sin(ang)], axis=1)
    return PolygonScatterer(v)


@dataclass(frozen=True)
class MFSConfig:
    """Budget and regularization of the fundamental-solutions solve."""

    n_sources: int = 96
    n_collocation: int | None = None  # defaults to 2 * n_sources
    retreat: float = 0.7
    regularization: float | None = None  # defaults to 1e-12 * ||A||^2
    residual_threshold: float | None = 1e-4

    def __post_init__(self):
        if self.n_sources < 8:
            raise ValueError("need at least 8 sources")
        nc = self.collocation_count
        if nc < 2 * self.n_sources:
            raise ValueError("n_collocation must be at least 2 * n_sources")
        if not 0 < self.retreat < 1:
            raise ValueError("retreat must lie in (0, 1)")

    @property
    def collocation_count(self) -> int:
        return 2 * self.n_sources if self.n_collocation is None else self.n_collocation


@dataclass
class MFSSolution:
    """Fitted source strengths with their geometry and residual diagnostics."""

    strengths: np.ndarray      # (n_sources, 2) complex
    sources: np.ndarray        # (n_sources, 2)
    boundary_residual: float   # relative RMS at held-out boundary points
    medium: ElasticMedium


def _mfs_system(scat: PolygonScatterer, cfg: MFSConfig, medium: ElasticMedium):
    coll = scat.boundary_points(cfg.collocation_count)
    src = scat.source_curve(cfg.n_sources, retreat=cfg.retreat)
    gram = kupradze_matrix(coll, src, medium)          # (Nc, Ns, 2, 2)
    nc, ns = gram.shape[:2]
    a = gram.transpose(0, 2, 1, 3).reshape(2 * nc, 2 * ns)
    return coll, src, a


def _ridge_factor(a: np.ndarray, regularization: float | None):
    norm2 = np.linalg.norm(a, 2)
    lam = (1e-12 * norm2 ** 2) if regularization is None else float(regularization)
    ata = a.conj().T @ a + lam * np.eye(a.shape[1])
    return scipy.linalg.cho_factor(ata)


def _validate(scat, src, strengths, wave, medium, n_check=400):
    check = scat.boundary_points(n_check, grading=1.0)
    gram = kupradze_matrix(check, src, medium)  # (n, Ns, 2, 2)
    us = np.einsum("nqij,qj->ni", gram, strengths)
    ui = plane_wave(check, wave, medium)
    num = np.sqrt(np.mean(np.abs(us + ui) ** 2))
    den = np.sqrt(np.mean(np.abs(ui) ** 2))
    return float(num / den)


def mfs_solve(scat: PolygonScatterer, wave: PlaneWaveSpec, cfg: MFSConfig,
              medium: ElasticMedium) -> MFSSolution:
    """Fit interior point sources to the zero-displacement boundary condition."""
    coll, src, a = _mfs_system(scat, cfg, medium)
    factor = _ridge_factor(a, cfg.regularization)
    rhs = -plane_wave(coll, wave, medium).reshape(-1)
    c = scipy.linalg.cho_solve(factor, a.conj().T @ rhs).reshape(-1, 2)
    resid = _validate(scat, src, c, wave, medium)
    if cfg.residual_threshold is not None and resid > cfg.residual_threshold:
        raise MFSConvergenceError(resid, cfg.residual_threshold, {
            "n_sources": cfg.n_sources,
            "n_collocation": cfg.collocation_count,
            "retreat": cfg.retreat,
        })
    return MFSSolution(strengths=c, sources=src, boundary_residual=resid,
                       medium=medium)


def mfs_farfield(solution: MFSSolution, theta) -> tuple[np.ndarray, np.ndarray]:
    """P/S far-field channels of the fitted source superposition."""
    theta = np.asarray(theta, dtype=float)
    m = solution.medium
    kp, ks, omega = m.k_p, m.k_s, m.omega
    ct, st = np.cos(theta), np.sin(theta)
    ys = solution.sources
    cs_ = solution.strengths
    xy = ct[:, None] * ys[None, :, 0] + st[:, None] * ys[None, :, 1]  # (M, Ns)
    xa = ct[:, None] * cs_[None, :, 0] + st[:, None] * cs_[None, :, 1]
    xpa = -st[:, None] * cs_[None, :, 0] + ct[:, None] * cs_[None, :, 1]
    fp = (kp ** 2 / omega ** 2) * np.exp(1j * np.pi / 4) / math.sqrt(8 * np.pi * kp)
    fs = (ks ** 2 / omega ** 2) * np.exp(1j * np.pi / 4) / math.sqrt(8 * np.pi * ks)
    p = fp * np.sum(np.exp(-1j * kp * xy) * xa, axis=1)
    s = fs * np.sum(np.exp(-1j * ks * xy) * xpa, axis=1)
    return p, s


def _disk_matrix(target: DiskTarget, medium: ElasticMedium, m: int,
                 truncation: int | None) -> FarFieldMatrixData:
    theta = uniform_angles(m)
    mats = farfield_matrix_grid(theta, target.radius, medium, truncation)  # (m,2,2)
    idx = (np.arange(m)[:, None] - np.arange(m)[None, :]) % m
    pp = mats[idx, 0, 0]
    ps = mats[idx, 0, 1]
    sp = mats[idx, 1, 0]
    ss = mats[idx, 1, 1]
    z = np.asarray(target.center, dtype=float)
    if np.any(z != 0):
        kp, ks = medium.k_p, medium.k_s
        zx = z[0] * np.cos(theta) + z[1] * np.sin(theta)
        op = np.exp(-1j * kp * zx)[:, None]
        os_ = np.exp(-1j * ks * zx)[:, None]
        ip = np.exp(1j * kp * zx)[None, :]
        is_ = np.exp(1j * ks * zx)[None, :]
        pp = op * pp * ip
        ps = op * ps * is_
        sp = os_ * sp * ip
        ss = os_ * ss * is_
    return FarFieldMatrixData(pp=pp, ps=ps, sp=sp, ss=ss)


def _polygon_matrix(scat: PolygonScatterer, medium: ElasticMedium, m: int,
                    cfg: MFSConfig) -> FarFieldMatrixData:
    theta = uniform_angles(m)
    coll, src, a = _mfs_system(scat, cfg, medium)
    factor = _ridge_factor(a, cfg.regularization)
    pp = np.zeros((m, m), complex)
    ps = np.zeros((m, m), complex)
    sp = np.zeros((m, m), complex)
    ss = np.zeros((m, m), complex)
    worst = 0.0
    for l, th_d in enumerate(theta):
        for beta, (c_p, c_s) in (("p", (1.0, 0.0)), ("s", (0.0, 1.0))):
            wave = PlaneWaveSpec(Direction(th_d), c_p, c_s)
            rhs = -plane_wave(coll, wave, medium).reshape(-1)
            c = scipy.linalg.cho_solve(factor, a.conj().T @ rhs).reshape(-1, 2)
            sol = MFSSolution(c, src, 0.0, medium)
            p, s = mfs_farfield(sol, theta)
            if beta == "p":
                pp[:, l] = p
                sp[:, l] = s
            else:
                ps[:, l] = p
                ss[:, l] = s
            worst = max(worst, _validate(scat, src, c, wave, medium, n_check=120))
    if cfg.residual_threshold is not None and worst > cfg.residual_threshold:
        raise MFSConvergenceError(worst, cfg.residual_threshold,
                                  {"n_sources": cfg.n_sources, "incident_count": 2 * m})
    return FarFieldMatrixData(pp=pp, ps=ps, sp=sp, ss=ss)


def generate_dataset(target, medium: ElasticMedium, m: int, problem: str,
                     theta_d: float = 0.0, c_p: complex = 1.0, c_s: complex = 0.0,
                     noise_level: float = 0.0, seed: int = 0,
                     mfs: MFSConfig | None = None,
                     truncation: int | None = None):
    """Far-field data for a disk or polygon target.

    ``problem`` is one of IP-F / IP-P / IP-S (single incident wave) or
    ``matrix`` (full multistatic record over the same grid).  Disk targets
    use the analytic series, polygons the MFS solver.  Noise is
    multiplicative complex Gaussian at the given relative level,
    deterministic under the seed.
    """
    theta = uniform_angles(m)
    if problem == "matrix":
        if isinstance(target, DiskTarget):
            data = _disk_matrix(target, medium, m, truncation)
        elif isinstance(target, PolygonScatterer):
            data = _polygon_matrix(target, medium, m, mfs or MFSConfig())
        else:
            raise TypeError(f"unsupported target {type(target)!r}")
        return apply_noise(data, noise_level, seed)
    if problem not in ("IP-F", "IP-P", "IP-S"):
        raise ValueError(f"unknown problem {problem!r}")
    if problem == "IP-P":
        c_p, c_s = 1.0, 0.0
    elif problem == "IP-S":
        c_p, c_s = 0.0, 1.0
    wave = PlaneWaveSpec(Direction(theta_d), c_p, c_s)
    if isinstance(target, DiskTarget):
        p, s = farfield_channels(theta, wave, target.radius, medium,
                                 truncation=truncation, center=target.center)
    elif isinstance(target, PolygonScatterer):
        sol = mfs_solve(target, wave, mfs or MFSConfig(), medium)
        p, s = mfs_farfield(sol, theta)
    else:
        raise TypeError(f"unsupported target {type(target)!r}")
    kwargs = dict(theta=theta, theta_d=theta_d, c_p=complex(c_p), c_s=complex(c_s))
    if problem == "IP-F":
        data = FarFieldData(problem="IP-F", p=p, s=s, **kwargs)
    elif problem == "IP-P":
        data = FarFieldData(problem="IP-P", p=p, **kwargs)
    else:
        data = FarFieldData(problem="IP-S", s=s, **kwargs)
    return apply_noise(data, noise_level, seed)
