"""Discretized far-field operators and the multi-wave factorization indicators.

The circle integrals use the trapezoid rule on the uniform angle grid,
which is spectrally accurate for the periodic integrands appearing here.
The full operator couples the P/S channels through sqrt(k/omega) weights on
the incident type; its single-channel projections feed the (|Re F| + |Im F|)
construction used for the P-only and S-only problems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import FarFieldMatrixData, uniform_angles
from .medium import ElasticMedium, point_source_farfield_grid

__all__ = [
    "OperatorSpectrum",
    "assemble_F",
    "assemble_F_alpha",
    "herglotz_wave",
    "spectral_decomposition",
    "classical_indicator",
]

_KINDS = ("full", "p_sharp", "s_sharp")


@dataclass(frozen=True)
class OperatorSpectrum:
    """Eigenpairs of a discretized far-field operator.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``; columns are
    normalized to unit norm in the quadrature inner product, so Picard sums
    can use them directly.  ``kind`` records full-operator versus sharpened
    single-channel spectra (whose eigenvalues are nonnegative reals).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kind: str
    m: int
    weight: float


def _weights(medium: ElasticMedium) -> tuple[float, float]:
    return (math.sqrt(medium.k_p / medium.omega),
            math.sqrt(medium.k_s / medium.omega))


def assemble_F(data: FarFieldMatrixData, medium: ElasticMedium) -> np.ndarray:
    """Quadrature discretization of the full far-field operator (2M x 2M).

    Block structure [[pp, ps], [sp, ss]] with column weights sqrt(k_beta/omega)
    for incident type beta and the phase e^{-i pi/4}, times the trapezoid
    weight 2 pi / M.
    """
    m = data.m
    w = 2 * math.pi / m
    wp, ws = _weights(medium)
    pref = w * np.exp(-1j * np.pi / 4)
    top = np.hstack([wp * data.pp, ws * data.ps])
    bot = np.hstack([wp * data.sp, ws * data.ss])
    return pref * np.vstack([top, bot])


def assemble_F_alpha(data: FarFieldMatrixData, medium: ElasticMedium,
                     channel: str) -> np.ndarray:
    """Single-channel block (pp or ss) with its weight (M x M)."""
    if channel not in ("p", "s"):
        raise ValueError(f"channel must be 'p' or 's', got {channel!r}")
    m = data.m
    w = 2 * math.pi / m
    wp, ws = _weights(medium)
    if channel == "p":
        return w * np.exp(-1j * np.pi / 4) * wp * data.pp
    return w * np.exp(-1j * np.pi / 4) * ws * data.ss


def herglotz_wave(g_p, g_s, x, medium: ElasticMedium) -> np.ndarray:
    """Superposition of plane waves with density (g_p, g_s) on the angle grid.

    Quadrature version of the weighted circle integral; ``x`` may be a
    single point or an array of points with shape (..., 2).
    """
    if g_p is None and g_s is None:
        raise ValueError("at least one density channel is required")
    g_p = np.zeros_like(g_s) if g_p is None else np.asarray(g_p, dtype=complex)
    g_s = np.zeros_like(g_p) if g_s is None else np.asarray(g_s, dtype=complex)
    if g_p.shape != g_s.shape:
        raise ValueError("g_p and g_s must share a shape")
    m = len(g_p)
    theta = uniform_angles(m)
    w = 2 * math.pi / m
    wp, ws = _weights(medium)
    d = np.stack([np.cos(theta), np.sin(theta)], axis=-1)       # (m, 2)
    dperp = np.stack([-np.sin(theta), np.cos(theta)], axis=-1)
    x = np.asarray(x, dtype=float)
    xd = np.tensordot(x, d.T, axes=([-1], [0]))
    ep = np.exp(1j * medium.k_p * xd)
    es = np.exp(1j * medium.k_s * xd)
    pref = w * np.exp(-1j * np.pi / 4)
    out = pref * (wp * np.tensordot(ep * g_p, d, axes=([-1], [0]))
                  + ws * np.tensordot(es * g_s, dperp, axes=([-1], [0])))
    return out


def _hermitian_abs(a: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(a)
    return (vecs * np.abs(vals)) @ vecs.conj().T


def spectral_decomposition(a: np.ndarray, kind: str = "full",
                           residual_tol: float = 1e-8) -> OperatorSpectrum:
    """Eigendecomposition of the operator matrix, validated by residuals.

    ``full`` decomposes the (near-normal is not assumed) matrix directly;
    the sharp kinds first form |Re A| + |Im A| from Hermitian
    eigendecompositions, yielding a positive semidefinite matrix.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got {a.shape}")
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}, got {kind!r}")
    if kind == "full":
        vals, vecs = np.linalg.eig(a)
        m2 = a.shape[0]
        m = m2 // 2
    else:
        re = (a + a.conj().T) / 2
        im = (a - a.conj().T) / 2j
        sharp = _hermitian_abs(re) + _hermitian_abs(im)
        vals, vecs = np.linalg.eigh(sharp)
        a = sharp
        m = a.shape[0]
    order = np.argsort(-np.abs(vals))
    vals = vals[order]
    vecs = vecs[:, order]
    norm_a = np.linalg.norm(a, 2)
    resid = np.linalg.norm(a @ vecs - vecs * vals, axis=0)
    worst = float(resid.max()) if len(resid) else 0.0
    if worst > residual_tol * max(norm_a, 1e-300):
        raise ArithmeticError(
            f"eigendecomposition residual {worst:.3e} exceeds "
            f"{residual_tol:.1e} * ||A|| = {residual_tol * norm_a:.3e}")
    w = 2 * math.pi / m
    # unit quadrature-norm columns: ||v||_w^2 = w * ||v||_2^2
    vecs = vecs / (math.sqrt(w) * np.linalg.norm(vecs, axis=0))
    return OperatorSpectrum(eigenvalues=vals, eigenvectors=vecs, kind=kind,
                            m=m, weight=w)


def classical_indicator(spectrum: OperatorSpectrum, z, a, medium: ElasticMedium,
                        eps_cut: float | None = None) -> float:
    """Truncated Picard sum of the point-source pattern against the spectrum.

    Finite (small) values flag points inside the scatterer.  Modes with
    |eigenvalue| below ``eps_cut`` (default 1e-12 of the largest) are
    dropped; the tail of the exact series diverges outside and the cut is
    the standard regularization.
    """
    if len(spectrum.eigenvalues) == 0:
        raise ValueError("empty spectrum")
    theta = uniform_angles(spectrum.m)
    z = np.asarray(z, dtype=float)
    a = np.asarray(a, dtype=float)
    p, s = point_source_farfield_grid(theta, z, a, medium)
    if spectrum.kind == "full":
        g = np.concatenate([p, s])
    elif spectrum.kind == "p_sharp":
        g = p
    else:
        g = s
    lam = np.abs(spectrum.eigenvalues)
    cut = (1e-12 if eps_cut is None else float(eps_cut)) * lam.max()
    keep = lam > cut
    coef = spectrum.weight * (g @ spectrum.eigenvectors[:, keep].conj())
    return float(np.sum(np.abs(coef) ** 2 / lam[keep]))
