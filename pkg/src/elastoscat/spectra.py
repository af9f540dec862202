"""Closed-form spectral systems of the rigid-disk far-field operator.

For each angular mode n the generalized eigenvalue problem
``J_n X = lambda H_n X`` (mode matrices from :mod:`elastoscat.disk`) is
solved in closed form.  With ``G`` the Wronskian-type bracket

    G = n^2 (J_n(t_s) Y_n(t_p) - J_n(t_p) Y_n(t_s))
        + t_p t_s (J'_n(t_p) Y'_n(t_s) - J'_n(t_s) Y'_n(t_p)),

the eigenvector ratio sigma = X2/X1 satisfies sigma^2 + beta sigma + 1 = 0
with beta = i pi G / (2 n).  Since G is real, sigma = i s with s real
solving s^2 + b s - 1 = 0, b = pi G / (2 n).  The pair is labeled so that
``|sigma_1| <= 1 <= |sigma_2|``; asymptotically sigma_1 ~ -i (t_p/t_s)^n and
sigma_2 ~ +i (t_s/t_p)^n.  The eigenvalues are

    lambda_sigma = Nr / (Nr + i Ni),
    Nr = t_p J'_n(t_p) + n s J_n(t_s),   Ni = t_p Y'_n(t_p) + n s Y_n(t_s),

and the far-field operator eigenvalue is sqrt(8 pi / omega) i lambda_sigma
with eigenfunction (sqrt(k_p) X1 xhat + sqrt(k_s) X2 xperp) e^{i n theta}.

Orders above ``SCALED_ORDER_MIN`` are evaluated in log-scaled arithmetic;
eigenvalues there can fall far below the double range, so the log form
``log_lambda_f`` is the authoritative one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .medium import ElasticMedium
from .specfun import (LogScaledComplex, bessel_j, bessel_j_scaled, bessel_y,
                      bessel_y_scaled, cyl_derivative)

__all__ = [
    "DiskSpectralPair",
    "PSSpectralPair",
    "beta_n",
    "sigma_pair",
    "disk_eigensystem",
    "ps_spectra",
    "translated_spectra",
    "eigenfunction_channels",
    "ps_eigenfunction",
    "spectra_table",
    "save_spectra",
]

SCALED_ORDER_MIN = 41  # orders >= this run in the log domain

_SQRT1_2 = math.sqrt(0.5)


@dataclass(frozen=True)
class DiskSpectralPair:
    """One eigenpair of the far-field operator of a rigid disk.

    ``sigma`` is the eigenvector ratio X2/X1 (None for the shear-polarized
    n = 0 pair, whose eigenvector is (0, 1)).  ``lambda_f`` may underflow to
    zero for large n; ``log_lambda_f`` never does.  ``center`` translates the
    eigenfunction by phase factors only (eigenvalues are unchanged).
    """

    n: int
    j: int
    sigma: complex | None
    lambda_sigma: complex
    lambda_f: complex
    log_lambda_f: LogScaledComplex
    x: tuple[complex, complex]
    radius: float
    center: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class PSSpectralPair:
    """Mode-n spectral data of the single-channel (P or S) far-field operator.

    ``eta`` is the eigenvalue of the projected operator; ``lambda_sharp`` is
    the associated eigenvalue |Re eta| + |Im eta| of its (ReF,ImF)-positive
    combination, which never vanishes away from interior resonances.
    """

    n: int
    channel: str
    eta: complex
    log_eta: LogScaledComplex
    lambda_sharp: float
    log_lambda_sharp: float
    radius: float
    center: tuple[float, float] = (0.0, 0.0)


def _values_double(n: int, t: float):
    j = bessel_j(n, t)
    jp = cyl_derivative("J", n, t)
    y = bessel_y(n, t)
    yp = cyl_derivative("Y", n, t)
    return j, jp, y, yp


def _values_scaled(n: int, t: float):
    j, jp = bessel_j_scaled(n, t)
    y, yp = bessel_y_scaled(n, t)
    return j, jp, y, yp


def _bracket_b(n: int, tp: float, ts: float, scaled: bool):
    """b = pi G / (2 n) in plain float or log-scaled form."""
    if scaled:
        jp_, jpp = bessel_j_scaled(n, tp)
        js_, jsp = bessel_j_scaled(n, ts)
        yp_, ypp = bessel_y_scaled(n, tp)
        ys_, ysp = bessel_y_scaled(n, ts)
        g = (js_ * yp_ - jp_ * ys_) * (n * n) + (jpp * ysp - jsp * ypp) * (tp * ts)
        return g * (math.pi / (2 * n))
    jp_, jpp, yp_, ypp = _values_double(n, tp)
    js_, jsp, ys_, ysp = _values_double(n, ts)
    g = n * n * (js_ * yp_ - jp_ * ys_) + tp * ts * (jpp * ysp - jsp * ypp)
    return math.pi * g / (2 * n)


def _roots_double(b: float) -> tuple[float, float]:
    """Stable roots (s_small, s_big) of s^2 + b s - 1 = 0, |s_small| <= 1."""
    root = math.hypot(b, 2.0)
    if b > 0:
        s_small = 2.0 / (root + b)
    else:
        s_small = -2.0 / (root - b)
    return s_small, -1.0 / s_small


def _roots_scaled(b: LogScaledComplex) -> tuple[LogScaledComplex, LogScaledComplex]:
    root = (b * b + 4.0).sqrt()
    if b.real_sign > 0:
        s_small = 2.0 / (root + b)
    else:
        s_small = -(2.0 / (root - b))
    return s_small, -(1.0 / s_small)


def beta_n(n: int, t_p: float, t_s: float) -> complex:
    """Coefficient of the eigenvector-ratio quadratic sigma^2 + beta sigma + 1 = 0.

    Purely imaginary for real arguments.  Rejects n = 0, where the mode
    matrices decouple and the quadratic degenerates.
    """
    if n == 0:
        raise ValueError("beta is undefined at n = 0 (decoupled mode)")
    if abs(n) >= SCALED_ORDER_MIN:
        b = _bracket_b(n, t_p, t_s, scaled=True)
        return 1j * b.to_complex()
    return 1j * _bracket_b(n, t_p, t_s, scaled=False)


def sigma_pair(n: int, t_p: float, t_s: float) -> tuple[complex, complex]:
    """Eigenvector ratios (sigma_1, sigma_2), product 1, |sigma_1| <= |sigma_2|."""
    if n == 0:
        raise ValueError("sigma is undefined at n = 0 (decoupled mode)")
    if abs(n) >= SCALED_ORDER_MIN:
        b = _bracket_b(n, t_p, t_s, scaled=True)
        s1, s2 = _roots_scaled(b)
        return 1j * s1.to_complex(), 1j * s2.to_complex()
    b = _bracket_b(n, t_p, t_s, scaled=False)
    s1, s2 = _roots_double(b)
    return complex(0.0, s1), complex(0.0, s2)


def _lambda_pref(medium: ElasticMedium) -> float:
    return math.sqrt(8 * math.pi / medium.omega)


def _x_from_s(s: float) -> tuple[complex, complex]:
    h = math.hypot(1.0, s)
    return complex(1.0 / h), complex(0.0, s / h)


def _pair_from_s_double(n, j, s, tp, ts, radius, medium) -> DiskSpectralPair:
    jp_, jpp, yp_, ypp = _values_double(n, tp)
    js_, jsp, ys_, ysp = _values_double(n, ts)
    nr = tp * jpp + n * s * js_
    ni = tp * ypp + n * s * ys_
    lam_sigma = nr / (nr + 1j * ni)
    lam_f = _lambda_pref(medium) * 1j * lam_sigma
    return DiskSpectralPair(
        n=n, j=j, sigma=complex(0.0, s), lambda_sigma=complex(lam_sigma),
        lambda_f=complex(lam_f),
        log_lambda_f=LogScaledComplex.from_complex(lam_f),
        x=_x_from_s(s), radius=radius)


def _pair_from_s_scaled(n, j, s: LogScaledComplex, tp, ts, radius, medium) -> DiskSpectralPair:
    jp_, jpp = bessel_j_scaled(n, tp)
    js_, jsp = bessel_j_scaled(n, ts)
    yp_, ypp = bessel_y_scaled(n, tp)
    ys_, ysp = bessel_y_scaled(n, ts)
    nr = jpp * tp + s * js_ * n
    ni = ypp * tp + s * ys_ * n
    lam_sigma = nr / (nr + ni * 1j)
    log_lam_f = lam_sigma * (1j * _lambda_pref(medium))
    s_val = s.to_complex().real if s.log_magnitude < 700 else math.copysign(math.inf, s.real_sign)
    if math.isinf(s_val):
        x = (complex(0.0), complex(0.0, s.real_sign))
    else:
        x = _x_from_s(s_val)
    return DiskSpectralPair(
        n=n, j=j, sigma=complex(0.0, s_val) if not math.isinf(s_val) else None,
        lambda_sigma=lam_sigma.to_complex(),
        lambda_f=log_lam_f.to_complex(),
        log_lambda_f=log_lam_f,
        x=x, radius=radius)


@lru_cache(maxsize=262144)
def disk_eigensystem(n: int, radius: float, medium: ElasticMedium
                     ) -> tuple[DiskSpectralPair, DiskSpectralPair]:
    """Both eigenpairs of the far-field operator at mode n (any integer).

    Pure in its arguments and memoized; probe-disk sweeps reuse the spectra
    across centers, which only shift the eigenfunctions by phases.
    """
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    tp = medium.k_p * radius
    ts = medium.k_s * radius
    pref = _lambda_pref(medium)
    if n == 0:
        # decoupled: diagonal mode matrices, eigenvectors (1,0) and (0,1)
        pairs = []
        for j, (t, sig) in enumerate([(tp, 0j), (ts, None)], start=1):
            num = t * cyl_derivative("J", 0, t)
            den = num + 1j * t * cyl_derivative("Y", 0, t)
            lam_sigma = num / den
            lam_f = pref * 1j * lam_sigma
            x = (1.0 + 0j, 0j) if j == 1 else (0j, 1.0 + 0j)
            pairs.append(DiskSpectralPair(
                n=0, j=j, sigma=sig, lambda_sigma=complex(lam_sigma),
                lambda_f=complex(lam_f),
                log_lambda_f=LogScaledComplex.from_complex(lam_f),
                x=x, radius=radius))
        return pairs[0], pairs[1]
    if abs(n) >= SCALED_ORDER_MIN:
        b = _bracket_b(n, tp, ts, scaled=True)
        s1, s2 = _roots_scaled(b)
        return (_pair_from_s_scaled(n, 1, s1, tp, ts, radius, medium),
                _pair_from_s_scaled(n, 2, s2, tp, ts, radius, medium))
    b = _bracket_b(n, tp, ts, scaled=False)
    s1, s2 = _roots_double(b)
    p1 = _pair_from_s_double(n, 1, s1, tp, ts, radius, medium)
    p2 = _pair_from_s_double(n, 2, s2, tp, ts, radius, medium)
    if not (math.isfinite(abs(p1.lambda_sigma)) and math.isfinite(abs(p2.lambda_sigma))):
        # double path overflowed (large |Y|); redo in the log domain
        bs = _bracket_b(n, tp, ts, scaled=True)
        s1s, s2s = _roots_scaled(bs)
        return (_pair_from_s_scaled(n, 1, s1s, tp, ts, radius, medium),
                _pair_from_s_scaled(n, 2, s2s, tp, ts, radius, medium))
    return p1, p2


def _sigma_matrix_entries(n: int, tp: float, ts: float, scaled: bool):
    """(Sigma_11, Sigma_22) of H_n^-1 J_n, as complex or log-scaled values."""
    if scaled:
        jp_, jpp = bessel_j_scaled(n, tp)
        js_, jsp = bessel_j_scaled(n, ts)
        yp_, ypp = bessel_y_scaled(n, tp)
        ys_, ysp = bessel_y_scaled(n, ts)
        hp_ = jp_ + yp_ * 1j
        hpp = jpp + ypp * 1j
        hs_ = js_ + ys_ * 1j
        hsp = jsp + ysp * 1j
        det = hpp * hsp * (tp * ts) - hp_ * hs_ * (n * n)
        s11 = (jpp * hsp * (tp * ts) - jp_ * hs_ * (n * n)) / det
        s22 = (hpp * jsp * (tp * ts) - hp_ * js_ * (n * n)) / det
        return s11, s22
    jp_, jpp, yp_, ypp = _values_double(n, tp)
    js_, jsp, ys_, ysp = _values_double(n, ts)
    hp_, hpp = jp_ + 1j * yp_, jpp + 1j * ypp
    hs_, hsp = js_ + 1j * ys_, jsp + 1j * ysp
    det = tp * ts * hpp * hsp - n * n * hp_ * hs_
    s11 = (tp * ts * jpp * hsp - n * n * jp_ * hs_) / det
    s22 = (tp * ts * hpp * jsp - n * n * hp_ * js_) / det
    return s11, s22


@lru_cache(maxsize=262144)
def ps_spectra(n: int, radius: float, medium: ElasticMedium
               ) -> tuple[PSSpectralPair, PSSpectralPair]:
    """Mode-n spectra of the P- and S-channel operators of the disk (memoized)."""
    if radius <= 0:
        raise ValueError(f"radius must be > 0, got {radius}")
    tp = medium.k_p * radius
    ts = medium.k_s * radius
    scaled = abs(n) >= SCALED_ORDER_MIN
    s11, s22 = _sigma_matrix_entries(n, tp, ts, scaled)
    if not scaled:
        if not (math.isfinite(abs(s11)) and math.isfinite(abs(s22))):
            s11, s22 = _sigma_matrix_entries(n, tp, ts, True)
            scaled = True
    out = []
    for channel, entry in (("p", s11), ("s", s22)):
        k = medium.wavenumber(channel)
        pref = math.sqrt(2 / (math.pi * k)) * cmath.exp(1j * math.pi / 4) * 1j
        if scaled:
            log_eta = entry * pref
        else:
            log_eta = LogScaledComplex.from_complex(entry * pref)
        eta = log_eta.to_complex()
        ph = log_eta.phase_factor
        fold = abs(ph.real) + abs(ph.imag)
        log_sharp = (log_eta.log_magnitude + math.log(fold)
                     if not log_eta.is_zero else -math.inf)
        sharp = math.exp(log_sharp) if log_sharp < 709 else math.inf
        out.append(PSSpectralPair(
            n=int(n), channel=channel, eta=eta, log_eta=log_eta,
            lambda_sharp=sharp, log_lambda_sharp=log_sharp, radius=radius))
    return out[0], out[1]


def translated_spectra(pair, z):
    """Same spectral data for the disk moved to center z (eigenvalues unchanged)."""
    z = (float(z[0]), float(z[1]))
    return replace(pair, center=z)


def eigenfunction_channels(pair: DiskSpectralPair, theta, medium: ElasticMedium):
    """P/S channel samples of the (possibly translated) vector eigenfunction."""
    theta = np.asarray(theta, dtype=float)
    kp, ks = medium.k_p, medium.k_s
    zx = pair.center[0] * np.cos(theta) + pair.center[1] * np.sin(theta)
    mode = np.exp(1j * pair.n * theta)
    p = math.sqrt(kp) * pair.x[0] * np.exp(-1j * kp * zx) * mode
    s = math.sqrt(ks) * pair.x[1] * np.exp(-1j * ks * zx) * mode
    return p, s


def ps_eigenfunction(pair: PSSpectralPair, theta, medium: ElasticMedium):
    """Samples of the scalar eigenfunction e^{i n theta} e^{-i k_a z.xhat}."""
    theta = np.asarray(theta, dtype=float)
    k = medium.wavenumber(pair.channel)
    zx = pair.center[0] * np.cos(theta) + pair.center[1] * np.sin(theta)
    return np.exp(1j * pair.n * theta) * np.exp(-1j * k * zx)


def spectra_table(radius: float, medium: ElasticMedium, n_max: int) -> str:
    """Text table of the far-field eigenpairs for |n| <= n_max.

    Columns: n, j, Re lambda, Im lambda, log|lambda|, Re sigma, Im sigma
    (6 significant digits; sigma is nan for the decoupled n = 0 shear pair).
    """
    lines = ["n,j,re_lambda,im_lambda,log_abs_lambda,re_sigma,im_sigma"]
    for n in range(-n_max, n_max + 1):
        for pair in disk_eigensystem(n, radius, medium):
            sig = pair.sigma if pair.sigma is not None else complex(math.nan, math.nan)
            lines.append(
                f"{pair.n},{pair.j},{pair.lambda_f.real:.6g},{pair.lambda_f.imag:.6g},"
                f"{pair.log_lambda_f.log_magnitude:.6g},{sig.real:.6g},{sig.imag:.6g}")
    return "\n".join(lines) + "\n"


def save_spectra(path, radius: float, medium: ElasticMedium, n_max: int) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(spectra_table(radius, medium, n_max))
