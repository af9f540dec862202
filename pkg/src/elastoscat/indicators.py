"""Single-measurement inclusion tests against translated probe disks.

For a probe disk B_R(z) the far-field data are expanded against the
closed-form eigenfunctions of the disk operator (translated by phase
factors only) and weighted by the reciprocal eigenvalue moduli.  The exact
series is finite precisely when the scatterer is contained in the probe
disk; at finite truncation every sum is finite, so containment is decided
by the sign of the tail growth rate, fitted over the top third of modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import FarFieldData
from .medium import ElasticMedium
from .specfun import bessel_j, cyl_derivative
from .spectra import disk_eigensystem, ps_spectra

__all__ = [
    "TestDisk",
    "IndicatorValue",
    "InadmissibleDiskError",
    "one_wave_indicator",
    "one_wave_indicator_channel",
    "range_test",
    "default_mode_count",
]


class InadmissibleDiskError(ValueError):
    """Probe disk sits (numerically) at an interior resonance of the frequency."""


@dataclass(frozen=True)
class TestDisk:
    """Probe disk: center and radius."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")


@dataclass(frozen=True)
class IndicatorValue:
    """Truncated indicator series in log form.

    ``log_value`` is the natural log of the truncated sum (-inf for zero
    data), ``tail_slope`` the least-squares growth rate of the log mode
    terms over the top third of the signal-carrying orders: negative slopes
    classify the scatterer as contained in the probe disk.  ``log_terms[k]``
    aggregates the modes with |n| = k; ``n_signal`` is the last order whose
    expansion coefficients sit above the data noise floor (beyond it the
    reciprocal-eigenvalue weights amplify pure noise, so those orders are
    excluded from the slope fit).
    """

    log_value: float
    n_used: int
    tail_slope: float
    log_terms: tuple[float, ...]
    n_signal: int

    @property
    def contained(self) -> bool:
        return self.tail_slope < 0


def default_mode_count(m: int, disk: TestDisk, medium: ElasticMedium) -> int:
    """Truncation min(M/4, ceil(k_s R) + 15): aliasing-safe, into the tail regime."""
    return min(m // 4, int(math.ceil(medium.k_s * disk.radius)) + 15)


def _check_admissible(disk: TestDisk, medium: ElasticMedium, n_max: int) -> None:
    tp = medium.k_p * disk.radius
    ts = medium.k_s * disk.radius
    worst = math.inf
    for n in range(0, n_max + 1):
        a = tp * cyl_derivative("J", n, tp) * ts * cyl_derivative("J", n, ts)
        b = n * n * bessel_j(n, tp) * bessel_j(n, ts)
        # |a - b| relative to the addends: ~(t^2/n^2) generically, 0 at a resonance
        worst = min(worst, abs(a - b) / (abs(a) + abs(b) + 1e-300))
    if worst < 1e-10:
        raise InadmissibleDiskError(
            f"probe disk R={disk.radius} at omega={medium.omega} sits at an "
            f"interior resonance (normalized |det| = {worst:.2e})")


def _fft_all(f: np.ndarray) -> np.ndarray:
    """Trapezoid inner products <f, e^{i n theta}> for all DFT frequencies."""
    m = len(f)
    return (2 * math.pi / m) * np.fft.fft(f)


def _pick(hat: np.ndarray, n_max: int) -> np.ndarray:
    return hat[np.arange(-n_max, n_max + 1) % len(hat)]


def _noise_floor(hat: np.ndarray) -> float:
    """Median coefficient modulus over the upper half of the frequency band.

    Those frequencies lie beyond the truncation (aliasing guard keeps
    n <= M/4), so for band-limited-decaying far fields they sample the
    noise: quadrature roundoff for clean data, the perturbation level for
    noisy data.
    """
    m = len(hat)
    return float(np.median(np.abs(hat[m // 4 + 1:m // 2 + 1])))


def _signal_extent(hats: list[np.ndarray], n_max: int) -> int:
    """Last order where every signal-carrying channel still clears its floor.

    Beyond a channel's floor crossing, the reciprocal-eigenvalue weights
    amplify that channel's noise and poison the aggregated mode terms, so
    the slope window ends at the earliest crossing.
    """
    extents = []
    for hat in hats:
        c_abs = np.abs(_pick(hat, n_max))
        by_n = np.maximum(c_abs[n_max:], c_abs[n_max::-1])
        above = np.nonzero(by_n > 10.0 * _noise_floor(hat))[0]
        if len(above):
            extents.append(int(above.max()))
    return min(extents) if extents else n_max


def _tail_slope(log_terms: np.ndarray, n_signal: int) -> float:
    lo = max(1, (2 * n_signal) // 3)
    if n_signal - lo < 1:
        lo = max(1, n_signal - 2)
    ks = np.arange(lo, n_signal + 1, dtype=float)
    vals = log_terms[lo:n_signal + 1]
    good = np.isfinite(vals)
    if good.sum() < 2:
        return -math.inf
    ks, vals = ks[good], vals[good]
    kbar = ks.mean()
    denom = np.sum((ks - kbar) ** 2)
    if denom == 0:
        return -math.inf
    return float(np.sum((ks - kbar) * (vals - vals.mean())) / denom)


def _logsumexp(values: np.ndarray) -> float:
    finite = values[np.isfinite(values)]
    if len(finite) == 0:
        return -math.inf
    top = finite.max()
    return float(top + math.log(np.sum(np.exp(finite - top))))


def _assemble(term_logs: dict[int, list[float]], n_max: int,
              n_signal: int) -> IndicatorValue:
    per_abs_n = np.full(n_max + 1, -math.inf)
    for k in range(n_max + 1):
        per_abs_n[k] = _logsumexp(np.array(term_logs.get(k, [-math.inf])))
    total = _logsumexp(per_abs_n)
    return IndicatorValue(log_value=total, n_used=n_max,
                          tail_slope=_tail_slope(per_abs_n, n_signal),
                          log_terms=tuple(float(v) for v in per_abs_n),
                          n_signal=n_signal)


def one_wave_indicator(data: FarFieldData, disk: TestDisk, medium: ElasticMedium,
                       truncation: int | None = None) -> IndicatorValue:
    """Inclusion indicator from one vector far-field pattern (problem IP-F).

    Sums |<data, eigenfunction>|^2 / |eigenvalue| over modes |n| <= N and
    both polarization branches, accumulated in the log domain.
    """
    if data.problem != "IP-F":
        raise ValueError(f"vector indicator needs IP-F data, got {data.problem}")
    m = data.m
    n_max = default_mode_count(m, disk, medium) if truncation is None else int(truncation)
    if n_max > m // 4:
        raise ValueError(f"truncation {n_max} exceeds M/4 = {m // 4} (aliasing)")
    _check_admissible(disk, medium, n_max)
    kp, ks = medium.k_p, medium.k_s
    z = np.asarray(disk.center, dtype=float)
    zx = z[0] * np.cos(data.theta) + z[1] * np.sin(data.theta)
    # inner products against the translated eigenfunction channels:
    # conj(sqrt(k_a) X_a e^{-i k_a z.xhat} e^{i n theta}) under int f conj(g)
    f_p = data.p * np.exp(-1j * kp * zx).conj() * math.sqrt(kp)
    f_s = data.s * np.exp(-1j * ks * zx).conj() * math.sqrt(ks)
    hat_p, hat_s = _fft_all(f_p), _fft_all(f_s)
    c_p = _pick(hat_p, n_max)
    c_s = _pick(hat_s, n_max)
    n_signal = _signal_extent([hat_p, hat_s], n_max)
    term_logs: dict[int, list[float]] = {}
    for i, n in enumerate(range(-n_max, n_max + 1)):
        for pair in disk_eigensystem(n, disk.radius, medium):
            coef = c_p[i] * np.conj(pair.x[0]) + c_s[i] * np.conj(pair.x[1])
            if coef == 0:
                continue
            log_term = 2 * math.log(abs(coef)) - pair.log_lambda_f.log_magnitude
            term_logs.setdefault(abs(n), []).append(log_term)
    return _assemble(term_logs, n_max, n_signal)


def one_wave_indicator_channel(data: FarFieldData, disk: TestDisk,
                               medium: ElasticMedium, channel: str,
                               truncation: int | None = None) -> IndicatorValue:
    """Inclusion indicator from one scalar channel (problems IP-P / IP-S)."""
    if channel not in ("p", "s"):
        raise ValueError(f"channel must be 'p' or 's', got {channel!r}")
    want = "IP-P" if channel == "p" else "IP-S"
    if data.problem == "IP-F":
        samples = data.p if channel == "p" else data.s
    elif data.problem == want:
        samples = data.p if channel == "p" else data.s
    else:
        raise ValueError(f"channel {channel!r} needs {want} (or IP-F) data, "
                         f"got {data.problem}")
    m = data.m
    n_max = default_mode_count(m, disk, medium) if truncation is None else int(truncation)
    if n_max > m // 4:
        raise ValueError(f"truncation {n_max} exceeds M/4 = {m // 4} (aliasing)")
    _check_admissible(disk, medium, n_max)
    k = medium.wavenumber(channel)
    z = np.asarray(disk.center, dtype=float)
    zx = z[0] * np.cos(data.theta) + z[1] * np.sin(data.theta)
    f = samples * np.exp(-1j * k * zx).conj()
    hat = _fft_all(f)
    coeffs = _pick(hat, n_max)
    n_signal = _signal_extent([hat], n_max)
    term_logs: dict[int, list[float]] = {}
    for i, n in enumerate(range(-n_max, n_max + 1)):
        pair = ps_spectra(n, disk.radius, medium)[0 if channel == "p" else 1]
        coef = coeffs[i]
        if coef == 0:
            continue
        log_term = 2 * math.log(abs(coef)) - pair.log_lambda_sharp
        term_logs.setdefault(abs(n), []).append(log_term)
    return _assemble(term_logs, n_max, n_signal)


def range_test(data: FarFieldData, disk: TestDisk, medium: ElasticMedium,
               truncation: int | None = None) -> IndicatorValue:
    """Extensibility test of a vector pattern past the probe disk.

    Identical series to :func:`one_wave_indicator`; exposed separately
    because the question it answers is whether the data radiates from
    inside the disk, not whether a scatterer is contained.
    """
    return one_wave_indicator(data, disk, medium, truncation)
