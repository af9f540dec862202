"""Integer-order cylindrical Bessel, Neumann and Hankel functions on the real line.

The double-precision entry points wrap :mod:`scipy.special`.  Large orders at
small arguments push ``Y_n`` (and ``1/J_n``) past the double range, so the
module also provides log-scaled evaluations built on classical recurrences:
Miller's downward recurrence with series normalization for ``J_n`` and the
upward three-term recurrence for ``Y_n``, both with on-the-fly renormalization.
The two routes are implemented independently and cross-checked in the tests.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy import special as _sp

__all__ = [
    "LogScaledComplex",
    "bessel_j",
    "bessel_y",
    "hankel1",
    "cyl_derivative",
    "bessel_j_scaled",
    "bessel_y_scaled",
    "hankel1_scaled",
]

# renormalize recurrences well before the double limit (~1e308)
_RESCALE = 1e250
_LOG_RESCALE = math.log(_RESCALE)


def _check_arg(t: float, positive: bool = False) -> float:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"argument must be finite, got {t!r}")
    if positive and t <= 0.0:
        raise ValueError(f"argument must be > 0, got {t!r}")
    if t < 0.0:
        raise ValueError(f"argument must be >= 0, got {t!r}")
    return t


@dataclass(frozen=True)
class LogScaledComplex:
    """Complex value stored as ``exp(log_magnitude) * phase_factor``.

    ``phase_factor`` has unit modulus; the zero value is represented by
    ``log_magnitude = -inf``.  Arithmetic never forms the plain value, so
    magnitudes far outside the double range stay exact in the log domain.
    """

    log_magnitude: float
    phase_factor: complex

    ZERO: "LogScaledComplex" = None  # set below

    @staticmethod
    def from_complex(z: complex) -> "LogScaledComplex":
        z = complex(z)
        if z == 0:
            return LogScaledComplex.ZERO
        m = abs(z)
        return LogScaledComplex(math.log(m), z / m)

    @staticmethod
    def from_log(log_magnitude: float, phase_factor: complex = 1.0 + 0j) -> "LogScaledComplex":
        p = complex(phase_factor)
        ap = abs(p)
        if ap == 0.0:
            return LogScaledComplex.ZERO
        return LogScaledComplex(float(log_magnitude) + math.log(ap), p / ap)

    @property
    def is_zero(self) -> bool:
        return self.log_magnitude == -math.inf

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        if self.log_magnitude > 709.0:  # exp would overflow
            scale = math.inf
        else:
            scale = math.exp(self.log_magnitude)
        re, im = self.phase_factor.real, self.phase_factor.imag
        return complex(scale * re if re != 0.0 else 0.0,
                       scale * im if im != 0.0 else 0.0)

    def _coerce(self, other) -> "LogScaledComplex":
        if isinstance(other, LogScaledComplex):
            return other
        return LogScaledComplex.from_complex(other)

    def __mul__(self, other) -> "LogScaledComplex":
        o = self._coerce(other)
        if self.is_zero or o.is_zero:
            return LogScaledComplex.ZERO
        return LogScaledComplex.from_log(self.log_magnitude + o.log_magnitude,
                                         self.phase_factor * o.phase_factor)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogScaledComplex":
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("division by log-scaled zero")
        if self.is_zero:
            return LogScaledComplex.ZERO
        return LogScaledComplex.from_log(self.log_magnitude - o.log_magnitude,
                                         self.phase_factor / o.phase_factor)

    def __rtruediv__(self, other) -> "LogScaledComplex":
        return self._coerce(other) / self

    def __add__(self, other) -> "LogScaledComplex":
        o = self._coerce(other)
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        hi, lo = (self, o) if self.log_magnitude >= o.log_magnitude else (o, self)
        z = hi.phase_factor + lo.phase_factor * math.exp(lo.log_magnitude - hi.log_magnitude)
        if z == 0:
            return LogScaledComplex.ZERO
        return LogScaledComplex.from_log(hi.log_magnitude, z)

    __radd__ = __add__

    def __neg__(self) -> "LogScaledComplex":
        if self.is_zero:
            return self
        return LogScaledComplex(self.log_magnitude, -self.phase_factor)

    def __sub__(self, other) -> "LogScaledComplex":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LogScaledComplex":
        return self._coerce(other) + (-self)

    def conjugate(self) -> "LogScaledComplex":
        return LogScaledComplex(self.log_magnitude, self.phase_factor.conjugate())

    def sqrt(self) -> "LogScaledComplex":
        if self.is_zero:
            return self
        return LogScaledComplex(0.5 * self.log_magnitude, cmath.sqrt(self.phase_factor))

    @property
    def real_sign(self) -> float:
        """Sign of the real part (for values known to be real up to rounding)."""
        if self.is_zero:
            return 0.0
        return math.copysign(1.0, self.phase_factor.real)


LogScaledComplex.ZERO = LogScaledComplex(-math.inf, 1.0 + 0j)


def bessel_j(n: int, t: float) -> float:
    """Bessel function J_n(t) for integer n (any sign), t >= 0."""
    t = _check_arg(t)
    n = int(n)
    if t == 0.0:
        return 1.0 if n == 0 else 0.0
    return float(_sp.jv(n, t))


def bessel_y(n: int, t: float) -> float:
    """Neumann function Y_n(t) for integer n, t > 0 (logarithmic singularity at 0)."""
    t = _check_arg(t, positive=True)
    return float(_sp.yv(int(n), t))


def hankel1(n: int, t: float) -> complex:
    """Hankel function of the first kind, H^(1)_n = J_n + i Y_n."""
    t = _check_arg(t, positive=True)
    return complex(_sp.hankel1(int(n), t))


_KINDS = {
    "J": bessel_j,
    "Y": bessel_y,
    "H1": hankel1,
}


def cyl_derivative(kind: str, n: int, t: float):
    """Derivative of J, Y or H1 of order n via f'_n = (f_{n-1} - f_{n+1}) / 2."""
    try:
        f = _KINDS[kind]
    except KeyError:
        raise ValueError(f"kind must be one of {sorted(_KINDS)}, got {kind!r}") from None
    n = int(n)
    return (f(n - 1, t) - f(n + 1, t)) / 2.0


def _reflect(n: int) -> tuple[int, float]:
    """Map negative order to (|n|, parity sign), since f_{-n} = (-1)^n f_n."""
    n = int(n)
    if n < 0:
        return -n, -1.0 if n % 2 else 1.0
    return n, 1.0


def _miller_start(n: int, t: float) -> int:
    # downward start index: comfortably above both the order and the argument
    base = max(n, int(t) + 1)
    m = base + int(math.sqrt(40.0 * max(base, 4))) + 22
    return m + (m % 2)  # even, so the normalization sum ends cleanly


def bessel_j_scaled(n: int, t: float) -> tuple[LogScaledComplex, LogScaledComplex]:
    """(J_n(t), J'_n(t)) in log-scaled form, valid far outside the double range.

    Miller's downward recurrence normalized with J_0 + 2*sum J_{2k} = 1.
    """
    t = _check_arg(t)
    n, sign = _reflect(n)
    if t == 0.0:
        if n == 0:
            return (LogScaledComplex.from_complex(1.0),
                    LogScaledComplex.ZERO)
        jp = 0.5 if n == 1 else 0.0
        return (LogScaledComplex.ZERO,
                LogScaledComplex.from_complex(sign * jp))
    if t < 1e-8:
        # two-term ascending series in log form; avoids a very long recurrence
        logj = n * math.log(t / 2.0) - math.lgamma(n + 1)
        corr = 1.0 - (t * t / 4.0) / (n + 1)
        j = LogScaledComplex.from_log(logj, sign * corr)
        if n == 0:
            jp = LogScaledComplex.from_log(math.log(t / 2.0), -sign)
        else:
            logjp = (n - 1) * math.log(t / 2.0) - math.lgamma(n) - math.log(2.0)
            jp = LogScaledComplex.from_log(logjp, sign)
        return j, jp

    m_start = _miller_start(n, t)
    p_hi = 0.0     # trial J_{m_start + 1}
    p_lo = 1e-280  # trial J_{m_start}
    log_scale = 0.0
    norm = 0.0  # accumulates J_0 + 2 sum J_2k at the current scale
    saved = {}  # order -> (value at save time, log_scale at save time)
    for m in range(m_start, 0, -1):
        # loop entry: p_lo = J_m, p_hi = J_{m+1}; compute J_{m-1} = (2m/t) J_m - J_{m+1}
        p_next = (2.0 * m / t) * p_lo - p_hi
        p_hi, p_lo = p_lo, p_next
        order = m - 1
        if order in (n, n + 1):
            saved[order] = (p_lo, log_scale)
        if order % 2 == 0:
            norm += p_lo if order == 0 else 2.0 * p_lo
        if abs(p_lo) > _RESCALE:
            p_lo /= _RESCALE
            p_hi /= _RESCALE
            norm /= _RESCALE
            log_scale += _LOG_RESCALE
    if n + 1 not in saved:  # n + 1 above the start index (cannot happen by construction)
        raise AssertionError("Miller recurrence did not reach the requested order")
    norm_l = LogScaledComplex.from_log(log_scale, norm)
    val_n, scale_n = saved[n]
    val_n1, scale_n1 = saved[n + 1]
    jn = LogScaledComplex.from_log(scale_n, val_n) / norm_l
    jn1 = LogScaledComplex.from_log(scale_n1, val_n1) / norm_l
    # J'_n = (n/t) J_n - J_{n+1}
    jpn = jn * (n / t) - jn1
    if sign < 0:
        jn, jpn = -jn, -jpn
    return jn, jpn


def bessel_y_scaled(n: int, t: float) -> tuple[LogScaledComplex, LogScaledComplex]:
    """(Y_n(t), Y'_n(t)) in log-scaled form via the upward recurrence."""
    t = _check_arg(t, positive=True)
    n, sign = _reflect(n)
    y_prev = float(_sp.y0(t))
    y_curr = float(_sp.y1(t))
    log_scale = 0.0
    if n == 0:
        # Y'_0 = -Y_1
        return (LogScaledComplex.from_complex(sign * y_prev),
                LogScaledComplex.from_complex(-sign * y_curr))
    for m in range(1, n):
        y_next = (2.0 * m / t) * y_curr - y_prev
        y_prev, y_curr = y_curr, y_next
        if abs(y_curr) > _RESCALE:
            y_prev /= _RESCALE
            y_curr /= _RESCALE
            log_scale += _LOG_RESCALE
    yn = LogScaledComplex.from_log(log_scale, sign * y_curr)
    # Y'_n = Y_{n-1} - (n/t) Y_n, both at the current scale
    ypn = LogScaledComplex.from_log(log_scale, sign * (y_prev - (n / t) * y_curr))
    return yn, ypn


def hankel1_scaled(n: int, t: float) -> LogScaledComplex:
    """H^(1)_n(t) = J_n(t) + i Y_n(t) in log-scaled form."""
    j, _ = bessel_j_scaled(n, t)
    y, _ = bessel_y_scaled(n, t)
    return j + y * 1j


def hankel1_scaled_pair(n: int, t: float) -> tuple[LogScaledComplex, LogScaledComplex]:
    """(H^(1)_n(t), H^(1)'_n(t)) in log-scaled form."""
    j, jp = bessel_j_scaled(n, t)
    y, yp = bessel_y_scaled(n, t)
    return j + y * 1j, jp + yp * 1j
