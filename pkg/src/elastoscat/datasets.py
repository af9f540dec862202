"""Far-field data containers and the on-disk interchange format.

Two shapes of data exist: single-wave records (one incident wave; vector
P/S channels for the full problem or one scalar channel for the P-only /
S-only problems) and full multistatic matrices over all incident
directions.  Files are plain text: ``# key = value`` header lines followed
by ``channel,j,l,Re,Im`` rows with 17 significant digits, so every double
round-trips exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .medium import ElasticMedium

__all__ = [
    "FarFieldData",
    "FarFieldMatrixData",
    "uniform_angles",
    "write_farfield",
    "read_farfield",
    "apply_noise",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1

PROBLEMS = ("IP-F", "IP-P", "IP-S")


def uniform_angles(m: int) -> np.ndarray:
    """The canonical uniform grid theta_j = 2 pi j / m."""
    if m < 4:
        raise ValueError(f"grid needs at least 4 angles, got {m}")
    return 2 * np.pi * np.arange(m) / m


def _check_grid(theta: np.ndarray) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    ref = uniform_angles(len(theta))
    if not np.allclose(theta, ref, atol=1e-12):
        raise ValueError("angles must form the uniform grid 2*pi*j/M")
    return theta


@dataclass
class FarFieldData:
    """Far-field samples for a single incident plane wave.

    For problem IP-F both channels hold the vector pattern split along
    xhat / xhat_perp; for IP-P only ``p`` is set (the pp response) and for
    IP-S only ``s`` (the ss response).
    """

    theta: np.ndarray
    problem: str
    p: np.ndarray | None = None
    s: np.ndarray | None = None
    theta_d: float = 0.0
    c_p: complex = 1.0
    c_s: complex = 0.0

    def __post_init__(self):
        self.theta = _check_grid(self.theta)
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}, got {self.problem!r}")
        need = {"IP-F": ("p", "s"), "IP-P": ("p",), "IP-S": ("s",)}[self.problem]
        for name in need:
            arr = getattr(self, name)
            if arr is None:
                raise ValueError(f"problem {self.problem} needs channel {name!r}")
            arr = np.asarray(arr, dtype=complex)
            if arr.shape != self.theta.shape:
                raise ValueError(f"channel {name!r} has shape {arr.shape}, "
                                 f"expected {self.theta.shape}")
            if not np.all(np.isfinite(arr.view(float))):
                raise ValueError(f"channel {name!r} contains non-finite entries")
            setattr(self, name, arr)

    @property
    def m(self) -> int:
        return len(self.theta)


@dataclass
class FarFieldMatrixData:
    """Multistatic far-field matrix: entry [j, l] observes xhat_j for d_l."""

    pp: np.ndarray
    ps: np.ndarray
    sp: np.ndarray
    ss: np.ndarray

    def __post_init__(self):
        mats = {}
        shape = None
        for name in ("pp", "ps", "sp", "ss"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ValueError(f"channel {name} must be square, got {arr.shape}")
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise ValueError("all channels must share one shape")
            if not np.all(np.isfinite(arr.view(float))):
                raise ValueError(f"channel {name} contains non-finite entries")
            mats[name] = arr
            setattr(self, name, arr)

    @property
    def m(self) -> int:
        return self.pp.shape[0]

    @property
    def theta(self) -> np.ndarray:
        return uniform_angles(self.m)

    def channel(self, name: str) -> np.ndarray:
        if name not in ("pp", "ps", "sp", "ss"):
            raise ValueError(f"unknown channel {name!r}")
        return getattr(self, name)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _header_lines(medium: ElasticMedium, meta: dict) -> list[str]:
    lines = [f"# format = {FORMAT_VERSION}"]
    for key in ("kind", "problem"):
        if key in meta:
            lines.append(f"# {key} = {meta[key]}")
    lines.append(f"# lambda = {_fmt(medium.lam)}")
    lines.append(f"# mu = {_fmt(medium.mu)}")
    lines.append(f"# omega = {_fmt(medium.omega)}")
    for key, val in meta.items():
        if key in ("kind", "problem"):
            continue
        if isinstance(val, float):
            val = _fmt(val)
        lines.append(f"# {key} = {val}")
    return lines


def write_farfield(path, data, medium: ElasticMedium, extra_meta: dict | None = None) -> None:
    """Serialize single-wave or matrix far-field data with its medium."""
    meta: dict = dict(extra_meta or {})
    rows: list[str] = []
    if isinstance(data, FarFieldData):
        meta.setdefault("kind", "single")
        meta.setdefault("problem", data.problem)
        meta["m"] = data.m
        meta["theta_d"] = _fmt(data.theta_d)
        meta["c_p_re"] = _fmt(data.c_p.real)
        meta["c_p_im"] = _fmt(data.c_p.imag)
        meta["c_s_re"] = _fmt(data.c_s.real)
        meta["c_s_im"] = _fmt(data.c_s.imag)
        chans = {"IP-F": [("p", data.p), ("s", data.s)],
                 "IP-P": [("pp", data.p)],
                 "IP-S": [("ss", data.s)]}[data.problem]
        for name, arr in chans:
            for j, v in enumerate(arr):
                rows.append(f"{name},{j},0,{_fmt(v.real)},{_fmt(v.imag)}")
    elif isinstance(data, FarFieldMatrixData):
        meta.setdefault("kind", "matrix")
        meta.setdefault("problem", "matrix")
        meta["m"] = data.m
        for name in ("pp", "ps", "sp", "ss"):
            arr = data.channel(name)
            for j in range(data.m):
                for l in range(data.m):
                    v = arr[j, l]
                    rows.append(f"{name},{j},{l},{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        raise TypeError(f"unsupported data object {type(data)!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(_header_lines(medium, meta)) + "\n")
        fh.write("channel,j,l,Re,Im\n")
        fh.write("\n".join(rows) + "\n")


class FarFieldFormatError(ValueError):
    """Malformed far-field data file."""


def read_farfield(path):
    """Parse a far-field file; returns (data, medium, meta)."""
    meta: dict = {}
    entries: dict = {}
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    body_start = None
    for i, line in enumerate(lines):
        if line.startswith("#"):
            try:
                key, val = line[1:].split("=", 1)
            except ValueError:
                raise FarFieldFormatError(f"{path}:{i + 1}: malformed header line {line!r}")
            meta[key.strip()] = val.strip()
        elif line.strip() == "channel,j,l,Re,Im":
            body_start = i + 1
            break
        elif line.strip():
            raise FarFieldFormatError(f"{path}:{i + 1}: unexpected line before column header")
    if body_start is None:
        raise FarFieldFormatError(f"{path}: missing column header 'channel,j,l,Re,Im'")
    if int(meta.get("format", -1)) != FORMAT_VERSION:
        raise FarFieldFormatError(f"{path}: unsupported format {meta.get('format')!r}")
    for key in ("lambda", "mu", "omega", "m", "kind"):
        if key not in meta:
            raise FarFieldFormatError(f"{path}: missing header key {key!r}")
    medium = ElasticMedium(float(meta["lambda"]), float(meta["mu"]), float(meta["omega"]))
    m = int(meta["m"])
    for i, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise FarFieldFormatError(f"{path}:{i}: expected 5 fields, got {len(parts)}")
        name, j, l, re_, im_ = parts
        try:
            entries.setdefault(name, {})[(int(j), int(l))] = complex(float(re_), float(im_))
        except ValueError as exc:
            raise FarFieldFormatError(f"{path}:{i}: bad numeric field ({exc})") from None

    def gather(name, shape):
        chan = entries.get(name)
        if chan is None:
            raise FarFieldFormatError(f"{path}: missing channel {name!r}")
        arr = np.zeros(shape, dtype=complex)
        want = shape[0] * (shape[1] if len(shape) == 2 else 1)
        if len(chan) != want:
            raise FarFieldFormatError(f"{path}: channel {name!r} has {len(chan)} rows, "
                                      f"expected {want}")
        for (j, l), v in chan.items():
            if len(shape) == 1:
                arr[j] = v
            else:
                arr[j, l] = v
        return arr

    if meta["kind"] == "matrix":
        data = FarFieldMatrixData(pp=gather("pp", (m, m)), ps=gather("ps", (m, m)),
                                  sp=gather("sp", (m, m)), ss=gather("ss", (m, m)))
        return data, medium, meta
    if meta["kind"] == "single":
        problem = meta.get("problem")
        if problem not in PROBLEMS:
            raise FarFieldFormatError(f"{path}: bad problem {problem!r}")
        theta = uniform_angles(m)
        kwargs = dict(theta=theta, problem=problem,
                      theta_d=float(meta.get("theta_d", 0.0)),
                      c_p=complex(float(meta.get("c_p_re", 1.0)), float(meta.get("c_p_im", 0.0))),
                      c_s=complex(float(meta.get("c_s_re", 0.0)), float(meta.get("c_s_im", 0.0))))
        if problem == "IP-F":
            data = FarFieldData(p=gather("p", (m,)), s=gather("s", (m,)), **kwargs)
        elif problem == "IP-P":
            data = FarFieldData(p=gather("pp", (m,)), **kwargs)
        else:
            data = FarFieldData(s=gather("ss", (m,)), **kwargs)
        return data, medium, meta
    raise FarFieldFormatError(f"{path}: unknown kind {meta['kind']!r}")


def apply_noise(data, level: float, seed: int):
    """Multiplicative complex Gaussian perturbation, entrywise, seeded.

    Each entry u becomes u * (1 + level * (xi1 + i xi2)/sqrt(2)) with
    standard normal xi, so E |relative perturbation|^2 = level^2.
    """
    if level < 0:
        raise ValueError("noise level must be >= 0")
    if level == 0:
        return data
    rng = np.random.default_rng(seed)

    def perturb(arr):
        if arr is None:
            return None
        noise = rng.standard_normal(arr.shape) + 1j * rng.standard_normal(arr.shape)
        return arr * (1.0 + level * noise / math.sqrt(2.0))

    if isinstance(data, FarFieldData):
        return FarFieldData(theta=data.theta, problem=data.problem,
                            p=perturb(data.p), s=perturb(data.s),
                            theta_d=data.theta_d, c_p=data.c_p, c_s=data.c_s)
    if isinstance(data, FarFieldMatrixData):
        return FarFieldMatrixData(pp=perturb(data.pp), ps=perturb(data.ps),
                                  sp=perturb(data.sp), ss=perturb(data.ss))
    raise TypeError(f"unsupported data object {type(data)!r}")
