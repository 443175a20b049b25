"""Sampled complex functions of a real variable.

SampledComplexFunction is the numerical carrier for boundary values of Hardy
functions, energy wave functions, and time signals: complex samples on a
strictly increasing real grid, plus an optional rational-decay tail model
describing the function beyond the grid edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CsvFormatError

CSV_HEADER = "x,re,im"


@dataclass(frozen=True)
class TailModel:
    """Rational decay f(x) ~ c * x**(-p) for |x| beyond the grid edges.

    For integer p the signed value c / x**p is used on both ends of the real
    axis.  For non-integer p the negative-axis value is ill-defined, so only
    the magnitude bound |c| * |x|**(-p) is used (corrections are skipped and
    the uncorrected truncation enters the error estimate instead).
    """

    p: float
    c: complex

    def __post_init__(self):
        if not np.isfinite(self.p) or self.p <= 0.5:
            raise ValueError(f"tail exponent must be > 1/2, got {self.p}")
        if not np.isfinite(self.c):
            raise ValueError("tail coefficient must be finite")
        object.__setattr__(self, "c", complex(self.c))

    @property
    def integer_p(self) -> int | None:
        p_round = round(self.p)
        if abs(self.p - p_round) < 1e-9 and p_round >= 1:
            return p_round
        return None

    def value(self, x):
        """Signed tail value c / x**p; requires integer p."""
        if self.integer_p is None:
            raise ValueError("signed tail value needs an integer exponent")
        return self.c / np.asarray(x, dtype=float) ** self.integer_p

    def bound(self, x):
        """Magnitude bound |c| |x|^-p, valid for any p > 1/2."""
        return abs(self.c) * np.abs(np.asarray(x, dtype=float)) ** (-self.p)

    def conjugate(self) -> "TailModel":
        return TailModel(self.p, np.conj(self.c))


@dataclass(frozen=True)
class SampledComplexFunction:
    """Complex samples on a strictly increasing finite real grid."""

    grid: np.ndarray
    values: np.ndarray
    tail: TailModel | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or values.ndim != 1:
            raise ValueError("grid and values must be one-dimensional")
        if grid.size != values.size:
            raise ValueError("grid and values must have equal length")
        if grid.size < 2:
            raise ValueError("need at least 2 samples")
        if not np.all(np.isfinite(grid)):
            raise ValueError("grid contains non-finite entries")
        if not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("values contain NaN or Inf")
        grid.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.grid.size

    @property
    def span(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def is_uniform(self) -> bool:
        d = np.diff(self.grid)
        return bool(np.max(np.abs(d - d[0])) <= 1e-9 * abs(d[0]))

    def __call__(self, x):
        """Linear interpolation of the samples (off-grid evaluation)."""
        x = np.asarray(x, dtype=float)
        re = np.interp(x, self.grid, self.values.real)
        im = np.interp(x, self.grid, self.values.imag)
        return re + 1j * im

    def with_tail(self, tail: TailModel | None) -> "SampledComplexFunction":
        return SampledComplexFunction(self.grid, self.values, tail)

    def with_values(self, values) -> "SampledComplexFunction":
        return SampledComplexFunction(self.grid, values, self.tail)

    def conjugate(self) -> "SampledComplexFunction":
        tail = self.tail.conjugate() if self.tail is not None else None
        return SampledComplexFunction(self.grid, np.conj(self.values), tail)

    # --- serialization ---------------------------------------------------

    def to_csv(self, path):
        """Write rows `x,re,im` with full double-precision round-trip."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for x, v in zip(self.grid, self.values):
                fh.write(f"{float(x)!r},{float(v.real)!r},{float(v.imag)!r}\n")

    @classmethod
    def from_csv(cls, path, tail: TailModel | None = None) -> "SampledComplexFunction":
        xs, res, ims = [], [], []
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines:
            raise CsvFormatError(1, "empty file")
        if lines[0].strip() != CSV_HEADER:
            raise CsvFormatError(1, f"expected header '{CSV_HEADER}'")
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise CsvFormatError(lineno, f"expected 3 fields, got {len(parts)}")
            try:
                x, re, im = (float(p) for p in parts)
            except ValueError:
                raise CsvFormatError(lineno, f"non-numeric field in {line!r}") from None
            if xs and x <= xs[-1]:
                raise CsvFormatError(lineno, "x values must be strictly increasing")
            xs.append(x)
            res.append(re)
            ims.append(im)
        if len(xs) < 2:
            raise CsvFormatError(len(lines), "need at least 2 data rows")
        return cls(np.array(xs), np.array(res) + 1j * np.array(ims), tail)

    def to_json_dict(self) -> dict:
        out = {
            "grid": [float(x) for x in self.grid],
            "re": [float(v) for v in self.values.real],
            "im": [float(v) for v in self.values.imag],
            "tail": None,
        }
        if self.tail is not None:
            out["tail"] = {
                "p": float(self.tail.p),
                "c": {"re": float(self.tail.c.real), "im": float(self.tail.c.imag)},
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SampledComplexFunction":
        tail = None
        if obj.get("tail") is not None:
            t = obj["tail"]
            tail = TailModel(t["p"], complex(t["c"]["re"], t["c"]["im"]))
        values = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
        return cls(np.array(obj["grid"], dtype=float), values, tail)

    @classmethod
    def from_json(cls, text: str) -> "SampledComplexFunction":
        return cls.from_json_dict(json.loads(text))


def uniform_grid(lo: float, hi: float, n: int = 4096) -> np.ndarray:
    """Uniform grid of n points on [lo, hi]."""
    if n < 2:
        raise ValueError("need at least 2 points")
    if not hi > lo:
        raise ValueError("need hi > lo")
    return np.linspace(lo, hi, n)


def lorentzian_grid(peak: float, width: float, n: int = 4096, widths: float = 50.0) -> np.ndarray:
    """Default working grid for Lorentzian-shaped functions: peak +- widths*width."""
    if width <= 0:
        raise ValueError("width must be positive")
    return uniform_grid(peak - widths * width, peak + widths * width, n)


def estimate_tail(f: SampledComplexFunction, fraction: float = 0.1) -> TailModel:
    """Estimate a rational tail model from the outer samples.

    Fits log|f| against log|x| on the outer `fraction` of each side to get the
    decay exponent (snapped to the nearest integer when within 0.2), then
    solves for the complex coefficient by least squares at the snapped
    exponent.  Intended for externally supplied CSV data that carries no tail
    descriptor.
    """
    n = len(f)
    k = max(4, int(n * fraction))
    exps = []
    for sl in (slice(0, k), slice(n - k, n)):
        x = f.grid[sl]
        v = f.values[sl]
        mask = (np.abs(x) > 0) & (np.abs(v) > 0)
        if mask.sum() >= 3:
            slope, _ = np.polyfit(np.log(np.abs(x[mask])), np.log(np.abs(v[mask])), 1)
            exps.append(-slope)
    if not exps:
        raise ValueError("cannot estimate tail: too few usable outer samples")
    p = float(np.mean(exps))
    p_int = round(p)
    if abs(p - p_int) < 0.2 and p_int >= 1:
        p = float(p_int)
        # signed basis available: least squares for complex c on both sides
        x = np.concatenate([f.grid[:k], f.grid[-k:]])
        v = np.concatenate([f.values[:k], f.values[-k:]])
        basis = x ** (-p_int)
        c = complex(np.vdot(basis, v) / np.vdot(basis, basis))
    else:
        # fractional exponent: magnitude-only coefficient from the right edge
        x = f.grid[-k:]
        v = f.values[-k:]
        c = complex(np.mean(np.abs(v) * np.abs(x) ** p))
    if p <= 0.5:
        raise ValueError(f"estimated tail exponent {p:.3f} is not square-integrable")
    return TailModel(p, c)
