"""Transition amplitudes a(t) and Born probabilities P(t) = |a(t)|^2.

The amplitude between an observable psi- and a state phi+ is the channel sum
of half-line energy integrals

    a(t) = sum_{channels} int_0^inf e^{-iEt} conj(psi(E)) phi(E) S(E) dE,

defined for t >= 0 only.  Since conj(psi) and phi are both Hardy from below,
the large-t behavior is controlled by the S-matrix element's poles in the
lower half-plane: a Breit-Wigner pole at E_R - i Gamma/2 contributes the
decaying exponential e^{-iE_R t} e^{-Gamma t/2} on top of a power-law
background.  Two evaluation routes are provided and must agree: direct
oscillatory quadrature, and the exact pole/residue route available when all
factors are rational.
"""

from __future__ import annotations

import enum
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import IncompatibleChannels, NegativeTime, ToleranceNotMet
from .quadrature import (
    OscillatorySpec,
    oscillatory_integral,
    rational_halfline_fourier,
)
from .sampled import SampledComplexFunction, TailModel
from .states import Channel, ChannelFunction, EnergyWaveFunction, WaveKind, evolve_observable, evolve_state

_DEFAULT_GRID_POINTS = 32769
_DEFAULT_SPAN_WIDTHS = 50.0


# ---------------------------------------------------------------------------
# S-matrix models
# ---------------------------------------------------------------------------

class SMatrixEntry:
    """One channel's S-matrix element S(E) on the positive real axis."""

    def value(self, energies):
        raise NotImplementedError

    def as_rational(self) -> tuple[complex, tuple[tuple[complex, complex], ...]] | None:
        """(background, ((residue, pole), ...)) when rational, else None."""
        return None

    def to_json_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class UnitS(SMatrixEntry):
    """Trivial dynamics: S(E) = 1."""

    def value(self, energies):
        return np.ones_like(np.asarray(energies, dtype=complex))

    def as_rational(self):
        return (1.0 + 0j, ())

    def to_json_dict(self):
        return {"kind": "unit", "params": {}}


@dataclass(frozen=True)
class ResonancePole(SMatrixEntry):
    """Breit-Wigner element S(E) = background + residue / (E - E_R + i Gamma/2).

    The pole sits at E_R - i Gamma/2, strictly in the lower half-plane.  The
    default residue -i Gamma makes |S(E)| = 1 on the whole real axis (the
    classic elastic resonance); pass an explicit residue to break unitarity
    deliberately.
    """

    e_r: float
    gamma: float
    background: complex = 1.0 + 0j
    residue: complex | None = None

    def __post_init__(self):
        if not self.e_r > 0:
            raise ValueError(f"resonance energy must be > 0, got {self.e_r}")
        if not self.gamma > 0:
            raise ValueError(f"width must be > 0, got {self.gamma}")
        object.__setattr__(self, "background", complex(self.background))
        if self.residue is not None:
            object.__setattr__(self, "residue", complex(self.residue))

    @property
    def pole(self) -> complex:
        return complex(self.e_r, -self.gamma / 2.0)

    @property
    def effective_residue(self) -> complex:
        return self.residue if self.residue is not None else -1j * self.gamma

    def value(self, energies):
        e = np.asarray(energies, dtype=complex)
        return self.background + self.effective_residue / (e - self.pole)

    def as_rational(self):
        return (self.background, ((self.effective_residue, self.pole),))

    def to_json_dict(self):
        params = {
            "e_r": float(self.e_r),
            "gamma": float(self.gamma),
            "background": {"re": self.background.real, "im": self.background.imag},
        }
        if self.residue is not None:
            params["residue"] = {"re": self.residue.real, "im": self.residue.imag}
        return {"kind": "resonance_pole", "params": params}


@dataclass(frozen=True)
class PhaseShift(SMatrixEntry):
    """S(E) = e^{2 i delta(E)} for a real phase shift delta.

    delta may be a constant, a vectorized callable of E, or a sampled real
    function (interpolated).  |S| = 1 on the real axis by construction.
    """

    delta: object

    def _delta(self, e):
        if isinstance(self.delta, (int, float)):
            return np.full_like(np.asarray(e, dtype=float), float(self.delta))
        if isinstance(self.delta, SampledComplexFunction):
            return self.delta(np.asarray(e, dtype=float)).real
        return np.asarray(self.delta(np.asarray(e, dtype=float)), dtype=float)

    def value(self, energies):
        e = np.asarray(energies, dtype=float)
        return np.exp(2j * self._delta(e))

    def as_rational(self):
        if isinstance(self.delta, (int, float)):
            return (complex(np.exp(2j * float(self.delta))), ())
        return None

    def to_json_dict(self):
        if isinstance(self.delta, (int, float)):
            return {"kind": "phase_shift", "params": {"delta": float(self.delta)}}
        if isinstance(self.delta, SampledComplexFunction):
            return {"kind": "phase_shift", "params": {"delta_samples": self.delta.to_json_dict()}}
        raise ValueError("callable phase shifts are not serializable")


@dataclass(frozen=True)
class SMatrixModel:
    """Channel-indexed S-matrix; channels not listed default to unit."""

    channels: dict

    def __post_init__(self):
        chans = {}
        for ch, entry in dict(self.channels).items():
            if not isinstance(ch, Channel):
                raise IncompatibleChannels(f"S-matrix key {ch!r} is not a Channel")
            if not isinstance(entry, SMatrixEntry):
                raise TypeError(f"S-matrix entry for {ch} must be an SMatrixEntry")
            chans[ch] = entry
        object.__setattr__(self, "channels", chans)

    def entry(self, ch: Channel) -> SMatrixEntry:
        return self.channels.get(ch, UnitS())

    @classmethod
    def unit(cls) -> "SMatrixModel":
        return cls({})

    def to_json_dict(self) -> dict:
        out = []
        for ch in sorted(self.channels):
            d = self.channels[ch].to_json_dict()
            out.append({"l": ch.l, "l3": ch.l3, "kind": d["kind"], "params": d["params"]})
        return {"channels": out}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SMatrixModel":
        chans = {}
        for e in obj.get("channels", []):
            ch = Channel(e["l"], e["l3"])
            kind, params = e["kind"], e.get("params", {})
            if kind == "unit":
                chans[ch] = UnitS()
            elif kind == "resonance_pole":
                bg = params.get("background", {"re": 1.0, "im": 0.0})
                res = params.get("residue")
                chans[ch] = ResonancePole(
                    params["e_r"],
                    params["gamma"],
                    complex(bg["re"], bg["im"]),
                    complex(res["re"], res["im"]) if res else None,
                )
            elif kind == "phase_shift":
                if "delta" in params:
                    chans[ch] = PhaseShift(params["delta"])
                else:
                    chans[ch] = PhaseShift(
                        SampledComplexFunction.from_json_dict(params["delta_samples"])
                    )
            else:
                raise ValueError(f"unknown S-matrix kind {kind!r}")
        return cls(chans)

    @classmethod
    def from_json(cls, text: str) -> "SMatrixModel":
        return cls.from_json_dict(json.loads(text))


# ---------------------------------------------------------------------------
# amplitude results
# ---------------------------------------------------------------------------

class AmplitudeMethod(enum.Enum):
    QUADRATURE = "quadrature"
    POLE_RESIDUE = "pole_residue"


@dataclass(frozen=True)
class AmplitudeResult:
    """One time point of the transition amplitude and probability."""

    t: float
    a: complex
    p: float
    method: AmplitudeMethod
    error_estimate: float

    @classmethod
    def from_amplitude(cls, t, a, method, error) -> "AmplitudeResult":
        a = complex(a)
        return cls(float(t), a, float(abs(a) ** 2), method, float(error))


def amplitude_results_to_csv(results, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,re_a,im_a,p,err\n")
        for r in results:
            fh.write(
                f"{r.t!r},{r.a.real!r},{r.a.imag!r},{r.p!r},{r.error_estimate!r}\n"
            )


def amplitude_results_from_csv(path) -> list[AmplitudeResult]:
    from .errors import CsvFormatError

    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "t,re_a,im_a,p,err":
        raise CsvFormatError(1, "expected header 't,re_a,im_a,p,err'")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise CsvFormatError(lineno, f"expected 5 fields, got {len(parts)}")
        try:
            t, re_a, im_a, p, err = (float(s) for s in parts)
        except ValueError:
            raise CsvFormatError(lineno, f"non-numeric field in {line!r}") from None
        out.append(AmplitudeResult(t, complex(re_a, im_a), p, AmplitudeMethod.QUADRATURE, err))
    return out


def amplitude_results_to_json(results) -> str:
    return json.dumps(
        [
            {
                "t": r.t,
                "a": {"re": r.a.real, "im": r.a.imag},
                "p": r.p,
                "method": r.method.value,
                "error_estimate": r.error_estimate,
            }
            for r in results
        ]
    )


# ---------------------------------------------------------------------------
# partial fractions for the rational route
# ---------------------------------------------------------------------------

def _group_poles(poles, rel_tol=1e-12):
    groups: list[tuple[complex, int]] = []
    for p in poles:
        for i, (q, m) in enumerate(groups):
            if abs(p - q) <= rel_tol * max(1.0, abs(p), abs(q)):
                groups[i] = (q, m + 1)
                break
        else:
            groups.append((p, 1))
    return groups


def _pole_product_partial_fractions(coeff: complex, poles) -> list:
    """Partial fractions of coeff * prod_j 1/(E - q_j), repeated poles allowed.

    For a pole p of multiplicity m the coefficient of (E-p)^{-k} is the
    Taylor coefficient of order m-k, at p, of the product of the remaining
    factors; each factor 1/(E-q) contributes the geometric series
    (-1)^n (E-p)^n / (p-q)^{n+1}, and series are multiplied by convolution.
    """
    groups = _group_poles(list(poles))
    terms = []
    for p, m in groups:
        series = np.zeros(m, dtype=complex)
        series[0] = 1.0
        for q, mq in groups:
            if q == p:
                continue
            n = np.arange(m)
            factor = (-1.0) ** n / (p - q) ** (n + 1)
            full = series
            for _ in range(mq):
                conv = np.convolve(full, factor)[:m]
                full = conv
            series = full
        for k in range(1, m + 1):
            terms.append((coeff * series[m - k], p, k))
    return terms


def _channel_rational_terms(psi: ChannelFunction, phi: ChannelFunction, s_entry):
    """Pole-order terms of conj(psi)(E) phi(E) S(E), or None if not rational."""
    if not (psi.is_analytic and phi.is_analytic):
        return None
    rat = s_entry.as_rational()
    if rat is None:
        return None
    background, s_terms = rat
    psi_terms = [(np.conj(c), np.conj(p)) for c, p in psi.base.as_terms()]
    phi_terms = phi.base.as_terms()
    out = []
    for c1, p1 in psi_terms:
        for c2, p2 in phi_terms:
            if background != 0:
                out.extend(
                    _pole_product_partial_fractions(background * c1 * c2, [p1, p2])
                )
            for cs, ps in s_terms:
                out.extend(
                    _pole_product_partial_fractions(c1 * c2 * cs, [p1, p2, ps])
                )
    return out


# ---------------------------------------------------------------------------
# the amplitude
# ---------------------------------------------------------------------------

def _shared_channels(obs, state):
    for key in list(obs.channels) + list(state.channels):
        if not isinstance(key, Channel):
            raise IncompatibleChannels(f"malformed channel key {key!r}")
    return sorted(set(obs.channels) & set(state.channels))


def _quadrature_grid(psi: ChannelFunction, phi: ChannelFunction, s_entry, grid_points):
    hi = 10.0
    for fn in (psi, phi):
        if fn.is_analytic:
            for p in fn.base.poles():
                hi = max(hi, p.real + _DEFAULT_SPAN_WIDTHS * max(2.0 * abs(p.imag), 0.5))
        else:
            hi = max(hi, fn.base.grid[-1])
    rat = s_entry.as_rational()
    if rat is not None:
        for _, p in rat[1]:
            hi = max(hi, p.real + _DEFAULT_SPAN_WIDTHS * max(2.0 * abs(p.imag), 0.5))
    return np.linspace(0.0, hi, grid_points)


def _channel_amplitude_quadrature(psi, phi, s_entry, t_eff, grid_points):
    grid = _quadrature_grid(psi, phi, s_entry, grid_points)
    integrand = np.conj(psi.value(grid)) * phi.value(grid) * s_entry.value(grid)
    # the wave-function product decays like E^-2; the fitted expansion refines
    c2 = integrand[-1] * grid[-1] ** 2
    f = SampledComplexFunction(grid, integrand, TailModel(2.0, complex(c2)))
    return oscillatory_integral(f, t_eff, OscillatorySpec())


def transition_amplitude(
    obs: EnergyWaveFunction,
    state: EnergyWaveFunction,
    s: SMatrixModel,
    t: float,
    *,
    method: str = "auto",
    grid_points: int = _DEFAULT_GRID_POINTS,
) -> AmplitudeResult:
    """a(t) = sum_channels int_0^inf e^{-iEt} conj(psi) phi S dE for t >= 0.

    Channels present in only one wave function contribute zero.  With
    method "auto" the exact pole/residue route is used whenever every factor
    is rational, otherwise Filon quadrature; "pole_residue" and "quadrature"
    force the respective route.  The error estimate is a numerical estimate
    (cancellation-aware for the pole route, Richardson for quadrature).
    """
    if obs.kind is not WaveKind.OBSERVABLE:
        raise ValueError("first argument must be an observable")
    if state.kind is not WaveKind.STATE:
        raise ValueError("second argument must be a state")
    if t < 0:
        raise NegativeTime(f"t = {t} < 0")
    if method not in ("auto", "pole_residue", "quadrature"):
        raise ValueError(f"unknown method {method!r}")

    shared = _shared_channels(obs, state)
    if not shared:
        return AmplitudeResult.from_amplitude(t, 0j, AmplitudeMethod.POLE_RESIDUE, 0.0)

    total = 0j
    err = 0.0
    used = AmplitudeMethod.POLE_RESIDUE
    for ch in shared:
        psi = obs.channels[ch]
        phi = state.channels[ch]
        t_eff = t + phi.phase_time - psi.phase_time
        if t_eff < 0:
            raise NegativeTime(f"effective time {t_eff} < 0 in channel {ch}")
        terms = None
        if method in ("auto", "pole_residue"):
            terms = _channel_rational_terms(psi, phi, s.entry(ch))
        if terms is not None and method != "quadrature":
            value = rational_halfline_fourier(terms, t_eff)
            # cancellation-aware scale: the sum of magnitudes of the pieces
            if t_eff > 0:
                mag = sum(
                    abs(c) * abs(rational_halfline_fourier([(1, p, m)], t_eff))
                    for c, p, m in terms
                )
            else:
                mag = abs(value)
            total += value
            err += 1e-13 * max(1.0, mag)
        else:
            if method == "pole_residue":
                raise ValueError("pole_residue route needs rational factors throughout")
            used = AmplitudeMethod.QUADRATURE
            val, e = _channel_amplitude_quadrature(psi, phi, s.entry(ch), t_eff, grid_points)
            total += val
            err += e
    return AmplitudeResult.from_amplitude(t, total, used, err)


_threads_env = os.environ.get("HARDYLAB_THREADS")
_num_threads = int(_threads_env) if _threads_env else 1


def set_threads(n: int):
    """Set the worker count used to parallelize probability curves."""
    global _num_threads
    _num_threads = max(1, int(n))


def transition_probability(
    obs: EnergyWaveFunction,
    state: EnergyWaveFunction,
    s: SMatrixModel,
    t_grid,
    *,
    method: str = "auto",
    grid_points: int = _DEFAULT_GRID_POINTS,
    picture_tol: float = 1e-8,
) -> list[AmplitudeResult]:
    """P(t) over a time grid, computed in both dynamical pictures.

    Each point is evaluated twice: evolving the state forward (Schroedinger)
    and evolving the observable forward (Heisenberg).  Both reduce to the
    same half-line integral, and the run aborts with ToleranceNotMet if they
    ever disagree beyond picture_tol plus the numerical error estimates,
    which would indicate broken evolution plumbing.  The reported results
    come from the Schroedinger path.
    """
    ts = [float(t) for t in t_grid]
    if any(t < 0 for t in ts):
        raise NegativeTime("t grid contains negative entries")
    if any(b < a for a, b in zip(ts[:-1], ts[1:])):
        raise ValueError("t grid must be nondecreasing")

    def one(t: float) -> AmplitudeResult:
        r_s = transition_amplitude(
            obs, evolve_state(state, t), s, 0.0, method=method, grid_points=grid_points
        )
        r_h = transition_amplitude(
            evolve_observable(obs, t), state, s, 0.0, method=method, grid_points=grid_points
        )
        budget = picture_tol + r_s.error_estimate + r_h.error_estimate
        if abs(r_s.p - r_h.p) > budget:
            raise ToleranceNotMet(
                f"picture mismatch at t={t}: |P_S - P_H| = {abs(r_s.p - r_h.p):.3e} "
                f"exceeds {budget:.3e}"
            )
        return AmplitudeResult.from_amplitude(
            t, r_s.a, r_s.method, r_s.error_estimate + abs(r_s.a - r_h.a)
        )

    if _num_threads > 1 and len(ts) > 1:
        with ThreadPoolExecutor(max_workers=_num_threads) as pool:
            return list(pool.map(one, ts))
    return [one(t) for t in ts]


# ---------------------------------------------------------------------------
# decay-rate extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentialFit:
    """Least-squares fit of log P(t) = log A - rate * t over a window."""

    rate: float
    log_amplitude: float
    window: tuple[float, float]
    n_points: int
    residual_rms: float


def fit_exponential_rate(results, window: tuple[float, float]) -> ExponentialFit:
    """Fit the exponential decay rate of |a(t)|^2 inside the window.

    The window should sit after the early transients and before the power-law
    background overtakes the pole term; for a Breit-Wigner resonance on broad
    Lorentzian wave functions that is roughly a few lifetimes wide.
    """
    lo, hi = window
    ts = np.array([r.t for r in results])
    ps = np.array([r.p for r in results])
    mask = (ts >= lo) & (ts <= hi) & (ps > 0)
    if mask.sum() < 3:
        raise ValueError("need at least 3 positive points inside the fit window")
    x = ts[mask]
    y = np.log(ps[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return ExponentialFit(
        rate=float(-slope),
        log_amplitude=float(intercept),
        window=(float(lo), float(hi)),
        n_points=int(mask.sum()),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )
