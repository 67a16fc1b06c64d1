"""Step response of a damped second-order joint and its overshoot/settling metrics.

Plant: x'' + 2*zeta*wn*x' + wn**2 * x = wn**2 * u, with u a constant step of
``step_amplitude`` applied at t = 0 from rest. Integration is classic RK4
at a fixed step so identical parameters always give bit-identical output.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ._accel import kernel
from .errors import InsufficientPeaksError, InvalidParameterError, NeverSettlesError

DEFAULT_DT = 1e-4
DEFAULT_BAND = 0.02
# peaks smaller than this fraction of the final value are integration noise
PEAK_FLOOR = 1e-6

# regimes standing in for the before/after response figures
OVERDAMPED_ZETA = 2.0
UNDERDAMPED_ZETA = 0.4


@dataclass(frozen=True)
class SecondOrderParams:
    omega_n: float
    zeta: float
    step_amplitude: float = 1.0
    dt: float = DEFAULT_DT
    duration: float = 10.0

    def __post_init__(self):
        for name in ("omega_n", "zeta", "step_amplitude", "dt", "duration"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(name, "must be finite")
        if self.omega_n <= 0:
            raise InvalidParameterError("omega_n", f"must be > 0, got {self.omega_n}")
        if self.zeta < 0:
            raise InvalidParameterError("zeta", f"must be >= 0, got {self.zeta}")
        if self.step_amplitude == 0:
            raise InvalidParameterError("step_amplitude", "must be non-zero")
        if self.dt <= 0:
            raise InvalidParameterError("dt", f"must be > 0, got {self.dt}")
        if self.duration <= 0:
            raise InvalidParameterError("duration", f"must be > 0, got {self.duration}")
        if self.dt > self.duration / 100:
            raise InvalidParameterError(
                "dt", f"{self.dt} is coarser than duration/100 = {self.duration / 100}")

    @property
    def n_steps(self):
        return int(round(self.duration / self.dt))


@dataclass(frozen=True, eq=False)
class StepResponse:
    params: SecondOrderParams
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    overshoot_pct: float = 0.0
    settling_time: float | None = None
    zeta_estimate: float | None = None
    per_cycle_decay_pct: float | None = None

    @property
    def final_value(self):
        return self.params.step_amplitude

    @property
    def samples(self):
        return np.column_stack((self.t, self.x))


@kernel()
def _rk4_step_response(omega_n, zeta, amplitude, dt, x_out):
    w2 = omega_n * omega_n
    c = 2.0 * zeta * omega_n
    h2 = 0.5 * dt
    h6 = dt / 6.0
    x = 0.0
    v = 0.0
    x_out[0] = 0.0
    for k in range(1, x_out.shape[0]):
        a1 = w2 * (amplitude - x) - c * v
        x2 = x + h2 * v
        v2 = v + h2 * a1
        a2 = w2 * (amplitude - x2) - c * v2
        x3 = x + h2 * v2
        v3 = v + h2 * a2
        a3 = w2 * (amplitude - x3) - c * v3
        x4 = x + dt * v3
        v4 = v + dt * a3
        a4 = w2 * (amplitude - x4) - c * v4
        x = x + h6 * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v = v + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        x_out[k] = x


def _error_about_final(x, final):
    # signed so that overshoot is positive for either step direction
    return (x - final) * math.copysign(1.0, final)


def overshoot(resp):
    final = resp.final_value
    if final == 0:
        raise InvalidParameterError("step_amplitude", "overshoot undefined for zero final value")
    peak = float(np.max(_error_about_final(resp.x, final)))
    return 100.0 * max(0.0, peak) / abs(final)


def settling_time(resp, band=DEFAULT_BAND):
    """First time after which the response stays inside ``band * |final|``."""
    final = resp.final_value
    outside = np.abs(resp.x - final) > band * abs(final)
    if not outside.any():
        return 0.0
    last = int(np.flatnonzero(outside)[-1])
    if last == len(resp.x) - 1:
        raise NeverSettlesError(
            f"response does not settle within {band:.6g} band in {resp.params.duration:.6g} s")
    return float(resp.t[last + 1])


def overshoot_peaks(resp):
    """Sample indices of local maxima lying above the final value."""
    final = resp.final_value
    e = _error_about_final(resp.x, final)
    mid = e[1:-1]
    is_peak = (mid > e[:-2]) & (mid >= e[2:]) & (mid > PEAK_FLOOR * abs(final))
    return np.flatnonzero(is_peak) + 1


def log_decrement_zeta(resp):
    """Identify the damping ratio from successive overshoot peaks.

    delta is the mean log ratio of consecutive peak heights about the final
    value; zeta = delta / sqrt(4 pi^2 + delta^2).
    """
    idx = overshoot_peaks(resp)
    if len(idx) < 2:
        raise InsufficientPeaksError(
            f"insufficient peaks: found {len(idx)} above the final value, need 2")
    amps = _error_about_final(resp.x[idx], resp.final_value)
    # an undamped trace can round to a hair below zero
    delta = max(0.0, math.log(amps[0] / amps[-1]) / (len(amps) - 1))
    return delta / math.sqrt(4.0 * math.pi ** 2 + delta ** 2)


def per_cycle_decay(zeta):
    """Percent of oscillation amplitude lost over one damped period."""
    if not 0 <= zeta < 1:
        raise InvalidParameterError("zeta", f"must lie in [0, 1), got {zeta!r}")
    return 100.0 * (1.0 - math.exp(-2.0 * math.pi * zeta / math.sqrt(1.0 - zeta * zeta)))


def closed_form_overshoot(zeta):
    if zeta >= 1:
        return 0.0
    return 100.0 * math.exp(-math.pi * zeta / math.sqrt(1.0 - zeta * zeta))


def simulate_step(params):
    x = np.empty(params.n_steps + 1)
    _rk4_step_response(float(params.omega_n), float(params.zeta),
                       float(params.step_amplitude), float(params.dt), x)
    t = np.arange(x.shape[0]) * params.dt
    resp = StepResponse(params, t, x)

    try:
        settle = settling_time(resp)
    except NeverSettlesError:
        settle = None
    try:
        zeta_hat = log_decrement_zeta(resp)
        decay = per_cycle_decay(zeta_hat)
    except InsufficientPeaksError:
        zeta_hat = decay = None
    return replace(resp, overshoot_pct=overshoot(resp), settling_time=settle,
                   zeta_estimate=zeta_hat, per_cycle_decay_pct=decay)


def simulate_sweep(param_list, workers=None):
    """Simulate several configurations; results keep the input order."""
    param_list = list(param_list)
    if workers == 1 or len(param_list) < 2:
        return [simulate_step(p) for p in param_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(simulate_step, param_list))


def apply_accel_feedback(params, gain):
    """Acceleration feedback modelled as an added damping channel.

    zeta' = zeta + gain * omega_n; the natural frequency is untouched.
    """
    if not (math.isfinite(gain) and gain >= 0):
        raise InvalidParameterError("feedback_gain", f"must be >= 0, got {gain!r}")
    if gain == 0:
        return params
    return replace(params, zeta=params.zeta + gain * params.omega_n)


def feedback_gain_for(params, target_zeta):
    """Gain that brings ``params`` to ``target_zeta``; the feedback can only add damping."""
    gain = (target_zeta - params.zeta) / params.omega_n
    if gain < 0:
        raise InvalidParameterError(
            "target_zeta",
            f"{target_zeta:.6g} is below the open-loop damping {params.zeta:.6g}; "
            "additive feedback cannot remove damping")
    return gain
