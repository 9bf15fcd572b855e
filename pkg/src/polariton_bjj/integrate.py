"""Time steppers: embedded Dormand-Prince 4(5) and Euler-Maruyama.

The adaptive integrator controls the local error against
atol + rtol * |y| with the classic fifth-order step-size rule and never
exceeds ``max_step``.  It marches through a caller-supplied list of sample
times, clamping steps so every sample is hit exactly, which keeps runs
bitwise reproducible for identical inputs.  A step below 1e-12 raises
StepUnderflow with the failure time.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import StepUnderflow

_MIN_STEP = 1e-12

# Dormand-Prince 4(5) tableau (FSAL form).
_C = (0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (0.2,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0)
_ERR = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


def integrate_adaptive(
    f,
    y0,
    sample_times,
    t0: float = 0.0,
    rtol: float = 1e-9,
    atol: float = 1e-12,
    max_step: float = math.inf,
) -> np.ndarray:
    """Integrate y' = f(t, y) and return y at each requested sample time.

    ``sample_times`` must be non-decreasing and start at or after t0.
    """
    y = np.asarray(y0, dtype=float).copy()
    t = t0
    samples = list(sample_times)
    out = np.empty((len(samples), y.size))
    k = [np.empty_like(y) for _ in range(7)]
    k[0] = f(t, y)
    h = min(max_step, 0.1)
    idx = 0
    while idx < len(samples) and samples[idx] <= t:
        out[idx] = y
        idx += 1
    while idx < len(samples):
        target = samples[idx]
        clamped = False
        if t + h >= target:
            h = target - t
            clamped = True
        if h < _MIN_STEP:
            if clamped and target - t < _MIN_STEP:
                # sample essentially coincides with the current time
                out[idx] = y
                idx += 1
                h = min(max_step, 0.1)
                continue
            raise StepUnderflow(t)
        # six stages plus the FSAL stage at the trial endpoint
        for i in range(5):
            yi = y + h * sum(a * k[j] for j, a in enumerate(_A[i]))
            k[i + 1] = f(t + _C[i] * h, yi)
        y_new = y + h * sum(a * k[j] for j, a in enumerate(_A[5]))
        k[6] = f(t + h, y_new)
        err = h * sum(e * k[j] for j, e in enumerate(_ERR))
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if err_norm <= 1.0:
            t_new = t + h
            y = y_new
            k[0] = k[6]  # first-same-as-last
            if clamped or abs(t_new - target) < _MIN_STEP:
                t = target
                out[idx] = y
                idx += 1
            else:
                t = t_new
        factor = 0.9 * (err_norm ** -0.2) if err_norm > 0 else 5.0
        h = min(max_step, h * min(5.0, max(0.2, factor)))
    return out


def integrate_euler_maruyama(
    f,
    y0,
    sample_times,
    dt: float,
    noise_std: np.ndarray,
    rng: np.random.Generator,
    t0: float = 0.0,
) -> np.ndarray:
    """Fixed-step Euler-Maruyama with additive Gaussian increments.

    ``noise_std`` gives the per-component standard deviation of the
    increment added each step (already including the sqrt(dt) factor);
    zero entries receive no noise but normal draws are still consumed
    only for the non-zero ones, keeping output independent of layout.
    """
    y = np.asarray(y0, dtype=float).copy()
    t = t0
    samples = list(sample_times)
    out = np.empty((len(samples), y.size))
    idx = 0
    noisy = np.nonzero(noise_std)[0]
    while idx < len(samples) and samples[idx] <= t:
        out[idx] = y
        idx += 1
    while idx < len(samples):
        step = min(dt, samples[idx] - t)
        y = y + step * f(t, y)
        if noisy.size and step > 0:
            # scale the tabulated stds for partial steps at sample boundaries
            y[noisy] += noise_std[noisy] * math.sqrt(step / dt) * rng.standard_normal(noisy.size)
        t += step
        if samples[idx] - t < 1e-12:
            t = samples[idx]
            out[idx] = y
            idx += 1
    return out
