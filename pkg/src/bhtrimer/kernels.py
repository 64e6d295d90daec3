"""Hot integration loops for trajectory chunks.

Numba-compiled when available (the default), with pure-numpy fallbacks
that implement identical arithmetic. Each kernel advances a chunk of
independent trajectories and records the per-well atom-number estimator
at the requested step indices:

    Wigner:     |alpha_i|^2 - 1/2    (symmetric-ordering correction)
    positive-P: Re(alpha_plus_i * alpha_i)

Divergent trajectories (non-finite values or phase-space norm above the
guard bound) are frozen in place and flagged; the caller excludes them
from all statistics.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


PP_MIDPOINT_ITERS = 3  # fixed-point iterations of the semi-implicit drift


@njit(cache=True)
def _wigner_rhs_scalar(a1, a2, a3, chi, j):
    m2chi = -2j * chi
    d1 = m2chi * (a1.real * a1.real + a1.imag * a1.imag) * a1 + 1j * j * a2
    d2 = m2chi * (a2.real * a2.real + a2.imag * a2.imag) * a2 + 1j * j * (a1 + a3)
    d3 = m2chi * (a3.real * a3.real + a3.imag * a3.imag) * a3 + 1j * j * a2
    return d1, d2, d3


@njit(cache=True)
def wigner_chunk(alpha, chi, j, dt, n_steps, rec_steps, meas_steps, guard, est, snap, diverged):
    """Integrate a chunk of Wigner trajectories with classical RK4.

    alpha: (n, 3) complex, modified in place to the final state.
    est:   (n_rec, n, 3) number estimators at rec_steps.
    snap:  (n_meas, n, 3) number estimators at meas_steps.
    """
    n = alpha.shape[0]
    n_rec = rec_steps.shape[0]
    n_meas = meas_steps.shape[0]
    for i in range(n):
        a1 = alpha[i, 0]
        a2 = alpha[i, 1]
        a3 = alpha[i, 2]
        ri = 0
        mi = 0
        dead = False
        for s in range(n_steps + 1):
            if ri < n_rec and s == rec_steps[ri]:
                est[ri, i, 0] = a1.real * a1.real + a1.imag * a1.imag - 0.5
                est[ri, i, 1] = a2.real * a2.real + a2.imag * a2.imag - 0.5
                est[ri, i, 2] = a3.real * a3.real + a3.imag * a3.imag - 0.5
                ri += 1
            while mi < n_meas and s == meas_steps[mi]:
                snap[mi, i, 0] = a1.real * a1.real + a1.imag * a1.imag - 0.5
                snap[mi, i, 1] = a2.real * a2.real + a2.imag * a2.imag - 0.5
                snap[mi, i, 2] = a3.real * a3.real + a3.imag * a3.imag - 0.5
                mi += 1
            if s < n_steps and not dead:
                k11, k12, k13 = _wigner_rhs_scalar(a1, a2, a3, chi, j)
                h = 0.5 * dt
                k21, k22, k23 = _wigner_rhs_scalar(a1 + h * k11, a2 + h * k12, a3 + h * k13, chi, j)
                k31, k32, k33 = _wigner_rhs_scalar(a1 + h * k21, a2 + h * k22, a3 + h * k23, chi, j)
                k41, k42, k43 = _wigner_rhs_scalar(a1 + dt * k31, a2 + dt * k32, a3 + dt * k33, chi, j)
                w = dt / 6.0
                a1 = a1 + w * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
                a2 = a2 + w * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
                a3 = a3 + w * (k13 + 2.0 * k23 + 2.0 * k33 + k43)
                tot = (
                    a1.real * a1.real + a1.imag * a1.imag
                    + a2.real * a2.real + a2.imag * a2.imag
                    + a3.real * a3.real + a3.imag * a3.imag
                )
                if not np.isfinite(tot) or tot > guard:
                    dead = True
        alpha[i, 0] = a1
        alpha[i, 1] = a2
        alpha[i, 2] = a3
        diverged[i] = dead


@njit(cache=True)
def _pp_drift_scalar(a1, a2, a3, p1, p2, p3, chi, j):
    t2chi = 2j * chi
    d1 = -t2chi * p1 * a1 * a1 + 1j * j * a2
    d2 = -t2chi * p2 * a2 * a2 + 1j * j * (a1 + a3)
    d3 = -t2chi * p3 * a3 * a3 + 1j * j * a2
    e1 = t2chi * p1 * p1 * a1 - 1j * j * p2
    e2 = t2chi * p2 * p2 * a2 - 1j * j * (p1 + p3)
    e3 = t2chi * p3 * p3 * a3 - 1j * j * p2
    return d1, d2, d3, e1, e2, e3


@njit(cache=True)
def pp_chunk_block(
    alpha,
    alpha_plus,
    chi,
    j,
    dt,
    noise,
    step0,
    rec_steps,
    meas_steps,
    ri0,
    mi0,
    guard,
    use_midpoint,
    est,
    snap,
    diverged,
):
    """Advance a chunk of positive-P trajectories through one block of steps.

    noise: (n, n_block, 6) standard normals; one real noise per equation
    per step, entering as eta = N(0,1)/sqrt(dt) over a step of length dt.
    Noise coefficients sqrt(-2i chi alpha^2), sqrt(+2i chi alpha_plus^2)
    (principal root) are evaluated at the step start, keeping the Ito
    interpretation; with the semi-implicit scheme the increment is
    inserted at the midpoint of the drift iteration.

    Recording uses global step indices: record at rec_steps[ri] == step0+k
    before taking step k. The final-time record (s == n_steps) is done by
    the caller after the last block.
    """
    n = alpha.shape[0]
    n_block = noise.shape[1]
    n_rec = rec_steps.shape[0]
    n_meas = meas_steps.shape[0]
    sqdt = np.sqrt(dt)
    for i in range(n):
        a1 = alpha[i, 0]
        a2 = alpha[i, 1]
        a3 = alpha[i, 2]
        p1 = alpha_plus[i, 0]
        p2 = alpha_plus[i, 1]
        p3 = alpha_plus[i, 2]
        ri = ri0
        mi = mi0
        dead = diverged[i]
        for k in range(n_block):
            s = step0 + k
            if ri < n_rec and s == rec_steps[ri]:
                est[ri, i, 0] = (p1 * a1).real
                est[ri, i, 1] = (p2 * a2).real
                est[ri, i, 2] = (p3 * a3).real
                ri += 1
            while mi < n_meas and s == meas_steps[mi]:
                snap[mi, i, 0] = (p1 * a1).real
                snap[mi, i, 1] = (p2 * a2).real
                snap[mi, i, 2] = (p3 * a3).real
                mi += 1
            if dead:
                continue
            # Ito noise increments with coefficients at the step start
            x1 = np.sqrt(-2j * chi * a1 * a1) * (sqdt * noise[i, k, 0])
            y1 = np.sqrt(2j * chi * p1 * p1) * (sqdt * noise[i, k, 1])
            x2 = np.sqrt(-2j * chi * a2 * a2) * (sqdt * noise[i, k, 2])
            y2 = np.sqrt(2j * chi * p2 * p2) * (sqdt * noise[i, k, 3])
            x3 = np.sqrt(-2j * chi * a3 * a3) * (sqdt * noise[i, k, 4])
            y3 = np.sqrt(2j * chi * p3 * p3) * (sqdt * noise[i, k, 5])
            if use_midpoint:
                b1, b2, b3 = a1, a2, a3
                q1, q2, q3 = p1, p2, p3
                h = 0.5 * dt
                for _ in range(PP_MIDPOINT_ITERS):
                    d1, d2, d3, e1, e2, e3 = _pp_drift_scalar(b1, b2, b3, q1, q2, q3, chi, j)
                    b1 = a1 + h * d1 + 0.5 * x1
                    b2 = a2 + h * d2 + 0.5 * x2
                    b3 = a3 + h * d3 + 0.5 * x3
                    q1 = p1 + h * e1 + 0.5 * y1
                    q2 = p2 + h * e2 + 0.5 * y2
                    q3 = p3 + h * e3 + 0.5 * y3
                a1 = 2.0 * b1 - a1
                a2 = 2.0 * b2 - a2
                a3 = 2.0 * b3 - a3
                p1 = 2.0 * q1 - p1
                p2 = 2.0 * q2 - p2
                p3 = 2.0 * q3 - p3
            else:  # Euler-Maruyama
                d1, d2, d3, e1, e2, e3 = _pp_drift_scalar(a1, a2, a3, p1, p2, p3, chi, j)
                a1 = a1 + dt * d1 + x1
                a2 = a2 + dt * d2 + x2
                a3 = a3 + dt * d3 + x3
                p1 = p1 + dt * e1 + y1
                p2 = p2 + dt * e2 + y2
                p3 = p3 + dt * e3 + y3
            tot = (
                a1.real * a1.real + a1.imag * a1.imag
                + a2.real * a2.real + a2.imag * a2.imag
                + a3.real * a3.real + a3.imag * a3.imag
                + p1.real * p1.real + p1.imag * p1.imag
                + p2.real * p2.real + p2.imag * p2.imag
                + p3.real * p3.real + p3.imag * p3.imag
            )
            if not np.isfinite(tot) or tot > guard:
                dead = True
        alpha[i, 0] = a1
        alpha[i, 1] = a2
        alpha[i, 2] = a3
        alpha_plus[i, 0] = p1
        alpha_plus[i, 1] = p2
        alpha_plus[i, 2] = p3
        diverged[i] = dead


def wigner_chunk_numpy(alpha, chi, j, dt, n_steps, rec_steps, meas_steps, guard, est, snap, diverged):
    """Vectorized numpy reference for wigner_chunk (same semantics)."""

    def rhs(a):
        d = np.empty_like(a)
        k = -2j * chi * (a.real**2 + a.imag**2)
        d[:, 0] = k[:, 0] * a[:, 0] + 1j * j * a[:, 1]
        d[:, 1] = k[:, 1] * a[:, 1] + 1j * j * (a[:, 0] + a[:, 2])
        d[:, 2] = k[:, 2] * a[:, 2] + 1j * j * a[:, 1]
        return d

    a = alpha
    alive = ~diverged
    ri = mi = 0
    for s in range(n_steps + 1):
        if ri < len(rec_steps) and s == rec_steps[ri]:
            est[ri] = a.real**2 + a.imag**2 - 0.5
            ri += 1
        while mi < len(meas_steps) and s == meas_steps[mi]:
            snap[mi] = a.real**2 + a.imag**2 - 0.5
            mi += 1
        if s < n_steps:
            k1 = rhs(a)
            k2 = rhs(a + 0.5 * dt * k1)
            k3 = rhs(a + 0.5 * dt * k2)
            k4 = rhs(a + dt * k3)
            step = (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            a[alive] += step[alive]
            tot = np.sum(a.real**2 + a.imag**2, axis=1)
            alive &= np.isfinite(tot) & (tot <= guard)
    diverged[:] = ~alive


def pp_chunk_block_numpy(
    alpha, alpha_plus, chi, j, dt, noise, step0, rec_steps, meas_steps, ri0, mi0,
    guard, use_midpoint, est, snap, diverged,
):
    """Vectorized numpy reference for pp_chunk_block (same semantics)."""

    def drift(a, p):
        da = np.empty_like(a)
        dp = np.empty_like(p)
        da[:, 0] = -2j * chi * p[:, 0] * a[:, 0] ** 2 + 1j * j * a[:, 1]
        da[:, 1] = -2j * chi * p[:, 1] * a[:, 1] ** 2 + 1j * j * (a[:, 0] + a[:, 2])
        da[:, 2] = -2j * chi * p[:, 2] * a[:, 2] ** 2 + 1j * j * a[:, 1]
        dp[:, 0] = 2j * chi * p[:, 0] ** 2 * a[:, 0] - 1j * j * p[:, 1]
        dp[:, 1] = 2j * chi * p[:, 1] ** 2 * a[:, 1] - 1j * j * (p[:, 0] + p[:, 2])
        dp[:, 2] = 2j * chi * p[:, 2] ** 2 * a[:, 2] - 1j * j * p[:, 1]
        return da, dp

    a, p = alpha, alpha_plus
    alive = ~diverged
    sqdt = np.sqrt(dt)
    ri, mi = ri0, mi0
    for k in range(noise.shape[1]):
        s = step0 + k
        if ri < len(rec_steps) and s == rec_steps[ri]:
            est[ri] = (p * a).real
            ri += 1
        while mi < len(meas_steps) and s == meas_steps[mi]:
            snap[mi] = (p * a).real
            mi += 1
        xi = np.sqrt(-2j * chi * a**2) * (sqdt * noise[:, k, 0::2])
        yi = np.sqrt(2j * chi * p**2) * (sqdt * noise[:, k, 1::2])
        if use_midpoint:
            b, q = a.copy(), p.copy()
            h = 0.5 * dt
            for _ in range(PP_MIDPOINT_ITERS):
                da, dp = drift(b, q)
                b = a + h * da + 0.5 * xi
                q = p + h * dp + 0.5 * yi
            na = 2.0 * b - a
            np_ = 2.0 * q - p
        else:
            da, dp = drift(a, p)
            na = a + dt * da + xi
            np_ = p + dt * dp + yi
        a[alive] = na[alive]
        p[alive] = np_[alive]
        tot = np.sum(a.real**2 + a.imag**2 + p.real**2 + p.imag**2, axis=1)
        alive &= np.isfinite(tot) & (tot <= guard)
    diverged[:] = ~alive
