"""Time evolution: deterministic truncated-Wigner flow, positive-P Ito
SDEs with multiplicative complex noise, and seeded parallel ensembles.

Wigner equations of motion (classical flow, quantum noise only in the
sampled initial conditions):

    da1/dt = -2i chi |a1|^2 a1 + iJ a2
    da2/dt = -2i chi |a2|^2 a2 + iJ (a1 + a3)
    da3/dt = -2i chi |a3|^2 a3 + iJ a2

The middle-well coupling is iJ(a1 + a3): it is the only choice consistent
with the Hamiltonian, with the positive-P drift, and with total-number
conservation (see README).

Positive-P equations double the variables (alpha, alpha_plus) and add
noise terms sqrt(-2i chi alpha^2) eta and sqrt(+2i chi alpha_plus^2) eta'
with six independent real delta-correlated Gaussian noises per trajectory.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import ModelParams, PPField, Scenario, ScenarioError, WignerField
from .sampling import RngStream, sample_positive_p, sample_wigner

WORKERS_ENV = "BHTRIMER_WORKERS"

# steps of noise generated at a time for positive-P chunks (memory cap)
_PP_NOISE_BLOCK = 256


class DivergenceError(RuntimeError):
    """All trajectories of an ensemble diverged."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform step grid; times are reported as scaled time J*t."""

    dt: float
    n_steps: int
    sample_stride: int = 1

    def __post_init__(self):
        if self.dt <= 0 or self.n_steps < 1 or self.sample_stride < 1:
            raise ScenarioError("invalid time grid")

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "TimeGrid":
        n_steps = int(round(scenario.t_final / scenario.dt))
        if n_steps < 1 or abs(n_steps * scenario.dt - scenario.t_final) > 1e-9 * max(
            1.0, scenario.t_final
        ):
            raise ScenarioError(
                f"t_final={scenario.t_final} is not an integer number of steps dt={scenario.dt}"
            )
        stride = scenario.sample_stride
        if stride == 0:
            stride = max(1, int(round(0.01 / scenario.dt)))
        return cls(dt=scenario.dt, n_steps=n_steps, sample_stride=stride)

    @property
    def record_steps(self) -> np.ndarray:
        steps = np.arange(0, self.n_steps + 1, self.sample_stride, dtype=np.int64)
        if steps[-1] != self.n_steps:
            steps = np.append(steps, self.n_steps)
        return steps

    @property
    def record_times(self) -> np.ndarray:
        return self.record_steps * self.dt

    def step_for_time(self, t: float) -> int:
        s = int(round(t / self.dt))
        if not (0 <= s <= self.n_steps) or abs(s * self.dt - t) > 0.5 * self.dt:
            raise ScenarioError(f"measure time {t} does not fall on the step grid")
        return s


@dataclass
class EnsembleResult:
    """Accumulated ensemble output.

    sum_est / sum_est_sq hold per-well sums of the number estimator and
    its square at each recorded time (completed trajectories only).
    snapshots maps each measure time to the raw per-trajectory number
    estimators (n_completed, 3) for analysis-time binning.
    """

    scenario: Scenario
    times: np.ndarray
    sum_est: np.ndarray
    sum_est_sq: np.ndarray
    n_completed: int
    n_discarded: int
    snapshots: dict[float, np.ndarray]

    @property
    def discard_fraction(self) -> float:
        return self.n_discarded / self.scenario.n_traj

    @property
    def unreliable(self) -> bool:
        # positive-P results are suspect once discards exceed 0.1%
        return self.discard_fraction > 1e-3


def wigner_rhs(field: WignerField, params: ModelParams) -> np.ndarray:
    """Right-hand side of the deterministic Wigner flow."""
    a = field.alpha if isinstance(field, WignerField) else np.asarray(field, dtype=np.complex128)
    d = np.empty(3, dtype=np.complex128)
    k = -2j * params.chi * (a.real**2 + a.imag**2)
    j = params.j_tunnel
    d[0] = k[0] * a[0] + 1j * j * a[1]
    d[1] = k[1] * a[1] + 1j * j * (a[0] + a[2])
    d[2] = k[2] * a[2] + 1j * j * a[1]
    return d


def wigner_step(field: WignerField, params: ModelParams, dt: float) -> WignerField:
    """One classical RK4 step of the Wigner flow (global error O(dt^4))."""
    a = field.alpha if isinstance(field, WignerField) else np.asarray(field, dtype=np.complex128)
    k1 = wigner_rhs(a, params)
    k2 = wigner_rhs(a + 0.5 * dt * k1, params)
    k3 = wigner_rhs(a + 0.5 * dt * k2, params)
    k4 = wigner_rhs(a + dt * k3, params)
    out = a + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out.view(np.float64))):
        raise DivergenceError("Wigner trajectory diverged")
    return WignerField(out)


def pp_drift(field: PPField, params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic part of the positive-P equations."""
    a, p = field.alpha, field.alpha_plus
    chi, j = params.chi, params.j_tunnel
    da = np.empty(3, dtype=np.complex128)
    dp = np.empty(3, dtype=np.complex128)
    da[0] = -2j * chi * p[0] * a[0] ** 2 + 1j * j * a[1]
    da[1] = -2j * chi * p[1] * a[1] ** 2 + 1j * j * (a[0] + a[2])
    da[2] = -2j * chi * p[2] * a[2] ** 2 + 1j * j * a[1]
    dp[0] = 2j * chi * p[0] ** 2 * a[0] - 1j * j * p[1]
    dp[1] = 2j * chi * p[1] ** 2 * a[1] - 1j * j * (p[0] + p[2])
    dp[2] = 2j * chi * p[2] ** 2 * a[2] - 1j * j * p[1]
    return da, dp


def pp_step(
    field: PPField,
    params: ModelParams,
    dt: float,
    rng: RngStream,
    scheme: str = "midpoint",
) -> PPField:
    """One step of the positive-P Ito SDEs.

    The six real noises are discretized as N(0,1)/sqrt(dt); the noise
    coefficients sqrt(-2i chi alpha^2) and sqrt(+2i chi alpha_plus^2)
    (principal root) are evaluated at the step start (Ito). With the
    semi-implicit midpoint scheme the drift is iterated to the step
    midpoint, where the noise increment is inserted at half weight.
    """
    a0, p0 = field.alpha, field.alpha_plus
    chi = params.chi
    eta = rng.normals(6)
    sqdt = np.sqrt(dt)
    xi = np.sqrt(-2j * chi * a0**2) * (sqdt * eta[0::2])
    yi = np.sqrt(2j * chi * p0**2) * (sqdt * eta[1::2])
    if scheme == "midpoint":
        b, q = a0.copy(), p0.copy()
        h = 0.5 * dt
        for _ in range(kernels.PP_MIDPOINT_ITERS):
            da, dp = pp_drift(PPField(b, q), params)
            b = a0 + h * da + 0.5 * xi
            q = p0 + h * dp + 0.5 * yi
        a, p = 2.0 * b - a0, 2.0 * q - p0
    elif scheme == "euler":
        da, dp = pp_drift(field, params)
        a, p = a0 + dt * da + xi, p0 + dt * dp + yi
    else:
        raise ScenarioError(f"unknown pp scheme {scheme!r}")
    if not (np.all(np.isfinite(a.view(np.float64))) and np.all(np.isfinite(p.view(np.float64)))):
        raise DivergenceError("positive-P trajectory diverged")
    return PPField(a, p)


def _guard_bound(scenario: Scenario) -> float:
    # flag a trajectory once its phase-space norm blows past this bound
    return scenario.guard_factor * max(scenario.mean_total_number, 1.0)


def _run_chunk(scenario: Scenario, start: int, stop: int, use_numba: bool):
    """Integrate trajectories [start, stop); return chunk-partial sums."""
    grid = TimeGrid.from_scenario(scenario)
    n = stop - start
    rec_steps = grid.record_steps
    meas_steps = np.array(
        [grid.step_for_time(t) for t in scenario.measure_times], dtype=np.int64
    )
    order = np.argsort(meas_steps, kind="stable")
    meas_sorted = meas_steps[order]
    est = np.empty((len(rec_steps), n, 3), dtype=np.float64)
    snap = np.empty((len(meas_sorted), n, 3), dtype=np.float64)
    diverged = np.zeros(n, dtype=np.bool_)
    guard = _guard_bound(scenario)
    params = scenario.params
    wigner = scenario.representation == "wigner"

    if wigner:
        alpha = np.empty((n, 3), dtype=np.complex128)
        for i in range(n):
            rng = RngStream(scenario.seed, start + i)
            for w in range(3):
                alpha[i, w] = sample_wigner(scenario.wells[w], rng)
        fn = kernels.wigner_chunk if use_numba else kernels.wigner_chunk_numpy
        fn(alpha, params.chi, params.j_tunnel, grid.dt, grid.n_steps,
           rec_steps, meas_sorted, guard, est, snap, diverged)
    else:
        alpha = np.empty((n, 3), dtype=np.complex128)
        alpha_plus = np.empty((n, 3), dtype=np.complex128)
        streams = []
        for i in range(n):
            rng = RngStream(scenario.seed, start + i)
            for w in range(3):
                alpha[i, w], alpha_plus[i, w] = sample_positive_p(scenario.wells[w], rng)
            streams.append(rng)
        fn = kernels.pp_chunk_block if use_numba else kernels.pp_chunk_block_numpy
        use_mid = scenario.pp_scheme == "midpoint"
        step0 = 0
        while step0 < grid.n_steps:
            nb = min(_PP_NOISE_BLOCK, grid.n_steps - step0)
            noise = np.empty((n, nb, 6), dtype=np.float64)
            for i in range(n):
                noise[i] = streams[i].normals((nb, 6))
            ri0 = int(np.searchsorted(rec_steps, step0))
            mi0 = int(np.searchsorted(meas_sorted, step0))
            fn(alpha, alpha_plus, params.chi, params.j_tunnel, grid.dt, noise,
               step0, rec_steps, meas_sorted, ri0, mi0, guard, use_mid,
               est, snap, diverged)
            step0 += nb
        # final-time records (global step == n_steps)
        final_est = (alpha_plus * alpha).real
        if rec_steps[-1] == grid.n_steps:
            est[-1] = final_est
        for k, s in enumerate(meas_sorted):
            if s == grid.n_steps:
                snap[k] = final_est

    keep = ~diverged
    n_div = int(diverged.sum())
    sum_est = est[:, keep, :].sum(axis=1)
    sum_sq = (est[:, keep, :] ** 2).sum(axis=1)
    # undo the measure-time sort so snapshots line up with scenario order
    snap_out = snap[np.argsort(order, kind="stable")][:, keep, :]
    return sum_est, sum_sq, snap_out, n_div


def _run_chunk_star(args):
    return _run_chunk(*args)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_ensemble(
    scenario: Scenario, workers: int | None = None, use_numba: bool | None = None
) -> EnsembleResult:
    """Run the full seeded ensemble.

    Trajectories are partitioned into fixed chunks by index; each
    trajectory draws only from its own (seed, index) stream and chunk
    partial sums are reduced in index order, so the result is
    bit-reproducible for a given seed regardless of worker count.
    """
    if workers is None:
        workers = default_workers()
    if use_numba is None:
        use_numba = kernels.HAVE_NUMBA
    grid = TimeGrid.from_scenario(scenario)
    chunk = scenario.chunk_size
    bounds = [(s, min(s + chunk, scenario.n_traj)) for s in range(0, scenario.n_traj, chunk)]
    tasks = [(scenario, a, b, use_numba) for a, b in bounds]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk_star, tasks, chunksize=1))
    else:
        parts = [_run_chunk(*t) for t in tasks]

    rec_times = grid.record_times
    sum_est = np.zeros((len(rec_times), 3), dtype=np.float64)
    sum_sq = np.zeros_like(sum_est)
    snaps = [[] for _ in scenario.measure_times]
    n_div = 0
    for p_est, p_sq, p_snap, p_div in parts:
        sum_est += p_est
        sum_sq += p_sq
        n_div += p_div
        for k in range(len(scenario.measure_times)):
            snaps[k].append(p_snap[k])
    n_completed = scenario.n_traj - n_div
    if n_completed == 0:
        raise DivergenceError("all trajectories diverged")
    snapshots = {
        t: (np.concatenate(snaps[k], axis=0) if snaps[k] else np.empty((0, 3)))
        for k, t in enumerate(scenario.measure_times)
    }
    return EnsembleResult(
        scenario=scenario,
        times=rec_times,
        sum_est=sum_est,
        sum_est_sq=sum_sq,
        n_completed=n_completed,
        n_discarded=n_div,
        snapshots=snapshots,
    )
