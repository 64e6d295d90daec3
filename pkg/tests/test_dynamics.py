import math

import numpy as np
import pytest
from scipy.linalg import expm

from bhtrimer import (
    ModelParams,
    PPField,
    RngStream,
    Scenario,
    StateSpec,
    TimeGrid,
    WignerField,
    classical_energy,
    moment_series,
    pp_step,
    run_ensemble,
    total_number,
    wigner_rhs,
    wigner_step,
)
from bhtrimer import kernels
from bhtrimer.dynamics import _run_chunk

COUPLING = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)


def linear_solution(alpha0, j, t):
    """Closed form for chi = 0: alpha(t) = exp(i J M t) alpha0."""
    return expm(1j * j * COUPLING * t) @ alpha0


def test_wigner_rhs_examples():
    p = ModelParams(chi=0.0)
    d = wigner_rhs(WignerField(np.array([1, 0, 0], dtype=complex)), p)
    np.testing.assert_allclose(d, [0, 1j, 0])
    chi = 2e-3
    n = 50
    d = wigner_rhs(
        WignerField(np.array([math.sqrt(n), 0, 0], dtype=complex)),
        ModelParams(chi=chi, j_tunnel=1e-300),
    )
    assert d[0] == pytest.approx(-2j * chi * n * math.sqrt(n))
    # antisymmetric mode does not feed the middle well
    a = 3.0 + 1.0j
    d = wigner_rhs(WignerField(np.array([a, 0, -a])), ModelParams(chi=5e-3))
    assert d[1] == 0


def test_wigner_step_matches_linear_oracle():
    p = ModelParams(chi=0.0, j_tunnel=1.0)
    a = np.array([10.0, 0.0, 10.0], dtype=complex)
    f = WignerField(a)
    dt = 1e-3
    for _ in range(1000):
        f = wigner_step(f, p, dt)
    exact = linear_solution(a, 1.0, 1.0)
    np.testing.assert_allclose(f.alpha, exact, atol=1e-10)


def test_wigner_step_kerr_oracle():
    chi = 1e-2
    p = ModelParams(chi=chi, j_tunnel=1e-300)  # isolate the Kerr term
    a0 = 7.0 + 0.0j
    f = WignerField(np.array([a0, 0, 0]))
    dt = 1e-3
    for _ in range(1000):
        f = wigner_step(f, p, dt)
    assert abs(f.alpha[0]) == pytest.approx(abs(a0), rel=1e-12)
    expected_phase = -2 * chi * abs(a0) ** 2 * 1.0
    assert math.remainder(np.angle(f.alpha[0]) - expected_phase, 2 * math.pi) == pytest.approx(
        0.0, abs=1e-8
    )


def test_wigner_step_fourth_order_convergence():
    p = ModelParams(chi=1e-3)
    a = np.array([5.0 + 1j, 0.5, -4.0 + 0.5j])

    def err(dt, n):
        f = WignerField(a.copy())
        for _ in range(n):
            f = wigner_step(f, p, dt)
        ref = WignerField(a.copy())
        for _ in range(8 * n):  # dt/8 reference
            ref = wigner_step(ref, p, dt / 8)
        return np.max(np.abs(f.alpha - ref.alpha))

    e1 = err(0.02, 50)
    e2 = err(0.01, 100)
    assert 10 < e1 / e2 < 22  # ~16x for a 4th-order scheme


def test_pp_chi_zero_reduces_to_linear():
    p = ModelParams(chi=0.0)
    a0 = np.array([3.0, 0.0, 1.0 + 2.0j], dtype=complex)
    f = PPField(a0.copy(), np.conj(a0))
    rng = RngStream(1, 0)
    dt = 1e-3
    for _ in range(1000):
        f = pp_step(f, p, dt, rng)
    exact = linear_solution(a0, 1.0, 1.0)
    # midpoint is a second-order scheme: O(dt^2) global error
    np.testing.assert_allclose(f.alpha, exact, atol=1e-5)
    np.testing.assert_allclose(f.alpha_plus, np.conj(f.alpha), atol=1e-10)


def test_pp_step_deterministic():
    p = ModelParams(chi=1e-3)
    a0 = np.array([5.0, 0.0, 5.0], dtype=complex)

    def run():
        f = PPField(a0.copy(), np.conj(a0))
        rng = RngStream(33, 7)
        for _ in range(100):
            f = pp_step(f, p, 1e-3, rng)
        return f

    f1, f2 = run(), run()
    np.testing.assert_array_equal(f1.alpha, f2.alpha)
    np.testing.assert_array_equal(f1.alpha_plus, f2.alpha_plus)


def test_pp_euler_scheme_available():
    p = ModelParams(chi=1e-3)
    a0 = np.array([5.0, 0.0, 5.0], dtype=complex)
    f = PPField(a0.copy(), np.conj(a0))
    g = pp_step(f, p, 1e-3, RngStream(2, 0), scheme="euler")
    h = pp_step(f, p, 1e-3, RngStream(2, 0), scheme="midpoint")
    assert not np.array_equal(g.alpha, h.alpha)
    np.testing.assert_allclose(g.alpha, h.alpha, atol=1e-4)


def _fock_scenario(**kw):
    base = dict(
        params=ModelParams(chi=1e-3),
        wells=(StateSpec("fock", 100), StateSpec("vacuum"), StateSpec("fock", 100)),
        t_final=0.5,
        n_traj=2000,
        seed=101,
        sample_stride=50,
    )
    base.update(kw)
    return Scenario(**base)


def test_mirror_symmetry():
    s = Scenario(
        params=ModelParams(chi=1e-3),
        wells=(StateSpec("fock", 120), StateSpec("vacuum"), StateSpec("fock", 80)),
        t_final=0.8,
        n_traj=20000,
        seed=55,
        sample_stride=100,
    )
    swapped = s.with_overrides(wells=(s.wells[2], s.wells[1], s.wells[0]))
    m1 = moment_series(run_ensemble(s))
    m2 = moment_series(run_ensemble(swapped))
    for a, b in ((0, 2), (1, 1), (2, 0)):
        err = np.hypot(m1.stderr[:, a], m2.stderr[:, b])
        assert np.all(np.abs(m1.mean[:, a] - m2.mean[:, b]) <= 4 * err + 1e-9)


def test_worker_count_does_not_change_results():
    s = _fock_scenario(chunk_size=500)
    r1 = run_ensemble(s, workers=1)
    r2 = run_ensemble(s, workers=2)
    np.testing.assert_array_equal(r1.sum_est, r2.sum_est)
    np.testing.assert_array_equal(r1.sum_est_sq, r2.sum_est_sq)


def test_pp_ensemble_deterministic_across_workers():
    s = _fock_scenario(representation="positive_p", chunk_size=500, n_traj=1500)
    r1 = run_ensemble(s, workers=1)
    r2 = run_ensemble(s, workers=3)
    np.testing.assert_array_equal(r1.sum_est, r2.sum_est)
    assert r1.n_discarded == r2.n_discarded


def test_numba_and_numpy_kernels_agree():
    if not kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    for rep in ("wigner", "positive_p"):
        s = _fock_scenario(representation=rep, n_traj=300, measure_times=(0.5,))
        fast = _run_chunk(s, 0, 300, True)
        slow = _run_chunk(s, 0, 300, False)
        np.testing.assert_allclose(fast[0], slow[0], rtol=1e-9)
        np.testing.assert_allclose(fast[2], slow[2], rtol=1e-9, atol=1e-12)
        assert fast[3] == slow[3]


def test_per_trajectory_conservation():
    p = ModelParams(chi=1e-3)
    rng = np.random.default_rng(3)
    for _ in range(5):
        a = rng.standard_normal(3) * 5 + 1j * rng.standard_normal(3) * 5
        f = WignerField(a)
        n0 = total_number(f)
        e0 = classical_energy(f, p)
        for _ in range(2000):  # J*t = 2 at dt = 1e-3
            f = wigner_step(f, p, 1e-3)
        assert abs(total_number(f) - n0) < 1e-6 * n0
        assert abs(classical_energy(f, p) - e0) < 1e-6 * max(abs(e0), 1.0)


def test_time_grid():
    s = _fock_scenario(t_final=1.11, dt=1e-3, sample_stride=0)
    g = TimeGrid.from_scenario(s)
    assert g.n_steps == 1110
    assert g.sample_stride == 10
    assert g.record_steps[0] == 0 and g.record_steps[-1] == 1110
    assert g.step_for_time(1.11) == 1110
    # times within half a step snap onto the grid; others are rejected
    assert g.step_for_time(1.1104) == 1110
    with pytest.raises(Exception):
        g.step_for_time(2.0)


def test_snapshot_shapes_and_counts():
    s = _fock_scenario(measure_times=(0.0, 0.5), n_traj=700, chunk_size=256)
    r = run_ensemble(s)
    assert r.n_completed + r.n_discarded == 700
    assert set(r.snapshots) == {0.0, 0.5}
    assert r.snapshots[0.5].shape == (r.n_completed, 3)
    # t=0 snapshot reproduces the exact fock ring estimator
    np.testing.assert_allclose(r.snapshots[0.0][:, 0], 100.0, rtol=1e-12)
