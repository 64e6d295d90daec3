"""Initial-state sampling in the Wigner and positive-P representations.

Wigner draws target symmetrically ordered moments (<|alpha|^2> = n + 1/2);
positive-P draws target normally ordered moments (<alpha_plus alpha> = n).

Each trajectory owns an independent, reproducible random stream derived
from the (master seed, trajectory index) pair, so results do not depend on
how trajectories are distributed over workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import PPField, Scenario, StateSpec, WignerField

_TWO_PI = 2.0 * math.pi


@dataclass
class RngStream:
    """Counter-based random stream keyed by (master seed, trajectory index).

    The same (seed, index) pair always yields the identical variate
    sequence: initial-state draws first, then the dynamical noises in step
    order. Streams are not shared between threads; each trajectory gets
    its own.
    """

    seed: int
    index: int
    gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        key = np.array([self.seed & 0xFFFFFFFFFFFFFFFF, self.index], dtype=np.uint64)
        self.gen = np.random.Generator(np.random.Philox(key=key))

    def normals(self, shape) -> np.ndarray:
        return self.gen.standard_normal(shape)

    def uniform(self) -> float:
        return float(self.gen.random())


def sample_wigner(spec: StateSpec, rng: RngStream) -> complex:
    """One Wigner-representation draw for a single well.

    vacuum/coherent: mean + complex Gaussian with Var(Re) = Var(Im) = 1/4.
    squeezed: quadrature deviations with Var(X) = exp(-r), Var(Y) = exp(+r),
        squeezed axis rotated to the mean-field phase.
    fock: fixed-modulus ring |alpha|^2 = n + 1/2 with uniform phase (the
        large-n approximation; the exact Fock Wigner function is not
        positive and cannot be sampled directly).
    """
    if spec.kind == "fock":
        theta = _TWO_PI * rng.uniform()
        return math.sqrt(spec.n + 0.5) * complex(math.cos(theta), math.sin(theta))
    eta = rng.normals(2)
    if spec.kind == "squeezed":
        dev = 0.5 * complex(
            math.exp(-0.5 * spec.r) * eta[0], math.exp(0.5 * spec.r) * eta[1]
        )
        rot = complex(math.cos(spec.phase), math.sin(spec.phase))
        return spec.mean_amplitude + rot * dev
    # vacuum and coherent share the symmetric 1/4-variance cloud
    return spec.mean_amplitude + 0.5 * complex(eta[0], eta[1])


def sample_wigner_batch(spec: StateSpec, rng: RngStream, size: int) -> np.ndarray:
    """Vectorized equivalent of `size` successive sample_wigner draws."""
    if spec.kind == "fock":
        theta = _TWO_PI * rng.gen.random(size)
        return math.sqrt(spec.n + 0.5) * (np.cos(theta) + 1j * np.sin(theta))
    eta = rng.normals((size, 2))
    if spec.kind == "squeezed":
        dev = 0.5 * (math.exp(-0.5 * spec.r) * eta[:, 0] + 1j * math.exp(0.5 * spec.r) * eta[:, 1])
        rot = complex(math.cos(spec.phase), math.sin(spec.phase))
        return spec.mean_amplitude + rot * dev
    return spec.mean_amplitude + 0.5 * (eta[:, 0] + 1j * eta[:, 1])


def sample_positive_p(spec: StateSpec, rng: RngStream) -> tuple[complex, complex]:
    """One positive-P draw (alpha, alpha_plus) for a single well.

    Coherent states are delta distributions: (alpha0, alpha0*) exactly.
    Fock and squeezed states use the canonical construction: a center mu
    drawn from the state's Husimi-Q function plus a complex Gaussian
    offset delta with Var(Re) = Var(Im) = 1/2, split as
        alpha = mu + delta,   alpha_plus = (mu - delta)*,
    which reproduces all normally ordered moments exactly.
    """
    if spec.kind == "vacuum":
        return 0j, 0j
    if spec.kind == "coherent":
        a0 = spec.mean_amplitude
        return a0, a0.conjugate()
    if spec.kind == "fock":
        # Q function of |n> gives |mu|^2 ~ Gamma(n + 1), uniform phase.
        mod2 = rng.gen.gamma(spec.n + 1.0, 1.0)
        theta = _TWO_PI * rng.uniform()
        mu = math.sqrt(mod2) * complex(math.cos(theta), math.sin(theta))
    else:  # squeezed: Q-function Gaussian, quadrature variances exp(-/+r) + 1
        eta = rng.normals(2)
        dev = 0.5 * complex(
            math.sqrt(math.exp(-spec.r) + 1.0) * eta[0],
            math.sqrt(math.exp(spec.r) + 1.0) * eta[1],
        )
        rot = complex(math.cos(spec.phase), math.sin(spec.phase))
        mu = spec.mean_amplitude + rot * dev
    eta2 = rng.normals(2)
    delta = complex(eta2[0], eta2[1]) / math.sqrt(2.0)
    return mu + delta, (mu - delta).conjugate()


def sample_positive_p_batch(spec: StateSpec, rng: RngStream, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized positive-P draws for moment studies.

    Distribution-identical to repeated sample_positive_p calls, but the
    stream is consumed in type-blocks rather than per draw, so the values
    differ from the sequential path for fock/squeezed; ensembles always
    use the per-draw sampler.
    """
    if spec.kind == "vacuum":
        z = np.zeros(size, dtype=np.complex128)
        return z, z.copy()
    if spec.kind == "coherent":
        a0 = spec.mean_amplitude
        return np.full(size, a0, dtype=np.complex128), np.full(size, np.conj(a0), dtype=np.complex128)
    if spec.kind == "fock":
        mod2 = rng.gen.gamma(spec.n + 1.0, 1.0, size=size)
        theta = _TWO_PI * rng.gen.random(size)
        mu = np.sqrt(mod2) * np.exp(1j * theta)
    else:
        eta = rng.normals((size, 2))
        dev = 0.5 * (
            math.sqrt(math.exp(-spec.r) + 1.0) * eta[:, 0]
            + 1j * math.sqrt(math.exp(spec.r) + 1.0) * eta[:, 1]
        )
        rot = complex(math.cos(spec.phase), math.sin(spec.phase))
        mu = spec.mean_amplitude + rot * dev
    eta2 = rng.normals((size, 2))
    delta = (eta2[:, 0] + 1j * eta2[:, 1]) / math.sqrt(2.0)
    return mu + delta, np.conj(mu - delta)


def sample_initial_fields(scenario: Scenario, rng: RngStream):
    """Draw one initial field for the whole trimer (wells independent)."""
    if scenario.representation == "wigner":
        alpha = np.array([sample_wigner(w, rng) for w in scenario.wells], dtype=np.complex128)
        return WignerField(alpha)
    pairs = [sample_positive_p(w, rng) for w in scenario.wells]
    alpha = np.array([p[0] for p in pairs], dtype=np.complex128)
    alpha_plus = np.array([p[1] for p in pairs], dtype=np.complex128)
    return PPField(alpha, alpha_plus)
