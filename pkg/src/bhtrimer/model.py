"""Three-well Bose-Hubbard chain: parameters, initial-state descriptions,
scenario configuration and the conserved mean-field functionals.

The model is the inline trimer with on-site collisional nonlinearity chi
and nearest-neighbour tunnelling J,

    H = chi * sum_i a_i^dag^2 a_i^2  -  J (a1^dag a2 + a2^dag a1
                                           + a2^dag a3 + a3^dag a2),

with hbar = 1 and J setting the time scale, so times are reported as the
dimensionless product J*t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

STATE_KINDS = ("fock", "coherent", "squeezed", "vacuum")
REPRESENTATIONS = ("wigner", "positive_p")
PP_SCHEMES = ("midpoint", "euler")

N_WELLS = 3


class ScenarioError(ValueError):
    """Raised for malformed or physically invalid scenario input."""


@dataclass(frozen=True)
class ModelParams:
    """Hamiltonian parameters. chi >= 0 (repulsive only), j_tunnel > 0."""

    chi: float
    j_tunnel: float = 1.0
    n_wells: int = N_WELLS

    def __post_init__(self):
        if not (self.chi >= 0.0 and math.isfinite(self.chi)):
            raise ScenarioError(f"chi must be finite and >= 0, got {self.chi}")
        if not (self.j_tunnel > 0.0 and math.isfinite(self.j_tunnel)):
            raise ScenarioError(f"j_tunnel must be finite and > 0, got {self.j_tunnel}")
        if self.n_wells != N_WELLS:
            raise ScenarioError(f"the chain is fixed at {N_WELLS} wells, got {self.n_wells}")


@dataclass(frozen=True)
class StateSpec:
    """Initial quantum state of one well.

    kind: fock | coherent | squeezed | vacuum
    n: mean atom number (exact integer occupation for fock)
    phase: mean-field phase in radians (coherent/squeezed)
    r: squeezing parameter; the amplitude quadrature X = a + a^dag has
       variance exp(-r), the phase quadrature exp(+r).
    """

    kind: str
    n: float = 0.0
    phase: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ScenarioError(
                f"unknown state kind {self.kind!r}; valid kinds: {', '.join(STATE_KINDS)}"
            )
        if not (math.isfinite(self.n) and self.n >= 0.0):
            raise ScenarioError(f"mean number must be finite and >= 0, got {self.n}")
        if not math.isfinite(self.phase):
            raise ScenarioError("phase must be finite")
        if not math.isfinite(self.r):
            raise ScenarioError("squeezing parameter r must be finite")
        if self.kind == "fock" and self.n != int(self.n):
            raise ScenarioError(f"fock occupation must be an exact integer, got {self.n}")
        if self.kind == "vacuum" and self.n != 0.0:
            raise ScenarioError("vacuum has n = 0")

    @property
    def mean_amplitude(self) -> complex:
        """sqrt(n) * exp(i*phase); zero mean field for fock/vacuum."""
        if self.kind in ("coherent", "squeezed"):
            return math.sqrt(self.n) * complex(math.cos(self.phase), math.sin(self.phase))
        return 0j


@dataclass(frozen=True)
class Scenario:
    """Full description of one ensemble run."""

    params: ModelParams
    wells: tuple[StateSpec, StateSpec, StateSpec]
    representation: str = "wigner"
    t_final: float = 1.11
    dt: float = 1e-3
    n_traj: int = 10_000
    seed: int = 0
    measure_times: tuple[float, ...] = ()
    bin_width: float = 1.0
    measure_well: int = 2
    sample_stride: int = 0  # 0 -> auto (about every 0.01 in J*t)
    pp_scheme: str = "midpoint"
    chunk_size: int = 8192
    guard_factor: float = 1e4

    def __post_init__(self):
        if len(self.wells) != N_WELLS:
            raise ScenarioError(f"exactly {N_WELLS} wells required")
        if self.representation not in REPRESENTATIONS:
            raise ScenarioError(
                f"unknown representation {self.representation!r}; "
                f"valid: {', '.join(REPRESENTATIONS)}"
            )
        if not (0.0 < self.dt <= self.t_final):
            raise ScenarioError(f"need 0 < dt <= t_final, got dt={self.dt}, t_final={self.t_final}")
        if self.n_traj < 1:
            raise ScenarioError(f"n_traj must be >= 1, got {self.n_traj}")
        for t in self.measure_times:
            if not (0.0 <= t <= self.t_final):
                raise ScenarioError(f"measure time {t} outside [0, {self.t_final}]")
        if self.bin_width <= 0.0:
            raise ScenarioError("bin_width must be positive")
        if self.measure_well not in (1, 2, 3):
            raise ScenarioError("measure_well must be 1, 2 or 3")
        if self.sample_stride < 0:
            raise ScenarioError("sample_stride must be >= 0")
        if self.pp_scheme not in PP_SCHEMES:
            raise ScenarioError(f"unknown pp_scheme {self.pp_scheme!r}")
        if self.chunk_size < 1:
            raise ScenarioError("chunk_size must be >= 1")
        if self.guard_factor <= 1.0:
            raise ScenarioError("guard_factor must exceed 1")

    @property
    def mean_total_number(self) -> float:
        return sum(w.n for w in self.wells)

    def with_overrides(self, **kwargs) -> "Scenario":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class WignerField:
    """Instantaneous Wigner-representation configuration: 3 complex amplitudes.

    Averages of products of the amplitudes estimate symmetrically ordered
    operator products, so the atom-number estimator is |alpha_i|^2 - 1/2.
    """

    alpha: np.ndarray  # shape (3,), complex128

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=np.complex128)
        if a.shape != (N_WELLS,):
            raise ScenarioError(f"field must have shape ({N_WELLS},)")
        object.__setattr__(self, "alpha", a)

    @property
    def numbers(self) -> np.ndarray:
        return np.abs(self.alpha) ** 2 - 0.5


@dataclass(frozen=True)
class PPField:
    """Positive-P configuration: doubled variables (alpha, alpha_plus).

    alpha_plus corresponds to a^dag but is not constrained to be the
    complex conjugate of alpha; the number estimator is Re(alpha_plus*alpha).
    """

    alpha: np.ndarray
    alpha_plus: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=np.complex128)
        ap = np.asarray(self.alpha_plus, dtype=np.complex128)
        if a.shape != (N_WELLS,) or ap.shape != (N_WELLS,):
            raise ScenarioError(f"field must have shape ({N_WELLS},)")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "alpha_plus", ap)

    @property
    def numbers(self) -> np.ndarray:
        return (self.alpha_plus * self.alpha).real


def classical_energy(field: WignerField, params: ModelParams) -> float:
    """Mean-field energy functional.

    E = chi * sum_i |alpha_i|^4 - 2 J Re(alpha1* alpha2 + alpha2* alpha3).
    Conserved exactly by the deterministic Wigner flow.
    """
    a = field.alpha if isinstance(field, WignerField) else np.asarray(field, dtype=np.complex128)
    n = np.abs(a) ** 2
    hop = 2.0 * (np.conj(a[0]) * a[1] + np.conj(a[1]) * a[2]).real
    return float(params.chi * np.sum(n**2) - params.j_tunnel * hop)


def total_number(field) -> float:
    """Conserved total-number functional.

    Wigner: sum_i |alpha_i|^2 (exact per trajectory).
    Positive-P: Re sum_i alpha_plus_i alpha_i (conserved in ensemble mean).
    """
    if isinstance(field, PPField):
        return float(np.sum(field.alpha_plus * field.alpha).real)
    a = field.alpha if isinstance(field, WignerField) else np.asarray(field, dtype=np.complex128)
    return float(np.sum(np.abs(a) ** 2))
