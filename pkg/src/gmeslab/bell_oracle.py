"""Measurement-settings search for the two-qutrit Bell value.

The Bell combination is

    B = Re[Q11 + Q12 - Q21 + Q22] + (1/sqrt(3)) Im[Q11 - Q12 - Q21 + Q22]

with correlations Q_ij = <psi| A_i (x) B_j |psi> for the Schmidt-diagonal
state |psi> = sum_k a_k |kk> and unitary three-outcome observables with
spectrum {1, w, w^2}, w = exp(2 pi i / 3).  A setting is stored as 8 real
generator coefficients, so a full measurement choice is 32 numbers.

``maximize_bell`` deliberately does not roam the whole 32-parameter manifold.
The closed form ``bell_max_analytic`` is a ceiling only for interferometric
settings: phase-decorated cyclic shifts D S D+ with the decoration difference
between each party's two settings frozen at the configuration that is optimal
for the uniform state (``canonical_settings``).  The search scans the six
local reference phases (three per party); on that family the Bell value is a
cosine combination that never exceeds the closed form and reaches it at
aligned phases.  The unrestricted manifold attains strictly larger values for
skewed states (up to the three-outcome optimum near 2.9149), so searching it
would say nothing about the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from .errors import DomainError
from .metrics import SQRT3, QutritState

_W = np.exp(2j * np.pi / 3.0)

#: Reference observable: diagonal with the three cube roots of unity.
REF_OBSERVABLE = np.diag([1.0 + 0.0j, _W, _W**2])
REF_OBSERVABLE.setflags(write=False)


def _gell_mann() -> np.ndarray:
    g = np.zeros((8, 3, 3), dtype=complex)
    g[0, 0, 1] = g[0, 1, 0] = 1.0
    g[1, 0, 1] = -1j
    g[1, 1, 0] = 1j
    g[2, 0, 0] = 1.0
    g[2, 1, 1] = -1.0
    g[3, 0, 2] = g[3, 2, 0] = 1.0
    g[4, 0, 2] = -1j
    g[4, 2, 0] = 1j
    g[5, 1, 2] = g[5, 2, 1] = 1.0
    g[6, 1, 2] = -1j
    g[6, 2, 1] = 1j
    g[7] = np.diag([1.0, 1.0, -2.0]) / math.sqrt(3.0)
    g.setflags(write=False)
    return g


#: The eight traceless Hermitian generators spanning the observable parameterization.
GENERATORS = _gell_mann()

#: Cyclic raising matrix: SHIFT |l> = |l+1 mod 3>.
SHIFT = np.roll(np.eye(3, dtype=complex), 1, axis=0)
SHIFT.setflags(write=False)

# F (x) index swap diagonalizes the shift: SHIFT = M REF_OBSERVABLE M+.
_FOURIER = np.exp(2j * np.pi * np.outer(np.arange(3), np.arange(3)) / 3.0) / math.sqrt(3.0)
_SHIFT_DIAGONALIZER = _FOURIER @ np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)

# Diagonal decorations (A1, A2, B1, B2) whose link phases put the weight
# pattern (4, 4/sqrt3, 4/sqrt3) on the coefficient pairs (01), (12), (02):
# at these settings the Bell value equals the closed-form ceiling for every
# nonnegative coefficient triple.
_BASE_DECORATIONS = np.array(
    [
        [0.0, np.pi / 3.0, np.pi / 6.0],
        [0.0, np.pi, np.pi / 2.0],
        [0.0, 0.0, 0.0],
        [0.0, 4.0 * np.pi / 3.0, 5.0 * np.pi / 3.0],
    ]
)
_BASE_DECORATIONS.setflags(write=False)

_UNITARY_TOL = 1e-10
_EIGENVALUE_TOL = 1e-8
_DEFAULT_RESTARTS = 32
_DEFAULT_STEP_TOL = 1e-7
_INITIAL_STEP = 0.5
_STEP_SHRINK = 0.5
_MAX_SWEEPS = 5000


def observable_from_params(theta) -> np.ndarray:
    """Unitary observable exp(iH) Omega exp(-iH) for H = sum_j theta_j G_j."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (8,):
        raise DomainError(f"observable parameters must have shape (8,), got {theta.shape}")
    return _observables_from_params(theta[np.newaxis])[0]


def _observables_from_params(thetas: np.ndarray) -> np.ndarray:
    """Batched form: (..., 8) parameter blocks -> (..., 3, 3) observables."""
    h = np.einsum("...j,jkl->...kl", thetas, GENERATORS)
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(1j * w)[..., np.newaxis, :]) @ np.conjugate(np.swapaxes(v, -1, -2))
    return u @ REF_OBSERVABLE @ np.conjugate(np.swapaxes(u, -1, -2))


def _decorated_shifts(chis: np.ndarray) -> np.ndarray:
    """Observables D SHIFT D+ for diagonal phase vectors chis of shape (..., 3)."""
    return SHIFT * np.exp(1j * (chis[..., :, np.newaxis] - chis[..., np.newaxis, :]))


def _params_from_unitary(u: np.ndarray) -> np.ndarray:
    """Generator coefficients of the principal logarithm of a unitary."""
    t, z = schur(u, output="complex")
    gen = (z * np.angle(np.diag(t))) @ np.conjugate(z.T)
    gen = 0.5 * (gen + np.conjugate(gen.T))
    # project onto the generator basis; any trace part only shifts U by a
    # global phase, which the conjugation U Omega U+ ignores
    return np.einsum("jkl,lk->j", GENERATORS, gen).real / 2.0


def _settings_from_phases(phases: np.ndarray) -> "MeasurementSettings":
    """Parameter block for the decorated canonical settings at given local phases."""
    chis = _BASE_DECORATIONS + np.reshape(phases, (2, 3))[[0, 0, 1, 1]]
    params = np.empty((4, 8))
    for row, chi in enumerate(chis):
        unitary = np.exp(1j * chi)[:, np.newaxis] * _SHIFT_DIAGONALIZER
        params[row] = _params_from_unitary(unitary)
    return MeasurementSettings(params)


def canonical_settings() -> "MeasurementSettings":
    """The settings at which the Bell value equals the closed-form ceiling.

    For every state with nonnegative coefficients these four observables give
    exactly 4 a0 a1 + (4/sqrt(3)) (a0 a2 + a1 a2); for the uniform state that
    is the peak value 2.8729...
    """
    return _settings_from_phases(np.zeros(6))


def _check_observable_unitary(m: np.ndarray, name: str) -> None:
    m = np.asarray(m)
    if m.shape != (3, 3):
        raise DomainError(f"{name} must be a 3x3 matrix, got shape {m.shape}")
    defect = np.max(np.abs(m @ np.conjugate(m.T) - np.eye(3)))
    if defect > _UNITARY_TOL:
        raise DomainError(f"{name} is not unitary (defect {defect:.3e})")


@dataclass(frozen=True)
class MeasurementSettings:
    """Four observables (Alice's A1, A2 then Bob's B1, B2) as a (4, 8) parameter block."""

    params: np.ndarray

    def __post_init__(self):
        params = np.asarray(self.params, dtype=float)
        object.__setattr__(self, "params", params)
        if params.shape != (4, 8):
            raise DomainError(f"settings parameters must have shape (4, 8), got {params.shape}")
        if not np.all(np.isfinite(params)):
            raise DomainError("settings parameters must be finite")

    def observables(self) -> np.ndarray:
        """The four 3x3 unitaries in order A1, A2, B1, B2."""
        return _observables_from_params(self.params)

    def validate(self) -> None:
        """Check unitarity and the {1, w, w^2} spectrum of every observable."""
        roots = np.array([1.0 + 0.0j, _W, _W**2])
        for name, obs in zip(("A1", "A2", "B1", "B2"), self.observables()):
            _check_observable_unitary(obs, name)
            eigs = np.linalg.eigvals(obs)
            # each cube root must be matched by exactly one eigenvalue
            dist = np.abs(eigs[:, np.newaxis] - roots[np.newaxis, :])
            order = np.argmin(dist, axis=1)
            if sorted(order.tolist()) != [0, 1, 2] or np.max(np.min(dist, axis=1)) > _EIGENVALUE_TOL:
                raise DomainError(f"{name} spectrum is not the three cube roots of unity")


@dataclass(frozen=True)
class BellResult:
    """Best Bell value found by the oracle, with the settings that achieved it."""

    value: float
    settings: MeasurementSettings
    restarts_used: int
    converged: bool

    def __post_init__(self):
        if not (-4.0 - 1e-9 <= self.value <= 4.0 + 1e-9):
            raise DomainError(f"Bell value {self.value} outside [-4, 4]")


def correlation(q: QutritState, a_obs, b_obs) -> complex:
    """Correlation <psi| A (x) B |psi> for |psi> = sum_k a_k |kk>."""
    a_obs = np.asarray(a_obs, dtype=complex)
    b_obs = np.asarray(b_obs, dtype=complex)
    _check_observable_unitary(a_obs, "A")
    _check_observable_unitary(b_obs, "B")
    outer = q.a[:, np.newaxis] * q.a[np.newaxis, :]
    return complex(np.sum(outer * a_obs * b_obs))


def _bell_from_correlations(qmat: np.ndarray) -> np.ndarray:
    re = qmat.real
    im = qmat.imag
    return (
        re[..., 0, 0] + re[..., 0, 1] - re[..., 1, 0] + re[..., 1, 1]
        + (im[..., 0, 0] - im[..., 0, 1] - im[..., 1, 0] + im[..., 1, 1]) / SQRT3
    )


def bell_value(q: QutritState, settings: MeasurementSettings) -> float:
    """Bell combination evaluated at the given measurement settings."""
    obs = settings.observables()
    outer = q.a[:, np.newaxis] * q.a[np.newaxis, :]
    qmat = np.einsum("kl,ikl,jkl->ij", outer, obs[:2], obs[2:])
    return float(_bell_from_correlations(qmat))


def _correlation_block(outer: np.ndarray, alice: np.ndarray, bob: np.ndarray) -> np.ndarray:
    # alice, bob: (R, 2, 3, 3) -> (R, 2, 2)
    return np.einsum("kl,rikl,rjkl->rij", outer, alice, bob)


def maximize_bell(
    q: QutritState,
    restarts: int = _DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = _DEFAULT_STEP_TOL,
) -> BellResult:
    """Multi-start coordinate descent over the parties' local reference phases.

    Each restart starts from phases drawn with an independent seed sequence
    (seed, restart index), so results are deterministic for a fixed seed and
    monotone nondecreasing when ``restarts`` grows with the same seed.  Every
    restart keeps its own step size, halved after any full sweep without
    improvement, and stops once the step drops below ``tol`` (or after a hard
    sweep limit, reported via ``converged``).  The winning phases are returned
    as a regular (4, 8) parameter block.
    """
    if int(restarts) != restarts or restarts < 1:
        raise DomainError(f"restarts must be an integer >= 1, got {restarts}")
    if not (0.0 < tol < 1.0):
        raise DomainError(f"step tolerance must lie in (0, 1), got {tol}")
    restarts = int(restarts)

    phases = np.stack(
        [
            np.random.default_rng([seed, i]).uniform(-np.pi, np.pi, size=6)
            for i in range(restarts)
        ]
    )
    outer = q.a[:, np.newaxis] * q.a[np.newaxis, :]

    def _party_observables(party: int, blocks: np.ndarray) -> np.ndarray:
        # blocks: (R, 3) local phases -> (R, 2, 3, 3) decorated settings
        chis = _BASE_DECORATIONS[2 * party : 2 * party + 2] + blocks[:, np.newaxis, :]
        return _decorated_shifts(chis)

    obs = np.concatenate(
        [_party_observables(0, phases[:, :3]), _party_observables(1, phases[:, 3:])], axis=1
    )
    best = _bell_from_correlations(_correlation_block(outer, obs[:, :2], obs[:, 2:]))

    step = np.full(restarts, _INITIAL_STEP)
    sweeps = 0
    while sweeps < _MAX_SWEEPS:
        active = step >= tol
        if not active.any():
            break
        improved = np.zeros(restarts, dtype=bool)
        for party in range(2):
            block = slice(3 * party, 3 * party + 3)
            for coord in range(3):
                for sign in (1.0, -1.0):
                    trial = phases[:, block].copy()
                    trial[:, coord] += sign * step
                    new_obs = _party_observables(party, trial)
                    if party == 0:
                        trial_q = _correlation_block(outer, new_obs, obs[:, 2:])
                    else:
                        trial_q = _correlation_block(outer, obs[:, :2], new_obs)
                    value = _bell_from_correlations(trial_q)
                    accept = active & (value > best)
                    if accept.any():
                        phases[accept, block] = trial[accept]
                        obs[accept, 2 * party : 2 * party + 2] = new_obs[accept]
                        best[accept] = value[accept]
                        improved |= accept
        step[active & ~improved] *= _STEP_SHRINK
        sweeps += 1

    winner = int(np.argmax(best))
    return BellResult(
        value=float(best[winner]),
        settings=_settings_from_phases(phases[winner]),
        restarts_used=restarts,
        converged=bool(step[winner] < tol),
    )
