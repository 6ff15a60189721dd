"""Cross-Kerr generation of a discrete maximally entangled state from coherent light.

Two coherent states fed through a cross-Kerr phase exp(2 pi i n1 n2 / d)
come out as sum_k (P_k |alpha>) (x) |alpha e^(2 pi i k/d)>, where P_k projects
onto Fock indices congruent to k mod d (the pseudo-number components).  The
ideal d x d maximally entangled target pairs the normalized pseudo-number
components with a Loewdin-orthonormalized set of the d phase-shifted coherent
states; ``kerr_mes_fidelity`` returns the overlap magnitude with that target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DomainError, TruncationError
from .states import poisson_tail

_NORM_SLACK = 1e-9

# Gram matrices with eigenvalues below this are too close to singular to invert.
_GRAM_EIG_FLOOR = 1e-12


@dataclass(frozen=True)
class FockVector:
    """Single-mode state amplitudes over Fock levels 0..cutoff.

    ``loss`` is a declared bound on the squared-norm mass missing from the
    stored window, so 1 - sum |amps|^2 <= loss.
    """

    amps: np.ndarray
    cutoff: int
    loss: float = 0.0

    def __post_init__(self):
        amps = np.atleast_1d(np.asarray(self.amps, dtype=complex))
        object.__setattr__(self, "amps", amps)
        if amps.ndim != 1 or amps.size != self.cutoff + 1:
            raise DomainError(
                f"amps must be a vector of length cutoff+1 = {self.cutoff + 1}, got {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        norm_sq = float(np.vdot(amps, amps).real)
        if norm_sq > 1.0 + _NORM_SLACK:
            raise DomainError(f"squared norm {norm_sq} exceeds 1")
        if 1.0 - norm_sq > self.loss + _NORM_SLACK:
            raise DomainError(
                f"missing mass {1.0 - norm_sq} exceeds declared truncation loss {self.loss}"
            )

    def norm(self) -> float:
        return math.sqrt(float(np.vdot(self.amps, self.amps).real))


@dataclass(frozen=True)
class TwoModeFock:
    """Two-mode state amplitudes, indexed [n1, n2] over 0..cutoff each."""

    amps: np.ndarray
    cutoff: int
    loss: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        object.__setattr__(self, "amps", amps)
        side = self.cutoff + 1
        if amps.shape != (side, side):
            raise DomainError(f"amps must have shape ({side}, {side}), got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        norm_sq = float(np.vdot(amps, amps).real)
        if norm_sq > 1.0 + _NORM_SLACK:
            raise DomainError(f"squared norm {norm_sq} exceeds 1")
        if 1.0 - norm_sq > self.loss + _NORM_SLACK:
            raise DomainError(
                f"missing mass {1.0 - norm_sq} exceeds declared truncation loss {self.loss}"
            )


def default_cutoff(alpha: complex) -> int:
    """Fock cutoff |alpha|^2 + 8|alpha| + 20, ample for ~1e-10 truncation loss."""
    a = abs(alpha)
    return math.ceil(a * a + 8.0 * a + 20.0)


def coherent_fock(alpha: complex, cutoff: int | None = None) -> FockVector:
    """Coherent-state amplitudes e^(-|alpha|^2/2) alpha^n / sqrt(n!) up to ``cutoff``.

    Amplitudes come from the stable recurrence a_{n+1} = a_n alpha/sqrt(n+1);
    the exact Poisson tail past the cutoff is recorded as the loss.
    """
    alpha = complex(alpha)
    if cutoff is None:
        cutoff = default_cutoff(alpha)
    if int(cutoff) != cutoff or cutoff < 0:
        raise DomainError(f"cutoff must be a nonnegative integer, got {cutoff}")
    cutoff = int(cutoff)
    mag_sq = abs(alpha) ** 2
    if mag_sq > cutoff / 2.0:
        raise TruncationError(
            f"cutoff {cutoff} is too small for |alpha|^2 = {mag_sq:.3f}; need at least 2|alpha|^2"
        )
    ratios = np.ones(cutoff + 1, dtype=complex)
    if cutoff > 0:
        ratios[1:] = alpha / np.sqrt(np.arange(1.0, cutoff + 1.0))
    amps = math.exp(-mag_sq / 2.0) * np.cumprod(ratios)
    loss = poisson_tail(cutoff, mag_sq)
    return FockVector(amps, cutoff, loss)


def two_mode_product(v1: FockVector, v2: FockVector) -> TwoModeFock:
    """Product state |v1> (x) |v2> on a common cutoff."""
    if v1.cutoff != v2.cutoff:
        raise DomainError(f"cutoffs differ: {v1.cutoff} vs {v2.cutoff}")
    amps = np.outer(v1.amps, v2.amps)
    loss = min(1.0, v1.loss + v2.loss)
    return TwoModeFock(amps, v1.cutoff, loss)


def pseudo_number_component(v: FockVector, d: int, k: int):
    """Unnormalized projection of ``v`` onto Fock levels congruent to k mod d.

    Returns ``(component, norm)``.  Components for k = 0..d-1 have disjoint
    support, so they are exactly orthogonal and their squared norms add up to
    the squared norm of ``v``.
    """
    _check_modulus(d)
    if int(k) != k or not (0 <= k < d):
        raise DomainError(f"residue k must be an integer in [0, {d}), got {k}")
    mask = (np.arange(v.cutoff + 1) % d) == int(k)
    amps = np.where(mask, v.amps, 0.0)
    norm = math.sqrt(float(np.vdot(amps, amps).real))
    component = FockVector(amps, v.cutoff, max(v.loss, 1.0 - norm * norm))
    return component, norm


def cross_kerr_apply(s: TwoModeFock, d: int) -> TwoModeFock:
    """Apply the cross-Kerr phase exp(2 pi i n1 n2 / d) entrywise.

    The phase exponent is reduced mod d in integer arithmetic, so d = 1 is
    exactly the identity and the norm is preserved to machine precision.
    """
    _check_modulus(d)
    n = np.arange(s.cutoff + 1, dtype=np.int64)
    residues = np.outer(n, n) % d
    phases = np.exp(2j * np.pi * np.arange(d) / d)
    return TwoModeFock(s.amps * phases[residues], s.cutoff, s.loss)


def pseudo_phase_gram(alpha: complex, d: int, cutoff: int | None = None) -> np.ndarray:
    """Gram matrix G_jk = <alpha e^(2 pi i j/d) | alpha e^(2 pi i k/d)> in the truncated space.

    The exact magnitudes are exp(-|alpha|^2 (1 - cos(2 pi (k-j)/d))).
    """
    _check_modulus(d)
    vecs = _pseudo_phase_states(alpha, d, cutoff)
    return np.conjugate(vecs) @ vecs.T


def _pseudo_phase_states(alpha: complex, d: int, cutoff: int | None) -> np.ndarray:
    alpha = complex(alpha)
    if cutoff is None:
        cutoff = default_cutoff(alpha)
    rotations = np.exp(2j * np.pi * np.arange(d) / d)
    return np.stack([coherent_fock(alpha * rot, cutoff).amps for rot in rotations])


def _loewdin_orthonormalize(vecs: np.ndarray) -> np.ndarray:
    """Symmetric (Loewdin) orthonormalization of the rows of ``vecs``."""
    gram = np.conjugate(vecs) @ vecs.T
    eigvals, eigvecs = np.linalg.eigh(gram)
    if float(eigvals[0]) < _GRAM_EIG_FLOOR * float(eigvals[-1]):
        raise DegenerateInputError(
            f"pseudo-phase states are numerically dependent (Gram eigenvalue {eigvals[0]:.3e})"
        )
    inv_sqrt = (eigvecs * (1.0 / np.sqrt(eigvals))) @ np.conjugate(eigvecs.T)
    # row j of the result is sum_k (G^(-1/2))_kj vecs[k]
    return inv_sqrt.T @ vecs


def kerr_mes_fidelity(alpha: complex, d: int, cutoff: int | None = None) -> float:
    """Fidelity of the cross-Kerr output of |alpha>|alpha> with the ideal d x d target.

    The target is (1/sqrt(d)) sum_k |k_d> (x) |e_k>, with |k_d> the normalized
    pseudo-number components of |alpha> and |e_k> the Loewdin-orthonormalized
    phase-shifted coherent states.
    """
    _check_modulus(d)
    alpha = complex(alpha)
    if cutoff is None:
        cutoff = default_cutoff(alpha)
    base = coherent_fock(alpha, cutoff)
    output = cross_kerr_apply(two_mode_product(base, base), d)

    number_basis = []
    for k in range(d):
        component, norm = pseudo_number_component(base, d, k)
        if norm < 1e-12:
            raise DegenerateInputError(
                f"pseudo-number component k={k} has negligible weight for alpha={alpha}"
            )
        number_basis.append(component.amps / norm)
    phase_basis = _loewdin_orthonormalize(_pseudo_phase_states(alpha, d, cutoff))

    target = np.einsum("ki,kj->ij", np.stack(number_basis), phase_basis) / math.sqrt(d)
    return abs(complex(np.vdot(target, output.amps)))


def _check_modulus(d: int) -> None:
    if int(d) != d or d < 1:
        raise DomainError(f"modulus d must be an integer >= 1, got {d}")
