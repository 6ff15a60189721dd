"""Truncated Fock simulation: coherent states, mod-d components, Kerr phase."""

import math

import numpy as np
import pytest

from gmeslab import (
    DegenerateInputError,
    DomainError,
    TruncationError,
    coherent_fock,
    cross_kerr_apply,
    default_cutoff,
    kerr_mes_fidelity,
    pseudo_number_component,
    pseudo_phase_gram,
    two_mode_product,
)


def overlap(v, w):
    return complex(np.vdot(v.amps, w.amps))


# ---------------------------------------------------------------------------
# coherent states
# ---------------------------------------------------------------------------


def test_coherent_vacuum():
    v = coherent_fock(0.0, cutoff=5)
    np.testing.assert_allclose(v.amps, [1.0, 0, 0, 0, 0, 0], atol=1e-15)
    assert v.loss == 0.0


def test_coherent_norm():
    v = coherent_fock(3.0, cutoff=60)
    assert v.norm() >= 1.0 - 1e-10
    assert v.loss <= 1e-10


def test_coherent_amplitudes():
    alpha = 1.5 - 0.5j
    v = coherent_fock(alpha, cutoff=30)
    for n in [0, 1, 5, 12]:
        want = (
            math.exp(-abs(alpha) ** 2 / 2.0) * alpha**n / math.sqrt(math.factorial(n))
        )
        assert v.amps[n] == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("alpha,beta", [(1.0, 2.0), (2.0, -1.5), (1.0 + 1.0j, 0.5j)])
def test_coherent_overlap_formula(alpha, beta):
    cutoff = 80
    got = overlap(coherent_fock(alpha, cutoff), coherent_fock(beta, cutoff))
    want = np.exp(-(abs(alpha) ** 2 + abs(beta) ** 2) / 2.0 + np.conj(alpha) * beta)
    assert got == pytest.approx(want, abs=1e-8)


def test_coherent_cutoff_guard():
    with pytest.raises(TruncationError):
        coherent_fock(4.0, cutoff=20)  # |alpha|^2 = 16 > 20/2
    with pytest.raises(DomainError):
        coherent_fock(1.0, cutoff=-1)


def test_default_cutoff():
    assert default_cutoff(3.0) == math.ceil(9.0 + 24.0 + 20.0)
    assert default_cutoff(0.0) == 20


# ---------------------------------------------------------------------------
# pseudo-number components
# ---------------------------------------------------------------------------


def test_component_d1_is_identity():
    v = coherent_fock(2.0, cutoff=40)
    comp, norm = pseudo_number_component(v, 1, 0)
    np.testing.assert_array_equal(comp.amps, v.amps)
    assert norm == pytest.approx(v.norm(), rel=1e-14)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_component_decomposition(d):
    v = coherent_fock(2.0, cutoff=40)
    comps = [pseudo_number_component(v, d, k) for k in range(d)]
    # disjoint support: exact orthogonality and exact reconstruction
    total = np.sum([c.amps for c, _ in comps], axis=0)
    np.testing.assert_array_equal(total, v.amps)
    assert sum(n**2 for _, n in comps) == pytest.approx(v.norm() ** 2, rel=1e-14)
    for i in range(d):
        for j in range(i + 1, d):
            assert overlap(comps[i][0], comps[j][0]) == 0.0


def test_component_weights_equalize_for_large_alpha():
    v = coherent_fock(6.0, cutoff=default_cutoff(6.0))
    for k in range(2):
        _, norm = pseudo_number_component(v, 2, k)
        assert norm**2 == pytest.approx(0.5, abs=1e-3)


def test_component_argument_checks():
    v = coherent_fock(1.0, cutoff=20)
    with pytest.raises(DomainError):
        pseudo_number_component(v, 0, 0)
    with pytest.raises(DomainError):
        pseudo_number_component(v, 3, 3)
    with pytest.raises(DomainError):
        pseudo_number_component(v, 3, -1)


# ---------------------------------------------------------------------------
# cross-Kerr phase
# ---------------------------------------------------------------------------


def test_cross_kerr_d1_identity():
    v = coherent_fock(1.5, cutoff=30)
    s = two_mode_product(v, v)
    out = cross_kerr_apply(s, 1)
    np.testing.assert_array_equal(out.amps, s.amps)


def test_cross_kerr_preserves_norm():
    v = coherent_fock(2.0, cutoff=40)
    s = two_mode_product(v, v)
    out = cross_kerr_apply(s, 3)
    assert abs(np.vdot(out.amps, out.amps).real - np.vdot(s.amps, s.amps).real) <= 1e-14


def test_cross_kerr_phase_values():
    v = coherent_fock(1.0, cutoff=12)
    s = two_mode_product(v, v)
    out = cross_kerr_apply(s, 4)
    # entry (2, 3): phase exp(2 pi i * 6 / 4) = exp(i pi) = -1 exactly
    assert out.amps[2, 3] == pytest.approx(-s.amps[2, 3], rel=1e-14)
    assert out.amps[0, 5] == s.amps[0, 5]


def test_two_mode_product_cutoff_mismatch():
    with pytest.raises(DomainError):
        two_mode_product(coherent_fock(1.0, cutoff=20), coherent_fock(1.0, cutoff=21))


# ---------------------------------------------------------------------------
# pseudo-phase Gram matrix
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("alpha,d", [(1.0, 2), (2.0, 3), (1.5, 4), (0.8, 3)])
def test_gram_off_diagonal_moduli(alpha, d):
    gram = pseudo_phase_gram(alpha, d)
    np.testing.assert_allclose(np.diag(gram), np.ones(d), atol=1e-12)
    for j in range(d):
        for k in range(d):
            want = math.exp(
                -abs(alpha) ** 2 * (1.0 - math.cos(2.0 * math.pi * (j - k) / d))
            )
            assert abs(gram[j, k]) == pytest.approx(want, abs=1e-8)


# ---------------------------------------------------------------------------
# Kerr MES fidelity
# ---------------------------------------------------------------------------


def test_kerr_fidelity_high_alpha():
    assert kerr_mes_fidelity(3.0, 2) >= 0.999
    assert kerr_mes_fidelity(4.0, 2) >= 0.999


def test_kerr_fidelity_nondecreasing_in_alpha():
    # the curve saturates at 1 within float noise from alpha ~ 3 on, so the
    # monotone claim is asserted up to a few ulps
    curve = [kerr_mes_fidelity(float(a), 2) for a in range(1, 7)]
    assert all(y >= x - 5e-15 for x, y in zip(curve, curve[1:]))
    assert curve[0] < curve[-1]


def test_kerr_fidelity_small_alpha_visibly_below_one():
    value = kerr_mes_fidelity(1.0, 3)
    assert value == pytest.approx(0.971359418968222, abs=1e-9)
    assert value < 0.99


def test_kerr_fidelity_bounds_and_guards():
    assert 0.0 <= kerr_mes_fidelity(0.5, 2) <= 1.0
    with pytest.raises(DegenerateInputError):
        kerr_mes_fidelity(1e-8, 3)
    with pytest.raises(DomainError):
        kerr_mes_fidelity(1.0, 0)
