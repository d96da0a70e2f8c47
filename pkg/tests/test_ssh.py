import math

import numpy as np
import pytest

from yanglee.errors import DomainError
from yanglee.numerics import dense_eig
from yanglee.ssh import (
    PhaseLabel,
    SingularPointError,
    SSHParams,
    bloch_hamiltonian,
    chi_count,
    collect_correlation_samples,
    corr_asymptotic,
    corr_momentum,
    corr_real,
    correlation_length,
    dispersion,
    fit_exponents,
    mode_partition_factor,
    params_from_detuning,
    phase_diagnostics,
    yang_lee_root_count,
    zeros_region_scan,
)


# --- dispersion -------------------------------------------------------------

def test_dispersion_examples():
    assert abs(dispersion(SSHParams(0, 1, 2), 0.0) - 3.0) < 1e-12
    assert abs(dispersion(SSHParams(1, 1, 1), math.pi) - 1j) < 1e-12
    k_e = 2.0 * math.pi / 3.0  # cos k_E = -1/2 at u = v = w = 1
    assert abs(dispersion(SSHParams(1, 1, 1), k_e)) < 1e-7


def test_branch_identity_random():
    rng = np.random.default_rng(0)
    for _ in range(50):
        p = SSHParams(*rng.uniform(0.0, 3.0, 3))
        k = rng.uniform(-math.pi, math.pi)
        e = dispersion(p, k)
        vk2 = abs(p.v + p.w * np.exp(1j * k)) ** 2
        assert abs(e * e + p.u ** 2 - vk2) <= 1e-12 * max(1.0, vk2)
        assert e.real >= 0.0
        if abs(e.real) < 1e-14:
            assert e.imag >= 0.0


def test_particle_hole_pairing():
    p = SSHParams(0.8, 1.1, 0.6)
    h = bloch_hamiltonian(p, 0.7)
    assert abs(np.trace(h)) < 1e-14
    es = dense_eig(h)
    assert abs(es.values[0] + es.values[1]) < 1e-12


# --- phases -----------------------------------------------------------------

def test_phase_trivial_gapped():
    d = phase_diagnostics(SSHParams(1.0, 2.5, 1.0))
    assert d.label is PhaseLabel.TRIVIAL_PT_UNBROKEN
    assert abs(d.gap - 2.0 * math.sqrt(1.5 ** 2 - 1.0)) < 1e-12
    assert d.exceptional_momenta is None


def test_phase_topological_gapped():
    d = phase_diagnostics(SSHParams(1.0, 1.0, 2.5))
    assert d.label is PhaseLabel.TOPOLOGICAL_PT_UNBROKEN


def test_phase_broken_with_exceptional_momenta():
    d = phase_diagnostics(SSHParams(1.0, 1.0, 1.5))
    assert d.label is PhaseLabel.PT_BROKEN_GAPLESS
    assert d.gap == 0.0
    k_e, k_e_neg = d.exceptional_momenta
    assert abs(k_e - math.acos(-0.75)) < 1e-12
    assert k_e_neg == -k_e
    assert abs(dispersion(SSHParams(1.0, 1.0, 1.5), k_e)) < 1e-7


def test_phase_boundary():
    d = phase_diagnostics(SSHParams(1.0, 1.0, 2.0))
    assert d.label is PhaseLabel.BOUNDARY
    assert d.gap == 0.0


# --- single-mode partition factor -------------------------------------------

def test_mode_factor_real_energy():
    val = mode_partition_factor(SSHParams(0, 1, 2), 0.0, 1.0)
    assert abs(val - (2.0 + 2.0 * math.cosh(3.0))) < 1e-12


def test_mode_factor_vanishes_at_zero_condition():
    # u = v = w = 1 at k = pi gives E = i; beta = pi puts Im(beta E) at pi
    val = mode_partition_factor(SSHParams(1, 1, 1), math.pi, math.pi)
    assert abs(val) < 1e-12


def test_mode_factor_fock_trace_oracle():
    # single-mode many-body spectrum {0, E, -E, 0} assembled from the Bloch
    # matrix in second quantization; its Boltzmann trace must reproduce the
    # product form exactly
    rng = np.random.default_rng(123)
    for _ in range(20):
        p = SSHParams(*rng.uniform(0.1, 2.0, 3))
        k = rng.uniform(-math.pi, math.pi)
        beta = rng.uniform(0.2, 5.0)
        h = bloch_hamiltonian(p, k)
        fock = np.zeros((4, 4), dtype=complex)
        fock[1:3, 1:3] = h
        fock[3, 3] = h[0, 0] + h[1, 1]
        es = dense_eig(fock)
        z_fock = np.exp(-beta * es.values).sum()
        z_mode = mode_partition_factor(p, k, beta)
        assert abs(z_fock - z_mode) <= 1e-12 * abs(z_mode)


def test_mode_factor_overflow_guard():
    val = mode_partition_factor(SSHParams(0, 1, 2), 0.0, 300.0)
    assert np.isfinite(val.real) and np.isfinite(val.imag)
    assert abs(val) > 1e290


# --- zero counting ----------------------------------------------------------

def test_chi_example_beta_100():
    zero_set = yang_lee_root_count(SSHParams(1, 1, 1), 100.0)
    assert zero_set.chi == 16
    assert chi_count(SSHParams(1, 1, 1), 100.0) == 16


def test_chi_density_limit():
    for beta in (50.0, 100.0, 400.0):
        chi = chi_count(SSHParams(1, 1, 1), beta)
        assert abs(chi / beta - 1.0 / (2.0 * math.pi)) <= 1.0 / beta


def test_chi_gapped_zero():
    assert yang_lee_root_count(SSHParams(1.0, 2.5, 1.0), 100.0).chi == 0


def test_zero_entries_satisfy_zero_condition():
    p = SSHParams(1.0, 1.2, 0.8)
    zero_set = yang_lee_root_count(p, 80.0)
    assert zero_set.chi > 0
    for k, n in zero_set.entries:
        e = dispersion(p, k)
        assert abs(e.real) <= 1e-10
        assert abs(e.imag - (2 * n + 1) * math.pi / 80.0) <= 1e-8
        assert abs(mode_partition_factor(p, k, 80.0)) <= 1e-8


def test_chi_monotone_in_beta():
    p = SSHParams(1.0, 1.3, 0.9)
    counts = [chi_count(p, b) for b in (5.0, 20.0, 80.0, 320.0)]
    assert all(a <= b for a, b in zip(counts, counts[1:]))


# --- region scan ------------------------------------------------------------

def test_region_scan_low_temperature_boundary():
    wv = np.linspace(-2.0, 2.0, 201)
    scan = zeros_region_scan(1.0, wv, np.array([1.0 / 200.0]))
    _, lo, hi = scan.boundary[0]
    cell = wv[1] - wv[0]
    assert abs(hi - 1.0) <= 2 * cell
    assert abs(lo + 1.0) <= 2 * cell


def test_region_scan_shrinks_at_high_temperature():
    wv = np.linspace(-2.0, 2.0, 201)
    cold = zeros_region_scan(1.0, wv, np.array([0.01]))
    hot = zeros_region_scan(1.0, wv, np.array([0.25]))
    assert hot.has_zeros.sum() < cold.has_zeros.sum()
    # high-T presence condition: sqrt(u^2 - wv^2) >= pi/beta
    beta = 4.0
    expected = np.sqrt(np.maximum(1.0 - wv ** 2, 0.0)) >= math.pi / beta
    assert np.array_equal(hot.has_zeros[0], expected)


def test_region_scan_hermitian_row_empty():
    scan = zeros_region_scan(0.0, np.linspace(-2, 2, 41), np.array([0.05, 0.2]))
    assert not scan.has_zeros.any()


def test_params_from_detuning_nonnegative():
    for wv in (-1.7, -0.2, 0.0, 0.4, 1.9):
        p = params_from_detuning(1.0, wv)
        assert p.w - p.v == pytest.approx(wv)
        assert p.v >= 0 and p.w >= 0


# --- correlators ------------------------------------------------------------

def test_corr_momentum_hermitian_values():
    p = SSHParams(0.0, 2.0, 1.0)
    k = 1.3
    assert abs(corr_momentum(p, k, None, "AA") - 0.5) < 1e-14
    vk = p.v + p.w * np.exp(-1j * k)
    expect = -0.5 * np.conj(vk) / abs(vk)
    assert abs(corr_momentum(p, k, None, "AB") - expect) < 1e-14


def test_corr_momentum_channel_relations():
    p = SSHParams(1.0, 2.0, 1.0)
    k = 1.0
    vk = p.v + p.w * np.exp(-1j * k)
    ab = corr_momentum(p, k, None, "AB")
    ba = corr_momentum(p, k, None, "BA")
    assert abs(ab / ba - np.conj(vk) / vk) < 1e-12
    aa = corr_momentum(p, k, None, "AA")
    bb = corr_momentum(p, k, None, "BB")
    assert abs(aa + bb - 1.0) < 1e-12
    # the Hermitian limit kills the u-dependent part of AA
    p_small = SSHParams(1e-6, 2.0, 1.0)
    assert abs(corr_momentum(p_small, k, None, "AA") - 0.5) < 1e-5


def test_corr_momentum_singularity_guard():
    with pytest.raises(SingularPointError):
        corr_momentum(SSHParams(1, 1, 1), 2.0 * math.pi / 3.0, 2.0, "AA")


def test_corr_real_hermitian_is_local():
    p = SSHParams(0.0, 1.0, 2.0)
    for x in (1, 2, 5):
        assert abs(corr_real(p, x, "AA")) <= 1e-9


def test_corr_real_requires_gap():
    with pytest.raises(DomainError):
        corr_real(SSHParams(1.0, 1.0, 1.0), 3, "AA")


def test_corr_real_matches_asymptotic():
    p = SSHParams(1.0, 2.05, 1.0)  # delta = 0.05
    xi = correlation_length(p)
    for x in range(math.ceil(3 * xi), math.ceil(3 * xi) + 8, 2):
        c = corr_real(p, x, "AA", tol=1e-12)
        a = corr_asymptotic(p, float(x), "AA")
        assert abs(c / a - 1.0) <= 0.02


def test_corr_real_staggered_sign():
    # near criticality the k = pi region dominates: C_AA(x) ~ -i (-1)^x |...|
    p = SSHParams(1.0, 2.05, 1.0)
    vals = [corr_real(p, x, "AA", tol=1e-12) for x in (6, 7, 8, 9)]
    signs = [np.sign(v.imag) for v in vals]
    assert signs == [1.0, -1.0, 1.0, -1.0] or signs == [-1.0, 1.0, -1.0, 1.0]


def test_corr_asymptotic_bb_is_minus_aa():
    p = SSHParams(1.0, 2.0, 0.9)
    for x in (5.0, 11.0):
        assert corr_asymptotic(p, x, "BB") == pytest.approx(
            -corr_asymptotic(p, x, "AA"))


def test_corr_asymptotic_domain():
    with pytest.raises(DomainError):
        corr_asymptotic(SSHParams(1.0, 1.5, 1.0), 5.0, "AA")  # delta < 0


def test_correlation_length_small_delta_limit():
    p = SSHParams(1.0, 2.0 + 1e-4, 1.0)
    xi = correlation_length(p)
    delta = abs(p.v - p.w) - p.u
    leading = math.sqrt(p.v * p.w / (2.0 * p.u * delta))
    assert abs(xi / leading - 1.0) < 1e-3


def test_decay_power_fit():
    p = SSHParams(1.0, 2.05, 1.0)
    xi = correlation_length(p)
    xs = np.arange(math.ceil(2 * xi), math.ceil(6 * xi) + 1)
    vals = np.array([corr_real(p, int(x), "AA", tol=1e-12) for x in xs])
    resid = np.log(np.abs(vals)) + xs / xi
    power = np.polyfit(np.log(xs), resid, 1)[0]
    assert abs(power - (-0.5)) <= 0.05


def test_fit_exponents_tables_and_eta():
    samples = collect_correlation_samples(1.0, 1.0, [0.02, 0.05, 0.1], "AA")
    fit = fit_exponents(samples)
    for delta, xi_fit, xi_closed in fit.xi_table:
        assert abs(xi_fit / xi_closed - 1.0) <= 0.05
    assert abs(fit.eta - 1.5) <= 0.08
    # the decay length scales as delta^(-1/2): the measured exponent sits
    # at one half, not at one
    assert abs(fit.nu - 0.5) <= 0.05
    assert fit.warning is None
