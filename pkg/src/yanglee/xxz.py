"""Spin-1/2 XXZ chain at complex anisotropy.

    H = -J sum_{i=1..L} (S^x_i S^x_{i+1} + S^y_i S^y_{i+1}
                         + Delta S^z_i S^z_{i+1})

with J > 0, periodic boundaries, and the bond sum running literally over
i = 1..L (for L = 2 the single bond is counted twice; that convention is
what makes the first-order multiplet energies below exact at L = 2).
Total S^z is conserved, so the Hamiltonian blocks by the number M of
flipped spins (magnons) and each sector is diagonalized densely.

Near the ferromagnetic point Delta = 1 the (L+1)-fold degenerate ground
multiplet splits at first order in delta = Delta - 1 as

    E_M = E_0 + J delta M (L - M) / (L - 1),      E_0 = -J L Delta / 4.

Resumming the multiplet Boltzmann weights with z = exp(-beta J delta /
(L - 1)) turns the zero condition of the partition function into the
polynomial equation sum_{M=0}^L z^{M(L-M)} = 0, so the zeros of Z lie at

    Delta_j = 1 - (L - 1) Log(z_j) / (beta J) + i (L - 1) 2 pi n / (beta J)

for the polynomial roots z_j and n integer.  The first-order energies
follow from an algebraic reduction of the Bethe equations whose root
set {zeta_j} obeys the sum rules sum zeta = 0 and
sum zeta^2 = -M(M-1)/(L-1); both are checked on every solve.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import DomainError, YangLeeError
from .numerics.eig import dense_eig
from .numerics.newton import NewtonError, newton_system
from .numerics.polynomials import ComplexPolynomial, roots_of_polynomial


@dataclass(frozen=True)
class XXZParams:
    """Exchange J > 0, complex anisotropy, chain length; periodic chain."""

    J: float
    delta_aniso: complex
    L: int

    def __post_init__(self):
        if self.J <= 0:
            raise DomainError("J must be positive")
        if self.L < 2:
            raise DomainError("L must be at least 2")


@dataclass
class MagnonSector:
    """Basis of the fixed-M block; bit i of a basis word flips site i."""

    L: int
    M: int
    basis: np.ndarray  # sorted ascending, dtype int64
    index: dict = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.basis.size


def magnon_sector(L: int, M: int) -> MagnonSector:
    if not 0 <= M <= L:
        raise DomainError("need 0 <= M <= L")
    words = sorted(sum(1 << b for b in bits)
                   for bits in combinations(range(L), M))
    basis = np.array(words, dtype=np.int64)
    return MagnonSector(L=L, M=M, basis=basis,
                        index={w: i for i, w in enumerate(words)})


def build_sector_hamiltonian(p: XXZParams, sector: MagnonSector) -> np.ndarray:
    """Dense block of H in the M-magnon sector."""
    if sector.L != p.L:
        raise DomainError("sector length does not match parameters")
    L, J, delta = p.L, p.J, complex(p.delta_aniso)
    dim = sector.dimension
    h = np.zeros((dim, dim), dtype=complex)
    bonds = [(i, (i + 1) % L) for i in range(L)]
    for col, word in enumerate(sector.basis):
        word = int(word)
        diag = 0.0
        for a, b in bonds:
            same = ((word >> a) & 1) == ((word >> b) & 1)
            diag += 0.25 if same else -0.25
            if not same:
                flipped = word ^ ((1 << a) | (1 << b))
                h[sector.index[flipped], col] += -0.5 * J
        h[col, col] += -J * delta * diag
    return h


def full_spectrum(p: XXZParams) -> list[tuple[int, np.ndarray]]:
    """All 2^L eigenvalues, sector by sector, each block sorted by (Re, Im)."""
    if p.L > 14:
        raise DomainError("dense diagonalization capped at L = 14")
    out = []
    for m in range(p.L + 1):
        sector = magnon_sector(p.L, m)
        h = build_sector_hamiltonian(p, sector)
        vals = scipy.linalg.eigvals(h)
        vals = vals[np.lexsort((vals.imag, vals.real))]
        out.append((m, vals))
    return out


def ground_state(p: XXZParams) -> tuple[int, complex, np.ndarray]:
    """(sector M, energy, normalized vector over the 2^L basis).

    The eigenvalue with least real part wins; degeneracies resolve to the
    smaller magnon number, so the all-up product state represents the
    ferromagnetic doublet on the gapped side.
    """
    best: Optional[tuple[float, int, complex, np.ndarray]] = None
    for m in range(p.L + 1):
        sector = magnon_sector(p.L, m)
        h = build_sector_hamiltonian(p, sector)
        es = dense_eig(h)
        e = es.values[0]
        if best is None or e.real < best[0] - 1e-12:
            vec = es.right_vectors[:, 0]
            best = (e.real, m, complex(e), vec)
    _, m, energy, vec = best
    sector = magnon_sector(p.L, m)
    psi = np.zeros(2 ** p.L, dtype=complex)
    psi[sector.basis] = vec
    psi /= np.linalg.norm(psi)
    return m, energy, psi


@dataclass
class LogComplex:
    """Complex number kept as log-magnitude and phase to dodge overflow."""

    log_magnitude: float
    phase: float

    @property
    def value(self) -> complex:
        return cmath.exp(complex(self.log_magnitude, self.phase))


def _scaled_partition_terms(spectra, beta: float):
    """(shift, sum of exp(-beta (E - shift))) with shift = min Re E."""
    all_vals = np.concatenate([vals for _, vals in spectra])
    shift = float(np.min(all_vals.real))
    total = np.exp(-beta * (all_vals - shift)).sum()
    return shift, complex(total)


def partition_function(p: XXZParams, beta: float) -> LogComplex:
    """Z = sum_n exp(-beta E_n) over the full spectrum, overflow-safe."""
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    shift, total = _scaled_partition_terms(full_spectrum(p), beta)
    if total == 0:
        return LogComplex(log_magnitude=-math.inf, phase=0.0)
    return LogComplex(log_magnitude=-beta * shift + math.log(abs(total)),
                      phase=cmath.phase(total))


def partition_scaled(L: int, J: float, beta: float, delta: complex) -> complex:
    """exp(beta * min Re E) * Z(Delta); the natural zero-finding residual.

    Every Boltzmann term has modulus <= 1 after the shift, so |result|
    is already normalized by the dominant eigen-weight.
    """
    p = XXZParams(J=J, delta_aniso=1.0 + delta, L=L)
    _, total = _scaled_partition_terms(full_spectrum(p), beta)
    return total


# --- zero structure around the ferromagnetic point -------------------------


def zero_polynomial(L: int) -> ComplexPolynomial:
    """sum_{M=0}^{L} z^{M(L-M)} as an explicit coefficient list.

    Degree (L/2)^2 for even L, (L^2-1)/4 for odd L; the constant
    coefficient is always 2 (from M = 0 and M = L).
    """
    if L < 2:
        raise DomainError("L must be at least 2")
    degree = (L * L) // 4
    coeffs = np.zeros(degree + 1, dtype=complex)
    for m in range(L + 1):
        coeffs[m * (L - m)] += 1.0
    return ComplexPolynomial(coeffs)


@dataclass
class ZeroLocus:
    zeros: list[complex]  # Delta values
    provenance: str  # "analytic" or "numeric"
    residuals: list[float]
    dropped: list[complex] = field(default_factory=list)


def analytic_zeros(L: int, beta: float, J: float = 1.0,
                   n_window=(0,), tol: float = 1e-12) -> ZeroLocus:
    """First-order zeros Delta_j = 1 - (L-1) Log(z_j)/(beta J) + i(L-1)2 pi n/(beta J).

    z_j are the roots of ``zero_polynomial(L)``; z is the Boltzmann
    weight per unit of the multiplet exponent M(L-M), so its logarithm
    enters with a minus sign.
    """
    if beta <= 0 or J <= 0:
        raise DomainError("beta and J must be positive")
    roots = roots_of_polynomial(zero_polynomial(L), tol=tol)
    zeros = []
    scale = (L - 1) / (beta * J)
    for n in n_window:
        for z in roots:
            delta = -scale * cmath.log(z) + 1j * scale * 2.0 * math.pi * n
            zeros.append(1.0 + delta)
    return ZeroLocus(zeros=zeros, provenance="analytic",
                     residuals=[float("nan")] * len(zeros))


def _secant_refine(f: Callable[[complex], complex], z0: complex,
                   step: complex, tol: float = 1e-11,
                   max_iter: int = 60) -> Optional[complex]:
    a, b = z0, z0 + step
    fa, fb = f(a), f(b)
    for _ in range(max_iter):
        if fb == fa:
            return None
        c = b - fb * (b - a) / (fb - fa)
        if not (np.isfinite(c.real) and np.isfinite(c.imag)):
            return None
        a, fa, b, fb = b, fb, c, f(c)
        if abs(b - a) < tol and abs(fb) < 1e-8:
            return b
    return b if abs(fb) < 1e-8 else None


def locate_zeros_numeric(L: int, beta: float, J: float,
                         re_window: tuple[float, float],
                         im_window: tuple[float, float],
                         grid_n: int = 60,
                         map_threads: Optional[Callable] = None) -> ZeroLocus:
    """Zeros of Z on a rectangle of the complex Delta plane.

    Candidate cells come from the phase winding of the scaled partition
    sum around each grid plaquette (Z is entire in Delta, so a 2 pi
    winding flags an enclosed zero); each candidate is polished by
    secant iteration.  Non-convergent candidates are reported in
    ``dropped``.  ``map_threads`` may supply a parallel map for the grid
    column evaluations; results are merged in deterministic order.
    """
    if L > 10:
        raise DomainError("grid search capped at L = 10")
    re0, re1 = re_window
    im0, im1 = im_window
    if not (re0 < re1 and im0 < im1):
        raise DomainError("windows must be nonempty intervals")
    res = np.linspace(re0, re1, grid_n)
    ims = np.linspace(im0, im1, grid_n)

    def column(re_val: float) -> np.ndarray:
        return np.array([partition_scaled(L, J, beta, complex(re_val - 1.0, im))
                         for im in ims])

    mapper = map_threads if map_threads is not None else map
    grid = np.array(list(mapper(column, res)))  # (re, im)
    phase = np.angle(grid)

    def wrap(d):
        return (d + math.pi) % (2.0 * math.pi) - math.pi

    zeros: list[complex] = []
    residuals: list[float] = []
    dropped: list[complex] = []
    for i in range(grid_n - 1):
        for j in range(grid_n - 1):
            winding = (wrap(phase[i + 1, j] - phase[i, j])
                       + wrap(phase[i + 1, j + 1] - phase[i + 1, j])
                       + wrap(phase[i, j + 1] - phase[i + 1, j + 1])
                       + wrap(phase[i, j] - phase[i, j + 1]))
            if abs(winding) < math.pi:
                continue
            center = complex(0.5 * (res[i] + res[i + 1]) - 1.0,
                             0.5 * (ims[j] + ims[j + 1]))
            cell = complex(res[i + 1] - res[i], ims[j + 1] - ims[j])
            root = _secant_refine(lambda d: partition_scaled(L, J, beta, d),
                                  center, 0.1 * cell)
            if root is None:
                dropped.append(1.0 + center)
                continue
            delta_root = root
            value = 1.0 + delta_root
            if any(abs(value - z) < 1e-6 for z in zeros):
                continue
            zeros.append(value)
            residuals.append(abs(partition_scaled(L, J, beta, delta_root)))
    order = np.lexsort((np.array([z.real for z in zeros]),
                        np.array([z.imag for z in zeros]))) if zeros else []
    zeros = [zeros[i] for i in order]
    residuals = [residuals[i] for i in order]
    return ZeroLocus(zeros=zeros, provenance="numeric", residuals=residuals,
                     dropped=dropped)


@dataclass
class ZeroPairing:
    analytic: list[complex]
    numeric: list[complex]
    distances: list[float]
    residuals: list[float]

    @property
    def max_distance(self) -> float:
        return max(self.distances)


def verify_analytic_zeros(L: int, beta: float, J: float = 1.0) -> ZeroPairing:
    """Pair every n = 0 analytic zero with a polished partition zero.

    Each analytic zero seeds a secant iteration on the scaled partition
    sum; the paired distance measures the first-order truncation error,
    which shrinks as beta grows.
    """
    locus = analytic_zeros(L, beta, J)
    numeric: list[complex] = []
    distances: list[float] = []
    residuals: list[float] = []
    for z in locus.zeros:
        root = _secant_refine(lambda d: partition_scaled(L, J, beta, d),
                              z - 1.0, 1e-4 * (1.0 + 1j))
        if root is None:
            raise YangLeeError(f"no partition zero near {z} (L={L}, beta={beta})")
        numeric.append(1.0 + root)
        distances.append(abs(numeric[-1] - z))
        residuals.append(abs(partition_scaled(L, J, beta, root)))
    return ZeroPairing(analytic=locus.zeros, numeric=numeric,
                       distances=distances, residuals=residuals)


# --- first-order Bethe reduction -------------------------------------------


@dataclass
class BetheRootSet:
    """Roots zeta_j of L zeta_j = 2 sum_{l != j} (1 + zeta_l zeta_j)/(zeta_l - zeta_j)."""

    L: int
    M: int
    zeta: np.ndarray

    @property
    def sum_rule_linear(self) -> float:
        return float(abs(np.sum(self.zeta)))

    @property
    def sum_rule_quadratic(self) -> float:
        target = -self.M * (self.M - 1) / (self.L - 1)
        return float(abs(np.sum(self.zeta ** 2) - target))


def _bethe_residual(L: int):
    def f(zeta: np.ndarray) -> np.ndarray:
        diff = zeta[None, :] - zeta[:, None]  # diff[j, l] = zeta_l - zeta_j
        np.fill_diagonal(diff, 1.0)
        num = 1.0 + zeta[:, None] * zeta[None, :]
        frac = num / diff
        np.fill_diagonal(frac, 0.0)
        return L * zeta - 2.0 * frac.sum(axis=1)
    return f


def solve_bethe_roots(L: int, M: int, tol: float = 1e-12,
                      seed: int = 0, retries: int = 8) -> BetheRootSet:
    """Solve the reduced Bethe system for the split ground multiplet.

    The root set is symmetric under zeta -> -zeta; scaled Hermite zeros
    i sqrt(2/(L-1)) * hermroots(M) share that symmetry, are exact for
    M <= 3, and give Newton a basin it rarely leaves.  Failed attempts
    retry from deterministically perturbed starts.
    """
    if not 1 <= M <= L - 1:
        raise DomainError("need 1 <= M <= L - 1")
    if M == 1:
        return BetheRootSet(L=L, M=M, zeta=np.zeros(1, dtype=complex))
    herm = np.polynomial.hermite.hermroots([0.0] * M + [1.0])
    start = 1j * math.sqrt(2.0 / (L - 1)) * np.sort(herm.astype(float))
    start = start.astype(complex)
    residual = _bethe_residual(L)
    last_error: Optional[Exception] = None
    for attempt in range(retries):
        guess = start
        if attempt > 0:
            rng = np.random.default_rng(seed + attempt)
            bump = rng.standard_normal(M) + 1j * rng.standard_normal(M)
            guess = start + 1e-3 * bump
        try:
            zeta = newton_system(residual, guess, tol=tol, max_iter=200)
        except NewtonError as exc:
            last_error = exc
            continue
        pair_dist = np.abs(zeta[:, None] - zeta[None, :])
        np.fill_diagonal(pair_dist, np.inf)
        if pair_dist.min() <= 1e-8 or not np.all(np.isfinite(zeta)):
            last_error = YangLeeError("coincident Bethe roots")
            continue
        zeta = zeta[np.lexsort((zeta.real, zeta.imag))]
        return BetheRootSet(L=L, M=M, zeta=zeta)
    raise YangLeeError(
        f"Bethe solve failed for L={L}, M={M}: {last_error}")


# --- energies, gaps, densities, response ------------------------------------


@dataclass
class MagnonEnergy:
    energy: complex
    gap_gapless: float
    gap_gapped: float


def magnon_energy_and_gap(L: int, M: int, J: float, delta: complex) -> MagnonEnergy:
    """First-order multiplet energy and the two phase-resolved gap formulas.

    E_M = -J L (1 + delta) / 4 + J delta M (L - M) / (L - 1).  On the
    gapless side (Re delta < 0, even L) adjacent multiplet levels sit
    -J Re delta / (L - 1) apart; on the gapped side the gap is
    J Re delta above the ferromagnetic doublet.
    """
    if L < 2:
        raise DomainError("L must be at least 2")
    delta = complex(delta)
    e0 = -J * L * (1.0 + delta) / 4.0
    energy = e0 + J * delta * M * (L - M) / (L - 1)
    return MagnonEnergy(energy=complex(energy),
                        gap_gapless=-J * delta.real / (L - 1),
                        gap_gapped=J * delta.real)


def zero_density(L: int, beta: float, J: float = 1.0) -> float:
    """Zeros per unit imaginary anisotropy along the locus: beta J N / (2 pi (L-1))."""
    if beta <= 0 or J <= 0:
        raise DomainError("beta and J must be positive")
    n_roots = zero_polynomial(L).degree
    return beta * J * n_roots / (2.0 * math.pi * (L - 1))


@dataclass
class SusceptibilityScan:
    chi_zero_field: float
    sigma_fit: float
    table: list[tuple[float, float]]  # (|delta|, chi)


def susceptibility_scaling(L: int, J: float, delta_res, h: float = 1e-4) -> SusceptibilityScan:
    """Zero-field susceptibility on the gapless side and its exponent.

    A field h couples as -h S^z_total; minimizing E_M - h (L/2 - M) over
    continuous M gives M* = L/2 + h (L - 1) / (2 J delta) and the
    per-site response chi = 2 s_z / h = -(L - 1) / (L J delta).  The
    log-log slope of chi against |delta| is the fitted exponent.
    """
    deltas = np.asarray(delta_res, dtype=float)
    if np.any(deltas >= 0):
        raise DomainError("susceptibility scan is for the gapless side Re delta < 0")
    table = []
    for d in deltas:
        m_star = L / 2.0 + h * (L - 1) / (2.0 * J * d)
        if not 0.0 < m_star < L:
            raise DomainError(f"h={h} too large: M* leaves (0, L) at delta={d}")
        s_z = (L / 2.0 - m_star) / L
        table.append((abs(d), 2.0 * s_z / h))
    chis = np.array([c for _, c in table])
    mags = np.array([m for m, _ in table])
    if np.any(chis <= 0):
        raise DomainError("susceptibility came out nonpositive")
    sigma = -float(np.polyfit(np.log(mags), np.log(chis), 1)[0])
    return SusceptibilityScan(chi_zero_field=float(chis[np.argmin(mags)]),
                              sigma_fit=sigma, table=table)
