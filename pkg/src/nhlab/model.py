"""Lattice Hamiltonian builders and symmetry operators.

The chain has two sites per unit cell (sublattices alpha and beta) with
gain +i*gamma/2 on alpha and loss -i*gamma/2 on beta, an intra-cell
hopping v, and long-range inter-cell hoppings of strength r (both
sublattice-preserving imaginary hops and diagonal real cross hops).

Basis ordering is alpha_1, beta_1, alpha_2, beta_2, ..., alpha_N, beta_N
everywhere in this package. The amplitude vector psi evolves as
dpsi/dt = -i H psi, and momentum components are defined through
alpha_n = sum_k exp(i k n) alpha_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class Boundary(str, Enum):
    OPEN = "open"
    PERIODIC = "periodic"


class DisorderTarget(str, Enum):
    HOPPING_R = "r"
    HOPPING_V = "v"
    GAIN_LOSS = "gamma"
    # Real on-site energy, equal on both sublattices. Breaks chiral
    # symmetry; included so the symmetry-conditional nature of the
    # zero-mode protection can be demonstrated.
    ON_SITE = "onsite"


@dataclass(frozen=True)
class LatticeParams:
    """Clean-chain parameters. r must be positive; v may take any sign."""

    v: float
    r: float
    gamma: float
    n_cells: int
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"inter-cell hopping r must be > 0, got {self.r}")
        if self.gamma < 0:
            raise ValueError(f"gain/loss rate gamma must be >= 0, got {self.gamma}")
        if self.n_cells < 1:
            raise ValueError(f"n_cells must be >= 1, got {self.n_cells}")

    @property
    def dim(self) -> int:
        return 2 * self.n_cells


@dataclass(frozen=True)
class DisorderConfig:
    """Per-unit-cell disorder: target base value + strength * draws[n].

    draws are uniform variates on [-1, 1], one per unit cell; identical
    seeds give identical draws. For HOPPING_R the n-th draw perturbs the
    bond linking cells n and n+1. cross_draws, when given, lets the
    sublattice-preserving and cross-sublattice hopping lines of a bond
    carry independent r values (chiral symmetry survives either way).
    """

    target: DisorderTarget
    strength: float
    seed: int
    draws: np.ndarray
    cross_draws: np.ndarray | None = None

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError(f"disorder strength must be >= 0, got {self.strength}")
        draws = np.asarray(self.draws, dtype=float)
        object.__setattr__(self, "draws", draws)
        if np.any(np.abs(draws) > 1.0):
            raise ValueError("disorder draws must lie in [-1, 1]")
        if self.cross_draws is not None:
            cross = np.asarray(self.cross_draws, dtype=float)
            object.__setattr__(self, "cross_draws", cross)
            if cross.shape != draws.shape:
                raise ValueError("cross_draws must match draws in length")
            if np.any(np.abs(cross) > 1.0):
                raise ValueError("disorder draws must lie in [-1, 1]")

    @classmethod
    def from_seed(cls, target: DisorderTarget, strength: float, seed: int,
                  n_cells: int) -> "DisorderConfig":
        rng = np.random.default_rng(seed)
        return cls(target=target, strength=strength, seed=seed,
                   draws=rng.uniform(-1.0, 1.0, n_cells))


@dataclass(frozen=True)
class PhaseModulation:
    """Static hopping phase phi, optionally ramped at rate omega."""

    phi: float = 0.0
    omega: float | None = None

    def at(self, t: float) -> float:
        if self.omega is None:
            return self.phi
        return self.phi + self.omega * t


@dataclass(frozen=True)
class BlochMatrix:
    """2x2 momentum-space Hamiltonian h_x sigma_x + (h_z + i gamma/2) sigma_z."""

    k: float
    h_x: float
    h_z: float
    entries: np.ndarray = field(repr=False)


def build_bloch(params: LatticeParams, k: float, phi: float = 0.0) -> BlochMatrix:
    """Bloch matrix at momentum k with hopping phase phi.

    h_x = v + r cos(k + phi), h_z = r sin(k + phi); increasing phi at
    fixed k sweeps through the Brillouin zone.
    """
    h_x = params.v + params.r * np.cos(k + phi)
    h_z = params.r * np.sin(k + phi)
    b = h_z + 0.5j * params.gamma
    entries = np.array([[b, h_x], [h_x, -b]], dtype=complex)
    return BlochMatrix(k=k, h_x=h_x, h_z=h_z, entries=entries)


def _per_cell_values(params: LatticeParams, disorder: DisorderConfig | None):
    n = params.n_cells
    rn = np.full(n, params.r)
    rn_cross = None
    vn = np.full(n, params.v)
    gn = np.full(n, params.gamma)
    onsite = np.zeros(n)
    if disorder is not None:
        if len(disorder.draws) != n:
            raise ValueError(
                f"disorder draws length {len(disorder.draws)} != n_cells {n}"
            )
        bump = disorder.strength * disorder.draws
        if disorder.target is DisorderTarget.HOPPING_R:
            rn = rn + bump
            if disorder.cross_draws is not None:
                rn_cross = np.full(n, params.r) + disorder.strength * disorder.cross_draws
        elif disorder.target is DisorderTarget.HOPPING_V:
            vn = vn + bump
        elif disorder.target is DisorderTarget.GAIN_LOSS:
            gn = gn + bump
        elif disorder.target is DisorderTarget.ON_SITE:
            onsite = bump
    if rn_cross is None:
        rn_cross = rn
    return rn, rn_cross, vn, gn, onsite


def build_real_space(params: LatticeParams,
                     disorder: DisorderConfig | None = None,
                     phi: float = 0.0,
                     decay_offset: float = 0.0) -> np.ndarray:
    """Dense 2N x 2N real-space Hamiltonian.

    Bond n couples cells n and n+1 and carries the hopping value r_n
    (one value per unit cell, applied to both hopping lines of the
    bond). With phi != 0 every inter-cell amplitude picks up
    exp(-i phi) on the n+1 <- n direction and exp(+i phi) on the
    reverse. decay_offset > 0 subtracts a uniform i*delta background
    (passive-realization shift); it commutes with everything.
    """
    n = params.n_cells
    rn, rn_cross, vn, gn, onsite = _per_cell_values(params, disorder)
    dim = 2 * n
    H = np.zeros((dim, dim), dtype=complex)
    ai = lambda c: 2 * c        # alpha index of cell c (0-based)
    bi = lambda c: 2 * c + 1
    for c in range(n):
        H[ai(c), ai(c)] += 0.5j * gn[c] + onsite[c]
        H[bi(c), bi(c)] += -0.5j * gn[c] + onsite[c]
        H[ai(c), bi(c)] += vn[c]
        H[bi(c), ai(c)] += vn[c]
    fwd = np.exp(-1j * phi)     # phase on n+1 <- n amplitudes
    bwd = np.exp(1j * phi)
    bonds = range(n - 1) if params.boundary is Boundary.OPEN else range(n)
    for c in bonds:
        m = (c + 1) % n
        r_same = rn[c]
        r_cross = rn_cross[c]
        H[ai(m), ai(c)] += 0.5j * r_same * fwd
        H[ai(c), ai(m)] += -0.5j * r_same * bwd
        H[bi(m), bi(c)] += -0.5j * r_same * fwd
        H[bi(c), bi(m)] += 0.5j * r_same * bwd
        H[bi(m), ai(c)] += 0.5 * r_cross * fwd
        H[ai(c), bi(m)] += 0.5 * r_cross * bwd
        H[ai(m), bi(c)] += 0.5 * r_cross * fwd
        H[bi(c), ai(m)] += 0.5 * r_cross * bwd
    if decay_offset:
        H -= 1j * decay_offset * np.eye(dim)
    return H


def chiral_operator(n_cells: int) -> np.ndarray:
    """Gamma = direct sum of sigma_y over unit cells; Gamma^2 = identity."""
    if n_cells < 1:
        raise ValueError("n_cells must be >= 1")
    return np.kron(np.eye(n_cells), SIGMA_Y)


def parity_operator(n_cells: int) -> np.ndarray:
    """P = direct sum of sigma_x over unit cells (swaps the sublattices)."""
    if n_cells < 1:
        raise ValueError("n_cells must be >= 1")
    return np.kron(np.eye(n_cells), SIGMA_X)


def chiral_residual(H: np.ndarray) -> float:
    """Max-entry norm of Gamma H Gamma + H; zero iff H is chiral."""
    n_cells = _check_even_square(H)
    G = chiral_operator(n_cells)
    return float(np.abs(G @ H @ G + H).max())


def pt_residual(H: np.ndarray) -> float:
    """Max-entry norm of P conj(H) P - H; zero iff H is PT symmetric."""
    n_cells = _check_even_square(H)
    P = parity_operator(n_cells)
    return float(np.abs(P @ np.conj(H) @ P - H).max())


def _check_even_square(H: np.ndarray) -> int:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] % 2:
        raise ValueError(f"expected a square even-dimensional matrix, got {H.shape}")
    return H.shape[0] // 2
