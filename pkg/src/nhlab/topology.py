"""Exceptional-point geometry, band tracking over 4*pi, winding numbers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GaplessTrajectoryError, OnBoundaryError, TrackingAmbiguityError
from .model import SIGMA_X, SIGMA_Z, LatticeParams
from .spectra import BlochEigensystem

DEFAULT_SAMPLES = 4001
AMBIGUITY_MARGIN = 1e-3


@dataclass(frozen=True)
class WindingResult:
    winding: float               # multiple of 1/2
    closure_period: str          # "2pi" | "4pi"
    trajectory: np.ndarray       # (samples, 2) of (<sigma_x>, <sigma_z>)
    eps_enclosed: int


def count_enclosed_eps(params: LatticeParams, tol: float = 1e-9) -> int:
    """How many of the exceptional points (+-gamma/2, 0) the hopping circle encloses.

    The circle has center (v, 0) and radius r in the (h_x, h_z) plane.
    Raises OnBoundaryError when the circle passes through an EP.
    """
    count = 0
    for s in (+1.0, -1.0):
        dist = abs(s * params.gamma / 2 - params.v)
        if abs(dist - params.r) < tol:
            raise OnBoundaryError(
                f"trajectory passes through EP at ({s * params.gamma / 2}, 0)"
            )
        if dist < params.r:
            count += 1
    return count


def _closed_form_branches(params: LatticeParams, ks: np.ndarray, phi: float):
    """Vectorized Bloch branches: energies and unit eigenvectors at each k."""
    hx = (params.v + params.r * np.cos(ks + phi)).astype(complex)
    b = params.r * np.sin(ks + phi) + 0.5j * params.gamma
    E = np.sqrt(hx ** 2 + b ** 2)
    if np.any(np.abs(E) < 1e-12):
        raise OnBoundaryError("a sampled momentum sits at an exceptional point")
    cb = b / E
    use_c = np.abs(1.0 + cb) >= np.abs(1.0 - cb)
    c = np.empty_like(E)
    s = np.empty_like(E)
    c[use_c] = np.sqrt((1.0 + cb[use_c]) / 2.0)
    s[use_c] = hx[use_c] / (2.0 * E[use_c] * c[use_c])
    s[~use_c] = np.sqrt((1.0 - cb[~use_c]) / 2.0)
    c[~use_c] = hx[~use_c] / (2.0 * E[~use_c] * s[~use_c])
    u_plus = np.stack([c, s])            # (2, nk)
    u_minus = np.stack([-s, c])
    u_plus = u_plus / np.linalg.norm(u_plus, axis=0, keepdims=True)
    u_minus = u_minus / np.linalg.norm(u_minus, axis=0, keepdims=True)
    return E, u_plus, u_minus


def _continuation_branch(u_plus: np.ndarray, u_minus: np.ndarray) -> np.ndarray:
    """Branch index (0 for +, 1 for -) per sample by overlap continuation."""
    nk = u_plus.shape[1]
    o_pp = np.abs(np.sum(u_plus[:, :-1].conj() * u_plus[:, 1:], axis=0))
    o_pm = np.abs(np.sum(u_plus[:, :-1].conj() * u_minus[:, 1:], axis=0))
    o_mp = np.abs(np.sum(u_minus[:, :-1].conj() * u_plus[:, 1:], axis=0))
    o_mm = np.abs(np.sum(u_minus[:, :-1].conj() * u_minus[:, 1:], axis=0))
    branch = np.empty(nk, dtype=np.int64)
    branch[0] = 0
    cur = 0
    for i in range(nk - 1):
        same = o_pp[i] if cur == 0 else o_mm[i]
        cross = o_pm[i] if cur == 0 else o_mp[i]
        if abs(same - cross) < AMBIGUITY_MARGIN:
            raise TrackingAmbiguityError(
                f"overlaps differ by {abs(same - cross):.2g} at step {i}; refine sampling"
            )
        if cross > same:
            cur = 1 - cur
        branch[i + 1] = cur
    return branch


def track_band(params: LatticeParams, phi: float = 0.0,
               samples: int = DEFAULT_SAMPLES) -> list[BlochEigensystem]:
    """Continuously tracked Bloch branch over k in [0, 4*pi].

    Starts on the principal (+) branch at k=0 and follows it by maximum
    eigenvector overlap. In each returned element the first
    energy/vector slot holds the tracked branch; the second holds the
    other one. The endpoint k = 4*pi is included so closure can be
    checked directly.
    """
    if samples < 400:
        raise ValueError("samples must be >= 400")
    ks = np.linspace(0.0, 4 * np.pi, samples)
    E, u_plus, u_minus = _closed_form_branches(params, ks, phi)
    branch = _continuation_branch(u_plus, u_minus)
    out = []
    for i, k in enumerate(ks):
        if branch[i] == 0:
            energies = (complex(E[i]), complex(-E[i]))
            vectors = (u_plus[:, i].copy(), u_minus[:, i].copy())
        else:
            energies = (complex(-E[i]), complex(E[i]))
            vectors = (u_minus[:, i].copy(), u_plus[:, i].copy())
        out.append(BlochEigensystem(k=float(k), energies=energies,
                                    vectors=vectors, theta=0j))
    return out


def band_coefficients(u: np.ndarray, basis_plus: np.ndarray,
                      basis_minus: np.ndarray) -> np.ndarray:
    """Expansion coefficients of u in the (non-orthogonal) eigenbasis.

    Solves [u_+ u_-] c = u; |c| decides which band a state occupies.
    Plain inner products cannot, because the right eigenvectors of a
    non-Hermitian matrix are not orthogonal.
    """
    B = np.column_stack([basis_plus, basis_minus])
    return np.linalg.solve(B, u)


def winding_number(tracked: list[BlochEigensystem],
                   origin_tol: float = 1e-9,
                   realness_tol: float = 1e-12) -> WindingResult:
    """Winding of the (<sigma_x>, <sigma_z>) trajectory over the 4*pi sweep.

    Expectation values use the right-eigenvector self-expectation
    u^dag sigma u / u^dag u, which is exactly real. The signed angle
    about the origin is accumulated stepwise (each step must advance
    less than pi/2) and divided by 4*pi.
    """
    U = np.stack([t.vectors[0] for t in tracked], axis=1)   # (2, nk)
    norms = np.sum(U.conj() * U, axis=0).real
    x_c = np.sum(U.conj() * (SIGMA_X @ U), axis=0)
    z_c = np.sum(U.conj() * (SIGMA_Z @ U), axis=0)
    if np.abs(x_c.imag).max() > realness_tol or np.abs(z_c.imag).max() > realness_tol:
        raise AssertionError("expectation values of Hermitian operators must be real")
    x = x_c.real / norms
    z = z_c.real / norms
    radii = np.hypot(x, z)
    if radii.min() < origin_tol:
        raise GaplessTrajectoryError("trajectory touches the origin; winding undefined")
    ang = np.arctan2(z, x)
    dang = np.diff(ang)
    dang = (dang + np.pi) % (2 * np.pi) - np.pi
    if np.abs(dang).max() >= np.pi / 2:
        raise TrackingAmbiguityError("angle step exceeds pi/2; refine sampling")
    total = float(dang.sum())
    winding = total / (4 * np.pi)
    quantized = round(2 * winding) / 2
    if abs(winding - quantized) > 0.01:
        raise AssertionError(f"winding {winding} is not a half-integer multiple")
    # Closure at 2*pi: the Bloch matrix there equals the one at k=0, so
    # the tracked vector is (up to phase) one of the two k=0 eigenvectors.
    ks = np.array([t.k for t in tracked])
    i2pi = int(np.argmin(np.abs(ks - 2 * np.pi)))
    c = band_coefficients(tracked[i2pi].vectors[0],
                          tracked[0].vectors[0], tracked[0].vectors[1])
    closure = "2pi" if abs(c[0]) >= abs(c[1]) else "4pi"
    return WindingResult(
        winding=quantized,
        closure_period=closure,
        trajectory=np.stack([x, z], axis=1),
        eps_enclosed=int(round(2 * abs(quantized))),
    )
