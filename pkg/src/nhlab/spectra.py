"""Eigendecomposition, gap/reality diagnostics, and defectiveness analysis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigenDecompositionError, ExceptionalPointError, NoZeroModeError
from .model import Boundary, LatticeParams, build_bloch, build_real_space, chiral_residual

# Two eigenvalues belong to the same cluster when they are closer than
# this fraction of ||H||_2.
CLUSTER_TOL = 1e-8


def fix_phase(u: np.ndarray) -> np.ndarray:
    """Normalize and rotate so the largest-magnitude component is real positive."""
    u = np.asarray(u, dtype=complex)
    u = u / np.linalg.norm(u)
    j = int(np.argmax(np.abs(u)))
    ph = u[j] / abs(u[j])
    return u / ph


def eig(H: np.ndarray):
    """Eigenvalues and unit-norm right eigenvectors of a dense complex matrix.

    For defective clusters the returned vectors may be nearly dependent;
    use geometric_multiplicity, never the vector count, to assess
    defectiveness.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got {H.shape}")
    if not np.all(np.isfinite(H)):
        raise ValueError("matrix has non-finite entries")
    try:
        w, V = np.linalg.eig(H)
    except np.linalg.LinAlgError as exc:
        raise EigenDecompositionError(str(exc)) from exc
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    return w, V


@dataclass(frozen=True)
class BlochEigensystem:
    """Closed-form eigensystem of the 2x2 Bloch matrix at one momentum.

    energies = (E_+, E_-) with E_+ the principal square root of
    h_x^2 + (h_z + i gamma/2)^2 and E_- = -E_+; vectors are the matching
    unit-norm eigenvectors. theta is the complex half-angle parameter
    with tan(theta) = -h_x / (h_z + i gamma/2).
    """

    k: float
    energies: tuple[complex, complex]
    vectors: tuple[np.ndarray, np.ndarray]
    theta: complex


def bloch_eigensystem(params: LatticeParams, k: float, phi: float = 0.0,
                      tol: float = 1e-8) -> BlochEigensystem:
    """Both Bloch branches in half-angle form.

    Raises ExceptionalPointError when the two eigenvalues coalesce
    (|E| < tol * ||H_k||), where the eigenvectors merge too.
    """
    bm = build_bloch(params, k, phi)
    b = bm.h_z + 0.5j * params.gamma
    hx = complex(bm.h_x)
    E = np.sqrt(hx * hx + b * b)  # principal branch
    scale = np.linalg.norm(bm.entries, 2)
    if abs(E) < tol * max(scale, 1e-300):
        raise ExceptionalPointError(
            f"eigenvalues coalesce at k={k}, phi={phi} (|E|={abs(E):.3g})"
        )
    # Half-angle components: b = E cos(t), hx = E sin(t). Pick the
    # better-conditioned half-angle formula.
    cb = b / E
    if abs(1.0 + cb) >= abs(1.0 - cb):
        c = np.sqrt((1.0 + cb) / 2.0)
        s = hx / (2.0 * E * c)
    else:
        s = np.sqrt((1.0 - cb) / 2.0)
        c = hx / (2.0 * E * s)
    u_plus = np.array([c, s], dtype=complex)
    u_minus = np.array([-s, c], dtype=complex)
    # Complex mixing angle: tan(theta) = -hx / b.
    theta = -2.0 * np.arctan(complex(s / c)) if c != 0 else complex(-np.pi)
    return BlochEigensystem(
        k=k,
        energies=(complex(E), complex(-E)),
        vectors=(fix_phase(u_plus), fix_phase(u_minus)),
        theta=complex(theta),
    )


def geometric_multiplicity(H: np.ndarray, lam: complex, tol: float | None = None) -> int:
    """Dimension of the (tolerance-resolved) null space of H - lam*I.

    Counts singular values below tol * sigma_max; default tol is
    dim * machine-epsilon (standard backward-stable rank decision).
    """
    H = np.asarray(H, dtype=complex)
    dim = H.shape[0]
    if tol is None:
        tol = dim * np.finfo(float).eps
    if tol <= 0:
        raise ValueError("tol must be > 0")
    s = np.linalg.svd(H - lam * np.eye(dim), compute_uv=False)
    if s[0] == 0.0:
        return dim
    return int(np.sum(s < tol * s[0]))


def smallest_singular_values(H: np.ndarray, count: int = 1) -> list[float]:
    """The `count` smallest singular values of H, ascending."""
    if count < 1:
        raise ValueError("count must be >= 1")
    s = np.linalg.svd(np.asarray(H, dtype=complex), compute_uv=False)
    return [float(x) for x in s[::-1][:count]]


@dataclass(frozen=True)
class ZeroModeInfo:
    u0: np.ndarray
    u0_prime: np.ndarray
    defective: bool
    algebraic_multiplicity: int
    geometric_multiplicity: int


def zero_mode_analysis(H: np.ndarray, tol: float = 1e-8,
                       require_chiral: bool = True) -> ZeroModeInfo:
    """Eigenvector and generalized eigenvector of the E=0 cluster.

    u0 is the unit-norm null direction from the smallest singular
    triplet; u0_prime is the minimum-norm least-squares solution of
    H u0' = u0 (the generalized eigenvector is only defined up to
    multiples of u0). Raises NoZeroModeError when the smallest singular
    value is not below tol * sigma_max.

    Presence is decided by the singular-value criterion: the QR
    eigensolver can scatter a defective zero pair by far more than the
    true splitting, while sigma_min = 0 iff 0 is an eigenvalue. The
    algebraic count uses an eigenvalue cluster radius widened to the
    observed scatter.
    """
    H = np.asarray(H, dtype=complex)
    if require_chiral and chiral_residual(H) > 1e-12 * max(np.abs(H).max(), 1.0):
        raise ValueError("zero_mode_analysis requires a chiral matrix")
    scale = np.linalg.norm(H, 2)
    _, s, vh = np.linalg.svd(H)
    if not s[-1] < tol * s[0]:
        raise NoZeroModeError(f"sigma_min = {s[-1]:.3g} >= {tol * s[0]:.3g}")
    u0 = fix_phase(vh[-1].conj())
    geo = int(np.sum(s < tol * s[0]))
    w = np.linalg.eigvals(H)
    radius = min(max(tol * scale, 2.0 * np.abs(w).min()), 1e-3 * scale)
    alg = int(np.sum(np.abs(w) <= radius))
    u0_prime, *_ = np.linalg.lstsq(H, u0, rcond=tol)
    return ZeroModeInfo(
        u0=u0,
        u0_prime=u0_prime,
        defective=(alg == 2 and geo == 1),
        algebraic_multiplicity=alg,
        geometric_multiplicity=geo,
    )


@dataclass(frozen=True)
class Cluster:
    value: complex
    algebraic: int
    geometric: int


@dataclass(frozen=True)
class SpectralReport:
    eigenvalues: np.ndarray
    clusters: list[Cluster]
    real_gap: float
    is_real: bool
    zero_cluster: ZeroModeInfo | None


def spectral_report(H: np.ndarray, cluster_tol: float = CLUSTER_TOL,
                    reality_tol: float = 1e-8) -> SpectralReport:
    """Full spectrum with clustered multiplicities and zero-mode data.

    real_gap is the distance of the non-zero-cluster spectrum from
    Re E = 0 (zero when the bands touch the imaginary axis).
    """
    H = np.asarray(H, dtype=complex)
    scale = np.linalg.norm(H, 2)
    w, _ = eig(H)
    clusters = []
    thresh = cluster_tol * max(scale, 1e-300)
    order = np.lexsort((w.imag, w.real))
    ws = w[order]
    groups: list[list[complex]] = []
    for val in ws:
        placed = False
        for g in groups:
            if any(abs(val - x) < thresh for x in g):
                g.append(val)
                placed = True
                break
        if not placed:
            groups.append([val])
    for g in groups:
        rep = complex(np.mean(g))
        clusters.append(Cluster(value=rep, algebraic=len(g),
                                geometric=geometric_multiplicity(H, rep, tol=cluster_tol)))
    zero = None
    if any(abs(c.value) < thresh for c in clusters):
        zero = zero_mode_analysis(H, tol=cluster_tol, require_chiral=False)
    band_re = [abs(c.value.real) for c in clusters if abs(c.value) >= thresh]
    return SpectralReport(
        eigenvalues=w,
        clusters=clusters,
        real_gap=float(min(band_re)) if band_re else 0.0,
        is_real=bool(np.abs(w.imag).max() < reality_tol * max(scale, 1e-300)),
        zero_cluster=zero,
    )


@dataclass(frozen=True)
class GapReport:
    real_gap_open: bool
    imag_gap: bool
    spectrum_real: bool
    numeric_real_gap_open: bool | None = None
    numeric_imag_gap: bool | None = None


def gap_report(params: LatticeParams, k_samples: int = 4001,
               numeric_tol: float = 1e-4, reality_tol: float = 1e-8) -> GapReport:
    """Band-gap and spectrum-reality flags.

    Periodic chains: closed-form criteria (real part gapped iff
    ||v| - r| > gamma/2, imaginary part gapped iff |v| + r < gamma/2)
    alongside a dense-k numerical check. Open chains: spectrum_real from
    the real-space eigenvalues.
    """
    v, r, g = params.v, params.r, params.gamma
    cf_real = abs(abs(v) - r) > g / 2
    cf_imag = abs(v) + r < g / 2
    if params.boundary is Boundary.PERIODIC:
        ks = np.linspace(0.0, 2 * np.pi, k_samples)
        hx = v + r * np.cos(ks)
        b = r * np.sin(ks) + 0.5j * g
        E = np.sqrt(hx ** 2 + b ** 2)
        num_real = bool(np.abs(E.real).min() > numeric_tol)
        num_imag = bool(np.abs(E.imag).min() > numeric_tol)
        spectrum_real = bool(np.abs(E.imag).max() < reality_tol)
        return GapReport(cf_real, cf_imag, spectrum_real, num_real, num_imag)
    H = build_real_space(params)
    w = np.linalg.eigvals(H)
    scale = np.linalg.norm(H, 2)
    spectrum_real = bool(np.abs(w.imag).max() < reality_tol * scale)
    return GapReport(cf_real, cf_imag, spectrum_real)


@dataclass(frozen=True)
class EdgeProfile:
    side: str                    # "left" | "right" | "delocalized"
    weights: np.ndarray          # per-unit-cell probability


def edge_profile(u: np.ndarray, weight_threshold: float = 0.9) -> EdgeProfile:
    """Per-cell weights |alpha_n|^2 + |beta_n|^2 and which edge holds them."""
    u = np.asarray(u, dtype=complex)
    if abs(np.linalg.norm(u) - 1.0) > 1e-8:
        raise ValueError("edge_profile expects a unit-norm vector")
    w = np.abs(u[0::2]) ** 2 + np.abs(u[1::2]) ** 2
    n = len(w)
    edge = int(np.ceil(n / 4))
    if w[:edge].sum() > weight_threshold:
        side = "left"
    elif w[n - edge:].sum() > weight_threshold:
        side = "right"
    else:
        side = "delocalized"
    return EdgeProfile(side=side, weights=w)


def exact_zero_mode(n_cells: int) -> np.ndarray:
    """The v = gamma/2 left edge state (i, 1, 0, ...)/sqrt(2)."""
    u = np.zeros(2 * n_cells, dtype=complex)
    u[0] = 1j
    u[1] = 1.0
    return u / np.sqrt(2.0)


def exact_generalized_zero_mode(n_cells: int, r: float, gamma: float) -> np.ndarray:
    """Closed-form generalized eigenvector at v = gamma/2.

    Components (2/gamma, 0, -r/gamma^2, -i r/gamma^2, r^2/gamma^3,
    i r^2/gamma^3, ...), normalized against the unnormalized edge state
    (i, 1, 0, ...); rescale consistently when comparing.
    """
    u = np.zeros(2 * n_cells, dtype=complex)
    u[0] = 2.0 / gamma
    coef = -r / gamma ** 2
    for c in range(1, n_cells):
        u[2 * c] = coef
        u[2 * c + 1] = 1j * coef
        coef *= -r / gamma
    return u
