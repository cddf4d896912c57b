import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from nhlab import (GaplessTrajectoryError, LatticeParams, OnBoundaryError,
                   TrackingAmbiguityError, band_coefficients, count_enclosed_eps,
                   track_band, winding_number)
from nhlab.spectra import BlochEigensystem

# The three parameter sets of the periodic-chain phase diagram: zero, one
# and two exceptional points enclosed by the (h_x, h_z) hopping circle.
FIG2C_SETS = [
    (LatticeParams(v=0.3, r=0.18, gamma=1.0, n_cells=1), 0, 0.0, "2pi"),
    (LatticeParams(v=0.3, r=0.3, gamma=1.0, n_cells=1), 1, 0.5, "4pi"),
    (LatticeParams(v=0.3, r=1.0, gamma=1.0, n_cells=1), 2, 1.0, "2pi"),
]

clean_params_st = st.builds(
    LatticeParams,
    v=st.floats(-1.5, 1.5),
    r=st.floats(0.1, 1.5),
    gamma=st.floats(0.1, 2.0),
    n_cells=st.just(1),
)


def away_from_boundaries(p, margin=0.05):
    return all(abs(abs(s * p.gamma / 2 - p.v) - p.r) > margin for s in (1, -1))


def normalized_coeffs(u, basis_plus, basis_minus):
    c = np.abs(band_coefficients(u, basis_plus, basis_minus))
    return c / np.linalg.norm(c)


class TestCountEnclosedEps:
    @pytest.mark.parametrize("params,n_eps,_w,_c", FIG2C_SETS)
    def test_figure_sets(self, params, n_eps, _w, _c):
        assert count_enclosed_eps(params) == n_eps

    def test_on_boundary_raises(self):
        # distance from center (v, 0) to EP (+gamma/2, 0) equals r
        p = LatticeParams(v=0.2, r=0.3, gamma=1.0, n_cells=1)
        with pytest.raises(OnBoundaryError):
            count_enclosed_eps(p)

    def test_hermitian_limit_counts_both(self):
        # gamma = 0 merges the EPs at the origin; enclosed iff |v| < r.
        assert count_enclosed_eps(LatticeParams(v=0.3, r=1.0, gamma=0.0, n_cells=1)) == 2
        assert count_enclosed_eps(LatticeParams(v=1.5, r=0.5, gamma=0.0, n_cells=1)) == 0

    @given(clean_params_st)
    @settings(max_examples=100, deadline=None)
    def test_matches_geometric_predicate(self, p):
        assume(away_from_boundaries(p, margin=1e-6))
        expected = sum(abs(s * p.gamma / 2 - p.v) < p.r for s in (1, -1))
        assert count_enclosed_eps(p) == expected


class TestTrackBand:
    def test_rejects_too_few_samples(self):
        p = FIG2C_SETS[0][0]
        with pytest.raises(ValueError):
            track_band(p, samples=100)

    def test_length_and_span(self):
        p = FIG2C_SETS[0][0]
        tracked = track_band(p, samples=801)
        assert len(tracked) == 801
        assert tracked[0].k == 0.0
        assert tracked[-1].k == pytest.approx(4 * np.pi)

    def test_starts_on_principal_branch(self):
        for p, *_ in FIG2C_SETS:
            first = track_band(p)[0]
            E = first.energies[0]
            assert E == pytest.approx(-first.energies[1])
            # principal square root: Re >= 0
            assert E.real >= 0 or abs(E.real) < 1e-12

    @pytest.mark.parametrize("params,n_eps,_w,_c", FIG2C_SETS)
    def test_closure_at_two_pi(self, params, n_eps, _w, _c):
        tracked = track_band(params)
        ks = np.array([t.k for t in tracked])
        i2pi = int(np.argmin(np.abs(ks - 2 * np.pi)))
        c = normalized_coeffs(tracked[i2pi].vectors[0],
                              tracked[0].vectors[0], tracked[0].vectors[1])
        if n_eps == 1:
            # the two eigenvectors exchange values after one 2*pi period
            assert c[0] < 1e-3
            assert c[1] > 1 - 1e-6
        else:
            assert c[0] > 1 - 1e-6
            assert c[1] < 1e-3

    @pytest.mark.parametrize("params,n_eps,_w,_c", FIG2C_SETS)
    def test_closure_at_four_pi(self, params, n_eps, _w, _c):
        tracked = track_band(params)
        overlap = abs(np.vdot(tracked[0].vectors[0], tracked[-1].vectors[0]))
        assert overlap > 1 - 1e-6


class TestBandCoefficients:
    def test_recovers_basis_vectors(self):
        bp = np.array([1.0, 2.0j]) / np.sqrt(5)
        bm = np.array([1.0, -0.5]) / np.sqrt(1.25)
        np.testing.assert_allclose(band_coefficients(bp, bp, bm), [1, 0], atol=1e-14)
        np.testing.assert_allclose(band_coefficients(bm, bp, bm), [0, 1], atol=1e-14)

    def test_linearity(self):
        rng = np.random.default_rng(0)
        bp = rng.normal(size=2) + 1j * rng.normal(size=2)
        bm = rng.normal(size=2) + 1j * rng.normal(size=2)
        u = (0.3 - 0.4j) * bp + (1.1 + 0.2j) * bm
        np.testing.assert_allclose(band_coefficients(u, bp, bm),
                                   [0.3 - 0.4j, 1.1 + 0.2j], atol=1e-12)


class TestWindingNumber:
    @pytest.mark.parametrize("params,n_eps,winding,closure", FIG2C_SETS)
    def test_figure_values(self, params, n_eps, winding, closure):
        res = winding_number(track_band(params))
        assert res.winding == winding
        assert res.closure_period == closure
        assert res.eps_enclosed == n_eps

    def test_trajectory_shape_and_realness(self):
        res = winding_number(track_band(FIG2C_SETS[1][0]))
        assert res.trajectory.shape == (4001, 2)
        assert res.trajectory.dtype == np.float64
        assert np.all(np.isfinite(res.trajectory))

    def test_doubling_samples_is_stable(self):
        for p, _, w, c in FIG2C_SETS:
            res = winding_number(track_band(p, samples=8001))
            assert res.winding == w
            assert res.closure_period == c

    def test_gapless_trajectory_raises(self):
        # sigma_y eigenvector: <sigma_x> = <sigma_z> = 0 identically
        u = np.array([1.0, 1.0j]) / np.sqrt(2)
        tracked = [BlochEigensystem(k=k, energies=(1 + 0j, -1 + 0j),
                                    vectors=(u, u.conj()), theta=0j)
                   for k in np.linspace(0, 4 * np.pi, 401)]
        with pytest.raises(GaplessTrajectoryError):
            winding_number(tracked)

    def test_coarse_angle_step_raises(self):
        # consecutive points separated by pi in trajectory angle
        ua = np.array([1.0, 1.0]) / np.sqrt(2)    # angle 0
        ub = np.array([1.0, -1.0]) / np.sqrt(2)   # angle pi
        tracked = [BlochEigensystem(k=float(i), energies=(1 + 0j, -1 + 0j),
                                    vectors=(ua if i % 2 == 0 else ub, ua), theta=0j)
                   for i in range(5)]
        with pytest.raises(TrackingAmbiguityError):
            winding_number(tracked)

    @given(clean_params_st)
    @settings(max_examples=40, deadline=None)
    def test_winding_ep_theorem(self, p):
        assume(away_from_boundaries(p))
        res = winding_number(track_band(p))
        assert res.winding == count_enclosed_eps(p) / 2
        assert (res.closure_period == "4pi") == (res.eps_enclosed == 1)
