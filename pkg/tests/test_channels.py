import numpy as np
import pytest

from fermi1d import channels, pointcore, qmemory
from fermi1d.channels import IncidentWave, MatrixCouplings, SiteArray


def scalar_site(g1=0.0, g2=0.0, g3=0.0, position=0.0):
    return (position, MatrixCouplings.from_scalars(g1, g2, g3))


class TestTypes:
    def test_couplings_must_be_hermitian(self):
        with pytest.raises(ValueError):
            MatrixCouplings(np.array([[0.0, 1.0], [0.0, 0.0]]),
                            np.zeros((2, 2)), np.zeros((2, 2)))

    def test_sites_must_share_channel_count(self):
        two = MatrixCouplings(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)))
        with pytest.raises(ValueError):
            SiteArray([scalar_site(1.0), (1.0, two)])

    def test_sites_must_be_ordered(self):
        with pytest.raises(ValueError):
            SiteArray([scalar_site(1.0, position=1.0),
                       scalar_site(1.0, position=0.0)])

    def test_incident_wave_validation(self):
        with pytest.raises(ValueError):
            IncidentWave(-1.0, "left")
        with pytest.raises(ValueError):
            IncidentWave(1.0, "sideways")
        with pytest.raises(ValueError):
            IncidentWave(1.0, "left", np.array([1.0, 1.0]))


class TestSingleSite:
    def test_matches_closed_form_s_matrix(self):
        for g in [(2.0, 0.0, 0.0), (1.0, 2.0, 3.0), (-1.5, 0.7, 2.2)]:
            arr = SiteArray([scalar_site(*g)])
            for k in (0.5, 1.0, 3.7):
                s_ref = pointcore.s_matrix(g, k)
                s = channels.full_s_matrix(arr, k)
                np.testing.assert_allclose(s, s_ref, atol=1e-13)

    def test_empty_array_is_identity(self):
        arr = SiteArray([])
        np.testing.assert_allclose(channels.full_s_matrix(arr, 1.0),
                                   np.eye(2), atol=1e-15)

    def test_flux_conservation(self):
        arr = SiteArray([scalar_site(1.0, 2.0, 3.0)])
        for mode in ("left", "right", "even", "odd"):
            sol = channels.solve_scattering(arr, IncidentWave(1.3, mode))
            assert abs(sol.flux_residual) < 1e-12

    def test_delta_barrier_probabilities(self):
        arr = SiteArray([scalar_site(g1=2.0)])
        sol = channels.solve_scattering(arr, IncidentWave(1.0, "left"))
        assert sol.transmission[0] == pytest.approx(0.5, abs=1e-14)
        assert sol.reflection[0] == pytest.approx(0.5, abs=1e-14)


class TestMultiSite:
    def test_two_deltas_match_transfer_matrices(self):
        from fermi1d.verify import transfer_matrix_oracle
        sites = [(0.0, 1.0), (1.0, -0.5)]
        arr = SiteArray([scalar_site(g1=s, position=p) for p, s in sites])
        for k in (0.7, 1.0, 2.4):
            t, r = transfer_matrix_oracle(sites, k)
            sol = channels.solve_scattering(arr, IncidentWave(k, "left"))
            assert sol.outgoing_right[0] == pytest.approx(t, abs=1e-13)
            assert sol.outgoing_left[0] == pytest.approx(r, abs=1e-13)

    def test_s_matrix_unitarity(self):
        arr = SiteArray([scalar_site(1.0, 0.5, 0.3, position=0.0),
                         scalar_site(-0.7, 0.0, 1.1, position=1.3)])
        s = channels.full_s_matrix(arr, 0.9)
        np.testing.assert_allclose(s @ s.conj().T, np.eye(2), atol=1e-12)


class TestTwoChannels:
    def test_parity_blocks_match_memory_site(self):
        # C1 = g1 sigma_1, C3 = g3 sigma_3: the quantum-memory site
        g1, g3, k = 2.0, 2.0, 1.3
        coup = MatrixCouplings(
            g1 * np.array([[0.0, 1.0], [1.0, 0.0]]),
            np.zeros((2, 2)),
            g3 * np.array([[1.0, 0.0], [0.0, -1.0]]))
        s = channels.full_s_matrix(SiteArray([(0.0, coup)]), k)
        s_even, s_odd = channels.parity_blocks(s)
        np.testing.assert_allclose(s_even, qmemory.s_plus(g1, k),
                                   atol=1e-13)
        np.testing.assert_allclose(s_odd, qmemory.s_minus(g3, k),
                                   atol=1e-13)

    def test_two_channel_flux(self):
        coup = MatrixCouplings(np.array([[1.0, 0.5], [0.5, 2.0]]),
                               np.zeros((2, 2)),
                               np.array([[0.3, 0.0], [0.0, -0.4]]))
        arr = SiteArray([(0.0, coup)])
        amps = np.array([0.6, 0.8])
        sol = channels.solve_scattering(arr,
                                        IncidentWave(1.1, "left", amps))
        assert abs(sol.flux_residual) < 1e-12
        s = channels.full_s_matrix(arr, 1.1)
        np.testing.assert_allclose(s @ s.conj().T, np.eye(4), atol=1e-12)
