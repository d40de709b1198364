import math

import numpy as np
import pytest
from conftest import random_pure

import qcorr as q
from qcorr import (
    ConsistencyError,
    DomainError,
    IsometryError,
    RankError,
    UnsupportedSupportError,
)
from qcorr._kernels_py import isometry_from_params

FAST = q.RoofConfig(m_values=(2,), restarts=3, seed=0)
FULL = q.RoofConfig(m_values=(2, 3, 4), restarts=7, seed=0)


def f2_state(*co):
    return q.family_state(q.ClusterFamily("f2", co))


def closed_abd(co):
    a, b, c, d = np.abs(np.asarray(co)) / np.linalg.norm(co)
    return 4.0 * (a * d - b * c) ** 2


def closed_bcd(co):
    a, b, c, d = np.abs(np.asarray(co)) / np.linalg.norm(co)
    return 4.0 * (a * b - c * d) ** 2


class TestEigenSplit:
    def test_f2_abd_eigenstructure(self, rng):
        co = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        a, b, c, d = co / np.linalg.norm(co)
        split = q.eigen_split(q.partial_trace(f2_state(*co), "ABD"))
        p_want = abs(a) ** 2 + abs(d) ** 2
        assert {round(split.p, 10), round(1 - split.p, 10)} == {
            round(p_want, 10), round(1 - p_want, 10),
        }
        # the eigenvector with weight p is supported on |000>, |111>
        vec = split.psi1 if abs(split.p - p_want) < 1e-10 else split.psi2
        want = np.zeros(8, complex)
        want[0], want[7] = a, d
        want /= np.linalg.norm(want)
        overlap = abs(np.vdot(vec.amplitudes, want))
        assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_pure_input_flagged(self, rng):
        state = random_pure(rng, 3)
        split = q.eigen_split(state.to_density_matrix())
        assert split.rank1
        assert split.p == pytest.approx(1.0, abs=1e-12)
        overlap = abs(np.vdot(split.psi1.amplitudes, state.amplitudes))
        assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_rank_guard(self):
        dm = q.DensityMatrix(("A", "B"), np.eye(4, dtype=complex) / 4)
        with pytest.raises(RankError):
            q.eigen_split(dm)


class TestDecompositionFromIsometry:
    def test_identity_gives_eigen_decomposition(self, rng):
        co = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        dm = q.partial_trace(f2_state(*co), "ABD")
        split = q.eigen_split(dm)
        dec = q.decomposition_from_isometry(dm, np.eye(2, dtype=complex))
        assert dec.m == 2
        assert dec.weights[0] == pytest.approx(split.p, abs=1e-12)
        assert abs(np.vdot(dec.vectors[0].amplitudes, split.psi1.amplitudes)) == pytest.approx(
            1.0, abs=1e-10
        )

    def test_reconstruction_for_random_isometries(self, rng):
        co = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        dm = q.partial_trace(f2_state(*co), "BCD")
        for m in (2, 3, 4):
            x = rng.uniform(0, 2 * math.pi, 4 * m - 5)
            dec = q.decomposition_from_isometry(dm, isometry_from_params(m, x))
            rebuilt = sum(
                p * np.outer(v.amplitudes, v.amplitudes.conj())
                for p, v in zip(dec.weights, dec.vectors)
                if v is not None
            )
            assert np.abs(rebuilt - dm.matrix).max() <= 1e-10
            assert sum(dec.weights) == pytest.approx(1.0, abs=1e-12)

    def test_rotation_pattern_mixes_eigenvectors(self, rng):
        # rows (sqrt(q), -sqrt(1-q)) produce sqrt(q mu1)|e1> - sqrt((1-q) mu2)|e2>
        co = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        dm = q.partial_trace(f2_state(*co), "ABD")
        split = q.eigen_split(dm)
        qq = 0.3
        mix = np.array([[math.sqrt(qq), -math.sqrt(1 - qq)], [math.sqrt(1 - qq), math.sqrt(qq)]])
        dec = q.decomposition_from_isometry(dm, mix.astype(complex))
        raw = math.sqrt(qq * split.p) * split.psi1.amplitudes - math.sqrt(
            (1 - qq) * (1 - split.p)
        ) * split.psi2.amplitudes
        assert dec.weights[0] == pytest.approx(float(np.linalg.norm(raw) ** 2), abs=1e-12)
        overlap = abs(np.vdot(dec.vectors[0].amplitudes, raw / np.linalg.norm(raw)))
        assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_non_isometry_rejected(self, rng):
        dm = q.partial_trace(f2_state(1, 1, 1, 1), "ABD")
        with pytest.raises(IsometryError):
            q.decomposition_from_isometry(dm, np.ones((2, 2), dtype=complex))
        with pytest.raises(IsometryError):
            q.decomposition_from_isometry(dm, np.eye(5, dtype=complex)[:, :2])


class TestRoofMinimize:
    def test_f2_abd_matches_closed_form(self, rng):
        for _ in range(5):
            co = tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4))
            res = q.roof_minimize(q.partial_trace(f2_state(*co), "ABD"), "three_tangle", FULL)
            assert res.value == pytest.approx(closed_abd(co), abs=1e-6)
            assert res.spread <= 1e-6
            assert res.restarts_used == 21

    def test_f2_bcd_matches_closed_form(self, rng):
        for _ in range(5):
            co = tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4))
            res = q.roof_minimize(q.partial_trace(f2_state(*co), "BCD"), "three_tangle", FULL)
            assert res.value == pytest.approx(closed_bcd(co), abs=1e-6)
            assert res.spread <= 1e-6

    def test_rank1_input_returns_pure_measure(self, rng):
        state = random_pure(rng, 3)
        res = q.roof_minimize(state.to_density_matrix(), "three_tangle", FAST)
        assert res.value == pytest.approx(q.pure_three_tangle(state), abs=1e-10)
        assert res.restarts_used == 0 and res.spread == 0.0

    def test_candidate_bound(self, rng):
        co = tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        dm = q.partial_trace(f2_state(*co), "ABD")
        split = q.eigen_split(dm)
        eigen_avg = split.p * q.pure_three_tangle(split.psi1) + (1 - split.p) * q.pure_three_tangle(
            split.psi2
        )
        res = q.roof_minimize(dm, "three_tangle", FAST)
        assert res.value <= eigen_avg + 1e-12

    def test_zero_pair_property_of_decomposition_vectors(self, rng):
        # inside any decomposition of rho_ABD the AB and AD concurrences vanish
        co = tuple(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        dm = q.partial_trace(f2_state(*co), "ABD")
        res = q.roof_minimize(dm, "three_tangle", FAST)
        vectors = [v for v in res.argmin.vectors if v is not None]
        for m in (2, 3, 4):
            x = rng.uniform(0, 2 * math.pi, 4 * m - 5)
            dec = q.decomposition_from_isometry(dm, isometry_from_params(m, x))
            vectors += [v for v in dec.vectors if v is not None]
        for vec in vectors:
            assert q.concurrence(q.partial_trace(vec, "AB")) <= 1e-9
            assert q.concurrence(q.partial_trace(vec, "AD")) <= 1e-9

    def test_convexity_spot_check(self, rng):
        basis = [random_pure(rng, 3), random_pure(rng, 3)]
        v = np.linalg.qr(np.column_stack([s.amplitudes for s in basis]))[0]

        def rank2_dm(w0, theta):
            u = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
            cols = v @ u
            rho = w0 * np.outer(cols[:, 0], cols[:, 0].conj())
            rho += (1 - w0) * np.outer(cols[:, 1], cols[:, 1].conj())
            return q.DensityMatrix(("A", "B", "C"), rho)

        rho1, rho2 = rank2_dm(0.8, 0.3), rank2_dm(0.4, 1.1)
        lam = 0.35
        mixed = q.DensityMatrix(("A", "B", "C"), lam * rho1.matrix + (1 - lam) * rho2.matrix)
        # the mixture side genuinely needs decompositions up to m = 4
        cfg = q.RoofConfig(m_values=(2, 3, 4), restarts=6, seed=1)
        roof_mix = q.roof_minimize(mixed, "three_tangle", cfg).value
        bound = lam * q.roof_minimize(rho1, "three_tangle", cfg).value
        bound += (1 - lam) * q.roof_minimize(rho2, "three_tangle", cfg).value
        assert roof_mix <= bound + 1e-6

    def test_rank_and_measure_guards(self, rng):
        with pytest.raises(RankError):
            q.roof_minimize(
                q.DensityMatrix(("A", "B", "C"), np.eye(8, dtype=complex) / 8), "three_tangle", FAST
            )
        with pytest.raises(DomainError):
            q.roof_minimize(random_pure(rng, 3).to_density_matrix(), "f1_tau4", FAST)
        with pytest.raises(DomainError):
            q.roof_minimize(random_pure(rng, 3).to_density_matrix(), "negativity", FAST)

    def test_config_validation(self):
        with pytest.raises(DomainError):
            q.RoofConfig(m_values=(5,))
        with pytest.raises(DomainError):
            q.RoofConfig(restarts=0)


class TestTau4RoofRestricted:
    def test_published_mixture_has_zero_roof(self):
        psi1, _ = q.make_pure(4, [("0000", 1), ("1111", 1)])
        psi2, _ = q.make_pure(4, [("0011", 1), ("1100", 1)])
        dm = q.mixture([psi1, psi2], [0.5, 0.5])
        res = q.tau4_roof_restricted(dm, FULL)
        assert res.value <= 1e-8
        assert res.spread <= 1e-6

    def test_pure_cluster_state_is_one(self):
        state = q.family_state(q.ClusterFamily("f1", (0.5, 0.5, 0.5, 0.5)))
        res = q.tau4_roof_restricted(state.to_density_matrix(), FAST)
        assert res.value == pytest.approx(1.0, abs=1e-10)

    def test_degenerate_mixture_of_one_vector(self):
        ghz, _ = q.make_pure(4, [("0000", 1), ("1111", 1)])
        dm = q.mixture([ghz, ghz], [0.3, 0.7])
        res = q.tau4_roof_restricted(dm, FAST)
        assert res.value == pytest.approx(1.0, abs=1e-10)

    def test_off_support_rejected(self, rng):
        with pytest.raises(UnsupportedSupportError):
            q.tau4_roof_restricted(random_pure(rng, 4).to_density_matrix(), FAST)

    def test_roof_below_eigen_average_on_random_mixtures(self, rng):
        for _ in range(5):
            co1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            co2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            s1 = q.family_state(q.ClusterFamily("f1", tuple(co1)))
            # orthogonalize inside the family support to keep rank 2 exact
            a2 = co2 - np.vdot(
                q.fit_family_coefficients(s1, "f1"), co2
            ) * np.asarray(q.fit_family_coefficients(s1, "f1"))
            s2 = q.family_state(q.ClusterFamily("f1", tuple(a2)))
            w = float(rng.uniform(0.2, 0.8))
            dm = q.mixture([s1, s2], [w, 1 - w])
            res = q.tau4_roof_restricted(dm, q.RoofConfig(m_values=(2, 3), restarts=4, seed=2))
            avg = sum(
                p * q.closed_form_measures(
                    q.ClusterFamily("f1", q.fit_family_coefficients(v, "f1"))
                ).tau4
                for p, v in zip(res.argmin.weights, res.argmin.vectors)
                if v is not None
            )
            assert res.value == pytest.approx(avg, abs=1e-9)


class TestRoofErrorPropagation:
    def test_measure_failure_carries_vector(self, rng):
        # hand the four-tangle roof a state off the family support: the
        # pre-check fires, naming the support
        state = random_pure(rng, 4)
        with pytest.raises(UnsupportedSupportError):
            q.roof_minimize(state.to_density_matrix(), "f1_tau4", FAST)

    def test_consistency_error_on_all_nan(self, monkeypatch, rng):
        dm = q.partial_trace(f2_state(1, 1, 1, 1), "ABD")
        monkeypatch.setattr(
            q.roof.kernels, "roof_objective", lambda *a, **k: float("nan"), raising=True
        )
        with pytest.raises(ConsistencyError):
            q.roof_minimize(dm, "three_tangle", FAST)
