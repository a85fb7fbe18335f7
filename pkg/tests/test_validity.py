import math

import numpy as np
import pytest

from mrfcm import ingest, validity
from mrfcm.engine import JobSpec
from mrfcm.errors import NumericError
from mrfcm.fcm import FcmConfig
from mrfcm.validity import pc, pe, sc, sweep, xb

import reference


def crisp(n, c, rng):
    u = np.zeros((n, c))
    u[np.arange(n), rng.integers(0, c, size=n)] = 1.0
    return u


class TestPartitionCoefficient:
    def test_crisp_is_one(self):
        u = crisp(30, 4, np.random.default_rng(0))
        assert pc(u) == 1.0

    def test_uniform_is_one_over_c(self):
        u = np.full((20, 5), 0.2)
        assert pc(u) == pytest.approx(0.2, abs=1e-15)

    def test_matches_double_loop(self):
        rng = np.random.default_rng(1)
        u = reference.random_membership(rng, 20, 3)
        assert pc(u) == pytest.approx(reference.reference_pc(u), abs=1e-12)

    def test_bounds(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            c = int(rng.integers(2, 6))
            u = reference.random_membership(rng, 25, c)
            assert 1.0 / c - 1e-12 <= pc(u) <= 1.0 + 1e-12


class TestPartitionEntropy:
    def test_crisp_is_zero(self):
        u = crisp(30, 3, np.random.default_rng(3))
        assert pe(u) == 0.0

    def test_uniform_is_log_c(self):
        for c in (2, 3, 5):
            u = np.full((12, c), 1.0 / c)
            assert pe(u) == pytest.approx(math.log(c), abs=1e-12)

    def test_fixed_row_value(self):
        u = np.tile([0.8, 0.2], (7, 1))
        expected = -(0.8 * math.log(0.8) + 0.2 * math.log(0.2))
        assert pe(u) == pytest.approx(expected, abs=1e-12)

    def test_matches_double_loop_and_bounds(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            c = int(rng.integers(2, 6))
            u = reference.random_membership(rng, 30, c)
            assert pe(u) == pytest.approx(reference.reference_pe(u), abs=1e-12)
            assert -1e-12 <= pe(u) <= math.log(c) + 1e-12


class TestXieBeni:
    def test_hand_computed_four_points(self):
        # two tight pairs 10 apart: scatter 4 * 0.25, separation 100, n=4
        coords = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
        u = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        v = np.array([[0.0, 0.5], [10.0, 0.5]])
        assert xb(u, v, coords) == pytest.approx(1.0 / 400.0, abs=1e-15)

    def test_coincident_centroids_give_infinity(self):
        coords = np.array([[0.0], [1.0]])
        u = np.array([[0.5, 0.5], [0.5, 0.5]])
        v = np.array([[0.3], [0.3]])
        assert xb(u, v, coords) == math.inf

    def test_matches_double_loop(self):
        rng = np.random.default_rng(5)
        coords = rng.normal(size=(40, 3))
        v = rng.normal(size=(4, 3))
        u = reference.random_membership(rng, 40, 4)
        assert xb(u, v, coords) == pytest.approx(
            reference.reference_xb(u, v, coords), rel=1e-12)


class TestSeparationCompactness:
    def test_hand_computed_four_points(self):
        coords = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
        u = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [0.0, 1.0]])
        v = np.array([[0.0, 0.5], [10.0, 0.5]])
        assert sc(u, v, coords, m=2.0) == pytest.approx(400.0, abs=1e-12)

    def test_reciprocal_identity_with_xb_at_m2(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            coords = rng.normal(size=(30, 2))
            v = rng.normal(size=(3, 2))
            u = reference.random_membership(rng, 30, 3)
            assert sc(u, v, coords, m=2.0) * xb(u, v, coords) == pytest.approx(1.0, abs=1e-10)

    def test_zero_scatter_flags_degenerate(self):
        coords = np.array([[0.0, 0.0], [5.0, 5.0]])
        u = np.eye(2)
        assert sc(u, coords, coords, m=2.0) == math.inf

    def test_coincident_centroids_give_zero(self):
        coords = np.array([[0.0], [1.0]])
        u = np.array([[0.5, 0.5], [0.5, 0.5]])
        v = np.array([[0.4], [0.4]])
        assert sc(u, v, coords, m=2.0) == 0.0

    def test_scale_invariance(self):
        rng = np.random.default_rng(7)
        coords = rng.normal(size=(25, 2))
        v = rng.normal(size=(3, 2))
        u = reference.random_membership(rng, 25, 3)
        base = sc(u, v, coords, m=2.0)
        assert sc(u, 2.0 * v, 2.0 * coords, m=2.0) == pytest.approx(base, rel=1e-10)

    def test_matches_double_loop(self):
        rng = np.random.default_rng(8)
        coords = rng.normal(size=(30, 3))
        v = rng.normal(size=(4, 3))
        u = reference.random_membership(rng, 30, 4)
        for m in (1.5, 2.0, 2.5):
            assert sc(u, v, coords, m) == pytest.approx(
                reference.reference_sc(u, v, coords, m), rel=1e-12)


class TestRigidMotionInvariance:
    def test_rotation_translation_leave_xb_and_sc_unchanged(self):
        rng = np.random.default_rng(9)
        coords = rng.normal(size=(30, 2))
        v = rng.normal(size=(3, 2))
        u = reference.random_membership(rng, 30, 3)
        angle = 0.7
        rot = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        shift = np.array([3.0, -1.5])
        coords2 = coords @ rot.T + shift
        v2 = v @ rot.T + shift
        assert xb(u, v2, coords2) == pytest.approx(xb(u, v, coords), rel=1e-10)
        assert sc(u, v2, coords2, 2.0) == pytest.approx(sc(u, v, coords, 2.0), rel=1e-10)


class TestSweep:
    def _blob_store(self, n=300, seed=0):
        centers = np.array([[0.0, 0.0], [10.0, 0.0], [5.0, 8.0]])
        rng = np.random.default_rng(seed)
        assign = np.arange(n) % 3
        sep = 10.0
        coords = centers[assign] + rng.normal(0, 0.05 * sep, size=(n, 2))
        return ingest.partition(coords, 4)

    def test_three_blobs_consensus_three(self):
        store = self._blob_store()
        report = sweep(store, None, 2, 6, FcmConfig(c=2, seed=7), JobSpec(4, 2, "sweep"))
        assert report.consensus_c == 3
        votes = list(report.best_per_index.values())
        assert votes.count(3) >= 3

    def test_single_candidate_is_trivial_consensus(self):
        store = self._blob_store(n=100)
        report = sweep(store, None, 2, 2, FcmConfig(c=2, seed=1), JobSpec(4, 2, "sweep"))
        assert report.consensus_c == 2
        assert len(report.rows) == 1

    def test_report_rows_cover_range_and_directions(self):
        store = self._blob_store(n=150)
        report = sweep(store, None, 2, 5, FcmConfig(c=2, seed=3), JobSpec(4, 2, "sweep"))
        assert [r.c for r in report.rows] == [2, 3, 4, 5]
        for row in report.rows:
            assert 1.0 / row.c - 1e-9 <= row.pc <= 1.0 + 1e-9
            assert -1e-9 <= row.pe <= math.log(row.c) + 1e-9
            assert row.xb > 0
            assert row.sc > 0

    def test_failed_candidate_excluded_from_vote(self):
        # 4 distinct points: c=5 cannot be seeded and must be marked failed,
        # while c=4 wins outright (each point crisply its own cluster)
        coords = np.array([[0.0, 0.0], [0.0, 1.0], [9.0, 0.0], [9.0, 1.0]] * 5)
        store = ingest.partition(coords, 2)
        report = sweep(store, None, 2, 5, FcmConfig(c=2, seed=2),
                       JobSpec(2, 1, "sweep"))
        by_c = {r.c: r for r in report.rows}
        assert by_c[5].failed
        assert report.consensus_c == 4
        assert by_c[4].pc == pytest.approx(1.0, abs=1e-9)
        # the c=2 run collapses its centroids; sentinels must fire, not raise
        assert by_c[2].xb == math.inf and by_c[2].sc == 0.0

    def test_seed_policy_is_seed_plus_c(self):
        store = self._blob_store(n=120, seed=4)
        a = sweep(store, None, 2, 4, FcmConfig(c=2, seed=10), JobSpec(4, 2, "s"))
        b = sweep(store, None, 2, 4, FcmConfig(c=2, seed=10), JobSpec(4, 2, "s"))
        for ra, rb in zip(a.rows, b.rows):
            assert ra.jm == rb.jm  # bitwise reproducible

    def test_sweep_bounds_validated(self):
        store = self._blob_store(n=40)
        with pytest.raises(NumericError):
            sweep(store, None, 1, 4, FcmConfig(c=2, seed=0), JobSpec(2, 1, "s"))
        with pytest.raises(NumericError):
            sweep(store, None, 2, 30, FcmConfig(c=2, seed=0), JobSpec(2, 1, "s"))


class TestReportFiles:
    def test_validity_csv_and_plot_data(self, tmp_path):
        centers = np.array([[0.0, 0.0], [8.0, 0.0]])
        rng = np.random.default_rng(5)
        coords = centers[np.arange(80) % 2] + rng.normal(0, 0.3, size=(80, 2))
        store = ingest.partition(coords, 2)
        report = sweep(store, None, 2, 4, FcmConfig(c=2, seed=5), JobSpec(2, 1, "s"))
        csv_path = tmp_path / "validity.csv"
        dat_path = tmp_path / "validity_plot.dat"
        validity.write_validity_csv(report, csv_path)
        validity.write_plot_data(report, dat_path)
        lines = csv_path.read_text().strip().split("\n")
        assert lines[0] == "c,pc,pe,xb,sc,iters,jm"
        assert lines[-1] == f"# consensus_c={report.consensus_c}"
        assert len(lines) == 2 + len(report.rows)
        dat = dat_path.read_text().strip().split("\n")
        values = np.array([[float(x) for x in line.split()[1:]] for line in dat[1:]])
        assert values.min() >= 0.0 and values.max() <= 1.0
