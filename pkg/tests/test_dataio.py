import json

import numpy as np
import pytest

from curveclust import GramTensor, SolverConfig, gen_char_trajectories, gen_sine_clusters, solve_clrr
from curveclust.datagen import WarpConfig
from curveclust import dataio


@pytest.fixture
def sine_dataset():
    return gen_sine_clusters(3, 4, 30, WarpConfig(strength=1.0), seed=2)


class TestDatasetRoundtrip:
    @pytest.mark.parametrize("suffix", ["csv", "json"])
    def test_roundtrip_preserves_everything(self, tmp_path, sine_dataset, suffix):
        path = tmp_path / f"data.{suffix}"
        dataio.write_dataset(path, sine_dataset)
        back = dataio.read_dataset(path)
        assert len(back) == len(sine_dataset)
        np.testing.assert_array_equal(back.labels, sine_dataset.labels)
        for a, b in zip(back.curves, sine_dataset.curves):
            np.testing.assert_array_equal(a.samples, b.samples)

    def test_roundtrip_2d(self, tmp_path):
        d = gen_char_trajectories(per_cluster=3, n_samples=25, seed=0)
        path = tmp_path / "traj.csv"
        dataio.write_dataset(path, d)
        back = dataio.read_dataset(path)
        assert back.curves[0].dim == 2
        for a, b in zip(back.curves, d.curves):
            np.testing.assert_array_equal(a.samples, b.samples)

    def test_unlabeled_dataset(self, tmp_path, sine_dataset):
        sine_dataset.labels = None
        path = tmp_path / "data.csv"
        dataio.write_dataset(path, sine_dataset)
        back = dataio.read_dataset(path)
        assert back.labels is None

    def test_mixed_sample_counts_allowed(self, tmp_path):
        from curveclust import Curve
        from curveclust.curves import uniform_grid
        from curveclust.datagen import Dataset

        d = Dataset([Curve(uniform_grid(10)[:, None]), Curve(uniform_grid(17)[:, None])])
        path = tmp_path / "data.csv"
        dataio.write_dataset(path, d)
        back = dataio.read_dataset(path)
        assert [c.n_samples for c in back.curves] == [10, 17]

    def test_write_deterministic_bytes(self, tmp_path, sine_dataset):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        dataio.write_dataset(p1, sine_dataset)
        dataio.write_dataset(p2, sine_dataset)
        assert p1.read_bytes() == p2.read_bytes()

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            dataio.read_dataset(path)


class TestLabelsIO:
    def test_roundtrip(self, tmp_path):
        ids = ["c1", "c2", "c3"]
        labels = np.array([0, 2, 1])
        path = tmp_path / "labels.csv"
        dataio.write_labels(path, ids, labels)
        back_ids, back = dataio.read_labels(path)
        assert back_ids == ids
        np.testing.assert_array_equal(back, labels)


class TestMatrixIO:
    def test_roundtrip(self, tmp_path, rng):
        M = rng.standard_normal((6, 6))
        path = tmp_path / "m.csv"
        dataio.write_matrix(path, M)
        np.testing.assert_array_equal(dataio.read_matrix(path), M)


class TestTraceIO:
    def test_jsonl_schema(self, tmp_path, rng):
        slices = np.zeros((4, 4, 4))
        _, diag = solve_clrr(GramTensor(slices), SolverConfig(lam=0.1))
        path = tmp_path / "trace.jsonl"
        dataio.write_trace(path, diag)
        lines = path.read_text().strip().split("\n")
        assert len(lines) == diag.iterations
        rec = json.loads(lines[0])
        assert set(rec) == {"k", "obj", "feas", "beta"}
        assert rec["k"] == 1
        assert rec["beta"] == pytest.approx(0.1)
