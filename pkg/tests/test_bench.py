import numpy as np
import pytest

from jsparse.bench import (
    CsvFormatError,
    MmvInstance,
    SweepConfig,
    TrialRecord,
    aggregate,
    gen_instance,
    read_curves_csv,
    read_records_csv,
    run_sweep,
    write_curves_csv,
    write_records_csv,
)
from jsparse.linalg import derive_stream, numerical_rank


class TestGenInstance:
    def test_empty_support(self):
        inst = gen_instance(5, 8, 0, 2, derive_stream(0, 1))
        assert np.array_equal(inst.X, np.zeros((8, 2)))
        assert np.array_equal(inst.Y, np.zeros((5, 2)))
        assert inst.support == []

    def test_deterministic(self):
        a = gen_instance(6, 9, 3, 2, derive_stream(7, "x"))
        b = gen_instance(6, 9, 3, 2, derive_stream(7, "x"))
        assert np.array_equal(a.A, b.A) and np.array_equal(a.X, b.X)

    def test_unit_columns(self):
        inst = gen_instance(10, 20, 4, 3, derive_stream(1, 2))
        assert np.allclose(np.linalg.norm(inst.A, axis=0), 1.0, atol=1e-12)

    def test_rank_of_y(self):
        for t in range(100):
            k = 1 + t % 8
            r = 1 + t % 5
            inst = gen_instance(20, 30, k, r, derive_stream(3, t))
            assert numerical_rank(inst.Y) == min(k, r)

    def test_row_sparsity_exact(self):
        inst = gen_instance(10, 20, 5, 4, derive_stream(2, 0))
        assert np.count_nonzero(np.linalg.norm(inst.X, axis=1)) == 5

    def test_invalid_dims(self):
        with pytest.raises(ValueError):
            gen_instance(5, 8, 6, 2, derive_stream(0, 0))

    def test_json_roundtrip_bit_exact(self):
        inst = gen_instance(6, 10, 3, 2, derive_stream(9, 4))
        clone = MmvInstance.from_json(inst.to_json())
        assert np.array_equal(inst.A, clone.A)
        assert np.array_equal(inst.X, clone.X)
        assert inst.support == clone.support and inst.seed == clone.seed


SMALL = dict(m=8, n=12, r_list=(1, 2), k_range=(1, 2), trials=2, master_seed=11)


class TestRunSweep:
    def test_cardinality(self):
        cfg = SweepConfig(algorithms=("somp",), r_list=(1,), k_range=(1, 1), trials=1)
        assert len(run_sweep(cfg)) == 1

    def test_worker_count_invariance(self):
        r1 = run_sweep(SweepConfig(algorithms=("somp", "combo"), worker_count=1, **SMALL))
        r2 = run_sweep(SweepConfig(algorithms=("somp", "combo"), worker_count=4, **SMALL))
        assert r1 == r2

    def test_instances_shared_across_algorithms(self):
        # both algorithms' records for a cell score the same generated instance
        a = gen_instance(8, 12, 2, 2, derive_stream(11, "instance", 2, 2, 0))
        b = gen_instance(8, 12, 2, 2, derive_stream(11, "instance", 2, 2, 0))
        assert np.array_equal(a.A, b.A) and np.array_equal(a.Y, b.Y)

    def test_reproducible(self):
        cfg = SweepConfig(algorithms=("rembo", "combo"), **SMALL)
        assert run_sweep(cfg) == run_sweep(cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SweepConfig(trials=0)
        with pytest.raises(ValueError):
            SweepConfig(m=5, k_range=(1, 6))
        with pytest.raises(ValueError):
            SweepConfig(algorithms=("nope",))


def _records():
    return [
        TrialRecord("combo", 20, 30, 2, k, t, t == 0, 0.0, 5)
        for k in (1, 2)
        for t in range(4)
    ]


class TestAggregate:
    def test_rates(self):
        curves = aggregate(_records())
        assert len(curves) == 1
        c = curves[0]
        assert c.algorithm == "combo" and c.r == 2
        assert [p.rate for p in c.points] == [0.25, 0.25]
        assert [p.trials for p in c.points] == [4, 4]

    def test_all_success(self):
        recs = [TrialRecord("somp", 20, 30, 1, k, t, True, 0.0, 0) for k in range(1, 4) for t in range(3)]
        curve = aggregate(recs)[0]
        assert all(p.rate == 1.0 for p in curve.points)

    def test_empty(self):
        assert aggregate([]) == []

    def test_bound_r1_m20(self):
        recs = [TrialRecord("somp", 20, 30, 1, 10, 0, True, 0.0, 0)]
        assert aggregate(recs)[0].points[0].bound_k == 10


class TestCsv:
    def test_records_roundtrip(self, tmp_path):
        path = tmp_path / "records.csv"
        recs = _records()
        write_records_csv(recs, path)
        assert read_records_csv(path) == recs

    def test_records_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_records_csv([], path)
        assert path.read_text() == "algorithm,m,n,r,k,trial,success,runtime_ms,boosts_used\n"
        assert read_records_csv(path) == []

    def test_malformed_row_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "algorithm,m,n,r,k,trial,success,runtime_ms,boosts_used\n"
            "combo,20,30,2,1,0,1,0.0,5\n"
            "combo,20,30,oops\n"
        )
        with pytest.raises(CsvFormatError, match=":3:"):
            read_records_csv(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "hdr.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(CsvFormatError, match=":1:"):
            read_records_csv(path)

    def test_curves_roundtrip(self, tmp_path):
        path = tmp_path / "curves.csv"
        curves = aggregate(_records())
        write_curves_csv(curves, path)
        assert read_curves_csv(path) == curves

    def test_missing_file_has_path_context(self, tmp_path):
        with pytest.raises(OSError, match="nowhere.csv"):
            read_records_csv(tmp_path / "nowhere.csv")
