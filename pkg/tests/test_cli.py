import numpy as np
import pytest

from fuzzytm import (BitDataset, load_model, pack_model, predict_batch,
                     read_container, write_container)
from fuzzytm.cli import run


def make_container(tmp_path, rng, name="train.bits", n=24, feature_count=10,
                   classes=2):
    bools = rng.random((n, feature_count)) < 0.5
    labels = rng.integers(classes, size=n)
    ds = BitDataset.from_bools(bools, labels, classes)
    path = tmp_path / name
    write_container(ds, path)
    return path, ds


TRAIN_FLAGS = ["--mode", "multiclass", "--classes", "2", "--clauses", "2",
               "-T", "4", "-S", "4", "-L", "8", "--lf", "4"]


class TestSuggest:
    def test_table_values(self, capsys):
        assert run(["suggest", "--mode", "multiclass", "--clauses", "200",
                    "--lf", "10"]) == 0
        out = capsys.readouterr().out
        assert "T=32" in out
        assert "range=[16,64]" in out

    def test_s_square(self, capsys):
        assert run(["suggest", "--mode", "binary", "--clauses", "1",
                    "--lf", "64", "--s-tm", "10", "--chosen-t", "18"]) == 0
        out = capsys.readouterr().out
        assert "T=8" in out
        assert "S=100" in out
        assert "outside" in out


class TestExitCodes:
    def test_missing_required_flags_is_usage_error(self, capsys):
        assert run(["train", "--data", "x.bits", "--model", "m.ftm"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_unknown_flag_is_usage_error(self):
        assert run(["suggest", "--mode", "binary", "--clauses", "1",
                    "--lf", "1", "--bogus"]) == 1

    def test_missing_file_is_runtime_error(self, tmp_path, capsys):
        assert run(["train", *TRAIN_FLAGS, "--epochs", "1",
                    "--data", str(tmp_path / "nope.bits"),
                    "--model", str(tmp_path / "m.ftm")]) == 2
        assert "error" in capsys.readouterr().err

    def test_lf_exceeding_literals_is_runtime_error(self, tmp_path, rng):
        data, _ = make_container(tmp_path, rng, feature_count=3)
        code = run(["train", "--mode", "multiclass", "--classes", "2",
                    "--clauses", "2", "-T", "4", "-S", "4", "-L", "8",
                    "--lf", "7", "--epochs", "1", "--data", str(data),
                    "--model", str(tmp_path / "m.ftm")])
        assert code == 2


class TestTrain:
    def test_epochs_zero_writes_untrained_model(self, tmp_path, rng):
        data, ds = make_container(tmp_path, rng)
        model_path = tmp_path / "m.ftm"
        assert run(["train", *TRAIN_FLAGS, "--epochs", "0",
                    "--data", str(data), "--model", str(model_path)]) == 0
        m = load_model(model_path)
        assert m.feature_count == 10
        for bank in m.banks:
            assert np.all(bank.states == 127)

    def test_train_writes_log_and_report(self, tmp_path, rng):
        data, _ = make_container(tmp_path, rng)
        test_data, _ = make_container(tmp_path, rng, name="test.bits")
        model_path = tmp_path / "m.ftm"
        log = tmp_path / "log.csv"
        report_dir = tmp_path / "report"
        assert run(["train", *TRAIN_FLAGS, "--epochs", "3", "--data", str(data),
                    "--eval", str(test_data), "--model", str(model_path),
                    "--log", str(log), "--report", str(report_dir)]) == 0
        lines = log.read_text().strip().splitlines()
        assert lines[0] == "epoch,train_acc,test_acc,seconds"
        assert len(lines) == 4
        assert (report_dir / "training.csv").exists()
        assert (report_dir / "training.png").stat().st_size > 0

    def test_preset_with_overrides(self, tmp_path, rng):
        # preset supplies hyperparameters; synthetic data forces small F
        data, _ = make_container(tmp_path, rng, feature_count=40)
        model_path = tmp_path / "m.ftm"
        assert run(["train", "--preset", "imdb-binary-1c", "--epochs", "1",
                    "--data", str(data), "--model", str(model_path)]) == 0
        m = load_model(model_path)
        assert m.mode == "binary"
        assert m.hyper.T == 18 and m.hyper.LF == 64

    def test_determinism_across_processes(self, tmp_path, rng):
        data, _ = make_container(tmp_path, rng)
        paths = [tmp_path / "a.ftm", tmp_path / "b.ftm"]
        for p in paths:
            assert run(["train", *TRAIN_FLAGS, "--epochs", "4", "--seed", "7",
                        "--data", str(data), "--model", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestEvalPredictBench:
    def make_model(self, tmp_path, rng):
        data, ds = make_container(tmp_path, rng)
        model_path = tmp_path / "m.ftm"
        run(["train", *TRAIN_FLAGS, "--epochs", "3", "--data", str(data),
             "--model", str(model_path)])
        return data, ds, model_path

    def test_eval_matches_in_process(self, tmp_path, rng, capsys):
        data, ds, model_path = self.make_model(tmp_path, rng)
        assert run(["eval", "--model", str(model_path), "--data", str(data)]) == 0
        out = capsys.readouterr().out
        acc_cli = float(out.split("accuracy=")[1].split()[0])
        m = load_model(model_path)
        labels, _ = predict_batch(pack_model(m), read_container(data),
                                  repetitions=1, warmup=0)
        assert acc_cli == pytest.approx(float(np.mean(labels == ds.labels)), abs=1e-6)

    def test_predict_writes_labels(self, tmp_path, rng, capsys):
        data, ds, model_path = self.make_model(tmp_path, rng)
        out_path = tmp_path / "labels.txt"
        assert run(["predict", "--model", str(model_path), "--data", str(data),
                    "--out", str(out_path)]) == 0
        labels = [int(x) for x in out_path.read_text().split()]
        assert len(labels) == ds.n_samples
        m = load_model(model_path)
        expect, _ = predict_batch(pack_model(m), read_container(data),
                                  repetitions=1, warmup=0)
        assert labels == expect.tolist()

    def test_bench_csv_line(self, tmp_path, rng, capsys):
        data, ds, model_path = self.make_model(tmp_path, rng)
        capsys.readouterr()  # drop training output
        assert run(["bench", "--model", str(model_path), "--data", str(data),
                    "--reps", "3"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "preds_per_s,bytes_per_s,batch_size,threads"
        pps, bps, batch, threads = lines[1].split(",")
        assert int(batch) == ds.n_samples
        assert float(pps) > 0 and float(bps) > 0


class TestBooleanizeCommand:
    def make_imdb_tree(self, root):
        texts = {
            "pos": ["great movie truly great", "loved this movie a lot",
                    "wonderful acting great plot"],
            "neg": ["terrible movie truly bad", "hated this movie a lot",
                    "awful acting bad plot"],
        }
        for split in ("train", "test"):
            for sub, docs in texts.items():
                d = root / split / sub
                d.mkdir(parents=True)
                for i, doc in enumerate(docs):
                    (d / f"{i}_1.txt").write_text(doc)

    def test_text_pipeline(self, tmp_path, capsys):
        imdb = tmp_path / "aclImdb"
        self.make_imdb_tree(imdb)
        out_dir = tmp_path / "out"
        assert run(["booleanize", "--kind", "text", "--imdb-dir", str(imdb),
                    "--vocab", "20", "--max-ngram", "2", "--features", "16",
                    "--out-dir", str(out_dir)]) == 0
        train = read_container(out_dir / "train.bits")
        test = read_container(out_dir / "test.bits")
        assert train.feature_count == 16 and test.feature_count == 16
        assert train.n_samples == 6 and test.n_samples == 6
        assert (out_dir / "booleanizer.json").exists()

    def test_image_pipeline(self, tmp_path, rng):
        import test_dataset_io as dio
        images = rng.integers(0, 256, size=(6, 8, 8)).astype(np.uint8)
        labels = rng.integers(0, 3, size=6).astype(np.uint8)
        ip, lp = dio.write_idx_pair(tmp_path, images, labels)
        out_dir = tmp_path / "out"
        assert run(["booleanize", "--kind", "image",
                    "--train-images", str(ip), "--train-labels", str(lp),
                    "--test-images", str(ip), "--test-labels", str(lp),
                    "--bits-per-map", "2", "--out-dir", str(out_dir)]) == 0
        train = read_container(out_dir / "train.bits")
        assert train.feature_count == 5 * 8 * 8 * 2

    def test_text_requires_imdb_dir(self, tmp_path):
        assert run(["booleanize", "--kind", "text",
                    "--out-dir", str(tmp_path)]) == 1
