import json
import math

import numpy as np
import pytest

from hoinet import dataio
from hoinet.cli import main
from hoinet.data import SeriesDataset, SymbolDataset
from hoinet.errors import DataValidationError
from hoinet.generators import Binary10Params, gen_binary10
from hoinet.network import analyze_static
from hoinet.surrogates import SurrogateConfig


def small_result(seed=0):
    ds, _ = gen_binary10(Binary10Params(n=300, seed=1))
    sub = SymbolDataset(ds.data[:, 4:8], ds.alphabet_sizes[4:8],
                        ds.channel_names[4:8])
    return analyze_static(sub, SurrogateConfig(count=20, method="shuffle",
                                               master_seed=seed))


class TestDatasetRoundTrip:
    def test_static_round_trip(self, tmp_path):
        path = tmp_path / "sym.csv"
        ds = SymbolDataset(np.array([[0, 2], [1, 0], [2, 1]]), (3, 3), ("A", "B"))
        dataio.write_dataset(path, ds)
        back = dataio.read_dataset(path, "static")
        assert np.array_equal(back.data, ds.data)
        assert back.channel_names == ds.channel_names
        assert back.alphabet_sizes == (3, 3)

    def test_dynamic_round_trip(self, tmp_path):
        path = tmp_path / "series.csv"
        rng = np.random.default_rng(0)
        series = SeriesDataset(rng.standard_normal((20, 3)), ("X", "Y", "Z"))
        dataio.write_dataset(path, series)
        back = dataio.read_dataset(path, "dynamic")
        assert np.array_equal(back.data, series.data)

    def test_small_static_csv(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n0,1\n1,0\n1,1\n")
        ds = dataio.read_dataset(path, "static")
        assert ds.n == 3 and ds.m == 2

    def test_nan_rejected_with_location(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1.0,2.0\nnan,3.0\n")
        with pytest.raises(DataValidationError, match="row 3, column x"):
            dataio.read_dataset(path, "dynamic")

    def test_non_integer_symbol_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n0.5,1\n")
        with pytest.raises(DataValidationError, match="non-integer"):
            dataio.read_dataset(path, "static")

    def test_ragged_rows_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n3\n")
        with pytest.raises(DataValidationError, match="row 3"):
            dataio.read_dataset(path, "dynamic")

    def test_beat_series_round_trip(self, tmp_path):
        path = tmp_path / "beats.csv"
        path.write_text("HP,SP,RA\n800,120,0.5\n810,121,0.6\n805,119,0.4\n")
        series = dataio.read_beat_series(path)
        assert series.n == 3
        assert series.hp.tolist() == [800.0, 810.0, 805.0]
        assert series.dp is None

    def test_beat_series_unknown_column(self, tmp_path):
        path = tmp_path / "beats.csv"
        path.write_text("HP,WAT\n800,1\n")
        with pytest.raises(DataValidationError, match="unknown beat column"):
            dataio.read_beat_series(path)


class TestResultSerialization:
    def test_json_round_trip_bit_exact(self, tmp_path):
        result = small_result()
        path = tmp_path / "r.json"
        dataio.write_result(result, path)
        loaded = dataio.load_result_matrices(path)
        assert np.array_equal(loaded["is"], result.is_matrix, equal_nan=True)
        assert np.array_equal(loaded["cis"], result.cis_matrix, equal_nan=True)
        assert np.array_equal(loaded["b"], result.b_matrix, equal_nan=True)

    def test_nan_encoded_as_null(self, tmp_path):
        result = small_result()
        doc = dataio.result_to_json_dict(result)
        names = doc["channels"]
        assert doc["measures"]["b"][names[0]][names[0]] is None
        text = json.dumps(doc)
        assert "NaN" not in text

    def test_bits_conversion(self):
        result = small_result()
        nats = dataio.result_to_json_dict(result)
        bits = dataio.result_to_json_dict(result, bits=True)
        names = nats["channels"]
        a, b = names[0], names[1]
        v_nats = nats["measures"]["is"][a][b]
        v_bits = bits["measures"]["is"][a][b]
        assert v_bits == pytest.approx(v_nats / math.log(2), rel=1e-12)
        assert bits["units"] == "bits"
        # balance index is dimensionless: identical in both documents
        assert bits["measures"]["b"][a][b] == nats["measures"]["b"][a][b]

    def test_dot_output(self, tmp_path):
        result = small_result()
        dot = dataio.result_to_dot(result)
        assert dot.startswith("graph network {")
        for name in result.channel_names:
            assert f'"{name}"' in dot
        for (i, j), link in result.links.items():
            token = f'"{result.channel_names[i]}" -- "{result.channel_names[j]}"'
            assert (token in dot) == link.connected
        for line in dot.splitlines():
            if "--" in line and "label" in line:
                assert ("color=red" in line) or ("color=blue" in line) or ("color=gray" in line)

    def test_empty_network_dot(self):
        rng = np.random.default_rng(40)
        ds = SymbolDataset(rng.integers(0, 2, size=(500, 3)), (2, 2, 2))
        result = analyze_static(ds, SurrogateConfig(count=20, method="shuffle",
                                                    master_seed=0))
        dot = dataio.result_to_dot(result)
        assert "--" not in dot
        assert dot.count('";') == 3


class TestCli:
    def test_simulate_and_analyze_round_trip(self, tmp_path):
        data = tmp_path / "triple.csv"
        out_json = tmp_path / "result.json"
        out_dot = tmp_path / "result.dot"
        assert main(["simulate", "three-node-static", "--alpha", "0.9",
                     "--gamma", "1.0", "--n", "800", "--seed", "3",
                     "--output", str(data)]) == 0
        sidecar = dataio.read_sidecar(data)
        assert sidecar["params"]["alpha"] == 0.9
        assert len(sidecar["truth_adjacency"]) == 3
        assert main(["analyze", "--mode", "static", "--input", str(data),
                     "--output-json", str(out_json), "--output-dot", str(out_dot),
                     "--surrogates", "50", "--seed", "11"]) == 0
        doc = json.loads(out_json.read_text())
        assert doc["schema_version"] == 1
        assert doc["mode"] == "static"
        assert out_dot.read_text().startswith("graph network {")

    def test_analyze_deterministic_bytes(self, tmp_path):
        data = tmp_path / "d.csv"
        main(["simulate", "binary10", "--n", "200", "--seed", "5",
              "--output", str(data)])
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        for out in (out1, out2):
            assert main(["analyze", "--mode", "static", "--input", str(data),
                         "--output-json", str(out), "--surrogates", "30",
                         "--seed", "7"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_env_fallback(self, tmp_path, monkeypatch):
        data = tmp_path / "d.csv"
        monkeypatch.setenv("HOINET_SEED", "123")
        main(["simulate", "binary10", "--n", "100", "--output", str(data)])
        assert dataio.read_sidecar(data)["seed"] == 123

    def test_theory_static_sweep(self, tmp_path):
        out = tmp_path / "curves.csv"
        assert main(["theory", "three-node", "--kind", "static", "--sweep",
                     "--output", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 21  # header + alpha in [0.5, 1] step 0.025
        header = lines[0].split(",")
        assert header[:3] == ["alpha", "beta", "gamma"]
        assert "nis_S1_S2" in header

    def test_theory_dynamic_sweep(self, tmp_path):
        out = tmp_path / "curves.csv"
        assert main(["theory", "three-node", "--kind", "dynamic", "--sweep",
                     "--output", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 1 + 21  # a in [0, 1] step 0.05

    def test_benchmark_command(self, tmp_path):
        out = tmp_path / "report.csv"
        assert main(["benchmark", "--scenario", "binary10", "--lengths", "250",
                     "--runs", "2", "--surrogates", "20", "--seed", "9",
                     "--output", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 2
        assert "sensitivity" in lines[0]
        runs = (tmp_path / "report.runs.csv").read_text().strip().splitlines()
        assert len(runs) == 3

    def test_derive_commands(self, tmp_path):
        beats = tmp_path / "beats.csv"
        rows = ["HP,SP,RA,MAP,ZMAX,LVET"]
        rng = np.random.default_rng(0)
        for _ in range(12):
            rows.append(f"{800 + 40 * rng.random():.3f},{120 + 5 * rng.random():.3f},"
                        f"{rng.random():.3f},{90 + 5 * rng.random():.3f},"
                        f"{1 + rng.random():.3f},{260 + 20 * rng.random():.3f}")
        beats.write_text("\n".join(rows) + "\n")
        for kind, expected_len in [("hv", 10), ("sv", 10), ("rp", 9),
                                   ("co", 11), ("pr", 11)]:
            out = tmp_path / f"{kind}.csv"
            assert main(["derive", "--kind", kind, "--input", str(beats),
                         "--output", str(out), "--beta", "0.8"]) == 0
            lines = out.read_text().strip().splitlines()
            assert lines[0] == kind.upper()
            assert len(lines) == 1 + expected_len

    def test_error_exit_code(self, tmp_path, capsys):
        missing = tmp_path / "nope.csv"
        code = main(["analyze", "--mode", "static", "--input", str(missing),
                     "--output-json", str(tmp_path / "o.json")])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_invalid_params_exit_code(self, tmp_path):
        code = main(["simulate", "three-node-static", "--alpha", "0.2",
                     "--output", str(tmp_path / "x.csv")])
        assert code == 2
