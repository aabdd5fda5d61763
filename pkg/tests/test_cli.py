"""Config parsing and the command-line surface."""

import numpy as np
import pytest

from figodenoise.cli import main
from figodenoise.config import ExperimentConfig, parse_config, planned_cells, serialize_config
from figodenoise.errors import ConfigError
from figodenoise.evaluation import read_csv
from figodenoise.source import load_sequence, save_sequence


def write_cfg(tmp_path, text, name="cfg.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


MINIMAL = "mode = synthetic\nM = 2\nn = 500\nseed = 7\n"


class TestParseConfig:
    def test_minimal_config_gets_defaults(self, tmp_path):
        cfg = parse_config(write_cfg(tmp_path, MINIMAL))
        assert cfg.M == 2 and cfg.n == 500 and cfg.seed == 7
        assert cfg.stay_prob == 0.9
        assert cfg.encoding == "odd"
        assert cfg.quantizer == "auto-round"
        assert cfg.hidden == [200] * 6
        assert cfg.schemes and cfg.k

    def test_flowspace_defaults(self, tmp_path):
        cfg = parse_config(write_cfg(tmp_path, "mode = flowspace\nM = 10\nn = 100\nseed = 1\n"))
        assert cfg.encoding == "index"
        assert cfg.noise_stddev == 0.35
        assert cfg.wash_cycle == "TACG"
        assert cfg.max_homopolymer == 9
        assert cfg.hidden == [500] * 7

    def test_comments_and_blank_lines(self, tmp_path):
        cfg = parse_config(write_cfg(tmp_path, "# hello\n\n" + MINIMAL + "epochs = 3 # inline\n"))
        assert cfg.epochs == 3

    def test_stay_prob_out_of_range(self, tmp_path):
        with pytest.raises(ConfigError, match="stay_prob"):
            parse_config(write_cfg(tmp_path, MINIMAL + "stay_prob = 1.5\n"))

    def test_unknown_key_named(self, tmp_path):
        with pytest.raises(ConfigError, match="window_size"):
            parse_config(write_cfg(tmp_path, MINIMAL + "window_size = 3\n"))

    def test_missing_required_key_named(self, tmp_path):
        with pytest.raises(ConfigError, match="seed"):
            parse_config(write_cfg(tmp_path, "mode = synthetic\nM = 2\nn = 10\n"))

    def test_type_mismatch_has_line_number(self, tmp_path):
        text = MINIMAL + "epochs = many\n"
        with pytest.raises(ConfigError, match="line 5"):
            parse_config(write_cfg(tmp_path, text))

    def test_unknown_scheme_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="viterbi"):
            parse_config(write_cfg(tmp_path, MINIMAL + "schemes = viterbi\n"))

    def test_missing_channel_file(self, tmp_path):
        with pytest.raises(ConfigError, match="channel"):
            parse_config(write_cfg(tmp_path, MINIMAL + "channel = nope.txt\n"))

    def test_planned_cells_arithmetic(self, tmp_path):
        cfg = parse_config(
            write_cfg(tmp_path, MINIMAL + "schemes = gen_cude, fb, ml_pdf\nk = 1, 2, 4\n")
        )
        cells = planned_cells(cfg)
        assert len(cells) == 7
        assert cells.count(("ml_pdf", None)) == 1

    def test_round_trip(self, tmp_path):
        cfg = parse_config(
            write_cfg(tmp_path, MINIMAL + "schemes = dude, ml_pdf\nk = 1, 3\nepochs = 2\n")
        )
        reparsed = parse_config(write_cfg(tmp_path, serialize_config(cfg), name="round.txt"))
        assert reparsed == cfg


class TestCliCommands:
    def test_bound_prints_c1(self, capsys):
        code = main([
            "bound", "--k", "1", "--delta", "0.5", "--M", "2", "--n", "100000",
            "--epsilon", "0.6", "--epsilon-star", "0.01", "--lambda-max", "1",
        ])
        out = capsys.readouterr().out
        assert code == 0
        assert "c1 = 54" in out
        assert "bound = " in out

    def test_bound_invalid_epsilon_fails(self, capsys):
        code = main([
            "bound", "--k", "1", "--delta", "0.5", "--M", "2", "--n", "100000",
            "--epsilon", "0.5", "--epsilon-star", "0.01", "--lambda-max", "1",
        ])
        assert code != 0
        assert "epsilon" in capsys.readouterr().err

    def test_unknown_subcommand_usage(self, capsys):
        code = main(["frobnicate"])
        assert code != 0
        assert "usage" in capsys.readouterr().err.lower()

    def test_simulate_denoise_evaluate_pipeline(self, tmp_path, capsys):
        cfg_path = write_cfg(tmp_path, MINIMAL)
        prefix = str(tmp_path / "seq")
        assert main(["simulate", "--config", str(cfg_path), "--out-prefix", prefix]) == 0
        x = load_sequence(f"{prefix}.clean.txt", "symbols")
        Y = load_sequence(f"{prefix}.noisy.txt", "observations")
        Z = load_sequence(f"{prefix}.quantized.txt", "symbols")
        assert x.size == Y.size == Z.size == 500

        out = tmp_path / "xhat.txt"
        assert main([
            "denoise", "--config", str(cfg_path), "--scheme", "dude", "--k", "2",
            "--out", str(out),
        ]) == 0
        xhat = load_sequence(out, "symbols")
        assert xhat.size == 500

        assert main([
            "evaluate", "--clean", f"{prefix}.clean.txt", "--denoised", str(out), "--k", "2",
        ]) == 0
        lines = capsys.readouterr().out
        assert "raw_error" in lines and "interior_error" in lines

    def test_bench_writes_planned_rows(self, tmp_path):
        cfg_path = write_cfg(
            tmp_path,
            MINIMAL + "schemes = ml_pdf, dude\nk = 1, 2\ncsv = IGNORED.csv\n",
        )
        out_csv = tmp_path / "bench.csv"
        assert main(["bench", "--config", str(cfg_path), "--csv", str(out_csv)]) == 0
        rows = read_csv(out_csv)
        assert len(rows) == 3
        assert not (tmp_path / "IGNORED.csv").exists()

    def test_bench_config_error_exit_code(self, tmp_path, capsys):
        cfg_path = write_cfg(tmp_path, "mode = synthetic\nM = 2\n")
        code = main(["bench", "--config", str(cfg_path)])
        assert code == 3
        assert "bench" in capsys.readouterr().err

    def test_evaluate_format_error_exit_code(self, tmp_path, capsys):
        good = tmp_path / "a.txt"
        save_sequence(good, np.array([0, 1, 0]))
        bad = tmp_path / "b.txt"
        bad.write_text("0\nx\n1\n")
        code = main(["evaluate", "--clean", str(good), "--denoised", str(bad)])
        assert code == 4
        assert "FormatError" in capsys.readouterr().err
