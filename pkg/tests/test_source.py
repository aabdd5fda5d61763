"""Markov sources, corruption, flow-space encoding, sequence files."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from figodenoise.channel import gaussian_channel
from figodenoise.errors import EncodingError, FormatError
from figodenoise.source import (
    corrupt,
    dna_to_flow,
    flow_to_dna,
    gen_markov_source,
    load_dna,
    load_sequence,
    odd_integer_encoding,
    random_dna,
    save_sequence,
    transition_matrix,
)


class TestMarkovSource:
    def test_stay_frequency(self):
        x = gen_markov_source(2, 10**6, 0.9, seed=0)
        stays = np.mean(x[1:] == x[:-1])
        assert stays == pytest.approx(0.9, abs=0.002)

    def test_near_degenerate_chain_is_constant(self):
        x = gen_markov_source(3, 10**4, 1.0 - 1e-12, seed=1)
        assert np.all(x == x[0])

    def test_empirical_transition_matrix(self):
        M = 4
        x = gen_markov_source(M, 10**6, 0.9, seed=2)
        counts = np.zeros((M, M))
        np.add.at(counts, (x[:-1], x[1:]), 1.0)
        emp = counts / counts.sum(axis=1, keepdims=True)
        assert np.allclose(emp, transition_matrix(M, 0.9), atol=0.005)

    def test_stationary_marginal_uniform(self):
        x = gen_markov_source(4, 10**6, 0.9, seed=3)
        marginal = np.bincount(x, minlength=4) / x.size
        assert np.allclose(marginal, 0.25, atol=0.005)

    def test_deterministic(self):
        a = gen_markov_source(3, 1000, 0.8, seed=7)
        b = gen_markov_source(3, 1000, 0.8, seed=7)
        assert np.array_equal(a, b)

    def test_argument_errors(self):
        with pytest.raises(ValueError):
            gen_markov_source(1, 10, 0.9, seed=0)
        with pytest.raises(ValueError):
            gen_markov_source(2, 0, 0.9, seed=0)
        with pytest.raises(ValueError):
            gen_markov_source(2, 10, 1.0, seed=0)


class TestCorrupt:
    def test_noiseless_reproduces_encoding(self):
        enc = odd_integer_encoding(2)
        ch = gaussian_channel(enc, 1e-9)
        x = np.array([0, 1, 1, 0])
        Y = corrupt(x, ch, enc, seed=0)
        assert np.allclose(Y, enc[x], atol=1e-6)

    def test_conditional_mean(self):
        enc = odd_integer_encoding(2)
        ch = gaussian_channel(enc, 1.0)
        x = gen_markov_source(2, 10**6, 0.5, seed=1)
        Y = corrupt(x, ch, enc, seed=2)
        assert Y[x == 1].mean() == pytest.approx(1.0, abs=0.01)
        assert Y[x == 0].mean() == pytest.approx(-1.0, abs=0.01)

    def test_deterministic(self):
        enc = odd_integer_encoding(4)
        ch = gaussian_channel(enc, 1.0)
        x = gen_markov_source(4, 500, 0.9, seed=3)
        assert np.array_equal(corrupt(x, ch, enc, seed=9), corrupt(x, ch, enc, seed=9))

    def test_residual_independence(self):
        enc = odd_integer_encoding(2)
        ch = gaussian_channel(enc, 1.0)
        x = gen_markov_source(2, 10**6, 0.9, seed=4)
        Y = corrupt(x, ch, enc, seed=5)
        r = Y - enc[x]
        lag1 = np.corrcoef(r[:-1], r[1:])[0, 1]
        assert abs(lag1) < 0.005

    def test_encoding_size_checked(self):
        ch = gaussian_channel([-1.0, 1.0], 1.0)
        with pytest.raises(ValueError):
            corrupt(np.array([0, 1]), ch, encoding=[0.0], seed=0)


class TestFlowSpace:
    def test_hand_trace_ttag(self):
        flows, clipped = dna_to_flow("TTAG", "TACG", max_len=9)
        assert flows.tolist() == [2, 1, 0, 1]
        assert clipped == 0

    def test_hand_trace_acg(self):
        flows, _ = dna_to_flow("ACG", "TACG", max_len=9)
        assert flows.tolist() == [0, 1, 1, 1]

    def test_empty_dna(self):
        flows, clipped = dna_to_flow("", "TACG", max_len=9)
        assert flows.size == 0 and clipped == 0

    def test_clipping_counted(self):
        flows, clipped = dna_to_flow("T" * 12 + "A", "TACG", max_len=9)
        assert flows.tolist() == [9, 1]
        assert clipped == 1

    def test_base_missing_from_cycle(self):
        with pytest.raises(EncodingError):
            dna_to_flow("TAG", "TAC", max_len=9)

    def test_flow_to_dna_inverse(self):
        assert flow_to_dna([2, 1, 0, 1], "TACG") == "TTAG"

    def test_all_zero_flows(self):
        assert flow_to_dna([0, 0, 0], "TACG") == ""

    def test_long_wash_cycle(self):
        cycle = "TACGTACGTCTGAGCATCGATCGATGTACAGC"
        dna = "GATTACA"
        flows, _ = dna_to_flow(dna, cycle, max_len=9)
        assert flow_to_dna(flows, cycle) == dna

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=200))
    @settings(max_examples=60, deadline=None)
    def test_round_trip_random(self, seed, length):
        dna = random_dna(length, np.random.default_rng(seed), max_run=9)
        flows, clipped = dna_to_flow(dna, "TACG", max_len=9)
        assert clipped == 0
        assert flow_to_dna(flows, "TACG") == dna


class TestSequenceFiles:
    def test_observation_round_trip(self, tmp_path):
        p = tmp_path / "obs.txt"
        Y = np.random.default_rng(0).standard_normal(1000)
        save_sequence(p, Y)
        assert np.array_equal(load_sequence(p, "observations"), Y)

    def test_symbol_round_trip(self, tmp_path):
        p = tmp_path / "sym.txt"
        x = np.array([0, 3, 1, 2], dtype=np.int64)
        save_sequence(p, x)
        assert np.array_equal(load_sequence(p, "symbols"), x)

    def test_bad_token_line_number(self, tmp_path):
        p = tmp_path / "obs.txt"
        p.write_text("\n".join(["1.0"] * 6 + ["zap", "2.0"]))
        with pytest.raises(FormatError, match="line 7"):
            load_sequence(p, "observations")

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("")
        assert load_sequence(p, "observations").size == 0
        with pytest.raises(FormatError):
            load_sequence(p, "symbols")

    def test_load_dna_skips_fasta_headers(self, tmp_path):
        p = tmp_path / "ref.fa"
        p.write_text(">chr1 test\nACGT\nTT AA\n>chr2\ngg\n")
        assert load_dna(p) == "ACGTTTAAGG"
