"""Tests for parameter, codeword, message and transcript files."""

import json

import numpy as np
import pytest

from awtp.channel import ChannelBudget, build_strategy, channel_run
from awtp.codes import EncodingCoins, awtp_encode
from awtp.codes.field import as_ints
from awtp.errors import ConfigError, LengthMismatch
from awtp.utils.formats import (
    codeword_to_json,
    dump_codeword,
    dump_message,
    dump_params,
    dump_transcript,
    load_codeword,
    load_message,
    load_params,
    load_transcript,
)


@pytest.fixture
def sample(desk_params, rng):
    P = desk_params
    m = P.F.random(P.message_length, rng)
    return m, awtp_encode(m, EncodingCoins.draw(P, rng), P)


class TestParamsFile:
    def test_written_as_decimal_strings(self, desk_params, tmp_path):
        path = tmp_path / "params.json"
        dump_params(desk_params, path)
        data = json.loads(path.read_text())
        assert data["R"] == "1/30"
        assert data["q"] == "241"
        assert load_params(path) == desk_params

    def test_invalid_file(self, tmp_path):
        path = tmp_path / "params.json"
        path.write_text(json.dumps({"q": "241"}))
        with pytest.raises(ConfigError):
            load_params(path)

    def test_not_json(self, tmp_path):
        path = tmp_path / "params.json"
        path.write_text("q = 241")
        with pytest.raises(ConfigError):
            load_params(path)


class TestCodewordFile:
    def test_json_layout(self, sample):
        _, c = sample
        rows = codeword_to_json(c)
        assert len(rows) == 8 and len(rows[0]) == 30
        assert all(isinstance(x, str) for x in rows[0])

    @pytest.mark.parametrize("suffix", [".json", ".bin"])
    def test_reload(self, desk_params, sample, tmp_path, suffix):
        _, c = sample
        path = tmp_path / f"codeword{suffix}"
        dump_codeword(c, path)
        assert np.array_equal(as_ints(load_codeword(path, desk_params)), as_ints(c))

    def test_binary_is_little_endian_words(self, desk_params, sample, tmp_path):
        _, c = sample
        path = tmp_path / "codeword.bin"
        dump_codeword(c, path)
        raw = path.read_bytes()
        assert len(raw) == 8 * 30 * 8
        assert int.from_bytes(raw[:8], "little") == int(c[0, 0])

    def test_wrong_shape(self, desk_params, tmp_path):
        path = tmp_path / "codeword.json"
        path.write_text(json.dumps([["1", "2"]]))
        with pytest.raises(LengthMismatch):
            load_codeword(path, desk_params)
        binary = tmp_path / "codeword.bin"
        binary.write_bytes(b"\x00" * 16)
        with pytest.raises(LengthMismatch):
            load_codeword(binary, desk_params)

    def test_out_of_range_entries(self, desk_params, tmp_path):
        path = tmp_path / "codeword.json"
        path.write_text(json.dumps([["241"] * 30] * 8))
        with pytest.raises(ConfigError):
            load_codeword(path, desk_params)

    def test_non_decimal_entries(self, desk_params, tmp_path):
        path = tmp_path / "codeword.json"
        path.write_text(json.dumps([["x"] * 30] * 8))
        with pytest.raises(ConfigError):
            load_codeword(path, desk_params)


class TestMessageFile:
    def test_reload(self, desk_params, sample, tmp_path):
        m, _ = sample
        path = tmp_path / "message.json"
        dump_message(m, path)
        assert np.array_equal(as_ints(load_message(path, desk_params)), as_ints(m))

    def test_wrong_length(self, desk_params, tmp_path):
        path = tmp_path / "message.json"
        path.write_text(json.dumps(["1", "2"]))
        with pytest.raises(LengthMismatch):
            load_message(path, desk_params)


class TestTranscriptFile:
    def test_reload(self, desk_params, sample, tmp_path, rng):
        _, c = sample
        _, transcript = channel_run(c, build_strategy("random"), ChannelBudget.for_params(desk_params), rng)
        path = tmp_path / "transcript.json"
        dump_transcript(transcript, path)
        assert load_transcript(path) == transcript

    def test_invalid(self, tmp_path):
        path = tmp_path / "transcript.json"
        path.write_text(json.dumps({"N": "eight"}))
        with pytest.raises(ConfigError):
            load_transcript(path)
