import json

import numpy as np
import pytest

from schmidtsep import states
from schmidtsep.channels import random_cpt_channel
from schmidtsep.errors import InvalidState, ParseError
from schmidtsep.fileio import (
    channel_from_dict,
    dump_channel,
    dump_state,
    load_channel,
    load_state,
    state_from_dict,
)


def test_state_round_trip(tmp_path):
    rho = states.random_density((2, 3), 0)
    path = tmp_path / "s.json"
    dump_state(rho, path)
    back = load_state(path)
    assert back.dims == rho.dims
    np.testing.assert_array_equal(back.mat, rho.mat)
    data = json.loads(path.read_text())
    assert set(data) == {"dims", "re", "im"}


def test_channel_round_trip(tmp_path):
    ch = random_cpt_channel(2, 3, 1)
    path = tmp_path / "c.json"
    dump_channel(ch, path)
    back = load_channel(path)
    assert (back.nIn, back.nOut) == (2, 3)
    np.testing.assert_array_equal(back.mat, ch.mat)


@pytest.mark.parametrize(
    "data",
    [
        {"dims": [2, 2], "re": [[1]]},
        {"dims": [2, 2], "re": [[0.25] * 3] * 4, "im": [[0] * 3] * 4},
        {"dims": "2x2", "re": np.eye(4).tolist(), "im": np.zeros((4, 4)).tolist()},
        {"dims": [2, 2], "re": [["a"] * 4] * 4, "im": np.zeros((4, 4)).tolist()},
    ],
)
def test_malformed_state(data):
    with pytest.raises(ParseError):
        state_from_dict(data)


def test_invalid_state_content():
    data = {"dims": [2, 2], "re": np.eye(4).tolist(), "im": np.zeros((4, 4)).tolist()}
    with pytest.raises(InvalidState):
        state_from_dict(data)


def test_malformed_channel():
    with pytest.raises(ParseError):
        channel_from_dict({"nIn": 2, "re": []})


def test_bad_json_file(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("[1, 2")
    with pytest.raises(ParseError):
        load_state(path)
    with pytest.raises(ParseError):
        load_state(tmp_path / "missing.json")
