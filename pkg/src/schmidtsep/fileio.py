"""JSON formats for states and channels.

State file::

    {"dims": [nA, nB], "re": [[...], ...], "im": [[...], ...]}

Channel file::

    {"nIn": nIn, "nOut": nOut, "re": [[...]], "im": [[...]]}

with the ``nOut^2 x nIn^2`` channel matrix in row-major order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import ChannelMatrix
from .errors import InvalidState, ParseError
from .linalg import BipartiteState, Dims, validate_density


def _read_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top-level JSON value must be an object")
    return data


def _complex_array(data: dict, shape, where: str) -> np.ndarray:
    try:
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: re/im must be numeric 2-D arrays ({exc})") from exc
    if re.shape != tuple(shape) or im.shape != tuple(shape):
        raise ParseError(f"{where}: re/im shapes {re.shape}/{im.shape}, expected {tuple(shape)}")
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ParseError(f"{where}: non-finite entries")
    return re + 1j * im


def state_to_dict(rho: BipartiteState) -> dict:
    return {
        "dims": [rho.nA, rho.nB],
        "re": rho.mat.real.tolist(),
        "im": rho.mat.imag.tolist(),
    }


def state_from_dict(data: dict, where: str = "state") -> BipartiteState:
    try:
        dims = Dims(*data["dims"])
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc}") from exc
    except (TypeError, ValueError, InvalidState) as exc:
        raise ParseError(f"{where}: bad dims {data.get('dims')!r}") from exc
    mat = _complex_array(data, (dims.n, dims.n), where)
    return validate_density(mat, dims)


def load_state(path) -> BipartiteState:
    return state_from_dict(_read_json(path), str(path))


def dump_state(rho: BipartiteState, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(rho)) + "\n")


def channel_to_dict(ch: ChannelMatrix) -> dict:
    return {
        "nIn": ch.nIn,
        "nOut": ch.nOut,
        "re": np.real(ch.mat).tolist(),
        "im": np.imag(ch.mat).tolist(),
    }


def channel_from_dict(data: dict, where: str = "channel") -> ChannelMatrix:
    try:
        nIn, nOut = int(data["nIn"]), int(data["nOut"])
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: nIn/nOut must be integers") from exc
    if nIn < 2 or nOut < 2:
        raise ParseError(f"{where}: nIn and nOut must be >= 2")
    return ChannelMatrix(nIn, nOut, _complex_array(data, (nOut**2, nIn**2), where))


def load_channel(path) -> ChannelMatrix:
    return channel_from_dict(_read_json(path), str(path))


def dump_channel(ch: ChannelMatrix, path) -> None:
    Path(path).write_text(json.dumps(channel_to_dict(ch)) + "\n")
