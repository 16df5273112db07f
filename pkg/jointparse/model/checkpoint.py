"""Checkpoint files: one msgpack map with config, vocabulary and raw tensors.

    {format: "jointparse-checkpoint", version: 1,
     config: {...}, vocab: {words, labels, rels},
     params: {name: {shape: [...], dtype: "<f8", data: <bytes>}}}

Tensors are stored as little-endian float64 regardless of host byte order.
"""
from __future__ import annotations

import logging
from typing import Any, Dict, Tuple

import msgpack  # type: ignore
import numpy as np

from jointparse.core.config import JointParseConfig, config_snapshot
from jointparse.core.errors import CheckpointError
from jointparse.model.scorer import ScoringModel
from jointparse.model.vocab import Vocab

logger = logging.getLogger(__name__)

FORMAT_NAME = "jointparse-checkpoint"
FORMAT_VERSION = 1
_DTYPE = "<f8"


def _pack_tensor(a: np.ndarray) -> Dict[str, Any]:
    return {"shape": list(a.shape), "dtype": _DTYPE, "data": np.ascontiguousarray(a, dtype=_DTYPE).tobytes()}


def _unpack_tensor(name: str, raw: Dict[str, Any]) -> np.ndarray:
    if raw.get("dtype") != _DTYPE:
        raise CheckpointError(f"tensor {name}: unsupported dtype {raw.get('dtype')!r}")
    shape = tuple(int(s) for s in raw["shape"])
    flat = np.frombuffer(raw["data"], dtype=_DTYPE)
    if flat.size != int(np.prod(shape)):
        raise CheckpointError(f"tensor {name}: {flat.size} values for shape {shape}")
    return flat.reshape(shape).astype(np.float64)


def dumps_checkpoint(model: ScoringModel, config: JointParseConfig) -> bytes:
    payload = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "config": config.model_dump(),
        "snapshot": config_snapshot(config),
        "vocab": model.vocab.to_dict(),
        "params": {name: _pack_tensor(p) for name, p in sorted(model.params.items())},
    }
    return msgpack.packb(payload, use_bin_type=True)


def loads_checkpoint(blob: bytes) -> Tuple[ScoringModel, JointParseConfig]:
    try:
        payload = msgpack.unpackb(blob, raw=False)
    except Exception as e:
        raise CheckpointError(f"not a msgpack checkpoint: {e}") from e
    if not isinstance(payload, dict) or payload.get("format") != FORMAT_NAME:
        raise CheckpointError("missing checkpoint header")
    if payload.get("version") != FORMAT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {payload.get('version')!r}")
    config = JointParseConfig.model_validate(payload["config"])
    vocab = Vocab.from_dict(payload["vocab"])
    params = {name: _unpack_tensor(name, raw) for name, raw in payload["params"].items()}
    return ScoringModel(config.model, vocab, params), config


def save_checkpoint(path: str, model: ScoringModel, config: JointParseConfig) -> None:
    with open(path, "wb") as f:
        f.write(dumps_checkpoint(model, config))
    logger.info("checkpoint written path=%s params=%d", path, len(model.params))


def load_checkpoint(path: str) -> Tuple[ScoringModel, JointParseConfig]:
    with open(path, "rb") as f:
        return loads_checkpoint(f.read())


__all__ = ["save_checkpoint", "load_checkpoint", "dumps_checkpoint", "loads_checkpoint", "FORMAT_NAME", "FORMAT_VERSION"]
