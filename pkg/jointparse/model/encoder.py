"""Token encoder: embeddings + learned positions + windowed two-layer feedforward.

For ids w_0 (<bos>) .. w_{n+1} (<eos>):
    x_t = E[w_t] + P[t]
    u_t = x_{t-1} ⊕ x_t ⊕ x_{t+1}        (zero beyond the edges)
    e_t = W2 leaky(W1 u_t + b1) + b2
The first half of e_t is the forward vector, the second half the backward one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from jointparse.core.errors import TooLargeError

Params = Dict[str, np.ndarray]


def leaky(z: np.ndarray, slope: float) -> np.ndarray:
    return np.where(z > 0, z, slope * z)


def leaky_grad(z: np.ndarray, slope: float) -> np.ndarray:
    return np.where(z > 0, 1.0, slope)


def encoder_shapes(vocab_size: int, word_dim: int, ff_dim: int, max_len: int) -> Dict[str, tuple]:
    return {
        "embed": (vocab_size, word_dim),
        "pos": (max_len, word_dim),
        "ff1_w": (3 * word_dim, ff_dim),
        "ff1_b": (ff_dim,),
        "ff2_w": (ff_dim, word_dim),
        "ff2_b": (word_dim,),
    }


@dataclass
class EncoderCache:
    ids: np.ndarray
    window: np.ndarray
    pre: np.ndarray
    hidden: np.ndarray


@dataclass
class Encoded:
    vectors: np.ndarray  # (n+2, word_dim)
    cache: EncoderCache

    @property
    def forward(self) -> np.ndarray:
        return self.vectors[:, : self.vectors.shape[1] // 2]

    @property
    def backward(self) -> np.ndarray:
        return self.vectors[:, self.vectors.shape[1] // 2 :]


def encode(params: Params, ids: Sequence[int], slope: float) -> Encoded:
    ids_arr = np.asarray(ids, dtype=np.int64)
    t = ids_arr.shape[0]
    if t > params["pos"].shape[0]:
        raise TooLargeError(f"{t - 2} tokens exceed the position table ({params['pos'].shape[0] - 2})")
    x = params["embed"][ids_arr] + params["pos"][:t]
    zero = np.zeros((1, x.shape[1]))
    prev = np.concatenate([zero, x[:-1]], axis=0)
    nxt = np.concatenate([x[1:], zero], axis=0)
    window = np.concatenate([prev, x, nxt], axis=1)
    pre = window @ params["ff1_w"] + params["ff1_b"]
    hidden = leaky(pre, slope)
    vectors = hidden @ params["ff2_w"] + params["ff2_b"]
    return Encoded(vectors, EncoderCache(ids_arr, window, pre, hidden))


def encode_backward(params: Params, cache: EncoderCache, d_vectors: np.ndarray, slope: float, grads: Params) -> None:
    """Accumulate encoder parameter gradients into `grads`."""
    grads["ff2_w"] += cache.hidden.T @ d_vectors
    grads["ff2_b"] += d_vectors.sum(axis=0)
    d_pre = (d_vectors @ params["ff2_w"].T) * leaky_grad(cache.pre, slope)
    grads["ff1_w"] += cache.window.T @ d_pre
    grads["ff1_b"] += d_pre.sum(axis=0)
    d_window = d_pre @ params["ff1_w"].T
    dim = params["embed"].shape[1]
    d_x = d_window[:, dim : 2 * dim].copy()
    d_x[:-1] += d_window[1:, :dim]
    d_x[1:] += d_window[:-1, 2 * dim :]
    np.add.at(grads["embed"], cache.ids, d_x)
    grads["pos"][: d_x.shape[0]] += d_x


__all__ = ["encode", "encode_backward", "encoder_shapes", "Encoded", "EncoderCache", "leaky", "leaky_grad"]
