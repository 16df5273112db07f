"""Biaffine scoring heads on top of the token encoder, with exact backprop.

Boundary vectors (fenceposts) f_k = e→_k ⊕ e←_{k+1}, k = 0..n. A constituent
(i, j) reads the left fencepost i-1 and the right fencepost j; heads and
modifiers read the word vectors e_0..e_n (e_0 = <bos> stands for the root).

    s^c(i, j)       = [r^left_{i-1} ⊕ 1]ᵀ W^c r^right_j
    s^d(h, m)       = [r^mod_m ⊕ 1]ᵀ W^d r^head_h
    s^span(i, j, h) = [r^word_h ⊕ 1]ᵀ W^span [r^span_{i,j} ⊕ 1],
                      r^span_{i,j} = MLP(f_{i-1} - f_j)
    s^c(i, j, l)    = [r^left_{i-1} ⊕ 1]ᵀ W^cl_l [r^right_j ⊕ 1]
    s^d(h, m, r)    = [r^mod_m ⊕ 1]ᵀ W^dl_r [r^head_h ⊕ 1]

Every MLP is one affine layer followed by a leaky rectifier. W^span is the
single tensor behind both headed and hooked span scores.

`forward` returns a Tape; `backward` consumes upstream table gradients and
the tape and returns parameter gradients. A tape recorded before the last
parameter update is rejected with StaleTapeError.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from jointparse.core.config import ModelConfig
from jointparse.core.errors import CheckpointError, StaleTapeError
from jointparse.decoding.tables import ScoreTables, arc_mask, span_mask
from jointparse.model.encoder import Encoded, encode, encode_backward, encoder_shapes, leaky, leaky_grad
from jointparse.model.vocab import Vocab
from jointparse.trees.types import Sentence

logger = logging.getLogger(__name__)

Params = Dict[str, np.ndarray]

_BOUNDARY_MLPS = ("left", "right")
_WORD_MLPS = ("head", "mod")


@dataclass
class LabelScores:
    con_labels: np.ndarray  # (n+1, n+1, |labels|), [i, j, l]
    dep_rels: np.ndarray  # (n+1, n+1, |rels|), [h, m, r]

    @property
    def n(self) -> int:
        return self.con_labels.shape[0] - 1


@dataclass
class Tape:
    model_id: int
    version: int
    n: int
    second_order: bool
    encoded: Encoded
    cache: Dict[str, np.ndarray]


def _with_one(x: np.ndarray) -> np.ndarray:
    return np.concatenate([x, np.ones(x.shape[:-1] + (1,))], axis=-1)


class ScoringModel:
    def __init__(self, config: ModelConfig, vocab: Vocab, params: Optional[Params] = None) -> None:
        self.config = config
        self.vocab = vocab
        self.version = 0
        self.params: Params = params if params is not None else self.init_params(config.seed)
        for name, shape in self.param_shapes().items():
            if name not in self.params or self.params[name].shape != shape:
                got = None if name not in self.params else self.params[name].shape
                raise CheckpointError(f"parameter {name}: expected shape {shape}, got {got}")

    # Parameters -------------------------------------------------------
    def param_shapes(self) -> Dict[str, Tuple[int, ...]]:
        c = self.config
        d, k, ks = c.word_dim, c.mlp_dim, c.span_mlp_dim
        shapes: Dict[str, Tuple[int, ...]] = dict(encoder_shapes(len(self.vocab.words), d, c.ff_dim, c.max_len))
        for name in _BOUNDARY_MLPS + _WORD_MLPS:
            shapes[f"mlp_{name}_w"] = (d, k)
            shapes[f"mlp_{name}_b"] = (k,)
        shapes["mlp_word_w"] = (d, ks)
        shapes["mlp_word_b"] = (ks,)
        shapes["mlp_span_w"] = (d, ks)
        shapes["mlp_span_b"] = (ks,)
        shapes["w_c"] = (k + 1, k)
        shapes["w_d"] = (k + 1, k)
        shapes["w_span"] = (ks + 1, ks + 1)
        shapes["w_con_label"] = (len(self.vocab.labels), k + 1, k + 1)
        shapes["w_dep_rel"] = (len(self.vocab.rels), k + 1, k + 1)
        return shapes

    def init_params(self, seed: int) -> Params:
        rng = np.random.default_rng(seed)
        r = self.config.init_range
        return {name: rng.uniform(-r, r, size=shape) for name, shape in self.param_shapes().items()}

    def zero_grads(self) -> Params:
        return {name: np.zeros_like(p) for name, p in self.params.items()}

    def mark_updated(self) -> None:
        """Invalidate tapes recorded against the previous parameter values."""
        self.version += 1

    # Forward ----------------------------------------------------------
    def _mlp(self, name: str, x: np.ndarray, cache: Dict[str, np.ndarray]) -> np.ndarray:
        pre = x @ self.params[f"mlp_{name}_w"] + self.params[f"mlp_{name}_b"]
        cache[f"{name}_in"] = x
        cache[f"{name}_pre"] = pre
        return leaky(pre, self.config.leaky_slope)

    def encode(self, sentence: Sentence) -> Encoded:
        return encode(self.params, self.vocab.sentence_ids(sentence), self.config.leaky_slope)

    def _representations(self, encoded: Encoded, n: int, second_order: bool) -> Dict[str, np.ndarray]:
        cache: Dict[str, np.ndarray] = {}
        fence = np.concatenate([encoded.forward[: n + 1], encoded.backward[1 : n + 2]], axis=1)
        words = encoded.vectors[: n + 1]
        for name in _BOUNDARY_MLPS:
            cache[f"r_{name}"] = self._mlp(name, fence, cache)
        for name in _WORD_MLPS:
            cache[f"r_{name}"] = self._mlp(name, words, cache)
        if second_order:
            diff = fence[:, None, :] - fence[None, :, :]
            cache["r_span"] = self._mlp("span", diff, cache)
            cache["r_word"] = self._mlp("word", words, cache)
        return cache

    def score_structure(self, encoded: Encoded, n: int, second_order: bool = False) -> ScoreTables:
        return self._structure(self._representations(encoded, n, second_order), n, second_order)

    def score_labels(self, encoded: Encoded, n: int) -> LabelScores:
        return self._labels(self._representations(encoded, n, False), n)

    def _structure(self, cache: Dict[str, np.ndarray], n: int, second_order: bool) -> ScoreTables:
        p = self.params
        s_mask = span_mask(n)
        left_a = _with_one(cache["r_left"])
        bracket = left_a @ p["w_c"] @ cache["r_right"].T  # [i-1, j]
        span_c = np.zeros((n + 1, n + 1))
        span_c[1:, :] = bracket[:n, :]
        span_c *= s_mask

        mod_a = _with_one(cache["r_mod"])
        arcs = mod_a @ p["w_d"] @ cache["r_head"].T  # [m, h]
        arc_d = arcs.T * arc_mask(n)

        span2o = None
        if second_order:
            word_a = _with_one(cache["r_word"])
            span_a = _with_one(cache["r_span"])
            full = np.einsum("hp,pq,abq->abh", word_a, p["w_span"], span_a, optimize=True)
            span2o = np.zeros((n + 1, n + 1, n + 1))
            span2o[1:, :, :] = full[:n]
            span2o *= s_mask[:, :, None]
        return ScoreTables(n, span_c, arc_d, span2o)

    def _labels(self, cache: Dict[str, np.ndarray], n: int) -> LabelScores:
        p = self.params
        left_a, right_a = _with_one(cache["r_left"]), _with_one(cache["r_right"])
        full = np.einsum("ap,lpq,bq->abl", left_a, p["w_con_label"], right_a, optimize=True)
        con = np.zeros_like(full)
        con[1:] = full[:n]
        mod_a, head_a = _with_one(cache["r_mod"]), _with_one(cache["r_head"])
        rels = np.einsum("mp,rpq,hq->hmr", mod_a, p["w_dep_rel"], head_a, optimize=True)
        return LabelScores(con, rels)

    def forward(self, sentence: Sentence, second_order: bool = False) -> Tuple[ScoreTables, LabelScores, Tape]:
        n = sentence.n
        encoded = self.encode(sentence)
        cache = self._representations(encoded, n, second_order)
        tables = self._structure(cache, n, second_order)
        labels = self._labels(cache, n)
        return tables, labels, Tape(id(self), self.version, n, second_order, encoded, cache)

    # Backward ---------------------------------------------------------
    def _mlp_backward(self, name: str, d_out: np.ndarray, cache: Dict[str, np.ndarray], grads: Params) -> np.ndarray:
        x, pre = cache[f"{name}_in"], cache[f"{name}_pre"]
        d_pre = d_out * leaky_grad(pre, self.config.leaky_slope)
        flat_x = x.reshape(-1, x.shape[-1])
        flat_d = d_pre.reshape(-1, d_pre.shape[-1])
        grads[f"mlp_{name}_w"] += flat_x.T @ flat_d
        grads[f"mlp_{name}_b"] += flat_d.sum(axis=0)
        return d_pre @ self.params[f"mlp_{name}_w"].T

    def backward(
        self,
        tape: Tape,
        d_span_c: Optional[np.ndarray] = None,
        d_arc_d: Optional[np.ndarray] = None,
        d_span2o: Optional[np.ndarray] = None,
        d_con_labels: Optional[np.ndarray] = None,
        d_dep_rels: Optional[np.ndarray] = None,
    ) -> Params:
        """Parameter gradients for the given upstream gradients (missing ones count as zero)."""
        if tape is None or tape.model_id != id(self) or tape.version != self.version:
            raise StaleTapeError("no forward pass recorded for the current parameters")
        p = self.params
        n = tape.n
        cache = tape.cache
        k = self.config.mlp_dim
        grads = self.zero_grads()
        s_mask = span_mask(n)

        d_left_a = np.zeros((n + 1, k + 1))
        d_right_a = np.zeros((n + 1, k + 1))
        d_mod_a = np.zeros((n + 1, k + 1))
        d_head_a = np.zeros((n + 1, k + 1))
        left_a, right_a = _with_one(cache["r_left"]), _with_one(cache["r_right"])
        mod_a, head_a = _with_one(cache["r_mod"]), _with_one(cache["r_head"])

        if d_span_c is not None:
            d_bracket = np.zeros((n + 1, n + 1))
            d_bracket[:n] = (d_span_c * s_mask)[1:]
            right = cache["r_right"]
            grads["w_c"] += left_a.T @ d_bracket @ right
            d_left_a += d_bracket @ right @ p["w_c"].T
            d_right_a[:, :k] += d_bracket.T @ left_a @ p["w_c"]

        if d_arc_d is not None:
            d_arcs = (d_arc_d * arc_mask(n)).T  # [m, h]
            head = cache["r_head"]
            grads["w_d"] += mod_a.T @ d_arcs @ head
            d_mod_a += d_arcs @ head @ p["w_d"].T
            d_head_a[:, :k] += d_arcs.T @ mod_a @ p["w_d"]

        if d_con_labels is not None:
            d_full = np.zeros_like(d_con_labels)
            d_full[:n] = (d_con_labels * s_mask[:, :, None])[1:]
            w = p["w_con_label"]
            grads["w_con_label"] += np.einsum("ap,abl,bq->lpq", left_a, d_full, right_a, optimize=True)
            d_left_a += np.einsum("abl,lpq,bq->ap", d_full, w, right_a, optimize=True)
            d_right_a += np.einsum("abl,lpq,ap->bq", d_full, w, left_a, optimize=True)

        if d_dep_rels is not None:
            d_rels = d_dep_rels * arc_mask(n)[:, :, None]  # [h, m, r]
            w = p["w_dep_rel"]
            grads["w_dep_rel"] += np.einsum("mp,hmr,hq->rpq", mod_a, d_rels, head_a, optimize=True)
            d_mod_a += np.einsum("hmr,rpq,hq->mp", d_rels, w, head_a, optimize=True)
            d_head_a += np.einsum("hmr,rpq,mp->hq", d_rels, w, mod_a, optimize=True)

        d_vectors = np.zeros_like(tape.encoded.vectors)
        dim = d_vectors.shape[1] // 2
        d_fence = self._mlp_backward("left", d_left_a[:, :k], cache, grads)
        d_fence += self._mlp_backward("right", d_right_a[:, :k], cache, grads)
        d_words = self._mlp_backward("mod", d_mod_a[:, :k], cache, grads)
        d_words += self._mlp_backward("head", d_head_a[:, :k], cache, grads)

        if tape.second_order and d_span2o is not None:
            ks = self.config.span_mlp_dim
            d_full = np.zeros((n + 1, n + 1, n + 1))
            d_full[:n] = (d_span2o * s_mask[:, :, None])[1:]
            word_a, span_a = _with_one(cache["r_word"]), _with_one(cache["r_span"])
            w = p["w_span"]
            grads["w_span"] += np.einsum("hp,abh,abq->pq", word_a, d_full, span_a, optimize=True)
            d_word_a = np.einsum("abh,pq,abq->hp", d_full, w, span_a, optimize=True)
            d_span_a = np.einsum("abh,hp,pq->abq", d_full, word_a, w, optimize=True)
            d_words += self._mlp_backward("word", d_word_a[:, :ks], cache, grads)
            d_diff = self._mlp_backward("span", d_span_a[..., :ks], cache, grads)
            d_fence += d_diff.sum(axis=1) - d_diff.sum(axis=0)

        d_vectors[: n + 1] += d_words
        d_vectors[: n + 1, :dim] += d_fence[:, :dim]
        d_vectors[1 : n + 2, dim:] += d_fence[:, dim:]
        encode_backward(p, tape.encoded.cache, d_vectors, self.config.leaky_slope, grads)
        return grads


__all__ = ["ScoringModel", "LabelScores", "Tape"]
