"""Dense score tables consumed by the chart decoders.

Layout (1-based words, row/column 0 reserved for the root):
  span_c[i, j]     s^c(i, j)        1 <= i <= j <= n       shape (n+1, n+1)
  arc_d[h, m]      s^d(h, m)        0 <= h <= n, 1 <= m <= n, h != m
  span2o[i, j, h]  s^span(i, j, h)  1 <= i <= j <= n, 0 <= h <= n  shape (n+1, n+1, n+1)
Cells outside these ranges are ignored by every decoder and kept at zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from jointparse.core.errors import InvalidTreeError


def span_mask(n: int) -> np.ndarray:
    """Boolean (n+1, n+1) mask of valid (i, j) cells."""
    mask = np.zeros((n + 1, n + 1), dtype=bool)
    iu = np.triu_indices(n, k=0)
    mask[iu[0] + 1, iu[1] + 1] = True
    return mask


def arc_mask(n: int) -> np.ndarray:
    """Boolean (n+1, n+1) mask of valid (h, m) cells."""
    mask = np.ones((n + 1, n + 1), dtype=bool)
    mask[:, 0] = False
    np.fill_diagonal(mask, False)
    return mask


@dataclass
class ScoreTables:
    n: int
    span_c: np.ndarray
    arc_d: np.ndarray
    span2o: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        n = self.n
        if self.span_c.shape != (n + 1, n + 1):
            raise InvalidTreeError(f"span_c shape {self.span_c.shape}, expected {(n + 1, n + 1)}")
        if self.arc_d.shape != (n + 1, n + 1):
            raise InvalidTreeError(f"arc_d shape {self.arc_d.shape}, expected {(n + 1, n + 1)}")
        if not np.all(np.isfinite(self.span_c[span_mask(n)])):
            raise InvalidTreeError("non-finite constituent score")
        if not np.all(np.isfinite(self.arc_d[arc_mask(n)])):
            raise InvalidTreeError("non-finite arc score")
        if self.span2o is not None:
            if self.span2o.shape != (n + 1, n + 1, n + 1):
                raise InvalidTreeError(f"span2o shape {self.span2o.shape}")
            if not np.all(np.isfinite(self.span2o[span_mask(n)])):
                raise InvalidTreeError("non-finite span score")

    @classmethod
    def zeros(cls, n: int, second_order: bool = False) -> "ScoreTables":
        return cls(
            n,
            np.zeros((n + 1, n + 1)),
            np.zeros((n + 1, n + 1)),
            np.zeros((n + 1, n + 1, n + 1)) if second_order else None,
        )

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, second_order: bool = True, scale: float = 1.0) -> "ScoreTables":
        """Random tables (standard normal times `scale`) with invalid cells zeroed."""
        s = span_mask(n)
        a = arc_mask(n)
        span_c = np.where(s, rng.standard_normal((n + 1, n + 1)) * scale, 0.0)
        arc_d = np.where(a, rng.standard_normal((n + 1, n + 1)) * scale, 0.0)
        span2o = None
        if second_order:
            span2o = np.where(s[:, :, None], rng.standard_normal((n + 1, n + 1, n + 1)) * scale, 0.0)
        return cls(n, span_c, arc_d, span2o)

    def copy(self) -> "ScoreTables":
        return ScoreTables(
            self.n,
            self.span_c.copy(),
            self.arc_d.copy(),
            None if self.span2o is None else self.span2o.copy(),
        )


__all__ = ["ScoreTables", "span_mask", "arc_mask"]
