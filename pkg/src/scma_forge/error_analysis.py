"""Pairwise error bounds, union-bound SER and design distance metrics.

All distances follow the squared-distance convention: ``min_euclidean`` is
a minimum of summed squared per-RE differences, ``min_product`` a minimum
of products of squared per-RE differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels
from .errors import ValidationError

# Squared per-RE differences below this count as "no difference" when
# classifying pairs for the product distance.
ZERO_SQ_DIST = 1e-12

# Above this set size the union bound switches from the full double loop
# to symmetric-pair enumeration.
_FULL_LOOP_LIMIT = 4096


@dataclass(frozen=True)
class SuperimposedCodewordSet:
    """All sums of one codeword per colliding user, as an N x K array."""

    codewords: np.ndarray
    alphabet_size: int

    def __post_init__(self):
        cw = np.ascontiguousarray(self.codewords, dtype=complex)
        if cw.ndim != 2:
            raise ValidationError("codeword shape", "codewords must be N x K")
        object.__setattr__(self, "codewords", cw)
        if cw.shape[0] != self.alphabet_size:
            raise ValidationError(
                "alphabet size",
                f"declared {self.alphabet_size}, got {cw.shape[0]} codewords",
            )

    @property
    def K(self) -> int:
        return self.codewords.shape[1]


@dataclass(frozen=True)
class DistanceReport:
    """Minimum Euclidean / product distances of a superimposed set.

    ``pair_count`` is the number of unordered pairs differing in every RE
    (the pairs eligible for the product distance); when it is zero,
    ``min_product`` is reported as 0.
    """

    min_euclidean: float
    min_product: float
    pair_count: int


def superimpose_group(points: np.ndarray) -> SuperimposedCodewordSet:
    """Single-RE sums of a d_f x M point table, first row varying fastest."""
    points = np.asarray(points, dtype=complex)
    d_f, M = points.shape
    # index i encodes symbols (m_1 .. m_df) with m_1 fastest
    idx = np.arange(M**d_f)
    acc = np.zeros(M**d_f, dtype=complex)
    for v in range(d_f):
        digits = (idx // (M**v)) % M
        acc += points[v, digits]
    return SuperimposedCodewordSet(acc[:, None], M**d_f)


def superimpose_codebooks(codebooks) -> SuperimposedCodewordSet:
    """Full M^L x K sums of one codeword per user, user 1 varying fastest."""
    mats = [np.asarray(cb.columns, dtype=complex) for cb in codebooks]
    K = mats[0].shape[0]
    M = mats[0].shape[1]
    L = len(mats)
    idx = np.arange(M**L)
    acc = np.zeros((M**L, K), dtype=complex)
    for l in range(L):
        digits = (idx // (M**l)) % M
        acc += mats[l][:, digits].T
    return SuperimposedCodewordSet(acc, M**L)


def pep_bound(ci, cj, spec: channels.ChannelSpec, es_over_n0: float) -> float:
    """Chernoff/MGF upper bound on the pairwise error probability.

    Returns (1/2) * prod_k M_gamma(-|ci_k - cj_k|^2 / 4). Result in (0, 1/2].
    """
    ci = np.asarray(ci, dtype=complex)
    cj = np.asarray(cj, dtype=complex)
    if ci.shape != cj.shape or ci.ndim != 1:
        raise ValidationError("codeword shape", "ci and cj must be equal-length vectors")
    sq = np.abs(ci - cj) ** 2
    if not np.any(sq > 0):
        raise ValidationError("degenerate pair", "ci and cj must differ")
    return 0.5 * float(np.prod(channels.pair_factor(spec, sq, es_over_n0)))


def _pair_factor_product(cw: np.ndarray, spec, es_over_n0, rows, cols) -> np.ndarray:
    """prod_k M_gamma(-|.|^2/4) for codeword index pairs (rows x cols)."""
    gb = channels.gamma_bar(spec, es_over_n0)
    out = np.ones((len(rows), len(cols)))
    for k in range(cw.shape[1]):
        d2 = np.abs(cw[rows, k][:, None] - cw[cols, k][None, :]) ** 2
        out *= channels.mgf_neg(spec, d2 / 4.0, gb)
    return out


def ser_union_bound(sup: SuperimposedCodewordSet, spec: channels.ChannelSpec,
                    es_over_n0: float) -> float:
    """Union bound on the average SER over the superimposed alphabet.

    (1/N) * sum_i sum_{j != i} pep_bound(c_i, c_j); not clamped to 1.
    """
    cw = sup.codewords
    N = sup.alphabet_size
    if N == 0:
        raise ValidationError("empty set", "superimposed set must be non-empty")
    if N == 1:
        return 0.0
    _require_distinct(cw)
    idx = np.arange(N)
    if N <= _FULL_LOOP_LIMIT:
        prod = _pair_factor_product(cw, spec, es_over_n0, idx, idx)
        np.fill_diagonal(prod, 0.0)
        total = float(prod.sum())
    else:
        # symmetric pairs: each unordered pair counted once, doubled
        total = 0.0
        block = _FULL_LOOP_LIMIT
        for start in range(0, N, block):
            rows = idx[start:start + block]
            cols = idx[start:]
            prod = _pair_factor_product(cw, spec, es_over_n0, rows, cols)
            # zero the lower triangle incl. diagonal of the leading square
            sq = prod[:, : len(rows)]
            sq[np.tril_indices(len(rows))] = 0.0
            total += 2.0 * float(prod.sum())
    return 0.5 * total / N


def _require_distinct(cw: np.ndarray) -> None:
    N = cw.shape[0]
    view = np.ascontiguousarray(cw).view([("", cw.dtype)] * cw.shape[1])
    if len(np.unique(view)) != N:
        raise ValidationError("duplicate codewords", "superimposed codewords must be distinct")


def distance_report(sup: SuperimposedCodewordSet) -> DistanceReport:
    """Minimum Euclidean and product (squared) distances over all pairs."""
    cw = sup.codewords
    N, K = cw.shape
    if N < 2:
        raise ValidationError("set size", "need at least 2 codewords")
    iu, ju = np.triu_indices(N, k=1)
    sq = np.empty((len(iu), K))
    for k in range(K):
        sq[:, k] = np.abs(cw[iu, k] - cw[ju, k]) ** 2
    min_euclidean = float(sq.sum(axis=1).min())
    full_diff = (sq > ZERO_SQ_DIST).all(axis=1)
    pair_count = int(full_diff.sum())
    min_product = float(sq[full_diff].prod(axis=1).min()) if pair_count else 0.0
    return DistanceReport(min_euclidean, min_product, pair_count)
