"""Flooding sum-product (belief propagation) decoding in the LLR domain.

Positive LLR means bit 0. Messages are clipped to ``+-LLR_CLIP`` so that
``tanh``/``atanh`` never produce infinities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .gf2 import SparseBitMatrix

LLR_CLIP = 38.0
_P_MAX = float(np.nextafter(1.0, 0.0))


@dataclass
class DecodeResult:
    word: np.ndarray
    converged: bool
    iterations: int
    syndrome_weight: int
    trace: np.ndarray | None = None
    posterior: np.ndarray | None = None


@numba.njit(cache=True, nogil=True)
def _decode_one(llr, chk_ptr, edge_var, var_ptr, var_edge, max_iters, clip,
                v2c, c2v, total, bits, scratch, trace):
    n = llr.shape[0]
    r = chk_ptr.shape[0] - 1
    for e in range(edge_var.shape[0]):
        x = llr[edge_var[e]]
        if x > clip:
            x = clip
        elif x < -clip:
            x = -clip
        v2c[e] = x
    it = 0
    sw = 0
    while it < max_iters:
        it += 1
        # check nodes: leave-one-out tanh products via prefix/suffix sweeps
        for c in range(r):
            a = chk_ptr[c]
            b = chk_ptr[c + 1]
            d = b - a
            acc = 1.0
            for k in range(d):
                x = v2c[a + k]
                if x >= 0.0:
                    q = math.exp(-x)
                    t = (1.0 - q) / (1.0 + q)
                else:
                    q = math.exp(x)
                    t = (q - 1.0) / (1.0 + q)
                scratch[d + k] = t
                scratch[k] = acc
                acc *= t
            acc = 1.0
            for k in range(d - 1, -1, -1):
                e = a + k
                p = scratch[k] * acc
                acc *= scratch[d + k]
                if p > _P_MAX:
                    p = _P_MAX
                elif p < -_P_MAX:
                    p = -_P_MAX
                m = math.log((1.0 + p) / (1.0 - p))
                if m > clip:
                    m = clip
                elif m < -clip:
                    m = -clip
                c2v[e] = m
        # variable nodes
        for v in range(n):
            s = llr[v]
            for k in range(var_ptr[v], var_ptr[v + 1]):
                s += c2v[var_edge[k]]
            total[v] = s
            bits[v] = 1 if s < 0.0 else 0
            for k in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[k]
                m = s - c2v[e]
                if m > clip:
                    m = clip
                elif m < -clip:
                    m = -clip
                v2c[e] = m
        sw = 0
        for c in range(r):
            par = 0
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= bits[edge_var[e]]
            sw += par
        if trace.shape[0] > 0:
            trace[it - 1] = sw
        if sw == 0:
            break
    if max_iters < 1:
        for v in range(n):
            bits[v] = 1 if llr[v] < 0.0 else 0
    return it, sw


@numba.njit(cache=True, nogil=True)
def _decode_batch(llrs, chk_ptr, edge_var, var_ptr, var_edge, max_iters, clip,
                  words, iters, sweights):
    n = llrs.shape[1]
    E = edge_var.shape[0]
    v2c = np.empty(E)
    c2v = np.empty(E)
    total = np.empty(n)
    maxdeg = 1
    for c in range(chk_ptr.shape[0] - 1):
        d = chk_ptr[c + 1] - chk_ptr[c]
        if d > maxdeg:
            maxdeg = d
    scratch = np.empty(2 * maxdeg)
    trace = np.empty(0, dtype=np.int64)
    for f in range(llrs.shape[0]):
        it, sw = _decode_one(llrs[f], chk_ptr, edge_var, var_ptr, var_edge, max_iters,
                             clip, v2c, c2v, total, words[f], scratch, trace)
        iters[f] = it
        sweights[f] = sw


class SumProductDecoder:
    """Reusable decoder bound to one parity-check matrix.

    The matrix is only read; one instance may be shared between threads as
    long as each call gets its own output buffers (which ``decode`` and
    ``decode_batch`` allocate).
    """

    def __init__(self, H: SparseBitMatrix, max_iters: int = 80, clip: float = LLR_CLIP):
        if max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        self.H = H
        self.max_iters = max_iters
        self.clip = float(clip)
        self.n = H.n_cols
        self.chk_ptr = H.indptr
        self.edge_var = H.indices
        # edges grouped by variable, pointing into the check-ordered edge list
        order = np.argsort(self.edge_var, kind="stable")
        self.var_edge = order.astype(np.int64)
        self.var_ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.edge_var, minlength=self.n), out=self.var_ptr[1:])
        self._max_deg = int(max(1, H.row_weights().max(initial=1)))

    def decode(self, llr, max_iters: int | None = None, trace: bool = False) -> DecodeResult:
        llr = np.ascontiguousarray(llr, dtype=np.float64)
        if llr.shape != (self.n,):
            raise ValueError(f"expected {self.n} LLRs, got shape {llr.shape}")
        if not np.all(np.isfinite(llr)):
            raise ValueError("channel LLRs must be finite")
        iters = self.max_iters if max_iters is None else max_iters
        E = self.edge_var.size
        bits = np.zeros(self.n, dtype=np.uint8)
        post = llr.copy()
        tr = np.zeros(iters if trace else 0, dtype=np.int64)
        it, sw = _decode_one(llr, self.chk_ptr, self.edge_var, self.var_ptr, self.var_edge,
                             iters, self.clip, np.empty(E), np.empty(E), post,
                             bits, np.empty(2 * self._max_deg), tr)
        return DecodeResult(bits, sw == 0, int(it), int(sw), tr[:it] if trace else None, post)

    def decode_batch(self, llrs, max_iters: int | None = None):
        """Decode frames row by row; returns ``(words, iterations, syndrome_weights)``."""
        llrs = np.ascontiguousarray(llrs, dtype=np.float64)
        if llrs.ndim != 2 or llrs.shape[1] != self.n:
            raise ValueError(f"expected (frames, {self.n}) LLRs, got {llrs.shape}")
        F = llrs.shape[0]
        words = np.zeros((F, self.n), dtype=np.uint8)
        iters = np.zeros(F, dtype=np.int64)
        sws = np.zeros(F, dtype=np.int64)
        _decode_batch(llrs, self.chk_ptr, self.edge_var, self.var_ptr, self.var_edge,
                      self.max_iters if max_iters is None else max_iters, self.clip,
                      words, iters, sws)
        return words, iters, sws


def bp_decode(H: SparseBitMatrix, channel_llrs, max_iters: int) -> DecodeResult:
    """One-shot sum-product decode; stops early once the syndrome is zero."""
    return SumProductDecoder(H, max_iters).decode(channel_llrs)


def syndrome_weight(H: SparseBitMatrix, word) -> int:
    return int(H.syndrome(word).sum())
