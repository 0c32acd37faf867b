"""Upper bounds on minimum distance for quasi-cyclic codes.

Two routes are provided: the permanent bound evaluated on the circulant
weight matrix (with an optional recursive refinement), and a nearest
nonzero codeword search driven by the belief-propagation decoder.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numba
import numpy as np

from .decoder import LLR_CLIP, SumProductDecoder
from .errors import BudgetExceededError
from .gf2 import SparseBitMatrix

MAX_PERMANENT_DIM = 20


@numba.njit(cache=True)
def _ryser_int64(M):
    m = M.shape[0]
    sums = np.zeros(m, dtype=np.int64)
    total = 0
    prev = 0
    for k in range(1, 1 << m):
        gray = k ^ (k >> 1)
        diff = gray ^ prev
        j = 0
        while not (diff >> j) & 1:
            j += 1
        if gray & (1 << j):
            for i in range(m):
                sums[i] += M[i, j]
        else:
            for i in range(m):
                sums[i] -= M[i, j]
        prev = gray
        p = 1
        for i in range(m):
            p *= sums[i]
            if p == 0:
                break
        bits = 0
        g = gray
        while g:
            bits += g & 1
            g >>= 1
        if (m - bits) % 2:
            total -= p
        else:
            total += p
    return total


def _ryser_pyint(M) -> int:
    m = len(M)
    sums = [0] * m
    total = 0
    prev = 0
    for k in range(1, 1 << m):
        gray = k ^ (k >> 1)
        diff = gray ^ prev
        j = diff.bit_length() - 1
        step = 1 if gray & diff else -1
        for i in range(m):
            sums[i] += step * M[i][j]
        prev = gray
        p = 1
        for s in sums:
            p *= s
            if not p:
                break
        total += -p if (m - bin(gray).count("1")) % 2 else p
    return total


def permanent(M) -> int:
    """Exact permanent of a square non-negative integer matrix (Ryser's formula)."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {M.shape}")
    m = M.shape[0]
    if m == 0:
        return 1
    if m > MAX_PERMANENT_DIM:
        raise BudgetExceededError(f"permanent of a {m}x{m} matrix exceeds the {MAX_PERMANENT_DIM} limit")
    if np.any(M < 0):
        raise ValueError("permanent expects non-negative entries")
    if not M.any(axis=1).all() or not M.any(axis=0).all():
        return 0
    # |partial sums| <= row sums, so int64 is exact while 2**m * prod(row sums) fits
    log_bound = m + float(np.sum(np.log2(np.maximum(M.sum(axis=1), 1))))
    if log_bound < 62:
        return int(_ryser_int64(M))
    return _ryser_pyint(M.tolist())


def psi(A, S) -> int:
    """Sum of the permanents of ``A`` restricted to each ``rows``-subset of columns ``S``.

    ``S`` holds 0-based column indices and must have ``A.shape[0] + 1`` entries.
    """
    A = np.asarray(A, dtype=np.int64)
    S = tuple(int(s) for s in S)
    R = A.shape[0]
    if len(S) != R + 1 or len(set(S)) != len(S):
        raise ValueError(f"S must contain {R + 1} distinct columns, got {S}")
    if min(S) < 0 or max(S) >= A.shape[1]:
        raise ValueError(f"column index out of range in {S}")
    return sum(permanent(A[:, list(sub)]) for sub in itertools.combinations(S, R))


def _augmented(A, S) -> np.ndarray:
    # psi(S) is the permanent of A[:, S] with a row of ones appended
    sub = A[:, list(S)]
    return np.vstack([sub, np.ones((1, len(S)), dtype=np.int64)])


@numba.njit(cache=True)
def _sparse_perm(rows_nz, rows_val, rows_len, m):
    # depth-first permanent over the nonzero pattern; row m-1 is the ones row
    used = np.zeros(m, dtype=np.bool_)
    choice = np.zeros(m, dtype=np.int64)
    prod = np.ones(m + 1, dtype=np.int64)
    total = 0
    i = 0
    choice[0] = -1
    while i >= 0:
        if i == m:
            total += prod[m]
            i -= 1
            used[rows_nz[i, choice[i]]] = False
            continue
        k = choice[i] + 1
        while k < rows_len[i] and used[rows_nz[i, k]]:
            k += 1
        if k >= rows_len[i]:
            choice[i] = -1
            i -= 1
            if i >= 0:
                used[rows_nz[i, choice[i]]] = False
            continue
        choice[i] = k
        used[rows_nz[i, k]] = True
        prod[i + 1] = prod[i] * rows_val[i, k]
        i += 1
        if i < m:
            choice[i] = -1
    return total


@numba.njit(cache=True)
def _min_psi_search(A, cover_masks, suffix_cover, full_mask):
    # Lexicographic DFS over column sets of size R+1. Sets leaving some row
    # uncovered have psi = 0 and are cut as early as possible.
    R, C = A.shape
    k = R + 1
    best = -1
    best_set = np.full(k, -1, dtype=np.int64)
    chosen = np.zeros(k, dtype=np.int64)
    covered = np.zeros(k + 1, dtype=np.int64)
    rows_nz = np.zeros((k, k), dtype=np.int64)
    rows_val = np.zeros((k, k), dtype=np.int64)
    rows_len = np.zeros(k, dtype=np.int64)
    depth = 0
    chosen[0] = -1
    while depth >= 0:
        c = chosen[depth] + 1
        need = k - depth
        advanced = False
        while c <= C - need:
            cov = covered[depth] | cover_masks[c]
            if (cov | suffix_cover[c + 1]) == full_mask:
                chosen[depth] = c
                covered[depth + 1] = cov
                advanced = True
                break
            c += 1
        if not advanced:
            depth -= 1
            continue
        if depth + 1 < k:
            depth += 1
            chosen[depth] = chosen[depth - 1]
            continue
        # leaf: evaluate psi as the permanent of A[:, chosen] plus a ones row
        for i in range(R):
            cnt = 0
            for j in range(k):
                v = A[i, chosen[j]]
                if v != 0:
                    rows_nz[i, cnt] = j
                    rows_val[i, cnt] = v
                    cnt += 1
            rows_len[i] = cnt
        for j in range(k):
            rows_nz[R, j] = j
            rows_val[R, j] = 1
        rows_len[R] = k
        p = _sparse_perm(rows_nz, rows_val, rows_len, k)
        if p > 0 and (best < 0 or p < best):
            best = p
            for j in range(k):
                best_set[j] = chosen[j]
    return best, best_set


@dataclass
class BoundResult:
    """Outcome of a permanent-bound computation.

    ``bound`` is None when every admissible column set gives zero. ``S`` uses
    0-based column indices of the matrix the bound was evaluated on.
    """

    bound: int | None
    S: tuple[int, ...] | None
    improved_by_recursion: bool = False
    method: str = "permanent"
    elapsed: float = 0.0
    trace: list = field(default_factory=list, repr=False)

    @property
    def defined(self) -> bool:
        return self.bound is not None

    def to_dict(self) -> dict:
        return {"bound": self.bound, "S": list(self.S) if self.S is not None else None,
                "method": self.method, "elapsed": self.elapsed,
                "improved_by_recursion": self.improved_by_recursion}


def _check_weight_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("weight matrix must be 2-D")
    if np.any(A < 0):
        raise ValueError("weight matrix entries must be non-negative")
    R, C = A.shape
    if C < R + 1:
        raise ValueError(f"need at least rows+1 columns, got {R}x{C}")
    if R + 1 > 62:
        raise BudgetExceededError(f"{R} rows is beyond the supported search size")
    return A


def dmin_upper_bound(A) -> BoundResult:
    """Minimum of ``psi(S)`` over column sets ``|S| = rows + 1`` with ``psi(S) != 0``.

    Ties go to the lexicographically smallest ``S``.
    """
    t0 = time.perf_counter()
    A = _check_weight_matrix(A)
    R, C = A.shape
    cover = np.zeros(C, dtype=np.int64)
    for j in range(C):
        for i in np.flatnonzero(A[:, j]):
            cover[j] |= 1 << int(i)
    suffix = np.zeros(C + 1, dtype=np.int64)
    for j in range(C - 1, -1, -1):
        suffix[j] = suffix[j + 1] | cover[j]
    full = (1 << R) - 1
    best, best_set = _min_psi_search(A, cover, suffix, full)
    elapsed = time.perf_counter() - t0
    if best < 0:
        return BoundResult(None, None, elapsed=elapsed)
    return BoundResult(int(best), tuple(int(x) for x in best_set), elapsed=elapsed)


def dmin_recursive(A) -> BoundResult:
    """Permanent bound refined by recursing on zero-row column sets.

    Every ``S`` whose submatrix ``A[:, S]`` has all-zero rows gives ``psi(S) = 0``.
    Those rows are dropped and the bound is applied again to the remaining
    submatrix, recursively. The result is the minimum over the base bound and
    all recursive bounds. ``trace`` lists ``(rows, cols, psi)`` for every column
    set evaluated below the top level, with indices into ``A``.
    """
    t0 = time.perf_counter()
    A = _check_weight_matrix(A)
    base = dmin_upper_bound(A)
    trace: list = []
    memo: dict = {}
    best = base.bound
    best_S = base.S
    improved = False

    rows_all = tuple(range(A.shape[0]))
    for rows, cols, value in _recurse(A, rows_all, tuple(range(A.shape[1])), 0, memo, trace):
        if value > 0 and (best is None or value < best):
            best, best_S, improved = value, cols, True
    res = BoundResult(best, best_S, improved_by_recursion=improved, method="permanent-recursive",
                      elapsed=time.perf_counter() - t0)
    res.trace = trace
    return res


def _recurse(A, rows, cols, depth, memo, trace):
    """Yield ``(rows, S, psi)`` for nonzero evaluations on reduced submatrices."""
    sub = A[np.ix_(rows, cols)]
    R = len(rows)
    key = (rows, cols)
    if key in memo:
        return
    memo[key] = True
    for S_local in itertools.combinations(range(len(cols)), R + 1):
        block = sub[:, S_local]
        nonzero = block.any(axis=1)
        S = tuple(cols[j] for j in S_local)
        if depth > 0:
            value = permanent(_augmented(sub, S_local)) if nonzero.all() else 0
            trace.append((rows, S, value))
            if value > 0:
                yield rows, S, value
        if nonzero.all() or not nonzero.any():
            continue
        kept = tuple(r for r, keep in zip(rows, nonzero) if keep)
        yield from _recurse(A, kept, S, depth + 1, memo, trace)


@dataclass
class NncsConfig:
    """Settings for the nearest nonzero codeword search.

    ``background`` is the LLR given to every position not being forced; it
    stays moderate so the decoder can move those bits. ``bias`` is the
    magnitude of the negative LLR placed on the forced position(s).
    """

    mode: str = "single"
    bias: float = 2 * LLR_CLIP
    background: float = 2.0
    max_iters: int = 5
    budget: int = 10_000
    seed: int = 0
    jitter: float = 0.0

    def __post_init__(self):
        if self.mode not in ("single", "pair"):
            raise ValueError(f"mode must be 'single' or 'pair', got {self.mode!r}")
        if self.budget < 1 or self.max_iters < 1:
            raise ValueError("budget and max_iters must be positive")


@numba.njit(cache=True, nogil=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@numba.njit(cache=True, nogil=True)
def _osd(packed_rows, n, order, hard, forced, osd_order):
    # Reduce H to echelon form taking pivots in `order` (least reliable
    # first), then re-encode from the remaining (most reliable) positions.
    # Returns the lowest-weight codeword among the order-0 word and, if
    # osd_order >= 1, every single flip of a non-forced information bit.
    r = packed_rows.shape[0]
    words = packed_rows.shape[1]
    M = packed_rows.copy()
    is_pivot = np.zeros(n, dtype=np.bool_)
    pivot_col = np.empty(r, dtype=np.int64)
    rank = 0
    for t in range(n):
        if rank == r:
            break
        col = order[t]
        w = col >> 6
        bit = np.uint64(1) << np.uint64(col & 63)
        p = -1
        for i in range(rank, r):
            if M[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != rank:
            for k in range(words):
                tmp = M[p, k]
                M[p, k] = M[rank, k]
                M[rank, k] = tmp
        for i in range(r):
            if i != rank and (M[i, w] & bit):
                for k in range(words):
                    M[i, k] ^= M[rank, k]
        is_pivot[col] = True
        pivot_col[rank] = col
        rank += 1
    rwords = (rank + 63) // 64
    # column j of the reduced matrix over the pivot rows, packed
    colbits = np.zeros((n, max(rwords, 1)), dtype=np.uint64)
    for i in range(rank):
        wi = i >> 6
        bi = np.uint64(1) << np.uint64(i & 63)
        for k in range(words):
            x = M[i, k]
            while x:
                low = x & (~x + np.uint64(1))
                j = k * 64 + _popcount64(low - np.uint64(1))
                colbits[j, wi] |= bi
                x ^= low
    u = hard.copy()
    for j in range(n):
        if is_pivot[j]:
            u[j] = 0
    for j in range(forced.shape[0]):
        u[forced[j]] = 1
    q0 = np.zeros(max(rwords, 1), dtype=np.uint64)
    uw = 0
    for j in range(n):
        if u[j] and not is_pivot[j]:
            uw += 1
            for k in range(rwords):
                q0[k] ^= colbits[j, k]
    best_w = uw
    for k in range(rwords):
        best_w += _popcount64(q0[k])
    best_flip = -1
    if osd_order >= 1:
        for j in range(n):
            if is_pivot[j]:
                continue
            skip = False
            for f in range(forced.shape[0]):
                if forced[f] == j:
                    skip = True
            if skip:
                continue
            w = uw + (-1 if u[j] else 1)
            for k in range(rwords):
                w += _popcount64(q0[k] ^ colbits[j, k])
            if w > 0 and (w < best_w or best_w == 0):
                best_w = w
                best_flip = j
    if best_flip >= 0:
        u[best_flip] ^= 1
        for k in range(rwords):
            q0[k] ^= colbits[best_flip, k]
    word = u.copy()
    for i in range(rank):
        word[pivot_col[i]] = (q0[i >> 6] >> np.uint64(i & 63)) & np.uint64(1)
    return word


@dataclass
class NncsResult:
    weight: int | None
    codeword: np.ndarray | None
    decodes: int
    log: list = field(default_factory=list, repr=False)
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.weight is not None

    def to_dict(self) -> dict:
        return {"bound": self.weight, "method": "nncs", "elapsed": self.elapsed,
                "decodes": self.decodes,
                "codeword": (np.flatnonzero(self.codeword).tolist()
                             if self.codeword is not None else None)}


def _trial_positions(n: int, beta: int, mode: str):
    reps = range(min(beta, n))
    if mode == "single":
        for i in reps:
            yield (i,)
    else:
        # pairs (i, j) with i < beta and j > i cover every pair up to the shift
        # automorphism; nearest partners first
        for d in range(1, n):
            for i in reps:
                if i + d < n:
                    yield (i, i + d)


def nncs_search(H: SparseBitMatrix, config: NncsConfig | None = None,
                beta: int = 1, target: int | None = None) -> NncsResult:
    """Search for low-weight nonzero codewords by biased decoding.

    For each trial the chosen position(s) get a strong "1" LLR and all other
    positions a moderate "0" LLR. A short sum-product run spreads that
    evidence; if it converges to a nonzero codeword that codeword is taken,
    otherwise its posterior reliabilities drive an order-0/1 ordered
    statistics re-encoding that always yields a codeword containing the
    forced positions. Positions are tried only for ``0 <= i < beta`` (one per
    automorphism class). The search stops after ``config.budget`` decodes or
    once a codeword of weight ``<= target`` is found.
    """
    cfg = config or NncsConfig()
    t0 = time.perf_counter()
    n = H.n_cols
    dec = SumProductDecoder(H, cfg.max_iters)
    packed = H.pack()
    rng = np.random.default_rng(cfg.seed)
    best_w, best_c = None, None
    log = []
    decodes = 0
    for pos in _trial_positions(n, beta, cfg.mode):
        if decodes >= cfg.budget:
            break
        llr = np.full(n, cfg.background)
        if cfg.jitter > 0:
            llr += rng.uniform(-cfg.jitter, cfg.jitter, n)
        forced = np.array(pos, dtype=np.int64)
        llr[forced] = -cfg.bias
        res = dec.decode(llr)
        decodes += 1
        if res.converged and res.word.any():
            word = res.word
        else:
            post = res.posterior.copy()
            post[forced] = -np.inf
            order = np.argsort(np.abs(post), kind="stable")
            hard = (post < 0).astype(np.uint8)
            word = _osd(packed, n, order.astype(np.int64), hard, forced, 1)
        if H.syndrome(word).any():
            raise AssertionError("NNCS produced a non-codeword")
        w = int(word.sum())
        log.append((pos, w))
        if w > 0 and (best_w is None or w < best_w):
            best_w, best_c = w, word.copy()
            if target is not None and best_w <= target:
                break
    return NncsResult(best_w, best_c, decodes, log, time.perf_counter() - t0)
