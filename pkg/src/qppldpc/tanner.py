"""Regular Tanner graphs induced by a QPP, with girth and automorphism tools.

Edge ``i`` joins variable node ``i // lam`` to check node ``f(i) // rho``.
Node ids used by the BFS kernels put variables first (``0..n-1``) followed
by checks (``n..n+r-1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import gcd, lcm

import numba
import numpy as np

from .qpp import Qpp

DEFAULT_GIRTH_CAP = 16


@dataclass(frozen=True)
class CodeProfile:
    lam: int
    rho: int
    n: int
    r: int
    N: int

    def __post_init__(self):
        if self.lam < 1 or self.rho < 1:
            raise ValueError(f"degrees must be positive, got lam={self.lam}, rho={self.rho}")
        if self.N != self.n * self.lam or self.N != self.r * self.rho:
            raise ValueError(
                f"inconsistent profile: N={self.N}, n*lam={self.n * self.lam}, "
                f"r*rho={self.r * self.rho}"
            )

    @classmethod
    def from_degrees(cls, lam: int, rho: int, n: int) -> "CodeProfile":
        N = n * lam
        if N % rho:
            raise ValueError(f"rho={rho} does not divide N={N}")
        return cls(lam, rho, n, N // rho, N)

    @property
    def alpha(self) -> int:
        return lcm(self.lam, self.rho)


@dataclass(frozen=True)
class AutomorphismParams:
    """Shift parameters of the graph automorphism ``v -> v + beta``.

    ``check_shift`` is the induced check-node shift ``f(beta*lam) / rho``;
    it is a multiple of ``gamma`` and generates the same residue classes
    mod ``gamma``.
    """

    u: int
    t: int
    beta: int
    gamma: int
    check_shift: int


@dataclass(eq=False)
class TannerGraph:
    profile: CodeProfile
    f: Qpp
    var_checks: np.ndarray  # (n, lam) check index of each variable edge
    check_vars: np.ndarray  # (r, rho) variable index of each check edge
    check_edges: np.ndarray  # (r, rho) edge id (left label) of each check edge
    parallel_edges: list[tuple[int, int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def r(self) -> int:
        return self.profile.r

    @property
    def has_parallel_edges(self) -> bool:
        return bool(self.parallel_edges)

    def variable_degrees(self) -> np.ndarray:
        return np.full(self.n, self.profile.lam)

    def check_degrees(self) -> np.ndarray:
        return np.bincount(self.var_checks.ravel(), minlength=self.r)

    def edges(self) -> np.ndarray:
        """``(N, 2)`` array of (variable, check) pairs indexed by left label."""
        lam = self.profile.lam
        return np.column_stack(
            [np.arange(self.profile.N) // lam, self.var_checks.ravel()]
        )


def build_graph(profile: CodeProfile, f: Qpp) -> TannerGraph:
    """Build the ``(lam, rho)``-regular multigraph defined by ``f``.

    Parallel edges are kept and listed in ``graph.parallel_edges`` as
    ``(variable, check)`` pairs, one entry per surplus edge.
    """
    if f.N != profile.N:
        raise ValueError(f"polynomial modulus {f.N} != profile edge count {profile.N}")
    lam, rho = profile.lam, profile.rho
    fx = f.table()
    var_checks = (fx // rho).reshape(profile.n, lam)
    g = f.invert()
    check_edges = g.reshape(profile.r, rho)
    check_vars = check_edges // lam

    parallel = []
    s = np.sort(var_checks, axis=1)
    dup_rows, dup_cols = np.nonzero(s[:, 1:] == s[:, :-1])
    for v, k in zip(dup_rows.tolist(), dup_cols.tolist()):
        parallel.append((v, int(s[v, k])))
    return TannerGraph(profile, f, var_checks, check_vars, check_edges, parallel)


def automorphism_params(f: Qpp, profile: CodeProfile) -> AutomorphismParams:
    """Compute ``u, t, beta, gamma`` for the variable-node shift automorphism.

    ``beta = m*t`` for the smallest ``m >= 1`` such that ``rho`` divides
    ``f(m*t*lam)``, i.e. the edge-label shift of ``m*t`` variable nodes.
    """
    N, lam, rho, n = profile.N, profile.lam, profile.rho, profile.n
    u = gcd(2 * f.f2, N)
    t = lcm(N // u, lam) // lam
    beta = None
    for m in range(1, n // t + 1):
        if f(m * t * lam) % rho == 0:
            beta = m * t
            break
    if beta is None:
        raise AssertionError(f"no automorphism shift found for {f} within m <= {n // t}")
    if (beta * lam) % rho:
        raise ValueError(f"beta*lam={beta * lam} is not a multiple of rho={rho}")
    gamma = beta * lam // rho
    check_shift = (f(beta * lam) // rho) % profile.r
    return AutomorphismParams(u=u, t=t, beta=beta, gamma=gamma, check_shift=check_shift)


def _beta_only(f: Qpp, profile: CodeProfile) -> int:
    N, lam, rho = profile.N, profile.lam, profile.rho
    t = lcm(N // gcd(2 * f.f2, N), lam) // lam
    m = 1
    while f(m * t * lam) % rho:
        m += 1
    return m * t


@numba.njit(cache=True, nogil=True)
def _local_girth(root, n, lam, rho, var_checks, check_vars, check_edges,
                 max_len, dist, branch, pedge, queue):
    # Shortest cycle through `root`: a non-tree edge joining two different
    # root branches closes a simple cycle of length d(a) + d(b) + 1.
    # Returns (length, count) with length 0 when no cycle <= max_len.
    head = 0
    tail = 1
    queue[0] = root
    dist[root] = 0
    branch[root] = -1
    pedge[root] = -1
    best = 0
    count = 0
    while head < tail:
        a = queue[head]
        head += 1
        d = dist[a]
        if best > 0 and 2 * d + 2 > best:
            break
        if 2 * d + 2 > max_len:
            break
        if a < n:
            deg = lam
        else:
            deg = rho
        for k in range(deg):
            if a < n:
                e = a * lam + k
                b = n + var_checks[a, k]
            else:
                e = check_edges[a - n, k]
                b = check_vars[a - n, k]
            if e == pedge[a]:
                continue
            if dist[b] < 0:
                dist[b] = d + 1
                pedge[b] = e
                if a == root:
                    branch[b] = e
                else:
                    branch[b] = branch[a]
                queue[tail] = b
                tail += 1
            elif dist[b] > d and branch[b] != branch[a]:
                length = d + dist[b] + 1
                if best == 0 or length < best:
                    best = length
                    count = 1
                elif length == best:
                    count += 1
    for i in range(tail):
        dist[queue[i]] = -1
    return best, count


@numba.njit(cache=True, nogil=True)
def _girth_over(roots, n, r, lam, rho, var_checks, check_vars, check_edges, max_len):
    dist = np.full(n + r, -1, dtype=np.int64)
    branch = np.empty(n + r, dtype=np.int64)
    pedge = np.empty(n + r, dtype=np.int64)
    queue = np.empty(n + r, dtype=np.int64)
    best = 0
    total = 0
    cap = max_len
    for i in range(roots.shape[0]):
        g, c = _local_girth(roots[i], n, lam, rho, var_checks, check_vars,
                            check_edges, cap, dist, branch, pedge, queue)
        if g == 0:
            continue
        if best == 0 or g < best:
            best = g
            total = c
            cap = g
        elif g == best:
            total += c
    return best, total


def _kernel_args(graph: TannerGraph):
    p = graph.profile
    return (p.n, p.r, p.lam, p.rho,
            np.ascontiguousarray(graph.var_checks, dtype=np.int64),
            np.ascontiguousarray(graph.check_vars, dtype=np.int64),
            np.ascontiguousarray(graph.check_edges, dtype=np.int64))


def local_girth(graph: TannerGraph, node: int, max_len: int | None = None) -> float:
    """Length of the shortest cycle through ``node`` (``math.inf`` if none).

    ``node`` indexes variables first then checks (``n + c`` for check ``c``).
    With ``max_len`` set, cycles longer than it are not searched for.
    """
    n, r, lam, rho, vc, cv, ce = _kernel_args(graph)
    if not 0 <= node < n + r:
        raise ValueError(f"node {node} out of range")
    cap = max_len if max_len is not None else 2 * (n + r)
    dist = np.full(n + r, -1, dtype=np.int64)
    scratch = [np.empty(n + r, dtype=np.int64) for _ in range(3)]
    g, _ = _local_girth(node, n, lam, rho, vc, cv, ce, cap, dist, *scratch)
    return math.inf if g == 0 else int(g)


def girth_stats(graph: TannerGraph, mode: str = "pruned",
                max_len: int | None = DEFAULT_GIRTH_CAP,
                beta: int | None = None) -> tuple[float, int]:
    """Girth and the number of shortest cycles seen from the BFS roots.

    The count is summed over roots and is only meaningful for ranking
    candidates that share the same root set.
    """
    n, r, lam, rho, vc, cv, ce = _kernel_args(graph)
    if mode == "pruned":
        if beta is None:
            beta = _beta_only(graph.f, graph.profile)
        roots = np.arange(beta, dtype=np.int64)
    elif mode == "exhaustive":
        roots = np.arange(n, dtype=np.int64)
    else:
        raise ValueError(f"unknown girth mode {mode!r}")
    cap = max_len if max_len is not None else 2 * (n + r)
    g, c = _girth_over(roots, n, r, lam, rho, vc, cv, ce, cap)
    return (math.inf if g == 0 else int(g)), int(c)


def girth(graph: TannerGraph, mode: str = "pruned",
          max_len: int | None = DEFAULT_GIRTH_CAP) -> float:
    """Girth of the Tanner graph.

    ``pruned`` runs BFS only from one variable node per automorphism class
    (``v_0 .. v_{beta-1}``); ``exhaustive`` runs it from every variable node.
    Every cycle visits a variable node, so both give the same answer.
    Returns 2 when parallel edges exist and ``math.inf`` if no cycle of
    length ``<= max_len`` exists (pass ``max_len=None`` for no cap).
    """
    return girth_stats(graph, mode, max_len)[0]


def canonical_f1_range(f2: int, lam: int, rho: int) -> int:
    """Exclusive upper bound ``2*f2*lcm(lam, rho)`` for non-redundant ``f1``."""
    if f2 < 1:
        raise ValueError(f"f2 must be >= 1, got {f2}")
    return 2 * f2 * lcm(lam, rho)


@dataclass(frozen=True)
class ShiftedQpp:
    """``offset + f1*x + f2*x**2 (mod N)``; only used to check isomorphisms."""

    N: int
    offset: int
    f1: int
    f2: int

    def table(self) -> np.ndarray:
        x = np.arange(self.N, dtype=np.int64)
        return (self.offset + self.f1 * x + self.f2 * ((x * x) % self.N)) % self.N


def isomorphic_images(f: Qpp, profile: CodeProfile, m: int) -> tuple[ShiftedQpp, Qpp]:
    """Two polynomials whose graphs are isomorphic to the graph of ``f``.

    The first adds the constant ``m*rho`` (a cyclic relabeling of the check
    nodes). The second replaces ``f1`` by ``f1 + 2*m*alpha*f2``, which is
    ``f(x + m*alpha)`` with its constant term dropped.
    """
    N = f.N
    shifted = ShiftedQpp(N, (m * profile.rho) % N, f.f1, f.f2)
    f1p = (f.f1 + 2 * m * profile.alpha * f.f2) % N
    return shifted, Qpp(N, f1p, f.f2)


def shifted_edge_set(profile: CodeProfile, table: np.ndarray) -> set[tuple[int, int]]:
    """Edge multiset (as set of pairs) for an arbitrary label map ``table``."""
    x = np.arange(profile.N)
    return set(zip((x // profile.lam).tolist(), (table // profile.rho).tolist()))
