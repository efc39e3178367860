"""Drawing ESC cluster sizes and partitions.

The fast sampler walks down from m = n, drawing the next cluster size s
with probability mu_s u_{m-s} / u_m. Conditioning on E_n is exact, so
there is no rejection loop and the cost does not depend on u_n.

All randomness comes from a caller-supplied ``numpy.random.Generator``;
:func:`make_rng` builds the one the CLI uses (Philox, counter-based).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np
from numba import njit

from escgen.distributions import ClusterSizeSpec, pmf_prefix
from escgen.errors import SamplerExhausted, UnreachableError
from escgen.renewal import RenewalTable, _trim, renewal_table

MODES = ("ondemand", "precomputed")
DEFAULT_MAX_ATTEMPTS = 10**6


def make_rng(seed: int) -> np.random.Generator:
    """Philox generator keyed by a 64-bit seed."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


@njit(cache=True)
def _fill_cdf_row(log_mu, log_u, m, out):
    """Write the running sum of mu_s u_{m-s} / u_m for s = 1..min(m, len(mu)).

    Returns the number of leading entries that carry mass; later entries
    repeat the total. Shared by both modes so they see identical floats.
    """
    w = min(m, log_mu.size)
    acc = 0.0
    eff = 0
    for s in range(1, w + 1):
        step = np.exp(log_mu[s - 1] + log_u[m - s] - log_u[m])
        nxt = acc + step
        if nxt > acc:
            eff = s
        acc = nxt
        out[s - 1] = acc
    return eff


@njit(cache=True)
def _cdf_flat(log_mu, log_u, n):
    buf = np.empty(max(min(n, log_mu.size), 1))
    widths = np.zeros(n + 1, dtype=np.int64)
    for m in range(1, n + 1):
        if np.isfinite(log_u[m]):
            widths[m] = _fill_cdf_row(log_mu, log_u, m, buf)
    offsets = np.zeros(n + 2, dtype=np.int64)
    for m in range(1, n + 1):
        offsets[m + 1] = offsets[m] + widths[m]
    flat = np.empty(offsets[n + 1])
    for m in range(1, n + 1):
        if widths[m] > 0:
            _fill_cdf_row(log_mu, log_u, m, buf)
            flat[offsets[m] : offsets[m + 1]] = buf[: widths[m]]
    return flat, offsets, widths


@njit(cache=True)
def _invert(row, lo, hi, u):
    # bisect-right for u * total over row[lo:hi]; zero-mass sizes are never chosen
    x = u * row[hi - 1]
    a, b = lo, hi
    while a < b:
        mid = (a + b) // 2
        if x < row[mid]:
            b = mid
        else:
            a = mid + 1
    return a - lo + 1


@njit(cache=True)
def _walk_precomputed(flat, offsets, widths, n, rng, out):
    m = n
    k = 0
    while m > 0:
        s = _invert(flat, offsets[m], offsets[m] + widths[m], rng.random())
        out[k] = s
        k += 1
        m -= s
    return k


@njit(cache=True)
def _walk_ondemand(log_mu, log_u, n, rng, out):
    buf = np.empty(max(min(n, log_mu.size), 1))
    m = n
    k = 0
    while m > 0:
        w = _fill_cdf_row(log_mu, log_u, m, buf)
        s = _invert(buf, 0, w, rng.random())
        out[k] = s
        k += 1
        m -= s
    return k


@dataclass(frozen=True, eq=False)
class SamplerTables:
    """Everything the fast sampler needs for one (spec, n).

    In precomputed mode the CDF rows are stored ragged in ``cum_flat``:
    row m occupies ``cum_flat[offsets[m]:offsets[m] + widths[m]]``, cut
    after the last size that still carries mass.
    """

    spec: ClusterSizeSpec
    n: int
    log_mu: np.ndarray
    renewal: RenewalTable
    mode: str
    cum_flat: np.ndarray | None = None
    offsets: np.ndarray | None = None
    widths: np.ndarray | None = None

    @property
    def log_u(self) -> np.ndarray:
        return self.renewal.log_u

    def cdf_row(self, m: int) -> np.ndarray:
        """Unnormalized CDF of the next cluster size when m observations remain."""
        if not 1 <= m <= self.n:
            raise ValueError(f"m must lie in 1..{self.n}, got {m}")
        out = np.empty(min(m, self.log_mu.size))
        _fill_cdf_row(self.log_mu, self.renewal.log_u, m, out)
        return out


@dataclass(frozen=True)
class Partition:
    """Cluster sizes plus 1-based labels for observations 1..n."""

    n: int
    sizes: tuple[int, ...]
    labels: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"sizes": list(self.sizes), "labels": list(self.labels)}


def prepare(spec: ClusterSizeSpec, n: int, mode: str = "precomputed") -> SamplerTables:
    """Compute u_0..u_n (and, in precomputed mode, every CDF row).

    Raises UnreachableError when u_n = 0.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    renewal = renewal_table(spec, n)
    if not renewal.reachable(n):
        raise UnreachableError(n)
    log_mu = _trim(pmf_prefix(spec, n))
    log_mu.setflags(write=False)
    extra = {}
    if mode == "precomputed":
        flat, offsets, widths = _cdf_flat(log_mu, renewal.log_u, n)
        extra = {"cum_flat": flat, "offsets": offsets, "widths": widths}
    return SamplerTables(spec=spec, n=n, log_mu=log_mu, renewal=renewal, mode=mode, **extra)


def sample_sizes(tables: SamplerTables, rng: np.random.Generator) -> tuple[int, ...]:
    """One draw of (S_1, ..., S_K) given E_n.

    Each step consumes exactly one uniform and inverts the CDF, so both
    modes make identical choices from the same generator state.
    """
    out = np.empty(tables.n, dtype=np.int64)
    if tables.mode == "precomputed":
        k = _walk_precomputed(tables.cum_flat, tables.offsets, tables.widths, tables.n, rng, out)
    else:
        k = _walk_ondemand(tables.log_mu, tables.renewal.log_u, tables.n, rng, out)
    sizes = tuple(out[:k].tolist())
    assert sum(sizes) == tables.n, "size sequence does not sum to n"
    return sizes


def _size_drawer(spec: ClusterSizeSpec, rng: np.random.Generator):
    if spec.kind == "shifted_poisson":
        lam = spec.lam
        return lambda: 1 + int(rng.poisson(lam))
    if spec.kind == "shifted_nb":
        r, q = spec.r, 1.0 - spec.p
        # numpy counts failures before r successes with success prob q
        return lambda: 1 + int(rng.negative_binomial(r, q))
    if spec.kind == "geometric":
        p = spec.p
        return lambda: int(rng.geometric(p))
    if spec.kind == "zipf":
        a = spec.alpha
        return lambda: int(rng.zipf(a))
    cdf = np.cumsum([float(w) for w in spec.weights]).tolist()
    last = len(cdf) - 1
    total = cdf[-1]
    return lambda: min(bisect_right(cdf, rng.random() * total), last) + 1


def sample_sizes_naive(
    spec: ClusterSizeSpec,
    n: int,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    *,
    with_attempts: bool = False,
):
    """Rejection baseline: draw i.i.d. sizes until the running sum hits n.

    An overshoot discards the whole sequence and starts over. Raises
    SamplerExhausted after ``max_attempts`` failed sequences. With
    ``with_attempts=True`` returns ``(sizes, attempts)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be >= 1, got {max_attempts}")
    draw = _size_drawer(spec, rng)
    for attempt in range(1, max_attempts + 1):
        sizes = []
        total = 0
        while total < n:
            s = draw()
            sizes.append(s)
            total += s
        if total == n:
            return (tuple(sizes), attempt) if with_attempts else tuple(sizes)
    raise SamplerExhausted(max_attempts)


def assemble_partition(sizes, rng: np.random.Generator) -> Partition:
    """Shuffle the block vector (1 x S_1, 2 x S_2, ...) into observation labels."""
    sizes = tuple(int(s) for s in sizes)
    if not sizes or min(sizes) < 1:
        raise ValueError(f"sizes must be a nonempty sequence of positive integers, got {sizes}")
    block = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    rng.shuffle(block)
    return Partition(n=int(block.size), sizes=sizes, labels=tuple(block.tolist()))


def expected_attempts(tables: SamplerTables) -> float:
    """Mean number of rejection attempts per accepted draw, 1 / u_n."""
    return math.exp(-tables.log_u[tables.n])
