"""Law of the number of clusters K_n given E_n.

Pr[K_n = k | E_n] = w(n, k) / u_n where w(m, k) = Pr[S_1 + ... + S_k = m]
is the ordinary Bell polynomial of mu. The DP fills w column by column:

    w(m, k) = sum_{s=1}^{m-k+1} mu_s w(m-s, k-1),   w(0, 0) = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from escgen.distributions import ClusterSizeSpec, pmf_prefix
from escgen.errors import CapabilityError, UnreachableError
from escgen.renewal import RenewalTable, _geometric_k_terms, _trim, closed_form_terms

STREAMING_THRESHOLD = 5000
_ROW_BLOCK = 64


@dataclass(frozen=True, eq=False)
class CompositionTable:
    """log w(m, k) for 0 <= k <= m <= n.

    ``log_w`` is the full (n+1, n+1) matrix, or None when the table was
    built in streaming mode; ``last_row`` always holds row n.
    """

    spec: ClusterSizeSpec
    n: int
    log_w: np.ndarray | None
    last_row: np.ndarray

    def row(self, m: int) -> np.ndarray:
        if not 0 <= m <= self.n:
            raise ValueError(f"row {m} outside 0..{self.n}")
        if m == self.n:
            return self.last_row
        if self.log_w is None:
            raise ValueError(f"streaming table only stores row {self.n}")
        return self.log_w[m]


@dataclass(frozen=True, eq=False)
class KDistribution:
    """``probs[k-1] = Pr[K_n = k | E_n, mu]`` for k = 1..n."""

    n: int
    probs: np.ndarray
    log_normalizer: float

    def pmf(self, k: int) -> float:
        return float(self.probs[k - 1]) if 1 <= k <= self.n else 0.0

    def mean(self) -> float:
        return float(np.dot(np.arange(1, self.n + 1), self.probs))


def _lse_rows(vals: np.ndarray) -> np.ndarray:
    top = vals.max(axis=1)
    safe = np.where(np.isfinite(top), top, 0.0)
    vals -= safe[:, None]
    np.exp(vals, out=vals)
    with np.errstate(divide="ignore"):
        return np.log(vals.sum(axis=1)) + safe


def _next_column(log_mu: np.ndarray, prev: np.ndarray, k: int) -> np.ndarray:
    n = prev.size - 1
    out = np.full(n + 1, -np.inf)
    width = min(log_mu.size, n - k + 1)
    if width <= 0:
        return out
    # pad on the left so m - s < 0 lands on -inf
    padded = np.concatenate([np.full(width, -np.inf), prev])
    s = np.arange(1, width + 1)
    for a in range(k, n + 1, _ROW_BLOCK):
        b = min(a + _ROW_BLOCK, n + 1)
        # rows below b only need s <= b - k
        w = min(width, b - k)
        rows = np.arange(a, b)
        vals = log_mu[:w] + padded[rows[:, None] - s[None, :w] + width]
        out[a:b] = _lse_rows(vals)
    return out


def composition_table(
    spec: ClusterSizeSpec, n: int, full: bool | None = None
) -> CompositionTable:
    """Build the log-space table of w(m, k).

    With ``full=None`` the whole matrix is kept for n up to
    ``STREAMING_THRESHOLD``; beyond that only row n is retained.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if full is None:
        full = n <= STREAMING_THRESHOLD
    log_mu = _trim(pmf_prefix(spec, n))
    col = np.full(n + 1, -np.inf)
    col[0] = 0.0
    last_row = np.full(n + 1, -np.inf)
    last_row[0] = col[n]
    W = None
    if full:
        W = np.full((n + 1, n + 1), -np.inf)
        W[:, 0] = col
    for k in range(1, n + 1):
        col = _next_column(log_mu, col, k)
        last_row[k] = col[n]
        if full:
            W[:, k] = col
        if not np.isfinite(col).any():
            break
    if W is not None:
        W.setflags(write=False)
    last_row.setflags(write=False)
    return CompositionTable(spec=spec, n=n, log_w=W, last_row=last_row)


def k_distribution(
    table: CompositionTable, renewal: RenewalTable, m: int | None = None
) -> KDistribution:
    """Law of K_m given E_m; m defaults to the table's n."""
    if table.spec != renewal.spec:
        raise ValueError("composition table and renewal table were built from different specs")
    m = table.n if m is None else m
    if not 1 <= m <= min(table.n, renewal.n):
        raise ValueError(f"m={m} is not covered by both tables (n={table.n}, {renewal.n})")
    log_u = float(renewal.log_u[m])
    if not math.isfinite(log_u):
        raise UnreachableError(m)
    row = table.row(m)
    probs = np.exp(row[1 : m + 1] - log_u)
    return KDistribution(n=m, probs=probs, log_normalizer=log_u)


def k_distribution_closed(spec: ClusterSizeSpec, n: int) -> KDistribution:
    """Closed-form law of K_n for the Poisson, negative binomial and geometric families.

    The normalizer is the family's own closed-form u_n, so this route stays
    independent of the DP.
    """
    if spec.kind not in ("shifted_poisson", "shifted_nb", "geometric"):
        raise CapabilityError(f"no closed-form K_n law for kind {spec.kind!r}; use the DP")
    if spec.kind == "geometric":
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        probs = np.exp(_geometric_k_terms(spec.p, n))
        return KDistribution(n=n, probs=probs, log_normalizer=math.log(spec.p))
    terms = closed_form_terms(spec, n)
    norm = float(logsumexp(terms))
    return KDistribution(n=n, probs=np.exp(terms - norm), log_normalizer=norm)
