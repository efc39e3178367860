"""Renewal probabilities u_n = Pr[E_n | mu].

E_n is the event that some prefix of an i.i.d. mu size sequence sums to
exactly n. Three routes are provided:

* :func:`renewal_table` - the convolution recurrence u_m = sum_s mu_s u_{m-s}
  in log space. This is the canonical route used by the samplers.
* :func:`prob_en_exact` - the Bell polynomial sum, exact for rational mu.
* :func:`prob_en_closed` - per-family closed forms (Poisson, NB, geometric).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath
import numpy as np
from numba import njit
from scipy.special import gammaln, logsumexp, xlogy

from escgen.bell import bell_table
from escgen.distributions import ClusterSizeSpec, mean, pmf_prefix
from escgen.errors import CapabilityError

EXACT_BOUND = 30
MP_DPS = 50


@dataclass(frozen=True, eq=False)
class RenewalTable:
    """``log_u[m] = log Pr[E_m | mu]`` for m = 0..n, with ``log_u[0] = 0``."""

    spec: ClusterSizeSpec
    n: int
    log_u: np.ndarray

    @property
    def u(self) -> np.ndarray:
        return np.exp(self.log_u)

    def reachable(self, m: int) -> bool:
        return bool(np.isfinite(self.log_u[m]))


def _trim(log_mu: np.ndarray) -> np.ndarray:
    finite = np.flatnonzero(np.isfinite(log_mu))
    return log_mu[: finite[-1] + 1] if finite.size else log_mu[:0]


@njit(cache=True)
def _renewal_log(log_mu, n):
    log_u = np.full(n + 1, -np.inf)
    log_u[0] = 0.0
    for m in range(1, n + 1):
        w = min(m, log_mu.size)
        top = -np.inf
        for s in range(1, w + 1):
            v = log_mu[s - 1] + log_u[m - s]
            if v > top:
                top = v
        if top == -np.inf:
            continue
        # Neumaier-compensated sum; a plain loop loses ~m ulps per row
        acc = 0.0
        comp = 0.0
        for s in range(1, w + 1):
            x = np.exp(log_mu[s - 1] + log_u[m - s] - top)
            t = acc + x
            if abs(acc) >= abs(x):
                comp += (acc - t) + x
            else:
                comp += (x - t) + acc
            acc = t
        log_u[m] = min(top + np.log(acc + comp), 0.0)
    return log_u


def renewal_table(spec: ClusterSizeSpec, n: int) -> RenewalTable:
    """u_0..u_n from u_m = sum_{s=1}^m mu_s u_{m-s}, accumulated in log space."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    log_mu = _trim(pmf_prefix(spec, n)) if n > 0 else np.empty(0)
    log_u = _renewal_log(log_mu, n)
    log_u.setflags(write=False)
    return RenewalTable(spec=spec, n=n, log_u=log_u)


def exact_pmf(spec: ClusterSizeSpec, n: int) -> list:
    """mu_1..mu_n as Fractions (explicit kind) or mpmath floats at MP_DPS digits."""
    if spec.kind == "explicit":
        w = list(spec.weights[:n])
        return w + [Fraction(0)] * (n - len(w))
    with mpmath.workdps(MP_DPS):
        out = []
        for k in range(1, n + 1):
            if spec.kind == "shifted_poisson":
                lam = mpmath.mpf(spec.lam)
                v = lam ** (k - 1) * mpmath.exp(-lam) / mpmath.factorial(k - 1)
            elif spec.kind == "shifted_nb":
                r, p = mpmath.mpf(spec.r), mpmath.mpf(spec.p)
                v = mpmath.binomial(k + r - 2, k - 1) * (1 - p) ** r * p ** (k - 1)
            elif spec.kind == "geometric":
                p = mpmath.mpf(spec.p)
                v = (1 - p) ** (k - 1) * p
            else:
                a = mpmath.mpf(spec.alpha)
                v = mpmath.mpf(k) ** (-a) / mpmath.zeta(a)
            out.append(v)
        return out


def prob_en_exact(spec: ClusterSizeSpec, n: int, bound: int = EXACT_BOUND):
    """Pr[E_n | mu] = sum_k (k!/n!) B_{n,k}(1! mu_1, 2! mu_2, ...).

    Exact (a Fraction) for explicit specs; an ``mpmath.mpf`` otherwise.
    Only meant as an oracle, so n is capped at ``bound``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > bound:
        raise CapabilityError(f"exact Bell-sum oracle is limited to n <= {bound}, got {n}")
    mu = exact_pmf(spec, n)
    with mpmath.workdps(MP_DPS):
        x = [factorial(i) * m for i, m in enumerate(mu, start=1)]
        B = bell_table(n, x)
        total = sum(factorial(k) * B[n][k] for k in range(1, n + 1))
        if isinstance(total, (int, Fraction)):
            return Fraction(total) / factorial(n)
        return total / factorial(n)


def _poisson_terms(lam: float, n: int) -> np.ndarray:
    # log Pois(n-k; k lam) for k = 1..n
    k = np.arange(1, n + 1, dtype=float)
    return -k * lam + xlogy(n - k, k * lam) - gammaln(n - k + 1)


def _nb_terms(r: float, p: float, n: int) -> np.ndarray:
    # log of p^{n-k} (1-p)^{rk} C(n + k(r-1) - 1, n-k) for k = 1..n
    k = np.arange(1, n + 1, dtype=float)
    log_binom = gammaln(n - k + k * r) - gammaln(n - k + 1) - gammaln(k * r)
    return xlogy(n - k, p) + k * r * math.log1p(-p) + log_binom


def _geometric_k_terms(p: float, n: int) -> np.ndarray:
    # log of (1/p) (p/(1-p))^k (1-p)^n C(n-1, k-1), written so p = 1 is safe
    k = np.arange(1, n + 1, dtype=float)
    log_binom = gammaln(n) - gammaln(k) - gammaln(n - k + 1)
    return log_binom + xlogy(k - 1, p) + xlogy(n - k, 1.0 - p)


def closed_form_terms(spec: ClusterSizeSpec, n: int) -> np.ndarray:
    """Per-k log terms of the closed form: entry k-1 is log Pr[K_n = k, E_n].

    Summing them (in probability space) gives u_n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if spec.kind == "shifted_poisson":
        return _poisson_terms(spec.lam, n)
    if spec.kind == "shifted_nb":
        return _nb_terms(spec.r, spec.p, n)
    if spec.kind == "geometric":
        return _geometric_k_terms(spec.p, n) + math.log(spec.p)
    raise CapabilityError(f"no closed form for kind {spec.kind!r}; use renewal_table")


def prob_en_closed(spec: ClusterSizeSpec, n: int) -> float:
    """log Pr[E_n | mu] from the family's closed form."""
    if spec.kind == "geometric":
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        return math.log(spec.p)
    return float(logsumexp(closed_form_terms(spec, n)))


def renewal_limit(spec: ClusterSizeSpec) -> float:
    """lim u_n = 1 / E[S_1]; zero when the mean is infinite."""
    m = mean(spec)
    return 0.0 if math.isinf(m) else 1.0 / m
