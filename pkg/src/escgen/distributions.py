"""Cluster size distributions on the positive integers.

Every distribution here puts zero mass on 0 (no empty clusters). Mass
functions are evaluated in log space because Zipf and Poisson tails leave
the range of double precision long before n gets interesting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from scipy.special import gammaln, xlogy

KINDS = ("shifted_poisson", "shifted_nb", "geometric", "zipf", "explicit")

_NORMALIZE_TOL = 1e-9

# B_2, B_4, ..., B_14
_BERNOULLI_EVEN = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
)
_ZETA_CUTOFF = 20


def zeta(alpha: float) -> float:
    """Riemann zeta function for real ``alpha > 1``.

    Sums the first terms directly and corrects the tail with an
    Euler-Maclaurin expansion, which is accurate to ~1e-15 relative.
    """
    alpha = float(alpha)
    if not alpha > 1.0:
        raise ValueError(f"zeta needs alpha > 1, got {alpha}")
    N = _ZETA_CUTOFF
    terms = [k ** -alpha for k in range(1, N)]
    terms.append(N ** (1.0 - alpha) / (alpha - 1.0))
    terms.append(0.5 * N ** -alpha)
    rising = alpha  # alpha (alpha+1) ... (alpha+2j-2)
    fact = 2.0  # (2j)!
    for j, b in enumerate(_BERNOULLI_EVEN, start=1):
        terms.append(float(b) / fact * rising * N ** (-alpha - 2 * j + 1))
        rising *= (alpha + 2 * j - 1) * (alpha + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return math.fsum(terms)


def _to_fraction(w: Any) -> Fraction:
    if isinstance(w, float):
        # str() keeps the short decimal the user wrote, e.g. 0.35 -> 7/20
        return Fraction(str(w))
    return Fraction(w)


@dataclass(frozen=True)
class ClusterSizeSpec:
    """A cluster size distribution mu on {1, 2, ...}.

    Build one with the named constructors (``shifted_poisson``,
    ``shifted_nb``, ``geometric``, ``zipf``, ``explicit``) or
    ``from_dict``. Explicit weights are held as exact fractions so the
    rational oracles in :mod:`escgen.renewal` can use them directly.
    """

    kind: str
    lam: float | None = None
    r: float | None = None
    p: float | None = None
    alpha: float | None = None
    weights: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        k = self.kind
        if k not in KINDS:
            raise ValueError(f"unknown kind {k!r}; expected one of {KINDS}")
        if k == "shifted_poisson":
            if self.lam is None or not self.lam > 0 or not math.isfinite(self.lam):
                raise ValueError(f"shifted_poisson needs lambda > 0, got {self.lam}")
        elif k == "shifted_nb":
            if self.r is None or not self.r > 0 or not math.isfinite(self.r):
                raise ValueError(f"shifted_nb needs r > 0, got {self.r}")
            # p = 1 puts zero mass everywhere, so it is not a distribution
            if self.p is None or not 0.0 <= self.p < 1.0:
                raise ValueError(f"shifted_nb needs 0 <= p < 1, got {self.p}")
        elif k == "geometric":
            if self.p is None or not 0.0 < self.p <= 1.0:
                raise ValueError(f"geometric needs 0 < p <= 1, got {self.p}")
        elif k == "zipf":
            if self.alpha is None or not self.alpha > 1.0 or not math.isfinite(self.alpha):
                raise ValueError(f"zipf needs alpha > 1, got {self.alpha}")
        else:
            if self.weights is None or len(self.weights) == 0:
                raise ValueError("explicit needs a nonempty weight sequence")
            ws = tuple(_to_fraction(w) for w in self.weights)
            if any(w < 0 for w in ws):
                raise ValueError("explicit weights must be nonnegative")
            total = sum(ws)
            if abs(total - 1) > _NORMALIZE_TOL:
                raise ValueError(f"explicit weights sum to {float(total)}, not 1")
            object.__setattr__(self, "weights", tuple(w / total for w in ws))

    @classmethod
    def shifted_poisson(cls, lam: float) -> ClusterSizeSpec:
        return cls("shifted_poisson", lam=float(lam))

    @classmethod
    def shifted_nb(cls, r: float, p: float) -> ClusterSizeSpec:
        return cls("shifted_nb", r=float(r), p=float(p))

    @classmethod
    def geometric(cls, p: float) -> ClusterSizeSpec:
        return cls("geometric", p=float(p))

    @classmethod
    def zipf(cls, alpha: float) -> ClusterSizeSpec:
        return cls("zipf", alpha=float(alpha))

    @classmethod
    def explicit(cls, weights) -> ClusterSizeSpec:
        return cls("explicit", weights=tuple(weights))

    @property
    def params(self) -> dict[str, Any]:
        if self.kind == "shifted_poisson":
            return {"lambda": self.lam}
        if self.kind == "shifted_nb":
            return {"r": self.r, "p": self.p}
        if self.kind == "geometric":
            return {"p": self.p}
        if self.kind == "zipf":
            return {"alpha": self.alpha}
        return {"weights": [float(w) for w in self.weights]}

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": self.params}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ClusterSizeSpec:
        try:
            kind = d["kind"]
            params = dict(d.get("params", {}))
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"spec must look like {{'kind': ..., 'params': {{...}}}}: {exc}") from None
        expected = {
            "shifted_poisson": {"lambda"},
            "shifted_nb": {"r", "p"},
            "geometric": {"p"},
            "zipf": {"alpha"},
            "explicit": {"weights"},
        }.get(kind)
        if expected is None:
            raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
        if set(params) != expected:
            raise ValueError(f"{kind} takes params {sorted(expected)}, got {sorted(params)}")
        if kind == "shifted_poisson":
            return cls.shifted_poisson(params["lambda"])
        if kind == "shifted_nb":
            return cls.shifted_nb(params["r"], params["p"])
        if kind == "geometric":
            return cls.geometric(params["p"])
        if kind == "zipf":
            return cls.zipf(params["alpha"])
        if not isinstance(params["weights"], (list, tuple)):
            raise ValueError("explicit weights must be a list")
        return cls.explicit(params["weights"])

    def describe(self) -> str:
        """Compact ``key=value;...`` form, safe to embed in a CSV cell."""
        parts = []
        for key, val in self.params.items():
            if isinstance(val, list):
                val = "|".join(repr(v) for v in val)
            else:
                val = repr(val)
            parts.append(f"{key}={val}")
        return ";".join(parts)


def pmf_prefix(spec: ClusterSizeSpec, n: int) -> np.ndarray:
    """Return ``log mu_1 .. log mu_n`` as a float array of length n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = np.arange(1, n + 1, dtype=float)
    if spec.kind == "shifted_poisson":
        lam = spec.lam
        return (k - 1) * math.log(lam) - lam - gammaln(k)
    if spec.kind == "shifted_nb":
        r, p = spec.r, spec.p
        # log C(k+r-2, k-1) through log-gamma so non-integer r works
        log_binom = gammaln(k + r - 1) - gammaln(k) - gammaln(r)
        return log_binom + r * math.log1p(-p) + xlogy(k - 1, p)
    if spec.kind == "geometric":
        p = spec.p
        return xlogy(k - 1, 1.0 - p) + math.log(p)
    if spec.kind == "zipf":
        return -spec.alpha * np.log(k) - math.log(zeta(spec.alpha))
    w = np.zeros(n)
    m = min(n, len(spec.weights))
    w[:m] = [float(x) for x in spec.weights[:m]]
    with np.errstate(divide="ignore"):
        return np.log(w)


def mean(spec: ClusterSizeSpec) -> float:
    """E[S_1]; ``math.inf`` for Zipf with alpha <= 2."""
    if spec.kind == "shifted_poisson":
        return spec.lam + 1.0
    if spec.kind == "shifted_nb":
        return 1.0 + spec.r * spec.p / (1.0 - spec.p)
    if spec.kind == "geometric":
        return 1.0 / spec.p
    if spec.kind == "zipf":
        if spec.alpha <= 2.0:
            return math.inf
        return zeta(spec.alpha - 1.0) / zeta(spec.alpha)
    return float(sum(i * w for i, w in enumerate(spec.weights, start=1)))
