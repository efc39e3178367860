"""Cross-route consistency checks run by ``escgen verify``.

Each check compares two independent routes to the same quantity and
reports the worst discrepancy against a fixed tolerance. ``fault=True``
nudges u_n by 1e-3 in every renewal table the checks build, which must
make the suite fail.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod

import numpy as np
from scipy.stats import binom

from escgen.bell import bell_exponential, bell_ordinary, compositions
from escgen.distributions import ClusterSizeSpec
from escgen.kdist import composition_table, k_distribution, k_distribution_closed
from escgen.renewal import RenewalTable, prob_en_closed, prob_en_exact, renewal_table
from escgen.samplers import SamplerTables, prepare

FAULT_SIZE = 1e-3

FAMILIES = (
    ClusterSizeSpec.shifted_poisson(2.0),
    ClusterSizeSpec.shifted_nb(2.0, 0.5),
    ClusterSizeSpec.shifted_nb(0.7, 0.3),
    ClusterSizeSpec.geometric(0.3),
)
RATIONAL_SPECS = (
    ClusterSizeSpec.explicit([Fraction(2, 5), Fraction(7, 20), Fraction(1, 4)]),
    ClusterSizeSpec.explicit([Fraction(1, 3), 0, Fraction(1, 6), Fraction(1, 2)]),
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{tag}  {self.name:<28} err={self.error:.3e}  tol={self.tolerance:.1e}{extra}"


def _renewal(spec, n, fault):
    t = renewal_table(spec, n)
    if not fault:
        return t
    log_u = t.log_u.copy()
    log_u[n] = math.log(math.exp(log_u[n]) + FAULT_SIZE)
    return RenewalTable(spec=spec, n=n, log_u=log_u)


def _brute_en(mu, n):
    return sum(
        (prod((mu[s - 1] if s <= len(mu) else 0) for s in c) for k in range(1, n + 1) for c in compositions(n, k)),
        Fraction(0),
    )


def _exact_error(a, b) -> float:
    return 0.0 if a == b else 1.0


def check_bell_identities(max_n: int, rng: random.Random) -> list[CheckResult]:
    worst_idem = worst_fact = worst_scale = 0.0
    for n in range(1, max_n + 1):
        for k in range(1, n + 1):
            worst_idem = max(worst_idem, _exact_error(
                bell_exponential(n, k, list(range(1, n - k + 2))), comb(n, k) * k ** (n - k)))
            worst_fact = max(worst_fact, _exact_error(
                bell_exponential(n, k, [factorial(i) for i in range(1, n - k + 2)]),
                Fraction(comb(n - 1, k - 1) * factorial(n), factorial(k))))
    for _ in range(20):
        n = rng.randint(1, max_n)
        k = rng.randint(1, n)
        x = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n - k + 1)]
        a = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        b = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
        lhs = bell_exponential(n, k, [a ** i * b * xi for i, xi in enumerate(x, start=1)])
        worst_scale = max(worst_scale, _exact_error(lhs, a ** n * b ** k * bell_exponential(n, k, x)))
    return [
        CheckResult("bell_idempotent", worst_idem, 0.0, f"n<={max_n}"),
        CheckResult("bell_factorial", worst_fact, 0.0, f"n<={max_n}"),
        CheckResult("bell_scaling", worst_scale, 0.0, "20 random cases"),
    ]


def check_ordinary_vs_compositions(max_n: int, rng: random.Random) -> CheckResult:
    worst = 0.0
    top = min(max_n, 10)
    for n in range(1, top + 1):
        x = [Fraction(rng.randint(0, 9), rng.randint(1, 9)) for _ in range(n)]
        for k in range(1, n + 1):
            brute = sum((prod(x[s - 1] for s in c) for c in compositions(n, k)), Fraction(0))
            worst = max(worst, _exact_error(bell_ordinary(n, k, x), brute))
    return CheckResult("ordinary_bell_vs_enumeration", worst, 0.0, f"n<={top}")


def check_exact_renewal(max_n: int, fault: bool) -> list[CheckResult]:
    worst_exact = worst_float = 0.0
    top = min(max_n, 12)
    for spec in RATIONAL_SPECS:
        t = _renewal(spec, top, fault)
        for n in range(1, top + 1):
            exact = prob_en_exact(spec, n)
            worst_exact = max(worst_exact, _exact_error(exact, _brute_en(spec.weights, n)))
            worst_float = max(worst_float, abs(float(t.u[n]) - float(exact)))
    return [
        CheckResult("bell_sum_vs_enumeration", worst_exact, 0.0, f"n<={top}"),
        CheckResult("recurrence_vs_bell_sum", worst_float, 1e-12, f"n<={top}"),
    ]


def check_closed_renewal(fault: bool, n: int = 500) -> CheckResult:
    worst = 0.0
    for spec in FAMILIES:
        t = _renewal(spec, n, fault)
        for m in range(1, n + 1):
            worst = max(worst, abs(math.expm1(t.log_u[m] - prob_en_closed(spec, m))))
    return CheckResult("recurrence_vs_closed_form", worst, 1e-10, f"rel, n<={n}")


def check_kdist(fault: bool, n: int = 200) -> list[CheckResult]:
    worst = 0.0
    for spec in FAMILIES:
        table = composition_table(spec, n)
        t = _renewal(spec, n, fault)
        dp = k_distribution(table, t)
        worst = max(worst, float(np.abs(dp.probs - k_distribution_closed(spec, n).probs).max()))
    geo = ClusterSizeSpec.geometric(0.3)
    table = composition_table(geo, n)
    t = _renewal(geo, n, fault)
    worst_geo = 0.0
    for m in (1, 2, 7, 50, n):
        d = k_distribution(table, t, m)
        ref = binom.pmf(np.arange(m), m - 1, 0.3)
        worst_geo = max(worst_geo, float(np.abs(d.probs - ref).max()))
    zipf = ClusterSizeSpec.zipf(2.0)
    zt = composition_table(zipf, n)
    zr = _renewal(zipf, n, fault)
    row_sum = math.expm1(float(np.logaddexp.reduce(zt.row(n)[1:])) - zr.log_u[n])
    return [
        CheckResult("kdist_dp_vs_closed_form", worst, 1e-8, f"n={n}"),
        CheckResult("kdist_geometric_binomial", worst_geo, 1e-12, f"n<={n}"),
        CheckResult("zipf_row_sum_vs_renewal", abs(row_sum), 1e-9, f"rel, n={n}"),
    ]


def check_renewal_limit(fault: bool) -> CheckResult:
    t = _renewal(ClusterSizeSpec.shifted_poisson(2.0), 2000, fault)
    return CheckResult("renewal_limit_poisson", abs(float(t.u[2000]) - 1 / 3), 1e-4, "lambda=2, n=2000")


def check_sampler_rows(fault: bool, n: int = 300) -> CheckResult:
    worst = 0.0
    for spec in FAMILIES + (ClusterSizeSpec.zipf(1.5),):
        tables = prepare(spec, n, "ondemand")
        if fault:
            tables = SamplerTables(spec, n, tables.log_mu, _renewal(spec, n, True), "ondemand")
        for m in range(1, n + 1):
            worst = max(worst, abs(float(tables.cdf_row(m)[-1]) - 1.0))
    return CheckResult("sampler_rows_normalized", worst, 1e-10, f"n<={n}")


def run_checks(max_n: int = 12, fault: bool = False, seed: int = 0) -> list[CheckResult]:
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    rng = random.Random(seed)
    results = check_bell_identities(max_n, rng)
    results.append(check_ordinary_vs_compositions(max_n, rng))
    results += check_exact_renewal(max_n, fault)
    results.append(check_closed_renewal(fault))
    results += check_kdist(fault)
    results.append(check_renewal_limit(fault))
    results.append(check_sampler_rows(fault))
    return results
