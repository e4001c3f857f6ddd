"""Acceptance criteria, one check per criterion.

Run ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction
from itertools import product
from math import factorial, prod

import pytest

from secant_witness import ranges
from secant_witness.gaussmix import (
    CovarianceForm,
    MixtureModel,
    isserlis_oracle,
    moment_of_monomial,
    random_psd,
    recover_mixing_weights,
)
from secant_witness.polyring import Form, linear_change, substitute
from secant_witness.secant import ProblemParams, check_skewness, random_form, random_terracini_probe
from secant_witness.witness import PASS, binomial_set, certify_tuple, contact_tangent_kernel, tangent_sum

RESULTS: dict[str, tuple[bool, str]] = {}


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def crit_1_skewness():
    details, ok = [], True
    for n, want in zip(range(2, 6), (6, 24, 70, 165)):
        rep, dt = timed(check_skewness, list(binomial_set(n)), 3, field="rational")
        ok &= rep.skew and rep.rank == want and dt < 30
        details.append(f"n={n} rank {rep.rank} ({dt:.2f}s)")
    return ok, "; ".join(details)


def _contact_all(n, field):
    pts = list(binomial_set(n))
    W = tangent_sum(pts, 3, field)
    return [contact_tangent_kernel(pts, j, 3, W=W).kernel_dim for j in range(len(pts))]


def crit_2_contact_locus():
    details, ok = [], True
    for n in range(2, 6):
        for field, limit in (("prime", 10), ("rational", 300)):
            dims, dt = timed(_contact_all, n, field)
            good = dims == [1] * len(dims)
            if n == 5:
                good &= dt < limit
            ok &= good
            details.append(f"n={n} {field} {'all 1' if dims == [1] * len(dims) else dims} ({dt:.2f}s)")
    return ok, "; ".join(details)


def crit_3_crossover():
    none_le_16 = all(ranges.identifiability_bound_general(n, 2, 3) is None for n in range(2, 17))
    defined_17_40 = all(ranges.identifiability_bound_general(n, 2, 3) is not None for n in range(17, 41))
    lhs, rhs = ranges.side_condition(16, 2, 3)
    exact = (lhs, rhs) == (270, 399 - 136)
    return none_le_16 and defined_17_40 and exact, f"n=16: {lhs} vs {rhs}; defined for 17..40: {defined_17_40}"


def crit_4_cond1_values():
    vals = (ranges.identifiability_bound_general(17, 2, 3), ranges.identifiability_bound_general(20, 2, 3))
    return vals == (333, 632), f"n=17 -> {vals[0]}, n=20 -> {vals[1]}"


def crit_5_general_d():
    vals = (ranges.general_d_region(3).min_n, ranges.general_d_region(4).min_n)
    return vals == (17, 6), f"min n: d=3 -> {vals[0]}, d=4 -> {vals[1]}"


def crit_6_probe():
    t = time.perf_counter()
    a = random_terracini_probe(ProblemParams(3, 2, 3, 4), trials=3, seed=0)
    b = random_terracini_probe(ProblemParams(2, 2, 2, 2), trials=20, seed=0)
    dt = time.perf_counter() - t
    ok = a.rank == 24 and a.skew and b.rank <= 5 and dt < 5
    return ok, f"(3,2,3,4) rank {a.rank}/24; (2,2,2,2) max rank {b.rank}/6 ({dt:.2f}s)"


def _directional(model, x, order):
    total = Fraction(0)
    for alpha in product(range(order + 1), repeat=model.n):
        if sum(alpha) == order:
            coef = factorial(order) // prod(factorial(a) for a in alpha)
            total += coef * prod(Fraction(xi) ** a for xi, a in zip(x, alpha)) * moment_of_monomial(model, alpha)
    return total


def crit_7_moment_law():
    t = time.perf_counter()
    rng = random.Random(2024)
    compared = 0
    for _ in range(50):
        n = rng.randint(1, 3)
        sigma = random_psd(n, rng, bound=5)
        model = MixtureModel.single(sigma)
        for alpha in product(range(7), repeat=n):
            if sum(alpha) <= 6:
                if moment_of_monomial(model, alpha) != isserlis_oracle(sigma, alpha):
                    return False, f"mismatch at sigma={sigma}, alpha={alpha}"
                compared += 1
        x = [rng.randint(-4, 4) for _ in range(n)]
        quad = sum(x[i] * sigma[i][j] * x[j] for i in range(n) for j in range(n))
        for d in (1, 2, 3):
            if _directional(model, x, 2 * d) != prod(range(2 * d - 1, 0, -2)) * quad ** d:
                return False, f"directional law fails at d={d}"
    dt = time.perf_counter() - t
    return dt < 10, f"{compared} moments and 150 directional identities exact ({dt:.2f}s)"


def crit_8_weight_recovery():
    t = time.perf_counter()
    rng = random.Random(2025)
    for _ in range(20):
        n, m = rng.randint(2, 4), rng.randint(1, 4)
        qs = [CovarianceForm.from_sigma(random_psd(n, rng, bound=5)).q for _ in range(m)]
        raw = [Fraction(rng.randint(1, 30)) for _ in range(m)]
        lam = [w / sum(raw) for w in raw]
        M4 = Form.zero(n, 4)
        for w, q in zip(lam, qs):
            M4 = M4 + q ** 2 * w
        rec = recover_mixing_weights(list(zip(lam, qs)), M4, 3)
        if list(rec.weights) != lam:
            return False, f"recovered {rec.weights} for {lam}"
    dt = time.perf_counter() - t
    return dt < 10, f"20 mixtures recovered exactly ({dt:.2f}s)"


def crit_9_properties():
    rng = random.Random(2026)
    failures = []
    for _ in range(100):
        n, k, d, m = rng.randint(2, 3), rng.choice([1, 2]), rng.choice([2, 3]), rng.randint(1, 5)
        pts = [random_form(n, k, rng, bound=5) for _ in range(m)]
        base = check_skewness(pts, d).rank
        while True:
            g = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
            if _det(g):
                break
        if check_skewness([linear_change(q, g) for q in pts], d).rank != base:
            failures.append("GL")
        scaled = [q * Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)) for q in pts]
        if check_skewness(scaled, d).rank != base:
            failures.append("scaling")
    for _ in range(50):
        a, b = random_form(3, 2, rng, bound=5), random_form(3, 2, rng, bound=5)
        c = random_form(3, 1, rng, bound=5)
        g = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
        if linear_change(a * c, g) != linear_change(a, g) * linear_change(c, g):
            failures.append("hom-mul")
        if linear_change(a + b, g) != linear_change(a, g) + linear_change(b, g):
            failures.append("hom-add")
        if substitute(a * c, {2: 0}, 2) != substitute(a, {2: 0}, 2) * substitute(c, {2: 0}, 2):
            failures.append("hom-substitute")
    for n in range(3, 9):
        image = {substitute(p, {n - 1: 0}, n - 1) for p in binomial_set(n)}
        if image != set(binomial_set(n - 1)) | {Form.monomial((2,) + (0,) * (n - 2), 4)}:
            failures.append(f"stability n={n}")
    for _ in range(200):
        nv = rng.randint(1, 6)
        degs = [rng.randint(1, 6) for _ in range(rng.randint(0, 12))]
        s = ranges.froberg_series(nv, degs, 15)
        if any(c < 0 for c in s.coefficients):
            failures.append("froberg")
    return not failures, "all laws hold" if not failures else f"failures: {sorted(set(failures))}"


def _det(g):
    n = len(g)
    if n == 1:
        return g[0][0]
    return sum((-1) ** j * g[0][j] * _det([r[:j] + r[j + 1:] for r in g[1:]]) for j in range(n))


CRITERIA = [
    ("1 base-case skewness", crit_1_skewness),
    ("2 base-case contact locus", crit_2_contact_locus),
    ("3 n > 16 crossover", crit_3_crossover),
    ("4 non-defectivity bound values", crit_4_cond1_values),
    ("5 general-d region", crit_5_general_d),
    ("6 random probe consistency", crit_6_probe),
    ("7 moment law", crit_7_moment_law),
    ("8 weight recovery round trip", crit_8_weight_recovery),
    ("9 property suites", crit_9_properties),
]


def _record(name, fn):
    ok, detail = fn()
    RESULTS[name] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'}  criterion {name}: {detail}")
    return ok, detail


@pytest.mark.parametrize("name, fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, fn):
    ok, detail = _record(name, fn)
    assert ok, detail


def test_certify_binomial_n5_prime_field_verdict():
    assert certify_tuple(list(binomial_set(5)), 3, field="prime").verdict == PASS


if __name__ == "__main__":
    results = [_record(name, fn)[0] for name, fn in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
