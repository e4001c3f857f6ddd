"""The bundled reproduction suite behind ``secant-witness verify-paper``.

``quick`` computes Terracini and contact ranks modulo a large prime, which is
sound for the full-rank and kernel-dimension-one claims made here, and runs
every integer bound check.  ``full`` redoes the rank computations over Q.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

from . import gaussmix, ranges, secant, witness
from .polyring import Form, substitute

LEVELS = ("quick", "full")

WitnessFactory = Callable[[int], Sequence[Form]]


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    anchor: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    run: Callable[[], tuple[bool, str]]


def default_witness(n: int) -> Sequence[Form]:
    return witness.binomial_set(n).forms


def _skewness(witness_fn: WitnessFactory, field: str) -> tuple[bool, str]:
    reports = [secant.check_skewness(witness_fn(n), 3, field=field) for n in range(2, 6)]
    ranks = [r.rank for r in reports]
    # m * dim S^2 with m = C(n, 2) + 1
    expected = [(comb(n, 2) + 1) * comb(n + 1, 2) for n in range(2, 6)]
    ok = all(r.skew for r in reports) and ranks == expected
    return ok, f"ranks {ranks}, tuple sizes need {[r.expected for r in reports]}, binomial sets {expected}"


def _contact(witness_fn: WitnessFactory, field: str) -> tuple[bool, str]:
    parts = []
    ok = True
    for n in range(2, 6):
        v = witness.certify_tuple(witness_fn(n), 3, field=field)
        ok &= v.verdict == witness.PASS
        parts.append(f"n={n}:{v.verdict}")
    return ok, ", ".join(parts)


def _crossover() -> tuple[bool, str]:
    none_below = all(ranges.identifiability_bound_general(n, 2, 3) is None for n in range(2, 17))
    some_above = all(ranges.identifiability_bound_general(n, 2, 3) for n in range(17, 41))
    lhs, rhs = ranges.side_condition(16, 2, 3)
    ok = none_below and some_above and (lhs, rhs) == (270, 263)
    return ok, f"n=16 side condition {lhs} < {rhs} is false; defined for 17..40: {some_above}"


def _cond1_values() -> tuple[bool, str]:
    vals = (ranges.identifiability_bound_general(17, 2, 3), ranges.identifiability_bound_general(20, 2, 3))
    return vals == (333, 632), f"bounds at n=17, 20: {vals}"


def _general_d() -> tuple[bool, str]:
    vals = (ranges.general_d_region(3).min_n, ranges.general_d_region(4).min_n)
    return vals == (17, 6), f"minimal n for d=3, 4: {vals}"


def _probe() -> tuple[bool, str]:
    a = secant.random_terracini_probe(secant.ProblemParams(3, 2, 3, 4), trials=3, seed=0)
    b = secant.random_terracini_probe(secant.ProblemParams(2, 2, 2, 2), trials=20, seed=0)
    ok = a.rank == 24 and a.skew and b.rank <= 5 and not b.skew
    return ok, f"(3,2,3,4) rank {a.rank}/24; (2,2,2,2) rank {b.rank}/6"


def _square_identity() -> tuple[bool, str]:
    rng = random.Random(7)
    for _ in range(20):
        q1, q2 = (secant.random_form(3, 2, rng) for _ in range(2))
        lhs = q1 ** 2 + q2 ** 2
        rhs = (q1 + q2) ** 2 * Fraction(1, 2) + (q1 - q2) ** 2 * Fraction(1, 2)
        if lhs != rhs:
            return False, "identity violated"
    return True, "20 random pairs"


def _stability() -> tuple[bool, str]:
    for n in range(3, 7):
        image = {substitute(p, {n - 1: 0}, n - 1) for p in witness.binomial_set(n)}
        target = set(witness.binomial_set(n - 1)) | {Form.monomial((2,) + (0,) * (n - 2), 4)}
        if image != target:
            return False, f"mismatch at n={n}"
    return True, "n = 3..6"


def _moments() -> tuple[bool, str]:
    rng = random.Random(11)
    for _ in range(5):
        sigma = gaussmix.random_psd(3, rng)
        model = gaussmix.MixtureModel.single(sigma)
        for alpha in [(2, 2, 2), (4, 0, 2), (1, 3, 2), (3, 3, 0)]:
            if gaussmix.moment_of_monomial(model, alpha) != gaussmix.isserlis_oracle(sigma, alpha):
                return False, f"disagreement at {alpha}"
    return True, "matches pair-partition sums"


def _weights() -> tuple[bool, str]:
    rng = random.Random(13)
    for _ in range(5):
        qs = [gaussmix.CovarianceForm.from_sigma(gaussmix.random_psd(3, rng)).q for _ in range(3)]
        raw = [Fraction(rng.randint(1, 9)) for _ in qs]
        lam = [w / sum(raw) for w in raw]
        M = Form.zero(3, 4)
        for w, q in zip(lam, qs):
            M = M + q ** 2 * w
        rec = gaussmix.recover_mixing_weights(list(zip(lam, qs)), M, 3)
        if list(rec.weights) != lam:
            return False, f"recovered {rec.weights} instead of {lam}"
    return True, "5 random mixtures"


def build_checks(level: str, witness_fn: WitnessFactory = default_witness) -> list[Check]:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    field = "prime" if level == "quick" else "rational"
    return [
        Check("01-skewness", "Thm skewness", lambda: _skewness(witness_fn, field)),
        Check("02-contact-locus", "Thm contact locus", lambda: _contact(witness_fn, field)),
        Check("03-crossover", "Cor identifiability bound (n > 16)", _crossover),
        Check("04-cond1-values", "Cor identifiability bound (values)", _cond1_values),
        Check("05-general-d", "Thm general d", _general_d),
        Check("06-probe", "Thm secant dimension", _probe),
        Check("07-square-identity", "square identity (d = 2)", _square_identity),
        Check("08-stability", "binomial-set substitution remark", _stability),
        Check("09-moments", "moment generating series", _moments),
        Check("10-weights", "weight recovery", _weights),
    ]


def _run_one(check: Check) -> CheckResult:
    try:
        ok, detail = check.run()
    except Exception as exc:  # a crashing check is a failed check, not a crashed suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(check.check_id, check.anchor, bool(ok), detail)


def run_checks(level: str, witness_fn: WitnessFactory = default_witness, workers: int = 4) -> list[CheckResult]:
    """Run the suite; results come back sorted by check id whatever the completion order."""
    checks = build_checks(level, witness_fn)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_run_one, checks))
    return sorted(results, key=lambda r: r.check_id)


def tampered_witness(n: int) -> Sequence[Form]:
    """Binomial set with one element repeated; used to show the suite catches a broken witness."""
    forms = list(witness.binomial_set(n).forms)
    return forms + [forms[-1]]
