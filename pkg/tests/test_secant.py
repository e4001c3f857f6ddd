import json
import random
from fractions import Fraction

import pytest
import sympy

from secant_witness import exactla
from secant_witness.errors import InputError
from secant_witness.polyring import Form, linear_change
from secant_witness.secant import (
    ProblemParams,
    check_skewness,
    random_form,
    random_points,
    random_terracini_probe,
    tangent_generators,
    terracini_matrix,
)
from secant_witness.witness import binomial_set


def sympy_terracini_rank(points, d):
    """Tangent spaces built by sympy expansion; independent of the Form arithmetic."""
    n, k = points[0].n, points[0].degree
    xs = sympy.symbols(f"x1:{n + 1}")
    monos_k = sorted(sympy.itermonomials(xs, k, k), key=str)
    rows = []
    for q in points:
        qs = sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[x ** e for x, e in zip(xs, exps)])
                 for exps, c in q.terms())
        base = sympy.expand(qs ** (d - 1))
        for m in monos_k:
            rows.append(sympy.Poly(sympy.expand(base * m), *xs))
    support = sorted({mono for p in rows for mono in p.monoms()})
    return sympy.Matrix([[p.coeff_monomial(s) for s in support] for p in rows]).rank()


def random_invertible(n, rng):
    while True:
        g = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if sympy.Matrix(g).det() != 0:
            return g


def test_problem_params_validation():
    p = ProblemParams(3, 2, 3, 4)
    assert (p.dim_k, p.dim_kd, p.expected) == (6, 28, 24)
    for bad in [(0, 2, 3, 1), (3, 0, 3, 1), (3, 2, 1, 1), (3, 2, 3, 0)]:
        with pytest.raises(InputError):
            ProblemParams(*bad)


def test_tangent_generators_shape_and_content():
    x1, x2 = Form.variable(2, 0), Form.variable(2, 1)
    gens = tangent_generators(x1 * x2, 3)
    assert len(gens) == 3
    assert gens[0] == (x1 * x2) ** 2 * x1 * x1
    with pytest.raises(InputError):
        tangent_generators(Form.zero(2, 2), 3)


def test_terracini_matrix_shape():
    pts = list(binomial_set(3))
    M = terracini_matrix(pts, 3)
    assert (M.rows, M.cols) == (28, 24)


@pytest.mark.parametrize("n, rank", [(2, 6), (3, 24), (4, 70)])
def test_binomial_set_rank_matches_sympy(n, rank):
    pts = list(binomial_set(n))
    if n < 4:
        assert sympy_terracini_rank(pts, 3) == rank
    assert check_skewness(pts, 3).rank == rank
    assert check_skewness(pts, 3, field="prime").rank == rank


def test_random_tuples_match_sympy_rank():
    rng = random.Random(20)
    for _ in range(6):
        n, m = rng.randint(2, 3), rng.randint(1, 4)
        pts = [random_form(n, 2, rng, bound=4) for _ in range(m)]
        assert check_skewness(pts, 3).rank == sympy_terracini_rank(pts, 3)


def _invariance_cases(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, 3)
        k = rng.choice([1, 2])
        d = rng.choice([2, 3])
        m = rng.randint(1, 5)
        if rng.random() < 0.4 and k == 2:
            # structured, possibly defective tuples exercise rank < expected
            pts = list(binomial_set(n))[:m]
            if rng.random() < 0.5:
                pts = pts + [pts[0] * 2]
        else:
            pts = [random_form(n, k, rng, bound=5) for _ in range(m)]
        yield rng, n, d, pts


def test_gl_invariance_of_terracini_rank():
    for rng, n, d, pts in _invariance_cases(100, 21):
        g = random_invertible(n, rng)
        moved = [linear_change(q, g) for q in pts]
        assert check_skewness(moved, d).rank == check_skewness(pts, d).rank


def test_scaling_invariance_of_terracini_rank():
    for rng, n, d, pts in _invariance_cases(100, 22):
        scaled = [q * Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)) for q in pts]
        assert check_skewness(scaled, d).rank == check_skewness(pts, d).rank


def test_permutation_invariance():
    pts = list(binomial_set(4))
    rng = random.Random(23)
    rng.shuffle(pts)
    assert check_skewness(pts, 3, field="prime").rank == 70


def test_adding_points_never_lowers_rank():
    rng = random.Random(24)
    pts = [random_form(3, 2, rng) for _ in range(6)]
    ranks = [check_skewness(pts[:i], 3, field="prime").rank for i in range(1, 7)]
    assert ranks == sorted(ranks)
    assert ranks[-1] <= 28


def test_duplicate_point_is_not_skew():
    pts = list(binomial_set(3))
    rep = check_skewness(pts + [pts[1]], 3)
    assert not rep.skew and rep.rank == 24


def test_field_labels_and_explicit_prime():
    pts = list(binomial_set(2))
    assert check_skewness(pts, 3).field_used == "rational"
    rep = check_skewness(pts, 3, field="prime", prime=101)
    assert rep.field_used == "prime-field" and rep.skew
    with pytest.raises(InputError):
        check_skewness(pts, 3, field="complex")


def test_mixed_shapes_rejected():
    with pytest.raises(InputError):
        check_skewness([Form.variable(2, 0), Form.variable(3, 0)], 3)
    with pytest.raises(InputError):
        check_skewness([], 3)


def test_probe_nondefective_case():
    rep = random_terracini_probe(ProblemParams(3, 2, 3, 4), trials=3, seed=0)
    assert rep.rank == 24 and rep.skew and rep.seed == 0


def test_probe_sums_of_squares_defective():
    rep = random_terracini_probe(ProblemParams(2, 2, 2, 2), trials=20, seed=0)
    assert rep.rank <= 5 and not rep.skew


def test_probe_confirm_rational():
    rep = random_terracini_probe(ProblemParams(3, 2, 3, 2), trials=1, seed=5, confirm_rational=True)
    assert rep.field_used == "rational" and rep.rank == 12


def test_probe_ceiling_when_expected_exceeds_ambient():
    # 5 general quadratic cubes in 3 variables: 30 > 28, the secant fills S^6
    rep = random_terracini_probe(ProblemParams(3, 2, 3, 5), trials=2, seed=1)
    assert rep.rank == 28 and not rep.skew


def test_random_points_deterministic():
    p = ProblemParams(3, 2, 3, 3)
    assert random_points(p, 9) == random_points(p, 9)
    assert random_points(p, 9) != random_points(p, 10)


def test_report_json():
    rep = check_skewness(list(binomial_set(2)), 3)
    data = json.loads(rep.to_json())
    assert data["rank"] == 6 and data["params"] == {"n": 2, "k": 2, "d": 3, "m": 2}
    assert data["expected"] == 6 and data["skew"] is True


def test_linear_forms_are_powers_of_linear_forms():
    # k = 1, d = 4 in two variables: two points give 2 * 2 = 4, a third fills S^4 (dim 5)
    rng = random.Random(25)
    pts = [random_form(2, 1, rng) for _ in range(2)]
    assert check_skewness(pts, 4).rank == 4
    assert exactla.rank(terracini_matrix(pts + [random_form(2, 1, rng)], 4)) == 5
