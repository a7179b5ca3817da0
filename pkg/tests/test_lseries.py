import itertools
import random
from fractions import Fraction

import pytest

from sphecke.errors import InvalidInput, PoleError
from sphecke.kostka import QPoly
from sphecke.laurent import Laurent
from sphecke.lseries import (
    SchwartzElement,
    basic_at,
    basic_coeff,
    basic_function,
    fourier,
    gamma_kernel,
    inverse_l_element,
    inverse_l_image,
    l_series,
    membership_witness,
    rho_dim,
    verify_fixed_point,
    verify_unitarity,
    zeta_closed_form,
    zeta_over_l,
)
from sphecke.characters import weight_multiplicities
from sphecke.rootdata import RepSpec, build_gl, dominant_below, sigma_grade
from sphecke.satake import (
    CELLS,
    GradedElement,
    Window,
    cell,
    convolve,
    eval_numeric,
    identity_element,
    satake,
    specialize,
)

GL1 = build_gl(1)
GL2 = build_gl(2)
GL3 = build_gl(3)
STD1, STD2, STD3 = RepSpec((1,)), RepSpec((1, 0)), RepSpec((1, 0, 0))
CUBIC = RepSpec((2, -1))  # four-dimensional grade-one module for GL(2)


def exact_eval(coeff: Laurent, v: Fraction, x: Fraction) -> Fraction:
    return sum(c * v**a * x**b for (a, b), c in coeff.terms.items())


def exact_char(rd, lam, c):
    return sum(
        m * _power_product(c, nu) for nu, m in weight_multiplicities(rd, lam).items()
    )


def _power_product(c, nu):
    out = Fraction(1)
    for ci, e in zip(c, nu):
        out *= Fraction(ci) ** e
    return out


# -- the graded L-series


def test_l_series_examples():
    ls = l_series(GL2, STD2, 3)
    assert ls.grades[0] == {(0, 0): Laurent.one()}
    assert ls.grades[2] == {(2, 0): Laurent.term(1, x=2)}
    ls1 = l_series(GL1, STD1, 4)
    for k in range(5):
        assert ls1.grades[k] == {(k,): Laurent.term(1, x=k)}


def test_l_series_requires_valid_rho():
    with pytest.raises(InvalidInput):
        l_series(GL2, RepSpec((2, 0)), 2)


# -- coefficients of the basic element


def test_basic_coeff_examples():
    assert basic_coeff(GL2, STD2, (1, 0)) == QPoly.one()
    assert basic_coeff(GL2, STD2, (1, 1)) == QPoly({-1: 1})
    assert basic_coeff(GL2, STD2, (0, -1)) == QPoly.zero()
    assert basic_coeff(GL2, STD2, (-1, -1)) == QPoly.zero()


def test_basic_function_defining_identity():
    # the transform of the assembled element reproduces the graded series
    for rd, rho, n in [(GL1, STD1, 6), (GL2, STD2, 5), (GL3, STD3, 4), (GL2, CUBIC, 3)]:
        basic = basic_function(rd, rho, n)
        assert satake(basic.element) == l_series(rd, rho, n)


def test_basic_function_gl2_indicator_specialization():
    basic = basic_function(GL2, STD2, 2)
    sp = specialize(basic.element, Fraction(-1, 2))
    assert sp.grades[2] == {(2, 0): Laurent.one(), (1, 1): Laurent.one()}


def test_basic_function_gl1_tate():
    basic = basic_function(GL1, STD1, 5)
    for k in range(6):
        assert basic.element.grades[k] == {(k,): Laurent.term(1, x=k)}


def test_basic_function_zero_truncation():
    basic = basic_function(GL3, STD3, 0)
    assert basic.element.grades == identity_element(GL3).grades


def test_basic_function_indicator_sweep():
    # nonnegative dominant cells carry coefficient one, nothing else appears
    for n in (1, 2, 3):
        rd = build_gl(n)
        std = RepSpec((1,) + (0,) * (n - 1))
        basic = basic_function(rd, std, 4)
        sp = specialize(basic.element, Fraction(-(n - 1), 2))
        for k in range(5):
            terms = sp.grades.get(k, {})
            expected = {
                mu
                for mu in dominant_below(rd, (k,) + (0,) * (n - 1))
                if min(mu) >= 0
            }
            assert set(terms) == expected
            assert all(c == Laurent.one() for c in terms.values())


# -- inverse series polynomial


def test_inverse_l_gl1():
    inv = inverse_l_element(GL1, STD1)
    assert inv.grades == {
        0: {(0,): Laurent.one()},
        -1: {(-1,): Laurent.term(-1, x=-1)},
    }


def test_inverse_l_gl2_frozen():
    inv = inverse_l_element(GL2, STD2)
    assert inv.grades == {
        0: {(0, 0): Laurent.one()},
        -1: {(0, -1): Laurent.term(-1, x=-1)},
        -2: {(-1, -1): Laurent.term(1, v=2, x=-2)},
    }


def test_inverse_l_leading_term_always_one():
    for rd, rho in [(GL2, STD2), (GL3, STD3), (GL2, CUBIC)]:
        inv = inverse_l_element(rd, rho)
        assert inv.grades[0] == {(0,) * rd.rank: Laurent.one()}


def test_inverse_l_window_finite():
    inv = inverse_l_element(GL3, STD3)
    assert inv.window == Window()
    assert set(inv.grades) <= {0, -1, -2, -3}


# -- the kernel


def test_kernel_gl1_tate_grades():
    kern = gamma_kernel(GL1, STD1, 3)
    e = kern.element
    assert e.grades[-1] == {(-1,): Laurent.term(-1, x=-1)}
    assert e.grades[0] == {(0,): Laurent({(0, 0): 1, (-2, 0): -1})}
    for g in (1, 2, 3):
        assert e.grades[g] == {
            (g,): Laurent({(-2 * g, g): 1, (-2 * g - 2, g): -1})
        }


def test_kernel_lowest_grade_is_top_exterior():
    kern = gamma_kernel(GL2, STD2, 2)
    inv = inverse_l_element(GL2, STD2)
    assert kern.element.grades[-2] == inv.grades[-2]


def test_kernel_window():
    kern = gamma_kernel(GL2, STD2, 3)
    assert kern.element.window == Window(None, 3)
    assert min(kern.element.grades) == -2


def test_kernel_series_division_oracle():
    # exact rational check: (transform of kernel) * denominator = numerator,
    # with numerator/denominator series computed directly from symmetric
    # function recursions, not through the library
    N = 5
    kern = gamma_kernel(GL2, STD2, N)
    img = satake(kern.element)
    c = (Fraction(2, 3), Fraction(5, 7))
    v = Fraction(2)  # q = 4
    x = Fraction(1, 9)
    q = v * v
    l = 1

    def phi_val(g):
        if g < -2:
            return Fraction(0)
        terms = img.grades.get(g, {})
        return sum(exact_eval(co, v, x) * exact_char(GL2, lam, c) for lam, co in terms.items())

    # numerator: complete homogeneous h_k(c) times (x v^(-2-l))^k
    h = [Fraction(1)]
    p = [None]  # power sums
    for k in range(1, N + 3):
        p.append(sum(Fraction(ci) ** k for ci in c))
        h.append(sum(p[j] * h[k - j] for j in range(1, k + 1)) / k)
    num = {k: h[k] * (x * v ** (-2 - l)) ** k for k in range(N + 3)}
    # denominator: elementary e_i of the inverted parameters times (v^l / x)^i
    cinv = [1 / Fraction(ci) for ci in c]
    e0, e1, e2 = Fraction(1), cinv[0] + cinv[1], cinv[0] * cinv[1]
    den = {0: e0, -1: -e1 * v**l / x, -2: e2 * (v**l / x) ** 2}

    for g in range(-2, N + 1):
        want = sum(den[j] * num.get(g - j, Fraction(0)) for j in (0, -1, -2))
        assert phi_val(g) == want, f"grade {g}"


# -- Fourier transform


def test_fourier_tate_fixed_point():
    basic = basic_function(GL1, STD1, 6)
    out = fourier(SchwartzElement(basic, identity_element(GL1)), STD1, 6)
    want = basic_at(basic, Fraction(0)).restrict(Window(None, 6))
    assert out == want


def test_fourier_of_identity_is_twisted_kernel():
    from sphecke.satake import twist

    n = 3
    out = fourier(identity_element(GL2), STD2, n)
    kern = gamma_kernel(GL2, STD2, n).at_zero()
    want = twist(kern, 0, 2 * 2).restrict(Window(None, n))  # l = 1
    assert out == want


def test_fourier_linearity():
    rng = random.Random(21)
    f = cell(GL2, (1, 0), Laurent.term(2))
    g = cell(GL2, (1, 1)) + cell(GL2, (0, 0), Laurent.term(-1))
    lhs = fourier(f + g, STD2, 3)
    rhs = fourier(f, STD2, 3) + fourier(g, STD2, 3)
    assert lhs == rhs


# -- verifiers


def test_fixed_point_passes():
    assert verify_fixed_point(GL1, STD1, 8).status == "PASS"
    assert verify_fixed_point(GL2, STD2, 6).status == "PASS"


def test_fixed_point_custom_module():
    assert verify_fixed_point(GL2, CUBIC, 4).status == "PASS"


def test_fixed_point_detects_corruption():
    basic = basic_function(GL2, STD2, 4)
    grades = {k: dict(t) for k, t in basic.element.grades.items()}
    mu = (3, 0)
    grades[3] = dict(grades[3])
    grades[3][mu] = grades[3][mu] + Laurent.term(1, x=3)
    corrupted = basic.__class__(
        basic.rd, basic.rho, basic.N,
        GradedElement(GL2, CELLS, grades, basic.element.window),
        basic.coeff_map,
    )
    report = verify_fixed_point(GL2, STD2, 4, basic=corrupted)
    assert report.status == "FAIL"
    assert report.first_mismatch is not None
    grade = report.first_mismatch[0]
    assert -4 <= grade <= -2  # corruption at grade 3 surfaces in the telescope


def test_unitarity_passes():
    assert verify_unitarity(GL1, STD1, 8).status == "PASS"
    assert verify_unitarity(GL2, STD2, 5).status == "PASS"


def test_unitarity_grade_zero_check_present():
    report = verify_unitarity(GL2, STD2, 3)
    names = [c["part"] for c in report.checks]
    assert "grade-0 scalar product" in names
    assert all(c["ok"] for c in report.checks)


def test_report_json_shape():
    rep = verify_fixed_point(GL1, STD1, 4)
    obj = rep.to_json()
    assert obj["status"] == "PASS"
    assert obj["first_mismatch"] is None
    assert obj["wall_time"] >= 0


# -- zeta


def test_zeta_identity_gives_l_factor():
    c = (0.31, 0.17)
    q, s = 3.0, 1.0
    basic = basic_function(GL2, STD2, 0)
    val = zeta_closed_form(GL2, STD2, SchwartzElement(basic, identity_element(GL2)), c, q, s)
    want = 1.0
    for ci in c:
        want *= 1 / (1 - ci * q**-s)
    assert abs(val - want) < 1e-14


def test_zeta_gl1_value_two():
    basic = basic_function(GL1, STD1, 0)
    val = zeta_closed_form(GL1, STD1, SchwartzElement(basic, identity_element(GL1)), (1.0,), 2.0, 1.0)
    assert abs(val - 2.0) < 1e-14


def test_zeta_divergence_flag():
    basic = basic_function(GL1, STD1, 0)
    with pytest.raises(PoleError):
        zeta_closed_form(GL1, STD1, SchwartzElement(basic, identity_element(GL1)), (1.0,), 2.0, 0.0)


def test_zeta_closed_vs_truncation():
    rng = random.Random(33)
    ls = l_series(GL2, STD2, 25)
    for _ in range(10):
        c = (rng.uniform(0.05, 0.45), rng.uniform(0.05, 0.45))
        s = rng.uniform(0.8, 2.0)
        res = eval_numeric(ls, c, 3.0, s, 25)
        basic = basic_function(GL2, STD2, 0)
        closed = zeta_closed_form(GL2, STD2, SchwartzElement(basic, identity_element(GL2)), c, 3.0, s)
        assert abs(res.value - closed) / abs(closed) < 1e-9


def test_zeta_over_l_identity():
    zp = zeta_over_l(GL2, STD2, identity_element(GL2))
    assert zp.is_constant_one()


def test_zeta_over_l_single_cell():
    zp = zeta_over_l(GL2, STD2, cell(GL2, (1, 0)))
    assert zp.x_support() == [1]
    assert zp.terms[1] == {(1, 0): Laurent.one()}  # v * v^(-l) at l = 1


def test_zeta_over_l_grade_support():
    h = cell(GL2, (1, 1)) + cell(GL2, (0, 0), Laurent.term(5))
    zp = zeta_over_l(GL2, STD2, h)
    assert zp.x_support() == [0, 2]


def test_zeta_over_l_always_finite_random():
    rng = random.Random(44)
    pool = [v for v in itertools.product(range(-1, 3), repeat=2) if GL2.is_dominant(v)]
    for _ in range(20):
        h = identity_element(GL2).scale(0)
        h = GradedElement(GL2, CELLS, {})
        picks = rng.sample(pool, 3)
        acc = None
        for mu in picks:
            term = cell(GL2, mu, Laurent.term(rng.randint(-4, 4) or 1))
            acc = term if acc is None else acc + term
        zp = zeta_over_l(GL2, STD2, acc)
        assert len(zp.x_support()) <= 10  # finite by construction
        assert all(isinstance(xe, int) for xe in zp.x_support())


# -- compact factor solve (membership of the compact algebra)


def test_membership_witness_random():
    rng = random.Random(55)
    pool = [
        v for v in itertools.product(range(-1, 3), repeat=2)
        if GL2.is_dominant(v) and sigma_grade(GL2, v) >= 0
    ]
    for _ in range(5):
        picks = rng.sample(pool, 2)
        acc = None
        for mu in picks:
            term = cell(GL2, mu, Laurent.term(rng.randint(1, 3)))
            acc = term if acc is None else acc + term
        witness = membership_witness(GL2, STD2, acc)
        assert witness.window == Window()  # compactly supported, fully known


def test_membership_witness_identity():
    w = membership_witness(GL3, STD3, identity_element(GL3))
    # identity = basic(-l/2) * w must hold; w is the inverse-series element
    inv = inverse_l_element(GL3, STD3, dualize=False, shift=(0, 2))
    assert w == inv


def test_schwartz_element_requires_full_knowledge():
    basic = basic_function(GL2, STD2, 3)
    with pytest.raises(InvalidInput):
        SchwartzElement(basic, basic.element)


def test_rho_dim():
    assert rho_dim(GL2, STD2) == 2
    assert rho_dim(GL2, CUBIC) == 4
    assert rho_dim(GL3, STD3) == 3


def test_fourier_requires_compact_support_for_direct_path():
    basic = basic_function(GL2, STD2, 3)
    with pytest.raises(InvalidInput):
        fourier(basic.element, STD2, 3)


def test_fourier_output_stays_in_space():
    # the transform of a compact-factor element is again one: dividing its
    # image by the series leaves a compactly supported element, and the
    # factorization reconstructs the transform on the whole window
    from sphecke.satake import inverse_satake, satake_mul
    from sphecke.lseries import inverse_l_image

    N = 6
    h = cell(GL2, (1, 0)) + cell(GL2, (1, 1), Laurent.term(2))
    basic = basic_function(GL2, STD2, N + 3)
    out = fourier(SchwartzElement(basic, h), STD2, N)
    l = 1
    peel = inverse_l_image(GL2, STD2, dualize=False, shift=(0, l))
    candidate = inverse_satake(satake_mul(satake(out), peel))
    # candidate must vanish well below the truncation edge
    top = int(candidate.support_max())
    assert top <= 2
    finite = GradedElement(GL2, CELLS, candidate.grades, Window())
    rebuilt = convolve(basic_at(basic, Fraction(-l, 2)), finite, Window(None, N))
    assert rebuilt == out.restrict(Window(None, N))


def test_weight_cache_concurrent_reads():
    import concurrent.futures

    from sphecke.characters import weight_multiplicities

    lams = [(k, 1, 0) for k in range(1, 7)]

    def work(lam):
        return sum(weight_multiplicities(GL3, lam).values())

    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(work, lams * 8))
    assert results == [work(lam) for lam in lams] * 8
