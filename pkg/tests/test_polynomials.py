import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h2embed.errors import ZeroPolynomial
from h2embed.polynomials import (
    Polynomial,
    poly_add,
    poly_derivative,
    poly_mul,
    poly_roots,
    poly_scale,
    roots_in_disk,
)


def test_derivative_of_square():
    d = poly_derivative(Polynomial([0, 0, 1]))  # z^2
    assert np.allclose(d.coeffs, [0, 2])


def test_product_one_plus_one_minus():
    p = poly_mul(Polynomial([1, 1]), Polynomial([1, -1]))
    assert np.allclose(p.coeffs, [1, 0, -1])


def test_scale_by_zero_gives_zero_polynomial():
    p = poly_scale(Polynomial([0, 1]), 0)
    assert p.is_zero and p.degree == -1


def test_derivative_of_constant_is_zero_polynomial():
    assert poly_derivative(Polynomial([5.0])).is_zero


def test_roots_of_quadratic():
    rs = poly_roots(Polynomial([-0.25, 0, 1]))  # z^2 - 1/4
    vals = sorted(rs.values(), key=lambda v: v.real)
    assert np.allclose(vals, [-0.5, 0.5])
    assert all(m == 1 for _, m in rs.roots)
    assert rs.residual_bound < 1e-12


def test_double_root_merges():
    rs = poly_roots(poly_mul(Polynomial([-0.3, 1]), Polynomial([-0.3, 1])))
    assert rs.roots == [(pytest.approx(0.3), 2)] or (
        len(rs.roots) == 1 and rs.roots[0][1] == 2
    )
    assert abs(rs.roots[0][0] - 0.3) < 1e-7


def test_triple_root_against_symbolic_expansion():
    # oracle: expand (z - 1)^3 symbolically
    cube = poly_mul(poly_mul(Polynomial([-1, 1]), Polynomial([-1, 1])), Polynomial([-1, 1]))
    assert np.allclose(cube.coeffs, [-1, 3, -3, 1])
    # companion roots of a triple root scatter ~eps**(1/3); widen the merge radius
    rs = poly_roots(cube, cluster_radius=1e-4)
    assert len(rs.roots) == 1
    v, m = rs.roots[0]
    assert m == 3 and abs(v - 1.0) < 1e-5


def test_zero_polynomial_raises():
    with pytest.raises(ZeroPolynomial):
        poly_roots(Polynomial([]))


def test_degree_zero_gives_empty_rootset():
    rs = poly_roots(Polynomial([3.0]))
    assert rs.roots == [] and rs.total_multiplicity == 0


def test_disk_partition_basic():
    rs = poly_roots(poly_mul(Polynomial([-0.5, 1]), Polynomial([-3, 1])))
    part = roots_in_disk(rs)
    assert [v for v, _ in part.inside] == [pytest.approx(0.5)]
    assert [v for v, _ in part.outside] == [pytest.approx(3.0)]
    assert part.boundary == []


def test_disk_partition_boundary_band():
    rs = poly_roots(Polynomial([-1, 1]))  # root exactly 1
    part = roots_in_disk(rs, tol=1e-9)
    assert len(part.boundary) == 1

    rs2 = poly_roots(Polynomial([-0.9999999999, 1]))
    part2 = roots_in_disk(rs2, tol=1e-9)
    assert len(part2.boundary) == 1 and not part2.inside


def test_random_root_recovery():
    rng = np.random.default_rng(7)
    for _ in range(25):
        deg = int(rng.integers(2, 13))
        roots = rng.uniform(-2, 2, deg) + 1j * rng.uniform(-2, 2, deg)
        p = Polynomial([1.0])
        for r in roots:
            p = poly_mul(p, Polynomial([-r, 1]))
        found = sorted(poly_roots(p).values(), key=lambda v: (v.real, v.imag))
        expected = sorted(roots, key=lambda v: (v.real, v.imag))
        assert len(found) == deg
        assert max(abs(a - b) for a, b in zip(found, expected)) < 1e-8


def test_product_roots_are_union_with_multiplicity():
    rng = np.random.default_rng(11)
    for _ in range(10):
        def rand_poly(deg):
            roots = rng.uniform(-1.5, 1.5, deg) + 1j * rng.uniform(-1.5, 1.5, deg)
            p = Polynomial([1.0])
            for r in roots:
                p = poly_mul(p, Polynomial([-r, 1]))
            return p, list(roots)

        p, rp = rand_poly(int(rng.integers(1, 7)))
        q, rq = rand_poly(int(rng.integers(1, 7)))
        found = sorted(poly_roots(poly_mul(p, q)).values(), key=lambda v: (v.real, v.imag))
        expected = sorted(rp + rq, key=lambda v: (v.real, v.imag))
        assert max(abs(a - b) for a, b in zip(found, expected)) < 1e-7


complex_ints = st.builds(
    complex,
    st.integers(min_value=-8, max_value=8),
    st.integers(min_value=-8, max_value=8),
)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(complex_ints, min_size=1, max_size=8),
    st.lists(complex_ints, min_size=1, max_size=8),
    complex_ints,
    complex_ints,
)
def test_derivative_is_linear(pc, qc, a, b):
    # integer coefficients keep the float arithmetic exact
    p, q = Polynomial(pc), Polynomial(qc)
    lhs = poly_derivative(poly_add(poly_scale(p, a), poly_scale(q, b)))
    rhs = poly_add(poly_scale(poly_derivative(p), a), poly_scale(poly_derivative(q), b))
    assert lhs == rhs
