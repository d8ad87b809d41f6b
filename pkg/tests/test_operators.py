import numpy as np
import pytest

from h2embed.errors import AutomorphismInput, DomainError, IsometryDefect
from h2embed.operators import (
    boundary_gram,
    composition_matrix,
    image_orthocomplement_dim,
    kernel_vector,
    toeplitz_matrix,
    weighted_composition_matrix,
    wold_decompose,
)
from h2embed.symbols import (
    BlaschkeProduct,
    MobiusMap,
    PowerSeries,
    RationalOuter,
    SingularInner,
    SingularMeasure,
)

SQUARE = BlaschkeProduct(origin_order=2)


class TestCompositionMatrix:
    def test_square_columns(self):
        c = composition_matrix(SQUARE, 4).matrix
        expect = np.zeros((4, 4), dtype=complex)
        expect[0, 0] = 1
        expect[2, 1] = 1  # phi^1 = z^2; phi^2 = z^4 truncates away
        assert np.max(np.abs(c - expect)) < 1e-12

    def test_identity_symbol(self):
        c = composition_matrix(MobiusMap.identity(), 6).matrix
        assert np.max(np.abs(c - np.eye(6))) < 1e-12

    def test_involution_column_one(self):
        c = composition_matrix(MobiusMap.disk_involution(0.5), 6).matrix
        geom = [0.5, -0.75, -0.375, -0.1875, -0.09375, -0.046875]
        assert np.max(np.abs(c[:, 1] - geom)) < 1e-12

    def test_truncated_multiplicativity(self):
        phi = MobiusMap.disk_involution(0.4)
        n = 24
        c = composition_matrix(phi, n).matrix
        both = composition_matrix(lambda z: phi(phi(z)), n).matrix
        # phi is an involution, so phi.phi is the identity; low rows are exact
        assert np.max(np.abs((c @ c - both)[: n // 3, : n // 3])) < 1e-8


class TestToeplitzMatrix:
    def test_shift(self):
        t = toeplitz_matrix(BlaschkeProduct(origin_order=1), 5).matrix
        assert np.max(np.abs(t - np.eye(5, k=-1))) < 1e-12

    def test_constant_one(self):
        t = toeplitz_matrix(PowerSeries([1.0]), 4).matrix
        assert np.max(np.abs(t - np.eye(4))) < 1e-13

    def test_linear_symbol(self):
        t = toeplitz_matrix(RationalOuter(exterior_zeros=[2.0]), 4).matrix
        first = np.array([-2, 1, 0, 0], dtype=complex)
        assert np.max(np.abs(t[:, 0] - first)) < 1e-12
        assert np.max(np.abs(np.diag(t) - (-2))) < 1e-12

    def test_inner_column_norms_near_one(self):
        s = SingularInner(SingularMeasure.from_angles([(0.0, 1.0)]))
        t = toeplitz_matrix(s, 64).matrix
        norms = np.linalg.norm(t[:, : 64 // 8], axis=0)
        assert np.all(norms <= 1 + 1e-10)
        assert np.all(norms >= 1 - 1e-6)


class TestWeightedComposition:
    def test_trivial_weight_matches_composition(self):
        w = PowerSeries([1.0])
        a = weighted_composition_matrix(w, SQUARE, 6).matrix
        b = composition_matrix(SQUARE, 6).matrix
        assert np.max(np.abs(a - b)) < 1e-12

    def test_shift_weight(self):
        w = BlaschkeProduct(origin_order=1)
        m = weighted_composition_matrix(w, SQUARE, 4).matrix
        expect = np.zeros((4, 4), dtype=complex)
        expect[1, 0] = 1  # w * 1 = z
        expect[3, 1] = 1  # w * phi = z^3
        assert np.max(np.abs(m - expect)) < 1e-12

    def test_blaschke_weight_column_zero_two_radius(self):
        w = BlaschkeProduct(zeros=[(0.5, 1)])
        m1 = weighted_composition_matrix(w, SQUARE, 12, radius=0.9).matrix
        m2 = weighted_composition_matrix(w, SQUARE, 12, radius=0.8).matrix
        assert np.max(np.abs(m1 - m2)) < 1e-9
        from h2embed.symbols import taylor_coefficients

        assert np.max(np.abs(m1[:, 0] - taylor_coefficients(w, 12))) < 1e-11


class TestKernelVector:
    def test_origin(self):
        assert np.allclose(kernel_vector(0.0, 4), [1, 0, 0, 0])

    def test_half(self):
        assert np.allclose(kernel_vector(0.5, 3), [1, 0.5, 0.25])

    def test_reproducing_property(self):
        lam = 0.3 - 0.4j
        k = kernel_vector(lam, 8)
        rng = np.random.default_rng(0)
        p = rng.normal(size=8) + 1j * rng.normal(size=8)
        value = np.polynomial.polynomial.polyval(lam, p)
        assert complex(p @ np.conj(k)) == pytest.approx(complex(value))

    def test_outside_disk_rejected(self):
        with pytest.raises(DomainError):
            kernel_vector(1.0, 4)

    def test_kernel_difference_orthogonal_to_image(self):
        # two points identified by the symbol give a kernel difference
        # orthogonal to every column of the composition matrix
        c = composition_matrix(SQUARE, 16).matrix
        f = kernel_vector(0.5, 16) - kernel_vector(-0.5, 16)
        assert np.max(np.abs(c.conj().T @ f)) < 1e-8


class TestBoundaryGram:
    def test_identity_for_shift(self):
        g = boundary_gram(BlaschkeProduct(origin_order=1), 3, 1024)
        assert np.max(np.abs(g - np.eye(4))) < 1e-12

    def test_identity_for_square(self):
        g = boundary_gram(SQUARE, 3, 1024)
        assert np.max(np.abs(g - np.eye(4))) < 1e-10

    def test_blaschke_with_origin_zero_and_quadrature_convergence(self):
        b = BlaschkeProduct(origin_order=1, zeros=[(0.5, 1)])
        g1 = boundary_gram(b, 4, 1024)
        g2 = boundary_gram(b, 4, 2048)
        assert np.max(np.abs(g1 - np.eye(5))) < 1e-8
        assert np.max(np.abs(g1 - g2)) < 1e-10

    def test_sample_count_validation(self):
        with pytest.raises(ValueError):
            boundary_gram(SQUARE, 2, 1000)


class TestCodim:
    def test_square_composition(self):
        op = composition_matrix(SQUARE, 8)
        assert image_orthocomplement_dim(op) == 4

    def test_identity(self):
        from h2embed.operators import TruncatedOperator

        assert image_orthocomplement_dim(TruncatedOperator(6, np.eye(6))) == 0

    def test_square_toeplitz(self):
        op = toeplitz_matrix(SQUARE, 8)
        assert image_orthocomplement_dim(op) == 2

    def test_shift_powers(self):
        for k in range(1, 6):
            for n in (8, 16):
                op = toeplitz_matrix(BlaschkeProduct(origin_order=k), n)
                assert image_orthocomplement_dim(op) == k


class TestWold:
    def test_square_dyadic_levels(self):
        w = wold_decompose(SQUARE, 8)
        assert w.level_dims == [4, 2, 1]
        assert w.residual_dim == 0
        assert w.orthonormality_defect < 1e-10
        supports = [
            sorted(np.flatnonzero(np.abs(w.wandering_basis[:, j]) > 1e-9).tolist())
            for j in range(4)
        ]
        assert sorted(map(tuple, supports)) == [(1,), (3,), (5,), (7,)]

    def test_cube_levels(self):
        w = wold_decompose(BlaschkeProduct(origin_order=3), 9)
        assert w.level_dims == [6, 2]
        assert w.residual_dim == 0
        supports = sorted(
            int(np.flatnonzero(np.abs(w.wandering_basis[:, j]) > 1e-9)[0])
            for j in range(6)
        )
        assert supports == [1, 2, 4, 5, 7, 8]

    def test_unitary_part_is_constants(self):
        w = wold_decompose(SQUARE, 8)
        e0 = np.zeros(8)
        e0[0] = 1
        assert np.allclose(w.unitary_basis[:, 0], e0)

    def test_completeness_general_symbol(self):
        psi = BlaschkeProduct(origin_order=1, zeros=[(0.5, 1)])
        w = wold_decompose(psi, 16)
        assert 1 + sum(w.level_dims) + w.residual_dim == 16
        q = w.collected_basis()
        assert np.max(np.abs(q.conj().T @ q - np.eye(q.shape[1]))) < 1e-8

    def test_rotation_refused(self):
        with pytest.raises(AutomorphismInput):
            wold_decompose(BlaschkeProduct(rotation=np.pi / 3, origin_order=1), 8)

    def test_noninner_refused(self):
        with pytest.raises(IsometryDefect):
            wold_decompose(PowerSeries([0.0, 0.5]), 8)  # z/2 fixes 0 but is not inner
