"""Kernel basis, boundary pairs, self-adjointness, and primeness checks."""

import numpy as np
import pytest

import kreinext as kx
from kreinext.errors import GammaBijectivityError, StructureError
from kreinext.extension import lambda_matrix, phi_blocks

from conftest import assert_allclose


class TestTraceMap:
    def test_gamma_map_stacks_top_halves(self):
        Ya = np.arange(4.0).reshape(4, 1)
        Yb = np.arange(10.0, 14.0).reshape(4, 1)
        assert_allclose(kx.gamma_map(Ya, Yb), [[0], [1], [10], [11]], 0)

    def test_gamma_map_rejects_odd_length(self):
        with pytest.raises(StructureError):
            kx.gamma_map(np.zeros(3), np.zeros(3))

    def test_lambda_matrix_four_coeff(self, pipelines):
        pipe = pipelines["four-coeff"]
        c, s = np.cosh(1.0), np.sinh(1.0)
        assert_allclose(lambda_matrix(pipe.fm), [[1, 0], [c, s]], 1e-9)


class TestKernelBasis:
    def test_four_coeff_known_basis(self, pipelines):
        # kernel of -y'' + y on [0,1] with unit traces:
        # sinh(1-x)/sinh(1) and sinh(x)/sinh(1)
        pipe = pipelines["four-coeff"]
        c, s = np.cosh(1.0), np.sinh(1.0)
        assert_allclose(pipe.basis.C, [[1, 0], [-c / s, 1 / s]], 1e-9)
        assert_allclose(pipe.basis.Eb, [[0, 1], [-1 / s, c / s]], 1e-9)

    def test_reconstruction(self, pipeline):
        n = pipeline.sys.size
        resid = np.abs(lambda_matrix(pipeline.fm) @ pipeline.basis.C - np.eye(n)).max()
        assert resid <= 1e-9

    def test_singular_trace_map_raises(self):
        # -y'' - pi^2 y has kernel sin(pi x), whose traces vanish at both
        # endpoints of [0,1]; the restricted trace map is singular
        sys = kx.preset_four_coeff(1, "-(pi^2)", 1, 0, (0.0, 1.0))
        fm = kx.fundamental_matrix(sys)
        with pytest.raises(GammaBijectivityError):
            kx.kernel_basis(sys, fm)


class TestKreinPair:
    def test_second_order_pure_values(self, pipelines):
        pipe = pipelines["pure-1"]
        assert_allclose(pipe.krein.A, [[1, 1], [-1, 0]], 1e-9)
        assert_allclose(pipe.krein.B, [[1, 0], [-1, 1]], 1e-9)
        assert_allclose(pipe.B_inv, [[1, 0], [1, 1]], 1e-9)
        assert_allclose(pipe.T, [[1, 1], [0, 1]], 1e-9)

    def test_block_structure(self, pipeline):
        half = pipeline.sys.M * pipeline.sys.N
        phi0_a, phi0_b, phiN_a, phiN_b = phi_blocks(pipeline.basis)
        eye, zero = np.eye(half), np.zeros((half, half))
        assert_allclose(
            pipeline.krein.A, np.block([[-phi0_a, eye], [phi0_b, zero]]), 0
        )
        assert_allclose(
            pipeline.krein.B, np.block([[phiN_a, zero], [-phiN_b, eye]]), 0
        )

    def test_transfer_consistency(self, pipeline):
        # A = B T ties all three products together
        assert_allclose(
            pipeline.krein.A, pipeline.krein.B @ pipeline.T, 1e-7, "A = B T"
        )

    def test_b_inverse_product(self, pipeline):
        n = pipeline.sys.size
        assert_allclose(pipeline.B_inv @ pipeline.krein.B, np.eye(n), 1e-9)

    def test_invert_b_requires_krein_role(self, pipeline):
        with pytest.raises(StructureError):
            kx.invert_B(pipeline.friedrichs)

    def test_kernel_columns_satisfy_conditions(self, pipeline):
        for col in range(pipeline.sys.size):
            ok, resid = kx.membership(
                pipeline.krein,
                pipeline.basis.C[:, col],
                pipeline.basis.Eb[:, col],
            )
            assert ok, f"column {col} residual {resid:.3e}"

    def test_minimal_traces_satisfy_both(self, pipeline):
        zero = np.zeros(pipeline.sys.size)
        assert kx.membership(pipeline.krein, zero, zero)[0]
        assert kx.membership(pipeline.friedrichs, zero, zero)[0]

    def test_kernel_columns_violate_friedrichs(self, pipeline):
        violations = [
            kx.membership(
                pipeline.friedrichs,
                pipeline.basis.C[:, col],
                pipeline.basis.Eb[:, col],
            )[0]
            for col in range(pipeline.sys.size)
        ]
        assert not any(violations)


class TestSelfAdjointness:
    def test_krein_pair_certified(self, pipeline):
        report = kx.verify_self_adjoint(pipeline.krein)
        assert report.verdict
        assert report.rank_AB == pipeline.sys.size
        assert report.symplectic_defect <= 1e-8

    def test_friedrichs_pair_certified(self, pipeline):
        report = kx.verify_self_adjoint(pipeline.friedrichs)
        assert report.verdict

    def test_rank_deficient_pair_rejected(self):
        bad = kx.BoundaryPair(
            A=np.zeros((2, 2), dtype=complex),
            B=np.zeros((2, 2), dtype=complex),
            role="custom",
            M=1,
            N=1,
        )
        report = kx.verify_self_adjoint(bad)
        assert not report.verdict and report.rank_AB == 0

    def test_symplectic_violation_rejected(self):
        # periodic-like but with a scaling that breaks A J A* = B J B*
        A = np.eye(2, dtype=complex)
        B = np.diag([2.0, 1.0]).astype(complex)
        report = kx.verify_self_adjoint(kx.BoundaryPair(A=A, B=B, role="custom", M=1, N=1))
        assert not report.verdict and report.symplectic_defect > 1e-2

    def test_entrywise_symplectic_relations(self, pipeline):
        # boundary-block symmetry of the kernel basis: the higher trace of
        # basis function k reflects the conjugated trace of its mirror
        C, Eb = pipeline.basis.C, pipeline.basis.Eb
        N = pipeline.sys.N
        worst = 0.0
        for j in range(1, N + 1):
            for k in range(1, N + 1):
                lhs_a = C[N + j - 1, k - 1]
                rhs_a = (-1) ** (N + j + k + 1) * np.conj(C[2 * N - k, N - j])
                lhs_b = C[N + j - 1, N + k - 1]
                rhs_b = (-1) ** (N + j + k) * np.conj(Eb[2 * N - k, N - j])
                worst = max(worst, abs(lhs_a - rhs_a), abs(lhs_b - rhs_b))
        assert worst <= 1e-8, worst


class TestRelativePrimeness:
    def test_krein_vs_friedrichs_prime(self, pipeline):
        prime, null_dim = kx.relative_primeness(pipeline.krein, pipeline.friedrichs)
        assert prime and null_dim == 0

    def test_krein_vs_itself_full_nullspace(self, pipeline):
        prime, null_dim = kx.relative_primeness(pipeline.krein, pipeline.krein)
        assert not prime and null_dim == pipeline.sys.size

    def test_size_mismatch_rejected(self, pipelines):
        with pytest.raises(StructureError):
            kx.relative_primeness(
                pipelines["pure-1"].krein, pipelines["pure-2"].krein
            )
