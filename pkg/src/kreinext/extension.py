"""Boundary-condition matrices for the Krein-von Neumann and Friedrichs
extensions.

The construction: restrict the endpoint-trace map (first N quasi-derivative
blocks at each end) to the kernel of the maximal operator, invert it to get
the distinguished kernel basis, read the higher quasi-derivative blocks of
that basis off at both endpoints, and assemble the coupled boundary pair
(A_K, B_K).  The transfer matrix B_K^-1 A_K maps left traces to right
traces on the Krein domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GammaBijectivityError, NumericalError, StructureError
from .integration import FundamentalMatrix
from .system import ShinZettlSystem, block_j_matrix

COND_CEILING = 1e12


def gamma_map(Ya: np.ndarray, Yb: np.ndarray) -> np.ndarray:
    """Endpoint-trace map: top halves of the two trace vectors, stacked."""
    Ya = np.asarray(Ya, dtype=complex)
    Yb = np.asarray(Yb, dtype=complex)
    if Ya.shape != Yb.shape or Ya.shape[0] % 2 != 0:
        raise StructureError("trace vectors must share an even length")
    half = Ya.shape[0] // 2
    return np.concatenate([Ya[:half], Yb[:half]], axis=0)


def lambda_matrix(fm: FundamentalMatrix) -> np.ndarray:
    """Matrix of the endpoint-trace map on the solution space.

    Row block 1 projects the initial trace onto its first MN entries; row
    block 2 does the same after propagation to the right endpoint.
    """
    n = fm.n
    half = n // 2
    P = np.hstack([np.eye(half), np.zeros((half, half))])
    return np.vstack([P, P @ fm.end()])


@dataclass(frozen=True)
class KernelBasis:
    C: np.ndarray  # initial traces of the basis, columns (j outer, k inner)
    Eb: np.ndarray  # end traces, Psi(b) C
    conditioning: float
    M: int
    N: int


@dataclass(frozen=True)
class BoundaryPair:
    A: np.ndarray
    B: np.ndarray
    role: str  # 'krein' | 'friedrichs' | 'custom'
    M: int
    N: int

    def __post_init__(self):
        n = 2 * self.M * self.N
        if self.A.shape != (n, n) or self.B.shape != (n, n):
            raise StructureError(f"boundary matrices must be {n}x{n}")


@dataclass(frozen=True)
class SelfAdjointnessReport:
    rank_AB: int
    symplectic_defect: float
    verdict: bool


def kernel_basis(sys: ShinZettlSystem, fm: FundamentalMatrix) -> KernelBasis:
    """Solve for the kernel basis whose endpoint traces are the standard
    basis vectors.

    Fails with :class:`GammaBijectivityError` when the trace map is
    numerically singular, which signals that the minimal operator is not
    strictly positive.
    """
    lam_mat = lambda_matrix(fm)
    cond = float(np.linalg.cond(lam_mat))
    if not np.isfinite(cond) or cond > COND_CEILING:
        raise GammaBijectivityError(
            f"endpoint-trace map condition number {cond:.3e} exceeds "
            f"{COND_CEILING:.0e}; the strict-positivity hypothesis likely fails"
        )
    C = np.linalg.solve(lam_mat, np.eye(sys.size, dtype=complex))
    Eb = fm.end() @ C
    recon = np.linalg.norm(lam_mat @ C - np.eye(sys.size))
    if recon > 1e-8:
        raise NumericalError(f"kernel basis reconstruction residual {recon:.3e}")
    return KernelBasis(C=C, Eb=Eb, conditioning=cond, M=sys.M, N=sys.N)


def _phi_block(traces: np.ndarray, M: int, N: int, offset: int) -> np.ndarray:
    """Extract the MN x MN block of higher quasi-derivatives.

    Block (j, k) is the M x M matrix of the (N+j-1)-th quasi-derivative of
    the basis functions with column index k + offset.
    """
    out = np.zeros((M * N, M * N), dtype=complex)
    for j in range(N):
        for k in range(N):
            rows = slice((N + j) * M, (N + j + 1) * M)
            cols = slice((k + offset) * M, (k + offset + 1) * M)
            out[j * M : (j + 1) * M, k * M : (k + 1) * M] = traces[rows, cols]
    return out


def phi_blocks(basis: KernelBasis):
    """The four boundary blocks (phi0_a, phi0_b, phiN_a, phiN_b)."""
    M, N = basis.M, basis.N
    phi0_a = _phi_block(basis.C, M, N, 0)
    phiN_a = _phi_block(basis.C, M, N, N)
    phi0_b = _phi_block(basis.Eb, M, N, 0)
    phiN_b = _phi_block(basis.Eb, M, N, N)
    return phi0_a, phi0_b, phiN_a, phiN_b


def build_krein_pair(basis: KernelBasis) -> BoundaryPair:
    M, N = basis.M, basis.N
    half = M * N
    phi0_a, phi0_b, phiN_a, phiN_b = phi_blocks(basis)
    eye = np.eye(half, dtype=complex)
    zero = np.zeros((half, half), dtype=complex)
    A = np.block([[-phi0_a, eye], [phi0_b, zero]])
    B = np.block([[phiN_a, zero], [-phiN_b, eye]])
    return BoundaryPair(A=A, B=B, role="krein", M=M, N=N)


def invert_B(pair: BoundaryPair) -> np.ndarray:
    """Invert B via its block-triangular closed form, cross-checked against
    a dense inverse."""
    if pair.role != "krein":
        raise StructureError("structured inversion applies to the Krein pair")
    half = pair.M * pair.N
    phiN_a = pair.B[:half, :half]
    phiN_b = -pair.B[half:, :half]
    sigma = np.linalg.svd(phiN_a, compute_uv=False)
    if sigma.min() < sigma.max() * 1e-12:
        raise NumericalError(
            "leading boundary block numerically singular; upstream failure"
        )
    phiN_a_inv = np.linalg.inv(phiN_a)
    eye = np.eye(half, dtype=complex)
    zero = np.zeros((half, half), dtype=complex)
    B_inv = np.block([[phiN_a_inv, zero], [phiN_b @ phiN_a_inv, eye]])
    dense = np.linalg.inv(pair.B)
    rel = np.linalg.norm(B_inv - dense) / max(1.0, np.linalg.norm(dense))
    if rel > 1e-8:
        raise NumericalError(f"structured inverse deviates from dense: {rel:.3e}")
    return B_inv


def transfer_matrix(pair: BoundaryPair, B_inv: np.ndarray) -> np.ndarray:
    if pair.role != "krein":
        raise StructureError("transfer matrix applies to the Krein pair")
    return B_inv @ pair.A


def friedrichs_pair(M: int, N: int) -> BoundaryPair:
    """Separated conditions: the first N quasi-derivative blocks vanish at
    both endpoints, embedded in the coupled A Y(a) = B Y(b) convention by
    stacking selector rows."""
    half = M * N
    n = 2 * half
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    A[:half, :half] = np.eye(half)
    B[half:, :half] = np.eye(half)
    return BoundaryPair(A=A, B=B, role="friedrichs", M=M, N=N)


def verify_self_adjoint(pair: BoundaryPair, tol: float = 1e-8) -> SelfAdjointnessReport:
    """Check the rank and symplectic conditions for self-adjointness of the
    boundary-value restriction."""
    n = 2 * pair.M * pair.N
    stacked = np.hstack([pair.A, pair.B])
    sigma = np.linalg.svd(stacked, compute_uv=False)
    threshold = sigma.max() * n * np.finfo(float).eps * 64 if sigma.max() > 0 else 0.0
    rank = int(np.sum(sigma > threshold))
    J = block_j_matrix(pair.M, 2 * pair.N)
    lhs = pair.A @ J @ pair.A.conj().T
    rhs = pair.B @ J @ pair.B.conj().T
    defect = float(np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(lhs)))
    return SelfAdjointnessReport(
        rank_AB=rank,
        symplectic_defect=defect,
        verdict=(rank == n and defect <= tol),
    )


def membership(
    pair: BoundaryPair, Ya: np.ndarray, Yb: np.ndarray, tol: float = 1e-8
):
    """Whether a pair of endpoint traces satisfies the boundary conditions.

    Returns (ok, residual) with the residual normalized by the trace size.
    """
    Ya = np.asarray(Ya, dtype=complex)
    Yb = np.asarray(Yb, dtype=complex)
    residual = float(
        np.linalg.norm(pair.A @ Ya - pair.B @ Yb)
        / max(1.0, float(np.linalg.norm(Ya) + np.linalg.norm(Yb)))
    )
    return residual <= tol, residual


def relative_primeness(pairA: BoundaryPair, pairB: BoundaryPair):
    """Dimension of the joint nullspace of the two boundary conditions over
    (Ya, Yb); dimension zero means the extensions are relatively prime.

    Returns (relatively_prime, nullspace_dimension).
    """
    n = 2 * pairA.M * pairA.N
    if 2 * pairB.M * pairB.N != n:
        raise StructureError("boundary pairs have mismatched sizes")
    stacked = np.vstack(
        [
            np.hstack([pairA.A, -pairA.B]),
            np.hstack([pairB.A, -pairB.B]),
        ]
    )
    sigma = np.linalg.svd(stacked, compute_uv=False)
    threshold = sigma.max() * 2 * n * np.finfo(float).eps * 64 if sigma.max() > 0 else 0.0
    rank = int(np.sum(sigma > threshold))
    null_dim = 2 * n - rank
    return null_dim == 0, null_dim
