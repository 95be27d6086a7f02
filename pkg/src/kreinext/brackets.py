"""Lagrange brackets of solution traces.

The bracket of two solutions is the alternating boundary form

    [F, G] = (-1)^N  sum_{j=0}^{2N-1} (-1)^{1-j} (G^{[2N-j-1]})* F^{[j]},

an M x M matrix built from the stacked quasi-derivative blocks.  Along a
pair of kernel solutions the bracket is constant in x, which is the
conserved quantity behind the boundary-matrix symplectic identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .integration import FundamentalMatrix, trace_at


@dataclass(frozen=True)
class SolutionTraces:
    """Traces of a scalar (width 1) or matrix (width M) solution.

    Stores the trace blocks on the integration grid and keeps the dense
    output of the underlying fundamental matrix for off-grid evaluation.
    """

    fm: FundamentalMatrix
    initial: np.ndarray  # (2MN, width)

    def __post_init__(self):
        initial = np.atleast_2d(np.asarray(self.initial, dtype=complex))
        if initial.shape[0] == 1 and initial.shape[1] == self.fm.n:
            initial = initial.T
        if initial.shape[0] != self.fm.n:
            raise StructureError(
                f"initial trace must have {self.fm.n} rows, got {initial.shape}"
            )
        object.__setattr__(self, "initial", initial)
        object.__setattr__(
            self, "values", np.array([psi @ initial for psi in self.fm.values])
        )

    @property
    def grid(self) -> np.ndarray:
        return self.fm.grid

    @property
    def width(self) -> int:
        return self.initial.shape[1]

    def at(self, x: float) -> np.ndarray:
        return trace_at(self.fm, x, self.initial)

    def block(self, traces: np.ndarray, j: int) -> np.ndarray:
        """Rows of the j-th quasi-derivative (0-based) in a trace block."""
        M = self.fm.sys.M
        return traces[j * M : (j + 1) * M, :]


def _bracket_from_traces(f: SolutionTraces, g: SolutionTraces, Ft, Gt) -> np.ndarray:
    N = f.fm.sys.N
    M = f.fm.sys.M
    total = np.zeros((Gt.shape[1], Ft.shape[1]), dtype=complex)
    for j in range(2 * N):
        Gblk = Gt[(2 * N - j - 1) * M : (2 * N - j) * M, :]
        Fblk = Ft[j * M : (j + 1) * M, :]
        total += (-1) ** (1 - j) * Gblk.conj().T @ Fblk
    return (-1) ** N * total


def lagrange_bracket(f: SolutionTraces, g: SolutionTraces, x: float) -> np.ndarray:
    """The bracket [f, g] evaluated at x; scalar solutions give a 1x1 result."""
    if f.fm.sys.size != g.fm.sys.size or f.fm.sys.M != g.fm.sys.M:
        raise StructureError("operand traces have mismatched dimensions")
    return _bracket_from_traces(f, g, f.at(x), g.at(x))


def check_bracket_constancy(f: SolutionTraces, g: SolutionTraces) -> float:
    """Max Frobenius deviation of [f, g](x) from its value at the left end,
    over the stored grid.  Near zero for kernel solutions."""
    if not np.allclose(f.grid, g.grid):
        raise StructureError("operand traces have mismatched grids")
    base = _bracket_from_traces(f, g, f.values[0], g.values[0])
    worst = 0.0
    for Ft, Gt in zip(f.values, g.values):
        dev = np.linalg.norm(_bracket_from_traces(f, g, Ft, Gt) - base)
        worst = max(worst, float(dev))
    return worst
