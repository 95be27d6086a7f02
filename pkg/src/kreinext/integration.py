"""Fundamental-matrix integration for the companion system.

Integrates U' = S(x; lambda) U with U(a) = I using an adaptive embedded
Runge-Kutta (5,4) pair (Dormand-Prince, via scipy) with dense output, all
columns simultaneously.  The resulting fundamental matrix backs every
kernel-basis and spectral computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import IntegrationError, StructureError
from .system import ShinZettlSystem, companion_matrix

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
GRID_POINTS = 65  # stored dense-output samples; >= 33 for bracket checks


@dataclass(frozen=True)
class FundamentalMatrix:
    sys: ShinZettlSystem
    lam: complex
    grid: np.ndarray
    values: np.ndarray  # shape (len(grid), n, n)
    rel_tol: float
    abs_tol: float
    _dense: object = field(repr=False)

    @property
    def n(self) -> int:
        return self.sys.size

    def at(self, x: float) -> np.ndarray:
        """Dense-output evaluation of the fundamental matrix at x."""
        a, b = self.sys.interval.a, self.sys.interval.b
        if not (a - 1e-12 <= x <= b + 1e-12):
            raise StructureError(f"x={x} outside [{a}, {b}]")
        return self._dense(min(max(x, a), b)).reshape(self.n, self.n)

    def end(self) -> np.ndarray:
        """The fundamental matrix at the right endpoint."""
        return self.values[-1]


def fundamental_matrix(
    sys: ShinZettlSystem,
    lam: complex = 0.0,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> FundamentalMatrix:
    if not (0.0 < rel_tol < 1.0 and 0.0 < abs_tol < 1.0):
        raise StructureError("tolerances must lie in (0, 1)")
    n = sys.size
    a, b = sys.interval.a, sys.interval.b

    if sys.is_constant:
        S_const = companion_matrix(sys, a, lam)

        def rhs(x, u):
            return (S_const @ u.reshape(n, n)).ravel()

    else:

        def rhs(x, u):
            S = companion_matrix(sys, x, lam)
            return (S @ u.reshape(n, n)).ravel()

    grid = np.linspace(a, b, GRID_POINTS)
    sol = solve_ivp(
        rhs,
        (a, b),
        np.eye(n, dtype=complex).ravel(),
        method="RK45",
        t_eval=grid,
        dense_output=True,
        rtol=rel_tol,
        atol=abs_tol,
    )
    if not sol.success:
        raise IntegrationError(
            f"integration failed near x={sol.t[-1] if len(sol.t) else a}: {sol.message}"
        )
    values = sol.y.T.reshape(len(grid), n, n).copy()
    if not np.all(np.isfinite(values)):
        raise IntegrationError("non-finite fundamental matrix values")
    values[0] = np.eye(n)  # initial condition is exact by construction
    for k, psi in enumerate(values):
        sign, logdet = np.linalg.slogdet(psi)
        if sign == 0 or not np.isfinite(logdet):
            raise IntegrationError(
                f"fundamental matrix singular at grid point x={grid[k]}"
            )
    return FundamentalMatrix(
        sys=sys,
        lam=lam,
        grid=grid,
        values=values,
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        _dense=sol.sol,
    )


def trace_at(fm: FundamentalMatrix, x: float, initial: np.ndarray) -> np.ndarray:
    """Propagate an initial trace vector (or trace block) to x."""
    initial = np.asarray(initial, dtype=complex)
    if initial.shape[0] != fm.n:
        raise StructureError(
            f"initial trace must have leading dimension {fm.n}, got {initial.shape}"
        )
    if abs(x - fm.sys.interval.a) == 0:
        return initial.copy()
    return fm.at(x) @ initial
