"""Positivity certificate via the lowest eigenvalue of the Friedrichs
extension.

A real lambda is a Friedrichs eigenvalue exactly when a nontrivial solution
of the eigenvalue equation has vanishing first-half traces at both ends,
i.e. when the endpoint-trace matrix built from the fundamental matrix at
lambda is singular.  We scan its minimum singular value and refine dips by
golden-section search.  A clean scan up to lambda_max certifies positivity
only up to that bound; the report says so explicitly.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import StructureError
from .extension import lambda_matrix
from .integration import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, fundamental_matrix
from .system import ShinZettlSystem

POSITIVITY_MARGIN = 1e-8
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SpectralScanResult:
    lambda_min: Optional[float]
    bracket: Optional[Tuple[float, float]]
    scan_lambdas: np.ndarray
    scan_sigmas: np.ndarray
    scan_bound: float
    certified_strictly_positive: bool
    margin: float = POSITIVITY_MARGIN


def friedrichs_char_value(
    sys: ShinZettlSystem,
    lam: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> float:
    """Minimum singular value of the endpoint-trace matrix at lambda."""
    fm = fundamental_matrix(sys, lam=lam, rel_tol=rel_tol, abs_tol=abs_tol)
    sigma = np.linalg.svd(lambda_matrix(fm), compute_uv=False)
    return float(sigma.min())


def _scan_workers() -> int:
    raw = os.environ.get("KREIN_EXT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _golden_minimize(f, lo, hi, iterations=90):
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iterations):
        if hi - lo < 1e-13 * max(1.0, abs(hi)):
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def lowest_friedrichs_eigenvalue(
    sys: ShinZettlSystem,
    lambda_max: float,
    coarse_steps: int = 200,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> SpectralScanResult:
    """Scan [0, lambda_max] for the first Friedrichs eigenvalue.

    Coarse sampling is biased toward zero (quadratic spacing); each local
    dip of the minimum singular value is refined by golden-section search
    and accepted as an eigenvalue only if the refined value is negligible
    against the typical scan level.
    """
    if lambda_max <= 0:
        raise StructureError("lambda_max must be positive")

    def char(lam: float) -> float:
        return friedrichs_char_value(sys, lam, rel_tol=rel_tol, abs_tol=abs_tol)

    fractions = np.linspace(0.0, 1.0, coarse_steps + 1)
    lambdas = lambda_max * fractions**2
    workers = _scan_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            sigmas = np.array(list(pool.map(char, lambdas)))
    else:
        sigmas = np.array([char(lam) for lam in lambdas])
    if not np.all(np.isfinite(sigmas)):
        raise StructureError("non-finite values in spectral scan")

    typical = float(np.median(sigmas))
    zero_level = 1e-7 * max(typical, np.finfo(float).tiny)

    for i in range(1, len(lambdas) - 1):
        if sigmas[i] <= sigmas[i - 1] and sigmas[i] <= sigmas[i + 1]:
            lo, hi = lambdas[i - 1], lambdas[i + 1]
            lam_star, sig_star = _golden_minimize(char, lo, hi)
            if sig_star <= zero_level:
                return SpectralScanResult(
                    lambda_min=float(lam_star),
                    bracket=(float(lo), float(hi)),
                    scan_lambdas=lambdas,
                    scan_sigmas=sigmas,
                    scan_bound=lambda_max,
                    certified_strictly_positive=lam_star > POSITIVITY_MARGIN,
                )

    # no eigenvalue found below the scan bound
    return SpectralScanResult(
        lambda_min=None,
        bracket=None,
        scan_lambdas=lambdas,
        scan_sigmas=sigmas,
        scan_bound=lambda_max,
        certified_strictly_positive=True,
    )
