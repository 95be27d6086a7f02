"""Shared fixtures: presets and the full boundary-matrix pipeline."""

import numpy as np
import pytest

import kreinext as kx

PRESETS = {
    "pure-1": lambda: kx.preset_pure(1, (0.0, 1.0)),
    "pure-2": lambda: kx.preset_pure(2, (0.0, 1.0)),
    "pure-3": lambda: kx.preset_pure(3, (0.0, 1.0)),
    "fourth-order": kx.preset_fourth_order,
    "four-coeff": lambda: kx.preset_four_coeff(1, 1, 1, 0, (0.0, 1.0)),
}


class Pipeline:
    """Everything the boundary-matrix computation produces for one system."""

    def __init__(self, sys):
        self.sys = sys
        self.fm = kx.fundamental_matrix(sys)
        self.basis = kx.kernel_basis(sys, self.fm)
        self.krein = kx.build_krein_pair(self.basis)
        self.B_inv = kx.invert_B(self.krein)
        self.T = kx.transfer_matrix(self.krein, self.B_inv)
        self.friedrichs = kx.friedrichs_pair(sys.M, sys.N)


@pytest.fixture(scope="session")
def pipelines():
    return {name: Pipeline(build()) for name, build in PRESETS.items()}


@pytest.fixture(params=sorted(PRESETS))
def pipeline(request, pipelines):
    return pipelines[request.param]


def assert_allclose(actual, expected, tol, message=""):
    actual = np.asarray(actual, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    worst = float(np.abs(actual - expected).max())
    assert worst <= tol, f"{message} worst deviation {worst:.3e} > {tol:.1e}"
