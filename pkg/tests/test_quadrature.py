import math

import numpy as np
import pytest
from scipy import integrate as sci

from phasecov import quadrature
from phasecov.errors import QuadratureError


class TestIntegrate:
    def test_polynomial_exact(self):
        # a 15-point Kronrod rule integrates degree <= 22 exactly
        f = lambda x: 3 * x ** 10 - x ** 3 + 2
        assert quadrature.integrate(f, -1.0, 2.0) == pytest.approx(3 * (2 ** 11 + 1) / 11 - (16 - 1) / 4 + 6, abs=1e-12)

    @pytest.mark.parametrize("f, a, b", [
        (np.sin, 0.0, math.pi),
        (lambda x: np.exp(-x * x), -3.0, 5.0),
        (lambda x: 1.0 / (1.0 + 100 * x * x), -1.0, 1.0),
        (lambda x: np.sqrt(x), 0.0, 1.0),
    ])
    def test_matches_scipy(self, f, a, b):
        ref, _ = sci.quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
        assert quadrature.integrate(f, a, b, abs_tol=1e-11) == pytest.approx(ref, abs=1e-10)

    def test_vector_integrand(self):
        f = lambda x: np.stack([np.cos(x), x ** 2], axis=-1)
        v = quadrature.integrate(f, 0.0, 1.0)
        assert v[0] == pytest.approx(math.sin(1.0), abs=1e-12)
        assert v[1] == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_empty_interval(self):
        assert quadrature.integrate(np.cos, 1.0, 1.0) == 0.0

    def test_reversed_interval(self):
        assert quadrature.integrate(np.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0), abs=1e-12)

    def test_failure_names_interval(self):
        with pytest.raises(QuadratureError) as err, np.errstate(all="ignore"):
            quadrature.integrate(lambda x: 1.0 / np.abs(x - 1 / math.pi), 0.0, 1.0,
                                 abs_tol=1e-12, max_intervals=50)
        lo, hi = err.value.interval
        assert lo <= 1 / math.pi <= hi
        assert f"{lo:.12g}" in str(err.value)

    def test_return_error(self):
        val, err = quadrature.integrate(np.exp, 0.0, 1.0, return_error=True)
        assert val == pytest.approx(math.e - 1, abs=1e-13)
        assert 0 <= err < 1e-10


class TestGaussLegendre:
    def test_panels_integrate_smooth(self):
        x, w = quadrature.gauss_legendre_panels(0.0, 2.0, 8, 16)
        assert len(x) == 128
        assert w @ np.exp(x) == pytest.approx(math.exp(2.0) - 1.0, rel=1e-14)
        assert np.all(np.diff(x) > 0)
