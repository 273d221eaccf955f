"""The complex-monomial derivative algebra against finite differences."""

import numpy as np
import pytest

from cornerlab.zfield import ZField


def _fd_check(zf, order_pairs, r0=0.7, phi0=0.9, h=1e-5, tol=2e-7):
    x0, y0 = r0 * np.cos(phi0), r0 * np.sin(phi0)

    def f(x, y):
        return zf.eval(np.hypot(x, y), np.arctan2(y, x))

    for (i, j) in order_pairs:
        d = zf.derivative(i, j)
        got = d.eval(r0, phi0)
        if (i, j) == (1, 0):
            want = (f(x0 + h, y0) - f(x0 - h, y0)) / (2 * h)
        elif (i, j) == (0, 1):
            want = (f(x0, y0 + h) - f(x0, y0 - h)) / (2 * h)
        elif (i, j) == (1, 1):
            want = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h)
                    - f(x0 - h, y0 + h) + f(x0 - h, y0 - h)) / (4 * h * h)
        else:
            continue
        assert abs(got - want) < tol * max(1.0, abs(want))


def test_power_trig_values():
    beta = 2.0 / 3.0
    zf = ZField.power_trig(beta, "sine")
    r, phi = 0.5, 1.1
    assert zf.eval(r, phi) == pytest.approx(r**beta * np.sin(beta * phi), rel=1e-14)
    zc = ZField.power_trig(beta, "cosine")
    assert zc.eval(r, phi) == pytest.approx(r**beta * np.cos(beta * phi), rel=1e-14)


def test_log_harmonic_value_and_harmonicity():
    zf = ZField.log_harmonic(2, "sine")
    r, phi = 0.4, 0.8
    want = r**2 * (np.log(r) * np.sin(2 * phi) + phi * np.cos(2 * phi))
    assert zf.eval(r, phi) == pytest.approx(want, rel=1e-13)
    lap = zf.laplacian()
    assert abs(lap.eval(0.3, 0.5)) < 1e-12


def test_monomial_expansion():
    zf = ZField.monomial_xy(2, 3)
    r, phi = 0.8, 0.6
    x, y = r * np.cos(phi), r * np.sin(phi)
    assert zf.eval(r, phi) == pytest.approx(x**2 * y**3, rel=1e-12)


def test_helpers():
    assert ZField.r_power(1.7).eval(0.3, 2.0) == pytest.approx(0.3**1.7)
    assert ZField.ln_r().eval(0.2, 1.0) == pytest.approx(np.log(0.2))
    assert ZField.angle().eval(0.2, 1.234) == pytest.approx(1.234)


def test_derivatives_match_finite_differences():
    _fd_check(ZField.power_trig(2.0 / 3.0, "sine"), [(1, 0), (0, 1), (1, 1)])
    _fd_check(ZField.log_harmonic(3, "cosine"), [(1, 0), (0, 1), (1, 1)])
    _fd_check(ZField.r_power(2.0) * ZField.ln_r(), [(1, 0), (0, 1), (1, 1)])


def test_derivative_table_closure():
    table = (ZField.power_trig(0.5, "sine")).derivative_table(3)
    assert set(table) == {(i, j) for i in range(4) for j in range(4) if i + j <= 3}
    # harmonicity: sum of the two pure second derivatives vanishes
    val = table[(2, 0)].eval(0.6, 0.7) + table[(0, 2)].eval(0.6, 0.7)
    assert abs(val) < 1e-11
