import math

import numpy as np
import pytest

from cornerlab.cutoffs import SmoothCutoff
from cornerlab.geometry import SectorGeometry
from cornerlab.grids import Grid
from cornerlab.fdsolve import solve_poisson_fd, solve_poisson_fd_richardson
from cornerlab.modal import solve_poisson
from cornerlab.quadrature import relative_l2
from cornerlab.sources import manufactured_solution, sample


@pytest.mark.parametrize("bc", ["dirichlet", "neumann", "mixed"])
def test_fd_recovers_manufactured(bc):
    geom = SectorGeometry.from_pi_fraction(3, 2, bc=bc)
    chi = SmoothCutoff(0.25, 0.75, order=6)
    mode = 1 if bc == "neumann" else 0
    u_fn, f_fn = manufactured_solution(geom, chi, {mode: 1.0})
    grid = Grid.make(geom, 256, 128, r_min_ratio=1e-6)
    u = solve_poisson_fd(sample(f_fn, grid), geom)
    err = relative_l2(u - sample(u_fn, grid), sample(u_fn, grid))
    assert err < 5e-3


def test_fd_second_order_rate():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    chi = SmoothCutoff(0.25, 0.75, order=6)
    u_fn, f_fn = manufactured_solution(geom, chi, {0: 1.0})
    errs = []
    for n in (96, 192, 384):
        grid = Grid.make(geom, n, n // 2, r_min_ratio=1e-6)
        u = solve_poisson_fd(sample(f_fn, grid), geom)
        errs.append(relative_l2(u - sample(u_fn, grid), sample(u_fn, grid)))
    rate = math.log2(errs[0] / errs[2]) / 2.0
    assert rate > 1.8


def test_richardson_beats_plain():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    chi = SmoothCutoff(0.25, 0.75, order=6)
    u_fn, f_fn = manufactured_solution(geom, chi, {0: 1.0})
    u_rich = solve_poisson_fd_richardson(f_fn, geom, 256, 128, r_min_ratio=1e-6)
    u_plain = solve_poisson_fd(sample(f_fn, u_rich.grid), geom)
    exact = sample(u_fn, u_rich.grid)
    assert relative_l2(u_rich - exact, exact) < 0.2 * relative_l2(u_plain - exact, exact)


def test_fd_cross_checks_modal_path():
    geom = SectorGeometry.from_pi_fraction(3, 2, bc="dirichlet")
    one = lambda r, p: np.ones(np.broadcast(np.asarray(r), np.asarray(p)).shape)
    u_fd = solve_poisson_fd_richardson(one, geom, 512, 256, r_min_ratio=1e-8)
    u_m = solve_poisson(sample(one, u_fd.grid), geom, n_modes=96)
    assert relative_l2(u_m - u_fd, u_fd) < 5e-4
