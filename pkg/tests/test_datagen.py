import numpy as np
import pytest

from conftest import EXAMPLE1_A, EXAMPLE1_B, EXAMPLE2_A, EXAMPLE2_B
from varpro.datagen import (
    EXAMPLE1_GRID,
    EXAMPLE2_GRID,
    GridSpec,
    NoiseSpec,
    generate_experiment,
    make_point,
)
from varpro.exceptions import ZeroUncertainty
from varpro.models import builtin_example1, builtin_exp_sum
from varpro.projection import FitProblem, fit


def test_noiseless_point_with_override():
    spec = NoiseSpec(0.0, 0)
    p = make_point(2.5, 17.0, spec, spec.rng(), dy=0.01)
    assert p == (2.5, 17.0, 0.01)


def test_noiseless_point_needs_uncertainty():
    spec = NoiseSpec(0.0, 0)
    with pytest.raises(ZeroUncertainty):
        make_point(1.0, 5.0, spec, spec.rng())


def test_relative_uncertainty():
    spec = NoiseSpec(0.01, 3)
    p = make_point(0.0, 100.0, spec, spec.rng())
    assert p.dy == 1.0
    assert 96.0 <= p.y <= 104.0


def test_uncertainty_uses_absolute_truth():
    spec = NoiseSpec(0.02, 3)
    assert make_point(0.0, -50.0, spec, spec.rng()).dy == 1.0


def test_point_deterministic():
    spec = NoiseSpec(0.02, 12345)
    p1 = make_point(0.3, 124.0, spec, spec.rng())
    p2 = make_point(0.3, 124.0, spec, spec.rng())
    assert p1 == p2


def test_grids():
    x1 = EXAMPLE1_GRID.points()
    assert len(x1) == 100 and x1[0] == pytest.approx(0.1) and x1[-1] == pytest.approx(10.0)
    x2 = EXAMPLE2_GRID.points()
    assert len(x2) == 100 and x2[0] == 0.0 and x2[-1] == pytest.approx(29.7)


@pytest.mark.parametrize("kwargs", [dict(start=0, step=1, count=0), dict(start=0, step=0, count=5)])
def test_bad_grid(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)


def test_dataset_determinism_and_seed_sensitivity():
    basis = builtin_exp_sum(3)
    for seed in range(10):
        d1 = generate_experiment(basis, EXAMPLE2_A, EXAMPLE2_B, EXAMPLE2_GRID, NoiseSpec(0.02, seed))
        d2 = generate_experiment(basis, EXAMPLE2_A, EXAMPLE2_B, EXAMPLE2_GRID, NoiseSpec(0.02, seed))
        d3 = generate_experiment(basis, EXAMPLE2_A, EXAMPLE2_B, EXAMPLE2_GRID, NoiseSpec(0.02, seed + 100))
        assert d1.y.tobytes() == d2.y.tobytes()
        assert np.any(d1.y != d3.y)


def test_uncertainties_are_exact():
    basis = builtin_exp_sum(3)
    d = generate_experiment(basis, EXAMPLE2_A, EXAMPLE2_B, EXAMPLE2_GRID, NoiseSpec(0.02, 1))
    truth = basis.evaluate(EXAMPLE2_A, EXAMPLE2_B, d.x)
    np.testing.assert_array_equal(d.dy, np.abs(truth) * 0.02)


def test_noise_mean_sanity():
    r, n = 0.05, 100_000
    d = generate_experiment(builtin_exp_sum(1), [3.0], [0.0], GridSpec(0, 1, n), NoiseSpec(r, 99))
    mean = np.mean(d.y / 3.0 - 1.0)
    assert abs(mean) <= 5 * r / np.sqrt(n)


def test_zero_noise_round_trip():
    data = generate_experiment(builtin_example1(), EXAMPLE1_A, EXAMPLE1_B, EXAMPLE1_GRID,
                               NoiseSpec(0.0, 0, error_fraction=0.01))
    np.testing.assert_array_equal(data.y, builtin_example1().evaluate(EXAMPLE1_A, EXAMPLE1_B, data.x))
    result = fit(FitProblem(data, builtin_example1(), [5.0]))
    np.testing.assert_allclose(result.a, EXAMPLE1_A, rtol=1e-5)
    np.testing.assert_allclose(result.b, EXAMPLE1_B, atol=1e-5)


def test_absolute_dy_override():
    d = generate_experiment(builtin_example1(), EXAMPLE1_A, EXAMPLE1_B, GridSpec(1, 1, 3),
                            NoiseSpec(0.0, 0), dy=0.5)
    np.testing.assert_array_equal(d.dy, [0.5, 0.5, 0.5])
