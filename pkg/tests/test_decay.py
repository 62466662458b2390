import numpy as np
import pytest

from algebra.parsing import parse
from config import VerificationConfig
from verification.decay import DampedMeasure, bump, damped_measure, estimate_decay, unit_direction
from verification.metrics import Verdict

pytestmark = pytest.mark.slow

DEFAULTS = VerificationConfig()


def test_default_lambda_grid_is_dyadic():
    np.testing.assert_allclose(DEFAULTS.lambda_grid.values(), 2.0 ** np.arange(4, 13))


def test_bump_profile():
    xs = np.array([0.0, 0.3, 0.5, 1.0])
    out = bump(xs, np.zeros_like(xs), 0.5)
    assert out[0] == 1.0
    assert 0 < out[1] < 1
    assert out[2] == 0 and out[3] == 0


def test_unit_direction():
    np.testing.assert_allclose(unit_direction((2.0, 0.0, 0.0)), [1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        unit_direction((0.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        unit_direction((0.0, 0.0, 0.0))


def test_damped_runs_need_s_above_one():
    with pytest.raises(ValueError):
        damped_measure(parse("(y - x^2)^2"), s=1.0)


def test_zero_s_gives_plain_measure():
    measure = damped_measure(parse("x^2 + y^2"), s=0)
    assert not measure.damped
    assert measure.jacobian == 1.0


def test_nondegenerate_point_decays_like_one_over_lambda():
    report = estimate_decay(DampedMeasure(parse("x^2 + y^2")), cfg=DEFAULTS)
    assert report.fit.target == -1.0
    assert report.fit.slope == pytest.approx(-1.0, abs=0.1)
    assert report.verdict == Verdict.PASS


def test_cylinder_decays_like_root_lambda():
    report = estimate_decay(DampedMeasure(parse("y^2")), cfg=DEFAULTS, tolerance=0.07)
    assert report.fit.slope == pytest.approx(-0.5, abs=0.07)
    assert report.verdict == Verdict.PASS


def test_damping_restores_half_power_decay():
    measure = damped_measure(parse("(y - x^2)^2"), s=1.2, delta=0.1)
    assert measure.damped
    report = estimate_decay(measure)
    assert report.rule == "slope <= -0.52"
    assert report.verdict == Verdict.PASS
    assert report.to_dict()["measure"]["damped"]
