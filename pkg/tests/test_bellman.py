import numpy as np
import pytest

from lpconvexity.bellman import (
    MODE_BOUNDARY,
    MODE_ENVELOPE_NUMERIC,
    MODE_EXACT_LINEAR,
    MODE_FOLIATION,
    b3_unit,
    envelope_surface,
    eval_B,
    eval_B3,
)
from lpconvexity.domain import ConePoint, DomainError, Exponent, SectionPoint


def _random_cone_points(rng, count, p, margin=0.0):
    out = []
    while len(out) < count:
        y = rng.random((4 * count + 64, 2))
        y3 = 1.0 - y.sum(axis=1)
        good = y3 > 0.0
        r = np.concatenate([y, y3[:, None]], axis=1)
        r[good] = r[good] ** (1.0 / p)
        gaps = np.minimum(
            r[:, 0] + r[:, 1] - r[:, 2],
            np.minimum(r[:, 0] + r[:, 2] - r[:, 1], r[:, 1] + r[:, 2] - r[:, 0]),
        )
        good &= gaps > margin * np.maximum(r.max(axis=1), 1e-300)
        out.extend(y[good][: count - len(out)])
    return np.array(out)


def test_exact_linear_everywhere_at_two():
    e = Exponent(2.0)
    rng = np.random.default_rng(31)
    ys = _random_cone_points(rng, 2000, 2.0)
    for y1, y2 in ys:
        res = eval_B(SectionPoint(y1, y2), e)
        assert res.mode == MODE_EXACT_LINEAR
        assert res.value == pytest.approx(3.0 * y1 + 3.0 * y2 - 1.0, abs=1e-13)


def test_parallelogram_identity_on_cone():
    # 2 x1 + 2 x2 - x3, exact at the quadratic exponent
    e = Exponent(2.0)
    rng = np.random.default_rng(32)
    ys = _random_cone_points(rng, 500, 2.0)
    scales = 10.0 ** rng.uniform(-2, 2, len(ys))
    for (y1, y2), c in zip(ys, scales):
        x = ConePoint(c * y1, c * y2, c * (1.0 - y1 - y2))
        res = eval_B3(x, e)
        assert res.value == pytest.approx(2.0 * x.x1 + 2.0 * x.x2 - x.x3, abs=1e-12 * max(1.0, c))


@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
def test_unit_third_coordinate_profile(p):
    # the cone value at (1, 1, t) decreases affinely from 2^p to 0
    e = Exponent(p)
    hi = 2.0**p
    for t in np.linspace(0.0, hi, 100):
        assert b3_unit(float(t), e) == pytest.approx(hi - t, abs=1e-10)
    res = eval_B3(ConePoint(1.0, 1.0, 0.5 * hi), e)
    assert res.value == pytest.approx(0.5 * hi, rel=1e-12)


def test_unit_third_coordinate_profile_below_two():
    # strictly decreasing from 2^p to 0, no closed form
    e = Exponent(1.5)
    hi = 2.0**1.5
    ts = np.linspace(0.0, hi, 80)
    vals = [b3_unit(float(t), e) for t in ts]
    assert vals[0] == pytest.approx(hi, rel=1e-11)
    assert vals[-1] == pytest.approx(0.0, abs=1e-10)
    assert all(b < a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_b3_unit_range_check():
    e = Exponent(3.0)
    with pytest.raises(DomainError):
        b3_unit(8.1, e)
    with pytest.raises(DomainError):
        b3_unit(-0.1, e)


def test_homogeneity():
    rng = np.random.default_rng(33)
    for p in (1.5, 3.0):
        e = Exponent(p)
        ys = _random_cone_points(rng, 50, p, margin=0.02)
        for y1, y2 in ys:
            base = eval_B3(ConePoint(y1, y2, 1.0 - y1 - y2), e).value
            for c in (0.1, 7.3):
                x = ConePoint(c * y1, c * y2, c * (1.0 - y1 - y2))
                assert eval_B3(x, e).value == pytest.approx(c * base, rel=1e-10, abs=1e-12)


def test_dispatch_modes_below_two():
    e = Exponent(1.5)
    interior = eval_B(SectionPoint(0.3, 0.25), e)
    assert interior.mode == MODE_FOLIATION
    # boundary points route through the tight-case closed form
    onb = eval_B3(ConePoint(1.0, 1.0, 2.0**1.5), e)
    assert onb.mode == MODE_BOUNDARY
    assert onb.value == pytest.approx(0.0, abs=1e-12)


def test_dispatch_modes_above_two():
    e = Exponent(3.0)
    assert eval_B(SectionPoint(0.3, 0.3), e).mode == MODE_FOLIATION
    assert eval_B(SectionPoint(0.3, 0.25), e).mode == MODE_ENVELOPE_NUMERIC
    onb = eval_B3(ConePoint(1.0, 1.0, 8.0), e)
    assert onb.mode == MODE_FOLIATION  # axis precedence, per the dispatch table
    assert onb.value == pytest.approx(0.0, abs=1e-12)
    offaxis_boundary = eval_B3(ConePoint(8.0, 1.0, 1.0), e)
    assert offaxis_boundary.mode == MODE_BOUNDARY
    assert offaxis_boundary.value == pytest.approx(27.0, rel=1e-12)


def test_axis_linear_above_two():
    e = Exponent(2.5)
    for t in np.linspace(1.0 / (2.0 + 2.0**2.5) + 1e-6, 0.5, 37):
        res = eval_B(SectionPoint(float(t), float(t)), e)
        assert res.mode == MODE_FOLIATION
        assert res.value == pytest.approx((2.0 + 2.0**2.5) * t - 1.0, abs=1e-12)


def test_envelope_matches_exact_axis_above_two():
    e = Exponent(3.0)
    surf = envelope_surface(e, 512)
    assert len(surf.vertices) == 3 * 512 - 3
    for t in np.linspace(0.12, 0.48, 20):
        y = SectionPoint(float(t) + 1e-9, float(t) - 1e-9)  # just off axis
        res = eval_B(y, e, surface_n=512)
        assert res.mode == MODE_ENVELOPE_NUMERIC
        assert res.value == pytest.approx((2.0 + 8.0) * t - 1.0, abs=5e-3)


def test_eval_B3_zero_point():
    res = eval_B3(ConePoint(0.0, 0.0, 0.0), Exponent(1.5))
    assert res.value == 0.0
    assert res.mode == MODE_BOUNDARY


def test_eval_rejects_outside():
    e = Exponent(3.0)
    with pytest.raises(DomainError) as err:
        eval_B3(ConePoint(1.0, 1.0, 9.0), e)
    assert "x3" in str(err.value)
    with pytest.raises(DomainError):
        eval_B(SectionPoint(0.02, 0.02), Exponent(1.5))
    with pytest.raises(DomainError):
        eval_B3(ConePoint(-1.0, 1.0, 1.0), e)


def test_eval_rejects_low_p():
    with pytest.raises(DomainError):
        eval_B(SectionPoint(0.3, 0.3), Exponent(1.0))


def test_surface_cache_reuse():
    e = Exponent(2.5)
    a = envelope_surface(e, 64)
    b = envelope_surface(e, 64)
    assert a is b
    c = envelope_surface(e, 128)
    assert c is not a


def test_values_continuous_across_modes():
    # envelope evaluation just off the boundary approaches the boundary value
    e = Exponent(3.0)
    b = eval_B3(ConePoint(8.0, 1.0, 1.0), e)
    near = eval_B3(ConePoint(7.95, 1.0, 1.02), e)
    assert near.mode == MODE_ENVELOPE_NUMERIC
    assert near.value == pytest.approx(b.value, rel=2e-2)
