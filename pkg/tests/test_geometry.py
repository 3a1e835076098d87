"""Frozen oracles and invariants for the pointwise transforms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilip.errors import DomainError, OriginError, PoleError
from bilip.geometry import (
    PointCloud,
    inversion_derivative_norm,
    invert,
    inverted_distance_residual,
    law_of_cosines_residual,
    norms,
    north_pole,
    pole_chart,
    pole_chart_exact,
    separation_bounds,
    stereo_embed,
    stereo_project,
)


def unit_rows(rng: np.random.Generator, n: int, q: int) -> np.ndarray:
    v = rng.normal(size=(n, q))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def log_uniform_radii(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))


class TestInvert:
    def test_frozen_example(self):
        # |x|^2 = 25, so (3,4) -> (3/25, 4/25)
        assert invert([3.0, 4.0]) == pytest.approx([0.12, 0.16], rel=1e-14)

    def test_origin_rejected(self):
        with pytest.raises(OriginError):
            invert([0.0, 0.0])

    def test_tiny_and_huge_radii_survive(self):
        out = invert([1e-300, 0.0])
        assert out == pytest.approx([1e300, 0.0])
        back = invert([1e300, 0.0])
        assert back == pytest.approx([1e-300, 0.0])

    def test_involution(self):
        rng = np.random.default_rng(11)
        for q in (1, 2, 3, 6):
            x = unit_rows(rng, 500, q) * log_uniform_radii(rng, 500, 1e-6, 1e6)[:, None]
            err = np.linalg.norm(invert(invert(x)) - x, axis=1)
            assert np.all(err <= 1e-10 * np.asarray(norms(x)))

    def test_radius_law(self):
        rng = np.random.default_rng(12)
        x = unit_rows(rng, 1000, 3) * log_uniform_radii(rng, 1000, 1e-6, 1e6)[:, None]
        prod = np.asarray(norms(invert(x))) * np.asarray(norms(x))
        assert np.max(np.abs(prod - 1.0)) <= 1e-12

    def test_direction_preserved(self):
        rng = np.random.default_rng(13)
        x = unit_rows(rng, 1000, 4) * log_uniform_radii(rng, 1000, 1e-3, 1e3)[:, None]
        y = invert(x)
        ux = x / np.asarray(norms(x))[:, None]
        uy = y / np.asarray(norms(y))[:, None]
        assert np.max(np.linalg.norm(ux - uy, axis=1)) <= 1e-12


class TestStereo:
    def test_frozen_plane_example(self):
        # |x|^2 = 25: (3,4) -> (6/26, 8/26, 24/26)
        out = stereo_embed([3.0, 4.0])
        assert out == pytest.approx([6 / 26, 8 / 26, 24 / 26], rel=1e-14)

    def test_frozen_line_examples(self):
        assert stereo_embed([0.0]) == pytest.approx([0.0, -1.0], abs=1e-15)
        assert stereo_embed([1.0]) == pytest.approx([1.0, 0.0], abs=1e-15)
        assert stereo_embed([2.0]) == pytest.approx([0.8, 0.6], rel=1e-14)
        assert stereo_embed([4.0]) == pytest.approx([8 / 17, 15 / 17], rel=1e-14)

    def test_south_pole_round_trip(self):
        assert stereo_project([0.0, -1.0]) == pytest.approx([0.0], abs=1e-15)

    def test_sphere_membership(self):
        rng = np.random.default_rng(21)
        for q in (1, 2, 3, 6):
            x = unit_rows(rng, 500, q) * log_uniform_radii(rng, 500, 1e-6, 1e6)[:, None]
            r = np.asarray(norms(stereo_embed(x)))
            assert np.max(np.abs(r - 1.0)) <= 1e-12

    def test_round_trip(self):
        rng = np.random.default_rng(22)
        for q in (1, 2, 3, 6):
            x = unit_rows(rng, 500, q) * log_uniform_radii(rng, 500, 1e-6, 1e6)[:, None]
            back = stereo_project(stereo_embed(x))
            err = np.linalg.norm(back - x, axis=1)
            assert np.all(err <= 1e-10 * (1.0 + np.asarray(norms(x))))

    def test_frozen_projection(self):
        assert stereo_project([0.6, 0.8]) == pytest.approx([3.0], rel=1e-14)

    def test_pole_rejected(self):
        with pytest.raises(PoleError):
            stereo_project([0.0, 0.0, 1.0])
        # embedding a huge point lands within pole_epsilon of the pole
        with pytest.raises(PoleError):
            stereo_project(stereo_embed([1e200, 0.0]))

    def test_off_sphere_rejected(self):
        with pytest.raises(DomainError):
            stereo_project([0.5, 0.5])

    def test_huge_radius_membership(self):
        p = stereo_embed([1e200, 0.0])
        assert abs(float(np.asarray(norms(p))) - 1.0) <= 1e-12


class TestPoleChart:
    def test_frozen_verbatim(self):
        # (0.5, 0): |y| = 1/2, denominator 5/4
        assert pole_chart([0.5, 0.0]) == pytest.approx([0.4, 0.0, 0.4], rel=1e-14)

    def test_frozen_exact(self):
        assert pole_chart_exact([0.5, 0.0]) == pytest.approx([0.8, 0.0, 0.6], rel=1e-14)

    def test_zero_maps_to_pole(self):
        assert pole_chart([0.0, 0.0]) == pytest.approx(north_pole(2), abs=1e-15)
        assert pole_chart_exact([0.0, 0.0, 0.0]) == pytest.approx(north_pole(3), abs=1e-15)

    def test_domain_enforced(self):
        with pytest.raises(DomainError):
            pole_chart([0.6, 0.0])
        with pytest.raises(DomainError):
            pole_chart_exact([0.51, 0.0])

    def test_exact_variant_on_sphere_and_latitude(self):
        rng = np.random.default_rng(31)
        y = unit_rows(rng, 300, 3) * rng.uniform(0.0, 0.5, size=300)[:, None]
        out = pole_chart_exact(y)
        assert np.max(np.abs(np.asarray(norms(out)) - 1.0)) <= 1e-12
        assert np.min(out[:, -1]) >= 0.6 - 1e-12

    def test_renormalized_lands_on_sphere(self):
        rng = np.random.default_rng(32)
        y = unit_rows(rng, 300, 2) * rng.uniform(0.0, 0.5, size=300)[:, None]
        out = pole_chart(y, renormalize=True)
        assert np.max(np.abs(np.asarray(norms(out)) - 1.0)) <= 1e-12

    def test_gluing_exact_variant(self):
        # chart(invert(x)) must equal stereo_embed(x) for |x| >= 2
        rng = np.random.default_rng(33)
        for q in (1, 2, 3, 6):
            x = unit_rows(rng, 400, q) * log_uniform_radii(rng, 400, 2.0, 1e3)[:, None]
            res = np.linalg.norm(pole_chart_exact(invert(x)) - stereo_embed(x), axis=1)
            assert np.max(res) <= 1e-12

    def test_gluing_verbatim_baseline(self):
        # the printed form does not glue; the mismatch at x=(2,0) is sqrt(0.2)
        x = np.array([2.0, 0.0])
        res = np.linalg.norm(pole_chart(invert(x)) - stereo_embed(x))
        assert res == pytest.approx(np.sqrt(0.2), rel=1e-12)

    def test_gluing_renormalized_baseline(self):
        # radial projection onto the sphere does not rescue the gluing
        x = np.array([2.0, 0.0])
        res = np.linalg.norm(pole_chart(invert(x), renormalize=True) - stereo_embed(x))
        assert res == pytest.approx(0.14177804018135862, rel=1e-9)


class TestDerivativeNorm:
    def test_line(self):
        # d/dx (1/x) = -1/x^2, so the norm at 0.5 is 4
        assert inversion_derivative_norm([0.5]) == pytest.approx(4.0, rel=1e-5)

    def test_space(self):
        est = inversion_derivative_norm([1.0, 1.0, 1.0])
        assert est == pytest.approx(1.0 / 3.0, rel=1e-5)

    def test_frozen_examples(self):
        assert inversion_derivative_norm([1.0, 0.0]) == pytest.approx(1.0, rel=1e-6)
        assert inversion_derivative_norm([2.0, 0.0, 0.0]) == pytest.approx(0.25, rel=1e-6)

    def test_step_validated(self):
        with pytest.raises(DomainError):
            inversion_derivative_norm([1.0, 0.0], h=1e-3)
        with pytest.raises(DomainError):
            inversion_derivative_norm([1.0, 0.0], h=0.0)

    def test_sweep(self):
        rng = np.random.default_rng(41)
        for q in (1, 2, 4, 6):
            for _ in range(50):
                x = unit_rows(rng, 1, q)[0] * float(log_uniform_radii(rng, 1, 0.1, 10.0)[0])
                r = float(np.asarray(norms(x)))
                est = inversion_derivative_norm(x)
                assert est == pytest.approx(1.0 / r**2, rel=1e-5)


class TestSeparationBounds:
    def test_frozen_collinear(self):
        b = separation_bounds([1.0, 0.0], [3.0, 0.0])
        assert b.lower == pytest.approx(2.0, rel=1e-14)
        assert b.upper == pytest.approx(4.0, rel=1e-14)
        assert b.distance == pytest.approx(2.0)
        assert b.holds

    def test_frozen_antipodal(self):
        b = separation_bounds([1.0, 0.0], [-3.0, 0.0])
        assert b.distance == pytest.approx(4.0)
        assert b.upper == pytest.approx(4.0, rel=1e-14)
        assert b.holds

    def test_rejects_inner_farther(self):
        with pytest.raises(DomainError):
            separation_bounds([2.0, 0.0], [1.0, 0.0])
        with pytest.raises(DomainError):
            separation_bounds([1.0, 0.0], [1.0, 0.0])

    def test_rejects_origin(self):
        with pytest.raises(OriginError):
            separation_bounds([0.0, 0.0], [1.0, 0.0])

    def test_sweep_holds(self):
        rng = np.random.default_rng(51)
        for _ in range(2000):
            q = int(rng.integers(1, 7))
            u = unit_rows(rng, 2, q)
            r = float(log_uniform_radii(rng, 1, 1e-3, 1e3)[0])
            grow = 1.0 + float(log_uniform_radii(rng, 1, 1e-9, 1e3)[0])
            b = separation_bounds(u[0] * r, u[1] * r * grow)
            assert b.holds


class TestDistanceIdentities:
    def test_frozen_inverted_distance(self):
        # (1,0),(2,0): e = 1, E = 1/2, R1 R2 = 1/2
        assert inverted_distance_residual([1.0, 0.0], [2.0, 0.0]) <= 1e-15

    def test_frozen_perpendicular_law(self):
        # r1 = r2 = 1, full angle pi/2: rhs = 4 sin^2(pi/4) = 2 = e^2
        assert law_of_cosines_residual([1.0, 0.0], [0.0, 1.0]) <= 1e-14

    def test_sweeps(self):
        rng = np.random.default_rng(61)
        for q in (1, 2, 3, 6):
            n = 2000
            x1 = unit_rows(rng, n, q) * log_uniform_radii(rng, n, 1e-3, 1e3)[:, None]
            x2 = unit_rows(rng, n, q) * log_uniform_radii(rng, n, 1e-3, 1e3)[:, None]
            for a, b in zip(x1, x2):
                assert inverted_distance_residual(a, b) <= 1e-10
                assert law_of_cosines_residual(a, b) <= 1e-10

    def test_law_rejects_origin(self):
        with pytest.raises(OriginError):
            law_of_cosines_residual([0.0, 0.0], [1.0, 0.0])

    def test_coincident_points(self):
        assert inverted_distance_residual([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_collinear_law(self):
        assert law_of_cosines_residual([2.0, 0.0], [1.0, 0.0]) <= 1e-14


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), q=st.integers(1, 6))
def test_involution_property(seed: int, q: int) -> None:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=q)
    n = np.linalg.norm(v)
    if n < 1e-12:
        return
    x = v / n * np.exp(rng.uniform(np.log(1e-6), np.log(1e6)))
    err = np.linalg.norm(invert(invert(x)) - x)
    assert err <= 1e-10 * np.linalg.norm(x)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), q=st.integers(1, 6))
def test_radius_law_property(seed: int, q: int) -> None:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=q)
    n = np.linalg.norm(v)
    if n < 1e-12:
        return
    x = v / n * np.exp(rng.uniform(np.log(1e-6), np.log(1e6)))
    assert abs(float(np.asarray(norms(invert(x)))) * np.linalg.norm(x) - 1.0) <= 1e-12


class TestPointCloud:
    def test_validation(self):
        with pytest.raises(DomainError):
            PointCloud(np.empty((0, 2)))
        with pytest.raises(DomainError):
            PointCloud(np.array([[np.nan, 0.0]]))
        with pytest.raises(DomainError):
            PointCloud(np.array([1.0, 2.0]))

    def test_dedup_keeps_first(self):
        cloud = PointCloud(np.array([[1.0, 0.0], [1.0 + 1e-15, 0.0], [2.0, 0.0]]))
        thinned, kept = cloud.deduplicated()
        assert kept.tolist() == [0, 2]
        assert len(thinned) == 2

    def test_dedup_respects_relative_threshold(self):
        # separation 1e-10 exceeds 1e-12 * (1 + 2), so both survive
        cloud = PointCloud(np.array([[2.0, 0.0], [2.0 + 1e-10, 0.0]]))
        _, kept = cloud.deduplicated()
        assert kept.tolist() == [0, 1]

    def test_min_relative_separation(self):
        cloud = PointCloud(np.array([[1.0, 0.0], [1.5, 0.0]]))
        assert cloud.min_relative_separation() == pytest.approx(0.5 / 2.5)

    def test_scaled(self):
        cloud = PointCloud(np.array([[1.0, 2.0]]))
        assert cloud.scaled(2.0).points.tolist() == [[2.0, 4.0]]
        with pytest.raises(DomainError):
            cloud.scaled(-1.0)


def test_norms_overflow_safe():
    assert float(np.asarray(norms(np.array([1e200, 0.0])))) == pytest.approx(1e200)
    assert float(np.asarray(norms(np.array([3e-300, 4e-300])))) == pytest.approx(5e-300)
