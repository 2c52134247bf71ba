import math

import numpy as np
import pytest

from projnorm.errors import (
    DegenerateCombination,
    DomainError,
    OutOfDomain,
)
from projnorm.jets import Jet, Point2
from projnorm.tensorcalc import MetricField, flat_metric
from projnorm.projective import (
    christoffel,
    class_combination,
    combine_sections,
    connection_coeffs,
    integrate_geodesic,
    liouville_from_metric,
    metric_from_liouville,
    metrizability_residuals,
    projective_connection,
)


def conformal_exp2x():
    """g = e^{2x}(dx^2 + dy^2)."""
    return MetricField.from_components(
        lambda x, y: ((2.0 * x).exp(), Jet.constant(0.0, x.order), (2.0 * x).exp()),
        "riemannian",
        None,
        "conformal",
    )


def wedge():
    return MetricField.from_components(
        lambda x, y: (x - y, Jet.constant(0.0, x.order), -(x - y)),
        "lorentzian",
        lambda p: p.x - p.y > 1e-2,
        "wedge",
    )


def gnomonic():
    """Round-sphere metric in the central-projection chart.

    Its geodesics are straight lines, so its projective connection vanishes
    identically — a strong cross-check of the Christoffel pipeline.
    """

    def build(x, y):
        rho2 = x * x + y * y
        den = (1.0 + rho2) * (1.0 + rho2)
        return ((1.0 + y * y) / den, -(x * y) / den, (1.0 + x * x) / den)

    return MetricField.from_components(build, "riemannian", None, "gnomonic")


class TestChristoffel:
    def test_flat(self):
        G = christoffel(flat_metric(), Point2(0.3, -2.0), 2)
        assert all(abs(c) < 1e-15 for jet in G for c in jet.coeffs)

    def test_conformal_oracle(self):
        G = christoffel(conformal_exp2x(), Point2(0.4, 1.7), 1)
        assert abs(G.G111.value - 1.0) < 1e-13
        assert abs(G.G212.value - 1.0) < 1e-13
        assert abs(G.G122.value + 1.0) < 1e-13
        for other in (G.G112, G.G211, G.G222):
            assert abs(other.value) < 1e-13

    def test_wedge_oracle(self):
        G = christoffel(wedge(), Point2(2, 1), 1)
        assert abs(G.G111.value - 0.5) < 1e-13
        assert abs(G.G122.value - 0.5) < 1e-13
        assert abs(G.G212.value - 0.5) < 1e-13
        assert abs(G.G112.value + 0.5) < 1e-13
        assert abs(G.G211.value + 0.5) < 1e-13
        assert abs(G.G222.value + 0.5) < 1e-13


class TestConnectionCoeffs:
    def test_flat(self):
        f = connection_coeffs(flat_metric(), Point2(5, -5), 2)
        assert all(abs(c) < 1e-15 for jet in f for c in jet.coeffs)

    def test_conformal(self):
        f = connection_coeffs(conformal_exp2x(), Point2(-0.3, 0.9), 1)
        assert abs(f.f0.value) < 1e-13
        assert abs(f.f1.value + 1.0) < 1e-13
        assert abs(f.f2.value) < 1e-13
        assert abs(f.f3.value + 1.0) < 1e-13

    def test_wedge(self):
        p = Point2(2.6, 0.4)
        f = connection_coeffs(wedge(), p, 1)
        c = 1.0 / (2.0 * (p.x - p.y))
        assert abs(f.f0.value - c) < 1e-13
        assert abs(f.f1.value + c) < 1e-13
        assert abs(f.f2.value + c) < 1e-13
        assert abs(f.f3.value - c) < 1e-13

    def test_gnomonic_connection_vanishes(self):
        conn = projective_connection(gnomonic())
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = Point2(*rng.uniform(-1.5, 1.5, size=2))
            for v in conn.values(p):
                assert abs(v) < 1e-12


class TestLiouvilleCorrespondence:
    def test_flat_section(self):
        a = liouville_from_metric(flat_metric())
        av = a.jets(Point2(0.4, 0.2), 2)
        assert abs(av.a11.value - 1.0) < 1e-15
        assert abs(av.a12.value) < 1e-15
        assert abs(av.a22.value - 1.0) < 1e-15

    def test_diagonal_powers(self):
        g = MetricField.from_components(
            lambda x, y: (
                Jet.constant(4.0, x.order),
                Jet.constant(0.0, x.order),
                Jet.constant(1.0, x.order),
            ),
            "riemannian",
            None,
            "diag41",
        )
        av = liouville_from_metric(g).jets(Point2(0, 0), 1)
        assert abs(av.a11.value - 4.0 ** (1 / 3)) < 1e-14
        assert abs(av.a22.value - 4.0 ** (-2 / 3)) < 1e-14

    def test_round_trip(self):
        g = gnomonic()
        back = metric_from_liouville(liouville_from_metric(g))
        rng = np.random.default_rng(5)
        for _ in range(20):
            p = Point2(*rng.uniform(-1, 1, size=2))
            gm, bm = g.jets(p, 2), back.jets(p, 2)
            for a, b in zip(gm.components(), bm.components()):
                scale = max(1.0, max(abs(c) for c in a.coeffs))
                assert max(
                    abs(u - v) for u, v in zip(a.coeffs, b.coeffs)
                ) < 1e-12 * scale

    def test_inverse_direction(self):
        from projnorm.tensorcalc import LiouvilleSection

        a = LiouvilleSection.from_components(
            lambda x, y: (
                Jet.constant(4.0 ** (1 / 3), x.order),
                Jet.constant(0.0, x.order),
                Jet.constant(4.0 ** (-2 / 3), x.order),
            )
        )
        gm = metric_from_liouville(a).jets(Point2(1, 1), 0)
        assert abs(gm.g11.value - 4.0) < 1e-13
        assert abs(gm.g22.value - 1.0) < 1e-13


class TestMetrizability:
    def test_self_solution(self):
        for g in (conformal_exp2x(), wedge(), gnomonic()):
            conn = projective_connection(g)
            a = liouville_from_metric(g)
            rng = np.random.default_rng(17)
            for _ in range(25):
                p = Point2(*rng.uniform(0.2, 1.4, size=2))
                p = Point2(p.x + 2.0, p.y)  # keep wedge well inside its domain
                res = metrizability_residuals(a, conn, p)
                assert max(abs(r) for r in res) < 1e-12, g.label

    def test_cross_solution(self):
        # the gnomonic sphere metric solves the flat metric's system:
        # both have straight-line geodesics
        conn = projective_connection(flat_metric())
        a = liouville_from_metric(gnomonic())
        rng = np.random.default_rng(23)
        for _ in range(25):
            p = Point2(*rng.uniform(-1.2, 1.2, size=2))
            res = metrizability_residuals(a, conn, p)
            assert max(abs(r) for r in res) < 1e-12

    def test_perturbation_detected(self):
        # A constant shift would be invisible (flat connection, derivative-only
        # equations), so perturb with a term whose gradient is order 0.1.
        g = gnomonic()
        conn = projective_connection(flat_metric())
        base = liouville_from_metric(g)
        from projnorm.jets import coordinate_jets
        from projnorm.tensorcalc import LiouvilleSection, SectionJet

        def perturbed(p, order):
            av = base.jets(p, order)
            xj, yj = coordinate_jets(p, order)
            return SectionJet(av.a11 + 0.1 * xj * yj, av.a12, av.a22)

        bad = LiouvilleSection(perturbed, base.domain, "perturbed")
        res = metrizability_residuals(bad, conn, Point2(0.6, 0.4))
        assert max(abs(r) for r in res) > 1e-3


class TestClassCombination:
    def pair(self):
        return [liouville_from_metric(flat_metric()), liouville_from_metric(gnomonic())]

    def test_basis_elements(self):
        gens = self.pair()
        g = class_combination(gens, (1.0, 0.0))
        gm = g.jets(Point2(0.3, 0.1), 1)
        assert abs(gm.g11.value - 1.0) < 1e-13
        assert abs(gm.g12.value) < 1e-13
        assert abs(gm.g22.value - 1.0) < 1e-13
        g2 = class_combination(gens, (0.0, 1.0))
        direct = gnomonic().jets(Point2(0.3, 0.1), 1)
        got = g2.jets(Point2(0.3, 0.1), 1)
        for a, b in zip(got.components(), direct.components()):
            assert abs(a.value - b.value) < 1e-12

    def test_connection_invariance(self):
        gens = self.pair()
        rng = np.random.default_rng(29)
        for _ in range(5):
            K = tuple(rng.uniform(0.3, 2.0, size=2))
            g = class_combination(gens, K)
            conn = projective_connection(g)
            for _ in range(10):
                p = Point2(*rng.uniform(-0.8, 0.8, size=2))
                if not g.domain(p):
                    continue
                for v in conn.values(p):
                    assert abs(v) < 1e-11

    def test_zero_combination_rejected(self):
        with pytest.raises(ValueError):
            combine_sections(self.pair(), (0.0, 0.0))

    def test_degenerate_point_raises(self):
        # flat minus flat is identically degenerate
        gens = [
            liouville_from_metric(flat_metric()),
            liouville_from_metric(flat_metric()),
        ]
        g = class_combination(gens, (1.0, -1.0))
        with pytest.raises(DegenerateCombination):
            g.jets(Point2(0.1, 0.2), 0)
        assert not g.domain(Point2(0.1, 0.2))


class TestGeodesics:
    def test_flat_straight_line(self):
        conn = projective_connection(flat_metric())
        run = integrate_geodesic(conn, Point2(0, 1), 0.5, 0.1, 50)
        assert not run.hit_boundary
        for p in run.points:
            assert abs(p.y - (1 + 0.5 * (p.x - 0))) < 1e-12

    def test_gnomonic_straight_line(self):
        conn = projective_connection(gnomonic())
        run = integrate_geodesic(conn, Point2(-0.5, 0.2), -0.3, 0.05, 20)
        for p in run.points:
            assert abs(p.y - (0.2 - 0.3 * (p.x + 0.5))) < 1e-10

    def test_same_connection_same_trajectory(self):
        # projectively equivalent metrics produce identical slope fields
        conn_flat = projective_connection(flat_metric())
        conn_sphere = projective_connection(gnomonic())
        run1 = integrate_geodesic(conn_flat, Point2(0.1, -0.2), 0.7, 0.05, 30)
        run2 = integrate_geodesic(conn_sphere, Point2(0.1, -0.2), 0.7, 0.05, 30)
        for p, q in zip(run1.points, run2.points):
            assert abs(p.y - q.y) < 1e-10

    def test_rk4_convergence(self):
        conn = projective_connection(conformal_exp2x())
        start, slope, span = Point2(0.0, 0.0), 0.4, 0.8

        def endpoint(n):
            run = integrate_geodesic(conn, start, slope, span / n, n)
            assert not run.hit_boundary
            return run.points[-1].y

        e1 = abs(endpoint(20) - endpoint(40))
        e2 = abs(endpoint(40) - endpoint(80))
        order = math.log2(e1 / e2)
        assert 3.7 < order < 4.3

    def test_steep_start_rejected(self):
        conn = projective_connection(flat_metric())
        with pytest.raises(DomainError):
            integrate_geodesic(conn, Point2(0, 0), 2000.0, 0.1, 5)

    def test_boundary_stop(self):
        # Slope equation for this metric: y'' = (1-s)^2 (1+s) / (2(x-y)),
        # so only starts with s > 1 drive the curve into the x=y edge.
        g = wedge()
        conn = projective_connection(g)
        run = integrate_geodesic(conn, Point2(1.0, 0.5), 1.5, 0.05, 200)
        assert run.hit_boundary
        assert len(run.points) < 200
        assert g.domain(run.points[-1])

    def test_out_of_domain_start(self):
        conn = projective_connection(wedge())
        with pytest.raises(OutOfDomain):
            integrate_geodesic(conn, Point2(0.0, 1.0), 0.1, 0.1, 5)
