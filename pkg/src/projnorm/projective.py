"""Projective connections, the metrizability system, and geodesics.

The unparametrized geodesics of a metric are the solutions of
``y'' = f0 + f1 y' + f2 y'^2 + f3 y'^3``; the four coefficients are built
from the Christoffel symbols as

    f0 = -G211,  f1 = G111 - 2 G212,  f2 = 2 G112 - G222,  f3 = G122.

Metrics sharing these coefficients share geodesics.  The correspondence
``a = g / |det g|^(2/3)`` (inverse: ``g = a / det(a)^2``) turns the search
for such metrics into the linear first-order system whose pointwise residuals
:func:`metrizability_residuals` evaluates; linear combinations of solutions
are mapped back to metrics by :func:`class_combination`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .errors import (
    DegenerateCombination,
    DegenerateSection,
    DomainError,
    OutOfDomain,
    SingularMetric,
)
from .jets import Jet, Point2
from .tensorcalc import (
    LiouvilleSection,
    MetricField,
    MetricJet,
    SectionJet,
    inv2,
)

MAX_GEODESIC_SLOPE = 1e3
COMBINATION_DET_CUTOFF = 1e-12


class ChristoffelJet(NamedTuple):
    """The six independent Christoffel symbols as jets (lower pair symmetric)."""

    G111: Jet
    G112: Jet
    G122: Jet
    G211: Jet
    G212: Jet
    G222: Jet


class ConnectionJets(NamedTuple):
    """Values of the four slope-polynomial coefficients at a point."""

    f0: Jet
    f1: Jet
    f2: Jet
    f3: Jet


@dataclass(frozen=True)
class ProjectiveConnection:
    """Field of connection coefficients (f0, f1, f2, f3)."""

    evaluator: Callable[[Point2, int], ConnectionJets]
    domain: Callable[[Point2], bool]
    label: str

    def jets(self, p: Point2, order: int) -> ConnectionJets:
        if not self.domain(p):
            raise OutOfDomain(f"{self.label}: point {tuple(p)} outside domain")
        return self.evaluator(p, order)

    def values(self, p: Point2) -> tuple[float, float, float, float]:
        f = self.jets(p, 0)
        return (f.f0.value, f.f1.value, f.f2.value, f.f3.value)


def christoffel(g: MetricField, p: Point2, order: int) -> ChristoffelJet:
    """Christoffel symbols of g at p, as jets of the requested order."""
    gm = g.jets(p, order + 1)
    ginv = inv2(gm).truncate(order)
    i11, i12, i22 = ginv.g11, ginv.g12, ginv.g22
    g11x, g11y = gm.g11.dx(), gm.g11.dy()
    g12x, g12y = gm.g12.dx(), gm.g12.dy()
    g22x, g22y = gm.g22.dx(), gm.g22.dy()
    half = 0.5
    t1 = 2.0 * g12x - g11y
    t2 = 2.0 * g12y - g22x
    return ChristoffelJet(
        G111=half * (i11 * g11x + i12 * t1),
        G112=half * (i11 * g11y + i12 * g22x),
        G122=half * (i11 * t2 + i12 * g22y),
        G211=half * (i12 * g11x + i22 * t1),
        G212=half * (i12 * g11y + i22 * g22x),
        G222=half * (i12 * t2 + i22 * g22y),
    )


def connection_coeffs(g: MetricField, p: Point2, order: int) -> ConnectionJets:
    """The four projective-connection coefficients of g at p."""
    G = christoffel(g, p, order)
    return ConnectionJets(
        f0=-G.G211,
        f1=G.G111 - 2.0 * G.G212,
        f2=2.0 * G.G112 - G.G222,
        f3=G.G122,
    )


def projective_connection(g: MetricField) -> ProjectiveConnection:
    """The connection of g, packaged as a reusable field."""
    return ProjectiveConnection(
        evaluator=lambda p, order: connection_coeffs(g, p, order),
        domain=g.domain,
        label=f"conn({g.label})",
    )


def liouville_from_metric(g: MetricField) -> LiouvilleSection:
    """The weighted section a = g / |det g|^(2/3) of weight -4/3."""

    def evaluator(p: Point2, order: int) -> SectionJet:
        gm = g.jets(p, order)
        det = gm.det()
        if det.value == 0:
            raise SingularMetric(f"{g.label}: degenerate at {tuple(p)}")
        fac = det.pow_abs(-2.0 / 3.0)
        return SectionJet(gm.g11 * fac, gm.g12 * fac, gm.g22 * fac)

    return LiouvilleSection(evaluator, g.domain, f"sol({g.label})")


def metric_from_liouville(
    a: LiouvilleSection, signature: str | None = None
) -> MetricField:
    """The metric g = a / det(a)^2 of a nondegenerate weighted section."""

    def evaluator(p: Point2, order: int) -> MetricJet:
        av = a.jets(p, order)
        det = av.det()
        if det.value == 0:
            raise DegenerateSection(f"{a.label}: degenerate at {tuple(p)}")
        d2 = det * det
        return MetricJet(av.a11 / d2, av.a12 / d2, av.a22 / d2)

    def domain(p: Point2) -> bool:
        if not a.domain(p):
            return False
        try:
            return a.jets(p, 0).det().value != 0
        except Exception:
            return False

    return MetricField(evaluator, signature, domain, f"metric({a.label})")


def combine_sections(
    generators: Sequence[LiouvilleSection], K: Sequence[float]
) -> LiouvilleSection:
    """The linear combination sum_i K_i a_i as a weighted section."""
    if len(generators) != len(K):
        raise ValueError("one coefficient per generator required")
    if not any(k != 0 for k in K):
        raise ValueError("the zero combination is excluded")

    def evaluator(p: Point2, order: int) -> SectionJet:
        parts = [a.jets(p, order) for a in generators]
        c11 = parts[0].a11 * K[0]
        c12 = parts[0].a12 * K[0]
        c22 = parts[0].a22 * K[0]
        for av, k in zip(parts[1:], K[1:]):
            c11 = c11 + av.a11 * k
            c12 = c12 + av.a12 * k
            c22 = c22 + av.a22 * k
        return SectionJet(c11, c12, c22)

    def domain(p: Point2) -> bool:
        return all(a.domain(p) for a in generators)

    label = "+".join(f"{k:g}*{a.label}" for a, k in zip(generators, K))
    return LiouvilleSection(evaluator, domain, label)


def _combination_degenerate(sv: SectionJet) -> bool:
    scale = max(1.0, max(abs(v) for v in sv.values()) ** 2)
    return abs(sv.det().value) < COMBINATION_DET_CUTOFF * scale


def class_combination(
    generators: Sequence[LiouvilleSection],
    K: Sequence[float],
    signature: str | None = None,
    label: str | None = None,
) -> MetricField:
    """The metric of the projective class with section sum_i K_i a_i.

    Evaluation at a point where the combination is degenerate (relative
    determinant below 1e-12) raises DegenerateCombination; the domain
    predicate excludes that locus, which is nowhere dense.
    """
    section = combine_sections(generators, K)

    def evaluator(p: Point2, order: int) -> MetricJet:
        sv = section.jets(p, order)
        if _combination_degenerate(sv):
            raise DegenerateCombination(
                f"combination K={list(K)} degenerate at {tuple(p)}"
            )
        det = sv.det()
        d2 = det * det
        return MetricJet(sv.a11 / d2, sv.a12 / d2, sv.a22 / d2)

    def domain(p: Point2) -> bool:
        if not section.domain(p):
            return False
        try:
            return not _combination_degenerate(section.jets(p, 0))
        except Exception:
            return False

    name = label or f"g[{','.join(f'{k:g}' for k in K)}]"
    return MetricField(evaluator, signature, domain, name)


def metrizability_residuals(
    a: LiouvilleSection, conn: ProjectiveConnection, p: Point2
) -> tuple[float, float, float, float]:
    """Normalized residuals of the four linear metrizability equations at p.

    Each residual is divided by max(1, magnitude of its largest summand), so
    a small value means the equation balances relative to the size of its
    terms even where the section components are huge.
    """
    av = a.jets(p, 1)
    f0, f1, f2, f3 = (fj.value for fj in conn.jets(p, 0))
    a11, a12, a22 = av.values()
    a11x, a11y = av.a11.dx().value, av.a11.dy().value
    a12x, a12y = av.a12.dx().value, av.a12.dy().value
    a22x, a22y = av.a22.dx().value, av.a22.dy().value

    rows = (
        (a11x, -(2.0 / 3.0) * f1 * a11, 2.0 * f0 * a12),
        (
            a11y,
            2.0 * a12x,
            -(4.0 / 3.0) * f2 * a11,
            (2.0 / 3.0) * f1 * a12,
            2.0 * f0 * a22,
        ),
        (
            2.0 * a12y,
            a22x,
            -2.0 * f3 * a11,
            -(2.0 / 3.0) * f2 * a12,
            (4.0 / 3.0) * f1 * a22,
        ),
        (a22y, -2.0 * f3 * a12, (2.0 / 3.0) * f2 * a22),
    )
    out = []
    for terms in rows:
        scale = max(1.0, max(abs(t) for t in terms))
        out.append(sum(terms) / scale)
    return tuple(out)


@dataclass(frozen=True)
class GeodesicRun:
    """Result of a geodesic integration: points actually traversed."""

    points: list[Point2]
    slopes: list[float]
    hit_boundary: bool
    reason: str | None = None


def integrate_geodesic(
    conn: ProjectiveConnection,
    start: Point2,
    slope: float,
    step: float,
    n: int,
) -> GeodesicRun:
    """Classical fourth-order Runge-Kutta on the geodesic slope equation.

    The curve is parametrized by x, which rules out near-vertical data:
    |slope| above 1e3 is rejected at the start and stops the run mid-way.
    The run also stops, with ``hit_boundary`` set, whenever the next point
    leaves the connection's domain.
    """
    if not conn.domain(start):
        raise OutOfDomain(f"geodesic start {tuple(start)} outside domain")
    if abs(slope) > MAX_GEODESIC_SLOPE:
        raise DomainError(
            f"initial slope {slope} too steep for the x-parametrized chart"
        )

    def rhs(x: float, y: float, s: float) -> tuple[float, float]:
        f0, f1, f2, f3 = conn.values(Point2(x, y))
        return s, f0 + s * (f1 + s * (f2 + s * f3))

    points = [start]
    slopes = [slope]
    x, y, s = start.x, start.y, slope
    for _ in range(n):
        try:
            k1y, k1s = rhs(x, y, s)
            k2y, k2s = rhs(x + step / 2, y + step * k1y / 2, s + step * k1s / 2)
            k3y, k3s = rhs(x + step / 2, y + step * k2y / 2, s + step * k2s / 2)
            k4y, k4s = rhs(x + step, y + step * k3y, s + step * k3s)
        except OutOfDomain:
            return GeodesicRun(points, slopes, True, "stage point left domain")
        y_next = y + step * (k1y + 2 * k2y + 2 * k3y + k4y) / 6.0
        s_next = s + step * (k1s + 2 * k2s + 2 * k3s + k4s) / 6.0
        x_next = x + step
        if abs(s_next) > MAX_GEODESIC_SLOPE:
            return GeodesicRun(points, slopes, True, "slope exceeded chart limit")
        if not conn.domain(Point2(x_next, y_next)):
            return GeodesicRun(points, slopes, True, "left domain")
        x, y, s = x_next, y_next, s_next
        points.append(Point2(x, y))
        slopes.append(s)
    return GeodesicRun(points, slopes, False)
