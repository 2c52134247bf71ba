"""2D tensor calculus on jet-valued fields.

Metrics are handled in the quadratic-form convention
``g = g11 dx^2 + 2 g12 dxdy + g22 dy^2``, so a printed cross term
``f(x,y) dxdy`` enters as ``g12 = f/2``.  Metrics written complexly as
``A dz^2 + conj(A) dzbar^2`` are assembled into real components through
:func:`assemble_from_dz2`, which keeps all downstream machinery real.

The weighted sections that linearize the metrizability problem carry the
fixed density weight -4/3; their Lie derivative picks up the divergence term
``weight * (d_k w^k) t_ij`` and their pullback the density factor
``|det J|^weight``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import (
    OrderExceeded,
    OutOfDomain,
    SingularJacobian,
    SingularMetric,
)
from .jets import Jet, Point2, compose, coordinate_jets

SECTION_WEIGHT = -4.0 / 3.0

RIEMANNIAN = "riemannian"
LORENTZIAN = "lorentzian"


# --- jet-valued tensors at a point ------------------------------------------


@dataclass(frozen=True)
class MetricJet:
    """Symmetric metric components expanded at a point."""

    g11: Jet
    g12: Jet
    g22: Jet

    @property
    def order(self) -> int:
        return self.g11.order

    def components(self) -> tuple[Jet, Jet, Jet]:
        return (self.g11, self.g12, self.g22)

    def det(self) -> Jet:
        return self.g11 * self.g22 - self.g12 * self.g12

    def truncate(self, order: int) -> "MetricJet":
        return MetricJet(
            self.g11.truncate(order),
            self.g12.truncate(order),
            self.g22.truncate(order),
        )

    def values(self) -> tuple[float, float, float]:
        return (self.g11.value, self.g12.value, self.g22.value)


@dataclass(frozen=True)
class SectionJet:
    """Weighted symmetric section components expanded at a point."""

    a11: Jet
    a12: Jet
    a22: Jet

    @property
    def order(self) -> int:
        return self.a11.order

    def components(self) -> tuple[Jet, Jet, Jet]:
        return (self.a11, self.a12, self.a22)

    def det(self) -> Jet:
        return self.a11 * self.a22 - self.a12 * self.a12

    def truncate(self, order: int) -> "SectionJet":
        return SectionJet(
            self.a11.truncate(order),
            self.a12.truncate(order),
            self.a22.truncate(order),
        )

    def values(self) -> tuple[float, float, float]:
        return (self.a11.value, self.a12.value, self.a22.value)

    def combine(self, other: "SectionJet", ca: float, cb: float) -> "SectionJet":
        return SectionJet(
            self.a11 * ca + other.a11 * cb,
            self.a12 * ca + other.a12 * cb,
            self.a22 * ca + other.a22 * cb,
        )


@dataclass(frozen=True)
class MixedTensorJet:
    """A (1,1)-tensor: row index up, column index down."""

    m11: Jet
    m12: Jet
    m21: Jet
    m22: Jet

    def det(self) -> Jet:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> Jet:
        return self.m11 + self.m22

    def values(self):
        return (
            (self.m11.value, self.m12.value),
            (self.m21.value, self.m22.value),
        )


@dataclass(frozen=True)
class VectorFieldJet:
    """Components of w = w1 d_x + w2 d_y expanded at a point."""

    w1: Jet
    w2: Jet

    @property
    def order(self) -> int:
        return self.w1.order

    def values(self) -> tuple[float, float]:
        return (self.w1.value, self.w2.value)


# --- fields ------------------------------------------------------------------


def _everywhere(_: Point2) -> bool:
    return True


@dataclass(frozen=True)
class MetricField:
    """Evaluator from a point to a MetricJet, with domain and signature.

    ``signature`` may be None for fields whose definite/indefinite character
    varies between components of the domain (e.g. arbitrary section
    combinations); a declared signature is re-checked at every evaluation.
    """

    evaluator: Callable[[Point2, int], MetricJet]
    signature: str | None
    domain: Callable[[Point2], bool]
    label: str

    def jets(self, p: Point2, order: int) -> MetricJet:
        if not self.domain(p):
            # Give the evaluator one shot at explaining the exclusion with a
            # precise OutOfDomain subclass (degenerate combination, vanishing
            # section determinant); fall back to the generic error.
            try:
                self.evaluator(p, order)
            except OutOfDomain:
                raise
            except Exception:
                pass
            raise OutOfDomain(f"{self.label}: point {tuple(p)} outside domain")
        mj = self.evaluator(p, order)
        d = mj.g11.value * mj.g22.value - mj.g12.value ** 2
        if d == 0:
            raise SingularMetric(f"{self.label}: degenerate at {tuple(p)}")
        if self.signature is not None:
            found = RIEMANNIAN if d > 0 else LORENTZIAN
            if found != self.signature:
                raise SingularMetric(
                    f"{self.label}: signature {found} at {tuple(p)} "
                    f"contradicts declared {self.signature}"
                )
        return mj

    @classmethod
    def from_components(
        cls,
        build: Callable[[Jet, Jet], tuple[Jet, Jet, Jet]],
        signature: str | None,
        domain: Callable[[Point2], bool] | None = None,
        label: str = "metric",
    ) -> "MetricField":
        def evaluator(p: Point2, order: int) -> MetricJet:
            xj, yj = coordinate_jets(p, order)
            return MetricJet(*build(xj, yj))

        return cls(evaluator, signature, domain or _everywhere, label)


@dataclass(frozen=True)
class LiouvilleSection:
    """Weighted symmetric tensor field of density weight -4/3."""

    evaluator: Callable[[Point2, int], SectionJet]
    domain: Callable[[Point2], bool]
    label: str
    weight: float = SECTION_WEIGHT

    def jets(self, p: Point2, order: int) -> SectionJet:
        if not self.domain(p):
            raise OutOfDomain(f"{self.label}: point {tuple(p)} outside domain")
        return self.evaluator(p, order)

    @classmethod
    def from_components(
        cls,
        build: Callable[[Jet, Jet], tuple[Jet, Jet, Jet]],
        domain: Callable[[Point2], bool] | None = None,
        label: str = "section",
    ) -> "LiouvilleSection":
        def evaluator(p: Point2, order: int) -> SectionJet:
            xj, yj = coordinate_jets(p, order)
            return SectionJet(*build(xj, yj))

        return cls(evaluator, domain or _everywhere, label)


@dataclass(frozen=True)
class VectorField:
    """Evaluator from a point to a VectorFieldJet."""

    evaluator: Callable[[Point2, int], VectorFieldJet]
    label: str
    domain: Callable[[Point2], bool] = field(default=_everywhere)

    def jets(self, p: Point2, order: int) -> VectorFieldJet:
        if not self.domain(p):
            raise OutOfDomain(f"{self.label}: point {tuple(p)} outside domain")
        return self.evaluator(p, order)

    @classmethod
    def from_components(
        cls,
        build: Callable[[Jet, Jet], tuple[Jet, Jet]],
        label: str = "w",
        domain: Callable[[Point2], bool] | None = None,
    ) -> "VectorField":
        def evaluator(p: Point2, order: int) -> VectorFieldJet:
            xj, yj = coordinate_jets(p, order)
            return VectorFieldJet(*build(xj, yj))

        return cls(evaluator, label, domain or _everywhere)


@dataclass(frozen=True)
class CoordinateMap:
    """A coordinate transformation with jet-valued components."""

    components: Callable[[Jet, Jet], tuple[Jet, Jet]]
    domain: Callable[[Point2], bool]
    name: str

    def jets(self, p: Point2, order: int) -> tuple[Jet, Jet]:
        if not self.domain(p):
            raise OutOfDomain(f"map {self.name}: {tuple(p)} outside domain")
        uj, vj = coordinate_jets(p, order)
        return self.components(uj, vj)

    def apply(self, p: Point2) -> Point2:
        xj, yj = self.jets(p, 0)
        return Point2(float(xj.value), float(yj.value))


def identity_map() -> CoordinateMap:
    return CoordinateMap(lambda u, v: (u, v), _everywhere, "identity")


# --- operations ---------------------------------------------------------------


def det2(m: MetricJet | SectionJet | MixedTensorJet) -> Jet:
    """Determinant of a 2x2 jet-valued tensor."""
    return m.det()


def inv2(m: MetricJet) -> MetricJet:
    """Contravariant components of a metric (adjugate over determinant)."""
    d = m.det()
    if d.value == 0:
        raise SingularMetric("inv2: zero determinant at base point")
    return MetricJet(m.g22 / d, -m.g12 / d, m.g11 / d)


def _sym_lie(t11, t12, t22, w: VectorFieldJet, weight: float):
    order = t11.order
    if order < 1 or w.order < 1:
        raise OrderExceeded("Lie derivative needs input jets of order >= 1")
    out = order - 1
    w1, w2 = w.w1.truncate(out), w.w2.truncate(out)
    w1x, w1y = w.w1.dx(), w.w1.dy()
    w2x, w2y = w.w2.dx(), w.w2.dy()
    s11, s12, s22 = t11.truncate(out), t12.truncate(out), t22.truncate(out)
    div = w1x + w2y
    l11 = (
        w1 * t11.dx()
        + w2 * t11.dy()
        + 2.0 * (s11 * w1x + s12 * w2x)
        + weight * div * s11
    )
    l12 = (
        w1 * t12.dx()
        + w2 * t12.dy()
        + s12 * w1x
        + s22 * w2x
        + s11 * w1y
        + s12 * w2y
        + weight * div * s12
    )
    l22 = (
        w1 * t22.dx()
        + w2 * t22.dy()
        + 2.0 * (s12 * w1y + s22 * w2y)
        + weight * div * s22
    )
    return l11, l12, l22


def lie_derivative(
    t: MetricJet | SectionJet, w: VectorFieldJet, weight: float | None = None
) -> MetricJet | SectionJet:
    """Lie derivative along w; output order is one less than the input.

    The weight defaults to 0 for metrics and -4/3 for weighted sections,
    adding ``weight * (div w) * t`` to the tensorial part.
    """
    if isinstance(t, MetricJet):
        wgt = 0.0 if weight is None else weight
        return MetricJet(*_sym_lie(t.g11, t.g12, t.g22, w, wgt))
    if isinstance(t, SectionJet):
        wgt = SECTION_WEIGHT if weight is None else weight
        return SectionJet(*_sym_lie(t.a11, t.a12, t.a22, w, wgt))
    raise TypeError(f"cannot take a Lie derivative of {type(t).__name__}")


def pullback_metric(
    tau: CoordinateMap, g: MetricField, p: Point2, order: int = 1
) -> MetricJet:
    """(tau^* g) at p: J^T (g o tau) J computed in jets."""
    X, Y = tau.jets(p, order + 1)
    Xx, Xy, Yx, Yy = X.dx(), X.dy(), Y.dx(), Y.dy()
    if (Xx * Yy - Xy * Yx).value == 0:
        raise SingularJacobian(f"map {tau.name}: singular Jacobian at {tuple(p)}")
    q = Point2(float(X.value), float(Y.value))
    gm = g.jets(q, order)
    c11 = compose(gm.g11, X, Y)
    c12 = compose(gm.g12, X, Y)
    c22 = compose(gm.g22, X, Y)
    return MetricJet(
        c11 * Xx * Xx + 2.0 * c12 * Xx * Yx + c22 * Yx * Yx,
        c11 * Xx * Xy + c12 * (Xx * Yy + Xy * Yx) + c22 * Yx * Yy,
        c11 * Xy * Xy + 2.0 * c12 * Xy * Yy + c22 * Yy * Yy,
    )


def pullback_section(
    tau: CoordinateMap, a: LiouvilleSection, p: Point2, order: int = 1
) -> SectionJet:
    """Pullback of a weighted section, including |det J|^weight."""
    X, Y = tau.jets(p, order + 1)
    Xx, Xy, Yx, Yy = X.dx(), X.dy(), Y.dx(), Y.dy()
    detj = Xx * Yy - Xy * Yx
    if detj.value == 0:
        raise SingularJacobian(f"map {tau.name}: singular Jacobian at {tuple(p)}")
    q = Point2(float(X.value), float(Y.value))
    av = a.jets(q, order)
    c11 = compose(av.a11, X, Y)
    c12 = compose(av.a12, X, Y)
    c22 = compose(av.a22, X, Y)
    weight_factor = detj.pow_abs(a.weight)
    return SectionJet(
        (c11 * Xx * Xx + 2.0 * c12 * Xx * Yx + c22 * Yx * Yx) * weight_factor,
        (c11 * Xx * Xy + c12 * (Xx * Yy + Xy * Yx) + c22 * Yx * Yy)
        * weight_factor,
        (c11 * Xy * Xy + 2.0 * c12 * Xy * Yy + c22 * Yy * Yy) * weight_factor,
    )


def trace_with(g: MetricJet, h: MetricJet | SectionJet) -> Jet:
    """g^{ij} h_{ij} as a jet."""
    d = g.det()
    if d.value == 0:
        raise SingularMetric("trace_with: degenerate metric")
    h11, h12, h22 = h.components()
    return (g.g22 * h11 - 2.0 * g.g12 * h12 + g.g11 * h22) / d


def assemble_from_dz2(a_coeff: Jet) -> tuple[Jet, Jet, Jet]:
    """Real metric components of A dz^2 + conj(A) dzbar^2.

    With dz^2 = dx^2 - dy^2 + 2i dxdy the quadratic form is
    2 Re(A) (dx^2 - dy^2) - 4 Im(A) dxdy, i.e. g11 = 2 Re A,
    g12 = -2 Im A (the dxdy coefficient is twice g12) and g22 = -2 Re A.
    """
    re = a_coeff.real_part()
    im = a_coeff.imag_part()
    return (2.0 * re, -2.0 * im, -2.0 * re)


def detect_signature(m: MetricJet) -> str:
    d = m.g11.value * m.g22.value - m.g12.value ** 2
    if d == 0:
        raise SingularMetric("cannot detect signature of a degenerate metric")
    return RIEMANNIAN if d > 0 else LORENTZIAN


def flat_metric() -> MetricField:
    """The Euclidean plane, handy as a reference in tests and examples."""
    one = lambda x, y: (  # noqa: E731 - tiny closure
        Jet.constant(1.0, x.order),
        Jet.constant(0.0, x.order),
        Jet.constant(1.0, x.order),
    )
    return MetricField.from_components(one, RIEMANNIAN, None, "flat")
