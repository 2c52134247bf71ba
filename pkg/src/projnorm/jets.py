"""Truncated-Taylor (jet) arithmetic in two variables.

A :class:`Jet` stores the Taylor coefficients of a scalar field at a base
point, up to a configurable total order (default 4).  Coefficient ``(i, j)``
holds ``d_x^i d_y^j f / (i! j!)``, so the constant term is the field value and
:meth:`Jet.deriv` recovers raw partial derivatives.  All differential
operators of the toolkit — Christoffel symbols, Lie derivatives, curvature,
the mobility obstructions — are assembled from this arithmetic, which keeps
every derivative exact to machine precision instead of finite-differenced.

Coefficients are held in a dense graded-lexicographic tuple: degree blocks in
increasing total degree, and within a block descending x-power, i.e.
``(0,0) | (1,0) (0,1) | (2,0) (1,1) (0,2) | ...``.  Jets are immutable and all
operations are pure, so values can be shared freely across threads.

Real and complex jets are kept distinct: binary operations between jets
require equal order and equal scalar kind.  Multiplying a real jet by a
complex *scalar* promotes the result, which is how the complex-written
metrics of the catalog are assembled from real coordinate jets.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

from .errors import DivisionByZeroValue, DomainError, OrderExceeded

Scalar = complex | float

REAL = "real"
COMPLEX = "complex"


class Point2(NamedTuple):
    """A point of the coordinate plane."""

    x: float
    y: float


@lru_cache(maxsize=None)
def _monomials(order: int) -> tuple[tuple[int, int], ...]:
    """Exponent pairs (i, j) with i + j <= order, graded-lex order."""
    return tuple((d - k, k) for d in range(order + 1) for k in range(d + 1))


@lru_cache(maxsize=None)
def _position(order: int) -> dict[tuple[int, int], int]:
    return {m: k for k, m in enumerate(_monomials(order))}


def _coeff_count(order: int) -> int:
    return (order + 1) * (order + 2) // 2


@lru_cache(maxsize=None)
def _mul_table(order: int) -> tuple[tuple[int, int, int], ...]:
    """Precomputed (pos_a, pos_b, pos_out) triples for the Cauchy product."""
    mons = _monomials(order)
    pos = _position(order)
    table = []
    for ka, (ia, ja) in enumerate(mons):
        for kb, (ib, jb) in enumerate(mons):
            if ia + ib + ja + jb <= order:
                table.append((ka, kb, pos[ia + ib, ja + jb]))
    return tuple(table)


def _binomial(p: float, k: int) -> float:
    """Generalized binomial coefficient p(p-1)...(p-k+1)/k!."""
    out = 1.0
    for m in range(k):
        out *= (p - m) / (m + 1)
    return out


class Jet:
    """Taylor expansion of a scalar field at a point, truncated at ``order``."""

    __slots__ = ("order", "coeffs", "kind")

    def __init__(self, order: int, coeffs: Sequence[Scalar], kind: str):
        if order < 0:
            raise ValueError("jet order must be >= 0")
        if len(coeffs) != _coeff_count(order):
            raise ValueError(
                f"order-{order} jet needs {_coeff_count(order)} coefficients, "
                f"got {len(coeffs)}"
            )
        if kind not in (REAL, COMPLEX):
            raise ValueError(f"unknown scalar kind {kind!r}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("jets are immutable")

    # --- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar, order: int, kind: str | None = None) -> "Jet":
        if kind is None:
            kind = COMPLEX if isinstance(value, complex) else REAL
        zero = 0j if kind == COMPLEX else 0.0
        coeffs = [zero] * _coeff_count(order)
        coeffs[0] = complex(value) if kind == COMPLEX else float(value)
        return cls(order, coeffs, kind)

    @classmethod
    def coordinate(cls, value: float, axis: str, order: int) -> "Jet":
        """Jet of the coordinate function x or y at the given value."""
        if axis not in ("x", "y"):
            raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
        out = [0.0] * _coeff_count(order)
        out[0] = float(value)
        if order >= 1:
            out[1 if axis == "x" else 2] = 1.0
        return cls(order, out, REAL)

    # --- basic queries ----------------------------------------------------

    @property
    def value(self) -> Scalar:
        return self.coeffs[0]

    def coeff(self, i: int, j: int) -> Scalar:
        if i < 0 or j < 0 or i + j > self.order:
            raise OrderExceeded(
                f"coefficient ({i},{j}) outside order-{self.order} jet"
            )
        return self.coeffs[_position(self.order)[i, j]]

    def deriv(self, i: int, j: int) -> Scalar:
        """Partial derivative d_x^i d_y^j at the base point."""
        return self.coeff(i, j) * math.factorial(i) * math.factorial(j)

    def __repr__(self) -> str:
        terms = ", ".join(
            f"({i},{j}): {c!r}"
            for (i, j), c in zip(_monomials(self.order), self.coeffs)
            if c != 0
        )
        return f"Jet(order={self.order}, {{{terms or '0'}}})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self.order == other.order
            and self.kind == other.kind
            and self.coeffs == other.coeffs
        )

    __hash__ = None  # mutable-free but compared by tolerance in practice

    # --- structural operations -------------------------------------------

    def truncate(self, order: int) -> "Jet":
        """Drop coefficients above the given total order."""
        if order > self.order:
            raise OrderExceeded(
                f"cannot extend an order-{self.order} jet to order {order}"
            )
        if order == self.order:
            return self
        return Jet(order, self.coeffs[: _coeff_count(order)], self.kind)

    def dx(self) -> "Jet":
        """Jet of the x-derivative; the order drops by one."""
        return self._shift(axis=0)

    def dy(self) -> "Jet":
        """Jet of the y-derivative; the order drops by one."""
        return self._shift(axis=1)

    def _shift(self, axis: int) -> "Jet":
        if self.order == 0:
            raise OrderExceeded("cannot differentiate an order-0 jet")
        new_order = self.order - 1
        pos = _position(self.order)
        out = []
        for (i, j) in _monomials(new_order):
            if axis == 0:
                out.append((i + 1) * self.coeffs[pos[i + 1, j]])
            else:
                out.append((j + 1) * self.coeffs[pos[i, j + 1]])
        return Jet(new_order, out, self.kind)

    # --- real/complex structure ------------------------------------------

    def to_complex(self) -> "Jet":
        if self.kind == COMPLEX:
            return self
        return Jet(self.order, [complex(c) for c in self.coeffs], COMPLEX)

    def real_part(self) -> "Jet":
        if self.kind == REAL:
            return self
        return Jet(self.order, [c.real for c in self.coeffs], REAL)

    def imag_part(self) -> "Jet":
        if self.kind == REAL:
            return Jet(self.order, [0.0] * len(self.coeffs), REAL)
        return Jet(self.order, [c.imag for c in self.coeffs], REAL)

    def conjugate(self) -> "Jet":
        if self.kind == REAL:
            return self
        return Jet(self.order, [c.conjugate() for c in self.coeffs], COMPLEX)

    # --- arithmetic -------------------------------------------------------

    def _check_mate(self, other: "Jet") -> None:
        if self.order != other.order:
            raise ValueError(
                f"jet order mismatch: {self.order} vs {other.order}"
            )
        if self.kind != other.kind:
            raise ValueError(
                f"jet scalar-kind mismatch: {self.kind} vs {other.kind}; "
                "lift the real operand with to_complex() first"
            )

    def _promote_with(self, value: Scalar) -> "Jet":
        if self.kind == REAL and isinstance(value, complex):
            return self.to_complex()
        return self

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check_mate(other)
            return Jet(
                self.order,
                [a + b for a, b in zip(self.coeffs, other.coeffs)],
                self.kind,
            )
        if isinstance(other, (int, float, complex)):
            base = self._promote_with(other)
            out = list(base.coeffs)
            out[0] = out[0] + other
            return Jet(base.order, out, base.kind)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.order, [-c for c in self.coeffs], self.kind)

    def __sub__(self, other):
        if isinstance(other, Jet):
            self._check_mate(other)
            return Jet(
                self.order,
                [a - b for a, b in zip(self.coeffs, other.coeffs)],
                self.kind,
            )
        if isinstance(other, (int, float, complex)):
            return self.__add__(-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check_mate(other)
            a, b = self.coeffs, other.coeffs
            zero = 0j if self.kind == COMPLEX else 0.0
            out = [zero] * len(a)
            for ka, kb, ko in _mul_table(self.order):
                out[ko] += a[ka] * b[kb]
            return Jet(self.order, out, self.kind)
        if isinstance(other, (int, float, complex)):
            base = self._promote_with(other)
            return Jet(base.order, [c * other for c in base.coeffs], base.kind)
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet":
        """Series inverse 1/f, requiring a nonzero constant term."""
        b0 = self.value
        if b0 == 0:
            raise DivisionByZeroValue("division by a jet with zero value")
        u = (self * (1.0 / b0)) - 1.0  # zero constant term
        # 1/f = (1/b0) * sum_k (-u)^k, evaluated by Horner.
        acc = Jet.constant(1.0, self.order, self.kind)
        for _ in range(self.order):
            acc = 1.0 - u * acc
        return acc * (1.0 / b0)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            self._check_mate(other)
            return self * other.reciprocal()
        if isinstance(other, (int, float, complex)):
            if other == 0:
                raise DivisionByZeroValue("division of a jet by scalar zero")
            return self * (1.0 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.reciprocal() * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError(
                "jet ** requires an integer exponent; use pow_abs for real "
                "powers"
            )
        if n < 0:
            return self.reciprocal() ** (-n)
        acc = Jet.constant(1.0, self.order, self.kind)
        base = self
        m = n
        while m:
            if m & 1:
                acc = acc * base
            m >>= 1
            if m:
                base = base * base
        return acc

    # --- elementary functions --------------------------------------------

    def _compose(self, coeffs: Sequence[Scalar]) -> "Jet":
        """Evaluate sum_k coeffs[k] (f - f0)^k by Horner's scheme."""
        w = self - self.value
        kind = self.kind
        if any(isinstance(c, complex) for c in coeffs):
            kind = COMPLEX
            w = w.to_complex()
        acc = Jet.constant(coeffs[self.order], self.order, kind)
        for k in range(self.order - 1, -1, -1):
            acc = acc * w + coeffs[k]
        return acc

    def _math(self):
        return cmath if self.kind == COMPLEX else math

    def exp(self) -> "Jet":
        e0 = self._math().exp(self.value)
        fact = 1.0
        coeffs = []
        for k in range(self.order + 1):
            coeffs.append(e0 / fact)
            fact *= k + 1
        return self._compose(coeffs)

    def sin(self) -> "Jet":
        return self._trig(offset=0)

    def cos(self) -> "Jet":
        return self._trig(offset=1)

    def _trig(self, offset: int) -> "Jet":
        m = self._math()
        v = self.value
        cycle = (m.sin(v), m.cos(v), -m.sin(v), -m.cos(v))
        fact = 1.0
        coeffs = []
        for k in range(self.order + 1):
            coeffs.append(cycle[(k + offset) % 4] / fact)
            fact *= k + 1
        return self._compose(coeffs)

    def tan(self) -> "Jet":
        if self._math().cos(self.value) == 0:
            raise DomainError("tan at a pole of the tangent")
        return self.sin() / self.cos()

    def arctan(self) -> "Jet":
        """Inverse tangent (principal branch for complex jets)."""
        v = self.value
        m = self._math()
        denom0 = 1.0 + v * v
        if denom0 == 0:
            raise DomainError("arctan at a pole (base value +-i)")
        # Taylor coefficients of 1/(1 + (v+t)^2) = 1/(denom0 + 2v t + t^2)
        # by the linear recurrence, then termwise integration.
        deriv = [1.0 / denom0]
        for k in range(1, self.order):
            acc = -2.0 * v * deriv[k - 1]
            if k >= 2:
                acc -= deriv[k - 2]
            deriv.append(acc / denom0)
        coeffs: list[Scalar] = [m.atan(v)]
        for k in range(1, self.order + 1):
            coeffs.append(deriv[k - 1] / k)
        return self._compose(coeffs)

    def ln_abs(self) -> "Jet":
        """log |f| for real jets; the principal branch log f for complex."""
        v = self.value
        if v == 0:
            raise DomainError("logarithm at zero base value")
        if self.kind == REAL:
            c0: Scalar = math.log(abs(v))
        else:
            c0 = cmath.log(v)
        coeffs: list[Scalar] = [c0]
        vk = 1.0 + 0.0 * v  # 1 with matching scalar type
        sign = 1.0
        for k in range(1, self.order + 1):
            vk *= v
            coeffs.append(sign / (k * vk))
            sign = -sign
        return self._compose(coeffs)

    def pow_abs(self, p: float) -> "Jet":
        """|f|^p for real jets; the principal branch f^p for complex jets.

        For real bases this follows the convention that non-integer powers
        act on the absolute value, so the result is defined on both sign
        branches (never across zero).
        """
        v = self.value
        if v == 0:
            raise DomainError("pow_abs at zero base value")
        if self.kind == REAL:
            val: Scalar = abs(v) ** p
        else:
            val = cmath.exp(p * cmath.log(v))
        coeffs: list[Scalar] = []
        vk = 1.0 + 0.0 * v
        for k in range(self.order + 1):
            coeffs.append(_binomial(p, k) * val / vk)
            vk *= v
        return self._compose(coeffs)

    def sqrt_abs(self) -> "Jet":
        return self.pow_abs(0.5)


# --- module-level operations used throughout the toolkit --------------------


def seed_coordinate(p: Point2, which: str, order: int) -> Jet:
    """Jet of the coordinate function ``x`` or ``y`` at p."""
    if which not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {which!r}")
    value = p.x if which == "x" else p.y
    return Jet.coordinate(value, which, order)


def coordinate_jets(p: Point2, order: int) -> tuple[Jet, Jet]:
    """Both coordinate jets at p — the seed for every field evaluator."""
    return seed_coordinate(p, "x", order), seed_coordinate(p, "y", order)


def complex_lift(p: Point2, order: int) -> tuple[Jet, Jet]:
    """Jets of z = x + iy and its conjugate, in the real variables."""
    xj, yj = coordinate_jets(p, order)
    z = xj.to_complex() + 1j * yj.to_complex()
    return z, z.conjugate()


def extract_derivative(a: Jet, i: int, j: int) -> Scalar:
    """Partial derivative d_x^i d_y^j of the expanded field at the base."""
    return a.deriv(i, j)


def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    table: dict[str, Callable[[Jet, Jet], Jet]] = {
        "add": Jet.__add__,
        "sub": Jet.__sub__,
        "mul": Jet.__mul__,
        "div": Jet.__truediv__,
    }
    if op not in table:
        raise ValueError(f"unknown jet operation {op!r}")
    return table[op](a, b)


def jet_elementary(a: Jet, fn: str, p: float | None = None) -> Jet:
    if fn == "pow_abs":
        if p is None:
            raise ValueError("pow_abs requires the exponent argument")
        return a.pow_abs(p)
    table: dict[str, Callable[[Jet], Jet]] = {
        "exp": Jet.exp,
        "ln_abs": Jet.ln_abs,
        "sin": Jet.sin,
        "cos": Jet.cos,
        "tan": Jet.tan,
        "arctan": Jet.arctan,
        "sqrt_abs": Jet.sqrt_abs,
    }
    if fn not in table:
        raise ValueError(f"unknown elementary function {fn!r}")
    return table[fn](a)


def compose(f: Jet, xmap: Jet, ymap: Jet) -> Jet:
    """Substitute coordinate jets into f.

    ``f`` is a jet at the base point ``(xmap.value, ymap.value)``; the result
    is the jet of the composite field in the source variables of the maps.
    Used for pulling fields back along coordinate transformations.
    """
    if xmap.order != ymap.order:
        raise ValueError("map components must share an order")
    order = min(f.order, xmap.order)
    fx = f.truncate(order)
    dx_ = xmap.truncate(order) - xmap.value
    dy_ = ymap.truncate(order) - ymap.value
    if fx.kind == COMPLEX:
        dx_, dy_ = dx_.to_complex(), dy_.to_complex()
    pow_x = [Jet.constant(1.0, order, dx_.kind)]
    pow_y = [Jet.constant(1.0, order, dy_.kind)]
    for _ in range(order):
        pow_x.append(pow_x[-1] * dx_)
        pow_y.append(pow_y[-1] * dy_)
    acc = Jet.constant(0.0, order, fx.kind)
    pos = _position(order)
    for (i, j) in _monomials(order):
        c = fx.coeffs[pos[i, j]]
        if c != 0:
            acc = acc + pow_x[i] * pow_y[j] * c
    return acc
