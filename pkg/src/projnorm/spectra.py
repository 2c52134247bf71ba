"""Spectral structure of the projective action on the solution space.

A projective vector field w acts on the solution space of the metrizability
system through the Lie derivative.  This module recovers the matrix of that
action from sampled section data, normalizes it to one of the three canonical
2x2 forms (two real eigenvalues / Jordan block / complex pair), converts
between the two standard eigenvalue-ratio parameters, builds Benenti tensors
of metric pairs with their A/B/C letter classification, detects homothety,
and handles the polar reparametrization of the complex-pair coefficient
plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    OriginExcluded,
    PoleOfMap,
    RankDeficientBasis,
    ZeroMatrix,
)
from .jets import Point2
from .tensorcalc import (
    LiouvilleSection,
    MetricField,
    MixedTensorJet,
    VectorField,
    inv2,
    lie_derivative,
)

TWO_REAL = "TwoReal"
JORDAN = "Jordan"
COMPLEX_PAIR = "ComplexPair"

#: dead band on normalized discriminants; below this the eigenvalues are
#: treated as numerically equal
DISCRIMINANT_BAND = 1e-9

#: singular values below this fraction of the largest are treated as zero
LSTSQ_CUTOFF = 1e-12

ZERO_MATRIX_CUTOFF = 1e-9

HOMOTHETY_TOL = 1e-9


@dataclass(frozen=True)
class SpectralClass:
    """Canonical form of the action: kind plus eigenvalue-ratio parameter.

    ``lam`` is the ratio of the two real eigenvalues (ordered so that
    |lam| >= 1) for kind TwoReal, the non-negative ratio |Re/Im| for kind
    ComplexPair, and None for the defective Jordan kind.
    """

    kind: str
    lam: float | None

    @property
    def xi(self) -> float | None:
        """The companion parameter of ``lam``, where that conversion exists."""
        if self.kind == JORDAN or self.lam is None:
            return None
        return xi_lambda(self.lam)


@dataclass(frozen=True, eq=False)
class LieMatrix:
    """Least-squares matrix of the action on a section basis, with fit quality.

    ``A[i, j]`` is the coefficient of the j-th basis section in the Lie
    derivative of the i-th one.  ``residual`` is the max relative misfit of
    the fit over all sampled equations.
    """

    A: np.ndarray
    residual: float

    @property
    def size(self) -> int:
        return self.A.shape[0]


def lie_matrix_recover(
    w: VectorField,
    basis: Sequence[LiouvilleSection],
    points: Sequence[Point2],
) -> LieMatrix:
    """Fit the matrix A with L_w a_i = sum_j A_ij a_j over sampled points.

    Each sample point contributes three scalar equations per basis element
    (one per independent component of the symmetric sections).  The combined
    system is solved by singular-value pseudo-inversion; at least m^2 points
    are required for an m-element basis so that the system stays comfortably
    overdetermined.

    Raises RankDeficientBasis when the sampled sections are numerically
    linearly dependent, which would leave A underdetermined.
    """
    m = len(basis)
    pts = list(points)
    if m < 1:
        raise ValueError("need at least one basis section")
    if len(pts) < m * m:
        raise ValueError(
            f"{len(pts)} points give {3 * len(pts)} equations; "
            f"need at least {3 * m * m} for a {m}-element basis"
        )

    design_rows: list[list[float]] = []
    target_rows: list[list[float]] = []
    for p in pts:
        wj = w.jets(p, 1)
        section_vals = []
        lie_vals = []
        for a in basis:
            av = a.jets(p, 1)
            section_vals.append(av.values())
            lie_vals.append(lie_derivative(av, wj).values())
        for comp in range(3):
            design_rows.append([section_vals[j][comp] for j in range(m)])
            target_rows.append([lie_vals[i][comp] for i in range(m)])

    B = np.array(design_rows)
    Y = np.array(target_rows)
    X, _, rank, _ = np.linalg.lstsq(B, Y, rcond=LSTSQ_CUTOFF)
    if rank < m:
        raise RankDeficientBasis(
            f"sampled basis has rank {rank} < {m}; sections are dependent"
        )
    mismatch = B @ X - Y
    residual = 0.0
    for i in range(m):
        scale = max(1.0, float(np.max(np.abs(Y[:, i]))))
        residual = max(residual, float(np.max(np.abs(mismatch[:, i]))) / scale)
    return LieMatrix(X.T, residual)


def normalize_spectral(A: LieMatrix | np.ndarray) -> SpectralClass:
    """Reduce a recovered 2x2 action matrix to its canonical form.

    The matrix is defined up to an overall nonzero factor (rescaling the
    projective field rescales the whole action), so only eigenvalue ratios
    survive:

    * two distinct real eigenvalues -> TwoReal with lam their ratio,
      ordered so |lam| >= 1;
    * complex pair alpha +- i beta -> ComplexPair with lam = |alpha/beta|
      (the sign freedom of the overall factor makes lam non-negative);
    * defective double eigenvalue -> Jordan;
    * double eigenvalue with full eigenspace (a scalar matrix) is the
      unit-ratio case of the first form: TwoReal with lam = 1.

    Raises ZeroMatrix for a numerically zero input.  Discriminants within
    DISCRIMINANT_BAND of zero (relative to the squared matrix norm) route to
    the equal-eigenvalue branch rather than guessing a sign.
    """
    M = A.A if isinstance(A, LieMatrix) else np.asarray(A, dtype=float)
    if M.shape != (2, 2):
        raise ValueError(
            "canonical forms are defined for the two-dimensional action; "
            f"got shape {M.shape}"
        )
    scale = float(np.max(np.abs(M)))
    if scale < ZERO_MATRIX_CUTOFF:
        raise ZeroMatrix("action matrix is numerically zero")

    tr = float(M[0, 0] + M[1, 1])
    det = float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    disc = tr * tr - 4.0 * det
    band = DISCRIMINANT_BAND * scale * scale

    if disc > band:
        root = math.sqrt(disc)
        big, small = (tr + root) / 2.0, (tr - root) / 2.0
        if abs(small) > abs(big):
            big, small = small, big
        if abs(small) < LSTSQ_CUTOFF * scale:
            raise ZeroMatrix(
                "one eigenvalue is numerically zero; the ratio normalization "
                "does not apply"
            )
        return SpectralClass(TWO_REAL, big / small)
    if disc < -band:
        alpha = tr / 2.0
        beta = math.sqrt(-disc) / 2.0
        return SpectralClass(COMPLEX_PAIR, abs(alpha) / beta)

    # Double eigenvalue: defective matrices are Jordan; scalar matrices are
    # the lam = 1 two-real form (both orderings coincide there).
    deviation = math.sqrt(
        (M[0, 0] - tr / 2.0) ** 2
        + M[0, 1] ** 2
        + M[1, 0] ** 2
        + (M[1, 1] - tr / 2.0) ** 2
    )
    if deviation > DISCRIMINANT_BAND * scale:
        return SpectralClass(JORDAN, None)
    return SpectralClass(TWO_REAL, 1.0)


def xi_lambda(lam: float) -> float:
    """Convert the eigenvalue ratio to the exponent parameter: 2(lam-1)/(2lam+1)."""
    den = 2.0 * lam + 1.0
    if den == 0.0:
        raise PoleOfMap("lam = -1/2 is the pole of the conversion")
    return 2.0 * (lam - 1.0) / den


def lambda_xi(xi: float) -> float:
    """Inverse of :func:`xi_lambda`: lam = (xi+2)/(2(1-xi))."""
    den = 2.0 * (1.0 - xi)
    if den == 0.0:
        raise PoleOfMap("xi = 1 is the pole of the inverse conversion")
    return (xi + 2.0) / den


def benenti(
    g: MetricField, gbar: MetricField, p: Point2, order: int = 1
) -> MixedTensorJet:
    """Benenti tensor of a metric pair: |det(gbar)/det(g)|^{1/3} gbar^{-1} g.

    Also computed in the equivalent sigma-variable form (sigma^{ij} =
    |det g|^{1/3} g^{ij}; the tensor is sigma_bar sigma^{-1}) as an internal
    consistency check on the jet arithmetic.
    """
    gm = g.jets(p, order)
    gb = gbar.jets(p, order)
    factor = (gb.det() / gm.det()).pow_abs(1.0 / 3.0)
    ib = inv2(gb)
    l11 = factor * (ib.g11 * gm.g11 + ib.g12 * gm.g12)
    l12 = factor * (ib.g11 * gm.g12 + ib.g12 * gm.g22)
    l21 = factor * (ib.g12 * gm.g11 + ib.g22 * gm.g12)
    l22 = factor * (ib.g12 * gm.g12 + ib.g22 * gm.g22)

    # sigma-form cross-check on the constant terms
    det_g, det_gb = gm.det().value, gb.det().value
    sg = np.array([[gm.g11.value, gm.g12.value], [gm.g12.value, gm.g22.value]])
    sgb = np.array([[gb.g11.value, gb.g12.value], [gb.g12.value, gb.g22.value]])
    sigma = abs(det_g) ** (1.0 / 3.0) * np.linalg.inv(sg)
    sigma_bar = abs(det_gb) ** (1.0 / 3.0) * np.linalg.inv(sgb)
    alt = sigma_bar @ np.linalg.inv(sigma)
    got = np.array([[l11.value, l12.value], [l21.value, l22.value]])
    span = max(1.0, float(np.max(np.abs(got))))
    assert float(np.max(np.abs(alt - got))) < 1e-9 * span, (
        "sigma-form disagrees with the determinant-ratio form"
    )
    return MixedTensorJet(l11, l12, l21, l22)


def benenti_letter(L: MixedTensorJet) -> str:
    """Letter classification by the eigenvalue type of the constant term.

    'A' for two distinct real eigenvalues, 'B' for a complex-conjugate pair,
    'C' for a defective double eigenvalue, and 'degenerate' when the tensor
    is a scalar multiple of the identity (reported, not classified; no
    letter applies there).  Ties are resolved by a dead band of width
    DISCRIMINANT_BAND relative to the squared tensor norm.
    """
    (l11, l12), (l21, l22) = L.values()
    tr = l11 + l22
    det = l11 * l22 - l12 * l21
    norm = math.sqrt(l11 * l11 + l12 * l12 + l21 * l21 + l22 * l22)
    discriminant = tr * tr - 4.0 * det
    band = DISCRIMINANT_BAND * norm * norm
    if discriminant > band:
        return "A"
    if discriminant < -band:
        return "B"
    deviation = math.sqrt(
        (l11 - tr / 2.0) ** 2 + l12 * l12 + l21 * l21 + (l22 - tr / 2.0) ** 2
    )
    if deviation > DISCRIMINANT_BAND * norm:
        return "C"
    return "degenerate"


@dataclass(frozen=True)
class HomothetyResult:
    """Outcome of the homothety fit L_w g = eta g over a sample set."""

    homothetic: bool
    eta: float | None
    misfit: float

    @property
    def essential(self) -> bool:
        return not self.homothetic


def homothety_check(
    g: MetricField, w: VectorField, points: Sequence[Point2]
) -> HomothetyResult:
    """Decide whether w is homothetic for g by least squares on L_w g = eta g.

    A single constant eta is fitted across all sampled components; the field
    is homothetic iff the max relative misfit stays below HOMOTHETY_TOL.
    The verdict is cross-checked on the weighted section of g (whose
    eigenvalue must then be -eta/3); a section-level misfit above tolerance
    vetoes the homothety even when the metric-level fit looks clean.
    """
    from .projective import liouville_from_metric

    a = liouville_from_metric(g)
    g_rows: list[tuple[float, float]] = []
    a_rows: list[tuple[float, float]] = []
    for p in points:
        wj = w.jets(p, 1)
        gm = g.jets(p, 1)
        lg = lie_derivative(gm, wj)
        for gv, lv in zip(gm.values(), lg.values()):
            g_rows.append((gv, lv))
        av = a.jets(p, 1)
        la = lie_derivative(av, wj)
        for sv, lv in zip(av.values(), la.values()):
            a_rows.append((sv, lv))

    def fit(rows: list[tuple[float, float]]) -> tuple[float, float]:
        gsq = sum(v * v for v, _ in rows)
        if gsq == 0.0:
            return 0.0, math.inf
        coef = sum(v * lv for v, lv in rows) / gsq
        worst = 0.0
        for v, lv in rows:
            scale = max(1.0, abs(lv), abs(coef * v))
            worst = max(worst, abs(lv - coef * v) / scale)
        return coef, worst

    eta, misfit_g = fit(g_rows)
    mu, misfit_a = fit(a_rows)
    misfit = max(misfit_g, misfit_a)
    ok = misfit < HOMOTHETY_TOL
    if ok and abs(mu + eta / 3.0) > 1e-6 * max(1.0, abs(eta)):
        ok = False  # the two fits disagree; not a genuine homothety
    return HomothetyResult(ok, eta if ok else None, misfit)


def polar_reparam(k1: float, k2: float, lam: float) -> tuple[float, float]:
    """Solve K1 = K e^{lam theta} sin(theta), K2 = K e^{lam theta} cos(theta).

    For lam = 0 this is plain polar decomposition with radius K > 0 and
    angle theta in (-pi/2, pi/2]; coefficient pairs with K2 < 0 are mapped
    to their antipode (the representation covers the half-plane, and
    opposite pairs describe the same geometry up to overall sign).

    For lam > 0 the angle runs over all of R and the radius is confined to
    K in [1, e^{2 lam pi}) to make the spiral representation unique: with
    (R, phi) the polar coordinates of (K1, K2), the inclination is
    alpha = (ln(R)/lam - phi) mod 2pi, and then K = e^{lam alpha},
    theta = ln(R)/lam - alpha.  The round trip through
    :func:`polar_coeffs` is exact in this regime.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    if k1 == 0.0 and k2 == 0.0:
        raise OriginExcluded("the zero coefficient pair has no representation")
    if lam == 0.0:
        radius = math.hypot(k1, k2)
        if k2 == 0.0:
            return radius, math.pi / 2.0
        return radius, math.atan(k1 / k2)
    big_r = math.hypot(k1, k2)
    phi = math.atan2(k1, k2)
    alpha = (math.log(big_r) / lam - phi) % (2.0 * math.pi)
    return math.exp(lam * alpha), math.log(big_r) / lam - alpha


def polar_coeffs(radius: float, theta: float, lam: float) -> tuple[float, float]:
    """Inverse of :func:`polar_reparam`: the coefficient pair of (K, theta)."""
    if radius <= 0:
        raise ValueError("the radius parameter must be positive")
    common = radius * math.exp(lam * theta)
    return common * math.sin(theta), common * math.cos(theta)
