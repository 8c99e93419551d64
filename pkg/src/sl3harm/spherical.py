"""Numerical evaluation of the GL(3) spherical function.

Three independent routes are implemented and cross-checked:

* ``spherical_direct`` -- the defining K-integral of p_{s+1} over the
  Iwasawa projection.  For a diagonal argument the integrand only depends
  on the first and third rows of k, so the SO(3) integral collapses to a
  sphere x circle quadrature:

      phi_s(b) = avg_{w in S^2} ||w * b||^{-s2-1}
                 avg_{u in S^1, u _|_ w} ||u / b||^{-s1-1}.

* ``spherical_third`` -- the explicit triple integral with kernels
  P(X,Z) = 1 + X^2 + Z^2 and Q(X,Y,Z) = 1 + Y^2 + (XY-Z)^2, the second
  pair of factors evaluated at arguments scaled down by the multiplicative
  roots.  The normalizing constant is exact: at the identity the integrand
  collapses to 1/(PQ) whose integral is 2*pi^2, so kappa = 1/(2*pi^2).

* ``spherical_wall`` -- the wall representation at alpha1 = 1, rewritten
  over the simplex A1 + A2 + A3 = 3*L2 (L2 = 2*log(alpha2)/3) with weight
  prod (e^{A_i}-1)^{-1/2}; a trigonometric substitution absorbs the three
  inverse-square-root edges.  The phase we integrate is
  exp((s1*U + s2*V)/2) -- the half in the exponent is required for
  consistency with the triple integral, which the tests pin down.

The Harish-Chandra c-function is assembled from rank-one factors
Gamma(z)/Gamma(z + 1/2) over the root pairings z in {s1, s2, s1+s2},
normalized to 1 at the half-sum parameter s = (1,1); its modulus squared
reproduces the Plancherel density t1*t2*(t1+t2)*tanh(pi t1)*tanh(pi t2)
*tanh(pi(t1+t2)) with no further constant.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import loggamma

from .errors import GenericityError, PoleError
from .liecore import (
    DiagonalElement,
    SpectralParameter,
    WEYL_GROUP,
    character_eval,
    cartan_decompose,
    is_generic,
    sort_to_chamber,
    weyl_act,
)

__all__ = [
    "QuadratureConfig",
    "SphericalValue",
    "spherical_direct",
    "spherical_third",
    "spherical_wall",
    "plancherel_density",
    "c_function",
    "gangolli_leading",
    "chamber_density",
    "weyl_denominator",
    "KAPPA",
    "WALL_PREFACTOR",
]

# kappa of the third integral formula: the identity evaluation is exactly
# the integral of 1/(P*Q) = 2*pi^2 (the y-integral of 1/Q is pi/sqrt(P)).
KAPPA = 1.0 / (2.0 * math.pi ** 2)

# fitted multiplier for the wall formula prefactor pi*kappa*alpha2/sqrt(..);
# validated against spherical_third in the test suite, expected to be 1.
WALL_PREFACTOR = 1.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts and tail controls for the spherical quadratures."""

    nodes: int = 48
    tol: float = 1e-4
    truncation: float = 1e4

    def __post_init__(self):
        if self.nodes < 8:
            raise ValueError("need at least 8 nodes per axis")
        if not (0.0 < self.tol <= 1e-2):
            raise ValueError("tolerance must lie in (0, 1e-2]")
        if self.truncation <= 0:
            raise ValueError("truncation radius must be positive")

    def coarser(self) -> "QuadratureConfig":
        return QuadratureConfig(max(8, (2 * self.nodes) // 3), self.tol,
                                self.truncation)


@dataclass(frozen=True)
class SphericalValue:
    value: complex
    error: float

    def __post_init__(self):
        if self.error < 0:
            raise ValueError("error estimate must be nonnegative")


@lru_cache(maxsize=64)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _as_chamber_diag(a) -> DiagonalElement:
    if isinstance(a, DiagonalElement):
        return sort_to_chamber(a)
    _, b, _ = cartan_decompose(np.asarray(a, dtype=float))
    return b


def _sphere_circle_nodes(n: int):
    """Quadrature for the (w, u) geometry: w on S^2, u on the circle
    perpendicular to w.  Returns (w, e1, e2, weights, tau_count)."""
    nc = n
    nf = 2 * n
    c, cw = _gauss(nc)
    phi = 2.0 * math.pi * np.arange(nf) / nf
    cc, pp = np.meshgrid(c, phi, indexing="ij")
    ww = np.meshgrid(cw, np.full(nf, 1.0 / nf), indexing="ij")
    weight = 0.5 * ww[0] * ww[1]
    st = np.sqrt(1.0 - cc ** 2)
    w = np.stack([st * np.cos(pp), st * np.sin(pp), cc], axis=-1)
    e1 = np.stack([-np.sin(pp), np.cos(pp), np.zeros_like(pp)], axis=-1)
    e2 = np.cross(w, e1)
    return (w.reshape(-1, 3), e1.reshape(-1, 3), e2.reshape(-1, 3),
            weight.reshape(-1), 2 * n)


def _direct_value(s: SpectralParameter, b: DiagonalElement, n: int) -> complex:
    w, e1, e2, wt, ntau = _sphere_circle_nodes(n)
    barr = b.as_array()
    inv2 = 1.0 / barr ** 2
    # circle quadratic form ||u(tau)/b||^2 = m + r*cos(2 tau - psi)
    A = (e1 ** 2) @ inv2
    B = (e1 * e2) @ inv2
    C = (e2 ** 2) @ inv2
    tau = math.pi * np.arange(ntau) / ntau  # cos/sin periodic with period pi
    cos2, sin2 = np.cos(2 * tau), np.sin(2 * tau)
    q_u = (0.5 * (A + C))[:, None] + 0.5 * (A - C)[:, None] * cos2[None, :] \
        + B[:, None] * sin2[None, :]
    nw2 = (w ** 2) @ (barr ** 2)
    e_u = -(s.s1 + 1.0) / 2.0
    e_w = -(s.s2 + 1.0) / 2.0
    inner = np.exp(e_u * np.log(q_u)).mean(axis=1)
    outer = np.exp(e_w * np.log(nw2))
    return complex(np.sum(wt * outer * inner))


def spherical_direct(s: SpectralParameter, g,
                     q: QuadratureConfig = QuadratureConfig()) -> SphericalValue:
    """Spherical function by the defining K-average of p_{s+1} o IwA.

    Accepts a group matrix or a DiagonalElement; the value only depends on
    the Cartan middle factor, and phi_s(I) = 1 holds exactly since the
    integrand is the constant 1 there.
    """
    b = _as_chamber_diag(g)
    fine = _direct_value(s, b, q.nodes)
    coarse = _direct_value(s, b, q.coarser().nodes)
    return SphericalValue(fine, abs(fine - coarse))


# ---------------------------------------------------------------------------
# triple integral formula
# ---------------------------------------------------------------------------

def _third_raw(s: SpectralParameter, alpha1: float, alpha2: float,
               n: int, trunc: float) -> complex:
    # trunc is unused: elliptic polar coordinates in (x,z) plus tangent maps
    # fold the whole space in; the integrand decays like r^{-3} after the
    # y-integration, so the mapped weight stays bounded at the far edge.
    del trunc
    alpha3 = alpha1 * alpha2
    ny = max(24, (3 * n) // 4)
    gy, gwy = _gauss(ny)

    half_pi = math.pi / 2.0
    # Hyperbolic-sine maps per axis: after the y-integration the outer
    # integrand has purely imaginary singularities at distance >= 1, which
    # the sinh map keeps a uniform pi/2 off the real axis; node density per
    # unit is therefore scale-free and the range grows logarithmically.
    density = max(2.2, n / 18.0)
    tail_pad = 20.0
    ux = math.log(2.0 * alpha1) + tail_pad
    vz = math.log(2.0 * alpha3) + tail_pad
    nx = max(n, int(density * 2.0 * ux))
    nz = max(n, int(density * 2.0 * vz))
    gx, gwx = _gauss(nx)
    gz, gwz = _gauss(nz)
    x = np.sinh(ux * gx)
    wx = ux * gwx * np.cosh(ux * gx)
    z = np.sinh(vz * gz)
    wz = vz * gwz * np.cosh(vz * gz)

    X = x[:, None]
    Z = z[None, :]
    jac = wx[:, None] * wz[None, :]
    P = 1.0 + X ** 2 + Z ** 2
    Pt = 1.0 + (X / alpha1) ** 2 + (Z / alpha3) ** 2
    e1 = (-s.s1 - 1.0) / 2.0
    e2 = (-s.s2 - 1.0) / 2.0
    e3 = (s.s1 - 1.0) / 2.0
    e4 = (s.s2 - 1.0) / 2.0

    outer = np.exp(e1 * np.log(P) + e3 * np.log(Pt)) * jac

    # The two y-kernels Q = 1 + y^2 + (xy-z)^2 and its root-scaled copy are
    # upward parabolas in y with dips at cy, cyt and widths w0, wt.  Each
    # dip gets its own tangent map; a smooth rational partition of unity
    # (chi + chit = 1) splits the integrand between the two grids.
    A = 1.0 + X ** 2
    cy = X * Z / A
    qmin = P / A
    w0 = np.sqrt(P) / A
    At = 1.0 / alpha2 ** 2 + (X / alpha3) ** 2
    cyt = (X * Z / alpha3 ** 2) / At
    qtmin = 1.0 + (cyt / alpha2) ** 2 + ((X * cyt - Z) / alpha3) ** 2
    wt = np.sqrt(qtmin / At)

    ty = half_pi * gy[None, None, :]
    tan_y, sec2 = np.tan(ty), 1.0 / np.cos(ty) ** 2
    inner = np.zeros(P.shape, dtype=complex)
    for center, scale in ((cy, w0), (cyt, wt)):
        y = center[:, :, None] + scale[:, :, None] * tan_y
        wy = scale[:, :, None] * half_pi * gwy[None, None, :] * sec2
        xy_z = X[:, :, None] * y - Z[:, :, None]
        Q = 1.0 + y ** 2 + xy_z ** 2
        Qt = 1.0 + (y / alpha2) ** 2 + (xy_z / alpha3) ** 2
        qh = Q / qmin[:, :, None]
        qth = Qt / qtmin[:, :, None]
        chi = qth / (qh + qth) if scale is w0 else qh / (qh + qth)
        inner += (np.exp(e2 * np.log(Q) + e4 * np.log(Qt)) * chi * wy).sum(axis=2)
    return complex(np.sum(outer * inner))


def spherical_third(s: SpectralParameter, a,
                    q: QuadratureConfig = QuadratureConfig()) -> SphericalValue:
    """Spherical function by the explicit three-dimensional integral.

    The argument is Weyl-sorted into the closed positive chamber first.
    kappa is the exact constant 1/(2 pi^2) fixed by phi_s(I) = 1.
    """
    b = _as_chamber_diag(a)
    pref = KAPPA * character_eval(SpectralParameter(s.s1 - 1.0, s.s2 - 1.0), b)
    fine = _third_raw(s, b.alpha1, b.alpha2, q.nodes, q.truncation)
    coarse = _third_raw(s, b.alpha1, b.alpha2, q.coarser().nodes, q.truncation)
    return SphericalValue(pref * fine, abs(pref) * abs(fine - coarse))


# ---------------------------------------------------------------------------
# wall formula
# ---------------------------------------------------------------------------

def _wall_raw(s: SpectralParameter, l2: float, n: int) -> complex:
    span = 3.0 * l2
    g, gw = _gauss(2 * n)
    chi = (math.pi / 4.0) * (g + 1.0)
    th = chi
    wchi = (math.pi / 4.0) * gw
    C, T = np.meshgrid(chi, th, indexing="ij")
    WC, WT = np.meshgrid(wchi, wchi, indexing="ij")
    sc, cc = np.sin(C), np.cos(C)
    st, ct = np.sin(T), np.cos(T)
    a1 = span * (sc * ct) ** 2
    a2 = span * (sc * st) ** 2
    a3 = span * cc ** 2
    weight = 4.0 * span ** 2 * sc ** 3 * cc * st * ct
    theta = 1.0 / np.sqrt(np.expm1(a1) * np.expm1(a2) * np.expm1(a3))
    u = a1 + a2 - 2.0 * l2
    v = a1 - l2
    phase = np.exp(0.5 * (s.s1 * u + s.s2 * v))
    return complex(np.sum(WC * WT * weight * theta * phase))


def spherical_wall(s: SpectralParameter, alpha2: float,
                   q: QuadratureConfig = QuadratureConfig()) -> SphericalValue:
    """Spherical function on the wall alpha1 = 1 with second root alpha2."""
    if alpha2 <= 1.0:
        raise ValueError("wall formula needs alpha2 > 1")
    l2 = 2.0 * math.log(alpha2) / 3.0
    pref = WALL_PREFACTOR * math.pi * KAPPA * alpha2 / math.sqrt(alpha2 ** 2 - 1.0)
    fine = _wall_raw(s, l2, q.nodes)
    coarse = _wall_raw(s, l2, q.coarser().nodes)
    return SphericalValue(pref * fine, pref * abs(fine - coarse))


# ---------------------------------------------------------------------------
# Plancherel density, c-function, series leading term
# ---------------------------------------------------------------------------

def plancherel_density(t) -> float:
    """Spherical Plancherel weight t1 t2 (t1+t2) tanh(pi t1) tanh(pi t2)
    tanh(pi (t1+t2)); nonnegative and Weyl-invariant on the tempered line."""
    t1, t2 = float(t[0]), float(t[1])
    out = 1.0
    for x in (t1, t2, t1 + t2):
        out *= x * math.tanh(math.pi * x)
    return out


_C3_NORM = 3.0 * math.pi ** 1.5 / 16.0


def c_function(s: SpectralParameter, pole_tol: float = 1e-12) -> complex:
    """Harish-Chandra c-function as a product of rank-one factors.

    c3(s) = N * prod_{z in {s1, s2, s1+s2}} Gamma(z) / Gamma(z + 1/2),
    with N fixed so that c3((1,1)) = 1.  On the tempered line s = it this
    gives |c3(it)|^{-2} equal to the Plancherel density exactly.
    """
    out = complex(_C3_NORM)
    for z in (s.s1, s.s2, s.s1 + s.s2):
        z = complex(z)
        if abs(z - round(z.real)) < pole_tol and round(z.real) <= 0 \
                and abs(z.imag) < pole_tol:
            raise PoleError(f"rank-one factor has a pole at z={z}")
        out *= cmath.exp(loggamma(z) - loggamma(z + 0.5))
    return out


def weyl_denominator(a: DiagonalElement) -> float:
    """prod_i (1 - alpha_i(a)^{-2}), the chamber weight normalizing the
    spherical series; equals chamber_density(a) / (alpha1*alpha2)^4."""
    return ((1.0 - a.alpha1 ** -2) * (1.0 - a.alpha2 ** -2)
            * (1.0 - a.alpha3 ** -2))


def chamber_density(a: DiagonalElement) -> float:
    """Density (alpha1 alpha2)^2 (alpha1^2-1)(alpha2^2-1)(alpha3^2-1);
    zero exactly on the chamber walls."""
    return ((a.alpha1 * a.alpha2) ** 2 * (a.alpha1 ** 2 - 1.0)
            * (a.alpha2 ** 2 - 1.0) * (a.alpha3 ** 2 - 1.0))


def gangolli_leading(s: SpectralParameter, a: DiagonalElement,
                     depth: int = 4) -> complex:
    """Leading term of the spherical-function series deep in the chamber:

        phi_s(a) ~ D(a)^{-1/2} p_{(-1,-1)}(a) sum_w c3(w.s) p_{w.s}(a)

    with D the Weyl-denominator weight prod(1 - alpha_i^{-2}).  The series
    coefficient at order (0,0) is 1; higher orders are not summed.
    """
    if not is_generic(s, depth):
        raise GenericityError(f"{s} lies on an exclusion hyperplane")
    if a.alpha1 <= 1.0 + 1e-12 or a.alpha2 <= 1.0 + 1e-12:
        raise ValueError("argument must lie strictly inside the chamber")
    acc = 0j
    for w in WEYL_GROUP:
        ws = weyl_act(w, s)
        acc += c_function(ws) * character_eval(ws, a)
    pref = character_eval(SpectralParameter(-1.0, -1.0), a)
    return acc * pref / math.sqrt(weyl_denominator(a))
