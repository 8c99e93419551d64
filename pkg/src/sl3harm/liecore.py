"""Root data and decompositions for SL(3,R).

The diagonal torus A sits inside G = SL(3,R) with Lie algebra the traceless
diagonal matrices.  Everything downstream (spherical functions, spectral
windows, counting boxes) is phrased in the coordinates fixed here:

* basis ``H12 = diag(1,-1,0)``, ``H23 = diag(0,1,-1)`` of the Lie algebra,
  Killing form ``B(H,H') = Tr(HH')``;
* simple roots ``alpha1(H) = h1-h2``, ``alpha2(H) = h2-h3`` and their sum;
* the dual basis ``lam1(H) = h1``, ``lam2(H) = h1+h2`` which parametrizes
  characters ``p_s(a) = p1(a)^s1 p2(a)^s2`` with ``p1 = a1``, ``p2 = a1*a2``;
* the Weyl group S3 permuting diagonal entries, acting on spectral
  parameters s = (s1,s2) through the Killing-form identification.

The half-sum of positive roots corresponds to s = (1,1), so the module of
the Borel is ``delta = p_(1,1)^2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.linalg import rq

__all__ = [
    "LieVector",
    "DiagonalElement",
    "SpectralParameter",
    "WeylElement",
    "WEYL_GROUP",
    "WEYL_BY_NAME",
    "UnstableDecompositionError",
    "killing_form",
    "spectral_to_lie",
    "lie_to_spectral",
    "weyl_act",
    "character_eval",
    "iwasawa_decompose",
    "cartan_decompose",
    "distance_to_identity",
    "is_generic",
    "sort_to_chamber",
]

_TRACE_TOL = 1e-12
_DET_TOL = 1e-10


class UnstableDecompositionError(RuntimeError):
    """Input too ill-conditioned for a trustworthy factorization."""


@dataclass(frozen=True)
class LieVector:
    """Traceless diagonal triple (h1, h2, h3), a point of the Lie algebra."""

    h1: float
    h2: float
    h3: float

    def __post_init__(self):
        scale = max(1.0, abs(self.h1), abs(self.h2), abs(self.h3))
        if abs(self.h1 + self.h2 + self.h3) > 1e-10 * scale:
            raise ValueError("entries must sum to zero")

    @classmethod
    def of(cls, h1: float, h2: float) -> "LieVector":
        return cls(h1, h2, -h1 - h2)

    def as_array(self) -> np.ndarray:
        return np.array([self.h1, self.h2, self.h3])

    def as_matrix(self) -> np.ndarray:
        return np.diag(self.as_array())


H12 = LieVector(1.0, -1.0, 0.0)
H23 = LieVector(0.0, 1.0, -1.0)


def killing_form(h: LieVector, hp: LieVector) -> float:
    """Killing form B(H,H') = Tr(HH') on the diagonal torus algebra."""
    return h.h1 * hp.h1 + h.h2 * hp.h2 + h.h3 * hp.h3


@dataclass(frozen=True)
class DiagonalElement:
    """Positive diagonal (a1, a2, a3) with a1*a2*a3 = 1."""

    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        if min(self.a1, self.a2, self.a3) <= 0.0:
            raise ValueError("diagonal entries must be positive")
        det = self.a1 * self.a2 * self.a3
        if abs(det - 1.0) > 1e-9:
            raise ValueError(f"determinant {det} too far from 1")

    @classmethod
    def from_triple(cls, a) -> "DiagonalElement":
        a1, a2, a3 = (float(x) for x in a)
        det = a1 * a2 * a3
        if det <= 0:
            raise ValueError("need positive entries")
        # renormalize away float round-off in the determinant
        c = det ** (-1.0 / 3.0)
        return cls(a1 * c, a2 * c, a3 * c)

    @classmethod
    def from_roots(cls, alpha1: float, alpha2: float) -> "DiagonalElement":
        """Element with prescribed multiplicative roots a1/a2, a2/a3."""
        l1, l2 = math.log(alpha1), math.log(alpha2)
        return cls.from_log(LieVector((2 * l1 + l2) / 3.0, (l2 - l1) / 3.0,
                                      -(l1 + 2 * l2) / 3.0))

    @classmethod
    def from_log(cls, h: LieVector) -> "DiagonalElement":
        return cls(math.exp(h.h1), math.exp(h.h2), math.exp(h.h3))

    @classmethod
    def identity(cls) -> "DiagonalElement":
        return cls(1.0, 1.0, 1.0)

    def log(self) -> LieVector:
        v = np.log(self.as_array())
        v -= v.sum() / 3.0
        return LieVector(*v)

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3])

    def as_matrix(self) -> np.ndarray:
        return np.diag(self.as_array())

    @property
    def alpha1(self) -> float:
        return self.a1 / self.a2

    @property
    def alpha2(self) -> float:
        return self.a2 / self.a3

    @property
    def alpha3(self) -> float:
        return self.a1 / self.a3

    @property
    def p1(self) -> float:
        return self.a1

    @property
    def p2(self) -> float:
        return self.a1 * self.a2

    def in_positive_chamber(self, strict: bool = True) -> bool:
        if strict:
            return self.alpha1 > 1.0 and self.alpha2 > 1.0
        return self.alpha1 >= 1.0 and self.alpha2 >= 1.0


@dataclass(frozen=True)
class SpectralParameter:
    """s = (s1, s2) in C^2, coordinates of a linear form s1*lam1 + s2*lam2."""

    s1: complex
    s2: complex

    @classmethod
    def of(cls, s1, s2) -> "SpectralParameter":
        return cls(complex(s1), complex(s2))

    @classmethod
    def tempered(cls, t1: float, t2: float) -> "SpectralParameter":
        return cls(1j * t1, 1j * t2)

    @classmethod
    def from_type(cls, nu1, nu2) -> "SpectralParameter":
        """Spectral parameter of a form of type (nu1, nu2): s = 3*nu."""
        return cls(3 * complex(nu1), 3 * complex(nu2))

    def as_pair(self) -> tuple[complex, complex]:
        return (self.s1, self.s2)

    @property
    def real(self) -> tuple[float, float]:
        return (self.s1.real, self.s2.real)

    @property
    def imag(self) -> tuple[float, float]:
        return (self.s1.imag, self.s2.imag)

    def norm(self) -> float:
        """Norm sqrt(||lam_R||^2 + ||lam_I||^2) of the associated form."""
        qr = _killing_quadratic(*self.real)
        qi = _killing_quadratic(*self.imag)
        return math.sqrt(qr + qi)

    def conjugate(self) -> "SpectralParameter":
        """lam_R - lam_I, i.e. coefficientwise complex conjugate."""
        return SpectralParameter(self.s1.conjugate(), self.s2.conjugate())


def _killing_quadratic(u1: float, u2: float) -> float:
    # ||u1*lam1 + u2*lam2||_B^2; the dual Gram matrix is [[2/3,1/3],[1/3,2/3]].
    return (2.0 / 3.0) * (u1 * u1 + u1 * u2 + u2 * u2)


def spectral_to_lie(s: SpectralParameter) -> np.ndarray:
    """Complex diagonal of H_lambda, where lambda_s = B(H_lambda, .)."""
    s1, s2 = s.s1, s.s2
    return np.array([(2 * s1 + s2) / 3.0, (s2 - s1) / 3.0, -(s1 + 2 * s2) / 3.0])


def lie_to_spectral(u) -> SpectralParameter:
    return SpectralParameter(u[0] - u[1], u[1] - u[2])


@dataclass(frozen=True)
class WeylElement:
    """Permutation of {1,2,3} acting on diagonal entries.

    The action on a diagonal (h1,h2,h3) is (w.h)[i] = h[perm[i]]; composition
    is arranged so that (v @ w).h == v.(w.h).
    """

    perm: tuple[int, int, int]

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError("not a permutation of (0,1,2)")

    @property
    def name(self) -> str:
        return _PERM_NAMES[self.perm]

    def act_entries(self, u):
        arr = np.asarray(u)
        return arr[list(self.perm)]

    def act_lie(self, h: LieVector) -> LieVector:
        return LieVector(*self.act_entries(h.as_array()))

    def act_diagonal(self, a: DiagonalElement) -> DiagonalElement:
        return DiagonalElement(*self.act_entries(a.as_array()))

    def __matmul__(self, other: "WeylElement") -> "WeylElement":
        p, q = self.perm, other.perm
        return WeylElement((q[p[0]], q[p[1]], q[p[2]]))

    def inverse(self) -> "WeylElement":
        inv = [0, 0, 0]
        for i, j in enumerate(self.perm):
            inv[j] = i
        return WeylElement(tuple(inv))

    def is_identity(self) -> bool:
        return self.perm == (0, 1, 2)


_PERM_NAMES = {
    (0, 1, 2): "e",
    (1, 0, 2): "(1,2)",
    (2, 1, 0): "(1,3)",
    (0, 2, 1): "(2,3)",
    (1, 2, 0): "(1,2,3)",
    (2, 0, 1): "(1,3,2)",
}

WEYL_GROUP: tuple[WeylElement, ...] = tuple(
    WeylElement(p) for p in sorted(permutations((0, 1, 2)))
)
WEYL_BY_NAME = {w.name: w for w in WEYL_GROUP}
WEYL_IDENTITY = WEYL_BY_NAME["e"]


def weyl_act(w: WeylElement, s: SpectralParameter) -> SpectralParameter:
    """Action of the Weyl group on spectral parameters via B-duality.

    H_{w.lambda_s} = w.H_{lambda_s}; the explicit formulas on (s1,s2) are
    the five displayed transposition/cycle rules, e.g.
    (1,2).s = (-s1, s1+s2).
    """
    return lie_to_spectral(w.act_entries(spectral_to_lie(s)))


def character_eval(s: SpectralParameter, a: DiagonalElement) -> complex:
    """Torus character p_s(a) = p1(a)^s1 * p2(a)^s2."""
    return cmath.exp(s.s1 * math.log(a.p1) + s.s2 * math.log(a.p2))


def _as_group_matrix(g, tol: float = _DET_TOL) -> np.ndarray:
    m = np.asarray(g, dtype=float)
    if m.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    det = np.linalg.det(m)
    if abs(det - 1.0) > tol * max(1.0, np.abs(m).max() ** 3):
        raise ValueError(f"determinant {det} is not 1")
    return m


def iwasawa_decompose(g, cond_limit: float = 1e12):
    """Factor g = n a k with n unipotent upper triangular, a positive
    diagonal, k special orthogonal.

    Uses an RQ factorization with column/row sign normalization so the
    diagonal comes out positive; equivalent to Gram-Schmidt on the rows of
    g taken bottom-up.
    """
    m = _as_group_matrix(g)
    if np.linalg.cond(m) > cond_limit:
        raise UnstableDecompositionError("matrix is numerically singular")
    r, q = rq(m)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    r = r * signs[np.newaxis, :]
    q = q * signs[:, np.newaxis]
    diag = np.diag(r).copy()
    a = DiagonalElement.from_triple(diag)
    n = r / diag[np.newaxis, :]
    return n, a, q


def cartan_decompose(g):
    """Factor g = k1 b k2 with k1, k2 in SO(3) and b the singular values of
    g arranged decreasingly (the closed positive chamber representative)."""
    m = _as_group_matrix(g)
    u, sig, vt = np.linalg.svd(m)
    if np.linalg.det(u) < 0:
        u = u.copy()
        vt = vt.copy()
        u[:, 2] *= -1.0
        vt[2, :] *= -1.0
    b = DiagonalElement.from_triple(sig)
    return u, b, vt


def distance_to_identity(g) -> float:
    """Geodesic distance d(g, I) on G/K: sqrt(sum log^2 of singular values)."""
    _, b, _ = cartan_decompose(g)
    v = np.log(b.as_array())
    return float(np.sqrt(np.dot(v, v)))


def sort_to_chamber(a: DiagonalElement) -> DiagonalElement:
    """Weyl translate of a lying in the closed positive chamber."""
    arr = np.sort(a.as_array())[::-1]
    return DiagonalElement.from_triple(arr)


# ---------------------------------------------------------------------------
# genericity hyperplanes
# ---------------------------------------------------------------------------

def _tau_coefficients():
    """Coefficient rows for the rank-two exclusion hyperplanes.

    For each ordered pair (w1, w2) of distinct Weyl elements the two linear
    equations read c1*s1 + c2*s2 = 2*m1 - m2 and d1*s1 + d2*s2 = 2*m2 - m1,
    with ci, di the pairings B((w1-w2).H_{lam_i}, H) against H12 and H23.
    """
    h_lam1 = np.array([2.0, -1.0, -1.0]) / 3.0
    h_lam2 = np.array([1.0, 1.0, -2.0]) / 3.0
    rows = []
    for w1 in WEYL_GROUP:
        for w2 in WEYL_GROUP:
            if w1.perm == w2.perm:
                continue
            diffs = []
            for h in (h_lam1, h_lam2):
                delta = w1.act_entries(h) - w2.act_entries(h)
                diffs.append((delta[0] - delta[1], delta[1] - delta[2]))
            (c1, d1), (c2, d2) = diffs
            rows.append((c1, c2, d1, d2))
    return tuple(rows)


_TAU_ROWS = _tau_coefficients()


def is_generic(s: SpectralParameter, depth: int, tol: float = 1e-9) -> bool:
    """True when s avoids every exclusion hyperplane up to the given depth.

    Checked sets: the three coordinate lines s1 = 0, s2 = 0, s1 + s2 = 0;
    all Weyl translates of m1*s1 + m2*s2 = m1^2 + m2^2 - 2*m1*m2; and the
    codimension-two families indexed by pairs of Weyl elements, for
    1 <= m1, m2 <= depth.  A hyperplane counts as hit when its defining
    equation holds within ``tol``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    s1, s2 = s.s1, s.s2
    if min(abs(s1), abs(s2), abs(s1 + s2)) <= tol:
        return False
    orbit = [weyl_act(w.inverse(), s).as_pair() for w in WEYL_GROUP]
    for m1 in range(1, depth + 1):
        for m2 in range(1, depth + 1):
            rhs = m1 * m1 + m2 * m2 - 2 * m1 * m2
            for t1, t2 in orbit:
                if abs(m1 * t1 + m2 * t2 - rhs) <= tol:
                    return False
            r1 = 2 * m1 - m2
            r2 = 2 * m2 - m1
            for c1, c2, d1, d2 in _TAU_ROWS:
                if (abs(c1 * s1 + c2 * s2 - r1) <= tol
                        and abs(d1 * s1 + d2 * s2 - r2) <= tol):
                    return False
    return True
