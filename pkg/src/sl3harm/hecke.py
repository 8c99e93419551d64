"""Exact integral Hecke algebra for GL(3).

Double cosets GL3(Z) g GL3(Z) of nonsingular integer matrices are classified
by their determinantal divisors d_k(g) = gcd of all k x k minors; the
elementary divisors e1 | e2 | e3 are e1 = d1, e2 = d2/d1, e3 = d3/d2.  Each
double coset splits into finitely many left cosets GL3(Z) h; we take row
Hermite normal forms (upper triangular, positive diagonal, entries above the
diagonal reduced modulo the diagonal entry of their column) as canonical
representatives.

Products of double cosets are expanded through representative pairs and
re-classified; the structure constants are left-coset pair counts divided by
the target's left-coset degree, and all arithmetic is exact (python ints and
fractions).  ``verify_linearizations`` machine-checks the six prime-level
composition identities used by the amplifier, and ``amplifier`` builds the
index set {(p,1), (1,p), (p,p) : L <= p <= 2L} with its coefficient rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ResourceLimitError

__all__ = [
    "DivisorTriple",
    "CosetList",
    "HeckeElement",
    "LinearizationReport",
    "Amplifier",
    "determinantal_divisors",
    "same_double_coset",
    "enumerate_left_cosets",
    "coset_count",
    "multiply_double_cosets",
    "normalized_hecke",
    "normalized_hecke_dual",
    "hecke_identity",
    "verify_linearizations",
    "amplifier",
    "primes_in",
]

Matrix = tuple[tuple[int, int, int], ...]

DEFAULT_BOX_BUDGET = 20_000_000


def _det3(m: Matrix) -> int:
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def _minors2(m: Matrix):
    (a, b, c), (d, e, f), (g, h, i) = m
    return (
        e * i - f * h, d * i - f * g, d * h - e * g,
        b * i - c * h, a * i - c * g, a * h - b * g,
        b * f - c * e, a * f - c * d, a * e - b * d,
    )


@dataclass(frozen=True, order=True)
class DivisorTriple:
    """Determinantal divisors (d1, d2, d3) of a double coset."""

    d1: int
    d2: int
    d3: int

    def __post_init__(self):
        if min(self.d1, self.d2, self.d3) <= 0:
            raise ValueError("divisors must be positive")
        if self.d2 % self.d1 or (self.d1 * self.d3) % (self.d2 * self.d2):
            raise ValueError(f"invalid divisor chain {self!r}")
        # d1^k | d_k follows from the two conditions above; assert anyway
        assert self.d2 % self.d1 == 0 and self.d3 % self.d1 ** 3 == 0

    @classmethod
    def from_elementary(cls, e1: int, e2: int, e3: int) -> "DivisorTriple":
        if e1 <= 0 or e2 % e1 or e3 % e2:
            raise ValueError(f"not an elementary divisor chain ({e1},{e2},{e3})")
        return cls(e1, e1 * e2, e1 * e2 * e3)

    @classmethod
    def from_diagonal(cls, y1: int, y2: int, y3: int) -> "DivisorTriple":
        e = sorted((y1, y2, y3))
        return cls.from_elementary(*e)

    @property
    def elementary(self) -> tuple[int, int, int]:
        return (self.d1, self.d2 // self.d1, self.d3 // self.d2)

    @property
    def det(self) -> int:
        return self.d3

    @property
    def primitive(self) -> "DivisorTriple":
        """Class of g / d1(g); scalar matrices act trivially on automorphic
        functions under the det^{-1/3} normalization, so Hecke operators are
        indexed by primitive triples."""
        c = self.d1
        return DivisorTriple(1, self.d2 // (c * c), self.d3 // (c * c * c))

    def label(self) -> str:
        return f"({self.d1},{self.d2},{self.d3})"


UNIT_TRIPLE = DivisorTriple(1, 1, 1)


def determinantal_divisors(m) -> DivisorTriple:
    """Determinantal divisors of a nonsingular integer matrix."""
    mt = tuple(tuple(int(x) for x in row) for row in m)
    det = _det3(mt)
    if det == 0:
        raise ValueError("matrix is singular")
    d1 = math.gcd(*(abs(x) for row in mt for x in row))
    d2 = math.gcd(*(abs(x) for x in _minors2(mt)))
    return DivisorTriple(d1, d2, abs(det))


def same_double_coset(m1, m2) -> bool:
    return determinantal_divisors(m1) == determinantal_divisors(m2)


# ---------------------------------------------------------------------------
# left coset enumeration (Hermite normal forms)
# ---------------------------------------------------------------------------

def _divisors(n: int):
    out = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    out += [n // d for d in reversed(out) if d * d != n]
    return out


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _box_size(n: int) -> int:
    return sum((n // (a * c)) * c * c
               for a in _divisors(n) for c in _divisors(n // a))


@lru_cache(maxsize=None)
def _hnf_buckets(det: int) -> dict[DivisorTriple, tuple[Matrix, ...]]:
    """All HNF matrices of the given determinant, bucketed by divisor triple."""
    buckets: dict[DivisorTriple, list[Matrix]] = {}
    for a in _divisors(det):
        rest = det // a
        for b in _divisors(rest):
            c = rest // b
            for h12 in range(b):
                for h13 in range(c):
                    for h23 in range(c):
                        m: Matrix = ((a, h12, h13), (0, b, h23), (0, 0, c))
                        buckets.setdefault(determinantal_divisors(m), []).append(m)
    return {t: tuple(v) for t, v in buckets.items()}


def _hnf_reduce(m: Matrix) -> Matrix:
    """Reduce an upper triangular positive-diagonal matrix to HNF."""
    rows = [list(r) for r in m]
    for j in (1, 2):
        piv = rows[j][j]
        for i in range(j):
            q = rows[i][j] // piv
            if q:
                for k in range(j, 3):
                    rows[i][k] -= q * rows[j][k]
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class CosetList:
    """Canonical left-coset representatives of one double coset."""

    triple: DivisorTriple
    reps: tuple[Matrix, ...]

    def __len__(self) -> int:
        return len(self.reps)


def enumerate_left_cosets(triple: DivisorTriple,
                          budget: int = DEFAULT_BOX_BUDGET) -> CosetList:
    """Complete duplicate-free list of left-coset HNF representatives.

    Prime-power determinants are enumerated directly; coprime parts are
    combined by multiplying representatives (the coset decomposition is
    multiplicative over coprime determinants), re-reducing to HNF.
    """
    det = triple.det
    parts = sorted(_factorize(det).items())
    reps: tuple[Matrix, ...] | None = None
    for p, e in parts:
        q = p ** e
        if _box_size(q) > budget:
            raise ResourceLimitError(
                f"HNF box for determinant {q} exceeds budget {budget}")
        local = DivisorTriple(*(_p_part(d, p) for d in
                                (triple.d1, triple.d2, triple.d3)))
        bucket = _hnf_buckets(q).get(local, ())
        if reps is None:
            reps = bucket
        else:
            reps = tuple(_hnf_reduce(_mat_mul(x, y)) for x in reps for y in bucket)
    if not parts:
        reps = (((1, 0, 0), (0, 1, 0), (0, 0, 1)),)
    assert reps is not None
    if len(set(reps)) != len(reps):
        raise AssertionError("duplicate coset representatives")
    return CosetList(triple, reps)


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def coset_count(triple: DivisorTriple) -> int:
    return len(enumerate_left_cosets(triple))


# ---------------------------------------------------------------------------
# the double-coset algebra
# ---------------------------------------------------------------------------

class HeckeElement:
    """Finite rational linear combination of double cosets."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: dict[DivisorTriple, Fraction] | None = None):
        clean = {}
        for t, c in (coeffs or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[t] = c
        self._coeffs = clean

    @classmethod
    def single(cls, triple: DivisorTriple, coeff=1) -> "HeckeElement":
        return cls({triple: Fraction(coeff)})

    @classmethod
    def zero(cls) -> "HeckeElement":
        return cls({})

    @property
    def coeffs(self) -> dict[DivisorTriple, Fraction]:
        return dict(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs.items())

    def __len__(self):
        return len(self._coeffs)

    def __getitem__(self, triple: DivisorTriple) -> Fraction:
        return self._coeffs.get(triple, Fraction(0))

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        out = dict(self._coeffs)
        for t, c in other._coeffs.items():
            out[t] = out.get(t, Fraction(0)) + c
        return HeckeElement(out)

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + other.scale(-1)

    def scale(self, c) -> "HeckeElement":
        c = Fraction(c)
        return HeckeElement({t: v * c for t, v in self._coeffs.items()})

    def compose(self, other: "HeckeElement",
                budget: int = DEFAULT_BOX_BUDGET) -> "HeckeElement":
        """Algebra product, extending double-coset multiplication bilinearly."""
        out = HeckeElement.zero()
        for t1, c1 in self._coeffs.items():
            for t2, c2 in other._coeffs.items():
                out = out + multiply_double_cosets(t1, t2, budget).scale(c1 * c2)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElement) and self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __repr__(self):
        if not self._coeffs:
            return "HeckeElement(0)"
        terms = " + ".join(f"{c}*T{t.label()}" for t, c in sorted(self._coeffs.items()))
        return f"HeckeElement({terms})"

    def as_strings(self) -> dict[str, str]:
        return {t.label(): str(c) for t, c in sorted(self._coeffs.items())}


def hecke_identity() -> HeckeElement:
    return HeckeElement.single(UNIT_TRIPLE)


@lru_cache(maxsize=None)
def _multiply_cached(t1: DivisorTriple, t2: DivisorTriple,
                     budget: int) -> HeckeElement:
    left = enumerate_left_cosets(t1, budget)
    right = enumerate_left_cosets(t2, budget)
    counts: dict[DivisorTriple, int] = {}
    for x in left.reps:
        for y in right.reps:
            t = determinantal_divisors(_mat_mul(x, y))
            counts[t] = counts.get(t, 0) + 1
    out: dict[DivisorTriple, Fraction] = {}
    total_degree = 0
    for t, pairs in counts.items():
        deg = coset_count(t)
        if pairs % deg:
            raise AssertionError(f"non-integral structure constant at {t}")
        key = t.primitive
        out[key] = out.get(key, Fraction(0)) + Fraction(pairs // deg)
        total_degree += pairs
    assert total_degree == len(left) * len(right)
    return HeckeElement(out)


def multiply_double_cosets(t1: DivisorTriple, t2: DivisorTriple,
                           budget: int = DEFAULT_BOX_BUDGET) -> HeckeElement:
    """Product of two double cosets with exact integer structure constants."""
    return _multiply_cached(t1, t2, budget)


def _divisor_chains(n: int):
    """Triples y1 | y2 | y3 with y1*y2*y3 = n."""
    for y1 in _divisors(n):
        if n % (y1 * y1 * y1):
            pass
        m = n // y1
        if m % y1:
            continue
        for y2 in _divisors(m):
            if y2 % y1:
                continue
            y3 = m // y2
            if y3 % y2 == 0:
                yield (y1, y2, y3)


def normalized_hecke(n: int) -> HeckeElement:
    """T_n = (1/n) * sum over diagonal classes diag(y1,y2,y3), y1|y2|y3."""
    if n <= 0:
        raise ValueError("n must be positive")
    coeffs: dict[DivisorTriple, Fraction] = {}
    for y1, y2, y3 in _divisor_chains(n):
        t = DivisorTriple.from_elementary(y1, y2, y3).primitive
        coeffs[t] = coeffs.get(t, Fraction(0)) + Fraction(1, n)
    return HeckeElement(coeffs)


def normalized_hecke_dual(n: int) -> HeckeElement:
    """Adjoint T_n*.

    The class of a rational g^{-1} is represented by the integer matrix
    y3 * g^{-1}; scalar multiples act identically under the det^{-1/3}
    normalization, so the dual of diag(y1,y2,y3) is the class with
    elementary divisors (1, y3/y2, y3/y1).
    """
    if n <= 0:
        raise ValueError("n must be positive")
    coeffs: dict[DivisorTriple, Fraction] = {}
    for y1, y2, y3 in _divisor_chains(n):
        t = DivisorTriple.from_elementary(1, y3 // y2, y3 // y1)
        coeffs[t] = coeffs.get(t, Fraction(0)) + Fraction(1, n)
    return HeckeElement(coeffs)


# ---------------------------------------------------------------------------
# the six prime-level linearizations
# ---------------------------------------------------------------------------

@dataclass
class LinearizationRecord:
    name: str
    lhs: HeckeElement
    rhs: HeckeElement

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def as_dict(self) -> dict:
        return {
            "identity": self.name,
            "lhs": self.lhs.as_strings(),
            "rhs": self.rhs.as_strings(),
            "pass": self.passed,
        }


@dataclass
class LinearizationReport:
    p: int
    q: int
    records: list[LinearizationRecord] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "identities": [r.as_dict() for r in self.records],
            "pass": self.all_passed,
        }


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _cls(*diag: int) -> HeckeElement:
    return HeckeElement.single(DivisorTriple.from_diagonal(*diag))


def verify_linearizations(p: int, q: int,
                          budget: int = DEFAULT_BOX_BUDGET) -> LinearizationReport:
    """Machine-check the six composition identities at primes p, q."""
    if not (_is_prime(p) and _is_prime(q)):
        raise ValueError("p and q must be prime")
    eq = p == q
    one = hecke_identity()
    tp, tq = normalized_hecke(p), normalized_hecke(q)
    tps, tqs = normalized_hecke_dual(p), normalized_hecke_dual(q)
    qq = tq.compose(tqs, budget) - one

    def d(x: HeckeElement) -> HeckeElement:
        return x if eq else HeckeElement.zero()

    report = LinearizationReport(p, q)
    report.records.append(LinearizationRecord(
        "T_p.T_q",
        tp.compose(tq, budget),
        _cls(1, 1, p * q).scale(Fraction(1, p * q))
        + d(_cls(1, p, p).scale(Fraction(p + 1, p * p)))))
    report.records.append(LinearizationRecord(
        "T_p*.T_q",
        tps.compose(tq, budget),
        _cls(1, p, p * q).scale(Fraction(1, p * q))
        + d(one.scale(Fraction(p * p + p + 1, p * p)))))
    report.records.append(LinearizationRecord(
        "T_p*.T_q*",
        tps.compose(tqs, budget),
        _cls(1, p * q, p * q).scale(Fraction(1, p * q))
        + d(_cls(1, 1, p).scale(Fraction(p + 1, p * p)))))
    report.records.append(LinearizationRecord(
        "T_p.(T_qT_q*-1)",
        tp.compose(qq, budget),
        _cls(1, 1, p).scale(Fraction(q + 1, p * q * q))
        + _cls(1, q, p * q * q).scale(Fraction(1, p * q * q))
        + d(_cls(1, p * p, p * p).scale(Fraction(p + 1, p ** 3))
            + _cls(1, 1, p).scale(Fraction(p + 1, p * p)))))
    report.records.append(LinearizationRecord(
        "T_p*.(T_qT_q*-1)",
        tps.compose(qq, budget),
        _cls(1, p, p).scale(Fraction(q + 1, p * q * q))
        + _cls(1, p * q, p * q * q).scale(Fraction(1, p * q * q))
        + d(_cls(1, 1, p * p).scale(Fraction(p + 1, p ** 3))
            + _cls(1, p, p).scale(Fraction(p + 1, p * p)))))
    pp = tp.compose(tps, budget) - one
    report.records.append(LinearizationRecord(
        "(T_pT_p*-1).(T_qT_q*-1)",
        pp.compose(qq, budget),
        _cls(1, p * q, p * p * q * q).scale(Fraction(1, p * p * q * q))
        + _cls(1, p, p * p).scale(Fraction(q + 1, p * p * q * q))
        + _cls(1, q, q * q).scale(Fraction(p + 1, p * p * q * q))
        + one.scale(Fraction((p + 1) * (q + 1), p * p * q * q))
        + d(_cls(1, p ** 3, p ** 3).scale(Fraction(p + 1, p ** 4))
            + _cls(1, 1, p ** 3).scale(Fraction(p + 1, p ** 4))
            + _cls(1, p, p * p).scale(Fraction((p + 1) * (2 * p - 1), p ** 4))
            + one.scale(Fraction(p * (p + 1) * (p * p + p + 1), p ** 4)))))
    return report


# ---------------------------------------------------------------------------
# the amplifier
# ---------------------------------------------------------------------------

def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi (simple sieve)."""
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(math.isqrt(hi)) + 1):
        if sieve[p]:
            sieve[p * p::p] = b"\x00" * len(sieve[p * p::p])
    return [p for p in range(max(lo, 2), hi + 1) if sieve[p]]


@dataclass
class Amplifier:
    """Index set, coefficient rule and operator dictionary for length L."""

    length: int
    primes: list[int]

    @property
    def index_set(self) -> list[tuple[int, int]]:
        out = []
        for p in self.primes:
            out.extend([(p, 1), (1, p), (p, p)])
        return out

    def coefficient(self, m: int, n: int):
        """Amplifier weight alpha_{m,n}; eigenvalue-valued entries are
        returned as symbolic tags since no cusp form data is in play."""
        if m in self.primes and n == 1:
            return f"a(1,{m})"
        if n in self.primes and m == 1:
            return f"a({n},1)"
        if m == n and m in self.primes:
            return -2
        return 0

    def operator(self, m: int, n: int) -> HeckeElement:
        if m in self.primes and n == 1:
            return normalized_hecke(m)
        if n in self.primes and m == 1:
            return normalized_hecke_dual(n)
        if m == n and m in self.primes:
            p = m
            return normalized_hecke(p).compose(normalized_hecke_dual(p)) \
                - hecke_identity()
        raise KeyError((m, n))

    @property
    def lower_bound_count(self) -> int:
        """A_{j0}(alpha) = 2 * #{L <= p <= 2L} at the targeted form."""
        return 2 * len(self.primes)

    def operator_identity_defect(self) -> HeckeElement:
        """T_p.T_p* - id - T_{p,p}, summed over amplifier primes.

        Exactly zero by construction; kept as an executable witness of the
        operator-level identity behind a(1,p)a(p,1) - a(p,p) = 1.
        """
        out = HeckeElement.zero()
        for p in self.primes:
            lhs = normalized_hecke(p).compose(normalized_hecke_dual(p)) \
                - hecke_identity()
            out = out + (lhs - self.operator(p, p))
        return out


def amplifier(length: int) -> Amplifier:
    if length < 2:
        raise ValueError("amplifier length must be >= 2")
    primes = primes_in(length, 2 * length)
    if not primes:
        raise ValueError(f"no primes in [{length}, {2 * length}]")
    return Amplifier(length, primes)
