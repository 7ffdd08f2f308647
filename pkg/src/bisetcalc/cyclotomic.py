"""Exact arithmetic in cyclotomic fields Q(zeta_e).

Elements are coefficient vectors over the power basis ``1, z, ..., z^(phi(e)-1)``
after reduction by the e-th cyclotomic polynomial, so equal values in the same
field have identical coefficients.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

Number = int | Fraction


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, cyclotomic_poly(d))
    return tuple(num)


def _poly_divexact(a: list[int], b: tuple[int, ...]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] // b[-1]
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return q


@lru_cache(maxsize=None)
def phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _power_table(e: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reduced coefficient vectors of z^k for k in 0..e-1."""
    d = phi(e)
    poly = cyclotomic_poly(e)
    rows = []
    cur = [Fraction(0)] * d
    cur[0] = Fraction(1)
    for _ in range(e):
        rows.append(tuple(cur))
        # multiply by z and reduce by the monic Phi_e
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            cur = [c - top * poly[i] for i, c in enumerate(cur)]
    return tuple(rows)


class Cyclotomic:
    """An element of Q(zeta_e)."""

    __slots__ = ("e", "c")

    def __init__(self, e: int, coeffs):
        self.e = e
        self.c = tuple(Fraction(x) for x in coeffs)

    # -- construction -------------------------------------------------
    @classmethod
    def from_exponents(cls, e: int, weights: dict[int, Number] | list) -> "Cyclotomic":
        """sum of w_k z^k; ``weights`` maps exponent to coefficient."""
        items = weights.items() if isinstance(weights, dict) else enumerate(weights)
        table = _power_table(e)
        acc = [Fraction(0)] * phi(e)
        for k, w in items:
            if w:
                row = table[k % e]
                for i, r in enumerate(row):
                    if r:
                        acc[i] += w * r
        return cls(e, acc)

    @classmethod
    def rational(cls, e: int, x: Number) -> "Cyclotomic":
        v = [Fraction(0)] * phi(e)
        v[0] = Fraction(x)
        return cls(e, v)

    @classmethod
    def zeta(cls, e: int, k: int = 1) -> "Cyclotomic":
        return cls(e, _power_table(e)[k % e])

    # -- helpers ------------------------------------------------------
    def _coerce(self, other) -> "Cyclotomic | None":
        if isinstance(other, Cyclotomic):
            if other.e == self.e:
                return other
            return None
        if isinstance(other, (int, Fraction)):
            return Cyclotomic.rational(self.e, other)
        return NotImplemented

    def lift(self, e2: int) -> "Cyclotomic":
        """Same value viewed in Q(zeta_e2); requires e | e2."""
        if e2 == self.e:
            return self
        if e2 % self.e:
            raise ValueError(f"cannot embed Q(zeta_{self.e}) into Q(zeta_{e2})")
        step = e2 // self.e
        return Cyclotomic.from_exponents(e2, {i * step: c for i, c in enumerate(self.c) if c})

    def in_field(self, e2: int) -> "Cyclotomic":
        """Same value in Q(zeta_e2); raises if it does not lie in that field."""
        if self.e == e2:
            return self
        if e2 % self.e == 0:
            return self.lift(e2)
        from math import lcm

        from .linalg import rref

        m = lcm(self.e, e2)
        target = self.lift(m).c
        basis = [Cyclotomic.zeta(e2, i).lift(m).c for i in range(phi(e2))]
        # columns = basis vectors, last column = target
        rows = [[b[r] for b in basis] + [target[r]] for r in range(phi(m))]
        red, piv = rref(rows)
        if len(basis) in piv:
            raise ValueError(f"{self} does not lie in Q(zeta_{e2})")
        coeffs = [Fraction(0)] * len(basis)
        for row, col in zip(red, piv):
            coeffs[col] = row[-1]
        return Cyclotomic(e2, coeffs)

    def _common(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return None, None
        if o is None:
            from math import lcm

            m = lcm(self.e, other.e)
            return self.lift(m), other.lift(m)
        return self, o

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.e, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.e, [-x for x in self.c])

    def __sub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.e, [x - y for x, y in zip(a.c, b.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.e, [x * other for x in self.c])
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        prod: dict[int, Fraction] = {}
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] = prod.get(i + j, 0) + x * y
        return Cyclotomic.from_exponents(a.e, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.e, [x / other for x in self.c])
        return NotImplemented

    def galois(self, a: int) -> "Cyclotomic":
        """Image under z -> z^a (a coprime to e)."""
        if gcd(a, self.e) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        return Cyclotomic.from_exponents(self.e, {(i * a) % self.e: c for i, c in enumerate(self.c) if c})

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1 % self.e if self.e > 1 else 1)

    # -- inspection ---------------------------------------------------
    def is_rational(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a.c == b.c

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash((self.e, self.c))

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.e)
        return sum(complex(float(x)) * z ** i for i, x in enumerate(self.c))

    def to_mod(self, p: int, root: int) -> int:
        """Image in F_p under z -> root (root of order e mod p)."""
        acc = 0
        for i, x in enumerate(self.c):
            if x:
                acc += x.numerator * pow(x.denominator, -1, p) * pow(root, i, p)
        return acc % p

    def __repr__(self) -> str:
        if self.is_rational():
            return str(self.c[0])
        terms = []
        for i, x in enumerate(self.c):
            if x:
                terms.append(f"{x}*z{self.e}^{i}" if i else str(x))
        return " + ".join(terms)
