"""Base rings: the integers, residue rings, the rationals and prime fields.

Scalars are plain Python ints (reduced residues for the modular rings) and
:class:`fractions.Fraction` for the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

INTEGERS = "Z"
INTEGERS_MOD = "Z/n"
RATIONALS = "Q"
PRIME_FIELD = "F_p"


class RingError(ValueError):
    """Raised for invalid ring specifications or mismatched rings."""


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n):
    """Prime factorization of ``n >= 1`` as a sorted list of (p, k)."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@dataclass(frozen=True)
class RingSpec:
    kind: str
    modulus: int = 0

    def __post_init__(self):
        if self.kind == INTEGERS_MOD:
            if self.modulus < 2:
                raise RingError(f"Z/n needs n >= 2, got {self.modulus}")
        elif self.kind == PRIME_FIELD:
            if not is_prime(self.modulus):
                raise RingError(f"F_p needs p prime, got {self.modulus}")
        elif self.kind in (INTEGERS, RATIONALS):
            if self.modulus != 0:
                raise RingError(f"{self.kind} takes no modulus")
        else:
            raise RingError(f"unknown ring kind {self.kind!r}")

    # -- classification -------------------------------------------------
    @property
    def is_field(self):
        return self.kind in (RATIONALS, PRIME_FIELD)

    @property
    def is_modular(self):
        """True for Z/n and F_p, whose scalars are residues mod ``modulus``."""
        return self.kind in (INTEGERS_MOD, PRIME_FIELD)

    @property
    def is_finite(self):
        return self.is_modular

    @property
    def characteristic(self):
        return self.modulus

    def prime_powers(self):
        """CRT factors of the modulus as (p, k) pairs (empty for Z and Q)."""
        return factorize(self.modulus) if self.is_modular else []

    # -- scalars ----------------------------------------------------------
    def __call__(self, x):
        return self.coerce(x)

    @property
    def reduce(self):
        """Fast normalizer for results of internal arithmetic on valid scalars."""
        if self.kind == INTEGERS:
            return int
        if self.kind == RATIONALS:
            return Fraction
        n = self.modulus
        return lambda x: x % n

    def coerce(self, x):
        if type(x) is int:
            return x % self.modulus if self.kind in (INTEGERS_MOD, PRIME_FIELD) else (
                Fraction(x) if self.kind == RATIONALS else x)
        if self.kind == RATIONALS:
            if isinstance(x, str):
                x = Fraction(x)
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if not self.is_modular:
                    raise RingError(f"{x} is not an integer")
                return (x.numerator * pow(x.denominator, -1, self.modulus)) % self.modulus
            x = x.numerator
        if isinstance(x, str):
            x = int(x)
        if isinstance(x, bool) or not isinstance(x, int):
            x = int(x)
        if self.is_modular:
            return x % self.modulus
        return x

    def zero(self):
        return Fraction(0) if self.kind == RATIONALS else 0

    def one(self):
        return Fraction(1) if self.kind == RATIONALS else 1

    def is_unit(self, x):
        if self.kind == INTEGERS:
            return x in (1, -1)
        if self.kind == RATIONALS:
            return x != 0
        return gcd(x, self.modulus) == 1

    def inverse(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit in {self}")
        if self.kind == INTEGERS:
            return x
        if self.kind == RATIONALS:
            return 1 / x
        return pow(x, -1, self.modulus)

    def elements(self):
        """All elements of a finite ring."""
        if not self.is_finite:
            raise RingError(f"{self} is infinite")
        return range(self.modulus)

    def format(self, x):
        if self.kind == RATIONALS:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x)

    # -- naming -----------------------------------------------------------
    def __str__(self):
        if self.kind == INTEGERS_MOD:
            return f"Z/{self.modulus}"
        if self.kind == PRIME_FIELD:
            return f"F_{self.modulus}"
        return self.kind

    def to_json(self):
        return str(self)

    @classmethod
    def parse(cls, text):
        text = str(text).strip().replace(" ", "")
        if text in ("Z", "ZZ", "Integers"):
            return ZZ
        if text in ("Q", "QQ", "Rationals"):
            return QQ
        try:
            if text.startswith("Z/"):
                return IntegersMod(int(text[2:]))
            if text.startswith("F_") or text.startswith("GF"):
                return PrimeField(int(text.lstrip("FG_").lstrip("F")))
        except ValueError as exc:
            raise RingError(f"cannot parse ring {text!r}: {exc}") from None
        raise RingError(f"cannot parse ring {text!r}")


ZZ = RingSpec(INTEGERS)
QQ = RingSpec(RATIONALS)


def IntegersMod(n):
    return RingSpec(INTEGERS_MOD, n)


def PrimeField(p):
    return RingSpec(PRIME_FIELD, p)
