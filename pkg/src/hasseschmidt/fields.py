"""Exact arithmetic in the supported coefficient fields.

Two fields are available: the rationals (coefficients are
``fractions.Fraction``) and the prime fields GF(p) (coefficients are ints
reduced to [0, p)).  A :class:`FieldSpec` carries the choice and provides
the arithmetic; series and derivations store raw coefficient values and
delegate every operation to their field.  Both representations are
canonical, so structural equality of values is field equality.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import IncompatibleAmbient, LengthMismatch


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class FieldSpec:
    """GF(p) when ``p`` is a prime, the rationals when ``p`` is None."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not is_prime(p):
            raise ValueError(f"modulus must be a prime, got {p!r}")
        self.p = p

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p if self.p is not None else 0

    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def coerce(self, x):
        """Bring an int (or a Fraction, over the rationals) into the field."""
        if self.p is not None:
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"cannot coerce {x!r} into {self!r}")
            return x % self.p
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def add(self, a, b):
        if self.p is not None:
            return (a + b) % self.p
        return a + b

    def sub(self, a, b):
        if self.p is not None:
            return (a - b) % self.p
        return a - b

    def neg(self, a):
        if self.p is not None:
            return (-a) % self.p
        return -a

    def mul(self, a, b):
        if self.p is not None:
            return (a * b) % self.p
        return a * b

    def inv(self, a):
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.p is not None:
            a %= self.p
            if a == 0:
                raise ZeroDivisionError(f"0 is not invertible in {self!r}")
            return pow(a, -1, self.p)
        if a == 0:
            raise ZeroDivisionError("0 is not invertible in the rationals")
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse_scalar(self, text: str):
        """Parse the text form: a decimal residue for GF(p), "a/b" or "a" for Q."""
        if isinstance(text, int) and not isinstance(text, bool):
            return self.coerce(text)
        if not isinstance(text, str):
            raise ValueError(f"expected a scalar string, got {text!r}")
        if self.p is not None:
            return int(text, 10) % self.p
        return Fraction(text)

    def format_scalar(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.p == other.p

    def __hash__(self):
        return hash(("FieldSpec", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = FieldSpec(None)

_gf_cache: dict[int, FieldSpec] = {}


def GF(p: int) -> FieldSpec:
    field = _gf_cache.get(p)
    if field is None:
        field = _gf_cache[p] = FieldSpec(p)
    return field


def check_same_field(a: FieldSpec, b: FieldSpec) -> None:
    if a != b:
        raise IncompatibleAmbient(f"mixed coefficient fields {a!r} and {b!r}")


def binom_mod_p(top: int, bot: int, p: int) -> int:
    """Binomial coefficient C(top, bot) mod a prime p, digit by digit in base p.

    Each base-p digit pair contributes an ordinary small binomial; the
    product vanishes as soon as a digit of ``bot`` exceeds the matching
    digit of ``top``.
    """
    if bot < 0 or bot > top:
        return 0
    r = 1
    while top or bot:
        t, b = top % p, bot % p
        if b > t:
            return 0
        r = (r * math.comb(t, b)) % p
        top //= p
        bot //= p
    return r


def binom_multi(beta, alpha, field: FieldSpec):
    """Product of coordinatewise binomials C(beta_i, alpha_i), reduced into field.

    Returns the field's zero whenever some alpha_i exceeds beta_i.
    """
    if len(beta) != len(alpha):
        raise LengthMismatch(f"exponent lengths differ: {len(beta)} vs {len(alpha)}")
    if field.p is not None:
        r = 1
        for b, a in zip(beta, alpha):
            r = (r * binom_mod_p(b, a, field.p)) % field.p
            if r == 0:
                return 0
        return r
    r = 1
    for b, a in zip(beta, alpha):
        if a > b:
            return Fraction(0)
        r *= math.comb(b, a)
    return Fraction(r)
