"""Exact arithmetic over finite naturals and beth numbers.

The value domain is {0, 1, 2, ...} united with {beth_0, beth_1, ...} where
beth_0 is the countable infinity and beth_{k+1} = 2**beth_k.  Within this
fragment every comparison, sum, product, power and binomial needed by the
tree-counting code is decidable without extra set-theoretic assumptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple


class UnsupportedFragmentError(ValueError):
    """Raised when an operation would leave the finite-or-beth fragment."""


@dataclass(frozen=True)
class Cardinal:
    """A finite natural number or a beth number.

    ``level`` is None for finite values (stored in ``value``) and the beth
    index k for infinite values (``value`` is then ignored and set to 0).
    """

    value: int
    level: int | None = None

    def __post_init__(self):
        if self.level is None:
            if self.value < 0:
                raise ValueError("finite cardinal must be a natural number")
        else:
            if self.level < 0:
                raise ValueError("beth index must be a natural number")
            if self.value != 0:
                raise ValueError("beth cardinals carry no finite value")

    @staticmethod
    def finite(n: int) -> "Cardinal":
        return Cardinal(n)

    @staticmethod
    def beth(k: int) -> "Cardinal":
        return Cardinal(0, k)

    @property
    def is_finite(self) -> bool:
        return self.level is None

    @property
    def is_infinite(self) -> bool:
        return self.level is not None

    def _key(self) -> Tuple[int, int]:
        if self.level is None:
            return (0, self.value)
        return (1, self.level)

    def __lt__(self, other: "Cardinal") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "Cardinal") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "Cardinal") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "Cardinal") -> bool:
        return self._key() >= other._key()

    def __str__(self) -> str:
        if self.level is None:
            return str(self.value)
        return f"beth_{self.level}"


FIN0 = Cardinal.finite(0)
FIN1 = Cardinal.finite(1)
FIN2 = Cardinal.finite(2)
ALEPH0 = Cardinal.beth(0)


def parse_cardinal(text: str) -> Cardinal:
    """Parse ``text`` as a cardinal: decimal, ``w`` or ``beth_<k>``."""
    s = text.strip()
    if s == "w":
        return ALEPH0
    if s.startswith("beth_"):
        idx = s[len("beth_"):]
        if not idx.isdigit():
            raise ValueError(f"bad beth index in {text!r}")
        return Cardinal.beth(int(idx))
    if not s.isdigit():
        raise ValueError(f"bad cardinal {text!r}")
    return Cardinal.finite(int(s))


def two_pow(c: Cardinal) -> Cardinal:
    """2 to the power ``c``; sends beth_k to beth_{k+1}."""
    if c.is_finite:
        return Cardinal.finite(1 << c.value)
    return Cardinal.beth(c.level + 1)


def sum_family(terms: Iterable[Tuple[Cardinal, Cardinal]]) -> Cardinal:
    """Sum of ``value * multiplicity`` over the (finite) family of terms.

    Finite terms add exactly; once anything infinite contributes the result
    is the maximum of the infinite contributions, each being
    max(value, multiplicity).
    """
    finite_total = 0
    inf_max: Cardinal | None = None
    for value, mult in terms:
        if value == FIN0 or mult == FIN0:
            continue
        if value.is_finite and mult.is_finite:
            finite_total += value.value * mult.value
        else:
            contrib = value if value >= mult else mult
            if inf_max is None or contrib > inf_max:
                inf_max = contrib
    if inf_max is not None:
        return inf_max
    return Cardinal.finite(finite_total)


def power(a: Cardinal, b: Cardinal) -> Cardinal:
    """Cardinal exponentiation within the fragment; 0**0 = 1."""
    if b == FIN0:
        return FIN1
    if a == FIN0:
        return FIN0
    if a == FIN1:
        return FIN1
    if a.is_finite and b.is_finite:
        return Cardinal.finite(a.value ** b.value)
    if a.is_infinite and b.is_finite:
        # beth_i ** n = beth_i for finite n >= 1
        return a
    if a.is_finite:
        # n ** beth_j = 2 ** beth_j for finite n >= 2
        return Cardinal.beth(b.level + 1)
    # (2**beth_{i-1}) ** beth_j = 2 ** (beth_{i-1} * beth_j); with i = 0 the
    # base is aleph_0 <= 2**beth_j, so the same closed form applies.
    return Cardinal.beth(max(a.level, b.level + 1))


def product_family(factors: Iterable[Tuple[Cardinal, Cardinal]]) -> Cardinal:
    """Product of ``value ** exponent`` over the (finite) family of factors.

    Zero values with a nonzero exponent collapse the product to 0; value-1
    factors drop out; finitely many remaining factors multiply exactly when
    finite and by the maximum rule when any is infinite.
    """
    finite_prod = 1
    inf_max: Cardinal | None = None
    for value, exponent in factors:
        if not isinstance(value, Cardinal) or not isinstance(exponent, Cardinal):
            raise UnsupportedFragmentError(
                f"factor ({value!r}, {exponent!r}) outside the finite-or-beth fragment"
            )
        if exponent == FIN0 or value == FIN1:
            continue
        if value == FIN0:
            return FIN0
        term = power(value, exponent)
        if term.is_finite:
            finite_prod *= term.value
        else:
            if inf_max is None or term > inf_max:
                inf_max = term
    if inf_max is not None:
        return inf_max
    return Cardinal.finite(finite_prod)


def binom(a: Cardinal, t: Cardinal) -> Cardinal:
    """Binomial coefficient with the infinite convention.

    Finite arguments give the usual coefficient; if ``t > a`` the result is
    0; otherwise, for infinite ``a``, the result is ``a ** t``.
    """
    if t > a:
        return FIN0
    if a.is_finite:
        # t <= a, both finite
        return Cardinal.finite(math.comb(a.value, t.value))
    return power(a, t)
