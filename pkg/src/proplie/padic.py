"""Fixed-precision arithmetic in Z/p^N with valuation tracking."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class NotAUnit(ArithmeticError):
    pass


class NotPIntegral(ArithmeticError):
    pass


class PrecisionMismatch(ValueError):
    pass


def is_prime(n: int) -> bool:
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


def check_context(p: int, N: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p={p} is not a prime")
    if p == 2:
        raise ValueError("p = 2 is not supported")
    if N < 1:
        raise ValueError(f"precision N={N} must be at least 1")


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer. Raises on zero."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_capped(n: int, p: int, cap: int) -> int:
    """Valuation of n, reporting `cap` when p^cap divides n (including n = 0)."""
    k = 0
    while k < cap and n % p == 0:
        n //= p
        k += 1
    return k


def vp_factorial(k: int, p: int) -> int:
    """Legendre: v_p(k!) = (k - s_p(k)) / (p - 1)."""
    s, m = 0, k
    while m:
        s += m % p
        m //= p
    return (k - s) // (p - 1)


def vp_fraction(q: Fraction, p: int) -> int:
    return vp(q.numerator, p) - vp(q.denominator, p)


def frac_mod(q: Fraction, p: int, N: int) -> int:
    """Image of a p-integral rational in Z/p^N."""
    num, den = q.numerator, q.denominator
    if den % p == 0:
        raise NotPIntegral(f"{q} is not {p}-integral")
    return num * pow(den, -1, p ** N) % p ** N


def teichmuller(a: int, p: int, N: int) -> int:
    """The (p-1)-th root of unity in Z/p^N congruent to a mod p."""
    if a % p == 0:
        raise NotAUnit(f"{a} is divisible by {p}")
    mod = p ** N
    x = a % mod
    for _ in range(N):
        x = pow(x, p, mod)
    return x


@dataclass(frozen=True)
class PadicInt:
    p: int
    N: int
    residue: int

    def __post_init__(self):
        if not 0 <= self.residue < self.p ** self.N:
            raise ValueError("residue out of range; use pad_make")

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    @property
    def val(self) -> int:
        """Valuation; equals N exactly when the residue is zero (meaning >= N)."""
        return vp_capped(self.residue, self.p, self.N)

    def is_zero(self) -> bool:
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def _coerce(self, other: Union["PadicInt", int]) -> int:
        if isinstance(other, PadicInt):
            if (other.p, other.N) != (self.p, self.N):
                raise PrecisionMismatch(f"({self.p},{self.N}) vs ({other.p},{other.N})")
            return other.residue
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, v: int) -> "PadicInt":
        return PadicInt(self.p, self.N, v % self.modulus)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.residue)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.residue * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.residue)

    def __pow__(self, e: int):
        if e < 0:
            return pad_inv(self) ** (-e)
        return self._new(pow(self.residue, e, self.modulus))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"PadicInt({self.p}, {self.N}, {self.residue})"

    def to_json(self) -> list:
        return [self.p, self.N, str(self.residue)]

    @classmethod
    def from_json(cls, data) -> "PadicInt":
        p, N, r = data
        return pad_make(int(p), int(N), int(r))


def pad_make(p: int, N: int, v: int) -> PadicInt:
    check_context(p, N)
    return PadicInt(p, N, v % p ** N)


def pad_val(x: PadicInt) -> int:
    return x.val


def pad_inv(x: PadicInt) -> PadicInt:
    if not x.is_unit():
        raise NotAUnit(f"{x} is not a unit")
    return PadicInt(x.p, x.N, pow(x.residue, -1, x.modulus))


def rat_to_padic(num: int, den: int, p: int, N: int) -> PadicInt:
    check_context(p, N)
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if num == 0:
        return PadicInt(p, N, 0)
    vd, vn = vp(den, p), vp(num, p)
    if vd > vn:
        raise NotPIntegral(f"{num}/{den} has negative {p}-adic valuation")
    num //= p ** vd
    den //= p ** vd
    return pad_make(p, N, num * pow(den, -1, p ** N))
