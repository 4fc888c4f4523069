"""Closed-form bounds as exact integer/rational calculators."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Union

from .padic import is_prime


def _need_prime(ell: int) -> None:
    if not is_prime(ell):
        raise ValueError(f"ell = {ell} is not prime")


def ceil_log2(n: int) -> int:
    """Smallest c with 2^c >= n, for n >= 1."""
    if n < 1:
        raise ValueError("need n >= 1")
    return (n - 1).bit_length()


def smallest_power_at_least(base: int, bound: Union[int, Fraction]) -> int:
    """Smallest c >= 0 with base^c >= bound."""
    c, v = 0, 1
    while v < bound:
        v *= base
        c += 1
    return c


def n_ell(ell: int) -> Union[int, str]:
    """Upper bound for the nilpotency class: ((ell-1)^(2^(ell-1)-1) - 1)/(ell-2); 'abelian' for ell = 2."""
    _need_prime(ell)
    if ell == 2:
        return "abelian"
    if ell == 3:
        return 2
    num = (ell - 1) ** (2 ** (ell - 1) - 1) - 1
    assert num % (ell - 2) == 0
    return num // (ell - 2)


def m_ell(ell: int) -> int:
    """1 + ceil(2^(ell-1) log2(ell-1) - log2((ell-1)(ell-2))), with m(2) = 1 and m(3) = 2.

    The ceiling is the smallest c with 2^c (ell-2) >= (ell-1)^(2^(ell-1)-1).
    """
    _need_prime(ell)
    if ell == 2:
        return 1
    if ell == 3:
        return 2
    target = Fraction((ell - 1) ** (2 ** (ell - 1) - 1), ell - 2)
    return 1 + smallest_power_at_least(2, target)


def shalev_dl(d: int, ell: int, uniform_in_shalev_sense: bool = False) -> dict:
    """Derived-length bounds; 'min' is the smallest of the applicable ones.

    For d = 1 the rank-only formula is negative; it is reported raw and flagged as degenerate.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    lg = ceil_log2(d)
    out: Dict[str, Optional[int]] = {
        "rank_only": 2 ** (d + 1) - d - 4 + lg,
        "eigenvalue": d * (2 ** (ell - 1) - 1) + lg,
        "shalev_uniform": (2 ** (ell - 1) - 1) if uniform_in_shalev_sense else None,
    }
    out["min"] = min(v for v in out.values() if v is not None and v >= 0)
    out["degenerate"] = out["rank_only"] < 0
    return out


def golod_shafarevich_infinite(d: int, T: int, r1: int, r2: int) -> bool:
    """d >= 2 + 2 sqrt(|T| + r1 + r2 + 1), decided exactly."""
    if min(d, T, r1, r2) < 0:
        raise ValueError("inputs must be non-negative")
    return d >= 2 and (d - 2) ** 2 >= 4 * (T + r1 + r2 + 1)


@dataclass(frozen=True)
class BoundsInput:
    order_G: int = 1
    r1: int = 0
    r2: int = 0
    d_inf: int = 0
    r_inf: int = 0
    S: int = 0
    S_ram: int = 0
    T: int = 0
    dp_Cl: int = 0
    dp_H2: int = 0
    mu_p_in_L: bool = False
    ell: int = 2
    p: int = 3
    d: int = 0
    s: int = 0

    def __post_init__(self):
        for k, v in asdict(self).items():
            if isinstance(v, int) and not isinstance(v, bool) and v < 0:
                raise ValueError(f"{k} must be non-negative")
        if self.order_G < 1:
            raise ValueError("order_G must be positive")


@dataclass(frozen=True)
class UnitRankBound:
    t_lower: Fraction
    A: Fraction
    variant: str


def unit_rank_bound(b: BoundsInput) -> UnitRankBound:
    """Lower bound for the free rank of F_p (x) O_L^T, and A = -(bound - |T|)."""
    half_r = Fraction(b.r_inf, 2)
    g = b.order_G
    if b.mu_p_in_L:
        inner = (b.r1 + b.r2 + 1 - b.d_inf - half_r + b.dp_Cl + g * b.S + g * b.S_ram + b.dp_H2)
        bound = b.T + b.d_inf + half_r - (g - 1) * inner
        variant = "mu_p"
    else:
        inner = b.r1 + b.r2 - b.d_inf - half_r + b.dp_Cl + g * b.S + b.S_ram
        bound = b.T + b.d_inf + half_r - (g - 1) * inner - 1
        variant = "no_mu_p"
    return UnitRankBound(Fraction(bound), Fraction(-(bound - b.T)), variant)


def required_T(A: Union[int, Fraction], s: int, order_G: int, S: int) -> int:
    """ceil(A + s|G|(|S||G| + 1)), clamped at 0."""
    if min(s, order_G, S) < 0:
        raise ValueError("inputs must be non-negative")
    return max(0, ceil(Fraction(A) + s * order_G * (S * order_G + 1)))


def required_T_raw(A: Union[int, Fraction], s: int, order_G: int, S: int) -> Fraction:
    return Fraction(A) + s * order_G * (S * order_G + 1)


def cyclo_n0(s: int, r1: int, order_C: int, dp_C: int, p: int = 3) -> int:
    """Smallest n with r1 p^n - (|C|-1) dp_C - 1 >= s |C|."""
    if r1 < 1:
        raise ValueError("r1 must be positive")
    target = Fraction(s * order_C + (order_C - 1) * dp_C + 1, r1)
    return smallest_power_at_least(p, target)


def cyclo_closed_form(s: int) -> int:
    """ceil(log3(2 + s) + 4), computed as 4 + (smallest j with 3^j >= 2 + s)."""
    return 4 + smallest_power_at_least(3, 2 + s)


def cyclo_discrepancy_report(s_values: List[int], r1: int = 2, order_C: int = 2 * 3 ** 4,
                             dp_values=(2, 3)) -> dict:
    """Which dp_C readings reproduce the closed form for each s."""
    rows = []
    for s in s_values:
        row = {"s": s, "closed_form": cyclo_closed_form(s)}
        for dp in dp_values:
            row[f"dp_C={dp}"] = cyclo_n0(s, r1, order_C, dp)
        rows.append(row)
    consistent = [dp for dp in dp_values if all(r[f"dp_C={dp}"] == r["closed_form"] for r in rows)]
    return {"rows": rows, "consistent_dp_C": consistent, "r1": r1, "order_C": order_C}
