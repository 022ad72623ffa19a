"""Tunnell's ternary-form coefficients and the congruent number criterion.

For odd squarefree n,
    a_n = #{2x^2 + y^2 + 32z^2 = n} - 1/2 #{2x^2 + y^2 + 8z^2 = n},
and for even n, with m = n/2,
    a'_m = #{4x^2 + y^2 + 32z^2 = m} - 1/2 #{4x^2 + y^2 + 8z^2 = m}.
Then L(E_n/Q, 1) = r * omega / sqrt(n) with r = a_n^2/4 (n odd) or
r = a'_m^2/2 (n even).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np

from twistsha.arith import is_squarefree

OMEGA_DISPLAY = "2.6220575"

NOT_CONGRUENT = "not congruent"
CONGRUENT_CONDITIONAL = "congruent under Sha-finiteness"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class TernaryForm:
    alpha: int
    beta: int
    gamma: int

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise ValueError("form coefficients must be positive")

    def __call__(self, x: int, y: int, z: int) -> int:
        return self.alpha * x * x + self.beta * y * y + self.gamma * z * z


A_FORM = TernaryForm(2, 1, 32)
B_FORM = TernaryForm(2, 1, 8)
A_PRIME_FORM = TernaryForm(4, 1, 32)
B_PRIME_FORM = TernaryForm(4, 1, 8)


def count_representations(form: TernaryForm, m: int) -> int:
    """#{(x, y, z) in Z^3 : alpha x^2 + beta y^2 + gamma z^2 = m}."""
    if m < 1:
        raise ValueError("m must be positive")
    a, b, c = form.alpha, form.beta, form.gamma
    total = 0
    for x in range(isqrt(m // a) + 1):
        rx = m - a * x * x
        wx = 1 if x == 0 else 2
        for z in range(isqrt(rx // c) + 1):
            rest = rx - c * z * z
            if rest % b:
                continue
            t = rest // b
            y = isqrt(t)
            if y * y != t:
                continue
            wz = 1 if z == 0 else 2
            wy = 1 if y == 0 else 2
            total += wx * wy * wz
    return total


def _theta(coef: int, N: int) -> np.ndarray:
    t = np.zeros(N + 1, dtype=np.int64)
    for x in range(isqrt(N // coef) + 1):
        t[coef * x * x] += 1 if x == 0 else 2
    return t


def _mul_sparse(dense: np.ndarray, sparse: np.ndarray) -> np.ndarray:
    N = len(dense) - 1
    out = np.zeros_like(dense)
    for k in np.nonzero(sparse)[0]:
        out[k:] += sparse[k] * dense[: N + 1 - k]
    return out


def representation_counts(form: TernaryForm, N: int) -> np.ndarray:
    """Array r with r[m] = count_representations(form, m) for 0 <= m <= N."""
    ty = _theta(form.beta, N)
    r = _mul_sparse(ty, _theta(form.alpha, N))
    return _mul_sparse(r, _theta(form.gamma, N))


@lru_cache(maxsize=8)
def _coefficient_table(N: int, prime: bool):
    A, B = (A_PRIME_FORM, B_PRIME_FORM) if prime else (A_FORM, B_FORM)
    ra = representation_counts(A, N)
    rb = representation_counts(B, N)
    if np.any(rb[1::2] % 2):
        raise ArithmeticError("odd B-count: the half-weighted difference is not integral")
    return ra - rb // 2


def coefficients_upto(N: int, prime: bool = False) -> np.ndarray:
    """a_m (or a'_m when ``prime``) for all 0 <= m <= N as an int64 array.

    Values are meaningful at odd m; even entries are the raw count difference.
    """
    return _coefficient_table(int(N), bool(prime))


def _check_odd_squarefree(n: int, what: str):
    if n < 1 or n % 2 == 0 or not is_squarefree(n):
        raise ValueError(f"{what} needs an odd squarefree positive integer, got {n}")


def coeff_a(n: int) -> int:
    _check_odd_squarefree(n, "a_n")
    A = count_representations(A_FORM, n)
    B = count_representations(B_FORM, n)
    if B % 2:
        raise ArithmeticError(f"odd B-count at n = {n}")
    return A - B // 2


def coeff_a_prime(m: int) -> int:
    _check_odd_squarefree(m, "a'_m")
    A = count_representations(A_PRIME_FORM, m)
    B = count_representations(B_PRIME_FORM, m)
    if B % 2:
        raise ArithmeticError(f"odd B-count at m = {m}")
    return A - B // 2


@dataclass(frozen=True)
class TunnellResult:
    n: int
    coefficient: int
    coefficient_name: str
    l_value_factor: Fraction
    verdict: str

    @property
    def l_value_vanishes(self) -> bool:
        return self.l_value_factor == 0


def tunnell_coefficient(n: int) -> tuple[int, str]:
    """(a_n, "a_n") for odd n, (a'_{n/2}, "a'_{n/2}") for even n."""
    if n < 1 or not is_squarefree(n):
        raise ValueError(f"n must be a squarefree positive integer, got {n}")
    if n % 2:
        return coeff_a(n), f"a_{n}"
    return coeff_a_prime(n // 2), f"a'_{n // 2}"


def l_value_factor(coefficient: int, n: int) -> Fraction:
    if n % 2:
        return Fraction(coefficient * coefficient, 4)
    return Fraction(coefficient * coefficient, 2)


def verdict(n: int, r: Fraction) -> str:
    if r != 0:
        return NOT_CONGRUENT
    if n % 8 in (5, 6, 7):
        return CONGRUENT_CONDITIONAL
    return UNDETERMINED


def l_value_en(n: int) -> TunnellResult:
    """L(E_n/Q, 1) = r * omega / sqrt(n) with exact r."""
    coef, name = tunnell_coefficient(n)
    r = l_value_factor(coef, n)
    return TunnellResult(n, coef, name, r, verdict(n, r))


def congruent_verdict(n: int) -> TunnellResult:
    return l_value_en(n)
