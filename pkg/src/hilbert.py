"""
Hilbert Series
==============

Hilbert series of finitely generated graded modules, stored as a Laurent
numerator over a power of (1 - T). Numerators are numpy object arrays so
arithmetic stays exact.

The Hilbert series of S/I for a monomial ideal I is computed with the
pivot recursion N(I) = N(I + x_j) + T * N(I : x_j), pivoting on the variable
that divides the most generators, down to ideals with at most one generator
that is not a pure power.

Classes:
    HilbertSeries: h(T) * T^shift / (1 - T)^D with the derived invariants.

Functions:
    monomial_numerator: Numerator of S/I over (1 - T)^nvars for a monomial ideal.
    hilbert_series_from_leads: Series of F/U from the lead terms of a Groebner basis.
"""

# Standard library imports
import math
from typing import Dict, Iterable, List, Sequence, Tuple

# Third-party imports
import numpy as np

# Local imports
from src.utils.math_utils import binomial


def _trim(coeffs: np.ndarray, shift: int) -> Tuple[np.ndarray, int]:
    nonzero = np.nonzero(coeffs)[0]
    if len(nonzero) == 0:
        return np.zeros(0, dtype=object), 0
    return coeffs[nonzero[0]:nonzero[-1] + 1], shift + int(nonzero[0])


def _one_minus_t_power(k: int) -> np.ndarray:
    return np.array([(-1) ** i * binomial(k, i) for i in range(k + 1)], dtype=object)


def _generalized_binomial(x: int, m: int) -> int:
    """x choose m for any integer x, as a polynomial in x."""
    if m < 0:
        return 0
    value = 1
    for i in range(m):
        value *= x - i
    return value // math.factorial(m)


class HilbertSeries:
    """
    Rational Hilbert series sum(h_k T^(shift+k)) / (1 - T)^power.

    Equality compares the rational functions, so representations with
    different denominator powers can be added and compared freely.
    """

    __slots__ = ("numerator", "shift", "power")

    def __init__(self, coefficients: Iterable[int], shift: int = 0, power: int = 0):
        coeffs = np.array([int(c) for c in coefficients], dtype=object)
        self.numerator, self.shift = _trim(coeffs, int(shift))
        self.power = int(power)

    @classmethod
    def zero(cls, power: int = 0) -> "HilbertSeries":
        return cls([], 0, power)

    @classmethod
    def monomial(cls, degree: int, power: int = 0) -> "HilbertSeries":
        return cls([1], degree, power)

    # Arithmetic
    def raised(self, power: int) -> "HilbertSeries":
        """Same series written over (1 - T)^power (power >= self.power)."""
        if power == self.power:
            return self
        extra = _one_minus_t_power(power - self.power)
        if len(self.numerator) == 0:
            return HilbertSeries.zero(power)
        return HilbertSeries(np.convolve(self.numerator, extra), self.shift, power)

    def _aligned(self, other: "HilbertSeries") -> Tuple[np.ndarray, np.ndarray, int, int]:
        power = max(self.power, other.power)
        a, b = self.raised(power), other.raised(power)
        if len(a.numerator) == 0:
            return np.zeros(0, dtype=object), b.numerator, b.shift, power
        if len(b.numerator) == 0:
            return a.numerator, np.zeros(0, dtype=object), a.shift, power
        low = min(a.shift, b.shift)
        high = max(a.shift + len(a.numerator), b.shift + len(b.numerator))
        left = np.zeros(high - low, dtype=object)
        right = np.zeros(high - low, dtype=object)
        left[a.shift - low:a.shift - low + len(a.numerator)] = a.numerator
        right[b.shift - low:b.shift - low + len(b.numerator)] = b.numerator
        return left, right, low, power

    def __add__(self, other: "HilbertSeries") -> "HilbertSeries":
        left, right, low, power = self._aligned(other)
        if len(left) == 0:
            return HilbertSeries(right, low, power)
        if len(right) == 0:
            return HilbertSeries(left, low, power)
        return HilbertSeries(left + right, low, power)

    def __neg__(self) -> "HilbertSeries":
        return HilbertSeries(-self.numerator, self.shift, self.power)

    def __sub__(self, other: "HilbertSeries") -> "HilbertSeries":
        return self + (-other)

    def __mul__(self, other: "HilbertSeries") -> "HilbertSeries":
        if len(self.numerator) == 0 or len(other.numerator) == 0:
            return HilbertSeries.zero(self.power + other.power)
        return HilbertSeries(
            np.convolve(self.numerator, other.numerator),
            self.shift + other.shift,
            self.power + other.power,
        )

    def shifted(self, k: int) -> "HilbertSeries":
        """Multiplication by T^k; the series of M(-k)."""
        return HilbertSeries(self.numerator, self.shift + k, self.power)

    def twisted(self, a: int) -> "HilbertSeries":
        """Series of M(a)."""
        return self.shifted(-a)

    def times_twists(self, twists: Sequence[int]) -> "HilbertSeries":
        """Series of M tensor sum R(a) over the given twists."""
        if not twists:
            return HilbertSeries.zero(self.power)
        laurent = laurent_from_twists(twists)
        return self * laurent

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        left, right, _, _ = self._aligned(other)
        if len(left) == 0 or len(right) == 0:
            return not np.any(left) and not np.any(right)
        return bool(np.all(left == right))

    __hash__ = None

    # Invariants
    def is_zero(self) -> bool:
        return len(self.numerator) == 0

    def reduced(self) -> Tuple[np.ndarray, int, int]:
        """(h, shift, D) with h(1) != 0, i.e. the lowest-terms representation."""
        h, shift, power = self.numerator, self.shift, self.power
        if len(h) == 0:
            return h, 0, 0
        while power > 0 and sum(h) == 0:
            # h = (1 - T) q  =>  q_k = h_0 + ... + h_k
            h = np.cumsum(h)[:-1]
            h, shift = _trim(h, shift)
            power -= 1
        return h, shift, power

    def dimension(self) -> int:
        """Krull dimension of the module; -1 for the zero module."""
        h, _, power = self.reduced()
        return -1 if len(h) == 0 else power

    def multiplicity(self) -> int:
        h, _, _ = self.reduced()
        return int(sum(h))

    def a_invariant(self) -> int:
        """Degree of the reduced rational function (deg numerator - D)."""
        h, shift, power = self.reduced()
        if len(h) == 0:
            return 0
        return shift + len(h) - 1 - power

    def initial_degree(self) -> int:
        """Lowest degree with a nonzero value (the numerator starts there)."""
        return self.shift

    def value(self, d: int) -> int:
        """The Hilbert function at degree d."""
        h, shift, power = self.reduced()
        total = 0
        for k, coeff in enumerate(h):
            j = d - shift - k
            if j < 0:
                continue
            total += coeff * (binomial(j + power - 1, power - 1) if power else int(j == 0))
        return int(total)

    def polynomial_value(self, d: int) -> int:
        """The Hilbert polynomial at degree d (zero for finite length modules)."""
        h, shift, power = self.reduced()
        if power == 0:
            return 0
        total = 0
        for k, coeff in enumerate(h):
            total += coeff * _generalized_binomial(d - shift - k + power - 1, power - 1)
        return int(total)

    def window(self, low: int, high: int) -> List[int]:
        return [self.value(d) for d in range(low, high + 1)]

    def __repr__(self):
        h, shift, power = self.reduced()
        return f"HilbertSeries(h={list(map(int, h))}, shift={shift}, D={power})"

    def to_dict(self) -> Dict:
        h, shift, power = self.reduced()
        return {"numerator": [int(c) for c in h], "shift": int(shift), "power": int(power)}


def laurent_from_twists(twists: Sequence[int]) -> HilbertSeries:
    """sum T^(-a): the numerator of a free module with the given twists."""
    degrees = [-a for a in twists]
    low = min(degrees)
    coeffs = np.zeros(max(degrees) - low + 1, dtype=object)
    for d in degrees:
        coeffs[d - low] += 1
    return HilbertSeries(coeffs, low, 0)


# Monomial ideals
def _minimalize(rows: np.ndarray) -> np.ndarray:
    """Drop generators divisible by another generator."""
    if len(rows) <= 1:
        return rows
    order = np.argsort(rows.sum(axis=1), kind="stable")
    rows = rows[order]
    kept: List[np.ndarray] = []
    for row in rows:
        if not any(np.all(row >= k) for k in kept):
            kept.append(row)
    return np.array(kept, dtype=int)


def _poly_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)


def _poly_sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    size = max(len(a), len(b))
    out = np.zeros(size, dtype=object)
    out[:len(a)] += a
    out[:len(b)] -= b
    return out


def _poly_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _poly_sub(a, -b)


def _monomial_poly(degree: int) -> np.ndarray:
    out = np.zeros(degree + 1, dtype=object)
    out[degree] = 1
    return out


def _product_one_minus(powers: Iterable[int]) -> np.ndarray:
    out = np.array([1], dtype=object)
    for a in powers:
        out = _poly_mul(out, _poly_sub(np.array([1], dtype=object), _monomial_poly(a)))
    return out


def _base_numerator(rows: np.ndarray) -> np.ndarray:
    """Numerator of a minimal ideal with at most one non-pure-power generator."""
    support = (rows > 0).sum(axis=1)
    pure = rows[support == 1]
    mixed = rows[support > 1]
    pure_powers = [int(row.max()) for row in pure]
    numerator = _product_one_minus(pure_powers)
    if len(mixed) == 0:
        return numerator
    m = mixed[0]
    colon_powers = []
    for row in pure:
        var = int(np.argmax(row))
        remaining = int(row[var]) - int(m[var])
        if remaining <= 0:
            # J : m is the unit ideal
            return numerator
        colon_powers.append(remaining)
    colon = _product_one_minus(colon_powers)
    return _poly_sub(numerator, _poly_mul(_monomial_poly(int(m.sum())), colon))


def monomial_numerator(rows: Sequence[Sequence[int]], nvars: int) -> np.ndarray:
    """
    Coefficients of N with HS(S/I) = N(T) / (1 - T)^nvars.

    Args:
        rows: Exponent vectors of generators of I
        nvars: Number of variables of S

    Returns:
        Object array of numerator coefficients starting at degree 0
    """
    array = np.array([list(r) for r in rows], dtype=int).reshape(-1, nvars)
    return _numerator(array)


def _numerator(rows: np.ndarray) -> np.ndarray:
    if len(rows) == 0:
        return np.array([1], dtype=object)
    if np.any(rows.sum(axis=1) == 0):
        return np.zeros(1, dtype=object)
    rows = _minimalize(rows)
    support = (rows > 0).sum(axis=1)
    if (support > 1).sum() <= 1:
        return _base_numerator(rows)
    # pivot on the variable dividing the most non-pure-power generators
    mixed = rows[support > 1]
    j = int(np.argmax((mixed > 0).sum(axis=0)))
    pivot = np.zeros(rows.shape[1], dtype=int)
    pivot[j] = 1
    left = np.vstack([rows[rows[:, j] == 0], pivot])
    right = np.maximum(rows - pivot, 0)
    return _poly_add(_numerator(left), _poly_mul(_monomial_poly(1), _numerator(right)))


def hilbert_series_from_leads(
    nvars: int,
    twists: Sequence[int],
    leads: Dict[int, List[Tuple[int, ...]]],
) -> HilbertSeries:
    """
    Series of F / U from the lead monomials of a Groebner basis of U.

    Args:
        nvars: Number of variables of the ambient polynomial ring
        twists: Twists of the free module F
        leads: Component -> lead exponent vectors in that component
    """
    total = HilbertSeries.zero(nvars)
    for comp, a in enumerate(twists):
        numerator = monomial_numerator(leads.get(comp, []), nvars)
        total = total + HilbertSeries(numerator, -a, nvars)
    return total
