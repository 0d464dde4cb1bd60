"""
Graded Rings and Polynomials
============================

Exact arithmetic for standard graded polynomial rings over a prime field,
optionally divided by a homogeneous regular sequence.

A polynomial is a sparse map from exponent vectors to nonzero residues.
The raw-dict helpers (`terms_add`, `terms_mul`, ...) are shared with the
Groebner engine, which works on dicts directly; `Polynomial` wraps them for
everything else.

Classes:
    GradedRing: K[x_0..x_n] / (q_1..q_c) with K = F_p.
    Polynomial: Immutable sparse polynomial bound to a ring.

Example:
    >>> from src.ring import GradedRing
    >>> R = GradedRing(["x", "y", "z"])
    >>> x, y, z = R.gens
    >>> f = (x + y) ** 2 - z * x
    >>> f.is_homogeneous(), f.degree()
    (True, 2)
"""

# Standard library imports
import logging
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

# Third-party imports
import numpy as np
import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.orderings import grevlex

# Local imports
from src.config import ENGINE_SETTINGS
from src.utils.error_utils import (
    ExceptionContext,
    HomogeneityError,
    InstanceParseError,
    ParameterError,
)
from src.utils.logging_utils import with_log_context
from src.utils.math_utils import check_characteristic, mod_inverse, multisets, symmetric_residue

Monomial = Tuple[int, ...]
Terms = Dict[Monomial, int]


# Raw term arithmetic
def terms_add(a: Terms, b: Terms, p: int, scale: int = 1) -> Terms:
    """a + scale * b modulo p."""
    result = dict(a)
    for mono, coeff in b.items():
        value = (result.get(mono, 0) + scale * coeff) % p
        if value:
            result[mono] = value
        else:
            result.pop(mono, None)
    return result


def terms_mul(a: Terms, b: Terms, p: int) -> Terms:
    """Product of two term dicts modulo p."""
    if not a or not b:
        return {}
    result: Terms = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            value = (result.get(mono, 0) + ca * cb) % p
            if value:
                result[mono] = value
            else:
                result.pop(mono, None)
    return result


def grevlex_key(mono: Monomial):
    """Sort key of a monomial in the graded reverse lexicographic order."""
    return grevlex(mono)


def leading_monomial(terms: Terms) -> Optional[Monomial]:
    if not terms:
        return None
    return max(terms, key=grevlex_key)


class GradedRing:
    """
    Standard graded ring K[x_0..x_n]/(q) over K = F_p.

    The quotient, when present, must be generated by a homogeneous regular
    sequence; it is appended to every submodule before a Groebner step, so
    all module computations run over the ambient polynomial ring S.
    """

    def __init__(
        self,
        variables: Sequence[str],
        characteristic: Optional[int] = None,
        quotient: Iterable = (),
    ):
        if len(variables) < 2:
            raise ParameterError("a graded ring needs at least two variables")
        if len(set(variables)) != len(variables):
            raise ParameterError(f"duplicate variable names in {list(variables)}")
        self.variables: Tuple[str, ...] = tuple(str(v) for v in variables)
        if characteristic is None:
            characteristic = ENGINE_SETTINGS["characteristic"]
        self.characteristic = check_characteristic(characteristic)
        self.nvars = len(self.variables)

        relations = []
        for q in quotient:
            if isinstance(q, str):
                q = self.parse(q)
            elif q.ring is not self:
                q = Polynomial(self, q.terms)
            if q.is_zero() or not q.is_homogeneous() or q.degree() < 1:
                raise HomogeneityError(
                    f"quotient generator {q} must be a nonzero homogeneous form"
                )
            relations.append(q)
        self.quotient: Tuple["Polynomial", ...] = tuple(relations)

    # Identity
    def _key(self):
        return (
            self.variables,
            self.characteristic,
            tuple(tuple(sorted(q.terms.items())) for q in self.quotient),
        )

    def __eq__(self, other):
        return isinstance(other, GradedRing) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        base = f"GF({self.characteristic})[{','.join(self.variables)}]"
        if self.quotient:
            base += "/(" + ", ".join(str(q) for q in self.quotient) + ")"
        return base

    # Invariants
    @property
    def quotient_degrees(self) -> List[int]:
        return [q.degree() for q in self.quotient]

    @property
    def krull_dim(self) -> int:
        return self.nvars - len(self.quotient)

    @property
    def n(self) -> int:
        """Dimension of Proj R, i.e. krull_dim - 1."""
        return self.krull_dim - 1

    @property
    def ambient(self) -> "GradedRing":
        """The polynomial ring S this ring is a quotient of."""
        if not self.quotient:
            return self
        return GradedRing(self.variables, self.characteristic)

    def with_quotient(self, forms: Iterable) -> "GradedRing":
        """This ring divided by additional forms (the caller guarantees regularity)."""
        extra = [f if isinstance(f, str) else Polynomial(self.ambient, f.terms) for f in forms]
        return GradedRing(
            self.variables, self.characteristic, list(self.quotient) + extra
        )

    @cached_property
    def hilbert_series(self):
        """Hilbert series of R itself."""
        from src.groebner import ideal_hilbert_series

        return ideal_hilbert_series(self.ambient, list(self.quotient))

    @cached_property
    @with_log_context(module="ring", operation="regularity_index")
    def regularity_index(self) -> int:
        """
        Smallest d0 with HF_R(d) = HP_R(d) for all d >= d0.

        Equals -(krull_dim - 1) for a polynomial ring.
        """
        series = self.hilbert_series
        d0 = series.a_invariant() + 1
        # HF and HP agree above the a-invariant; walk down while they still agree
        floor = d0 - len(series.reduced()[0]) - self.krull_dim - 2
        while d0 - 1 > floor and series.value(d0 - 1) == series.polynomial_value(d0 - 1):
            d0 -= 1
        if not self.quotient and d0 != -(self.krull_dim - 1):
            logging.error(f"regularity index {d0} disagrees with the closed form")
        return d0

    @cached_property
    def _quotient_reducer(self):
        from src.groebner import groebner_basis
        from src.modules import GradedFreeModule

        ambient = self.ambient
        module = GradedFreeModule((0,))
        return groebner_basis(
            ambient, module, [{(0, m): c for m, c in q.terms.items()} for q in self.quotient]
        )

    def reduce(self, poly: "Polynomial") -> "Polynomial":
        """Normal form modulo the defining regular sequence (identity on S)."""
        if not self.quotient or poly.is_zero():
            return poly
        vec = {(0, m): c for m, c in poly.terms.items()}
        reduced = self._quotient_reducer.reduce(vec)
        return Polynomial._raw(self, {m: c for (_, m), c in reduced.items()})

    def is_zero(self, poly: "Polynomial") -> bool:
        return self.reduce(poly).is_zero()

    # Element constructors
    def zero(self) -> "Polynomial":
        return Polynomial._raw(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        if len(exps) != self.nvars or min(exps, default=0) < 0:
            raise ParameterError(f"bad exponent vector {tuple(exps)}")
        return Polynomial(self, {tuple(exps): coeff})

    def var(self, index: int) -> "Polynomial":
        exps = [0] * self.nvars
        exps[index] = 1
        return Polynomial._raw(self, {tuple(exps): 1})

    @property
    def gens(self) -> List["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomials(self, degree: int) -> List[Monomial]:
        """Exponent vectors of the monomials of a degree, grevlex-descending."""
        if degree < 0:
            return []
        return sorted(multisets(self.nvars, degree), key=grevlex_key, reverse=True)

    def random_form(self, degree: int, rng: np.random.Generator) -> "Polynomial":
        """A form of the given degree with uniformly random coefficients."""
        monos = self.monomials(degree)
        if not monos:
            return self.zero()
        coeffs = rng.integers(0, self.characteristic, size=len(monos))
        return Polynomial(self, {m: int(c) for m, c in zip(monos, coeffs)})

    @cached_property
    def _symbols(self) -> Dict[str, sympy.Symbol]:
        return {name: sympy.Symbol(name) for name in self.variables}

    def parse(self, text: str) -> "Polynomial":
        """
        Parse polynomial text (``^`` or ``**`` for powers, rational coefficients
        reduced modulo p).

        Raises:
            InstanceParseError: On syntax errors or unknown symbols
        """
        symbols = self._symbols
        with ExceptionContext(f"Parsing polynomial '{text}'", InstanceParseError):
            expr = parse_expr(
                text,
                local_dict=dict(symbols),
                transformations=standard_transformations + (convert_xor,),
            )
        unknown = {str(s) for s in expr.free_symbols} - set(symbols)
        if unknown:
            raise InstanceParseError(f"unknown symbols {sorted(unknown)} in '{text}'")
        gens = [symbols[name] for name in self.variables]
        poly = sympy.Poly(expr, *gens)
        p = self.characteristic
        terms: Terms = {}
        for mono, coeff in poly.terms():
            rational = sympy.Rational(coeff)
            if rational.q % p == 0:
                raise InstanceParseError(f"denominator divisible by {p} in '{text}'")
            value = (int(rational.p) * mod_inverse(int(rational.q), p)) % p
            if value:
                terms[tuple(int(e) for e in mono)] = value
        return Polynomial._raw(self, terms)

    def from_sympy(self, expr) -> "Polynomial":
        return self.parse(str(expr))


class Polynomial:
    """Immutable sparse polynomial; terms map exponent vectors to residues in [1, p)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: GradedRing, terms: Optional[Dict] = None):
        p = ring.characteristic
        clean: Terms = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != ring.nvars:
                raise ParameterError(f"exponent vector {mono} has wrong length")
            value = int(coeff) % p
            if value:
                clean[mono] = (clean.get(mono, 0) + value) % p
                if not clean[mono]:
                    del clean[mono]
        self.ring = ring
        self.terms = clean

    @classmethod
    def _raw(cls, ring: GradedRing, terms: Terms) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    # Queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def lead_monomial(self) -> Optional[Monomial]:
        return leading_monomial(self.terms)

    def coefficient(self, mono: Sequence[int]) -> int:
        return self.terms.get(tuple(mono), 0)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    # Arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ParameterError("polynomials from different rings")
            return other
        if isinstance(other, (int, np.integer)):
            return self.ring.constant(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(
            self.ring, terms_add(self.terms, other.terms, self.ring.characteristic)
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(
            self.ring, terms_add(self.terms, other.terms, self.ring.characteristic, -1)
        )

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.ring.characteristic
        return Polynomial._raw(self.ring, {m: (-c) % p for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(
            self.ring, terms_mul(self.terms, other.terms, self.ring.characteristic)
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ParameterError("negative powers are not polynomials")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.characteristic
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {m: (v * c) % p for m, v in self.terms.items()})

    def monic(self) -> "Polynomial":
        lead = self.lead_monomial()
        if lead is None:
            return self
        return self.scale(mod_inverse(self.terms[lead], self.ring.characteristic))

    # Comparison / display
    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = self.ring.constant(int(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        p = self.ring.characteristic
        pieces = []
        for mono, coeff in self.sorted_terms():
            c = symmetric_residue(coeff, p)
            factors = []
            for name, e in zip(self.ring.variables, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            magnitude = abs(c)
            if not body:
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            pieces.append(("-" if c < 0 else "+", text))
        sign, first = pieces[0]
        out = ("-" if sign == "-" else "") + first
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    __repr__ = __str__

    def to_sympy(self):
        symbols = self.ring._symbols
        expr = sympy.Integer(0)
        for mono, coeff in self.terms.items():
            term = sympy.Integer(symmetric_residue(coeff, self.ring.characteristic))
            for name, e in zip(self.ring.variables, mono):
                if e:
                    term *= symbols[name] ** e
            expr += term
        return expr
