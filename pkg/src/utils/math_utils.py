"""
Mathematical Utility Functions
===========================

This module contains the combinatorial and modular-arithmetic helpers shared
by the polynomial kernel and the complex builders.

Basis conventions: exterior powers are indexed by k-subsets and symmetric
powers by multisets (as exponent vectors), both enumerated in lexicographic
order so that every run produces the same bases.

Functions:
    check_characteristic: Validate that a characteristic is a usable prime.
    mod_inverse: Inverse of a nonzero residue modulo a prime.
    subsets: Lexicographic k-subsets of range(n).
    multisets: Lexicographic size-k multisets of range(n) as exponent vectors.
    contraction_sign: Sign of removing an index from a sorted subset.
    binomial: Binomial coefficient that is zero outside the usual range.

Example:
    >>> from src.utils.math_utils import subsets, multisets
    >>> subsets(3, 2)
    [(0, 1), (0, 2), (1, 2)]
    >>> multisets(2, 2)
    [(2, 0), (1, 1), (0, 2)]
"""

# Standard library imports
import itertools
import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

# Third-party imports
from sympy import isprime

# Local imports
from src.utils.logging_utils import with_log_context
from src.utils.error_utils import handle_exception, ParameterError


@handle_exception(custom_mapping={TypeError: ParameterError, ValueError: ParameterError})
@with_log_context(module="math_utils", operation="check_characteristic")
def check_characteristic(p) -> int:
    """
    Validate a field characteristic.

    Args:
        p: Candidate characteristic (int or numeric string)

    Returns:
        The characteristic as an int

    Raises:
        ParameterError: If p is not a prime above 2
    """
    value = int(p)
    # Characteristic 2 breaks the sign conventions of the exterior algebra
    if value <= 2 or not isprime(value):
        logging.error(f"Rejected characteristic {p}")
        raise ParameterError(f"characteristic must be an odd prime, got {p}")
    return value


def mod_inverse(a: int, p: int) -> int:
    """Inverse of a modulo p; a must be nonzero modulo p."""
    a %= p
    if a == 0:
        raise ParameterError("zero has no inverse modulo p")
    return pow(a, -1, p)


def symmetric_residue(a: int, p: int) -> int:
    """Representative of a modulo p in (-p/2, p/2]."""
    a %= p
    return a - p if a > p // 2 else a


def binomial(n: int, k: int) -> int:
    """Binomial coefficient C(n, k), zero when k < 0 or n < k or n < 0."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def multichoose(n: int, k: int) -> int:
    """Number of size-k multisets on n letters."""
    if k < 0 or n < 0:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    return math.comb(n + k - 1, k)


@lru_cache(maxsize=None)
def subsets(n: int, k: int) -> List[Tuple[int, ...]]:
    """Lexicographic k-subsets of range(n); empty list when k is out of range."""
    if k < 0 or k > n:
        return []
    return list(itertools.combinations(range(n), k))


@lru_cache(maxsize=None)
def multisets(n: int, k: int) -> List[Tuple[int, ...]]:
    """
    Size-k multisets of range(n) as exponent vectors, lexicographic in the
    underlying sorted index tuples (so (k,0,..) comes first).
    """
    if k < 0:
        return []
    if n == 0:
        return [()] if k == 0 else []
    result = []
    for combo in itertools.combinations_with_replacement(range(n), k):
        exps = [0] * n
        for index in combo:
            exps[index] += 1
        result.append(tuple(exps))
    return result


@lru_cache(maxsize=None)
def subset_positions(n: int, k: int) -> dict:
    """Map k-subset -> its position in subsets(n, k)."""
    return {s: i for i, s in enumerate(subsets(n, k))}


@lru_cache(maxsize=None)
def multiset_positions(n: int, k: int) -> dict:
    """Map exponent vector -> its position in multisets(n, k)."""
    return {m: i for i, m in enumerate(multisets(n, k))}


def contraction_sign(subset: Sequence[int], index: int) -> Optional[int]:
    """
    Sign of contracting the basis vector e_index out of e_subset.

    e_index* contracted with e_{s_0} ^ ... ^ e_{s_k} is (-1)^pos e_{subset minus index},
    pos being the 0-based position of index in the sorted subset. None when
    index is not in the subset.
    """
    try:
        pos = list(subset).index(index)
    except ValueError:
        return None
    return -1 if pos % 2 else 1


def remove_index(subset: Sequence[int], index: int) -> Tuple[int, ...]:
    """The sorted subset with index removed."""
    return tuple(s for s in subset if s != index)
