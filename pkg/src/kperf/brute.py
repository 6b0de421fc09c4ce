"""Enumeration oracles for finite abelian groups.

These never look at a presentation: structure is recovered from element
orders alone, so they serve as an independent check on the Smith-form route.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Callable, Hashable, Iterable, Sequence

from .abelian import FGAbelianGroup, GroupHom
from .localization import prime_factors


def invariant_factors_from_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors (units dropped) of a finite abelian group, given the
    multiset of its element orders."""
    counts = Counter(int(o) for o in orders)
    size = sum(counts.values())
    if size == 0:
        raise ValueError("a group has at least one element")
    exponents: dict[int, list[int]] = {}
    for q in prime_factors(size):
        # log_q |G[q^j]| for j = 0, 1, ...
        logs = [0]
        j = 0
        while True:
            j += 1
            killed = sum(c for o, c in counts.items() if (q ** j) % o == 0)
            lg = round(math.log(killed, q))
            if q ** lg != killed:
                raise ValueError("order data is not that of an abelian group")
            logs.append(lg)
            if lg == logs[-2] and j > 1:
                break
        # number of cyclic q-factors of exponent >= j is logs[j] - logs[j-1]
        at_least = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        exps = []
        for j, n in enumerate(at_least, start=1):
            nxt = at_least[j] if j < len(at_least) else 0
            exps += [j] * (n - nxt)
        exponents[q] = sorted(exps, reverse=True)
    width = max((len(v) for v in exponents.values()), default=0)
    factors = []
    for i in range(width):
        factors.append(math.prod(q ** e[i] for q, e in exponents.items() if i < len(e)))
    out = tuple(sorted(factors))
    if math.prod(out) != size:
        raise ValueError("order data is not that of an abelian group")
    return out


def stable_image(step: Callable[[Hashable], Hashable], elements: Iterable[Hashable]) -> set:
    """Iterate an endomap on a finite set until the image stops shrinking."""
    current = set(elements)
    while True:
        nxt = {step(x) for x in current}
        if len(nxt) == len(current):
            return current
        current = nxt


def finite_colimit(theta: GroupHom) -> tuple[int, ...]:
    """Invariant factors of ``colim_theta A`` for finite ``A``, by enumeration.

    On a finite group the colimit is the stable image, on which ``theta`` is a
    bijection; element orders there give the structure.
    """
    A = theta.source
    if not A.is_finite:
        raise ValueError("enumeration needs a finite group")
    elems = [x.canonical for x in A.elements()]
    S = stable_image(lambda c: A.canonical(theta.apply_coords(A.from_canonical(c).coords)), elems)
    return invariant_factors_from_orders(A.element_order(A.from_canonical(c).coords) for c in S)


def group_invariants(A: FGAbelianGroup) -> tuple[int, ...]:
    """Invariant factors of a finite group, by enumerating its elements."""
    return invariant_factors_from_orders(x.order for x in A.elements())


def strip_exponent(factors: Sequence[int], p: int) -> tuple[int, ...]:
    out = []
    for d in factors:
        while d % p == 0:
            d //= p
        if d > 1:
            out.append(d)
    return tuple(sorted(out))
