"""Independent reference computations used only by the tests.

Nothing here calls the Smith-form code: finite groups are explicit products
of cyclic groups, subgroups are closed by breadth-first search, and
structure is read off element orders.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction


def elements(moduli):
    return list(itertools.product(*[range(n) for n in moduli]))


def add(x, y, moduli):
    return tuple((a + b) % n for a, b, n in zip(x, y, moduli))


def apply(T, x, moduli):
    """Column convention: T[i][j] is the i-th coordinate of the image of e_j."""
    return tuple(sum(T[i][j] * x[j] for j in range(len(x))) % moduli[i] for i in range(len(moduli)))


def well_defined(T, moduli):
    # the image of n_j e_j must vanish
    return all(apply(T, tuple(n if i == j else 0 for i in range(len(moduli))), moduli) == (0,) * len(moduli)
               for j, n in enumerate(moduli))


def closure(gens, moduli):
    zero = (0,) * len(moduli)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = add(x, g, moduli)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def order(x, moduli):
    return math.lcm(*[n // math.gcd(a, n) for a, n in zip(x, moduli)]) if moduli else 1


def invariants_from_orders(orders):
    """Invariant factors from the multiset of element orders (units dropped)."""
    counts = Counter(orders)
    size = sum(counts.values())
    primes = [p for p in range(2, size + 1) if size % p == 0 and all(p % q for q in range(2, p))]
    per_prime = {}
    for p in primes:
        ranks = []  # |G[p^j]| = p^ranks[j]
        j = 0
        while True:
            c = sum(v for o, v in counts.items() if (p ** j) % o == 0)
            ranks.append(round(math.log(c, p)))
            if len(ranks) > 1 and ranks[-1] == ranks[-2]:
                break
            j += 1
        diffs = [ranks[i + 1] - ranks[i] for i in range(len(ranks) - 1)]
        exps = []
        for e, d in enumerate(diffs, start=1):
            exps += [e] * (d - (diffs[e] if e < len(diffs) else 0))
        per_prime[p] = sorted(exps, reverse=True)
    n = max((len(v) for v in per_prime.values()), default=0)
    return tuple(sorted(math.prod(p ** e[i] for p, e in per_prime.items() if i < len(e)) for i in range(n)))


def quotient_order(k, relations, N):
    """|Z^k / R| when N Z^k lies in the row span of R: enumerate (Z/N)^k."""
    moduli = (N,) * k
    sub = closure([tuple(c % N for c in r) for r in relations], moduli)
    return N ** k // len(sub)


def stable_image(T, moduli):
    S = set(elements(moduli))
    while True:
        S2 = {apply(T, x, moduli) for x in S}
        if len(S2) == len(S):
            return S
        S = S2


def finite_colimit_invariants(T, moduli):
    S = stable_image(T, moduli)
    return invariants_from_orders([order(x, moduli) for x in S])


def eventually_killed(T, moduli):
    """Elements with theta^n(x) = 0 for some n: the union of ker theta^n."""
    f = {x: apply(T, x, moduli) for x in elements(moduli)}
    killed = {(0,) * len(moduli)}
    while True:
        grown = {x for x, y in f.items() if y in killed}
        if grown <= killed:
            return killed
        killed |= grown


def primary_torsion(moduli, ell):
    """Elements killed by a power of ell."""
    return {x for x in elements(moduli) if pf_strip(order(x, moduli), ell) == 1}


def pf_strip(n, ell):
    g = math.gcd(n, ell)
    while g > 1:
        while n % g == 0:
            n //= g
        g = math.gcd(n, ell)
    return n


def strip_invariants(factors, ell):
    return tuple(sorted(d for d in (pf_strip(d, ell) for d in factors) if d > 1))


def colimit_is_localization(T, moduli, ell):
    """For finite A: colim_theta A ~ A[1/ell] under A  iff  the eventually
    killed elements are exactly the ell-primary torsion."""
    return eventually_killed(T, moduli) == primary_torsion(moduli, ell)


# -- power series over a ring given by a multiplication function -------------


def series_mul(a, b, mul, add_, zero, n):
    out = [zero] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        for j, y in enumerate(b[: n + 1 - i]):
            out[i + j] = add_(out[i + j], mul(x, y))
    return out


def rational_series(num, den, n):
    """Coefficients of num/den over Q, den[0] = 1."""
    out = []
    num = [Fraction(c) for c in num] + [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        c = num[k] - sum(den[i] * out[k - i] for i in range(1, min(k, len(den) - 1) + 1))
        out.append(c)
    return out
