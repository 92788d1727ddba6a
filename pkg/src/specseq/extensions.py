"""Extension problems for finitely generated abelian groups.

Given the graded pieces of a filtered module, which middle modules are
possible?  Free quotients split off, free ranks add, and over a field only
dimensions matter.  The interesting case is finite: a finite abelian p-group
of type λ has a subgroup of type μ with quotient of type ν exactly when the
Littlewood-Richardson coefficient c^λ_{μν} is positive, so candidates are
enumerated prime by prime from partitions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import UnboundedEnumeration
from .rings import Ring

ORDER_BOUND = 1024


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power_parts(torsion: Iterable[int]) -> dict[int, tuple]:
    """Map prime -> partition (descending exponents) of the p-primary part."""
    parts: dict[int, list] = {}
    for d in torsion:
        for p, e in factorize(d).items():
            parts.setdefault(p, []).append(e)
    return {p: tuple(sorted(es, reverse=True)) for p, es in parts.items()}


def invariant_factors_from_parts(parts: dict[int, Sequence[int]]) -> tuple:
    """Ascending divisibility chain d1 | d2 | ... from primary decomposition."""
    k = max((len(lam) for lam in parts.values()), default=0)
    out = []
    for i in range(k):
        d = 1
        for p, lam in parts.items():
            if i < len(lam):
                d *= p ** lam[i]
        out.append(d)
    return tuple(reversed(out))


def canonical_torsion(torsion: Iterable[int]) -> tuple:
    return invariant_factors_from_parts(prime_power_parts([d for d in torsion if d > 1]))


@lru_cache(maxsize=None)
def partitions(n: int, largest: int | None = None) -> tuple:
    if largest is None:
        largest = n
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return tuple(out)


def abelian_groups_of_order(n: int) -> list[tuple]:
    """Invariant-factor tuples of every abelian group of order n."""
    f = factorize(n)
    primes = sorted(f)
    out = []
    for choice in itertools.product(*(partitions(f[p]) for p in primes)):
        out.append(invariant_factors_from_parts(dict(zip(primes, choice))))
    return out


def lr_positive(lam: Sequence[int], mu: Sequence[int], nu: Sequence[int]) -> bool:
    """Whether the Littlewood-Richardson coefficient c^lam_{mu,nu} is nonzero.

    Searches for one LR tableau of shape lam/mu and content nu: rows weakly
    increase, columns strictly increase, and the reverse reading word is a
    lattice word.
    """
    lam, mu, nu = list(lam), list(mu), list(nu)
    if sum(lam) != sum(mu) + sum(nu):
        return False
    mu = mu + [0] * (len(lam) - len(mu))
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        return False
    cells = [(i, j) for i in range(len(lam)) for j in range(lam[i] - 1, mu[i] - 1, -1)]
    filling: dict = {}
    count = [0] * (len(nu) + 1)

    def rec(k):
        if k == len(cells):
            return count[: len(nu)] == nu
        i, j = cells[k]
        hi = len(nu)
        right = filling.get((i, j + 1))
        if right is not None:
            hi = min(hi, right + 1)
        lo = 0
        above = filling.get((i - 1, j))
        if above is not None:
            lo = above + 1
        for v in range(lo, hi):
            if count[v] >= nu[v]:
                continue
            if v > 0 and count[v] + 1 > count[v - 1]:
                continue
            filling[(i, j)] = v
            count[v] += 1
            if rec(k + 1):
                return True
            count[v] -= 1
            del filling[(i, j)]
        return False

    return rec(0)


def _order(torsion: Sequence[int]) -> int:
    out = 1
    for d in torsion:
        out *= d
    return out


def torsion_extensions(sub: Sequence[int], quot: Sequence[int]) -> list[tuple]:
    """All B (invariant factors) with a subgroup ≅ sub and quotient ≅ quot."""
    total = _order(sub) * _order(quot)
    if total > ORDER_BOUND:
        raise UnboundedEnumeration(f"torsion order {total} exceeds the enumeration bound {ORDER_BOUND}")
    ps = prime_power_parts(sub)
    pq = prime_power_parts(quot)
    primes = sorted(set(ps) | set(pq))
    per_prime = []
    for p in primes:
        mu, nu = ps.get(p, ()), pq.get(p, ())
        n = sum(mu) + sum(nu)
        per_prime.append([lam for lam in partitions(n) if lr_positive(lam, mu, nu)])
    out = []
    for choice in itertools.product(*per_prime):
        out.append(invariant_factors_from_parts(dict(zip(primes, choice))))
    return sorted(set(out))


def bruteforce_torsion_extensions(sub: Sequence[int], quot: Sequence[int]) -> list[tuple]:
    """Same answer as :func:`torsion_extensions`, by listing subgroups.

    Every abelian group B of the right order is checked for a subgroup with
    the right isomorphism type and quotient.  Slow, used as a test oracle.
    """
    from .linalg import Submodule, subquotient, relation_module
    from .rings import ZZ

    sub, quot = canonical_torsion(sub), canonical_torsion(quot)
    ngen = len(sub)
    out = []
    for B in abelian_groups_of_order(_order(sub) * _order(quot)):
        k = len(B)
        rel = relation_module(ZZ, B)
        elements = list(itertools.product(*(range(d) for d in B)))
        found = False
        for gens in itertools.combinations_with_replacement(elements, ngen):
            H = Submodule.span(ZZ, k, gens) + rel
            hs = tuple(d for d in subquotient(H, rel).invariant_factors)
            qs = tuple(d for d in subquotient(Submodule.full(ZZ, k), H).invariant_factors)
            if canonical_torsion(hs) == sub and canonical_torsion(qs) == quot:
                found = True
                break
        if found:
            out.append(B)
    return sorted(out)


# --------------------------------------------------------------------------
# towers


def factors_of(ring: Ring, free: int, torsion: Sequence[int]) -> tuple:
    if ring.is_field:
        return (0,) * free
    return tuple(canonical_torsion(torsion)) + (0,) * free


def extend(ring: Ring, sub: Sequence[int], quot: Sequence[int]) -> list[tuple]:
    """Possible middles B of 0 -> sub -> B -> quot -> 0, as factor tuples."""
    sub_free = sum(1 for d in sub if d == 0)
    quot_free = sum(1 for d in quot if d == 0)
    if ring.is_field:
        return [(0,) * (len(sub) + len(quot))]
    sub_t = [d for d in sub if d]
    quot_t = [d for d in quot if d]
    if not quot_t:
        # free quotient splits
        return [factors_of(ring, sub_free + quot_free, sub_t)]
    if not sub_t and not sub_free:
        return [factors_of(ring, quot_free, quot_t)]
    if sub_free:
        raise UnboundedEnumeration(
            "free submodule under a torsion quotient: the middle module is not determined by finite enumeration")
    return [factors_of(ring, quot_free, t) for t in torsion_extensions(sub_t, quot_t)]


@dataclass(frozen=True)
class ExtensionStep:
    p: int
    quotient: tuple
    sub_candidates: tuple
    middle_candidates: tuple


@dataclass(frozen=True)
class ExtensionTower:
    ring: Ring
    n: int
    steps: tuple
    candidates: tuple  # possible H_n as factor tuples
    resolved: tuple | None = field(default=None)

    @property
    def is_resolved(self) -> bool:
        return self.resolved is not None

    def labels(self) -> list[str]:
        from .linalg import factors_label
        return [factors_label(self.ring, c) for c in self.candidates]


def build_tower(ring: Ring, n: int, graded: Sequence[tuple[int, Sequence[int]]]) -> ExtensionTower:
    """Tower of short exact sequences from associated-graded pieces.

    ``graded`` lists ``(p, factors)`` from the bottom of the filtration up.
    """
    current = {()}
    steps = []
    nonzero = sum(1 for _, f in graded if f)
    for p, quot in graded:
        quot = tuple(quot)
        nxt = set()
        for a in sorted(current):
            nxt.update(extend(ring, a, quot))
        steps.append(ExtensionStep(p, quot, tuple(sorted(current)), tuple(sorted(nxt))))
        current = nxt
    cands = tuple(sorted(current))
    resolved = cands[0] if (len(cands) == 1 or nonzero <= 1) and cands else None
    return ExtensionTower(ring, n, tuple(steps), cands, resolved)
