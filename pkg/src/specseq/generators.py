"""Random filtered complexes for property tests and the acceptance suite.

A complex is assembled from elementary pieces (a lone cell, or a pair
``a -> k b`` with ``level(b) <= level(a)``) and then scrambled by random
filtration-preserving changes of basis, which keeps d∘d = 0 and the
filtration intact while producing dense, non-diagonal differentials.
"""

from __future__ import annotations

import random

from .complexes import BasedComplex
from .filtered import FilteredComplex
from .rings import Ring


def random_filtered_complex(rng: random.Random, ring: Ring, max_dim: int = 10, max_level: int = 3,
                            max_degree: int = 3, scramble: int = 12) -> FilteredComplex:
    names: list[str] = []
    degree: list[int] = []
    level: list[int] = []
    bd: list[dict] = []

    def cell(n, p):
        names.append(f"x{len(names)}")
        degree.append(n)
        level.append(p)
        bd.append({})
        return len(names) - 1

    target = rng.randint(1, max_dim)
    while len(names) < target:
        if len(names) + 2 <= target and rng.random() < 0.6 and max_degree > 0:
            n = rng.randint(1, max_degree)
            pb = rng.randint(0, max_level)
            pa = rng.randint(pb, max_level)
            b = cell(n - 1, pb)
            a = cell(n, pa)
            k = 1 if ring.is_field else rng.choice([1, 1, 2, 3])
            bd[a][b] = ring(k if ring.kind != "F" else rng.randint(1, ring.p - 1))
        else:
            cell(rng.randint(0, max_degree), rng.randint(0, max_level))

    # x_i <- x_i + c x_j with level(j) <= level(i): column op on d out of the
    # degree, row op (with -c) on d into it
    for _ in range(scramble):
        i, j = rng.randrange(len(names)), rng.randrange(len(names))
        if i == j or degree[i] != degree[j] or level[j] > level[i]:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for y, v in list(bd[j].items()):
            nv = ring(bd[i].get(y, 0) + c * v)
            if nv:
                bd[i][y] = nv
            else:
                bd[i].pop(y, None)
        for col in bd:
            if i in col:
                nv = ring(col.get(j, 0) - c * col[i])
                if nv:
                    col[j] = nv
                else:
                    col.pop(j, None)
    C = BasedComplex(ring, tuple(names), tuple(degree), tuple(bd))
    return FilteredComplex(C, level)
