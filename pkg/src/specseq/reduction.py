"""Sparse Gaussian elimination of chain complexes (algebraic Morse reduction).

A pair of cells ``(a, b)`` with ``<d a, b>`` a unit spans an acyclic
summand.  Removing it and correcting the boundaries of the cells that hit
``b`` yields a smaller complex that is chain homotopy equivalent to the
original.  When a filtration is present, only pairs on the same level are
cancelled, so the equivalence is filtered and every page from E^1 on is
unchanged.

The bar-resolution complexes behind the group-cohomology front end have tens
of thousands of cells, far beyond what dense exact matrices handle; this pass
brings them down to a few dozen cells before the page machinery runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rings import Ring


@dataclass
class SparseComplex:
    """Mutable sparse chain complex on integer cell ids.

    ``bd[c]`` maps each cell in the boundary of ``c`` to its coefficient and
    ``cobd[c]`` is the set of cells whose boundary contains ``c``.
    """

    ring: Ring
    names: list
    degree: list
    level: list | None
    bd: dict
    cobd: dict
    lift: dict | None = None

    @classmethod
    def build(cls, ring: Ring, names, degree, boundary, level=None, track: bool = False):
        bd = {}
        cobd = {i: set() for i in range(len(names))}
        for i, col in enumerate(boundary):
            bd[i] = {j: v for j, v in col.items() if v}
            for j in bd[i]:
                cobd[j].add(i)
        lift = {i: {i: ring(1)} for i in range(len(names))} if track else None
        return cls(ring, list(names), list(degree), list(level) if level is not None else None, bd, cobd, lift)

    def alive(self):
        return sorted(self.bd)

    def _norm(self, x):
        return x % self.ring.p if self.ring.kind == "F" else x

    def cancel(self, a: int, b: int) -> None:
        ring = self.ring
        bd, cobd = self.bd, self.cobd
        bd_a = bd[a]
        inv = ring.inv(bd_a[b])
        lift = self.lift
        for x in list(cobd[b]):
            if x == a:
                continue
            bx = bd[x]
            c = self._norm(bx[b] * inv)
            for y, v in bd_a.items():
                nv = self._norm(bx.get(y, 0) - c * v)
                if nv:
                    bx[y] = nv
                    cobd[y].add(x)
                else:
                    bx.pop(y, None)
                    cobd[y].discard(x)
            if lift is not None:
                gx = lift[x]
                for y, v in lift[a].items():
                    nv = self._norm(gx.get(y, 0) - c * v)
                    if nv:
                        gx[y] = nv
                    else:
                        gx.pop(y, None)
        for y in cobd[a]:
            del bd[y][a]
        for y in bd_a:
            cobd[y].discard(a)
        for y in bd[b]:
            cobd[y].discard(b)
        for c in (a, b):
            del bd[c]
            del cobd[c]
            if lift is not None:
                del lift[c]

    def reduce(self, max_passes: int = 50) -> int:
        """Cancel unit pairs until none remain; returns the number cancelled."""
        ring = self.ring
        level = self.level
        total = 0
        for _ in range(max_passes):
            count = 0
            order = sorted(self.bd, key=lambda c: len(self.cobd[c]))
            for b in order:
                if b not in self.bd:
                    continue
                best, bestcost = None, None
                for a in self.cobd[b]:
                    if level is not None and level[a] != level[b]:
                        continue
                    if not ring.is_unit(self.bd[a][b]):
                        continue
                    cost = len(self.bd[a])
                    if best is None or cost < bestcost:
                        best, bestcost = a, cost
                if best is not None:
                    self.cancel(best, b)
                    count += 1
            total += count
            if not count:
                break
        return total

    def prune_isolated(self, degrees) -> int:
        """Drop cells with empty boundary and coboundary in the given degrees."""
        degrees = set(degrees)
        gone = [c for c in self.bd if self.degree[c] in degrees and not self.bd[c] and not self.cobd[c]]
        for c in gone:
            del self.bd[c]
            del self.cobd[c]
            if self.lift is not None:
                del self.lift[c]
        return len(gone)
