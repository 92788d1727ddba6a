"""First-quadrant double complexes, their total complex and two filtrations.

Orientation is cohomological: ``∂_h`` maps (p, q) to (p+1, q) and ``∂_v``
maps (p, q) to (p, q+1).  The two must anticommute, so that ``∂_h + ∂_v``
squares to zero on the total complex.  Maps are stored sparsely, one dict
per source cell, because the bar-resolution double complexes get large.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .complexes import BasedComplex
from .errors import DimensionMismatch, NotAComplex
from .filtered import FilteredComplex
from .linalg import ExactMatrix
from .rings import Ring


def _compose(ring: Ring, first: Sequence[dict], second: Sequence[dict] | None, col: int) -> dict:
    """(second ∘ first) applied to source cell ``col``."""
    out: dict = {}
    if second is None:
        return out
    for j, a in first[col].items():
        for k, b in second[j].items():
            out[k] = ring(out.get(k, 0) + a * b)
    return {k: v for k, v in out.items() if v}


@dataclass(frozen=True, eq=False)
class DoubleComplex:
    ring: Ring
    names: Mapping[tuple, tuple]
    horizontal: Mapping[tuple, tuple] = field(default_factory=dict)
    vertical: Mapping[tuple, tuple] = field(default_factory=dict)
    truncation: int | None = None

    def __post_init__(self):
        for (p, q) in self.names:
            if p < 0 or q < 0:
                raise DimensionMismatch(f"entry ({p},{q}) is outside the first quadrant")
        for label, maps, step in (("horizontal", self.horizontal, (1, 0)), ("vertical", self.vertical, (0, 1))):
            for (p, q), cols in maps.items():
                src = len(self.names.get((p, q), ()))
                tgt = len(self.names.get((p + step[0], q + step[1]), ()))
                if len(cols) != src or any(k >= tgt for c in cols for k in c):
                    raise DimensionMismatch(f"{label} map at ({p},{q}) has the wrong shape")

    @classmethod
    def from_matrices(cls, ring: Ring, dims: Mapping[tuple, int | Sequence[str]],
                      horizontal: Mapping[tuple, Sequence[Sequence[int]]] = None,
                      vertical: Mapping[tuple, Sequence[Sequence[int]]] = None,
                      commuting: bool = False, truncation: int | None = None,
                      validate: bool = True) -> "DoubleComplex":
        """Dense input: matrices have one row per target and one column per source cell.

        With ``commuting=True`` the squares are taken to commute and ∂_v on
        column p is multiplied by (-1)^p to make them anticommute.
        """
        names = {}
        for pq, d in dims.items():
            pq = tuple(pq)
            names[pq] = tuple(d) if not isinstance(d, int) else tuple(f"g{i}" for i in range(d))

        def sparse(mats, sign_of=None):
            out = {}
            for pq, M in (mats or {}).items():
                pq = tuple(pq)
                s = sign_of(pq) if sign_of else 1
                ncols = len(names.get(pq, ()))
                cols = []
                for j in range(ncols):
                    cols.append({i: ring(s * row[j]) for i, row in enumerate(M) if ring(row[j])})
                out[pq] = tuple(cols)
            return out

        h = sparse(horizontal)
        v = sparse(vertical, (lambda pq: (-1) ** pq[0]) if commuting else None)
        D = cls(ring, names, h, v, truncation)
        return validate_double(D) if validate else D

    def positions(self) -> list:
        return sorted(pq for pq, n in self.names.items() if n)

    def dim(self, p: int, q: int) -> int:
        return len(self.names.get((p, q), ()))

    def horizontal_matrix(self, p: int, q: int) -> ExactMatrix:
        return _dense(self.ring, self.horizontal.get((p, q)), self.dim(p + 1, q), self.dim(p, q))

    def vertical_matrix(self, p: int, q: int) -> ExactMatrix:
        return _dense(self.ring, self.vertical.get((p, q)), self.dim(p, q + 1), self.dim(p, q))


def _dense(ring, cols, rows, ncols) -> ExactMatrix:
    data = [[ring(0)] * ncols for _ in range(rows)]
    for j, c in enumerate(cols or ()):
        for i, v in c.items():
            data[i][j] = v
    return ExactMatrix(ring, rows, ncols, tuple(tuple(r) for r in data))


def validate_double(D: DoubleComplex) -> DoubleComplex:
    """Check ∂_h∂_h = 0, ∂_v∂_v = 0 and ∂_h∂_v + ∂_v∂_h = 0 cell by cell."""
    ring = D.ring
    for (p, q) in D.positions():
        h, v = D.horizontal.get((p, q)), D.vertical.get((p, q))
        for j in range(D.dim(p, q)):
            if h and _compose(ring, h, D.horizontal.get((p + 1, q)), j):
                raise NotAComplex(p + q, D.names[(p, q)][j], f"∂_h∂_h != 0 at ({p},{q})")
            if v and _compose(ring, v, D.vertical.get((p, q + 1)), j):
                raise NotAComplex(p + q, D.names[(p, q)][j], f"∂_v∂_v != 0 at ({p},{q})")
            hv = _compose(ring, v, D.horizontal.get((p, q + 1)), j) if v else {}
            vh = _compose(ring, h, D.vertical.get((p + 1, q)), j) if h else {}
            for k in set(hv) | set(vh):
                if ring(hv.get(k, 0) + vh.get(k, 0)):
                    raise NotAComplex(p + q, D.names[(p, q)][j], f"squares do not anticommute at ({p},{q})")
    return D


def totalize(D: DoubleComplex) -> BasedComplex:
    """Total cochain complex with differential ∂_h + ∂_v.

    Cells are named ``"p,q:name"`` and ordered by total degree, then p.
    """
    ring = D.ring
    order = sorted(D.positions(), key=lambda pq: (pq[0] + pq[1], pq[0]))
    offset = {}
    names, degrees = [], []
    for pq in order:
        offset[pq] = len(names)
        p, q = pq
        for nm in D.names[pq]:
            names.append(f"{p},{q}:{nm}")
            degrees.append(-(p + q))
    bd = []
    for pq in order:
        p, q = pq
        h, v = D.horizontal.get(pq), D.vertical.get(pq)
        for j in range(D.dim(p, q)):
            col = {}
            if h and (p + 1, q) in offset:
                o = offset[(p + 1, q)]
                for i, c in h[j].items():
                    col[o + i] = c
            if v and (p, q + 1) in offset:
                o = offset[(p, q + 1)]
                for i, c in v[j].items():
                    col[o + i] = c
            bd.append(col)
    return BasedComplex(ring, tuple(names), tuple(degrees), tuple(bd), cohomological=True)


def _levels(D: DoubleComplex, which: int):
    order = sorted(D.positions(), key=lambda pq: (pq[0] + pq[1], pq[0]))
    out = []
    for pq in order:
        out.extend([pq[which]] * D.dim(*pq))
    return out


def _filtered(D: DoubleComplex, which: int, **kw) -> FilteredComplex:
    C = totalize(D)
    if D.truncation is not None:
        kw.setdefault("prune_degrees", [D.truncation])
        kw.setdefault("truncated_top", D.truncation)
    return FilteredComplex(C, _levels(D, which), **kw)


def column_filtration(D: DoubleComplex, **kw) -> FilteredComplex:
    """Filtration by columns: a (p, q) cell sits at level p."""
    return _filtered(D, 0, **kw)


def row_filtration(D: DoubleComplex, **kw) -> FilteredComplex:
    """Filtration by rows: a (p, q) cell sits at level q."""
    return _filtered(D, 1, **kw)


def transpose(D: DoubleComplex) -> DoubleComplex:
    """Swap p and q.  Both maps keep their signs, so anticommutation survives."""
    names = {(q, p): n for (p, q), n in D.names.items()}
    h = {(q, p): c for (p, q), c in D.vertical.items()}
    v = {(q, p): c for (p, q), c in D.horizontal.items()}
    return DoubleComplex(D.ring, names, h, v, D.truncation)
