"""Exact dense linear algebra over Z, Q and F_p.

Everything a spectral-sequence page needs reduces to a handful of lattice
operations: kernels, images, intersections, preimages and the quotient of
one lattice by a sublattice.  Over Z these are driven by unimodular column
reduction and the Smith normal form; over a field the same code runs with
every nonzero pivot being a unit.

Matrices are small and dense here (the heavy lifting on big complexes is
done by :mod:`specseq.reduction` before anything reaches this module), so the
implementation favours clarity over speed and uses plain Python integers,
which never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionMismatch, NotContained
from .rings import Ring

__all__ = [
    "ExactMatrix",
    "SnfResult",
    "Submodule",
    "FgModulePresentation",
    "smith_normal_form",
    "kernel_basis",
    "image_basis",
    "rank",
    "intersect",
    "preimage",
    "subquotient",
    "module_homology",
]


@dataclass(frozen=True, eq=False)
class ExactMatrix:
    ring: Ring
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch(f"entry count does not match {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, ring: Ring, rows: Iterable[Iterable], ncols: int | None = None) -> "ExactMatrix":
        data = tuple(tuple(ring(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        return cls(ring, len(data), ncols, data)

    @classmethod
    def from_columns(cls, ring: Ring, columns: Sequence[Sequence], nrows: int) -> "ExactMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise DimensionMismatch("column length differs from row count")
        data = tuple(tuple(ring(c[i]) for c in columns) for i in range(nrows))
        return cls(ring, nrows, len(columns), data)

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "ExactMatrix":
        z = ring(0)
        return cls(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "ExactMatrix":
        return cls(ring, n, n, tuple(tuple(ring(int(i == j)) for j in range(n)) for i in range(n)))

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "ExactMatrix":
        data = tuple(tuple(r[j] for r in self.entries) for j in range(self.cols))
        return ExactMatrix(self.ring, self.cols, self.rows, data)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ring = self.ring
        ocols = other.columns()
        data = tuple(tuple(ring(sum(a * b for a, b in zip(r, c) if a)) for c in ocols) for r in self.entries)
        return ExactMatrix(ring, self.rows, other.cols, data)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length differs from column count")
        ring = self.ring
        nz = [(j, x) for j, x in enumerate(vec) if x]
        return tuple(ring(sum(r[j] * x for j, x in nz)) for r in self.entries)

    def hstack(self, *others: "ExactMatrix") -> "ExactMatrix":
        mats = (self,) + others
        for m in mats:
            if m.rows != self.rows:
                raise DimensionMismatch("hstack needs equal row counts")
        data = tuple(sum((m.entries[i] for m in mats), ()) for i in range(self.rows))
        return ExactMatrix(self.ring, self.rows, sum(m.cols for m in mats), data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        data = tuple(tuple(self.entries[i][j] for j in cols) for i in rows)
        return ExactMatrix(self.ring, len(rows), len(cols), data)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.ring, self.rows, self.cols, self.entries) == (other.ring, other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.ring}, {self.rows}x{self.cols}, {[list(r) for r in self.entries]})"


class SparseMatrix:
    """Read-mostly matrix stored as one ``{row: value}`` dict per column.

    Quacks like :class:`ExactMatrix` for the operations pages need; the
    dense ``entries`` view is built on first use only.
    """

    def __init__(self, ring: Ring, rows: int, cols: int, columns: Sequence[dict]):
        if len(columns) != cols or any(i < 0 or i >= rows for c in columns for i in c):
            raise DimensionMismatch(f"sparse columns do not fit {rows}x{cols}")
        self.ring, self.rows, self.cols = ring, rows, cols
        self.sparse_columns = tuple({i: ring(v) for i, v in c.items() if ring(v)} for c in columns)
        self._dense = None

    @classmethod
    def selection(cls, ring: Ring, rows: int, picks: Sequence[int]) -> "SparseMatrix":
        """Columns are the unit vectors e_i for i in ``picks``."""
        return cls(ring, rows, len(picks), [{i: 1} for i in picks])

    @property
    def entries(self) -> tuple:
        if self._dense is None:
            data = [[self.ring(0)] * self.cols for _ in range(self.rows)]
            for j, c in enumerate(self.sparse_columns):
                for i, v in c.items():
                    data[i][j] = v
            self._dense = tuple(tuple(r) for r in data)
        return self._dense

    def to_dense(self) -> ExactMatrix:
        return ExactMatrix(self.ring, self.rows, self.cols, self.entries)

    def column(self, j: int) -> tuple:
        z = self.ring(0)
        c = self.sparse_columns[j]
        return tuple(c.get(i, z) for i in range(self.rows))

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.entries]

    def is_zero(self) -> bool:
        return not any(self.sparse_columns)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise DimensionMismatch("vector length differs from column count")
        out = [self.ring(0)] * self.rows
        for j, x in enumerate(vec):
            if x:
                for i, v in self.sparse_columns[j].items():
                    out[i] = self.ring(out[i] + v * x)
        return tuple(out)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if not isinstance(other, SparseMatrix):
            other = SparseMatrix(other.ring, other.rows, other.cols,
                                 [{i: x for i, x in enumerate(c) if x} for c in other.columns()])
        ring = self.ring
        cols = []
        for c in other.sparse_columns:
            acc: dict = {}
            for k, b in c.items():
                for i, a in self.sparse_columns[k].items():
                    acc[i] = ring(acc.get(i, 0) + a * b)
            cols.append(acc)
        return SparseMatrix(ring, self.rows, other.cols, cols)

    def __eq__(self, other):
        if isinstance(other, (SparseMatrix, ExactMatrix)):
            return (self.ring, self.rows, self.cols, self.entries) == (other.ring, other.rows, other.cols, other.entries)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix({self.ring}, {self.rows}x{self.cols}, nnz={sum(map(len, self.sparse_columns))})"


# --------------------------------------------------------------------------
# column reduction


def _axpy(ring: Ring, dst: list, src: list, c) -> None:
    """dst -= c * src, in place."""
    if not c:
        return
    if ring.kind == "F":
        p = ring.p
        for i, s in enumerate(src):
            if s:
                dst[i] = (dst[i] - c * s) % p
    else:
        for i, s in enumerate(src):
            if s:
                dst[i] -= c * s


def _scale(ring: Ring, v: list, c) -> None:
    if ring.kind == "F":
        p = ring.p
        for i, x in enumerate(v):
            v[i] = x * c % p
    else:
        for i, x in enumerate(v):
            v[i] = x * c


def _column_echelon(ring: Ring, cols: list[list], nrows: int, track: bool = True):
    """Reduce ``cols`` in place by unimodular column operations.

    Returns ``(V, pivots)`` with ``A @ V`` equal to the reduced matrix.  The
    first ``len(pivots)`` columns are nonzero, column k vanishes above row
    ``pivots[k]`` and the pivot rows increase; the remaining columns are zero,
    so the matching columns of V form a basis of the kernel (saturated over Z,
    because V is unimodular).
    """
    n = len(cols)
    V = [[ring(int(i == j)) for i in range(n)] for j in range(n)] if track else None
    is_z = ring.kind == "Z"
    k = 0
    pivots = []
    for i in range(nrows):
        if k == n:
            break
        while True:
            best = None
            bestval = None
            for j in range(k, n):
                x = cols[j][i]
                if x:
                    ax = abs(x) if is_z else 0
                    if best is None or (is_z and ax < bestval):
                        best, bestval = j, ax
                        if not is_z or ax == 1:
                            break
            if best is None:
                break
            if best != k:
                cols[k], cols[best] = cols[best], cols[k]
                if track:
                    V[k], V[best] = V[best], V[k]
            a = cols[k][i]
            clean = True
            for j in range(k + 1, n):
                b = cols[j][i]
                if not b:
                    continue
                if is_z:
                    c = b // a
                else:
                    c = ring.divide(b, a)
                _axpy(ring, cols[j], cols[k], c)
                if track:
                    _axpy(ring, V[j], V[k], c)
                if cols[j][i]:
                    clean = False
            if clean:
                break
        if cols[k][i]:
            a = cols[k][i]
            if is_z:
                if a < 0:
                    _scale(ring, cols[k], -1)
                    if track:
                        _scale(ring, V[k], -1)
            elif a != 1:
                u = ring.inv(a)
                _scale(ring, cols[k], u)
                if track:
                    _scale(ring, V[k], u)
            pivots.append(i)
            k += 1
    return V, pivots


def _columns_of(A: ExactMatrix) -> list[list]:
    return [list(c) for c in A.columns()]


@dataclass(frozen=True, eq=False)
class Submodule:
    """Column span of ``generators`` inside ``ring^ambient_dim``."""

    ring: Ring
    ambient_dim: int
    generators: ExactMatrix

    def __post_init__(self):
        if self.generators.rows != self.ambient_dim:
            raise DimensionMismatch("generator length differs from ambient dimension")

    @classmethod
    def span(cls, ring: Ring, ambient_dim: int, vectors: Iterable[Sequence]) -> "Submodule":
        return cls(ring, ambient_dim, ExactMatrix.from_columns(ring, list(vectors), ambient_dim))

    @classmethod
    def zero(cls, ring: Ring, ambient_dim: int) -> "Submodule":
        return cls(ring, ambient_dim, ExactMatrix.zeros(ring, ambient_dim, 0))

    @classmethod
    def full(cls, ring: Ring, ambient_dim: int) -> "Submodule":
        return cls(ring, ambient_dim, ExactMatrix.identity(ring, ambient_dim))

    @property
    def ngens(self) -> int:
        return self.generators.cols

    def vectors(self) -> list[tuple]:
        return self.generators.columns()

    def __add__(self, other: "Submodule") -> "Submodule":
        _check_same(self, other)
        return Submodule(self.ring, self.ambient_dim, self.generators.hstack(other.generators))

    def basis(self) -> "Submodule":
        return image_basis(self.generators)

    @property
    def rank(self) -> int:
        return rank(self.generators)

    def contains(self, vec: Sequence) -> bool:
        H, piv = _echelon_basis(self)
        return _solve_echelon(self.ring, H, piv, vec) is not None


def _check_same(U: Submodule, V: Submodule) -> None:
    if U.ambient_dim != V.ambient_dim or U.ring != V.ring:
        raise DimensionMismatch(
            f"submodules live in different ambients ({U.ring}^{U.ambient_dim} vs {V.ring}^{V.ambient_dim})")


def _echelon_basis(S: Submodule):
    cols = _columns_of(S.generators)
    _, piv = _column_echelon(S.ring, cols, S.ambient_dim, track=False)
    return cols[: len(piv)], piv


def _solve_echelon(ring: Ring, H: list[list], pivots: list[int], vec: Sequence):
    """Coefficients c with sum c_k H[k] == vec, or None if vec is not in the span."""
    c = []
    for k, i in enumerate(pivots):
        s = vec[i]
        for j in range(k):
            if c[j] and H[j][i]:
                s -= c[j] * H[j][i]
        s = ring(s) if ring.kind == "F" else s
        x = ring.divide(s, H[k][i])
        if x is None:
            return None
        c.append(x)
    # verify: the echelon shape only guarantees agreement on pivot rows
    res = list(vec)
    for k, x in enumerate(c):
        if x:
            col = H[k]
            for r, h in enumerate(col):
                if h:
                    res[r] -= x * h
    if ring.kind == "F":
        if any(v % ring.p for v in res):
            return None
    elif any(res):
        return None
    return c


def kernel_basis(A: ExactMatrix) -> Submodule:
    cols = _columns_of(A)
    V, piv = _column_echelon(A.ring, cols, A.rows)
    return Submodule.span(A.ring, A.cols, V[len(piv):])


def image_basis(A: ExactMatrix) -> Submodule:
    cols = _columns_of(A)
    _, piv = _column_echelon(A.ring, cols, A.rows, track=False)
    return Submodule.span(A.ring, A.rows, cols[: len(piv)])


def rank(A: ExactMatrix) -> int:
    cols = _columns_of(A)
    _, piv = _column_echelon(A.ring, cols, A.rows, track=False)
    return len(piv)


def intersect(U: Submodule, V: Submodule) -> Submodule:
    """U ∩ V, from the kernel of ``[U | -V]`` projected to U-coordinates."""
    _check_same(U, V)
    ring = U.ring
    negV = [[ring(-x) for x in c] for c in V.vectors()]
    cols = [list(c) for c in U.vectors()] + negV
    K, piv = _column_echelon(ring, cols, U.ambient_dim)
    a = U.ngens
    gens = [U.generators.apply(v[:a]) for v in K[len(piv):]]
    return image_basis(ExactMatrix.from_columns(ring, gens, U.ambient_dim)) if gens else Submodule.zero(ring, U.ambient_dim)


def preimage(A: ExactMatrix, T: Submodule) -> Submodule:
    """{x : A x ∈ span T}."""
    if A.rows != T.ambient_dim or A.ring != T.ring:
        raise DimensionMismatch(f"map lands in dimension {A.rows}, target submodule lives in {T.ambient_dim}")
    ring = A.ring
    cols = _columns_of(A) + [[ring(-x) for x in c] for c in T.vectors()]
    K, piv = _column_echelon(ring, cols, A.rows)
    n = A.cols
    gens = [v[:n] for v in K[len(piv):]]
    if not gens:
        return Submodule.zero(ring, n)
    return image_basis(ExactMatrix.from_columns(ring, gens, n))


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True, eq=False)
class SnfResult:
    U: ExactMatrix
    V: ExactMatrix
    D: ExactMatrix
    rank: int
    U_inv: ExactMatrix | None = None

    @property
    def diagonal(self) -> tuple:
        return tuple(self.D.entries[i][i] for i in range(min(self.D.rows, self.D.cols)))


def _snf_lists(ring: Ring, A: list[list], m: int, n: int, want_inverse: bool):
    """In-place Smith reduction; returns (U, U_inv, V, rank) as row lists."""
    is_z = ring.kind == "Z"
    one, zero = ring(1), ring(0)
    U = [[one if i == j else zero for j in range(m)] for i in range(m)]
    Ui = [[one if i == j else zero for j in range(m)] for i in range(m)] if want_inverse else None
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]

    def norm(x):
        return x % ring.p if ring.kind == "F" else x

    def row_add(i, j, c):  # row_i -= c * row_j
        if not c:
            return
        for M in (A, U):
            ri, rj = M[i], M[j]
            for k, x in enumerate(rj):
                if x:
                    ri[k] = norm(ri[k] - c * x)
        if Ui is not None:
            for r in Ui:  # col_j += c * col_i
                if r[i]:
                    r[j] = norm(r[j] + c * r[i])

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def row_scale(i, c):
        A[i] = [norm(x * c) for x in A[i]]
        U[i] = [norm(x * c) for x in U[i]]
        if Ui is not None:
            ci = ring.inv(c)
            for r in Ui:
                r[i] = norm(r[i] * ci)

    def col_add(j, i, c):  # col_j -= c * col_i
        if not c:
            return
        for M in (A, V):
            for r in M:
                if r[i]:
                    r[j] = norm(r[j] - c * r[i])

    def col_swap(i, j):
        for M in (A, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def key(x):
        return abs(x) if is_z else 0

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or key(x) < key(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        while True:
            a = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                b = A[i][t]
                if b:
                    row_add(i, t, b // a if is_z else ring.divide(b, a))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                b = A[t][j]
                if b:
                    col_add(j, t, b // a if is_z else ring.divide(b, a))
                    if A[t][j]:
                        dirty = True
            if dirty:
                cand = [(key(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(key(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    row_swap(t, i)
                if j != t:
                    col_swap(t, j)
                continue
            if is_z:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % a), None)
                if bad is not None:
                    row_add(t, bad[0], -1)
                    continue
            break
        a = A[t][t]
        if is_z:
            if a < 0:
                row_scale(t, -1)
        elif a != 1:
            row_scale(t, ring.inv(a))
        t += 1
    return U, Ui, V, t


def smith_normal_form(A: ExactMatrix, inverse: bool = False) -> SnfResult:
    """U·A·V = D with D diagonal, d1 | d2 | ... and d_i >= 0.

    Over a field the same elimination yields an identity-padded diagonal.
    """
    ring = A.ring
    M = A.to_lists()
    U, Ui, V, r = _snf_lists(ring, M, A.rows, A.cols, inverse)

    def mk(rows, nr, nc):
        return ExactMatrix(ring, nr, nc, tuple(tuple(x) for x in rows))

    return SnfResult(
        U=mk(U, A.rows, A.rows),
        V=mk(V, A.cols, A.cols),
        D=mk(M, A.rows, A.cols),
        rank=r,
        U_inv=mk(Ui, A.rows, A.rows) if inverse else None,
    )


# --------------------------------------------------------------------------
# finitely generated modules


@dataclass(frozen=True, eq=False)
class FgModulePresentation:
    """A finitely generated module ``⊕ R/(d_i)`` with chosen representatives.

    ``invariant_factors`` lists one entry per generator: 0 for a free summand,
    d > 1 for ``Z/d``.  Over a field every entry is 0.  ``representatives``
    holds one ambient column per generator (zero rows when detached).
    """

    ring: Ring
    invariant_factors: tuple
    representatives: ExactMatrix | None = None
    _basis: tuple | None = field(default=None, repr=False)
    _pivots: tuple | None = field(default=None, repr=False)
    _proj: tuple | None = field(default=None, repr=False)

    @classmethod
    def zero(cls, ring: Ring, ambient_dim: int = 0) -> "FgModulePresentation":
        return cls(ring, (), ExactMatrix.zeros(ring, ambient_dim, 0), (), (), ())

    @classmethod
    def from_factors(cls, ring: Ring, factors: Iterable[int]) -> "FgModulePresentation":
        return cls(ring, normalize_factors(ring, factors))

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple:
        return tuple(d for d in self.invariant_factors if d)

    @property
    def dimension(self) -> int:
        """Number of generators; the vector-space dimension over a field."""
        return len(self.invariant_factors)

    @property
    def order(self):
        """Cardinality over Z (``None`` when infinite)."""
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def iso_key(self):
        return (self.ring, self.invariant_factors)

    def isomorphic(self, other: "FgModulePresentation") -> bool:
        return self.iso_key() == other.iso_key()

    def detached(self) -> "FgModulePresentation":
        return FgModulePresentation(self.ring, self.invariant_factors)

    def label(self) -> str:
        return factors_label(self.ring, self.invariant_factors)

    def __str__(self):
        return self.label()

    def coordinates(self, vec: Sequence) -> tuple:
        """Coordinates of the class of ``vec`` on the chosen generators.

        Raises :class:`NotContained` if ``vec`` is not in the numerator.
        """
        if self._basis is None:
            raise ValueError("detached presentation has no ambient coordinates")
        ring = self.ring
        c = _solve_echelon(ring, self._basis, list(self._pivots), vec)
        if c is None:
            raise NotContained("vector is not in the numerator of this subquotient")
        out = []
        for row, d in zip(self._proj, self.invariant_factors):
            y = ring(sum(a * b for a, b in zip(row, c) if a and b))
            if d:
                y %= d
            out.append(y)
        return tuple(out)

    def contains(self, vec: Sequence) -> bool:
        return _solve_echelon(self.ring, self._basis, list(self._pivots), vec) is not None


def normalize_factors(ring: Ring, factors: Iterable[int]) -> tuple:
    """Units dropped; over Z sorted into a divisibility-compatible order."""
    fs = [abs(int(d)) for d in factors]
    if ring.is_field:
        return tuple(0 for d in fs if d == 0)
    fs = [d for d in fs if d != 1]
    # canonical invariant factors of the direct sum
    torsion = [d for d in fs if d]
    free = [0] * (len(fs) - len(torsion))
    return tuple(_invariant_factors_of(torsion)) + tuple(free)


def _invariant_factors_of(torsion: list[int]) -> list[int]:
    if not torsion:
        return []
    from .extensions import prime_power_parts, invariant_factors_from_parts
    return list(invariant_factors_from_parts(prime_power_parts(torsion)))


def factors_label(ring: Ring, factors: Sequence[int]) -> str:
    if not factors:
        return "0"
    if ring.is_field:
        base = "Q" if ring.kind == "Q" else f"F_{ring.p}"
        k = len(factors)
        return base if k == 1 else f"{base}^{k}"
    parts = []
    free = sum(1 for d in factors if d == 0)
    if free:
        parts.append("Z" if free == 1 else f"Z^{free}")
    for d in factors:
        if d:
            parts.append(f"Z/{d}")
    return "+".join(parts)


def subquotient(V: Submodule, W: Submodule) -> FgModulePresentation:
    """Presentation of V/W with representatives lifted into the ambient space.

    Generator i lifts to the ambient vector ``B · Uinv[:, i]`` where B is the
    echelon basis of V and U the left Smith transform of W written in that
    basis.  The choice is deterministic but not canonical.
    """
    _check_same(V, W)
    ring = V.ring
    H, piv = _echelon_basis(V)
    k = len(piv)
    m = V.ambient_dim
    if k == 0:
        if any(any(x for x in w) for w in W.vectors()):
            raise NotContained("W is not contained in V")
        return FgModulePresentation.zero(ring, m)
    coords = []
    for w in W.vectors():
        c = _solve_echelon(ring, H, piv, w)
        if c is None:
            raise NotContained("a generator of W is not in span V")
        coords.append(c)
    Wc = ExactMatrix.from_columns(ring, coords, k) if coords else ExactMatrix.zeros(ring, k, 0)
    snf = smith_normal_form(Wc, inverse=True)
    diag = snf.diagonal
    factors = []
    keep = []
    for i in range(k):
        d = diag[i] if i < snf.rank else ring(0)
        if ring.is_unit(d):
            continue
        keep.append(i)
        factors.append(d if ring.kind == "Z" else 0)
    Ui = snf.U_inv.entries
    Hs = [[(a, h) for a, h in enumerate(row) if h] for row in H]
    reps = []
    for i in keep:
        acc = [0] * m
        for j in range(k):
            c = Ui[j][i]
            if c:
                for a, h in Hs[j]:
                    acc[a] += c * h
        reps.append([ring(x) for x in acc])
    proj = tuple(snf.U.entries[i] for i in keep)
    return FgModulePresentation(
        ring,
        tuple(factors),
        ExactMatrix.from_columns(ring, reps, m) if reps else ExactMatrix.zeros(ring, m, 0),
        tuple(tuple(h) for h in H),
        tuple(piv),
        proj,
    )


def relation_module(ring: Ring, factors: Sequence[int]) -> Submodule:
    """The relation lattice ``⊕ d_i Z`` of the module with the given factors."""
    n = len(factors)
    rels = []
    for i, d in enumerate(factors):
        if d:
            v = [0] * n
            v[i] = d
            rels.append(v)
    return Submodule.span(ring, n, rels)


def module_homology(ring: Ring, mid: Sequence[int], incoming: ExactMatrix | None,
                    outgoing: ExactMatrix | None, target: Sequence[int] = ()) -> FgModulePresentation:
    """Homology at M of L --incoming--> M --outgoing--> N.

    Modules are given by invariant factors; maps by integer matrices on the
    generators (columns = source generators).
    """
    n = len(mid)
    if outgoing is None or outgoing.rows == 0:
        ker = Submodule.full(ring, n)
    else:
        ker = preimage(outgoing, relation_module(ring, target))
    im = relation_module(ring, mid)
    if incoming is not None and incoming.cols:
        im = im + Submodule(ring, n, incoming)
    return subquotient(ker, im)
