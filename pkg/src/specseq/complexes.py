"""Finite based chain complexes and their homology.

Cochain complexes are stored with negated degrees so that a single
homological core serves both orientations; ``cohomological=True`` only
changes how degrees are reported back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, NotAComplex, NotAField
from .linalg import (ExactMatrix, FgModulePresentation, Submodule, kernel_basis, image_basis,
                     subquotient)
from .reduction import SparseComplex
from .rings import Ring

# above this many cells in some degree, homology goes through sparse reduction
DENSE_LIMIT = 400


@dataclass(frozen=True, eq=False)
class BasedComplex:
    """A finite complex with named basis cells.

    ``degrees`` holds the stored (homological) degree of every cell and
    ``boundary[i]`` maps cell indices one degree down to coefficients.
    """

    ring: Ring
    names: tuple
    degrees: tuple
    boundary: tuple
    cohomological: bool = False

    def __post_init__(self):
        if not (len(self.names) == len(self.degrees) == len(self.boundary)):
            raise DimensionMismatch("names, degrees and boundary differ in length")
        for i, col in enumerate(self.boundary):
            for j in col:
                if self.degrees[j] != self.degrees[i] - 1:
                    raise DimensionMismatch(
                        f"boundary of {self.names[i]!r} contains {self.names[j]!r} of the wrong degree")

    # construction ---------------------------------------------------------

    @classmethod
    def from_boundaries(cls, ring: Ring, basis: Sequence[tuple], boundary: Mapping[str, Mapping[str, int]],
                        cohomological: bool = False, validate: bool = True) -> "BasedComplex":
        """``basis`` is ``[(name, degree)]`` in display degrees; ``boundary``
        gives the differential of each cell (a coboundary when cohomological)."""
        names = tuple(n for n, _ in basis)
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            raise DimensionMismatch("duplicate basis names")
        sign = -1 if cohomological else 1
        degrees = tuple(sign * int(d) for _, d in basis)
        cols = []
        for n in names:
            col = {}
            for t, v in (boundary.get(n) or {}).items():
                if t not in index:
                    raise DimensionMismatch(f"unknown cell {t!r} in the differential of {n!r}")
                v = ring(v)
                if v:
                    col[index[t]] = ring(col.get(index[t], 0) + v)
            cols.append({k: v for k, v in col.items() if v})
        C = cls(ring, names, degrees, tuple(cols), cohomological)
        return validate_complex(C) if validate else C

    @classmethod
    def from_matrices(cls, ring: Ring, basis: Sequence[tuple], differentials: Mapping[int, Sequence[Sequence[int]]],
                      cohomological: bool = False, validate: bool = True) -> "BasedComplex":
        """Differentials as dense matrices indexed by display degree.

        Homologically ``d_n`` maps degree n to n-1; cohomologically ``d^n``
        maps n to n+1.  Rows and columns follow the order of ``basis``.
        """
        by_deg: dict[int, list[str]] = {}
        for name, d in basis:
            by_deg.setdefault(int(d), []).append(name)
        step = 1 if cohomological else -1
        bd: dict[str, dict[str, int]] = {}
        for n, rows in differentials.items():
            src = by_deg.get(int(n), [])
            tgt = by_deg.get(int(n) + step, [])
            if len(rows) != len(tgt) or any(len(r) != len(src) for r in rows):
                raise DimensionMismatch(f"differential in degree {n} has the wrong shape")
            for j, s in enumerate(src):
                bd[s] = {tgt[i]: rows[i][j] for i in range(len(tgt)) if rows[i][j]}
        return cls.from_boundaries(ring, basis, bd, cohomological, validate)

    # structure ------------------------------------------------------------

    @cached_property
    def _by_degree(self) -> dict:
        out: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    @cached_property
    def _local(self) -> dict:
        out = {}
        for d, idx in self._by_degree.items():
            for k, i in enumerate(idx):
                out[i] = k
        return out

    @cached_property
    def index(self) -> dict:
        return {n: i for i, n in enumerate(self.names)}

    @property
    def basis(self) -> list[tuple]:
        return [(n, self.display_degree(d)) for n, d in zip(self.names, self.degrees)]

    def display_degree(self, n: int) -> int:
        return -n if self.cohomological else n

    def stored_degree(self, n: int) -> int:
        return -n if self.cohomological else n

    def stored_degrees(self) -> list[int]:
        return sorted(self._by_degree)

    def cells(self, n: int) -> list[int]:
        """Global indices of the cells in stored degree n."""
        return self._by_degree.get(n, [])

    def dim(self, n: int) -> int:
        return len(self.cells(n))

    @property
    def size(self) -> int:
        return len(self.names)

    def local_index(self, i: int) -> int:
        return self._local[i]

    def differential(self, n: int) -> ExactMatrix:
        """Dense matrix of d from stored degree n to n-1."""
        cache = self.__dict__.setdefault("_dcache", {})
        if n in cache:
            return cache[n]
        src, tgt = self.cells(n), self.cells(n - 1)
        z = self.ring(0)
        rows = [[z] * len(src) for _ in tgt]
        loc = self._local
        for k, i in enumerate(src):
            for j, v in self.boundary[i].items():
                rows[loc[j]][k] = v
        M = ExactMatrix(self.ring, len(tgt), len(src), tuple(tuple(r) for r in rows))
        cache[n] = M
        return M

    def apply_d(self, chain: Mapping[int, object]) -> dict:
        """d of a sparse chain {global index: coeff}."""
        ring = self.ring
        out: dict[int, object] = {}
        for i, c in chain.items():
            if not c:
                continue
            for j, v in self.boundary[i].items():
                out[j] = ring(out.get(j, 0) + c * v)
        return {j: v for j, v in out.items() if v}

    def to_sparse(self, level=None, track: bool = False) -> SparseComplex:
        return SparseComplex.build(self.ring, self.names, self.degrees, self.boundary, level, track)

    def __repr__(self):
        dims = {self.display_degree(d): len(v) for d, v in sorted(self._by_degree.items())}
        kind = "cochain" if self.cohomological else "chain"
        return f"BasedComplex({self.ring}, {kind}, dims={dims})"


def validate_complex(C: BasedComplex) -> BasedComplex:
    """Return C unchanged if d∘d = 0, else raise :class:`NotAComplex`."""
    for i in range(C.size):
        if C.apply_d(C.apply_d({i: C.ring(1)})):
            raise NotAComplex(C.display_degree(C.degrees[i]), C.names[i])
    return C


# --------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class GradedModule:
    """Modules indexed by display degree; missing degrees are zero."""

    ring: Ring
    modules: Mapping[int, FgModulePresentation] = field(default_factory=dict)
    cohomological: bool = False

    def __getitem__(self, n: int) -> FgModulePresentation:
        m = self.modules.get(n)
        return m if m is not None else FgModulePresentation.zero(self.ring)

    def degrees(self) -> list[int]:
        return sorted(n for n, m in self.modules.items() if not m.is_zero)

    def labels(self) -> dict[int, str]:
        return {n: self[n].label() for n in sorted(self.modules)}

    def factors(self) -> dict[int, tuple]:
        return {n: self[n].invariant_factors for n in self.degrees()}


def _dense_homology_at(C: BasedComplex, n: int) -> FgModulePresentation:
    dn = C.differential(n)
    Z = kernel_basis(dn) if dn.rows else Submodule.full(C.ring, C.dim(n))
    up = C.differential(n + 1)
    B = image_basis(up) if up.cols else Submodule.zero(C.ring, C.dim(n))
    return subquotient(Z, B)


def homology(C: BasedComplex, degrees: Iterable[int] | None = None) -> GradedModule:
    """H_n = ker d_n / im d_{n+1} with representatives in C_n.

    ``degrees`` (display degrees) restricts the computation.  Large complexes
    are first shrunk by sparse reduction; representatives are then lifted
    back along the inclusion of the reduced complex.
    """
    wanted = [C.stored_degree(n) for n in degrees] if degrees is not None else C.stored_degrees()
    big = any(C.dim(n) > DENSE_LIMIT for n in C.stored_degrees())
    if not big:
        mods = {C.display_degree(n): _dense_homology_at(C, n) for n in wanted if C.dim(n)}
        return GradedModule(C.ring, mods, C.cohomological)
    S = C.to_sparse(track=True)
    S.reduce()
    R, back = reduced_complex(C, S)
    out = {}
    for n in wanted:
        if not C.dim(n):
            continue
        H = _dense_homology_at(R, n) if R.dim(n) else FgModulePresentation.zero(C.ring, 0)
        reps = []
        for col in (H.representatives.columns() if H.ngens else []):
            chain: dict[int, object] = {}
            for k, v in enumerate(col):
                if v:
                    for j, w in S.lift[back[R.cells(n)[k]]].items():
                        chain[j] = C.ring(chain.get(j, 0) + v * w)
            reps.append([chain.get(i, 0) for i in C.cells(n)])
        rep_m = ExactMatrix.from_columns(C.ring, reps, C.dim(n)) if reps else ExactMatrix.zeros(C.ring, C.dim(n), 0)
        out[C.display_degree(n)] = FgModulePresentation(C.ring, H.invariant_factors, rep_m)
    return GradedModule(C.ring, out, C.cohomological)


def reduced_complex(C: BasedComplex, S: SparseComplex):
    """Freeze a reduced sparse complex; returns it with a map to original ids."""
    alive = S.alive()
    new = {c: k for k, c in enumerate(alive)}
    cols = tuple({new[j]: v for j, v in S.bd[c].items()} for c in alive)
    R = BasedComplex(C.ring, tuple(C.names[c] for c in alive), tuple(C.degrees[c] for c in alive), cols,
                     C.cohomological)
    return R, alive


def poincare_series(M: GradedModule, max_degree: int) -> list[int]:
    """[dim M_0, ..., dim M_max] over a field."""
    if not M.ring.is_field:
        raise NotAField(f"Poincaré series needs field coefficients, got {M.ring}")
    return [M[n].dimension for n in range(max_degree + 1)]
