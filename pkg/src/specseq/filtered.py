"""Spectral sequence of a bounded filtered complex.

With F_p C the span of the cells of level at most p, every page is the
subquotient

    E^r_{p,q} = Z^r_{p,q} / (Z^{r-1}_{p-1,q+1} + B^{r-1}_{p,q}),
    Z^r_{p,q} = F_p C_{p+q} ∩ d^{-1}(F_{p-r} C_{p+q-1}),
    B^r_{p,q} = F_p C_{p+q} ∩ d(F_{p+r} C_{p+q+1}) = d(Z^r_{p+r,q-r+1}),

computed exactly, with d^r induced by d on representatives.  Inside the
engine everything is homological: a cochain complex filtered by a
decreasing filtration is stored with degrees n -> -n and levels p -> -p,
and page coordinates are mirrored back on the way out.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Mapping

from .complexes import DENSE_LIMIT, BasedComplex, reduced_complex
from .errors import FiltrationNotPreserved, IllDefined, NotContained, NotFirstQuadrant, ResourceCapExceeded
from .extensions import ExtensionTower, build_tower
from .linalg import (ExactMatrix, FgModulePresentation, SparseMatrix, Submodule, image_basis, kernel_basis,
                     subquotient)
from .rings import Ring


# dense page algebra runs on the reduced complex; the truncation degree is
# only echelonized once, so it gets a larger allowance
WORK_CAP = 2000
WORK_CAP_TOP = 20000


@dataclass(frozen=True)
class PagePosition:
    r: int
    p: int
    q: int


@dataclass(frozen=True, eq=False)
class SpectralPage:
    """Page r: entries and differentials keyed by display coordinates (p, q).

    ``r`` is ``None`` for the associated graded of the homology.  The matrix
    ``differentials[(p, q)]`` has one column per generator at (p, q) and one
    row per generator at :meth:`target`.  Representatives live in
    ``complex``, which may be a reduced model of the input.
    """

    ring: Ring
    r: int | None
    cohomological: bool
    entries: Mapping[tuple, FgModulePresentation]
    differentials: Mapping[tuple, ExactMatrix] = field(default_factory=dict)
    complex: BasedComplex | None = None

    def target(self, p: int, q: int) -> tuple:
        r = self.r or 0
        return (p + r, q - r + 1) if self.cohomological else (p - r, q + r - 1)

    def source(self, p: int, q: int) -> tuple:
        r = self.r or 0
        return (p - r, q + r - 1) if self.cohomological else (p + r, q - r + 1)

    def __getitem__(self, pq) -> FgModulePresentation:
        m = self.entries.get(tuple(pq))
        return m if m is not None else FgModulePresentation.zero(self.ring)

    def factors(self) -> dict:
        """Nonzero entries as invariant-factor tuples."""
        return {pq: m.invariant_factors for pq, m in sorted(self.entries.items()) if not m.is_zero}

    def dims(self) -> dict:
        return {pq: m.dimension for pq, m in sorted(self.entries.items()) if not m.is_zero}

    def positions(self) -> list:
        return sorted(self.entries)

    def diagonal(self, n: int) -> dict:
        return {pq: m for pq, m in sorted(self.entries.items()) if pq[0] + pq[1] == n and not m.is_zero}

    def differential(self, p: int, q: int) -> ExactMatrix:
        d = self.differentials.get((p, q))
        if d is not None:
            return d
        return ExactMatrix.zeros(self.ring, self[self.target(p, q)].ngens, self[(p, q)].ngens)

    def nonzero_differentials(self) -> dict:
        return {pq: d for pq, d in sorted(self.differentials.items()) if not d.is_zero()}


class FilteredComplex:
    """A based complex with an integer filtration level on every cell.

    ``levels`` is given in display convention: for a cochain complex it is
    the index of a decreasing filtration, so d may only raise it.
    """

    def __init__(self, complex: BasedComplex, levels, reduce: bool | None = None,
                 track: bool | None = None, prune_degrees=(), truncated_top: int | None = None):
        self.complex = complex
        if isinstance(levels, Mapping):
            missing = [n for n in complex.names if n not in levels]
            if missing:
                raise FiltrationNotPreserved(f"no filtration level for cells {missing[:5]}")
            levels = [levels[n] for n in complex.names]
        levels = [int(x) for x in levels]
        if len(levels) != complex.size:
            raise FiltrationNotPreserved("one filtration level per basis cell is required")
        sign = -1 if complex.cohomological else 1
        self.levels = tuple(sign * x for x in levels)
        for i, col in enumerate(complex.boundary):
            for j in col:
                if self.levels[j] > self.levels[i]:
                    raise FiltrationNotPreserved(
                        f"d({complex.names[i]}) involves {complex.names[j]} of a later filtration stage")
        self.s = min(self.levels, default=0)
        self.t = max(self.levels, default=0)
        big = any(complex.dim(n) > DENSE_LIMIT for n in complex.stored_degrees())
        if reduce is None:
            reduce = big
        if track is None:
            track = not big
        self.reduced = bool(reduce) or truncated_top is not None
        self.truncated_top = truncated_top
        self._lift = None
        if reduce:
            S = complex.to_sparse(level=self.levels, track=track)
            S.reduce()
            if prune_degrees:
                S.prune_isolated({complex.stored_degree(n) for n in prune_degrees})
            R, alive = reduced_complex(complex, S)
            Rlev = tuple(self.levels[c] for c in alive)
            if track and truncated_top is None:
                self._lift = (S.lift, alive)
        else:
            R, Rlev = complex, self.levels
        top = complex.stored_degree(truncated_top) if truncated_top is not None else None
        for n in R.stored_degrees():
            cap = WORK_CAP_TOP if n == top else WORK_CAP
            if R.dim(n) > cap:
                raise ResourceCapExceeded(
                    f"{R.dim(n)} cells remain in degree {complex.display_degree(n)} after reduction (cap {cap})")
        if truncated_top is not None:
            R, Rlev = compress_top_degree(R, Rlev, top)
        self._engine = _Engine(R, Rlev, self.s, self.t)
        self._direct = None

    @property
    def ring(self) -> Ring:
        return self.complex.ring

    @property
    def cohomological(self) -> bool:
        return self.complex.cohomological

    def display_level(self, i: int) -> int:
        return -self.levels[i] if self.cohomological else self.levels[i]

    def filtration(self) -> dict:
        return {n: self.display_level(i) for i, n in enumerate(self.complex.names)}

    # coordinates ----------------------------------------------------------

    def to_display(self, P: int, n: int) -> tuple:
        if self.cohomological:
            return (-P, P - n)
        return (P, n - P)

    def to_internal(self, p: int, q: int) -> tuple:
        if self.cohomological:
            return (-p, -(p + q))
        return (p, p + q)

    def positions(self) -> list:
        """Internal (level, degree) pairs where E^0 is nonzero."""
        return sorted({(self.levels[i], self.complex.degrees[i]) for i in range(self.complex.size)})

    @property
    def working_complex(self) -> BasedComplex:
        return self._engine.C


def compress_top_degree(C: BasedComplex, levels, top: int):
    """Replace the cells of the last stored degree by a basis of im d.

    In a truncated complex nothing leaves the last degree, so only the
    filtered image of d into it matters for the degrees below.  The new basis
    is in echelon form from the highest level down: its members of level at
    most k span im d ∩ F_k, which keeps every Z^r one degree up unchanged.
    Entries in the last degree itself are not meaningful afterwards.
    """
    from .linalg import _column_echelon, _solve_echelon

    ring = C.ring
    tgt = sorted(C.cells(top), key=lambda i: (levels[i], i))
    if not tgt:
        return C, levels
    rev = list(reversed(tgt))
    pos = {c: k for k, c in enumerate(rev)}
    src = C.cells(top + 1)
    cols = []
    for i in src:
        v = [ring(0)] * len(rev)
        for j, c in C.boundary[i].items():
            v[pos[j]] = c
        cols.append(v)
    basis = [list(c) for c in cols]
    _, piv = _column_echelon(ring, basis, len(rev), track=False)
    basis = basis[: len(piv)]
    keep = [i for i in range(C.size) if C.degrees[i] != top]
    new_index = {c: k for k, c in enumerate(keep)}
    names = [C.names[i] for i in keep]
    degrees = [C.degrees[i] for i in keep]
    lev = [levels[i] for i in keep]
    bd = [{new_index[j]: v for j, v in C.boundary[i].items() if j in new_index} for i in keep]
    base = len(names)
    for k, pr in enumerate(piv):
        names.append(f"im#{k}")
        degrees.append(top)
        lev.append(levels[rev[pr]])
        bd.append({})
    for i, v in zip(src, cols):
        c = _solve_echelon(ring, basis, piv, v)
        bd[new_index[i]] = {base + k: x for k, x in enumerate(c) if x}
    R = BasedComplex(ring, tuple(names), tuple(degrees), tuple(bd), C.cohomological)
    return R, tuple(lev)


class _Engine:
    """Dense page computations on a (small) filtered complex."""

    def __init__(self, C: BasedComplex, levels, s, t):
        self.C = C
        self.ring = C.ring
        self.s, self.t = s, t
        self.order = {}
        self.lv = {}
        for n in C.stored_degrees():
            idx = sorted(C.cells(n), key=lambda i: (levels[i], i))
            self.order[n] = idx
            self.lv[n] = [levels[i] for i in idx]
        self.levels = levels
        self._D = {}
        self._Z = {}
        self._B = {}
        self._E = {}
        self._Bfull = {}

    def dim(self, n):
        return len(self.order.get(n, ()))

    def cnt(self, n, p):
        return bisect.bisect_right(self.lv.get(n, []), p)

    def D(self, n) -> ExactMatrix:
        """d from degree n to n-1, both in level-sorted order."""
        if n not in self._D:
            src, tgt = self.order.get(n, []), self.order.get(n - 1, [])
            pos = {c: k for k, c in enumerate(tgt)}
            z = self.ring(0)
            rows = [[z] * len(src) for _ in tgt]
            for k, i in enumerate(src):
                for j, v in self.C.boundary[i].items():
                    rows[pos[j]][k] = v
            self._D[n] = ExactMatrix(self.ring, len(tgt), len(src), tuple(tuple(r) for r in rows))
        return self._D[n]

    def zero(self, n):
        return Submodule.zero(self.ring, self.dim(n))

    def _zkey(self, r, p):
        """Clamp (r, p) to (top level, target level) without changing Z^r_p."""
        top = min(p, self.t)
        low = max(min(p - r, top), self.s - 1)
        return top, low

    def Z(self, r, p, n) -> Submodule:
        """Cells of level <= p whose boundary has level <= p - r."""
        if p < self.s or not self.dim(n):
            return self.zero(n)
        top, low = self._zkey(r, p)
        key = (top, low, n)
        if key in self._Z:
            return self._Z[key]
        k = self.cnt(n, top)
        m = self.dim(n)
        D = self.D(n)
        lo = self.cnt(n - 1, low)
        if k == 0:
            out = self.zero(n)
        elif lo >= D.rows:
            out = Submodule(self.ring, m, ExactMatrix.identity(self.ring, m).submatrix(range(m), range(k)))
        else:
            sub = D.submatrix(range(lo, D.rows), range(k))
            K = kernel_basis(sub)
            z = self.ring(0)
            vecs = [tuple(v) + (z,) * (m - k) for v in K.vectors()]
            out = Submodule.span(self.ring, m, vecs)
        self._Z[key] = out
        return out

    def B(self, r, p, n) -> Submodule:
        """d(Z^r_{p+r}) in degree n."""
        if p < self.s or not self.dim(n):
            return self.zero(n)
        key = self._zkey(r, p + r) + (n,)
        if key in self._B:
            return self._B[key]
        src = self.Z(r, p + r, n + 1)
        if src.ngens == 0:
            out = self.zero(n)
        else:
            out = image_basis(self.D(n + 1) @ src.generators)
        self._B[key] = out
        return out

    def E(self, r, p, n) -> FgModulePresentation:
        if r > 0:
            r = min(r, self.t - self.s + 1)
        key = (r, p, n)
        if key not in self._E:
            num = self.Z(r, p, n)
            den = self.Z(r - 1, p - 1, n) + self.B(r - 1, p, n)
            self._E[key] = subquotient(num, den)
        return self._E[key]

    def d(self, r, p, n, check=True) -> ExactMatrix:
        src = self.E(r, p, n)
        tp = p - r
        has_target = (tp, n - 1) in self.present()
        if src.ngens == 0 or not has_target:
            tgt_n = self.E(r, tp, n - 1).ngens if has_target else 0
            return ExactMatrix.zeros(self.ring, tgt_n, src.ngens)
        tgt = self.E(r, tp, n - 1)
        D = self.D(n)
        cols = []
        try:
            for z in src.representatives.columns():
                cols.append(tgt.coordinates(D.apply(z)))
            if check:
                den = self.Z(r - 1, p - 1, n)
                for z in den.vectors():
                    if any(tgt.coordinates(D.apply(z))):
                        raise IllDefined(f"d^{r} at level {p}, degree {n} depends on the lift")
        except NotContained as exc:
            raise IllDefined(f"d^{r} at level {p}, degree {n}: image leaves Z^{r}") from exc
        if not cols:
            return ExactMatrix.zeros(self.ring, tgt.ngens, 0)
        return ExactMatrix.from_columns(self.ring, cols, tgt.ngens)

    def present(self):
        if not hasattr(self, "_present"):
            self._present = {(self.levels[i], self.C.degrees[i]) for i in range(self.C.size)}
        return self._present

    def graded(self, p, n) -> FgModulePresentation:
        """(Z∞_p + B) / (Z∞_{p-1} + B), computed without the page caches."""
        m = self.dim(n)
        if n not in self._Bfull:
            up = self.D(n + 1)
            self._Bfull[n] = image_basis(up) if up.cols else self.zero(n)
        Bn = self._Bfull[n]

        def zinf(level):
            k = self.cnt(n, level)
            if k == 0:
                return self.zero(n)
            D = self.D(n)
            z = self.ring(0)
            if D.rows == 0:
                vecs = [tuple(self.ring(int(i == j)) for i in range(m)) for j in range(k)]
            else:
                vecs = [tuple(v) + (z,) * (m - k) for v in kernel_basis(D.submatrix(range(D.rows), range(k))).vectors()]
            return Submodule.span(self.ring, m, vecs)

        return subquotient(zinf(p) + Bn, zinf(p - 1) + Bn)

    def unsort(self, n, vec):
        """Sorted-order vector -> vector in the complex's own cell order of degree n."""
        out = [self.ring(0)] * self.dim(n)
        for k, c in enumerate(self.order[n]):
            out[self.C.local_index(c)] = vec[k]
        return out


def _relabel(FC: FilteredComplex, n: int, mod: FgModulePresentation) -> FgModulePresentation:
    """Move representatives from level-sorted order to the cell order (and lift)."""
    eng = FC._engine
    if mod.representatives is None or mod.ngens == 0:
        dim = FC.complex.dim(n) if FC._lift is not None or not FC.reduced else eng.dim(n)
        return FgModulePresentation(mod.ring, mod.invariant_factors, ExactMatrix.zeros(mod.ring, dim, 0))
    cols = [eng.unsort(n, c) for c in mod.representatives.columns()]
    if FC._lift is not None:
        lift, alive = FC._lift
        C = FC.complex
        out = []
        for col in cols:
            chain = {}
            for k, v in enumerate(col):
                if v:
                    for j, w in lift[alive[eng.C.cells(n)[k]]].items():
                        chain[j] = C.ring(chain.get(j, 0) + v * w)
            out.append([chain.get(i, 0) for i in C.cells(n)])
        cols, dim = out, C.dim(n)
    else:
        dim = eng.dim(n)
    return FgModulePresentation(mod.ring, mod.invariant_factors, ExactMatrix.from_columns(mod.ring, cols, dim),
                                mod._basis, mod._pivots, mod._proj)


def _rep_complex(FC: FilteredComplex) -> BasedComplex:
    return FC.complex if (FC._lift is not None or not FC.reduced) else FC._engine.C


# --------------------------------------------------------------------------
# public operations


def cycles_Z(FC: FilteredComplex, r: int, p: int, q: int) -> Submodule:
    """Z^r_{p,q} as a submodule of C_{p+q}, in display coordinates."""
    P, n = FC.to_internal(p, q)
    eng = _direct_engine(FC)
    return _to_cell_order(eng, n, eng.Z(r, P, n))


def boundaries_B(FC: FilteredComplex, r: int, p: int, q: int) -> Submodule:
    P, n = FC.to_internal(p, q)
    eng = _direct_engine(FC)
    return _to_cell_order(eng, n, eng.B(r, P, n))


def _direct_engine(FC: FilteredComplex) -> _Engine:
    if FC._direct is None:
        FC._direct = _Engine(FC.complex, FC.levels, FC.s, FC.t) if FC.reduced else FC._engine
    return FC._direct


def _to_cell_order(eng: _Engine, n: int, S: Submodule) -> Submodule:
    return Submodule.span(eng.ring, eng.dim(n), [eng.unsort(n, v) for v in S.vectors()])


def _e0_shortcut(FC: FilteredComplex) -> SpectralPage:
    """E^0 straight from the cells: the level-p cells of degree n, with d^0.

    Used for reduced (large) complexes, so matrices stay sparse.
    """
    C = FC.complex
    ring = C.ring
    groups: dict = {}
    for i in range(C.size):
        groups.setdefault((FC.levels[i], C.degrees[i]), []).append(i)
    entries, diffs = {}, {}
    for (P, n), cells in groups.items():
        reps = SparseMatrix.selection(ring, C.dim(n), [C.local_index(i) for i in cells])
        entries[FC.to_display(P, n)] = FgModulePresentation(ring, (0,) * len(cells), reps)
    for (P, n), cells in groups.items():
        tgt = groups.get((P, n - 1), [])
        pos = {c: k for k, c in enumerate(tgt)}
        cols = [{pos[j]: v for j, v in C.boundary[i].items() if j in pos} for i in cells]
        diffs[FC.to_display(P, n)] = SparseMatrix(ring, len(tgt), len(cells), cols)
    return SpectralPage(ring, 0, C.cohomological, entries, diffs, C)


def page(FC: FilteredComplex, r: int, check: bool = True) -> SpectralPage:
    """E^r with representatives and all differentials d^r."""
    if r < 0:
        raise ValueError("page number must be non-negative")
    if r == 0 and FC.reduced:
        return _e0_shortcut(FC)
    eng = FC._engine
    present = eng.present()
    entries, diffs = {}, {}
    for P, n in sorted(present):
        entries[FC.to_display(P, n)] = _relabel(FC, n, eng.E(r, P, n))
    for P, n in sorted(present):
        diffs[FC.to_display(P, n)] = eng.d(r, P, n, check=check)
    return SpectralPage(FC.ring, r, FC.cohomological, entries, diffs, _rep_complex(FC))


def induced_differential(FC: FilteredComplex, r: int, p: int, q: int) -> ExactMatrix:
    """Matrix of d^r_{p,q} on the chosen generators."""
    if r == 0 and FC.reduced:
        return _e0_shortcut(FC).differential(p, q)
    P, n = FC.to_internal(p, q)
    eng = FC._engine
    if (P, n) not in eng.present():
        return ExactMatrix.zeros(FC.ring, 0, 0)
    return eng.d(r, P, n)


def stabilization_index(FC: FilteredComplex) -> int:
    return FC.t - FC.s + 1


def infinity_page(FC: FilteredComplex) -> SpectralPage:
    pg = page(FC, stabilization_index(FC))
    zero = {pq: ExactMatrix.zeros(FC.ring, m.rows, m.cols) for pq, m in pg.differentials.items()}
    return SpectralPage(pg.ring, pg.r, pg.cohomological, pg.entries, zero, pg.complex)


def graded_homology(FC: FilteredComplex) -> SpectralPage:
    """F_pH / F_{p-1}H with F_pH the image of H(F_pC) in H(C)."""
    eng = FC._engine
    entries = {}
    for P, n in sorted(eng.present()):
        entries[FC.to_display(P, n)] = _relabel(FC, n, eng.graded(P, n))
    return SpectralPage(FC.ring, None, FC.cohomological, entries, {}, _rep_complex(FC))


def extension_tower(FC: FilteredComplex, n: int, einf: SpectralPage | None = None) -> ExtensionTower:
    """Possible H_n (display degree) given the E^∞ diagonal p + q = n."""
    einf = einf or infinity_page(FC)
    diag = []
    for (p, q), m in einf.entries.items():
        if p + q == n:
            P, _ = FC.to_internal(p, q)
            diag.append((P, p, m.invariant_factors))
    diag.sort()
    return build_tower(FC.ring, n, [(p, f) for _, p, f in diag])


# --------------------------------------------------------------------------
# edge morphisms


@dataclass(frozen=True)
class EdgeData:
    """Edge morphisms in one total degree n.

    ``top`` is the corner the homology surjects onto (E_∞^{0,n}
    cohomologically, E^∞_{n,0} homologically); ``bottom`` is the corner that
    injects into the homology.  Ranks count minimal generators of images.
    """

    n: int
    top: tuple
    bottom: tuple
    h_to_top: ExactMatrix
    top_into_e2: ExactMatrix
    e2_onto_bottom: ExactMatrix
    bottom_into_h: ExactMatrix
    rank_top: int
    rank_bottom: int
    dim_e2_top: int
    dim_e2_bottom: int


def image_module(M: ExactMatrix, target_factors) -> FgModulePresentation:
    """The image of a map into ⊕ R/(d_i), as a module."""
    from .linalg import relation_module
    ring = M.ring
    rel = relation_module(ring, target_factors)
    gens = Submodule(ring, M.rows, M) + rel if M.cols else rel
    return subquotient(gens, rel)


def _coords_matrix(ring, vectors, target: FgModulePresentation) -> ExactMatrix:
    cols = [target.coordinates(v) for v in vectors]
    if not cols:
        return ExactMatrix.zeros(ring, target.ngens, 0)
    return ExactMatrix.from_columns(ring, cols, target.ngens)


def edge_maps(FC: FilteredComplex, degrees=None) -> dict:
    """Edge morphisms of a first-quadrant spectral sequence, per total degree."""
    eng = FC._engine
    for P, n in eng.present():
        p, q = FC.to_display(P, n)
        if p < 0 or q < 0:
            raise NotFirstQuadrant(f"nonzero E^0 at ({p},{q})")
    r2 = 2
    rinf = max(stabilization_index(FC), r2)
    out = {}
    ndeg = sorted({n for _, n in eng.present()})
    for n in ndeg:
        disp_n = FC.complex.display_degree(n)
        if degrees is not None and disp_n not in degrees:
            continue
        levels = sorted(P for P, m in eng.present() if m == n)
        Ptop, Pbot = levels[-1], levels[0]
        if n not in eng._Bfull:
            eng.graded(Ptop, n)
        dn = eng.D(n)
        Z = kernel_basis(dn) if dn.rows else Submodule.full(eng.ring, eng.dim(n))
        H = subquotient(Z, eng._Bfull[n])
        top_inf, top_e2 = eng.E(rinf, Ptop, n), eng.E(r2, Ptop, n)
        bot_inf, bot_e2 = eng.E(rinf, Pbot, n), eng.E(r2, Pbot, n)
        ring = eng.ring
        h_to_top = _coords_matrix(ring, H.representatives.columns(), top_inf)
        top_into = _coords_matrix(ring, top_inf.representatives.columns(), top_e2)
        try:
            e2_onto = _coords_matrix(ring, bot_e2.representatives.columns(), bot_inf)
        except NotContained as exc:
            raise NotFirstQuadrant(f"E_2 bottom corner in degree {disp_n} does not map onto E_∞") from exc
        bot_into = _coords_matrix(ring, bot_inf.representatives.columns(), H)
        out[disp_n] = EdgeData(
            disp_n, FC.to_display(Ptop, n), FC.to_display(Pbot, n), h_to_top, top_into, e2_onto, bot_into,
            image_module(h_to_top, top_inf.invariant_factors).ngens,
            image_module(bot_into, H.invariant_factors).ngens,
            top_e2.ngens, bot_e2.ngens)
    return out
