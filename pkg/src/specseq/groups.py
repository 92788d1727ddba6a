"""Finite groups, bar cochains and the Lyndon-Hochschild-Serre double complex.

Groups are multiplication tables over element indices with the identity at
index 0.  A G-cochain of degree q with values in a module M is a function on
q-tuples (y1, ..., yq); it stands for the equivariant function on the
homogeneous tuple (e, y1, ..., yq).  The homogeneous face that drops the
leading entry therefore has to be brought back to that normal form, which is
where the module action enters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .complexes import BasedComplex, homology
from .double import DoubleComplex, column_filtration, row_filtration
from .errors import (ActionNotFree, DimensionMismatch, GroupError, NoIdentity, NoInverse, NotAHomomorphism, NotAssociative,
                     NotEquivariant, NotNormal, ResourceCapExceeded)
from .filtered import FilteredComplex
from .linalg import ExactMatrix, FgModulePresentation, Submodule, subquotient
from .rings import Ring

MAX_ORDER = 64
COCHAIN_CAP = 20000
# the LHS total complex is much larger than a single bar complex; see the notes
LHS_CAP = 250000


@dataclass(frozen=True, eq=False)
class FiniteGroupData:
    elements: tuple
    table: tuple  # table[i][j] = index of elements[i] * elements[j]

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    @cached_property
    def inverse(self) -> tuple:
        return tuple(row.index(0) for row in self.table)

    def index(self, name) -> int:
        if isinstance(name, int):
            return name
        return self.elements.index(name)

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != 0:
            x = self.table[x][i]
            k += 1
        return k

    def __repr__(self):
        return f"FiniteGroupData(order={self.order})"


def load_group(table: Sequence[Sequence], elements: Sequence | None = None) -> FiniteGroupData:
    """Validate a multiplication table; entries may be indices or element names."""
    n = len(table)
    if n == 0:
        raise NoIdentity("empty table")
    if n > MAX_ORDER:
        raise ResourceCapExceeded(f"group order {n} exceeds the limit {MAX_ORDER}")
    if elements is None:
        elements = tuple(str(i) for i in range(n))
    elements = tuple(elements)
    if len(elements) != n or any(len(row) != n for row in table):
        raise GroupError("multiplication table must be square and match the element list")
    pos = {e: i for i, e in enumerate(elements)}
    T = []
    for row in table:
        out = []
        for x in row:
            if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n:
                out.append(x)
            elif x in pos:
                out.append(pos[x])
            else:
                raise GroupError(f"table entry {x!r} is not an element")
        T.append(tuple(out))
    if any(T[0][j] != j or T[j][0] != j for j in range(n)):
        e = next((i for i in range(n) if all(T[i][j] == j and T[j][i] == j for j in range(n))), None)
        if e is None:
            raise NoIdentity("no two-sided identity in the table")
        raise NoIdentity(f"the identity is {elements[e]!r}; it must be listed first")
    for i in range(n):
        if 0 not in T[i] or T[i].index(0) != next((j for j in range(n) if T[j][i] == 0), None):
            raise NoInverse(f"{elements[i]!r} has no two-sided inverse")
    for a in range(n):
        Ta = T[a]
        for b in range(n):
            ab = Ta[b]
            Tb = T[b]
            for c in range(n):
                if T[ab][c] != Ta[Tb[c]]:
                    raise NotAssociative(f"({elements[a]}*{elements[b]})*{elements[c]} != "
                                         f"{elements[a]}*({elements[b]}*{elements[c]})")
    return FiniteGroupData(elements, tuple(T))


def cyclic_group(n: int) -> FiniteGroupData:
    return load_group([[(i + j) % n for j in range(n)] for i in range(n)], [f"a^{i}" if i else "e" for i in range(n)])


def dihedral_group(n: int) -> FiniteGroupData:
    """Order 2n: <a> ⋊ <b> with b a b^-1 = a^-1; element a^i b^j has index i + n j."""
    def mul(x, y):
        i1, j1 = x % n, x // n
        i2, j2 = y % n, y // n
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return i + n * ((j1 + j2) % 2)

    names = []
    for j in range(2):
        for i in range(n):
            names.append("e" if i == j == 0 else ("a^%d" % i if i else "") + ("b" if j else ""))
    return load_group([[mul(x, y) for y in range(2 * n)] for x in range(2 * n)], names)


def trivial_group() -> FiniteGroupData:
    return load_group([[0]], ["e"])


# --------------------------------------------------------------------------
# extensions


@dataclass(frozen=True, eq=False)
class GroupExtensionData:
    """N ⊴ G with quotient Q = G/N; ``quotient_map[g]`` is the coset index."""

    G: FiniteGroupData
    N: tuple
    quotient_map: tuple
    Q: FiniteGroupData

    @cached_property
    def N_group(self) -> FiniteGroupData:
        pos = {g: k for k, g in enumerate(self.N)}
        table = [[pos[self.G.mul(a, b)] for b in self.N] for a in self.N]
        return FiniteGroupData(tuple(self.G.elements[g] for g in self.N), tuple(tuple(r) for r in table))


def group_extension(G: FiniteGroupData, N: Sequence) -> GroupExtensionData:
    Nidx = sorted({G.index(x) for x in N})
    Nset = set(Nidx)
    if 0 not in Nset:
        raise NotNormal("N must contain the identity")
    for a in Nidx:
        for b in Nidx:
            if G.mul(a, b) not in Nset:
                raise NotNormal(f"N is not closed: {G.elements[a]}*{G.elements[b]}")
    for g in range(G.order):
        gi = G.inverse[g]
        for x in Nidx:
            if G.mul(G.mul(g, x), gi) not in Nset:
                raise NotNormal(f"N is not normal: conjugating {G.elements[x]} by {G.elements[g]} leaves N")
    coset_of = [-1] * G.order
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            k = len(reps)
            reps.append(g)
            for x in Nidx:
                coset_of[G.mul(g, x)] = k
    m = len(reps)
    table = [[coset_of[G.mul(reps[a], reps[b])] for b in range(m)] for a in range(m)]
    for g in range(G.order):
        for h in range(G.order):
            if coset_of[G.mul(g, h)] != table[coset_of[g]][coset_of[h]]:
                raise NotNormal("quotient multiplication is not well defined")
    Q = load_group(table, [f"{G.elements[r]}N" for r in reps])
    return GroupExtensionData(G, tuple(Nidx), tuple(coset_of), Q)


def load_group_json(data: Mapping) -> tuple[FiniteGroupData, GroupExtensionData | None]:
    """Read ``{"elements": [...], "table": [[...]], "normal": [...]}``."""
    G = load_group(data["table"], data.get("elements"))
    E = group_extension(G, data["normal"]) if data.get("normal") is not None else None
    return G, E


# --------------------------------------------------------------------------
# modules


@dataclass(frozen=True, eq=False)
class GroupModule:
    ring: Ring
    rank: int
    action: tuple  # one ExactMatrix per group element

    @classmethod
    def build(cls, G: FiniteGroupData, ring: Ring, rank: int, action: Mapping) -> "GroupModule":
        mats = []
        for g in range(G.order):
            m = action.get(g, action.get(G.elements[g]))
            if m is None:
                m = ExactMatrix.identity(ring, rank) if g == 0 else None
            if m is None:
                raise NotAHomomorphism(f"no action matrix for {G.elements[g]!r}")
            if not isinstance(m, ExactMatrix):
                try:
                    m = ExactMatrix.from_rows(ring, m, rank)
                except DimensionMismatch as exc:
                    raise NotAHomomorphism(f"action of {G.elements[g]!r} is not {rank}x{rank}") from exc
            if m.rows != rank or m.cols != rank:
                raise NotAHomomorphism(f"action of {G.elements[g]!r} is not {rank}x{rank}")
            mats.append(m)
        M = cls(ring, rank, tuple(mats))
        if mats[0] != ExactMatrix.identity(ring, rank):
            raise NotAHomomorphism("the identity must act trivially")
        for a in range(G.order):
            for b in range(G.order):
                if mats[a] @ mats[b] != mats[G.mul(a, b)]:
                    raise NotAHomomorphism(f"ρ({G.elements[a]})ρ({G.elements[b]}) != ρ({G.elements[a]}{G.elements[b]})")
        return M

    @classmethod
    def trivial(cls, G: FiniteGroupData, ring: Ring, rank: int = 1) -> "GroupModule":
        I = ExactMatrix.identity(ring, rank)
        return cls(ring, rank, (I,) * G.order)


# --------------------------------------------------------------------------
# bar cochains of a single group


def _tuples(n: int, q: int):
    return itertools.product(range(n), repeat=q)


def _code(t: Sequence[int], n: int) -> int:
    c = 0
    for x in t:
        c = c * n + x
    return c


def cochain_complex(G: FiniteGroupData, M: GroupModule, N: int, cap: int = COCHAIN_CAP) -> BasedComplex:
    """Cochains Hom_G(B_q(G), M) for q <= N as functions on G^q.

    Degree q has one cell ``(y1,...,yq)#i`` per tuple and module basis
    vector.  Only degrees up to N-1 have their full cohomology.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    n, k = G.order, M.rank
    if n ** N * k > cap:
        raise ResourceCapExceeded(f"|G|^N·rank = {n ** N * k} exceeds the cap {cap}")
    ring = M.ring
    names, degrees, offsets = [], [], []
    for q in range(N + 1):
        offsets.append(len(names))
        for t in _tuples(n, q):
            for i in range(k):
                names.append("(" + ",".join(G.elements[x] for x in t) + f")#{i}")
                degrees.append(-q)
    bd = [dict() for _ in names]
    act = [m.entries for m in M.action]
    inv = G.inverse
    # build δ by scanning target tuples and their faces
    for q in range(1, N + 1):
        src0, tgt0 = offsets[q - 1], offsets[q]
        for T in _tuples(n, q):
            tcode = _code(T, n)
            full = (0,) + T
            for f in range(q + 1):
                face = full[:f] + full[f + 1:]
                sign = -1 if f % 2 else 1
                if f == 0:
                    g = face[0]
                    gi = inv[g]
                    s = tuple(G.mul(gi, x) for x in face[1:])
                    R = act[g]
                else:
                    s = face[1:]
                    R = None
                scode = _code(s, n)
                for i in range(k):
                    col = bd[src0 + scode * k + i]
                    for j in range(k):
                        v = (R[j][i] if R is not None else int(i == j)) * sign
                        if v:
                            key = tgt0 + tcode * k + j
                            col[key] = ring(col.get(key, 0) + v)
    bd = tuple({a: b for a, b in c.items() if b} for c in bd)
    return BasedComplex(ring, tuple(names), tuple(degrees), bd, cohomological=True)


def group_cohomology(G: FiniteGroupData, M: GroupModule, n: int, cap: int = COCHAIN_CAP) -> FgModulePresentation:
    """H^n(G; M) from the bar cochains truncated one degree above n."""
    C = cochain_complex(G, M, n + 1, cap)
    return homology(C, degrees=[n])[n]


def cohomology_range(G: FiniteGroupData, M: GroupModule, top: int, cap: int = COCHAIN_CAP) -> dict:
    """{n: H^n(G; M)} for n = 0..top."""
    C = cochain_complex(G, M, top + 1, cap)
    H = homology(C, degrees=range(top + 1))
    return {n: H[n] for n in range(top + 1)}


# --------------------------------------------------------------------------
# LHS double complex


def lhs_double_complex(E: GroupExtensionData, ring: Ring, Npq: int, cap: int = LHS_CAP) -> DoubleComplex:
    """C^{p,q} = Hom_Q(B_p(Q), Hom_N(B_q(G), R)) for p + q <= Npq.

    A cell of C^{p,q} is a G-orbit of (x0..xp; y0..yq) ∈ Q^{p+1} × G^{q+1}
    under g·(x; y) = (π(g)x; gy), represented with y0 = e.  Signs:
    ∂_h = (-1)^{p+q+1} Σ(-1)^i (drop x_i), ∂_v = (-1)^{q+1} Σ(-1)^i (drop y_i).
    """
    G, Q = E.G, E.Q
    nG, nQ = G.order, Q.order
    total = sum(nQ ** (p + 1) * nG ** (s - p) for s in range(Npq + 1) for p in range(s + 1))
    if total > cap:
        raise ResourceCapExceeded(f"LHS total complex would have {total} cells (cap {cap})")
    pi = E.quotient_map
    inv = G.inverse
    names = {}
    for s in range(Npq + 1):
        for p in range(s + 1):
            q = s - p
            lst = []
            for xs in _tuples(nQ, p + 1):
                xl = ",".join(Q.elements[x] for x in xs)
                for ys in _tuples(nG, q):
                    lst.append(f"({xl}|" + ",".join(G.elements[y] for y in ys) + ")")
            names[(p, q)] = tuple(lst)
    hcols = {pq: [dict() for _ in v] for pq, v in names.items()}
    vcols = {pq: [dict() for _ in v] for pq, v in names.items()}
    for (p, q) in names:
        ny = nG ** q
        for xs in _tuples(nQ, p + 1):
            xcode = _code(xs, nQ)
            for ys in _tuples(nG, q):
                tcode = xcode * ny + _code(ys, nG)
                if p >= 1:
                    # source (p-1, q): sign of ∂_h there is (-1)^{(p-1)+q+1}
                    base = (-1) ** (p + q)
                    src = hcols[(p - 1, q)]
                    for i in range(p + 1):
                        x2 = xs[:i] + xs[i + 1:]
                        sc = _code(x2, nQ) * ny + _code(ys, nG)
                        v = base * (-1) ** i
                        d = src[sc]
                        d[tcode] = d.get(tcode, 0) + v
                if q >= 1:
                    base = (-1) ** q  # sign of ∂_v on (p, q-1)
                    src = vcols[(p, q - 1)]
                    nys = nG ** (q - 1)
                    full = (0,) + ys
                    for i in range(q + 1):
                        face = full[:i] + full[i + 1:]
                        if i == 0:
                            gi = inv[face[0]]
                            y2 = tuple(G.mul(gi, y) for y in face[1:])
                            qi = pi[gi]
                            x2 = tuple(Q.mul(qi, x) for x in xs)
                        else:
                            y2, x2 = face[1:], xs
                        sc = _code(x2, nQ) * nys + _code(y2, nG)
                        v = base * (-1) ** i
                        d = src[sc]
                        d[tcode] = d.get(tcode, 0) + v
    def clean(cols):
        return {pq: tuple({k: ring(v) for k, v in c.items() if ring(v)} for c in lst)
                for pq, lst in cols.items() if pq in names}
    h = {pq: c for pq, c in clean(hcols).items() if (pq[0] + 1, pq[1]) in names}
    v = {pq: c for pq, c in clean(vcols).items() if (pq[0], pq[1] + 1) in names}
    return DoubleComplex(ring, names, h, v, truncation=Npq)


def lhs_spectral_sequence(E: GroupExtensionData, ring: Ring, Npq: int, cap: int = LHS_CAP) -> FilteredComplex:
    """Column filtration of the LHS double complex (the LHS spectral sequence)."""
    return column_filtration(lhs_double_complex(E, ring, Npq, cap))


def lhs_row_spectral_sequence(E: GroupExtensionData, ring: Ring, Npq: int, cap: int = LHS_CAP) -> FilteredComplex:
    return row_filtration(lhs_double_complex(E, ring, Npq, cap))


# --------------------------------------------------------------------------
# restriction and inflation


def _cocycle_reps(G: FiniteGroupData, ring: Ring, q: int, cap: int):
    C = cochain_complex(G, GroupModule.trivial(G, ring), q + 1, cap)
    H = homology(C, degrees=[q])[q]
    return C, H


def _coboundaries(C: BasedComplex, q: int) -> Submodule:
    from .linalg import image_basis
    n = C.stored_degree(q)
    up = C.differential(n + 1)
    if up.cols == 0:
        return Submodule.zero(C.ring, C.dim(n))
    return image_basis(up)


def _image_rank(ring: Ring, vectors, C: BasedComplex, q: int) -> int:
    n = C.stored_degree(q)
    B = _coboundaries(C, q)
    V = Submodule.span(ring, C.dim(n), vectors) + B
    return subquotient(V, B).ngens


def restriction_rank(E: GroupExtensionData, ring: Ring, q: int, cap: int = COCHAIN_CAP) -> int:
    """Minimal number of generators of the image of H^q(G) -> H^q(N)."""
    G, Ng = E.G, E.N_group
    CG, HG = _cocycle_reps(G, ring, q, cap)
    CN = cochain_complex(Ng, GroupModule.trivial(Ng, ring), q + 1, cap)
    n = len(Ng.elements)
    vecs = []
    for z in HG.representatives.columns():
        vecs.append([z[_code(tuple(E.N[x] for x in t), G.order)] for t in _tuples(n, q)])
    return _image_rank(ring, vecs, CN, q)


def inflation_rank(E: GroupExtensionData, ring: Ring, p: int, cap: int = COCHAIN_CAP) -> int:
    """Minimal number of generators of the image of H^p(Q) -> H^p(G)."""
    G, Q = E.G, E.Q
    CQ, HQ = _cocycle_reps(Q, ring, p, cap)
    CG = cochain_complex(G, GroupModule.trivial(G, ring), p + 1, cap)
    vecs = []
    for z in HQ.representatives.columns():
        vecs.append([z[_code(tuple(E.quotient_map[x] for x in t), Q.order)] for t in _tuples(G.order, p)])
    return _image_rank(ring, vecs, CG, p)


# --------------------------------------------------------------------------
# coinvariant tensor products


def tensor_over_group(C: BasedComplex, G: FiniteGroupData, action: Mapping, M: GroupModule) -> BasedComplex:
    """C ⊗_{RG} M for a complex with a free signed permutation action.

    ``action[g]`` maps each cell name to ``(sign, image name)``.  With orbit
    representatives e, the class of (g·e) ⊗ m equals e ⊗ g^{-1} m.
    """
    ring = C.ring
    perm = []
    for g in range(G.order):
        a = action.get(g, action.get(G.elements[g]))
        if a is None:
            if g == 0:
                a = {n: (1, n) for n in C.names}
            else:
                raise ActionNotFree(f"no action given for {G.elements[g]!r}")
        perm.append({C.index[x]: (int(s), C.index[y]) for x, (s, y) in a.items()})
    for g in range(G.order):
        if sorted(t for _, t in perm[g].values()) != list(range(C.size)) or len(perm[g]) != C.size:
            raise ActionNotFree(f"{G.elements[g]!r} does not permute the basis")
    # orbit representatives
    rep_of: dict[int, tuple] = {}
    reps = []
    for x in range(C.size):
        if x in rep_of:
            continue
        orbit = {}
        for g in range(G.order):
            s, y = perm[g][x]
            if y in orbit:
                raise ActionNotFree(f"orbit of {C.names[x]!r} has fewer than {G.order} cells")
            orbit[y] = (g, s)
        for y, (g, s) in orbit.items():
            if y in rep_of:
                raise ActionNotFree(f"cells {C.names[x]!r} and {C.names[y]!r} overlap inconsistently")
            rep_of[y] = (len(reps), g, s)
        reps.append(x)
    # action must commute with d
    for g in range(G.order):
        for x in range(C.size):
            s, y = perm[g][x]
            lhs = {perm[g][j][1]: ring(v * perm[g][j][0]) for j, v in C.boundary[x].items()}
            rhs = {j: ring(s * v) for j, v in C.boundary[y].items()}
            if {k: v for k, v in lhs.items() if v} != rhs:
                raise NotEquivariant(f"d does not commute with {G.elements[g]!r} on {C.names[x]!r}")
    k = M.rank
    names, degrees, bd = [], [], []
    for r, x in enumerate(reps):
        for i in range(k):
            names.append(f"{C.names[x]}⊗{i}")
            degrees.append(C.degrees[x])
    for r, x in enumerate(reps):
        for i in range(k):
            col: dict = {}
            for y, v in C.boundary[x].items():
                rr, g, s = rep_of[y]
                R = M.action[G.inverse[g]].entries
                for j in range(k):
                    c = v * s * R[j][i]
                    if c:
                        key = rr * k + j
                        col[key] = ring(col.get(key, 0) + c)
            bd.append({a: b for a, b in col.items() if b})
    return BasedComplex(ring, tuple(names), tuple(degrees), tuple(bd), C.cohomological)
