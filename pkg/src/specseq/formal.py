"""Formal page turning: spectral sequence arguments on bare page data.

A formal page holds detached modules (invariant factors only) and whatever
differentials the user supplies.  Bidegree bookkeeping decides which
differentials vanish for lack of a source or target; the rest must be given
before a page can be turned.  Matrices are written in the basis of the
factors exactly as listed for each entry.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .errors import DimensionMismatch, MissingDifferential, NotAComplex, NotCollapsed, UnboundedEnumeration
from .extensions import ExtensionTower, build_tower
from .linalg import ExactMatrix, FgModulePresentation, module_homology, normalize_factors
from .rings import Ring

HOMOLOGICAL = "homological"
COHOMOLOGICAL = "cohomological"


def _bidegree(orientation: str, r: int) -> tuple:
    return (-r, r - 1) if orientation == HOMOLOGICAL else (r, 1 - r)


@dataclass(frozen=True)
class Constraint:
    axis: str  # "vertical" (p = 0) or "horizontal" (q = 0)
    reason: str = ""

    def blocks(self, src: tuple, tgt: tuple) -> bool:
        k = 0 if self.axis == "vertical" else 1
        return src[k] == 0 or tgt[k] == 0


@dataclass(frozen=True, eq=False)
class FormalPage:
    ring: Ring
    orientation: str
    r: int
    entries: Mapping[tuple, tuple]  # (p, q) -> invariant factors, in the listed order
    differentials: Mapping[tuple, ExactMatrix] = field(default_factory=dict)  # (r, p, q) at the source
    constraints: tuple = ()
    target: Mapping[int, tuple] | None = None

    def __post_init__(self):
        if self.orientation not in (HOMOLOGICAL, COHOMOLOGICAL):
            raise ValueError(f"orientation must be {HOMOLOGICAL!r} or {COHOMOLOGICAL!r}")
        for pq, f in self.entries.items():
            if any(d < 0 or d == 1 for d in f) or (self.ring.is_field and any(f)):
                raise DimensionMismatch(f"bad invariant factors {f} at {pq}")
        for (r, p, q), M in self.differentials.items():
            src, tgt = self[(p, q)], self[self.target_of(p, q, r)]
            if M.cols != len(src) or M.rows != len(tgt):
                raise DimensionMismatch(f"d_{r} at ({p},{q}) should be {len(tgt)}x{len(src)}")
            # columns must respect the orders of the source generators
            for j, d in enumerate(src):
                if d and any(_nonzero_mod(self.ring, d * M.entries[i][j], tgt[i]) for i in range(M.rows)):
                    raise DimensionMismatch(f"d_{r} at ({p},{q}) is not well defined on Z/{d}")
        for (r, p, q), M in self.differentials.items():
            t = self.target_of(p, q, r)
            N = self.differentials.get((r,) + t)
            if N is not None:
                tt = self[self.target_of(*t, r)]
                comp = N @ M
                if any(_nonzero_mod(self.ring, comp.entries[i][j], tt[i])
                       for i in range(comp.rows) for j in range(comp.cols)):
                    raise NotAComplex(p + q, (p, q), f"d_{r}∘d_{r} != 0 starting at ({p},{q})")

    def __getitem__(self, pq) -> tuple:
        return tuple(self.entries.get(tuple(pq), ()))

    def bidegree(self, r: int | None = None) -> tuple:
        return _bidegree(self.orientation, self.r if r is None else r)

    def target_of(self, p: int, q: int, r: int | None = None) -> tuple:
        a, b = self.bidegree(r)
        return (p + a, q + b)

    def source_of(self, p: int, q: int, r: int | None = None) -> tuple:
        a, b = self.bidegree(r)
        return (p - a, q - b)

    def nonzero(self) -> dict:
        return {pq: f for pq, f in sorted(self.entries.items()) if f}

    def module(self, pq) -> FgModulePresentation:
        return FgModulePresentation(self.ring, self[pq])

    def constrained(self, src: tuple, tgt: tuple) -> Constraint | None:
        return next((c for c in self.constraints if c.blocks(src, tgt)), None)

    def differential(self, p: int, q: int, r: int | None = None) -> ExactMatrix | None:
        r = self.r if r is None else r
        return self.differentials.get((r, p, q))

    def with_differential(self, p: int, q: int, matrix, r: int | None = None) -> "FormalPage":
        r = self.r if r is None else r
        if not isinstance(matrix, ExactMatrix):
            matrix = ExactMatrix.from_rows(self.ring, matrix, len(self[(p, q)]))
        diffs = dict(self.differentials)
        diffs[(r, p, q)] = matrix
        return replace(self, differentials=diffs)

    def canonical(self) -> dict:
        """Nonzero entries with canonical invariant factors."""
        return {pq: normalize_factors(self.ring, f) for pq, f in sorted(self.entries.items()) if f}


def _nonzero_mod(ring: Ring, x, d) -> bool:
    x = ring(x)
    if d and ring.kind == "Z":
        return x % d != 0
    return x != 0


# --------------------------------------------------------------------------
# scanning and turning


@dataclass(frozen=True)
class ScanReport:
    start: int
    r_max: int
    unforced: Mapping[int, tuple]  # r -> ((source, target), ...)
    constrained: Mapping[int, tuple]  # r -> ((source, target, reason), ...)

    @property
    def collapse_page(self) -> int | None:
        """Smallest r0 from which every scanned d_r is forced zero."""
        r0 = self.start
        for r in range(self.start, self.r_max + 1):
            if self.unforced.get(r):
                r0 = r + 1
        return r0 if r0 <= self.r_max else None

    @property
    def collapses(self) -> bool:
        return self.collapse_page == self.start

    def verdict(self) -> str:
        r0 = self.collapse_page
        if r0 is None:
            return f"unforced differentials remain up to E_{self.r_max}"
        return f"collapses at E_{r0}"


def default_r_max(P: FormalPage) -> int:
    ps = [p for p, _ in P.nonzero()] or [0]
    qs = [q for _, q in P.nonzero()] or [0]
    return max(P.r, max(ps) - min(ps) + max(qs) - min(qs) + 2)


def forced_zero_scan(P: FormalPage, r_max: int | None = None) -> ScanReport:
    """Positions where d_r is not forced to vanish, for r = P.r .. r_max.

    A differential is forced zero when its source or target entry is zero or
    an axis constraint applies.  Entries only shrink as pages turn, so the
    scan of later r on the current entries is a safe over-approximation.
    """
    r_max = default_r_max(P) if r_max is None else r_max
    unforced, constrained = {}, {}
    for r in range(P.r, r_max + 1):
        u, c = [], []
        for pq, f in sorted(P.entries.items()):
            if not f:
                continue
            t = P.target_of(*pq, r)
            if not P[t]:
                continue
            con = P.constrained(pq, t)
            if con is not None:
                c.append((pq, t, con.reason or con.axis))
            else:
                u.append((pq, t))
        unforced[r] = tuple(u)
        constrained[r] = tuple(c)
    return ScanReport(P.r, r_max, unforced, constrained)


def turn_page(P: FormalPage) -> FormalPage:
    """E_{r+1} = H(E_r, d_r); every unforced d_r must be supplied."""
    scan = forced_zero_scan(P, P.r)
    missing = [src for src, _ in scan.unforced[P.r] if (P.r,) + src not in P.differentials]
    if missing:
        raise MissingDifferential(missing)
    entries = {}
    ring = P.ring
    for pq, f in sorted(P.entries.items()):
        if not f:
            continue
        t = P.target_of(*pq)
        s = P.source_of(*pq)
        out = None if P.constrained(pq, t) else P.differentials.get((P.r,) + pq)
        inc = None if P.constrained(s, pq) else P.differentials.get((P.r,) + s)
        H = module_homology(ring, f, inc, out, P[t])
        if H.invariant_factors:
            entries[pq] = H.invariant_factors
    return FormalPage(ring, P.orientation, P.r + 1, entries, {}, P.constraints, P.target)


def turn_to(P: FormalPage, r: int) -> FormalPage:
    while P.r < r:
        P = turn_page(P)
    return P


def edge_injectivity_constraint(P: FormalPage, axis: str, reason: str | None = None) -> FormalPage:
    """Declare every differential into or out of an axis to be zero."""
    if axis not in ("vertical", "horizontal"):
        raise ValueError("axis must be 'vertical' or 'horizontal'")
    reason = reason or f"edge map along the {axis} axis is split"
    return replace(P, constraints=P.constraints + (Constraint(axis, reason),))


# --------------------------------------------------------------------------
# extensions and target checks


def diagonal_extensions(P: FormalPage, n: int, check_collapse: bool = True) -> ExtensionTower:
    """Possible total-degree-n modules from a collapsed page."""
    if check_collapse:
        scan = forced_zero_scan(P)
        if not scan.collapses:
            raise NotCollapsed(f"page E_{P.r} does not collapse: {scan.verdict()}")
    diag = sorted((pq for pq, f in P.entries.items() if f and pq[0] + pq[1] == n),
                  reverse=P.orientation == COHOMOLOGICAL)
    return build_tower(P.ring, n, [(p, P[(p, q)]) for p, q in diag])


@dataclass(frozen=True)
class TargetCheck:
    consistent: bool
    per_degree: Mapping[int, tuple]  # n -> (ok, candidates as labels, target label)


def check_target(P: FormalPage, target: Mapping[int, Sequence[int]] | None = None) -> TargetCheck:
    """Compare the diagonals of P with declared target homology.

    A degree passes when the target is among the possible extension
    candidates; with a free/torsion ambiguity only free rank and total
    torsion order are compared.
    """
    from .linalg import factors_label
    target = target if target is not None else (P.target or {})
    ring = P.ring
    out = {}
    ok_all = True
    for n, f in sorted(target.items()):
        want = normalize_factors(ring, f)
        try:
            tower = diagonal_extensions(P, n, check_collapse=False)
            ok = want in tower.candidates or (not tower.candidates and not want)
            labels = tuple(tower.labels()) or ("0",)
        except UnboundedEnumeration:
            diag = [P[pq] for pq in P.entries if pq[0] + pq[1] == n]
            free = sum(1 for g in diag for d in g if d == 0)
            order = 1
            for g in diag:
                for d in g:
                    order *= d or 1
            wo = 1
            for d in want:
                wo *= d or 1
            ok = free == sum(1 for d in want if d == 0) and order == wo
            labels = ("(unbounded)",)
        out[n] = (ok, labels, factors_label(ring, want))
        ok_all &= ok
    return TargetCheck(ok_all, out)


# --------------------------------------------------------------------------
# bridge from the engine


def from_spectral_page(page) -> FormalPage:
    """Detach a computed SpectralPage into a FormalPage with its d^r."""
    orientation = COHOMOLOGICAL if page.cohomological else HOMOLOGICAL
    entries = {pq: m.invariant_factors for pq, m in page.entries.items() if not m.is_zero}
    diffs = {}
    for pq, M in page.differentials.items():
        # zero maps are kept: they are known, not missing
        if pq in entries and M.rows and M.cols:
            diffs[(page.r,) + pq] = M
    return FormalPage(page.ring, orientation, page.r, entries, diffs)
