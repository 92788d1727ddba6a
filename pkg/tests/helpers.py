"""Shared oracles and fixture builders for the test suite."""

from __future__ import annotations

import functools
import random
from pathlib import Path

from specseq import cellio
from specseq.complexes import BasedComplex, homology
from specseq.filtered import FilteredComplex, graded_homology, infinity_page, page, stabilization_index
from specseq.generators import random_filtered_complex
from specseq.groups import lhs_spectral_sequence
from specseq.linalg import module_homology, normalize_factors
from specseq.rings import F2, ZZ

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
LHS_TRUNCATION = 5


def fixture(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def canon(ring, factors) -> tuple:
    return normalize_factors(ring, factors)


@functools.lru_cache(maxsize=None)
def lhs(name: str, ring_name: str):
    _, E = cellio.load_group(fixture(name))
    ring = F2 if ring_name == "F2" else ZZ
    return lhs_spectral_sequence(E, ring, LHS_TRUNCATION)


@functools.lru_cache(maxsize=None)
def lhs_page(name: str, ring_name: str, r):
    FC = lhs(name, ring_name)
    return infinity_page(FC) if r == "inf" else page(FC, r)


def extension_of(name: str):
    _, E = cellio.load_group(fixture(name))
    return E


def rp3_skeletal() -> FilteredComplex:
    C = cellio.load_complex(fixture("rp3_twisted"))
    return FilteredComplex(C, [C.display_degree(d) for d in C.degrees])


def filtered_fixtures() -> dict:
    """Every fixture that is (or yields) a filtered complex.

    The LHS entries are truncated; only total degrees below the
    truncation are meaningful there.
    """
    out = {
        "s2_three_rows": (lambda: cellio.load_filtered(fixture("s2_three_rows")), None),
        "s2_skeletal": (lambda: cellio.load_filtered(fixture("s2_skeletal")), None),
        "rp3_skeletal": (rp3_skeletal, None),
    }
    for name, ring in (("c2_c4_c2", "F2"), ("c2_c4_c2", "Z"), ("d8_c4_c2", "F2"), ("d8_c4_c2", "Z")):
        out[f"lhs_{name}_{ring}"] = (functools.partial(lhs, name, ring), LHS_TRUNCATION - 1)
    return out


def random_complexes(count: int = 50, seed: int = 20240601):
    """Seeded random filtered complexes, alternating Z and F2, total dim <= 10."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        ring = ZZ if i % 2 == 0 else F2
        out.append((f"random_{i}_{ring}", random_filtered_complex(rng, ring, max_dim=10, max_level=3)))
    return out


def in_range(pq, max_total) -> bool:
    return max_total is None or pq[0] + pq[1] <= max_total


def page_turn_failures(FC: FilteredComplex, max_total=None) -> list:
    """Positions where H(E^r, d^r) and E^{r+1} disagree, r up to stabilization."""
    ring = FC.ring
    bad = []
    rstar = stabilization_index(FC)
    pages = [page(FC, r) for r in range(rstar + 2)]
    # page 0: homology of each associated graded piece, via the complex route
    for pq, fs in e0_homology(pages[0], max_total).items():
        if in_range(pq, max_total) and canon(ring, fs) != canon(ring, pages[1][pq].invariant_factors):
            bad.append((0, pq, fs, pages[1][pq].invariant_factors))
    for r in range(1, rstar + 1):
        cur, nxt = pages[r], pages[r + 1]
        for pq, m in cur.entries.items():
            if not in_range(pq, max_total):
                continue
            src = cur.source(*pq)
            inc = cur.differentials.get(src) if src in cur.entries else None
            tgt = cur.target(*pq)
            out = cur.differentials.get(pq) if tgt in cur.entries else None
            H = module_homology(ring, m.invariant_factors, inc, out, cur[tgt].invariant_factors)
            if canon(ring, H.invariant_factors) != canon(ring, nxt[pq].invariant_factors):
                bad.append((r, pq, H.invariant_factors, nxt[pq].invariant_factors))
    return bad


def e0_homology(E0, max_total=None) -> dict:
    """H(E^0, d^0) position by position, computed as the homology of the
    complex built from each column p of E^0 and its d^0."""
    ring = E0.ring
    sign = -1 if E0.cohomological else 1
    out = {}
    for p in sorted({pq[0] for pq in E0.entries}):
        col = sorted(pq for pq in E0.entries if pq[0] == p)
        offset, names, degrees = {}, [], []
        for pq in col:
            offset[pq] = len(names)
            for k in range(E0[pq].ngens):
                names.append(f"{pq}:{k}")
                degrees.append(sign * (pq[0] + pq[1]))
        bd = []
        for pq in col:
            M = E0.differentials.get(pq)
            t = E0.target(*pq)
            for j in range(E0[pq].ngens):
                if M is None or t not in offset or not M.rows:
                    bd.append({})
                    continue
                c = M.sparse_columns[j] if hasattr(M, "sparse_columns") else dict(enumerate(M.column(j)))
                bd.append({offset[t] + i: v for i, v in c.items() if v})
        C = BasedComplex(ring, tuple(names), tuple(degrees), tuple(bd), cohomological=E0.cohomological)
        degs = sorted({p + q for _, q in col if max_total is None or p + q <= max_total})
        for n, fs in homology(C, degs).factors().items():
            out[(p, n - p)] = fs
    return out


def dd_failures(FC: FilteredComplex, max_total=None) -> list:
    """Positions where d^r ∘ d^r is nonzero modulo the target relations."""
    bad = []
    for r in range(stabilization_index(FC) + 1):
        pg = page(FC, r)
        for pq, M in pg.differentials.items():
            t = pg.target(*pq)
            N = pg.differentials.get(t)
            if N is None or not in_range(pq, max_total) or not M.cols or not N.cols or not M.rows:
                continue
            comp = N @ M
            fs = pg[pg.target(*t)].invariant_factors
            if hasattr(comp, "sparse_columns"):
                vals = ((i, v) for c in comp.sparse_columns for i, v in c.items())
            else:
                vals = ((i, v) for i, row in enumerate(comp.entries) for v in row)
            if any(_nonzero_mod(v, fs[i]) for i, v in vals):
                bad.append((r, pq))
    return bad


def _nonzero_mod(v, d) -> bool:
    return v % d != 0 if d else v != 0


def convergence_failures(FC: FilteredComplex, max_total=None) -> list:
    ring = FC.ring
    E, G = infinity_page(FC), graded_homology(FC)
    bad = []
    for pq in set(E.entries) | set(G.entries):
        if not in_range(pq, max_total):
            continue
        a, b = canon(ring, E[pq].invariant_factors), canon(ring, G[pq].invariant_factors)
        if a != b:
            bad.append((pq, a, b))
    return bad


def total_homology_factors(FC: FilteredComplex) -> dict:
    H = homology(FC.complex)
    return {n: canon(FC.ring, f) for n, f in H.factors().items()}
