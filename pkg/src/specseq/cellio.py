"""JSON input and output, semi-simplicial sets and page charts.

Every file carries a ``"kind"`` key (``complex``, ``semisimplicial``,
``group``, ``equivariant`` or ``formal``); files without one are sniffed
from their keys.  Serializers emit sorted keys so that dumps are stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .complexes import BasedComplex
from .errors import BadFaceArity, DimensionMismatch, FiltrationNotMonotone, SimplicialIdentityViolation
from .filtered import FilteredComplex, SpectralPage
from .formal import Constraint, FormalPage
from .groups import FiniteGroupData, GroupModule, load_group_json, tensor_over_group
from .linalg import ExactMatrix, factors_label, normalize_factors
from .rings import Ring

OUTSIDE = "·"


def ring_name(ring: Ring) -> str:
    return f"F{ring.p}" if ring.kind == "F" else ring.kind


def _read(src) -> dict:
    if isinstance(src, Mapping):
        return dict(src)
    return json.loads(Path(src).read_text())


def sniff_kind(data: Mapping) -> str:
    if "kind" in data:
        return data["kind"]
    if "faces" in data:
        return "semisimplicial"
    if "entries" in data:
        return "formal"
    if "table" in data:
        return "group"
    if "module" in data and "complex" in data:
        return "equivariant"
    return "complex"


def _flat(obj) -> bool:
    return all(not isinstance(x, (Mapping, list, tuple)) for x in obj)


def _encode(obj, level: int) -> str:
    pad = "  " * (level + 1)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(obj[k], level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(obj, (list, tuple)):
        obj = list(obj)
        if _flat(obj):
            return json.dumps(obj, ensure_ascii=False)
        return "[\n" + ",\n".join(pad + _encode(x, level + 1) for x in obj) + "\n" + "  " * level + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(data: Mapping) -> str:
    """Stable JSON: sorted keys, innermost lists kept on one line."""
    return _encode(data, 0) + "\n"


# --------------------------------------------------------------------------
# semi-simplicial sets


@dataclass(frozen=True)
class SemiSimplicialSet:
    cells: tuple  # ((name, dimension), ...)
    faces: Mapping[str, tuple]  # name -> (d_0 x, ..., d_n x)

    @property
    def dims(self) -> dict:
        return dict(self.cells)

    def face(self, x: str, i: int) -> str:
        return self.faces[x][i]


def validate_semisimplicial(S: SemiSimplicialSet) -> SemiSimplicialSet:
    dims = S.dims
    if len(dims) != len(S.cells):
        raise BadFaceArity("duplicate cell names")
    for x, n in S.cells:
        fs = tuple(S.faces.get(x, ()))
        if n == 0:
            if fs:
                raise BadFaceArity(f"vertex {x!r} has faces")
            continue
        if len(fs) != n + 1:
            raise BadFaceArity(f"{x!r} has dimension {n} but {len(fs)} faces")
        for y in fs:
            if dims.get(y) != n - 1:
                raise BadFaceArity(f"face {y!r} of {x!r} is not a cell of dimension {n - 1}")
    for x, n in S.cells:
        if n < 2:
            continue
        for j in range(n + 1):
            for i in range(j):
                a = S.face(S.face(x, j), i)
                b = S.face(S.face(x, i), j - 1)
                if a != b:
                    raise SimplicialIdentityViolation(
                        f"on {x!r}: d_{i} d_{j} = {a!r} but d_{j - 1} d_{i} = {b!r}")
    return S


def parse_semisimplicial(src) -> SemiSimplicialSet:
    data = _read(src)
    cells = tuple((str(c[0]), int(c[1])) for c in data["cells"])
    faces = {str(k): tuple(str(v) for v in vs) for k, vs in (data.get("faces") or {}).items()}
    return validate_semisimplicial(SemiSimplicialSet(cells, faces))


def chain_complex_of(S: SemiSimplicialSet, ring: Ring, filtration: Mapping[str, int] | None = None):
    """Alternating face sum; a FilteredComplex (trivial filtration by default)."""
    bd = {}
    for x, n in S.cells:
        col: dict = {}
        for i, y in enumerate(S.faces.get(x, ())):
            col[y] = col.get(y, 0) + (-1) ** i
        bd[x] = col
    C = BasedComplex.from_boundaries(ring, list(S.cells), bd)
    if filtration is None:
        return FilteredComplex(C, [0] * C.size)
    missing = [x for x, _ in S.cells if x not in filtration]
    if missing:
        raise FiltrationNotMonotone(f"no level for cells {missing}")
    for x, _ in S.cells:
        for y in S.faces.get(x, ()):
            if filtration[y] > filtration[x]:
                raise FiltrationNotMonotone(f"face {y!r} of {x!r} sits at a later level")
    return FilteredComplex(C, {x: int(v) for x, v in filtration.items()})


def skeletal_filtration(S: SemiSimplicialSet) -> dict:
    return {x: n for x, n in S.cells}


# --------------------------------------------------------------------------
# complexes


def complex_from_json(data: Mapping) -> BasedComplex:
    ring = Ring.parse(data.get("ring", "Z"))
    coh = data.get("orientation", "homological") == "cohomological"
    basis = [(c["name"], int(c["degree"])) if isinstance(c, Mapping) else (str(c[0]), int(c[1]))
             for c in data["cells"]]
    return BasedComplex.from_boundaries(ring, basis, data.get("boundary") or {}, cohomological=coh)


def complex_to_json(C: BasedComplex) -> dict:
    return {
        "kind": "complex",
        "ring": ring_name(C.ring),
        "orientation": "cohomological" if C.cohomological else "homological",
        "cells": [[n, C.display_degree(C.degrees[i])] for i, n in enumerate(C.names)],
        "boundary": {C.names[i]: {C.names[j]: v for j, v in sorted(col.items())}
                     for i, col in enumerate(C.boundary) if col},
    }


def load_filtered(src) -> FilteredComplex:
    """A filtered complex from a ``complex`` or ``semisimplicial`` file."""
    data = _read(src)
    kind = sniff_kind(data)
    if kind == "semisimplicial":
        S = parse_semisimplicial(data)
        ring = Ring.parse(data.get("ring", "Z"))
        filt = data.get("filtration")
        if filt == "skeletal":
            filt = skeletal_filtration(S)
        return chain_complex_of(S, ring, filt)
    if kind != "complex":
        raise DimensionMismatch(f"expected a complex, got kind {kind!r}")
    C = complex_from_json(data)
    filt = data.get("filtration")
    return FilteredComplex(C, filt if filt is not None else [0] * C.size)


def load_complex(src) -> BasedComplex:
    data = _read(src)
    kind = sniff_kind(data)
    if kind == "equivariant":
        return load_equivariant(data)
    return load_filtered(data).complex


def filtered_to_json(FC: FilteredComplex) -> dict:
    out = complex_to_json(FC.complex)
    out["filtration"] = FC.filtration()
    return out


def semisimplicial_to_json(S: SemiSimplicialSet, ring: Ring | None = None, filtration=None) -> dict:
    out = {"kind": "semisimplicial", "cells": [list(c) for c in S.cells],
           "faces": {k: list(v) for k, v in S.faces.items() if v}}
    if ring is not None:
        out["ring"] = ring_name(ring)
    if filtration is not None:
        out["filtration"] = dict(filtration)
    return out


# --------------------------------------------------------------------------
# groups and equivariant complexes


def load_group(src):
    """``(G, extension or None)`` from a group file."""
    return load_group_json(_read(src))


def group_to_json(G: FiniteGroupData, normal=None) -> dict:
    out = {"kind": "group", "elements": list(G.elements),
           "table": [[G.elements[G.mul(a, b)] for b in range(G.order)] for a in range(G.order)]}
    if normal is not None:
        out["normal"] = list(normal)
    return out


def load_module(G: FiniteGroupData, ring: Ring, data: Mapping) -> GroupModule:
    return GroupModule.build(G, ring, int(data["rank"]), dict(data.get("action") or {}))


def load_equivariant(src) -> BasedComplex:
    """C ⊗_G M for a complex with a free signed permutation action."""
    data = _read(src)
    cdata = dict(data["complex"])
    cdata.setdefault("ring", data.get("ring", "Z"))
    C = complex_from_json(cdata)
    G, _ = load_group_json(data["group"])
    action = {g: {x: (int(s), str(y)) for x, (s, y) in m.items()} for g, m in data["action"].items()}
    M = load_module(G, C.ring, data["module"])
    return tensor_over_group(C, G, action, M)


# --------------------------------------------------------------------------
# formal pages


def _pos(key) -> tuple:
    if isinstance(key, str):
        a, b = key.split(",")
        return (int(a), int(b))
    return (int(key[0]), int(key[1]))


def load_formal(src) -> FormalPage:
    data = _read(src)
    ring = Ring.parse(data.get("ring", "Z"))
    entries = {}
    for k, v in (data.get("entries") or {}).items():
        f = v["factors"] if isinstance(v, Mapping) else v
        f = tuple(int(d) for d in f)
        if f:
            entries[_pos(k)] = f
    orientation = data.get("orientation", "homological")
    P = FormalPage(ring, orientation, int(data.get("start", 2)), entries)
    diffs = {}
    for r, items in (data.get("differentials") or {}).items():
        for item in items:
            src_pq = _pos(item["from"])
            tgt = P.target_of(*src_pq, int(r))
            if "to" in item and _pos(item["to"]) != tgt:
                raise DimensionMismatch(f"d_{r} from {src_pq} must land at {tgt}, not {tuple(item['to'])}")
            diffs[(int(r),) + src_pq] = ExactMatrix.from_rows(ring, item["matrix"], len(P[src_pq]))
    target = None
    if data.get("target") is not None:
        target = {int(n): tuple(v["factors"] if isinstance(v, Mapping) else v) for n, v in data["target"].items()}
    constraints = tuple(Constraint(c["axis"], c.get("reason", "")) for c in data.get("constraints") or ())
    return FormalPage(ring, orientation, P.r, entries, diffs, constraints, target)


def formal_to_json(P: FormalPage) -> dict:
    out = {
        "kind": "formal",
        "ring": ring_name(P.ring),
        "orientation": P.orientation,
        "start": P.r,
        "entries": {f"{p},{q}": {"factors": list(f)} for (p, q), f in sorted(P.entries.items()) if f},
    }
    diffs: dict = {}
    for (r, p, q), M in sorted(P.differentials.items()):
        diffs.setdefault(str(r), []).append(
            {"from": [p, q], "to": list(P.target_of(p, q, r)), "matrix": M.to_lists()})
    if diffs:
        out["differentials"] = diffs
    if P.target is not None:
        out["target"] = {str(n): {"factors": list(f)} for n, f in sorted(P.target.items())}
    if P.constraints:
        out["constraints"] = [{"axis": c.axis, "reason": c.reason} for c in P.constraints]
    return out


# --------------------------------------------------------------------------
# charts


def _page_data(page):
    """(ring, r, orientation, {pq: factors incl. zeros}, {pq: (target, matrix)})."""
    if isinstance(page, FormalPage):
        entries = {pq: tuple(f) for pq, f in page.entries.items()}
        arrows = {(p, q): (page.target_of(p, q, r), M)
                  for (r, p, q), M in page.differentials.items() if r == page.r}
        return page.ring, page.r, page.orientation, entries, arrows
    entries = {pq: m.invariant_factors for pq, m in page.entries.items()}
    arrows = {pq: (page.target(*pq), M) for pq, M in page.differentials.items()
              if M.rows and M.cols and not M.is_zero()}
    orientation = "cohomological" if page.cohomological else "homological"
    return page.ring, page.r, orientation, entries, arrows


def restrict_page(page: SpectralPage, max_total: int) -> SpectralPage:
    """Only the positions with p + q <= max_total."""
    keep = {pq for pq in page.entries if pq[0] + pq[1] <= max_total}
    return SpectralPage(page.ring, page.r, page.cohomological,
                        {pq: m for pq, m in page.entries.items() if pq in keep},
                        {pq: m for pq, m in page.differentials.items()
                         if pq in keep and sum(page.target(*pq)) <= max_total},
                        page.complex)


def cell_label(ring: Ring, factors) -> str:
    return factors_label(ring, normalize_factors(ring, factors))


def render_chart(page, format: str = "ascii", arrows: bool = False) -> str:
    """Chart of a SpectralPage or FormalPage, q upwards and p to the right."""
    ring, r, orientation, entries, diffs = _page_data(page)
    if format == "json":
        out = {"orientation": orientation, "ring": ring_name(ring),
               "entries": {f"{p},{q}": list(normalize_factors(ring, f))
                           for (p, q), f in sorted(entries.items()) if normalize_factors(ring, f)}}
        if arrows:
            out["differentials"] = [{"from": [p, q], "to": list(t), "matrix": M.to_lists()}
                                    for (p, q), (t, M) in sorted(diffs.items())]
        return dumps(out)
    if format != "ascii":
        raise ValueError("format must be 'ascii' or 'json'")
    title = ("E_inf/graded" if r is None else f"E_{r}") + f" ({orientation}, {ring})"
    if not entries:
        return f"{title}\n  +\n"
    ps = [p for p, _ in entries]
    qs = [q for _, q in entries]
    prange = range(min(ps), max(ps) + 1)
    qrange = range(max(qs), min(qs) - 1, -1)
    formal = isinstance(page, FormalPage)
    labels = {}
    for p in prange:
        for q in qrange:
            if (p, q) in entries:
                labels[(p, q)] = cell_label(ring, entries[(p, q)])
            else:
                labels[(p, q)] = "0" if formal else OUTSIDE
    width = {p: max(len(str(p)), *(len(labels[(p, q)]) for q in qrange)) for p in prange}
    qw = max(len(str(q)) for q in qrange)
    lines = [title]
    for q in qrange:
        cells = " ".join(labels[(p, q)].ljust(width[p]) for p in prange)
        lines.append(f"{str(q).rjust(qw)} | {cells}".rstrip())
    rule = "-" * (sum(width.values()) + len(width) - 1)
    lines.append(" " * qw + " +-" + rule)
    lines.append(" " * (qw + 3) + " ".join(str(p).ljust(width[p]) for p in prange).rstrip())
    if arrows:
        for (p, q), (t, M) in sorted(diffs.items()):
            lines.append(f"d_{r}: ({p},{q}) -> ({t[0]},{t[1]})  {M.to_lists()}")
    return "\n".join(lines) + "\n"
