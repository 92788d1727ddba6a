import json

import pytest

from helpers import filtered_fixtures, fixture, lhs_page
from specseq import cellio
from specseq.complexes import homology
from specseq.errors import BadFaceArity, DimensionMismatch, FiltrationNotMonotone, SimplicialIdentityViolation
from specseq.filtered import graded_homology, infinity_page, page
from specseq.formal import COHOMOLOGICAL, FormalPage
from specseq.rings import F2, ZZ

TRIANGLE = {"kind": "semisimplicial", "cells": [["a", 0], ["b", 0], ["c", 0], ["x", 1], ["y", 1], ["z", 1]],
            "faces": {"x": ["b", "a"], "y": ["c", "b"], "z": ["c", "a"]}}


def test_parse_errors():
    bad = dict(TRIANGLE, faces={"x": ["b"], "y": ["c", "b"], "z": ["c", "a"]})
    with pytest.raises(BadFaceArity):
        cellio.parse_semisimplicial(bad)
    with pytest.raises(BadFaceArity):
        cellio.parse_semisimplicial(dict(TRIANGLE, faces={**TRIANGLE["faces"], "a": ["b"]}))
    with pytest.raises(BadFaceArity):
        cellio.parse_semisimplicial(dict(TRIANGLE, faces={**TRIANGLE["faces"], "x": ["b", "q"]}))
    with pytest.raises(BadFaceArity):
        cellio.parse_semisimplicial({"cells": [["a", 0], ["a", 0]]})
    # a 2-cell whose faces do not glue: d_0 d_1 should equal d_0 d_0
    s = {"cells": TRIANGLE["cells"] + [["t", 2]],
         "faces": {**TRIANGLE["faces"], "t": ["y", "x", "z"]}}
    with pytest.raises(SimplicialIdentityViolation):
        cellio.parse_semisimplicial(s)


def test_filled_triangle_is_a_point():
    s = {"cells": TRIANGLE["cells"] + [["t", 2]],
         "faces": {**TRIANGLE["faces"], "t": ["y", "z", "x"]}}
    FC = cellio.chain_complex_of(cellio.parse_semisimplicial(s), ZZ)
    assert {n: f for n, f in homology(FC.complex).factors().items() if f} == {0: (0,)}


def test_single_vertex():
    S = cellio.parse_semisimplicial({"cells": [["v", 0]]})
    FC = cellio.chain_complex_of(S, F2)
    assert page(FC, 0).factors() == {(0, 0): (0,)}
    assert infinity_page(FC).factors() == {(0, 0): (0,)}


def test_circle_skeletal():
    S = cellio.parse_semisimplicial(TRIANGLE)
    filt = cellio.skeletal_filtration(S)
    FC = cellio.chain_complex_of(S, ZZ, filt)
    E1 = page(FC, 1)
    assert E1.factors() == {(0, 0): (0, 0, 0), (1, 0): (0, 0, 0)}
    assert infinity_page(FC).factors() == {(0, 0): (0,), (1, 0): (0,)}


def test_filtration_not_monotone():
    S = cellio.parse_semisimplicial(TRIANGLE)
    lev = {x: 1 for x, _ in S.cells}
    lev["x"] = 0
    with pytest.raises(FiltrationNotMonotone):
        cellio.chain_complex_of(S, ZZ, lev)
    with pytest.raises(FiltrationNotMonotone):
        cellio.chain_complex_of(S, ZZ, {"a": 0})


def test_sniff_and_wrong_kind():
    assert cellio.sniff_kind(TRIANGLE) == "semisimplicial"
    assert cellio.sniff_kind(cellio._read(fixture("hopf_e2"))) == "formal"
    assert cellio.sniff_kind(cellio._read(fixture("c2"))) == "group"
    with pytest.raises(DimensionMismatch):
        cellio.load_filtered(fixture("c2"))


def test_hopf_chart_golden():
    P = cellio.load_formal(fixture("hopf_e2"))
    assert cellio.render_chart(P, arrows=True) == (
        "E_2 (homological, Z)\n"
        "1 | Z 0 Z\n"
        "0 | Z 0 Z\n"
        "  +------\n"
        "    0 1 2\n"
        "d_2: (2,0) -> (0,1)  [[1]]\n")


def test_empty_chart_golden():
    assert cellio.render_chart(FormalPage(ZZ, COHOMOLOGICAL, 3, {})) == "E_3 (cohomological, Z)\n  +\n"


def test_c4_e3_golden():
    pg = cellio.restrict_page(lhs_page("c2_c4_c2", "Z", 3), 4)
    text = cellio.render_chart(pg)
    assert text.splitlines()[0] == "E_3 (cohomological, Z)"
    assert "0 | Z   0   Z/2 0 Z/2" in text
    assert "2 | Z/2 Z/2 Z/2 · ·" in text
    data = json.loads(cellio.render_chart(pg, "json"))
    got = {k: data["entries"].get(k) for k in ("0,0", "1,0", "0,2", "1,2")}
    assert got == {"0,0": [0], "1,0": None, "0,2": [2], "1,2": [2]}


def test_bad_format():
    with pytest.raises(ValueError):
        cellio.render_chart(FormalPage(ZZ, COHOMOLOGICAL, 3, {}), "svg")


@pytest.mark.parametrize("name", ["s2_three_rows", "s2_skeletal"])
def test_filtered_round_trip(name):
    FC = cellio.load_filtered(fixture(name))
    back = cellio.load_filtered(json.loads(cellio.dumps(cellio.filtered_to_json(FC))))
    assert back.complex.names == FC.complex.names
    for r in range(4):
        assert page(back, r).factors() == page(FC, r).factors()


def test_semisimplicial_round_trip():
    S = cellio.parse_semisimplicial(TRIANGLE)
    again = cellio.parse_semisimplicial(json.loads(cellio.dumps(cellio.semisimplicial_to_json(S, ZZ))))
    assert again == S


@pytest.mark.parametrize("name", ["hopf_e2", "cp3_ahss", "bordism", "c4_homology_e4", "split_extension_d8"])
def test_formal_round_trip(name):
    P = cellio.load_formal(fixture(name))
    Q = cellio.load_formal(json.loads(cellio.dumps(cellio.formal_to_json(P))))
    assert Q.entries == P.entries and Q.r == P.r and Q.constraints == P.constraints
    assert Q.target == P.target
    assert {k: m.to_lists() for k, m in Q.differentials.items()} == \
           {k: m.to_lists() for k, m in P.differentials.items()}


def test_group_round_trip():
    G, E = cellio.load_group(fixture("d8_c4_c2"))
    G2, E2 = cellio.load_group(cellio.group_to_json(G, [G.elements[g] for g in E.N]))
    assert G2.elements == G.elements and E2.N == E.N


@pytest.mark.parametrize("name", sorted(filtered_fixtures()))
def test_graded_and_infinity_json_identical(name):
    build, cap = filtered_fixtures()[name]
    FC = build()
    E, G = infinity_page(FC), graded_homology(FC)
    if cap is not None:
        E, G = cellio.restrict_page(E, cap), cellio.restrict_page(G, cap)
    assert cellio.render_chart(E, "json") == cellio.render_chart(G, "json")


def test_dumps_is_stable():
    d = {"b": [[1, 2], [3, 4]], "a": [1, 2]}
    assert cellio.dumps(d) == cellio.dumps(json.loads(cellio.dumps(d)))
    assert cellio.dumps(d).splitlines()[1] == '  "a": [1, 2],'
