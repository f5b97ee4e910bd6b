import json
from fractions import Fraction

import numpy as np
import pytest

from rigidlab import graphs
from rigidlab.exactpoly import MonomialOrder, Polynomial, evaluate, parse
from rigidlab.groebner import eliminate, normal_form
from rigidlab.numeric import SystemEvaluator
from rigidlab.varieties import (
    FLAT_VARS,
    SHARED_VARS,
    Pinning,
    build_unit_system,
    cm_distance_system,
    flatness_eq1,
    flatness_factor,
    laman_variable_audit,
    pin_configuration,
    shared_neighbor_system,
    verify_eq1,
)


def test_triangle_system():
    sys = build_unit_system(graphs.triangle(), Pinning("u1", "u2"))
    assert sys.vars.names == ("x2", "x3", "y3")
    assert [str(e) for e in sys.equations] == ["x2^2 - 1", "x2^2 - 2*x2*x3 + x3^2 + y3^2 - 1", "x3^2 + y3^2 - 1"]


def test_k33_system_counts():
    sys = build_unit_system(graphs.complete_bipartite(3, 3), Pinning("u1", "u2"))
    assert len(sys.vars) == 9 and len(sys.equations) == 9
    assert sys.vars.names[0] == "x2"


def test_single_edge_system():
    sys = build_unit_system(graphs.path(2))
    assert sys.vars.names == ("x2",)
    assert sys.equations == (parse("x2^2 - 1", sys.vars),)


def test_pinning_errors():
    with pytest.raises(KeyError):
        build_unit_system(graphs.triangle(), Pinning("u1", "zz"))
    with pytest.raises(ValueError):
        Pinning("u1", "u1")


def test_isolated_vertices_add_variables_only():
    g = graphs.Graph(["a", "b", "c"], [("a", "b")])
    sys = build_unit_system(g)
    assert laman_variable_audit(sys) == (3, 1, 2)


def test_nonadjacent_pinning_and_axis_naming():
    g = graphs.cycle(4)
    sys = build_unit_system(g, Pinning("u1", "u3"))
    assert sys.vars.names == ("x3", "x2", "y2", "x4", "y4")
    assert len(sys.equations) == 4


def test_equations_vanish_on_pinned_unit_configurations():
    g = graphs.moser_spindle()
    emb = graphs.moser_embedding()
    for pin in (Pinning("a", "b1"), Pinning("d1", "c2"), Pinning("b2", "a")):
        # random rigid motion first, then pin
        th = 0.7
        moved = {v: (np.cos(th) * x - np.sin(th) * y + 3.0, np.sin(th) * x + np.cos(th) * y - 1.0) for v, (x, y) in emb.items()}
        sys = build_unit_system(g, pin)
        x = sys.vector(pin_configuration(moved, pin))
        assert np.max(np.abs(SystemEvaluator(sys).residual(x))) < 1e-9


def test_shared_neighbor_system():
    sys = shared_neighbor_system()
    assert len(sys.vars) == 5 and len(sys.equations) == 3
    point = {"x2": Fraction(6, 5), "x3": 0, "y3": 0, "vx": Fraction(3, 5), "vy": Fraction(4, 5)}
    assert [evaluate(e, point) for e in sys.equations] == [0, 0, 0]
    s3 = np.sqrt(3) / 2
    vals = SystemEvaluator(sys).residual([1, 0, 1, 0.5, s3])
    # u3 = (0, 1) is not at unit distance from (1/2, sqrt(3)/2); only the first two vanish
    assert abs(vals[0]) < 1e-15 and abs(vals[1]) < 1e-15


def test_flatness_eq1_literal():
    eq1 = flatness_eq1()
    assert len(eq1) == 8
    assert evaluate(eq1, {"x2": 2, "x3": 1, "y3": 0}) == 2


@pytest.mark.parametrize("x2,x3", [(1, 2), (Fraction(3, 7), Fraction(-5, 2)), (-4, 9), (0, 3)])
def test_flatness_eq1_on_the_axis(x2, x3):
    x2, x3 = Fraction(x2), Fraction(x3)
    assert evaluate(flatness_eq1(), {"x2": x2, "x3": x3, "y3": 0}) == x2 * x3**2 * (x3 - x2) ** 2


def test_flatness_eq1_divisible_by_x2():
    x2 = Polynomial.variable(FLAT_VARS, "x2")
    assert normal_form(flatness_eq1(), [x2], MonomialOrder.lex()).is_zero()
    quotient = Polynomial(FLAT_VARS, {(m[0] - 1,) + m[1:]: c for m, c in flatness_eq1().items()})
    assert quotient * x2 == flatness_eq1()
    assert quotient == flatness_factor()


def test_factorization_by_hand_elimination():
    # vx = x2/2 from the first two circles, vy^2 = 1 - x2^2/4, then square the third
    p = lambda s: parse(s, FLAT_VARS)
    lhs = p("x3^2 - x2*x3 + y3^2") ** 2
    rhs = p("4 - x2^2") * p("y3^2")
    assert p("x2") * (lhs - rhs) == flatness_eq1()


def test_verify_eq1_modes():
    fac = verify_eq1("factorization")
    assert fac.holds and fac.details["difference"] == "0"
    mem = verify_eq1("membership")
    assert mem.holds
    assert mem.details["basis_equals_eq1"]
    assert mem.details["cofactor_member"] is False
    with pytest.raises(ValueError):
        verify_eq1("bogus")


def test_unrelated_polynomial_not_in_locus():
    sys = shared_neighbor_system()
    basis = eliminate(sys.equations, {"vx", "vy"})
    assert not normal_form(parse("x2 + 1", SHARED_VARS), basis).is_zero()


def test_elimination_independent_of_inner_order_and_pair_selection():
    eqs = shared_neighbor_system().equations
    base = eliminate(eqs, {"vx", "vy"})
    assert eliminate(eqs, {"vx", "vy"}, inner="lex").generators == base.generators
    assert eliminate(eqs, {"vx", "vy"}, selection="fifo").generators == base.generators


def test_laman_audit_examples():
    assert laman_variable_audit(build_unit_system(graphs.complete_bipartite(3, 3))) == (9, 9, 0)
    assert laman_variable_audit(build_unit_system(graphs.complete_bipartite(4, 4))) == (13, 16, -3)
    assert laman_variable_audit(build_unit_system(graphs.path(2))) == (1, 1, 0)


def test_cm_distance_system():
    sys = cm_distance_system(graphs.complete_bipartite(3, 3))
    assert len(sys.vars) == 15
    assert len(sys.equations) == 6 + 9


def test_graph_json_round_trip_and_rejections(tmp_path):
    g = graphs.complete_bipartite(3, 3)
    path = tmp_path / "k33.json"
    path.write_text(json.dumps(g.to_json()))
    assert graphs.load_graph(str(path)) == g
    with pytest.raises(graphs.GraphFormatError, match="duplicate edge"):
        graphs.from_json({"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]})
    with pytest.raises(graphs.GraphFormatError, match="self-loop"):
        graphs.from_json({"vertices": ["a"], "edges": [["a", "a"]]})
    with pytest.raises(graphs.GraphFormatError, match="unknown vertex"):
        graphs.from_json({"vertices": ["a"], "edges": [["a", "b"]]})
    with pytest.raises(graphs.GraphFormatError):
        graphs.from_json('{"vertices": [1, 2], "edges": []}')
    with pytest.raises(graphs.GraphFormatError):
        graphs.from_json("not json")
    with pytest.raises(graphs.GraphFormatError):
        graphs.load_graph("builtin:nope")


def test_moser_embedding_is_unit_distance():
    emb = graphs.moser_embedding()
    g = graphs.moser_spindle()
    assert g.n == 7 and g.m == 11
    for a, b in g.edges:
        assert abs(np.hypot(emb[a][0] - emb[b][0], emb[a][1] - emb[b][1]) - 1) < 1e-14
    assert emb["b1"][1] == 0.0
