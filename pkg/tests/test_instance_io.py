import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from farpoint.errors import InstanceError
from farpoint.geometry import CircumscribedFrame, HPolytope
from farpoint.instance_io import (Instance, default_rho, dump_instance, load_instance,
                                  parse_instance)
from farpoint.config import SolverConfig

SQUARE = """dimension: 2
A: [[1, 0], [0, 1], [-1, 0], [0, -1]]
b: [-1, -1, 0, 0]
C: [0.5, 0.5]
R_circ: 0.7071067811865476
C0: [0.3, 0.4]
rho: 2.0
"""


def test_parse_square():
    inst = parse_instance(SQUARE)
    assert inst.P.num_facets == 4 and inst.frame.rho == 2.0
    assert inst.solver == SolverConfig() and inst.max_generations is None


def test_round_trip_is_exact():
    inst = parse_instance(SQUARE + "solver: {tol_obj: 1.0e-11}\nmax_generations: 40\n")
    again = parse_instance(dump_instance(inst))
    np.testing.assert_array_equal(again.P.normals, inst.P.normals)
    np.testing.assert_array_equal(again.P.offsets, inst.P.offsets)
    assert again.frame.R_circ == inst.frame.R_circ and again.frame.rho == inst.frame.rho
    assert again.solver.tol_obj == 1e-11 and again.max_generations == 40
    assert dump_instance(again) == dump_instance(inst)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=4, max_size=4),
       st.floats(1e-3, 1e3))
def test_round_trip_random_floats(vals, R):
    P = HPolytope(np.array([[1.0, 0.0], [0.0, 1.0]]) + 1e-3, np.array(vals[:2]))
    fr = CircumscribedFrame(np.array(vals[2:]), R, np.array(vals[2:]) + 1.0, 4 * R + 10)
    inst = Instance(P, fr, SolverConfig())
    back = parse_instance(dump_instance(inst))
    np.testing.assert_array_equal(back.P.offsets, P.offsets)
    np.testing.assert_array_equal(back.frame.C, fr.C)
    assert back.frame.R_circ == R


def test_default_rho():
    inst = parse_instance(SQUARE.replace("rho: 2.0\n", ""))
    assert inst.frame.rho == pytest.approx(default_rho([0.5, 0.5], np.sqrt(0.5), [0.3, 0.4]))


@pytest.mark.parametrize("edit, field, line", [
    (lambda t: t.replace("b: [-1, -1, 0, 0]\n", ""), "b", None),
    (lambda t: t.replace("rho: 2.0", "rho: abc"), "rho", 7),
    (lambda t: t.replace("C0: [0.3, 0.4]", "C0: [0.3, 0.4, 1]"), "C0", 6),
    (lambda t: t.replace("b: [-1, -1, 0, 0]", "b: [-1, -1, 0]"), "b", 3),
    (lambda t: t + "colour: red\n", "colour", 8),
    (lambda t: t.replace("dimension: 2", "dimension: two"), "dimension", 1),
    (lambda t: t + "solver: {tol_obj: -1}\n", "solver", 8),
    (lambda t: t.replace("A: [[1, 0],", "A: [[1, x],"), "A", 2),
])
def test_diagnostics(edit, field, line):
    with pytest.raises(InstanceError) as info:
        parse_instance(edit(SQUARE))
    assert info.value.field == field
    assert info.value.line == line
    assert field in str(info.value)


def test_malformed_yaml_and_missing_file(tmp_path):
    with pytest.raises(InstanceError):
        parse_instance("dimension: [1, 2\n")
    with pytest.raises(InstanceError):
        parse_instance("- 1\n- 2\n")
    with pytest.raises(InstanceError):
        load_instance(tmp_path / "nope.yaml")
    p = tmp_path / "sq.yaml"
    p.write_text(SQUARE)
    assert load_instance(p).P.dimension == 2
