"""Action layer: composed tables, weighted unitaries, jacobians, tilings."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from actinv import (
    ActionError,
    ActionSpace,
    FiniteAbelianGroup,
    FreenessError,
    OrbitError,
    Subgroup,
    coset_section,
    jacobian,
    tiling_sets,
    translate,
    validate_action,
)

from conftest import random_function


def z2_weighted():
    g = FiniteAbelianGroup([2])
    return g, ActionSpace(g, 2, [[1, 0]], weights=[1.0, 4.0])


def test_translate_golden_two_points():
    g, act = z2_weighted()
    f = np.array([1.0, 0.0])
    out = translate(act, (1,), f)
    # the shifted atom picks up the square root of the weight ratio
    assert_allclose(out, [0.0, 0.5])
    assert jacobian(act, (1,), 0) == pytest.approx(4.0)
    assert jacobian(act, (1,), 1) == pytest.approx(0.25)
    assert act.norm(out) == pytest.approx(act.norm(f))


def test_inner_product_weighted():
    g, act = z2_weighted()
    f = np.array([1.0, 1.0], dtype=complex)
    h = np.array([1.0, 1j])
    assert act.inner(f, h) == pytest.approx(1.0 - 4.0j)
    assert act.norm(h) == pytest.approx(np.sqrt(5.0))


def test_translate_is_unitary(scn):
    rng = np.random.default_rng(11)
    f = random_function(scn, rng)
    h = random_function(scn, rng)
    for tau in scn.group.elements:
        mf = translate(scn.action, tau, f)
        mh = translate(scn.action, tau, h)
        assert scn.action.norm(mf) == pytest.approx(scn.action.norm(f), rel=1e-12)
        assert scn.action.inner(mf, mh) == pytest.approx(
            scn.action.inner(f, h), abs=1e-10
        )


def test_translate_representation_law(scn):
    rng = np.random.default_rng(7)
    f = random_function(scn, rng)
    els = scn.group.elements
    for a in els[:4]:
        for b in els[-4:]:
            lhs = translate(scn.action, a, translate(scn.action, b, f))
            rhs = translate(scn.action, scn.group.add(a, b), f)
            assert_allclose(lhs, rhs, atol=1e-12)
    # zero acts as the identity
    assert_allclose(translate(scn.action, scn.group.zero, f), f)


def test_translate_columnwise(scn):
    rng = np.random.default_rng(5)
    mat = np.column_stack([random_function(scn, rng) for _ in range(3)])
    tau = scn.group.elements[1]
    moved = translate(scn.action, tau, mat)
    for j in range(3):
        assert_allclose(moved[:, j], translate(scn.action, tau, mat[:, j]))
    with pytest.raises(ValueError):
        translate(scn.action, tau, mat[:-1])


def test_jacobian_cocycle(scn):
    act = scn.action
    for a in scn.group.elements[:3]:
        for b in scn.group.elements[:3]:
            lhs = jacobian(act, scn.group.add(a, b))
            rhs = jacobian(act, a)[act.sigma(b)] * jacobian(act, b)
            assert_allclose(lhs, rhs, rtol=1e-12)
    assert_allclose(jacobian(act, scn.group.zero), np.ones(act.n_points))


def test_validate_action_reports_orbits():
    g = FiniteAbelianGroup([12])
    act = ActionSpace.regular(g, orbits=2)
    rep = validate_action(act)
    assert rep.orbit_count == 2
    assert rep.orbits[0] == tuple(range(12))
    assert rep.orbits[1] == tuple(range(12, 24))
    assert rep.as_dict()["free"] is True


def test_validate_action_detects_fixed_points():
    g = FiniteAbelianGroup([4])
    # generator of order two: (2,) then acts as the identity
    act = ActionSpace(g, 4, [[1, 0, 3, 2]])
    with pytest.raises(FreenessError):
        validate_action(act)


def test_validate_action_detects_trivial_action():
    g = FiniteAbelianGroup([2])
    act = ActionSpace(g, 2, [[0, 1]])
    with pytest.raises(FreenessError):
        validate_action(act)


def test_validate_action_detects_bad_point_count():
    g = FiniteAbelianGroup([4])
    # a 4-cycle and a 2-cycle: consistent table, but 6 points and order 4
    act = ActionSpace(g, 6, [[1, 2, 3, 0, 5, 4]])
    with pytest.raises(OrbitError):
        validate_action(act)


def test_validate_action_detects_broken_group_law():
    g = FiniteAbelianGroup([4])
    # two 3-cycles: the fourth power is not the identity
    act = ActionSpace(g, 6, [[1, 2, 0, 4, 5, 3]])
    with pytest.raises(ActionError):
        validate_action(act)


def test_action_input_validation():
    g = FiniteAbelianGroup([4])
    with pytest.raises(ActionError):
        ActionSpace(g, 4, [[0, 0, 1, 2]])
    with pytest.raises(ActionError):
        ActionSpace(g, 4, [])
    with pytest.raises(ValueError):
        ActionSpace(g, 4, [[1, 2, 3, 0]], weights=[1.0, -1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        ActionSpace(g, 4, [[1, 2, 3, 0]], weights=[1.0, 1.0])


# -- tilings -------------------------------------------------------------------


def test_tiling_golden_z6():
    g = FiniteAbelianGroup([6])
    base = Subgroup(g, [(3,)])
    act = ActionSpace.regular(g)
    sec = coset_section(g, base)
    assert sec.representatives == ((0,), (1,), (2,))
    t = tiling_sets(act, base, sec)
    assert t.orbit_reps == (0,)
    assert t.tiles == (0, 5, 4)
    assert t.tile_position[5] == 1
    assert t.rep_position[0] == 0


def test_tiling_partitions(scn):
    t = scn.tiling
    n = scn.action.n_points
    covered = set()
    for gam in scn.base.elements:
        covered.update(int(v) for v in scn.action.sigma(gam)[list(t.tiles)])
    assert covered == set(range(n))
    covered = set()
    for tau in scn.group.elements:
        covered.update(int(v) for v in scn.action.sigma(tau)[list(t.orbit_reps)])
    assert covered == set(range(n))
    assert len(t.tiles) * scn.base.order == n
    assert len(t.orbit_reps) * scn.group.order == n


def test_tiling_transversal_major_order(scn):
    t = scn.tiling
    c = len(t.orbit_reps)
    for j, a in enumerate(scn.transversal.representatives):
        row = scn.action.sigma(scn.group.neg(a))
        for ci, x in enumerate(t.orbit_reps):
            assert t.tiles[j * c + ci] == row[x]


def test_tiling_rejects_wrong_transversal():
    g = FiniteAbelianGroup([6])
    base = Subgroup(g, [(3,)])
    other = coset_section(g, Subgroup(g, [(2,)]))
    with pytest.raises(ValueError):
        tiling_sets(ActionSpace.regular(g), base, other)
