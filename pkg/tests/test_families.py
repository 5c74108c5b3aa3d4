"""Unit tests for the coupling families and the necessary-condition oracle."""

import math
import random
from fractions import Fraction

import pytest

from bibennett.bennett import BennettDesign, validate
from bibennett.families import (
    BiBennett,
    ExcludedBranchError,
    Loop,
    MuSet,
    NoRealFamilyError,
    SkewQuad,
    align_isometry,
    bar_tau_squared,
    coupled_pose,
    coupling_quartic,
    detect_trivial,
    extract_6r_loops,
    family_a,
    family_b,
    family_c,
    make_family_a,
    make_family_b,
    make_trivial,
    necessary_conditions,
    planar_bar_tau,
    solve_bar_tau,
)
from bibennett.limits import prismatic_limit_C

F = Fraction
DESIGN = validate(F(1, 2), F(1, 3), F(1))


def test_family_a_reference_design():
    mu = MuSet(F(37, 40), F(7, 8), F(1), F(1, 2))
    assert family_a(mu) == (F(1, 2), F(1, 3))


def test_family_a_no_real_solution():
    with pytest.raises(NoRealFamilyError):
        family_a(MuSet(F(1), F(1, 2), F(1, 3), F(1, 4)))
    # a vanishing sum combination lands on an excluded solved branch
    with pytest.raises(ExcludedBranchError):
        family_a(MuSet(F(1), F(2), F(3), F(4)))


def test_family_b_offsets():
    mu = family_b(F(2, 3), F(1, 2), DESIGN)
    assert mu.mu23 == F(2, 3) and mu.mu34 == F(1, 2)
    bib = make_family_b(F(2, 3), F(1, 2), DESIGN)
    # the two isogram side conditions hold exactly along the motion
    for tau in (F(1, 2), F(9, 10), F(3)):
        quad = bib.loop().quad(tau)
        s = quad.side_sq()
        assert s[0] == s[2] and s[1] == s[3]


def test_trivial_detection():
    assert detect_trivial(MuSet(F(-2, 3), F(-1, 2), F(2, 3), F(1, 2)))
    assert not detect_trivial(MuSet(F(2, 3), F(1, 2), F(2, 3), F(1, 2)))
    bib = make_trivial(F(2, 3), F(1, 2), DESIGN)
    assert bib.family == "TrivialLineSym"


def test_family_quad_sides_rigid_exactly():
    # The four anchor side lengths are motion invariants; the diagonals of
    # the anchor quad change with the drive, and the coupling instead keeps
    # the two tubes' quads congruent (checked in test_cross_quad_congruence).
    instances = [
        make_family_a(MuSet(F(37, 40), F(7, 8), F(1), F(1, 2))),
        make_family_b(F(2, 3), F(1, 2), DESIGN),
        family_c(DESIGN, F(2, 3), F(1, 4), 1),
    ]
    taus = [F(1, 3), F(1, 2), F(9, 10), F(2), F(-5, 4)]
    for bib in instances:
        base = None
        for tau in taus:
            sides = bib.loop().quad(tau).side_sq()
            if base is None:
                base = sides
            assert sides == base


def test_cross_quad_congruence():
    bib = family_c(DESIGN, F(2, 3), F(1, 4), 1)
    for tau in (F(1, 2), F(9, 10), F(2)):
        cp = coupled_pose(bib, tau)
        own = cp.quad.side_sq() + cp.quad.diag_sq()
        bar = cp.bar_quad.side_sq() + cp.bar_quad.diag_sq()
        for a, b in zip(own, bar):
            assert abs(float(a) - float(b)) < 1e-10 * (1 + abs(float(a)))


def test_family_c_companion_squared_reference():
    q = coupling_quartic(DESIGN, F(2, 3), F(1, 4))
    assert bar_tau_squared(q, F(9, 10)) == F(546307, 357245)
    value = -math.sqrt(195165444215) / 357245
    roots = solve_bar_tau(q, F(9, 10))
    assert min(abs(r - value) for r in roots) < 1e-12


def test_family_c_zero_offset_companion():
    design = validate(F(1, 2), F(1, 3), F(0))
    q = coupling_quartic(design, F(2, 3), F(1, 2))
    assert bar_tau_squared(q, F(3, 4)) == F(6319, 3281)


def test_coupled_pose_branch_sign():
    bib = family_c(DESIGN, F(2, 3), F(1, 4), 1, branch=-1)
    cp = coupled_pose(bib, F(9, 10))
    assert cp.tau_bar < 0
    assert abs(cp.tau_bar + 1.23662) < 1e-4
    plus = coupled_pose(family_c(DESIGN, F(2, 3), F(1, 4), 1, branch=1),
                        F(9, 10))
    assert plus.tau_bar > 0


def test_planar_companion_reference():
    anti = prismatic_limit_C("anti", F(1, 2), F(1, 3), F(2, 3), F(1, 2), 1)
    roots = planar_bar_tau(anti.bibennett, F(3, 4))
    assert F(3, 4) in roots
    para = prismatic_limit_C("para", F(2, 3), F(3, 4), F(1, 3), F(1, 2), 1,
                             branch=-1)
    value = -math.sqrt(15281) / 413
    roots = planar_bar_tau(para.bibennett, F(3, 4))
    assert min(abs(float(r) - value) for r in roots) < 1e-10


def test_align_isometry_roundtrip():
    bib = family_c(DESIGN, F(2, 3), F(1, 4), 1)
    cp = coupled_pose(bib, F(9, 10))
    delta = cp.delta
    for label in ((1, 4), (1, 2), (2, 3), (3, 4)):
        image = delta.apply_point(cp.bar_quad[label])
        assert max(abs(float(a) - float(b))
                   for a, b in zip(image, cp.quad[label])) < 1e-12


def test_necessary_conditions_vanish_for_families():
    couplings = [
        make_family_a(MuSet(F(37, 40), F(7, 8), F(1), F(1, 2))),
        make_family_b(F(2, 3), F(1, 2), DESIGN),
        family_c(DESIGN, F(2, 3), F(1, 4), 1),
    ]
    for bib in couplings:
        report = necessary_conditions(bib.loop(), bib.bar_loop())
        assert report.all_zero()
        assert report.degenerate_resultant


def test_necessary_conditions_reject_perturbation():
    mu = MuSet(F(2, 3), F(1, 4), F(2, 3), F(1, 4))
    bad_bar = MuSet(F(1, 4), F(2, 3) + F(1, 100), F(1, 4), F(2, 3))
    loop = Loop(DESIGN, mu)
    bar = Loop(DESIGN, bad_bar)
    report = necessary_conditions(loop, bar)
    assert not report.all_zero()


def test_six_joint_loops():
    bib = family_c(DESIGN, F(2, 3), F(1, 4), 1)
    loops = extract_6r_loops(bib, F(9, 10))
    assert len(loops) == 4
    for axes in loops:
        assert len(axes) == 6
