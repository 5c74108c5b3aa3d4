"""Unit tests for the vertex and coupling certificates."""

import random
from fractions import Fraction

import pytest

from bibennett.bennett import validate
from bibennett.families import (
    MuSet,
    NotIsometricError,
    family_c,
    make_family_a,
    make_family_b,
)
from bibennett.properties import (
    deltoidal_certificate,
    deltoidal_numerators,
    halfturn_certificate,
    indicatrix_relation,
    isogonal_certificate,
)

F = Fraction
DESIGN = validate(F(1, 2), F(1, 3), F(1))
FAMILY_A = make_family_a(MuSet(F(37, 40), F(7, 8), F(1), F(1, 2)))
FAMILY_B = make_family_b(F(2, 3), F(1, 2), DESIGN)
FAMILY_C = family_c(DESIGN, F(2, 3), F(1, 4), 1)


def test_family_a_vertices_isogonal():
    report = isogonal_certificate(FAMILY_A, F(9, 10))
    assert report.verdict, report.lines()


def test_family_a_vertices_not_deltoidal():
    report = deltoidal_certificate(FAMILY_A, F(9, 10))
    assert not report.verdict


def test_family_b_vertices_deltoidal():
    report = deltoidal_certificate(FAMILY_B, F(9, 10))
    assert report.verdict, report.lines()


def test_family_b_vertices_not_isogonal():
    report = isogonal_certificate(FAMILY_B, F(9, 10))
    assert not report.verdict


def test_deltoidal_numerators_vanish_for_b():
    mu = FAMILY_B.mu
    values = deltoidal_numerators(F(1, 2), F(1, 3), mu.mu14, mu.mu12,
                                  mu.mu23, mu.mu34)
    assert all(v == 0 for v in values)


def test_halfturn_certificate_all_branches():
    for s in (1, -1):
        for branch in (1, -1):
            bib = family_c(DESIGN, F(2, 3), F(1, 4), s, branch=branch)
            report = halfturn_certificate(bib, F(9, 10))
            assert report.verdict, (s, branch, report.lines())


def test_halfturn_certificate_rejects_wrong_companion():
    with pytest.raises(NotIsometricError):
        halfturn_certificate(FAMILY_C, F(9, 10), tau_bar=0.5)


def test_indicatrix_relation_family_c():
    report = indicatrix_relation(FAMILY_C, F(9, 10))
    assert report.verdict, report.lines()


def test_certificates_on_random_instances():
    rng = random.Random(5)
    count = 0
    while count < 5:
        a1 = F(rng.randint(1, 9), rng.randint(1, 9))
        a2 = F(rng.randint(1, 9), rng.randint(1, 9))
        if a1 == a2:
            continue
        design = validate(a1, a2, F(1))
        mu23 = F(rng.randint(1, 9), rng.randint(1, 9))
        mu34 = F(rng.randint(1, 9), rng.randint(1, 9))
        bib = make_family_b(mu23, mu34, design)
        assert deltoidal_certificate(bib, F(9, 10)).verdict
        count += 1
