import random

import pytest

from conrank import exact as ex
from conrank.betti import koszul_betti
from conrank.catalog import candidate, compatible_candidates, koszul_residue
from conrank.errors import MuNotSurjective, NoSurjectionFound
from conrank.graded import GradedFreeModule, free_module_window, truncate, zero_window
from conrank.reduction import hom_degree_zero, linear_part_cokernel, reduce, sample_reduction

GF = ex.GF(32003)


def R_trunc(n, s, hi, field=GF):
    return truncate(free_module_window(GradedFreeModule(n, [0], field), 0, hi), s)


def test_hom_into_residue_field_has_dim_of_generators():
    E = R_trunc(2, 2, 6)
    G = koszul_residue(2, 2, 2, GF)
    # a map to k(-2)^2 is any linear map on E_2
    assert hom_degree_zero(E, G).dim == 2 * 6


def test_hom_elements_commute_with_actions():
    E = R_trunc(2, 3, 8)
    G = candidate(2, 1, 3, 2).window(GF, hi=8)
    mu = hom_degree_zero(E, G).random_element(random.Random(0))

    def at(d):
        return mu.get(d, GF.zeros(G.dim(d), E.dim(d)))

    for d in range(E.lo, E.hi):
        for i in range(3):
            assert ex.matmul(at(d + 1), E.action(i, d)) == ex.matmul(G.action(i, d), at(d))


def test_zero_map_is_rejected():
    E = R_trunc(2, 2, 6)
    G = koszul_residue(1, 2, 2, GF)
    mu = {d: GF.zeros(G.dim(d) if d <= G.hi else 0, E.dim(d)) for d in E.degrees}
    with pytest.raises(MuNotSurjective):
        reduce(E, G, mu)


def test_no_surjection_when_hom_vanishes():
    E = R_trunc(2, 2, 6)
    G = koszul_residue(1, 4, 2, GF)  # lives in degree 4, E is generated in degree 2
    with pytest.raises(NoSurjectionFound):
        sample_reduction(E, G, attempts=3)


@pytest.mark.parametrize("s,label", [(2, "1x(1,3,3,1)"), (3, "1x(3,8,6,1)"), (3, "2x(1,3,3,1)")])
def test_subtraction_of_betti_numbers(s, label):
    E = R_trunc(2, s, s + 6)
    B = koszul_betti(E, i_max=2)
    c = next(c for c in compatible_candidates(B, 2) if c.label == label)
    res = sample_reduction(E, c.window(GF, hi=E.hi), seed=1)
    d = res.diagnostics
    assert d.mu1_surjective and d.mu2_surjective
    Bf = koszul_betti(res.F, i_max=1)
    assert Bf[(0, s)] == B[(0, s)] - c.strand[0]
    assert Bf[(1, s + 1)] == B[(1, s + 1)] - c.strand[1]
    assert d.linear_presentation and res.has_pencil
    assert res.pencil.shape == (Bf[(0, s)], Bf[(1, s + 1)])


def test_line_bundle_kernel_presentation():
    # R_{>=2} on P^2 modulo the dual of R/m: a 5 x 5 linear presentation with no quadrics
    E = R_trunc(2, 2, 7, ex.QQ)
    G = candidate(1, 1, 2, 2).window(ex.QQ, hi=7)
    res = sample_reduction(E, G, seed=0)
    assert list(res.presentation.F0.twists) == [2] * 5
    assert list(res.presentation.F1.twists) == [3] * 5


def test_mu1_failure_is_reported():
    E = R_trunc(3, 1, 5)
    G = koszul_residue(1, 1, 3, GF)
    res = sample_reduction(E, G, attempts=2, seed=0)
    assert not res.diagnostics.mu1_surjective
    assert not res.has_pencil


def test_linear_part_cokernel_reproduces_linear_kernel():
    E = R_trunc(2, 3, 9)
    G = candidate(1, 1, 3, 2).window(GF, hi=9)
    res = sample_reduction(E, G, seed=2)
    W = linear_part_cokernel(res.pencil, 3, 9)
    assert W.dims == res.F.dims
