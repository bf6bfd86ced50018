import pytest

from conrank import exact as ex
from conrank.betti import BettiTable, herzog_kuhl, koszul_betti
from conrank.catalog import (candidate, compatible_candidates, dual_power_betti, koszul_residue,
                             matlis_dual_power)
from conrank.graded import GradedFreeModule, free_homology_window, hilbert_data
from conrank.graded import GradedFreeMap
from conrank.exact import monomials

GF = ex.GF(32003)


@pytest.mark.parametrize("t,strand", [(1, (1, 3, 3, 1)), (2, (3, 8, 6, 1)), (3, (6, 15, 10, 1)),
                                      (4, (10, 24, 15, 1))])
def test_dual_power_strands(t, strand):
    c = candidate(t, 1, 0, 2)
    assert c.strand == strand
    assert c.degrees == (0, 1, 2, t + 2)
    assert herzog_kuhl(c.degrees).betti == strand


def R_mod_power(t, n, hi):
    """R/m^t as the cokernel of the monomials of degree t."""
    mons = monomials(n, t)
    src = GradedFreeModule(n, [t] * len(mons), GF)
    tgt = GradedFreeModule(n, [0], GF)
    f = GradedFreeMap(src, tgt, [[{u: 1} for u in mons]])
    return free_homology_window(tgt, 0, hi, incoming=f)


@pytest.mark.parametrize("t", [1, 2, 3])
def test_dual_is_reversal_of_R_mod_power(t):
    n = 2
    B = koszul_betti(R_mod_power(t, n, t + n + 3))
    D = dual_power_betti(t, n)
    top = max(j for _, j in B.entries)
    rev = BettiTable({(n + 1 - i, top - j): b for (i, j), b in B.entries.items()})
    shift = min(j for _, j in rev.entries)
    rev = BettiTable({(i, j - shift): b for (i, j), b in rev.entries.items()})
    assert rev == D


def test_catalog_modules_are_artinian():
    for t in (1, 2, 3):
        W = matlis_dual_power(t, 2, 2, GF, pad=4)
        assert hilbert_data(W).artinian


def test_compatible_candidates_for_steiner_root():
    B = BettiTable.from_strand((24, 37, 15), 3)
    labels = [c.label for c in compatible_candidates(B, 2)]
    for q in range(1, 8):
        assert f"{q}x(1,3,3,1)" in labels
    for q in range(1, 4):
        assert f"{q}x(3,8,6,1)" in labels
    assert "1x(6,15,10,1)" in labels and "1x(10,24,15,1)" in labels
    assert "8x(1,3,3,1)" not in labels


def test_compatible_candidates_edge_cases():
    assert compatible_candidates(BettiTable.from_strand((1, 0, 0)), 2) == []
    labels = [c.label for c in compatible_candidates(BettiTable.from_strand((6, 8, 3), 2), 2)]
    assert "1x(1,3,3,1)" in labels


def test_residue_power_window():
    W = koszul_residue(3, 1, 3, GF)
    assert W.dim(1) == 3 and W.dim(2) == 0
    assert koszul_betti(koszul_residue(2, 0, 2, GF, pad=4)).strand(0, 4) == (2, 6, 6, 2)
