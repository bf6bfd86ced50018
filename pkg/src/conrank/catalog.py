"""Artinian modules with pure resolutions: residue fields and duals of R/m^t."""
from dataclasses import dataclass
from functools import lru_cache

from . import exact as ex
from .betti import BettiTable, herzog_kuhl, koszul_betti, degree_sequence
from .errors import PurityCheckFailed
from .graded import GradedModuleWindow, power


def matlis_dual_power(t, m, n, field=ex.QQ, pad=1):
    """Dual of R/m^t placed in degrees m..m+t-1, as a window with ``pad`` zero degrees on top.

    The piece of degree m+e has the dual basis of monomials of degree t-1-e and
    x_i acts by contraction u* -> (u/x_i)*.
    """
    if t < 1:
        raise ValueError("t must be positive")
    lo, hi = m, m + t - 1 + pad
    dims = []
    for d in range(lo, hi + 1):
        e = d - m
        dims.append(ex.num_monomials(n, t - 1 - e) if e <= t - 1 else 0)
    acts = []
    for i in range(n + 1):
        fam = []
        for d in range(lo, hi):
            e = d - m
            src_deg = t - 1 - e
            rows, cols = dims[d + 1 - lo], dims[d - lo]
            flat = [0] * (rows * cols)
            if rows and cols:
                dm = ex.div_map(n, src_deg, i)
                for c, r in enumerate(dm):
                    if r >= 0:
                        flat[r * cols + c] = 1
            fam.append(field.matrix(rows, cols, flat) if flat else field.zeros(rows, cols))
        acts.append(tuple(fam))
    return GradedModuleWindow(n, lo, hi, tuple(dims), tuple(acts), field, check=False)


def koszul_residue(q, m, n, field=ex.QQ, pad=1):
    """k(-m)^q."""
    W = matlis_dual_power(1, m, n, field, pad)
    return power(W, q) if q > 1 else W


@lru_cache(maxsize=None)
def dual_power_betti(t, n):
    """Betti table of the dual of R/m^t, computed from its Koszul complex (m = 0)."""
    W = matlis_dual_power(t, 0, n, ex.GF(32003), pad=n + 2)
    B = koszul_betti(W)
    dseq = degree_sequence(B)
    if dseq is None:
        raise PurityCheckFailed(f"dual of R/m^{t} is not pure")
    hk = herzog_kuhl(dseq)
    strand = tuple(B[(i, j)] for i, j in enumerate(dseq))
    if any(b * hk.betti[0] != h * strand[0] for b, h in zip(strand, hk.betti)):
        raise PurityCheckFailed("Betti numbers are not a multiple of the pure solution")
    return B


@dataclass
class ArtinianCandidate:
    t: int
    multiplicity: int
    m: int
    n: int
    degrees: tuple
    betti: BettiTable

    @property
    def strand(self):
        return tuple(self.betti[(i, j)] for i, j in enumerate(self.degrees))

    @property
    def label(self):
        s = ",".join(str(b // self.multiplicity) for b in self.strand)
        return f"{self.multiplicity}x({s})"

    def window(self, field=ex.QQ, hi=None):
        W = matlis_dual_power(self.t, self.m, self.n, field, pad=1)
        if self.multiplicity > 1:
            W = power(W, self.multiplicity)
        if hi is not None and hi > W.hi:
            from .graded import extend_above_zero
            W = extend_above_zero(W, hi)
        return W


def candidate(t, q, m, n):
    B = dual_power_betti(t, n)
    dseq = tuple(j + m for _, j in sorted(B.entries))
    table = BettiTable({(i, j + m): q * b for (i, j), b in B.entries.items()})
    return ArtinianCandidate(t, q, m, n, dseq, table)


def compatible_candidates(B, n, max_multiplicity=None, rank=None, min_t=1, t_max=None):
    """Pure Artinian modules G = D(t)^q that can be subtracted from the linear module B.

    Needs beta_0(G) < beta_0(E), beta_1(G) < beta_1(E) and, with a = beta_0(E)-beta_0(G),
    b = beta_1(E)-beta_1(G), a constant rank rho = a - rank with 0 < rho <= b.
    ``rank`` defaults to the alternating sum of B.
    """
    m = B.m
    if m is None:
        return []
    a0, a1 = B[(0, m)], B[(1, m + 1)]
    r = B.alternating_sum() if rank is None else rank
    out = []
    t = min_t
    while t_max is None or t <= t_max:
        base = candidate(t, 1, m, n)
        g0, g1 = base.strand[0], base.strand[1]
        if g0 >= a0 or g1 >= a1:
            break
        q = 1
        while max_multiplicity is None or q <= max_multiplicity:
            a, b = a0 - q * g0, a1 - q * g1
            if a <= 0 or b <= 0:
                break
            rho = a - r
            if rho <= 0 or rho > b:
                break
            out.append(candidate(t, q, m, n))
            q += 1
        t += 1
    return out
