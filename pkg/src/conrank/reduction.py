"""Kernels of maps from a linear module onto an Artinian module, and their linear parts."""
import random
from dataclasses import dataclass, field as dc_field

from . import exact as ex
from .betti import koszul_differential
from .errors import MuNotSurjective, NoSurjectionFound, NonLinearInput, WindowMismatch
from .graded import (GradedFreeMap, GradedFreeModule, GradedModuleWindow, extend_above_zero,
                     window_from_presentation)
from .pencil import LinearPencil
from .resolution import evaluation_matrix, minimal_presentation


@dataclass
class HomSpace:
    """Basis of Hom(E, G)_0; each element maps degree d to a dim G_d x dim E_d matrix."""

    E: GradedModuleWindow
    G: GradedModuleWindow
    degrees: list
    basis: list

    @property
    def dim(self):
        return len(self.basis)

    def combine(self, coeffs):
        F = self.E.field
        out = {}
        for d in self.degrees:
            acc = F.zeros(self.G.dim(d), self.E.dim(d))
            for c, b in zip(coeffs, self.basis):
                if c != 0:
                    acc = acc + b[d] * F(c)
            out[d] = acc
        return out

    def random_element(self, rng, lo=-3, hi=3):
        F = self.E.field
        return self.combine([F.random(rng, lo, hi) for _ in self.basis])


def _gdim(G, d):
    if d < G.lo:
        return 0
    if d > G.hi:
        if G.dims[-1]:
            raise WindowMismatch(f"target is unknown in degree {d}")
        return 0
    return G.dim(d)


def _gaction(G, i, d):
    if d < G.lo or d + 1 > G.hi:
        return G.field.zeros(_gdim(G, d + 1), _gdim(G, d))
    return G.action(i, d)


def hom_degree_zero(E, G):
    """Degree-preserving module maps E -> G on the window of E."""
    if E.n != G.n or E.field != G.field:
        raise WindowMismatch("modules live over different rings")
    F = E.field
    n = E.n
    for d in G.support():
        if d > E.hi:
            raise WindowMismatch(f"target is nonzero in degree {d} beyond the source window")
    degs = [d for d in E.degrees if E.dim(d) and _gdim(G, d)]
    offs, tot = {}, 0
    for d in degs:
        offs[d] = tot
        tot += _gdim(G, d) * E.dim(d)
    rows = []
    for d in range(E.lo, E.hi):
        if d not in offs and d + 1 not in offs:
            continue
        eg0, eg1 = _gdim(G, d), _gdim(G, d + 1)
        ed0, ed1 = E.dim(d), E.dim(d + 1)
        for i in range(n + 1):
            XG = ex.entries(_gaction(G, i, d))
            XE = ex.entries(E.action(i, d))
            for p in range(eg1):
                for c in range(ed0):
                    row = {}
                    if d in offs:
                        for r in range(eg0):
                            x = XG[p * eg0 + r]
                            if x != 0:
                                k = offs[d] + r * ed0 + c
                                row[k] = row.get(k, 0) + x
                    if d + 1 in offs:
                        for s in range(ed1):
                            x = XE[s * ed0 + c]
                            if x != 0:
                                k = offs[d + 1] + p * ed1 + s
                                row[k] = row.get(k, 0) - x
                    if row:
                        rows.append(row)
    flat = [F(0)] * (len(rows) * tot)
    for r, row in enumerate(rows):
        for k, x in row.items():
            flat[r * tot + k] = F(x)
    M = F.matrix(len(rows), tot, flat) if flat else F.zeros(len(rows), tot)
    K = ex.kernel_basis(M)
    Ke = ex.entries(K)
    kk = K.ncols()
    basis = []
    for j in range(kk):
        el = {}
        for d in degs:
            g, e = _gdim(G, d), E.dim(d)
            vals = [Ke[(offs[d] + t) * kk + j] for t in range(g * e)]
            el[d] = F.matrix(g, e, vals)
        basis.append(el)
    return HomSpace(E, G, degs, basis)


@dataclass
class ReductionDiagnostics:
    mu_surjective: bool
    mu1_surjective: bool
    mu2_surjective: bool
    tor_corank: dict
    coker_nu2_artinian: bool
    nu2_coker_dims: dict
    linear_presentation: bool
    betti_subtraction_ok: bool

    def to_json(self):
        return {"mu_surjective": self.mu_surjective, "mu1_surjective": self.mu1_surjective,
                "mu2_surjective": self.mu2_surjective,
                "tor_corank": {str(k): v for k, v in self.tor_corank.items()},
                "coker_nu2_artinian": self.coker_nu2_artinian,
                "nu2_coker_dims": {str(k): v for k, v in self.nu2_coker_dims.items()},
                "linear_presentation": self.linear_presentation,
                "betti_subtraction_ok": self.betti_subtraction_ok}

    def score(self):
        return (self.mu1_surjective, self.mu2_surjective or self.coker_nu2_artinian,
                self.coker_nu2_artinian, self.mu2_surjective)


@dataclass
class ReductionResult:
    E: GradedModuleWindow
    G: GradedModuleWindow
    mu: dict
    F: GradedModuleWindow
    presentation: object
    pencil: LinearPencil
    diagnostics: ReductionDiagnostics
    m: int

    @property
    def has_pencil(self):
        d = self.diagnostics
        return d.mu1_surjective and d.coker_nu2_artinian

    @property
    def pencil_rank(self):
        return None


def kernel_window(E, mu):
    """The window of ker(mu), with actions restricted from E."""
    F = E.field
    data = {}
    for d in E.degrees:
        M = mu.get(d)
        if M is not None and M.nrows():
            data[d] = ex.kernel(M)
        else:
            data[d] = (None, list(range(E.dim(d))))
    dims = tuple(len(data[d][1]) for d in E.degrees)
    acts = []
    for i in range(E.n + 1):
        fam = []
        for d in range(E.lo, E.hi):
            Z0, _ = data[d]
            Z1, sel1 = data[d + 1]
            X = E.action(i, d)
            Y = ex.matmul(X, Z0) if Z0 is not None else X
            fam.append(ex.submatrix(Y, sel1, None) if Z1 is not None else Y)
        acts.append(tuple(fam))
    return GradedModuleWindow(E.n, E.lo, E.hi, dims, tuple(acts), F, check=False)


def _tensor_id(M, k, F):
    """M (x) id_k with blocks indexed by the second factor."""
    r, c = ex.shape(M)
    e = ex.entries(M)
    flat = [F(0)] * (r * k * c * k)
    C = c * k
    for b in range(k):
        for i in range(r):
            base = (b * r + i) * C + b * c
            flat[base:base + c] = e[i * c:(i + 1) * c]
    return F.matrix(r * k, c * k, flat) if flat else F.zeros(r * k, c * k)


def tor_surjectivity(E, G, mu_m, m, i):
    """Rank deficit of Tor_i(E)_{m+i} -> Tor_i(G)_{m+i}."""
    from math import comb
    F = E.field
    ZE = ex.kernel_basis(koszul_differential(E, m, i))
    ZG = ex.kernel_basis(koszul_differential(G, m, i))
    T = _tensor_id(mu_m, comb(E.n + 1, i), F)
    img = ex.matmul(T, ZE)
    return ZG.ncols() - ex.rank(img)


def reduce(E, G, mu, check_linear=False):
    """Kernel of a surjection mu: E -> G together with its linear presentation part."""
    F = E.field
    n = E.n
    m = E.lo
    while m <= E.hi and E.dim(m) == 0:
        m += 1
    G = extend_above_zero(G, E.hi) if G.hi < E.hi else G
    for d in E.degrees:
        g = _gdim(G, d)
        M = mu.get(d)
        if g and (M is None or ex.rank(M) != g):
            raise MuNotSurjective(f"mu is not surjective in degree {d}")
    if check_linear:
        from .betti import koszul_betti
        if not koszul_betti(E, i_max=1).is_linear():
            raise NonLinearInput("source is not linearly presented")
    Fw = kernel_window(E, mu)
    pres = minimal_presentation(Fw)
    mats = pres.linear_part()
    pencil = LinearPencil(tuple(mats), F)
    a = sum(1 for t in pres.F0.twists if t == m)
    b = pencil.cols
    mu_m = mu.get(m, F.zeros(0, E.dim(m)))
    cor = {i: tor_surjectivity(E, G, mu_m, m, i) for i in (1, 2) if i <= n + 1}
    mu1 = cor.get(1, 0) == 0
    mu2 = cor.get(2, 0) == 0
    # N = ker(coker A -> F); N_d = dim ker(eps^(m)_d) - rank A_d
    A = pencil_map(pencil, m)
    lin_tgt = A.target
    ndims = {}
    for d in range(m + 2, Fw.hi + 1):
        ev = evaluation_matrix(pres, d)
        cols = lin_tgt.dim(d)
        epsm = ex.submatrix(ev, None, range(cols))
        ndims[d] = cols - ex.rank(epsm) - ex.rank(A.matrix_at(d))
    art = bool(ndims) and ndims[max(ndims)] == 0
    linear = pres.is_linear()
    alpha0 = E.dim(m)
    ok = a == alpha0 - _gdim(G, m) if mu1 else True
    diag = ReductionDiagnostics(True, mu1, mu2, cor, art, ndims, linear, ok)
    pencil.provenance = {"construction": "kernel", "m": m, "shape": [a, b]}
    return ReductionResult(E, G, mu, Fw, pres, pencil, diag, m)


def pencil_map(pencil, m):
    """The free map R(-m-1)^b -> R(-m)^a given by a linear pencil."""
    F, n = pencil.field, pencil.n
    a, b = pencil.shape
    units = [tuple(1 if v == i else 0 for v in range(n + 1)) for i in range(n + 1)]
    ent = [[{units[i]: pencil.coeffs[i][k, r] for i in range(n + 1) if pencil.coeffs[i][k, r] != 0}
            for r in range(b)] for k in range(a)]
    return GradedFreeMap(GradedFreeModule(n, [m + 1] * b, F), GradedFreeModule(n, [m] * a, F), ent, check=False)


def linear_part_cokernel(pencil, m, hi):
    """Window of coker(A) for the linear part A, generated in degree m."""
    return window_from_presentation(pencil_map(pencil, m), m, hi)


def _mu2_possible(E, G):
    m = E.lo
    while E.dim(m) == 0:
        m += 1
    from math import comb
    ZE = ex.kernel_basis(koszul_differential(E, m, 2)).ncols()
    ZG = ex.kernel_basis(koszul_differential(G, m, 2)).ncols()
    return ZG <= ZE


def sample_reduction(E, G, attempts=10, seed=0, hom=None, lo=-3, hi=3):
    """Try random elements of Hom(E, G)_0 and keep the best reduction found.

    Stops at the first attempt whose diagnostics are as good as possible.
    """
    hom = hom if hom is not None else hom_degree_zero(E, G)
    if hom.dim == 0:
        raise NoSurjectionFound("Hom(E, G)_0 is zero")
    rng = random.Random(seed)
    best = None
    for _ in range(attempts):
        mu = hom.random_element(rng, lo, hi)
        try:
            res = reduce(E, G, mu)
        except MuNotSurjective:
            continue
        if best is None or res.diagnostics.score() > best.diagnostics.score():
            best = res
        if best.diagnostics.score() == (True, True, True, True):
            break
        d = best.diagnostics
        if d.mu1_surjective and (d.coker_nu2_artinian or not _mu2_possible(E, G)):
            break
    if best is None:
        raise NoSurjectionFound(f"no surjective map in {attempts} attempts")
    return best
