"""Minimal presentations, free resolutions, Ext and local cohomology windows."""
from dataclasses import dataclass

from . import exact as ex
from .betti import BettiTable
from .errors import InsufficientChain, NotFinitelyGeneratedInWindow, WindowTooShort
from .graded import (GradedFreeMap, GradedFreeModule, GradedModuleWindow,
                     free_homology_window)


@dataclass
class MinimalPresentation:
    """F1 --relations--> F0 --> M --> 0, minimal within the degree bound.

    ``generators`` lists (degree, index) pairs: the generator is the standard
    basis vector ``index`` of M_degree.
    """

    window: GradedModuleWindow
    generators: list
    F0: GradedFreeModule
    relations: GradedFreeMap
    degree_bound: int
    images: dict = None

    @property
    def F1(self):
        return self.relations.source

    def betti(self):
        e = {}
        for t in self.F0.twists:
            e[(0, t)] = e.get((0, t), 0) + 1
        for t in self.F1.twists:
            e[(1, t)] = e.get((1, t), 0) + 1
        return BettiTable(e, certified_through=self.degree_bound)

    def is_linear(self):
        m = min(self.F0.twists, default=0)
        return all(t == m for t in self.F0.twists) and all(t == m + 1 for t in self.F1.twists)

    def linear_part(self):
        """Coefficient matrices A_0..A_n of the relations of degree m+1 on generators of degree m."""
        F = self.window.field
        n = self.window.n
        m = min(self.F0.twists)
        gens = [k for k, t in enumerate(self.F0.twists) if t == m]
        rels = [r for r, t in enumerate(self.F1.twists) if t == m + 1]
        mats = []
        for i in range(n + 1):
            e = [0] * (n + 1)
            e[i] = 1
            e = tuple(e)
            flat = [self.relations.entries[k][r].get(e, F(0)) for k in gens for r in rels]
            mats.append(F.matrix(len(gens), len(rels), flat) if flat else F.zeros(len(gens), len(rels)))
        return mats


class _Evaluation:
    """Degreewise images in M of the free module on chosen generators."""

    def __init__(self, W):
        self.W = W
        self.gens = []
        self.imgs = {}

    def module(self):
        return GradedFreeModule(self.W.n, [d for d, _ in self.gens], self.W.field)

    def old_part(self, d):
        """Images of old generators times monomials, as columns of W_d."""
        W, F = self.W, self.W.field
        n = W.n
        prev = self.imgs.get(d - 1)
        if prev is None or prev.ncols() == 0:
            return F.zeros(W.dim(d), 0)
        P = [ex.entries(ex.matmul(W.action(i, d - 1), prev)) for i in range(n + 1)]
        pc = prev.ncols()
        F0prev = GradedFreeModule(n, [g for g, _ in self.gens if g <= d - 1], F)
        cols = []
        for k, (g, _) in enumerate(self.gens):
            if g > d - 1:
                continue
            offs, _ = F0prev.offsets(d - 1)
            idx_prev = ex.monomial_index(n, d - 1 - g)
            for u in ex.monomials(n, d - g):
                i = next(v for v in range(n + 1) if u[v] > 0)
                w = list(u)
                w[i] -= 1
                cols.append((i, offs[k] + idx_prev[tuple(w)]))
        rows = W.dim(d)
        flat = [P[i][r * pc + c] for r in range(rows) for (i, c) in cols]
        return F.matrix(rows, len(cols), flat) if flat else F.zeros(rows, len(cols))

    def step(self, d, new_gens, old=None):
        W, F = self.W, self.W.field
        if old is None:
            old = self.old_part(d)
        cols = [old]
        for j in new_gens:
            self.gens.append((d, j))
            flat = [0] * W.dim(d)
            flat[j] = 1
            cols.append(F.matrix(W.dim(d), 1, flat))
        self.imgs[d] = ex.hstack(cols)
        return self.imgs[d]


def _minimal_kernel(source, matrix_at, lo, bound):
    """Minimal homogeneous generators of ker(source -> target) in degrees lo..bound.

    Returns a list of (degree, vector in source_degree).
    """
    n = source.n
    out = []
    prevZ = None
    for d in range(lo, bound + 1):
        Z, sel = ex.kernel(matrix_at(d))
        if Z.ncols() == 0:
            prevZ = Z
            continue
        if prevZ is not None and prevZ.ncols():
            pe = ex.entries(prevZ)
            pk = prevZ.ncols()
            pre = [source.unshift_map(i, d) for i in range(n + 1)]
            # coordinates of x_i * prevZ in the selector rows of Z
            flat = []
            for s in sel:
                row = []
                for i in range(n + 1):
                    r = pre[i][s]
                    row.extend([0] * pk if r < 0 else pe[r * pk:(r + 1) * pk])
                flat.extend(row)
            T = source.field.matrix(len(sel), pk * (n + 1), flat)
            Q = ex.Quotient(T)
        else:
            Q = ex.Quotient(None, N=len(sel), field=source.field)
        if Q.dim:
            new = ex.submatrix(Z, None, Q.lifts)
            for c in range(new.ncols()):
                out.append((d, ex.submatrix(new, None, [c])))
        prevZ = Z
    return out


def _vectors_to_map(source, vectors):
    """Free map whose columns are the given (degree, vector) elements of ``source``."""
    n, F = source.n, source.field
    twists = [d for d, _ in vectors]
    tgt_mod = GradedFreeModule(n, twists, F)
    cols = []
    for d, v in vectors:
        e = ex.entries(v)
        offs, _ = source.offsets(d)
        col = []
        for k, t in enumerate(source.twists):
            p = {}
            if d - t >= 0:
                for idx, u in enumerate(ex.monomials(n, d - t)):
                    x = e[offs[k] + idx]
                    if x != 0:
                        p[u] = x
            col.append(p)
        cols.append(col)
    entries = [[cols[c][k] for c in range(len(cols))] for k in range(source.rank)]
    return GradedFreeMap(tgt_mod, source, entries, check=False)


def minimal_presentation(W, syzygy_degree_bound=None):
    """Minimal generators and relations of the window module M_{>=lo}."""
    bound = W.hi if syzygy_degree_bound is None else syzygy_degree_bound
    if bound > W.hi:
        raise WindowTooShort("relation degree bound exceeds the window")
    ev = _Evaluation(W)
    for d in range(W.lo, W.hi + 1):
        old = ev.old_part(d) if d > W.lo else W.field.zeros(W.dim(d), 0)
        Q = ex.Quotient(old, N=W.dim(d), field=W.field)
        if Q.dim and d == W.hi and d > W.lo:
            raise NotFinitelyGeneratedInWindow(f"new generators in the top degree {d}")
        if Q.dim and d == W.hi and d == W.lo and W.hi > W.lo:
            raise NotFinitelyGeneratedInWindow("window too short")
        ev.step(d, Q.lifts, old)
    F0 = ev.module()
    vecs = _minimal_kernel(F0, lambda d: ev.imgs[d], W.lo, bound)
    rel = _vectors_to_map(F0, vecs)
    return MinimalPresentation(W, list(ev.gens), F0, rel, bound, ev.imgs)


def evaluation_matrix(pres, d):
    """Matrix of F0_d -> M_d for a presentation, any degree inside the window."""
    if pres.images and d in pres.images:
        return pres.images[d]
    W = pres.window
    ev = _Evaluation(W)
    gens = sorted(pres.generators)
    for e in range(W.lo, d + 1):
        ev.step(e, [j for (g, j) in gens if g == e])
    return ev.imgs[d]


@dataclass
class ResolutionChain:
    """Free modules F_0, F_1, ... with maps[i]: F_{i+1} -> F_i."""

    modules: list
    maps: list
    degree_bound: int
    complete: bool
    presentation: MinimalPresentation | None = None

    def betti(self):
        e = {}
        for i, F in enumerate(self.modules):
            for t in F.twists:
                e[(i, t)] = e.get((i, t), 0) + 1
        return BettiTable(e, certified_through=self.degree_bound)

    def map(self, i):
        """The map F_i -> F_{i-1} (i >= 1)."""
        if i - 1 < len(self.maps):
            return self.maps[i - 1]
        if self.complete:
            return None
        raise InsufficientChain(f"chain has only {len(self.maps)} maps")


def free_resolution(W, steps=None, degree_bound=None):
    """Minimal free resolution of the window module, truncated at ``steps`` maps."""
    n = W.n
    if steps is None:
        steps = n + 1
    bound = W.hi if degree_bound is None else degree_bound
    pres = minimal_presentation(W, min(bound, W.hi))
    modules = [pres.F0]
    maps = []
    complete = False
    phi = pres.relations
    if phi.source.rank == 0:
        return ResolutionChain(modules, maps, bound, True, pres)
    modules.append(phi.source)
    maps.append(phi)
    sbound = bound
    while len(maps) < steps:
        sbound += 1
        src = phi.source
        vecs = _minimal_kernel(src, phi.matrix_at, min(src.twists), sbound)
        if not vecs:
            complete = True
            break
        phi = _vectors_to_map(src, vecs)
        modules.append(phi.source)
        maps.append(phi)
    if len(maps) >= n + 1:
        complete = True
    return ResolutionChain(modules, maps, bound, complete, pres)


@dataclass
class CohomologyWindow:
    kind: str
    index: int
    twist: int | None
    window: GradedModuleWindow

    def dims(self):
        return {d: self.window.dim(d) for d in self.window.degrees}


def ext_window(chain, i, c, lo, hi):
    """Window of Ext^i(M, R(c)) from a resolution of M."""
    if i < 0:
        raise ValueError("negative Ext index")
    if i >= len(chain.modules):
        if chain.complete:
            F = chain.modules[0].field
            from .graded import zero_window
            return CohomologyWindow("Ext", i, c, zero_window(chain.modules[0].n, lo, hi, F))
        raise InsufficientChain(f"Ext^{i} needs F_{i}")
    Fi = chain.modules[i]
    D = GradedFreeModule(Fi.n, [-t - c for t in Fi.twists], Fi.field)
    incoming = chain.map(i).transpose(c) if i >= 1 else None
    nxt = chain.map(i + 1)
    outgoing = nxt.transpose(c) if nxt is not None else None
    W = free_homology_window(D, lo, hi, incoming=incoming, outgoing=outgoing)
    return CohomologyWindow("Ext", i, c, W)


def local_cohomology_window(W, i, lo, hi, chain=None):
    """H^i_m(M) in degrees lo..hi via graded local duality.

    H^i_m(M)_t is dual to Ext^{n+1-i}(M, R(-n-1))_{-t}.
    """
    n = W.n
    e = n + 1 - i
    if chain is None:
        chain = free_resolution(W, steps=min(e + 1, n + 1))
    E = ext_window(chain, e, -n - 1, -hi - 1, -lo).window
    F = W.field
    dims = tuple(E.dim(-t) for t in range(lo, hi + 1))
    acts = tuple(tuple(ex.transpose(E.action(j, -t - 1)) for t in range(lo, hi)) for j in range(n + 1))
    H = GradedModuleWindow(n, lo, hi, dims, acts, F, check=False)
    return CohomologyWindow("H_m", i, None, H)
