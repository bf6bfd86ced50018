"""Graded free modules, maps between them, and finite degree windows of modules."""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, factorial

import sympy

from . import exact as ex
from .errors import DegreeWindowTooSmall, WindowError, WindowTooShort


# ---- polynomials: dict exponent-tuple -> field element ----

def poly_degree(p):
    for e in p:
        return sum(e)
    return None


def poly_clean(p):
    return {e: c for e, c in p.items() if c != 0}


def poly_str(p, field=None):
    if not p:
        return "0"
    out = []
    for e in sorted(p, reverse=True):
        c = p[e]
        s = str(c)
        m = ex.mono_str(e)
        if m == "1":
            out.append(s)
        elif s == "1":
            out.append(m)
        elif s == "-1":
            out.append("-" + m)
        else:
            out.append(f"{s}*{m}")
    return " + ".join(out).replace("+ -", "- ")


def linear_form(coeffs, field):
    n = len(coeffs) - 1
    out = {}
    for i, c in enumerate(coeffs):
        c = field(c)
        if c != 0:
            e = [0] * (n + 1)
            e[i] = 1
            out[tuple(e)] = c
    return out


def random_form(n, d, field, rng, lo=-3, hi=3):
    return poly_clean({m: field.random(rng, lo, hi) for m in ex.monomials(n, d)})


class GradedFreeModule:
    """The free module sum_k R(-twists[k]) over k[x0..xn]."""

    def __init__(self, n, twists, field=ex.QQ):
        self.n = n
        self.twists = tuple(int(t) for t in twists)
        self.field = field
        self._cache = {}

    @property
    def rank(self):
        return len(self.twists)

    def __repr__(self):
        if not self.twists:
            return "0"
        parts = []
        for t in sorted(set(self.twists)):
            c = self.twists.count(t)
            parts.append(f"R({-t})" + (f"^{c}" if c > 1 else ""))
        return " + ".join(parts)

    def offsets(self, d):
        got = self._cache.get(d)
        if got is None:
            offs, tot = [], 0
            for t in self.twists:
                offs.append(tot)
                tot += ex.num_monomials(self.n, d - t)
            got = (offs, tot)
            self._cache[d] = got
        return got

    def dim(self, d):
        return self.offsets(d)[1]

    def basis(self, d):
        return [(k, m) for k, t in enumerate(self.twists) for m in ex.monomials(self.n, d - t)]

    def shift_map(self, i, d):
        """Index in degree d+1 of x_i times each basis element of degree d."""
        offs0, _ = self.offsets(d)
        offs1, _ = self.offsets(d + 1)
        out = []
        for k, t in enumerate(self.twists):
            if d - t >= 0:
                out.extend(offs1[k] + j for j in ex.mult_map(self.n, d - t, i))
        return out

    def unshift_map(self, i, d):
        """For each basis element of degree d, index of its quotient by x_i in degree d-1, or -1."""
        offs0, _ = self.offsets(d - 1)
        out = []
        for k, t in enumerate(self.twists):
            if d - t >= 0:
                out.extend(-1 if j < 0 else offs0[k] + j for j in ex.div_map(self.n, d - t, i))
        return out


class GradedFreeMap:
    """Degree-zero map source -> target; entries[j][k] is a polynomial dict."""

    def __init__(self, source, target, entries, check=True):
        self.source = source
        self.target = target
        self.n = source.n
        self.field = source.field
        self.entries = [[poly_clean(dict(p)) for p in row] for row in entries]
        if check:
            if len(self.entries) != target.rank or any(len(r) != source.rank for r in self.entries):
                raise ValueError("entry matrix has the wrong shape")
            for j, row in enumerate(self.entries):
                for k, p in enumerate(row):
                    want = source.twists[k] - target.twists[j]
                    for e in p:
                        if sum(e) != want:
                            raise ValueError(f"entry ({j},{k}) is not homogeneous of degree {want}")
        self._cache = {}

    @property
    def shape(self):
        return self.target.rank, self.source.rank

    def matrix_at(self, d):
        got = self._cache.get(d)
        if got is not None:
            return got
        F = self.field
        n = self.n
        toffs, tdim = self.target.offsets(d)
        soffs, sdim = self.source.offsets(d)
        flat = [F(0)] * (tdim * sdim)
        for k, sk in enumerate(self.source.twists):
            if d - sk < 0:
                continue
            smons = ex.monomials(n, d - sk)
            for j, tj in enumerate(self.target.twists):
                p = self.entries[j][k]
                if not p:
                    continue
                tidx = ex.monomial_index(n, d - tj)
                for col, u in enumerate(smons):
                    c = soffs[k] + col
                    for e, coef in p.items():
                        r = toffs[j] + tidx[ex.add_exp(e, u)]
                        flat[r * sdim + c] += coef
        M = F.matrix(tdim, sdim, flat) if flat else F.zeros(tdim, sdim)
        self._cache[d] = M
        return M

    def compose(self, other):
        """self o other."""
        F = self.field
        out = []
        for j in range(self.target.rank):
            row = []
            for k in range(other.source.rank):
                acc = {}
                for l in range(self.source.rank):
                    for e1, c1 in self.entries[j][l].items():
                        for e2, c2 in other.entries[l][k].items():
                            e = ex.add_exp(e1, e2)
                            acc[e] = acc.get(e, F(0)) + c1 * c2
                row.append(poly_clean(acc))
            out.append(row)
        return GradedFreeMap(other.source, self.target, out, check=False)

    def is_zero(self):
        return all(not p for row in self.entries for p in row)

    def transpose(self, c=0):
        """Dual map Hom(target, R(c)) -> Hom(source, R(c))."""
        src = GradedFreeModule(self.n, [-t - c for t in self.target.twists], self.field)
        tgt = GradedFreeModule(self.n, [-t - c for t in self.source.twists], self.field)
        ent = [[self.entries[j][k] for j in range(self.target.rank)] for k in range(self.source.rank)]
        return GradedFreeMap(src, tgt, ent, check=False)

    def __repr__(self):
        return f"GradedFreeMap({self.source} -> {self.target})"


def free_map_from_rows(n, source_twists, target_twists, rows, field=ex.QQ):
    """Build a map from rows of linear-form coefficient lists or polynomial dicts."""
    src = GradedFreeModule(n, source_twists, field)
    tgt = GradedFreeModule(n, target_twists, field)
    ent = []
    for row in rows:
        ent.append([p if isinstance(p, dict) else linear_form(p, field) for p in row])
    return GradedFreeMap(src, tgt, ent)


# ---- windows ----

@dataclass(frozen=True, eq=False)
class GradedModuleWindow:
    """Degrees lo..hi of a graded module M_{>=lo}.

    ``actions[i][d - lo]`` is the matrix of multiplication by x_i from degree d
    to degree d+1 (column vectors).  Degrees below lo are zero.
    """

    n: int
    lo: int
    hi: int
    dims: tuple
    actions: tuple
    field: ex.Field = ex.QQ
    check: bool = dc_field(default=True, repr=False)

    def __post_init__(self):
        if self.hi < self.lo:
            raise DegreeWindowTooSmall("empty window")
        if len(self.dims) != self.hi - self.lo + 1:
            raise WindowError("dims length does not match window")
        if len(self.actions) != self.n + 1:
            raise WindowError("need one action family per variable")
        for i in range(self.n + 1):
            if len(self.actions[i]) != self.hi - self.lo:
                raise WindowError("wrong number of action matrices")
            for t, X in enumerate(self.actions[i]):
                if ex.shape(X) != (self.dims[t + 1], self.dims[t]):
                    raise WindowError(f"action x{i} in degree {self.lo + t} has shape {ex.shape(X)}")
        if self.check:
            self.check_commutation()

    def check_commutation(self):
        for t in range(self.hi - self.lo - 1):
            for i in range(self.n + 1):
                for j in range(i + 1, self.n + 1):
                    a = ex.matmul(self.actions[j][t + 1], self.actions[i][t])
                    b = ex.matmul(self.actions[i][t + 1], self.actions[j][t])
                    if a != b:
                        raise WindowError(f"x{i} and x{j} do not commute in degree {self.lo + t}")

    def dim(self, d):
        if d < self.lo:
            return 0
        if d > self.hi:
            raise WindowTooShort(f"degree {d} is above the window top {self.hi}")
        return self.dims[d - self.lo]

    def action(self, i, d):
        if d < self.lo:
            return self.field.zeros(self.dim(d + 1), 0)
        if d + 1 > self.hi:
            raise WindowTooShort(f"action from degree {d} needs degree {d + 1} > {self.hi}")
        return self.actions[i][d - self.lo]

    @property
    def degrees(self):
        return range(self.lo, self.hi + 1)

    def is_zero_at_top(self):
        return self.dims[-1] == 0

    def support(self):
        return [d for d in self.degrees if self.dim(d)]

    def __repr__(self):
        return f"GradedModuleWindow(n={self.n}, [{self.lo},{self.hi}], dims={list(self.dims)}, {self.field})"


def zero_window(n, lo, hi, field=ex.QQ):
    dims = (0,) * (hi - lo + 1)
    acts = tuple(tuple(field.zeros(0, 0) for _ in range(hi - lo)) for _ in range(n + 1))
    return GradedModuleWindow(n, lo, hi, dims, acts, field)


def free_homology_window(middle, lo, hi, incoming=None, outgoing=None):
    """Window of ker(outgoing)/im(incoming) on the free module ``middle``."""
    n, F = middle.n, middle.field
    if hi < lo:
        raise DegreeWindowTooSmall("empty window")
    data = {}
    for d in range(lo, hi + 1):
        N = middle.dim(d)
        if outgoing is not None:
            Z, sel = ex.kernel(outgoing.matrix_at(d))
        else:
            Z, sel = None, list(range(N))
        if incoming is not None:
            B = incoming.matrix_at(d)
            Y = ex.submatrix(B, sel, None) if Z is not None else B
        else:
            Y = None
        Q = ex.Quotient(Y, N=len(sel), field=F)
        data[d] = (Z, sel, Q)
    dims = tuple(data[d][2].dim for d in range(lo, hi + 1))
    acts = []
    for i in range(n + 1):
        fam = []
        for d in range(lo, hi):
            Z0, sel0, Q0 = data[d]
            Z1, sel1, Q1 = data[d + 1]
            pre = middle.unshift_map(i, d + 1)
            # lifted basis vectors of H_d, expressed in middle_d
            k = Q0.dim
            # coordinates in Z_{d+1} of x_i times each lifted basis vector
            flat = []
            if Z0 is None:
                pos = {j: t for t, j in enumerate(Q0.lifts)}
                for s in sel1:
                    row = [0] * k
                    t = pos.get(pre[s], -1) if pre[s] >= 0 else -1
                    if t >= 0:
                        row[t] = 1
                    flat.extend(row)
            else:
                Le = ex.entries(ex.submatrix(Z0, None, Q0.lifts))
                for s in sel1:
                    r = pre[s]
                    flat.extend([0] * k if r < 0 else Le[r * k:(r + 1) * k])
            Y = F.matrix(len(sel1), k, flat) if flat else F.zeros(len(sel1), k)
            fam.append(ex.matmul(Q1.proj, Y))
        acts.append(tuple(fam))
    return GradedModuleWindow(n, lo, hi, dims, tuple(acts), F, check=False)


def window_from_presentation(P, lo, hi):
    """Window of coker(P) where P: F1 -> F0 is a graded free map."""
    return free_homology_window(P.target, lo, hi, incoming=P)


def free_module_window(module, lo, hi):
    return free_homology_window(module, lo, hi)


def truncate(W, m):
    """The window of M_{>=m}."""
    if m <= W.lo:
        return W
    if m > W.hi:
        raise WindowTooShort(f"cannot truncate at {m} above the window top {W.hi}")
    s = m - W.lo
    acts = tuple(tuple(fam[s:]) for fam in W.actions)
    return GradedModuleWindow(W.n, m, W.hi, W.dims[s:], acts, W.field, check=False)


def restrict(W, hi):
    """Forget degrees above hi."""
    if hi > W.hi:
        raise WindowTooShort("cannot extend a window upward")
    s = hi - W.lo
    acts = tuple(tuple(fam[:s]) for fam in W.actions)
    return GradedModuleWindow(W.n, W.lo, hi, W.dims[:s + 1], acts, W.field, check=False)


def shift(W, q):
    """The twist M(q), with M(q)_d = M_{d+q}."""
    return GradedModuleWindow(W.n, W.lo - q, W.hi - q, W.dims, W.actions, W.field, check=False)


def extend_below(W, lo):
    """Same module, window starting lower with explicit zeros."""
    if lo >= W.lo:
        return W
    k = W.lo - lo
    F = W.field
    dims = (0,) * k + tuple(W.dims)
    acts = []
    for fam in W.actions:
        new = [F.zeros(0, 0) for _ in range(k - 1)] + [F.zeros(W.dims[0], 0)] + list(fam)
        acts.append(tuple(new))
    return GradedModuleWindow(W.n, lo, W.hi, dims, tuple(acts), F, check=False)


def extend_above_zero(W, hi):
    """Extend a window whose top degree is zero with further zero degrees."""
    if hi <= W.hi:
        return W
    if W.dims[-1] != 0:
        raise WindowTooShort("can only pad a window that vanishes at its top")
    F = W.field
    k = hi - W.hi
    dims = tuple(W.dims) + (0,) * k
    acts = tuple(tuple(fam) + tuple(F.zeros(0, 0) for _ in range(k)) for fam in W.actions)
    return GradedModuleWindow(W.n, W.lo, hi, dims, acts, F, check=False)


def block_diag(mats, F):
    r = sum(m.nrows() for m in mats)
    c = sum(m.ncols() for m in mats)
    flat = [F(0)] * (r * c)
    r0 = c0 = 0
    for m in mats:
        e = ex.entries(m)
        mc = m.ncols()
        for i in range(m.nrows()):
            for j in range(mc):
                flat[(r0 + i) * c + c0 + j] = e[i * mc + j]
        r0 += m.nrows()
        c0 += mc
    return F.matrix(r, c, flat) if flat else F.zeros(r, c)


def direct_sum(windows):
    windows = list(windows)
    W0 = windows[0]
    lo = min(w.lo for w in windows)
    hi = min(w.hi for w in windows)
    ws = [restrict(extend_below(w, lo), hi) for w in windows]
    F = W0.field
    dims = tuple(sum(w.dims[t] for w in ws) for t in range(hi - lo + 1))
    acts = tuple(tuple(block_diag([w.actions[i][t] for w in ws], F) for t in range(hi - lo))
                 for i in range(W0.n + 1))
    return GradedModuleWindow(W0.n, lo, hi, dims, acts, F, check=False)


def power(W, q):
    return direct_sum([W] * q)


def change_field(W, field):
    acts = tuple(tuple(field.matrix(X.nrows(), X.ncols(), ex.entries(X)) if X.nrows() and X.ncols()
                       else field.zeros(X.nrows(), X.ncols()) for X in fam) for fam in W.actions)
    return GradedModuleWindow(W.n, W.lo, W.hi, W.dims, acts, field, check=False)


# ---- Hilbert functions ----

@dataclass(frozen=True)
class HilbertData:
    values: dict
    polynomial: sympy.Expr
    dimension: int
    degree: int
    artinian: bool
    stable_from: int


K = sympy.Symbol("k")


def hilbert_data(W):
    """Hilbert values on the window and the polynomial fitted to its top n+2 values."""
    vals = {d: W.dim(d) for d in W.degrees}
    if W.dims[-1] == 0 and (len(W.dims) < 2 or W.dims[-2] == 0):
        return HilbertData(vals, sympy.Integer(0), -1, 0, True, W.hi)
    need = W.n + 2
    if len(W.dims) < need:
        raise DegreeWindowTooSmall(f"need at least {need} degrees to fit the Hilbert polynomial")
    pts = [(d, W.dim(d)) for d in range(W.hi - need + 1, W.hi + 1)]
    poly = sympy.expand(sympy.interpolate(pts, K))
    # first degree from which the fitted polynomial matches
    stable = W.hi - need + 1
    while stable - 1 >= W.lo and poly.subs(K, stable - 1) == W.dim(stable - 1):
        stable -= 1
    if poly == 0:
        return HilbertData(vals, poly, -1, 0, True, stable)
    P = sympy.Poly(poly, K)
    dim = P.degree()
    deg = int(P.LC() * factorial(dim))
    return HilbertData(vals, poly, dim, deg, False, stable)
