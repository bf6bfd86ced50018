"""Betti tables from the Koszul complex, truncation predictions and pure tables."""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, gcd, prod

import sympy

from . import exact as ex
from .errors import NonLinearInput, WindowTooShort


@dataclass
class BettiTable:
    """Graded Betti numbers beta_{i,j}; zero entries are omitted."""

    entries: dict = dc_field(default_factory=dict)
    certified_through: int | None = None

    def __post_init__(self):
        self.entries = {(int(i), int(j)): int(b) for (i, j), b in self.entries.items() if b}

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def total(self, i):
        return sum(b for (a, _), b in self.entries.items() if a == i)

    def totals(self):
        if not self.entries:
            return []
        top = max(i for i, _ in self.entries)
        return [self.total(i) for i in range(top + 1)]

    def strand(self, m, length=None):
        """(beta_{0,m}, beta_{1,m+1}, ...)."""
        if length is None:
            length = max((i for i, _ in self.entries), default=-1) + 1
        return tuple(self[(i, m + i)] for i in range(length))

    @property
    def m(self):
        js = [j for (i, j) in self.entries if i == 0]
        return min(js) if js else None

    def is_linear(self, upto=None):
        m = self.m
        return all(j == m + i for (i, j) in self.entries if upto is None or i <= upto)

    def alternating_sum(self):
        return sum((-1) ** i * b for (i, _), b in self.entries.items())

    @classmethod
    def from_strand(cls, strand, m=0):
        return cls({(i, m + i): b for i, b in enumerate(strand)})

    def render(self):
        """Rows j - i, columns i, zeros as dots."""
        if not self.entries:
            return "0"
        imax = max(i for i, _ in self.entries)
        rows = sorted({j - i for i, j in self.entries})
        rmin, rmax = rows[0], rows[-1]
        cells = [[str(self[(i, r + i)]) if self[(i, r + i)] else "." for i in range(imax + 1)]
                 for r in range(rmin, rmax + 1)]
        w = max(len(c) for row in cells for c in row)
        lw = max(6, max(len(str(r)) for r in range(rmin, rmax + 1)) + 1)
        head = " " * lw + " " + " ".join(str(i).rjust(w) for i in range(imax + 1))
        tot = "total:".rjust(lw) + " " + " ".join(str(self.total(i)).rjust(w) for i in range(imax + 1))
        lines = [head, tot]
        for r, row in zip(range(rmin, rmax + 1), cells):
            lines.append(f"{r}:".rjust(lw) + " " + " ".join(c.rjust(w) for c in row))
        return "\n".join(lines)

    def to_json(self):
        return {"entries": [[i, j, b] for (i, j), b in sorted(self.entries.items())],
                "certified_through": self.certified_through}

    @classmethod
    def from_json(cls, d):
        return cls({(i, j): b for i, j, b in d["entries"]}, d.get("certified_through"))

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.entries.items()))})"


# ---- Koszul complex ----

@lru_cache(maxsize=None)
def wedge_basis(n, i):
    return tuple(combinations(range(n + 1), i))


@lru_cache(maxsize=None)
def wedge_index(n, i):
    return {s: t for t, s in enumerate(wedge_basis(n, i))}


def koszul_differential(W, a, i):
    """Matrix of M_a (x) L^i -> M_{a+1} (x) L^{i-1}; blocks indexed by wedge basis."""
    F = W.field
    n = W.n
    da, db = W.dim(a), W.dim(a + 1)
    src, tgt = wedge_basis(n, i), wedge_index(n, i - 1)
    rows, cols = db * len(tgt), da * len(src)
    if rows == 0 or cols == 0:
        return F.zeros(rows, cols)
    flat = [F(0)] * (rows * cols)
    acts = [ex.entries(W.action(v, a)) for v in range(n + 1)] if da and db else None
    for sidx, S in enumerate(src):
        for pos, v in enumerate(S):
            T = S[:pos] + S[pos + 1:]
            tidx = tgt[T]
            X = acts[v]
            sign = 1 if pos % 2 == 0 else -1
            r0, c0 = tidx * db, sidx * da
            for r in range(db):
                base = (r0 + r) * cols + c0
                xr = X[r * da:(r + 1) * da]
                if sign == 1:
                    flat[base:base + da] = xr
                else:
                    flat[base:base + da] = [-x for x in xr]
    return F.matrix(rows, cols, flat)


class KoszulRanks:
    def __init__(self, W):
        self.W = W
        self._ranks = {}

    def rank(self, a, i):
        """Rank of M_a (x) L^i -> M_{a+1} (x) L^{i-1}."""
        W = self.W
        if i <= 0 or i > W.n + 1 or a < W.lo or W.dim(a) == 0:
            return 0
        key = (a, i)
        if key not in self._ranks:
            if a + 1 > W.hi:
                raise WindowTooShort(f"Koszul map from degree {a} needs degree {a + 1}")
            self._ranks[key] = ex.rank(koszul_differential(W, a, i))
        return self._ranks[key]

    def betti(self, i, j):
        W = self.W
        a = j - i
        if a < W.lo:
            return 0
        dim_c = W.dim(a) * comb(W.n + 1, i)
        return dim_c - self.rank(a, i) - self.rank(a - 1, i + 1)


def koszul_betti(W, i_max=None, j_range=None):
    """Betti table of the window module M_{>=lo} read off Koszul homology.

    beta_{i,j} needs degrees j-i-1..j-i+1; by default every entry the window
    determines is computed.
    """
    n = W.n
    if i_max is None:
        i_max = n + 1
    kr = KoszulRanks(W)
    out = {}
    for i in range(i_max + 1):
        if j_range is None:
            top = W.hi + i if i == 0 else W.hi + i - 1
            js = range(W.lo + i, top + 1)
        else:
            js = j_range
        for j in js:
            if j - i < W.lo:
                continue
            b = kr.betti(i, j)
            if b:
                out[(i, j)] = b
    return BettiTable(out, certified_through=W.hi)


def tor_cycles(W, a, i):
    """Kernel of the Koszul map out of M_a (x) L^i, with its selector rows."""
    return ex.kernel(koszul_differential(W, a, i))


# ---- recurrence for truncations ----

def recurrence_values(n, i, kmin=-40, kmax=40):
    """a_k^{(i)} for kmin <= k <= kmax from the initial values and the recursion
    sum_j (-1)^j C(n+1, j) a_{k-j} = 0."""
    init = {1: comb(n + 1, i + 1)}
    for j in range(n):
        init[-j] = (-1) ** i if j == i else 0
    # initial window is -(n-1)..1, n+1 consecutive values
    vals = dict(init)
    for k in range(2, kmax + 1):
        vals[k] = -sum((-1) ** j * comb(n + 1, j) * vals[k - j] for j in range(1, n + 2))
    for k in range(-n, kmin - 1, -1):
        # solve for a_k using the relation at index k + n + 1
        top = k + n + 1
        s = sum((-1) ** j * comb(n + 1, j) * vals[top - j] for j in range(0, n + 1))
        vals[k] = -s * (-1) ** (n + 1)
    return vals


def recurrence_value(n, i, k):
    """p_n^{(i)}(k) = C(n, i) C(k+n-1, n) (k+n)/(k+i), valid for every integer k."""
    if not 0 <= i <= n:
        return 0
    if k + i == 0:
        return recurrence_values(n, i, kmin=min(k, -n), kmax=1)[k]
    num = comb(n, i) * _gbinom(k + n - 1, n) * (k + n)
    q, r = divmod(num, k + i)
    assert r == 0
    return q


def _gbinom(a, b):
    """Binomial coefficient as a polynomial in a (valid for negative a)."""
    return prod(a - t for t in range(b)) // prod(range(1, b + 1)) if b > 0 else 1


def recurrence_poly(n, i, var=None):
    """The polynomial p_n^{(i)}(k) as a sympy expression."""
    k = var if var is not None else sympy.Symbol("k")
    expr = sympy.binomial(n, i) * sympy.ff(k + n - 1, n) / sympy.factorial(n) * (k + n) / (k + i)
    return sympy.factor(sympy.cancel(sympy.expand_func(expr)))


def predict_truncation_betti(B, k, n=None):
    """Linear strand of M_{>=m+k} predicted from the linear strand of M.

    beta_{i, m+k+i}(M_{>=m+k}) = sum_j (-1)^j a^{(i)}_{k-j} beta_{j, m+j}(M).
    B is a linear BettiTable or a strand (beta_0, ..., beta_n) placed at m = 0.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(B, BettiTable):
        if n is None:
            raise ValueError("n is required for a BettiTable input")
        return predict_truncation(B, k, n)
    strand = tuple(B)
    if n is None:
        n = len(strand) - 1
    return BettiTable.from_strand(predict_strand(strand, n, k), k)


def predict_strand(strand, n, k, m=0):
    """Strand (length n+1) of the truncation at m+k of a linearly resolved module."""
    strand = list(strand) + [0] * (n + 1 - len(strand))
    out = []
    for i in range(n + 1):
        out.append(sum((-1) ** j * recurrence_value(n, i, k - j) * strand[j] for j in range(n + 1)))
    return tuple(out)


def predict_truncation(B, k, n):
    """Betti table of the truncation at m+k for a linear Betti table B."""
    if not B.is_linear():
        raise NonLinearInput("input Betti table is not linear")
    m = B.m if B.m is not None else 0
    s = predict_strand(B.strand(m, n + 1), n, k)
    return BettiTable.from_strand(s, m + k)


# ---- Steiner bundles ----

def steiner_hilbert(n, s, r, m, d):
    return comb(d + n, n) * (s + r) - (comb(d - m - 1 + n, n) if d - m - 1 >= 0 else 0) * s


def steiner_truncation_betti(n, s, r, m, t=None):
    """Linear strand of the sections of a Steiner bundle truncated at degree t (default m).

    beta_i = p^{(i)}(t)(s+r) - p^{(i)}(t-m-1) s.
    """
    if t is None:
        t = m
    if t < m:
        raise ValueError("truncation degree must be at least m")
    return tuple(recurrence_value(n, i, t) * (s + r) - recurrence_value(n, i, t - m - 1) * s
                 for i in range(n + 1))


# ---- pure tables ----

@dataclass(frozen=True)
class HKSolution:
    degrees: tuple
    q: int
    betti: tuple

    def table(self, m=0):
        d0 = self.degrees[0]
        return BettiTable({(i, m + d - d0): b for i, (d, b) in enumerate(zip(self.degrees, self.betti))})


def herzog_kuhl(degrees):
    """Minimal integral pure Betti numbers for a strictly increasing degree sequence."""
    d = list(degrees)
    if any(b <= a for a, b in zip(d, d[1:])):
        raise ValueError("degree sequence must be strictly increasing")
    w = [prod(abs(dj - di) for j, dj in enumerate(d) if j != i) for i, di in enumerate(d)]
    q = 1
    for x in w:
        q = q * x // gcd(q, x)
    return HKSolution(tuple(d), q, tuple(q // x for x in w))


def is_pure(B):
    out = {}
    for (i, j) in B.entries:
        if i in out:
            return False
        out[i] = j
    return True


def degree_sequence(B):
    if not is_pure(B):
        return None
    return tuple(j for _, j in sorted(B.entries))
