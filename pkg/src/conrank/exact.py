"""Exact fields, matrices and monomials.

Matrices are python-flint objects: ``fmpq_mat`` over QQ and ``nmod_mat`` over
GF(p).  The helpers here hide the difference and handle zero-sized shapes.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import flint

from .errors import FieldError, FieldReductionImpossible


def is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    def matrix(self, rows, cols, entries=None):
        raise NotImplementedError

    def zeros(self, rows, cols):
        return self.matrix(rows, cols)

    def identity(self, n):
        e = [0] * (n * n)
        for i in range(n):
            e[i * n + i] = 1
        return self.matrix(n, n, e)

    def from_rows(self, rows, ncols=None):
        rows = list(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        flat = [self(x) for r in rows for x in r]
        return self.matrix(len(rows), ncols, flat)

    def parse(self, s):
        return self(Fraction(str(s)))

    def format(self, x):
        return str(x)

    def random(self, rng, lo=-3, hi=3):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class Rationals(Field):
    name = "QQ"
    characteristic = 0

    def __call__(self, x):
        if isinstance(x, flint.fmpq):
            return x
        if isinstance(x, Fraction):
            return flint.fmpq(x.numerator, x.denominator)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, flint.nmod):
            raise FieldError("cannot lift a finite field element to QQ")
        return flint.fmpq(int(x))

    def matrix(self, rows, cols, entries=None):
        if entries is None:
            return flint.fmpq_mat(rows, cols)
        try:
            return flint.fmpq_mat(rows, cols, entries)
        except (TypeError, ValueError):
            return flint.fmpq_mat(rows, cols, [self(x) for x in entries])

    def random(self, rng, lo=-3, hi=3):
        return flint.fmpq(rng.randint(lo, hi))


class PrimeField(Field):
    def __init__(self, p):
        if not is_prime(p) or p < 5:
            raise FieldError(f"GF({p}) is not supported; need a prime p >= 5")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x):
        p = self.p
        if isinstance(x, flint.nmod):
            return flint.nmod(int(x), p)
        if isinstance(x, (Fraction, flint.fmpq)):
            num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x.p), int(x.q))
            if den % p == 0:
                raise FieldReductionImpossible(f"denominator {den} vanishes mod {p}")
            return flint.nmod(num, p) / flint.nmod(den, p)
        if isinstance(x, str):
            return self.parse(x)
        return flint.nmod(int(x), p)

    def matrix(self, rows, cols, entries=None):
        if entries is None:
            return flint.nmod_mat(rows, cols, self.p)
        try:
            return flint.nmod_mat(rows, cols, entries, self.p)
        except (TypeError, ValueError, ZeroDivisionError):
            return flint.nmod_mat(rows, cols, [int(self(x)) for x in entries], self.p)

    def random(self, rng, lo=-3, hi=3):
        return flint.nmod(rng.randrange(self.p), self.p)


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p):
    return PrimeField(p)


def field_from_name(name):
    name = name.strip()
    if name in ("QQ", "Q"):
        return QQ
    if name.startswith("GF(") and name.endswith(")"):
        return GF(int(name[3:-1]))
    raise FieldError(f"unknown field {name!r}")


def field_of(M):
    if isinstance(M, flint.nmod_mat):
        return GF(M.modulus())
    return QQ


def is_zero_elem(x):
    return x == 0


# ---- matrices ----

def shape(M):
    return M.nrows(), M.ncols()


def entries(M):
    if M.nrows() == 0 or M.ncols() == 0:
        return []
    return M.entries()


def rows_of(M):
    r, c = shape(M)
    e = entries(M)
    return [e[i * c:(i + 1) * c] for i in range(r)]


def rank(M):
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rank()


def is_zero(M):
    return all(x == 0 for x in entries(M))


def transpose(M):
    r, c = shape(M)
    if r == 0 or c == 0:
        return field_of(M).zeros(c, r)
    return M.transpose()


def submatrix(M, rows=None, cols=None):
    r, c = shape(M)
    rows = range(r) if rows is None else rows
    cols = range(c) if cols is None else cols
    rows, cols = list(rows), list(cols)
    e = entries(M)
    flat = [e[i * c + j] for i in rows for j in cols]
    return field_of(M).matrix(len(rows), len(cols), flat) if flat else field_of(M).zeros(len(rows), len(cols))


def hstack(mats, field=None, rows=None):
    mats = list(mats)
    if not mats:
        return field.zeros(rows or 0, 0)
    F = field_of(mats[0])
    r = mats[0].nrows()
    cols = sum(m.ncols() for m in mats)
    blocks = [rows_of(m) for m in mats]
    flat = [x for i in range(r) for b in blocks for x in b[i]]
    return F.matrix(r, cols, flat) if flat else F.zeros(r, cols)


def vstack(mats, field=None, cols=None):
    mats = list(mats)
    if not mats:
        return field.zeros(0, cols or 0)
    F = field_of(mats[0])
    c = mats[0].ncols()
    flat = [x for m in mats for x in entries(m)]
    rows = sum(m.nrows() for m in mats)
    return F.matrix(rows, c, flat) if flat else F.zeros(rows, c)


def matmul(A, B):
    if A.ncols() != B.nrows():
        raise ValueError("shape mismatch")
    if A.nrows() == 0 or B.ncols() == 0 or A.ncols() == 0:
        return field_of(A).zeros(A.nrows(), B.ncols())
    return A * B


def _rref_flat(M):
    """Flat entries of the RREF of M, its column count and pivot columns."""
    r, c = shape(M)
    if r == 0 or c == 0:
        return [], c, []
    R, rk = M.rref()
    e = R.entries()
    pivots = []
    j = 0
    for i in range(rk):
        while e[i * c + j] == 0:
            j += 1
        pivots.append(j)
        j += 1
    return e, c, pivots


def rref(M):
    """Return (R, pivots) with R in reduced row echelon form (rank rows kept)."""
    e, c, piv = _rref_flat(M)
    F = field_of(M)
    k = len(piv)
    return (F.matrix(k, c, e[:k * c]) if k and c else F.zeros(k, c)), piv


def kernel(M):
    """Right kernel basis K and its selector rows.

    K has the identity on the rows listed in ``free``, so the coordinates of a
    vector v of the kernel in this basis are v[free].
    """
    r, c = shape(M)
    F = field_of(M)
    e, _, piv = _rref_flat(M)
    pset = set(piv)
    free = [j for j in range(c) if j not in pset]
    k = len(free)
    one = F(1)
    zero = F(0)
    flat = [zero] * (c * k)
    for col, f in enumerate(free):
        flat[f * k + col] = one
    for i, p in enumerate(piv):
        base = i * c
        row = p * k
        for col, f in enumerate(free):
            x = e[base + f]
            if x != 0:
                flat[row + col] = -x
    K = F.matrix(c, k, flat) if flat else F.zeros(c, k)
    return K, free


def kernel_basis(M):
    return kernel(M)[0]


class Quotient:
    """Quotient of F^N by the column span of S.

    ``proj`` maps F^N onto coordinates of the quotient, ``lifts`` lists the
    standard basis indices whose images form the quotient basis.
    """

    def __init__(self, S, N=None, field=None):
        F = field_of(S) if S is not None else field
        if N is None:
            N = S.nrows()
        self.field = F
        self.N = N
        if S is None or S.ncols() == 0 or N == 0:
            e, piv = [], []
        else:
            e, _, piv = _rref_flat(transpose(S))
        pset = set(piv)
        self.lifts = [j for j in range(N) if j not in pset]
        self.pivots = piv
        self.dim = d = len(self.lifts)
        zero = F(0)
        flat = [zero] * (d * N)
        one = F(1)
        for t, j in enumerate(self.lifts):
            flat[t * N + j] = one
        for i, p in enumerate(piv):
            base = i * N
            for t, j in enumerate(self.lifts):
                x = e[base + j]
                if x != 0:
                    flat[t * N + p] = -x
        self.proj = F.matrix(d, N, flat) if flat else F.zeros(d, N)


def solve_in_span(B, V):
    """Solve B C = V for full column rank B; raise ValueError if impossible."""
    k = B.ncols()
    A = hstack([B, V])
    R, piv = rref(A)
    if piv[:k] != list(range(k)) or any(p >= k for p in piv):
        raise ValueError("not in span")
    return submatrix(R, range(k), range(k, k + V.ncols()))


def to_strings(M):
    F = field_of(M)
    return [[F.format(x) for x in row] for row in rows_of(M)]


def from_strings(rows, field, ncols=None):
    return field.from_rows([[field.parse(x) for x in r] for r in rows], ncols)


def reduce_matrix(M, p):
    """Reduce a rational matrix modulo p."""
    F = GF(p)
    return F.matrix(M.nrows(), M.ncols(), entries(M)) if M.nrows() and M.ncols() else F.zeros(M.nrows(), M.ncols())


# ---- monomials ----

@lru_cache(maxsize=None)
def monomials(n, d):
    """Exponent tuples of degree d in x0..xn, graded-lex with x0 > ... > xn."""
    if d < 0:
        return ()
    out = []
    for c in combinations_with_replacement(range(n + 1), d):
        e = [0] * (n + 1)
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


def monomial_basis(n, d):
    return list(monomials(n, d))


@lru_cache(maxsize=None)
def monomial_index(n, d):
    return {m: i for i, m in enumerate(monomials(n, d))}


def num_monomials(n, d):
    return comb(d + n, n) if d >= 0 else 0


@lru_cache(maxsize=None)
def mult_map(n, d, i):
    """Index of x_i * u in degree d+1 for each monomial u of degree d."""
    idx = monomial_index(n, d + 1)
    out = []
    for m in monomials(n, d):
        e = list(m)
        e[i] += 1
        out.append(idx[tuple(e)])
    return tuple(out)


@lru_cache(maxsize=None)
def div_map(n, d, i):
    """For each monomial u of degree d, index of u/x_i in degree d-1 or -1."""
    idx = monomial_index(n, d - 1)
    out = []
    for m in monomials(n, d):
        if m[i] == 0:
            out.append(-1)
        else:
            e = list(m)
            e[i] -= 1
            out.append(idx[tuple(e)])
    return tuple(out)


def add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_str(e, names=None):
    parts = []
    for i, k in enumerate(e):
        v = names[i] if names else f"x{i}"
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) or "1"
