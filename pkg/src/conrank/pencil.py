"""Linear pencils A = sum x_i A_i and checks of their rank at points."""
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import product

import numpy as np

from . import exact as ex
from .errors import FieldReductionImpossible, NotSquare, RankVerifyError


@dataclass(eq=False)
class LinearPencil:
    """An a x b matrix of linear forms in x0..xn, stored as n+1 constant matrices."""

    coeffs: tuple
    field: ex.Field = ex.QQ
    provenance: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = tuple(self.coeffs)
        shapes = {ex.shape(A) for A in self.coeffs}
        if len(shapes) != 1:
            raise RankVerifyError("coefficient matrices differ in shape")

    @property
    def n(self):
        return len(self.coeffs) - 1

    @property
    def rows(self):
        return self.coeffs[0].nrows()

    @property
    def cols(self):
        return self.coeffs[0].ncols()

    @property
    def shape(self):
        return self.rows, self.cols

    def __eq__(self, other):
        return (isinstance(other, LinearPencil) and self.field == other.field
                and len(self.coeffs) == len(other.coeffs)
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def entry(self, r, c):
        return tuple(ex.entries(A)[r * self.cols + c] for A in self.coeffs)

    def entry_str(self, r, c):
        terms = []
        for i, x in enumerate(self.entry(r, c)):
            if x == 0:
                continue
            s = str(x)
            terms.append(f"x{i}" if s == "1" else f"-x{i}" if s == "-1" else f"{s}*x{i}")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def render(self):
        cells = [[self.entry_str(r, c) for c in range(self.cols)] for r in range(self.rows)]
        w = max((len(x) for row in cells for x in row), default=1)
        return "\n".join("[" + "  ".join(x.rjust(w) for x in row) + "]" for row in cells)

    def transpose(self):
        return LinearPencil(tuple(ex.transpose(A) for A in self.coeffs), self.field, dict(self.provenance))

    def reduce_mod(self, p):
        F = ex.GF(p)
        out = []
        for A in self.coeffs:
            out.append(F.matrix(A.nrows(), A.ncols(), ex.entries(A)) if A.nrows() and A.ncols()
                       else F.zeros(A.nrows(), A.ncols()))
        return LinearPencil(tuple(out), F, dict(self.provenance))

    def int_coeffs_mod(self, q):
        """Coefficient array (n+1, a, b) of residues mod q."""
        F = ex.GF(q)
        arr = np.zeros((self.n + 1, self.rows, self.cols), dtype=np.int64)
        for i, A in enumerate(self.coeffs):
            e = ex.entries(A)
            if e:
                arr[i] = np.array([int(F(x)) for x in e], dtype=np.int64).reshape(self.rows, self.cols)
        return arr

    def left_multiply(self, S):
        return LinearPencil(tuple(ex.matmul(S, A) for A in self.coeffs), self.field, dict(self.provenance))

    def right_multiply(self, T):
        return LinearPencil(tuple(ex.matmul(A, T) for A in self.coeffs), self.field, dict(self.provenance))


def pencil_from_rows(rows, n, field=ex.QQ):
    """Pencil from a matrix whose entries are coefficient lists of linear forms."""
    a, b = len(rows), len(rows[0]) if rows else 0
    coeffs = []
    for i in range(n + 1):
        coeffs.append(field.matrix(a, b, [field(rows[r][c][i]) for r in range(a) for c in range(b)]))
    return LinearPencil(tuple(coeffs), field)


def eval_pencil(A, point):
    F = A.field
    pt = [F(x) for x in point]
    if len(pt) != A.n + 1:
        raise RankVerifyError("point has the wrong number of coordinates")
    if all(x == 0 for x in pt):
        raise RankVerifyError("the zero vector is not a projective point")
    M = F.zeros(A.rows, A.cols)
    for x, C in zip(pt, A.coeffs):
        if x != 0:
            M = M + C * x
    return M


# ---- finite field scans ----

def projective_points(n, q):
    """Normalized points of P^n(F_q): first nonzero coordinate equal to 1."""
    blocks = []
    for lead in range(n + 1):
        tail = n - lead
        if tail:
            grid = np.array(list(product(range(q), repeat=tail)), dtype=np.int64)
        else:
            grid = np.zeros((1, 0), dtype=np.int64)
        pts = np.zeros((grid.shape[0], n + 1), dtype=np.int64)
        pts[:, lead] = 1
        pts[:, lead + 1:] = grid
        blocks.append(pts)
    return np.concatenate(blocks)


def batched_rank_mod(M, q):
    """Ranks of a stack of matrices (N, a, b) over F_q by vectorized elimination."""
    M = np.array(M, dtype=np.int64) % q
    N, a, b = M.shape
    if N == 0 or a == 0 or b == 0:
        return np.zeros(N, dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        inv[x] = pow(x, q - 2, q)
    row = np.zeros(N, dtype=np.int64)
    ar = np.arange(a)
    for col in range(b):
        active = row < a
        if not active.any():
            break
        sub = M[:, :, col]
        mask = (sub != 0) & (ar[None, :] >= row[:, None])
        has = mask.any(axis=1) & active
        idx = np.nonzero(has)[0]
        if idx.size == 0:
            continue
        piv = mask[idx].argmax(axis=1)
        r0 = row[idx]
        top = M[idx, r0].copy()
        M[idx, r0] = M[idx, piv]
        M[idx, piv] = top
        pv = M[idx, r0, col]
        prow = (M[idx, r0] * inv[pv][:, None]) % q
        M[idx, r0] = prow
        fac = M[idx, :, col].copy()
        fac[np.arange(idx.size), r0] = 0
        fac[ar[None, :] < r0[:, None]] = 0
        M[idx] = (M[idx] - fac[:, :, None] * prow[:, None, :]) % q
        row[idx] += 1
    return row


def _scan_chunk(args):
    coeffs, q, pts = args
    mats = np.einsum("pi,iab->pab", pts, coeffs) % q
    return batched_rank_mod(mats, q)


@dataclass
class RankProfile:
    strategy: str
    field: str
    points: int
    min_rank: int
    max_rank: int
    witness_min: tuple
    witness_max: tuple

    def to_json(self):
        return {"strategy": self.strategy, "field": self.field, "points": self.points,
                "min_rank": self.min_rank, "max_rank": self.max_rank,
                "witness_min": [str(x) for x in self.witness_min],
                "witness_max": [str(x) for x in self.witness_max]}


@dataclass(frozen=True)
class ExhaustiveFq:
    q: int


@dataclass(frozen=True)
class RandomRational:
    count: int = 1000
    seed: int = 0
    bound: int = 1000


def is_skew(A):
    if A.rows != A.cols:
        return False
    return all(C == -ex.transpose(C) for C in A.coeffs)


def _reducible(A, q):
    if A.field.characteristic not in (0, q):
        return False
    if A.field.characteristic == q:
        return True
    try:
        for C in A.coeffs:
            for x in ex.entries(C):
                ex.GF(q)(x)
    except FieldReductionImpossible:
        return False
    return True


def rank_profile(A, strategy, jobs=1, chunk=200000):
    """Minimum and maximum rank of A over a set of points, with witnesses."""
    skew = is_skew(A)
    if isinstance(strategy, ExhaustiveFq):
        q = strategy.q
        if not _reducible(A, q):
            raise FieldReductionImpossible(f"pencil cannot be reduced mod {q}")
        coeffs = A.int_coeffs_mod(q)
        pts = projective_points(A.n, q)
        parts = [(coeffs, q, pts[s:s + chunk]) for s in range(0, len(pts), chunk)]
        if jobs > 1 and len(parts) > 1:
            with ProcessPoolExecutor(jobs) as pool:
                ranks = np.concatenate(list(pool.map(_scan_chunk, parts)))
        else:
            ranks = np.concatenate([_scan_chunk(p) for p in parts])
        imin, imax = int(ranks.argmin()), int(ranks.argmax())
        prof = RankProfile(f"exhaustive-F{q}", f"GF({q})", len(pts), int(ranks[imin]), int(ranks[imax]),
                           tuple(int(x) for x in pts[imin]), tuple(int(x) for x in pts[imax]))
    elif isinstance(strategy, RandomRational):
        rng = random.Random(strategy.seed)
        F = A.field
        lo = hi = None
        wlo = whi = None
        for _ in range(strategy.count):
            while True:
                if F.characteristic:
                    pt = [rng.randrange(F.characteristic) for _ in range(A.n + 1)]
                else:
                    pt = [rng.randint(-strategy.bound, strategy.bound) for _ in range(A.n + 1)]
                if any(pt):
                    break
            r = ex.rank(eval_pencil(A, pt))
            if lo is None or r < lo:
                lo, wlo = r, tuple(pt)
            if hi is None or r > hi:
                hi, whi = r, tuple(pt)
        prof = RankProfile(f"random-{strategy.count}", F.name, strategy.count, lo, hi, wlo, whi)
    else:
        raise RankVerifyError(f"unknown strategy {strategy!r}")
    if skew:
        assert prof.min_rank % 2 == 0 and prof.max_rank % 2 == 0, "skew pencil with odd rank"
    return prof


@dataclass
class Verdict:
    status: str  # Certified | Refuted | Inconclusive
    rank: int
    profiles: list
    witness: tuple | None = None
    witness_field: str | None = None
    witness_rank: int | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def exit_code(self):
        return {"Certified": 0, "Refuted": 2, "Inconclusive": 3}[self.status]

    def to_json(self):
        return {"format": "conrank.verdict", "format_version": 1, "status": self.status,
                "rank": self.rank, "profiles": [p.to_json() for p in self.profiles],
                "witness": None if self.witness is None else [str(x) for x in self.witness],
                "witness_field": self.witness_field, "witness_rank": self.witness_rank,
                "notes": list(self.notes)}


SPARE_PRIMES = (11, 13, 17, 19, 23, 29, 31, 37, 41, 43)


def _lift_witness(A, pt, q, rho):
    """Integer lifts of an F_q point at which A over QQ has rank other than rho."""
    lifts = [tuple(pt), tuple(x - q if 2 * x > q else x for x in pt)]
    for lift in lifts:
        r = ex.rank(eval_pencil(A, lift))
        if r != rho:
            return lift, r
    return None


def assert_constant_rank(A, rho, primes=(5, 7), samples=1000, seed=0, jobs=1, spare_primes=()):
    """Certified needs clean exhaustive scans over two primes and a random batch.

    A point of rank other than rho in the pencil's own field refutes.  For a
    rational pencil a drop seen only after reduction mod q is tried at its
    integer lifts; if no lift reproduces it the prime counts as a bad
    reduction.  Bad reductions of a constant-rank pencil occur at finitely
    many primes, while a real degeneracy locus shows up at most of them, so
    certification also needs clean primes to outnumber bad ones.  Spare primes
    are scanned only while that is undecided.

    Point scans cannot see a degeneracy locus made of finitely many points
    defined over a number field, so for rational pencils Certified is strong
    evidence rather than a proof.
    """
    profiles, notes = [], []
    clean = bad = 0
    spares = [q for q in spare_primes if q not in primes]

    def decided():
        return clean >= 2 and clean > bad

    for k, q in enumerate(list(primes) + spares):
        if k >= len(primes) and decided():
            break
        if not _reducible(A, q):
            notes.append(f"cannot reduce mod {q}")
            continue
        p = rank_profile(A, ExhaustiveFq(q), jobs=jobs)
        profiles.append(p)
        drops = [(r, w) for r, w in ((p.min_rank, p.witness_min), (p.max_rank, p.witness_max)) if r != rho]
        if not drops:
            clean += 1
            continue
        if A.field.characteristic != 0:
            r, w = drops[0]
            return Verdict("Refuted", rho, profiles, w, p.field, r, notes)
        for r, w in drops:
            lifted = _lift_witness(A, w, q, rho)
            if lifted is not None:
                return Verdict("Refuted", rho, profiles, lifted[0], A.field.name, lifted[1], notes)
        bad += 1
        r, w = drops[0]
        notes.append(f"bad reduction mod {q}: rank {r} at {list(w)} does not lift")
    if samples:
        p = rank_profile(A, RandomRational(samples, seed))
        profiles.append(p)
        for r, w in ((p.min_rank, p.witness_min), (p.max_rank, p.witness_max)):
            if r != rho:
                return Verdict("Refuted", rho, profiles, w, p.field, r, notes)
    if not decided():
        notes.append(f"{clean} clean prime(s) against {bad} bad reduction(s)")
        return Verdict("Inconclusive", rho, profiles, notes=notes)
    return Verdict("Certified", rho, profiles, notes=notes)


def left_skew_symmetrize(A, tries=20, seed=0):
    """Find an invertible S with S*A skew-symmetric, or None."""
    if A.rows != A.cols:
        raise NotSquare("pencil is not square")
    F = A.field
    a = A.rows
    # unknown S (a x a) row-major; (S C)_{pq} = sum_r S_{pr} C_{rq}
    eqs = []
    for C in A.coeffs:
        ce = ex.entries(C)
        for p in range(a):
            for q in range(p, a):
                row = [F(0)] * (a * a)
                for r in range(a):
                    row[p * a + r] += ce[r * a + q]
                    row[q * a + r] += ce[r * a + p]
                eqs.append(row)
    M = F.matrix(len(eqs), a * a, [x for r in eqs for x in r])
    K = ex.kernel_basis(M)
    if K.ncols() == 0:
        return None
    Ke = ex.entries(K)
    k = K.ncols()
    rng = random.Random(seed)
    for t in range(tries):
        if t == 0 and k == 1:
            coef = [F(1)]
        else:
            coef = [F(rng.randint(-5, 5)) for _ in range(k)]
        vec = [sum((Ke[i * k + j] * coef[j] for j in range(k)), F(0)) for i in range(a * a)]
        S = F.matrix(a, a, vec)
        if ex.rank(S) == a:
            return S
    return None


def skew_complete(upper_rows, field=ex.QQ):
    """Skew-symmetric matrix from its upper triangle rows (diagonal included)."""
    a = len(upper_rows)
    flat = [field(0)] * (a * a)
    for r, row in enumerate(upper_rows):
        for k, x in enumerate(row):
            c = r + k
            v = field(x)
            flat[r * a + c] = v
            if c != r:
                flat[c * a + r] = -v
    return field.matrix(a, a, flat)


def random_full_rank(rows, cols, field, rng, lo=-3, hi=3):
    while True:
        M = field.matrix(rows, cols, [field.random(rng, lo, hi) for _ in range(rows * cols)])
        if ex.rank(M) == min(rows, cols):
            return M


def project_pencil(A, alpha, beta, seed=None, lo=-3, hi=3):
    """L * A * N with L (alpha x rows) and N (cols x beta) random of full rank.

    Without a seed the projections keep the leading rows and columns.
    """
    if alpha > A.rows or beta > A.cols:
        raise RankVerifyError("projection cannot enlarge the pencil")
    F = A.field
    if seed is None:
        L = F.matrix(alpha, A.rows, [1 if j == i else 0 for i in range(alpha) for j in range(A.rows)])
        N = F.matrix(A.cols, beta, [1 if i == j else 0 for i in range(A.cols) for j in range(beta)])
    else:
        rng = random.Random(seed)
        L = random_full_rank(alpha, A.rows, F, rng, lo, hi)
        N = random_full_rank(A.cols, beta, F, rng, lo, hi)
    out = A.left_multiply(L).right_multiply(N)
    out.provenance = dict(A.provenance, projection={"alpha": alpha, "beta": beta, "seed": seed})
    return out


def find_sign_equivalence(A, B):
    """Row, column and variable signs s, t, v with B = diag(s) A(v*x) diag(t), or None.

    Solved as a linear system over GF(2) on the supports, which must agree.
    """
    if A.shape != B.shape or A.n != B.n:
        return None
    a, b, n = A.rows, A.cols, A.n
    eqs = []
    for i in range(n + 1):
        ae, be = ex.entries(A.coeffs[i]), ex.entries(B.coeffs[i])
        for r in range(a):
            for c in range(b):
                x, y = ae[r * b + c], be[r * b + c]
                if x == 0 and y == 0:
                    continue
                if x == y:
                    bit = 0
                elif x == -y:
                    bit = 1
                else:
                    return None
                eqs.append(([r, a + c, a + b + i], bit))
    nv = a + b + n + 1
    # Gaussian elimination over GF(2) on bit rows
    rows = []
    for vars_, bit in eqs:
        v = 0
        for j in vars_:
            v ^= 1 << j
        rows.append((v, bit))
    pivots = {}
    for v, bit in rows:
        for j, (pv, pb) in pivots.items():
            if v >> j & 1:
                v ^= pv
                bit ^= pb
        if v == 0:
            if bit:
                return None
            continue
        j = v.bit_length() - 1
        for k in list(pivots):
            pv, pb = pivots[k]
            if pv >> j & 1:
                pivots[k] = (pv ^ v, pb ^ bit)
        pivots[j] = (v, bit)
    sol = [0] * nv
    for j, (v, bit) in pivots.items():
        sol[j] = bit  # free variables set to 0
    sign = [(-1) ** s for s in sol]
    return sign[:a], sign[a:a + b], sign[a + b:]
