"""Constructions: Westwick matrices, Steiner bundles, monads and the line-bundle pipeline."""
import random
from dataclasses import dataclass, field as dc_field

from . import exact as ex
from . import datasets
from .catalog import matlis_dual_power
from .errors import DegenerateSample, MonadConditionFailed, NoSurjectionFound
from .graded import (GradedFreeMap, GradedFreeModule, free_homology_window, free_module_window,
                     random_form, truncate, window_from_presentation)
from .pencil import (LinearPencil, assert_constant_rank, eval_pencil, pencil_from_rows,
                     projective_points)
from .reduction import hom_degree_zero, reduce, sample_reduction
from .errors import MuNotSurjective


def westwick_pencil(n, k, field=ex.QQ):
    """The (kn+1) x (kn+n-1) matrix of linear forms of constant rank kn.

    Entry (i, j) (1-based) is x_l with l = j-i+1 in 0..n, scaled by a-l when
    j = a(k+1) and by 1 otherwise.
    """
    a_rows, b_cols = k * n + 1, k * n + n - 1
    rows = []
    for i in range(1, a_rows + 1):
        row = []
        for j in range(1, b_cols + 1):
            c = [0] * (n + 1)
            l = j - i + 1
            if 0 <= l <= n:
                if j % (k + 1) == 0:
                    c[l] = j // (k + 1) - l
                else:
                    c[l] = 1
            row.append(c)
        rows.append(row)
    A = pencil_from_rows(rows, n, field)
    A.provenance = {"construction": "westwick", "n": n, "k": k}
    return A


# ---- Steiner bundles ----

def _pointwise_full_rank(maps_at_point, n, field, q=None, samples=200, seed=0):
    """Check a pointwise rank condition on P^n(F_q) and at random rational points.

    ``maps_at_point(pt, F)`` returns True when the condition holds at pt.
    """
    rng = random.Random(seed)
    if q is None:
        q = {1: 101, 2: 31, 3: 11}.get(n, 5)
    if field.characteristic == 0:
        for pt in projective_points(n, q):
            if not maps_at_point([int(x) for x in pt], ex.GF(q)):
                return tuple(int(x) for x in pt), f"GF({q})"
        for _ in range(samples):
            pt = [rng.randint(-50, 50) for _ in range(n + 1)]
            if any(pt) and not maps_at_point(pt, field):
                return tuple(pt), field.name
    else:
        for _ in range(samples):
            pt = [rng.randrange(field.characteristic) for _ in range(n + 1)]
            if any(pt) and not maps_at_point(pt, field):
                return tuple(pt), field.name
    return None


def _eval_free_map(phi, pt, F):
    """Evaluate a map of free modules at a point (entries of any degree)."""
    r, c = phi.shape
    flat = []
    for j in range(r):
        for k in range(c):
            acc = F(0)
            for e, coef in phi.entries[j][k].items():
                term = F(coef)
                for v, x in zip(e, pt):
                    if x:
                        term = term * F(x) ** v
                    elif v:
                        term = F(0)
                acc += term
            flat.append(acc)
    return F.matrix(r, c, flat) if flat else F.zeros(r, c)


def steiner_presentation(n, s, r, m, seed=0, field=ex.QQ):
    """Random phi: R(-m-1)^s -> R^(s+r) with entries forms of degree m+1."""
    rng = random.Random(seed)
    src = GradedFreeModule(n, [m + 1] * s, field)
    tgt = GradedFreeModule(n, [0] * (s + r), field)
    ent = [[random_form(n, m + 1, field, rng) for _ in range(s)] for _ in range(s + r)]
    return GradedFreeMap(src, tgt, ent)


def steiner_module(n, s, r, m, seed=0, field=ex.QQ, lo=0, hi=None, tries=10):
    """Window of the sections module of a Steiner bundle 0 -> O(-m-1)^s -> O^(s+r) -> E -> 0.

    The random phi is resampled (derived seeds) while it drops rank at a checked point.
    """
    if r < n:
        raise ValueError("need r >= n for a bundle")
    if hi is None:
        hi = m + n + 4
    last = None
    for t in range(tries):
        phi = steiner_presentation(n, s, r, m, seed * 1000 + t, field)
        bad = _pointwise_full_rank(lambda pt, F: ex.rank(_eval_free_map(phi, pt, F)) == s, n, field)
        if bad is None:
            W = window_from_presentation(phi, 0, hi)
            return truncate(W, lo) if lo > 0 else W
        last = bad
    if last is None:
        raise DegenerateSample("no presentation sampled (tries must be positive)")
    raise DegenerateSample(f"phi drops rank at {last[0]} over {last[1]}")


# ---- monads ----

@dataclass
class MonadSpec:
    """A --f--> B --g--> C with g f = 0, f injective and g surjective at every point."""

    f: GradedFreeMap
    g: GradedFreeMap
    name: str = ""
    meta: dict = dc_field(default_factory=dict)

    @property
    def n(self):
        return self.f.n

    @property
    def rank(self):
        return self.g.source.rank - self.f.source.rank - self.g.target.rank


def check_monad(M, seed=0):
    if not M.g.compose(M.f).is_zero():
        raise MonadConditionFailed("g o f is not zero")
    a, c = M.f.source.rank, M.g.target.rank
    F = M.f.field

    def ok(pt, K):
        return ex.rank(_eval_free_map(M.f, pt, K)) == a and ex.rank(_eval_free_map(M.g, pt, K)) == c
    bad = _pointwise_full_rank(ok, M.n, F, seed=seed)
    if bad is not None:
        raise MonadConditionFailed(f"monad degenerates at {bad[0]} over {bad[1]}")


def monad_cohomology_module(M, lo, hi, check=True):
    """Window of the sections module ker(g)/im(f); valid since H^1 of line bundles vanishes (n >= 2)."""
    if check:
        check_monad(M)
    return free_homology_window(M.f.target, lo, hi, incoming=M.f, outgoing=M.g)


def special_instanton_monad(field=ex.QQ):
    """The charge-2 instanton monad O(-1)^2 -> O^6 -> O(1)^2 with the built-in f and g."""
    f_rows, g_rows = datasets.INSTANTON_F, datasets.INSTANTON_G
    f = _linear_map(3, [1, 1], [0] * 6, f_rows, field)
    g = _linear_map(3, [0] * 6, [-1, -1], g_rows, field)
    return MonadSpec(f, g, "instanton-2-2-special")


def _linear_map(n, src, tgt, rows, field):
    ent = []
    for row in rows:
        out = []
        for entry in row:
            p = {}
            for coef, var in entry:
                e = [0] * (n + 1)
                e[var] = 1
                p[tuple(e)] = field(coef)
            out.append(p)
        ent.append(out)
    return GradedFreeMap(GradedFreeModule(n, src, field), GradedFreeModule(n, tgt, field), ent)


def null_correlation_monad(c=1, d=0, e=0, seed=0, field=ex.QQ):
    """O(-c) -> O(d)+O(e)+O(-e)+O(-d) -> O(c) on P^3 with g = (-f4, -f3, f2, f1)."""
    if not (c > d >= e >= 0):
        raise ValueError("need c > d >= e >= 0")
    n = 3
    rng = random.Random(seed)
    degs = [c + d, c + e, c - e, c - d]
    for _ in range(20):
        fs = [random_form(n, k, field, rng) for k in degs]
        A = GradedFreeModule(n, [c], field)
        B = GradedFreeModule(n, [-d, -e, e, d], field)
        C = GradedFreeModule(n, [-c], field)
        f = GradedFreeMap(A, B, [[p] for p in fs])
        neg = lambda p: {k: -v for k, v in p.items()}
        g = GradedFreeMap(B, C, [[neg(fs[3]), neg(fs[2]), fs[1], fs[0]]])
        M = MonadSpec(f, g, "null-correlation", {"c": c, "d": d, "e": e, "seed": seed})
        try:
            check_monad(M)
            return M
        except MonadConditionFailed:
            continue
    raise DegenerateSample("no nondegenerate null-correlation monad found")


def instanton_module(lo=0, hi=6, field=ex.QQ):
    return monad_cohomology_module(special_instanton_monad(field), lo, hi)


# ---- line bundles ----

def line_bundle_pipeline(s, seed=0, attempts=20, primes=(5, 7), samples=1000, certify=True):
    """A (2s+1) x (2s+1) pencil of constant rank 2s on P^2.

    E = R_{>=s}, G = dual of R/m^(s-1) in degrees s..2s-2 (zero for s = 1) and
    F = ker(E -> G).  With ``certify`` the random map is resampled until the
    pencil certifies over the given primes; rejected samples are recorded.
    """
    if s < 1:
        raise ValueError("s must be positive")
    n = 2
    F = ex.QQ
    R = GradedFreeModule(n, [0], F)
    hi = 2 * s + 3
    E = truncate(free_module_window(R, 0, hi), s)
    rejected = []
    rng_seed = seed
    for k in range(attempts):
        if s == 1:
            from .resolution import minimal_presentation
            pres = minimal_presentation(E)
            pencil = LinearPencil(tuple(pres.linear_part()), F)
            diag = None
        else:
            G = matlis_dual_power(s - 1, s, n, F, pad=hi - (2 * s - 2))
            res = sample_reduction(E, G, attempts=attempts, seed=rng_seed * 997 + k)
            pencil, diag = res.pencil, res.diagnostics
        pencil.provenance = {"construction": "line-bundle", "s": s, "seed": seed, "attempt": k}
        if not certify:
            return pencil
        v = assert_constant_rank(pencil, 2 * s, primes=primes, samples=samples, seed=seed)
        if v.status == "Certified":
            pencil.provenance["rejected"] = rejected
            return pencil
        rejected.append({"attempt": k, "status": v.status, "witness": [str(x) for x in v.witness or []],
                         "field": v.witness_field})
    raise NoSurjectionFound(f"no certified pencil in {attempts} attempts")


# ---- built-in examples ----

def displayed_line_bundle_pencil(field=ex.QQ):
    """The explicit 5x5 pencil of constant rank 4 stored in ``datasets``."""
    A = pencil_from_rows(datasets.entries_to_rows(datasets.WESTWICK_2_2_DISPLAY, 2), 2, field)
    A.provenance = {"construction": "builtin", "name": "westwick-2-2"}
    return A


def skew_example_pencil(field=ex.QQ):
    """The 10x10 skew pencil on P^3; only upper triangles are stored, the rest is completed."""
    from .pencil import skew_complete
    coeffs = tuple(skew_complete(rows, field) for rows in datasets.SKEW_10_UPPER)
    return LinearPencil(coeffs, field, {"construction": "builtin", "name": "skew-10x10",
                                        "lower_triangle": "derived by skew completion"})


BUILTIN_PENCILS = {
    "westwick-2-2": (displayed_line_bundle_pencil, 4),
    "skew-10x10": (skew_example_pencil, 8),
}


def builtin_pencil(name, field=ex.QQ):
    if name not in BUILTIN_PENCILS:
        raise KeyError(f"unknown built-in pencil {name!r}; have {sorted(BUILTIN_PENCILS)}")
    return BUILTIN_PENCILS[name][0](field)
