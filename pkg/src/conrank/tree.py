"""Search trees of successive reductions starting from a linearly presented module."""
import json
from dataclasses import dataclass, field as dc_field

from .betti import BettiTable, koszul_betti
from .catalog import compatible_candidates
from .errors import NoSurjectionFound, NotFinitelyGeneratedInWindow, RootNotLinear
from .reduction import linear_part_cokernel, sample_reduction

LINEAR = "Linear"
NOT_LINEAR = "NotLinear"
NU_NOT_ARTINIAN = "NuNotArtinian"
MU1_FAILS = "Mu1NotSurjective"
NO_CANDIDATES = "NoCandidates"
EXHAUSTED = "NoCandidates-Exhausted"

WITH_PENCIL = (LINEAR, NOT_LINEAR, NO_CANDIDATES)


@dataclass
class TreeNode:
    betti: BettiTable
    m: int
    status: str
    shape: tuple
    rank: int
    path: tuple = ()
    children: list = dc_field(default_factory=list)
    window: object = None
    pencil: object = None
    diagnostics: object = None

    @property
    def strand(self):
        return self.betti.strand(self.m, 3)

    @property
    def has_pencil(self):
        return self.status in WITH_PENCIL

    def linear_part_betti(self, hi=None, i_max=None):
        """Betti table of the module presented by the node's linear part.

        For nodes whose kernel has nonlinear relations this is the table of
        the linearly presented module that the pencil actually defines.
        """
        if self.pencil is None:
            return self.betti
        n = self.pencil.n
        hi = self.m + 4 * (n + 1) - 1 if hi is None else hi
        W = linear_part_cokernel(self.pencil, self.m, hi)
        return koszul_betti(W, i_max=n + 1 if i_max is None else i_max)

    def to_json(self):
        return {"betti": self.betti.to_json(), "m": self.m, "status": self.status,
                "shape": list(self.shape), "rank": self.rank, "path": list(self.path),
                "diagnostics": None if self.diagnostics is None else self.diagnostics.to_json(),
                "children": [c.to_json() for c in self.children]}


@dataclass
class ConstructionTree:
    root: TreeNode
    bundle_rank: int
    depth: int
    seed: int

    def nodes(self):
        stack = [self.root]
        while stack:
            v = stack.pop(0)
            yield v
            stack.extend(v.children)

    def to_json(self):
        return {"format": "conrank.tree", "format_version": 1, "bundle_rank": self.bundle_rank,
                "depth": self.depth, "seed": self.seed, "root": self.root.to_json()}

    def render(self):
        lines = []

        def walk(v, indent):
            a, b = v.shape
            edge = v.path[-1] if v.path else "E"
            lines.append(f"{'  ' * indent}{edge}: ({a}x{b}, {v.rank}) strand {list(v.strand)} [{v.status}]")
            for c in v.children:
                walk(c, indent + 1)
        walk(self.root, 0)
        return "\n".join(lines)

    def to_dot(self):
        out = ["digraph construction {", '  node [shape=box, fontname="monospace"];']
        ids = {}
        for k, v in enumerate(self.nodes()):
            ids[id(v)] = f"n{k}"
            a, b = v.shape
            label = f"({a}x{b}, {v.rank})\\n{v.status}"
            style = ", style=bold" if v.has_pencil else ""
            out.append(f'  n{k} [label="{label}"{style}];')
        for v in self.nodes():
            for c in v.children:
                out.append(f'  {ids[id(v)]} -> {ids[id(c)]} [label="{c.path[-1]}"];')
        out.append("}")
        return "\n".join(out)


def _node_betti(W, n):
    return koszul_betti(W, i_max=n)


def build_tree(E, depth=1, attempts=10, seed=0, max_multiplicity=None):
    """Expand every compatible Artinian candidate breadth first down to ``depth``.

    Along each path the dual-power index t strictly increases, so every
    multiset of subtracted modules is reached once.
    """
    n = E.n
    B = _node_betti(E, n)
    m = B.m
    if m is None or not B.is_linear(upto=1):
        raise RootNotLinear("the root module is not linearly presented")
    r = B.alternating_sum()
    a, b = B[(0, m)], B[(1, m + 1)]
    root = TreeNode(B, m, LINEAR, (a, b), a - r, (), window=E)
    level = [(root, 0)]
    for dep in range(depth):
        nxt = []
        for node, last_t in level:
            if node.status != LINEAR:
                continue
            cands = compatible_candidates(node.betti, n, max_multiplicity, rank=r, min_t=last_t + 1)
            if not cands:
                node.status = NO_CANDIDATES
                continue
            for c in cands:
                child = expand(node, c, r, attempts, seed)
                node.children.append(child)
                nxt.append((child, c.t))
        level = nxt
    return ConstructionTree(root, r, depth, seed)


def expand(node, cand, r, attempts, seed):
    E = node.window
    n = E.n
    G = cand.window(E.field, hi=E.hi)
    path = node.path + (cand.label,)
    strand = node.betti.strand(node.m, n + 1)
    exp = tuple(x - y for x, y in zip(strand, cand.strand))
    try:
        res = sample_reduction(E, G, attempts=attempts, seed=seed)
    except (NoSurjectionFound, NotFinitelyGeneratedInWindow):
        return TreeNode(BettiTable.from_strand(exp, node.m), node.m, EXHAUSTED,
                        (exp[0], exp[1]), exp[0] - r, path)
    d = res.diagnostics
    Fw = res.F
    Bf = _node_betti(Fw, n)
    a, b = res.pencil.shape
    if not d.mu1_surjective:
        status = MU1_FAILS
    elif d.linear_presentation:
        status = LINEAR
    elif d.coker_nu2_artinian:
        status = NOT_LINEAR
    else:
        status = NU_NOT_ARTINIAN
    return TreeNode(Bf, node.m, status, (a, b), a - r, path, window=Fw, pencil=res.pencil, diagnostics=d)


def enumerate_pencils(tree):
    """(rows, cols, rank, path) for every node whose linear part has constant rank."""
    return [(v.shape[0], v.shape[1], v.rank, v.path) for v in tree.nodes() if v.has_pencil]
