"""Levelled trees, their elementary morphisms and the functors Omega, u and w.

A levelled tree is a tuple of levels read from the root; a level is a tuple of
vertices (kind, arity) with kind "w" (white), "v" (vertical) or "h"
(horizontal).  Edges only join consecutive levels, so the vertex (b, p) has
the children at level b + 1 numbered after the arities of the vertices to its
left.  The tree with no levels is the exceptional tree (a bare edge, arity 1).

Vertex kinds are ordered h < v < w; contracting two levels gives every merged
vertex the largest kind of its group.
"""

from . import finset
from .finset import FinMap
from .lat import LEAF, TamElement, TmElement, normalize, num_leaves, to_sexpr, validate as validate_lat
from .omega import Colored, KTree, prune
from .opcat import OperadicCategory

KINDS = ("h", "v", "w")
RANK = {"h": 0, "v": 1, "w": 2}
_KIND_SET = frozenset(KINDS)


class LevelError(ValueError):
    pass


class LevelledTree:
    __slots__ = ("levels", "_hash")

    def __init__(self, levels, check=True):
        self.levels = tuple(tuple((k, int(a)) for k, a in lev) for lev in levels)
        self._hash = hash(self.levels)
        if check:
            self._check()

    def _check(self):
        levels = self.levels
        if not levels:
            return
        if len(levels[0]) != 1:
            raise LevelError("level 1 must have exactly one vertex")
        n = len(levels)
        for b, lev in enumerate(levels, 1):
            if not lev:
                raise LevelError(f"level {b} is empty")
            kinds = set()
            total = 0
            for k, a in lev:
                kinds.add(k)
                if a < 0:
                    raise LevelError("negative arity")
                total += a
            if not kinds <= _KIND_SET:
                raise LevelError(f"unknown kind in level {b}")
            if "h" in kinds and len(kinds) > 1:
                raise LevelError(f"level {b} mixes horizontal and other vertices")
            if b < n and total != len(levels[b]):
                raise LevelError(f"arities at level {b} sum to {total} "
                                 f"but level {b + 1} has {len(levels[b])} vertices")

    def __eq__(self, other):
        return self is other or (isinstance(other, LevelledTree) and self._hash == other._hash
                                 and self.levels == other.levels)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return to_literal(self)

    @property
    def height(self):
        return len(self.levels)

    @property
    def arity(self):
        if not self.levels:
            return 1
        return sum(a for _, a in self.levels[-1])

    def is_exceptional(self):
        return not self.levels

    def level_type(self, b):
        """1 for type (i) levels, 2 for levels of horizontal vertices."""
        return 2 if self.levels[b - 1][0][0] == "h" else 1

    def vertex(self, b, p):
        return self.levels[b - 1][p - 1]

    def children(self, b, p):
        """Positions at level b + 1 of the children of (b, p)."""
        lev = self.levels[b - 1]
        start = sum(a for _, a in lev[:p - 1])
        return list(range(start + 1, start + lev[p - 1][1] + 1))

    def parent(self, b, q):
        """Position at level b - 1 of the parent of (b, q)."""
        acc = 0
        for p, (_, a) in enumerate(self.levels[b - 2], 1):
            acc += a
            if q <= acc:
                return p
        raise LevelError("no parent")

    def whites(self):
        """White vertices in lexicographic order: level first, then position."""
        return [(b, p) for b, lev in enumerate(self.levels, 1)
                for p, (k, _) in enumerate(lev, 1) if k == "w"]

    def vertices(self):
        return [(b, p) for b, lev in enumerate(self.levels, 1) for p in range(1, len(lev) + 1)]


EXCEPTIONAL = LevelledTree(())


def white_corolla(n):
    return LevelledTree([[("w", n)]])


def to_literal(beta):
    if not beta.levels:
        return "ltr: |"
    return "ltr: " + " / ".join(",".join(f"{k}{a}" for k, a in lev) for lev in beta.levels)


# ---------------------------------------------------------------------------
# planar structure


def planar(beta):
    """Nested planar tree with LTr vertex ids: ((b, p), kind, children) or LEAF."""
    if not beta.levels:
        return LEAF
    h = beta.height

    def build(b, p):
        kind, a = beta.vertex(b, p)
        if b == h:
            kids = (LEAF,) * a
        else:
            kids = tuple(build(b + 1, q) for q in beta.children(b, p))
        return ((b, p), kind, kids)
    return build(1, 1)


def white_labels(beta):
    return {v: n for n, v in enumerate(beta.whites(), 1)}


def bar(beta):
    """The Tamarkin-Tsygan tree: label whites, forget levels, verticals become
    black, black-black edges are contracted and arity-one blacks erased."""
    labels = white_labels(beta)

    def conv(x):
        if x == LEAF:
            return LEAF
        vid, kind, kids = x
        kk = tuple(conv(c) for c in kids)
        if kind == "w":
            return ("w", labels[vid], kk)
        return ("b", kk)
    return normalize(conv(planar(beta)))


def omega_of(beta):
    """The colored 2-tree: one 1-vertex per type (i) level, one 2-leaf per white."""
    if not beta.levels:
        return Colored(KTree((0, 0), (FinMap(0, ()),)), (), 1)
    rows = [b for b in range(1, beta.height + 1) if beta.level_type(b) == 1]
    row_of = {b: n for n, b in enumerate(rows, 1)}
    ws = beta.whites()
    t = FinMap(len(rows), [row_of[b] for b, _ in ws])
    return Colored(KTree((len(ws), len(rows)), (t,)), [beta.vertex(b, p)[1] for b, p in ws],
                   beta.arity)


def u_of(beta):
    return TamElement(prune(omega_of(beta)), bar(beta), check=False)


def w_of(beta):
    return TmElement(omega_of(beta), bar(beta), check=False)


# ---------------------------------------------------------------------------
# elementary morphisms


class LTrMorphism:
    """A morphism given by its vertex map: source vertex -> target vertex."""

    __slots__ = ("source", "target", "vmap", "_hash")

    def __init__(self, source, target, vmap):
        self.source = source
        self.target = target
        self.vmap = tuple(sorted(dict(vmap).items()))
        self._hash = hash((source, target, self.vmap))

    def __eq__(self, other):
        return self is other or (isinstance(other, LTrMorphism) and self._hash == other._hash
                                 and self.vmap == other.vmap and self.source == other.source
                                 and self.target == other.target)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.source!r} => {self.target!r}"

    def __call__(self, v):
        return dict(self.vmap)[v]


def identity_morphism(beta):
    return LTrMorphism(beta, beta, {v: v for v in beta.vertices()})


def compose_morphisms(g, f):
    gm = dict(g.vmap)
    return LTrMorphism(f.source, g.target, {v: gm[w] for v, w in f.vmap})


def contract_morphism(beta, b):
    """The Type 1 morphism merging levels b and b+1."""
    if not (1 <= b < beta.height):
        raise LevelError(f"cannot contract levels {b}, {b + 1} of a tree of height {beta.height}")
    levels = list(beta.levels)
    merged = []
    vmap = {}
    for p, (kind, a) in enumerate(levels[b - 1], 1):
        kids = beta.children(b, p)
        kind = max([kind] + [levels[b][q - 1][0] for q in kids], key=RANK.get)
        merged.append((kind, sum(levels[b][q - 1][1] for q in kids)))
        vmap[b, p] = (b, p)
        for q in kids:
            vmap[b + 1, q] = (b, p)
    kinds = {k for k, _ in merged}
    if "h" in kinds and kinds != {"h"}:
        raise LevelError("contraction would mix horizontal and other vertices")
    new = levels[:b - 1] + [tuple(merged)] + levels[b + 1:]
    for c in range(1, beta.height + 1):
        for p in range(1, len(levels[c - 1]) + 1):
            if c < b:
                vmap[c, p] = (c, p)
            elif c > b + 1:
                vmap[c, p] = (c - 1, p)
    return LTrMorphism(beta, LevelledTree(new), vmap)


def promote_vertical_morphism(beta, b, p):
    kind, a = beta.vertex(b, p)
    if kind != "v":
        raise LevelError(f"vertex ({b}, {p}) is not vertical")
    levels = [list(lev) for lev in beta.levels]
    levels[b - 1][p - 1] = ("w", a)
    return LTrMorphism(beta, LevelledTree(levels), {v: v for v in beta.vertices()})


def promote_level_morphism(beta, b):
    if beta.level_type(b) != 2:
        raise LevelError(f"level {b} is not a level of horizontal vertices")
    levels = [list(lev) for lev in beta.levels]
    levels[b - 1] = [("v", a) for _, a in levels[b - 1]]
    return LTrMorphism(beta, LevelledTree(levels), {v: v for v in beta.vertices()})


def insert_morphism(beta, b):
    """Insert after level b (0 <= b <= height) a level of arity-one whites."""
    if not (0 <= b <= beta.height):
        raise LevelError(f"level {b} out of range")
    width = 1 if b == 0 else sum(a for _, a in beta.levels[b - 1])
    if width == 0:
        raise LevelError("there is nothing to insert a level into")
    levels = list(beta.levels)
    new = levels[:b] + [(("w", 1),) * width] + levels[b:]
    vmap = {(c, p): ((c, p) if c <= b else (c + 1, p)) for c, p in beta.vertices()}
    return LTrMorphism(beta, LevelledTree(new), vmap)


STEP_NAMES = ("contract", "promote-vertical", "promote-level", "insert")


def apply_step(beta, step):
    """step is ("contract", b) | ("promote-vertical", b, p) | ("promote-level", b) | ("insert", b)."""
    name = step[0]
    if name == "contract":
        return contract_morphism(beta, step[1])
    if name == "promote-vertical":
        return promote_vertical_morphism(beta, step[1], step[2])
    if name == "promote-level":
        return promote_level_morphism(beta, step[1])
    if name == "insert":
        return insert_morphism(beta, step[1])
    raise LevelError(f"unknown step {step!r}")


def elementary_steps(beta):
    """All applicable elementary steps."""
    out = []
    for b in range(1, beta.height):
        try:
            contract_morphism(beta, b)
            out.append(("contract", b))
        except LevelError:
            pass
    for b, p in beta.vertices():
        if beta.vertex(b, p)[0] == "v":
            out.append(("promote-vertical", b, p))
    for b in range(1, beta.height + 1):
        if beta.level_type(b) == 2:
            out.append(("promote-level", b))
    for b in range(0, beta.height + 1):
        width = 1 if b == 0 else sum(a for _, a in beta.levels[b - 1])
        if width:
            out.append(("insert", b))
    return out


def contract_levels(beta, b):
    """Merge levels b and b+1; returns the new tree and the fibers over its whites."""
    f = contract_morphism(beta, b)
    return f.target, [fiber(f, i) for i in range(1, len(f.target.whites()) + 1)]


def promote(beta, step):
    """Apply ("promote-vertical", b, p) or ("promote-level", b)."""
    if step[0] not in ("promote-vertical", "promote-level"):
        raise LevelError(f"not a promotion: {step!r}")
    return apply_step(beta, step).target


def insert_unit_level(beta, b):
    return insert_morphism(beta, b).target


def preimage_tree(f, y):
    """The levelled tree formed by the source vertices mapped to y, with its vertex list."""
    src = f.source
    pts = sorted(v for v, w in f.vmap if w == y)
    if not pts:
        return EXCEPTIONAL, []
    lv = sorted({b for b, _ in pts})
    levels = []
    for b in lv:
        levels.append([src.vertex(b, p) for c, p in pts if c == b])
    return LevelledTree(levels), pts


def fiber(f, i):
    """The fiber over the i-th white of the target."""
    y = f.target.whites()[i - 1]
    return preimage_tree(f, y)[0]


def card_map(f):
    tw = white_labels(f.target)
    m = dict(f.vmap)
    return FinMap(len(tw), [tw[m[v]] for v in f.source.whites()])


def _fiber_coords(pts):
    """Map source vertex -> (level index, position) inside its preimage tree."""
    lv = sorted({b for b, _ in pts})
    idx = {b: n for n, b in enumerate(lv, 1)}
    pos = {}
    count = {}
    for b, p in pts:
        count[b] = count.get(b, 0) + 1
        pos[b, p] = (idx[b], count[b])
    return pos


def fiber_map(f, g, i):
    """f_i : (g o f)^-1(i) -> g^-1(i)."""
    h = compose_morphisms(g, f)
    y = g.target.whites()[i - 1]
    src_tree, src_pts = preimage_tree(h, y)
    tgt_tree, tgt_pts = preimage_tree(g, y)
    sp, tp = _fiber_coords(src_pts), _fiber_coords(tgt_pts)
    fm = dict(f.vmap)
    return LTrMorphism(src_tree, tgt_tree, {sp[v]: tp[fm[v]] for v in src_pts})


def u_on_step(beta, step):
    """The Tam morphism u(f) for an elementary step f at beta.

    Returns (sigma, fibers) where fibers are the u-images of the fibers of f;
    ``check_u_on_step`` replays the multiplication.
    """
    f = apply_step(beta, step) if not isinstance(step, LTrMorphism) else step
    sigma = card_map(f)
    fibers = [u_of(fiber(f, i)) for i in range(1, len(f.target.whites()) + 1)]
    return f, sigma, fibers


def check_u_on_step(beta, step):
    """True iff m(u(fibers); u(target)) = u(source)."""
    from .lat import tam_multiply
    f, sigma, fibers = u_on_step(beta, step)
    src = u_of(f.source)
    got = tam_multiply(u_of(f.target), sigma, fibers, source=src.ordinal)
    return got == src


# ---------------------------------------------------------------------------
# moves preserving the w-image
#
#   ("ins-h", b)        insert a level of arity-one horizontals after level b
#   ("del-h", b)        delete level b if it consists of arity-one horizontals
#   ("merge-h", b)      contract the adjacent horizontal levels b, b+1
#   ("split-h", b, s)   split horizontal level b; s[p] lists the arities of the
#                       new children of vertex p
#   ("vh", b, p)        vertical v1 over horizontal h_n  ->  v_n over n h1
#   ("vh-inv", b, p)    the inverse
#   ("hv", b, p)        horizontal h1 over vertical v_n  ->  h_n over n v1
#   ("hv-inv", b, p)    the inverse


class MoveError(LevelError):
    pass


def _levels(beta):
    return [list(lev) for lev in beta.levels]


def _offset(levels, b, p):
    """Number of level b+1 vertices left of the children of (b, p)."""
    return sum(a for _, a in levels[b - 1][:p - 1])


def _is_h(levels, b):
    return 1 <= b <= len(levels) and levels[b - 1][0][0] == "h"


def _is_i(levels, b):
    return 1 <= b <= len(levels) and levels[b - 1][0][0] != "h"


def _build(levels):
    levels = [lev for lev in levels]
    while levels and not levels[-1]:
        levels.pop()
    return LevelledTree(levels)


def apply_move(beta, move):
    L = _levels(beta)
    name = move[0]
    n_lev = len(L)
    if name == "ins-h":
        b = move[1]
        if not (0 <= b <= n_lev):
            raise MoveError("level out of range")
        width = 1 if b == 0 else sum(a for _, a in L[b - 1])
        if width == 0:
            raise MoveError("nothing to insert into")
        return LevelledTree(L[:b] + [[("h", 1)] * width] + L[b:])
    if name == "del-h":
        b = move[1]
        if not (1 <= b <= n_lev) or any(v != ("h", 1) for v in L[b - 1]):
            raise MoveError("level is not a level of arity-one horizontals")
        return LevelledTree(L[:b - 1] + L[b:])
    if name == "merge-h":
        b = move[1]
        if not (_is_h(L, b) and _is_h(L, b + 1)):
            raise MoveError("levels are not both horizontal")
        merged = [("h", sum(L[b][q - 1][1] for q in beta.children(b, p)))
                  for p in range(1, len(L[b - 1]) + 1)]
        return LevelledTree(L[:b - 1] + [merged] + L[b + 1:])
    if name == "split-h":
        b, spec = move[1], move[2]
        if not _is_h(L, b) or len(spec) != len(L[b - 1]):
            raise MoveError("bad split")
        if any(sum(s) != a for s, (_, a) in zip(spec, L[b - 1])):
            raise MoveError("split does not preserve arities")
        top = [("h", len(s)) for s in spec]
        below = [("h", a) for s in spec for a in s]
        if not below:
            raise MoveError("split would create an empty level")
        return LevelledTree(L[:b - 1] + [top, below] + L[b:])
    b, p = move[1], move[2]
    if not (1 <= b <= n_lev and 1 <= p <= len(L[b - 1])):
        raise MoveError("vertex out of range")
    kind, a = L[b - 1][p - 1]
    off = _offset(L, b, p)
    if name in ("vh", "hv"):
        k0, k1 = ("v", "h") if name == "vh" else ("h", "v")
        ok_next = _is_h if name == "vh" else _is_i
        if kind != k0 or a != 1 or not ok_next(L, b + 1) or not _is_i(L, b) == (name == "vh"):
            raise MoveError(f"{name} does not apply at ({b}, {p})")
        ck, n = L[b][off]
        if ck != k1:
            raise MoveError(f"{name} does not apply at ({b}, {p})")
        if name == "hv" and n == 0 and len(L[b]) == 1:
            raise MoveError("would empty a type (i) level")
        L[b - 1][p - 1] = (k0, n)
        L[b][off:off + 1] = [(k1, 1)] * n
        return _build(L)
    if name in ("vh-inv", "hv-inv"):
        k0, k1 = ("v", "h") if name == "vh-inv" else ("h", "v")
        ok_next = _is_h if name == "vh-inv" else _is_i
        if kind != k0 or not ok_next(L, b + 1) or not _is_i(L, b) == (name == "vh-inv"):
            raise MoveError(f"{name} does not apply at ({b}, {p})")
        if any(L[b][q] != (k1, 1) for q in range(off, off + a)):
            raise MoveError(f"{name} needs arity-one children at ({b}, {p})")
        L[b - 1][p - 1] = (k0, 1)
        L[b][off:off + a] = [(k1, a)]
        return _build(L)
    raise MoveError(f"unknown move {move!r}")


def moves(beta):
    """Applicable moves (the split family is restricted to binary splits)."""
    out = []
    L = _levels(beta)
    cands = [("ins-h", b) for b in range(len(L) + 1)]
    cands += [(n, b) for n in ("del-h", "merge-h") for b in range(1, len(L) + 1)]
    for b, p in beta.vertices():
        for n in ("vh", "vh-inv", "hv", "hv-inv"):
            cands.append((n, b, p))
    for b in range(1, len(L) + 1):
        if not _is_h(L, b):
            continue
        specs = set()
        for p, (_, a) in enumerate(L[b - 1]):
            for x in range(a + 1):
                specs.add(tuple((x, a - x) if q == p else (L[b - 1][q][1],)
                                for q in range(len(L[b - 1]))))
        cands += [("split-h", b, s) for s in sorted(specs)]
    for m in cands:
        try:
            apply_move(beta, m)
        except LevelError:
            continue
        out.append(m)
    return out


def random_moves(beta, length, rng):
    """Apply a random sequence of moves; returns the tree and the sequence."""
    seq = []
    for _ in range(length):
        ms = moves(beta)
        m = ms[rng.randrange(len(ms))]
        beta = apply_move(beta, m)
        seq.append(m)
    return beta, seq


class _Rewriter:
    """Applies moves and records them; guards against runaway rewriting."""

    def __init__(self, beta):
        self.tree = beta
        self.trace = []
        self.limit = 200 + 50 * (sum(len(l) for l in beta.levels) + 1) ** 2

    def do(self, move):
        self.tree = apply_move(self.tree, move)
        self.trace.append(move)
        if len(self.trace) > self.limit:
            raise LevelError("internal: rewriting exceeded its step bound")

    @property
    def L(self):
        return _levels(self.tree)


def _find_r1(L):
    for b in range(2, len(L) + 1):
        if not _is_i(L, b):
            continue
        for p, (k, a) in enumerate(L[b - 1], 1):
            if k == "v" and a != 1 and not (a == 0 and len(L[b - 1]) == 1):
                return b, p
    return None


def _find_r2(beta, L):
    for b in range(2, len(L) + 1):
        if not _is_h(L, b):
            continue
        for q, (_, a) in enumerate(L[b - 1], 1):
            if a != 1:
                pp = beta.parent(b, q)
                if L[b - 2][pp - 1] == ("v", 1):
                    return b - 1, pp
    return None


def _chain_attach(beta, b, p):
    """Walk up from (b, p) through arity-one vertical/horizontal vertices."""
    while b > 1:
        q = beta.parent(b, p)
        kind, a = beta.vertex(b - 1, q)
        if kind == "w":
            return "white"
        if a != 1:
            return ("black", b - 1, q)
        b, p = b - 1, q
    return "base"


def _preorder(beta):
    out = []

    def walk(x):
        if x == LEAF:
            return
        out.append(x[0])
        for c in x[2]:
            walk(c)
    walk(planar(beta))
    return out


def _grow(rw, b, q):
    """Extend the arity-zero horizontal (b, q) into a chain ending on the last level."""
    while True:
        L = rw.L
        off = _offset(L, b, q)
        rw.do(("hv-inv", b, q))
        b, q = b + 1, off + 1
        if b == len(rw.L):
            return q
        off = _offset(rw.L, b, q)
        rw.do(("vh-inv", b, q))
        b, q = b + 1, off + 1


def _absorb(rw, b, p):
    """(b, p) is an arity-zero vertical whose parent is a horizontal of arity >= 2."""
    rw.do(("ins-h", b - 1))
    rw.do(("hv", b, p))
    rw.do(("merge-h", b - 1))


def _retract(rw, b, p):
    """Shrink the chain ending at the arity-zero vertical (b, p)."""
    while True:
        beta = rw.tree
        q = beta.parent(b, p)
        if beta.vertex(b - 1, q)[1] != 1:
            _absorb(rw, b, p)
            return
        rw.do(("hv", b - 1, q))
        beta = rw.tree
        if b - 1 == 1:
            return
        pp = beta.parent(b - 1, q)
        if beta.vertex(b - 2, pp) != ("v", 1):
            return
        rw.do(("vh", b - 2, pp))
        b, p = b - 2, pp


def canonical_form(beta, trace=False):
    """Rewrite beta by moves into the canonical representative of its w-class.

    The strategy: put one horizontal level between any two type (i) levels,
    push horizontals of arity != 1 rootward until they follow a white vertex
    or the root, move the filler chain of a leafless tree to its standard
    place, then delete levels of arity-one horizontals.
    """
    rw = _Rewriter(beta)
    if beta.is_exceptional():
        return (beta, []) if trace else beta
    # expand: a horizontal level in front of every type (i) level and after the last
    if _is_i(rw.L, 1):
        rw.do(("ins-h", 0))
    while True:
        L = rw.L
        hit = next((b for b in range(1, len(L)) if _is_i(L, b) and _is_i(L, b + 1)), None)
        if hit is None:
            break
        rw.do(("ins-h", hit))
    L = rw.L
    if _is_i(L, len(L)) and rw.tree.arity > 0:
        rw.do(("ins-h", len(L)))
    while True:
        L = rw.L
        hit = next((b for b in range(1, len(L)) if _is_h(L, b) and _is_h(L, b + 1)), None)
        if hit is None:
            break
        rw.do(("merge-h", hit))
    # push non-unary horizontals rootward
    while True:
        L = rw.L
        r1 = _find_r1(L)
        if r1:
            b, p = r1
            q = rw.tree.parent(b, p)
            if L[b - 2][q - 1][1] == 1:
                rw.do(("hv", b - 1, q))
            else:
                rw.do(("ins-h", b - 1))
                rw.do(("hv", b, p))
                rw.do(("merge-h", b - 1))
            continue
        r2 = _find_r2(rw.tree, L)
        if r2:
            rw.do(("vh",) + r2)
            continue
        break
    _place_filler(rw)
    while True:
        L = rw.L
        hit = next((b for b in range(1, len(L) + 1)
                    if all(v == ("h", 1) for v in L[b - 1])), None)
        if hit is None:
            break
        rw.do(("del-h", hit))
    return (rw.tree, rw.trace) if trace else rw.tree


def _place_filler(rw):
    L = rw.L
    if L[-1] != [("v", 0)]:
        return
    beta = rw.tree
    last = len(L)
    ends = [v for v in _preorder(beta) if beta.vertex(*v)[0] != "w" and beta.vertex(*v)[1] == 0]
    zeros = [v for v in ends if _chain_attach(beta, *v) in ("white", "base")]
    current = (last, 1)
    if zeros:
        target = zeros[-1]
        if target == current:
            return
        new_pos = _grow(rw, *target)
    else:
        att = _chain_attach(beta, *current)
        root_kids = beta.children(1, 1)
        if beta.level_type(1) == 2 and att == ("black", 1, 1) and _last_descendant(beta, current):
            return
        if _is_i(rw.L, 1):
            rw.do(("ins-h", 0))
        k = rw.tree.vertex(1, 1)[1]
        rw.do(("split-h", 1, ((k, 0),)))
        new_pos = _grow(rw, 2, 2)
        rw.do(("merge-h", 1))
    L = rw.L
    old = next(p for p, v in enumerate(L[-1], 1) if v == ("v", 0) and p != new_pos)
    _retract(rw, len(L), old)


def _last_descendant(beta, v):
    """Whether v hangs below the last child of the root."""
    b, p = v
    while b > 2:
        p = beta.parent(b, p)
        b -= 1
    return b == 2 and p == beta.vertex(1, 1)[1]


def w_equivalent(beta1, beta2):
    return canonical_form(beta1) == canonical_form(beta2)


# ---------------------------------------------------------------------------
# the four-step reduction computing w directly from the picture


def w_four_step(beta):
    """w(beta) by forgetting horizontal levels and sliding blacks rootward."""
    if beta.is_exceptional():
        return w_of(beta)
    rows = [b for b in range(1, beta.height + 1) if beta.level_type(b) == 1]
    row_of = {b: n for n, b in enumerate(rows, 1)}

    # step 1: horizontal vertices lose their level; vertical/white keep their row
    def conv(x):
        if x == LEAF:
            return LEAF
        (b, p), kind, kids = x
        kk = [conv(c) for c in kids]
        if kind == "h":
            return ["b", None, kk]
        return [kind, (row_of[b], p), kk]
    t = conv(planar(beta))

    # step 2: a vertical of arity n != 1 becomes a black followed by n unary verticals
    def split(x):
        if x == LEAF:
            return x
        kids = [split(c) for c in x[2]]
        if x[0] == "v" and len(kids) != 1:
            return ["b", None, [["v", x[1], [c]] for c in kids]]
        return [x[0], x[1], kids]
    t = split(t)

    # step 3: a unary vertical followed by a black: the black moves rootward
    def slide(x):
        if x == LEAF:
            return x
        kids = [slide(c) for c in x[2]]
        if x[0] == "v" and kids[0] != LEAF and kids[0][0] == "b":
            blk = kids[0]
            return slide(["b", None, [["v", x[1], [c]] for c in blk[2]]])
        return [x[0], x[1], kids]
    t = slide(t)

    # step 4 and the map rho: drop unary verticals, label whites lexicographically,
    # contract black-black edges and erase unary blacks
    whites = []

    def collect(x):
        if x == LEAF:
            return
        if x[0] == "w":
            whites.append(x[1])
        for c in x[2]:
            collect(c)
    collect(t)
    order = sorted(whites, key=lambda rp: (rp[0], _pre_index(t, rp)))
    label = {rp: n for n, rp in enumerate(order, 1)}

    def emit(x):
        if x == LEAF:
            return LEAF
        kids = tuple(emit(c) for c in x[2])
        if x[0] == "v":
            return kids[0]
        if x[0] == "w":
            return ("w", label[x[1]], kids)
        return ("b", kids)
    delta = normalize(emit(t))
    white_rows = [rp[0] for rp in order]
    arity = {}

    def arities(x):
        if x == LEAF:
            return
        if x[0] == "w":
            arity[x[1]] = len(x[2])
        for c in x[2]:
            arities(c)
    arities(t)
    tree = Colored(KTree((len(order), len(rows)), (FinMap(len(rows), white_rows),)),
                   [arity[rp] for rp in order], beta.arity)
    return TmElement(tree, delta)


def _pre_index(t, rp):
    """Preorder position of the white with id rp."""
    seen = []

    def walk(x):
        if x == LEAF:
            return
        if x[0] == "w":
            seen.append(x[1])
        for c in x[2]:
            walk(c)
    walk(t)
    return seen.index(rp)


# ---------------------------------------------------------------------------
# semi-levelled trees: whites and unary verticals on levels, blacks free
#
# nodes: ("w", label, level, kids) | ("x", level, kids) | ("b", kids) | LEAF


class SemiLevelledTree:
    __slots__ = ("root", "height", "_hash")

    def __init__(self, root, height, check=True):
        self.root = root
        self.height = height
        self._hash = hash((root, height))
        if check:
            self._check()

    def _check(self):
        def walk(x, floor, parent):
            if x == LEAF:
                return
            kind = x[0]
            if kind == "b":
                kids = x[1]
                if len(kids) == 1:
                    raise LevelError("black vertex of arity one")
                if parent == "b":
                    raise LevelError("edge between two black vertices")
                for c in kids:
                    walk(c, floor, "b")
                return
            level = x[2] if kind == "w" else x[1]
            kids = x[3] if kind == "w" else x[2]
            if not (floor < level <= self.height):
                raise LevelError(f"level {level} out of order")
            if kind == "x" and len(kids) != 1:
                raise LevelError("vertical vertex must have arity one")
            for c in kids:
                if kind == "x" and c != LEAF and c[0] == "b":
                    raise LevelError("a black vertex may not sit right after a vertical one")
                walk(c, level, kind)
        walk(self.root, 0, None)

    def __eq__(self, other):
        return (isinstance(other, SemiLevelledTree) and self.height == other.height
                and self.root == other.root)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"slt{{u={self.height}; {slt_sexpr(self.root)}}}"

    def levels_with_whites(self):
        out = set()

        def walk(x):
            if x == LEAF:
                return
            if x[0] == "w":
                out.add(x[2])
            for c in _kids(x):
                walk(c)
        walk(self.root)
        return out


def _kids(x):
    if x == LEAF:
        return ()
    return x[3] if x[0] == "w" else x[2] if x[0] == "x" else x[1]


def slt_sexpr(x):
    if x == LEAF:
        return "*"
    inner = "".join(" " + slt_sexpr(c) for c in _kids(x))
    if x[0] == "w":
        return f"(w{x[1]}@{x[2]}{inner})"
    if x[0] == "x":
        return f"(x@{x[1]}{inner})"
    return f"(b{inner})"


def _realize(tree2, delta):
    """Place white i on level t1(i), blacks right after their parent and unary
    verticals where edges cross levels."""
    base = tree2.base
    u = base.size(1)
    t1 = base.t(1)

    def wrap(a, c, node):
        for line in range(c - 1, a, -1):
            node = ("x", line, (node,))
        return node

    def build(x, a):
        if x == LEAF:
            return wrap(a, u + 1, LEAF)
        if x[0] == "w":
            level = t1(x[1])
            if level <= a:
                raise LevelError("the 2-tree does not dominate the tree")
            return wrap(a, level, ("w", x[1], level, tuple(build(c, level) for c in x[2])))
        return ("b", tuple(build(c, a) for c in x[1]))
    return SemiLevelledTree(build(delta, 0), u)


def tam_to_pro(x):
    """psi: a Tam element as a tree with levels of whites and verticals."""
    from .omega import ordinal_to_pruned_tree
    O = x.ordinal
    T = Colored(ordinal_to_pruned_tree(O.base), O.colors, O.out)
    return _realize(T, x.tree)


def tm_to_pr(x):
    """varsigma: a Tm element as a semi-levelled tree (levels may lack whites)."""
    return _realize(x.tree2, x.tree)


def pr_to_tm(xi):
    """rho: read off the colored 2-tree and the Tamarkin-Tsygan tree."""
    whites = []

    def walk(x):
        if x == LEAF:
            return
        if x[0] == "w":
            whites.append((x[2], x[1], len(x[3])))
        for c in _kids(x):
            walk(c)
    walk(xi.root)
    order = sorted(range(len(whites)), key=lambda n: (whites[n][0], n))
    label = {whites[n][1]: k for k, n in enumerate(order, 1)}

    def emit(x):
        if x == LEAF:
            return LEAF
        kids = tuple(emit(c) for c in _kids(x))
        if x[0] == "x":
            return kids[0]
        if x[0] == "w":
            return ("w", label[x[1]], kids)
        return ("b", kids)
    delta = normalize(emit(xi.root))
    T = Colored(KTree((len(whites), xi.height),
                      (FinMap(xi.height, [whites[n][0] for n in order]),)),
                [whites[n][2] for n in order], num_leaves(delta))
    return TmElement(T, delta)


def pro_to_tam(zeta):
    """phi: like rho, then read the 2-tree as a 2-ordinal."""
    if len(zeta.levels_with_whites()) != zeta.height:
        raise LevelError("every level must carry a white vertex")
    return pr_to_tm(zeta).tam


def sigma_bookkeeping(tree2):
    """Levels carrying whites, the complementary intervals and the indices r_i.

    r_i is the position (among levels carrying whites) of the level right
    after the interval S_i, or None when S_i runs to the last level.
    """
    u = tree2.base.size(1)
    image = sorted(set(tree2.base.t(1).values))
    rest = [x for x in range(1, u + 1) if x not in image]
    intervals = []
    for x in rest:
        if intervals and intervals[-1][-1] == x - 1:
            intervals[-1].append(x)
        else:
            intervals.append([x])
    r = [image.index(s[-1] + 1) + 1 if s[-1] + 1 in image else None for s in intervals]
    return {"image": image, "intervals": intervals, "r": r}


def section(x):
    """A levelled tree whose w-image is the Tm element x."""
    xi = tm_to_pr(x)
    u = xi.height
    root = xi.root
    if _empty_lines(root, u):
        root = _fill(root, u)
    # positions: line L -> 2L, black after line g -> 2g + 1, leaves -> 2u + 2
    active = set()

    def mark(node, g):
        if node == LEAF:
            return
        if node[0] == "b":
            active.add(2 * g + 1)
            for c in node[1]:
                mark(c, g)
            return
        level = node[2] if node[0] == "w" else node[1]
        for c in _kids(node):
            mark(c, level)
    mark(root, 0)
    table = {}

    def place(node, g, above):
        """node hangs below position `above`; g is the last line passed."""
        if node == LEAF:
            pos = 2 * u + 2
        elif node[0] == "b":
            pos = 2 * g + 1
        else:
            pos = 2 * (node[2] if node[0] == "w" else node[1])
        for c in range(above + 1, pos):
            if c in active:
                table.setdefault(c, []).append(("h", 1))
        if node == LEAF:
            return
        kids = _kids(node)
        kind = {"w": "w", "x": "v", "b": "h"}[node[0]]
        table.setdefault(pos, []).append((kind, len(kids)))
        nxt = g if node[0] == "b" else pos // 2
        for c in kids:
            place(c, nxt, pos)
    place(root, 0, 0)
    return LevelledTree([table[p] for p in sorted(table)])


def _empty_lines(root, u):
    return len(_lines_used(root)) < u


def _lines_used(root):
    used = set()

    def walk(x):
        if x == LEAF:
            return
        if x[0] in "wx":
            used.add(x[2] if x[0] == "w" else x[1])
        for c in _kids(x):
            walk(c)
    walk(root)
    return used


def _fill(root, u):
    """Degenerate case (no leaves and trailing empty levels): stretch the last
    arity-zero black down to the last level, or hang such a chain below the root."""
    zeros = []

    def find(x, path):
        if x == LEAF:
            return
        if x[0] == "b" and not x[1]:
            zeros.append(path)
        for n, c in enumerate(_kids(x)):
            find(c, path + (n,))
    find(root, ())

    def chain(a):
        node = ("x", u, ())
        for line in range(u - 1, a, -1):
            node = ("x", line, (node,))
        return node

    if zeros:
        target = zeros[-1]

        def rebuild(x, path, a):
            if path == target:
                return chain(a)
            if x == LEAF:
                return x
            if x[0] == "b":
                return ("b", tuple(rebuild(c, path + (n,), a) for n, c in enumerate(x[1])))
            level = x[2] if x[0] == "w" else x[1]
            kids = tuple(rebuild(c, path + (n,), level) for n, c in enumerate(_kids(x)))
            return ("w", x[1], x[2], kids) if x[0] == "w" else ("x", x[1], kids)
        return rebuild(root, (), 0)
    if root != LEAF and root[0] == "b":
        return ("b", root[1] + (chain(0),))
    return ("b", (root, chain(0)))


# ---------------------------------------------------------------------------
# enumeration and the finite fragment of LTr


def _compositions(total_max, parts):
    """Tuples of `parts` naturals with sum <= total_max."""
    if parts == 0:
        yield ()
        return
    for a in range(total_max + 1):
        for rest in _compositions(total_max - a, parts - 1):
            yield (a,) + rest


def _kind_rows(width):
    yield ("h",) * width
    for mask in range(2 ** width):
        yield tuple("w" if mask >> q & 1 else "v" for q in range(width))


def levelled_trees(max_levels, max_arity, max_inner=None, exceptional=True):
    """All levelled trees with at most max_levels levels and arity at most
    max_arity in which every level but the last has total arity at most
    max_inner (default max_arity); this bounds the number of vertices."""
    if max_inner is None:
        max_inner = max_arity
    out = [EXCEPTIONAL] if exceptional else []
    top = max(max_arity, max_inner)

    def extend(levels, width):
        for kinds in _kind_rows(width):
            for ars in _compositions(top, width):
                lev = tuple(zip(kinds, ars))
                new = levels + [lev]
                total = sum(ars)
                if total <= max_arity:
                    out.append(LevelledTree(new, check=False))
                if len(new) < max_levels and 0 < total <= max_inner:
                    extend(new, total)
    if max_levels >= 1:
        extend([], 1)
    return out


class LTrCategory(OperadicCategory):
    """Levelled trees of bounded size; morphisms are identities, elementary
    steps and composites of two elementary steps that stay in the fragment."""

    name = "LTr"

    def __init__(self, max_levels=3, max_arity=3, max_inner=2):
        self.max_levels = max_levels
        self.max_arity = max_arity
        self._objs = levelled_trees(max_levels, max_arity, max_inner)
        self._set = set(self._objs)
        self._homs = None

    def objects(self):
        return self._objs

    def _build(self):
        homs = {}
        for S in self._objs:
            found = {identity_morphism(S)}
            firsts = [apply_step(S, st) for st in elementary_steps(S)]
            for f in firsts:
                if f.target in self._set:
                    found.add(f)
                for st in elementary_steps(f.target):
                    g = apply_step(f.target, st)
                    if g.target in self._set:
                        found.add(compose_morphisms(g, f))
            for f in found:
                homs.setdefault((S, f.target), []).append(f)
        self._homs = homs

    def hom(self, s, t):
        if self._homs is None:
            self._build()
        return self._homs.get((s, t), [])

    def hom_table(self):
        if self._homs is None:
            self._build()
        return dict(self._homs)

    def compose(self, g, f):
        return compose_morphisms(g, f)

    def identity(self, beta):
        return identity_morphism(beta)

    def cardinality(self, beta):
        return len(beta.whites())

    def card_map(self, f):
        return self.memo("card", f, lambda: card_map(f))

    def component(self, beta):
        return beta.arity

    def terminal(self, c):
        return white_corolla(c)

    def fiber(self, f, i):
        return self.memo("fiber", (f, i), lambda: fiber(f, i))

    def fiber_map(self, f, g, i):
        return self.memo("fmap", (f, g, i), lambda: fiber_map(f, g, i))
