"""Tamarkin-Tsygan trees and the operadic categories built from them.

A tree is a nested tuple:

    LEAF = "*"                       an input leaf (alone it is the bare edge)
    ("w", label, (child, ...))       a white vertex
    ("b", (child, ...))              a black vertex

White labels are 1..k, black vertices have arity 0 or at least 2, and no
black vertex has a black child.  Children are listed first to last; "left"
means earlier.
"""

from functools import lru_cache
from itertools import combinations

from . import finset
from .finset import FinMap
from .omega import Colored, KOrdinal, complementary_ordinal, prune


LEAF = "*"


class LatError(ValueError):
    pass


def white(label, *children):
    return ("w", label, tuple(children))


def black(*children):
    return ("b", tuple(children))


def is_white(node):
    return isinstance(node, tuple) and node[0] == "w"


def is_black(node):
    return isinstance(node, tuple) and node[0] == "b"


def children(node):
    if node == LEAF:
        return ()
    return node[2] if node[0] == "w" else node[1]


def to_sexpr(node):
    if node == LEAF:
        return "*"
    if node[0] == "w":
        inner = "".join(" " + to_sexpr(c) for c in node[2])
        return f"(w{node[1]}{inner})"
    inner = "".join(" " + to_sexpr(c) for c in node[1])
    return f"(b{inner})"


def white_arities(node):
    """Dict label -> arity."""
    out = {}

    def walk(x):
        if x == LEAF:
            return
        if x[0] == "w":
            if x[1] in out:
                raise LatError(f"label {x[1]} used twice")
            out[x[1]] = len(x[2])
        for c in children(x):
            walk(c)
    walk(node)
    return out


def num_leaves(node):
    if node == LEAF:
        return 1
    return sum(num_leaves(c) for c in children(node))


def num_vertices(node):
    if node == LEAF:
        return 0
    return 1 + sum(num_vertices(c) for c in children(node))


def validate(node):
    """Raise LatError unless node is a valid tree; return it."""
    ar = white_arities(node)
    if sorted(ar) != list(range(1, len(ar) + 1)):
        raise LatError(f"white labels {sorted(ar)} are not 1..{len(ar)}")

    def walk(x, parent_black):
        if x == LEAF:
            return
        if x[0] == "b":
            if parent_black:
                raise LatError("black vertex with a black child")
            if len(x[1]) == 1:
                raise LatError("black vertex of arity 1")
        elif x[0] != "w":
            raise LatError(f"unknown vertex {x!r}")
        for c in children(x):
            walk(c, x[0] == "b")
    walk(node, False)
    return node


def normalize(node):
    """Contract black-black edges and erase arity-1 black vertices."""
    if node == LEAF:
        return LEAF
    kids = [normalize(c) for c in children(node)]
    if node[0] == "w":
        return ("w", node[1], tuple(kids))
    flat = []
    for c in kids:
        if is_black(c):
            flat.extend(c[1])
        else:
            flat.append(c)
    if len(flat) == 1:
        return flat[0]
    return ("b", tuple(flat))


def relabel(node, mapping):
    """Apply label -> new label to every white vertex."""
    if node == LEAF:
        return LEAF
    if node[0] == "w":
        return ("w", mapping[node[1]], tuple(relabel(c, mapping) for c in node[2]))
    return ("b", tuple(relabel(c, mapping) for c in node[1]))


def _graft(node, leaves):
    """Replace the leaves of node, in order, by the given subtrees."""
    it = iter(leaves)

    def walk(x):
        if x == LEAF:
            return next(it)
        if x[0] == "w":
            return ("w", x[1], tuple(walk(c) for c in x[2]))
        return ("b", tuple(walk(c) for c in x[1]))
    out = walk(node)
    return out


def substitute(gamma, fillers):
    """Replace every white i of gamma by fillers[i] (already relabelled).

    The children of white i are grafted onto the leaves of fillers[i].
    No contraction is done here.
    """
    def walk(x):
        if x == LEAF:
            return LEAF
        kids = tuple(walk(c) for c in children(x))
        if x[0] == "w":
            f = fillers.get(x[1])
            if f is None:
                return ("w", x[1], kids)
            if num_leaves(f) != len(kids):
                raise LatError(f"white {x[1]} has arity {len(kids)} but filler has "
                               f"{num_leaves(f)} leaves")
            return _graft(f, kids)
        return ("b", kids)
    return walk(gamma)


def lat_compose(delta, i, gamma):
    """delta o_i gamma: insert gamma at white i, relabel, contract."""
    ar = white_arities(delta)
    if i not in ar:
        raise LatError(f"no white labelled {i}")
    if ar[i] != num_leaves(gamma):
        raise LatError(f"arity {ar[i]} of white {i} differs from {num_leaves(gamma)} leaves")
    k = len(white_arities(gamma))
    shift = {j: (j if j < i else j + k - 1) for j in ar if j != i}
    inner = {l: i + l - 1 for l in white_arities(gamma)}
    d = relabel_partial(delta, shift)
    g = relabel(gamma, inner)
    return normalize(substitute(d, {i: g}))


def relabel_partial(node, mapping):
    if node == LEAF:
        return LEAF
    if node[0] == "w":
        return ("w", mapping.get(node[1], node[1]), tuple(relabel_partial(c, mapping) for c in node[2]))
    return ("b", tuple(relabel_partial(c, mapping) for c in node[1]))


def sigma_act(delta, perm):
    """Relabel white i as perm[i - 1]."""
    perm = tuple(perm)
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise LatError(f"{perm} is not a permutation")
    ar = white_arities(delta)
    if len(ar) != len(perm):
        raise LatError("permutation size differs from the number of whites")
    return relabel(delta, {i: perm[i - 1] for i in ar})


def corolla(n, label=1):
    return ("w", label, (LEAF,) * n)


# ---------------------------------------------------------------------------
# complementary order and domination


def white_paths(node):
    """Dict label -> path of child indices from the root (0-based)."""
    out = {}

    def walk(x, path):
        if x == LEAF:
            return
        if x[0] == "w":
            out[x[1]] = path
        for n, c in enumerate(children(x)):
            walk(c, path + (n,))
    walk(node, ())
    return out


def complementary_order(node):
    """Dict (i, j) -> 0 or 1 meaning i <|_0 j (i is an ancestor of j) or i <|_1 j."""
    paths = white_paths(node)
    rel = {}
    labels = sorted(paths)
    for i in labels:
        for j in labels:
            if i == j:
                continue
            a, b = paths[i], paths[j]
            if b[:len(a)] == a:
                rel[i, j] = 0
            elif a[:len(b)] == b:
                continue
            else:
                n = 0
                while a[n] == b[n]:
                    n += 1
                if a[n] < b[n]:
                    rel[i, j] = 1
    return rel


def dominates(O, delta):
    """True iff the 2-ordinal O dominates the complementary order of delta.

    O may be plain or colored; a colored O must also match white arities and
    the number of leaves.
    """
    base = O.base if isinstance(O, Colored) else O
    ar = white_arities(delta)
    if sorted(ar) != list(range(1, base.n + 1)):
        raise LatError("white labels do not match the ordinal")
    if isinstance(O, Colored):
        if any(O.colors[i - 1] != ar[i] for i in ar) or O.out != num_leaves(delta):
            return False
    rel = complementary_order(delta)
    for (i, j), p in base.rel.items():
        if p == 0 and rel.get((j, i)) == 0:
            return False
        if p == 1 and rel.get((i, j)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# elements


class TamElement:
    """A colored 2-ordinal together with a tree it dominates."""

    __slots__ = ("ordinal", "tree", "_hash")

    def __init__(self, ordinal, tree, check=True):
        self.ordinal = ordinal
        self.tree = tree
        self._hash = hash((ordinal, tree))
        if check:
            validate(tree)
            if not dominates(ordinal, tree):
                raise LatError(f"{ordinal!r} does not dominate {to_sexpr(tree)}")

    def __eq__(self, other):
        return self is other or (isinstance(other, TamElement) and self._hash == other._hash
                                 and self.tree == other.tree and self.ordinal == other.ordinal)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"tam{{ord: {self.ordinal!r}, lat: {to_sexpr(self.tree)}}}"


class TmElement:
    """A colored 2-tree together with a tree dominated by its pruning."""

    __slots__ = ("tree2", "tree", "_hash")

    def __init__(self, tree2, tree, check=True):
        self.tree2 = tree2
        self.tree = tree
        self._hash = hash((tree2, tree))
        if check:
            validate(tree)
            if not dominates(prune(tree2), tree):
                raise LatError(f"{tree2!r} does not dominate {to_sexpr(tree)}")

    def __eq__(self, other):
        return self is other or (isinstance(other, TmElement) and self._hash == other._hash
                                 and self.tree == other.tree and self.tree2 == other.tree2)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        c = self.tree2
        return (f"tm{{tree: t2:{list(c.base.maps[0].values)}->{c.base.sizes[1]};"
                f"colors={list(c.colors)};out={c.out}, lat: {to_sexpr(self.tree)}}}")

    @property
    def tam(self):
        return TamElement(prune(self.tree2), self.tree, check=False)


def tam_multiply(target, sigma, fibers, source=None):
    """m(fibers; target) along sigma: source -> target ordinal.

    ``sigma`` is the map on elements (a FinMap) and ``source`` the colored
    source ordinal; fibers[i - 1] is a TamElement over sigma^-1(i).
    """
    N = target.ordinal
    if source is None:
        raise LatError("the source ordinal is needed")
    if sigma.dom != source.n or sigma.cod != N.n or len(fibers) != N.n:
        raise LatError("sigma does not fit the ordinals")
    fillers = {}
    for i, fib in enumerate(fibers, 1):
        pre = finset.preimage(sigma, i)
        want = Colored(source.base.restrict(pre), [source.colors[j - 1] for j in pre],
                       N.colors[i - 1])
        if fib.ordinal != want:
            raise LatError(f"fiber {i} is {fib.ordinal!r}, expected {want!r}")
        fillers[i] = relabel(fib.tree, {l: pre[l - 1] for l in range(1, len(pre) + 1)})
    tree = normalize(substitute(target.tree, fillers))
    validate(tree)
    if not dominates(source, tree):
        raise LatError("internal: multiplication left the dominated trees")
    return TamElement(source, tree, check=False)


# ---------------------------------------------------------------------------
# enumeration


def enumerate_lat(arities, m):
    """All trees whose white i has arity arities[i - 1] and with m leaves."""
    arities = tuple(arities)
    return list(_trees(arities, frozenset(range(1, len(arities) + 1)), m, True))


@lru_cache(maxsize=None)
def _trees(arities, labels, m, allow_black):
    out = []
    if not labels and m == 1:
        out.append(LEAF)
    for i in sorted(labels):
        for kids in _forest(arities, labels - {i}, m, arities[i - 1]):
            out.append(("w", i, kids))
    if allow_black:
        top = len(labels) + m
        for r in [0] + list(range(2, top + 1)):
            for kids in _forest_nb(arities, labels, m, r):
                out.append(("b", kids))
    return tuple(out)


@lru_cache(maxsize=None)
def _forest(arities, labels, m, n):
    return _forest_gen(arities, labels, m, n, True)


@lru_cache(maxsize=None)
def _forest_nb(arities, labels, m, n):
    return _forest_gen(arities, labels, m, n, False)


def _forest_gen(arities, labels, m, n, allow_black):
    if n == 0:
        return ((),) if not labels and m == 0 else ()
    out = []
    lab = sorted(labels)
    for size in range(len(lab) + 1):
        for part in combinations(lab, size):
            A = frozenset(part)
            rest = labels - A
            for m1 in range(m + 1):
                firsts = _trees(arities, A, m1, allow_black)
                if not firsts:
                    continue
                tails = (_forest(arities, rest, m - m1, n - 1) if allow_black
                         else _forest_nb(arities, rest, m - m1, n - 1))
                for t in firsts:
                    for tail in tails:
                        out.append((t,) + tail)
    return tuple(out)


def enumerate_tam(O):
    """All TamElements over a colored 2-ordinal."""
    return [TamElement(O, d, check=False) for d in enumerate_lat(O.colors, O.out)
            if dominates(O, d)]


def enumerate_tm(T):
    """All TmElements over a colored 2-tree."""
    P = prune(T)
    return [TmElement(T, d, check=False) for d in enumerate_lat(T.colors, T.out)
            if dominates(P, d)]


# ---------------------------------------------------------------------------
# the operads opTam and opTm and their categories of elements


def op_tam(size=2, max_color=2):
    """opTam over the colored 2-ordinals with at most ``size`` elements."""
    from .omega import ColoredCategory, Ord2Category, point_ordinal
    from .setoperad import SetOperad
    base = ColoredCategory(Ord2Category(size), max_color)

    def unit(c):
        return TamElement(Colored(point_ordinal(), (c,), c), corolla(c), check=False)

    def mult(f, eps, kappa):
        return tam_multiply(kappa, base.card_map(f), eps, source=f.source)
    return SetOperad(base, enumerate_tam, unit, mult, name="opTam")


def op_tm(leaves=2, vertices=2, max_color=2):
    """opTm over the colored 2-trees: the restriction of opTam along pruning."""
    from .omega import ColoredCategory, Omega2Category, unit_tree
    from .setoperad import SetOperad
    base = ColoredCategory(Omega2Category(leaves, vertices), max_color)

    def unit(c):
        return TmElement(Colored(unit_tree(2), (c,), c), corolla(c), check=False)

    def mult(f, eps, kappa):
        got = tam_multiply(kappa.tam, base.card_map(f), [e.tam for e in eps],
                           source=prune(f.source))
        return TmElement(f.source, got.tree, check=False)
    return SetOperad(base, enumerate_tm, unit, mult, name="opTm")


def tam_category(size=2, max_color=2):
    """Tam as the category of elements of opTam, with s: Tam -> Ord^N."""
    from .setoperad import grothendieck
    return grothendieck(op_tam(size, max_color))


def tm_category(leaves=2, vertices=2, max_color=2):
    """Tm as the pullback of s: Tam -> Ord^N along pruning p: Omega^N -> Ord^N.

    Returns (Tm, t, r) with t: Tm -> Omega^N a discrete fibration and r: Tm -> Tam.
    """
    from .omega import ColoredCategory, Omega2Category, pruning_functor
    from .setoperad import pullback_fibration
    E, s = tam_category(leaves, max_color)
    Om = ColoredCategory(Omega2Category(leaves, vertices), max_color)
    p = pruning_functor(Om, s.base)
    return pullback_fibration(s, p)


def tm_beck_chevalley(bases):
    """Beck-Chevalley with P = 1 for the square Tm -> Tam over pruning, at the
    given colored 2-trees.

    The categories are cut down to the listed objects and their prunings, so
    only the object-level comparison is made.  Each bijection is also compared
    with a direct count of enumerate_tm.  Returns (report, rows) with one row
    (base, lhs size, rhs size, enumerate_tm size) per base.
    """
    from .omega import ColoredCategory, Omega2Category, Ord2Category, pruning_functor
    from .setoperad import SetOperad, beck_chevalley_check, grothendieck, unit_operad
    bases = list(dict.fromkeys(bases))
    ords = list(dict.fromkeys(prune(S) for S in bases))
    Ord = ColoredCategory(Ord2Category(0), objects=ords)
    Om = ColoredCategory(Omega2Category(0, 0), objects=bases)
    P = SetOperad(Ord, enumerate_tam, None, None, name="opTam")
    E, s = grothendieck(P)
    p = pruning_functor(Om, Ord)
    rep = beck_chevalley_check(s, p, unit_operad(E), objects=bases)
    rows = []
    for S in bases:
        n = len(enumerate_tam(prune(S)))
        m = len(enumerate_tm(S))
        rep.check("count", n == m, (S, n, m))
        rows.append((S, n, n, m))
    return rep, rows
