"""Batanin k-trees, k-ordinals, their colored versions and the categories they form.

A k-tree is a chain of monotone maps  n_k -> n_{k-1} -> ... -> n_1.  It is
stored by the sizes (n_k, ..., n_1) and the maps (t_{k-1}, ..., t_1), top
first.  A 2-tree is therefore ``KTree((n2, n1), (t1,))``.

A k-ordinal on {1..n} records, for every pair a < b, the unique level p with
a <_p b or b <_p a.  It is stored as a dict {(a, b): p} for the ordered pairs
(a, b) with a <_p b.
"""

from itertools import product

from . import finset
from .finset import FinMap
from .opcat import Mor, OperadicCategory, OperadicFunctor


class TreeError(ValueError):
    pass


class KTree:
    __slots__ = ("sizes", "maps", "k", "_key", "_hash")

    def __init__(self, sizes, maps=()):
        sizes = tuple(sizes)
        maps = tuple(maps)
        if len(sizes) < 1 or len(maps) != len(sizes) - 1:
            raise TreeError("a k-tree needs k sizes and k-1 maps")
        for p, t in enumerate(maps):
            if t.dom != sizes[p] or t.cod != sizes[p + 1]:
                raise TreeError(f"map {t} does not fit sizes {sizes}")
            if not t.is_monotone():
                raise TreeError(f"map {t} is not monotone")
        self.sizes = sizes
        self.maps = maps
        self.k = len(sizes)
        self._key = (sizes, tuple(m.values for m in maps))
        self._hash = hash(self._key)

    def size(self, p):
        """n_p, for 1 <= p <= k."""
        return self.sizes[self.k - p]

    def t(self, p):
        """t_p : n_{p+1} -> n_p."""
        return self.maps[self.k - 1 - p]

    def __eq__(self, other):
        return self is other or (isinstance(other, KTree) and self._hash == other._hash
                                 and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.k == 2:
            return f"t2:{list(self.maps[0].values)}->{self.sizes[1]}"
        return f"KTree({self.sizes}, {[list(m.values) for m in self.maps]})"

    def image(self, x, p):
        """Image in level p of an element x of the top level."""
        for q in range(self.k - 1, p - 1, -1):
            x = self.t(q)(x)
        return x

    def is_pruned(self):
        return all(m.is_surjective() for m in self.maps)


def tree2(values, n1=None):
    """The 2-tree given by the values of t_1."""
    values = list(values)
    if n1 is None:
        n1 = max(values, default=0)
    return KTree((len(values), n1), (FinMap(n1, values),))


def unit_tree(k):
    return KTree((1,) * k, (finset.identity(1),) * (k - 1))


def leaves(T, s):
    """The s-leaves of T: the whole top level for s = k, else elements with empty preimage."""
    if not (1 <= s <= T.k):
        raise TreeError(f"level {s} outside 1..{T.k}")
    if s == T.k:
        return tuple(range(1, T.size(s) + 1))
    t = T.t(s)
    hit = set(t.values)
    return tuple(x for x in range(1, T.size(s) + 1) if x not in hit)


def suspend(T):
    """Append the map n_1 -> 1."""
    return KTree(T.sizes + (1,), T.maps + (finset.terminal_map(T.sizes[-1]),))


def truncate(T):
    """Drop the top map."""
    if T.k <= 1:
        raise TreeError("cannot truncate a 1-tree")
    return KTree(T.sizes[1:], T.maps[1:])


class KTreeMorphism:
    """Components (sigma_k, ..., sigma_1), top first."""

    __slots__ = ("source", "target", "sigmas", "_hash")

    def __init__(self, source, target, sigmas, check=True):
        self.source = source
        self.target = target
        self.sigmas = tuple(sigmas)
        self._hash = hash((source, target, self.sigmas))
        if check:
            self._check()

    def sigma(self, p):
        return self.sigmas[self.source.k - p]

    def _check(self):
        S, T = self.source, self.target
        k = S.k
        if T.k != k or len(self.sigmas) != k:
            raise TreeError("dimension mismatch")
        for p in range(1, k + 1):
            s = self.sigma(p)
            if s.dom != S.size(p) or s.cod != T.size(p):
                raise TreeError(f"sigma_{p} has the wrong shape")
        for p in range(1, k):
            if finset.compose(T.t(p), self.sigma(p + 1)) != finset.compose(self.sigma(p), S.t(p)):
                raise TreeError(f"square {p} does not commute")
        if not self.sigma(1).is_monotone():
            raise TreeError("sigma_1 is not monotone")
        for p in range(1, k):
            sig = self.sigma(p + 1)
            for x in range(1, S.size(p) + 1):
                vals = [sig(y) for y in finset.preimage(S.t(p), x)]
                if any(a > b for a, b in zip(vals, vals[1:])):
                    raise TreeError(f"sigma_{p + 1} not monotone on a fiber")

    def __eq__(self, other):
        return self is other or (isinstance(other, KTreeMorphism) and self._hash == other._hash
                                 and self.sigmas == other.sigmas and self.source == other.source
                                 and self.target == other.target)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.source!r} -> {self.target!r} via {[list(s.values) for s in self.sigmas]}"


def compose_tree_morphisms(g, f):
    return KTreeMorphism(f.source, g.target,
                         [finset.compose(a, b) for a, b in zip(g.sigmas, f.sigmas)], check=False)


def identity_tree_morphism(T):
    return KTreeMorphism(T, T, [finset.identity(n) for n in T.sizes], check=False)


def tree_morphisms(S, T):
    """All morphisms S -> T of k-trees."""
    k = S.k
    if T.k != k:
        return []
    out = []

    def extend(p, partial):
        # partial holds sigma_1..sigma_p; build sigma_{p+1}
        if p == k:
            out.append(KTreeMorphism(S, T, list(reversed(partial)), check=False))
            return
        sig = partial[-1]
        ts, tt = S.t(p), T.t(p)
        choices = []
        for x in range(1, S.size(p) + 1):
            src = finset.preimage(ts, x)
            tgt = finset.preimage(tt, sig(x))
            choices.append([(src, tuple(tgt[v - 1] for v in m.values))
                            for m in finset.monotone_maps(len(src), len(tgt))])
        for pick in product(*choices):
            vals = [0] * S.size(p + 1)
            for src, img in pick:
                for y, z in zip(src, img):
                    vals[y - 1] = z
            extend(p + 1, partial + [FinMap(T.size(p + 1), vals)])

    for s1 in finset.monotone_maps(S.size(1), T.size(1)):
        extend(1, [s1])
    return out


def _restrict(values, src, tgt):
    pos = {x: n for n, x in enumerate(tgt, 1)}
    return FinMap(len(tgt), [pos[values[y - 1]] for y in src])


def ktree_fiber(sigma, i):
    """The fiber over a top leaf i of the target, re-enumerated canonically."""
    S, T = sigma.source, sigma.target
    k = S.k
    if not (1 <= i <= T.size(k)):
        raise TreeError(f"{i} is not a {k}-leaf")
    sets = []
    for p in range(k, 0, -1):
        sets.append(finset.preimage(sigma.sigma(p), T.image(i, p)))
    maps = []
    for p in range(k - 1, 0, -1):
        src, tgt = sets[k - 1 - p], sets[k - p]
        maps.append(_restrict(S.t(p).values, src, tgt))
    return KTree([len(s) for s in sets], maps)


def tree_fiber_map(f, g, i, fiber=ktree_fiber):
    """f_i : (g o f)^-1(i) -> g^-1(i) for morphisms of k-trees.

    ``fiber`` computes the two fiber trees; categories pass a cached version.
    """
    h = compose_tree_morphisms(g, f)
    R = g.target
    k = R.k
    sigmas = []
    for p in range(k, 0, -1):
        x = R.image(i, p)
        src = finset.preimage(h.sigma(p), x)
        tgt = finset.preimage(g.sigma(p), x)
        sigmas.append(_restrict(f.sigma(p).values, src, tgt))
    return KTreeMorphism(fiber(h, i), fiber(g, i), sigmas, check=False)


# ---------------------------------------------------------------------------
# ordinals


class KOrdinal:
    """A k-ordinal on {1..n}; ``rel[(a, b)] = p`` means a <_p b."""

    __slots__ = ("n", "k", "rel", "_key", "_hash")

    def __init__(self, n, rel, k=2, check=True):
        self.n = n
        self.k = k
        self.rel = dict(rel)
        self._key = (n, k, tuple(sorted(self.rel.items())))
        self._hash = hash(self._key)
        if check:
            self._check()

    def _check(self):
        n = self.n
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                here = [(a, b) in self.rel, (b, a) in self.rel]
                if sum(here) != 1:
                    raise TreeError(f"pair {a},{b} is not related exactly once")
        for (a, b), p in self.rel.items():
            if not (0 <= p < self.k) or a == b:
                raise TreeError(f"bad relation {a}<_{p}{b}")
        for (a, b), p in self.rel.items():
            for c in range(1, n + 1):
                q = self.rel.get((b, c))
                if q is not None and c != a and self.rel.get((a, c)) != min(p, q):
                    raise TreeError(f"{a}<_{p}{b}<_{q}{c} breaks min-transitivity")

    def less(self, a, b):
        """The level p with a <_p b, or None."""
        return self.rel.get((a, b))

    def __eq__(self, other):
        return self is other or (isinstance(other, KOrdinal) and self._hash == other._hash
                                 and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        trip = ",".join(f"({a},{b},{p})" for (a, b), p in sorted(self.rel.items()))
        return f"ord{self.k}{{n={self.n}; {trip}}}"

    def restrict(self, elems):
        """The induced ordinal on a subset, re-enumerated in the given order."""
        pos = {x: n for n, x in enumerate(elems, 1)}
        rel = {(pos[a], pos[b]): p for (a, b), p in self.rel.items() if a in pos and b in pos}
        return KOrdinal(len(elems), rel, self.k, check=False)


def point_ordinal(k=2):
    return KOrdinal(1, {}, k, check=False)


def empty_ordinal(k=2):
    return KOrdinal(0, {}, k, check=False)


def complementary_ordinal(T):
    """The k-ordinal on the top leaves: a <_p b where p is the deepest level of agreement."""
    n = T.size(T.k)
    rel = {}
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            p = 0
            for q in range(T.k - 1, 0, -1):
                if T.image(a, q) == T.image(b, q):
                    p = q
                    break
            rel[a, b] = p
    return KOrdinal(n, rel, T.k, check=False)


def ordinal_to_pruned_tree(O):
    """The pruned k-tree whose complementary ordinal is O."""
    O._check()
    n, k = O.n, O.k
    # the top level must be enumerated so that all t are monotone: sort by
    # the "less" relation, which is a total order once levels are ignored.
    order = sorted(range(1, n + 1), key=_cmp_key(O))
    if order != list(range(1, n + 1)):
        raise TreeError("ordinal elements are not listed in their total order")
    sizes = [n]
    maps = []
    # classes at level q: a ~ b iff related at level >= q
    prev = list(range(1, n + 1))  # label of each element at the previous level
    for q in range(k - 1, 0, -1):
        label = []
        cur = 0
        for a in range(1, n + 1):
            if a == 1 or O.less(a - 1, a) < q:
                cur += 1
            label.append(cur)
        # map from previous level classes to these classes
        m = {}
        for a in range(1, n + 1):
            m[prev[a - 1]] = label[a - 1]
        size_prev = sizes[-1]
        maps.append(FinMap(cur, [m[x] for x in range(1, size_prev + 1)]))
        sizes.append(cur)
        prev = label
    return KTree(sizes, maps)


def _cmp_key(O):
    def key(a):
        return sum(1 for b in range(1, O.n + 1) if O.less(b, a) is not None)
    return key


def all_ordinals(n, k=2):
    """All k-ordinals on {1..n} in which 1 < 2 < ... < n in the total order.

    Every k-ordinal is isomorphic to exactly one of these; for k = 2 they are
    the compositions of n.
    """
    out = []
    for T in pruned_trees(n, k):
        out.append(complementary_ordinal(T))
    return out


def ordinal_morphisms(O, N):
    """All maps sigma: O -> N satisfying the morphism condition of k-ordinals."""
    out = []
    for f in finset.all_maps(O.n, N.n):
        if is_ordinal_morphism(O, N, f):
            out.append(Mor(O, N, f))
    return out


def is_ordinal_morphism(O, N, f):
    for (i, j), p in O.rel.items():
        a, b = f(i), f(j)
        if a == b:
            continue
        r = N.less(a, b)
        if r is not None and r >= p:
            continue
        r = N.less(b, a)
        if r is not None and r > p:
            continue
        return False
    return True


def ordinal_fiber(f, i):
    return f.source.restrict(finset.preimage(f.data, i))


# ---------------------------------------------------------------------------
# enumeration of trees


def trees(n_top, k=2, max_sizes=None):
    """All k-trees with n_k = n_top; lower sizes bounded by ``max_sizes``."""
    if k == 1:
        return [KTree((n_top,))]
    out = []
    bound = max_sizes if max_sizes is not None else n_top
    for n1 in range(0, bound + 1):
        for t in finset.monotone_maps(n_top, n1):
            out.append(KTree((n_top, n1), (t,)))
    if k > 2:
        raise NotImplementedError("enumeration is implemented for k <= 2")
    return out


def pruned_trees(n, k=2):
    if k == 1:
        return [KTree((n,))]
    if k != 2:
        raise NotImplementedError("enumeration is implemented for k <= 2")
    return [T for T in trees(n, 2, n) if T.is_pruned()]


# ---------------------------------------------------------------------------
# colored versions


class Colored:
    """A 2-tree or 2-ordinal with colors on its top leaves and an output color."""

    __slots__ = ("base", "colors", "out", "_key", "_hash")

    def __init__(self, base, colors, out):
        colors = tuple(colors)
        n = base.n if isinstance(base, KOrdinal) else base.size(base.k)
        if len(colors) != n:
            raise TreeError(f"{len(colors)} colors for {n} leaves")
        self.base = base
        self.colors = colors
        self.out = out
        self._key = (base, colors, out)
        self._hash = hash(self._key)

    def __eq__(self, other):
        return self is other or (isinstance(other, Colored) and self._hash == other._hash
                                 and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.base!r};colors={list(self.colors)};out={self.out}"

    @property
    def n(self):
        return len(self.colors)


def colored_tree(values, colors, out, n1=None):
    return Colored(tree2(values, n1), colors, out)


def prune(T):
    """The maximal pruned subtree of a (colored) 2-tree, as a (colored) 2-ordinal."""
    if isinstance(T, Colored):
        return Colored(complementary_ordinal(T.base), T.colors, T.out)
    return complementary_ordinal(T)


def prune_tree(T):
    """The maximal pruned subtree as a 2-tree (childless 1-vertices removed)."""
    t = T.t(1)
    used = sorted(set(t.values))
    pos = {x: n for n, x in enumerate(used, 1)}
    return KTree((T.size(2), len(used)), (FinMap(len(used), [pos[v] for v in t.values]),))


def is_pruned(T):
    base = T.base if isinstance(T, Colored) else T
    return base.is_pruned()


# ---------------------------------------------------------------------------
# categories


class Omega2Category(OperadicCategory):
    """2-trees with at most ``leaves`` 2-leaves and ``vertices`` 1-vertices."""

    name = "Omega2"

    def __init__(self, leaves=3, vertices=2):
        self.leaves = leaves
        self.vertices = vertices
        self._objs = None
        self._homs = {}

    def objects(self):
        if self._objs is None:
            self._objs = [T for n in range(self.leaves + 1)
                          for T in trees(n, 2, self.vertices)]
        return self._objs

    def hom(self, s, t):
        key = (s, t)
        if key not in self._homs:
            self._homs[key] = tree_morphisms(s, t)
        return self._homs[key]

    def compose(self, g, f):
        return compose_tree_morphisms(g, f)

    def identity(self, T):
        return self.memo("identity", T, lambda: identity_tree_morphism(T))

    def cardinality(self, T):
        return T.size(T.k)

    def card_map(self, f):
        return f.sigmas[0]

    def component(self, T):
        return 0

    def terminal(self, c):
        return unit_tree(2)

    def fiber(self, f, i):
        return self.memo("fiber", (f, i), lambda: ktree_fiber(f, i))

    def fiber_map(self, f, g, i):
        return self.memo("fiber_map", (f, g, i), lambda: tree_fiber_map(f, g, i, self.fiber))


class Ord2Category(OperadicCategory):
    """2-ordinals with at most ``size`` elements."""

    name = "Ord2"

    def __init__(self, size=3, k=2):
        self.size = size
        self.k = k
        self._objs = None

    def objects(self):
        if self._objs is None:
            self._objs = [O for n in range(self.size + 1) for O in all_ordinals(n, self.k)]
        return self._objs

    def hom(self, s, t):
        return ordinal_morphisms(s, t)

    def compose(self, g, f):
        return Mor(f.source, g.target, finset.compose(g.data, f.data))

    def identity(self, O):
        return Mor(O, O, finset.identity(O.n))

    def cardinality(self, O):
        return O.n

    def card_map(self, f):
        return f.data

    def component(self, O):
        return 0

    def terminal(self, c):
        return point_ordinal(self.k)

    def fiber(self, f, i):
        return self.memo("fiber", (f, i), lambda: ordinal_fiber(f, i))

    def fiber_map(self, f, g, i):
        h = self.compose(g, f)
        return Mor(self.fiber(h, i), self.fiber(g, i),
                   finset.induced_fiber_map(f.data, g.data, i))


class ColoredCategory(OperadicCategory):
    """N-colored version of Omega2 or Ord2: leaves and root carry natural colors.

    Morphisms are morphisms of the underlying objects with equal output
    colors; a fiber over i inherits the leaf colors and takes the color of i
    as its output color.
    """

    def __init__(self, base, max_color=1, objects=None):
        self.base = base
        self.max_color = max_color
        self.name = base.name + "^N"
        self._objs = objects

    def objects(self):
        if self._objs is None:
            out = []
            cs = range(self.max_color + 1)
            for B in self.base.objects():
                n = self.base.cardinality(B)
                for colors in product(cs, repeat=n):
                    for o in cs:
                        out.append(Colored(B, colors, o))
            self._objs = out
        return self._objs

    def hom(self, s, t):
        if s.out != t.out:
            return []
        return [Mor(s, t, f) for f in self.base.hom(s.base, t.base)]

    def compose(self, g, f):
        return Mor(f.source, g.target, self.base.compose(g.data, f.data))

    def identity(self, x):
        return Mor(x, x, self.base.identity(x.base))

    def cardinality(self, x):
        return len(x.colors)

    def card_map(self, f):
        return self.base.card_map(f.data)

    def component(self, x):
        return x.out

    def terminal(self, c):
        return Colored(self.base.terminal(0), (c,), c)

    def fiber(self, f, i):
        return self.memo("fiber", (f, i), lambda: self._fiber(f, i))

    def _fiber(self, f, i):
        m = self.card_map(f)
        cols = [f.source.colors[j - 1] for j in finset.preimage(m, i)]
        return Colored(self.base.fiber(f.data, i), cols, f.target.colors[i - 1])

    def fiber_map(self, f, g, i):
        h = self.compose(g, f)
        return Mor(self.fiber(h, i), self.fiber(g, i), self.base.fiber_map(f.data, g.data, i))


def pruning_functor(C_trees, C_ords):
    """p : Omega2 -> Ord2 (plain or colored)."""
    colored = isinstance(C_trees, ColoredCategory)

    def obj(T):
        return prune(T)

    def mor(f):
        if colored:
            return Mor(obj(f.source), obj(f.target),
                       Mor(prune(f.source.base), prune(f.target.base), f.data.sigmas[0]))
        return Mor(obj(f.source), obj(f.target), f.sigmas[0])

    return OperadicFunctor(C_trees, C_ords, obj, mor, name="prune")


def pruned_embedding(C_ords, C_trees):
    """l : Ord2 -> Omega2, sending an ordinal to its pruned tree."""

    def mor(f):
        S, T = ordinal_to_pruned_tree(f.source), ordinal_to_pruned_tree(f.target)
        s2 = f.data
        vals = [0] * S.size(1)
        for x in range(1, S.size(2) + 1):
            vals[S.t(1)(x) - 1] = T.t(1)(s2(x))
        return KTreeMorphism(S, T, [s2, FinMap(T.size(1), vals)])

    return OperadicFunctor(C_ords, C_trees, ordinal_to_pruned_tree, mor, name="pruned-embedding")
