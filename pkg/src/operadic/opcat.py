"""Bounded operadic categories and checkers for the operadic axioms.

Most categories of interest are infinite, so every category here is a finite
fragment: ``objects()`` lists the objects in the fragment and ``hom(S, T)``
lists the morphisms between two of them.  Fibers of morphisms may leave the
fragment; the checkers never require them to be inside it.

Morphisms are opaque hashable values; the category supplies ``source``,
``target``, ``compose`` and ``identity``.  Equality of fibers is plain
structural equality of the canonical representations.
"""

from itertools import product

from . import finset
from .finset import FinMap


class ContractError(Exception):
    """Raised when an oracle violates its interface (not an axiom failure)."""


class OperadicCategory:
    """Interface for a finite fragment of a strict operadic category."""

    name = "category"

    def objects(self):
        raise NotImplementedError

    def hom(self, source, target):
        raise NotImplementedError

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, obj):
        raise NotImplementedError

    def cardinality(self, obj):
        raise NotImplementedError

    def card_map(self, f):
        raise NotImplementedError

    def component(self, obj):
        raise NotImplementedError

    def terminal(self, c):
        raise NotImplementedError

    def fiber(self, f, i):
        raise NotImplementedError

    def fiber_map(self, f, g, i):
        """The map f_i : (g o f)^-1(i) -> g^-1(i)."""
        raise NotImplementedError

    # helpers

    def memo(self, table, key, fn):
        """Small per-instance cache used by the concrete categories."""
        try:
            store = self._memo[table]
        except AttributeError:
            self._memo = {}
            store = self._memo[table] = {}
        except KeyError:
            store = self._memo[table] = {}
        try:
            return store[key]
        except KeyError:
            val = store[key] = fn()
            return val

    def is_chosen_terminal(self, obj):
        return obj == self.terminal(self.component(obj))

    def morphisms(self):
        objs = self.objects()
        for s in objs:
            for t in objs:
                yield from self.hom(s, t)

    def hom_table(self):
        objs = self.objects()
        table = {}
        for s in objs:
            for t in objs:
                table[s, t] = list(self.hom(s, t))
        return table


class AxiomReport:
    """Witness lists and instance counts, one entry per named check."""

    def __init__(self, name=""):
        self.name = name
        self.witnesses = {}
        self.checked = {}

    def count(self, axiom, n=1):
        self.checked[axiom] = self.checked.get(axiom, 0) + n
        self.witnesses.setdefault(axiom, [])

    def fail(self, axiom, witness, limit=20):
        self.witnesses.setdefault(axiom, [])
        self.checked.setdefault(axiom, 0)
        if len(self.witnesses[axiom]) < limit:
            self.witnesses[axiom].append(witness)

    def check(self, axiom, ok, witness):
        self.count(axiom)
        if not ok:
            self.fail(axiom, witness)
        return ok

    @property
    def ok(self):
        return all(not w for w in self.witnesses.values())

    def merge(self, other):
        for k, v in other.checked.items():
            self.checked[k] = self.checked.get(k, 0) + v
        for k, v in other.witnesses.items():
            self.witnesses.setdefault(k, []).extend(v)
        return self

    def to_json(self):
        return [{"axiom": k, "witnesses": [repr(w) for w in self.witnesses.get(k, [])],
                 "checked": self.checked.get(k, 0)} for k in sorted(self.checked)]

    def summary(self):
        lines = []
        for k in sorted(self.checked):
            bad = len(self.witnesses.get(k, []))
            lines.append(f"{k}: checked {self.checked[k]}, failures {bad}")
        return "\n".join(lines)

    def __repr__(self):
        return f"AxiomReport({self.name!r}, ok={self.ok})"


def check_axioms(C, chains=True, chain_filter=None, pair_sample=None,
                 chain_sample=None, seed=0):
    """Check axioms (i)-(v) on the fragment C.

    Objects, identities and single morphisms are always checked
    exhaustively.  Composable pairs feed (iii) and (iv); composable triples
    feed the functoriality part of (iii) and axiom (v).  Pairs and triples are
    exhaustive unless ``pair_sample`` / ``chain_sample`` give a number of
    seeded random instances instead.  ``chain_filter(R)`` may restrict the
    final object of exhaustive triples.
    """
    import random
    rng = random.Random(seed)
    rep = AxiomReport(C.name)
    objs = list(C.objects())
    homs = C.hom_table()
    card = {T: C.cardinality(T) for T in objs}
    out_of = {T: [] for T in objs}
    for (S, T), fs in homs.items():
        out_of[S].extend(fs)
    arrows = [f for fs in homs.values() for f in fs]

    # (i) chosen terminals have cardinality one
    comps = []
    for T in objs:
        c = C.component(T)
        if c not in comps:
            comps.append(c)
    for c in comps:
        U = C.terminal(c)
        rep.check("i.terminal", C.cardinality(U) == 1 and C.component(U) == c, c)

    # cardinality functor and fiber sizes
    for (S, T), fs in homs.items():
        for f in fs:
            if C.source(f) != S or C.target(f) != T:
                raise ContractError(f"hom({S}, {T}) produced {f}")
            m = C.card_map(f)
            rep.check("card.map", m.dom == card[S] and m.cod == card[T], f)
            for i in range(1, card[T] + 1):
                F = C.fiber(f, i)
                rep.check("card.fiber", C.cardinality(F) == finset.fiber(m, i), (f, i))
            # Fib_i sends identities of the slice to identities
            for i in range(1, card[T] + 1):
                got = C.fiber_map(C.identity(S), f, i)
                rep.check("iii.identity", got == C.identity(C.fiber(f, i)), (f, i))
            # Fib_1 is the domain functor over a chosen terminal base
            if C.is_chosen_terminal(T):
                rep.check("iii.terminal_base", C.fiber(f, 1) == S, f)

    # (ii) identities are trivial
    for T in objs:
        e = C.identity(T)
        rep.check("card.identity", C.card_map(e) == finset.identity(card[T]), T)
        for i in range(1, card[T] + 1):
            rep.check("ii.identity", C.is_chosen_terminal(C.fiber(e, i)), (T, i))

    # pairs f: T -> S, g: S -> R
    def pair(f, g):
        _check_pair(C, rep, f, g, C.card_map(f), C.card_map(g), card[C.target(g)])
        if C.is_chosen_terminal(C.target(g)):
            rep.check("iii.terminal_base", C.fiber_map(f, g, 1) == f, (f, g))

    if pair_sample:
        for _ in range(pair_sample):
            f = rng.choice(arrows)
            if out_of[C.target(f)]:
                pair(f, rng.choice(out_of[C.target(f)]))
    else:
        for f in arrows:
            for g in out_of[C.target(f)]:
                pair(f, g)

    if not chains:
        return rep
    if chain_sample:
        for _ in range(chain_sample):
            f = rng.choice(arrows)
            if not out_of[C.target(f)]:
                continue
            a = rng.choice(out_of[C.target(f)])
            if not out_of[C.target(a)]:
                continue
            c = rng.choice(out_of[C.target(a)])
            _check_chain(C, rep, f, a, C.compose(a, f), c, C.card_map(a), C.card_map(c),
                         card[C.target(c)])
        return rep
    for f in arrows:
        for a in out_of[C.target(f)]:
            b = C.compose(a, f)
            ma = C.card_map(a)
            for c in out_of[C.target(a)]:
                R = C.target(c)
                if chain_filter is not None and not chain_filter(R):
                    continue
                _check_chain(C, rep, f, a, b, c, ma, C.card_map(c), card[R])
    return rep


def _check_pair(C, rep, f, g, mf, mg, nR):
    h = C.compose(g, f)
    mh = C.card_map(h)
    rep.check("card.compose", mh == finset.compose(mg, mf), (f, g))
    for i in range(1, nR + 1):
        fi = C.fiber_map(f, g, i)
        ok = (C.source(fi) == C.fiber(h, i) and C.target(fi) == C.fiber(g, i)
              and C.card_map(fi) == finset.induced_fiber_map(mf, mg, i))
        rep.check("iii.fiber_map", ok, (f, g, i))
        # (iv): f^-1(j) = f_i^-1(j) for j over i
        for loc, j in enumerate(finset.preimage(mg, i), 1):
            rep.check("iv", C.fiber(f, j) == C.fiber(fi, loc), (f, g, j))


def _check_chain(C, rep, f, a, b, c, ma, mc, nR):
    """Chain T -f-> S -a-> Q -c-> R with b = a o f."""
    g = C.compose(c, a)
    for i in range(1, nR + 1):
        fi = C.fiber_map(f, g, i)           # over g = c o a
        ai = C.fiber_map(a, c, i)
        bi = C.fiber_map(b, c, i)
        # functoriality of Fib_i: (a o f)_i = a_i o f_i
        rep.check("iii.compose", bi == C.compose(ai, fi), (f, a, c, i))
        # (v): (f_i)_j = f_j
        for loc, j in enumerate(finset.preimage(mc, i), 1):
            lhs = C.fiber_map(fi, ai, loc)
            rhs = C.fiber_map(f, a, j)
            rep.check("v", lhs == rhs, (f, a, c, j))


class OperadicFunctor:
    """A functor between two fragments given by an object map and a morphism map."""

    def __init__(self, source, target, on_objects, on_morphisms, name="F"):
        self.source = source
        self.target = target
        self.on_objects = on_objects
        self.on_morphisms = on_morphisms
        self.name = name

    def __call__(self, x):
        return self.on_objects(x)

    def map(self, f):
        return self.on_morphisms(f)


def check_functor(F, pairs=True, pair_sample=None, seed=0):
    """Check that F commutes with cardinality and preserves fibers and terminals.

    Composable pairs are all checked unless ``pair_sample`` gives a number of
    seeded random pairs instead.
    """
    import random
    rng = random.Random(seed)
    C, D = F.source, F.target
    rep = AxiomReport(F.name)
    objs = list(C.objects())
    homs = C.hom_table()
    comps = []
    for T in objs:
        c = C.component(T)
        if c not in comps:
            comps.append(c)
    for c in comps:
        U = C.terminal(c)
        rep.check("terminal", D.is_chosen_terminal(F(U)), c)
    for (S, T), fs in homs.items():
        for f in fs:
            Ff = F.map(f)
            rep.check("functor.ends", D.source(Ff) == F(S) and D.target(Ff) == F(T), f)
            rep.check("cardinality", D.card_map(Ff) == C.card_map(f), f)
            for i in range(1, C.cardinality(T) + 1):
                rep.check("fiber", F(C.fiber(f, i)) == D.fiber(Ff, i), (f, i))
    for T in objs:
        rep.check("identity", F.map(C.identity(T)) == D.identity(F(T)), T)
    if pairs:
        out_of = {T: [] for T in objs}
        for (S, T), fs in homs.items():
            out_of[S].extend(fs)
        arrows = [f for fs in homs.values() for f in fs]
        if pair_sample:
            todo = []
            for _ in range(pair_sample):
                f = rng.choice(arrows)
                if out_of[C.target(f)]:
                    todo.append((f, rng.choice(out_of[C.target(f)])))
        else:
            todo = ((f, g) for f in arrows for g in out_of[C.target(f)])
        for f, g in todo:
            Ff, Fg = F.map(f), F.map(g)
            rep.check("compose", F.map(C.compose(g, f)) == D.compose(Fg, Ff), (f, g))
            for i in range(1, C.cardinality(C.target(g)) + 1):
                rep.check("fiber_map", F.map(C.fiber_map(f, g, i)) == D.fiber_map(Ff, Fg, i),
                          (f, g, i))
    return rep


# ---------------------------------------------------------------------------
# finite sets


class FinSetCategory(OperadicCategory):
    """Skeletal finite sets {0, ..., bound}; every map is a morphism."""

    name = "finset"

    def __init__(self, bound=4):
        self.bound = bound

    def objects(self):
        return list(range(self.bound + 1))

    def hom(self, s, t):
        return finset.all_maps(s, t)

    def source(self, f):
        return f.dom

    def target(self, f):
        return f.cod

    def compose(self, g, f):
        return finset.compose(g, f)

    def identity(self, n):
        return finset.identity(n)

    def cardinality(self, n):
        return n

    def card_map(self, f):
        return f

    def component(self, n):
        return 0

    def terminal(self, c):
        return 1

    def fiber(self, f, i):
        return finset.fiber(f, i)

    def fiber_map(self, f, g, i):
        return finset.induced_fiber_map(f, g, i)


class TerminalCategory(OperadicCategory):
    """The terminal operadic category: one object of cardinality 1."""

    name = "terminal"

    def objects(self):
        return ["*"]

    def hom(self, s, t):
        return ["id"]

    def source(self, f):
        return "*"

    def target(self, f):
        return "*"

    def compose(self, g, f):
        return "id"

    def identity(self, obj):
        return "id"

    def cardinality(self, obj):
        return 1

    def card_map(self, f):
        return finset.identity(1)

    def component(self, obj):
        return 0

    def terminal(self, c):
        return "*"

    def fiber(self, f, i):
        return "*"

    def fiber_map(self, f, g, i):
        return "id"


# ---------------------------------------------------------------------------
# bouquets


class Bouquet:
    """A finite ordered set of colored points plus a root color."""

    __slots__ = ("colors", "root")

    def __init__(self, colors, root):
        self.colors = tuple(colors)
        self.root = root

    def __eq__(self, other):
        return isinstance(other, Bouquet) and (self.colors, self.root) == (other.colors, other.root)

    def __hash__(self):
        return hash((self.colors, self.root))

    def __repr__(self):
        return f"Bq({list(self.colors)};{self.root})"


class Mor:
    """A generic morphism record: source, target, underlying data."""

    __slots__ = ("source", "target", "data", "_hash")

    def __init__(self, source, target, data):
        self.source = source
        self.target = target
        self.data = data
        self._hash = hash((source, target, data))

    def __eq__(self, other):
        return self is other or (isinstance(other, Mor) and self._hash == other._hash
                                 and self.data == other.data and self.source == other.source
                                 and self.target == other.target)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Mor({self.source!r} -> {self.target!r}: {self.data!r})"


class BouquetCategory(OperadicCategory):
    """Bq(C): morphisms are maps of the underlying sets preserving the root color."""

    def __init__(self, colors, bound=3):
        self.colors = tuple(colors)
        self.bound = bound
        self.name = f"Bq{list(self.colors)}"

    def objects(self):
        out = []
        for n in range(self.bound + 1):
            for cs in product(self.colors, repeat=n):
                for r in self.colors:
                    out.append(Bouquet(cs, r))
        return out

    def hom(self, s, t):
        if s.root != t.root:
            return []
        return [Mor(s, t, m) for m in finset.all_maps(len(s.colors), len(t.colors))]

    def compose(self, g, f):
        return Mor(f.source, g.target, finset.compose(g.data, f.data))

    def identity(self, b):
        return Mor(b, b, finset.identity(len(b.colors)))

    def cardinality(self, b):
        return len(b.colors)

    def card_map(self, f):
        return f.data

    def component(self, b):
        return b.root

    def terminal(self, c):
        return Bouquet((c,), c)

    def fiber(self, f, i):
        pts = finset.preimage(f.data, i)
        return Bouquet([f.source.colors[j - 1] for j in pts], f.target.colors[i - 1])

    def fiber_map(self, f, g, i):
        h = self.compose(g, f)
        return Mor(self.fiber(h, i), self.fiber(g, i),
                   finset.induced_fiber_map(f.data, g.data, i))


def bouquet_cardinality(B):
    """|-| : Bq(C) -> finset as an operadic functor."""
    return OperadicFunctor(B, FinSetCategory(B.bound), lambda b: len(b.colors),
                           lambda f: f.data, name="bouquet-cardinality")


# ---------------------------------------------------------------------------
# pullbacks and coloring


class PullbackCategory(OperadicCategory):
    """Pullback of p: Q -> P and pi: O -> P, objects (tau, S) with pi(tau) = p(S).

    Both legs must commute with cardinality, so the cardinality of a pair is
    the common cardinality and fibers are taken componentwise.
    """

    def __init__(self, pi, p, name=None):
        if pi.target is not p.target and type(pi.target) is not type(p.target):
            raise ContractError("legs of a pullback must share a codomain")
        self.pi = pi
        self.p = p
        self.O = pi.source
        self.Q = p.source
        self.name = name or f"pullback({pi.name},{p.name})"
        self._objs = None

    def objects(self):
        if self._objs is None:
            by_image = {}
            for S in self.Q.objects():
                by_image.setdefault(self.p(S), []).append(S)
            out = []
            for tau in self.O.objects():
                for S in by_image.get(self.pi(tau), []):
                    out.append((tau, S))
            self._objs = out
        return self._objs

    def hom(self, s, t):
        out = []
        for f in self.O.hom(s[0], t[0]):
            Pf = self.pi.map(f)
            for g in self.Q.hom(s[1], t[1]):
                if self.p.map(g) == Pf:
                    out.append(Mor(s, t, (f, g)))
        return out

    def compose(self, g, f):
        return Mor(f.source, g.target,
                   (self.O.compose(g.data[0], f.data[0]), self.Q.compose(g.data[1], f.data[1])))

    def identity(self, x):
        return Mor(x, x, (self.O.identity(x[0]), self.Q.identity(x[1])))

    def cardinality(self, x):
        return self.O.cardinality(x[0])

    def card_map(self, f):
        return self.O.card_map(f.data[0])

    def component(self, x):
        return (self.O.component(x[0]), self.Q.component(x[1]))

    def terminal(self, c):
        return (self.O.terminal(c[0]), self.Q.terminal(c[1]))

    def fiber(self, f, i):
        return (self.O.fiber(f.data[0], i), self.Q.fiber(f.data[1], i))

    def fiber_map(self, f, g, i):
        h = self.compose(g, f)
        return Mor(self.fiber(h, i), self.fiber(g, i),
                   (self.O.fiber_map(f.data[0], g.data[0], i),
                    self.Q.fiber_map(f.data[1], g.data[1], i)))


def pullback(pi, p, name=None):
    """The pullback category together with its two projections."""
    P = PullbackCategory(pi, p, name)
    left = OperadicFunctor(P, pi.source, lambda x: x[0], lambda f: f.data[0], name="proj-left")
    right = OperadicFunctor(P, p.source, lambda x: x[1], lambda f: f.data[1], name="proj-right")
    return P, left, right


def cardinality_functor(C, bound=None):
    """|-| : C -> finset."""
    if bound is None:
        bound = max([C.cardinality(T) for T in C.objects()] + [1])
    return OperadicFunctor(C, FinSetCategory(bound), C.cardinality, C.card_map,
                           name=f"card({C.name})")


def colorize(C, colors):
    """C^colors: the pullback of |-| : Bq(colors) -> finset along |-| : C -> finset."""
    bound = max([C.cardinality(T) for T in C.objects()] + [1])
    B = BouquetCategory(colors, bound)
    P, _, _ = pullback(cardinality_functor(C, bound), bouquet_cardinality(B),
                       name=f"{C.name}^{list(colors)}")
    return P


class _PiZeroBouquets(BouquetCategory):
    """Bouquets colored by the components of a category, restricted to the images."""

    def __init__(self, colors, objs):
        super().__init__(colors, 0)
        self._objs = list(dict.fromkeys(objs))
        self.name = "Bq(pi0)"

    def objects(self):
        return self._objs


def arity_functor(C):
    """T -> the bouquet on the fibers of id_T, rooted at pi0(T)."""
    def obj(T):
        e = C.identity(T)
        cs = [C.component(C.fiber(e, i)) for i in range(1, C.cardinality(T) + 1)]
        return Bouquet(cs, C.component(T))

    def mor(f):
        return Mor(obj(C.source(f)), obj(C.target(f)), C.card_map(f))

    objs = list(C.objects())
    comps = list(dict.fromkeys(C.component(T) for T in objs))
    images = [obj(T) for T in objs] + [Bouquet((c,), c) for c in comps]
    B = _PiZeroBouquets(comps, images)
    return OperadicFunctor(C, B, obj, mor, name=f"arity({C.name})")
