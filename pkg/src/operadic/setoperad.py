"""Set-valued operads over operadic categories and the Grothendieck construction.

An operad P over a fragment C gives a finite set P(T) for every object T, a
unit element in P(U_c) for every chosen terminal and a multiplication

    mult(f, eps, kappa) in P(T)   for f: T -> S, eps[i-1] in P(f^-1(i)), kappa in P(S).

Elements are arbitrary hashable values.  Disjoint unions are tagged pairs.
"""

import random
from itertools import product

from . import finset
from .opcat import AxiomReport, ContractError, Mor, OperadicCategory, OperadicFunctor


class FibrationError(ContractError):
    pass


class SetOperad:
    def __init__(self, base, component, unit, mult, name="P"):
        self.base = base
        self._component = component
        self._unit = unit
        self._mult = mult
        self.name = name
        self._cache = {}
        self._products = {}

    def component(self, T):
        try:
            return self._cache[T]
        except KeyError:
            val = self._cache[T] = list(self._component(T))
            return val

    def unit(self, c):
        return self._unit(c)

    def mult(self, f, eps, kappa):
        key = (f, tuple(eps), kappa)
        try:
            return self._products[key]
        except KeyError:
            val = self._products[key] = self._mult(f, key[1], kappa)
            return val


def unit_operad(C):
    """The terminal operad 1^C: a single element everywhere."""
    return SetOperad(C, lambda T: [()], lambda c: (), lambda f, eps, k: (), name=f"1^{C.name}")


def _fibers(C, f):
    return [C.fiber(f, i) for i in range(1, C.cardinality(C.target(f)) + 1)]


def _choices(P, objs, limit=None):
    sets = [P.component(X) for X in objs]
    return product(*sets)


def check_operad(P, pair_sample=None, seed=0, max_choices=2000):
    """Unit and associativity axioms on the fragment of P's base category.

    Associativity runs over composable pairs (exhaustive, or ``pair_sample``
    random pairs); for each pair at most ``max_choices`` element choices are
    tried, in a fixed pseudo-random order when there are more.
    """
    C = P.base
    rng = random.Random(seed)
    rep = AxiomReport(P.name)
    objs = list(C.objects())
    homs = C.hom_table()
    out_of = {T: [] for T in objs}
    for (S, T), fs in homs.items():
        out_of[S].extend(fs)
    for T in objs:
        for x in P.component(T):
            if not isinstance(x, (tuple, str, int, frozenset)) and hash(x) is None:
                raise ContractError("operad elements must be hashable")
        e = C.identity(T)
        units = [P.unit(C.component(F)) for F in _fibers(C, e)]
        for x in P.component(T):
            rep.check("unit.right", P.mult(e, units, x) == x, (T, x))
    for (S, T), fs in homs.items():
        if not C.is_chosen_terminal(T):
            continue
        u = P.unit(C.component(T))
        for f in fs:
            for x in P.component(S):
                rep.check("unit.left", P.mult(f, [x], u) == x, (f, x))
    arrows = [f for fs in homs.values() for f in fs]
    pairs = []
    if pair_sample:
        for _ in range(pair_sample):
            f = rng.choice(arrows)
            if out_of[C.target(f)]:
                pairs.append((f, rng.choice(out_of[C.target(f)])))
    else:
        pairs = [(f, g) for f in arrows for g in out_of[C.target(f)]]
    for f, g in pairs:
        _assoc(P, rep, f, g, rng, max_choices)
    return rep


def _assoc(P, rep, f, g, rng, max_choices):
    C = P.base
    h = C.compose(g, f)
    R = C.target(g)
    nR = C.cardinality(R)
    mg = C.card_map(g)
    f_fibers = _fibers(C, f)
    g_fibers = _fibers(C, g)
    sets = [P.component(R)] + [P.component(X) for X in g_fibers] + \
        [P.component(X) for X in f_fibers]
    total = 1
    for s in sets:
        total *= len(s)
    if total == 0:
        return
    if total <= max_choices:
        picks = product(*sets)
    else:
        picks = ([rng.choice(s) for s in sets] for _ in range(max_choices))
    nS = len(g_fibers)
    fis = [C.fiber_map(f, g, i) for i in range(1, nR + 1)]
    for pick in picks:
        rho = pick[0]
        sig = pick[1:1 + nS]
        tau = pick[1 + nS:]
        inner = []
        for i in range(1, nR + 1):
            over = finset.preimage(mg, i)
            inner.append(P.mult(fis[i - 1], [tau[j - 1] for j in over], sig[i - 1]))
        lhs = P.mult(h, inner, rho)
        rhs = P.mult(f, tau, P.mult(g, sig, rho))
        rep.check("assoc", lhs == rhs, (f, g, pick))


def mutate_swap(P, T):
    """A copy of P whose multiplication swaps two elements of P(T) (for mutation tests)."""
    elems = P.component(T)
    if len(elems) < 2:
        raise ValueError("need two elements to swap")
    a, b = elems[0], elems[1]

    def mult(f, eps, kappa):
        x = P.mult(f, eps, kappa)
        if P.base.source(f) == T and not all(e == P.unit(P.base.component(P.base.fiber(f, i + 1)))
                                              for i, e in enumerate(eps)):
            return b if x == a else a if x == b else x
        return x
    return SetOperad(P.base, P.component, P.unit, mult, name=P.name + "~swap")


# ---------------------------------------------------------------------------
# the Grothendieck construction


class GrothendieckCategory(OperadicCategory):
    """Objects (T, x) with x in P(T); a morphism (T, x) -> (S, y) is (f, eps)
    with mult(f, eps, y) = x."""

    def __init__(self, P):
        self.P = P
        self.C = P.base
        self.name = f"groth({P.name})"
        self._objs = None

    def objects(self):
        if self._objs is None:
            self._objs = [(T, x) for T in self.C.objects() for x in self.P.component(T)]
        return self._objs

    def hom(self, s, t):
        return self.memo("hom", (s, t), lambda: self._hom(s, t))

    def _hom(self, s, t):
        out = []
        for f in self.C.hom(s[0], t[0]):
            for eps in _choices(self.P, _fibers(self.C, f)):
                if self.P.mult(f, eps, t[1]) == s[1]:
                    out.append(Mor(s, t, (f, eps)))
        return out

    def compose(self, g, f):
        C, P = self.C, self.P
        ff, eps = f.data
        gg, dlt = g.data
        mg = C.card_map(gg)
        h = C.compose(gg, ff)
        new = []
        for i in range(1, C.cardinality(C.target(gg)) + 1):
            over = finset.preimage(mg, i)
            new.append(P.mult(C.fiber_map(ff, gg, i), [eps[j - 1] for j in over], dlt[i - 1]))
        return Mor(f.source, g.target, (h, tuple(new)))

    def identity(self, x):
        e = self.C.identity(x[0])
        return Mor(x, x, (e, tuple(self.P.unit(self.C.component(F)) for F in _fibers(self.C, e))))

    def cardinality(self, x):
        return self.C.cardinality(x[0])

    def card_map(self, f):
        return self.C.card_map(f.data[0])

    def component(self, x):
        return self.C.component(x[0])

    def terminal(self, c):
        return (self.C.terminal(c), self.P.unit(c))

    def fiber(self, f, i):
        return (self.C.fiber(f.data[0], i), f.data[1][i - 1])

    def fiber_map(self, f, g, i):
        C = self.C
        ff, eps = f.data
        gg = g.data[0]
        over = finset.preimage(C.card_map(gg), i)
        h = self.compose(g, f)
        return Mor(self.fiber(h, i), self.fiber(g, i),
                   (C.fiber_map(ff, gg, i), tuple(eps[j - 1] for j in over)))


class DiscreteFibration:
    """An operadic functor F: E -> C with its lifting function.

    lift(f, xs, y) is the unique morphism over f with target y whose fibers
    are the objects xs.
    """

    def __init__(self, functor, lift):
        self.functor = functor
        self.lift = lift

    @property
    def total(self):
        return self.functor.source

    @property
    def base(self):
        return self.functor.target


def grothendieck(P):
    """The category of elements of P and its projection, a discrete fibration."""
    E = GrothendieckCategory(P)
    F = OperadicFunctor(E, P.base, lambda x: x[0], lambda f: f.data[0], name="proj")

    def lift(f, xs, y):
        eps = tuple(x[1] for x in xs)
        C = P.base
        for n, x in enumerate(xs, 1):
            if x[0] != C.fiber(f, n):
                raise FibrationError(f"fiber object {n} does not lie over the fiber of f")
        if y[0] != C.target(f):
            raise FibrationError("target does not lie over the target of f")
        return Mor((C.source(f), P.mult(f, eps, y[1])), y, (f, eps))
    return E, DiscreteFibration(F, lift)


def ungrothendieck(W):
    """The operad T -> {x : F(x) = T} with multiplication by unique lifting."""
    F = W.functor
    E, C = F.source, F.target
    over = {}
    for x in E.objects():
        over.setdefault(F(x), []).append(x)
    comp_over = _component_bijection(W)

    def unit(c):
        return E.terminal(comp_over[c])

    def mult(f, xs, y):
        s = W.lift(f, xs, y)
        if F.map(s) != f:
            raise FibrationError("lift does not lie over f")
        return E.source(s)
    return SetOperad(C, lambda T: over.get(T, []), unit, mult, name=f"ungroth({E.name})")


def _component_bijection(W):
    F = W.functor
    E, C = F.source, F.target
    out = {}
    for x in E.objects():
        c = E.component(x)
        d = C.component(F(x))
        if d in out and out[d] != c:
            raise FibrationError(f"components {out[d]!r} and {c!r} both lie over {d!r}")
        out[d] = c
    return out


def pushforward(W, P):
    """F_! P: (F_! P)(T) is the disjoint union of P(x) over F(x) = T."""
    F = W.functor
    E, C = F.source, F.target
    if P.base is not E:
        raise ContractError("operad must live over the total category")
    over = {}
    for x in E.objects():
        over.setdefault(F(x), []).append(x)
    comp_over = _component_bijection(W)

    def component(T):
        return [(x, p) for x in over.get(T, []) for p in P.component(x)]

    def unit(c):
        return (E.terminal(comp_over[c]), P.unit(comp_over[c]))

    def mult(f, elems, target):
        s = W.lift(f, [e[0] for e in elems], target[0])
        return (E.source(s), P.mult(s, [e[1] for e in elems], target[1]))
    return SetOperad(C, component, unit, mult, name=f"push({P.name})")


def check_discrete_fibration(W, sample=None, seed=0):
    """Unique lifting, compatibility of the lift, and the bijection on components."""
    F = W.functor
    E, C = F.source, F.target
    rng = random.Random(seed)
    rep = AxiomReport(f"fibration({F.name})")
    try:
        _component_bijection(W)
        rep.count("pi0.bijection")
    except FibrationError as e:
        rep.fail("pi0.bijection", str(e))
    comps_E = {E.component(x) for x in E.objects()}
    comps_C = {C.component(F(x)) for x in E.objects()}
    rep.check("pi0.bijection", len(comps_E) == len(comps_C), (len(comps_E), len(comps_C)))
    over = {}
    for x in E.objects():
        over.setdefault(F(x), []).append(x)
    ehom = {}
    for s in E.objects():
        for t in E.objects():
            for m in E.hom(s, t):
                key = (F.map(m), t, tuple(E.fiber(m, i) for i in range(1, E.cardinality(t) + 1)))
                ehom.setdefault(key, []).append(m)
    cases = []
    for (S, T), fs in C.hom_table().items():
        for f in fs:
            for y in over.get(T, []):
                fibs = _fibers(C, f)
                for xs in product(*[[x for x in over.get(X, [])] for X in fibs]):
                    cases.append((f, xs, y))
    if sample and len(cases) > sample:
        cases = rng.sample(cases, sample)
    for f, xs, y in cases:
        found = ehom.get((f, y, tuple(xs)), [])
        rep.check("lift.unique", len(found) == 1, (f, xs, y, len(found)))
        try:
            s = W.lift(f, list(xs), y)
        except FibrationError as e:
            rep.fail("lift.agrees", (f, xs, y, str(e)))
            continue
        rep.check("lift.agrees", found == [s], (f, xs, y))
    return rep


def operads_equal(P, Q):
    """Componentwise equality of two operads on their (shared) base fragment."""
    rep = AxiomReport(f"{P.name} = {Q.name}")
    C = P.base
    for T in C.objects():
        rep.check("component", sorted(map(repr, P.component(T))) ==
                  sorted(map(repr, Q.component(T))), T)
    homs = C.hom_table()
    for (S, T), fs in homs.items():
        for f in fs:
            fibs = _fibers(C, f)
            for y in P.component(T):
                for xs in product(*[P.component(X) for X in fibs]):
                    rep.check("mult", P.mult(f, xs, y) == Q.mult(f, xs, y), (f, xs, y))
    return rep


def grothendieck_roundtrip(P):
    """ungroth(groth(P)) compared with P, elements matched by x <-> (T, x)."""
    E, W = grothendieck(P)
    Q = ungrothendieck(W)
    rep = AxiomReport(f"ungroth(groth({P.name}))")
    C = P.base
    for T in C.objects():
        rep.check("component", [x[1] for x in Q.component(T)] == list(P.component(T)), T)
    for (S, T), fs in C.hom_table().items():
        for f in fs:
            fibs = _fibers(C, f)
            for y in P.component(T):
                for xs in product(*[P.component(X) for X in fibs]):
                    got = Q.mult(f, [(X, x) for X, x in zip(fibs, xs)], (T, y))
                    rep.check("mult", got == (S, P.mult(f, xs, y)), (f, xs, y))
    for c in {C.component(T) for T in C.objects()}:
        rep.check("unit", Q.unit(c) == (C.terminal(c), P.unit(c)), c)
    return rep


def fibration_roundtrip(W):
    """groth(ungroth(W)) compared with the total category of W.

    Objects x of E correspond to (F(x), x); morphisms m correspond to
    (F(m), fibers of m).  The check is that this is a bijection on objects
    and on every hom-set.
    """
    F = W.functor
    E = F.source
    P = ungrothendieck(W)
    G, _ = grothendieck(P)
    rep = AxiomReport(f"groth(ungroth({F.name}))")
    objs_E = list(E.objects())
    objs_G = list(G.objects())
    rep.check("objects", sorted(map(repr, ((F(x), x) for x in objs_E))) ==
              sorted(map(repr, objs_G)), len(objs_E))
    for s in objs_E:
        for t in objs_E:
            mine = sorted(repr((F.map(m), tuple(E.fiber(m, i)
                                                for i in range(1, E.cardinality(t) + 1))))
                          for m in E.hom(s, t))
            theirs = sorted(repr(m.data) for m in G.hom((F(s), s), (F(t), t)))
            rep.check("hom", mine == theirs, (s, t))
    return rep


# ---------------------------------------------------------------------------
# pullbacks of discrete fibrations and Beck-Chevalley


def pullback_fibration(W, p):
    """Pull the discrete fibration W: E -> C back along p: Q -> C.

    Returns (Pb, W', r): W' is the discrete fibration Pb -> Q and r: Pb -> E.
    """
    from .opcat import pullback
    Pb, left, right = pullback(W.functor, p)
    Q = p.source

    def lift(g, xs, y):
        s = W.lift(p.map(g), [x[0] for x in xs], y[0])
        return Mor((E_source(s), Q.source(g)), y, (s, g))

    def E_source(s):
        return W.functor.source.source(s)
    return Pb, DiscreteFibration(right, lift), left


def beck_chevalley_check(W, p, P=None, objects=None):
    """Compare (varpi)_!(r^* P) with p^*(pi_! P) at each object S of Q.

    At S both sides are the sets of pairs (x, a) with F(x) = p(S) and
    a in P(x), the left side tagging x with S.  The check records, for every S,
    that forgetting the tag is a bijection between the two sides.
    """
    F = W.functor
    E = F.source
    if P is None:
        P = unit_operad(E)
    Pb, W2, r = pullback_fibration(W, p)
    Q = p.source
    rep = AxiomReport("beck-chevalley")
    lhs_by = {}
    for x in Pb.objects():
        lhs_by.setdefault(x[1], []).append(x)
    over = {}
    for x in E.objects():
        over.setdefault(F(x), []).append(x)
    for S in (objects if objects is not None else Q.objects()):
        lhs = [(x[0], a) for x in lhs_by.get(S, []) for a in P.component(x[0])]
        rhs = [(x, a) for x in over.get(p(S), []) for a in P.component(x)]
        ok = len(lhs) == len(set(map(repr, lhs))) and \
            sorted(map(repr, lhs)) == sorted(map(repr, rhs))
        rep.check("bijection", ok, (S, len(lhs), len(rhs)))
    return rep
