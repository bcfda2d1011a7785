"""Literal parsers and printers, and the ``operadic`` command line.

Every literal kind has a one-line, whitespace-insensitive grammar; see
docs/grammar.md.  ``parse(kind, text)`` returns a validated value and
``show(value)`` prints it back so that parse(kind, show(v)) == v.

Exit codes: 0 success, 1 a check came out false, 2 parse or validation error.
"""

import argparse
import json
import os
import random
import sys
from itertools import product

from . import lat, ltr
from .finset import FinMap, FinSetError
from .lat import LEAF, LatError, TamElement, TmElement
from .ltr import LevelError, LevelledTree, SemiLevelledTree
from .omega import Colored, KOrdinal, KTree, TreeError, prune

JSON_VERSION = 1
KINDS = ("fmap", "t2", "ord2", "ltr", "lat", "tm", "tam", "slt")


class LiteralError(ValueError):
    """A syntax error (with line and column) or a validation error (with the
    name of the broken invariant)."""

    def __init__(self, message, line=None, col=None, invariant=None):
        self.line = line
        self.col = col
        self.invariant = invariant
        if invariant is not None:
            message = f"validation error [{invariant}]: {message}"
        elif line is not None:
            message = f"syntax error at line {line}, column {col}: {message}"
        super().__init__(message)


# ---------------------------------------------------------------------------
# scanning


class Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = before.count("\n") + 1
        col = pos - (before.rfind("\n") + 1) + 1
        return line, col

    def error(self, message, pos=None):
        line, col = self.where(pos)
        return LiteralError(message, line, col)

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at(self, word):
        self.ws()
        return self.text.startswith(word, self.pos)

    def expect(self, word):
        if not self.at(word):
            got = self.text[self.pos:self.pos + len(word)] or "end of input"
            raise self.error(f"expected {word!r}, found {got!r}")
        self.pos += len(word)

    def accept(self, word):
        if self.at(word):
            self.pos += len(word)
            return True
        return False

    def int(self):
        self.ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if digits in ("", "-"):
            self.pos = start
            raise self.error("expected an integer")
        return int(digits)

    def int_list(self):
        self.expect("[")
        out = []
        if self.accept("]"):
            return out
        out.append(self.int())
        while self.accept(","):
            out.append(self.int())
        self.expect("]")
        return out

    def end(self):
        self.ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected {self.text[self.pos]!r}")


# ---------------------------------------------------------------------------
# grammar of each kind


def _fmap(sc):
    sc.accept("fmap")
    vals = sc.int_list()
    sc.expect("->")
    return FinMap(sc.int(), vals)


def _coloring(sc, base):
    if not sc.accept(";"):
        return base
    sc.expect("colors")
    sc.expect("=")
    colors = sc.int_list()
    sc.expect(";")
    sc.expect("out")
    sc.expect("=")
    return Colored(base, colors, sc.int())


def _t2(sc):
    sc.expect("t2")
    sc.expect(":")
    vals = sc.int_list()
    n1 = sc.int() if sc.accept("->") else None
    from .omega import tree2
    return _coloring(sc, tree2(vals, n1))


def _ord2(sc):
    sc.expect("ord")
    k = sc.int()
    sc.expect("{")
    sc.expect("n")
    sc.expect("=")
    n = sc.int()
    sc.expect(";")
    rel = {}
    if sc.peek() == "(":
        while True:
            sc.expect("(")
            a = sc.int()
            sc.expect(",")
            b = sc.int()
            sc.expect(",")
            p = sc.int()
            sc.expect(")")
            if (a, b) in rel:
                raise sc.error(f"pair ({a},{b}) given twice")
            rel[(a, b)] = p
            if not sc.accept(","):
                break
    sc.expect("}")
    for a, b in rel:
        if not (1 <= a <= n and 1 <= b <= n):
            raise LiteralError(f"element outside 1..{n}", invariant="ord.elements")
    return _coloring(sc, KOrdinal(n, rel, k))


def _ltr(sc):
    sc.expect("ltr")
    sc.expect(":")
    if sc.accept("|"):
        return ltr.EXCEPTIONAL
    levels = []
    while True:
        lev = [_ltr_vertex(sc)]
        while sc.accept(","):
            lev.append(_ltr_vertex(sc))
        levels.append(lev)
        if not sc.accept("/"):
            break
    return LevelledTree(levels)


def _ltr_vertex(sc):
    c = sc.peek()
    if c not in ("w", "v", "h"):
        raise sc.error("expected a vertex w<n>, v<n> or h<n>")
    sc.pos += 1
    return (c, sc.int())


def _lat(sc):
    if sc.accept("*"):
        return LEAF
    sc.expect("(")
    if sc.accept("b"):
        node = ("b",)
    elif sc.accept("w"):
        node = ("w", sc.int())
    else:
        raise sc.error("expected 'w<label>' or 'b'")
    kids = []
    while sc.peek() != ")":
        if sc.peek() == "":
            raise sc.error("unclosed '('")
        kids.append(_lat(sc))
    sc.expect(")")
    return node + (tuple(kids),)


def _tm(sc):
    sc.expect("tm")
    sc.expect("{")
    sc.expect("tree")
    sc.expect(":")
    T = _t2(sc)
    if not isinstance(T, Colored):
        raise LiteralError("the 2-tree of a tm literal needs colors and out",
                           invariant="tm.colored")
    sc.expect(",")
    sc.expect("lat")
    sc.expect(":")
    d = _lat(sc)
    sc.expect("}")
    return TmElement(T, d)


def _tam(sc):
    sc.expect("tam")
    sc.expect("{")
    sc.expect("ord")
    sc.expect(":")
    O = _ord2(sc)
    if not isinstance(O, Colored):
        raise LiteralError("the ordinal of a tam literal needs colors and out",
                           invariant="tam.colored")
    sc.expect(",")
    sc.expect("lat")
    sc.expect(":")
    d = _lat(sc)
    sc.expect("}")
    return TamElement(O, d)


def _slt(sc):
    sc.expect("slt")
    sc.expect("{")
    sc.expect("u")
    sc.expect("=")
    u = sc.int()
    sc.expect(";")
    root = _slt_node(sc)
    sc.expect("}")
    return SemiLevelledTree(root, u)


def _slt_node(sc):
    if sc.accept("*"):
        return LEAF
    sc.expect("(")
    if sc.accept("b"):
        head = ("b",)
    elif sc.accept("w"):
        label = sc.int()
        sc.expect("@")
        head = ("w", label, sc.int())
    elif sc.accept("x"):
        sc.expect("@")
        head = ("x", sc.int())
    else:
        raise sc.error("expected 'w<label>@<level>', 'x@<level>' or 'b'")
    kids = []
    while sc.peek() != ")":
        if sc.peek() == "":
            raise sc.error("unclosed '('")
        kids.append(_slt_node(sc))
    sc.expect(")")
    return head + (tuple(kids),)


_PARSERS = {"fmap": _fmap, "t2": _t2, "ord2": _ord2, "ltr": _ltr, "lat": _lat,
            "tm": _tm, "tam": _tam, "slt": _slt}


def kind_of(text):
    """Guess the literal kind from its first characters."""
    s = text.lstrip()
    for prefix, kind in (("fmap", "fmap"), ("t2", "t2"), ("ord", "ord2"), ("ltr", "ltr"),
                         ("tm", "tm"), ("tam", "tam"), ("slt", "slt"), ("(", "lat"),
                         ("*", "lat"), ("[", "fmap")):
        if s.startswith(prefix):
            return kind
    raise LiteralError("cannot tell the literal kind", 1, 1)


def parse(kind, text):
    """Parse and validate a literal of the given kind (or None to guess)."""
    if kind is None:
        kind = kind_of(text)
    if kind not in _PARSERS:
        raise LiteralError(f"unknown literal kind {kind!r}", 1, 1)
    sc = Scanner(text)
    try:
        value = _PARSERS[kind](sc)
        sc.end()
        if kind == "lat":
            lat.validate(value)
    except LiteralError:
        raise
    except (FinSetError, TreeError, LatError, LevelError) as e:
        raise LiteralError(str(e), invariant=type(e).__name__)
    return value


def _ints(xs):
    return "[" + ",".join(map(str, xs)) + "]"


def show(value):
    """The literal of a value; the inverse of parse."""
    if isinstance(value, (tuple, str)):
        return lat.to_sexpr(value)
    if isinstance(value, FinMap):
        return f"fmap{_ints(value.values)}->{value.cod}"
    if isinstance(value, KTree) and value.k == 2:
        return f"t2:{_ints(value.maps[0].values)}->{value.sizes[1]}"
    if isinstance(value, Colored):
        return f"{show(value.base)};colors={_ints(value.colors)};out={value.out}"
    if isinstance(value, TmElement):
        return f"tm{{tree: {show(value.tree2)}, lat: {lat.to_sexpr(value.tree)}}}"
    if isinstance(value, TamElement):
        return f"tam{{ord: {show(value.ordinal)}, lat: {lat.to_sexpr(value.tree)}}}"
    return repr(value)


def to_json(value):
    """A JSON mirror of a value."""
    if isinstance(value, FinMap):
        return value.to_json()
    if isinstance(value, KTree):
        return {"kind": "t2", "n2": value.sizes[0], "n1": value.sizes[1],
                "t1": list(value.maps[0].values)}
    if isinstance(value, KOrdinal):
        return {"kind": f"ord{value.k}", "n": value.n,
                "rel": [[a, b, p] for (a, b), p in sorted(value.rel.items())]}
    if isinstance(value, Colored):
        return {"base": to_json(value.base), "colors": list(value.colors), "out": value.out}
    if isinstance(value, LevelledTree):
        return {"kind": "ltr", "levels": [[f"{k}{a}" for k, a in lev] for lev in value.levels]}
    if isinstance(value, TmElement):
        return {"kind": "tm", "tree": to_json(value.tree2), "lat": lat.to_sexpr(value.tree)}
    if isinstance(value, TamElement):
        return {"kind": "tam", "ord": to_json(value.ordinal), "lat": lat.to_sexpr(value.tree)}
    if isinstance(value, (tuple, str)):
        return {"kind": "lat", "sexpr": lat.to_sexpr(value)}
    if isinstance(value, SemiLevelledTree):
        return {"kind": "slt", "u": value.height, "sexpr": ltr.slt_sexpr(value.root)}
    return repr(value)


# ---------------------------------------------------------------------------
# named fragments


def default_bound():
    raw = os.environ.get("OPERADIC_BOUND", "3")
    try:
        return int(raw)
    except ValueError:
        raise LiteralError(f"OPERADIC_BOUND={raw!r} is not an integer", invariant="env")


def category(name, bound, inner=1):
    from .omega import Omega2Category, Ord2Category
    from .opcat import BouquetCategory, FinSetCategory, TerminalCategory
    if name == "finset":
        return FinSetCategory(bound)
    if name == "omega2":
        return Omega2Category(bound, bound)
    if name == "ord2":
        return Ord2Category(bound)
    if name == "bq":
        return BouquetCategory(("a", "b"), bound)
    if name == "ltr":
        return ltr.LTrCategory(bound, bound, inner)
    if name == "terminal":
        return TerminalCategory()
    if name == "tam":
        return lat.tam_category(bound, 1)[0]
    if name == "tm":
        return lat.tm_category(bound, bound, 1)[0]
    raise LiteralError(f"unknown category {name!r}", invariant="category")


CATEGORIES = ("finset", "omega2", "ord2", "bq", "ltr", "terminal", "tam", "tm")


def functor(name, bound):
    from .omega import Omega2Category, Ord2Category, pruned_embedding, pruning_functor
    from .opcat import BouquetCategory, arity_functor, bouquet_cardinality
    if name == "prune":
        return pruning_functor(Omega2Category(bound, bound), Ord2Category(bound))
    if name == "embed":
        return pruned_embedding(Ord2Category(bound), Omega2Category(bound, bound))
    if name == "bouquet-card":
        return bouquet_cardinality(BouquetCategory(("a", "b"), bound))
    if name.startswith("arity-"):
        return arity_functor(category(name[len("arity-"):], bound))
    raise LiteralError(f"unknown functor {name!r}", invariant="functor")


FUNCTORS = ("prune", "embed", "bouquet-card", "arity-finset", "arity-omega2", "arity-ord2",
            "arity-ltr")


def operad(name, bound):
    from .omega import Omega2Category
    from .opcat import FinSetCategory
    from .setoperad import unit_operad
    if name == "tam":
        return lat.op_tam(bound, 1)
    if name == "tm":
        return lat.op_tm(bound, bound, 1)
    if name == "unit-finset":
        return unit_operad(FinSetCategory(bound))
    if name == "unit-omega2":
        return unit_operad(Omega2Category(bound, bound))
    raise LiteralError(f"unknown operad {name!r}", invariant="operad")


OPERADS = ("tam", "tm", "unit-finset", "unit-omega2")


def fibration(name, bound):
    from .setoperad import grothendieck
    if name == "tm":
        return lat.tm_category(bound, bound, 1)[1]
    return grothendieck(operad(name, bound))[1]


# ---------------------------------------------------------------------------
# commands


def _inputs(items, kind=None):
    """Literals given inline, or as @file with one literal per line."""
    out = []
    for item in items:
        if item.startswith("@"):
            with open(item[1:]) as fh:
                for line in fh:
                    line = line.strip()
                    if line and not line.startswith("#"):
                        out.append(line)
        else:
            out.append(item)
    return [parse(kind, text) for text in out]


def _need(value, cls, what):
    if not isinstance(value, cls):
        raise LiteralError(f"expected {what}, got {show(value)}", invariant="kind")
    return value


def _map_command(fn, kind):
    def run(args, out):
        rows = []
        for x in _inputs(args.literal, kind):
            rows.append((x, fn(x, args)))
        if args.json:
            out["results"] = [{"input": to_json(x), "output": to_json(y)} for x, y in rows]
        else:
            out["text"] = [show(y) for _, y in rows]
        return 0
    return run


def cmd_validate(args, out):
    vals = _inputs(args.literal, args.kind)
    if args.json:
        out["results"] = [to_json(v) for v in vals]
    else:
        out["text"] = [f"valid: {show(v)}" for v in vals]
    return 0


def cmd_canon(args, out):
    rows = []
    for beta in _inputs(args.literal, "ltr"):
        can, trace = ltr.canonical_form(beta, trace=True)
        rows.append((beta, can, trace))
    if args.json:
        out["results"] = [{"input": to_json(b), "canonical": to_json(c),
                           "moves": [list(m) for m in t]} for b, c, t in rows]
    else:
        out["text"] = []
        for b, c, t in rows:
            out["text"].append(show(c))
            if args.trace:
                out["text"].extend(f"  {m}" for m in t)
    return 0


def cmd_eq_w(args, out):
    a = parse("ltr", args.first)
    if args.second is not None:
        b = parse("ltr", args.second)
        seq = []
    else:
        b, seq = ltr.random_moves(a, args.moves, random.Random(args.seed))
    equal = ltr.w_equivalent(a, b)
    if args.json:
        out["results"] = {"first": show(a), "second": show(b), "moves": [list(m) for m in seq],
                          "equal": equal}
    else:
        out["text"] = []
        if seq:
            out["text"].append(f"second: {show(b)}")
        out["text"].append("equal" if equal else "different")
    return 0 if equal else 1


def cmd_section(args, out):
    rows = []
    for x in _inputs(args.literal, "tm"):
        _need(x, TmElement, "a tm literal")
        rows.append((x, ltr.section(x)))
    if args.json:
        out["results"] = [{"input": to_json(x), "section": to_json(b),
                           "semi_levelled": to_json(ltr.tm_to_pr(x)),
                           "bookkeeping": ltr.sigma_bookkeeping(x.tree2),
                           "w_of_section": to_json(ltr.w_of(b))} for x, b in rows]
    else:
        out["text"] = [show(b) for _, b in rows]
    ok = all(ltr.w_of(b) == x for x, b in rows)
    return 0 if ok else 1


def cmd_compose_lat(args, out):
    d = parse("lat", args.delta)
    g = parse("lat", args.gamma)
    try:
        r = lat.lat_compose(d, args.i, g)
    except LatError as e:
        raise LiteralError(str(e), invariant="LatError")
    out["results"] = to_json(r)
    out["text"] = [show(r)]
    return 0


def cmd_dominates(args, out):
    O = parse(None, args.order)
    if isinstance(O, KTree) or (isinstance(O, Colored) and isinstance(O.base, KTree)):
        O = prune(O)
    _need(O.base if isinstance(O, Colored) else O, KOrdinal, "a 2-tree or 2-ordinal")
    d = parse("lat", args.tree)
    ok = lat.dominates(O, d)
    out["results"] = {"dominates": ok}
    out["text"] = ["true" if ok else "false"]
    return 0 if ok else 1


def cmd_enumerate_tm(args, out):
    T = _need(parse("t2", args.literal), Colored, "a colored 2-tree")
    elems = lat.enumerate_tm(T)
    out["results"] = {"count": len(elems), "elements": [show(x) for x in elems]}
    out["text"] = ([] if args.count else [show(x) for x in elems]) + [f"count: {len(elems)}"]
    return 0


def cmd_components(args, out):
    from .contract import components
    T = parse("t2", args.t2)
    shape = T.base if isinstance(T, Colored) else T
    n = args.n if args.n is not None else (T.out if isinstance(T, Colored) else 0)
    classes, elements, edges = components(shape, n)
    out["results"] = {"elements": elements, "edges": edges, "classes": classes}
    out["text"] = [f"elements: {elements}", f"edges: {edges}", f"classes: {classes}"]
    return 0


def _report(rep, out, args):
    out["results"] = rep.to_json()
    out["ok"] = rep.ok
    out["text"] = [rep.summary(), "ok" if rep.ok else "FAILED"]
    return 0 if rep.ok else 1


def cmd_check_axioms(args, out):
    from .opcat import check_axioms
    C = category(args.name, args.bound, args.inner)
    if args.exhaustive:
        pairs, chains = None, None
    else:
        pairs, chains = args.pairs or None, args.chains or None
    rep = check_axioms(C, pair_sample=pairs, chain_sample=chains, seed=args.seed)
    return _report(rep, out, args)


def cmd_check_functor(args, out):
    from .opcat import check_functor
    rep = check_functor(functor(args.name, args.bound), pair_sample=args.pairs or None,
                        seed=args.seed)
    return _report(rep, out, args)


def cmd_beck_chevalley(args, out):
    from .contract import shapes
    bases = [Colored(T, cs, n) for T in shapes(args.bound, args.bound)
             for cs in product(range(args.colors + 1), repeat=T.size(2))
             for n in range(args.bound + 1)]
    rep, rows = lat.tm_beck_chevalley(bases)
    out["results"] = {"report": rep.to_json(),
                      "table": [{"base": show(S), "lhs": a, "rhs": b, "enumerate_tm": c}
                                for S, a, b, c in rows]}
    out["ok"] = rep.ok
    out["text"] = [f"{show(S)}: {a} {b} {c}" for S, a, b, c in rows if args.verbose]
    out["text"] += [rep.summary(), "ok" if rep.ok else "FAILED"]
    return 0 if rep.ok else 1


def _table(P):
    return {show(T) if isinstance(T, (KTree, Colored)) else repr(T): len(P.component(T))
            for T in P.base.objects()}


def cmd_groth(args, out):
    from .setoperad import grothendieck, grothendieck_roundtrip
    P = operad(args.name, args.bound)
    E, _ = grothendieck(P)
    rep = grothendieck_roundtrip(P)
    out["results"] = {"objects": len(E.objects()), "components": _table(P),
                      "roundtrip": rep.to_json()}
    out["ok"] = rep.ok
    out["text"] = [f"{k}: {v}" for k, v in out["results"]["components"].items() if v]
    out["text"] += [f"objects: {len(E.objects())}", rep.summary(),
                    "ok" if rep.ok else "FAILED"]
    return 0 if rep.ok else 1


def cmd_ungroth(args, out):
    from .setoperad import fibration_roundtrip, ungrothendieck
    W = fibration(args.name, args.bound)
    P = ungrothendieck(W)
    rep = fibration_roundtrip(W)
    out["results"] = {"components": _table(P), "roundtrip": rep.to_json()}
    out["ok"] = rep.ok
    out["text"] = [f"{k}: {v}" for k, v in out["results"]["components"].items() if v]
    out["text"] += [rep.summary(), "ok" if rep.ok else "FAILED"]
    return 0 if rep.ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="operadic", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized runs")
    common.add_argument("--bound", type=int, default=None,
                        help="size bound (default: $OPERADIC_BOUND or 3)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        s = sub.add_parser(name, parents=[common], help=help)
        s.set_defaults(fn=fn)
        return s

    s = add("validate", cmd_validate, "parse, validate and reprint literals")
    s.add_argument("literal", nargs="+")
    s.add_argument("--kind", choices=KINDS, default=None)
    for name, fn, kind, help in (
            ("omega", lambda b, a: ltr.omega_of(b), "ltr", "the colored 2-tree of a levelled tree"),
            ("u", lambda b, a: ltr.u_of(b), "ltr", "the Tam element of a levelled tree"),
            ("w", lambda b, a: ltr.w_of(b), "ltr", "the Tm element of a levelled tree"),
            ("bar", lambda b, a: ltr.bar(b), "ltr", "the Tamarkin-Tsygan tree of a levelled tree")):
        s = add(name, _map_command(fn, kind), help)
        s.add_argument("literal", nargs="+")
    s = add("canon", cmd_canon, "canonical form of levelled trees")
    s.add_argument("literal", nargs="+")
    s.add_argument("--trace", action="store_true", help="list the moves used")
    s = add("eq-w", cmd_eq_w, "compare the w-images of two levelled trees")
    s.add_argument("first")
    s.add_argument("second", nargs="?")
    s.add_argument("--moves", type=int, default=1,
                   help="without a second tree, compare with this many random moves")
    s = add("section", cmd_section, "a levelled tree over a Tm element")
    s.add_argument("literal", nargs="+")
    s = add("compose-lat", cmd_compose_lat, "partial composition delta o_i gamma")
    s.add_argument("delta")
    s.add_argument("i", type=int)
    s.add_argument("gamma")
    s = add("dominates", cmd_dominates, "does a 2-ordinal (or pruned 2-tree) dominate a tree")
    s.add_argument("order")
    s.add_argument("tree")
    s = add("enumerate-tm", cmd_enumerate_tm, "all Tm elements over a colored 2-tree")
    s.add_argument("literal")
    s.add_argument("--count", action="store_true", help="only print the count")
    s = add("components", cmd_components, "classes of the face relation")
    s.add_argument("--t2", required=True)
    s.add_argument("--n", type=int, default=None)
    s = add("check-axioms", cmd_check_axioms, "operadic category axioms on a fragment")
    s.add_argument("name", choices=CATEGORIES)
    s.add_argument("--inner", type=int, default=1, help="ltr: bound on inner level arity")
    s.add_argument("--pairs", type=int, default=0,
                   help="number of random composable pairs (0 = all)")
    s.add_argument("--chains", type=int, default=20000,
                   help="number of random composable triples (0 = all)")
    s.add_argument("--exhaustive", action="store_true", help="all pairs and all triples")
    s = add("check-functor", cmd_check_functor, "operadic functor checks")
    s.add_argument("name", choices=FUNCTORS)
    s.add_argument("--pairs", type=int, default=20000,
                   help="number of random composable pairs (0 = all)")
    s = add("beck-chevalley", cmd_beck_chevalley, "Beck-Chevalley for Tm over pruning")
    s.add_argument("--colors", type=int, default=1, help="largest leaf color")
    s.add_argument("--verbose", action="store_true", help="print one row per 2-tree")
    s = add("groth", cmd_groth, "category of elements of an operad, with round trip")
    s.add_argument("name", choices=OPERADS)
    s = add("ungroth", cmd_ungroth, "operad of a discrete fibration, with round trip")
    s.add_argument("name", choices=OPERADS)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    out = {}
    try:
        if args.bound is None:
            args.bound = default_bound()
        code = args.fn(args, out)
    except LiteralError as e:
        if args.json:
            print(json.dumps({"version": JSON_VERSION, "command": args.command,
                              "error": str(e)}))
        else:
            print(str(e), file=sys.stderr)
        return 2
    except OSError as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps({"version": JSON_VERSION, "command": args.command,
                          "exit": code, **{k: v for k, v in out.items() if k != "text"}}))
    else:
        for line in out.get("text", []):
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
