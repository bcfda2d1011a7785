import functools
import itertools
import random

import pytest

from helpers import oracle_compose, random_lat
from operadic import lat
from operadic.finset import FinMap
from operadic.lat import LEAF, LatError, TamElement, TmElement
from operadic.omega import Colored, point_ordinal, prune, tree2, unit_tree


def P(text):
    from operadic.cli import parse
    return parse("lat", text)


def test_validate_rejects():
    for bad in ["(b (b * *) *)", "(b *)", "(w1 (w1 *))", "(w2 *)"]:
        with pytest.raises(Exception):
            P(bad)


def test_normalize_contracts_and_erases():
    assert lat.normalize(("b", (("b", (LEAF, LEAF)), LEAF))) == P("(b * * *)")
    assert lat.normalize(("b", (("w", 1, ()),))) == P("(w1)")


def test_compose_examples():
    d = P("(w1 * *)")
    g = P("(w1 * (w2 *))")
    assert lat.lat_compose(d, 1, g) == g
    assert lat.lat_compose(P("(b (w1 * *) *)"), 1, P("(b * *)")) == P("(b * * *)")


def test_unit_laws():
    rng = random.Random(3)
    for _ in range(100):
        d = random_lat(rng)
        ar = lat.white_arities(d)
        for i, a in ar.items():
            assert lat.lat_compose(d, i, lat.corolla(a)) == d
        assert lat.lat_compose(lat.corolla(lat.num_leaves(d)), 1, d) == d


def test_compose_matches_oracle():
    rng = random.Random(4)
    for _ in range(300):
        d = random_lat(rng)
        ar = lat.white_arities(d)
        i = rng.choice(sorted(ar))
        g = random_lat(rng, leaves=ar[i])
        assert lat.lat_compose(d, i, g) == oracle_compose(d, i, g)


def test_sigma_action():
    d = P("(w1 (w2 *) (w3))")
    assert lat.sigma_act(d, (1, 2, 3)) == d
    t = (2, 1, 3)
    assert lat.sigma_act(lat.sigma_act(d, t), t) == d
    s, u = (2, 3, 1), (3, 1, 2)
    composite = tuple(u[s[i] - 1] for i in range(3))
    assert lat.sigma_act(lat.sigma_act(d, s), u) == lat.sigma_act(d, composite)
    with pytest.raises(LatError):
        lat.sigma_act(d, (1, 1, 2))


def test_complementary_order():
    assert lat.complementary_order(P("(b (w1 *) (w2 *))")) == {(1, 2): 1}
    # the ancestor comes first in the vertical relation
    assert lat.complementary_order(P("(w1 (w2 *))")) == {(1, 2): 0}
    assert lat.complementary_order(lat.corolla(3)) == {}


def test_dominates_examples():
    assert lat.dominates(point_ordinal(), lat.corolla(2))
    O = prune(tree2([1, 1]))            # 1 <_1 2
    assert lat.dominates(O, P("(b (w1 *) (w2 *))"))
    assert not lat.dominates(O, P("(b (w2 *) (w1 *))"))
    V = prune(tree2([1, 2]))            # 1 <_0 2
    assert lat.dominates(V, P("(w1 (w2 *))"))
    assert lat.dominates(V, P("(b (w2 *) (w1 *))"))
    assert not lat.dominates(V, P("(w2 (w1 *))"))


def test_mirror_breaks_domination():
    d = P("(w1 (b (w2 *) (w3 *)))")
    O = Colored(prune(tree2([1, 2, 2])), (1, 1, 1), 2)
    assert lat.dominates(O, d)
    mirror = P("(w1 (b (w3 *) (w2 *)))")
    assert not lat.dominates(O, lat.sigma_act(mirror, (1, 2, 3)))


def test_tm_element_over_a_larger_tree():
    T = Colored(tree2([2, 5, 5, 5, 5, 7, 7], 8), [2, 3, 0, 0, 2, 1, 1], 10)
    d = P("(w1 (b (w2 (b) (w6 (b * * *)) *) (w3)) (b (w4) (w5 (w7 (b * * * *)) (b * *))))")
    x = TmElement(T, d)
    assert x.tam.ordinal == prune(T)


@functools.lru_cache(maxsize=None)
def _brute_trees(vertices, leaves):
    """All planar trees with exactly the given numbers of vertices and
    leaves, vertices being "w" or "b" and leaves unlabelled."""
    if vertices == 0:
        return (LEAF,) if leaves == 1 else ()
    out = []
    for kind in "wb":
        for arity in range(vertices - 1 + leaves + 1):
            for vs in _splits(vertices - 1, arity):
                for ls in _splits(leaves, arity):
                    parts = [_brute_trees(v, m) for v, m in zip(vs, ls)]
                    for kids in itertools.product(*parts):
                        out.append((kind, kids))
    return tuple(out)


def _splits(total, parts):
    if parts == 0:
        return [()] if total == 0 else []
    return [(a,) + rest for a in range(total + 1) for rest in _splits(total - a, parts - 1)]


def _brute_tm(T, max_vertices):
    k = len(T.colors)
    out = set()
    for v in range(k, max_vertices + 1):
        for shape in _brute_trees(v, T.out):
            whites = [0]

            def count(x):
                if x == LEAF:
                    return
                if x[0] == "w":
                    whites[0] += 1
                for c in x[1]:
                    count(c)
            count(shape)
            if whites[0] != k:
                continue
            for perm in itertools.permutations(range(1, k + 1)):
                it = iter(perm)

                def emit(x):
                    if x == LEAF:
                        return LEAF
                    kids = tuple(emit(c) for c in x[1])
                    return ("w", next(it), kids) if x[0] == "w" else ("b", kids)
                tree = emit(shape)
                try:
                    lat.validate(tree)
                except LatError:
                    continue
                if lat.dominates(prune(T), tree):
                    out.add(tree)
    return out


@pytest.mark.parametrize("T", [
    Colored(unit_tree(2), (1,), 1),
    Colored(unit_tree(2), (2,), 2),
    Colored(unit_tree(2), (0,), 1),
    Colored(tree2([1, 1]), (1, 0), 1),
    Colored(tree2([1, 2]), (1, 0), 2),
    Colored(tree2([], 1), (), 2),
])
def test_enumerate_tm_against_brute_force(T):
    got = {x.tree for x in lat.enumerate_tm(T)}
    assert got == _brute_tm(T, 5)


def test_unit_tree_elements_have_one_white():
    for n in range(4):
        xs = lat.enumerate_tm(Colored(unit_tree(2), (n,), n))
        assert xs and lat.corolla(n) in {x.tree for x in xs}
        assert all(len(lat.white_arities(x.tree)) == 1 for x in xs)


def test_no_whites():
    for n in range(4):
        (x,) = lat.enumerate_tm(Colored(tree2([], 0), (), n))
        assert lat.num_leaves(x.tree) == n


def test_multiply_by_units():
    d = P("(w1 (w2 *) (w3))")
    O = Colored(prune(tree2([1, 2, 2])), (2, 1, 0), 1)
    x = TamElement(O, d)
    units = [TamElement(Colored(point_ordinal(), (c,), c), lat.corolla(c)) for c in O.colors]
    got = lat.tam_multiply(x, FinMap(3, [1, 2, 3]), units, source=O)
    assert got == x


def test_multiply_collapsing_two_whites():
    # collapse whites 2 and 3 of the source into white 2 of the target
    src = Colored(prune(tree2([1, 2, 2])), (2, 1, 0), 1)
    tgt = TamElement(Colored(prune(tree2([1, 2])), (2, 1), 1), P("(w1 (w2 *) (b))"))
    fib2 = TamElement(Colored(prune(tree2([1, 1])), (1, 0), 1), P("(b (w1 *) (w2))"))
    unit = TamElement(Colored(point_ordinal(), (2,), 2), lat.corolla(2))
    got = lat.tam_multiply(tgt, FinMap(2, [1, 2, 2]), [unit, fib2], source=src)
    assert got.tree == P("(w1 (b (w2 *) (w3)) (b))")


def test_multiply_is_associative_on_a_nested_instance():
    from operadic.setoperad import check_operad
    rep = check_operad(lat.op_tam(2, 1), pair_sample=300, max_choices=20)
    assert rep.ok, rep.summary()
