"""Random generators and independent oracles shared by the tests."""

import random

from operadic.lat import LEAF, normalize, validate, white_arities
from operadic.ltr import LevelledTree


def random_shape(rng, vertices, leaves):
    """A random planar tree with exactly ``vertices`` vertices and ``leaves``
    leaves, as nested ("w", None, kids) / ("b", kids) / LEAF, or None."""
    if vertices == 0:
        return LEAF if leaves == 1 else None
    for _ in range(20):
        kind = rng.choice("wwb")
        arity = rng.randint(0, 3)
        if kind == "b" and arity == 1:
            arity = 2
        if arity == 0:
            if vertices != 1 or leaves != 0:
                continue
            return ("w", None, ()) if kind == "w" else ("b", ())
        budget = [0] * arity
        for _ in range(vertices - 1):
            budget[rng.randrange(arity)] += 1
        cut = [0] * arity
        for _ in range(leaves):
            cut[rng.randrange(arity)] += 1
        kids = [random_shape(rng, v, m) for v, m in zip(budget, cut)]
        if any(k is None for k in kids):
            continue
        return ("w", None, tuple(kids)) if kind == "w" else ("b", tuple(kids))
    return None


def _label(shape, rng):
    count = []

    def walk(x):
        if x == LEAF:
            return
        if x[0] == "w":
            count.append(1)
        for c in (x[2] if x[0] == "w" else x[1]):
            walk(c)
    walk(shape)
    labels = list(range(1, len(count) + 1))
    rng.shuffle(labels)
    it = iter(labels)

    def emit(x):
        if x == LEAF:
            return LEAF
        if x[0] == "w":
            return ("w", next(it), tuple(emit(c) for c in x[2]))
        return ("b", tuple(emit(c) for c in x[1]))
    return emit(shape)


def random_lat(rng, max_vertices=6, leaves=None, min_whites=1):
    """A random valid Tamarkin-Tsygan tree."""
    while True:
        v = rng.randint(1, max_vertices)
        m = leaves if leaves is not None else rng.randint(0, 4)
        shape = random_shape(rng, v, m)
        if shape is None:
            continue
        tree = normalize(_label(shape, rng))
        if tree == LEAF or len(white_arities(tree)) < min_whites:
            continue
        if v > max_vertices:
            continue
        return validate(_relabel_dense(tree))


def _relabel_dense(tree):
    labels = sorted(white_arities(tree))
    pos = {x: n for n, x in enumerate(labels, 1)}

    def walk(x):
        if x == LEAF:
            return LEAF
        if x[0] == "w":
            return ("w", pos[x[1]], tuple(walk(c) for c in x[2]))
        return ("b", tuple(walk(c) for c in x[1]))
    return walk(tree)


def random_ltr(rng, max_levels=5, max_width=4, max_arity=3):
    """A random levelled tree with at most max_levels levels."""
    height = rng.randint(1, max_levels)
    levels = []
    width = 1
    for b in range(height):
        last = b == height - 1
        if rng.random() < 0.3:
            kinds = ["h"] * width
        else:
            kinds = [rng.choice("wwv") for _ in range(width)]
        ars = []
        for _ in range(width):
            ars.append(rng.randint(0, max_arity))
        total = sum(ars)
        if not last and (total == 0 or total > max_width):
            ars = [1] * width
            total = width
        levels.append(list(zip(kinds, ars)))
        width = total
        if total == 0:
            break
    return LevelledTree(levels)


# ---------------------------------------------------------------------------
# a naive substitution oracle on explicit vertex tables


class Graph:
    """A planar tree as a vertex table: id -> [kind, label, child ids].

    Leaves are vertices of kind "leaf".  The root id is kept separately.
    """

    def __init__(self):
        self.v = {}
        self.root = None
        self.next = 0

    def add(self, kind, label=None):
        self.next += 1
        self.v[self.next] = [kind, label, []]
        return self.next

    @classmethod
    def of(cls, tree):
        g = cls()

        def walk(x):
            if x == LEAF:
                return g.add("leaf")
            if x[0] == "w":
                n = g.add("w", x[1])
                kids = x[2]
            else:
                n = g.add("b")
                kids = x[1]
            g.v[n][2] = [walk(c) for c in kids]
            return n
        g.root = walk(tree)
        return g

    def to_tree(self, n=None):
        n = self.root if n is None else n
        kind, label, kids = self.v[n]
        if kind == "leaf":
            return LEAF
        if kind == "w":
            return ("w", label, tuple(self.to_tree(c) for c in kids))
        return ("b", tuple(self.to_tree(c) for c in kids))

    def leaves(self, n=None):
        n = self.root if n is None else n
        if self.v[n][0] == "leaf":
            return [n]
        return [x for c in self.v[n][2] for x in self.leaves(c)]

    def parent_of(self, n):
        for p, (_, _, kids) in self.v.items():
            if n in kids:
                return p
        return None


def oracle_compose(delta, i, gamma):
    """delta o_i gamma by splicing vertex tables and contracting by rewriting."""
    gd = Graph.of(delta)
    gg = Graph.of(gamma)
    k = len(white_arities(gamma))
    for node in gd.v.values():
        if node[0] == "w" and node[1] > i:
            node[1] += k - 1
    # copy gamma into gd with fresh ids and shifted labels
    ids = {}
    for n, (kind, label, _) in gg.v.items():
        ids[n] = gd.add(kind, None if label is None else label + i - 1)
    for n, (_, _, kids) in gg.v.items():
        gd.v[ids[n]][2] = [ids[c] for c in kids]
    target = next(n for n, node in gd.v.items() if node[0] == "w" and node[1] == i
                  and n not in ids.values())
    inputs = gd.v[target][2]
    glv = [ids[x] for x in gg.leaves()]
    assert len(glv) == len(inputs)
    for leaf, sub in zip(glv, inputs):
        p = gd.parent_of(leaf)
        if p is None:
            ids[gg.root] = sub
        else:
            gd.v[p][2] = [sub if c == leaf else c for c in gd.v[p][2]]
        del gd.v[leaf]
    new_root = ids[gg.root]
    p = gd.parent_of(target)
    if p is None:
        gd.root = new_root
    else:
        gd.v[p][2] = [new_root if c == target else c for c in gd.v[p][2]]
    del gd.v[target]
    # contract black-black edges and erase unary blacks until nothing changes
    changed = True
    while changed:
        changed = False
        for n, node in list(gd.v.items()):
            if node[0] != "b":
                continue
            for c in node[2]:
                if gd.v[c][0] == "b":
                    pos = node[2].index(c)
                    node[2] = node[2][:pos] + gd.v[c][2] + node[2][pos + 1:]
                    del gd.v[c]
                    changed = True
                    break
            if changed:
                break
            if len(node[2]) == 1:
                (c,) = node[2]
                p = gd.parent_of(n)
                if p is None:
                    gd.root = c
                else:
                    gd.v[p][2] = [c if x == n else x for x in gd.v[p][2]]
                del gd.v[n]
                changed = True
                break
    return gd.to_tree()


def rng_of(seed):
    return random.Random(seed)
