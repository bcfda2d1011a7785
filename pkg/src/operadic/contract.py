"""Face operators on Tm elements and the one-class check behind contractibility.

For an element whose 2-tree colors are all 0 except a 1 at white i, the face
operator cuts off the subtree above white i (its unique input) and hangs it
next to white i through a new black vertex on the outgoing edge of i: to the
left of i for side 0 and to the right for side 1.  White i becomes a nullary
vertex and all colors become 0.
"""

from itertools import product

from .lat import LEAF, LatError, TmElement, enumerate_tm, normalize, to_sexpr
from .omega import Colored, trees


class FaceError(ValueError):
    pass


def _recolor(T, colors):
    return Colored(T.base, colors, T.out)


def face(x, i, side, contract=True):
    """The face operator at white i on side 0 or 1."""
    T = x.tree2
    if T.colors[i - 1] != 1:
        raise FaceError(f"white {i} does not have color 1")
    if side not in (0, 1):
        raise FaceError("side must be 0 or 1")

    def walk(node):
        if node == LEAF:
            return node
        if node[0] == "w":
            if node[1] == i:
                (sub,) = node[2]
                bare = ("w", i, ())
                return ("b", (sub, bare) if side == 0 else (bare, sub))
            return ("w", node[1], tuple(walk(c) for c in node[2]))
        return ("b", tuple(walk(c) for c in node[1]))
    tree = walk(x.tree)
    if contract:
        tree = normalize(tree)
    colors = list(T.colors)
    colors[i - 1] = 0
    try:
        return TmElement(_recolor(T, colors), tree, check=contract)
    except LatError as e:
        raise FaceError(f"internal: face left the dominated trees: {e}")


def key(x):
    return repr(x.tree2) + "|" + to_sexpr(x.tree)


class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, a):
        self.parent.setdefault(a, a)

    def find(self, a):
        self.add(a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def components(shape, n, contract=True):
    """Number of classes of Tm(shape)(0,...,0; n) under face(x,i,0) ~ face(x,i,1).

    ``shape`` is an uncolored 2-tree.  Returns (classes, elements, edges).
    """
    k = shape.size(2)
    base = Colored(shape, [0] * k, n)
    elems = enumerate_tm(base)
    uf = UnionFind()
    for x in elems:
        uf.add(key(x))
    edges = 0
    for i in range(1, k + 1):
        cols = [0] * k
        cols[i - 1] = 1
        for y in enumerate_tm(Colored(shape, cols, n)):
            a = face(y, i, 0, contract)
            b = face(y, i, 1, contract)
            uf.union(key(a), key(b))
            edges += 1
    roots = {uf.find(key(x)) for x in elems}
    return len(roots), len(elems), edges


def interchange_failures(shape, n):
    """Pairs i != j where the faces at i and j fail to commute, over all
    elements with color 1 at i and j and 0 elsewhere."""
    k = shape.size(2)
    bad = []
    checked = 0
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            cols = [0] * k
            cols[i - 1] = cols[j - 1] = 1
            for x in enumerate_tm(Colored(shape, cols, n)):
                for a, b in product((0, 1), repeat=2):
                    lhs = face(face(x, j, b), i, a)
                    rhs = face(face(x, i, a), j, b)
                    checked += 1
                    if lhs != rhs:
                        bad.append((x, i, a, j, b))
    return bad, checked


def shapes(max_leaves=3, max_vertices=3):
    """All 2-trees with at most the given numbers of 2-leaves and 1-vertices."""
    return [T for m in range(max_leaves + 1) for T in trees(m, 2, max_vertices)]
