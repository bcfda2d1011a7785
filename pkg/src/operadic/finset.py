"""Skeletal finite sets and the maps between them.

An object is a natural number n standing for the ordered set {1, ..., n}.
A map is stored as the list of its values, 1-based, so ``FinMap(2, (1, 1, 2))``
is the map 3 -> 2 sending 1, 2 to 1 and 3 to 2.
"""

from itertools import product


class FinSetError(ValueError):
    pass


class FinMap:
    """A map dom -> cod between skeletal finite sets."""

    __slots__ = ("cod", "values", "_hash")

    def __init__(self, cod, values):
        values = tuple(values)
        for v in values:
            if not (1 <= v <= cod):
                raise FinSetError(f"value {v} outside 1..{cod}")
        self.cod = cod
        self.values = values
        self._hash = hash((cod, values))

    @property
    def dom(self):
        return len(self.values)

    def __call__(self, j):
        return self.values[j - 1]

    def __eq__(self, other):
        return self is other or (isinstance(other, FinMap) and self._hash == other._hash
                                 and self.cod == other.cod and self.values == other.values)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"fmap{list(self.values)}->{self.cod}"

    def to_json(self):
        return {"dom": self.dom, "cod": self.cod, "values": list(self.values)}

    @classmethod
    def from_json(cls, data):
        m = cls(data["cod"], data["values"])
        if m.dom != data.get("dom", m.dom):
            raise FinSetError("dom does not match length of values")
        return m

    def is_monotone(self):
        return list(self.values) == sorted(self.values)

    def is_injective(self):
        return len(set(self.values)) == len(self.values)

    def is_surjective(self):
        return set(self.values) == set(range(1, self.cod + 1))


def identity(n):
    return FinMap(n, range(1, n + 1))


def terminal_map(n):
    """The unique map n -> 1."""
    return FinMap(1, [1] * n)


def compose(g, f):
    """g o f."""
    if f.cod != g.dom:
        raise FinSetError(f"cannot compose: cod {f.cod} != dom {g.dom}")
    return FinMap(g.cod, [g.values[v - 1] for v in f.values])


def preimage(f, i):
    """The preimage of i as an increasing tuple of elements of dom(f)."""
    if not (1 <= i <= f.cod):
        raise IndexError(f"{i} outside 1..{f.cod}")
    return tuple([j for j, v in enumerate(f.values, 1) if v == i])


def fiber(f, i):
    """Size of the fiber f^-1(i)."""
    return len(preimage(f, i))


def local_index(f, j):
    """Position of j inside the fiber containing it (1-based)."""
    return preimage(f, f(j)).index(j) + 1


def induced_fiber_map(f, g, i):
    """The map f_i : h^-1(i) -> g^-1(i) where h = g o f."""
    h = compose(g, f)
    src = preimage(h, i)
    tgt = preimage(g, i)
    pos = {s: k for k, s in enumerate(tgt, 1)}
    return FinMap(len(tgt), [pos[f(j)] for j in src])


def all_maps(dom, cod):
    for vals in product(range(1, cod + 1), repeat=dom):
        yield FinMap(cod, vals)


def monotone_maps(dom, cod):
    """All order preserving maps dom -> cod."""
    def rec(start, left):
        if left == 0:
            yield ()
            return
        for v in range(start, cod + 1):
            for rest in rec(v, left - 1):
                yield (v,) + rest
    for vals in rec(1, dom):
        yield FinMap(cod, vals)
