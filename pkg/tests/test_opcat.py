from operadic import finset
from operadic.finset import FinMap
from operadic.omega import Omega2Category
from operadic.opcat import (Bouquet, BouquetCategory, FinSetCategory, OperadicFunctor,
                            TerminalCategory, arity_functor, bouquet_cardinality,
                            cardinality_functor, check_axioms, check_functor, colorize,
                            pullback)


class ReversedFinSet(FinSetCategory):
    """finset whose fiber maps enumerate the target fiber backwards."""

    def fiber_map(self, f, g, i):
        m = finset.induced_fiber_map(f, g, i)
        return FinMap(m.cod, [m.cod + 1 - v for v in m.values])


def test_finset_exhaustive():
    rep = check_axioms(FinSetCategory(3))
    assert rep.ok, rep.summary()
    assert rep.checked["v"] > 0


def test_finset_four_sampled_triples():
    rep = check_axioms(FinSetCategory(4), chain_sample=3000)
    assert rep.ok


def test_mutation_is_caught():
    rep = check_axioms(ReversedFinSet(3))
    assert not rep.ok
    assert rep.witnesses["iii.identity"] or rep.witnesses["iii.fiber_map"] or \
        rep.witnesses["iii.compose"]


def test_terminal_category():
    rep = check_axioms(TerminalCategory())
    assert rep.ok
    assert sum(rep.checked.values()) > 0


def test_bouquets():
    B = BouquetCategory(("a", "b"), 2)
    assert check_axioms(B).ok
    # objects over n points: 2^n leaf colorings times 2 roots
    assert len(B.objects()) == 2 * (1 + 2 + 4)


def test_report_json_schema():
    rep = check_axioms(FinSetCategory(2))
    for row in rep.to_json():
        assert set(row) == {"axiom", "witnesses", "checked"}


def test_identity_functor():
    C = FinSetCategory(3)
    F = OperadicFunctor(C, C, lambda x: x, lambda f: f, name="id")
    assert check_functor(F).ok


def test_cardinality_functor_of_omega():
    assert check_functor(cardinality_functor(Omega2Category(2, 2))).ok


def test_bouquet_cardinality():
    assert check_functor(bouquet_cardinality(BouquetCategory(("a", "b"), 2))).ok


def test_pullback_along_identity():
    C = FinSetCategory(2)
    ident = OperadicFunctor(C, C, lambda x: x, lambda f: f, name="id")
    P, left, right = pullback(ident, ident)
    assert len(P.objects()) == len(C.objects())
    assert check_axioms(P).ok


def test_colorize_counts_and_components():
    C = FinSetCategory(2)
    P = colorize(C, ("a", "b"))
    # objects with underlying n: |colors|^(n+1)
    by_n = {}
    for tau, S in P.objects():
        by_n[tau] = by_n.get(tau, 0) + 1
    assert by_n == {0: 2, 1: 4, 2: 8}
    assert {P.component(x) for x in P.objects()} == {(0, "a"), (0, "b")}
    assert check_axioms(P, chain_sample=2000).ok


def test_colorize_terminal():
    P = colorize(TerminalCategory(), ("a",))
    assert len(P.objects()) == 1
    (x,) = P.objects()
    assert P.hom(x, x) == [P.identity(x)]


def test_arity_functor():
    F = arity_functor(FinSetCategory(3))
    assert F(3) == Bouquet((0, 0, 0), 0)
    assert check_functor(F).ok
    G = arity_functor(Omega2Category(2, 2))
    assert check_functor(G).ok
