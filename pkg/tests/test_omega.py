import itertools

from operadic import finset
from operadic.finset import FinMap
from operadic.omega import (Colored, KOrdinal, KTree, Omega2Category, Ord2Category,
                            all_ordinals, complementary_ordinal, empty_ordinal,
                            identity_tree_morphism, ktree_fiber, leaves,
                            ordinal_to_pruned_tree, point_ordinal, prune, prune_tree,
                            pruned_embedding, pruning_functor, suspend, tree2,
                            tree_morphisms, trees, truncate, unit_tree)
from operadic.opcat import check_axioms, check_functor


def test_leaves():
    assert leaves(unit_tree(2), 2) == (1,)
    T = tree2([1, 1, 2, 2, 2])
    assert leaves(T, 2) == (1, 2, 3, 4, 5)
    assert leaves(T, 1) == ()
    E = tree2([], 2)
    assert leaves(E, 2) == ()
    assert leaves(E, 1) == (1, 2)


def test_unique_map_to_unit_has_the_source_as_fiber():
    for T in trees(3, 2, 2):
        if T.size(2) == 0:
            continue
        # the unique morphism T -> U_2 exists only when sigma_2 collapses all leaves
        (f,) = tree_morphisms(T, unit_tree(2)) or [None]
        if f is not None:
            assert ktree_fiber(f, 1) == T


def test_identity_fibers_are_units():
    for T in trees(3, 2, 3):
        e = identity_tree_morphism(T)
        for i in range(1, T.size(2) + 1):
            assert ktree_fiber(e, i) == unit_tree(2)


def test_fibers_against_preimage_oracle():
    # a morphism collapsing two 1-vertices
    S = tree2([1, 2, 2])
    T = tree2([1, 1, 1])
    for f in tree_morphisms(S, T):
        for i in range(1, 4):
            F = ktree_fiber(f, i)
            top = finset.preimage(f.sigma(2), i)
            low = finset.preimage(f.sigma(1), T.t(1)(i))
            assert F.size(2) == len(top) and F.size(1) == len(low)
            for n, y in enumerate(top, 1):
                assert low[F.t(1)(n) - 1] == S.t(1)(y)


def test_complementary_ordinal_of_two_corollas():
    O = complementary_ordinal(tree2([1, 1, 2, 2, 2]))
    assert O.less(1, 2) == 1
    assert O.less(3, 4) == 1 and O.less(4, 5) == 1 and O.less(3, 5) == 1
    assert all(O.less(a, b) == 0 for a in (1, 2) for b in (3, 4, 5))
    assert complementary_ordinal(unit_tree(2)) == point_ordinal()
    assert ordinal_to_pruned_tree(O) == tree2([1, 1, 2, 2, 2])
    assert ordinal_to_pruned_tree(point_ordinal()) == unit_tree(2)


def test_pruning_ignores_childless_vertices():
    T = tree2([1, 1, 3], 3)
    assert not T.is_pruned()
    assert prune_tree(T) == tree2([1, 1, 2])
    assert complementary_ordinal(T) == complementary_ordinal(prune_tree(T))


def test_pruning_of_a_larger_tree():
    T = Colored(tree2([2, 5, 5, 5, 5, 7, 7], 8), [2, 3, 0, 0, 2, 1, 1], 10)
    assert prune_tree(T.base) == tree2([1, 2, 2, 2, 2, 3, 3])
    P = prune(T)
    assert P.base == complementary_ordinal(tree2([1, 2, 2, 2, 2, 3, 3]))
    assert P.colors == T.colors and P.out == 10
    assert prune(tree2([], 0)) == empty_ordinal()


def test_suspend_truncate():
    assert suspend(KTree((1,))) == unit_tree(2)
    T = tree2([1, 1, 2])
    # truncation keeps the lower levels, so it commutes with suspension
    assert truncate(suspend(T)) == suspend(truncate(T)) == tree2([1, 1])
    assert truncate(T) == KTree((2,))
    assert suspend(KTree((3,))) == tree2([1, 1, 1])


def test_ordinal_round_trip():
    for n in range(5):
        for O in all_ordinals(n):
            assert complementary_ordinal(ordinal_to_pruned_tree(O)) == O
    # compositions of n
    assert [len(all_ordinals(n)) for n in range(1, 5)] == [1, 2, 4, 8]


def test_min_transitivity_is_enforced():
    import pytest
    from operadic.omega import TreeError
    with pytest.raises(TreeError):
        KOrdinal(3, {(1, 2): 1, (2, 3): 1, (1, 3): 0})


def test_tree_morphisms_commute():
    for S in trees(2, 2, 2):
        for T in trees(2, 2, 2):
            for f in tree_morphisms(S, T):
                assert finset.compose(T.t(1), f.sigma(2)) == finset.compose(f.sigma(1), S.t(1))


def test_omega_axioms():
    assert check_axioms(Omega2Category(3, 2), chain_sample=2000).ok


def test_ord_axioms():
    assert check_axioms(Ord2Category(3), chain_sample=2000).ok


def test_pruning_is_operadic():
    assert check_functor(pruning_functor(Omega2Category(2, 2), Ord2Category(2))).ok


def test_pruned_embedding_is_not_operadic():
    rep = check_functor(pruned_embedding(Ord2Category(2), Omega2Category(2, 2)))
    assert rep.witnesses["fiber"]


def test_sizes_are_bounded():
    C = Omega2Category(3, 2)
    assert all(T.size(2) <= 3 and T.size(1) <= 2 for T in C.objects())
    n = sum(1 for m in range(4) for n1 in range(3)
            for _ in itertools.islice(finset.monotone_maps(m, n1), None))
    assert len(C.objects()) == n
