"""Acceptance suite: ten criteria, one PASS/FAIL line each.

Run under pytest (the lines are printed in the terminal summary) or directly
with ``python tests/test_acceptance.py``.
"""

import json
import random
import sys
import time
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from helpers import oracle_compose, random_lat, random_ltr  # noqa: E402
from operadic import lat, ltr  # noqa: E402
from operadic.cli import parse, show  # noqa: E402
from operadic.contract import components, interchange_failures, shapes  # noqa: E402
from operadic.omega import Colored, Omega2Category, Ord2Category  # noqa: E402
from operadic.opcat import BouquetCategory, FinSetCategory, check_axioms  # noqa: E402
from operadic.setoperad import (fibration_roundtrip, grothendieck,  # noqa: E402
                                grothendieck_roundtrip, unit_operad)

RESULTS = []


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})"
    RESULTS.append(line)
    print(line)
    return ok


# ---------------------------------------------------------------------------
# 1. operadic category axioms on every fragment


def axiom_suites():
    """(label, category factory, pair_sample, chain_sample); None means all."""
    return [
        ("finset<=3", lambda: FinSetCategory(3), None, None),
        ("finset<=4", lambda: FinSetCategory(4), None, 20000),
        ("omega2(3,2)", lambda: Omega2Category(3, 2), None, 5000),
        ("omega2(4,3)", lambda: Omega2Category(4, 3), 6000, 1200),
        ("ord2<=3", lambda: Ord2Category(3), None, 5000),
        ("ord2<=4", lambda: Ord2Category(4), 10000, 3000),
        ("bq2<=2", lambda: BouquetCategory(("a", "b"), 2), None, None),
        ("bq2<=3", lambda: BouquetCategory(("a", "b"), 3), 20000, 5000),
        ("ltr(3,3,1)", lambda: ltr.LTrCategory(3, 3, 1), None, None),
        ("ltr(3,3,2)", lambda: ltr.LTrCategory(3, 3, 2), 8000, 1000),
        ("tam(2)", lambda: lat.tam_category(2, 1)[0], 5000, 1500),
        ("tm(2,2)", lambda: lat.tm_category(2, 2, 1)[0], 1500, 400),
    ]


def criterion_1():
    start = time.time()
    failed = []
    checked = 0
    for label, make, pairs, chains in axiom_suites():
        rep = check_axioms(make(), pair_sample=pairs, chain_sample=chains, seed=1)
        checked += sum(rep.checked.values())
        if not rep.ok:
            failed.append(label)
    elapsed = time.time() - start
    ok = not failed and elapsed < 120
    return record(1, "operadic category axioms", ok,
                  f"{checked} checks, failing fragments {failed}, {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 2. operad laws for Tamarkin-Tsygan trees


def compose(d, i, g, bad):
    """lat_compose, cross-checked against the substitution oracle."""
    r = lat.lat_compose(d, i, g)
    if r != oracle_compose(d, i, g):
        bad.append(("oracle", d, i, g))
    return r


def _law_instance(rng, bad):
    d = random_lat(rng, max_vertices=6)
    ar = lat.white_arities(d)
    n = len(ar)
    i = rng.choice(sorted(ar))
    g = random_lat(rng, max_vertices=6, leaves=ar[i])
    k = len(lat.white_arities(g))
    dg = compose(d, i, g, bad)
    # units on both sides
    if compose(lat.corolla(lat.num_leaves(d)), 1, d, bad) != d:
        bad.append(("unit.left", d))
    if compose(d, i, lat.corolla(ar[i]), bad) != d:
        bad.append(("unit.right", d, i))
    # equivariance in delta
    s = list(range(1, n + 1))
    rng.shuffle(s)
    si = s[i - 1]

    def shifted(x):
        return x if x < si else x + k - 1
    block = {}
    for j in range(1, n + 1):
        if j < i:
            block[j] = shifted(s[j - 1])
        elif j > i:
            block[j + k - 1] = shifted(s[j - 1])
    for l in range(1, k + 1):
        block[i + l - 1] = si + l - 1
    lhs = compose(lat.sigma_act(d, s), si, g, bad)
    rhs = lat.sigma_act(dg, [block[j] for j in range(1, n + k)])
    if lhs != rhs:
        bad.append(("equivariance.delta", d, i, g, s))
    # equivariance in gamma
    if k:
        t = list(range(1, k + 1))
        rng.shuffle(t)
        perm = [j if j < i or j >= i + k else i + t[j - i] - 1 for j in range(1, n + k)]
        if compose(d, i, lat.sigma_act(g, t), bad) != lat.sigma_act(dg, perm):
            bad.append(("equivariance.gamma", d, i, g, t))
    # sequential associativity
    ag = lat.white_arities(g)
    if ag:
        j = rng.choice(sorted(ag))
        h = random_lat(rng, max_vertices=6, leaves=ag[j])
        if compose(dg, i + j - 1, h, bad) != compose(d, i, compose(g, j, h, bad), bad):
            bad.append(("assoc.sequential", d, i, g, j, h))
    # parallel associativity
    others = [j for j in ar if j > i]
    if others:
        j = rng.choice(others)
        h = random_lat(rng, max_vertices=6, leaves=ar[j])
        lhs = compose(compose(d, j, h, bad), i, g, bad)
        rhs = compose(dg, j + k - 1, h, bad)
        if lhs != rhs:
            bad.append(("assoc.parallel", d, i, g, j, h))


def criterion_2(instances=600):
    rng = random.Random(2)
    bad = []
    for _ in range(instances):
        _law_instance(rng, bad)
    return record(2, "operad laws of trees against the oracle", not bad,
                  f"{instances} instances, {len(bad)} failures")


# ---------------------------------------------------------------------------
# 3. u-images are dominated


def _dominated(beta):
    u = ltr.u_of(beta)
    return lat.dominates(u.ordinal, u.tree)


def criterion_3(samples=20000):
    count = 0
    bad = []
    for bound in ((4, 4, 2), (3, 3, 3)):
        for beta in ltr.levelled_trees(*bound):
            count += 1
            if not _dominated(beta):
                bad.append(beta)
    rng = random.Random(3)
    drawn = 0
    while drawn < samples:
        beta = random_ltr(rng, max_levels=4, max_width=4, max_arity=4)
        if sum(a for _, a in beta.levels[-1]) > 4:
            continue
        drawn += 1
        if not _dominated(beta):
            bad.append(beta)
    return record(3, "domination of u-images", not bad,
                  f"{count} exhaustive + {drawn} sampled trees, {len(bad)} failures")


# ---------------------------------------------------------------------------
# 4. w-invariance and canonical forms


def criterion_4(pairs=250):
    rng = random.Random(4)
    bad = []
    same = 0
    while same < pairs:
        beta = random_ltr(rng)
        other, _ = ltr.random_moves(beta, rng.randint(1, 6), rng)
        same += 1
        if ltr.w_of(beta) != ltr.w_of(other) or \
                ltr.canonical_form(beta) != ltr.canonical_form(other):
            bad.append(("moves", show(beta), show(other)))
    # distinct pairs are drawn from trees with the same colored 2-tree, so
    # that equal w-images are not ruled out by the shape alone
    groups = {}
    for beta in ltr.levelled_trees(3, 3, 2):
        groups.setdefault(ltr.omega_of(beta), []).append(beta)
    groups = [g for g in groups.values() if len(g) > 1]
    distinct = 0
    while distinct < pairs:
        a, b = rng.sample(rng.choice(groups), 2)
        if ltr.canonical_form(a) == ltr.canonical_form(b):
            continue
        distinct += 1
        if ltr.w_of(a) == ltr.w_of(b):
            bad.append(("distinct", show(a), show(b)))
    return record(4, "w-invariance and canonical forms", not bad,
                  f"{same} move pairs, {distinct} distinct pairs, {len(bad)} failures")


# ---------------------------------------------------------------------------
# 5. the section


def colored_bases(max_color):
    for T in shapes(3, 3):
        for cs in product(range(max_color + 1), repeat=T.size(2)):
            for n in range(4):
                yield Colored(T, cs, n)


def criterion_5():
    count = 0
    bad = []
    for S in colored_bases(3):
        for x in lat.enumerate_tm(S):
            count += 1
            if ltr.w_of(ltr.section(x)) != x:
                bad.append(x)
    return record(5, "w(section(x)) = x", not bad, f"{count} elements, {len(bad)} failures")


# ---------------------------------------------------------------------------
# 6. one class under the face relation


def criterion_6():
    start = time.time()
    bad = []
    runs = 0
    for T in shapes(3, 3):
        for n in range(4):
            runs += 1
            if components(T, n)[0] != 1:
                bad.append((T, n))
    elapsed = time.time() - start
    return record(6, "one face class per shape", not bad and elapsed < 600,
                  f"{runs} shapes and arities, {len(bad)} failures, {elapsed:.0f}s")


# ---------------------------------------------------------------------------
# 7. Grothendieck round trips


def criterion_7():
    bad = []
    operads = [("opTam", lat.op_tam(2, 1)),
               ("1^finset", unit_operad(FinSetCategory(3))),
               ("1^omega2", unit_operad(Omega2Category(3, 2)))]
    for label, P in operads:
        if not grothendieck_roundtrip(P).ok:
            bad.append(label + " ungroth.groth")
        if not fibration_roundtrip(grothendieck(P)[1]).ok:
            bad.append(label + " groth.ungroth")
    return record(7, "Grothendieck round trips", not bad,
                  f"{len(operads)} operads, failing {bad}")


# ---------------------------------------------------------------------------
# 8. Beck-Chevalley for Tm over pruning


def criterion_8():
    bases = list(colored_bases(1))
    rep, rows = lat.tm_beck_chevalley(bases)
    total = sum(m for *_, m in rows)
    return record(8, "Beck-Chevalley bijections", rep.ok,
                  f"{len(rows)} colored trees, {total} elements")


# ---------------------------------------------------------------------------
# 9. faces commute


def criterion_9():
    bad = []
    checked = 0
    for T in shapes(3, 3):
        for n in range(4):
            b, c = interchange_failures(T, n)
            bad += b
            checked += c
    return record(9, "face interchange", not bad and checked > 0,
                  f"{checked} instances, {len(bad)} failures")


# ---------------------------------------------------------------------------
# 10. the worked example


def criterion_10():
    g = json.loads((Path(__file__).parent / "golden" / "worked_example.json").read_text())
    beta = parse("ltr", g["beta"])
    t5 = parse("tm", g["larger_tm"])
    checks = {
        "omega": show(ltr.omega_of(beta)) == g["omega"],
        "bar": show(ltr.bar(beta)) == g["bar"],
        "u": show(ltr.u_of(beta)) == g["u"],
        "w": show(ltr.w_of(beta)) == g["w"],
        "bookkeeping": ltr.sigma_bookkeeping(t5.tree2) == g["bookkeeping"],
        "xi": show(ltr.tm_to_pr(t5)) == g["xi"],
        "section": show(ltr.section(t5)) == g["larger_section"],
    }
    bad = [k for k, v in checks.items() if not v]
    return record(10, "worked example pipeline", not bad, f"failing {bad}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def test_criterion_1_axioms():
    assert criterion_1()


def test_criterion_2_lat_laws():
    assert criterion_2()


def test_criterion_3_domination():
    assert criterion_3()


def test_criterion_4_canonical_forms():
    assert criterion_4()


def test_criterion_5_section():
    assert criterion_5()


def test_criterion_6_contractibility():
    assert criterion_6()


def test_criterion_7_roundtrips():
    assert criterion_7()


def test_criterion_8_beck_chevalley():
    assert criterion_8()


def test_criterion_9_interchange():
    assert criterion_9()


def test_criterion_10_golden():
    assert criterion_10()


if __name__ == "__main__":
    results = []
    for c in CRITERIA:
        try:
            results.append(c())
        except Exception as e:  # report and keep going
            print(f"FAIL {c.__name__}: {type(e).__name__}: {e}")
            results.append(False)
    sys.exit(0 if all(results) else 1)
