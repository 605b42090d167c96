"""Acceptance gate: one test per criterion, each recording a pass/fail line."""

import json
import random
import time

import pytest

from conecell import fixtures as fx
from conecell.cellular import cech_nerve, cocellular, compare_2pb, cprime_2na, double_complex_2pc
from conecell.cli import main
from conecell.complexes import AbGroupCoeff, dual_hom, homology, validate
from conecell.equivariant import (
    abstract_z2,
    check_2main_c,
    coinvariants_complex,
    coinvariants_homology,
    equivariant_cocellular,
    from_subset,
    group_cohomology,
    invariants_complex,
    koszul_resolution,
    padded_resolution,
    sign_rep,
    standard_z_resolution,
    tate,
    tate_group,
    trivial_rep,
)
from conecell.fans import maximal_intersection_counts, sample_openness, support

N_RANDOM = 200
FIXTURES = ["p1", "p2", "orthant", "facet-pair"]
ALL_FINITE = FIXTURES + ["cube3", "p1^3"]


@pytest.fixture(scope="module")
def instances():
    return [fx.random_instance(seed) for seed in range(N_RANDOM)]


def test_criterion_1_d_squared(acceptance):
    start = time.perf_counter()
    instances = [fx.random_instance(seed) for seed in range(N_RANDOM)]
    assert all(fan.rank <= 4 and len(fan) <= 40 for fan, _ in instances)
    bad = [k for k, (_, t) in enumerate(instances) if not validate(cocellular(t))]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    acceptance(1, ok, f"{N_RANDOM - len(bad)}/{N_RANDOM} complexes square to zero in {elapsed:.2f}s (generation included)")
    assert ok, (bad, elapsed)


def test_criterion_2_comparison_fixtures(acceptance):
    expected = {"p1": (1, {1: (2, ())}), "p2": (2, {1: (1, ()), 2: (1, ())})}
    problems = []
    for name, (d, groups) in expected.items():
        _, t = fx.load_fixture(name)
        rep = compare_2pb(t)
        if not (rep.homology_match and rep.d == d and rep.cocellular_homology.groups == groups
                and rep.cech_homology.groups == groups):
            problems.append(name)
    _, t = fx.facet_pair()
    rep = compare_2pb(t)
    if not (homology(cocellular(t)).is_zero() and not rep.open_in_span
            and homology(cech_nerve(t)).groups == {0: (1, ())} and not rep.homology_match):
        problems.append("facet-pair")
    if main(["compare-2pb", "--fan", "facet-pair", "--json"], _Sink()) != 2:
        problems.append("facet-pair exit code")
    ok = not problems
    acceptance(2, ok, "p1, p2 match the shifted Cech homology; facet-pair mismatch exits 2"
               if ok else f"problems: {problems}")
    assert ok


def test_criterion_3_double_complex(instances, acceptance):
    start = time.perf_counter()
    bad = []
    for k, (_, t) in enumerate(instances):
        res = double_complex_2pc(t)
        if not (res.columns_acyclic and res.diagonal_quasi_iso):
            bad.append(k)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    acceptance(3, ok, f"{N_RANDOM - len(bad)}/{N_RANDOM} instances exact columns and quasi-iso diagonal "
               f"in {elapsed:.1f}s")
    assert ok, (bad, elapsed)


def _random_orders(fan, rng):
    rays = sorted(fan.rays())
    perm = list(range(len(rays)))
    rng.shuffle(perm)
    ordering = dict(zip(rays, perm))
    salt = {i: rng.random() for i in fan.ids}
    return ordering, salt.__getitem__


def test_criterion_4_cprime(acceptance):
    cases = [fx.load_fixture(n) for n in ALL_FINITE] + [fx.random_instance(s) for s in range(50)]
    checked = 0
    bad = []
    for k, (fan, t) in enumerate(cases):
        rng = random.Random(k)
        orders = [_random_orders(fan, rng) for _ in range(5)]
        for tau in t.ids:
            res = cprime_2na(t, tau)
            checked += 1
            h = homology(res.cprime)
            if not res.quasi_iso:
                bad.append((k, tau))
                continue
            for ordering, cone_order in orders:
                other = cprime_2na(t, tau, ordering, cone_order)
                if not other.quasi_iso or homology(other.cprime) != h:
                    bad.append((k, tau, "order"))
                    break
    ok = not bad
    acceptance(4, ok, f"{checked - len(bad)}/{checked} cones certified, each under 5 random orderings")
    assert ok, bad[:5]


def test_criterion_5_equivariant_consistency(acceptance):
    pf = tate()
    g = pf.group
    results = {}
    for name, a in [("Z", trivial_rep(g)), ("Z^2", trivial_rep(g, 2)), ("sign", sign_rep(g))]:
        results[name] = check_2main_c(pf, a)
    ok = all(r.match for r in results.values())
    ok = ok and results["Z"].invariants_homology.groups == {-2: (1, ()), -1: (1, ())}
    acceptance(5, ok, "tate: " + ", ".join(f"{k} match={r.match}" for k, r in results.items())
               + f"; trivial degrees {results['Z'].to_json()['degrees']}")
    assert ok


def test_criterion_6_group_cohomology(acceptance):
    z = tate_group()
    checks = {}
    checks["H(Z,Z)"] = group_cohomology(z, trivial_rep(z)).groups == {0: (1, ()), 1: (1, ())}
    checks["H(Z,sign)"] = group_cohomology(z, sign_rep(z)).groups == {1: (0, (2,))}
    checks["H_(Z,Z)"] = coinvariants_homology(z, trivial_rep(z)).groups == {0: (1, ()), 1: (1, ())}
    checks["H_(Z,sign)"] = coinvariants_homology(z, sign_rep(z)).groups == {0: (0, (2,))}
    z2 = abstract_z2()
    z2.set_resolution(koszul_resolution(z2))
    torus = {0: (1, ()), 1: (2, ()), 2: (1, ())}
    checks["H(Z2,Z)"] = group_cohomology(z2, trivial_rep(z2)).groups == torus
    checks["H_(Z2,Z)"] = coinvariants_homology(z2, trivial_rep(z2)).groups == torus

    def outputs(g, reps):
        return json.dumps([[group_cohomology(g, a).to_json(), coinvariants_homology(g, a).to_json()]
                           for a in reps], sort_keys=True)

    reps = [trivial_rep(z), sign_rep(z), trivial_rep(z, 2)]
    base = outputs(z, reps)
    z.set_resolution(padded_resolution(standard_z_resolution(z), -1))
    checks["padded Z"] = outputs(z, reps) == base
    reps2 = [trivial_rep(z2), sign_rep(z2)]
    base2 = outputs(z2, reps2)
    z2.set_resolution(padded_resolution(koszul_resolution(z2), -1))
    checks["padded Z2"] = outputs(z2, reps2) == base2
    ok = all(checks.values())
    acceptance(6, ok, ", ".join(f"{k}={'ok' if v else 'WRONG'}" for k, v in checks.items()))
    assert ok, checks


def test_criterion_7_trivial_group(acceptance):
    bad = []
    for name in ALL_FINITE:
        fan, t = fx.load_fixture(name)
        pf = from_subset(fan, t)
        one = trivial_rep(pf.group)
        c = equivariant_cocellular(pf, radius=1)
        plain = cocellular(t)
        dual = dual_hom(plain, AbGroupCoeff(1))
        pairs = [
            (coinvariants_complex(c, one).to_json(), plain.to_json()),
            (invariants_complex(c, one).to_json(), dual.to_json()),
            (homology(coinvariants_complex(c, one)).to_json(), homology(plain).to_json()),
            (homology(invariants_complex(c, one)).to_json(), homology(dual).to_json()),
            (group_cohomology(pf.group, one).to_json(), {"0": {"rank": 1, "torsion": []}}),
        ]
        if any(json.dumps(a, sort_keys=True) != json.dumps(b, sort_keys=True) for a, b in pairs):
            bad.append(name)
    ok = not bad
    acceptance(7, ok, f"{len(ALL_FINITE) - len(bad)}/{len(ALL_FINITE)} fixtures identical in JSON")
    assert ok, bad


def test_criterion_8_openness(acceptance):
    checked = []
    bad = []
    for name in FIXTURES:
        _, t = fx.load_fixture(name)
        if not support(t).open_in_span:
            continue
        checked.append(name)
        counts = maximal_intersection_counts(t)
        if any(n != want for n, want in counts.values()):
            bad.append((name, "count"))
        if sample_openness(t, samples=1000, seed=0):
            bad.append((name, "samples"))
    ok = bool(checked) and not bad
    acceptance(8, ok, f"open fixtures {checked}: counts hold, 0 violations in 1000 samples each"
               if ok else f"problems: {bad}")
    assert ok, bad


class _Sink:
    def write(self, s):
        pass
