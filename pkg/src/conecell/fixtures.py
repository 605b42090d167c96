"""Built-in fans and a seeded generator of random smooth fans."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .fans import ConeSubset, Fan


def p1() -> tuple[Fan, ConeSubset]:
    f = Fan(1, [("r+", [(1,)]), ("r-", [(-1,)])], name="p1")
    return f, ConeSubset(f, ["r+", "r-"])


def p2() -> tuple[Fan, ConeSubset]:
    a, b, c = (1, 0), (0, 1), (-1, -1)
    f = Fan(2, [
        ("r1", [a]), ("r2", [b]), ("r3", [c]),
        ("s12", [a, b]), ("s23", [b, c]), ("s13", [a, c]),
    ], name="p2")
    return f, ConeSubset(f, ["r1", "r2", "r3", "s12", "s23", "s13"])


def _square() -> Fan:
    return Fan(2, [("r1", [(1, 0)]), ("r2", [(0, 1)]), ("s", [(1, 0), (0, 1)])], name="square")


def orthant() -> tuple[Fan, ConeSubset]:
    f = _square()
    f.name = "orthant"
    return f, ConeSubset(f, ["r1", "r2", "s"])


def facet_pair() -> tuple[Fan, ConeSubset]:
    f = _square()
    f.name = "facet-pair"
    return f, ConeSubset(f, ["s", "r1"])


def cube3() -> tuple[Fan, ConeSubset]:
    """All nonzero faces of the positive octant in rank 3."""
    f = Fan.from_maximal(3, [[(1, 0, 0), (0, 1, 0), (0, 0, 1)]], name="cube3")
    return f, ConeSubset(f, [i for i in f.ids if f[i].dim > 0])


def p1_cubed() -> tuple[Fan, ConeSubset]:
    """Complete fan of (P^1)^3; every cone is the intersection of 2^codim maximal cones."""
    maxes = []
    for signs in itertools.product((1, -1), repeat=3):
        maxes.append([tuple(s if j == i else 0 for j in range(3)) for i, s in enumerate(signs)])
    f = Fan.from_maximal(3, maxes, name="p1^3")
    return f, ConeSubset(f, [i for i in f.ids if f[i].dim > 0])


@dataclass(frozen=True)
class FixtureInfo:
    name: str
    description: str


FINITE_FIXTURES = {
    "p1": (p1, "complete fan of P^1, T = both rays (D = R minus 0)"),
    "p2": (p2, "complete fan of P^2, T = all nonzero cones (D = R^2 minus 0)"),
    "orthant": (orthant, "faces of cone(e1,e2), T = all nonzero faces (contractible, not open)"),
    "facet-pair": (facet_pair, "faces of cone(e1,e2), T = {sigma, one facet} (contractible, not open)"),
}

EXTRA_FIXTURES = {
    "cube3": (cube3, "faces of the positive octant in rank 3, T = all nonzero faces"),
    "p1^3": (p1_cubed, "complete fan of (P^1)^3, T = all nonzero cones"),
}


def fixture_list() -> list[FixtureInfo]:
    out = [FixtureInfo(k, v[1]) for k, v in FINITE_FIXTURES.items()]
    out.append(FixtureInfo("tate", "periodic fan cone((k,1),(k+1,1)) with the unipotent Z-action"))
    return out


def load_fixture(name: str) -> tuple[Fan, ConeSubset]:
    table = {**FINITE_FIXTURES, **EXTRA_FIXTURES}
    if name not in table:
        raise KeyError(name)
    return table[name][0]()


# ---------------------------------------------------------------------------
# random smooth fans


def random_unimodular(n: int, rng: random.Random, steps: int = 6) -> list[list[int]]:
    """Product of random elementary matrices and signed permutations."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        for k in range(n):
            m[i][k] += c * m[j][k]
    perm = list(range(n))
    rng.shuffle(perm)
    signs = [rng.choice((1, -1)) for _ in range(n)]
    return [[signs[i] * m[perm[i]][k] for k in range(n)] for i in range(n)]


def _apply(u, v):
    return tuple(sum(u[i][k] * v[k] for k in range(len(v))) for i in range(len(u)))


def _base_maximal(n: int, rng: random.Random) -> list[list[tuple]]:
    e = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    kind = rng.choice(["orthant", "projective", "p1power", "product"])
    if kind == "orthant":
        return [e]
    if kind == "projective":
        rays = e + [tuple(-1 for _ in range(n))]
        return [list(c) for c in itertools.combinations(rays, n)]
    if kind == "p1power" or n < 2:
        return [[tuple(s * x for x in e[i]) for i, s in enumerate(signs)]
                for signs in itertools.product((1, -1), repeat=n)]
    a = rng.randint(1, n - 1)
    left = e[:a] + [tuple(-1 if i < a else 0 for i in range(n))]
    right = e[a:] + [tuple(-1 if i >= a else 0 for i in range(n))]
    return [list(x) + list(y) for x in itertools.combinations(left, a)
            for y in itertools.combinations(right, n - a)]


def _star_subdivide(maxes: list[list[tuple]], tau: frozenset) -> list[list[tuple]]:
    """Star subdivision at the cone ``tau`` (smoothness is preserved)."""
    v = tuple(sum(col) for col in zip(*tau))
    out = []
    for m in maxes:
        s = frozenset(m)
        if not tau <= s:
            out.append(m)
            continue
        for r in tau:
            out.append(sorted((s - {r}) | {v}))
    return out


def random_smooth_fan(rng: random.Random, max_rank: int = 4, max_cones: int = 40,
                      subdivisions: int = 2) -> Fan:
    """A random smooth fan with at most ``max_cones`` cones (zero cone included)."""
    while True:
        n = rng.choice([k for k in range(1, max_rank + 1) for _ in range(k)])
        maxes = _base_maximal(n, rng)
        for _ in range(rng.randint(0, subdivisions)):
            m = rng.choice(maxes)
            if len(m) < 2:
                break
            k = rng.randint(2, len(m))
            maxes = _star_subdivide(maxes, frozenset(rng.sample(m, k)))
        keep = rng.randint((len(maxes) + 1) // 2, len(maxes))
        maxes = rng.sample(maxes, keep)
        u = random_unimodular(n, rng)
        maxes = [[_apply(u, r) for r in m] for m in maxes]
        f = Fan.from_maximal(n, maxes, name="random")
        if len(f) <= max_cones:
            return f


def random_upward_closed(fan: Fan, rng: random.Random, max_generators: int = 3) -> ConeSubset:
    """Union of the stars of a few random nonzero cones."""
    nonzero = [i for i in fan.ids if fan[i].dim > 0]
    gens = rng.sample(nonzero, rng.randint(1, min(max_generators, len(nonzero))))
    members = set()
    for g in gens:
        members.update(fan.star(g))
    return ConeSubset(fan, members)


def random_instance(seed: int, **kw) -> tuple[Fan, ConeSubset]:
    rng = random.Random(seed)
    f = random_smooth_fan(rng, **kw)
    return f, random_upward_closed(f, rng)
