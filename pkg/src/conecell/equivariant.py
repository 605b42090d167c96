"""Group actions on fans, complexes over the group ring ZH, and group cohomology.

Group elements are matrices in GL_n(Z); equality is decided by the matrix
(the action on the lattice is assumed faithful).  A word is a tuple of
1-based generator indices, negative for inverses; the empty word is the
identity.

Modules over ZH are left modules.  A differential of free modules is stored
like an integer differential, ``M[i][j]`` being the coefficient of ``e_i`` in
``d(e_j)``, so the composite ``d2 o d1`` has entries
``sum_i d1[i][j] * d2[k][i]`` (ring elements multiply in that order).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence

from .complexes import ChainComplex, GradedGroup, homology
from .fans import ConeSubset, Fan, support
from .linalg import IntMatrix, coordinates, determinant, perm_sign, unimodular_inverse

Matrix = tuple[tuple[int, ...], ...]
Word = tuple[int, ...]


class EquivariantError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def _mat(rows) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in rows)


def _ident(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _mul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
                 for i in range(len(a)))


def _inv(a: Matrix) -> Matrix:
    return _mat(unimodular_inverse(IntMatrix.from_rows(a, len(a))).to_lists())


def _apply(g: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(g[i][k] * v[k] for k in range(len(v))) for i in range(len(g)))


def reduce_word(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_str(word: Word) -> str:
    return "e" if not word else ".".join(f"g{x}" if x > 0 else f"g{-x}^-1" for x in word)


# ---------------------------------------------------------------------------
# groups


class GroupData:
    """Finitely generated subgroup H of GL_n(Z) given by generator matrices."""

    def __init__(self, rank: int, generators: Sequence[Sequence[Sequence[int]]] = (),
                 relations: Sequence[Sequence[int]] = (), resolution: "GroupRingComplex | None" = None,
                 augmentation: Sequence[int] | None = None, name: str = ""):
        self.rank = rank
        self.name = name
        self.generators = [_mat(g) for g in generators]
        for k, g in enumerate(self.generators, start=1):
            if len(g) != rank or any(len(r) != rank for r in g):
                raise EquivariantError("SCHEMA_ERROR", f"generator {k} is not {rank}x{rank}")
            if abs(determinant(g)) != 1:
                raise EquivariantError("ACTION_ESCAPES_RANK", f"generator {k} is not unimodular")
        self.inverses = [_inv(g) for g in self.generators]
        self.relations = [tuple(int(x) for x in w) for w in relations]
        for w in self.relations:
            self._check_word(w)
            if self.matrix(w) != _ident(rank):
                raise EquivariantError("RELATION_VIOLATION", f"relation {list(w)} is not the identity")
        self.resolution = None
        self.augmentation = None
        if resolution is not None:
            self.set_resolution(resolution, augmentation)

    def _check_word(self, w: Word):
        for x in w:
            if x == 0 or abs(x) > len(self.generators):
                raise EquivariantError("SCHEMA_ERROR", f"word letter {x} out of range")

    def matrix(self, word: Iterable[int]) -> Matrix:
        m = _ident(self.rank)
        for x in word:
            m = _mul(m, self.generators[x - 1] if x > 0 else self.inverses[-x - 1])
        return m

    def identity(self) -> Matrix:
        return _ident(self.rank)

    def finite_order_generator(self, bound: int = 12) -> int | None:
        """Index of a nontrivial generator of order <= bound, if any."""
        e = self.identity()
        for k, g in enumerate(self.generators, start=1):
            if g == e:
                continue
            m = g
            for _ in range(bound - 1):
                m = _mul(m, g)
                if m == e:
                    return k
        return None

    def set_resolution(self, res: "GroupRingComplex", augmentation: Sequence[int] | None = None):
        """Attach a bounded free resolution F_* (F_k in degree -k) of the trivial module."""
        k = self.finite_order_generator()
        if k is not None:
            raise EquivariantError("FINITE_ORDER", f"generator {k} has finite order; a group with torsion "
                                   "has no bounded free resolution")
        if res.group is not self:
            res = GroupRingComplex(self, res.ranks, {q: m.rebind(self) for q, m in res.differentials.items()})
        if any(q > 0 for q in res.ranks):
            raise EquivariantError("SCHEMA_ERROR", "resolution must live in degrees <= 0")
        if not res.validate():
            raise EquivariantError("SCHEMA_ERROR", "resolution differentials do not square to zero")
        aug = list(augmentation) if augmentation is not None else [1] * res.rank(0)
        if len(aug) != res.rank(0):
            raise EquivariantError("SCHEMA_ERROR", "augmentation length differs from rank of F_0")
        g = 0
        for x in aug:
            g = gcd(g, x)
        if g != 1:
            raise EquivariantError("SCHEMA_ERROR", "augmentation is not surjective")
        d = res.d(-1)
        for j in range(res.rank(-1)):
            if sum(aug[i] * d.get(i, j).augment() for i in range(res.rank(0))) != 0:
                raise EquivariantError("SCHEMA_ERROR", "augmentation does not kill the image of F_1")
        self.resolution = res
        self.augmentation = tuple(aug)

    def elements(self, max_len: int) -> list[tuple[Matrix, Word]]:
        """Distinct elements reachable by words of length <= max_len, shortest word first."""
        e = self.identity()
        seen = {e: ()}
        frontier = deque([(e, ())])
        letters = [x for k in range(1, len(self.generators) + 1) for x in (k, -k)]
        while frontier:
            m, w = frontier.popleft()
            if len(w) == max_len:
                continue
            for x in letters:
                m2 = _mul(m, self.generators[x - 1] if x > 0 else self.inverses[-x - 1])
                if m2 not in seen:
                    seen[m2] = w + (x,)
                    frontier.append((m2, w + (x,)))
        return sorted(((m, w) for m, w in seen.items()), key=lambda mw: (len(mw[1]), mw[1]))


def trivial_group(rank: int) -> GroupData:
    g = GroupData(rank, name="trivial")
    g.set_resolution(GroupRingComplex(g, {0: 1}, {}))
    return g


# ---------------------------------------------------------------------------
# group ring


@dataclass(frozen=True)
class GroupRingElement:
    """Finite formal sum of group elements; ``terms`` maps matrix -> coefficient."""

    group: GroupData
    terms: Mapping[Matrix, int] = field(default_factory=dict)
    words: Mapping[Matrix, Word] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {m: c for m, c in self.terms.items() if c})
        object.__setattr__(self, "words", {m: self.words[m] for m in self.terms})

    @classmethod
    def from_terms(cls, group: GroupData, pairs: Iterable[tuple[Sequence[int], int]]) -> "GroupRingElement":
        terms: dict[Matrix, int] = {}
        words: dict[Matrix, Word] = {}
        for w, c in pairs:
            w = reduce_word(w)
            group._check_word(w)
            m = group.matrix(w)
            terms[m] = terms.get(m, 0) + int(c)
            words.setdefault(m, w)
        return cls(group, terms, words)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        terms = dict(self.terms)
        words = {**other.words, **self.words}
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return GroupRingElement(self.group, terms, words)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.group, {m: -c for m, c in self.terms.items()}, self.words)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        terms: dict[Matrix, int] = {}
        words: dict[Matrix, Word] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
                words.setdefault(m, reduce_word(self.words[m1] + other.words[m2]))
        return GroupRingElement(self.group, terms, words)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def augment(self) -> int:
        return sum(self.terms.values())

    def conjugate(self) -> "GroupRingElement":
        """Image under the anti-involution g -> g^{-1}."""
        words = {}
        terms = {}
        for m, c in self.terms.items():
            mi = _inv(m)
            terms[mi] = c
            words[mi] = tuple(-x for x in reversed(self.words[m]))
        return GroupRingElement(self.group, terms, words)

    def sorted_terms(self) -> list[tuple[Word, int]]:
        return sorted(((self.words[m], c) for m, c in self.terms.items()), key=lambda wc: (len(wc[0]), wc[0]))

    def to_json(self) -> list[dict]:
        return [{"word": list(w), "coeff": c} for w, c in self.sorted_terms()]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{word_str(w)}" for w, c in self.sorted_terms())


class GroupRingMatrix:
    """Sparse ``rows x cols`` matrix of group ring elements."""

    def __init__(self, group: GroupData, rows: int, cols: int,
                 entries: Mapping[tuple[int, int], GroupRingElement] | None = None):
        self.group = group
        self.rows = rows
        self.cols = cols
        self.entries = {k: v for k, v in (entries or {}).items() if not v.is_zero()}

    def get(self, i: int, j: int) -> GroupRingElement:
        return self.entries.get((i, j), GroupRingElement(self.group))

    def is_zero(self) -> bool:
        return not self.entries

    def rebind(self, group: GroupData) -> "GroupRingMatrix":
        ent = {}
        for k, v in self.entries.items():
            ent[k] = GroupRingElement.from_terms(group, [(w, c) for w, c in v.sorted_terms()])
        return GroupRingMatrix(group, self.rows, self.cols, ent)

    def then(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        """Matrix of ``other o self`` for left-module maps."""
        if self.rows != other.cols:
            raise EquivariantError("SHAPE_MISMATCH", "cannot compose")
        by_row: dict[int, list] = {}
        for (i, j), a in self.entries.items():
            by_row.setdefault(i, []).append((j, a))
        out: dict[tuple[int, int], GroupRingElement] = {}
        for (k, i), b in other.entries.items():
            for j, a in by_row.get(i, ()):
                out[(k, j)] = out.get((k, j), GroupRingElement(self.group)) + a * b
        return GroupRingMatrix(self.group, other.rows, self.cols, out)

    def specialize(self, rep: "Representation", conjugate: bool = False, swap: bool = False) -> IntMatrix:
        """Block matrix with block (i, j) the representation of entry (i, j).

        ``conjugate`` applies g -> g^{-1} first; ``swap`` puts the block at
        (j, i) instead (block transpose without transposing the blocks).
        """
        r = rep.rank
        triples = []
        for (i, j), a in self.entries.items():
            block = rep.of(a.conjugate() if conjugate else a)
            bi, bj = (j, i) if swap else (i, j)
            for x in range(r):
                for y in range(r):
                    if block[x][y]:
                        triples.append((bi * r + x, bj * r + y, block[x][y]))
        rows, cols = (self.cols, self.rows) if swap else (self.rows, self.cols)
        return IntMatrix.from_entries(rows * r, cols * r, triples)

    def to_json(self) -> list:
        return [[self.get(i, j).to_json() for j in range(self.cols)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, group: GroupData, rows: int, cols: int, data) -> "GroupRingMatrix":
        if len(data) != rows or any(len(r) != cols for r in data):
            raise EquivariantError("SCHEMA_ERROR", f"differential must be {rows}x{cols}")
        ent = {}
        for i, row in enumerate(data):
            for j, terms in enumerate(row):
                ent[(i, j)] = GroupRingElement.from_terms(group, [(t["word"], t["coeff"]) for t in terms])
        return cls(group, rows, cols, ent)


class GroupRingComplex:
    """Bounded complex of finitely generated free left ZH-modules."""

    def __init__(self, group: GroupData, ranks: Mapping[int, int],
                 differentials: Mapping[int, GroupRingMatrix], labels: Mapping[int, Sequence] | None = None):
        self.group = group
        self.ranks = {int(q): int(r) for q, r in sorted(ranks.items()) if r}
        self.differentials = {int(q): m for q, m in sorted(differentials.items()) if not m.is_zero()}
        self.labels = {int(q): tuple(l) for q, l in (labels or {}).items()}

    def rank(self, q: int) -> int:
        return self.ranks.get(q, 0)

    def d(self, q: int) -> GroupRingMatrix:
        return self.differentials.get(q) or GroupRingMatrix(self.group, self.rank(q + 1), self.rank(q))

    def validate(self) -> bool:
        """Shapes and formal ``d o d = 0`` over the group ring."""
        for q, m in self.differentials.items():
            if (m.rows, m.cols) != (self.rank(q + 1), self.rank(q)):
                return False
        for q in self.differentials:
            if q + 1 in self.differentials and not self.d(q).then(self.d(q + 1)).is_zero():
                return False
        return True

    def to_json(self) -> dict:
        return {
            "degrees": {str(q): r for q, r in self.ranks.items()},
            "differentials": {str(q): m.to_json() for q, m in self.differentials.items()},
        }

    @classmethod
    def from_json(cls, group: GroupData, data: Mapping) -> "GroupRingComplex":
        ranks = {int(q): int(r) for q, r in data.get("degrees", {}).items()}
        diffs = {}
        for q, rows in data.get("differentials", {}).items():
            q = int(q)
            diffs[q] = GroupRingMatrix.from_json(group, ranks.get(q + 1, 0), ranks.get(q, 0), rows)
        return cls(group, ranks, diffs)


def shift_group_complex(c: GroupRingComplex, k: int) -> GroupRingComplex:
    """Degree q moves to q - k with differentials multiplied by (-1)^k."""
    sign = -1 if k % 2 else 1
    diffs = {}
    for q, m in c.differentials.items():
        diffs[q - k] = GroupRingMatrix(c.group, m.rows, m.cols,
                                       {ij: (a if sign == 1 else -a) for ij, a in m.entries.items()})
    return GroupRingComplex(c.group, {q - k: r for q, r in c.ranks.items()}, diffs,
                            {q - k: l for q, l in c.labels.items()})


# ---------------------------------------------------------------------------
# representations


class Representation:
    """H acting on Z^rank through one invertible matrix per generator."""

    def __init__(self, group: GroupData, rank: int, matrices: Sequence[Sequence[Sequence[int]]], name: str = ""):
        self.group = group
        self.rank = rank
        self.name = name
        if len(matrices) != len(group.generators):
            raise EquivariantError("SCHEMA_ERROR", f"need {len(group.generators)} action matrices")
        self.matrices = [_mat(m) for m in matrices]
        for k, m in enumerate(self.matrices, start=1):
            if len(m) != rank or any(len(r) != rank for r in m) or abs(determinant(m)) != 1:
                raise EquivariantError("SCHEMA_ERROR", f"action matrix {k} is not an invertible {rank}x{rank} matrix")
        self.inverses = [_inv(m) for m in self.matrices]
        for w in group.relations:
            if self.word(w) != _ident(rank):
                raise EquivariantError("RELATION_VIOLATION", f"relation {list(w)} fails in the representation")

    def word(self, w: Word) -> Matrix:
        m = _ident(self.rank)
        for x in w:
            m = _mul(m, self.matrices[x - 1] if x > 0 else self.inverses[-x - 1])
        return m

    def of(self, a: GroupRingElement) -> list[list[int]]:
        out = [[0] * self.rank for _ in range(self.rank)]
        for m, c in a.terms.items():
            g = self.word(a.words[m])
            for i in range(self.rank):
                for j in range(self.rank):
                    out[i][j] += c * g[i][j]
        return out

    def twisted(self, character: Sequence[int]) -> "Representation":
        """Tensor with a rank-one character given by its values on the generators."""
        mats = [tuple(tuple(s * x for x in r) for r in m) for s, m in zip(character, self.matrices)]
        return Representation(self.group, self.rank, mats, name=f"{self.name}*det")


def trivial_rep(group: GroupData, rank: int = 1) -> Representation:
    return Representation(group, rank, [_ident(rank)] * len(group.generators), name=f"Z^{rank}" if rank > 1 else "Z")


def sign_rep(group: GroupData) -> Representation:
    """Every generator acts by -1."""
    return Representation(group, 1, [((-1,),)] * len(group.generators), name="sign")


# ---------------------------------------------------------------------------
# complexes from a resolution


def invariants_complex(c: GroupRingComplex, a: Representation) -> ChainComplex:
    """Hom_ZH(c, A): degree q is A^(rank of c at -q).

    For a left-module map with ``d(e_j) = sum_i a_ij e_i`` and
    ``phi in Hom(c, A)``, ``(phi o d)(e_j) = sum_i rho(a_ij) phi(e_i)``, so the
    block (j, i) is ``rho(a_ij)``; the overall sign matches :func:`dual_hom`.
    """
    r = a.rank
    ranks = {-q: n * r for q, n in c.ranks.items()}
    diffs = {}
    for q0, m in c.differentials.items():
        q = -q0 - 1
        sign = -1 if (q + 1) % 2 else 1
        diffs[q] = m.specialize(a, swap=True).scale(sign)
    return ChainComplex(ranks, diffs)


def coinvariants_complex(c: GroupRingComplex, a: Representation) -> ChainComplex:
    """c (x)_ZH A in the degrees of c.

    The left module c becomes a right module through g -> g^{-1}, so
    ``e_j (x) m`` goes to ``sum_i e_i (x) rho(conj(a_ij)) m``.
    """
    ranks = {q: n * a.rank for q, n in c.ranks.items()}
    diffs = {q: m.specialize(a, conjugate=True) for q, m in c.differentials.items()}
    return ChainComplex(ranks, diffs)


def _resolution(g: GroupData) -> GroupRingComplex:
    if g.resolution is None:
        raise EquivariantError("NO_RESOLUTION", "group has no resolution attached")
    return g.resolution


def group_cohomology(g: GroupData, m: Representation) -> GradedGroup:
    """H^*(H, M) as the homology of Hom_ZH(F_*, M); cohomological degrees."""
    return homology(invariants_complex(_resolution(g), m))


def coinvariants_homology(g: GroupData, m: Representation) -> GradedGroup:
    """H_*(H, M) as the homology of F_* (x)_ZH M, in homological degrees."""
    h = homology(coinvariants_complex(_resolution(g), m))
    return GradedGroup({-q: v for q, v in h.groups.items()})


def _elem(group: GroupData, word: Sequence[int], coeff: int = 1) -> GroupRingElement:
    return GroupRingElement.from_terms(group, [(word, coeff)])


def standard_z_resolution(g: GroupData, gen: int = 1) -> GroupRingComplex:
    """0 -> ZH -(t-1)-> ZH -> Z for H infinite cyclic generated by generator ``gen``."""
    d = GroupRingMatrix(g, 1, 1, {(0, 0): _elem(g, [gen]) - _elem(g, [])})
    return GroupRingComplex(g, {-1: 1, 0: 1}, {-1: d})


def koszul_resolution(g: GroupData) -> GroupRingComplex:
    """Koszul resolution for H free abelian of rank 2 on generators s, t."""
    one = _elem(g, [])
    s1 = _elem(g, [1]) - one
    t1 = _elem(g, [2]) - one
    d1 = GroupRingMatrix(g, 1, 2, {(0, 0): s1, (0, 1): t1})
    d2 = GroupRingMatrix(g, 2, 1, {(0, 0): -t1, (1, 0): s1})
    return GroupRingComplex(g, {-2: 1, -1: 2, 0: 1}, {-2: d2, -1: d1})


def padded_resolution(res: GroupRingComplex, degree: int = -1) -> GroupRingComplex:
    """``res`` plus the contractible summand ZH -id-> ZH in degrees (degree-1, degree)."""
    g = res.group
    ranks = dict(res.ranks)
    ranks[degree] = res.rank(degree) + 1
    ranks[degree - 1] = res.rank(degree - 1) + 1
    diffs = {}
    for q, m in res.differentials.items():
        diffs[q] = GroupRingMatrix(g, ranks.get(q + 1, 0), ranks.get(q, 0), m.entries)
    extra = GroupRingMatrix(g, ranks[degree], ranks[degree - 1], diffs.get(degree - 1, GroupRingMatrix(g, 0, 0)).entries)
    extra.entries[(ranks[degree] - 1, ranks[degree - 1] - 1)] = _elem(g, [])
    diffs[degree - 1] = extra
    return GroupRingComplex(g, ranks, diffs)


# ---------------------------------------------------------------------------
# periodic fans


@dataclass
class OrbitCone:
    id: str
    rays: tuple[tuple[int, ...], ...]
    rep: str
    element: Matrix
    word: Word


class PeriodicFan:
    """A fan presented by orbit representatives of T under a lattice action.

    ``reps`` are cones of T, one per H-orbit, given by their rays.  The fan
    consists of all translates and their faces; T is the set of translates.
    """

    def __init__(self, group: GroupData, reps: Sequence[tuple[str, Sequence[Sequence[int]]]],
                 default_radius: int = 3, name: str = ""):
        self.group = group
        self.rank = group.rank
        self.name = name
        self.default_radius = default_radius
        self.reps: dict[str, tuple[tuple[int, ...], ...]] = {}
        for rid, rays in reps:
            rays = tuple(sorted(tuple(int(x) for x in r) for r in rays))
            if any(len(r) != self.rank for r in rays):
                raise EquivariantError("SCHEMA_ERROR", f"rep {rid} has rays of the wrong length")
            if rid in self.reps:
                raise EquivariantError("SCHEMA_ERROR", f"duplicate rep id {rid}")
            self.reps[str(rid)] = rays

    def rep_ids(self) -> list[str]:
        return sorted(self.reps, key=lambda r: (len(self.reps[r]), self.reps[r]))

    def orbit_cones(self, radius: int) -> dict[frozenset, OrbitCone]:
        out: dict[frozenset, OrbitCone] = {}
        for m, w in self.group.elements(radius):
            for rid in self.rep_ids():
                rays = tuple(sorted(_apply(m, r) for r in self.reps[rid]))
                key = frozenset(rays)
                if key not in out:
                    cid = rid if not w else f"{rid}@{word_str(w)}"
                    out[key] = OrbitCone(cid, rays, rid, m, w)
        return out

    def check_gamma(self, radius: int | None = None) -> bool:
        """The star of every representative is the same at radius r and 2r."""
        r = radius or self.default_radius
        small = self.orbit_cones(r)
        big = self.orbit_cones(2 * r)
        for rays in self.reps.values():
            rs = frozenset(rays)
            st_small = {k for k in small if rs <= k}
            st_big = {k for k in big if rs <= k}
            if st_small != st_big:
                return False
        return True


def check_freeness(pf: PeriodicFan, word_len: int = 8, radius: int | None = None) -> bool:
    """No nonidentity element of word length <= word_len fixes a materialized cone of T.

    A bounded certificate only.  Cones are compared as ray sets.
    """
    cones = pf.orbit_cones(radius or pf.default_radius)
    e = pf.group.identity()
    for m, _ in pf.group.elements(word_len):
        if m == e:
            continue
        for key in cones:
            if frozenset(_apply(m, r) for r in key) == key:
                return False
    return True


@dataclass
class Window:
    fan: Fan
    subset: ConeSubset | None
    orbit: dict[str, OrbitCone]
    boundary: list[str]


def _face_id(rays) -> str:
    return "[" + ";".join(",".join(str(x) for x in r) for r in sorted(rays)) + "]"


def materialize_window(pf: PeriodicFan, radius: int) -> Window:
    """All translates by words of length <= radius, closed under faces.

    The subset keeps the translates whose star one radius further out is
    already present; the others are reported as boundary cones.
    """
    if radius < 1:
        raise EquivariantError("SCHEMA_ERROR", "radius must be at least 1")
    inner = pf.orbit_cones(radius)
    outer = pf.orbit_cones(radius + 1)
    lookup = pf.orbit_cones(2 * radius + 2)
    cones: dict[frozenset, str] = {}
    orbit: dict[str, OrbitCone] = {}
    for key, oc in inner.items():
        cones[key] = oc.id
        orbit[oc.id] = oc
    for key, oc in list(inner.items()):
        rays = sorted(key)
        for k in range(1, len(rays)):
            for j in range(1 << len(rays)):
                sub = frozenset(r for b, r in enumerate(rays) if j >> b & 1)
                if len(sub) != k or sub in cones:
                    continue
                if sub in lookup:
                    oc2 = lookup[sub]
                    cones[sub] = oc2.id
                    orbit[oc2.id] = oc2
                else:
                    cones[sub] = _face_id(sub)
    fan = Fan(pf.rank, [(cid, sorted(key)) for key, cid in cones.items()], name=f"{pf.name}@r{radius}")
    members = []
    boundary = []
    for key, cid in cones.items():
        if cid not in orbit:
            continue
        star_out = {k for k in outer if key <= k}
        if all(k in cones for k in star_out):
            members.append(cid)
        else:
            boundary.append(cid)
    sub = ConeSubset(fan, members) if members else None
    return Window(fan, sub, orbit, sorted(boundary))


def _locate(pf: PeriodicFan, key: frozenset, radius: int) -> OrbitCone | None:
    return pf.orbit_cones(radius).get(key)


def equivariant_cocellular(pf: PeriodicFan, word_bound: int = 8, radius: int | None = None) -> GroupRingComplex:
    """C_*(T, Z) as a complex of free ZH-modules on the orbit representatives.

    The generator of Z(g tau) is g applied to the ordered rays of tau.  The
    coefficient of ``g e_eta`` in ``d(e_tau)`` is the sign comparing
    ``rays(tau) + [missing ray]`` with ``g . rays(eta)``.
    """
    if not check_freeness(pf, word_bound, radius):
        raise EquivariantError("FREENESS_UNCERTIFIED", f"a nonidentity element of word length <= {word_bound} "
                               "fixes a cone")
    r = radius or pf.default_radius
    if not pf.check_gamma(r):
        raise EquivariantError("GAMMA_UNCERTIFIED", f"stars of representatives still grow past radius {r}")
    g = pf.group
    orbit = pf.orbit_cones(r + 1)
    reps = pf.rep_ids()
    basis: dict[int, list[str]] = {}
    for rid in reps:
        basis.setdefault(len(pf.reps[rid]), []).append(rid)
    pos = {q: {rid: k for k, rid in enumerate(ids)} for q, ids in basis.items()}
    diffs = {}
    for q, ids in basis.items():
        if q + 1 not in basis:
            continue
        ent: dict[tuple[int, int], GroupRingElement] = {}
        for j, rid in enumerate(ids):
            tau = pf.reps[rid]
            t_key = frozenset(tau)
            for key, oc in orbit.items():
                if len(key) != q + 1 or not t_key < key:
                    continue
                (missing,) = tuple(key - t_key)
                target = [_apply(oc.element, v) for v in pf.reps[oc.rep]]
                seq = list(tau) + [missing]
                sgn = perm_sign([target.index(v) for v in seq])
                i = pos[q + 1][oc.rep]
                ent[(i, j)] = ent.get((i, j), GroupRingElement(g)) + _elem(g, oc.word, sgn)
        diffs[q] = GroupRingMatrix(g, len(basis[q + 1]), len(ids), ent)
    return GroupRingComplex(g, {q: len(ids) for q, ids in basis.items()}, diffs, basis)


def determinant_character(pf: PeriodicFan, span: Sequence[Sequence[int]]) -> list[int]:
    """Sign of det of each generator restricted to the span of D."""
    out = []
    for m in pf.group.generators:
        rows = []
        for b in span:
            c = coordinates(_apply(m, b), span)
            if c is None:
                raise EquivariantError("SPAN_NOT_INVARIANT", "a generator does not preserve the span of D")
            rows.append(c)
        det = determinant(rows)
        if abs(det) != 1:
            raise EquivariantError("SPAN_NOT_INVARIANT", "restricted action is not unimodular")
        out.append(int(det))
    return out


@dataclass
class ConsistencyReport:
    match: bool
    d: int
    character: list[int]
    invariants_homology: GradedGroup
    group_cohomology_shifted: GradedGroup
    word_bound: int
    radius: int
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "degrees": self.invariants_homology.describe(),
            "d": self.d,
            "character": self.character,
            "invariants_homology": self.invariants_homology.to_json(),
            "group_cohomology_shifted": self.group_cohomology_shifted.to_json(),
            "word_bound": self.word_bound,
            "radius": self.radius,
            "notes": list(self.notes),
        }


def check_2main_c(pf: PeriodicFan, a: Representation, word_bound: int = 8,
                  radius: int | None = None) -> ConsistencyReport:
    """Invariants of Hom(C_*(T), A) against H^*(H, A (x) Z(D_R)) shifted by d."""
    g = pf.group
    _resolution(g)
    r = radius or pf.default_radius
    win = materialize_window(pf, r)
    if win.subset is None:
        raise EquivariantError("HYPOTHESES_UNVERIFIED", "window interior is empty")
    sup = support(win.subset)
    if not (sup.open_in_span and sup.homology_point):
        raise EquivariantError("HYPOTHESES_UNVERIFIED",
                               f"open_in_span={sup.open_in_span}, homology_point={sup.homology_point}")
    c = equivariant_cocellular(pf, word_bound, r)
    lhs = homology(invariants_complex(c, a))
    chi = determinant_character(pf, sup.span_basis)
    rhs = group_cohomology(g, a.twisted(chi)).shifted(sup.d)
    rep = ConsistencyReport(lhs == rhs, sup.d, chi, lhs, rhs, word_bound, r)
    rep.notes.append(f"freeness certified up to word length {word_bound}")
    rep.notes.append("contractibility checked through the homology of the Cech nerve only")
    rep.notes.append("exactness of the resolution is assumed input")
    return rep


# ---------------------------------------------------------------------------
# built-in periodic fixtures


def tate_group(with_resolution: bool = True) -> GroupData:
    g = GroupData(2, [[[1, 1], [0, 1]]], name="unipotent")
    if with_resolution:
        g.set_resolution(standard_z_resolution(g))
    return g


def tate(default_radius: int = 3) -> PeriodicFan:
    """sigma_k = cone((k,1),(k+1,1)) and rho_k = cone((k,1)) under t = [[1,1],[0,1]]."""
    return PeriodicFan(tate_group(), [("rho0", [(0, 1)]), ("sigma0", [(0, 1), (1, 1)])],
                       default_radius=default_radius, name="tate")


def abstract_z() -> GroupData:
    """Infinite cyclic group acting faithfully on Z^2 by the unipotent matrix."""
    return tate_group(with_resolution=False)


def abstract_z2() -> GroupData:
    """Free abelian group of rank 2 acting faithfully on Z^3 by commuting unipotents."""
    return GroupData(3, [[[1, 0, 1], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]],
                     relations=[[1, 2, -1, -2]], name="Z^2")


def from_subset(fan: Fan, t: ConeSubset) -> PeriodicFan:
    """The finite subset T with the trivial group, one orbit per cone."""
    g = trivial_group(fan.rank)
    return PeriodicFan(g, [(cid, fan[cid].rays) for cid in t.ids], default_radius=1, name=fan.name)
