"""Smooth rational polyhedral cones, finite fans and distinguished cone subsets.

Smoothness makes every cone simplicial, so the faces of a cone are exactly the
cones spanned by subsets of its rays.  Cones are identified inside a fan by
their ray set; ids are user-facing labels.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import (
    coordinates,
    cone_overlap_is_face,
    in_relative_interior,
    is_basis_extendable,
    primitive,
    saturated_span_basis,
)

Ray = tuple[int, ...]
ZERO_ID = "0"


class FanError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def cone_key(rays: Iterable[Ray]) -> tuple:
    """Canonical cone order: lexicographic on the sorted ray list."""
    return tuple(sorted(rays))


@dataclass(frozen=True)
class Cone:
    id: str
    rays: tuple[Ray, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(sorted(tuple(r) for r in self.rays)))

    @property
    def dim(self) -> int:
        return len(self.rays)

    @property
    def rayset(self) -> frozenset:
        return frozenset(self.rays)

    def key(self) -> tuple:
        return self.rays

    def is_face_of(self, other: "Cone") -> bool:
        return self.rayset <= other.rayset


@dataclass
class ValidationReport:
    issues: list[tuple[str, tuple[str, ...], str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, kind: str, ids: Sequence[str], message: str):
        self.issues.append((kind, tuple(ids), message))

    def kinds(self) -> set[str]:
        return {k for k, _, _ in self.issues}

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "issues": [{"kind": k, "cones": list(ids), "message": m} for k, ids, m in self.issues],
            "warnings": list(self.warnings),
        }


class Fan:
    """A finite fan in Z^rank.

    ``cones`` is a list of ``(id, rays)``; the zero cone is added implicitly
    under id ``"0"``.  Non-primitive rays are divided by their gcd and a warning
    is recorded.  The constructor does not enforce the fan axioms; call
    :func:`validate_fan`.
    """

    def __init__(self, rank: int, cones: Iterable[tuple[str, Sequence[Sequence[int]]]], name: str = ""):
        self.rank = rank
        self.name = name
        self.warnings: list[str] = []
        self.duplicate_ids: list[str] = []
        self.bad_rays: list[tuple[str, str]] = []
        self._by_id: dict[str, Cone] = {}
        self._by_rays: dict[frozenset, str] = {}
        self._add(Cone(ZERO_ID, ()))
        for cid, rays in cones:
            cid = str(cid)
            norm = []
            for r in rays:
                r = tuple(int(x) for x in r)
                if len(r) != rank:
                    self.bad_rays.append((cid, f"ray {list(r)} has length {len(r)}, expected {rank}"))
                    continue
                if not any(r):
                    self.bad_rays.append((cid, "zero ray"))
                    continue
                p = primitive(r)
                if p != r:
                    self.warnings.append(f"cone {cid}: ray {list(r)} normalized to {list(p)}")
                norm.append(p)
            if cid in self._by_id:
                self.duplicate_ids.append(cid)
                continue
            self._add(Cone(cid, tuple(norm)))

    def _add(self, cone: Cone):
        self._by_id[cone.id] = cone
        self._by_rays.setdefault(cone.rayset, cone.id)

    # lookup -----------------------------------------------------------------
    def __contains__(self, cid: str) -> bool:
        return cid in self._by_id

    def __getitem__(self, cid: str) -> Cone:
        try:
            return self._by_id[cid]
        except KeyError:
            raise FanError("UNKNOWN_CONE_ID", f"no cone with id {cid!r}") from None

    def __len__(self) -> int:
        return len(self._by_id)

    @property
    def cones(self) -> list[Cone]:
        """All cones in canonical order (the zero cone first)."""
        return sorted(self._by_id.values(), key=Cone.key)

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.cones]

    def id_of(self, rays: Iterable[Ray]) -> str | None:
        return self._by_rays.get(frozenset(tuple(r) for r in rays))

    def rays(self) -> list[Ray]:
        return sorted({r for c in self._by_id.values() for r in c.rays})

    def maximal_cones(self, ids: Iterable[str] | None = None) -> list[str]:
        pool = [self[i] for i in (self._by_id if ids is None else ids)]
        out = [c for c in pool if not any(c.rayset < o.rayset for o in pool)]
        return [c.id for c in sorted(out, key=Cone.key)]

    def closure_of(self, cid: str) -> list[str]:
        """Ids of all faces of the cone (itself and 0 included)."""
        c = self[cid]
        out = []
        for k in range(c.dim + 1):
            for sub in itertools.combinations(c.rays, k):
                fid = self.id_of(sub)
                if fid is None:
                    raise FanError("MISSING_FACE", f"face {list(sub)} of {cid} not in fan")
                out.append(fid)
        return sorted(out, key=lambda i: self[i].key())

    def codim1_faces(self, cid: str) -> list[str]:
        c = self[cid]
        if c.dim == 0:
            return []
        out = []
        for sub in itertools.combinations(c.rays, c.dim - 1):
            fid = self.id_of(sub)
            if fid is None:
                raise FanError("MISSING_FACE", f"face {list(sub)} of {cid} not in fan")
            out.append(fid)
        return sorted(out, key=lambda i: self[i].key())

    def star(self, cid: str, within: Iterable[str] | None = None) -> list[str]:
        """Cones having ``cid`` as a face (``cid`` included)."""
        base = self[cid].rayset
        pool = self._by_id if within is None else within
        return sorted((i for i in pool if base <= self[i].rayset), key=lambda i: self[i].key())

    def intersection(self, ids: Iterable[str]) -> str | None:
        """Id of the cone spanned by the common rays, if that cone is in the fan."""
        it = iter(ids)
        common = set(self[next(it)].rayset)
        for i in it:
            common &= self[i].rayset
        return self.id_of(common)

    @classmethod
    def from_maximal(cls, rank: int, maximal: Sequence[Sequence[Sequence[int]]], name: str = "",
                     id_prefix: str = "c") -> "Fan":
        """Fan generated by the given cones and all their faces, with generated ids."""
        seen: dict[frozenset, tuple[Ray, ...]] = {}
        for rays in maximal:
            rays = [primitive(r) for r in rays]
            for k in range(1, len(rays) + 1):
                for sub in itertools.combinations(rays, k):
                    seen.setdefault(frozenset(sub), tuple(sorted(sub)))
        ordered = sorted(seen.values())
        ray_names = {r: i for i, r in enumerate(sorted({r for rs in ordered for r in rs}), start=1)}
        cones = []
        for rs in ordered:
            cones.append((id_prefix + "_".join(str(ray_names[r]) for r in rs), rs))
        return cls(rank, cones, name=name)


def validate_fan(f: Fan) -> ValidationReport:
    """Check the fan axioms and smoothness; every violation becomes a report entry.

    Closure under intersection is tested on pairs of maximal cones, which is
    equivalent for simplicial cones: if two maximal cones meet in a common face,
    so do any of their faces.
    """
    rep = ValidationReport(warnings=list(f.warnings))
    for cid in f.duplicate_ids:
        rep.add("duplicate_id", [cid], f"cone id {cid!r} used more than once")
    for cid, msg in f.bad_rays:
        rep.add("bad_ray", [cid], msg)
    seen_rays: dict[frozenset, str] = {}
    for c in f.cones:
        if c.rayset in seen_rays and seen_rays[c.rayset] != c.id:
            rep.add("duplicate_cone", [seen_rays[c.rayset], c.id], "two ids for the same cone")
        seen_rays.setdefault(c.rayset, c.id)
        if c.dim == 0:
            continue
        if len(set(c.rays)) != c.dim:
            rep.add("repeated_ray", [c.id], "ray listed twice")
            continue
        if not is_basis_extendable(c.rays):
            rep.add("not_smooth", [c.id], "rays are not part of a Z-basis")
            continue
        for k in range(1, c.dim):
            for sub in itertools.combinations(c.rays, k):
                if f.id_of(sub) is None:
                    rep.add("missing_face", [c.id], f"face spanned by {[list(r) for r in sub]} is missing")
    if rep.ok:
        maxes = [f[i] for i in f.maximal_cones()]
        for a, b in itertools.combinations(maxes, 2):
            common = a.rayset & b.rayset
            if not cone_overlap_is_face(a.rays, b.rays, common):
                rep.add("bad_intersection", [a.id, b.id], "cones overlap outside a common face")
    return rep


# ---------------------------------------------------------------------------
# cone subsets


class ConeSubset:
    """A nonempty set of nonzero cones of a fan (the subset called T)."""

    def __init__(self, fan: Fan, members: Iterable[str]):
        members = frozenset(str(m) for m in members)
        for m in members:
            if m not in fan:
                raise FanError("UNKNOWN_CONE_ID", f"no cone with id {m!r}")
        if not members:
            raise FanError("EMPTY_SUBSET", "cone subset must be nonempty")
        if ZERO_ID in members or any(fan[m].dim == 0 for m in members):
            raise FanError("ZERO_IN_SUBSET", "the zero cone may not belong to the subset")
        self.fan = fan
        self.members = members

    def __iter__(self):
        return iter(self.ids)

    def __len__(self):
        return len(self.members)

    def __contains__(self, cid):
        return cid in self.members

    @property
    def ids(self) -> list[str]:
        return sorted(self.members, key=lambda i: self.fan[i].key())

    def by_dim(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for i in self.ids:
            out.setdefault(self.fan[i].dim, []).append(i)
        return out

    def maximal(self) -> list[str]:
        return self.fan.maximal_cones(self.members)


def check_alpha(t: ConeSubset) -> bool:
    """Every cone of the fan having a member as a face is itself a member."""
    f = t.fan
    for c in f.cones:
        if c.id in t.members:
            continue
        if any(f[m].rayset <= c.rayset for m in t.members):
            return False
    return True


def check_locally_closed(fan: Fan, v: Iterable[str]) -> bool:
    """nu in V face of sigma face of mu in V implies sigma in V."""
    v = set(v)
    for cid in v:
        if cid not in fan:
            raise FanError("UNKNOWN_CONE_ID", f"no cone with id {cid!r}")
    for nu in v:
        for mu in v:
            if not fan[nu].rayset <= fan[mu].rayset:
                continue
            for s in fan.closure_of(mu):
                if fan[nu].rayset <= fan[s].rayset and s not in v:
                    return False
    return True


def check_gamma(t) -> bool:
    """Local finiteness.  Trivially true for a finite subset; periodic fans
    delegate to their own window-based check."""
    if isinstance(t, ConeSubset):
        return True
    return t.check_gamma()


@dataclass(frozen=True)
class SupportInfo:
    span_basis: tuple[Ray, ...]
    d: int
    open_in_span: bool
    homology_point: bool
    unsurrounded: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "span_basis": [list(b) for b in self.span_basis],
            "d": self.d,
            "open_in_span": self.open_in_span,
            "homology_point": self.homology_point,
            "unsurrounded": list(self.unsurrounded),
            "note": "homology_point is a homology-level proxy for contractibility",
        }


def span_basis(t: ConeSubset) -> list[Ray]:
    rays = sorted({r for m in t.members for r in t.fan[m].rays})
    return saturated_span_basis(rays, t.fan.rank)


def surrounded(t: ConeSubset, cid: str, d: int) -> bool:
    """Star-completeness test for one cone.

    The star of ``cid`` inside T, projected along the span of ``cid``, must be a
    complete fan of the quotient: pure of dimension ``d`` and every cone of
    dimension ``d - 1`` in the star lies in exactly two cones of dimension ``d``.
    """
    f = t.fan
    st = f.star(cid, within=t.members)
    top = [s for s in st if f[s].dim == d]
    if f[cid].dim == d:
        return True
    if not top:
        return False
    top_sets = [f[s].rayset for s in top]
    for s in st:
        rs = f[s].rayset
        if f[s].dim > d:
            return False
        if not any(rs <= ts for ts in top_sets):
            return False
        if f[s].dim == d - 1 and sum(1 for ts in top_sets if rs <= ts) != 2:
            return False
    return True


def support(t: ConeSubset, cech_homology=None) -> SupportInfo:
    """Span, dimension and openness of D (the union of relative interiors).

    ``cech_homology`` may pass in an already computed homology of the Cech
    nerve.
    """
    basis = span_basis(t)
    d = len(basis)
    bad = tuple(m for m in t.ids if not surrounded(t, m, d))
    h = cech_homology
    if h is None:
        from .cellular import cech_nerve  # cellular depends on this module
        from .complexes import homology

        h = homology(cech_nerve(t))
    point = h.groups == {0: (1, ())}
    return SupportInfo(tuple(basis), d, not bad, point, bad)


def maximal_intersection_counts(t: ConeSubset) -> dict[str, tuple[int, int]]:
    """For each member of dimension ``d - p``: (number of maximal cones of T
    containing it, expected ``p + 1``)."""
    d = len(span_basis(t))
    maxes = [t.fan[m].rayset for m in t.maximal()]
    out = {}
    for m in t.ids:
        p = d - t.fan[m].dim
        out[m] = (sum(1 for s in maxes if t.fan[m].rayset <= s), p + 1)
    return out


def sample_openness(t: ConeSubset, samples: int = 1000, seed: int = 0, step: Fraction = Fraction(1, 997)) -> list:
    """Randomized exact cross-check of openness.

    Draws a point ``x`` in the relative interior of a random member and a random
    rational direction ``v`` of the span, and checks that ``x + step * v`` is
    still in D.  Returns the list of violating ``(x, v)`` pairs.
    """
    rng = random.Random(seed)
    f = t.fan
    basis = span_basis(t)
    members = t.ids
    bad = []
    for _ in range(samples):
        m = f[rng.choice(members)]
        lam = [rng.randint(1, 5) for _ in m.rays]
        x = [sum(l * r[i] for l, r in zip(lam, m.rays)) for i in range(f.rank)]
        coef = [rng.randint(-5, 5) for _ in basis]
        v = [sum(c * b[i] for c, b in zip(coef, basis)) for i in range(f.rank)]
        y = [Fraction(xi) + step * vi for xi, vi in zip(x, v)]
        if not any(in_relative_interior(y, f[c].rays) for c in members):
            bad.append((x, v))
    return bad


def orientation_sign(rays: Sequence[Ray], basis: Sequence[Ray]) -> int:
    """Sign of the ordered rays as an oriented basis of span(basis)."""
    from .linalg import determinant

    coords = [coordinates(r, basis) for r in rays]
    det = determinant(coords)
    if det == 0:
        raise FanError("DEGENERATE", "rays do not span the given space")
    return 1 if det > 0 else -1
