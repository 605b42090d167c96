"""Bounded complexes of finitely generated free abelian groups.

Storage is cohomological: the differential at degree ``q`` maps degree ``q``
to ``q + 1`` and is a ``rank(q+1) x rank(q)`` matrix acting on column vectors.
A homologically indexed ``C_p`` lives in cohomological degree ``-p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .linalg import IntMatrix, block_matrix, homology_step, invariant_factors


class ComplexError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class GradedGroup:
    """Degree -> (free rank, torsion invariants); zero groups are omitted."""

    groups: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for q, (r, tors) in self.groups.items():
            tors = tuple(int(x) for x in tors if x > 1)
            if r or tors:
                clean[int(q)] = (int(r), tors)
        object.__setattr__(self, "groups", dict(sorted(clean.items())))

    def at(self, q: int) -> tuple[int, tuple[int, ...]]:
        return self.groups.get(q, (0, ()))

    def is_zero(self) -> bool:
        return not self.groups

    def shifted(self, k: int) -> "GradedGroup":
        """Move the group at degree q to q - k (same convention as :func:`shift`)."""
        return GradedGroup({q - k: g for q, g in self.groups.items()})

    def ranks(self) -> dict[int, int]:
        return {q: r for q, (r, _) in self.groups.items() if r}

    def to_json(self) -> dict:
        return {str(q): {"rank": r, "torsion": list(t)} for q, (r, t) in self.groups.items()}

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedGroup":
        return cls({int(q): (v["rank"], tuple(v.get("torsion", ()))) for q, v in data.items()})

    def describe(self) -> dict[str, str]:
        return {str(q): group_name(r, t) for q, (r, t) in self.groups.items()}


def group_name(rank: int, torsion: Sequence[int]) -> str:
    parts = []
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append(f"Z^{rank}")
    parts.extend(f"Z/{t}" for t in torsion)
    return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AbGroupCoeff:
    """Coefficient group Z^rank + sum Z/t."""

    rank: int
    torsion: tuple[int, ...] = ()


class ChainComplex:
    """A bounded cochain complex of free abelian groups.

    ``ranks`` maps degree to rank; ``differentials`` maps ``q`` to the matrix
    of ``d^q``.  Missing differentials are zero.  ``labels`` optionally names
    the basis elements of each degree.
    """

    def __init__(self, ranks: Mapping[int, int], differentials: Mapping[int, IntMatrix] | None = None,
                 labels: Mapping[int, Sequence] | None = None):
        self.ranks = {int(q): int(r) for q, r in sorted(ranks.items()) if r}
        self.labels = {int(q): tuple(l) for q, l in (labels or {}).items() if self.ranks.get(int(q))}
        self.differentials: dict[int, IntMatrix] = {}
        for q, m in sorted((differentials or {}).items()):
            if not m.is_zero() or (m.rows and m.cols):
                self.differentials[int(q)] = m

    def rank(self, q: int) -> int:
        return self.ranks.get(q, 0)

    def d(self, q: int) -> IntMatrix:
        m = self.differentials.get(q)
        if m is None:
            return IntMatrix.zeros(self.rank(q + 1), self.rank(q))
        return m

    def degrees(self) -> list[int]:
        return sorted(self.ranks)

    def span(self) -> tuple[int, int] | None:
        if not self.ranks:
            return None
        return min(self.ranks), max(self.ranks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self.ranks != other.ranks:
            return False
        qs = set(self.differentials) | set(other.differentials)
        return all(self.d(q) == other.d(q) for q in qs)

    def __repr__(self):
        return f"ChainComplex(ranks={self.ranks})"

    def to_json(self) -> dict:
        return {
            "degrees": {str(q): r for q, r in self.ranks.items()},
            "differentials": {str(q): m.to_lists() for q, m in self.differentials.items() if not m.is_zero()},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ChainComplex":
        ranks = {int(q): int(r) for q, r in data.get("degrees", {}).items()}
        diffs = {}
        for q, rows in data.get("differentials", {}).items():
            q = int(q)
            diffs[q] = IntMatrix.from_rows(rows, ranks.get(q, 0)) if rows else \
                IntMatrix.zeros(ranks.get(q + 1, 0), ranks.get(q, 0))
        return cls(ranks, diffs)


def validate(c: ChainComplex, raise_on_error: bool = False) -> bool:
    """Shapes match adjacent ranks and ``d^{q+1} d^q = 0`` for all q."""
    try:
        for q, m in c.differentials.items():
            if m.shape != (c.rank(q + 1), c.rank(q)):
                raise ComplexError("SHAPE_MISMATCH", f"d^{q} has shape {m.shape}, expected "
                                   f"{(c.rank(q + 1), c.rank(q))}")
        for q in c.differentials:
            if q + 1 in c.differentials and not (c.d(q + 1) @ c.d(q)).is_zero():
                raise ComplexError("COMPOSITION_NONZERO", f"d^{q + 1} d^{q} != 0")
    except ComplexError:
        if raise_on_error:
            raise
        return False
    return True


def homology(c: ChainComplex) -> GradedGroup:
    validate(c, raise_on_error=True)
    out = {}
    for q in c.degrees():
        r, tors = homology_step(c.d(q - 1), c.d(q), check=False)
        out[q] = (r, tuple(tors))
    return GradedGroup(out)


def is_acyclic(c: ChainComplex, check: bool = True) -> bool:
    """Exactness over Z: ranks add up and every image is saturated."""
    if check:
        validate(c, raise_on_error=True)
    facts = {q: invariant_factors(m) for q, m in c.differentials.items()}
    for q in c.degrees():
        f_in = facts.get(q - 1, [])
        r_out = len(facts.get(q, []))
        if c.rank(q) - r_out - len(f_in) != 0 or any(x > 1 for x in f_in):
            return False
    return True


class ChainMap:
    """Degreewise integer matrices ``f^q : source^q -> target^q``."""

    def __init__(self, source: ChainComplex, target: ChainComplex, components: Mapping[int, IntMatrix]):
        self.source = source
        self.target = target
        self.components = {int(q): m for q, m in components.items()}

    def f(self, q: int) -> IntMatrix:
        m = self.components.get(q)
        if m is None:
            return IntMatrix.zeros(self.target.rank(q), self.source.rank(q))
        return m

    def degrees(self) -> list[int]:
        return sorted(set(self.source.ranks) | set(self.target.ranks))

    def is_valid(self) -> bool:
        for q, m in self.components.items():
            if m.shape != (self.target.rank(q), self.source.rank(q)):
                return False
        for q in self.degrees():
            lhs = self.target.d(q) @ self.f(q)
            rhs = self.f(q + 1) @ self.source.d(q)
            if lhs != rhs:
                return False
        return True

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        qs = set(self.components) | set(other.components)
        return ChainMap(other.source, self.target, {q: self.f(q) @ other.f(q) for q in qs})


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {q: IntMatrix.identity(r) for q, r in c.ranks.items()})


def mapping_cone(f: ChainMap, check: bool = True) -> ChainComplex:
    """Cone(f)^q = source^{q+1} + target^q with d = [[-d_s, 0], [f, d_t]]."""
    if check and not f.is_valid():
        raise ComplexError("INVALID_CHAIN_MAP", "map does not commute with the differentials")
    s, t = f.source, f.target
    qs = sorted({q - 1 for q in s.ranks} | set(t.ranks))
    ranks = {q: s.rank(q + 1) + t.rank(q) for q in qs}
    diffs = {}
    for q in qs:
        if not ranks.get(q + 1):
            continue
        diffs[q] = block_matrix([
            [-s.d(q + 1), IntMatrix.zeros(s.rank(q + 2), t.rank(q))],
            [f.f(q + 1), t.d(q)],
        ])
    return ChainComplex(ranks, diffs)


def is_quasi_iso(f: ChainMap) -> bool:
    """Acyclicity of the mapping cone.

    The cone squares to zero exactly when source and target do and ``f``
    commutes with the differentials, so one validation covers all three.
    """
    for q, m in f.components.items():
        if m.shape != (f.target.rank(q), f.source.rank(q)):
            raise ComplexError("INVALID_CHAIN_MAP", f"component {q} has shape {m.shape}")
    cone = mapping_cone(f, check=False)
    if not validate(cone):
        raise ComplexError("INVALID_CHAIN_MAP", "map does not commute with the differentials")
    return is_acyclic(cone, check=False)


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """``c[k]``: degree q moves to q - k, differentials pick up ``(-1)^k``."""
    sign = -1 if k % 2 else 1
    return ChainComplex(
        {q - k: r for q, r in c.ranks.items()},
        {q - k: m.scale(sign) for q, m in c.differentials.items()},
        {q - k: l for q, l in c.labels.items()},
    )


def dual_hom(c: ChainComplex, a: AbGroupCoeff) -> ChainComplex:
    """``Hom(c, A)``: degree q is ``Hom(c^{-q}, A)``.

    The differential at q is ``(-1)^(q+1)`` times the transpose of ``d^{-q-1}``,
    tensored with the identity of A.
    """
    if a.torsion:
        raise ComplexError("TORSION_COEFF_UNSUPPORTED", "only free coefficient groups are supported")
    r = a.rank
    ranks = {-q: n * r for q, n in c.ranks.items()}
    diffs = {}
    for q0, m in c.differentials.items():
        q = -q0 - 1  # d^{q0}: c^{q0} -> c^{q0+1} dualizes to degree -q0-1 -> -q0
        sign = -1 if (q + 1) % 2 else 1
        diffs[q] = m.transpose().kron_identity(r).scale(sign)
    labels = {-q: l for q, l in c.labels.items()} if r == 1 else None
    return ChainComplex(ranks, diffs, labels)


def direct_sum(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    qs = set(a.ranks) | set(b.ranks)
    ranks = {q: a.rank(q) + b.rank(q) for q in qs}
    diffs = {}
    for q in qs:
        diffs[q] = block_matrix([
            [a.d(q), IntMatrix.zeros(a.rank(q + 1), b.rank(q))],
            [IntMatrix.zeros(b.rank(q + 1), a.rank(q)), b.d(q)],
        ])
    return ChainComplex(ranks, diffs)
