"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`; there is
no floating point anywhere.  Matrices are stored sparsely by row because the
differentials built in :mod:`conecell.cellular` are large, very sparse and
have entries in {-1, 0, 1}.
"""

from __future__ import annotations

import heapq

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class LinalgError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True, eq=False)
class IntMatrix:
    """Immutable sparse integer matrix.

    ``rows`` x ``cols`` with entries kept as one ``{col: value}`` dict per row.
    Zero-sized matrices are legal and stand for maps from or to the zero module.
    """

    rows: int
    cols: int
    _data: tuple = field(repr=False, default=())

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LinalgError("SHAPE_MISMATCH", "negative dimension")
        if not self._data:
            object.__setattr__(self, "_data", tuple({} for _ in range(self.rows)))
        elif len(self._data) != self.rows:
            raise LinalgError("SHAPE_MISMATCH", "row count does not match data")

    # construction -----------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = []
        for r in rows:
            if len(r) != cols:
                raise LinalgError("SHAPE_MISMATCH", "ragged rows")
            data.append({j: int(v) for j, v in enumerate(r) if v})
        return cls(len(rows), cols, tuple(data))

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, int]]) -> "IntMatrix":
        """Build from ``(i, j, value)`` triples; repeated positions are summed."""
        data = [dict() for _ in range(rows)]
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise LinalgError("SHAPE_MISMATCH", f"entry ({i}, {j}) outside {rows}x{cols}")
            row = data[i]
            s = row.get(j, 0) + v
            if s:
                row[j] = s
            else:
                row.pop(j, None)
        return cls(rows, cols, tuple(data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple({i: 1} for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        return cls.from_entries(rows, cols, ((i, i, v) for i, v in enumerate(values) if v))

    # access -----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i].get(j, 0)

    def row(self, i: int) -> dict[int, int]:
        return dict(self._data[i])

    def items(self):
        for i, row in enumerate(self._data):
            for j, v in row.items():
                yield i, j, v

    def nnz(self) -> int:
        return sum(len(r) for r in self._data)

    def to_lists(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, j, v in self.items():
            out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return all(not r for r in self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._data)))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols}, {self.to_lists()})"

    # algebra ----------------------------------------------------------------
    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_entries(self.cols, self.rows, ((j, i, v) for i, j, v in self.items()))

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, c: int) -> "IntMatrix":
        if c == 0:
            return IntMatrix.zeros(self.rows, self.cols)
        return IntMatrix(self.rows, self.cols, tuple({j: c * v for j, v in r.items()} for r in self._data))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise LinalgError("SHAPE_MISMATCH", f"cannot add {self.shape} and {other.shape}")
        return IntMatrix.from_entries(self.rows, self.cols, list(self.items()) + list(other.items()))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise LinalgError("SHAPE_MISMATCH", f"cannot multiply {self.shape} by {other.shape}")
        data = []
        odata = other._data
        for r in self._data:
            acc: dict[int, int] = {}
            for k, a in r.items():
                for j, b in odata[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            data.append({j: v for j, v in acc.items() if v})
        return IntMatrix(self.rows, other.cols, tuple(data))

    def kron_identity(self, r: int) -> "IntMatrix":
        """``self (x) I_r`` with block (i, j) equal to ``self[i, j] * I_r``."""
        return IntMatrix.from_entries(
            self.rows * r, self.cols * r,
            ((i * r + a, j * r + a, v) for i, j, v in self.items() for a in range(r)),
        )


def block_matrix(blocks: Sequence[Sequence[IntMatrix]]) -> IntMatrix:
    """Assemble a block matrix; every block row/column must have consistent shape."""
    row_heights = [row[0].rows for row in blocks]
    col_widths = [b.cols for b in blocks[0]] if blocks else []
    entries = []
    r0 = 0
    for bi, row in enumerate(blocks):
        c0 = 0
        for bj, b in enumerate(row):
            if b.rows != row_heights[bi] or b.cols != col_widths[bj]:
                raise LinalgError("SHAPE_MISMATCH", "inconsistent block shapes")
            entries.extend((r0 + i, c0 + j, v) for i, j, v in b.items())
            c0 += b.cols
        r0 += row_heights[bi]
    return IntMatrix.from_entries(sum(row_heights), sum(col_widths), entries)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    d: tuple[int, ...]
    u: IntMatrix
    v: IntMatrix


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    if a < 0:
        a, x, y = -a, -x, -y
    return x, y, a


def snf(m: IntMatrix) -> SNFResult:
    """Smith normal form with transforms: ``u @ m @ v == diag(d)`` (zero padded).

    Pivots are the entry of minimal absolute value, ties broken row-major, which
    makes the output deterministic and keeps entry growth down.
    """
    rows, cols = m.shape
    a = m.to_lists()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, k, c):  # row_i += c * row_k
        ai, ak = a[i], a[k]
        for j in range(cols):
            if ak[j]:
                ai[j] += c * ak[j]
        ui, uk = u[i], u[k]
        for j in range(rows):
            if uk[j]:
                ui[j] += c * uk[j]

    def col_op(j, k, c):  # col_j += c * col_k
        for r in a:
            if r[k]:
                r[j] += c * r[k]
        for r in v:
            if r[k]:
                r[j] += c * r[k]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                # pivot must divide the whole remaining block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % a[t][t]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_op(t, bad, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, rows):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, cols):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            swap_rows(t, best[1])
            swap_cols(t, best[2])
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    d = tuple(a[i][i] for i in range(min(rows, cols)))
    return SNFResult(d, IntMatrix.from_rows(u, rows), IntMatrix.from_rows(v, cols))


def _dense_invariant_factors(a: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of a dense matrix (no transforms kept)."""
    a = [r[:] for r in a if any(r)]
    if not a:
        return []
    rows, cols = len(a), len(a[0])
    out = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[t], a[pi] = a[pi], a[t]
        for r in a:
            r[t], r[pj] = r[pj], r[t]
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    x, y, g = _xgcd(p, a[i][t])
                    if a[i][t] % p == 0:
                        q = a[i][t] // p
                        ri, rt = a[i], a[t]
                        for j in range(t, cols):
                            ri[j] -= q * rt[j]
                    else:
                        pa, pb = p // g, a[i][t] // g
                        rt, ri = a[t], a[i]
                        new_t = [x * rt[j] + y * ri[j] for j in range(cols)]
                        new_i = [-pb * rt[j] + pa * ri[j] for j in range(cols)]
                        a[t], a[i] = new_t, new_i
                        p = a[t][t]
            for j in range(t + 1, cols):
                if a[t][j]:
                    if a[t][j] % p == 0:
                        q = a[t][j] // p
                        for r in a:
                            r[j] -= q * r[t]
                    else:
                        x, y, g = _xgcd(p, a[t][j])
                        pa, pb = p // g, a[t][j] // g
                        for r in a:
                            ct, cj = r[t], r[j]
                            r[t], r[j] = x * ct + y * cj, -pb * ct + pa * cj
                        p = a[t][t]
            if all(a[i][t] == 0 for i in range(t + 1, rows)) and \
                    all(a[t][j] == 0 for j in range(t + 1, cols)):
                break
        out.append(abs(a[t][t]))
        t += 1
    # diagonal is not yet in divisibility order; fix with gcd/lcm passes
    out = [x for x in out if x]
    changed = True
    while changed:
        changed = False
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                g = gcd(out[i], out[j])
                if g != out[i]:
                    out[i], out[j] = g, out[i] * out[j] // g
                    changed = True
    return sorted(out)


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero invariant factors of ``m`` in divisibility order.

    Unit pivots are eliminated on the sparse representation first (choosing the
    pivot with the sparsest row and column); the small remainder, if any, goes
    through a dense Smith reduction.
    """
    rows = {i: dict(r) for i, r in enumerate(m._data) if r}
    colidx: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            colidx.setdefault(j, set()).add(i)
    heap = []
    for i, r in rows.items():
        for j, x in r.items():
            if x == 1 or x == -1:
                heap.append(((len(r) - 1) * (len(colidx[j]) - 1), i, j))
    heapq.heapify(heap)
    units = 0
    while heap:
        cost, pi, pj = heapq.heappop(heap)
        prow = rows.get(pi)
        if prow is None or prow.get(pj) not in (1, -1):
            continue
        now = (len(prow) - 1) * (len(colidx[pj]) - 1)
        if now > cost:
            heapq.heappush(heap, (now, pi, pj))
            continue
        del rows[pi]
        pv = prow[pj]
        for j in prow:
            colidx[j].discard(pi)
        for i in list(colidx[pj]):
            r = rows[i]
            f = r[pj] * pv  # pv is a unit so r -= f * prow clears column pj
            for j, x in prow.items():
                nv = r.get(j, 0) - f * x
                if nv:
                    if j not in r:
                        colidx[j].add(i)
                    r[j] = nv
                    if (nv == 1 or nv == -1) and j != pj:
                        heapq.heappush(heap, ((len(r) - 1) * (len(colidx[j]) - 1), i, j))
                else:
                    if j in r:
                        del r[j]
                        colidx[j].discard(i)
            if not r:
                del rows[i]
        del colidx[pj]
        units += 1
    rest = []
    if rows:
        cols = sorted({j for r in rows.values() for j in r})
        pos = {j: k for k, j in enumerate(cols)}
        for r in rows.values():
            dense = [0] * len(cols)
            for j, x in r.items():
                dense[pos[j]] = x
            rest.append(dense)
    return [1] * units + _dense_invariant_factors(rest)


def rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))


def homology_step(d_in: IntMatrix, d_out: IntMatrix, check: bool = True) -> tuple[int, list[int]]:
    """Free rank and torsion of ``ker(d_out) / im(d_in)`` at the middle module.

    ``d_in`` maps into the middle module (shape middle x previous), ``d_out``
    maps out of it (shape next x middle).
    """
    if d_out.cols != d_in.rows:
        raise LinalgError("SHAPE_MISMATCH", f"d_out has {d_out.cols} columns but d_in has {d_in.rows} rows")
    if check and not (d_out @ d_in).is_zero():
        raise LinalgError("COMPOSITION_NONZERO", "d_out @ d_in is not zero")
    n = d_in.rows
    f_in = invariant_factors(d_in)
    r_out = rank(d_out)
    return n - r_out - len(f_in), [x for x in f_in if x > 1]


# ---------------------------------------------------------------------------
# lattice helpers


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise LinalgError("ZERO_VECTOR", "zero vector has no primitive form")
    return tuple(x // g for x in v)


def is_basis_extendable(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the vectors are independent and span a saturated sublattice."""
    if not vectors:
        return True
    m = IntMatrix.from_rows(vectors)
    f = invariant_factors(m)
    return len(f) == len(vectors) and all(x == 1 for x in f)


def saturated_span_basis(vectors: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """A Z-basis of ``span_Q(vectors) ∩ Z^n``; it is part of a basis of Z^n."""
    if not vectors:
        return []
    m = IntMatrix.from_rows(vectors, n)
    res = snf(m)
    r = sum(1 for x in res.d if x)
    if r == n:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    vinv = unimodular_inverse(res.v)
    return [tuple(vinv.to_lists()[i]) for i in range(r)]


def determinant(a: Sequence[Sequence]) -> Fraction:
    """Exact determinant by Gaussian elimination over Q."""
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve ``a x = b`` exactly; returns the unique solution or None.

    ``a`` is m x k with independent columns (m >= k).  Returns None when the
    system is inconsistent.
    """
    m = len(a)
    k = len(a[0]) if m else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            raise LinalgError("DEPENDENT", "columns are linearly dependent")
        aug[r], aug[p] = aug[p], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, m)):
        return None
    return [aug[i][k] for i in range(k)]


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    n = u.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(u.to_lists())]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c] != 0)
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = []
    for row in a:
        vals = row[n:]
        if any(x.denominator != 1 for x in vals):
            raise LinalgError("NOT_UNIMODULAR", "matrix is not invertible over Z")
        out.append([int(x) for x in vals])
    return IntMatrix.from_rows(out, n)


# ---------------------------------------------------------------------------
# exact LP by Fourier-Motzkin


def _normalize_ineq(coeffs: list[Fraction], rhs: Fraction) -> tuple:
    """Scale ``coeffs . x <= rhs`` so the first nonzero |coefficient| is 1."""
    for c in coeffs:
        if c != 0:
            s = abs(c)
            return tuple(x / s for x in coeffs), rhs / s
    return tuple(coeffs), rhs


def fm_feasible(a_eq: Sequence[Sequence], b_eq: Sequence, a_ub: Sequence[Sequence], b_ub: Sequence,
                nvars: int) -> bool:
    """Is ``{x : a_eq x = b_eq, a_ub x <= b_ub}`` nonempty over Q?

    Equalities are eliminated by substitution, then the remaining variables by
    Fourier-Motzkin with duplicate/dominated row pruning.
    """
    eqs = [([Fraction(x) for x in row], Fraction(b)) for row, b in zip(a_eq, b_eq)]
    ineqs = [([Fraction(x) for x in row], Fraction(b)) for row, b in zip(a_ub, b_ub)]
    # substitute equalities
    while eqs:
        row, b = eqs.pop()
        piv = next((j for j in range(nvars) if row[j] != 0), None)
        if piv is None:
            if b != 0:
                return False
            continue
        pv = row[piv]

        def sub(r, rb):
            f = r[piv] / pv
            if f == 0:
                return r, rb
            return [x - f * y for x, y in zip(r, row)], rb - f * b

        eqs = [sub(r, rb) for r, rb in eqs]
        ineqs = [sub(r, rb) for r, rb in ineqs]
    for var in range(nvars):
        pos, neg, keep = [], [], []
        for r, b in ineqs:
            if r[var] > 0:
                pos.append((r, b))
            elif r[var] < 0:
                neg.append((r, b))
            else:
                keep.append((r, b))
        for rp, bp in pos:
            for rn, bn in neg:
                cp, cn = rp[var], -rn[var]
                keep.append(([cn * x + cp * y for x, y in zip(rp, rn)], cn * bp + cp * bn))
        # prune: drop trivially true rows and keep the tightest of parallel rows
        best: dict[tuple, Fraction] = {}
        for r, b in keep:
            nr, nb = _normalize_ineq(r, b)
            if all(x == 0 for x in nr):
                if nb < 0:
                    return False
                continue
            if nr not in best or nb < best[nr]:
                best[nr] = nb
        ineqs = [(list(r), b) for r, b in best.items()]
    return all(b >= 0 for _, b in ineqs)


def cone_overlap_is_face(rays_a, rays_b, rays_common) -> bool:
    """Check ``cone(rays_a) ∩ cone(rays_b) == cone(rays_common)`` exactly.

    Rays of each cone are linearly independent, so a point of cone(a) lies in
    cone(common) iff its coefficients on ``rays_a - rays_common`` vanish.  For
    each such ray we ask whether some point of the intersection uses it.
    """
    rays_a = [tuple(r) for r in rays_a]
    rays_b = [tuple(r) for r in rays_b]
    common = {tuple(r) for r in rays_common}
    if not rays_a or not rays_b:
        return True
    n = len(rays_a[0])
    ka, kb = len(rays_a), len(rays_b)
    nv = ka + kb
    # sum_a lam_a a - sum_b mu_b b = 0 ; lam, mu >= 0
    a_eq = [[rays_a[i][c] for i in range(ka)] + [-rays_b[i][c] for i in range(kb)] for c in range(n)]
    a_ub = [[-int(j == v) for j in range(nv)] for v in range(nv)]
    b_ub = [0] * nv
    for idx, r in enumerate(rays_a):
        if r in common:
            continue
        row = [int(j == idx) for j in range(nv)]
        if fm_feasible(a_eq + [row], [0] * n + [1], a_ub, b_ub, nv):
            return False
    return True


def in_relative_interior(x: Sequence, rays: Sequence[Sequence[int]]) -> bool:
    """True iff ``x = sum lam_i r_i`` with every ``lam_i > 0``."""
    if not rays:
        return all(Fraction(c) == 0 for c in x)
    a = [[rays[j][i] for j in range(len(rays))] for i in range(len(x))]
    lam = solve_rational(a, x)
    return lam is not None and all(l > 0 for l in lam)


def coordinates(x: Sequence, basis: Sequence[Sequence[int]]) -> list[Fraction] | None:
    """Coordinates of ``x`` in ``basis`` (independent vectors), or None."""
    a = [[basis[j][i] for j in range(len(basis))] for i in range(len(x))]
    return solve_rational(a, x)


def perm_sign(seq: Sequence) -> int:
    """Signature of the permutation that sorts ``seq`` (elements distinct)."""
    s = list(seq)
    sign = 1
    seen = [False] * len(s)
    order = sorted(range(len(s)), key=lambda i: s[i])
    for i in range(len(s)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign
