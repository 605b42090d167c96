"""Independent reference computations used only by the tests.

Nothing here calls the Smith normal form code under test.
"""

from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt

from conecell.linalg import IntMatrix


def field_rank(rows, p=None):
    """Rank over Q (p=None) or over F_p by plain Gaussian elimination."""
    if p is None:
        m = [[Fraction(x) for x in r] for r in rows]
    else:
        m = [[x % p for x in r] for r in rows]
    if not m or not m[0]:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        if p is None:
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
        else:
            inv = pow(m[r][c], -1, p)
            m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) if p is None else (x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def field_nullspace(rows, ncols, p=None):
    """Basis (list of vectors) of the kernel over Q or F_p."""
    if p is None:
        m = [[Fraction(x) for x in r] for r in rows]
    else:
        m = [[x % p for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if p is None else pow(m[r][c], -1, p)
        m[r] = [x * inv if p is None else x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) if p is None else (x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc] if p is None else (-m[i][fc]) % p
        basis.append(v)
    return basis


def matvec_cols(m: IntMatrix, vecs, p=None):
    out = []
    for v in vecs:
        w = [sum(m[i, j] * v[j] for j in range(m.cols)) for i in range(m.rows)]
        out.append([x % p for x in w] if p is not None else w)
    return out


def primes_upto(n):
    sieve = [True] * (n + 1)
    out = []
    for i in range(2, n + 1):
        if sieve[i]:
            out.append(i)
            for j in range(i * i, n + 1, i):
                sieve[j] = False
    return out


def hadamard_bound(m: IntMatrix) -> int:
    b = 1
    for j in range(m.cols):
        s = sum(m[i, j] ** 2 for i in range(m.rows))
        if s:
            b *= isqrt(s) + 1
    return b


def induced_iso_over_field(f, p=None) -> bool:
    """Does the chain map induce an isomorphism on homology over Q / F_p?"""
    src, tgt = f.source, f.target
    for q in f.degrees():
        ns, nt = src.rank(q), tgt.rank(q)
        zs = field_nullspace(src.d(q).to_lists(), ns, p) if ns else []
        bs_rank = field_rank(src.d(q - 1).transpose().to_lists(), p) if src.d(q - 1).cols else 0
        zt = field_nullspace(tgt.d(q).to_lists(), nt, p) if nt else []
        bt = tgt.d(q - 1).transpose().to_lists() if tgt.d(q - 1).cols else []
        hs = len(zs) - bs_rank
        ht = len(zt) - field_rank(bt, p)
        if hs != ht:
            return False
        if hs == 0:
            continue
        fz = [[x for x in col] for col in matvec_cols(f.f(q), zs, p)]
        combined = fz + [list(r) for r in bt]
        if field_rank(combined, p) - field_rank(bt, p) != hs:
            return False
    return True


def induced_iso_over_z(f) -> bool:
    """Quasi-isomorphism over Z via Q and every prime up to the Hadamard bound
    of the mapping-cone differentials (any torsion prime divides a minor)."""
    bound = 2
    for q in f.degrees():
        for m in (f.source.d(q), f.target.d(q), f.f(q)):
            bound = max(bound, hadamard_bound(m))
    # cone differentials are block matrices of these; bound their minors too
    total = 1
    for q in f.degrees():
        for m in (f.source.d(q), f.target.d(q), f.f(q)):
            total *= max(1, hadamard_bound(m))
    limit = min(total, 5000)
    if not induced_iso_over_field(f, None):
        return False
    return all(induced_iso_over_field(f, p) for p in primes_upto(limit))


def determinant_divisors(rows):
    """Invariant factors from gcds of k x k minors (brute force)."""
    if not rows or not rows[0]:
        return []
    m, n = len(rows), len(rows[0])
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                g = gcd(g, int(_det([[rows[i][j] for j in cs] for i in rs])))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _det(a):
    n = len(a)
    if n == 1:
        return a[0][0]
    return sum((-1) ** j * a[0][j] * _det([r[:j] + r[j + 1:] for r in a[1:]]) for j in range(n))
