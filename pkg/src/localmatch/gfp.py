"""Row-vector linear algebra over the prime field GF(p).

Vectors are tuples of ints in ``range(p)``.  A subspace is stored as the
nonzero rows of its reduced row echelon form, pivots strictly increasing,
each pivot equal to 1.  That form is canonical: equal subspaces give equal
tuples.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

Vec = tuple[int, ...]
Rows = tuple[Vec, ...]


def rref(rows: Iterable[Sequence[int]], p: int) -> Rows:
    work = [[x % p for x in r] for r in rows]
    if not work:
        return ()
    ncols = len(work[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][col], -1, p)
        if inv != 1:
            work[r] = [x * inv % p for x in work[r]]
        pr = work[r]
        for i in range(len(work)):
            f = work[i][col]
            if i != r and f:
                work[i] = [(x - f * y) % p for x, y in zip(work[i], pr)]
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r])


def pivots(basis: Rows) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in basis]


def reduce(vec: Sequence[int], basis: Rows, p: int) -> Vec:
    """Residual of ``vec`` after clearing the pivot columns of ``basis``.

    The residual is zero iff ``vec`` lies in the span.  The map is linear.
    """
    v = [x % p for x in vec]
    for row, col in zip(basis, pivots(basis)):
        f = v[col]
        if f:
            v = [(x - f * y) % p for x, y in zip(v, row)]
    return tuple(v)


def in_span(vec: Sequence[int], basis: Rows, p: int) -> bool:
    return not any(reduce(vec, basis, p))


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(rref(rows, p))


def coords(vec: Sequence[int], basis: Rows) -> Vec:
    """Coordinates of a member ``vec`` with respect to an RREF ``basis``.

    In RREF the coefficient of row j is the entry of ``vec`` at pivot j.
    """
    return tuple(vec[c] for c in pivots(basis))


def combine(coeffs: Sequence[int], basis: Sequence[Sequence[int]], n: int, p: int) -> Vec:
    out = [0] * n
    for c, row in zip(coeffs, basis):
        if c:
            for j, x in enumerate(row):
                out[j] = (out[j] + c * x) % p
    return tuple(out)


def transpose(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    return [[row[j] for row in rows] for j in range(ncols)]


def nullspace(matrix: Sequence[Sequence[int]], ncols: int, p: int) -> Rows:
    """RREF basis of ``{x : M x = 0}`` for ``M`` given by rows of length ``ncols``."""
    red = rref(matrix, p)
    piv = pivots(red)
    free = [j for j in range(ncols) if j not in piv]
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, c in zip(red, piv):
            x[c] = (-row[f]) % p
        out.append(x)
    return rref(out, p)


def left_nullspace(matrix: Sequence[Sequence[int]], nrows: int, ncols: int, p: int) -> Rows:
    """RREF basis of ``{y : y M = 0}`` (row vectors of length ``nrows``)."""
    return nullspace(transpose(matrix, ncols), nrows, p) if nrows else ()


def span_sum(u: Rows, w: Rows, p: int) -> Rows:
    return rref(u + w, p)


def intersect(u: Rows, w: Rows, n: int, p: int) -> Rows:
    """Zassenhaus intersection of two subspaces of GF(p)^n."""
    if not u or not w:
        return ()
    zero = (0,) * n
    stacked = [tuple(r) + tuple(r) for r in u] + [tuple(r) + zero for r in w]
    red = rref(stacked, p)
    return rref([row[n:] for row in red if not any(row[:n])], p)


def is_subspace(u: Rows, w: Rows, p: int) -> bool:
    return all(in_span(r, w, p) for r in u)


def solve_inverse(matrix: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Inverse of a square invertible matrix over GF(p)."""
    m = len(matrix)
    aug = [list(row) + [int(i == j) for j in range(m)] for i, row in enumerate(matrix)]
    red = rref(aug, p)
    if len(red) < m or pivots(red)[m - 1] >= m:
        raise ValueError("matrix is singular")
    return [list(row[m:]) for row in red]


def normalize(vec: Sequence[int], p: int) -> Vec:
    """Scale so the first nonzero coordinate is 1 (projective representative)."""
    for x in vec:
        if x:
            inv = pow(x, -1, p)
            return tuple(y * inv % p for y in vec)
    return tuple(vec)


def all_vectors(basis: Rows, n: int, p: int) -> Iterator[Vec]:
    for cs in product(range(p), repeat=len(basis)):
        yield combine(cs, basis, n, p)


def projective_points(basis: Rows, n: int, p: int) -> list[Vec]:
    """One representative per 1-dimensional subspace, sorted.

    Because ``basis`` is RREF, a combination whose first nonzero coefficient
    is 1 already has first nonzero coordinate 1.
    """
    k = len(basis)
    pts = []
    for lead in range(k):
        for tail in product(range(p), repeat=k - lead - 1):
            cs = (0,) * lead + (1,) + tail
            pts.append(combine(cs, basis, n, p))
    pts.sort()
    return pts


def echelon_forms(n: int, k: int, p: int) -> Iterator[Rows]:
    """Every k-dimensional subspace of GF(p)^n, each exactly once, as RREF."""
    for piv in combinations(range(n), k):
        slots = [(i, j) for i, c in enumerate(piv) for j in range(c + 1, n) if j not in piv]
        for vals in product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(piv):
                rows[i][c] = 1
            for (i, j), v in zip(slots, vals):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


def subspace_count(n: int, k: int, p: int) -> int:
    """Gaussian binomial coefficient [n choose k]_p."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den
