"""GF(p^n) as GF(p)[t]/(modulus) and its GF(p)-subspaces.

Elements are coefficient vectors in the power basis 1, t, ..., t^(n-1).
Subspaces are stored in reduced row echelon form over GF(p), so equal
subspaces compare equal.  Intermediate fields are the fixed spaces of
x -> x^(p^d) for d dividing n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import gfp
from .errors import DomainError, StructuralError
from .gfp import Rows, Vec

# -- polynomials over GF(p), coefficient lists low-to-high ------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        f = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    n = len(modulus) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree n whose integer code sum(c_i p^i) is least."""
    for code in range(p**n):
        low = [(code // p**i) % p for i in range(n)]
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise DomainError(f"no irreducible polynomial of degree {n} over GF({p})")


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# -- field ------------------------------------------------------------------


@dataclass(frozen=True)
class FqElem:
    coeffs: Vec

    def __bool__(self) -> bool:
        return any(self.coeffs)


@dataclass(frozen=True)
class FieldExt:
    """The tower GF(p) ⊆ GF(p^n) with an explicit irreducible modulus (c0..cn)."""

    p: int
    n: int
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if not _is_prime(self.p):
            raise DomainError(f"characteristic {self.p} is not prime")
        if self.n < 1:
            raise DomainError(f"degree must be >= 1, got {self.n}")
        mod = tuple(int(c) % self.p for c in self.modulus) if self.modulus else default_modulus(self.p, self.n)
        if len(mod) != self.n + 1 or mod[-1] != 1:
            raise DomainError(f"modulus must be monic of degree {self.n}, got {mod}")
        if not is_irreducible(mod, self.p):
            raise DomainError(f"modulus {format_poly(mod)} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.n

    def __str__(self) -> str:
        return f"GF({self.p}^{self.n})"

    # vectors and codes

    @property
    def zero(self) -> Vec:
        return (0,) * self.n

    @property
    def one(self) -> Vec:
        return (1,) + (0,) * (self.n - 1)

    @property
    def gen(self) -> Vec:
        """The class of t."""
        if self.n == 1:
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.n - 2)

    def code(self, v: Vec) -> int:
        c = 0
        for x in reversed(v):
            c = c * self.p + x
        return c

    @cached_property
    def _vecs(self) -> tuple[Vec, ...]:
        p, n = self.p, self.n
        return tuple(tuple((c // p**i) % p for i in range(n)) for c in range(self.q))

    def elements(self) -> tuple[Vec, ...]:
        return self._vecs

    @cached_property
    def _log_tables(self) -> tuple[list[int], list[int]]:
        q = self.q
        for cand in self._vecs[1:]:
            exp = [0] * (q - 1)
            cur = self.one
            for k in range(q - 1):
                exp[k] = self.code(cur)
                cur = self._slow_mul(cur, cand)
                if cur == self.one and k < q - 2:
                    break
            else:
                log = [0] * q
                for k, c in enumerate(exp):
                    log[c] = k
                return exp, log
        raise AssertionError("multiplicative group has no generator")

    # arithmetic

    def vec(self, x) -> Vec:
        if isinstance(x, FqElem):
            x = x.coeffs
        elif isinstance(x, int):
            x = (x,) + (0,) * (self.n - 1)
        elif isinstance(x, str):
            x = parse_elem(self, x)
        if len(x) != self.n:
            raise StructuralError(f"{x} has {len(x)} coordinates, {self} needs {self.n}")
        return tuple(c % self.p for c in x)

    def add(self, x: Vec, y: Vec) -> Vec:
        p = self.p
        return tuple((a + b) % p for a, b in zip(x, y))

    def sub(self, x: Vec, y: Vec) -> Vec:
        p = self.p
        return tuple((a - b) % p for a, b in zip(x, y))

    def neg(self, x: Vec) -> Vec:
        return tuple((-a) % self.p for a in x)

    def scale(self, c: int, x: Vec) -> Vec:
        return tuple(c * a % self.p for a in x)

    def _slow_mul(self, x: Vec, y: Vec) -> Vec:
        prod_ = [0] * (2 * self.n - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod_[i + j] += a * b
        r = _poly_mod(prod_, self.modulus, self.p)
        return tuple(r) + (0,) * (self.n - len(r))

    def mul(self, x: Vec, y: Vec) -> Vec:
        cx, cy = self.code(x), self.code(y)
        if not cx or not cy:
            return self.zero
        exp, log = self._log_tables
        return self._vecs[exp[(log[cx] + log[cy]) % (self.q - 1)]]

    def inv(self, x: Vec) -> Vec:
        cx = self.code(x)
        if not cx:
            raise DomainError("0 has no inverse")
        exp, log = self._log_tables
        return self._vecs[exp[(-log[cx]) % (self.q - 1)]]

    def pow(self, x: Vec, e: int) -> Vec:
        cx = self.code(x)
        if not cx:
            if e < 0:
                raise DomainError("0 has no inverse")
            return self.one if e == 0 else self.zero
        exp, log = self._log_tables
        return self._vecs[exp[(log[cx] * e) % (self.q - 1)]]

    def arith(self, x, y, op: str) -> Vec:
        """Dispatch on ``op`` in {'+', '-', '*', 'inverse'}; y is ignored for 'inverse'."""
        x = self.vec(x)
        if op == "inverse":
            r = self.inv(x)
            if self.mul(x, r) != self.one:
                raise RuntimeError("internal error: inverse check failed")
            return r
        y = self.vec(y)
        if op == "+":
            return self.add(x, y)
        if op == "-":
            return self.sub(x, y)
        if op == "*":
            return self.mul(x, y)
        raise ValueError(f"unknown operation {op!r}")

    def frobenius_power(self, x: Vec, d: int) -> Vec:
        """x^(p^d)."""
        return self.pow(x, self.p**d)


# -- subspaces --------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A GF(p)-subspace of the field, stored as its RREF basis."""

    ext: FieldExt
    basis: Rows

    @classmethod
    def span(cls, ext: FieldExt, vectors: Iterable) -> Subspace:
        return cls(ext, gfp.rref([ext.vec(v) for v in vectors], ext.p))

    @classmethod
    def zero(cls, ext: FieldExt) -> Subspace:
        return cls(ext, ())

    @classmethod
    def whole(cls, ext: FieldExt) -> Subspace:
        return cls(ext, tuple(tuple(int(i == j) for j in range(ext.n)) for i in range(ext.n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, x) -> bool:
        return gfp.in_span(self.ext.vec(x), self.basis, self.ext.p)

    def __le__(self, other: Subspace) -> bool:
        _same_ext(self, other)
        return gfp.is_subspace(self.basis, other.basis, self.ext.p)

    def points(self) -> list[Vec]:
        """Projective point representatives (first nonzero coordinate 1), sorted."""
        return gfp.projective_points(self.basis, self.ext.n, self.ext.p)

    def vectors(self) -> Iterator[Vec]:
        return gfp.all_vectors(self.basis, self.ext.n, self.ext.p)

    def coords(self, x) -> Vec:
        """Coordinates of a member with respect to the echelon basis."""
        v = self.ext.vec(x)
        if v not in self:
            raise DomainError(f"{format_elem(self.ext, v)} is not in the subspace")
        return gfp.coords(v, self.basis)

    def combine(self, cs: Sequence[int]) -> Vec:
        return gfp.combine(cs, self.basis, self.ext.n, self.ext.p)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.basis]

    def to_str(self) -> str:
        return "<" + ", ".join(format_elem(self.ext, r) for r in self.basis) + ">"

    __str__ = to_str


def _same_ext(*spaces: Subspace) -> FieldExt:
    ext = spaces[0].ext
    for s in spaces[1:]:
        if s.ext != ext:
            raise StructuralError(f"subspaces of different fields ({ext} vs {s.ext})")
    return ext


def span(ext: FieldExt, vectors: Iterable) -> Subspace:
    return Subspace.span(ext, vectors)


def subspace_sum(v: Subspace, w: Subspace) -> Subspace:
    ext = _same_ext(v, w)
    return Subspace(ext, gfp.span_sum(v.basis, w.basis, ext.p))


def intersect(v: Subspace, w: Subspace) -> Subspace:
    ext = _same_ext(v, w)
    return Subspace(ext, gfp.intersect(v.basis, w.basis, ext.n, ext.p))


def intersect_all(spaces: Sequence[Subspace], ambient: Subspace) -> Subspace:
    out = ambient
    for s in spaces:
        out = intersect(out, s)
    return out


def product_span(v: Subspace, w: Subspace) -> Subspace:
    """<VW>: the span of all products, computed from basis products."""
    ext = _same_ext(v, w)
    return Subspace.span(ext, [ext.mul(x, y) for x in v.basis for y in w.basis])


def scale(a, v: Subspace) -> Subspace:
    ext = v.ext
    a = ext.vec(a)
    return Subspace.span(ext, [ext.mul(a, x) for x in v.basis])


def scale_inv(a, v: Subspace) -> Subspace:
    """a^-1 V."""
    ext = v.ext
    a = ext.vec(a)
    if not any(a):
        raise DomainError("cannot divide a subspace by 0")
    return scale(ext.inv(a), v)


def _frobenius_matrix(ext: FieldExt, d: int) -> list[Vec]:
    basis = Subspace.whole(ext).basis
    return [ext.frobenius_power(e, d) for e in basis]


@lru_cache(maxsize=256)
def subfield(ext: FieldExt, d: int) -> Subspace:
    """GF(p^d) inside GF(p^n): the kernel of x -> x^(p^d) - x."""
    if d < 1 or ext.n % d:
        raise DomainError(f"{d} does not divide {ext.n}")
    n, p = ext.n, ext.p
    m = _frobenius_matrix(ext, d)
    shifted = [[(m[i][j] - (i == j)) % p for j in range(n)] for i in range(n)]
    out = Subspace(ext, gfp.left_nullspace(shifted, n, n, p))
    if out.dim != d or not product_span(out, out) <= out:
        raise RuntimeError(f"internal error: fixed space of Frobenius^{d} is not GF(p^{d})")
    return out


def proper_subfields(ext: FieldExt) -> list[tuple[int, Subspace]]:
    return [(d, subfield(ext, d)) for d in divisors(ext.n) if d < ext.n]


def generated_subfield(ext: FieldExt, b) -> int:
    """Degree of GF(p)(b): least d | n with b^(p^d) = b."""
    b = ext.vec(b)
    for d in divisors(ext.n):
        if ext.frobenius_power(b, d) == b:
            return d
    raise AssertionError("unreachable: b^(p^n) = b for every b")


def stabilizer_subfield(v: Subspace) -> Subspace:
    """Largest intermediate field H with H V = V, found by scanning divisors top-down."""
    if not v.dim:
        raise DomainError("stabilizer of the zero subspace")
    ext = v.ext
    for d in reversed(divisors(ext.n)):
        h = subfield(ext, d)
        if product_span(h, v) <= v:
            return h
    raise AssertionError("unreachable: GF(p) stabilizes every subspace")


@dataclass(frozen=True)
class LinearKneserRecord:
    C: Subspace
    H: Subspace
    lhs: int
    rhs: int
    holds: bool

    def to_json(self) -> dict:
        return {"C": self.C.to_json(), "H": self.H.to_json(), "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def verify_linear_kneser(a: Subspace, b: Subspace) -> LinearKneserRecord:
    if not a.dim or not b.dim:
        raise DomainError("linear Kneser needs nonzero subspaces")
    c = product_span(a, b)
    h = stabilizer_subfield(c)
    lhs, rhs = c.dim, a.dim + b.dim - h.dim
    return LinearKneserRecord(c, h, lhs, rhs, lhs >= rhs)


# -- duals ------------------------------------------------------------------


@dataclass(frozen=True)
class DualFunctional:
    """A functional on a fixed subspace B, as a coordinate vector in B's echelon basis."""

    coords: Vec

    def __call__(self, within: Subspace, x) -> int:
        cs = within.coords(x)
        return sum(a * b for a, b in zip(self.coords, cs)) % within.ext.p


def orthogonal(c: Subspace, within: Subspace) -> list[DualFunctional]:
    """Basis of C^perp inside B^* under the coordinate pairing on B."""
    ext = _same_ext(c, within)
    if not c <= within:
        raise DomainError("C is not contained in B")
    rows = [gfp.coords(v, within.basis) for v in c.basis]
    null = gfp.nullspace(rows, within.dim, ext.p)
    return [DualFunctional(f) for f in null]


def annihilator(functionals: Sequence[DualFunctional], within: Subspace) -> Subspace:
    """{x in B : f(x) = 0 for every f}."""
    ext = within.ext
    if not functionals:
        return within
    null = gfp.nullspace([f.coords for f in functionals], within.dim, ext.p)
    return Subspace.span(ext, [within.combine(x) for x in null]) if null else Subspace.zero(ext)


def complement(sub: Subspace, within: Subspace) -> Subspace:
    """Canonical complement of ``sub`` in ``within``: echelon rows of ``within`` added greedily."""
    ext = _same_ext(sub, within)
    if not sub <= within:
        raise DomainError("complement of a subspace that is not contained in the ambient")
    cur = sub.basis
    chosen = []
    for row in within.basis:
        if not gfp.in_span(row, cur, ext.p):
            chosen.append(row)
            cur = gfp.rref(cur + (row,), ext.p)
    return Subspace.span(ext, chosen)


# -- enumeration ------------------------------------------------------------


def subspaces(ext: FieldExt, k: int) -> Iterator[Subspace]:
    """Every k-dimensional subspace of the field, each once, in echelon-form order."""
    for rows in gfp.echelon_forms(ext.n, k, ext.p):
        yield Subspace(ext, rows)


def subspaces_of(v: Subspace, k: int) -> Iterator[Subspace]:
    """Every k-dimensional subspace of ``v``."""
    for rows in gfp.echelon_forms(v.dim, k, v.ext.p):
        yield Subspace.span(v.ext, [v.combine(r) for r in rows])


def random_subspace(ext: FieldExt, rng, dim: int | None = None, min_dim: int = 1) -> Subspace:
    if dim is None:
        dim = rng.randint(min_dim, ext.n)
    rows: Rows = ()
    while len(rows) < dim:
        v = tuple(rng.randrange(ext.p) for _ in range(ext.n))
        rows = gfp.rref(rows + (v,), ext.p)
    return Subspace(ext, rows)


# -- text formats -----------------------------------------------------------


def format_poly(coeffs: Sequence[int], var: str = "t") -> str:
    terms = []
    for i in reversed(range(len(coeffs))):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


def format_elem(ext: FieldExt, x) -> str:
    return format_poly(ext.vec(x))


_TERM = re.compile(r"(\d*)\*?(t(?:\^(\d+))?)?")


def parse_elem(ext: FieldExt, text: str) -> Vec:
    """Parse ``t^2+t+1`` or ``2t+1`` (coefficients reduced mod p, powers reduced mod the modulus)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError(f"element {text!r}: empty at position 0")
    acc = [0] * max(1, ext.n)
    pos = 0
    sign = 1
    while pos < len(s):
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not m.group(1) and not m.group(2)):
            raise ValueError(f"element {text!r}: unexpected character at position {pos}")
        coef = int(m.group(1)) if m.group(1) else 1
        deg = 0 if not m.group(2) else int(m.group(3) or 1)
        term = ext.pow(ext.gen, deg) if deg else ext.one
        acc = list(ext.add(tuple(acc), ext.scale(sign * coef, term)))
        pos = m.end()
        sign = 1
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"element {text!r}: unexpected character at position {pos}")
    return tuple(acc)


_FIELD_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)\s*$")


def parse_field(text: str, modulus: str | Sequence[int] | None = None) -> FieldExt:
    """``GF(p^n)`` or ``GF(q)`` for a prime power q, with optional ``c0,c1,...,cn`` modulus."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ValueError(f"field {text!r}: expected 'GF(p^n)' at position 0")
    base, exp = int(m.group(1)), m.group(2)
    if exp is not None:
        p, n = base, int(exp)
    else:
        p = next((d for d in range(2, base + 1) if base % d == 0), None)
        n = 0
        rest = base
        while p and rest % p == 0:
            rest //= p
            n += 1
        if p is None or rest != 1:
            raise ValueError(f"field {text!r}: {base} is not a prime power")
    mod: tuple[int, ...] = ()
    if modulus:
        if isinstance(modulus, str):
            try:
                mod = tuple(int(c) for c in modulus.split(","))
            except ValueError:
                raise ValueError(f"modulus {modulus!r}: expected comma-separated integers c0,...,cn") from None
        else:
            mod = tuple(modulus)
    try:
        return FieldExt(p, n, mod)
    except DomainError as e:
        raise ValueError(f"field {text!r}: {e}") from None


def parse_subspace(ext: FieldExt, text: str) -> Subspace:
    """``<1,t>``, ``{t^2+t, t}`` or ``1,t``: the span of the listed elements; empty means {0}."""
    s = text.strip()
    if s[:1] in "<{[" and s[-1:] in ">}]":
        s = s[1:-1]
    s = s.strip()
    if not s:
        return Subspace.zero(ext)
    return Subspace.span(ext, [parse_elem(ext, tok) for tok in s.split(",")])
