"""Finite field towers F_p < F_q < F_{q^d} and exact polynomial arithmetic.

The tower is fixed by two canonical moduli: the lexicographically least monic
irreducible of degree e over F_p, and of degree d over F_q.  Coefficient
vectors are always ordered low degree first, so "lexicographically least"
compares the constant term before the linear term and so on.

Elements of F_{q^d} are stored as flat coordinate tuples over F_p of length
m = e*d, coordinate k = i + e*j holding the coefficient of x^i * y^j where x
generates F_q over F_p and y generates F_{q^d} over F_q.  Multiplication uses
discrete log tables built from a deterministic generator search.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    FieldMismatchError,
    NoRootError,
    NotIrreducibleError,
    NotPrimeError,
    PolyZeroDivisionError,
    SizeLimitError,
    ZeroInverseError,
    ZetaDenominatorError,
)

MAX_Q = 16
MAX_ORDER = 4096


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Index-coefficient polynomial helpers, generic over a small table field.
# Coefficient lists are low degree first and trimmed.


class _PrimeField:
    """F_p with elements as plain ints 0..p-1."""

    def __init__(self, p: int):
        self.p = p
        self.q = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroInverseError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)


def _pm_trim(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _pm_add(F, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = F.add(x, y)
    return _pm_trim(out)


def _pm_sub(F, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = F.sub(x, y)
    return _pm_trim(out)


def _pm_mul(F, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y == 0:
                continue
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _pm_trim(out)


def _pm_divmod(F, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise PolyZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, inv_lead = len(b) - 1, F.inv(b[-1])
    if len(a) - 1 < db:
        return [], _pm_trim(a)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = F.mul(c, inv_lead)
        quot[i - db] = f
        for j, y in enumerate(b):
            a[i - db + j] = F.sub(a[i - db + j], F.mul(f, y))
    return _pm_trim(quot), _pm_trim(a)


def _pm_gcd(F, a: list, b: list) -> list:
    a, b = list(a), list(b)
    while b:
        a, b = b, _pm_divmod(F, a, b)[1]
    if a:
        inv = F.inv(a[-1])
        a = [F.mul(c, inv) for c in a]
    return a


def _pm_mulmod(F, a: list, b: list, mod: list) -> list:
    return _pm_divmod(F, _pm_mul(F, a, b), mod)[1]


def _pm_powmod(F, a: list, n: int, mod: list) -> list:
    result = [1]
    base = _pm_divmod(F, a, mod)[1]
    while n:
        if n & 1:
            result = _pm_mulmod(F, result, base, mod)
        base = _pm_mulmod(F, base, base, mod)
        n >>= 1
    return result


def _pm_is_irreducible(F, f: list) -> bool:
    """Irreducibility over the table field via the Frobenius-gcd criterion."""
    n = len(f) - 1
    if n < 1 or f[-1] == 0:
        return False
    if n == 1:
        return True
    x = [0, 1]
    xq = _pm_powmod(F, x, F.q**n, f)
    if _pm_trim(list(xq)) != x:
        return False
    for r in _prime_factors(n):
        u = _pm_powmod(F, x, F.q ** (n // r), f)
        if len(_pm_gcd(F, _pm_sub(F, u, x), f)) - 1 != 0:
            return False
    return True


def _lex_least_irreducible(F, deg: int) -> list:
    """Lex-least monic irreducible of given degree; low-first coefficient order."""
    for tail in itertools.product(range(F.q), repeat=deg):
        f = list(tail) + [1]
        if _pm_is_irreducible(F, f):
            return f
    raise NotIrreducibleError(f"no irreducible of degree {deg}")


class _Subfield:
    """F_q = F_p[x]/(modulus), elements as indices 0..q-1 (base-p digit = x-coeff)."""

    def __init__(self, p: int, modulus: list[int]):
        self.p = p
        self.e = len(modulus) - 1
        self.q = p**self.e
        self.modulus = tuple(modulus)
        self._mul = [[0] * self.q for _ in range(self.q)]
        self._add = [[0] * self.q for _ in range(self.q)]
        Fp = _PrimeField(p)
        polys = [self._digits(i) for i in range(self.q)]
        for i in range(self.q):
            for j in range(self.q):
                self._add[i][j] = self._undigits(_pm_add(Fp, polys[i], polys[j]))
                self._mul[i][j] = self._undigits(
                    _pm_divmod(Fp, _pm_mul(Fp, polys[i], polys[j]), list(modulus))[1]
                )
        self._inv = [0] * self.q
        for i in range(1, self.q):
            for j in range(1, self.q):
                if self._mul[i][j] == 1:
                    self._inv[i] = j
                    break

    def _digits(self, idx: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(idx % self.p)
            idx //= self.p
        return _pm_trim(out)

    def _undigits(self, cs: list[int]) -> int:
        idx = 0
        for c in reversed(cs):
            idx = idx * self.p + c
        return idx

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self.neg(b)]

    def neg(self, a):
        return self._undigits([(-c) % self.p for c in self._digits(a)])

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroInverseError("inverse of 0 in F_q")
        return self._inv[a]


# ---------------------------------------------------------------------------


class FieldSpec:
    """The tower F_p < F_q < F_{q^d} with canonical moduli and mult tables.

    Built by make_field; instances are cached and shared, so identity
    comparison is safe for context checks.
    """

    def __init__(self, p: int, e: int, d: int):
        if not _is_prime(p):
            raise NotPrimeError(f"p = {p} is not prime")
        if e < 1 or d < 1:
            raise SizeLimitError("e and d must be >= 1")
        q = p**e
        if q > MAX_Q:
            raise SizeLimitError(f"q = {q} exceeds desk limit {MAX_Q}")
        if q**d > MAX_ORDER:
            raise SizeLimitError(f"q^d = {q**d} exceeds desk limit {MAX_ORDER}")
        self.p, self.e, self.d = p, e, d
        self.q = q
        self.order = q**d
        self.m = e * d
        Fp = _PrimeField(p)
        self.modulus_base = tuple(_lex_least_irreducible(Fp, e))
        self.subfield = _Subfield(p, list(self.modulus_base))
        self.modulus_ext = tuple(_lex_least_irreducible(self.subfield, d))
        self._build_tables()
        self.zero = GFElem(self, (0,) * self.m)
        self.one = self.from_subfield(1)

    # -- construction of multiplication structure

    def _coords_to_ypoly(self, coords: Sequence[int]) -> list[int]:
        e = self.e
        out = []
        for j in range(self.d):
            idx = 0
            for i in reversed(range(e)):
                idx = idx * self.p + coords[i + e * j]
            out.append(idx)
        return out

    def _ypoly_to_coords(self, ypoly: Sequence[int]) -> tuple[int, ...]:
        coords = [0] * self.m
        for j, idx in enumerate(ypoly):
            for i in range(self.e):
                coords[i + self.e * j] = idx % self.p
                idx //= self.p
        return tuple(coords)

    def _mul_coords(self, c1, c2) -> tuple[int, ...]:
        F = self.subfield
        a = self._coords_to_ypoly(c1)
        b = self._coords_to_ypoly(c2)
        prod = _pm_mul(F, a, b)
        rem = _pm_divmod(F, prod, list(self.modulus_ext))[1]
        rem = rem + [0] * (self.d - len(rem))
        return self._ypoly_to_coords(rem)

    def _build_tables(self):
        m, p = self.m, self.p
        basis = []
        for k in range(m):
            c = [0] * m
            c[k] = 1
            basis.append(tuple(c))
        T = np.zeros((m, m, m), dtype=np.int8)
        for i in range(m):
            for j in range(m):
                T[i, j, :] = self._mul_coords(basis[i], basis[j])
        self.basis_mul_table = T
        N = self.order - 1
        factors = _prime_factors(N) if N > 1 else []

        def pow_coords(c, n):
            acc = tuple([1 if k == 0 else 0 for k in range(m)])
            b = c
            while n:
                if n & 1:
                    acc = self._mul_coords(acc, b)
                b = self._mul_coords(b, b)
                n >>= 1
            return acc

        gen = None
        one = tuple([1 if k == 0 else 0 for k in range(m)])
        for cand in itertools.product(range(p), repeat=m):
            if all(c == 0 for c in cand):
                continue
            if N == 1:
                gen = cand
                break
            if all(pow_coords(cand, N // r) != one for r in factors):
                gen = cand
                break
        exp = [one]
        cur = one
        for _ in range(N - 1):
            cur = self._mul_coords(cur, gen)
            exp.append(cur)
        self._exp = exp
        self._log = {c: k for k, c in enumerate(exp)}
        self.generator_coords = gen
        F = np.zeros((m, m), dtype=np.int8)
        for i in range(m):
            bi = basis[i]
            k = self._log[bi]
            F[i, :] = self._exp[(k * self.q) % N]
        self.frob_matrix = F

    # -- element constructors

    def elem(self, coords: Sequence[int]) -> "GFElem":
        if len(coords) != self.m:
            raise FieldMismatchError("coordinate length mismatch")
        return GFElem(self, tuple(int(c) % self.p for c in coords))

    def from_index(self, idx: int) -> "GFElem":
        coords = []
        for _ in range(self.m):
            coords.append(idx % self.p)
            idx //= self.p
        return GFElem(self, tuple(coords))

    def from_subfield(self, sub_idx: int) -> "GFElem":
        """Inject an F_q element (by subfield index) into the full field."""
        if not 0 <= sub_idx < self.q:
            raise FieldMismatchError(f"subfield index {sub_idx} out of range")
        coords = [0] * self.m
        for i in range(self.e):
            coords[i] = sub_idx % self.p
            sub_idx //= self.p
        return GFElem(self, tuple(coords))

    def elements(self) -> Iterator["GFElem"]:
        """All field elements in canonical coefficient-lex order."""
        for coords in itertools.product(range(self.p), repeat=self.m):
            yield GFElem(self, coords)

    def subfield_elements(self) -> Iterator["GFElem"]:
        for i in range(self.q):
            yield self.from_subfield(i)

    def poly(self, coeffs: Sequence, var: str = "theta") -> "GFPoly":
        out = []
        for c in coeffs:
            if isinstance(c, GFElem):
                if c.field is not self:
                    raise FieldMismatchError("coefficient from another tower")
                out.append(c)
            else:
                out.append(self.from_subfield(int(c)))
        return GFPoly(self, tuple(out), var)

    def scalar_matrix(self, elem: "GFElem") -> np.ndarray:
        """m x m int64 matrix of left-multiplication by elem on coordinates."""
        v = np.array(elem.coords, dtype=np.int64)
        return np.tensordot(self.basis_mul_table.astype(np.int64), v, axes=([1], [0])) % self.p

    def __repr__(self):
        return f"FieldSpec(p={self.p}, e={self.e}, d={self.d})"


class GFElem:
    """Element of the F_{q^d} tower as a flat F_p coordinate tuple."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldSpec, coords: tuple[int, ...]):
        self.field = field
        self.coords = coords

    def _check(self, other: "GFElem"):
        if self.field is not other.field:
            raise FieldMismatchError("elements from different towers")

    @property
    def index(self) -> int:
        idx = 0
        for c in reversed(self.coords):
            idx = idx * self.field.p + c
        return idx

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other):
        self._check(other)
        p = self.field.p
        return GFElem(self.field, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        p = self.field.p
        return GFElem(self.field, tuple((-a) % p for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        f = self.field
        if self.is_zero() or other.is_zero():
            return f.zero
        k = (f._log[self.coords] + f._log[other.coords]) % (f.order - 1)
        return GFElem(f, f._exp[k])

    def inv(self) -> "GFElem":
        f = self.field
        if self.is_zero():
            raise ZeroInverseError("inverse of zero field element")
        k = (-f._log[self.coords]) % (f.order - 1)
        return GFElem(f, f._exp[k])

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n: int):
        f = self.field
        if self.is_zero():
            if n == 0:
                return f.one
            if n < 0:
                raise ZeroInverseError("negative power of zero")
            return f.zero
        k = (f._log[self.coords] * n) % (f.order - 1)
        return GFElem(f, f._exp[k])

    def frobenius(self, k: int = 1) -> "GFElem":
        """x -> x^(q^k)."""
        return self ** (self.field.q**k) if not self.is_zero() else self

    def in_subfield(self) -> bool:
        """True iff the element lies in F_q (fixed by the q-power map)."""
        return self.frobenius() == self

    @property
    def subfield_index(self) -> int:
        if not self.in_subfield():
            raise FieldMismatchError("element not in F_q")
        if any(self.coords[self.field.e :]):
            # F_q is exactly the x-block by construction; see invariant tests
            raise FieldMismatchError("subfield element with nonzero y-part")
        idx = 0
        for c in reversed(self.coords[: self.field.e]):
            idx = idx * self.field.p + c
        return idx

    def __eq__(self, other):
        return (
            isinstance(other, GFElem)
            and self.field is other.field
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((id(self.field), self.coords))

    def __repr__(self):
        return str(self.index)


class GFPoly:
    """Dense polynomial over a FieldSpec, tagged with its indeterminate name."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: FieldSpec, coeffs: tuple[GFElem, ...], var: str = "theta"):
        while coeffs and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = coeffs
        self.var = var

    def _check(self, other: "GFPoly"):
        if self.field is not other.field:
            raise FieldMismatchError("polynomials over different towers")
        if self.var != other.var:
            raise FieldMismatchError(f"indeterminate mismatch: {self.var} vs {other.var}")

    @property
    def degree(self) -> int:
        """Degree; -1 is the sentinel for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> GFElem:
        if self.is_zero():
            raise PolyZeroDivisionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return not self.is_zero() and self.lead == self.field.one

    def coeff(self, k: int) -> GFElem:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        f = self.field
        return GFPoly(
            f,
            tuple(self.coeff(i) + other.coeff(i) for i in range(n)),
            self.var,
        )

    def __neg__(self):
        return GFPoly(self.field, tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GFElem):
            return self.scale(other)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return GFPoly(self.field, (), self.var)
        f = self.field
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return GFPoly(f, tuple(out), self.var)

    def scale(self, c: GFElem) -> "GFPoly":
        return GFPoly(self.field, tuple(a * c for a in self.coeffs), self.var)

    def __divmod__(self, other: "GFPoly"):
        self._check(other)
        if other.is_zero():
            raise PolyZeroDivisionError("division by zero polynomial")
        f = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = other.lead.inv()
        if self.degree < db:
            return GFPoly(f, (), self.var), self
        quot = [f.zero] * (self.degree - db + 1)
        for i in range(self.degree, db - 1, -1):
            c = rem[i]
            if c.is_zero():
                continue
            fac = c * inv_lead
            quot[i - db] = fac
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - fac * b
        return GFPoly(f, tuple(quot), self.var), GFPoly(f, tuple(rem), self.var)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def gcd(self, other: "GFPoly") -> "GFPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        if not a.is_zero():
            a = a.scale(a.lead.inv())
        return a

    def eval(self, x: GFElem) -> GFElem:
        if x.field is not self.field:
            raise FieldMismatchError("evaluation point from another tower")
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def frobenius_coeffs(self, k: int = 1) -> "GFPoly":
        return GFPoly(self.field, tuple(c.frobenius(k) for c in self.coeffs), self.var)

    def retag(self, var: str) -> "GFPoly":
        return GFPoly(self.field, self.coeffs, var)

    def subfield_coeff_indices(self) -> list[int]:
        """Coefficients as F_q indices; raises if any lies outside F_q."""
        return [c.subfield_index for c in self.coeffs]

    def is_irreducible(self) -> bool:
        """Irreducibility over F_q; requires all coefficients in the subfield."""
        f = self.subfield_coeff_indices()
        return _pm_is_irreducible(self.field.subfield, f)

    def __eq__(self, other):
        return (
            isinstance(other, GFPoly)
            and self.field is other.field
            and self.var == other.var
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((id(self.field), self.var, tuple(c.coords for c in self.coeffs)))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeff(k)
            if c.is_zero():
                continue
            if k == 0:
                parts.append(str(c.index))
            else:
                head = "" if c == self.field.one else f"{c.index}*"
                exp = self.var if k == 1 else f"{self.var}^{k}"
                parts.append(head + exp)
        return " + ".join(parts)


_FIELD_CACHE: dict[tuple[int, int, int], FieldSpec] = {}


def make_field(p: int, e: int, d: int) -> FieldSpec:
    """Build (or fetch) the canonical tower for (p, e, d); deterministic."""
    key = (p, e, d)
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldSpec(p, e, d)
    return _FIELD_CACHE[key]


def roots_in_ext(f: GFPoly, spec: FieldSpec) -> list[GFElem]:
    """All roots in F_{q^d} of a monic irreducible f over F_q.

    Returned in canonical coefficient-lex order; the root count equals deg f
    (roots come in Frobenius orbits) and deg f must divide d.
    """
    if f.field is not spec:
        raise FieldMismatchError("polynomial not over the given tower")
    if not f.is_monic():
        raise NotIrreducibleError("modulus must be monic")
    if not f.is_irreducible():
        raise NotIrreducibleError(f"{f!r} is reducible over F_q")
    if spec.d % f.degree != 0:
        raise NoRootError(f"degree {f.degree} does not divide d = {spec.d}")
    roots = [x for x in spec.elements() if f.eval(x).is_zero()]
    if len(roots) != f.degree:
        raise NoRootError("root count mismatch")
    return roots


def enumerate_A(spec: FieldSpec, j: int, monic: bool = False, var: str = "theta") -> list[GFPoly]:
    """Polynomials over F_q: all of degree < j, or all monic of degree exactly j.

    Order is by integer index base q with the constant coefficient as the
    least significant digit.
    """
    if j < 0 or j > 8 or spec.q**j > 65536:
        raise SizeLimitError(f"enumeration of size q^{j} refused")
    out = []
    for n in range(spec.q**j):
        digits = []
        t = n
        for _ in range(j):
            digits.append(spec.from_subfield(t % spec.q))
            t //= spec.q
        if monic:
            digits.append(spec.one)
        out.append(GFPoly(spec, tuple(digits), var))
    return out


class RatFunc:
    """Rational function num/den over a FieldSpec, canonically reduced.

    den is monic and gcd(num, den) = 1; zero is 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: GFPoly, den: GFPoly):
        num._check(den)
        if den.is_zero():
            raise PolyZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = GFPoly(num.field, (num.field.one,), num.var)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num // g
                den = den // g
            lead_inv = den.lead.inv()
            num = num.scale(lead_inv)
            den = den.scale(lead_inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: GFPoly) -> "RatFunc":
        return cls(p, GFPoly(p.field, (p.field.one,), p.var))

    @property
    def field(self):
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other: "RatFunc"):
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, GFElem):
            return RatFunc(self.num.scale(other), self.den)
        return RatFunc(self.num * other.num, self.den * other.den)

    def inv(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroInverseError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inv()

    def eval(self, x: GFElem) -> GFElem:
        dv = self.den.eval(x)
        if dv.is_zero():
            raise ZetaDenominatorError("denominator vanishes at evaluation point")
        return self.num.eval(x) * dv.inv()

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc) and self.num == other.num and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_poly():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"
