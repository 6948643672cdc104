"""Laurent series over the ramified degree-(q-1) extension of F_q((1/theta)).

Working uniformizer u satisfies u^-(q-1) = -theta, i.e. u is the inverse of a
(q-1)-st root lambda of -theta.  The absolute value is |x| = q^(-v/(q-1))
where v is the u-valuation, so A-elements embed with exponents that are
non-positive multiples of q-1 and F_q coefficients.

A RamLaurent stores a dense block of F_p coordinate rows (one row per
u-exponent, length m = e*d) together with an absolute precision bound:
x = sum of stored terms + O(u^prec).  Exact elements use the PREC_EXACT
sentinel.  All arithmetic tracks precision pessimistically; the q-power map
has an exact fast path because the coefficient field has characteristic p.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    EmptyPrecisionError,
    FieldMismatchError,
    ShapeMismatchError,
    SizeLimitError,
    ZeroInverseError,
)
from .fields import FieldSpec, GFElem, GFPoly, RatFunc, make_field

PREC_EXACT = 10**9
_MAX_LEN = 2_000_000

NEG_INF = float("-inf")


class Completion:
    """Shared context: field tower, ramification data, caches, default precision.

    wp is the relative precision (number of series terms) used when inverting
    exact elements or summing series without an explicit budget.
    """

    def __init__(self, p: int, e: int, d: int = 1, wp: int = 64):
        self.spec: FieldSpec = make_field(p, e, d)
        self.p = p
        self.q = self.spec.q
        self.d = d
        self.ram = self.q - 1
        if wp < 1:
            raise ConfigError("working precision must be >= 1")
        self.wp = wp
        self.cache: dict = {}
        m = self.spec.m
        self._empty = np.zeros((0, m), dtype=np.int8)

    # -- constructors

    def zero(self, prec: int = PREC_EXACT) -> "RamLaurent":
        return RamLaurent(self, 0, self._empty, prec)

    def one(self) -> "RamLaurent":
        return self.from_field(self.spec.one)

    def from_field(self, c, exponent: int = 0) -> "RamLaurent":
        """Constant (or single term c*u^exponent); c is a GFElem or F_q index."""
        if not isinstance(c, GFElem):
            c = self.spec.from_subfield(int(c))
        if c.field is not self.spec:
            raise FieldMismatchError("coefficient from another tower")
        return RamLaurent(self, exponent, np.array([c.coords], dtype=np.int8))

    def u_pow(self, k: int) -> "RamLaurent":
        return self.from_field(self.spec.one, k)

    def lam(self) -> "RamLaurent":
        """The root lambda with lambda^(q-1) = -theta; equals u^-1."""
        return self.u_pow(-1)

    def theta(self) -> "RamLaurent":
        return self.from_field(-self.spec.one, -self.ram)

    def from_terms(self, terms: Iterable[tuple[int, GFElem]], prec: int = PREC_EXACT) -> "RamLaurent":
        terms = list(terms)
        if not terms:
            return self.zero(prec)
        lo = min(k for k, _ in terms)
        hi = max(k for k, _ in terms)
        out = np.zeros((hi - lo + 1, self.spec.m), dtype=np.int64)
        for k, c in terms:
            if c.field is not self.spec:
                raise FieldMismatchError("coefficient from another tower")
            out[k - lo] += np.array(c.coords, dtype=np.int64)
        return RamLaurent(self, lo, out % self.p, prec)

    def embed_poly(self, a: GFPoly) -> "RamLaurent":
        """Exact embedding of a polynomial in theta: theta^k -> (-1)^k u^(-k(q-1))."""
        if a.field is not self.spec:
            raise FieldMismatchError("polynomial over another tower")
        sign = self.spec.one
        terms = []
        for k, c in enumerate(a.coeffs):
            if not c.is_zero():
                terms.append((-k * self.ram, c * sign))
            sign = -sign
        return self.from_terms(terms)

    def embed_rat(self, f: RatFunc, rel_prec: int | None = None) -> "RamLaurent":
        den = self.embed_poly(f.den)
        return self.embed_poly(f.num) * den.inv(rel_prec)

    # -- imaginary part relative to F_q((1/theta))

    def im_part(self, x: "RamLaurent") -> "RamLaurent":
        """Component of x orthogonal to F_q((1/theta)) inside the ramified field.

        The base completion occupies exactly the u-exponents divisible by q-1
        with coefficients in F_q; everything else is the 'imaginary' part.
        """
        self._assert_mine(x)
        if x.is_zero():
            return x
        out = x.coeffs.astype(np.int8).copy()
        e = self.spec.e
        for r in range(out.shape[0]):
            k = x.offset + r
            if k % self.ram == 0:
                out[r, :e] = 0
        return RamLaurent(self, x.offset, out, x.prec)

    def im_norm_exp(self, x: "RamLaurent"):
        """Exponent b with |x|_im = q^b (Fraction), or -inf when the part vanishes."""
        return self.im_part(x).norm_exp()

    def _assert_mine(self, x: "RamLaurent"):
        if x.ctx is not self:
            raise FieldMismatchError("series from another completion")

    def __repr__(self):
        return f"Completion(q={self.q}, d={self.d}, wp={self.wp})"


def _raw_mul(ctx: Completion, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Coefficient-block product without offsets; A (La,m), B (Lb,m) -> (La+Lb-1,m)."""
    m = ctx.spec.m
    La, Lb = A.shape[0], B.shape[0]
    if La == 0 or Lb == 0:
        return np.zeros((0, m), dtype=np.int8)
    T = ctx.spec.basis_mul_table
    Aw = A.astype(np.int64)
    Bw = B.astype(np.int64)
    out = np.zeros((La + Lb - 1, m), dtype=np.int64)
    for i0 in range(m):
        ca = Aw[:, i0]
        if not ca.any():
            continue
        for j0 in range(m):
            cb = Bw[:, j0]
            if not cb.any():
                continue
            conv = np.convolve(ca, cb)
            row = T[i0, j0]
            for k0 in np.nonzero(row)[0]:
                out[:, k0] += int(row[k0]) * conv
    return (out % ctx.p).astype(np.int8)


class RamLaurent:
    """Dense Laurent series block with absolute precision tracking."""

    __slots__ = ("ctx", "offset", "coeffs", "prec")

    def __init__(self, ctx: Completion, offset: int, coeffs, prec: int = PREC_EXACT):
        m = ctx.spec.m
        arr = np.asarray(coeffs)
        if arr.ndim != 2 or arr.shape[1] != m:
            if arr.size == 0:
                arr = np.zeros((0, m), dtype=np.int8)
            else:
                raise ShapeMismatchError(f"coefficient block must be (L, {m})")
        if arr.dtype != np.int8:
            arr = (arr.astype(np.int64) % ctx.p).astype(np.int8)
        prec = min(int(prec), PREC_EXACT)
        if arr.shape[0] > _MAX_LEN:
            raise SizeLimitError("series block too long")
        if arr.shape[0]:
            keep = prec - offset
            if keep < arr.shape[0]:
                arr = arr[: max(keep, 0)]
        if arr.shape[0]:
            nz = np.nonzero(arr.any(axis=1))[0]
            if nz.size == 0:
                arr = arr[:0]
                offset = 0
            else:
                arr = np.ascontiguousarray(arr[nz[0] : nz[-1] + 1])
                offset += int(nz[0])
        else:
            offset = 0
        self.ctx = ctx
        self.offset = offset
        self.coeffs = arr
        self.prec = prec

    # -- predicates and views

    def is_zero(self) -> bool:
        """No stored terms (possibly only known modulo u^prec)."""
        return self.coeffs.shape[0] == 0

    def is_exact(self) -> bool:
        return self.prec >= PREC_EXACT

    def is_exact_zero(self) -> bool:
        return self.is_zero() and self.is_exact()

    def valuation(self) -> int:
        """u-valuation; for a term-free element this is the precision floor."""
        return self.offset if self.coeffs.shape[0] else self.prec

    def norm_exp(self):
        """Exponent b with |x| = q^b as a Fraction; -inf for the exact zero."""
        if self.is_exact_zero():
            return NEG_INF
        return Fraction(-self.valuation(), self.ctx.ram)

    def coeff_at(self, k: int) -> GFElem:
        if k >= self.prec:
            raise EmptyPrecisionError(f"coefficient u^{k} beyond precision {self.prec}")
        r = k - self.offset
        if 0 <= r < self.coeffs.shape[0]:
            return GFElem(self.ctx.spec, tuple(int(c) for c in self.coeffs[r]))
        return self.ctx.spec.zero

    def to_pairs(self) -> list[tuple[int, GFElem]]:
        spec = self.ctx.spec
        out = []
        for r in range(self.coeffs.shape[0]):
            row = self.coeffs[r]
            if row.any():
                out.append((self.offset + r, GFElem(spec, tuple(int(c) for c in row))))
        return out

    def end(self) -> int:
        return self.offset + self.coeffs.shape[0]

    # -- arithmetic

    def _check(self, other: "RamLaurent"):
        if self.ctx is not other.ctx:
            raise FieldMismatchError("series from different completions")

    def __add__(self, other: "RamLaurent") -> "RamLaurent":
        self._check(other)
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return RamLaurent(self.ctx, other.offset, other.coeffs, prec)
        if other.is_zero():
            return RamLaurent(self.ctx, self.offset, self.coeffs, prec)
        lo = min(self.offset, other.offset)
        hi = max(self.end(), other.end())
        out = np.zeros((hi - lo, self.ctx.spec.m), dtype=np.int64)
        out[self.offset - lo : self.end() - lo] += self.coeffs
        out[other.offset - lo : other.end() - lo] += other.coeffs
        return RamLaurent(self.ctx, lo, out % self.ctx.p, prec)

    def __neg__(self) -> "RamLaurent":
        return RamLaurent(self.ctx, self.offset, (-self.coeffs.astype(np.int64)) % self.ctx.p, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def _prec_val(self) -> int:
        return self.offset if self.coeffs.shape[0] else self.prec

    def __mul__(self, other: "RamLaurent") -> "RamLaurent":
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return self.ctx.zero()
        if self.is_exact() and other.is_exact():
            prec = PREC_EXACT
        else:
            prec = min(self.prec + other._prec_val(), other.prec + self._prec_val())
        if self.is_zero() or other.is_zero():
            return self.ctx.zero(prec)
        block = _raw_mul(self.ctx, self.coeffs, other.coeffs)
        return RamLaurent(self.ctx, self.offset + other.offset, block, prec)

    def scale(self, c: GFElem) -> "RamLaurent":
        """Multiply by a field constant (exact, norm-preserving unless c = 0)."""
        if c.field is not self.ctx.spec:
            raise FieldMismatchError("scalar from another tower")
        if c.is_zero():
            return self.ctx.zero()
        if self.is_zero():
            return self
        M = self.ctx.spec.scalar_matrix(c)
        out = (self.coeffs.astype(np.int64) @ M) % self.ctx.p
        return RamLaurent(self.ctx, self.offset, out, self.prec)

    def shift(self, k: int) -> "RamLaurent":
        """Multiply by u^k."""
        prec = self.prec if self.is_exact() else self.prec + k
        return RamLaurent(self.ctx, self.offset + k, self.coeffs, prec)

    def inv(self, rel_prec: int | None = None) -> "RamLaurent":
        if self.is_exact_zero():
            raise ZeroInverseError("inverse of exact zero series")
        if self.is_zero():
            raise EmptyPrecisionError("inverse of a term-free series: no leading term")
        ctx = self.ctx
        v = self.offset
        if self.is_exact() and self.coeffs.shape[0] == 1:
            # single exact term: the inverse is again a single exact term
            return ctx.from_field(self.coeff_at(v).inv(), -v)
        if self.is_exact():
            n = rel_prec if rel_prec is not None else ctx.wp
        else:
            n = self.prec - v
            if rel_prec is not None:
                n = min(n, rel_prec)
        n = max(int(n), 1)
        c0 = self.coeff_at(v)
        U = np.zeros((min(n, self.coeffs.shape[0]), ctx.spec.m), dtype=np.int8)
        U[:] = self.coeffs[: U.shape[0]]
        B = np.array([c0.inv().coords], dtype=np.int8)
        one_row = np.array(ctx.spec.one.coords, dtype=np.int64)
        t = 1
        while t < n:
            t2 = min(2 * t, n)
            prod = _raw_mul(ctx, U[:t2], B)[:t2].astype(np.int64)
            err = (-prod) % ctx.p
            err[0] = (err[0] + one_row) % ctx.p
            if not err.any():
                B = np.vstack([B, np.zeros((t2 - B.shape[0], ctx.spec.m), dtype=np.int8)]) if B.shape[0] < t2 else B
                t = t2
                continue
            corr = _raw_mul(ctx, B, err.astype(np.int8))[:t2].astype(np.int64)
            newB = np.zeros((t2, ctx.spec.m), dtype=np.int64)
            newB[: B.shape[0]] += B
            newB[: corr.shape[0]] += corr
            B = (newB % ctx.p).astype(np.int8)
            t = t2
        prec = self.prec - 2 * v if not self.is_exact() else -v + n
        if rel_prec is not None:
            prec = min(prec, -v + n)
        return RamLaurent(ctx, -v, B, prec)

    def __truediv__(self, other: "RamLaurent") -> "RamLaurent":
        return self * other.inv()

    def __pow__(self, n: int) -> "RamLaurent":
        if n < 0:
            return self.inv() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def qpow(self, k: int = 1) -> "RamLaurent":
        """Exact q^k-th power: coefficientwise Frobenius plus exponent dilation.

        Valid because raising to the q-th power is additive in characteristic
        p, so the power of a truncated series is the truncation of the power
        with precision scaled by q^k.
        """
        if k < 0:
            raise ConfigError("qpow exponent must be >= 0")
        ctx = self.ctx
        qk = ctx.q**k
        prec = self.prec if self.is_exact() else self.prec * qk
        if self.is_zero():
            return RamLaurent(ctx, 0, self.coeffs, prec)
        L = self.coeffs.shape[0]
        newL = (L - 1) * qk + 1
        if newL > _MAX_LEN:
            raise SizeLimitError("qpow block too long")
        F = np.eye(ctx.spec.m, dtype=np.int64)
        for _ in range(k):
            F = (F @ ctx.spec.frob_matrix.astype(np.int64)) % ctx.p
        rows = (self.coeffs.astype(np.int64) @ F) % ctx.p
        out = np.zeros((newL, ctx.spec.m), dtype=np.int8)
        out[::qk] = rows
        return RamLaurent(ctx, self.offset * qk, out, prec)

    def truncate(self, new_prec: int) -> "RamLaurent":
        """Forget all information at u-exponents >= new_prec."""
        return RamLaurent(self.ctx, self.offset, self.coeffs, min(self.prec, new_prec))

    def window(self, length: int) -> "RamLaurent":
        """Keep only the first `length` terms past the valuation."""
        if self.is_zero():
            return self
        return self.truncate(self.offset + max(int(length), 1))

    def __eq__(self, other):
        return (
            isinstance(other, RamLaurent)
            and self.ctx is other.ctx
            and self.offset == other.offset
            and self.prec == other.prec
            and self.coeffs.shape == other.coeffs.shape
            and bool((self.coeffs == other.coeffs).all())
        )

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            tail = "exact" if self.is_exact() else f"O(u^{self.prec})"
            return f"RamLaurent(0, {tail})"
        lead = self.coeff_at(self.offset)
        tail = "exact" if self.is_exact() else f"prec={self.prec}"
        return (
            f"RamLaurent(u^{self.offset}*{lead.index}+..., terms={self.coeffs.shape[0]}, {tail})"
        )


def ram_frobenius(x: RamLaurent, k: int = 1) -> RamLaurent:
    """Public q^k-th power map, computed as an ordinary power.

    Precision follows the generic product rules; use RamLaurent.qpow for the
    exact characteristic-p fast path.
    """
    if k < 0:
        raise ConfigError("frobenius exponent must be >= 0")
    out = x
    for _ in range(k):
        out = out ** x.ctx.q
    return out


def sample_z(ctx: Completion, rng: random.Random, regime: str = "small") -> RamLaurent:
    """Deterministic sample with finite support in a prescribed norm regime.

    Regimes: 'small' |z| < 1, 'unit' |z| = 1, 'large' |z| > 1, 'imag_large'
    |z|_im >= q.  Every sample carries a positive-exponent guard term, so it
    never lies in A (all exponents <= 0) nor in the period lattice or its
    scalings (those expand as infinite series while samples are finite).
    """
    spec = ctx.spec
    ram = ctx.ram

    def rand_nonzero():
        return spec.from_index(rng.randrange(1, spec.order))

    def rand_any():
        return spec.from_index(rng.randrange(spec.order))

    if regime == "small":
        v = rng.randrange(1, 2 * ram + 2)
    elif regime == "unit":
        v = 0
    elif regime == "large":
        v = -rng.randrange(1, 3 * ram + 1)
    elif regime == "imag_large":
        if ctx.d == 1 and ctx.q == 2:
            raise ConfigError("q=2, d=1 has no element with |z|_im >= 1")
        v = -ram * rng.randrange(1, 3)
    else:
        raise ConfigError(f"unknown sampling regime {regime!r}")

    if regime == "imag_large":
        if ctx.d > 1:
            coords = [0] * spec.m
            j = rng.randrange(1, ctx.d)
            i = rng.randrange(spec.e)
            coords[i + spec.e * j] = rng.randrange(1, ctx.p)
            lead = spec.elem(coords)
        else:
            # q > 2: push the lead off the q-1 exponent grid instead
            v -= rng.randrange(1, ram)
            lead = rand_nonzero()
    else:
        lead = rand_nonzero()

    terms = [(v, lead)]
    span = rng.randrange(2, 6)
    for k in range(v + 1, v + 1 + span):
        c = rand_any()
        if not c.is_zero():
            terms.append((k, c))
    guard_exp = max(v + span + 1, 1) + rng.randrange(0, 3)
    terms.append((guard_exp, rand_nonzero()))
    return ctx.from_terms(terms)
