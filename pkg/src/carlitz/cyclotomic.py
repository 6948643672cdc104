"""Exact torsion arithmetic for the Carlitz module.

Linearized polynomials over the rational function field, prime-torsion
fields with their Galois action, Gauss sums, interpolation polynomials,
and the exact telescope and monic-sum identities.  Everything here is
exact; the only numerics is the final embedding into the completion.
"""

from .errors import (
    DuplicateNodesError,
    FieldMismatchError,
    NotCoprimeError,
    NotInvertibleError,
    NotIrreducibleError,
    PrecisionExhaustedError,
    RootMismatchError,
    ShapeMismatchError,
    SizeLimitError,
    ZetaDenominatorError,
    ZeroInverseError,
)
from .fields import GFElem, GFPoly, RatFunc, enumerate_A
from .functions import SeriesBudget, carlitz_e
from .laurent import Completion, RamLaurent

_DEG_LIMIT = 4096
_TORSION_LIMIT = 512


def _rf_zero(spec, var="theta"):
    return RatFunc.from_poly(GFPoly(spec, (), var))


def _rf_one(spec, var="theta"):
    return RatFunc.from_poly(GFPoly(spec, (spec.one,), var))


def _poly_qpow(p: GFPoly, j: int):
    """p^{q^j} for a polynomial: Frobenius on coefficients, dilated exponents."""
    if j == 0 or p.is_zero():
        return p
    spec = p.field
    step = spec.q**j
    out = [spec.zero] * (p.degree * step + 1)
    for k, c in enumerate(p.coeffs):
        if not c.is_zero():
            out[k * step] = c.frobenius(spec.e * j)
    return GFPoly(spec, tuple(out), p.var)


def _rf_qpow(f: RatFunc, j: int) -> RatFunc:
    return RatFunc(_poly_qpow(f.num, j), _poly_qpow(f.den, j))


def d_poly(spec, j: int, var: str = "theta") -> GFPoly:
    """Product of all monic polynomials of degree j, by the q-power recursion."""
    if spec.q**j > _DEG_LIMIT:
        raise SizeLimitError(f"degree q^{j} beyond the polynomial guard")
    out = GFPoly(spec, (spec.one,), var)
    for i in range(1, j + 1):
        bracket = [spec.zero] * (spec.q**i + 1)
        bracket[1] = -spec.one
        bracket[spec.q**i] = spec.one
        out = GFPoly(spec, tuple(bracket), var) * _poly_qpow(out, 1)
    return out


def ell_poly(spec, j: int, var: str = "theta") -> GFPoly:
    """prod_{k=1..j} (theta - theta^{q^k}), the signed lcm of degree-j monics."""
    if spec.q**j > _DEG_LIMIT:
        raise SizeLimitError(f"degree q^{j} beyond the polynomial guard")
    out = GFPoly(spec, (spec.one,), var)
    for k in range(1, j + 1):
        f = [spec.zero] * (spec.q**k + 1)
        f[1] = spec.one
        f[spec.q**k] = -spec.one
        out = GFPoly(spec, tuple(f), var) * out
    return out


class LinPoly:
    """Additive polynomial sum_j c_j Z^{q^j} with rational-function coefficients.

    The representation is the coefficient list indexed by j, so additivity is
    structural; composition is the ring multiplication.
    """

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.spec = spec
        self.coeffs = tuple(cs)

    @property
    def height(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, j: int) -> RatFunc:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return _rf_zero(self.spec)

    def __add__(self, other: "LinPoly") -> "LinPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return LinPoly(self.spec, [self.coeff(j) + other.coeff(j) for j in range(n)])

    def __neg__(self) -> "LinPoly":
        return LinPoly(self.spec, [-c for c in self.coeffs])

    def __sub__(self, other: "LinPoly") -> "LinPoly":
        return self + (-other)

    def scale(self, c) -> "LinPoly":
        return LinPoly(self.spec, [f * c for f in self.coeffs])

    def qtwist(self, k: int = 1) -> "LinPoly":
        """Composition with Z^{q^k} on the left: coefficients pushed up."""
        shifted = [_rf_zero(self.spec)] * k + [_rf_qpow(c, k) for c in self.coeffs]
        return LinPoly(self.spec, shifted)

    def compose(self, other: "LinPoly") -> "LinPoly":
        out = LinPoly(self.spec, [])
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            piece = LinPoly(self.spec, [_rf_qpow(g, j) for g in other.coeffs])
            out = out + LinPoly(self.spec,
                                [_rf_zero(self.spec)] * j + list(piece.coeffs)).scale(c)
        return out

    def eval_rf(self, x: RatFunc) -> RatFunc:
        acc = _rf_zero(self.spec)
        for j, c in enumerate(self.coeffs):
            if not c.is_zero():
                acc = acc + c * _rf_qpow(x, j)
        return acc

    def eval_elem(self, x):
        """Evaluate on any ring element with +, *, and integer powers."""
        acc = None
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            term = x ** (self.spec.q**j) * c
            acc = term if acc is None else acc + term
        return acc

    def __eq__(self, other):
        return (isinstance(other, LinPoly) and self.spec is other.spec
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "LinPoly(0)"
        parts = [f"({c})*Z^{self.spec.q**j}" for j, c in enumerate(self.coeffs)
                 if not c.is_zero()]
        return "LinPoly(" + " + ".join(parts) + ")"


def carlitz_poly(spec, a: GFPoly) -> LinPoly:
    """The additive polynomial of the module action of a, from theta -> theta Z + Z^q.

    Built as sum_i a_i T^i where T is the action of theta under composition;
    satisfies the two ring laws and the coefficient formula through d_j.
    """
    a.subfield_coeff_indices()
    if a.degree >= 0 and spec.q**a.degree > _DEG_LIMIT:
        raise SizeLimitError(f"action of degree-{a.degree} element beyond guard")
    theta_rf = RatFunc.from_poly(GFPoly(spec, (spec.zero, spec.one), "theta"))
    c_theta = LinPoly(spec, [theta_rf, _rf_one(spec)])
    out = LinPoly(spec, [])
    power = LinPoly(spec, [_rf_one(spec)])  # identity Z
    for i, c in enumerate(a.coeffs):
        if i:
            power = c_theta.compose(power)
        if not c.is_zero():
            out = out + power.scale(c)
    return out


def basis_E(spec, j: int) -> LinPoly:
    """The degree-q^j interpolation basis: prod over all a of degree < j of
    (Z - a), divided by d_j.

    Computed by the separable recursion e_j = e_{j-1}^q - v^{q-1} e_{j-1}
    with v = e_{j-1}(theta^{j-1}); the tests pin this against the literal
    product and against the module-action coefficients.
    """
    if spec.q**j > _DEG_LIMIT:
        raise SizeLimitError(f"degree q^{j} beyond the polynomial guard")
    e = LinPoly(spec, [_rf_one(spec)])
    for i in range(1, j + 1):
        mono = [spec.zero] * i
        mono[i - 1] = spec.one
        v = e.eval_rf(RatFunc.from_poly(GFPoly(spec, tuple(mono), "theta")))
        scale = v
        for _ in range(spec.q - 2):
            scale = scale * v
        e = e.qtwist(1) - e.scale(scale)
    return e.scale(RatFunc.from_poly(d_poly(spec, j)).inv())


# -- dense polynomials over rational-function coefficients


def _ztrim(cs):
    cs = list(cs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _zadd(a, b, zero):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else zero
        y = b[i] if i < len(b) else zero
        out.append(x + y)
    return _ztrim(out)


def _zmul(a, b, zero):
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for k, y in enumerate(b):
            out[i + k] = out[i + k] + x * y
    return _ztrim(out)


def _zdivmod(a, b, zero):
    if not b:
        raise ZeroInverseError("division by the zero polynomial")
    rem = list(a)
    lead_inv = b[-1].inv()
    quot = [zero] * max(0, len(rem) - len(b) + 1)
    while len(rem) >= len(b) and rem:
        if rem[-1].is_zero():
            rem.pop()
            continue
        f = rem[-1] * lead_inv
        shift = len(rem) - len(b)
        quot[shift] = quot[shift] + f
        for i, c in enumerate(b):
            rem[shift + i] = rem[shift + i] - f * c
        rem.pop()
    return _ztrim(quot), _ztrim(rem)


def _zxgcd(a, b, zero, one):
    """Extended gcd of coefficient lists: returns (g, s, t), s*a + t*b = g."""
    r0, r1 = _ztrim(a), _ztrim(b)
    s0, s1 = [one], []
    t0, t1 = [], [one]
    while r1:
        q, r = _zdivmod(r0, r1, zero)
        r0, r1 = r1, r
        s0, s1 = s1, _zadd(s0, [-c for c in _zmul(q, s1, zero)], zero)
        t0, t1 = t1, _zadd(t0, [-c for c in _zmul(q, t1, zero)], zero)
    return r0, s0, t0


class CycField:
    """Torsion field for a monic prime: residues of Z modulo C_p(Z)/Z.

    Coefficients live in the rational function field over the coefficient
    extension that houses the chosen root zeta.  The modulus is monic of
    degree q^d - 1 and stays irreducible after the constant extension, so
    extended-gcd inversion works; a failure surfaces as NotInvertibleError.
    """

    def __init__(self, spec, prime: GFPoly, zeta: GFElem):
        prime.subfield_coeff_indices()
        if not prime.is_monic() or prime.degree < 1 or not prime.is_irreducible():
            raise NotIrreducibleError("modulus prime must be monic irreducible")
        if zeta.field is not spec:
            raise FieldMismatchError("root from another tower")
        if not prime.eval(zeta).is_zero():
            raise RootMismatchError("zeta is not a root of the prime")
        if spec.q**prime.degree > _TORSION_LIMIT:
            raise SizeLimitError("torsion field beyond the size guard")
        self.spec = spec
        self.prime = prime
        self.zeta = zeta
        self.d = prime.degree
        cp = carlitz_poly(spec, prime)
        dense = [_rf_zero(spec)] * (spec.q**self.d + 1)
        for jj, c in enumerate(cp.coeffs):
            dense[spec.q**jj] = c
        # the action polynomial has no constant term; divide by Z exactly
        self.rho = tuple(dense[1:])
        self._zero_rf = _rf_zero(spec)
        self._one_rf = _rf_one(spec)
        self.cache = {}

    @property
    def zero(self) -> "CycElem":
        return CycElem(self, [])

    @property
    def one(self) -> "CycElem":
        return CycElem(self, [self._one_rf])

    @property
    def lam(self) -> "CycElem":
        # reduce: for q^d = 2 the modulus has degree 1 and lam is a constant
        return self.reduce([self._zero_rf, self._one_rf])

    def const(self, x) -> "CycElem":
        if isinstance(x, GFElem):
            x = RatFunc.from_poly(GFPoly(self.spec, (x,), "theta"))
        elif isinstance(x, GFPoly):
            x = RatFunc.from_poly(x)
        return CycElem(self, [x])

    def reduce(self, coeffs) -> "CycElem":
        _, rem = _zdivmod(_ztrim(coeffs), list(self.rho), self._zero_rf)
        return CycElem(self, rem)

    def __repr__(self):
        return f"CycField(prime={self.prime!r}, deg={self.d})"


class CycElem:
    __slots__ = ("cf", "coeffs")

    def __init__(self, cf: CycField, coeffs):
        cs = _ztrim(coeffs)
        if len(cs) >= len(cf.rho):
            raise ShapeMismatchError("residue not reduced against the modulus")
        self.cf = cf
        self.coeffs = tuple(cs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other):
        if self.cf is not other.cf:
            raise FieldMismatchError("elements of different torsion fields")

    def __add__(self, other: "CycElem") -> "CycElem":
        self._check(other)
        return CycElem(self.cf, _zadd(list(self.coeffs), list(other.coeffs),
                                      self.cf._zero_rf))

    def __neg__(self) -> "CycElem":
        return CycElem(self.cf, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "CycElem":
        if isinstance(other, (RatFunc, GFElem)):
            if isinstance(other, GFElem):
                return CycElem(self.cf, [c * other for c in self.coeffs])
            return CycElem(self.cf, [c * other for c in self.coeffs])
        self._check(other)
        prod = _zmul(list(self.coeffs), list(other.coeffs), self.cf._zero_rf)
        return self.cf.reduce(prod)

    def inv(self) -> "CycElem":
        if self.is_zero():
            raise ZeroInverseError("inverse of zero in the torsion field")
        g, s, _ = _zxgcd(list(self.coeffs), list(self.cf.rho),
                         self.cf._zero_rf, self.cf._one_rf)
        if len(g) != 1:
            raise NotInvertibleError(
                f"gcd with the modulus has degree {len(g) - 1}; modulus not prime here")
        return self.cf.reduce([c * g[0].inv() for c in s])

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, n: int) -> "CycElem":
        if n < 0:
            return self.inv() ** (-n)
        out = self.cf.one
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        return (isinstance(other, CycElem) and self.cf is other.cf
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "CycElem(0)"
        parts = [f"({c})*L^{i}" if i else f"({c})" for i, c in enumerate(self.coeffs)
                 if not c.is_zero()]
        return "CycElem(" + " + ".join(parts) + ")"


def make_torsion_field(spec, prime: GFPoly, zeta: GFElem) -> CycField:
    return CycField(spec, prime, zeta)


def action_at_lam(cf: CycField, a: GFPoly) -> CycElem:
    """The module action of a applied to the torsion generator, reduced."""
    key = ("act", a.coeffs)
    if key not in cf.cache:
        cp = carlitz_poly(cf.spec, a)
        acc = cf.zero
        lam_pow = cf.lam
        for j, c in enumerate(cp.coeffs):
            if j:
                for _ in range(cf.spec.e):
                    lam_pow = lam_pow ** cf.spec.p
            if not c.is_zero():
                acc = acc + lam_pow * c
        cf.cache[key] = acc
    return cf.cache[key]


def galois_sigma(a: GFPoly, x: CycElem) -> CycElem:
    """The automorphism fixing constants that moves the generator by the
    module action of a; requires a prime to the modulus.
    """
    cf = x.cf
    a.subfield_coeff_indices()
    if a.gcd(cf.prime).degree != 0:
        raise NotCoprimeError("class of a is not invertible modulo the prime")
    lam_img = action_at_lam(cf, a % cf.prime)
    acc = cf.zero
    for c in reversed(x.coeffs):
        acc = acc * lam_img + cf.const(c)
    return acc


def gauss_sum(cf: CycField) -> CycElem:
    """Character sum over nonzero residues: sum of chi(a)^{-1} C_a(lambda)."""
    key = "gauss"
    if key not in cf.cache:
        acc = cf.zero
        for a in enumerate_A(cf.spec, cf.d):
            if a.is_zero():
                continue
            acc = acc + action_at_lam(cf, a) * a.eval(cf.zeta).inv()
        if acc.is_zero():
            raise NotInvertibleError("character sum degenerated to zero")
        cf.cache[key] = acc
    return cf.cache[key]


def gauss_sum_inv(cf: CycField) -> CycElem:
    """(-1)^d * prime / gauss_sum; the product law is asserted exactly."""
    key = "gauss_inv"
    if key not in cf.cache:
        g = gauss_sum(cf)
        sign_p = cf.const(cf.prime if cf.d % 2 == 0 else -cf.prime)
        ginv = sign_p * g.inv()
        assert g * ginv == sign_p
        cf.cache[key] = ginv
    return cf.cache[key]


# -- interpolation polynomials


class ZPoly:
    """Dense polynomial in the torsion variable, exact or numeric coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return -1

    def coeff(self, k: int):
        return self.coeffs[k]

    def eval(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, ZPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else None
            b = other.coeffs[i] if i < len(other.coeffs) else None
            if a is None:
                if not b.is_zero():
                    return False
            elif b is None:
                if not a.is_zero():
                    return False
            elif not (a - b).is_zero():
                return False
        return True

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ZPoly(degree={self.degree}, len={len(self.coeffs)})"


def _lagrange(nodes, values, one, zero):
    n = len(nodes)
    for i in range(n):
        for k in range(i + 1, n):
            if (nodes[i] - nodes[k]).is_zero():
                raise DuplicateNodesError(f"interpolation nodes {i} and {k} coincide")
    out = [zero] * n
    for i in range(n):
        num = [one]
        denom = None
        for k in range(n):
            if k == i:
                continue
            num = _zmul(num, [-nodes[k], one], zero)
            df = nodes[i] - nodes[k]
            denom = df if denom is None else denom * df
        f = values[i] * denom.inv() if denom is not None else values[i]
        for k, c in enumerate(num):
            out[k] = out[k] + c * f
    return out


def interpolation_M(cf: CycField, with_character: bool = True) -> ZPoly:
    """Exact interpolation through the torsion values of all residues.

    Sends the torsion value of b to prime * chi(b) (or to the constant prime
    when the character is dropped); degree stays below the residue count.
    """
    nodes, values = [], []
    for b in enumerate_A(cf.spec, cf.d):
        nodes.append(action_at_lam(cf, b))
        v = cf.const(cf.prime)
        if with_character:
            v = v * b.eval(cf.zeta)
        values.append(v)
    return ZPoly(_lagrange(nodes, values, cf.one, cf.zero))


def interpolation_M_numeric(ctx: Completion, espec, J, budget: SeriesBudget) -> ZPoly:
    """Numeric flavor over the completion for a square-free modulus.

    Nodes are the exponential values of the residues over the modulus; the
    target value at residue b is modulus(theta) * prod over J of b at the
    matching root.
    """
    m = espec.m_poly
    deg = m.degree
    if ctx.q**deg > _TORSION_LIMIT:
        raise SizeLimitError("residue count beyond the size guard")
    for j in J:
        if not 0 <= j < espec.s:
            raise ShapeMismatchError(f"subset index {j} out of range")
    wp = budget.wp
    m_emb = ctx.embed_poly(m)
    m_inv = m_emb.inv(wp + 2 * deg * ctx.ram + ctx.q)
    nodes, values = [], []
    for b in enumerate_A(ctx.spec, deg):
        nodes.append(carlitz_e(ctx, ctx.embed_poly(b) * m_inv, budget))
        f = ctx.spec.one
        for j in J:
            f = f * b.eval(espec.roots[j])
        values.append(m_emb.scale(f))
    return ZPoly(_lagrange(nodes, values, ctx.one(), ctx.zero(wp)))


def M_from_gauss(cf: CycField) -> ZPoly:
    """Closed form of the prime interpolation polynomial through the Gauss sum:
    (-1)^d g_inv * sum_j Z^{q^j} * sum over a of degree j..d-1 of
    chi(a)^{-1} E_j(a).
    """
    spec = cf.spec
    ginv = gauss_sum_inv(cf)
    sign = cf.one if cf.d % 2 == 0 else -cf.one
    out = [cf.zero] * (spec.q ** (cf.d - 1) + 1)
    for j in range(cf.d):
        ej = basis_E(spec, j)
        total = cf.zero
        for a in enumerate_A(spec, cf.d):
            if a.degree < j:
                continue
            val = ej.eval_rf(RatFunc.from_poly(a))
            total = total + cf.const(val) * a.eval(cf.zeta).inv()
        out[spec.q**j] = total * ginv * sign
    return ZPoly(out)


# -- exact identities in two symbols


class FracPoly:
    """Polynomial in y whose coefficients share one denominator in x.

    Kept unreduced so large exact identities compare without gcd work;
    equality cross-multiplies.
    """

    __slots__ = ("den", "coeffs")

    def __init__(self, den: GFPoly, coeffs):
        if den.is_zero():
            raise ZeroInverseError("zero common denominator")
        self.den = den
        self.coeffs = tuple(coeffs)

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if not self.coeffs[i].is_zero():
                return i
        return -1

    def __eq__(self, other):
        if not isinstance(other, FracPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else None
            b = other.coeffs[i] if i < len(other.coeffs) else None
            left = (a * other.den) if a is not None else None
            right = (b * self.den) if b is not None else None
            if left is None:
                if not right.is_zero():
                    return False
            elif right is None:
                if not left.is_zero():
                    return False
            elif left != right:
                return False
        return True

    def __hash__(self):
        return hash((self.den, self.coeffs))

    def __repr__(self):
        return f"FracPoly(deg_y={self.degree}, deg_den={self.den.degree})"


def telescope_pair(spec, d: int):
    """Both sides of the degree-d telescope identity in the symbols (x, y).

    Left: sum_{j<d} l_j(x)^{-1} prod_{k<j} (y - x^{q^k}); right: the single
    term l_{d-1}(x)^{-1} prod_{1<=j<d} (y - x^{q^j}).  Returned over the
    common denominator l_{d-1}(x) so the caller can compare exactly.
    """
    if d < 1:
        raise ShapeMismatchError("telescope depth must be >= 1")
    if spec.q**d > _DEG_LIMIT:
        raise SizeLimitError("telescope depth beyond the degree guard")
    one = GFPoly(spec, (spec.one,), "x")
    ell = [one]
    for k in range(1, d):
        f = [spec.zero] * (spec.q**k + 1)
        f[1] = spec.one
        f[spec.q**k] = -spec.one
        ell.append(GFPoly(spec, tuple(f), "x") * ell[-1])
    # suffix products l_{d-1}/l_j without division
    suffix = [one] * d
    for j in range(d - 2, -1, -1):
        f = [spec.zero] * (spec.q ** (j + 1) + 1)
        f[1] = spec.one
        f[spec.q ** (j + 1)] = -spec.one
        suffix[j] = GFPoly(spec, tuple(f), "x") * suffix[j + 1]
    lhs = [GFPoly(spec, (), "x")] * d
    prod = [one]  # prod_{k<j} (y - x^{q^k}) as y-coefficients
    for j in range(d):
        for m, c in enumerate(prod):
            lhs[m] = lhs[m] + suffix[j] * c
        if j < d - 1:
            mono = [spec.zero] * (spec.q**j + 1)
            mono[spec.q**j] = spec.one
            xq = GFPoly(spec, tuple(mono), "x")
            nxt = [GFPoly(spec, (), "x")] * (len(prod) + 1)
            for m, c in enumerate(prod):
                nxt[m + 1] = nxt[m + 1] + c
                nxt[m] = nxt[m] - xq * c
            prod = nxt
    rhs = [one]
    for j in range(1, d):
        mono = [spec.zero] * (spec.q**j + 1)
        mono[spec.q**j] = spec.one
        xq = GFPoly(spec, tuple(mono), "x")
        nxt = [GFPoly(spec, (), "x")] * (len(rhs) + 1)
        for m, c in enumerate(rhs):
            nxt[m + 1] = nxt[m + 1] + c
            nxt[m] = nxt[m] - xq * c
        rhs = nxt
    den = ell[d - 1]
    return FracPoly(den, lhs), FracPoly(den, rhs)


def monic_sums(spec, j: int, zeta: GFElem):
    """Inverse-value sum over monic degree-j polynomials at zeta, plus the
    exact kernel sum_{a monic, deg j} a(y)/a(x) over the common denominator.

    The scalar equals 1 / l_j(zeta), asserted here; a zeta that kills any
    denominator (possible only when its degree is too small) is an error.
    """
    if spec.q**j > _DEG_LIMIT:
        raise SizeLimitError(f"enumeration q^{j} beyond the guard")
    if zeta.field is not spec:
        raise FieldMismatchError("zeta from another tower")
    total = spec.zero
    monics = list(enumerate_A(spec, j, monic=True, var="x"))
    for a in monics:
        v = a.eval(zeta)
        if v.is_zero():
            raise ZetaDenominatorError("zeta is a root of a degree-j monic")
    lval = ell_poly(spec, j, "x").eval(zeta)
    if lval.is_zero():
        raise ZetaDenominatorError("zeta kills the least common multiple")
    for a in monics:
        total = total + a.eval(zeta).inv()
    assert total == lval.inv()
    # prefix/suffix cofactors for the shared denominator d_j(x)
    n = len(monics)
    pre = [None] * (n + 1)
    pre[0] = GFPoly(spec, (spec.one,), "x")
    for i, a in enumerate(monics):
        pre[i + 1] = pre[i] * a
    suf = [None] * (n + 1)
    suf[n] = GFPoly(spec, (spec.one,), "x")
    for i in range(n - 1, -1, -1):
        suf[i] = monics[i] * suf[i + 1]
    num = [GFPoly(spec, (), "x")] * (j + 1)
    for i, a in enumerate(monics):
        cof = pre[i] * suf[i + 1]
        for m, c in enumerate(a.coeffs):
            if not c.is_zero():
                num[m] = num[m] + cof.scale(c)
    return total, FracPoly(pre[n], num)


# -- the numeric embedding


def embed(x: CycElem, ctx: Completion, budget: SeriesBudget) -> RamLaurent:
    """Send the torsion generator to its exponential value in the completion
    and reduce; a ring homomorphism up to the working precision.
    """
    cf = x.cf
    if ctx.spec is not cf.spec:
        raise FieldMismatchError("completion built over a different tower")
    wp = budget.wp
    # cache on the completion, not the torsion field: the value is ctx-bound
    key = ("embed_lam", cf.prime, wp)
    if key not in ctx.cache:
        z = ctx.embed_poly(cf.prime).inv(wp + 2 * cf.d * ctx.ram + ctx.q)
        ctx.cache[key] = carlitz_e(ctx, z, budget)
    lam_num = ctx.cache[key]
    acc = ctx.zero(wp)
    for c in reversed(x.coeffs):
        acc = acc * lam_num + ctx.embed_rat(c, wp + ctx.q * ctx.ram)
    if not x.is_zero() and acc.prec < budget.prec:
        raise PrecisionExhaustedError(
            f"embedding delivered precision {acc.prec} < target {budget.prec}")
    return acc
