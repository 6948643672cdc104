"""Special functions of the Carlitz module with certified truncation error.

Everything returns either a RamLaurent or a TateElem whose precision and
tail bounds are sound for the requested budget; each series documents its
own stopping rule and records the derived truncation index in the budget.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    AlphaTooLargeError,
    ConfigError,
    LatticePoleError,
    PrecisionExhaustedError,
    ShapeMismatchError,
    SingularSystemError,
    SizeLimitError,
)
from .fields import GFPoly
from .laurent import NEG_INF, Completion, RamLaurent
from .tate import TateElem, tate_const, tate_zero

_ENUM_LIMIT = 65536
_CONST_DEG_LIMIT = 4096


@dataclass
class SeriesBudget:
    """Requested absolute precision plus working padding.

    pad absorbs the positive-exponent excursions of intermediate terms and
    the fixed valuation shifts (period factors, lattice inverses); series
    with input-dependent excursions compute an extra slack on top of the
    pad.  n_terms records the truncation index each operation derived.
    """

    prec: int
    pad: int = 16
    n_terms: dict = field(default_factory=dict)

    @property
    def wp(self) -> int:
        return self.prec + self.pad


def default_budget(ctx: Completion, prec: int) -> SeriesBudget:
    return SeriesBudget(prec, 4 * ctx.ram + 2 * ctx.q + 8)


# -- exact constants in A


def carlitz_constants(ctx: Completion, i: int):
    """(d_i, l_i): the degree-q^i product constants, exact in F_q[theta].

    d_0 = l_0 = 1; d_i = (theta^{q^i} - theta) * d_{i-1}^q and
    l_i = (theta - theta^{q^i}) * l_{i-1}.
    """
    if i < 0:
        raise ShapeMismatchError("index must be >= 0")
    if ctx.q**i > _CONST_DEG_LIMIT:
        raise SizeLimitError(f"q^{i} beyond the constant degree guard")
    key = ("const", i)
    if key in ctx.cache:
        return ctx.cache[key]
    spec = ctx.spec
    if i == 0:
        one = spec.poly([1])
        ctx.cache[key] = (one, one)
    else:
        d_prev, l_prev = carlitz_constants(ctx, i - 1)
        qi = ctx.q**i
        coeffs = [spec.zero] * (qi + 1)
        coeffs[1] = -spec.one
        coeffs[qi] = spec.one
        brk = GFPoly(spec, tuple(coeffs), "theta")  # theta^{q^i} - theta
        stretched = [spec.zero] * (ctx.q * d_prev.degree + 1)
        for k, c in enumerate(d_prev.coeffs):
            stretched[ctx.q * k] = c
        d_prev_q = GFPoly(spec, tuple(stretched), "theta")
        d_i = brk * d_prev_q
        l_i = (-brk) * l_prev
        ctx.cache[key] = (d_i, l_i)
    return ctx.cache[key]


def _inv_d(ctx: Completion, i: int, rel: int) -> RamLaurent:
    """1/d_i to relative precision rel (cached in coarse precision buckets)."""
    rel_b = ((rel + 31) // 32) * 32
    key = ("inv_d", i, rel_b)
    if key not in ctx.cache:
        d_i, _ = carlitz_constants(ctx, i)
        ctx.cache[key] = ctx.embed_poly(d_i).inv(rel_b)
    return ctx.cache[key]


# -- period


def pi_tilde(ctx: Completion, budget: SeriesBudget) -> RamLaurent:
    """Fundamental period: -lambda^q * prod_{i>=1} (1 - theta^{1-q^i})^{-1}.

    Factor i differs from 1 at valuation (q^i - 1) * ram; factors beyond the
    working precision are omitted.  Lead exponent is -q with coefficient -1.
    """
    wp = budget.wp
    key = ("pi", wp)
    if key not in ctx.cache:
        th_inv = ctx.theta().inv()
        prod = ctx.one()
        i = 1
        while ctx.ram * (ctx.q**i - 1) < wp:
            x = ctx.theta() * th_inv ** (ctx.q**i)  # theta^{1-q^i}, exact monomial
            prod = (prod * (ctx.one() - x)).truncate(wp)
            i += 1
        budget.n_terms["pi_tilde"] = i - 1
        lam_q = ctx.lam() ** ctx.q
        ctx.cache[key] = -(lam_q * prod.inv(wp))
    return ctx.cache[key]


# -- exponential family


def _exp_indices(ctx: Completion, v: int, wp: int):
    """Kept term indices and positive-exponent slack for sum z^{q^i}/d_i."""
    keep = []
    slack = 0
    i = 0
    while True:
        tv = ctx.q**i * (v + i * ctx.ram)
        if tv >= wp:
            break
        keep.append(i)
        slack = max(slack, -tv)
        i += 1
        if ctx.q**i > _CONST_DEG_LIMIT:
            raise SizeLimitError("argument too large for the exponential guard")
    return keep, slack


def carlitz_exp(ctx: Completion, z: RamLaurent, budget: SeriesBudget) -> RamLaurent:
    """sum_i z^{q^i}/d_i, truncated when the term valuation clears the budget."""
    wp = budget.wp
    if z.is_exact_zero():
        return ctx.zero()
    keep, slack = _exp_indices(ctx, z.valuation(), wp)
    budget.n_terms["carlitz_exp"] = len(keep)
    acc = ctx.zero(wp)
    for i in keep:
        acc = acc + (z.qpow(i) * _inv_d(ctx, i, wp + slack)).truncate(wp)
    if acc.prec < budget.prec:
        raise PrecisionExhaustedError(
            f"exponential delivered precision {acc.prec} < target {budget.prec}")
    return acc


def carlitz_e(ctx: Completion, z: RamLaurent, budget: SeriesBudget) -> RamLaurent:
    """exp at the period multiple: carlitz_exp(pi_tilde * z)."""
    wp = budget.wp
    if z.is_exact_zero():
        return ctx.zero()
    v_pi = -ctx.ram * ctx.q // (ctx.q - 1)
    vw = z.valuation() + v_pi
    _, slack = _exp_indices(ctx, vw, wp)
    need = wp + slack + ctx.q + max(0, -z.valuation())
    pi = pi_tilde(ctx, SeriesBudget(need, 0))
    return carlitz_exp(ctx, pi * z, budget)


def u_val(ctx: Completion, z: RamLaurent, budget: SeriesBudget) -> RamLaurent:
    """1/e_C(z); requires e_C(z) nonzero at working precision."""
    e = carlitz_e(ctx, z, budget)
    if e.is_zero():
        raise LatticePoleError(f"e_C(z) vanishes to precision {e.prec}")
    return e.inv(budget.wp)


def u_m_val(ctx: Completion, z: RamLaurent, m: GFPoly, budget: SeriesBudget) -> RamLaurent:
    """1/(m * e_C(z/m)) for monic m: the conductor-m uniformizer."""
    wp = budget.wp
    emb = ctx.embed_poly(m)
    zm = z * emb.inv(wp + max(0, -z.valuation()) + 2 * m.degree * ctx.ram)
    e = carlitz_e(ctx, zm, budget)
    denom = emb * e
    if denom.is_zero():
        raise LatticePoleError(f"m * e_C(z/m) vanishes to precision {denom.prec}")
    return denom.inv(wp)


# -- omega and the generating function


def _geometric(ctx: Completion, tcap: int, base_exp: int, shift: int, sign: int) -> TateElem:
    """sign * sum_k t^k theta^(-(k+shift) * base_exp) as a capped element."""
    th_inv = ctx.theta().inv()
    step = th_inv**base_exp
    cur = step**shift
    if sign < 0:
        cur = -cur
    terms = {}
    for k in range(tcap + 1):
        terms[(k,)] = cur
        cur = cur * step
    tail = Fraction(-(tcap + 1 + shift) * base_exp)
    return TateElem(ctx, 1, tcap, terms, tail)


def omega(ctx: Completion, tcap: int, budget: SeriesBudget) -> TateElem:
    """lambda * prod_{i>=0} (1 - t/theta^{q^i})^{-1} to degree tcap.

    Omitted factors only move stored coefficients below the working
    precision; the geometric tails give the q^(1/(q-1) - (tcap+1)) bound.
    """
    wp = budget.wp
    key = ("omega", tcap, wp)
    if key not in ctx.cache:
        acc = tate_const(ctx, 1, tcap, ctx.lam())
        i = 0
        while ctx.ram * ctx.q**i < wp:
            acc = acc * _geometric(ctx, tcap, ctx.q**i, 0, 1)
            i += 1
        budget.n_terms["omega"] = i
        out = {e: c.truncate(wp) for e, c in acc.terms.items()}
        ctx.cache[key] = TateElem(ctx, 1, tcap, out, acc.tail_norm_exp)
    return ctx.cache[key]


def agf_f(ctx: Completion, z: RamLaurent, tcap: int, budget: SeriesBudget) -> TateElem:
    """Generating function sum_n (pi z)^{q^n} / ((theta^{q^n} - t) d_n)."""
    wp = budget.wp
    q, ram = ctx.q, ctx.ram
    if z.is_exact_zero():
        return tate_zero(ctx, 1, tcap)
    a_w = z.norm_exp() + Fraction(q, q - 1)
    keep = []
    slack = 0
    n = 0
    while True:
        en = ram * q**n * (a_w - n - 1)
        if en <= -wp:
            break
        keep.append(n)
        slack = max(slack, math.ceil(en))
        n += 1
        if q**n > _CONST_DEG_LIMIT:
            raise SizeLimitError("argument too large for the AGF guard")
    budget.n_terms["agf_f"] = len(keep)
    pi = pi_tilde(ctx, SeriesBudget(wp + slack + q + max(0, -z.valuation()), 0))
    w = pi * z
    acc = tate_zero(ctx, 1, tcap)
    for n in keep:
        scal = (w.qpow(n) * _inv_d(ctx, n, wp + slack)).truncate(wp)
        acc = acc + _geometric(ctx, tcap, q**n, 1, 1).scalar_mul(scal)
    return acc


def _tate_inv(A: TateElem, wp: int) -> TateElem:
    """Newton inverse of a capped element with invertible constant term.

    Converges when the non-constant part has Gauss norm below the constant
    coefficient's; iteration stops once the residual's stored part sinks to
    the working precision or to the inherent tail floor.
    """
    ctx = A.ctx
    c0 = A.coeff((0,) * A.s)
    if c0.is_zero():
        raise PrecisionExhaustedError("constant term vanishes; no capped inverse")
    one = tate_const(ctx, A.s, A.tcap, ctx.one())
    X = tate_const(ctx, A.s, A.tcap, c0.inv(wp + 2 * abs(c0.valuation()) + 2))
    target = Fraction(-wp, ctx.ram)
    for _ in range(60):
        E = one - A * X
        g = E.gauss_norm_exp()
        if g <= max(target, E.tail_norm_exp):
            # remaining error is X * sum_{k>=1} E^k; widen the tail to cover it
            err = max(target, E.tail_norm_exp, g) + X.gauss_norm_exp()
            return TateElem(ctx, A.s, A.tcap, dict(X.terms),
                            max(X.tail_norm_exp, err))
        X = X + X * E
    raise PrecisionExhaustedError("capped inverse did not converge")


def omega_inv(ctx: Completion, tcap: int, budget: SeriesBudget) -> TateElem:
    key = ("omega_inv", tcap, budget.wp)
    if key not in ctx.cache:
        ctx.cache[key] = _tate_inv(omega(ctx, tcap, budget), budget.wp)
    return ctx.cache[key]


def chi_t(ctx: Completion, z: RamLaurent, tcap: int, budget: SeriesBudget) -> TateElem:
    """The entire interpolation of a -> a(t): omega^{-1} * agf_f(z)."""
    return omega_inv(ctx, tcap, budget) * agf_f(ctx, z, tcap, budget)


# -- Carlitz logarithm series


def papanikolas_L(ctx: Completion, alpha: RamLaurent, tcap: int,
                  budget: SeriesBudget) -> TateElem:
    """alpha + sum_{j>=1} alpha^{q^j} prod_{k<=j} (t - theta^{q^k})^{-1}.

    Gauss norm of term j is q^{C_j}, C_j = q^j a - (q + ... + q^j) with
    a = log_q|alpha|; C_j decreases iff a < q/(q-1), the convergence region.
    Coefficient of t^m is bounded by q^(c_exp - q m), c_exp = max(a, qa - q),
    which is the decay certificate that later justifies t -> theta.
    """
    wp = budget.wp
    q, ram = ctx.q, ctx.ram
    if alpha.is_exact_zero():
        return tate_zero(ctx, 1, tcap)
    a = alpha.norm_exp()
    if a >= Fraction(q, q - 1):
        raise AlphaTooLargeError(f"|alpha| = q^{a} outside the convergence disk")
    c_exp = max(a, q * a - q)
    acc = tate_const(ctx, 1, tcap, alpha)
    prod = tate_const(ctx, 1, tcap, ctx.one())
    geom_sum = 0
    j = 1
    c_last = None
    while True:
        geom_sum += q**j
        c_j = q**j * a - geom_sum
        if ram * c_j <= -wp:
            c_last = c_j
            break
        prod = prod * _geometric(ctx, tcap, q**j, 1, -1)
        acc = acc + prod.scalar_mul(alpha.qpow(j))
        j += 1
        if q**j > _CONST_DEG_LIMIT:
            raise SizeLimitError("logarithm series guard exceeded")
    budget.n_terms["papanikolas_L"] = j - 1
    # an omitted term j >= stop moves the t^m coefficient by at most
    # q^(c_last - q m), so record that in the per-coefficient precision;
    # the tail only carries degrees above the cap
    out = {}
    for e, c in acc.terms.items():
        p_m = math.ceil(ram * (q * e[0] - c_last))
        out[e] = c.truncate(p_m)
    tail = c_exp - q * (tcap + 1)
    return TateElem(ctx, 1, tcap, out, tail, decay=(q, c_exp))


# -- block cancellation bound for lattice sums


def _cancel_exp(q: int, weight: int, j: int) -> int:
    """Extra decay exponent of a degree-j coordinate block sum.

    Summing prod_i a(t_i)^{r_i} * a^{-n} over all monic a of degree j runs
    each coordinate a_0..a_{j-1} over F_q.  A monomial survives the
    coordinate sums only if every coordinate appears with positive exponent
    divisible by q-1 (gamma-sum vanishing); exponents sourced from the
    a^{-n} expansion cost valuation (j - i) per unit at coordinate i, while
    the character factors contribute weight = sum r_i units for free.  The
    cheapest surviving monomial therefore costs

        C(j) = (q-1) * j(j+1)/2 - max total free reduction,

    where the free weight reduces coordinate costs greedily, (q-1) units at
    a time, starting at the most expensive coordinate.  The bound
    |block| <= q^{-jn - C(j)} is conservative (it assumes every multinomial
    coefficient is nonzero) and is cross-checked against exact block sums in
    the tests.
    """
    base = (q - 1) * j * (j + 1) // 2
    full, rem = divmod(weight, q - 1)
    full = min(full, j)
    red = (q - 1) * (full * j - full * (full - 1) // 2)
    if full < j:
        red += rem * (j - full)
    return max(0, base - red)


def _monic_block(ctx: Completion, j: int):
    """All monic degree-j lattice polynomials with their exact embeddings."""
    key = ("monic", j)
    if key not in ctx.cache:
        if ctx.q**j > _ENUM_LIMIT:
            raise SizeLimitError(f"block enumeration of size q^{j} refused")
        spec = ctx.spec
        out = []
        for idx in range(ctx.q**j):
            digits = []
            t = idx
            for _ in range(j):
                digits.append(spec.from_subfield(t % ctx.q))
                t //= ctx.q
            digits.append(spec.one)
            a = GFPoly(spec, tuple(digits), "theta")
            out.append((a, ctx.embed_poly(a)))
        ctx.cache[key] = out
    return ctx.cache[key]


def _char_coeffs(ctx: Completion, a: GFPoly, powers) -> dict:
    """Multi-exponent coefficients of prod_i a(t_i)^{powers[i]}."""
    per_var = []
    for p in powers:
        f = a.retag("t")
        pw = ctx.spec.poly([1], "t")
        base = f
        n = p
        while n:
            if n & 1:
                pw = pw * base
            base = base * base if n > 1 else base
            n >>= 1
        per_var.append([(k, c) for k, c in enumerate(pw.coeffs) if not c.is_zero()])
    out = {(): ctx.spec.one}
    for terms in per_var:
        nxt = {}
        for e, c in out.items():
            for k, ck in terms:
                key = e + (k,)
                v = c * ck
                if key in nxt:
                    v = nxt[key] + v
                if not v.is_zero():
                    nxt[key] = v
                elif key in nxt:
                    del nxt[key]
        out = nxt
    return out


def _block_data(ctx: Completion, j: int, powers):
    """Cached (embedding, character coefficients) pairs for a degree-j block."""
    key = ("blockdata", j, tuple(powers))
    if key not in ctx.cache:
        data = []
        for a, emb in _monic_block(ctx, j):
            data.append((emb, _char_coeffs(ctx, a, powers)))
        ctx.cache[key] = data
    return ctx.cache[key]


# -- the lattice sums


def psi(ctx: Completion, s: int, z: RamLaurent, degcap: int, tcap: int,
        budget: SeriesBudget, powers=None) -> TateElem:
    """sum over deg a < degcap of a(t_1)^{r_1}...a(t_s)^{r_s}/(z - a).

    powers defaults to all ones; a zero entry drops that variable's character
    factor (subset sums).  With total weight zero the a = 0 term survives and
    is kept.  Blocks are summed ascending by degree; once q^j exceeds |z| a
    block is bounded by q^{-(j + C(j))} (series expansion in z/a plus the
    coordinate cancellation bound) and blocks below the working precision are
    folded into the tail.
    """
    wp = budget.wp
    q, ram = ctx.q, ctx.ram
    if s < 0 or degcap < 1:
        raise ShapeMismatchError("need s >= 0 and degcap >= 1")
    if powers is None:
        powers = (1,) * s
    powers = tuple(powers)
    if len(powers) != s or any(p < 0 for p in powers):
        raise ShapeMismatchError("powers must list one exponent >= 0 per variable")
    weight = sum(powers)
    az = z.norm_exp()
    if Fraction(degcap) <= az:
        raise ConfigError(f"degcap {degcap} does not exceed log|z| = {az}")
    units = [c for c in ctx.spec.subfield_elements() if not c.is_zero()]
    out: dict = {}
    zero_e = (0,) * s

    def bump(e, val):
        prev = out.get(e)
        out[e] = val if prev is None else prev + val

    if weight == 0:
        if z.is_zero():
            raise LatticePoleError("z vanishes to working precision (a = 0 pole)")
        bump(zero_e, z.inv(wp))
    # blocks at degree >= degcap obey the same j + C(j) bound, which only grows
    tail = Fraction(-(degcap + _cancel_exp(q, weight, degcap)))
    blocks = []
    for j in range(degcap):
        c_j = _cancel_exp(q, weight, j)
        if Fraction(j) > az and ram * (j + c_j) >= wp + 2:
            tail = max(tail, Fraction(-(j + c_j)))
            continue
        blocks.append(j)
        for emb, chi in _block_data(ctx, j, powers):
            for c in units:
                denom = z - emb.scale(c)
                if denom.is_zero():
                    raise LatticePoleError(
                        f"z meets the lattice at degree {j} to precision {denom.prec}")
                invd = denom.inv(wp)
                cs = c**weight
                for e, coef in chi.items():
                    bump(e, invd.scale(coef * cs))
    budget.n_terms["psi"] = blocks
    return TateElem(ctx, s, tcap, out, tail)


def L_multi(ctx: Completion, s: int, n: int, degcap: int, tcap: int,
            budget: SeriesBudget, powers=None) -> TateElem:
    """sum over monic a, deg a < degcap, of a(t_1)^{r_1}...a(t_s)^{r_s} a^{-n}.

    powers defaults to all ones; the q-th-power character variants feed the
    difference-equation checks.  Block j carries |block| <= q^{-jn - C(j)}.
    """
    wp = budget.wp
    q, ram = ctx.q, ctx.ram
    if s < 0 or n < 1 or degcap < 1:
        raise ShapeMismatchError("need s >= 0, n >= 1, degcap >= 1")
    if powers is None:
        powers = (1,) * s
    if len(powers) != s or any(p < 1 for p in powers):
        raise ShapeMismatchError("powers must list one positive exponent per variable")
    weight = sum(powers)
    out: dict = {}
    tail = Fraction(-(n * degcap + _cancel_exp(q, weight, degcap)))
    blocks = []
    for j in range(degcap):
        c_j = _cancel_exp(q, weight, j)
        if ram * (j * n + c_j) >= wp + 2:
            tail = max(tail, Fraction(-(j * n + c_j)))
            continue
        blocks.append(j)
        for emb, chi in _block_data(ctx, j, powers):
            an_inv = emb.inv(wp) if n == 1 else (emb**n).inv(wp)
            for e, coef in chi.items():
                prev = out.get(e)
                v = an_inv.scale(coef)
                out[e] = v if prev is None else prev + v
    budget.n_terms["L_multi"] = blocks
    return TateElem(ctx, s, tcap, out, tail)


# -- exact ultrametric linear solves


def ram_solve(rows, rhs, wp: int):
    """Solve a small linear system with RamLaurent entries by elimination.

    Pivots on the largest-norm entry per column; raises on term-free pivot
    columns (the system is singular to working precision).
    """
    n = len(rows)
    if any(len(r) != n for r in rows) or len(rhs) != n:
        raise ShapeMismatchError("system must be square with matching rhs")
    A = [list(r) for r in rows]
    b = list(rhs)
    perm = list(range(n))
    for col in range(n):
        best, best_norm = None, NEG_INF
        for r in range(col, n):
            x = A[r][col]
            if not x.is_zero() and x.norm_exp() > best_norm:
                best, best_norm = r, x.norm_exp()
        if best is None:
            raise SingularSystemError(f"no usable pivot in column {col}")
        A[col], A[best] = A[best], A[col]
        b[col], b[best] = b[best], b[col]
        inv_p = A[col][col].inv(wp)
        for r in range(col + 1, n):
            if A[r][col].is_zero():
                continue
            f = A[r][col] * inv_p
            for c in range(col, n):
                A[r][c] = A[r][c] - f * A[col][c]
            b[r] = b[r] - f * b[col]
    out = [None] * n
    for r in range(n - 1, -1, -1):
        acc = b[r]
        for c in range(r + 1, n):
            acc = acc - A[r][c] * out[c]
        out[r] = acc * A[r][r].inv(wp)
    return out
