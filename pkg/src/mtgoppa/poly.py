"""Dense univariate polynomials over one tower level.

Coefficients are stored little-endian as packed digit indices (see gf);
the zero polynomial is the empty tuple and every stored polynomial is
normalized (nonzero leading coefficient).  Arithmetic is schoolbook
throughout: the decoder's operation counts are calibrated against the
classical long-division cost model, so no FFT/half-gcd shortcuts.

When an OpCounter is active, operations book exactly the number of
coefficient multiplications/additions/inversions the schoolbook
algorithm performs.
"""

from __future__ import annotations

from .errors import (
    BadDegrees,
    DivisionByZero,
    LevelMismatch,
    TooLarge,
    ZeroModulus,
    ZeroPolynomial,
)
from .gf import Felt, FieldSpec
from .opcount import get_counter
from .rng import SplitRng


class Poly:
    """Polynomial over a fixed (spec, level); immutable."""

    __slots__ = ("spec", "level", "coeffs")

    def __init__(self, spec: FieldSpec, level: int, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.spec = spec
        self.level = level
        self.coeffs = tuple(cs)

    # --- constructors -------------------------------------------------

    @classmethod
    def from_felts(cls, felts) -> "Poly":
        felts = list(felts)
        if not felts:
            raise ZeroPolynomial("from_felts needs at least one coefficient")
        spec, level = felts[0].spec, felts[0].level
        if any(f.spec is not spec or f.level != level for f in felts):
            raise LevelMismatch("coefficients must share spec and level")
        return cls(spec, level, [f.idx for f in felts])

    @classmethod
    def zero(cls, spec: FieldSpec, level: int) -> "Poly":
        return cls(spec, level, ())

    @classmethod
    def one(cls, spec: FieldSpec, level: int) -> "Poly":
        return cls(spec, level, (1,))

    @classmethod
    def x(cls, spec: FieldSpec, level: int) -> "Poly":
        return cls(spec, level, (0, 1))

    @classmethod
    def x_pow(cls, spec: FieldSpec, level: int, k: int) -> "Poly":
        return cls(spec, level, (0,) * k + (1,))

    @classmethod
    def constant(cls, c: Felt) -> "Poly":
        return cls(c.spec, c.level, (c.idx,))

    # --- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        """Degree with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def coeff(self, i: int) -> Felt:
        idx = self.coeffs[i] if 0 <= i < len(self.coeffs) else 0
        return Felt(self.spec, self.level, idx)

    def lc(self) -> Felt:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return Felt(self.spec, self.level, self.coeffs[-1])

    def felts(self) -> list[Felt]:
        return [Felt(self.spec, self.level, c) for c in self.coeffs]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _peer(self, other: "Poly") -> None:
        if other.spec is not self.spec or other.level != self.level:
            raise LevelMismatch("polynomials live on different levels")

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and (other.spec is self.spec or other.spec == self.spec)
            and other.level == self.level
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.level, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        pretty = self.spec.pretty
        terms = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            cs = pretty(self.level, c)
            if j == 0:
                terms.append(cs)
            else:
                xs = "x" if j == 1 else f"x^{j}"
                terms.append(xs if cs == "1" else f"({cs}){xs}")
        return "Poly(" + " + ".join(terms) + ")"

    # operators delegate to the module functions
    def __add__(self, other):
        return p_add(self, other)

    def __sub__(self, other):
        return p_sub(self, other)

    def __mul__(self, other):
        return p_mul(self, other)

    def __divmod__(self, other):
        return p_divmod(self, other)

    def __floordiv__(self, other):
        return p_divmod(self, other)[0]

    def __mod__(self, other):
        return p_divmod(self, other)[1]


def _tick(op: str, n: int) -> None:
    c = get_counter()
    if c is not None and n:
        c.tick(op, n)


def p_add(f: Poly, g: Poly) -> Poly:
    f._peer(g)
    spec, level = f.spec, f.level
    a, b = f.coeffs, g.coeffs
    if len(a) < len(b):
        a, b = b, a
    add = spec.add
    out = list(a)
    for i, c in enumerate(b):
        out[i] = add(level, out[i], c)
    _tick("add", len(b))
    return Poly(spec, level, out)


def p_sub(f: Poly, g: Poly) -> Poly:
    f._peer(g)
    spec, level = f.spec, f.level
    sub = spec.sub
    n = max(len(f.coeffs), len(g.coeffs))
    fa, ga = f.coeffs, g.coeffs
    out = [
        sub(level, fa[i] if i < len(fa) else 0, ga[i] if i < len(ga) else 0)
        for i in range(n)
    ]
    _tick("add", n)
    return Poly(spec, level, out)


def p_neg(f: Poly) -> Poly:
    spec, level = f.spec, f.level
    return Poly(spec, level, [spec.neg(level, c) for c in f.coeffs])


def p_scale(f: Poly, s: Felt) -> Poly:
    if s.spec is not f.spec or s.level != f.level:
        raise LevelMismatch("scalar level mismatch")
    if s.idx == 0:
        return Poly(f.spec, f.level, ())
    spec, level, si = f.spec, f.level, s.idx
    mul = spec.mul
    _tick("mul", len(f.coeffs))
    return Poly(spec, level, [mul(level, c, si) for c in f.coeffs])


def p_mul(f: Poly, g: Poly) -> Poly:
    f._peer(g)
    if f.is_zero() or g.is_zero():
        return Poly(f.spec, f.level, ())
    spec, level = f.spec, f.level
    mul, add = spec.mul, spec.add
    a, b = f.coeffs, g.coeffs
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = add(level, out[i + j], mul(level, x, y))
    _tick("mul", len(a) * len(b))
    _tick("add", len(a) * len(b))
    return Poly(spec, level, out)


def p_divmod(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    f._peer(g)
    if g.is_zero():
        raise DivisionByZero("polynomial division by zero")
    spec, level = f.spec, f.level
    if f.degree < g.degree:
        return Poly(spec, level, ()), f
    mul, sub, inv = spec.mul, spec.sub, spec.inv
    rem = list(f.coeffs)
    dg = g.degree
    glead_inv = inv(level, g.coeffs[-1])
    _tick("inv", 1)
    quot = [0] * (len(rem) - dg)
    gcs = g.coeffs
    steps = 0
    for k in range(len(rem) - 1, dg - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        q = mul(level, c, glead_inv)
        quot[k - dg] = q
        shift = k - dg
        for j in range(dg):
            if gcs[j]:
                rem[shift + j] = sub(level, rem[shift + j], mul(level, q, gcs[j]))
        rem[k] = 0
        steps += 1
    _tick("mul", steps * (dg + 1))
    _tick("add", steps * dg)
    return Poly(spec, level, quot), Poly(spec, level, rem[:dg])


def p_mod(f: Poly, g: Poly) -> Poly:
    return p_divmod(f, g)[1]


def p_eval(f: Poly, x: Felt) -> Felt:
    if x.spec is not f.spec or x.level != f.level:
        raise LevelMismatch("evaluation point level mismatch")
    spec, level, xi = f.spec, f.level, x.idx
    mul, add = spec.mul, spec.add
    acc = 0
    for c in reversed(f.coeffs):
        acc = add(level, mul(level, acc, xi), c)
    n = max(len(f.coeffs) - 1, 0)
    _tick("mul", n)
    _tick("add", n)
    return Felt(spec, level, acc)


def p_derivative(f: Poly) -> Poly:
    """Formal derivative; in characteristic p the x^p terms vanish."""
    spec, level = f.spec, f.level
    p = spec.p
    out = [0] * max(len(f.coeffs) - 1, 0)
    add = spec.add
    for j in range(1, len(f.coeffs)):
        c = f.coeffs[j]
        k = j % p
        if c == 0 or k == 0:
            continue
        acc = 0
        for _ in range(k):  # small integer multiple
            acc = add(level, acc, c)
        out[j - 1] = acc
    _tick("mul", max(len(f.coeffs) - 1, 0))
    return Poly(spec, level, out)


def p_monic(f: Poly) -> tuple[Poly, Felt]:
    """(monic multiple, former leading coefficient)."""
    if f.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    lead = f.lc()
    if lead.idx == 1:
        return f, lead
    spec, level = f.spec, f.level
    _tick("inv", 1)
    inv = Felt(spec, level, spec.inv(level, lead.idx))
    return p_scale(f, inv), lead


def p_gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor."""
    f._peer(g)
    a, b = f, g
    while not b.is_zero():
        a, b = b, p_mod(a, b)
    if a.is_zero():
        return a
    return p_monic(a)[0]


def p_compose(f: Poly, g: Poly) -> Poly:
    """f(g(x)) by Horner on polynomial coefficients."""
    f._peer(g)
    acc = Poly.zero(f.spec, f.level)
    for c in reversed(f.coeffs):
        acc = p_mul(acc, g)
        acc = p_add(acc, Poly(f.spec, f.level, (c,)))
    return acc


def p_mulmod(f: Poly, g: Poly, m: Poly) -> Poly:
    return p_mod(p_mul(f, g), m)


def p_powmod(f: Poly, e: int, m: Poly) -> Poly:
    if m.is_zero():
        raise ZeroModulus("zero modulus")
    result = Poly.one(f.spec, f.level)
    acc = p_mod(f, m)
    while e:
        if e & 1:
            result = p_mulmod(result, acc, m)
        e >>= 1
        if e:
            acc = p_mulmod(acc, acc, m)
    return result


def p_modinv(f: Poly, m: Poly) -> Poly:
    """Inverse of f modulo m (requires gcd(f, m) = 1)."""
    if m.is_zero():
        raise ZeroModulus("zero modulus")
    r0, r1 = m, p_mod(f, m)
    s0, s1 = Poly.zero(f.spec, f.level), Poly.one(f.spec, f.level)
    while not r1.is_zero():
        q, r = p_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, p_sub(s0, p_mul(q, s1))
    if r0.degree != 0:
        raise DivisionByZero("element not invertible modulo m")
    inv_c = Felt(f.spec, f.level, f.spec.inv(f.level, r0.coeffs[0]))
    return p_mod(p_scale(s0, inv_c), m)


# ---------------------------------------------------------------------
# extended Euclidean algorithm with full iteration history
# ---------------------------------------------------------------------


class EEATrace:
    """Complete remainder/cofactor history of the extended Euclid run.

    Index i runs from -1 to kappa+1 where kappa is the last index with a
    nonzero remainder; tau(kappa) is gcd(G, S) up to a scalar and
    tau(kappa+1) = 0.  Quotients q(i) exist for 1 <= i <= kappa+1.
    """

    __slots__ = ("G", "S", "_taus", "_us", "_sigmas", "_qs", "kappa")

    def __init__(self, G, S, taus, us, sigmas, qs, kappa):
        self.G = G
        self.S = S
        self._taus = taus
        self._us = us
        self._sigmas = sigmas
        self._qs = qs
        self.kappa = kappa

    def tau(self, i: int) -> Poly:
        return self._taus[i + 1]

    def u(self, i: int) -> Poly:
        return self._us[i + 1]

    def sigma(self, i: int) -> Poly:
        return self._sigmas[i + 1]

    def q(self, i: int) -> Poly:
        return self._qs[i - 1]

    @property
    def last_index(self) -> int:
        """kappa+1 if the run produced a zero remainder, else kappa (=-1 for S=0)."""
        return len(self._taus) - 2

    def gcd(self) -> Poly:
        if self.kappa >= -1:
            return self.tau(self.kappa) if self.kappa >= 0 else self.G
        return self.G

    def iterations(self):
        """(i, q_i, tau_i, u_i, sigma_i) for i = 1 .. last index."""
        for i in range(1, self.last_index + 1):
            yield i, self.q(i), self.tau(i), self.u(i), self.sigma(i)


def eea_trace(G: Poly, S: Poly) -> EEATrace:
    """Run the extended Euclidean algorithm to completion, keeping the
    whole (q_i, tau_i, u_i, sigma_i) history."""
    G._peer(S)
    if G.is_zero():
        raise ZeroModulus("G must be nonzero")
    if not S.is_zero() and S.degree >= G.degree:
        raise BadDegrees("require deg S < deg G")
    spec, level = G.spec, G.level
    one = Poly.one(spec, level)
    zero = Poly.zero(spec, level)

    taus = [G, S]
    us = [one, zero]
    sigmas = [zero, one]
    qs: list[Poly] = []

    while not taus[-1].is_zero():
        q, r = p_divmod(taus[-2], taus[-1])
        qs.append(q)
        taus.append(r)
        us.append(p_sub(us[-2], p_mul(q, us[-1])))
        sigmas.append(p_sub(sigmas[-2], p_mul(q, sigmas[-1])))

    kappa = len(taus) - 3  # taus[-1] is the zero remainder at index kappa+1
    return EEATrace(G, S, taus, us, sigmas, qs, kappa)


def trace_identities_hold(trace: EEATrace) -> bool:
    """Exact check of the four cofactor identities on every index."""
    G, S = trace.G, trace.S
    spec, level = G.spec, G.level
    one = Poly.one(spec, level)
    for i in range(0, trace.last_index + 1):
        lhs = p_sub(p_mul(trace.sigma(i), trace.tau(i - 1)), p_mul(trace.sigma(i - 1), trace.tau(i)))
        want = G if i % 2 == 0 else p_neg(G)
        if lhs != want:
            return False
        deg_sum = trace.sigma(i).degree + trace.tau(i - 1).degree
        if trace.sigma(i).is_zero() or trace.tau(i - 1).is_zero() or deg_sum != G.degree:
            return False
        lhs4 = p_sub(p_mul(trace.u(i), trace.sigma(i - 1)), p_mul(trace.u(i - 1), trace.sigma(i)))
        want4 = p_neg(one) if i % 2 == 0 else one
        if lhs4 != want4:
            return False
    for i in range(-1, trace.last_index + 1):
        lhs2 = p_add(p_mul(trace.u(i), G), p_mul(trace.sigma(i), S))
        if lhs2 != trace.tau(i):
            return False
    return True


# ---------------------------------------------------------------------
# irreducibility and factorization
# ---------------------------------------------------------------------


def p_is_irreducible(f: Poly) -> bool:
    """Distinct-degree criterion; degree <= 3 reduces to root-freeness."""
    d = f.degree
    if d < 1:
        return False
    spec, level = f.spec, f.level
    Q = spec.orders[level]
    if d == 1:
        return True
    if d <= 3 and Q <= 4096:
        for e in range(Q):
            if p_eval(f, Felt(spec, level, e)).idx == 0:
                return False
        return d in (2, 3)
    x = Poly.x(spec, level)
    fm = p_monic(f)[0]
    powers = {}
    cur = x
    for e in range(1, d + 1):
        cur = p_powmod(cur, Q, fm)
        powers[e] = cur
    if p_sub(powers[d], x) != Poly.zero(spec, level):
        return False
    seen = set()
    dd = d
    r = 2
    while r * r <= dd:
        if dd % r == 0:
            seen.add(r)
            while dd % r == 0:
                dd //= r
        r += 1
    if dd > 1:
        seen.add(dd)
    for r in seen:
        g = p_gcd(fm, p_sub(powers[d // r], x))
        if g.degree > 0:
            return False
    return True


def _pth_root(f: Poly) -> Poly:
    """Inverse of the Frobenius on a polynomial of the form g(x^p)."""
    spec, level = f.spec, f.level
    p = spec.p
    Q = spec.orders[level]
    out = []
    for j, c in enumerate(f.coeffs):
        if j % p == 0:
            out.append(spec.pow(level, c, Q // p))
        elif c != 0:
            raise ZeroPolynomial("not a p-th power")
    return Poly(spec, level, out)


def _squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """[(monic squarefree factor, multiplicity)] with product f (f monic)."""
    spec, level = f.spec, f.level
    p = spec.p
    out: list[tuple[Poly, int]] = []

    def rec(g: Poly, scale: int) -> None:
        if g.degree < 1:
            return
        d = p_derivative(g)
        if d.is_zero():
            rec(_pth_root(g), scale * p)
            return
        c = p_gcd(g, d)
        w = p_divmod(g, c)[0]
        i = 1
        while w.degree > 0:
            y = p_gcd(w, c)
            fac = p_divmod(w, y)[0]
            if fac.degree > 0:
                out.append((fac, i * scale))
            w = y
            c = p_divmod(c, y)[0]
            i += 1
        if c.degree > 0:
            rec(_pth_root(c), scale * p)

    rec(f, 1)
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """[(product of irreducible factors of degree d, d)] for monic squarefree f."""
    spec, level = f.spec, f.level
    Q = spec.orders[level]
    x = Poly.x(spec, level)
    out = []
    R = x
    d = 0
    while f.degree >= 1:
        d += 1
        if f.degree < 2 * d:
            out.append((f, f.degree))
            break
        R = p_powmod(R, Q, f)
        g = p_gcd(f, p_sub(R, x))
        if g.degree > 0:
            out.append((g, d))
            f = p_divmod(f, g)[0]
            R = p_mod(R, f)
    return out


def _equal_degree_split(f: Poly, d: int, rng: SplitRng) -> list[Poly]:
    """Cantor-Zassenhaus on a monic squarefree product of degree-d factors."""
    if f.degree == d:
        return [f]
    spec, level = f.spec, f.level
    Q = spec.orders[level]
    while True:
        v = Poly(spec, level, [rng.randrange(Q) for _ in range(f.degree)])
        if v.degree < 1:
            continue
        if spec.p == 2:
            k = Q.bit_length() - 1  # Q = 2^k
            t = v
            acc = v
            for _ in range(k * d - 1):
                acc = p_mulmod(acc, acc, f)
                t = p_add(t, acc)
            g = p_gcd(f, t)
        else:
            e = (Q**d - 1) // 2
            w = p_powmod(v, e, f)
            g = p_gcd(f, p_sub(w, Poly.one(spec, level)))
        if 0 < g.degree < f.degree:
            rest = p_divmod(f, g)[0]
            return _equal_degree_split(g, d, rng) + _equal_degree_split(rest, d, rng)


def p_factor(f: Poly, rng: SplitRng | None = None) -> list[tuple[Poly, int]]:
    """Full irreducible factorization as [(monic factor, multiplicity)].

    The product of factor^multiplicity times f's leading coefficient
    reassembles f.  Factors are sorted by (degree, coefficients) so the
    output is deterministic given the rng seed.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    spec, level = f.spec, f.level
    if spec.orders[level] > spec.enumeration_bound:
        raise TooLarge("field order beyond the configured factorization bound")
    if rng is None:
        rng = SplitRng("p-factor-default")
    out: list[tuple[Poly, int]] = []
    monic = p_monic(f)[0] if not f.is_monic() else f
    if monic.degree < 1:
        return out
    for sqfree, mult in _squarefree_decomposition(monic):
        for block, d in _distinct_degree(sqfree):
            for irr in _equal_degree_split(block, d, rng):
                out.append((irr, mult))
    out.sort(key=lambda fm: (fm[0].degree, fm[0].coeffs))
    return out


# --- text form -------------------------------------------------------


def poly_str(f: Poly) -> str:
    spec = f.spec
    if f.is_zero():
        return spec.felt_str(Felt(spec, f.level, 0))
    return ",".join(spec.felt_str(Felt(spec, f.level, c)) for c in f.coeffs)


def poly_from_str(spec: FieldSpec, level: int, s: str) -> Poly:
    parts = [p for p in s.strip().split(",") if p]
    return Poly(spec, level, [spec.felt_from_str(level, part).idx for part in parts])
