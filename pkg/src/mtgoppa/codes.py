"""Multi-twisted Goppa code construction and distance machinery.

A code is specified by a support L in the top tower field, a Goppa
polynomial g of degree t with g(alpha) != 0 on L, and ell >= 0 twists
(t_j, h_j, eta_j) with 1 <= t_1 < ... < t_ell < q^m - t and
0 <= h_1 <= ... <= h_ell < t.  The parity-check matrix over F_{q^m} has
row r carrying alpha^r * g(alpha)^-1, except hook rows h_j which carry
(alpha^{h_j} + eta_j alpha^{t-1+t_j}) * g(alpha)^-1; equal hooks sum
their twist terms into one row.  The code over the base field F_q is
the kernel of the subfield expansion of that matrix.

Rows and hooks are 0-based internally; the published convention
(hook h_j sits in the (h_j+1)-th row) applies only at the text
serialization boundary.

Codeword vectors are tuples of packed digit indices at the code's base
level.  Brute-force enumeration packs char-2 codewords into integer
bitmaps so toy codebooks (up to the configured 2^20 bound) stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import (
    GoppaRootInSupport,
    ParamViolation,
    TooLarge,
)
from .gf import Felt, FieldSpec
from .linalg import FMatrix, null_space_basis, rank, subfield_expand
from .poly import Poly, p_add, p_eval, p_mod, p_mul, p_scale, p_sub

DEFAULT_SUBSET_BOUND = 10**6
DEFAULT_CODEBOOK_BOUND = 1 << 20


@dataclass(frozen=True)
class Twist:
    """One twist: degree offset t, hook row h, coefficient eta (packed idx)."""

    t: int
    h: int
    eta: int


@dataclass(frozen=True)
class MtgParams:
    spec: FieldSpec
    base_level: int
    s0_level: int
    support: tuple[int, ...]  # packed idx at the top level
    goppa: Poly               # over the top level
    twists: tuple[Twist, ...]

    @property
    def n(self) -> int:
        return len(self.support)

    @property
    def t(self) -> int:
        return self.goppa.degree

    @property
    def ell(self) -> int:
        return len(self.twists)

    @property
    def m(self) -> int:
        """Extension degree of the top field over the base field."""
        return self.spec.dims[self.spec.top] // self.spec.dims[self.base_level]

    def support_felts(self) -> list[Felt]:
        top = self.spec.top
        return [Felt(self.spec, top, a) for a in self.support]

    def eta_felts(self) -> list[Felt]:
        top = self.spec.top
        return [Felt(self.spec, top, tw.eta) for tw in self.twists]


def mtg_params(
    spec: FieldSpec,
    base_level: int,
    support,
    goppa: Poly,
    twists,
    s0_level: int | None = None,
) -> MtgParams:
    """Validate and freeze code parameters."""
    top = spec.top
    if not 0 <= base_level <= top:
        raise ParamViolation("base level outside the tower")
    s0 = top if s0_level is None else s0_level
    if not base_level <= s0 <= top:
        raise ParamViolation("s0 stage must sit between base and top")

    sup = tuple(int(a) for a in support)
    if len(set(sup)) != len(sup):
        raise ParamViolation("support points must be distinct")
    if not sup:
        raise ParamViolation("empty support")
    if any(a < 0 or a >= spec.orders[top] for a in sup):
        raise ParamViolation("support point outside the top field")

    if goppa.spec is not spec or goppa.level != top:
        raise ParamViolation("Goppa polynomial must live at the top level")
    t = goppa.degree
    if t < 1:
        raise ParamViolation("deg g >= 1 required")

    for a in sup:
        if p_eval(goppa, Felt(spec, top, a)).idx == 0:
            raise GoppaRootInSupport(f"g vanishes on support point {a}")

    tws = tuple(Twist(int(tj), int(hj), int(ej)) for (tj, hj, ej) in twists)
    qm = spec.orders[top]
    prev_t, prev_h = 0, -1
    for tw in tws:
        if not 1 <= tw.t < qm - t:
            raise ParamViolation(f"twist degree {tw.t} out of range")
        if tw.t <= prev_t:
            raise ParamViolation("twist degrees must strictly increase")
        if not 0 <= tw.h < t:
            raise ParamViolation(f"hook {tw.h} out of range")
        if tw.h < prev_h:
            raise ParamViolation("hooks must be non-decreasing")
        if not 0 <= tw.eta < qm:
            raise ParamViolation("eta outside the top field")
        prev_t, prev_h = tw.t, tw.h
    return MtgParams(spec, base_level, s0, sup, goppa, tws)


def build_parity_check(params: MtgParams) -> FMatrix:
    """The t x n matrix over F_{q^m} whose kernel (over F_q) is the code."""
    spec = params.spec
    top = spec.top
    t = params.t
    g = params.goppa
    mul, add, inv, powf = spec.mul, spec.add, spec.inv, spec.pow
    rows = [[0] * params.n for _ in range(t)]
    for i, alpha in enumerate(params.support):
        ginv = inv(top, p_eval(g, Felt(spec, top, alpha)).idx)
        acc = 1
        col = [0] * t
        for r in range(t):
            col[r] = acc
            acc = mul(top, acc, alpha)
        for tw in params.twists:
            term = mul(top, tw.eta, powf(top, alpha, t - 1 + tw.t))
            col[tw.h] = add(top, col[tw.h], term)
        for r in range(t):
            rows[r][i] = mul(top, col[r], ginv)
    return FMatrix(spec, top, rows, params.n)


class MtgCode:
    """A built code: parity checks, expansion, generator, decode tables.

    Expansion and generator extraction are lazy so decoding-only work
    (e.g. the complexity sweeps) never pays for F_q linear algebra.
    """

    def __init__(self, params: MtgParams, expurgated: bool = False):
        self.params = params
        self.expurgated = expurgated

    @property
    def spec(self) -> FieldSpec:
        return self.params.spec

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def t(self) -> int:
        return self.params.t

    @cached_property
    def H(self) -> FMatrix:
        """Parity check over F_{q^m}; expurgated codes append the ones row."""
        H = build_parity_check(self.params)
        if not self.expurgated:
            return H
        ones = [1] * self.n
        return FMatrix(self.spec, self.spec.top, list(H.rows) + [ones], self.n)

    @cached_property
    def expanded(self) -> FMatrix:
        """Subfield expansion of H down to the base level (all rows kept)."""
        return subfield_expand(self.H, self.params.base_level)

    @cached_property
    def generator(self) -> FMatrix:
        return null_space_basis(self.expanded)

    @property
    def k(self) -> int:
        return self.generator.nrows

    @cached_property
    def _decode_tables(self):
        """Per-support cached values the decoder consumes: g(a), g(a)^-1,
        a^-1 (None for a = 0), and a^{t-1+t_1}."""
        spec = self.spec
        top = spec.top
        g = self.params.goppa
        t = self.t
        t1 = self.params.twists[0].t if self.params.twists else 1
        g_at, ginv_at, alpha_inv, alpha_twist = [], [], [], []
        for a in self.params.support:
            ga = p_eval(g, Felt(spec, top, a)).idx
            g_at.append(ga)
            ginv_at.append(spec.inv(top, ga))
            alpha_inv.append(spec.inv(top, a) if a else None)
            alpha_twist.append(spec.pow(top, a, t - 1 + t1))
        return g_at, ginv_at, alpha_inv, alpha_twist

    def syndrome(self, word) -> list[int]:
        """H * word^T with the word embedded from the base level."""
        spec = self.spec
        top = spec.top
        mul, add = spec.mul, spec.add
        out = []
        for row in self.H.rows:
            acc = 0
            for h, c in zip(row, word):
                if h and c:
                    acc = add(top, acc, mul(top, h, c))
            out.append(acc)
        return out

    def is_codeword(self, word) -> bool:
        return all(s == 0 for s in self.syndrome(word))


def build_code(params: MtgParams, verify: bool = True) -> MtgCode:
    """Construct the code; optionally check every generator row against
    the defining congruence (an independent route from the matrix kernel)."""
    code = MtgCode(params)
    if verify:
        for row in code.generator.rows:
            if not syndrome_congruence_check(params, row):
                raise ParamViolation("generator row fails the defining congruence")
    return code


def build_expurgated(params: MtgParams, verify: bool = True) -> MtgCode:
    """The subcode whose codewords additionally sum to zero."""
    code = MtgCode(params, expurgated=True)
    if verify:
        spec = params.spec
        base = params.base_level
        add = spec.add
        for row in code.generator.rows:
            if not syndrome_congruence_check(params, row):
                raise ParamViolation("generator row fails the defining congruence")
            total = 0
            for c in row:
                total = add(base, total, c)
            if total != 0:
                raise ParamViolation("expurgated row does not sum to zero")
    return code


# ---------------------------------------------------------------------
# the defining congruence, evaluated symbolically
# ---------------------------------------------------------------------


def linear_quotient(g: Poly, alpha: Felt) -> tuple[Poly, Felt]:
    """Synthetic division: g(z) = (z - alpha) * Q(z) + g(alpha)."""
    spec, level = g.spec, g.level
    mul, add = spec.mul, spec.add
    t = g.degree
    out = [0] * t
    acc = g.coeffs[-1]
    for k in range(t - 1, -1, -1):
        out[k] = acc
        acc = add(level, mul(level, acc, alpha.idx), g.coeffs[k])
    return Poly(spec, level, out), Felt(spec, level, acc)


def shifted_tail(g: Poly, h: int) -> Poly:
    """U^{h+1}(z) . g  =  g_{h+1} + g_{h+2} z + ... + g_t z^{t-h-1}."""
    return Poly(g.spec, g.level, g.coeffs[h + 1 :])


def syndrome_congruence_check(params: MtgParams, word) -> bool:
    """Evaluate the defining member congruence of the code directly.

    Computes sum_i c_i * ((z - alpha_i)^{-1} - sum_j eta_j alpha_i^{t-1+t_j}
    g(alpha_i)^{-1} (U^{h_j+1}(z).g)) mod g and tests for zero, using the
    modular inverse (z - alpha)^{-1} = -g(alpha)^{-1} (g(z)-g(alpha))/(z-alpha).
    """
    spec = params.spec
    top = spec.top
    g = params.goppa
    t = params.t
    if len(word) != params.n:
        raise ParamViolation("word length mismatch")
    tails = [shifted_tail(g, tw.h) for tw in params.twists]
    acc = Poly.zero(spec, top)
    for i, alpha_idx in enumerate(params.support):
        c = word[i]
        if c == 0:
            continue
        cf = Felt(spec, top, c)
        alpha = Felt(spec, top, alpha_idx)
        quot, g_at = linear_quotient(g, alpha)
        ginv = g_at.inverse()
        inv_poly = p_scale(quot, -ginv)
        term = p_scale(inv_poly, cf)
        for tw, tail in zip(params.twists, tails):
            scalar = (
                Felt(spec, top, tw.eta)
                * Felt(spec, top, spec.pow(top, alpha_idx, t - 1 + tw.t))
                * ginv
                * cf
            )
            term = p_sub(term, p_scale(tail, scalar))
        acc = p_add(acc, term)
    return p_mod(acc, g).is_zero()


# ---------------------------------------------------------------------
# distance criteria (matrix form) and brute-force oracles
# ---------------------------------------------------------------------


def _sigma_coeffs(spec: FieldSpec, level: int, points: list[int]) -> list[int]:
    """Coefficients of prod (x - alpha) for the given packed points."""
    poly = Poly.one(spec, level)
    for a in points:
        poly = p_mul(poly, Poly(spec, level, (spec.neg(level, a), 1)))
    return list(poly.coeffs)


def _twist_system_matrix(
    spec: FieldSpec,
    level: int,
    sigma: list[int],
    deg: int,
    twists,
) -> FMatrix:
    """The t_ell x t_ell coefficient-matching system from the distance and
    MDS criteria: rows are the x^i coefficient equations of sigma*gamma = f
    for i = deg .. deg-1+t_ell, with the twist rows i = deg-1+t_s carrying
    the extra -eta_s * sigma_{h_s - j} term."""
    t_ell = twists[-1].t
    by_exponent = {deg - 1 + tw.t: tw for tw in twists}

    def sig(i: int) -> int:
        return sigma[i] if 0 <= i < len(sigma) else 0

    rows = []
    for i in range(deg, deg + t_ell):
        tw = by_exponent.get(i)
        row = []
        for j in range(t_ell):
            v = sig(i - j)
            if tw is not None:
                v = spec.sub(level, v, spec.mul(level, tw.eta, sig(tw.h - j)))
            row.append(v)
        rows.append(row)
    return FMatrix(spec, level, rows, t_ell)


def distance_criterion_check(params: MtgParams, bound: int = DEFAULT_SUBSET_BOUND) -> bool:
    """Sufficient condition for minimum distance >= t+1: for every t-subset
    of the support, the twist coefficient-matching system is non-singular.

    With no twists the system is empty and the classical Vandermonde
    argument applies, so the answer is True.
    """
    spec = params.spec
    top = spec.top
    n, t = params.n, params.t
    if not params.twists:
        return True
    if math.comb(n, t) > bound:
        raise TooLarge(f"C({n},{t}) exceeds the subset enumeration bound")
    t_ell = params.twists[-1].t
    for subset in combinations(params.support, t):
        sigma = _sigma_coeffs(spec, top, list(subset))
        M = _twist_system_matrix(spec, top, sigma, t, params.twists)
        if rank(M) < t_ell:
            return False
    return True


def tower_distance_guarantee(params: MtgParams) -> bool:
    """Checkable hypothesis implying d >= t+1: support and g over the s0
    stage, and each eta_i in stage(s0+i) minus stage(s0+i-1)."""
    spec = params.spec
    s0 = params.s0_level
    if s0 + params.ell != spec.top:
        return False
    for a in params.support:
        if a >= spec.orders[s0]:
            return False
    for c in params.goppa.coeffs:
        if c >= spec.orders[s0]:
            return False
    for i, tw in enumerate(params.twists, start=1):
        if tw.eta >= spec.orders[s0 + i]:
            return False
        if tw.eta < spec.orders[s0 + i - 1]:
            return False
    return True


# --- MTRS (evaluation-side) constructions, used by the MDS criterion ---


def mtrs_generator(
    spec: FieldSpec,
    level: int,
    k: int,
    alphas: list[int],
    twists,
    multipliers: list[int] | None = None,
) -> FMatrix:
    """Generator of the (generalized) multi-twisted evaluation code: row r
    evaluates x^r + sum_{h_j = r} eta_j x^{k-1+t_j} on the alphas, scaled
    by the optional column multipliers."""
    mul, add, powf = spec.mul, spec.add, spec.pow
    rows = []
    for r in range(k):
        row = []
        for i, a in enumerate(alphas):
            v = powf(level, a, r)
            for tw in twists:
                if tw.h == r:
                    v = add(level, v, mul(level, tw.eta, powf(level, a, k - 1 + tw.t)))
            if multipliers is not None:
                v = mul(level, v, multipliers[i])
            row.append(v)
        rows.append(row)
    return FMatrix(spec, level, rows, len(alphas))


def mds_matrix_criterion(
    spec: FieldSpec,
    level: int,
    k: int,
    alphas: list[int],
    twists,
    bound: int = DEFAULT_SUBSET_BOUND,
) -> bool:
    """Necessary and sufficient matrix test for the multi-twisted
    evaluation code of dimension k to be MDS (single-field setting)."""
    twists = tuple(Twist(int(t), int(h), int(e)) for (t, h, e) in twists)
    if not twists:
        return True
    seen_h = set()
    prev_t = 0
    for tw in twists:
        if tw.h in seen_h or not 0 <= tw.h < k:
            raise ParamViolation("MDS criterion requires strictly increasing hooks below k")
        if tw.t <= prev_t:
            raise ParamViolation("twist degrees must strictly increase")
        if tw.eta == 0:
            raise ParamViolation("MTRS twists must be nonzero")
        seen_h.add(tw.h)
        prev_t = tw.t
    n = len(alphas)
    if math.comb(n, k) > bound:
        raise TooLarge(f"C({n},{k}) exceeds the subset enumeration bound")
    t_ell = twists[-1].t
    for subset in combinations(alphas, k):
        sigma = _sigma_coeffs(spec, level, list(subset))
        M = _twist_system_matrix(spec, level, sigma, k, twists)
        if rank(M) < t_ell:
            return False
    return True


# --- codeword enumeration ------------------------------------------------


class Codebook:
    """Exhaustive codeword enumeration with packed char-2 fast path.

    Enumerates all q^k words of the row space once; reused for minimum
    distance and nearest-codeword queries.
    """

    def __init__(self, generator: FMatrix, bound: int = DEFAULT_CODEBOOK_BOUND):
        spec, level = generator.spec, generator.level
        q = spec.orders[level]
        k, n = generator.nrows, generator.ncols
        if q**k > bound:
            raise TooLarge(f"codebook size {q}^{k} exceeds bound {bound}")
        self.spec, self.level, self.n, self.k, self.q = spec, level, n, k, q
        self.packed = spec.p == 2
        if self.packed:
            w = spec.dims[level]
            self.w = w
            self.mask = sum(1 << (w * i) for i in range(n))
            words = [0]
            for row in generator.rows:
                scaled = []
                for s in range(1, q):
                    scaled.append(self._pack([spec.mul(level, s, c) for c in row]))
                words = words + [wd ^ sr for sr in scaled for wd in words]
            self.words = words
        else:
            words = [tuple([0] * n)]
            add, mul = spec.add, spec.mul
            for row in generator.rows:
                extra = []
                for s in range(1, q):
                    srow = tuple(mul(level, s, c) for c in row)
                    extra.extend(
                        tuple(add(level, a, b) for a, b in zip(wd, srow)) for wd in words
                    )
                words = words + extra
            self.words = words

    def _pack(self, word) -> int:
        acc = 0
        w = self.w
        for i, c in enumerate(word):
            acc |= c << (w * i)
        return acc

    def _weight_packed(self, v: int) -> int:
        u = v
        for j in range(1, self.w):
            u |= v >> j
        return (u & self.mask).bit_count()

    def unpack(self, v: int) -> tuple[int, ...]:
        w = self.w
        sym = (1 << w) - 1
        return tuple((v >> (w * i)) & sym for i in range(self.n))

    def min_distance(self) -> int:
        if self.packed:
            return min(
                (self._weight_packed(v) for v in self.words if v), default=0
            )
        best = None
        for wd in self.words:
            if any(wd):
                wt = sum(1 for c in wd if c)
                if best is None or wt < best:
                    best = wt
        return best or 0

    def nearest(self, word) -> tuple[tuple[int, ...], int, int]:
        """(closest codeword, distance, number of codewords at that distance)."""
        if self.packed:
            target = self._pack(word)
            best_v, best_d, count = 0, None, 0
            for v in self.words:
                d = self._weight_packed(v ^ target)
                if best_d is None or d < best_d:
                    best_v, best_d, count = v, d, 1
                elif d == best_d:
                    count += 1
            return self.unpack(best_v), best_d, count
        sub = self.spec.sub
        best_w, best_d, count = None, None, 0
        for wd in self.words:
            d = sum(1 for a, b in zip(wd, word) if a != b)
            if best_d is None or d < best_d:
                best_w, best_d, count = wd, d, 1
            elif d == best_d:
                count += 1
        return tuple(best_w), best_d, count


def min_distance_bruteforce(code: MtgCode, bound: int = DEFAULT_CODEBOOK_BOUND) -> int:
    """Exact minimum nonzero Hamming weight by full enumeration."""
    return Codebook(code.generator, bound).min_distance()
