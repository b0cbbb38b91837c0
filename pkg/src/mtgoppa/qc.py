"""Quasi-cyclic twisted Goppa codes over odd characteristic.

The order-2 affine involution x -> b - x partitions F_{q^m} into the
fixed point b/2 and (q^m - 1)/2 two-element orbits {x, b-x}.  Taking
the support as a union of orbits and a polynomial with g(b-x) = g(x)
(always of the form f((x - b/2)^2) in odd characteristic) makes the
induced coordinate permutation an automorphism of the twisted code
with hook t-2, so the code is quasi-cyclic of order |L|/2.

The construction regime is t = 1 + p^s, which forces p | C(t,2) (the
identity the hook-row reduction needs) and makes t even.

A = +/-1 shifts are the only involutive scalings a field admits, so the
certified automorphism group is generated by sigma_{-1,b} maps and the
identity; `paut_membership` nevertheless checks any affine map whose
action fixes the support setwise.

Key-size compression is a storage transform: a subset R of the reduced
parity rows is stored such that R together with its images under the
induced permutation spans the full row space; the loader reconstructs
and re-reduces.  The layout is recorded in the key header.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import MtgCode, mtg_params
from .errors import (
    BadT,
    EvenCharacteristic,
    FixedPointInSupport,
    ParamViolation,
    SupportNotInvariant,
    ZeroShift,
)
from .gf import Felt, FieldSpec
from .linalg import FMatrix, rank, row_space_equal, rref
from .poly import Poly, p_compose, p_mul


@dataclass(frozen=True)
class AffineMap:
    """x -> a*x + b on one tower level."""

    a: Felt
    b: Felt

    def __post_init__(self):
        if self.a.idx == 0:
            raise ParamViolation("affine maps need a != 0")

    def __call__(self, x: Felt) -> Felt:
        return self.a * x + self.b

    def compose(self, other: "AffineMap") -> "AffineMap":
        # (a,b) o (c,d) = (ac, ad + b)
        return AffineMap(self.a * other.a, self.a * other.b + self.b)

    def inverse(self) -> "AffineMap":
        a_inv = self.a.inverse()
        return AffineMap(a_inv, -(a_inv * self.b))

    def order(self, cap: int = 1 << 20) -> int:
        spec, level = self.a.spec, self.a.level
        ident = AffineMap(spec.one(level), spec.zero(level))
        cur = self
        for k in range(1, cap + 1):
            if cur.a == ident.a and cur.b == ident.b:
                return k
            cur = self.compose(cur)
        raise ParamViolation("order exceeds cap")


@dataclass
class OrbitPartition:
    map: AffineMap
    fixed_point: Felt
    orbits: list[tuple[Felt, Felt]]


def orbit_partition(b: Felt) -> OrbitPartition:
    """Orbits of x -> b - x: the fixed point b/2 plus 2-element orbits."""
    spec, level = b.spec, b.level
    if spec.p == 2:
        raise EvenCharacteristic("orbit construction needs odd characteristic")
    if b.idx == 0:
        raise ZeroShift("b must be nonzero")
    neg_one = spec.scalar(level, spec.p - 1)
    sigma = AffineMap(neg_one, b)
    half = spec.one(level) / (spec.one(level) + spec.one(level))
    fixed = b * half
    seen = {fixed.idx}
    orbits = []
    for x in spec.enumerate_level(level):
        if x.idx in seen:
            continue
        y = sigma(x)
        seen.add(x.idx)
        seen.add(y.idx)
        orbits.append((x, y))
    return OrbitPartition(sigma, fixed, orbits)


def symmetric_goppa_poly(f: Poly, b: Felt) -> Poly:
    """g(x) = f((x - b/2)^2); satisfies g(b - x) = g(x)."""
    spec, level = f.spec, f.level
    if spec.p == 2:
        raise EvenCharacteristic("symmetric polynomials need odd characteristic")
    half = spec.one(level) / (spec.one(level) + spec.one(level))
    shift = Poly.from_felts([-(b * half), spec.one(level)])
    return p_compose(f, p_mul(shift, shift))


def induced_permutation(map_: AffineMap, support: list[int]) -> tuple[int, ...]:
    """sigma with support[sigma(i)] = a*support[i] + b; requires setwise
    invariance."""
    spec, level = map_.a.spec, map_.a.level
    pos = {a: i for i, a in enumerate(support)}
    out = []
    for a in support:
        img = map_(Felt(spec, level, a)).idx
        if img not in pos:
            raise SupportNotInvariant(f"image of {a} leaves the support")
        out.append(pos[img])
    return tuple(out)


def permute_word(word, perm) -> tuple:
    """(c_1,...,c_n) -> (c_{perm(1)},...,c_{perm(n)})."""
    return tuple(word[perm[i]] for i in range(len(word)))


def paut_membership(code: MtgCode, map_: AffineMap) -> bool:
    """True iff the induced coordinate permutation maps the code onto
    itself (row-space comparison of permuted generators)."""
    perm = induced_permutation(map_, list(code.params.support))
    G = code.generator
    permuted = FMatrix(G.spec, G.level, [permute_word(r, perm) for r in G.rows], G.ncols)
    return row_space_equal(G, permuted)


@dataclass
class QcCode:
    code: MtgCode
    b: Felt
    seed_poly: Poly
    orbit_reps: list[Felt]
    qc_order: int
    permutation: tuple[int, ...]


def build_qc_code(b: Felt, reps: list[Felt], seed_poly: Poly, eta: Felt, t1: int = 1) -> QcCode:
    """Support = union of the sigma_{-1,b} orbits of `reps`; hook t-2.

    Requires odd p, t = 2*deg(seed_poly) of the form 1 + p^s, the fixed
    point b/2 outside the support and g nonvanishing on it; certifies
    quasi-cyclicity of order |L|/2 by an actual automorphism check.
    """
    spec, level = b.spec, b.level
    p = spec.p
    if p == 2:
        raise EvenCharacteristic("QC construction needs odd characteristic")
    if b.idx == 0:
        raise ZeroShift("b must be nonzero")
    if not reps:
        raise ParamViolation("empty orbit representative list")
    g = symmetric_goppa_poly(seed_poly, b)
    t = g.degree
    s_pow = t - 1
    if s_pow < 1 or p ** _ilog(s_pow, p) != s_pow:
        raise BadT(f"t = {t} is not of the form 1 + {p}^s")
    half = spec.one(level) / (spec.one(level) + spec.one(level))
    fixed = b * half
    neg_one = spec.scalar(level, p - 1)
    sigma = AffineMap(neg_one, b)
    support: list[int] = []
    for x in reps:
        if x == fixed:
            raise FixedPointInSupport("orbit representative equals b/2")
        y = sigma(x)
        for pt in (x, y):
            if pt.idx not in support:
                support.append(pt.idx)
    params = mtg_params(
        spec,
        base_level=0,
        support=support,
        goppa=g,
        twists=[(t1, t - 2, eta.idx)],
    )
    code = MtgCode(params)
    perm = induced_permutation(sigma, support)
    if not paut_membership(code, sigma):
        raise ParamViolation("induced permutation is not an automorphism")
    return QcCode(code, b, seed_poly, list(reps), len(support) // 2, perm)


def _ilog(n: int, p: int) -> int:
    k = 0
    while p**(k + 1) <= n:
        k += 1
    return k


# --- storage transform ----------------------------------------------------


def packed_parity_rows(qc: QcCode) -> list[tuple[int, ...]]:
    """A subset R of the reduced parity rows with span(R u R perm) equal
    to the full parity row space; greedy and deterministic."""
    code = qc.code
    R, _ = rref(code.expanded)
    full_rank = R.nrows
    spec, level = R.spec, R.level
    chosen: list[tuple[int, ...]] = []

    def span_rank(rows):
        if not rows:
            return 0
        return rank(FMatrix(spec, level, rows, R.ncols))

    current: list[tuple[int, ...]] = []
    for row in R.rows:
        if span_rank(current) == full_rank:
            break
        permuted = permute_word(row, qc.permutation)
        trial = current + [row, permuted]
        if span_rank(trial) > span_rank(current):
            chosen.append(row)
            current = trial
    if span_rank(current) != full_rank:
        # fall back to storing everything (no compression possible)
        return [tuple(r) for r in R.rows]
    return chosen


def unpack_parity_rows(qc_perm, stored_rows, spec: FieldSpec, level: int, ncols: int) -> FMatrix:
    """Reconstruct the full parity row space from packed representative rows."""
    rows = []
    for r in stored_rows:
        rows.append(tuple(r))
        rows.append(permute_word(r, qc_perm))
    return rref(FMatrix(spec, level, rows, ncols))[0]
