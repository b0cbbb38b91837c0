"""Niederreiter public-key encryption over twisted Goppa codes.

Key generation samples, from one seeded stream: an irreducible degree-t
Goppa polynomial over the s0 stage, a distinct support from F_{s0}^*,
a twist coefficient eta outside the s0 stage (so the tower distance
guarantee certifies d >= t+1), an invertible scramble S and a support
permutation.  The public key is H_pub = S * H_base * P where H_base is
the full-rank reduced parity check of the secret code over F_q.

The error weight is fixed at floor(t/2), the certified decoding radius
of the construction (a code with d >= t+1 uniquely decodes that many
errors), rather than the nominal t of generic Niederreiter
descriptions.

Decryption solves H_base x^T = S^{-1} c for any particular x (trivial
from the rref pivots), decodes x, un-permutes the recovered error and
re-verifies H_pub e^T = c, so a tampered ciphertext either fails or
yields an error vector that honestly explains the tampered syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import hashlib

from .codes import MtgCode, MtgParams, mtg_params, tower_distance_guarantee
from .decoder import decode
from .errors import (
    DecodeFailure,
    DecryptFailure,
    LengthMismatch,
    ParamInfeasible,
    RetryExhausted,
    WeightOutOfRange,
    WrongWeight,
)
from .gf import FieldSpec, field_build
from .linalg import FMatrix, inverse, mat_vec, rref
from .poly import Poly, p_is_irreducible
from .rng import RNG_ID, SplitRng

_KEYGEN_RETRIES = 2000


@dataclass(frozen=True)
class KeygenConfig:
    """Field tower plus code-shape parameters for key generation."""

    p: int
    moduli: tuple[tuple[int, ...], ...]
    base_level: int
    s0_level: int
    n: int
    t: int
    t1: int = 1
    h: int = 0
    log_table_bound: int | None = None

    def build_spec(self) -> FieldSpec:
        kwargs = {}
        if self.log_table_bound is not None:
            kwargs["log_table_bound"] = self.log_table_bound
        return field_build(self.p, [list(m) for m in self.moduli], **kwargs)


@dataclass
class PublicKey:
    spec: FieldSpec
    base_level: int
    n: int
    k: int
    t: int
    t1: int
    h: int
    H_pub: FMatrix
    rng_id: str
    seed_tag: str

    @property
    def error_weight(self) -> int:
        return self.t // 2


@dataclass
class SecretKey:
    params: MtgParams
    S: FMatrix
    perm: tuple[int, ...]  # column j of H_pub is column perm[j] of S*H_base
    rng_id: str
    seed_tag: str

    @cached_property
    def code(self) -> MtgCode:
        return MtgCode(self.params)

    @cached_property
    def H_base(self) -> FMatrix:
        return rref(self.code.expanded)[0]

    @cached_property
    def _pivots(self) -> tuple[int, ...]:
        return rref(self.code.expanded)[1]

    @cached_property
    def S_inv(self) -> FMatrix:
        out = inverse(self.S)
        if out is None:
            raise ParamInfeasible("stored scramble matrix is singular")
        return out

    @cached_property
    def public_matrix(self) -> FMatrix:
        return _mat_mul_cols(self.S, self.H_base, list(self.perm))


Ciphertext = tuple


def seed_tag(seed) -> str:
    return hashlib.sha256(f"{RNG_ID}|{seed}".encode()).hexdigest()[:16]


def keygen(config: KeygenConfig, seed) -> tuple[PublicKey, SecretKey]:
    """Deterministic keypair from (config, seed)."""
    spec = config.build_spec()
    top = spec.top
    if not 0 <= config.base_level <= config.s0_level < top:
        raise ParamInfeasible("need base <= s0 < top for a twisted instance")
    if config.s0_level + 1 != top:
        raise ParamInfeasible("single-twist tower guarantee needs s0 one stage below the top")
    if config.t < 2:
        raise ParamInfeasible("t < 2 leaves no correctable errors")
    if not 0 <= config.h < config.t:
        raise ParamInfeasible("hook out of range")
    if not 1 <= config.t1 < spec.orders[top] - config.t:
        raise ParamInfeasible("twist degree out of range")
    s0_order = spec.orders[config.s0_level]
    if config.n > s0_order - 1:
        raise ParamInfeasible(f"support needs n <= {s0_order - 1} nonzero stage points")

    rng = SplitRng(seed, "keygen")
    g_rng = rng.split("goppa")
    coeffs = None
    for _ in range(_KEYGEN_RETRIES):
        cand = [g_rng.randrange(s0_order) for _ in range(config.t)] + [1]
        gs0 = Poly(spec, config.s0_level, cand)
        if gs0.degree == config.t and p_is_irreducible(gs0):
            coeffs = cand
            break
    if coeffs is None:
        raise RetryExhausted("no irreducible Goppa polynomial found")
    goppa = Poly(spec, top, coeffs)

    sup_rng = rng.split("support")
    support = sup_rng.sample(range(1, s0_order), config.n)

    eta_rng = rng.split("eta")
    eta = eta_rng.randrange(s0_order, spec.orders[top])

    params = mtg_params(
        spec,
        config.base_level,
        support,
        goppa,
        [(config.t1, config.h, eta)],
        s0_level=config.s0_level,
    )
    if not tower_distance_guarantee(params):
        raise ParamInfeasible("sampled parameters miss the tower guarantee")

    code = MtgCode(params)
    H_base, _pivots = rref(code.expanded)
    r = H_base.nrows  # n - k
    k = config.n - r
    if k < 1:
        raise ParamInfeasible("code has dimension zero at these parameters")

    s_rng = rng.split("scramble")
    q = spec.orders[config.base_level]
    S = None
    for _ in range(_KEYGEN_RETRIES):
        cand = FMatrix(
            spec,
            config.base_level,
            [[s_rng.randrange(q) for _ in range(r)] for _ in range(r)],
            r,
        )
        if inverse(cand) is not None:
            S = cand
            break
    if S is None:
        raise RetryExhausted("no invertible scramble matrix found")

    p_rng = rng.split("perm")
    perm = list(range(config.n))
    p_rng.shuffle(perm)

    tag = seed_tag(seed)
    sk = SecretKey(params, S, tuple(perm), RNG_ID, tag)
    pk = PublicKey(
        spec, config.base_level, config.n, k, config.t, config.t1, config.h,
        sk.public_matrix, RNG_ID, tag,
    )
    return pk, sk


def _mat_mul_cols(S: FMatrix, H: FMatrix, perm: list[int]) -> FMatrix:
    """S * H with columns reordered so output column j is S*H column perm[j]."""
    from .linalg import mat_mul

    SH = mat_mul(S, H)
    rows = [[row[perm[j]] for j in range(H.ncols)] for row in SH.rows]
    return FMatrix(S.spec, S.level, rows, H.ncols)


def sample_error(spec: FieldSpec, level: int, n: int, w: int, rng: SplitRng) -> tuple[int, ...]:
    """Uniform weight-w vector over the given field level."""
    if not 0 <= w <= n:
        raise WeightOutOfRange(f"weight {w} outside [0, {n}]")
    q = spec.orders[level]
    e = [0] * n
    for i in rng.sample(range(n), w):
        e[i] = rng.randrange(1, q)
    return tuple(e)


def encrypt(pk: PublicKey, e) -> Ciphertext:
    """Syndrome of a weight-floor(t/2) error vector under the public matrix."""
    if len(e) != pk.n:
        raise LengthMismatch(f"error vector length {len(e)} != n = {pk.n}")
    q = pk.spec.orders[pk.base_level]
    if any(c < 0 or c >= q for c in e):
        raise LengthMismatch("error entries outside the base field")
    w = sum(1 for c in e if c)
    if w != pk.error_weight:
        raise WrongWeight(f"weight {w}, expected exactly {pk.error_weight}")
    return tuple(mat_vec(pk.H_pub, list(e)))


def decrypt(sk: SecretKey, c: Ciphertext) -> tuple[int, ...]:
    """Recover the error vector; DecryptFailure on malformed ciphertexts."""
    code = sk.code
    H_base = sk.H_base
    r = H_base.nrows
    if len(c) != r:
        raise LengthMismatch(f"ciphertext length {len(c)} != n-k = {r}")
    s_vec = mat_vec(sk.S_inv, list(c))
    x = [0] * code.n
    for row, pc in enumerate(sk._pivots):
        x[pc] = s_vec[row]
    try:
        report = decode(code, x)
    except DecodeFailure as exc:
        raise DecryptFailure(f"syndrome does not decode: {exc}") from exc
    v = report.error
    e = tuple(v[sk.perm[j]] for j in range(code.n))
    # re-verify against the public matrix: never return a silent mismatch
    if tuple(mat_vec(sk.public_matrix, list(e))) != tuple(c):
        raise DecryptFailure("recovered error does not reproduce the ciphertext")
    return e
