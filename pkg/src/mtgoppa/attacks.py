"""Partial key-recovery experiments against the twisted-code PKC.

The candidate test (potential Goppa polynomial): a degree-t candidate f
is accepted when every supplied codeword u of the (shortened) code
satisfies the defining congruence with f substituted for the secret
polynomial, i.e.

    sum_i u_i ((z-a_i)^{-1} - sum_j eta_j a_i^{t-1+t_j} f(a_i)^{-1}
               (U^{h_j+1}(z).f)) = 0  (mod f).

Recovery pipelines have to build a polynomial with the secret g among
its factors, yet the published construction references g itself.  The
executable reading used here: with F(c) = sum_i c_i prod_{j!=i} (z-a_j)
over the known index set, every codeword satisfies
F(c) = eta * T(c) * prod(z-a) * (U^{h+1}(z).g)  (mod g)  for a scalar
T(c) unknown to the attacker, so g divides T(c')F(c) - T(c)F(c').
Sweeping the projective unknown (T(c):T(c')) over F_{q^m} u {inf} and
pooling the degree-t divisors of each combination is complete for one
twist, costs q^m + 1 bounded factorizations, and collapses to the
single polynomial F(c) (lambda = 0) in the classical eta = 0 case.
The sweep factor q^m is exactly the security margin the twist buys.

All Monte-Carlo entry points take explicit rngs and return plain dicts
ready for CSV emission.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codes import MtgCode, MtgParams, Twist, linear_quotient, mtg_params, shifted_tail
from .errors import (
    DegreeMismatch,
    EpsilonTooSmall,
    MultipleCandidates,
    NoCandidate,
)
from .gf import Felt, FieldSpec
from .linalg import FMatrix, null_space_basis, restrict_columns
from .poly import (
    Poly,
    p_add,
    p_factor,
    p_is_irreducible,
    p_mod,
    p_modinv,
    p_monic,
    p_mul,
    p_scale,
    p_sub,
)
from .rng import SplitRng

_DDF_FACTOR_LIMIT = 4096  # cap on assembled degree-t divisors per polynomial


@dataclass
class AttackInstance:
    """Public view plus held-aside ground truth for scoring."""

    code: MtgCode
    known_indices: tuple[int, ...]
    truth: MtgParams | None = None  # scoring only

    def known_points(self) -> list[int]:
        sup = self.code.params.support
        return [sup[i] for i in self.known_indices]


@dataclass
class CandidateReport:
    candidates: list[Poly]
    tested: int = 0
    pool_size: int = 0
    trace: list[tuple[Poly, bool]] = field(default_factory=list)


# ---------------------------------------------------------------------
# Algorithm: potential polynomial test on a shortened code
# ---------------------------------------------------------------------


def shortened_syndrome_test(f: Poly, points, rows, twists, t: int) -> bool:
    """True iff every row passes the candidate congruence mod f.

    `points` are the support elements behind the row coordinates;
    `rows` are codewords of the shortened code (packed base indices).
    Candidates vanishing on a known point can never be the secret
    polynomial (the defining construction forbids it) and are rejected.
    """
    if f.degree != t:
        raise DegreeMismatch(f"candidate degree {f.degree}, expected {t}")
    spec, level = f.spec, f.level
    twists = [tw if isinstance(tw, Twist) else Twist(*tw) for tw in twists]
    tails = [shifted_tail(f, tw.h) for tw in twists]

    inv_cache: list[tuple[Poly, Felt] | None] = [None] * len(points)

    def column_data(i: int):
        if inv_cache[i] is None:
            alpha = Felt(spec, level, points[i])
            quot, f_at = linear_quotient(f, alpha)
            if f_at.idx == 0:
                return None
            ginv = f_at.inverse()
            inv_poly = p_scale(quot, -ginv)
            twist_scalars = [
                Felt(spec, level, tw.eta)
                * Felt(spec, level, spec.pow(level, points[i], t - 1 + tw.t))
                * ginv
                for tw in twists
            ]
            inv_cache[i] = (inv_poly, twist_scalars)
        return inv_cache[i]

    for row in rows:
        acc = Poly.zero(spec, level)
        for i, c in enumerate(row):
            if c == 0:
                continue
            data = column_data(i)
            if data is None:
                return False
            inv_poly, twist_scalars = data
            cf = Felt(spec, level, c)
            term = p_scale(inv_poly, cf)
            for tail, sc in zip(tails, twist_scalars):
                term = p_sub(term, p_scale(tail, sc * cf))
            acc = p_add(acc, term)
        if not p_mod(acc, f).is_zero():
            return False
    return True


# ---------------------------------------------------------------------
# candidate pools
# ---------------------------------------------------------------------


def evaluation_combination(spec: FieldSpec, level: int, points, word) -> Poly:
    """F(c) = sum_i c_i * prod_{j != i} (z - alpha_j) over the index set."""
    full = Poly.one(spec, level)
    for a in points:
        full = p_mul(full, Poly(spec, level, (spec.neg(level, a), 1)))
    acc = Poly.zero(spec, level)
    for i, c in enumerate(word):
        if c == 0:
            continue
        quot, _rem = linear_quotient(full, Felt(spec, level, points[i]))
        acc = p_add(acc, p_scale(quot, Felt(spec, level, c)))
    return acc


def _bounded_degree_factors(f: Poly, dmax: int, rng: SplitRng) -> list[tuple[Poly, int]]:
    """Irreducible factors of degree <= dmax with multiplicities (others dropped)."""
    out = []
    for fac, mult in p_factor(f, rng):
        if fac.degree <= dmax:
            out.append((fac, mult))
    return out


def _degree_t_divisors(factors: list[tuple[Poly, int]], t: int, limit: int) -> list[Poly]:
    """All monic degree-t products of the given factor multiset."""
    results: list[Poly] = []
    spec = None

    def rec(idx: int, remaining: int, acc: Poly):
        if len(results) >= limit:
            return
        if remaining == 0:
            results.append(acc)
            return
        if idx >= len(factors):
            return
        fac, mult = factors[idx]
        cur = acc
        for count in range(0, mult + 1):
            if count:
                cur = p_mul(cur, fac)
                if fac.degree * count > remaining:
                    break
            if fac.degree * count <= remaining:
                rec(idx + 1, remaining - fac.degree * count, cur)
    if factors:
        spec = factors[0][0].spec
        rec(0, t, Poly.one(spec, factors[0][0].level))
    return results


def candidate_pool(
    spec: FieldSpec,
    level: int,
    points,
    words,
    t: int,
    rng: SplitRng,
    irreducible_only: bool = False,
) -> list[Poly]:
    """Degree-t candidates from the projective lambda-sweep over pairs.

    With a single codeword only lambda = 0 (its own combination) is
    available; that is the complete classical pool when eta = 0.
    """
    F1 = evaluation_combination(spec, level, points, words[0])
    polys = [F1]
    if len(words) >= 2:
        F2 = evaluation_combination(spec, level, points, words[1])
        polys = [p_sub(F1, p_scale(F2, Felt(spec, level, lam))) for lam in range(spec.orders[level])]
        polys.append(F2)  # the point at infinity
    seen: set[tuple[int, ...]] = set()
    pool: list[Poly] = []
    for P in polys:
        if P.is_zero() or P.degree < t:
            continue
        factors = _bounded_degree_factors(P, t, rng)
        if irreducible_only:
            divisors = [f for f, _ in factors if f.degree == t]
        else:
            divisors = _degree_t_divisors(factors, t, _DDF_FACTOR_LIMIT)
        for d in divisors:
            key = d.coeffs
            if key not in seen:
                seen.add(key)
                pool.append(d)
    return pool


# ---------------------------------------------------------------------
# recovery pipelines
# ---------------------------------------------------------------------


def basic_mtg_recover(code: MtgCode, rng: SplitRng, j: int | None = None) -> Poly:
    """Recover the (irreducible) Goppa polynomial given the full support.

    Uses the code's generator rows both to seed the candidate pool and
    as the congruence checks; returns the unique monic candidate.
    """
    params = code.params
    spec = params.spec
    top = spec.top
    G = code.generator
    if G.nrows == 0:
        raise NoCandidate("code has no nonzero codewords")
    words = [G.rows[0]]
    if G.nrows >= 2:
        words.append(G.rows[1])
    pool = candidate_pool(spec, top, list(params.support), words, params.t, rng)
    check_rows = list(G.rows[: (j or G.nrows)])
    passed = []
    for f in pool:
        if shortened_syndrome_test(f, list(params.support), check_rows, params.twists, params.t):
            passed.append(p_monic(f)[0])
    unique = []
    seen = set()
    for f in passed:
        if f.coeffs not in seen:
            seen.add(f.coeffs)
            unique.append(f)
    if not unique:
        raise NoCandidate("no candidate passed the congruence test")
    if len(unique) > 1:
        raise MultipleCandidates(unique)
    return unique[0]


def advanced_mtg_candidates(
    code: MtgCode,
    known_indices,
    rng: SplitRng,
    j: int | None = None,
) -> CandidateReport:
    """All degree-t candidates consistent with an index set of size > mt."""
    params = code.params
    spec = params.spec
    top = spec.top
    eps = len(known_indices)
    if eps <= params.m * params.t:
        raise EpsilonTooSmall(f"need epsilon > mt = {params.m * params.t}, got {eps}")
    idx = sorted(known_indices)
    points = [params.support[i] for i in idx]
    H_I = restrict_columns(code.expanded, idx)
    G_I = null_space_basis(H_I)
    if G_I.nrows == 0:
        raise NoCandidate("shortened code is trivial")
    words = [G_I.rows[0]]
    if G_I.nrows >= 2:
        words.append(G_I.rows[1])
    pool = candidate_pool(spec, top, points, words, params.t, rng)
    check_rows = list(G_I.rows[: (j or G_I.nrows)])
    report = CandidateReport(candidates=[], pool_size=len(pool))
    seen = set()
    for f in pool:
        ok = shortened_syndrome_test(f, points, check_rows, params.twists, params.t)
        report.tested += 1
        fm = p_monic(f)[0]
        report.trace.append((fm, ok))
        if ok and fm.coeffs not in seen:
            seen.add(fm.coeffs)
            report.candidates.append(fm)
    return report


# ---------------------------------------------------------------------
# support recovery probe
# ---------------------------------------------------------------------


def _single_overhang_codeword(code: MtgCode, idx_known: list[int], r: int):
    """A codeword supported inside known u {r} with a nonzero r component."""
    cols = sorted(idx_known + [r])
    pos_r = cols.index(r)
    basis = null_space_basis(restrict_columns(code.expanded, cols))
    for row in basis.rows:
        if row[pos_r]:
            return cols, row, pos_r
    return None


def support_recovery_probe(
    code: MtgCode,
    eps: int,
    trials: int,
    rng: SplitRng,
) -> dict:
    """Guess-one-point experiment for a single-twist code with known g.

    Per trial: pick a random known set I (|I| = eps) and a hidden point
    alpha_r; take a codeword whose only unknown-support coordinate is r;
    the congruence determines (z - alpha_r)^{-1} up to the unknown
    scalar X = alpha_r^{t-1+t_1} g(alpha_r)^{-1}, which the attacker
    guesses uniformly.  With eta = 0 there is no unknown scalar and the
    inversion succeeds deterministically (the classical control).
    """
    params = code.params
    spec = params.spec
    top = spec.top
    g = params.goppa
    t = params.t
    n = params.n
    eta_idx = params.twists[0].eta if params.ell else 0
    eta = Felt(spec, top, eta_idx)
    tail = shifted_tail(g, params.twists[0].h) if params.ell else Poly.zero(spec, top)
    t1 = params.twists[0].t if params.ell else 1
    if eps >= n:
        return {"trials": trials, "successes": trials, "rate": 1.0, "skipped": 0}

    successes = 0
    skipped = 0
    done = 0
    while done < trials:
        idx_known = sorted(rng.sample(range(n), eps))
        rest = [i for i in range(n) if i not in set(idx_known)]
        r = rng.choice(rest)
        found = _single_overhang_codeword(code, idx_known, r)
        if found is None:
            skipped += 1
            if skipped > 10 * trials:
                break
            continue
        cols, word, pos_r = found
        done += 1

        alpha_r = params.support[r]
        c_r = Felt(spec, top, word[pos_r])
        A = Poly.zero(spec, top)
        B = spec.zero(top)
        for pos, i in enumerate(cols):
            if i == r or word[pos] == 0:
                continue
            alpha = Felt(spec, top, params.support[i])
            quot, g_at = linear_quotient(g, alpha)
            ginv = g_at.inverse()
            cf = Felt(spec, top, word[pos])
            A = p_add(A, p_scale(p_scale(quot, -ginv), cf))
            B = B + cf * Felt(spec, top, spec.pow(top, params.support[i], t - 1 + t1)) * ginv

        cr_inv = c_r.inverse()
        if eta_idx == 0:
            W = p_scale(A, -cr_inv)
        else:
            guess = Felt(spec, top, rng.randrange(spec.orders[top]))
            W = p_add(
                p_scale(p_sub(p_scale(tail, eta * B), A), cr_inv),
                p_scale(tail, eta * guess),
            )
        W = p_mod(W, g)
        if W.is_zero():
            continue
        try:
            U = p_modinv(W, g)
        except Exception:
            continue
        if U.degree == 1 and U.is_monic():
            beta = -U.coeff(0)
            if beta.idx == alpha_r:
                successes += 1
    return {
        "trials": done,
        "successes": successes,
        "rate": successes / done if done else 0.0,
        "skipped": skipped,
    }


# ---------------------------------------------------------------------
# false-positive rate table
# ---------------------------------------------------------------------


def random_instance(
    spec: FieldSpec,
    base_level: int,
    n: int,
    t: int,
    rng: SplitRng,
    t1: int = 1,
    h: int | None = None,
    irreducible: bool = True,
    eta_zero: bool = False,
) -> MtgCode:
    """Random attack-lab instance (no tower structure required)."""
    top = spec.top
    Q = spec.orders[top]
    while True:
        coeffs = [rng.randrange(Q) for _ in range(t)] + [1]
        g = Poly(spec, top, coeffs)
        if g.degree != t:
            continue
        if irreducible and not p_is_irreducible(g):
            continue
        support_pool = [a for a in range(Q) if _nonroot(g, a)]
        if len(support_pool) < n:
            continue
        support = rng.sample(support_pool, n)
        eta = 0 if eta_zero else rng.randrange(1, Q)
        hook = rng.randrange(t) if h is None else h
        params = mtg_params(spec, base_level, support, g, [(t1, hook, eta)])
        return MtgCode(params)


def _nonroot(g: Poly, a: int) -> bool:
    spec, level = g.spec, g.level
    acc = 0
    for c in reversed(g.coeffs):
        acc = spec.add(level, spec.mul(level, acc, a), c)
    return acc != 0


def sample_wrong_candidate(code: MtgCode, rng: SplitRng) -> Poly:
    """Uniform monic degree-t polynomial, valid on the support (no roots
    there) and distinct from the true polynomial up to scaling."""
    params = code.params
    spec = params.spec
    top = spec.top
    Q = spec.orders[top]
    true_monic = p_monic(params.goppa)[0]
    while True:
        f = Poly(spec, top, [rng.randrange(Q) for _ in range(params.t)] + [1])
        if f.coeffs == true_monic.coeffs:
            continue
        if all(_nonroot(f, a) for a in params.support):
            return f


def fp_bound_table(cells: list[dict], rng: SplitRng) -> list[dict]:
    """Empirical acceptance of random wrong candidates versus the
    q^{-mtj} prediction, one output row per cell.

    Cell keys: spec_builder (callable) or spec, base_level, n, t, j,
    trials, plus optional t1/h.  Each trial draws a fresh instance and a
    fresh wrong candidate; acceptance tests j generator rows.
    """
    out = []
    for cell in cells:
        spec = cell["spec"]
        base = cell.get("base_level", 0)
        n, t, j, trials = cell["n"], cell["t"], cell["j"], cell["trials"]
        q = spec.orders[base]
        m = spec.dims[spec.top] // spec.dims[base]
        accepted = 0
        cell_rng = rng.split(f"fp-{n}-{t}-{j}")
        for _ in range(trials):
            code = random_instance(
                spec, base, n, t, cell_rng,
                t1=cell.get("t1", 1), h=cell.get("h"), irreducible=cell.get("irreducible", True),
            )
            G = code.generator
            if G.nrows < j:
                continue
            rows = list(G.rows[:j])
            f = sample_wrong_candidate(code, cell_rng)
            if shortened_syndrome_test(
                f, list(code.params.support), rows, code.params.twists, t
            ):
                accepted += 1
        predicted = float(q) ** (-m * t * j)
        M_t = q ** (m * t)
        out.append(
            {
                "q": q,
                "m": m,
                "t": t,
                "j": j,
                "trials": trials,
                "accepted": accepted,
                "empirical": accepted / trials if trials else 0.0,
                "predicted": predicted,
                "M_t": M_t,
                "union_bound": (M_t - 1) * predicted,
            }
        )
    return out
