"""Decoding of single-twist Goppa codes up to floor(t/2) errors.

Pipeline: syndrome s = H r^T; syndrome polynomial s(x) with the hook
rotation (coefficient of x^l is s_{(l+h) mod t}); its pi-transform
s_pi(x), whose key equation  s_pi(x) sigma(x) = tau(x) mod x^t  is
solved by the extended Euclidean algorithm run on (x^t, s_pi).

The pi-transform keeps the twist scalar
    T = eta * sum_J alpha_i^{t-1+t_1} g(alpha_i)^{-1} e_i
pinned in the constant coefficient while the plain syndrome components
rotate back to their natural exponents.  T is recovered from the hook
component s_h by the unique decomposition s_h = u + eta*v with u, v in
the s0 stage, which exists precisely because the support, the Goppa
polynomial and the error magnitudes live in F_{s0} and eta does not.
With eta = 0 the transform is the identity on components and the
decoder degrades to the classical Goppa case.

Case A (fewer than t/2 errors) takes the monic-scaled EEA pair at the
first index nu with deg tau_nu < t/2.  Case B (t even, exactly t/2
errors) combines indices nu-1 and nu: after normalizing mu2, the free
scalar mu1 appears as the x^{t/2} coefficient of the evaluator, which
for the true pair equals the twist scalar T, so mu1 is solved in one
division by lc(tau_{nu-1}); a canonical sweep of F_{q^m} remains as the
fallback.  Every candidate is accepted only after the full
locator/evaluator conditions hold, and uniqueness of the admissible
pair makes any search order sound.

Support points equal to zero cannot be located (the locator convention
uses alpha^{-1}); such positions are skipped in the root search, and an
error planted there surfaces as DecodeFailure, never as a silent wrong
answer: every decode re-verifies H (r - e)^T = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codes import MtgCode
from .errors import (
    DecodeFailure,
    LengthMismatch,
    MagnitudeOutsideBaseField,
    ParamViolation,
    RepeatedRoot,
    RootNotInSupport,
    UnexpectedDegree,
    UnsupportedTwistCount,
)
from .gf import Felt
from .linalg import FMatrix, rref
from .opcount import OpCounter, get_counter, use_counter
from .poly import EEATrace, Poly, eea_trace, p_add, p_derivative, p_eval, p_gcd, p_scale, p_sub
from .rng import SplitRng


@dataclass
class SyndromeState:
    code: MtgCode
    raw: tuple[int, ...]          # H r^T, packed top-level indices
    s_poly: Poly                  # hook-rotated layout
    s_pi: Poly                    # natural layout with the twist scalar at x^0
    twist_scalar: int             # T as a packed index (0 for eta = 0)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.raw)


@dataclass
class LocatorPair:
    sigma: Poly
    tau: Poly
    branch: str
    nu: int
    kappa: int
    support: tuple[int, ...] | None = None     # error positions, 0-based
    magnitudes: tuple[int, ...] | None = None  # base-level packed indices
    trace: EEATrace | None = None


@dataclass
class DecodeReport:
    error: tuple[int, ...]
    codeword: tuple[int, ...]
    branch: str
    nu: int
    kappa: int
    counts: dict
    sigma: Poly | None
    tau: Poly | None
    syndrome: SyndromeState
    trace: EEATrace | None = None
    positions: tuple[int, ...] = field(default_factory=tuple)


def _decode_context(code: MtgCode):
    params = code.params
    if params.ell > 1:
        raise UnsupportedTwistCount("decoding supports at most one twist")
    if code.expurgated:
        raise ParamViolation("decoding expurgated codes is not supported")
    if params.ell == 1 and params.twists[0].eta != 0 and params.s0_level == params.spec.top:
        raise ParamViolation("twisted decoding needs the support stage below the top field")
    eta = params.twists[0].eta if params.ell else 0
    h = params.twists[0].h if params.ell else 0
    return eta, h


def compute_syndrome(code: MtgCode, received) -> SyndromeState:
    """Raw syndrome, s(x) and s_pi(x) for a received word over F_q."""
    params = code.params
    spec = params.spec
    top = spec.top
    n, t = params.n, params.t
    if len(received) != n:
        raise LengthMismatch(f"received word has length {len(received)}, expected {n}")
    eta, h = _decode_context(code)
    mul, add = spec.mul, spec.add
    counter = get_counter()

    raw = []
    H = code.H
    for r in range(t):
        row = H.rows[r]
        acc = 0
        for hij, c in zip(row, received):
            if hij and c:
                acc = add(top, acc, mul(top, hij, c))
        raw.append(acc)
    if counter is not None:
        counter.tick("mul", t * n)
        counter.tick("add", t * (n - 1) if n > 1 else 0)

    s_coeffs = [raw[(l + h) % t] for l in range(t)]
    s_poly = Poly(spec, top, s_coeffs)

    if eta == 0:
        s_pi = Poly(spec, top, raw)
        return SyndromeState(code, tuple(raw), s_poly, s_pi, 0)

    u, v = _split_over_stage(code, raw[h])
    T = mul(top, eta, v)
    pi_coeffs = list(raw)
    pi_coeffs[h] = u
    pi_coeffs[0] = add(top, pi_coeffs[0], T)
    if counter is not None:
        counter.tick("mul", 1)
        counter.tick("add", t)
    return SyndromeState(code, tuple(raw), s_poly, Poly(spec, top, pi_coeffs), T)


def _eta_split_matrix(code: MtgCode):
    """Cached F_p system expressing x = u + eta*v with u, v in the s0 stage."""
    cached = getattr(code, "_eta_split", None)
    if cached is not None:
        return cached
    spec = code.params.spec
    top = spec.top
    p = spec.p
    eta = code.params.twists[0].eta
    D = spec.dims[top]
    D0 = spec.dims[code.params.s0_level]
    cols = []
    for k in range(D0):
        prod = spec.mul(top, eta, p**k)
        cols.append(spec.digits(top, prod))
    rows = [[cols[k][i] for k in range(D0)] for i in range(D0, D)]
    cached = (FMatrix(spec, 0, rows, D0), D, D0)
    code._eta_split = cached
    return cached


def _split_over_stage(code: MtgCode, x_idx: int) -> tuple[int, int]:
    """Unique (u, v) in the s0 stage with x = u + eta*v; DecodeFailure if none."""
    spec = code.params.spec
    top = spec.top
    N, D, D0 = _eta_split_matrix(code)
    digs = spec.digits(top, x_idx)
    aug = FMatrix(spec, 0, [list(N.rows[i]) + [digs[D0 + i]] for i in range(D - D0)], D0 + 1)
    R, pivots = rref(aug)
    if D0 in pivots:
        raise DecodeFailure("hook syndrome component has no eta-decomposition")
    if len(pivots) < D0:
        raise DecodeFailure("eta-decomposition is not unique; tower is degenerate")
    sol = [0] * D0
    for r, pc in enumerate(pivots):
        sol[pc] = R.rows[r][D0]
    v = spec.from_digits(code.params.s0_level, sol)
    ev = spec.mul(top, code.params.twists[0].eta, v)
    u = spec.sub(top, x_idx, ev)
    if u >= spec.orders[code.params.s0_level]:
        raise DecodeFailure("eta-decomposition left a component outside the stage")
    return u, v


# ---------------------------------------------------------------------
# key equation
# ---------------------------------------------------------------------


def solve_key_equation(syn: SyndromeState, t: int | None = None) -> LocatorPair:
    """EEA on (x^t, s_pi) and branch selection per the decoding theorem."""
    code = syn.code
    params = code.params
    spec = params.spec
    top = spec.top
    if t is None:
        t = params.t
    if syn.s_pi.is_zero():
        raise DecodeFailure("zero syndrome polynomial reached the key equation")

    counter = get_counter()
    if counter is not None:
        with counter.phase("eea"):
            trace = eea_trace(Poly.x_pow(spec, top, t), syn.s_pi)
    else:
        trace = eea_trace(Poly.x_pow(spec, top, t), syn.s_pi)

    nu = None
    for i in range(0, trace.last_index + 1):
        if 2 * trace.tau(i).degree < t:
            nu = i
            break
    if nu is None:
        raise DecodeFailure("no remainder dropped below t/2")

    sigma_nu = trace.sigma(nu)
    dsig = sigma_nu.degree
    if 2 * dsig < t:
        mu = sigma_nu.lc().inverse()
        sigma = p_scale(sigma_nu, mu)
        tau = p_scale(trace.tau(nu), mu)
        if tau.degree > sigma.degree:
            raise DecodeFailure("evaluator degree exceeds locator degree")
        return LocatorPair(sigma, tau, "A", nu, trace.kappa, trace=trace)

    if t % 2 == 0 and 2 * dsig == t:
        return _solve_case_b(syn, trace, nu, t)

    raise UnexpectedDegree("deg sigma_nu > t/2 contradicts the trace degree identity")


def _solve_case_b(syn: SyndromeState, trace: EEATrace, nu: int, t: int) -> LocatorPair:
    code = syn.code
    params = code.params
    spec = params.spec
    top = spec.top
    mu2 = trace.sigma(nu).lc().inverse()
    sig_prev, sig_nu = trace.sigma(nu - 1), trace.sigma(nu)
    tau_prev, tau_nu = trace.tau(nu - 1), trace.tau(nu)
    base_sigma = p_scale(sig_nu, mu2)
    base_tau = p_scale(tau_nu, mu2)

    tried: set[int] = set()

    def candidates():
        # The evaluator of the true pair is tau = T*sigma + w with
        # deg w < deg sigma = t/2 and T the twist scalar already read off
        # the hook syndrome component, so matching the x^{t/2} coefficient
        # forces mu1 = T / lc(tau_{nu-1}); deg tau_{nu-1} = t/2 exactly by
        # the trace degree identity, so the division never degenerates.
        # This also covers deg tau < deg sigma (T = 0 gives mu1 = 0) and
        # the classical eta = 0 case.
        lead = tau_prev.lc()
        forced = Felt(spec, top, syn.twist_scalar) / lead
        yield forced.idx
        yield 0
        for m1 in range(spec.orders[top]):  # canonical-order sweep, worst case
            yield m1

    for mu1 in candidates():
        if mu1 in tried:
            continue
        tried.add(mu1)
        m1c = Felt(spec, top, mu1)
        sigma = p_add(p_scale(sig_prev, m1c), base_sigma) if mu1 else base_sigma
        tau = p_add(p_scale(tau_prev, m1c), base_tau) if mu1 else base_tau
        if sigma.degree != t // 2 or not sigma.is_monic():
            continue
        if tau.is_zero() or tau.degree > sigma.degree:
            continue
        try:
            support, mags = _locate_and_evaluate(code, sigma, tau)
        except DecodeFailure:
            continue
        if not _case_b_weight_check(code, sigma, tau, support, mags):
            continue
        return LocatorPair(
            sigma, tau, "B", nu, trace.kappa, support=tuple(support), magnitudes=tuple(mags), trace=trace
        )
    raise DecodeFailure("no admissible mu1 completes the boundary case")


def _case_b_weight_check(code: MtgCode, sigma: Poly, tau: Poly, support, mags) -> bool:
    """tau - a*sigma must drop degree, with a the twist scalar of the
    candidate error pattern."""
    params = code.params
    spec = params.spec
    top = spec.top
    _, ginv_at, _, alpha_twist = code._decode_tables
    eta = params.twists[0].eta if params.ell else 0
    acc = 0
    for i, mag in zip(support, mags):
        term = spec.mul(top, ginv_at[i], spec.mul(top, mag, alpha_twist[i]))
        acc = spec.add(top, acc, term)
    a = spec.mul(top, eta, acc)
    w = p_sub(tau, p_scale(sigma, Felt(spec, top, a)))
    return w.degree < sigma.degree


def _locate_and_evaluate(code: MtgCode, sigma: Poly, tau: Poly):
    """Root search over the support inverses and the magnitude formula
    e_i = -alpha_i g(alpha_i) tau(alpha_i^{-1}) / sigma'(alpha_i^{-1})."""
    params = code.params
    spec = params.spec
    top = spec.top
    base = params.base_level
    counter = get_counter()
    g_at, _, alpha_inv, _ = code._decode_tables

    dsigma = p_derivative(sigma)
    if p_gcd(sigma, dsigma).degree != 0:
        raise RepeatedRoot("locator is not square-free")

    support = []
    if counter is not None:
        ctx = counter.phase("root-search")
        ctx.__enter__()
    try:
        for i, ainv in enumerate(alpha_inv):
            if ainv is None:
                continue
            if p_eval(sigma, Felt(spec, top, ainv)).idx == 0:
                support.append(i)
    finally:
        if counter is not None:
            ctx.__exit__(None, None, None)
    if len(support) != sigma.degree:
        raise RootNotInSupport("locator roots do not all come from the support")

    mags = []
    if counter is not None:
        ctx = counter.phase("magnitudes")
        ctx.__enter__()
    try:
        for i in support:
            ainv = Felt(spec, top, alpha_inv[i])
            num = p_eval(tau, ainv)
            den = p_eval(dsigma, ainv)
            alpha = Felt(spec, top, params.support[i])
            g_val = Felt(spec, top, g_at[i])
            e = -(alpha * g_val * (num / den))
            if e.idx == 0:
                raise DecodeFailure("zero magnitude at a located position")
            if e.idx >= spec.orders[base]:
                raise MagnitudeOutsideBaseField("magnitude escapes the base field")
            mags.append(e.idx)
    finally:
        if counter is not None:
            ctx.__exit__(None, None, None)
    return support, mags


def extract_errors(pair: LocatorPair, code: MtgCode) -> tuple[int, ...]:
    """Assemble the error vector over F_q from a locator/evaluator pair."""
    if pair.support is None:
        support, mags = _locate_and_evaluate(code, pair.sigma, pair.tau)
        pair.support, pair.magnitudes = tuple(support), tuple(mags)
    e = [0] * code.n
    for i, mag in zip(pair.support, pair.magnitudes):
        e[i] = mag
    return tuple(e)


def decode(code: MtgCode, received, want_trace: bool = False) -> DecodeReport:
    """Full decode; raises DecodeFailure when no weight-<=floor(t/2)
    explanation exists (never returns a silently wrong word)."""
    params = code.params
    spec = params.spec
    base = params.base_level
    _decode_context(code)
    if any(c >= spec.orders[base] for c in received):
        raise ParamViolation("received word must lie over the base field")

    counter = OpCounter()
    with use_counter(counter):
        with counter.phase("syndrome"):
            syn = compute_syndrome(code, received)
        if syn.is_zero():
            return DecodeReport(
                error=tuple([0] * code.n),
                codeword=tuple(received),
                branch="none",
                nu=-1,
                kappa=-1,
                counts=counter.snapshot(),
                sigma=None,
                tau=None,
                syndrome=syn,
            )
        pair = solve_key_equation(syn)
        error = extract_errors(pair, code)
        sub = spec.sub
        codeword = tuple(sub(base, r, ei) for r, ei in zip(received, error))
        counter.tick("add", code.n)
        with counter.phase("verify"):
            if not code.is_codeword(codeword):
                raise DecodeFailure("corrected word fails the parity check")
            counter.tick("mul", params.t * code.n)
            counter.tick("add", params.t * (code.n - 1))

    return DecodeReport(
        error=error,
        codeword=codeword,
        branch=pair.branch,
        nu=pair.nu,
        kappa=pair.kappa,
        counts=counter.snapshot(),
        sigma=pair.sigma,
        tau=pair.tau,
        syndrome=syn,
        trace=pair.trace if want_trace else None,
        positions=pair.support or (),
    )


# ---------------------------------------------------------------------
# complexity instrumentation
# ---------------------------------------------------------------------


def op_count_profile(codes: list[MtgCode], trials: int, rng: SplitRng, weight: int | None = None):
    """Mean per-decode operation counts over random errors, one row per code.

    Rows: dict(n, t, trials, mean_mul, mean_add, mean_inv, mean_mul_add,
    eea_mul_add).  Errors have the given weight (default floor(t/2))."""
    out = []
    for code in codes:
        params = code.params
        n, t = params.n, params.t
        w = weight if weight is not None else t // 2
        q = params.spec.orders[params.base_level]
        sums = {"mul": 0, "add": 0, "inv": 0, "eea": 0}
        for _ in range(trials):
            pos = rng.sample(range(n), w)
            e = [0] * n
            for i in pos:
                e[i] = rng.randrange(1, q)
            report = decode(code, e)
            assert tuple(e) == report.error
            c = report.counts
            sums["mul"] += sum(b["mul"] for b in c.values())
            sums["add"] += sum(b["add"] for b in c.values())
            sums["inv"] += sum(b["inv"] for b in c.values())
            sums["eea"] += c.get("eea", {}).get("mul", 0) + c.get("eea", {}).get("add", 0)
        out.append(
            {
                "n": n,
                "t": t,
                "trials": trials,
                "mean_mul": sums["mul"] / trials,
                "mean_add": sums["add"] / trials,
                "mean_inv": sums["inv"] / trials,
                "mean_mul_add": (sums["mul"] + sums["add"]) / trials,
                "eea_mul_add": sums["eea"] / trials,
            }
        )
    return out


# ---------------------------------------------------------------------
# transcript
# ---------------------------------------------------------------------

TRANSCRIPT_VERSION = "MTG-TRANSCRIPT v1"


def render_transcript(report: DecodeReport) -> str:
    """Readable decode walk-through: s(x), s_pi(x), every EEA iteration,
    the branch, the locator pair and the error (positions 1-based)."""
    from .poly import poly_str

    syn = report.syndrome
    spec = syn.code.params.spec
    lines = [TRANSCRIPT_VERSION]
    lines.append("s " + poly_str(syn.s_poly))
    lines.append("s_pi " + poly_str(syn.s_pi))
    if report.trace is not None:
        for i, q, tau, u, sig in report.trace.iterations():
            lines.append(f"iter {i} q {poly_str(q)}")
            lines.append(f"iter {i} tau {poly_str(tau)}")
            lines.append(f"iter {i} sigma {poly_str(sig)}")
    lines.append(f"nu {report.nu}")
    lines.append(f"branch {report.branch}")
    if report.sigma is not None:
        lines.append("sigma " + poly_str(report.sigma))
        lines.append("tau " + poly_str(report.tau))
    lines.append("J " + " ".join(str(i + 1) for i in report.positions))
    base = syn.code.params.base_level
    lines.append("e " + " ".join(spec.felt_str(Felt(spec, base, c)) for c in report.error))
    lines.append("c " + " ".join(spec.felt_str(Felt(spec, base, c)) for c in report.codeword))
    return "\n".join(lines) + "\n"
