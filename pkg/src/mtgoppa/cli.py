"""Command-line front end.

Subcommands:
    code build | code decode | code distance
    keygen | encrypt | decrypt
    attack fp-rate | attack recover | attack support-probe
    qc build
    bench decode

Exit codes: 0 success, 2 input error, 3 decode/decrypt failure,
4 resource bound exceeded.  Every randomized subcommand requires
--seed and is byte-reproducible given it.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import qc as qcmod
from .attacks import basic_mtg_recover, fp_bound_table, random_instance, support_recovery_probe
from .codes import (
    DEFAULT_CODEBOOK_BOUND,
    MtgCode,
    min_distance_bruteforce,
)
from .decoder import decode, op_count_profile, render_transcript
from .errors import DecodeFailure, DecryptFailure, MtgError, NoCandidate, TooLarge
from .gf import Felt, field_build
from .linalg import matrix_to_text
from .pkc import KeygenConfig, decrypt, encrypt, keygen, sample_error
from .poly import Poly, p_monic, poly_from_str, poly_str
from .rng import SplitRng
from .serial import (
    ciphertext_from_text,
    ciphertext_to_text,
    config_from_text,
    params_from_text,
    parse_moduli,
    public_key_from_text,
    public_key_to_text,
    secret_key_from_text,
    secret_key_to_text,
    vector_from_line,
    vector_line,
    word_from_text,
    word_to_text,
)

# Bench default tower: F2 <= F2^9 <= F2^18 (x^9+x^4+1, then y^2+y+(a+1)).
_BENCH_MODULI = "1,0,0,0,1,0,0,0,0,1;11000000000,10000000000,10000000000"


def _read(path: str) -> str:
    return Path(path).read_text()


def _write(path: str, content: str) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(content)


def _csv_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _spec_from_config(cfg: dict, **kwargs):
    p = int(cfg["p"])
    moduli = parse_moduli(p, cfg["moduli"])
    return field_build(p, moduli, **kwargs)


# ---------------------------------------------------------------------
# code subcommands
# ---------------------------------------------------------------------


def cmd_code_build(args) -> int:
    params = params_from_text(_read(args.params))
    code = MtgCode(params)
    out = Path(args.out)
    _write(out / "H.txt", matrix_to_text(code.H) + "\n")
    _write(out / "H_expanded.txt", matrix_to_text(code.expanded) + "\n")
    _write(out / "G.txt", matrix_to_text(code.generator) + "\n")
    report = [f"n {params.n}", f"k {code.k}", f"t {params.t}", f"ell {params.ell}"]
    try:
        d = min_distance_bruteforce(code, bound=args.bound)
        report.append(f"min_distance {d}")
    except TooLarge:
        report.append("min_distance skipped(bound)")
    _write(out / "report.txt", "\n".join(report) + "\n")
    print("\n".join(report))
    return 0


def cmd_code_decode(args) -> int:
    params = params_from_text(_read(args.params))
    code = MtgCode(params)
    spec = params.spec
    received = word_from_text(spec, params.base_level, _read(args.infile))
    report = decode(code, received, want_trace=bool(args.transcript))
    _write(args.out + ".error", word_to_text(spec, params.base_level, report.error))
    _write(args.out + ".codeword", word_to_text(spec, params.base_level, report.codeword))
    if args.transcript:
        _write(args.transcript, render_transcript(report))
    print(f"branch {report.branch} weight {sum(1 for c in report.error if c)}")
    return 0


def cmd_code_distance(args) -> int:
    params = params_from_text(_read(args.params))
    code = MtgCode(params)
    d = min_distance_bruteforce(code, bound=args.bound)
    print(f"n {params.n} k {code.k} d {d}")
    return 0


# ---------------------------------------------------------------------
# PKC subcommands
# ---------------------------------------------------------------------


def cmd_keygen(args) -> int:
    cfg = config_from_text(_read(args.config))
    p = int(cfg["p"])
    config = KeygenConfig(
        p=p,
        moduli=tuple(tuple(m) for m in parse_moduli(p, cfg["moduli"])),
        base_level=int(cfg.get("base", 0)),
        s0_level=int(cfg["s0"]),
        n=int(cfg["n"]),
        t=int(cfg["t"]),
        t1=int(cfg.get("t1", 1)),
        h=int(cfg.get("h", 0)),
    )
    pk, sk = keygen(config, args.seed)
    _write(args.out + ".pk", public_key_to_text(pk))
    _write(args.out + ".sk", secret_key_to_text(sk))
    print(f"n {pk.n} k {pk.k} t {pk.t} weight {pk.error_weight}")
    return 0


def cmd_encrypt(args) -> int:
    pk = public_key_from_text(_read(args.key))
    spec = pk.spec
    if args.infile:
        e = word_from_text(spec, pk.base_level, _read(args.infile))
    else:
        if args.seed is None:
            raise MtgError("encrypt needs --in or --seed for a sampled error")
        rng = SplitRng(args.seed, "cli-error")
        e = sample_error(spec, pk.base_level, pk.n, pk.error_weight, rng)
        if args.error_out:
            _write(args.error_out, word_to_text(spec, pk.base_level, e))
    c = encrypt(pk, e)
    _write(args.out, ciphertext_to_text(pk, pk.base_level, c))
    return 0


def cmd_decrypt(args) -> int:
    sk = secret_key_from_text(_read(args.key))
    spec = sk.params.spec
    c = ciphertext_from_text(spec, sk.params.base_level, _read(args.infile))
    e = decrypt(sk, c)
    _write(args.out, word_to_text(spec, sk.params.base_level, e))
    return 0


# ---------------------------------------------------------------------
# attack subcommands
# ---------------------------------------------------------------------


def cmd_attack_fp_rate(args) -> int:
    cfg = config_from_text(_read(args.config))
    spec = _spec_from_config(cfg)
    js = [int(x) for x in cfg.get("j", "1").split(",")]
    cells = [
        dict(
            spec=spec,
            base_level=int(cfg.get("base", 0)),
            n=int(cfg["n"]),
            t=int(cfg["t"]),
            j=j,
            trials=int(cfg.get("trials", args.trials or 1000)),
            t1=int(cfg.get("t1", 1)),
            h=int(cfg["h"]) if "h" in cfg else None,
        )
        for j in js
    ]
    rows = fp_bound_table(cells, SplitRng(args.seed, "fp"))
    text = _csv_text(rows)
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return 0


def cmd_attack_recover(args) -> int:
    cfg = config_from_text(_read(args.config))
    spec = _spec_from_config(cfg)
    base = int(cfg.get("base", 0))
    n, t = int(cfg["n"]), int(cfg["t"])
    trials = int(cfg.get("trials", args.trials or 20))
    rng = SplitRng(args.seed, "recover")
    rows = []
    hits = 0
    for i in range(trials):
        code = random_instance(
            spec, base, n, t, rng.split(f"inst{i}"),
            t1=int(cfg.get("t1", 1)), h=int(cfg["h"]) if "h" in cfg else None,
        )
        truth = p_monic(code.params.goppa)[0]
        try:
            got = basic_mtg_recover(code, rng.split(f"rec{i}"))
            ok = got == truth
        except (NoCandidate, MtgError):
            ok = False
        hits += ok
        rows.append({"instance": i, "recovered": int(ok)})
    rows.append({"instance": "total", "recovered": f"{hits}/{trials}"})
    text = _csv_text(rows)
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return 0


def cmd_attack_support_probe(args) -> int:
    cfg = config_from_text(_read(args.config))
    spec = _spec_from_config(cfg)
    base = int(cfg.get("base", 0))
    n, t = int(cfg["n"]), int(cfg["t"])
    eps = int(cfg["eps"])
    trials = int(cfg.get("trials", args.trials or 1000))
    rng = SplitRng(args.seed, "probe")
    rows = []
    for control in (False, True):
        code = random_instance(
            spec, base, n, t, rng.split(f"code-{control}"),
            t1=int(cfg.get("t1", 1)), h=int(cfg["h"]) if "h" in cfg else None,
            eta_zero=control,
        )
        res = support_recovery_probe(code, eps, trials, rng.split(f"run-{control}"))
        m = spec.dims[spec.top] // spec.dims[base]
        res["mode"] = "classical" if control else "twisted"
        res["predicted"] = 1.0 if control else float(spec.orders[base]) ** (-m)
        rows.append(res)
    text = _csv_text(rows)
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return 0


# ---------------------------------------------------------------------
# quasi-cyclic subcommand
# ---------------------------------------------------------------------


def cmd_qc_build(args) -> int:
    cfg = config_from_text(_read(args.config))
    spec = _spec_from_config(cfg)
    top = spec.top
    b = spec.felt_from_str(top, cfg["b"])
    reps = [spec.felt_from_str(top, tok) for tok in cfg["reps"].split()]
    seed_poly = poly_from_str(spec, top, cfg["f"])
    eta = spec.felt_from_str(top, cfg["eta"])
    qc = qcmod.build_qc_code(b, reps, seed_poly, eta, t1=int(cfg.get("t1", 1)))
    code = qc.code
    pack = cfg.get("packing", "1") != "0"
    lines = [
        "MTG-QC-KEY v1",
        f"b {spec.felt_str(b)}",
        "reps " + " ".join(spec.felt_str(x) for x in qc.orbit_reps),
        f"f {poly_str(qc.seed_poly)}",
        f"eta {spec.felt_str(eta)}",
        f"packing {int(pack)}",
        f"qc_order {qc.qc_order}",
        f"perm {' '.join(str(i) for i in qc.permutation)}",
    ]
    if pack:
        stored = qcmod.packed_parity_rows(qc)
        lines.append(f"PACKED_ROWS {len(stored)}")
        for row in stored:
            lines.append(vector_line(spec, code.params.base_level, row))
    else:
        lines.append("H_EXPANDED")
        lines.append(matrix_to_text(code.expanded))
    lines.append("END")
    _write(args.out, "\n".join(lines) + "\n")
    d = None
    try:
        d = min_distance_bruteforce(code, bound=args.bound)
    except TooLarge:
        pass
    print(f"n {code.n} k {code.k} d {d if d is not None else '?'} qc_order {qc.qc_order}")
    return 0


# ---------------------------------------------------------------------
# bench subcommand
# ---------------------------------------------------------------------


def cmd_bench_decode(args) -> int:
    cfg = config_from_text(_read(args.config)) if args.config else {}
    p = int(cfg.get("p", 2))
    moduli = parse_moduli(p, cfg.get("moduli", _BENCH_MODULI))
    spec = field_build(p, moduli, log_table_bound=1 << 18)
    base = int(cfg.get("base", 0))
    s0 = int(cfg.get("s0", 1))
    ns = [int(x) for x in cfg.get("ns", "64,128,256").split(",")]
    ts = [int(x) for x in cfg.get("ts", "4,8,16").split(",")]
    trials = int(cfg.get("trials", args.trials or 5))
    rng = SplitRng(args.seed, "bench")
    from .codes import mtg_params
    from .poly import p_is_irreducible

    s0_order = spec.orders[s0]
    codes = []
    for t in ts:
        for n in ns:
            g_rng = rng.split(f"g-{n}-{t}")
            while True:
                coeffs = [g_rng.randrange(s0_order) for _ in range(t)] + [1]
                g0 = Poly(spec, s0, coeffs)
                if g0.degree == t and p_is_irreducible(g0):
                    break
            g = Poly(spec, spec.top, coeffs)
            support = rng.split(f"L-{n}-{t}").sample(range(1, s0_order), n)
            eta = rng.split(f"eta-{n}-{t}").randrange(s0_order, spec.orders[spec.top])
            h = rng.split(f"h-{n}-{t}").randrange(t)
            codes.append(MtgCode(mtg_params(spec, base, support, g, [(1, h, eta)], s0_level=s0)))
    rows = op_count_profile(codes, trials, rng.split("errors"))
    text = _csv_text(rows)
    if args.out:
        _write(args.out, text)
    print(text, end="")
    return 0


# ---------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mtgoppa", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    code = sub.add_parser("code", help="construct and decode codes")
    code_sub = code.add_subparsers(dest="sub", required=True)
    b = code_sub.add_parser("build")
    b.add_argument("--params", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--bound", type=int, default=DEFAULT_CODEBOOK_BOUND)
    b.set_defaults(func=cmd_code_build)
    d = code_sub.add_parser("decode")
    d.add_argument("--params", required=True)
    d.add_argument("--in", dest="infile", required=True)
    d.add_argument("--out", required=True)
    d.add_argument("--transcript")
    d.set_defaults(func=cmd_code_decode)
    dist = code_sub.add_parser("distance")
    dist.add_argument("--params", required=True)
    dist.add_argument("--bound", type=int, default=DEFAULT_CODEBOOK_BOUND)
    dist.set_defaults(func=cmd_code_distance)

    kg = sub.add_parser("keygen")
    kg.add_argument("--config", required=True)
    kg.add_argument("--seed", required=True)
    kg.add_argument("--out", required=True)
    kg.set_defaults(func=cmd_keygen)

    enc = sub.add_parser("encrypt")
    enc.add_argument("--key", required=True)
    enc.add_argument("--in", dest="infile")
    enc.add_argument("--seed")
    enc.add_argument("--error-out")
    enc.add_argument("--out", required=True)
    enc.set_defaults(func=cmd_encrypt)

    dec = sub.add_parser("decrypt")
    dec.add_argument("--key", required=True)
    dec.add_argument("--in", dest="infile", required=True)
    dec.add_argument("--out", required=True)
    dec.set_defaults(func=cmd_decrypt)

    atk = sub.add_parser("attack")
    atk_sub = atk.add_subparsers(dest="sub", required=True)
    fp = atk_sub.add_parser("fp-rate")
    fp.add_argument("--config", required=True)
    fp.add_argument("--seed", required=True)
    fp.add_argument("--trials", type=int)
    fp.add_argument("--out")
    fp.set_defaults(func=cmd_attack_fp_rate)
    rec = atk_sub.add_parser("recover")
    rec.add_argument("--config", required=True)
    rec.add_argument("--seed", required=True)
    rec.add_argument("--trials", type=int)
    rec.add_argument("--out")
    rec.set_defaults(func=cmd_attack_recover)
    probe = atk_sub.add_parser("support-probe")
    probe.add_argument("--config", required=True)
    probe.add_argument("--seed", required=True)
    probe.add_argument("--trials", type=int)
    probe.add_argument("--out")
    probe.set_defaults(func=cmd_attack_support_probe)

    qc = sub.add_parser("qc")
    qc_sub = qc.add_subparsers(dest="sub", required=True)
    qb = qc_sub.add_parser("build")
    qb.add_argument("--config", required=True)
    qb.add_argument("--out", required=True)
    qb.add_argument("--bound", type=int, default=DEFAULT_CODEBOOK_BOUND)
    qb.set_defaults(func=cmd_qc_build)

    bench = sub.add_parser("bench")
    bench_sub = bench.add_subparsers(dest="sub", required=True)
    bd = bench_sub.add_parser("decode")
    bd.add_argument("--config")
    bd.add_argument("--seed", required=True)
    bd.add_argument("--trials", type=int)
    bd.add_argument("--out")
    bd.set_defaults(func=cmd_bench_decode)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (DecodeFailure, DecryptFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (MtgError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
