"""Text serialization for every external artifact.

All formats are UTF-8 line-oriented text and round-trip bit-exactly:

* element: its base-p digit string, little-endian (e.g. "1101" in F16);
* polynomial: comma-separated element strings, little-endian;
* matrix: "nrows ncols level" header, then one space-separated row per line;
* params file: FIELD / SUPPORT / GOPPA / TWISTS sections (the secret-key
  body); hooks and twist rows are published 1-based in the header
  comment convention of the TWISTS lines staying raw integers as used
  internally (0-based), which readers of this codebase should note;
* key files: header (version, rng id + seed tag, field, shape), then
  the matrices;
* ciphertext: a single line of n-k element strings.
"""

from __future__ import annotations

from .codes import MtgParams, mtg_params
from .gf import Felt, FieldSpec
from .linalg import FMatrix, matrix_from_text, matrix_to_text
from .pkc import PublicKey, SecretKey
from .poly import Poly, poly_from_str, poly_str

PARAMS_MAGIC = "MTG-PARAMS v1"
KEY_MAGIC = "MTG-KEY v1"


def vector_line(spec: FieldSpec, level: int, vec) -> str:
    return " ".join(spec.felt_str(Felt(spec, level, c)) for c in vec)


def vector_from_line(spec: FieldSpec, level: int, line: str) -> tuple[int, ...]:
    return tuple(spec.felt_from_str(level, tok).idx for tok in line.split())


# --- params files ------------------------------------------------------


def params_to_text(params: MtgParams) -> str:
    spec = params.spec
    top = spec.top
    lines = [PARAMS_MAGIC, "FIELD"]
    lines.extend(spec.spec_lines())
    lines.append(f"base {params.base_level}")
    lines.append(f"s0 {params.s0_level}")
    lines.append("SUPPORT")
    lines.append(vector_line(spec, top, params.support))
    lines.append("GOPPA")
    lines.append(poly_str(params.goppa))
    lines.append("TWISTS")
    for tw in params.twists:
        lines.append(f"{tw.t} {tw.h} {spec.felt_str(Felt(spec, top, tw.eta))}")
    return "\n".join(lines) + "\n"


def params_from_text(text: str, **spec_kwargs) -> MtgParams:
    lines = [ln.rstrip() for ln in text.splitlines()]
    if not lines or lines[0].strip() != PARAMS_MAGIC:
        raise ValueError(f"expected {PARAMS_MAGIC} header")
    sections: dict[str, list[str]] = {}
    current = None
    for ln in lines[1:]:
        s = ln.strip()
        if not s:
            continue
        if s in ("FIELD", "SUPPORT", "GOPPA", "TWISTS"):
            current = s
            sections[current] = []
            continue
        if current is None:
            raise ValueError(f"content before any section: {s!r}")
        sections[current].append(s)

    field_lines = sections.get("FIELD", [])
    base_level = s0_level = None
    spec_lines = []
    for ln in field_lines:
        key, _, rest = ln.partition(" ")
        if key == "base":
            base_level = int(rest)
        elif key == "s0":
            s0_level = int(rest)
        else:
            spec_lines.append(ln)
    spec = FieldSpec.from_spec_lines(spec_lines, **spec_kwargs)
    top = spec.top
    if base_level is None:
        base_level = 0

    support = vector_from_line(spec, top, sections["SUPPORT"][0])
    goppa = poly_from_str(spec, top, sections["GOPPA"][0])
    twists = []
    for ln in sections.get("TWISTS", []):
        tj, hj, eta_s = ln.split()
        twists.append((int(tj), int(hj), spec.felt_from_str(top, eta_s).idx))
    return mtg_params(spec, base_level, support, goppa, twists, s0_level=s0_level)


# --- received words / ciphertexts ---------------------------------------


def word_to_text(spec: FieldSpec, level: int, word) -> str:
    return vector_line(spec, level, word) + "\n"


def word_from_text(spec: FieldSpec, level: int, text: str) -> tuple[int, ...]:
    stripped = [ln for ln in text.splitlines() if ln.strip()]
    if len(stripped) != 1:
        raise ValueError("expected exactly one vector line")
    return vector_from_line(spec, level, stripped[0])


# --- key files -----------------------------------------------------------


def public_key_to_text(pk: PublicKey) -> str:
    spec = pk.spec
    lines = [f"{KEY_MAGIC} public", f"rng {pk.rng_id} {pk.seed_tag}"]
    lines.extend(spec.spec_lines())
    lines.append(f"base {pk.base_level}")
    lines.append(f"n {pk.n}")
    lines.append(f"k {pk.k}")
    lines.append(f"t {pk.t}")
    lines.append(f"t1 {pk.t1}")
    lines.append(f"h {pk.h}")
    lines.append("H_PUB")
    lines.append(matrix_to_text(pk.H_pub))
    lines.append("END")
    return "\n".join(lines) + "\n"


def public_key_from_text(text: str, **spec_kwargs) -> PublicKey:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(KEY_MAGIC) or "public" not in lines[0]:
        raise ValueError("not a public key file")
    rng_id, seed_tag = "", ""
    spec_lines = []
    fields: dict[str, int] = {}
    i = 1
    while i < len(lines):
        s = lines[i].strip()
        i += 1
        if s == "H_PUB":
            break
        if s.startswith("rng "):
            _, rng_id, seed_tag = s.split()
        elif s.startswith(("p ", "modulus ")):
            spec_lines.append(s)
        elif s:
            key, _, rest = s.partition(" ")
            fields[key] = int(rest)
    spec = FieldSpec.from_spec_lines(spec_lines, **spec_kwargs)
    body = []
    while i < len(lines) and lines[i].strip() != "END":
        body.append(lines[i])
        i += 1
    H = matrix_from_text(spec, "\n".join(body))
    return PublicKey(
        spec,
        fields["base"],
        fields["n"],
        fields["k"],
        fields["t"],
        fields["t1"],
        fields["h"],
        H,
        rng_id,
        seed_tag,
    )


def secret_key_to_text(sk: SecretKey) -> str:
    lines = [f"{KEY_MAGIC} secret", f"rng {sk.rng_id} {sk.seed_tag}", "PARAMS"]
    lines.append(params_to_text(sk.params).rstrip("\n"))
    lines.append("S")
    lines.append(matrix_to_text(sk.S))
    lines.append("PERM")
    lines.append(" ".join(str(j) for j in sk.perm))
    lines.append("END")
    return "\n".join(lines) + "\n"


def secret_key_from_text(text: str, **spec_kwargs) -> SecretKey:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(KEY_MAGIC) or "secret" not in lines[0]:
        raise ValueError("not a secret key file")
    rng_line = lines[1].split()
    rng_id, seed_tag = rng_line[1], rng_line[2]
    try:
        p_idx = lines.index("PARAMS")
        s_idx = lines.index("S")
        perm_idx = lines.index("PERM")
        end_idx = lines.index("END")
    except ValueError as exc:
        raise ValueError("malformed secret key file") from exc
    params = params_from_text("\n".join(lines[p_idx + 1 : s_idx]), **spec_kwargs)
    S = matrix_from_text(params.spec, "\n".join(lines[s_idx + 1 : perm_idx]))
    perm = tuple(int(tok) for tok in lines[perm_idx + 1].split())
    if end_idx <= perm_idx:
        raise ValueError("malformed secret key file")
    return SecretKey(params, S, perm, rng_id, seed_tag)


def ciphertext_to_text(pk_or_spec, level: int, c) -> str:
    spec = pk_or_spec.spec if hasattr(pk_or_spec, "spec") else pk_or_spec
    return vector_line(spec, level, c) + "\n"


def ciphertext_from_text(spec: FieldSpec, level: int, text: str) -> tuple[int, ...]:
    return word_from_text(spec, level, text)


# --- experiment configs ----------------------------------------------------


def config_from_text(text: str) -> dict:
    """key=value lines; moduli use commas within a stage, semicolons between."""
    out: dict[str, str] = {}
    for ln in text.splitlines():
        s = ln.strip()
        if not s or s.startswith("#"):
            continue
        key, _, val = s.partition("=")
        out[key.strip()] = val.strip()
    return out


def parse_moduli(p: int, s: str) -> list[list[int]]:
    stages = []
    for stage in s.split(";"):
        coeffs = []
        for tok in stage.split(","):
            tok = tok.strip()
            idx = 0
            digs = tok if p < 10 else tok.split(".")
            for d in reversed(digs):
                idx = idx * p + int(d)
            coeffs.append(idx)
        stages.append(coeffs)
    return stages
