"""Worked example instances used as golden fixtures.

Three twisted-Goppa instances over char-2 towers (a 3x14 two-twist
matrix over F16, a single-twist code over the F4<=F16<=F256 tower, and
the F2 <= F32 <= F1024 decoding walk-through) plus the F9 quasi-cyclic
instance.  Everything below is constructed from field arithmetic, not
transcribed digit strings, so a convention slip shows up as a loud test
failure rather than a silent re-encoding.

The F1024 stage modulus is not pinned down by the source material; the
tower here uses z^2 + z + a^3 (trace 1 over F32, hence irreducible).
The decode-relevant quantities are basis-independent, which the tests
assert by recomputation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import MtgCode, MtgParams, mtg_params
from .gf import Felt, FieldSpec, field_build
from .poly import Poly, p_mul


@dataclass
class ExampleBundle:
    spec: FieldSpec
    params: MtgParams
    code: MtgCode
    expected: dict


def _f16_spec() -> FieldSpec:
    # F4 = F2[x]/(x^2+x+1) = F2(a); F16 = F4[x]/(x^2+x+a) = F2(a,b)
    return field_build(2, [[1, 1, 1], [2, 1, 1]])


def example1() -> ExampleBundle:
    """Two twists over F16: t=3, tt=(1,2), hh=(1,2), eta=(b, ab+1)."""
    spec = _f16_spec()
    lvl = 2
    a = spec.embed(spec.gen(1), lvl)
    b = spec.gen(lvl)
    one = spec.one(lvl)
    zero = spec.zero(lvl)

    L = [
        b + one,
        (a + one) * b + one,
        (a + one) * b,
        a * b + one,
        a,
        a + one,
        (a + one) * b + a + one,
        a * b,
        zero,
        b,
        (a + one) * b + a,
        b + a,
        b + a + one,
        one,
    ]
    g = Poly.from_felts([a + one, (a + one) * b + a + one, a * b + a + one, one])
    params = mtg_params(
        spec,
        base_level=1,
        support=[x.idx for x in L],
        goppa=g,
        twists=[(1, 1, b.idx), (2, 2, (a * b + one).idx)],
    )
    expected_H = [
        [one, a, one, a * b, one, (a + one) * b, (a + one) * b, a * b, a, a * b + one,
         a * b + one, a, (a + one) * b, a * b + one],
        [(a + one) * b, a * b + a + one, a * b + one, one, b + a, b + one, a * b + one,
         (a + one) * b + a, zero, a * b + one, a + one, b + a, (a + one) * b + one, b + a],
        [a * b, b + a + one, b + a, a * b + a, (a + one) * b + one, one, a * b,
         b + a + one, zero, zero, a, b + a, one, b + one],
    ]
    code = MtgCode(params)
    return ExampleBundle(spec, params, code, {"H": expected_H})


def example2() -> ExampleBundle:
    """Single twist with eta = c drawn from F256 \\ F16; same L and g as
    example1; code lives in F4^14."""
    spec = field_build(2, [[1, 1, 1], [2, 1, 1], [8, 2, 1]], gen_names="abc")
    lvl = 3
    a = spec.embed(spec.gen(1), lvl)
    b = spec.embed(spec.gen(2), lvl)
    c = spec.gen(lvl)
    one = spec.one(lvl)
    zero = spec.zero(lvl)

    L = [
        b + one,
        (a + one) * b + one,
        (a + one) * b,
        a * b + one,
        a,
        a + one,
        (a + one) * b + a + one,
        a * b,
        zero,
        b,
        (a + one) * b + a,
        b + a,
        b + a + one,
        one,
    ]
    g = Poly.from_felts([a + one, (a + one) * b + a + one, a * b + a + one, one])
    params = mtg_params(
        spec,
        base_level=1,
        s0_level=2,
        support=[x.idx for x in L],
        goppa=g,
        twists=[(1, 1, c.idx)],
    )
    A = (a + one) * b + a
    y = [1, 2, 3, 1, 1, 3, 1, 2, 0, 0, 0, 0, 0, 2]  # packed F4 indices
    expected = {
        "syndrome": [A, c * A + A, A],
        "sigma": [one.idx, 1],  # x - 1
        "tau": [(A + A * c).idx, (A * c).idx],
        "error_pos": 13,
        "error_mag": 2,  # the F4 element a
        "received": y,
    }
    code = MtgCode(params)
    return ExampleBundle(spec, params, code, expected)


def example3() -> ExampleBundle:
    """The n=20 decoding walk-through over F2 <= F32 <= F1024."""
    spec = field_build(2, [[1, 0, 1, 0, 0, 1], [8, 1, 1]], gen_names="ac")
    lvl = 2
    a = spec.embed(spec.gen(1), lvl)
    c = spec.gen(lvl)

    def ap(e: int) -> Felt:
        return Felt(spec, lvl, spec.pow(lvl, a.idx, e))

    support_exponents = [23, 3, 25, 6, 21, 4, 14, 22, 20, 8, 13, 16, 1, 9, 11, 0, 28, 26, 2, 12]
    L = [ap(e) for e in support_exponents]
    g = Poly.from_felts([ap(8), ap(6), ap(1), spec.one(lvl)])
    eta = ap(3) * c + ap(17)
    params = mtg_params(
        spec,
        base_level=0,
        s0_level=1,
        support=[x.idx for x in L],
        goppa=g,
        twists=[(1, 1, eta.idx)],
    )
    generator_rows = [
        [1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 0],
        [0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 1, 1, 1, 1, 1],
    ]
    y = [0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 0]
    expected = {
        "eta": eta,
        "H_col0": [ap(4), ap(14) * c + ap(14), ap(19)],
        "H_row0": [ap(e) for e in [4, 6, 18, 18, 25, 28, 8, 3, 30, 17, 23, 8, 6, 16, 9, 29, 20, 0, 8, 1]],
        "H_row2": [ap(e) for e in [19, 12, 6, 30, 5, 5, 5, 16, 8, 2, 18, 9, 8, 3, 0, 29, 14, 21, 12, 25]],
        "H_row1": [
            ap(u) * c + ap(v)
            for (u, v) in [
                (14, 14), (18, 21), (3, 14), (8, 27), (29, 10), (12, 22), (22, 4),
                (10, 11), (31, 16), (13, 30), (3, 28), (28, 25), (12, 18), (15, 4),
                (14, 9), (1, 28), (14, 5), (19, 17), (17, 4), (9, 17),
            ]
        ],
        "s_coeffs": [ap(14) * c + ap(14), ap(19), ap(4)],  # s(x) little-endian
        "s_pi_coeffs": [eta * ap(11) + ap(4), ap(27), ap(19)],
        "q1": [ap(20), ap(12)],
        "sigma": [ap(8), spec.one(lvl)],  # x - a^8
        "error_pos": 0,
        "error_mag": 1,
        "received": y,
        "generator_rows": generator_rows,
        "decoded": generator_rows[0],
        "paper_printed_codeword": [1, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 1],
    }
    code = MtgCode(params)
    return ExampleBundle(spec, params, code, expected)


def qc_f9() -> ExampleBundle:
    """The F9 quasi-cyclic instance: b=z, t=4, g=(x-2z)^4, eta=2z+1."""
    spec = field_build(3, [[2, 2, 1]], gen_names="z")
    lvl = 1
    z = spec.gen(lvl)
    one = spec.one(lvl)
    two = spec.scalar(lvl, 2)

    # orbits of x -> z - x: {0, z}, {1, z+2}, {2, z+1}, {2z+1, 2z+2}
    L = [
        spec.zero(lvl),
        z,
        one,
        z + two,
        two,
        z + one,
        two * z + one,
        two * z + two,
    ]
    root = two * z  # b/2 = z/2 = 2z in characteristic 3
    lin = Poly.from_felts([-root, one])
    g = lin
    for _ in range(3):
        g = p_mul(g, lin)
    eta = two * z + one
    params = mtg_params(
        spec,
        base_level=0,
        support=[x.idx for x in L],
        goppa=g,
        twists=[(1, 2, eta.idx)],  # t1=1, hook t-2=2
    )
    expected = {
        "b": z,
        "g_coeffs": [two, two * z + one, spec.zero(lvl), z, one],
        "n": 8,
        "k": 3,
        "d": 4,
        "qc_order": 4,
    }
    code = MtgCode(params)
    return ExampleBundle(spec, params, code, expected)
