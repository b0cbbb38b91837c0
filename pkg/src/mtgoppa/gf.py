"""Arithmetic in towers of finite fields F_p <= F_q <= ... <= F_{q^m}.

Representation: an element at tower level i is a vector of dim(i) digits
over the prime field, little-endian in the flattened polynomial basis,
packed into a single integer idx = sum(digit_j * p**j).  Packing makes
three things cheap:

  * embedding a lower level into a higher one is the identity on idx
    (the flattened basis of a stage is a prefix of the next stage's);
  * membership in the stage-i subfield is just idx < order(i);
  * canonical enumeration order is ascending idx, matching the
    documented order [0, 1, a, a+1] for F_4.

Each extension stage is F_{prev}[x]/(modulus) with a monic modulus
whose coefficients are elements of the previous stage.  Moduli are
validated for irreducibility at construction: exhaustive root search
for degree <= 3 over small stages, the distinct-degree criterion
otherwise.

Multiplication and inversion optionally go through per-level log/exp
tables (built lazily for levels whose order is within log_table_bound);
the tables are an accelerator only and never change results.  Addition
in characteristic 2 is XOR of packed digits at every level.

Felt operators tick the active OpCounter (one tick per public field
operation) so the decoder can meter its own work.
"""

from __future__ import annotations

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    LevelMismatch,
    NotPrime,
    ReducibleModulus,
    TooLarge,
)
from .opcount import get_counter

DEFAULT_LOG_TABLE_BOUND = 1 << 16
DEFAULT_ENUMERATION_BOUND = 1 << 20
_ADD_TABLE_BOUND = 512  # odd characteristic only; p=2 uses XOR

_GEN_NAMES = "abcdefgh"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class Felt:
    """A field element: spec reference, tower level, packed digit index.

    Immutable; operators require both operands to share spec and level.
    """

    __slots__ = ("spec", "level", "idx")

    def __init__(self, spec: "FieldSpec", level: int, idx: int):
        self.spec = spec
        self.level = level
        self.idx = idx

    def _peer(self, other: "Felt") -> None:
        if not isinstance(other, Felt):
            raise TypeError(f"Felt expected, got {type(other).__name__}")
        if (other.spec is not self.spec and other.spec != self.spec) or other.level != self.level:
            raise LevelMismatch("operands must share field spec and level")

    def __add__(self, other):
        self._peer(other)
        c = get_counter()
        if c is not None:
            c.tick("add")
        return Felt(self.spec, self.level, self.spec.add(self.level, self.idx, other.idx))

    def __sub__(self, other):
        self._peer(other)
        c = get_counter()
        if c is not None:
            c.tick("add")
        return Felt(self.spec, self.level, self.spec.sub(self.level, self.idx, other.idx))

    def __neg__(self):
        return Felt(self.spec, self.level, self.spec.neg(self.level, self.idx))

    def __mul__(self, other):
        self._peer(other)
        c = get_counter()
        if c is not None:
            c.tick("mul")
        return Felt(self.spec, self.level, self.spec.mul(self.level, self.idx, other.idx))

    def __truediv__(self, other):
        self._peer(other)
        c = get_counter()
        if c is not None:
            c.tick("inv")
            c.tick("mul")
        inv = self.spec.inv(self.level, other.idx)
        return Felt(self.spec, self.level, self.spec.mul(self.level, self.idx, inv))

    def __pow__(self, e: int):
        c = get_counter()
        if c is not None:
            # square-and-multiply cost in the classical model
            if e < 0:
                c.tick("inv")
            k = abs(e)
            c.tick("mul", (max(k.bit_length() - 1, 0) + bin(k)[3:].count("1")) if k else 0)
        return Felt(self.spec, self.level, self.spec.pow(self.level, self.idx, e))

    def inverse(self) -> "Felt":
        c = get_counter()
        if c is not None:
            c.tick("inv")
        return Felt(self.spec, self.level, self.spec.inv(self.level, self.idx))

    def __eq__(self, other):
        return (
            isinstance(other, Felt)
            and (other.spec is self.spec or other.spec == self.spec)
            and other.level == self.level
            and other.idx == self.idx
        )

    def __hash__(self):
        return hash((self.level, self.idx))

    def __bool__(self):
        return self.idx != 0

    def is_zero(self) -> bool:
        return self.idx == 0

    def digits(self) -> tuple[int, ...]:
        return self.spec.digits(self.level, self.idx)

    def __repr__(self):
        return f"Felt({self.spec.pretty(self.level, self.idx)!r}, level={self.level})"


class FieldSpec:
    """A validated tower of extension fields over F_p.

    Immutable after construction and shareable across threads; the lazy
    accelerator tables are content-deterministic, so concurrent builds
    are benign.
    """

    def __init__(
        self,
        p: int,
        moduli: list[list[int]],
        *,
        log_table_bound: int = DEFAULT_LOG_TABLE_BOUND,
        enumeration_bound: int = DEFAULT_ENUMERATION_BOUND,
        gen_names: str | None = None,
    ):
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p
        self.log_table_bound = log_table_bound
        self.enumeration_bound = enumeration_bound
        self.gen_names = gen_names or _GEN_NAMES

        self.stage_degs: list[int] = [1]
        self.dims: list[int] = [1]
        self.orders: list[int] = [p]
        self.moduli: list[tuple[int, ...] | None] = [None]
        self._exp: list[list[int] | None] = [None]
        self._log: list[list[int] | None] = [None]
        self._addtab: list[list[list[int]] | None] = [None]

        for modulus in moduli:
            self._push_stage(modulus)

        self.top = len(self.orders) - 1

    # ------------------------------------------------------------------
    # construction helpers
    # ------------------------------------------------------------------

    def _push_stage(self, modulus: list[int]) -> None:
        level = len(self.orders)  # the level being created
        prev_order = self.orders[level - 1]
        coeffs = tuple(int(c) for c in modulus)
        if len(coeffs) < 3:
            raise DegreeMismatch("stage modulus must have degree >= 2 so orders strictly increase")
        if coeffs[-1] != 1:
            raise DegreeMismatch("stage modulus must be monic")
        if any(c < 0 or c >= prev_order for c in coeffs):
            raise DegreeMismatch("modulus coefficient out of range for its stage")
        deg = len(coeffs) - 1
        if not self._modulus_irreducible(level - 1, coeffs):
            raise ReducibleModulus(f"stage-{level} modulus is reducible")
        self.stage_degs.append(deg)
        self.dims.append(self.dims[-1] * deg)
        self.orders.append(prev_order**deg)
        self.moduli.append(coeffs)
        self._exp.append(None)
        self._log.append(None)
        self._addtab.append(None)

    # Minimal polynomial machinery over one level, on packed-idx lists.
    # Only used for modulus validation; poly.py is the real module.

    def _pnorm(self, a: list[int]) -> list[int]:
        while a and a[-1] == 0:
            a.pop()
        return a

    def _pmul(self, level: int, a: list[int], b: list[int]) -> list[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = self.add(level, out[i + j], self.mul(level, x, y))
        return self._pnorm(out)

    def _pmod(self, level: int, a: list[int], m: list[int]) -> list[int]:
        a = list(a)
        inv_lead = self.inv(level, m[-1])
        while len(a) >= len(m):
            q = self.mul(level, a[-1], inv_lead)
            shift = len(a) - len(m)
            if q:
                for k, c in enumerate(m):
                    if c:
                        a[shift + k] = self.sub(level, a[shift + k], self.mul(level, q, c))
            a.pop()
            self._pnorm(a)
            if not a:
                break
        return a

    def _pgcd(self, level: int, a: list[int], b: list[int]) -> list[int]:
        a, b = list(a), list(b)
        while b:
            a, b = b, self._pmod(level, a, b)
        return a

    def _ppow_xq(self, level: int, base: list[int], q: int, m: list[int]) -> list[int]:
        # base^q mod m by square-and-multiply
        result = [1]
        acc = list(base)
        e = q
        while e:
            if e & 1:
                result = self._pmod(level, self._pmul(level, result, acc), m)
            e >>= 1
            if e:
                acc = self._pmod(level, self._pmul(level, acc, acc), m)
        return result

    def _modulus_irreducible(self, base_level: int, coeffs: tuple[int, ...]) -> bool:
        deg = len(coeffs) - 1
        order = self.orders[base_level]
        m = list(coeffs)
        if deg <= 3 and order <= 4096:
            # root search suffices for degree 2 and 3
            for x in range(order):
                acc = 0
                for c in reversed(coeffs):
                    acc = self.add(base_level, self.mul(base_level, acc, x), c)
                if acc == 0:
                    return False
            return deg in (2, 3)
        # distinct-degree criterion: x^(order^deg) == x mod m and
        # gcd(x^(order^(deg/r)) - x, m) == 1 for every prime r | deg
        x = [0, 1]
        powers: list[list[int] | None] = [None] * (deg + 1)
        cur = list(x)
        for e in range(1, deg + 1):
            cur = self._ppow_xq(base_level, cur, order, m)
            powers[e] = cur

        def _minus_x(poly: list[int]) -> list[int]:
            width = max(len(poly), 2)
            out = [
                self.sub(
                    base_level,
                    poly[i] if i < len(poly) else 0,
                    x[i] if i < len(x) else 0,
                )
                for i in range(width)
            ]
            return self._pnorm(out)

        if _minus_x(powers[deg]):
            return False
        for r in _prime_factors(deg):
            g = self._pgcd(base_level, m, _minus_x(powers[deg // r]))
            if len(g) - 1 > 0:
                return False
        return True

    # ------------------------------------------------------------------
    # packed-digit primitives
    # ------------------------------------------------------------------

    def digits(self, level: int, idx: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.dims[level]):
            idx, d = divmod(idx, p)
            out.append(d)
        return tuple(out)

    def from_digits(self, level: int, digs) -> int:
        p = self.p
        idx = 0
        for d in reversed(list(digs)):
            idx = idx * p + d
        return idx

    def add(self, level: int, x: int, y: int) -> int:
        p = self.p
        if p == 2:
            return x ^ y
        tab = self._addtab[level]
        if tab is None and self.orders[level] <= _ADD_TABLE_BOUND:
            tab = self._build_addtab(level)
        if tab is not None:
            return tab[x][y]
        out = 0
        mult = 1
        while x or y:
            x, dx = divmod(x, p)
            y, dy = divmod(y, p)
            out += ((dx + dy) % p) * mult
            mult *= p
        return out

    def neg(self, level: int, x: int) -> int:
        p = self.p
        if p == 2:
            return x
        out = 0
        mult = 1
        while x:
            x, dx = divmod(x, p)
            out += ((p - dx) % p) * mult
            mult *= p
        return out

    def sub(self, level: int, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        return self.add(level, x, self.neg(level, y))

    def _build_addtab(self, level: int):
        order = self.orders[level]
        p = self.p
        digs = [self.digits(level, i) for i in range(order)]
        tab = []
        for x in range(order):
            dx = digs[x]
            row = [0] * order
            for y in range(order):
                dy = digs[y]
                row[y] = self.from_digits(level, [(a + b) % p for a, b in zip(dx, dy)])
            tab.append(row)
        self._addtab[level] = tab
        return tab

    def _raw_mul(self, level: int, x: int, y: int) -> int:
        """Product without a log table at this level; lower levels still
        dispatch through their own accelerators."""
        if level == 0:
            return (x * y) % self.p
        if x == 0 or y == 0:
            return 0
        base = self.orders[level - 1]
        deg = self.stage_degs[level]
        sub_mul = self.mul
        xs, ys = [], []
        while x:
            x, c = divmod(x, base)
            xs.append(c)
        while y:
            y, c = divmod(y, base)
            ys.append(c)
        prod = [0] * (len(xs) + len(ys) - 1)
        for i, cx in enumerate(xs):
            if cx == 0:
                continue
            for j, cy in enumerate(ys):
                if cy:
                    prod[i + j] = self.add(level - 1, prod[i + j], sub_mul(level - 1, cx, cy))
        mod = self.moduli[level]
        for k in range(len(prod) - 1, deg - 1, -1):
            c = prod[k]
            if c == 0:
                continue
            prod[k] = 0
            for j in range(deg):
                if mod[j]:
                    prod[k - deg + j] = self.sub(
                        level - 1, prod[k - deg + j], sub_mul(level - 1, c, mod[j])
                    )
        idx = 0
        for c in reversed(prod[:deg]):
            idx = idx * base + c
        return idx

    def _raw_pow(self, level: int, x: int, e: int) -> int:
        result = 1
        acc = x
        while e:
            if e & 1:
                result = self._raw_mul(level, result, acc)
            e >>= 1
            if e:
                acc = self._raw_mul(level, acc, acc)
        return result

    def _ensure_tables(self, level: int) -> bool:
        if self._exp[level] is not None:
            return True
        order = self.orders[level]
        if level == 0 or order > self.log_table_bound:
            return False
        n = order - 1
        factors = _prime_factors(n)
        gen = None
        for cand in range(2, order):
            if all(self._raw_pow(level, cand, n // r) != 1 for r in factors):
                gen = cand
                break
        if gen is None:  # cannot happen for a true field; guard anyway
            return False
        exp = [1] * (2 * n)
        log = [0] * order
        val = 1
        for i in range(n):
            exp[i] = val
            log[val] = i
            val = self._raw_mul(level, val, gen)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp[level] = exp
        self._log[level] = log
        return True

    def mul(self, level: int, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if level == 0:
            return (x * y) % self.p
        exp = self._exp[level]
        if exp is None:
            if not self._ensure_tables(level):
                return self._raw_mul(level, x, y)
            exp = self._exp[level]
        return exp[self._log[level][x] + self._log[level][y]]

    def inv(self, level: int, x: int) -> int:
        if x == 0:
            raise DivisionByZero("zero has no inverse")
        if x == 1:
            return 1
        exp = self._exp[level]
        if exp is None and self._ensure_tables(level):
            exp = self._exp[level]
        if exp is not None:
            n = self.orders[level] - 1
            return exp[n - self._log[level][x]]
        return self._raw_pow(level, x, self.orders[level] - 2)

    def pow(self, level: int, x: int, e: int) -> int:
        order = self.orders[level]
        if e < 0:
            x = self.inv(level, x)
            e = -e
        if x == 0:
            return 0 if e else 1
        exp = self._exp[level]
        if exp is None and self._ensure_tables(level):
            exp = self._exp[level]
        if exp is not None:
            n = order - 1
            return exp[(self._log[level][x] * e) % n]
        return self._raw_pow(level, x, e % (order - 1) if e >= order - 1 else e)

    # ------------------------------------------------------------------
    # element constructors and structure queries
    # ------------------------------------------------------------------

    def elt(self, level: int, idx: int) -> Felt:
        if not 0 <= level <= self.top:
            raise LevelMismatch(f"no level {level} in this tower")
        if not 0 <= idx < self.orders[level]:
            raise LevelMismatch(f"index {idx} out of range for level {level}")
        return Felt(self, level, idx)

    def zero(self, level: int | None = None) -> Felt:
        return Felt(self, self.top if level is None else level, 0)

    def one(self, level: int | None = None) -> Felt:
        return Felt(self, self.top if level is None else level, 1)

    def gen(self, level: int) -> Felt:
        """The stage generator adjoined at `level` (a, b, c, ... in order)."""
        if not 1 <= level <= self.top:
            raise LevelMismatch("generators exist for levels >= 1")
        return Felt(self, level, self.orders[level - 1])

    def scalar(self, level: int, n: int) -> Felt:
        """The prime-field constant n at the given level."""
        return Felt(self, level, n % self.p)

    def embed(self, x: Felt, level: int) -> Felt:
        if x.spec is not self:
            raise LevelMismatch("foreign element")
        if level < x.level or level > self.top:
            raise LevelMismatch(f"cannot embed level {x.level} into level {level}")
        return Felt(self, level, x.idx)

    def project(self, x: Felt, level: int) -> Felt:
        """Inverse of embed; requires the element to lie in the target stage."""
        if level > x.level:
            raise LevelMismatch("project goes downward")
        if x.idx >= self.orders[level]:
            raise LevelMismatch("element does not lie in the target stage")
        return Felt(self, level, x.idx)

    def in_subfield(self, x: Felt, stage: int) -> bool:
        """True iff x lies in the embedded stage-`stage` subfield.

        Equivalent to the Frobenius fixed-point test x**order(stage) == x;
        the packed representation makes it a range check.
        """
        if x.spec is not self:
            raise LevelMismatch("foreign element")
        if stage > x.level:
            raise LevelMismatch("stage above the element's level")
        return x.idx < self.orders[stage]

    def enumerate_level(self, level: int):
        """All elements of a level in canonical (ascending idx) order."""
        order = self.orders[level]
        if order > self.enumeration_bound:
            raise TooLarge(f"level order {order} exceeds enumeration bound")
        for idx in range(order):
            yield Felt(self, level, idx)

    # ------------------------------------------------------------------
    # text forms
    # ------------------------------------------------------------------

    def felt_str(self, x: Felt) -> str:
        digs = self.digits(x.level, x.idx)
        if self.p < 10:
            return "".join(str(d) for d in digs)
        return ".".join(str(d) for d in digs)

    def felt_from_str(self, level: int, s: str) -> Felt:
        if self.p < 10:
            digs = [int(ch) for ch in s.strip()]
        else:
            digs = [int(part) for part in s.strip().split(".")]
        if len(digs) != self.dims[level]:
            raise LevelMismatch(f"expected {self.dims[level]} digits, got {len(digs)}")
        if any(d < 0 or d >= self.p for d in digs):
            raise LevelMismatch("digit out of range")
        return Felt(self, level, self.from_digits(level, digs))

    def pretty(self, level: int, idx: int) -> str:
        """Monomial rendering in the stage generators, e.g. 'ab+a+1'."""
        if idx == 0:
            return "0"
        digs = self.digits(level, idx)
        terms = []
        for pos in range(self.dims[level] - 1, -1, -1):
            d = digs[pos]
            if d == 0:
                continue
            expo = []
            r = pos
            for st in range(1, level + 1):
                r, e = divmod(r, self.stage_degs[st])
                expo.append(e)
            mono = ""
            for st, e in enumerate(expo, start=1):
                if e == 0:
                    continue
                name = self.gen_names[st - 1]
                mono += name if e == 1 else f"{name}^{e}"
            coeff = "" if (d == 1 and mono) else str(d)
            terms.append((coeff + mono) or "1")
        return "+".join(terms)

    def spec_lines(self) -> list[str]:
        lines = [f"p {self.p}"]
        for level in range(1, self.top + 1):
            coeffs = self.moduli[level]
            parts = [self.felt_str(Felt(self, level - 1, c)) for c in coeffs]
            lines.append("modulus " + ",".join(parts))
        return lines

    @classmethod
    def from_spec_lines(cls, lines: list[str], **kwargs) -> "FieldSpec":
        p = None
        moduli = []
        for raw in lines:
            line = raw.strip()
            if not line:
                continue
            key, _, rest = line.partition(" ")
            if key == "p":
                p = int(rest)
            elif key == "modulus":
                if p is None:
                    raise DegreeMismatch("modulus before p line")
                coeffs = []
                for s in rest.split(","):
                    digs = s.strip() if p < 10 else s.strip().split(".")
                    idx = 0
                    for d in reversed(digs):
                        idx = idx * p + int(d)
                    coeffs.append(idx)
                moduli.append(coeffs)
        if p is None:
            raise DegreeMismatch("missing p line")
        return cls(p, moduli, **kwargs)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, FieldSpec)
            and other.p == self.p
            and other.moduli == self.moduli
        )

    def __hash__(self):
        return hash((self.p, tuple(self.moduli)))

    def __repr__(self):
        chain = " <= ".join(str(o) for o in self.orders)
        return f"FieldSpec(p={self.p}, orders {chain})"


def field_build(p: int, moduli: list[list[int]], **kwargs) -> FieldSpec:
    """Validated tower constructor (NotPrime / ReducibleModulus / DegreeMismatch)."""
    return FieldSpec(p, moduli, **kwargs)


# Functional aliases mirroring the operation names used elsewhere.

def f_add(x: Felt, y: Felt) -> Felt:
    return x + y


def f_sub(x: Felt, y: Felt) -> Felt:
    return x - y


def f_mul(x: Felt, y: Felt) -> Felt:
    return x * y


def f_inv(x: Felt) -> Felt:
    return x.inverse()


def f_pow(x: Felt, e: int) -> Felt:
    return x**e


def f_embed(x: Felt, level: int) -> Felt:
    return x.spec.embed(x, level)


def in_subfield(x: Felt, stage: int) -> bool:
    return x.spec.in_subfield(x, stage)


def f_enumerate(spec: FieldSpec, level: int):
    return spec.enumerate_level(level)
