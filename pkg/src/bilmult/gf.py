"""Exact arithmetic in prime fields and tower extensions.

A field is described by a prime characteristic p and a chain of monic
irreducible moduli: the empty chain is F_p itself, and each step of degree d
adjoins a root of  x^d + c_{d-1} x^{d-1} + ... + c_0  with the coefficients
c_i taken from the field one level below (the leading 1 is implicit, so a
step is stored as the tuple (c_0, ..., c_{d-1})).

Element representation mirrors the chain: an element of F_p is an int in
[0, p); an element of an extension step of degree d is a tuple of exactly d
lower-field elements, degree-0 coordinate first, always zero-padded to full
length.  Tuples are immutable and hashable, so elements can be dict keys.

Canonical index: a coordinate vector read as a base-q integer with the
degree-0 coordinate least significant.  Every deterministic scan in the
package (irreducible-polynomial discovery, evaluation-point order, root
search) walks elements in ascending canonical index, which is what makes
constructions reproducible across runs and machines.

Size policy: arithmetic works in any field the chain can describe, but
element *enumeration* is refused beyond 2**20 elements.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .errors import (
    DivisionByZero,
    FieldMismatch,
    NotPrime,
    ParameterTooLarge,
    TooLarge,
)

MAX_PRIME = 2**31
ENUMERATION_CAP = 2**20


def is_prime(p: int) -> bool:
    """Trial-division primality check; inputs here are small by contract."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """A prime field or a chain of polynomial quotient extensions."""

    __slots__ = ("p", "chain", "q", "_parent")

    def __init__(self, p: int, chain: tuple = ()):
        if p > MAX_PRIME:
            raise TooLarge(f"characteristic {p} exceeds the 2^31 cap")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        self.p = p
        self.chain = tuple(tuple(step) for step in chain)
        q = p
        for step in self.chain:
            q **= len(step)
        self.q = q
        self._parent = None

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree of the top step (1 for a prime field)."""
        return len(self.chain[-1]) if self.chain else 1

    @property
    def parent(self) -> "Field":
        """The field one chain level below (self for a prime field)."""
        if not self.chain:
            return self
        if self._parent is None:
            self._parent = Field(self.p, self.chain[:-1])
        return self._parent

    def signature(self) -> tuple:
        """Hashable canonical identity: (p, encoded chain)."""
        sig = [self.p]
        level = Field(self.p)
        for step in self.chain:
            sig.append((len(step), tuple(level.to_int(c) for c in step)))
            level = Field(self.p, level.chain + (step,))
        return tuple(sig)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.p == other.p and self.chain == other.chain

    def __hash__(self) -> int:
        return hash(self.signature())

    def __repr__(self) -> str:
        if not self.chain:
            return f"F({self.p})"
        degs = "x".join(str(len(step)) for step in self.chain)
        return f"F({self.p}^{degs}={self.q})"

    def extends(self, base: "Field") -> bool:
        """True iff base's chain is a prefix of this field's chain."""
        return (
            self.p == base.p
            and len(base.chain) <= len(self.chain)
            and self.chain[: len(base.chain)] == base.chain
        )

    def degree_over(self, base: "Field") -> int:
        if not self.extends(base):
            raise FieldMismatch(f"{self} does not extend {base}")
        n = 1
        for step in self.chain[len(base.chain):]:
            n *= len(step)
        return n

    # -- element arithmetic --------------------------------------------------

    @property
    def zero(self):
        if not self.chain:
            return 0
        return tuple(self.parent.zero for _ in range(self.degree))

    @property
    def one(self):
        if not self.chain:
            return 1
        par = self.parent
        return (par.one,) + tuple(par.zero for _ in range(self.degree - 1))

    def is_element(self, x) -> bool:
        if not self.chain:
            return isinstance(x, int) and 0 <= x < self.p
        return (
            isinstance(x, tuple)
            and len(x) == self.degree
            and all(self.parent.is_element(c) for c in x)
        )

    def add(self, x, y):
        if not self.chain:
            return (x + y) % self.p
        par = self.parent
        return tuple(par.add(a, b) for a, b in zip(x, y))

    def neg(self, x):
        if not self.chain:
            return (-x) % self.p
        par = self.parent
        return tuple(par.neg(a) for a in x)

    def sub(self, x, y):
        if not self.chain:
            return (x - y) % self.p
        par = self.parent
        return tuple(par.sub(a, b) for a, b in zip(x, y))

    def mul(self, x, y):
        if not self.chain:
            return (x * y) % self.p
        par = self.parent
        d = self.degree
        modulus = self.chain[-1]
        prod = [par.zero] * (2 * d - 1)
        for i, xi in enumerate(x):
            if xi == par.zero:
                continue
            for j, yj in enumerate(y):
                if yj == par.zero:
                    continue
                prod[i + j] = par.add(prod[i + j], par.mul(xi, yj))
        # reduce modulo the monic modulus: x^d = -(c_0 + ... + c_{d-1} x^{d-1})
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c == par.zero:
                continue
            prod[k] = par.zero
            for i, m in enumerate(modulus):
                if m != par.zero:
                    prod[k - d + i] = par.sub(prod[k - d + i], par.mul(c, m))
        return tuple(prod[:d])

    def scalar_mul(self, c, x):
        """Multiply every coordinate of x by the parent-field scalar c."""
        if not self.chain:
            return (c * x) % self.p
        par = self.parent
        return tuple(par.mul(c, a) for a in x)

    def inv(self, x):
        if x == self.zero:
            raise DivisionByZero(f"inverse of zero in {self}")
        if not self.chain:
            return pow(x, self.p - 2, self.p)
        par = self.parent
        modulus = list(self.chain[-1]) + [par.one]
        u = _poly_modinv(par, list(x), modulus)
        u = u + [par.zero] * (self.degree - len(u))
        return tuple(u[: self.degree])

    def pow(self, x, e: int):
        if e < 0:
            return self.pow(self.inv(x), -e)
        acc = self.one
        base = x
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    # -- canonical encoding ---------------------------------------------------

    def to_int(self, x) -> int:
        if not self.chain:
            return x
        par = self.parent
        idx = 0
        for c in reversed(x):
            idx = idx * par.q + par.to_int(c)
        return idx

    def from_int(self, idx: int):
        if not self.chain:
            return idx % self.p
        par = self.parent
        coords = []
        for _ in range(self.degree):
            coords.append(par.from_int(idx % par.q))
            idx //= par.q
        return tuple(coords)

    def elements(self) -> Iterator:
        if self.q > ENUMERATION_CAP:
            raise ParameterTooLarge(
                f"enumeration of {self} ({self.q} elements) exceeds the 2^20 cap"
            )
        return (self.from_int(i) for i in range(self.q))

    # -- coordinates over a subfield -------------------------------------------

    def coords_over(self, x, base: "Field") -> tuple:
        """Flatten x into base-field coordinates (degree-0 first, recursively)."""
        if self == base:
            return (x,)
        if not self.extends(base) or not self.chain:
            raise FieldMismatch(f"{base} is not a subfield of {self}")
        par = self.parent
        out = []
        for c in x:
            out.extend(par.coords_over(c, base))
        return tuple(out)

    def from_coords_over(self, vec, base: "Field"):
        """Inverse of coords_over."""
        n = self.degree_over(base)
        if len(vec) != n:
            raise FieldMismatch(f"expected {n} coordinates, got {len(vec)}")
        if self == base:
            return vec[0]
        par = self.parent
        step = n // self.degree
        return tuple(
            par.from_coords_over(vec[i * step : (i + 1) * step], base)
            for i in range(self.degree)
        )

    def lift(self, x, sub: "Field"):
        """Embed an element of a subfield (chain prefix) into this field."""
        if self == sub:
            return x
        if not self.extends(sub):
            raise FieldMismatch(f"{sub} is not a subfield of {self}")
        par = self.parent
        lifted = par.lift(x, sub)
        return (lifted,) + tuple(par.zero for _ in range(self.degree - 1))

    # -- irreducibility and canonical extension ---------------------------------

    def poly_is_irreducible(self, coeffs) -> bool:
        """Is x^d + coeffs[d-1] x^{d-1} + ... + coeffs[0] irreducible here?

        Distinct-degree criterion: f of degree d is irreducible iff
        gcd(f, x^(q^i) - x) = 1 for i = 1 .. floor(d/2).  Small extension
        fields run on int-encoded lookup tables, which matters during the
        canonical-modulus scans.
        """
        d = len(coeffs)
        if d < 1:
            return False
        if d == 1:
            return True
        if self.chain and self.q <= TABLE_CAP:
            work = _tables_for(self)
            return _irreducible_impl(work, [self.to_int(c) for c in coeffs])
        return _irreducible_impl(self, list(coeffs))

    def extend(self, n: int) -> "Field":
        """Extend by the canonically-first monic irreducible of degree n.

        Candidates are scanned in ascending canonical index of their
        low-coefficient vector, so the result is deterministic.  n = 1
        returns the field unchanged.
        """
        if n < 1:
            raise ParameterTooLarge("extension degree must be >= 1")
        if n == 1:
            return self
        return _extend_cached(self, n)


@lru_cache(maxsize=None)
def _extend_cached(field: Field, n: int) -> Field:
    for idx in range(field.q**n):
        coeffs = []
        t = idx
        for _ in range(n):
            coeffs.append(field.from_int(t % field.q))
            t //= field.q
        if field.poly_is_irreducible(coeffs):
            return Field(field.p, field.chain + (tuple(coeffs),))
    raise AssertionError(  # pragma: no cover - irreducibles of every degree exist
        f"no irreducible of degree {n} over {field}"
    )


def prime_field(p: int) -> Field:
    """Descriptor of F_p (p prime, 2 <= p <= 2^31)."""
    return Field(p)


# ---------------------------------------------------------------------------
# Table-backed arithmetic for small extension fields.  Duck-types the subset
# of the Field interface the polynomial helpers use, with elements as ints.
# ---------------------------------------------------------------------------

TABLE_CAP = 256


class _TableField:
    __slots__ = ("q", "zero", "one", "_add", "_sub", "_mul", "_inv")

    def __init__(self, field: Field):
        q = field.q
        elems = [field.from_int(i) for i in range(q)]
        index = {e: i for i, e in enumerate(elems)}
        self.q = q
        self.zero = 0
        self.one = index[field.one]
        self._add = [[index[field.add(x, y)] for y in elems] for x in elems]
        self._sub = [[index[field.sub(x, y)] for y in elems] for x in elems]
        self._mul = [[index[field.mul(x, y)] for y in elems] for x in elems]
        self._inv = [0] + [index[field.inv(x)] for x in elems[1:]]

    def add(self, x, y):
        return self._add[x][y]

    def sub(self, x, y):
        return self._sub[x][y]

    def mul(self, x, y):
        return self._mul[x][y]

    def inv(self, x):
        if x == 0:
            raise DivisionByZero("inverse of zero")
        return self._inv[x]


@lru_cache(maxsize=None)
def _tables_for(field: Field) -> _TableField:
    return _TableField(field)


def _irreducible_impl(work, coeffs: list) -> bool:
    d = len(coeffs)
    if coeffs[0] == work.zero:
        return False  # divisible by x
    f = list(coeffs) + [work.one]
    x_poly = [work.zero, work.one]
    h = list(x_poly)
    for _ in range(d // 2):
        h = _poly_powmod(work, h, work.q, f)
        g = _poly_gcd(work, f, _poly_sub(work, h, x_poly))
        if len(g) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over an arbitrary Field (dense low-to-high coefficient
# lists, used for irreducibility testing and inversion).
# ---------------------------------------------------------------------------


def _poly_trim(field: Field, f: list) -> list:
    while f and f[-1] == field.zero:
        f.pop()
    return f


def _poly_sub(field: Field, f: list, g: list) -> list:
    out = []
    for i in range(max(len(f), len(g))):
        a = f[i] if i < len(f) else field.zero
        b = g[i] if i < len(g) else field.zero
        out.append(field.sub(a, b))
    return _poly_trim(field, out)


def _poly_mul(field: Field, f: list, g: list) -> list:
    if not f or not g:
        return []
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == field.zero:
            continue
        for j, b in enumerate(g):
            if b == field.zero:
                continue
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return _poly_trim(field, out)


def _poly_divmod(field: Field, f: list, g: list) -> tuple[list, list]:
    g = _poly_trim(field, list(g))
    if not g:
        raise DivisionByZero("polynomial division by zero")
    rem = list(f)
    glead_inv = field.inv(g[-1])
    quot = [field.zero] * max(0, len(rem) - len(g) + 1)
    while len(rem) >= len(g) and _poly_trim(field, list(rem)):
        rem = _poly_trim(field, rem)
        if len(rem) < len(g):
            break
        shift = len(rem) - len(g)
        factor = field.mul(rem[-1], glead_inv)
        quot[shift] = factor
        for i, c in enumerate(g):
            rem[shift + i] = field.sub(rem[shift + i], field.mul(factor, c))
    return _poly_trim(field, quot), _poly_trim(field, rem)


def _poly_mod(field: Field, f: list, g: list) -> list:
    return _poly_divmod(field, f, g)[1]


def _poly_gcd(field: Field, f: list, g: list) -> list:
    a, b = _poly_trim(field, list(f)), _poly_trim(field, list(g))
    while b:
        a, b = b, _poly_mod(field, a, b)
    if a:
        lead_inv = field.inv(a[-1])
        a = [field.mul(lead_inv, c) for c in a]
    return a


def _poly_powmod(field: Field, f: list, e: int, modulus: list) -> list:
    acc = [field.one]
    base = _poly_mod(field, list(f), modulus)
    while e:
        if e & 1:
            acc = _poly_mod(field, _poly_mul(field, acc, base), modulus)
        base = _poly_mod(field, _poly_mul(field, base, base), modulus)
        e >>= 1
    return acc


def _poly_modinv(field: Field, f: list, modulus: list) -> list:
    """Inverse of f modulo an irreducible modulus, by extended Euclid."""
    r0, r1 = _poly_trim(field, list(modulus)), _poly_mod(field, list(f), modulus)
    s0, s1 = [], [field.one]
    while r1:
        q, r = _poly_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(field, s0, _poly_mul(field, q, s1))
    if len(r0) != 1:
        raise DivisionByZero("element is not invertible (modulus not irreducible?)")
    lead_inv = field.inv(r0[0])
    return [field.mul(lead_inv, c) for c in s0]
