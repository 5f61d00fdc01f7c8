"""Bilinear decompositions of field multiplication, and a rank oracle.

A decomposition is a list of triples (a*, b*, c): a* and b* are linear forms
on the extension field (stored as coordinate vectors in the monomial basis
over the base field) and c is an element of the extension (also stored as a
base-field coordinate vector).  It computes

    x * y  =  sum_i  a*_i(x) . b*_i(y) . c_i

with one base-field multiplication per triple; the minimum number of triples
over all correct decompositions is the rank of the multiplication tensor.

Verification checks the identity on all n^2 pairs of basis monomials, which
suffices by bilinearity; an all-pairs product check is also provided for
cross-testing at tiny field sizes.

The brute-force rank search enumerates sums of rank-one tensors a (x) b (x) c
over the base field with deterministic lexicographic ordering.  By default a
and b are normalized (first nonzero coordinate = 1), which loses no
generality because scalars can be pushed into c.  Exhaustion is reported
honestly: a search aborted by the node budget is never conflated with a
proof that no decomposition of the target rank exists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import (
    BilmultError,
    DimensionMismatch,
    ParameterTooLarge,
    ParseError,
    ValidationError,
)
from .gf import Field

DEFAULT_NODE_BUDGET = 10**9

OUTCOME_FOUND = "found"
OUTCOME_EXHAUSTED = "exhausted"
OUTCOME_ABORTED = "aborted"


@dataclass(frozen=True)
class BilinearDecomposition:
    """Rank-r bilinear multiplication algorithm for top/base."""

    base: Field
    top: Field
    triples: tuple  # tuple of (a, b, c), each a length-n tuple of base elements

    def __post_init__(self):
        n = self.n
        for a, b, c in self.triples:
            if len(a) != n or len(b) != n or len(c) != n:
                raise DimensionMismatch(
                    f"triple vectors must have length {n}"
                )

    @property
    def n(self) -> int:
        return self.top.degree_over(self.base)

    @property
    def rank(self) -> int:
        return len(self.triples)

    @property
    def modulus(self) -> Optional[tuple]:
        """Defining modulus when the extension is a single step, else None."""
        added = self.top.chain[len(self.base.chain):]
        return added[0] if len(added) == 1 else None

    @property
    def is_flat(self) -> bool:
        return len(self.top.chain) - len(self.base.chain) == 1 or self.n == 1


def _basis_products(d: BilinearDecomposition):
    """Coordinates of e_j * e_k for the monomial basis of top over base."""
    base, top, n = d.base, d.top, d.n
    basis = []
    for j in range(n):
        vec = tuple(base.one if i == j else base.zero for i in range(n))
        basis.append(top.from_coords_over(vec, base))
    table = []
    for j in range(n):
        row = []
        for k in range(n):
            row.append(top.coords_over(top.mul(basis[j], basis[k]), base))
        table.append(row)
    return table


def verify_decomposition_detail(d: BilinearDecomposition):
    """(True, None) if d multiplies correctly, else (False, failing (j, k))."""
    base, n = d.base, d.n
    zero = base.zero
    expected = _basis_products(d)
    for j in range(n):
        for k in range(n):
            acc = [zero] * n
            for a, b, c in d.triples:
                s = base.mul(a[j], b[k])
                if s == zero:
                    continue
                for i in range(n):
                    if c[i] != zero:
                        acc[i] = base.add(acc[i], base.mul(s, c[i]))
            if tuple(acc) != expected[j][k]:
                return False, (j, k)
    return True, None


def verify_decomposition(d: BilinearDecomposition) -> bool:
    ok, _ = verify_decomposition_detail(d)
    return ok


def decomposition_apply(d: BilinearDecomposition, x, y):
    """Evaluate the algorithm on two elements of d.top."""
    base, top, n = d.base, d.top, d.n
    xv = top.coords_over(x, base)
    yv = top.coords_over(y, base)
    zero = base.zero
    acc = [zero] * n
    for a, b, c in d.triples:
        s1 = zero
        for ai, xi in zip(a, xv):
            if ai != zero and xi != zero:
                s1 = base.add(s1, base.mul(ai, xi))
        if s1 == zero:
            continue
        s2 = zero
        for bi, yi in zip(b, yv):
            if bi != zero and yi != zero:
                s2 = base.add(s2, base.mul(bi, yi))
        if s2 == zero:
            continue
        s = base.mul(s1, s2)
        for i in range(n):
            if c[i] != zero:
                acc[i] = base.add(acc[i], base.mul(s, c[i]))
    return top.from_coords_over(tuple(acc), base)


def exhaustive_product_check(d: BilinearDecomposition) -> bool:
    """Compare apply() against field multiplication on all element pairs."""
    top = d.top
    if top.q > 2**12:
        raise ParameterTooLarge("all-pairs check limited to 2^12 elements")
    elems = [top.from_int(i) for i in range(top.q)]
    for x in elems:
        for y in elems:
            if decomposition_apply(d, x, y) != top.mul(x, y):
                return False
    return True


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def _encode_element(field: Field, x):
    if not field.chain:
        return x
    return [_encode_element(field.parent, c) for c in x]


def _decode_element(field: Field, obj):
    if not field.chain:
        if not isinstance(obj, int) or not 0 <= obj < field.p:
            raise ValidationError(f"coefficient {obj!r} is not a residue mod {field.p}")
        return obj
    if not isinstance(obj, list) or len(obj) != field.degree:
        raise ValidationError(
            f"coefficient {obj!r} is not a length-{field.degree} vector"
        )
    return tuple(_decode_element(field.parent, c) for c in obj)


def _encode_field(field: Field) -> dict:
    chain = []
    level = Field(field.p)
    for step in field.chain:
        chain.append([_encode_element(level, c) for c in step])
        level = Field(field.p, level.chain + (step,))
    return {"p": field.p, "chain": chain}


def _decode_field(obj) -> Field:
    if not isinstance(obj, dict) or "p" not in obj:
        raise ValidationError("field descriptor must be an object with 'p'")
    try:
        level = Field(obj["p"])
    except (BilmultError, TypeError) as exc:
        raise ValidationError(f"bad characteristic: {exc}") from exc
    for step in obj.get("chain", ()):
        if not isinstance(step, list) or not step:
            raise ValidationError("chain step must be a non-empty coefficient list")
        coeffs = tuple(_decode_element(level, c) for c in step)
        if not level.poly_is_irreducible(coeffs):
            raise ValidationError("chain step polynomial is not irreducible")
        level = Field(level.p, level.chain + (coeffs,))
    return level


def decomposition_to_json(d: BilinearDecomposition, indent: Optional[int] = None) -> str:
    base = d.base
    doc = {"q": _encode_field(base), "n": d.n}
    added = d.top.chain[len(base.chain):]
    if len(added) == 1:
        doc["modulus"] = [_encode_element(base, c) for c in added[0]]
    elif len(added) > 1:
        # non-default tower form produced by compose(..., rebase=False)
        tower = []
        level = base
        for step in added:
            tower.append([_encode_element(level, c) for c in step])
            level = Field(level.p, level.chain + (step,))
        doc["tower"] = tower
    doc["rank"] = d.rank
    doc["triples"] = [
        {
            "a": [_encode_element(base, v) for v in a],
            "b": [_encode_element(base, v) for v in b],
            "c": [_encode_element(base, v) for v in c],
        }
        for a, b, c in d.triples
    ]
    separators = (",", ": ") if indent is not None else (",", ":")
    return json.dumps(doc, separators=separators, indent=indent)


def decomposition_from_json(text: str, skip_verify: bool = False) -> BilinearDecomposition:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("decomposition document must be an object")
    try:
        base = _decode_field(doc["q"])
        n = doc["n"]
        rank = doc["rank"]
        raw_triples = doc["triples"]
    except KeyError as exc:
        raise ValidationError(f"missing field {exc}") from exc
    if not isinstance(n, int) or n < 1 or not isinstance(rank, int) or rank < 1:
        raise ValidationError("'n' and 'rank' must be positive integers")

    top = base
    if "modulus" in doc:
        step = tuple(_decode_element(base, c) for c in doc["modulus"])
        if not base.poly_is_irreducible(step):
            raise ValidationError("modulus is not irreducible over the base field")
        top = Field(base.p, base.chain + (step,))
    elif "tower" in doc:
        level = base
        for raw in doc["tower"]:
            step = tuple(_decode_element(level, c) for c in raw)
            if not level.poly_is_irreducible(step):
                raise ValidationError("tower step is not irreducible")
            level = Field(level.p, level.chain + (step,))
        top = level
    elif n != 1:
        raise ValidationError("decomposition needs 'modulus' or 'tower' when n > 1")

    if top.degree_over(base) != n:
        raise ValidationError("'n' does not match the extension degree")
    if not isinstance(raw_triples, list) or rank != len(raw_triples):
        raise ValidationError("'rank' does not equal the number of triples")

    triples = []
    for t in raw_triples:
        try:
            a = tuple(_decode_element(base, v) for v in t["a"])
            b = tuple(_decode_element(base, v) for v in t["b"])
            c = tuple(_decode_element(base, v) for v in t["c"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed triple: {exc}") from exc
        if len(a) != n or len(b) != n or len(c) != n:
            raise ValidationError(f"triple vectors must have length {n}")
        triples.append((a, b, c))

    d = BilinearDecomposition(base=base, top=top, triples=tuple(triples))
    if not skip_verify and not verify_decomposition(d):
        raise ValidationError("decomposition does not verify")
    return d


# ---------------------------------------------------------------------------
# Brute-force tensor-rank search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankSearchReport:
    q: int
    n: int
    r_max: int
    outcome: str  # "found" | "exhausted" | "aborted"
    rank: Optional[int]
    decomposition: Optional[BilinearDecomposition]
    nodes_explored: int


class _Budget(Exception):
    pass


class _SmallFieldTables:
    """Dense int-indexed arithmetic tables for a base field of size q."""

    def __init__(self, field: Field):
        q = field.q
        elems = [field.from_int(i) for i in range(q)]
        self.q = q
        self.add = [[field.to_int(field.add(x, y)) for y in elems] for x in elems]
        self.sub = [[field.to_int(field.sub(x, y)) for y in elems] for x in elems]
        self.mul = [[field.to_int(field.mul(x, y)) for y in elems] for x in elems]
        self.inv = [0] + [field.to_int(field.inv(x)) for x in elems[1:]]


def _vectors(q: int, n: int, normalized: bool):
    """All nonzero coordinate vectors in ascending canonical index order."""
    out = []
    for idx in range(1, q**n):
        vec = []
        t = idx
        for _ in range(n):
            vec.append(t % q)
            t //= q
        vec = tuple(vec)
        if normalized:
            lead = next(v for v in vec if v)
            if lead != 1:
                continue
        out.append(vec)
    return out


def brute_force_rank(
    base: Field,
    n: int,
    r_max: int,
    budget: int = DEFAULT_NODE_BUDGET,
    normalize: bool = True,
) -> RankSearchReport:
    """Least rank <= r_max of the multiplication tensor of base.extend(n).

    Depth-first search over sums of rank-one tensors, each step restricted to
    candidates covering the first nonzero slot of the residual (some summand
    must, and summands commute).  The final summand is checked by direct
    rank-one factorization instead of enumeration.
    """
    if base.q**n > 64:
        raise ParameterTooLarge("rank search supported for q^n <= 64")
    if r_max > 9:
        raise ParameterTooLarge("rank search supported for r_max <= 9")
    tab = _SmallFieldTables(base)
    q = tab.q
    top = base.extend(n)

    basis = [
        top.from_coords_over(
            tuple(base.one if i == j else base.zero for i in range(n)), base
        )
        for j in range(n)
    ]
    target = []
    for j in range(n):
        for k in range(n):
            coords = top.coords_over(top.mul(basis[j], basis[k]), base)
            target.extend(base.to_int(c) for c in coords)
    target = tuple(target)

    vecs_norm = _vectors(q, n, normalize)
    vecs_c = _vectors(q, n, False)
    cand_tensors = []
    cand_triples = []
    for a in vecs_norm:
        for b in vecs_norm:
            ab = [tab.mul[ai][bi] for ai in a for bi in b]
            for c in vecs_c:
                cand_tensors.append(tuple(tab.mul[s][ci] for s in ab for ci in c))
                cand_triples.append((a, b, c))
    n_slots = n * n * n
    buckets = [
        [i for i, t in enumerate(cand_tensors) if t[slot]] for slot in range(n_slots)
    ]

    nodes = 0

    def rank_one_factor(res):
        """Return (a, b, c) with a (x) b (x) c == res, or None."""
        first = next(i for i, v in enumerate(res) if v)
        j0, rem = divmod(first, n * n)
        k0, l0 = divmod(rem, n)
        a = tuple(res[j * n * n + k0 * n + l0] for j in range(n))
        b = tuple(res[j0 * n * n + k * n + l0] for k in range(n))
        ia = tab.inv[next(v for v in a if v)]
        ib = tab.inv[next(v for v in b if v)]
        a = tuple(tab.mul[ia][v] for v in a)
        b = tuple(tab.mul[ib][v] for v in b)
        pivot = tab.mul[a[j0]][b[k0]]
        ip = tab.inv[pivot]
        c = tuple(tab.mul[ip][res[j0 * n * n + k0 * n + l]] for l in range(n))
        for j in range(n):
            for k in range(n):
                s = tab.mul[a[j]][b[k]]
                for l in range(n):
                    if tab.mul[s][c[l]] != res[j * n * n + k * n + l]:
                        return None
        return (a, b, c)

    def dfs(residual, remaining):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _Budget
        first = next((i for i, v in enumerate(residual) if v), None)
        if first is None:
            # a shorter decomposition would have been found at a lower target
            return None
        if remaining == 0:
            return None
        if remaining == 1:
            t = rank_one_factor(residual)
            return [t] if t is not None else None
        for cid in buckets[first]:
            tens = cand_tensors[cid]
            new_res = tuple(tab.sub[r][t] for r, t in zip(residual, tens))
            rest = dfs(new_res, remaining - 1)
            if rest is not None:
                return [cand_triples[cid]] + rest
        return None

    try:
        for r in range(1, r_max + 1):
            found = dfs(target, r)
            if found is not None:
                triples = tuple(
                    (
                        tuple(base.from_int(v) for v in a),
                        tuple(base.from_int(v) for v in b),
                        tuple(base.from_int(v) for v in c),
                    )
                    for a, b, c in found
                )
                d = BilinearDecomposition(base=base, top=top, triples=triples)
                if not verify_decomposition(d):  # pragma: no cover - internal check
                    raise AssertionError("search produced a non-verifying witness")
                return RankSearchReport(
                    q=base.q,
                    n=n,
                    r_max=r_max,
                    outcome=OUTCOME_FOUND,
                    rank=r,
                    decomposition=d,
                    nodes_explored=nodes,
                )
    except _Budget:
        return RankSearchReport(
            q=base.q,
            n=n,
            r_max=r_max,
            outcome=OUTCOME_ABORTED,
            rank=None,
            decomposition=None,
            nodes_explored=nodes,
        )
    return RankSearchReport(
        q=base.q,
        n=n,
        r_max=r_max,
        outcome=OUTCOME_EXHAUSTED,
        rank=None,
        decomposition=None,
        nodes_explored=nodes,
    )
