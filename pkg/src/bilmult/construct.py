"""Constructive builders of verified multiplication algorithms.

Three constructions live here:

* evaluation-interpolation (Toom / Winograd style) over any base field with
  at least 2n-2 elements, meeting the 2n-1 rank floor exactly;
* the 3-multiplication truncated product of two 2-term polynomials mod x^2
  (single multiplication for 1 term);
* composition of an algorithm for the top step of a tower with an algorithm
  for the bottom step, multiplying the ranks, with an explicit field
  isomorphism to re-base the result onto the canonical flat extension.

Evaluation points are always 0, 1, then the remaining field elements in
ascending canonical order, then the point at infinity (which contributes the
product of the leading coefficients), so constructions are reproducible.
"""

from __future__ import annotations

from .decomp import BilinearDecomposition
from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NoRootFound,
    ParameterTooLarge,
    TooFewPoints,
    UnsupportedTruncation,
)
from .gf import ENUMERATION_CAP, Field


# ---------------------------------------------------------------------------
# Linear algebra over a Field
# ---------------------------------------------------------------------------


def mat_mul(field: Field, A, B):
    rows, inner, cols = len(A), len(B), len(B[0])
    zero = field.zero
    out = [[zero] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(inner):
            a = A[i][k]
            if a == zero:
                continue
            for j in range(cols):
                if B[k][j] != zero:
                    out[i][j] = field.add(out[i][j], field.mul(a, B[k][j]))
    return out


def mat_inv(field: Field, A):
    """Gauss-Jordan inverse; raises DimensionMismatch on singular input."""
    n = len(A)
    zero, one = field.zero, field.one
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != zero), None)
        if pivot is None:
            raise DimensionMismatch("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = field.inv(aug[col][col])
        aug[col] = [field.mul(inv_p, v) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != zero:
                f = aug[r][col]
                aug[r] = [field.sub(v, field.mul(f, w)) for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_vec(field: Field, A, v):
    zero = field.zero
    out = []
    for row in A:
        s = zero
        for a, x in zip(row, v):
            if a != zero and x != zero:
                s = field.add(s, field.mul(a, x))
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# Evaluation-interpolation construction (rank 2n-1)
# ---------------------------------------------------------------------------


def toom_construct(field: Field, n: int) -> BilinearDecomposition:
    """Rank-(2n-1) algorithm for the canonical degree-n extension of field.

    The product polynomial of two degree-(n-1) inputs is pinned down by its
    values at 2n-2 distinct points plus its leading coefficient (the
    evaluation "at infinity"), then reduced modulo the field modulus.  Needs
    at least 2n-2 field elements; the classical floor says no smaller rank is
    possible, so the output is optimal whenever it exists.
    """
    if n < 1:
        raise ParameterTooLarge("extension degree must be >= 1")
    if n == 1:
        one = field.one
        return BilinearDecomposition(
            base=field, top=field, triples=(((one,), (one,), (one,)),)
        )
    q = field.q
    if q < 2 * n - 2:
        raise TooFewPoints(
            f"need {2 * n - 2} distinct evaluation points, field has {q} elements"
        )
    top = field.extend(n)
    zero, one = field.zero, field.one
    m = 2 * n - 1

    points = [field.from_int(i) for i in range(2 * n - 2)]

    # extended Vandermonde: evaluation rows plus the leading-coefficient row
    V = []
    for alpha in points:
        row, p = [], one
        for _ in range(m):
            row.append(p)
            p = field.mul(p, alpha)
        V.append(row)
    V.append([zero] * (m - 1) + [one])
    V_inv = mat_inv(field, V)

    # reduction: coordinates of x^k mod modulus for k = 0 .. 2n-2
    red_cols = []
    gen = top.from_coords_over(
        tuple(one if i == 1 else zero for i in range(n)), field
    )
    cur = top.one
    for _ in range(m):
        red_cols.append(list(cur))
        cur = top.mul(cur, gen)
    red = [[red_cols[k][i] for k in range(m)] for i in range(n)]

    C = mat_mul(field, red, V_inv)  # n x m; column i is c_i

    triples = []
    for i in range(m):
        if i < 2 * n - 2:
            alpha = points[i]
            row, p = [], one
            for _ in range(n):
                row.append(p)
                p = field.mul(p, alpha)
            form = tuple(row)
        else:
            form = tuple(zero for _ in range(n - 1)) + (one,)
        c = tuple(C[r][i] for r in range(n))
        triples.append((form, form, c))
    return BilinearDecomposition(base=field, top=top, triples=tuple(triples))


# ---------------------------------------------------------------------------
# Truncated products (algorithms behind the M-hat complexity values)
# ---------------------------------------------------------------------------


class TruncatedProductAlgorithm:
    """Bilinear algorithm for the product of two u-term polynomials mod x^u."""

    __slots__ = ("field", "u", "triples")

    def __init__(self, field: Field, u: int, triples: tuple):
        self.field = field
        self.u = u
        self.triples = triples

    @property
    def rank(self) -> int:
        return len(self.triples)

    def apply(self, xs, ys):
        field, u = self.field, self.u
        zero = field.zero
        acc = [zero] * u
        for a, b, c in self.triples:
            s1 = zero
            for ai, xi in zip(a, xs):
                s1 = field.add(s1, field.mul(ai, xi))
            s2 = zero
            for bi, yi in zip(b, ys):
                s2 = field.add(s2, field.mul(bi, yi))
            s = field.mul(s1, s2)
            for i in range(u):
                acc[i] = field.add(acc[i], field.mul(s, c[i]))
        return tuple(acc)


def karatsuba_truncated(field: Field, u: int) -> TruncatedProductAlgorithm:
    """1 multiplication for u=1; the classical 3 for u=2 (mod x^2).

    u = 2 computes m1 = a0 b0, m2 = a1 b1, m3 = (a0+a1)(b0+b1) and returns
    (m1, m3 - m1 - m2); larger term counts are not constructed here.
    """
    zero, one = field.zero, field.one
    neg_one = field.neg(one)
    if u == 1:
        return TruncatedProductAlgorithm(field, 1, (((one,), (one,), (one,)),))
    if u == 2:
        m1 = ((one, zero), (one, zero), (one, neg_one))
        m2 = ((zero, one), (zero, one), (zero, neg_one))
        m3 = ((one, one), (one, one), (zero, one))
        return TruncatedProductAlgorithm(field, 2, (m1, m2, m3))
    raise UnsupportedTruncation(f"truncated product not constructed for u = {u}")


def truncated_rank_upper(u: int) -> int:
    """Best known multiplication count for u-term truncated products."""
    if u == 1:
        return 1
    if u == 2:
        return 3
    raise UnsupportedTruncation(f"no embedded value for u = {u}")


# ---------------------------------------------------------------------------
# Field isomorphism and decomposition composition
# ---------------------------------------------------------------------------


def tower_to_flat_isomorphism(chain_field: Field, flat_field: Field):
    """Invertible base-linear matrix M with M . (flat coords) = chain coords.

    The base field is the flat field minus its single top step; the chain
    field must extend the same base with equal total cardinality.  The map
    sends the flat generator to the smallest root (canonical element order)
    of the flat modulus inside the chain field, which makes it a field
    isomorphism and the choice deterministic.
    """
    if not flat_field.chain:
        raise FieldMismatch("flat field must have at least one extension step")
    base = flat_field.parent
    if not chain_field.extends(base):
        raise FieldMismatch("chain field does not extend the flat field's base")
    if chain_field.q != flat_field.q or chain_field.p != flat_field.p:
        raise FieldMismatch("fields must have equal cardinality and characteristic")
    n = flat_field.degree_over(base)
    if chain_field.q > ENUMERATION_CAP:
        raise ParameterTooLarge("root scan limited to fields of size <= 2^20")

    modulus = flat_field.chain[-1]  # low coefficients over base, monic implied
    lifted = [chain_field.lift(c, base) for c in modulus]

    # Horner over (1, c_{n-1}, ..., c_0): acc = x^n + sum c_i x^i
    coeffs_desc = list(reversed(lifted))
    root = None
    for idx in range(chain_field.q):
        x = chain_field.from_int(idx)
        acc = chain_field.one
        for c in coeffs_desc:
            acc = chain_field.add(chain_field.mul(acc, x), c)
        if acc == chain_field.zero:
            root = x
            break
    if root is None:
        raise NoRootFound("flat modulus has no root in the chain field")

    cols = []
    p = chain_field.one
    for _ in range(n):
        cols.append(chain_field.coords_over(p, base))
        p = chain_field.mul(p, root)
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    return M


def compose_decompositions(
    outer: BilinearDecomposition,
    inner: BilinearDecomposition,
    rebase: bool = True,
) -> BilinearDecomposition:
    """Compose an algorithm over the extension with one for the extension.

    outer multiplies in a degree-m extension of inner.top; every outer
    coefficient multiplication is expanded through inner, giving rank
    rank(outer) * rank(inner) over inner.base.  By default the result is
    re-based onto the canonical flat modulus of the full degree; pass
    rebase=False to keep the tower basis.
    """
    mid = inner.top
    if outer.base != mid:
        raise FieldMismatch(
            "inner decomposition's extension field must be the outer's base field"
        )
    base = inner.base
    top = outer.top
    d = inner.n
    m = outer.n

    zero = base.zero
    mid_basis = [
        mid.from_coords_over(
            tuple(base.one if i == j else base.zero for i in range(d)), base
        )
        for j in range(d)
    ]

    triples = []
    for A, B, C in outer.triples:
        # multiplication-by-coefficient matrices, one per outer coordinate
        A_cols = [
            [mid.coords_over(mid.mul(A[k], mid_basis[j]), base) for j in range(d)]
            for k in range(m)
        ]
        B_cols = [
            [mid.coords_over(mid.mul(B[k], mid_basis[j]), base) for j in range(d)]
            for k in range(m)
        ]
        for a, b, c in inner.triples:
            a_flat, b_flat = [], []
            for k in range(m):
                for j in range(d):
                    col_a = A_cols[k][j]
                    col_b = B_cols[k][j]
                    sa = zero
                    sb = zero
                    for t in range(d):
                        if a[t] != zero and col_a[t] != zero:
                            sa = base.add(sa, base.mul(a[t], col_a[t]))
                        if b[t] != zero and col_b[t] != zero:
                            sb = base.add(sb, base.mul(b[t], col_b[t]))
                    a_flat.append(sa)
                    b_flat.append(sb)
            c_mid = mid.from_coords_over(c, base)
            c_flat = []
            for k in range(m):
                c_flat.extend(mid.coords_over(mid.mul(c_mid, C[k]), base))
            triples.append((tuple(a_flat), tuple(b_flat), tuple(c_flat)))

    tower = BilinearDecomposition(base=base, top=top, triples=tuple(triples))
    if not rebase:
        return tower
    return rebase_decomposition(tower)


def rebase_decomposition(d: BilinearDecomposition) -> BilinearDecomposition:
    """Transport a tower-basis decomposition onto the canonical flat field."""
    base = d.base
    n = d.n
    if d.is_flat and d.top == base.extend(n):
        return d
    flat = base.extend(n)
    M = tower_to_flat_isomorphism(d.top, flat)
    M_inv = mat_inv(base, M)

    def transport_form(form):
        # new form = form . M  (row vector times matrix)
        return tuple(
            _dot(base, form, [M[i][j] for i in range(n)]) for j in range(n)
        )

    triples = []
    for a, b, c in d.triples:
        a2 = transport_form(a)
        b2 = transport_form(b)
        c2 = tuple(mat_vec(base, M_inv, list(c)))
        triples.append((a2, b2, c2))
    return BilinearDecomposition(base=base, top=flat, triples=tuple(triples))


def _dot(field: Field, u, v):
    s = field.zero
    for a, b in zip(u, v):
        if a != field.zero and b != field.zero:
            s = field.add(s, field.mul(a, b))
    return s
