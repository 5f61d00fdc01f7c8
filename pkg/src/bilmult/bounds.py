"""The bound engine: every known upper and lower bound rule with provenance.

For a prime power q and extension degree n the engine aggregates:

* exact values: the 2n-1 equality range, the elliptic-interpolation exact
  range (value 2n), and a small table of classical exact values;
* the constructive evaluation-interpolation rule (with witness);
* Chudnovsky-type interpolation on tower steps, plain and with derivative
  evaluations at places of degree 1 (square base fields) or degrees 1 and 2,
  optimized over steps the way the piecewise step-or-derivative comparison
  does it;
* composition across tower extensions (witnesses composed when both factors
  are constructive and the flattened field is small enough to re-base);
* the uniform linearity constants C_q, plus the sharper affine bound for the
  binary field.

Every numeric rule depends only on cardinalities, so values are computed and
memoized on plain integers; field objects enter only when a constructive
witness is actually built.  Rules whose hypotheses are not certified simply
do not fire, which keeps every emitted value a theorem of the published
record.  Slope constants stay exact rationals; per-n values are integerized
by flooring, which is sound for integer-valued complexities.

The memoization caches are plain dicts keyed by immutable tuples; every
writer computes identical values, so concurrent use is benign.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from math import isqrt
from typing import Optional

from .construct import compose_decompositions, toom_construct
from .decomp import BilinearDecomposition
from .errors import NotApplicable, NotPrime, OutOfRange, UnsupportedBase
from .exactmath import epsilon, factor_prime_power, is_perfect_square
from .gf import Field, prime_field
from .towers import (
    GS_T2,
    GS_T3,
    KUMMER_P,
    KUMMER_P2,
    TowerFamily,
    degree_n_place_certified,
    family_threshold_doubled,
    gs_genus,
    gs_step_bounds,
    kash_step,
    kummer_genus,
    kummer_step,
    nonspecial_certified,
    select_step,
)

DEFAULT_COMPOSITION_DEPTH = 4
WITNESS_CARDINALITY_CAP = 2**13
EXTENSION_CARDINALITY_CAP = 2**62

LOWER = "lower"
UPPER = "upper"

# classical exact values beyond the two range rules
EXACT_TABLE = {(2, 4): 9, (4, 4): 8, (5, 4): 8}

CITE_EQUALITY = "De Groote / Winograd equality range for extension multiplication"
CITE_STRICT = "De Groote / Winograd strictness beyond the equality range"
CITE_ELLIPTIC = "Shokrollahi exact range via elliptic interpolation"
CITE_TABLE = "classical exact values (Chudnovsky-Chudnovsky et al.)"
CITE_TOOM = "Toom / Winograd evaluation-interpolation"
CITE_TOWER_GS = "Chudnovsky-type interpolation on an Artin-Schreier tower step"
CITE_TOWER_KUMMER = "Chudnovsky-type interpolation on a Kummer tower step"
CITE_DERIV1 = "derivative evaluations at rational places (corrected Arnaud bounds)"
CITE_DERIV12 = (
    "derivative evaluations at places of degree 1 and 2 (Cenk-Ozbudak generalization)"
)
CITE_COMPOSITION = "multiplicativity of bilinear complexity across tower extensions"
CITE_CQ = "uniform linearity constants C_q"
CITE_CQ_AFFINE = "affine binary-field bound 477n/26 + 45/2"

_METHOD_PRIORITY = (
    "exact",
    "interpolation",
    "tower",
    "derivative-deg1",
    "derivative-deg12",
    "composition",
    "cq-linear",
)


@dataclass(frozen=True)
class Bound:
    q: int
    n: int
    kind: str  # "lower" | "upper"
    value: int
    method: str
    citation: str
    parameters: dict = dataclass_field(default_factory=dict)
    witness: Optional[BilinearDecomposition] = None


@dataclass(frozen=True)
class _Candidate:
    value: Fraction
    method: str
    citation: str
    parameters: dict


def _validate_prime_power(q: int) -> tuple[int, int]:
    try:
        return factor_prime_power(q)
    except ValueError as exc:
        raise NotPrime(f"{q} is not a prime power") from exc


def _field_for_cardinality(q: int) -> Field:
    p, r = _validate_prime_power(q)
    return prime_field(p).extend(r)


def cq_constant(q: int) -> tuple[Fraction, str]:
    """First matching row of the uniform-constant table, in table order.

    The table is an if/else chain, so the final (q >= 16) row is shadowed by
    the preceding q >= 4 row; it is kept for provenance only.
    """
    p, r = factor_prime_power(q)
    if q == 2:
        return Fraction(22), "q=2"
    if q == 3:
        return Fraction(27), "q=3"
    if r == 1 and q >= 5:
        return 3 * (1 + Fraction(4, q - 3)), "prime q>=5"
    if r == 2 and p >= 5:
        return 2 * (1 + Fraction(2, p - 3)), "prime-square q>=25"
    if r % 2 == 0 and q >= 16:
        return (
            2 * (1 + Fraction(p * (q + 1), (q - 3) * (q + 1) + (p - 1) * q)),
            "even-power q>=16",
        )
    if q >= 4:
        return 6 * (1 + Fraction(p, q - 3)), "q>=4"
    return (  # pragma: no cover - unreachable: every prime power hits a row above
        3 * (1 + Fraction(2 * p * (q + 1), (q - 3) * (q + 1) + 2 * (p - 1) * q)),
        "q>=16",
    )


def _deg1_families(q: int) -> list[TowerFamily]:
    """Tower flavors counting rational places over the field of size q."""
    fams = []
    if is_perfect_square(q):
        root = isqrt(q)
        try:
            p, r = factor_prime_power(root)
        except ValueError:
            return fams
        if root > 3:
            fams.append(TowerFamily(GS_T2, p, r))
        if r == 1 and p >= 5:
            fams.append(TowerFamily(KUMMER_P2, p, 1))
    return fams


def _deg12_families(q: int) -> list[TowerFamily]:
    """Tower flavors counting degree-1 and degree-2 places over q elements."""
    fams = []
    p, r = factor_prime_power(q)
    if q >= 4:
        fams.append(TowerFamily(GS_T3, p, r))
    if r == 1 and p >= 5:
        fams.append(TowerFamily(KUMMER_P, p, 1))
    return fams


class BoundEngine:
    """Aggregates bound rules with memoization and deterministic tie-breaks."""

    def __init__(
        self,
        composition_depth: int = DEFAULT_COMPOSITION_DEPTH,
        witness_cap: int = WITNESS_CARDINALITY_CAP,
        extension_cap: int = EXTENSION_CARDINALITY_CAP,
    ):
        self.composition_depth = composition_depth
        self.witness_cap = witness_cap
        self.extension_cap = extension_cap
        self._value_cache: dict = {}
        self._bound_cache: dict = {}

    # -- exact values and lower bounds --------------------------------------

    def exact_value(self, q: int, n: int) -> Optional[Bound]:
        _validate_prime_power(q)
        if n == 1:
            return Bound(q, 1, UPPER, 1, "exact", CITE_EQUALITY, {"rule": "base-field"})
        if 2 * n <= q + 2:
            return Bound(
                q, n, UPPER, 2 * n - 1, "exact", CITE_EQUALITY,
                {"rule": "equality-range"},
            )
        if q + 2 < 2 * n < q + 1 + epsilon(q):
            return Bound(
                q, n, UPPER, 2 * n, "exact", CITE_ELLIPTIC,
                {"rule": "elliptic-range", "epsilon": epsilon(q)},
            )
        if (q, n) in EXACT_TABLE:
            return Bound(
                q, n, UPPER, EXACT_TABLE[(q, n)], "exact", CITE_TABLE, {"rule": "table"}
            )
        return None

    def lower_bound(self, q: int, n: int) -> Bound:
        _validate_prime_power(q)
        if n == 1:
            return Bound(q, 1, LOWER, 1, "rank-floor", CITE_EQUALITY, {})
        if 2 * n <= q + 2:
            value, cite, params = 2 * n - 1, CITE_EQUALITY, {"rule": "floor"}
        else:
            value, cite, params = 2 * n, CITE_STRICT, {"rule": "strict-floor"}
        exact = self.exact_value(q, n)
        if exact is not None and exact.value > value:
            # a known exact value is a lower bound too (only the table rows
            # ever exceed the rank floor)
            return Bound(q, n, LOWER, exact.value, "exact-table", CITE_TABLE, {})
        return Bound(q, n, LOWER, value, "rank-floor", cite, params)

    # -- tower rules ----------------------------------------------------------

    def tower_bound_simple(self, q: int, n: int) -> Optional[Bound]:
        """Best plain interpolation bound over all applicable tower steps."""
        if n < 2:
            return None
        best: Optional[Bound] = None
        for family in _deg1_families(q) + _deg12_families(q):
            try:
                step = select_step(family, n)
            except (OutOfRange, UnsupportedBase):
                continue
            g = step.genus_bound
            options: list[tuple[int, str]] = []
            if not family.counts_degree_two:
                if step.places_lower >= 2 * n + 2 * g - 1:
                    options.append((2 * n + g - 1, "rational-places"))
            else:
                if step.n1 is not None and step.n1 >= 2 * n + 2 * g - 1:
                    options.append((2 * n + g - 1, "rational-places"))
                if nonspecial_certified(step) and step.places_lower >= 2 * n + 2 * g - 1:
                    options.append((3 * n + 3 * g, "deg12-nonspecial"))
                if step.places_lower >= 2 * n + 4 * g - 1:
                    options.append((3 * n + 6 * g, "deg12-plain"))
            for value, case in options:
                if best is None or value < best.value:
                    cite = (
                        CITE_TOWER_KUMMER
                        if family.kind in (KUMMER_P, KUMMER_P2)
                        else CITE_TOWER_GS
                    )
                    best = Bound(
                        q, n, UPPER, value, "tower", cite,
                        {
                            "family": family.kind,
                            "k": step.k,
                            "s": step.s,
                            "genus": g,
                            "places_lower": step.places_lower,
                            "case": case,
                            "step_source": step.source,
                        },
                    )
        return best

    def _scan_steps(self, family: TowerFamily, n: int):
        """Certified steps in canonical order, as a stream interleaved with
        per-level exact genus markers (for the caller's stopping rule).

        Yields ("level", k, exact_level_genus) then ("step", step, n0, guard)
        items, where n0 is the largest degree the step handles without
        derivative evaluations and guard caps how many evaluations it
        supports.
        """
        is_gs = family.kind in (GS_T2, GS_T3)
        p, q = family.p, family.q
        k = 1 if is_gs else 0
        while k <= 64:
            level_genus = gs_genus(q, k) if is_gs else kummer_genus(k)
            yield ("level", k, level_genus)
            if is_gs:
                steps = [gs_step_bounds(family, k, s) for s in range(family.r)]
            else:
                steps = [kummer_step(family, k)]
            for step in steps:
                if not nonspecial_certified(step):
                    continue
                if not degree_n_place_certified(step, n):
                    continue
                g = step.genus_bound
                n0 = (step.places_lower - 2 * g + 1) // 2
                if is_gs:
                    guard = min((p - 1) * p**step.s * q**step.k, step.places_lower)
                else:
                    guard = min(
                        kummer_genus(step.k + 1) - kummer_genus(step.k),
                        step.places_lower,
                    )
                yield ("step", step, n0, guard)
            k += 1

    def derivative_bound_deg1(self, q: int, n: int) -> Optional[Bound]:
        """2n + g - 1 + a over steps carrying enough rational places,
        optimized across the step-or-derivative alternative."""
        if n < 2:
            return None
        best = None
        for family in _deg1_families(q):
            if 2 * n < family_threshold_doubled(family):
                continue
            for item in self._scan_steps(family, n):
                if item[0] == "level":
                    if best is not None and 2 * n + item[2] - 1 > best[0]:
                        break
                    continue
                _, step, n0, guard = item
                a = 0 if n <= n0 else 2 * (n - n0)
                if a > guard:
                    continue
                value = 2 * n + step.genus_bound - 1 + a
                if best is None or value < best[0]:
                    best = (value, family, step, a)
        if best is None:
            return None
        value, family, step, a = best
        return Bound(
            q, n, UPPER, value, "derivative-deg1", CITE_DERIV1,
            {
                "family": family.kind,
                "k": step.k,
                "s": step.s,
                "genus": step.genus_bound,
                "places_lower": step.places_lower,
                "derivative_evaluations": a,
            },
        )

    def derivative_bound_deg12(self, q: int, n: int) -> Optional[Bound]:
        """Best of the two displayed degree-1/2 derivative bounds over steps."""
        if n < 2:
            return None
        best: Optional[tuple] = None

        def consider(value: Fraction, family, step, params):
            nonlocal best
            if best is None or value < best[0]:
                best = (value, family, step, params)

        for family in _deg12_families(q):
            # table-backed rows carry exact place splits
            row = kash_step(family, n)
            if (
                row is not None
                and nonspecial_certified(row)
                and degree_n_place_certified(row, n)
            ):
                n1, n2, g = row.n1, row.n2, row.genus_exact
                deficit = 2 * n + 2 * g - 1 - (n1 + 2 * n2)
                a1 = a2 = 0
                feasible = True
                if deficit > 0:
                    a1 = min(n1, deficit)
                    a2 = (deficit - a1 + 1) // 2
                    feasible = a2 <= n2
                if feasible:
                    value_b = 3 * n + Fraction(3 * g, 2) + Fraction(a1, 2) + 3 * a2
                    value_a = Fraction(2 * n + g + n2 + a1 + 4 * a2)
                    params = {"a1": a1, "a2": a2, "n1": n1, "n2": n2}
                    consider(value_b, family, row, {**params, "display": "triple-count"})
                    consider(
                        value_a, family, row, {**params, "display": "coefficient-count"}
                    )
            if 2 * n < family_threshold_doubled(family):
                continue
            for item in self._scan_steps(family, n):
                if item[0] == "level":
                    if best is not None and 3 * n + Fraction(3 * item[2], 2) > best[0]:
                        break
                    continue
                _, step, n0, guard = item
                a = 0 if n <= n0 else 2 * (n - n0)
                if a > guard:
                    continue
                value = 3 * n + Fraction(3 * (step.genus_bound + a), 2)
                consider(value, family, step, {"a1+2a2": a, "display": "triple-count"})
        if best is None:
            return None
        value, family, step, params = best
        return Bound(
            q, n, UPPER,
            value.numerator // value.denominator,
            "derivative-deg12", CITE_DERIV12,
            {
                "family": family.kind,
                "k": step.k,
                "s": step.s,
                "genus": step.genus_bound,
                "step_source": step.source,
                "exact_bound": value,
                **params,
            },
        )

    # -- uniform constants -------------------------------------------------------

    def cq_bound(self, q: int, n: int) -> Bound:
        if n < 2:
            raise NotApplicable("the uniform constants apply to n >= 2")
        c, row = cq_constant(q)
        value = c * n
        params = {"constant": c, "row": row}
        citation = CITE_CQ
        if q == 2:
            affine = Fraction(477, 26) * n + Fraction(45, 2)
            if affine < value:
                value = affine
                citation = CITE_CQ_AFFINE
                params["affine"] = affine
        return Bound(
            q, n, UPPER, value.numerator // value.denominator, "cq-linear",
            citation, params,
        )

    # -- aggregation (values only, integer arithmetic) ----------------------------

    def upper_bound_candidates(self, q: int, n: int, depth: Optional[int] = None):
        """All rule outputs for (q, n) as value-level candidates, in fixed
        priority order."""
        if depth is None:
            depth = self.composition_depth
        out: list[_Candidate] = []
        exact = self.exact_value(q, n)
        if exact is not None:
            out.append(
                _Candidate(Fraction(exact.value), "exact", exact.citation, exact.parameters)
            )
        if n == 1 or q >= 2 * n - 2:
            out.append(
                _Candidate(
                    Fraction(2 * n - 1), "interpolation", CITE_TOOM,
                    {"points": max(0, 2 * n - 2)},
                )
            )
        if n >= 2:
            for rule in (
                self.tower_bound_simple,
                self.derivative_bound_deg1,
                self.derivative_bound_deg12,
            ):
                b = rule(q, n)
                if b is not None:
                    out.append(_Candidate(Fraction(b.value), b.method, b.citation, b.parameters))
            comp = self._composition_value(q, n, depth)
            if comp is not None:
                out.append(comp)
            cq = self.cq_bound(q, n)
            out.append(_Candidate(Fraction(cq.value), cq.method, cq.citation, cq.parameters))
        return out

    def composition_bound(self, q: int, n: int, depth: Optional[int] = None) -> Optional[Bound]:
        """Best product bound over proper factorizations n = d * m, recursing
        through best_upper_bound on both factors.  None when n has no proper
        divisor (or the recursion depth is spent)."""
        if depth is None:
            depth = self.composition_depth
        cand = self._composition_value(q, n, depth)
        if cand is None:
            return None
        return Bound(
            q, n, UPPER,
            cand.value.numerator // cand.value.denominator,
            cand.method, cand.citation, cand.parameters,
        )

    def _composition_value(self, q: int, n: int, depth: int) -> Optional[_Candidate]:
        if n < 2 or depth <= 0:
            return None
        best = None
        for d in range(2, n):
            if n % d:
                continue
            m = n // d
            ext_card = q**d
            if ext_card > self.extension_cap:
                continue
            inner = self._best_value(q, d, depth - 1)
            outer = self._best_value(ext_card, m, depth - 1)
            value = inner.value * outer.value
            if best is None or value < best[0]:
                best = (value, d, m, inner, outer)
        if best is None:
            return None
        value, d, m, inner, outer = best
        return _Candidate(
            value, "composition", CITE_COMPOSITION,
            {
                "split": (d, m),
                "inner": int(inner.value),
                "outer": int(outer.value),
                "inner_method": inner.method,
                "outer_method": outer.method,
            },
        )

    def _best_value(self, q: int, n: int, depth: int) -> _Candidate:
        key = (q, n, depth)
        hit = self._value_cache.get(key)
        if hit is not None:
            return hit
        candidates = self.upper_bound_candidates(q, n, depth)
        if not candidates:
            raise NotApplicable(f"no upper-bound rule applies to q={q}, n={n}")
        winner = min(candidates, key=self._sort_key)
        self._value_cache[key] = winner
        return winner

    @staticmethod
    def _sort_key(c: _Candidate):
        return (c.value, _METHOD_PRIORITY.index(c.method))

    # -- aggregation (public surface with witnesses) --------------------------------

    def best_upper_bound(self, base, n: int, depth: Optional[int] = None) -> Bound:
        """Minimum over all rules; ties resolved by fixed method priority.

        A witness is attached whenever some rule tying the winning value is
        constructive and the flattened extension is small enough to build.
        """
        if isinstance(base, int):
            base = _field_for_cardinality(base)
        if depth is None:
            depth = self.composition_depth
        key = (base.signature(), n, depth)
        hit = self._bound_cache.get(key)
        if hit is not None:
            return hit
        q = base.q
        winner = self._best_value(q, n, depth)
        value = winner.value.numerator // winner.value.denominator
        witness, via = self._attach_witness(base, n, depth, value)
        params = dict(winner.parameters)
        if via is not None and via != winner.method:
            params["witness_via"] = via
        bound = Bound(q, n, UPPER, value, winner.method, winner.citation, params, witness)
        self._bound_cache[key] = bound
        return bound

    def _attach_witness(self, base: Field, n: int, depth: int, value: int):
        """Constructive witness of rank == value, if any rule provides one."""
        q = base.q
        if (n == 1 or q >= 2 * n - 2) and value == 2 * n - 1:
            return toom_construct(base, n), "interpolation"
        if n >= 2 and depth > 0 and q**n <= self.witness_cap:
            for d in range(2, n):
                if n % d:
                    continue
                m = n // d
                inner = self._best_value(q, d, depth - 1)
                outer = self._best_value(q**d, m, depth - 1)
                if inner.value * outer.value != value:
                    continue
                inner_bound = self.best_upper_bound(base, d, depth - 1)
                outer_bound = self.best_upper_bound(base.extend(d), m, depth - 1)
                if inner_bound.witness is None or outer_bound.witness is None:
                    continue
                return (
                    compose_decompositions(outer_bound.witness, inner_bound.witness),
                    "composition",
                )
        return None, None

    # -- tables ----------------------------------------------------------------

    def bound_table(self, q: int, n_max: int):
        base = _field_for_cardinality(q)
        rows = []
        for n in range(1, n_max + 1):
            lo = self.lower_bound(q, n)
            hi = self.best_upper_bound(base, n)
            rows.append((n, lo, hi))
        return rows

    # -- asymptotics --------------------------------------------------------------

    def asymptotic_report(self, q: int, a_q: Optional[Fraction] = None) -> "AsymptoticReport":
        p, r = factor_prime_power(q)
        if is_perfect_square(q):
            a_value: Optional[Fraction] = Fraction(isqrt(q) - 1)
            a_source = "drinfeld-vladut"
        elif a_q is not None:
            a_value = Fraction(a_q)
            a_source = "user-supplied"
        else:
            a_value = None
            a_source = "unknown"
        rows: list[AsymptoticBound] = []

        def add(quantity, kind, value, method, citation, applicable, conditional=False, note=""):
            rows.append(
                AsymptoticBound(
                    quantity, kind, value, method, citation, applicable, conditional, note
                )
            )

        add(
            "m", LOWER, Fraction(88, 25), "binary-liminf-floor",
            "Brockett-Dobkin binary lower bound", q == 2,
        )
        add(
            "m", LOWER, 2 * (1 + Fraction(1, q - 1)), "liminf-floor",
            "Shparlinski-Tsfasman-Vladut liminf lower bound", q > 2,
        )
        add(
            "m", LOWER, Fraction(3), "hankel-floor",
            "Bshouty-Kaminski Hankel-matrix lower bound", q == 3, False,
            "restricted to q = 3: the broad-range reading conflicts with the "
            "square-field liminf upper bounds",
        )
        if a_value is None:
            add(
                "m", UPPER, None, "ihara-liminf",
                "liminf bound from towers attaining A(q)",
                False, False, "requires an Ihara-constant lower bound A(q) > 2",
            )
        else:
            applicable = a_value > 2
            add(
                "m", UPPER,
                2 * (1 + 1 / (a_value - 2)) if applicable else None,
                "ihara-liminf", "liminf bound from towers attaining A(q)",
                applicable, a_source == "user-supplied",
                "" if applicable else "needs A(q) > 2",
            )
        sq = isqrt(q)
        square_ok = is_perfect_square(q) and sq >= 4
        add(
            "m", UPPER, 2 * (1 + Fraction(1, sq - 3)) if square_ok else None,
            "square-tower-liminf",
            "Drinfeld-Vladut-attaining towers over square fields", square_ok,
        )
        add(
            "m", UPPER, 3 * (1 + Fraction(1, q - 3)) if q > 3 else None,
            "quadratic-descent-liminf", "descent through the quadratic extension",
            q > 3,
        )
        add(
            "M", UPPER, 2 * (1 + Fraction(1, sq - 3)) if square_ok else None,
            "shimura-square-limsup", "Shimura-curve families (square fields)",
            square_ok,
        )
        odd_power_ok = r % 2 == 1 and q >= 5
        add(
            "M", UPPER, 3 * (1 + Fraction(2, q - 3)) if odd_power_ok else None,
            "shimura-odd-limsup", "Shimura-curve families (odd prime powers)",
            odd_power_ok,
        )
        add(
            "M", UPPER, Fraction(27, 2), "binary-shimura-limsup",
            "binary limsup via Shimura curves with higher-degree places", q == 2,
        )
        c, row = cq_constant(q)
        add("M", UPPER, c, "uniform-cq", CITE_CQ + f" (row {row})", True)
        for src in rows[:3]:
            # limsup dominates liminf, so liminf floors transfer
            add(
                "M", LOWER, src.value, src.method + "-via-liminf",
                src.citation + " (limsup dominates liminf)", src.applicable,
            )
        return AsymptoticReport(q=q, a_q=a_value, a_q_source=a_source, bounds=tuple(rows))


@dataclass(frozen=True)
class AsymptoticBound:
    quantity: str  # "m" (liminf) | "M" (limsup)
    kind: str  # "lower" | "upper"
    value: Optional[Fraction]
    method: str
    citation: str
    applicable: bool
    conditional: bool = False
    note: str = ""


@dataclass(frozen=True)
class AsymptoticReport:
    q: int
    a_q: Optional[Fraction]
    a_q_source: str
    bounds: tuple

    def best(self, quantity: str, kind: str) -> Optional[Fraction]:
        """Sharpest unconditional applicable value, None when no rule fires."""
        vals = [
            b.value
            for b in self.bounds
            if b.quantity == quantity
            and b.kind == kind
            and b.applicable
            and not b.conditional
            and b.value is not None
        ]
        if not vals:
            return None
        return min(vals) if kind == UPPER else max(vals)
