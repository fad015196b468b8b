"""Relative slope detection on a Seifert piece.

Given a Seifert piece with boundary tori T_1, ..., T_r, constraint arcs
S_1, ..., S_{r-1} on all but the last torus, and a subset J of constraint
indices on which detection must be strong, this module computes the set of
slopes on T_r detected by a co-oriented taut foliation compatible with the
constraints, together with the (finite) list of detected slopes that are not
strongly detected.

The horizontal case runs through the tau-coordinate bookkeeping: for a
constraint tuple tau_* we count integral and non-integral coordinates, form

    b0 = -(floor(tau_1) + ... + floor(tau_{r-1}))
    m0 = b0 + i0 - (n + r - 1)          m1 = b0 + s0 - 1

and the union over the i0 = 0 stratum of the intervals [m0, m1] is the core
interval [c_min, c_max].  The detected set can stick out of the core by less
than 1 on each side; whether it does is governed by a finite search for
coprime integers 0 < A < N distributing (A/N, 1-A/N, 1/N, ..., 1/N) over the
cone points, the free constraint endpoints and the target torus subject to
sharp fractional-part inequalities.  That search is performed here with a
configurable bound on N; absence below the bound is reported as absence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, lcm

from .slopes import (
    VERTICAL,
    GluingMatrix,
    Slope,
    SlopeArc,
    act_arc,
    slope_of_tau,
)


class PieceError(ValueError):
    """Invalid or unsupported Seifert piece data."""


class FamilyError(ValueError):
    """Constraint family violating the normalization assumptions."""


def _floor(x):
    x = Fraction(x)
    return x.numerator // x.denominator


def _frac(x):
    x = Fraction(x)
    return x - _floor(x)


def _is_int(x):
    return Fraction(x).denominator == 1


# ---------------------------------------------------------------------------
# Pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeifertPiece:
    """One Seifert-fibred piece.

    The base orbifold is a planar orientable surface or a once-punctured-or-
    more non-orientable surface of crosscap number ``crosscaps`` with
    ``boundary_count`` boundary circles and cone points of orders given by
    ``cones`` (pairs (a_i, beta_i), gcd = 1, a_i >= 2, gamma_i = beta_i/a_i).
    ``b`` is the integer obstruction in the section relation
    sum(x_i) + sum(d_j) + b*h = 0.
    """

    base_orientable: bool
    cones: tuple
    b: int = 0
    boundary_count: int = 1
    crosscaps: int = 0
    ident: object = None

    def __post_init__(self):
        object.__setattr__(self, "cones", tuple((int(a), int(beta)) for a, beta in self.cones))
        if self.boundary_count < 1:
            raise PieceError("a piece needs at least one boundary torus")
        if self.base_orientable and self.crosscaps != 0:
            raise PieceError("orientable base cannot carry crosscaps")
        if not self.base_orientable and self.crosscaps < 1:
            raise PieceError("non-orientable base needs crosscap number >= 1")
        for a, beta in self.cones:
            if a < 2:
                raise PieceError(f"cone order {a} < 2")
            if gcd(a, beta) != 1:
                raise PieceError(f"cone pair ({a}, {beta}) not coprime")
            if beta % a == 0:
                raise PieceError(f"cone pair ({a}, {beta}) has integral gamma")

    @property
    def n(self):
        return len(self.cones)

    @property
    def gammas(self):
        """Normalized cone fractions gamma_i = beta_i/a_i mod 1, in (0, 1)."""
        return tuple(Fraction(beta % a, a) for a, beta in self.cones)

    @property
    def b_eff(self):
        """Section obstruction once every beta_i is reduced into (0, a_i)."""
        return self.b + sum(beta // a for a, beta in self.cones)

    @property
    def is_n2(self):
        """The twisted I-bundle over the Klein bottle, presented over the
        Moebius band (crosscap 1, no cones, one boundary)."""
        return (not self.base_orientable and self.crosscaps == 1
                and self.n == 0 and self.boundary_count == 1)

    @property
    def is_solid_torus_piece(self):
        return self.base_orientable and self.boundary_count == 1 and self.n <= 1

    @property
    def is_product_piece(self):
        """S^1 x S^1 x I: orientable annulus base, no cone points."""
        return self.base_orientable and self.boundary_count == 2 and self.n == 0

    @property
    def is_cable_space(self):
        """Annulus base with exactly one cone point."""
        return self.base_orientable and self.boundary_count == 2 and self.n == 1

    @property
    def cone_order_lcm(self):
        out = 1
        for a, _ in self.cones:
            out = lcm(out, a)
        return out


# ---------------------------------------------------------------------------
# Constraint families and tau statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstraintFamily:
    """Arcs S_1, ..., S_{r-1} (0-indexed here) plus the strong index set J."""

    arcs: tuple
    strong: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(self, "strong", frozenset(self.strong))
        for j in self.strong:
            if not 0 <= j < len(self.arcs):
                raise FamilyError(f"strong index {j} out of range")
        for j, arc in enumerate(self.arcs):
            if arc.is_empty:
                raise FamilyError(f"constraint {j} is empty")
            if j in self.strong:
                if arc.contains_vertical():
                    raise FamilyError(
                        f"constraint {j} is strong but contains the vertical slope")
                if arc.is_point:
                    raise FamilyError(
                        f"constraint {j} is strong but is a single slope")

    def __len__(self):
        return len(self.arcs)


def v_count(family):
    """Number of constraint arcs containing the vertical slope."""
    return sum(1 for arc in family.arcs if arc.contains_vertical())


@dataclass(frozen=True)
class TauStats:
    """The integral/non-integral bookkeeping of one constraint tuple."""

    r1: int
    s0: int
    i0: int
    b0: int
    m0: int
    m1: int


def tau_stats(taus, strong, n_cones):
    """Statistics of a finite tau-tuple relative to the strong set.

    ``taus`` are the coordinates on the r-1 constraint tori (all finite);
    ``strong`` the set of indices required strong; ``n_cones`` the number of
    cone points of the piece.
    """
    taus = [Fraction(t) for t in taus]
    r = len(taus) + 1
    r1 = sum(1 for t in taus if not _is_int(t))
    s0 = sum(1 for j, t in enumerate(taus) if _is_int(t) and j not in strong)
    i0 = sum(1 for j, t in enumerate(taus) if _is_int(t) and j in strong)
    b0 = -sum(_floor(t) for t in taus)
    m0 = b0 + i0 - (n_cones + r - 1)
    m1 = b0 + s0 - 1
    return TauStats(r1=r1, s0=s0, i0=i0, b0=b0, m0=m0, m1=m1)


def _finite_intervals(family):
    """[eta_j, zeta_j] tau-intervals of a vertical-free family."""
    out = []
    for j, arc in enumerate(family.arcs):
        pieces, has_vertical = arc.tau_pieces()
        if has_vertical or len(pieces) != 1 or pieces[0][0] is None or pieces[0][1] is None:
            raise FamilyError(f"constraint {j} is not a finite horizontal arc")
        out.append((pieces[0][0], pieces[0][1]))
    return out


def _cmin_value(n_cones, r, zetas, strong):
    i1 = sum(1 for j, z in enumerate(zetas) if j in strong and _is_int(z))
    return i1 - sum(_floor(z) for z in zetas) - (n_cones + r - 1)


def _cmax_value(n_cones, r, etas, strong):
    s1 = sum(1 for j, e in enumerate(etas) if j not in strong and _is_int(e))
    return s1 - 1 - sum(_floor(e) for e in etas)


def core_interval(piece, family):
    """The core integer interval [c_min, c_max] of the horizontal case."""
    if not piece.base_orientable:
        raise PieceError("core interval is defined over orientable bases")
    if v_count(family) != 0:
        raise FamilyError("core interval requires a vertical-free family")
    r = piece.boundary_count
    if len(family) != r - 1:
        raise FamilyError("family size must be boundary count minus one")
    if piece.n + r < 3:
        raise PieceError("core interval needs n + r >= 3")
    intervals = _finite_intervals(family)
    c_min = _cmin_value(piece.n, r, [z for _, z in intervals], family.strong)
    c_max = _cmax_value(piece.n, r, [e for e, _ in intervals], family.strong)
    return c_min, c_max


# ---------------------------------------------------------------------------
# The (A, N) refinement search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JNCertificate:
    """Witness that the detected set extends past the core interval.

    The multiset (A/N, 1-A/N, 1/N, ..., 1/N) is distributed over the cone
    points (values A_i/N), the non-excluded constraint tori (values B_j/N)
    and the target torus (value C/N); all values are stored as numerators
    over ``n_value``.
    """

    n_value: int
    a_value: int
    side: str  # "low" | "high"
    cone_numerators: tuple
    boundary_numerators: tuple  # pairs (constraint index, numerator)
    excluded: tuple  # strong indices with integral extreme endpoint
    target_numerator: int

    def distributed_multiset(self):
        vals = sorted(
            list(self.cone_numerators)
            + [v for _, v in self.boundary_numerators]
            + [self.target_numerator]
        )
        return vals

    def expected_multiset(self):
        count = len(self.cone_numerators) + len(self.boundary_numerators) + 1
        return sorted([self.a_value, self.n_value - self.a_value] + [1] * (count - 2))


def default_n_bound(piece, endpoints):
    """Search bound for the certificate hunt: twice the lcm of the cone
    orders times the largest endpoint denominator in play."""
    dens = [Fraction(e).denominator for e in endpoints if e is not None]
    bound = 2 * piece.cone_order_lcm * max(dens, default=1)
    return max(bound, 2)


def _satisfies(value_num, n_value, threshold, strict):
    lhs = Fraction(value_num, n_value)
    return lhs > threshold if strict else lhs >= threshold


def _scan_certificates(slots, n_max):
    """Maximize C/N over certificates whose non-target values satisfy the
    slot thresholds.  ``slots`` is a list of (tag, threshold, strict).

    Returns (C/N, N, A, assignment dict tag -> numerator, C) or None.
    Deterministic: the first optimum in (N, then per-N best C, then A) order.
    """
    if not slots:
        return None
    order = sorted(range(len(slots)), key=lambda i: (-slots[i][1], not slots[i][2]))
    thresholds = [(slots[i][1], slots[i][2]) for i in order]

    def one_cutoff(threshold, strict):
        # Largest N for which the value 1 satisfies the slot.
        tn, td = threshold.numerator, threshold.denominator
        if tn <= 0:
            return n_max
        return (td - 1) // tn if strict else td // tn

    cut_all = min((one_cutoff(t, s) for t, s in thresholds), default=n_max)
    cut1 = min((one_cutoff(t, s) for t, s in thresholds[1:]), default=n_max)
    cut2 = min((one_cutoff(t, s) for t, s in thresholds[2:]), default=n_max)
    t0, strict0 = thresholds[0]
    t0n, t0d = t0.numerator, t0.denominator
    # Past both cutoffs no placement can park the 1/N copies, so stop there.
    n_stop = n_max if len(thresholds) < 2 else min(n_max, max(cut1, cut2))

    best = None  # (c_over_n, n, a, case_rank, c_num)
    best_assign = None
    for n_value in range(2, n_stop + 1):
        if best is not None and best[0] * n_value >= n_value - 1:
            continue  # nothing at this N can strictly improve C/N
        candidates = []
        if n_value <= cut_all:
            candidates.append((n_value - 1, n_value - 1, 0))
            candidates.append((n_value - 1, 1, 1))
        elif n_value <= cut1:
            # target takes A; N - A goes on the hardest slot:
            # A < N(1 - t0), or <= without strictness.
            spare = n_value * (t0d - t0n)
            a_cap = (spare - 1) // t0d if strict0 else spare // t0d
            a = _largest_coprime_below(n_value, min(a_cap, n_value - 1))
            if a is not None:
                candidates.append((a, a, 0))
            # target takes N - A; A itself sits on the hardest slot.
            need = n_value * t0n
            a_floor = need // t0d + 1 if strict0 else -((-need) // t0d)
            a = _smallest_coprime_at_least(n_value, max(a_floor, 1))
            if a is not None:
                candidates.append((n_value - a, a, 1))
        # target takes a 1/N copy (needs at least two non-target slots).
        if len(thresholds) >= 2 and n_value <= cut2 \
                and (best is None or best[0] * n_value < 1):
            a = _first_a_pair_fits(n_value, thresholds[0], thresholds[1])
            if a is not None:
                candidates.append((1, a, 2))
        if not candidates:
            continue
        c_num, a_val, case = max(candidates, key=lambda t: (t[0], -t[1], -t[2]))
        c_over_n = Fraction(c_num, n_value)
        if best is None or c_over_n > best[0]:
            best = (c_over_n, n_value, a_val, case, c_num)
            best_assign = _build_assignment(slots, order, n_value, a_val, case)
    if best is None:
        return None
    c_over_n, n_value, a_val, case, c_num = best
    return c_over_n, n_value, a_val, best_assign, c_num


def _largest_coprime_below(n_value, cap):
    for a in range(min(cap, n_value - 1), 0, -1):
        if gcd(a, n_value) == 1:
            return a
    return None


def _smallest_coprime_at_least(n_value, floor_a):
    for a in range(max(1, floor_a), n_value):
        if gcd(a, n_value) == 1:
            return a
    return None


def _first_a_pair_fits(n_value, slot0, slot1):
    """Smallest A such that {A, N-A} sorted descending satisfies the two
    hardest slots, by window arithmetic on big = max(A, N-A)."""
    t0, s0 = slot0
    t1, s1 = slot1
    # big > t0*N (or >=):
    need = n_value * t0.numerator
    lo = need // t0.denominator + 1 if s0 else -((-need) // t0.denominator)
    # N - big > t1*N  <=>  big < N(1 - t1) (or <=):
    spare = n_value * (t1.denominator - t1.numerator)
    hi = (spare - 1) // t1.denominator if s1 else spare // t1.denominator
    lo = max(lo, (n_value + 1) // 2)
    hi = min(hi, n_value - 1)
    for big in range(hi, lo - 1, -1):
        if gcd(big, n_value) == 1:
            return n_value - big
    return None


def _build_assignment(slots, order, n_value, a_val, case):
    """Replay the greedy placement for the winning (N, A, case)."""
    values = []
    if case == 0:  # target took A
        values = [n_value - a_val] + [1] * (len(slots) - 1)
    elif case == 1:  # target took N - A
        values = [a_val] + [1] * (len(slots) - 1)
    else:  # target took 1
        big, small = max(a_val, n_value - a_val), min(a_val, n_value - a_val)
        values = [big, small] + [1] * (len(slots) - 2)
    assign = {}
    remaining = sorted(values, reverse=True)
    for idx in order:
        tag, threshold, strict = slots[idx]
        placed = None
        for k, v in enumerate(remaining):
            if _satisfies(v, n_value, threshold, strict):
                placed = remaining.pop(k)
                break
        if placed is None:
            raise RuntimeError("certificate replay failed; scan is inconsistent")
        assign[tag] = placed
    return assign


def _refine(piece, endpoint_data, side, n_max):
    """Shared low/high refinement.

    ``endpoint_data``: list over constraints of (endpoint tau, in_J), the
    extreme endpoint for the chosen side (zeta for low, eta for high).
    Returns (C/N fraction, JNCertificate) or None.
    """
    gammas = piece.gammas
    # Absence rule: an integral extreme endpoint on a free constraint makes
    # the extremal stratum integral, which kills the refinement.
    for endpoint, in_j in endpoint_data:
        if not in_j and _is_int(endpoint):
            return None
    slots = []
    excluded = []
    for i, gamma in enumerate(gammas):
        threshold = (1 - gamma) if side == "low" else gamma
        slots.append((("cone", i), threshold, True))
    for j, (endpoint, in_j) in enumerate(endpoint_data):
        if in_j and _is_int(endpoint):
            excluded.append(j)
            continue
        f = _frac(endpoint)
        threshold = (1 - f) if side == "low" else f
        slots.append((("bdry", j), threshold, in_j))
    found = _scan_certificates(slots, n_max)
    if found is None:
        return None
    c_over_n, n_value, a_val, assign, c_num = found
    cert = JNCertificate(
        n_value=n_value,
        a_value=a_val,
        side=side,
        cone_numerators=tuple(assign[("cone", i)] for i in range(len(gammas))),
        boundary_numerators=tuple(
            (j, assign[("bdry", j)])
            for j in range(len(endpoint_data))
            if ("bdry", j) in assign
        ),
        excluded=tuple(excluded),
        target_numerator=c_num,
    )
    return c_over_n, cert


def jn_refine_low(piece, family, n_max=None):
    """Extremal eta in (c_min - 1, c_min) realizable past the core interval,
    with its certificate, or None when no certificate exists up to n_max."""
    c_min, _ = core_interval(piece, family)
    intervals = _finite_intervals(family)
    data = [(z, j in family.strong) for j, (_, z) in enumerate(intervals)]
    if n_max is None:
        n_max = default_n_bound(piece, [e for pair in intervals for e in pair])
    found = _refine(piece, data, "low", n_max)
    if found is None:
        return None
    c_over_n, cert = found
    return c_min - c_over_n, cert


def jn_refine_high(piece, family, n_max=None):
    """Extremal zeta in (c_max, c_max + 1); mirror of jn_refine_low."""
    _, c_max = core_interval(piece, family)
    intervals = _finite_intervals(family)
    data = [(e, j in family.strong) for j, (e, _) in enumerate(intervals)]
    if n_max is None:
        n_max = default_n_bound(piece, [e for pair in intervals for e in pair])
    found = _refine(piece, data, "high", n_max)
    if found is None:
        return None
    c_over_n, cert = found
    return c_max + c_over_n, cert


# ---------------------------------------------------------------------------
# Detection results
# ---------------------------------------------------------------------------


class Strength(Enum):
    STRONG = "strong"
    NOT_STRONG = "not-strong"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ExceptionalSlope:
    slope: Slope
    status: Strength
    reason: str


def _status_sort_key(exc):
    s = exc.slope
    return (s.q == 0, Fraction(-s.p, s.q) if s.q else Fraction(0), s.p)


@dataclass(frozen=True)
class DetectionResult:
    """Detected arc plus the finite list of detected-but-not-strong slopes.

    Every rational slope of ``detected`` not listed in ``exceptions`` is
    strongly detected.
    """

    detected: SlopeArc
    exceptions: tuple = ()
    branch: str = ""
    low_certificate: JNCertificate = None
    high_certificate: JNCertificate = None

    def strong_status(self, slope):
        if not self.detected.contains(slope):
            raise ValueError(f"slope {slope} is not detected")
        for exc in self.exceptions:
            if exc.slope == slope:
                return exc.status
        return Strength.STRONG

    def exception_for(self, slope):
        for exc in self.exceptions:
            if exc.slope == slope:
                return exc
        return None


def merge_exceptions(entries):
    """Combine exception records for the same slope: a definite not-strong
    verdict wins over an indeterminate one; reasons accumulate."""
    by_slope = {}
    order = []
    for exc in entries:
        key = exc.slope
        if key not in by_slope:
            by_slope[key] = exc
            order.append(key)
            continue
        old = by_slope[key]
        status = old.status
        if Strength.NOT_STRONG in (old.status, exc.status):
            status = Strength.NOT_STRONG
        reason = old.reason if exc.reason in old.reason else f"{old.reason}; {exc.reason}"
        by_slope[key] = ExceptionalSlope(key, status, reason)
    out = [by_slope[k] for k in order]
    out.sort(key=_status_sort_key)
    return tuple(out)


# ---------------------------------------------------------------------------
# detect_relative
# ---------------------------------------------------------------------------


def _check_supported(piece):
    if not piece.base_orientable and piece.crosscaps > 1:
        raise PieceError("bases with crosscap number >= 2 are out of scope")


def product_transport(piece):
    """The slope map S(T_1) -> S(T_2) induced by an S^1 x S^1 x I piece,
    as a gluing matrix on (p, q) pairs: tau goes to b - tau."""
    return GluingMatrix(1, piece.b_eff, 0, -1)


def solid_torus_meridian(piece):
    """Meridional slope of a fibred solid torus piece, in its boundary frame."""
    if not piece.is_solid_torus_piece:
        raise PieceError("piece is not a solid torus")
    gamma = piece.gammas[0] if piece.n == 1 else Fraction(0)
    return slope_of_tau(piece.b_eff - gamma)


def _ray_side_bounds(piece, family, j0, a_tau, b_tau, n_max):
    """Frontier reach of the two nested-ray families when constraint j0
    contains the vertical slope.

    Returns (left, right): ``right`` is the supremum end of (-oo, right]
    coming from the [b_tau, +oo) ray, ``left`` the infimum of [left, +oo)
    coming from the (-oo, a_tau] ray; each is None when its ray is absent.
    All values in the normalized (b = 0) frame.
    """
    r = piece.boundary_count
    intervals = []
    for j, arc in enumerate(family.arcs):
        if j == j0:
            intervals.append(None)
        else:
            pieces, _ = arc.tau_pieces()
            intervals.append((pieces[0][0], pieces[0][1]))
    right = None
    if b_tau is not None:
        etas = [b_tau if j == j0 else intervals[j][0] for j in range(len(family.arcs))]
        c_max = _cmax_value(piece.n, r, etas, family.strong)
        data = [(e, j in family.strong) for j, e in enumerate(etas)]
        bound = n_max if n_max is not None else default_n_bound(piece, etas)
        found = _refine(piece, data, "high", bound)
        right = c_max + found[0] if found else Fraction(c_max)
    left = None
    if a_tau is not None:
        zetas = [a_tau if j == j0 else intervals[j][1] for j in range(len(family.arcs))]
        c_min = _cmin_value(piece.n, r, zetas, family.strong)
        data = [(z, j in family.strong) for j, z in enumerate(zetas)]
        bound = n_max if n_max is not None else default_n_bound(piece, zetas)
        found = _refine(piece, data, "low", bound)
        left = c_min - found[0] if found else Fraction(c_min)
    return left, right


def detect_relative(piece, family, n_max=None):
    """Detected and strongly detected slopes on the last boundary torus."""
    _check_supported(piece)
    r = piece.boundary_count
    if len(family) != r - 1:
        raise FamilyError(
            f"piece has {r} boundary tori but family has {len(family)} arcs")
    shift = piece.b_eff
    v = v_count(family)

    if piece.is_n2:
        return DetectionResult(SlopeArc.point(VERTICAL), branch="n2")

    if not piece.base_orientable:
        if v == 0:
            exc = (ExceptionalSlope(VERTICAL, Strength.NOT_STRONG,
                                    "vertical point over a non-orientable base"),)
            return DetectionResult(SlopeArc.point(VERTICAL), exc,
                                   branch="nonorientable-point")
        exc = (ExceptionalSlope(VERTICAL, Strength.NOT_STRONG,
                                "vertical slope in a full circle"),)
        return DetectionResult(SlopeArc.full(), exc, branch="nonorientable-full")

    if piece.is_solid_torus_piece:
        return DetectionResult(SlopeArc.point(solid_torus_meridian(piece)),
                               branch="solid-torus")

    if piece.is_product_piece:
        image = act_arc(product_transport(piece), family.arcs[0])
        return DetectionResult(image, branch="product")

    # General orientable case: n + r >= 3 from here on.
    if v >= 2:
        exc = (ExceptionalSlope(VERTICAL, Strength.NOT_STRONG,
                                "vertical slope in a full circle"),)
        return DetectionResult(SlopeArc.full(), exc, branch="full")

    if v == 0:
        c_min, c_max = core_interval(piece, family)
        low = jn_refine_low(piece, family, n_max)
        high = jn_refine_high(piece, family, n_max)
        left = low[0] if low else Fraction(c_min)
        right = high[0] if high else Fraction(c_max)
        detected = SlopeArc.from_tau_interval(left + shift, right + shift)
        exc = merge_exceptions([
            ExceptionalSlope(slope_of_tau(left + shift), Strength.NOT_STRONG,
                             "frontier of the detected interval"),
            ExceptionalSlope(slope_of_tau(right + shift), Strength.NOT_STRONG,
                             "frontier of the detected interval"),
        ])
        return DetectionResult(detected, exc, branch="horizontal-interval",
                               low_certificate=low[1] if low else None,
                               high_certificate=high[1] if high else None)

    # v == 1: the detected set is a closed arc through the vertical slope.
    j0 = next(j for j, arc in enumerate(family.arcs) if arc.contains_vertical())
    if j0 in family.strong:
        raise FamilyError("strong constraints may not contain the vertical slope")
    if family.arcs[j0].is_full:
        exc = (ExceptionalSlope(VERTICAL, Strength.NOT_STRONG,
                                "vertical slope in a full circle"),)
        return DetectionResult(SlopeArc.full(), exc, branch="vertical-full")
    pieces0, _ = family.arcs[j0].tau_pieces()
    a_tau = None
    b_tau = None
    for lo, hi in pieces0:
        if lo is None:
            a_tau = hi
        if hi is None:
            b_tau = lo
    left, right = _ray_side_bounds(piece, family, j0, a_tau, b_tau, n_max)
    if left is None and right is None:
        exc = (ExceptionalSlope(VERTICAL, Strength.NOT_STRONG,
                                "vertical point detected through a vertical constraint"),)
        return DetectionResult(SlopeArc.point(VERTICAL), exc, branch="vertical-arc")
    if left is not None and right is not None and left <= right:
        exc = (ExceptionalSlope(VERTICAL, Strength.NOT_STRONG,
                                "vertical slope in a full circle"),)
        return DetectionResult(SlopeArc.full(), exc, branch="vertical-full")
    entries = [ExceptionalSlope(VERTICAL, Strength.NOT_STRONG,
                                "vertical slope inside the detected arc")]
    if left is not None and right is not None:
        detected = SlopeArc.arc(slope_of_tau(left + shift), slope_of_tau(right + shift))
    elif right is not None:
        detected = SlopeArc.arc(VERTICAL, slope_of_tau(right + shift))
    else:
        detected = SlopeArc.arc(slope_of_tau(left + shift), VERTICAL)
    for end in detected.endpoints():
        if not end.is_vertical:
            entries.append(ExceptionalSlope(
                end, Strength.INDETERMINATE,
                "endpoint of an arc through the vertical slope"))
    return DetectionResult(detected, merge_exceptions(entries), branch="vertical-arc")
