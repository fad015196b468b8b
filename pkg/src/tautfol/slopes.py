"""Exact slopes on a torus, closed arcs on the projective circle, and the
GL(2,Z) change-of-basis action.

A slope is a point of the projective circle S(T) = P(H_1(T;R)) of a torus T.
Rational slopes are stored as primitive integer pairs (p, q) with q >= 0,
meaning the class p*h + q*h# in a fixed ordered basis (h, h#) of H_1(T).
The pair (1, 0) is the *vertical* slope (the fibre class h when T bounds a
Seifert piece); every other slope is *horizontal* and carries the affine
coordinate tau = -p/q.

The circle is oriented by increasing tau, with the vertical slope sitting
between tau = +oo and tau = -oo.  All arcs are read in this orientation.
Everything here is exact: no floats, ever.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class SlopeError(ValueError):
    """Raised for invalid slope, arc or matrix constructions."""


class Slope:
    """A rational slope: primitive (p, q), q >= 0, and p > 0 when q = 0."""

    __slots__ = ("p", "q")

    def __init__(self, p, q):
        if p == 0 and q == 0:
            raise SlopeError("slope (0, 0) is not a point of the circle")
        g = gcd(p, q)
        p //= g
        q //= g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("Slope is immutable")

    @property
    def is_vertical(self):
        return self.q == 0

    @property
    def tau(self):
        """tau = -p/q for horizontal slopes, None for the vertical slope."""
        if self.q == 0:
            return None
        return Fraction(-self.p, self.q)

    def __eq__(self, other):
        return isinstance(other, Slope) and self.p == other.p and self.q == other.q

    def __hash__(self):
        return hash((self.p, self.q))

    def __repr__(self):
        return f"Slope({self.p}, {self.q})"

    def __str__(self):
        return f"{self.p}/{self.q}"


VERTICAL = Slope(1, 0)


def slope_from_pair(p, q):
    """Canonical slope of the nonzero class p*h + q*h#."""
    return Slope(p, q)


def slope_from_string(text):
    """Parse a "p/q" string back into a slope."""
    parts = text.strip().split("/")
    if len(parts) != 2:
        raise SlopeError(f"malformed slope string {text!r}")
    return Slope(int(parts[0]), int(parts[1]))


def tau_of_slope(slope):
    """tau-coordinate of a slope; None stands for infinity (vertical)."""
    return slope.tau


def slope_of_tau(tau):
    """Inverse of tau_of_slope: None gives the vertical slope, a Fraction or
    int t the slope (-t.numerator, t.denominator)."""
    if tau is None:
        return VERTICAL
    t = Fraction(tau)
    return Slope(-t.numerator, t.denominator)


def delta(s1, s2):
    """Geometric intersection pairing |p1*q2 - p2*q1| of two slopes."""
    return abs(s1.p * s2.q - s2.p * s1.q)


def _key(slope):
    """Total order on circle points used for cyclic comparisons: rationals
    by tau, the vertical slope strictly last."""
    if slope.is_vertical:
        return (1, Fraction(0))
    return (0, slope.tau)


def _cyclically_between(a, x, b):
    """True when x lies strictly inside the arc from a to b (positive
    orientation), all three points distinct."""
    ka, kx, kb = _key(a), _key(x), _key(b)
    return (ka < kx < kb) or (kb < ka < kx) or (kx < kb < ka)


class SlopeArc:
    """A non-empty-or-empty closed connected subset of the circle.

    Four kinds: the empty set, the full circle, a single point, or the
    closed arc traversed from ``start`` to ``end`` in the direction of
    increasing tau (wrapping through the vertical slope when
    tau(start) > tau(end) or an endpoint is vertical).
    """

    EMPTY = "empty"
    FULL = "full"
    POINT = "point"
    ARC = "arc"

    __slots__ = ("kind", "start", "end")

    def __init__(self, kind, start=None, end=None):
        if kind == SlopeArc.ARC and start == end:
            kind, end = SlopeArc.POINT, None
        if kind == SlopeArc.POINT:
            end = None
        if kind in (SlopeArc.EMPTY, SlopeArc.FULL):
            start = end = None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "end", end)

    def __setattr__(self, name, value):
        raise AttributeError("SlopeArc is immutable")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def empty():
        return SlopeArc(SlopeArc.EMPTY)

    @staticmethod
    def full():
        return SlopeArc(SlopeArc.FULL)

    @staticmethod
    def point(slope):
        return SlopeArc(SlopeArc.POINT, slope)

    @staticmethod
    def arc(start, end):
        return SlopeArc(SlopeArc.ARC, start, end)

    @staticmethod
    def from_tau_interval(lo, hi):
        """Closed arc of horizontal slopes with tau in [lo, hi], lo <= hi."""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise SlopeError("tau interval endpoints out of order")
        return SlopeArc.arc(slope_of_tau(lo), slope_of_tau(hi))

    # -- queries -----------------------------------------------------------

    @property
    def is_empty(self):
        return self.kind == SlopeArc.EMPTY

    @property
    def is_full(self):
        return self.kind == SlopeArc.FULL

    @property
    def is_point(self):
        return self.kind == SlopeArc.POINT

    def endpoints(self):
        if self.kind == SlopeArc.POINT:
            return (self.start, self.start)
        if self.kind == SlopeArc.ARC:
            return (self.start, self.end)
        return ()

    def contains(self, slope):
        if self.kind == SlopeArc.EMPTY:
            return False
        if self.kind == SlopeArc.FULL:
            return True
        if self.kind == SlopeArc.POINT:
            return slope == self.start
        if slope == self.start or slope == self.end:
            return True
        return _cyclically_between(self.start, slope, self.end)

    def contains_vertical(self):
        return self.contains(VERTICAL)

    def tau_pieces(self):
        """The horizontal part as closed linear tau-intervals, plus whether
        the vertical slope belongs to the set.

        Returns (pieces, has_vertical) where each piece is a pair
        (lo, hi) of Fractions with None meaning -oo resp. +oo.
        """
        if self.kind == SlopeArc.EMPTY:
            return [], False
        if self.kind == SlopeArc.FULL:
            return [(None, None)], True
        if self.kind == SlopeArc.POINT:
            if self.start.is_vertical:
                return [], True
            t = self.start.tau
            return [(t, t)], False
        s, e = self.start, self.end
        if s.is_vertical:
            return [(None, e.tau)], True
        if e.is_vertical:
            return [(s.tau, None)], True
        ts, te = s.tau, e.tau
        if ts <= te:
            return [(ts, te)], False
        return [(None, te), (ts, None)], True

    def __eq__(self, other):
        return (isinstance(other, SlopeArc) and self.kind == other.kind
                and self.start == other.start and self.end == other.end)

    def __hash__(self):
        return hash((self.kind, self.start, self.end))

    def __repr__(self):
        if self.kind == SlopeArc.POINT:
            return f"SlopeArc.point({self.start!r})"
        if self.kind == SlopeArc.ARC:
            return f"SlopeArc.arc({self.start!r}, {self.end!r})"
        return f"SlopeArc.{self.kind}()"


def _le(a, b):
    """a <= b on the extended line, None on the left = -oo, on the right = +oo."""
    if a is None or b is None:
        return True
    return a <= b


def _merge_pieces(pieces):
    """Merge overlapping/touching closed linear intervals.  None endpoints
    are -oo (first slot) and +oo (second slot)."""
    def lo_key(piece):
        lo = piece[0]
        return (0, Fraction(0)) if lo is None else (1, lo)

    merged = []
    for lo, hi in sorted(pieces, key=lo_key):
        if merged:
            plo, phi = merged[-1]
            touching = phi is None or lo is None or lo <= phi
            if touching:
                newhi = None if (phi is None or hi is None) else max(phi, hi)
                merged[-1] = (plo, newhi)
                continue
        merged.append((lo, hi))
    return merged


def _assemble(pieces, has_vertical):
    """Rebuild circle components from linear pieces plus the vertical flag."""
    pieces = _merge_pieces(pieces)
    if any(lo is None and hi is None for lo, hi in pieces):
        if has_vertical:
            return [SlopeArc.full()]
        raise SlopeError("unbounded horizontal set without the vertical slope")
    left = [p for p in pieces if p[0] is None]
    right = [p for p in pieces if p[1] is None and p[0] is not None]
    finite = [p for p in pieces if p[0] is not None and p[1] is not None]
    comps = []
    if has_vertical:
        # A right ray, the vertical point and a left ray glue into one arc.
        if left and right:
            comps.append(SlopeArc.arc(slope_of_tau(right[0][0]),
                                      slope_of_tau(left[0][1])))
        elif left:
            comps.append(SlopeArc.arc(VERTICAL, slope_of_tau(left[0][1])))
        elif right:
            comps.append(SlopeArc.arc(slope_of_tau(right[0][0]), VERTICAL))
        else:
            comps.append(SlopeArc.point(VERTICAL))
    elif left or right:
        raise SlopeError("unbounded horizontal set without the vertical slope")
    for lo, hi in finite:
        if lo == hi:
            comps.append(SlopeArc.point(slope_of_tau(lo)))
        else:
            comps.append(SlopeArc.arc(slope_of_tau(lo), slope_of_tau(hi)))
    comps.sort(key=lambda c: _key(c.start) if c.start is not None else (0, Fraction(0)))
    return comps


class SlopeSet:
    """A finite disjoint union of closed arcs, with exact membership."""

    __slots__ = ("components",)

    def __init__(self, components):
        comps = tuple(c for c in components if not c.is_empty)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("SlopeSet is immutable")

    @property
    def is_empty(self):
        return not self.components

    def contains(self, slope):
        return any(c.contains(slope) for c in self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __eq__(self, other):
        return isinstance(other, SlopeSet) and self.components == other.components

    def __repr__(self):
        return f"SlopeSet({list(self.components)!r})"


def arc_intersect(a, b):
    """Exact intersection of two closed arcs: a SlopeSet with 0, 1 or 2
    components, each with rational frontier."""
    pa, va = a.tau_pieces()
    pb, vb = b.tau_pieces()
    out = []
    for lo1, hi1 in pa:
        for lo2, hi2 in pb:
            lo = lo1 if lo2 is None else lo2 if lo1 is None else max(lo1, lo2)
            hi = hi1 if hi2 is None else hi2 if hi1 is None else min(hi1, hi2)
            if _le(lo, hi):
                out.append((lo, hi))
    comps = _assemble(out, va and vb) if (out or (va and vb)) else []
    if len(comps) > 2:
        raise SlopeError("two arcs cannot intersect in more than 2 components")
    return SlopeSet(comps)


class GluingMatrix:
    """An integer 2x2 matrix of determinant +-1 acting on slope pairs by
    (p, q) |-> (a*p + b*q, c*p + d*q)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        if a * d - b * c not in (1, -1):
            raise SlopeError("gluing matrix must have determinant +-1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("GluingMatrix is immutable")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def inverse(self):
        s = self.det  # +-1, its own inverse
        return GluingMatrix(s * self.d, -s * self.b, -s * self.c, s * self.a)

    def compose(self, other):
        """Matrix product self * other (apply other first)."""
        return GluingMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    def __eq__(self, other):
        return (isinstance(other, GluingMatrix) and self.rows() == other.rows())

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"GluingMatrix({self.a}, {self.b}, {self.c}, {self.d})"


IDENTITY = GluingMatrix(1, 0, 0, 1)


def act(g, slope):
    """Projective action of a unimodular matrix on a slope."""
    return Slope(g.a * slope.p + g.b * slope.q, g.c * slope.p + g.d * slope.q)


def act_arc(g, arc):
    """Image of a closed arc.  The traversal direction flips when the induced
    circle map is orientation-reversing (det = -1)."""
    if arc.kind in (SlopeArc.EMPTY, SlopeArc.FULL):
        return arc
    if arc.kind == SlopeArc.POINT:
        return SlopeArc.point(act(g, arc.start))
    s, e = act(g, arc.start), act(g, arc.end)
    if g.det > 0:
        return SlopeArc.arc(s, e)
    return SlopeArc.arc(e, s)


def _slopes_with_q(pieces, has_vertical, q):
    """All slopes with second coordinate q inside the given tau-pieces,
    ordered by |p| then p ascending (so tau > 0, i.e. p < 0, wins ties)."""
    if q == 0:
        return [VERTICAL] if has_vertical else []
    found = []
    for lo, hi in pieces:
        # tau = -p/q in [lo, hi]  <=>  p in [-q*hi, -q*lo]
        if hi is None:
            p_lo = None
        else:
            p_lo = -(hi * q)
        if lo is None:
            p_hi = None
        else:
            p_hi = -(lo * q)
        # Walk integers near zero outward; unbounded rays always contain
        # a coprime candidate within |p| <= q + |bound| + 1.
        if p_lo is None and p_hi is None:
            lo_i, hi_i = -q - 1, q + 1
        elif p_lo is None:
            # p ranges over (-oo, P]; any q+1 consecutive integers contain a
            # residue coprime to q, so a window around 0 clipped at P works.
            top = _floor(p_hi)
            hi_i = min(top, q + 1)
            lo_i = min(-(q + 1), top - q)
        elif p_hi is None:
            bot = _ceil(p_lo)
            lo_i = max(bot, -(q + 1))
            hi_i = max(q + 1, bot + q)
        else:
            lo_i, hi_i = _ceil(p_lo), _floor(p_hi)
        for p in range(lo_i, hi_i + 1):
            if gcd(p, q) == 1:
                found.append(Slope(p, q))
    found.sort(key=lambda s: (abs(s.p), s.p))
    return found


def _floor(x):
    return x.numerator // x.denominator


def _ceil(x):
    return -((-x.numerator) // x.denominator)


def simplest_slope(region, allow_vertical=True):
    """The simplest rational slope in a non-empty SlopeArc or SlopeSet:
    minimal q, then minimal |p|, then positive tau preferred.

    The vertical slope (q = 0) is the simplest of all when present and
    allowed.
    """
    if isinstance(region, SlopeArc):
        arcs = [region]
    else:
        arcs = list(region)
    if not arcs or all(a.is_empty for a in arcs):
        raise SlopeError("cannot pick a slope from the empty set")
    pieces = []
    has_vertical = False
    bound = 1
    for a in arcs:
        ps, v = a.tau_pieces()
        pieces.extend(ps)
        has_vertical = has_vertical or v
        for lo, hi in ps:
            for t in (lo, hi):
                if t is not None:
                    bound = max(bound, t.denominator)
    start = 0 if allow_vertical else 1
    for q in range(start, bound + 1):
        candidates = _slopes_with_q(pieces, has_vertical, q)
        if candidates:
            return candidates[0]
    raise SlopeError("no rational slope found; malformed region")
