"""Smith normal form and finitely presented abelian groups over Z.

A group is presented as Z^g modulo the column space of an integer relation
matrix.  The Smith normal form U * R * V = D with unimodular U, V turns the
presentation into a direct sum of cyclic groups; the row transform U also
converts any element of Z^g into coordinates adapted to that decomposition,
which is what the longitude computation needs.
"""

from __future__ import annotations

from math import gcd


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix):
    """Return (d, U, V) with U * matrix * V = D diagonal, d the diagonal,
    U and V unimodular, and each diagonal entry dividing the next.

    ``matrix`` is a list of rows; it is not modified.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    a = [list(r) for r in matrix]
    u = _identity(rows)
    v = _identity(cols)

    def row_op(i, j, k):  # row_i += k * row_j
        for t in range(cols):
            a[i][t] += k * a[j][t]
        for t in range(rows):
            u[i][t] += k * u[j][t]

    def col_op(i, j, k):  # col_i += k * col_j
        for t in range(rows):
            a[t][i] += k * a[t][j]
        for t in range(cols):
            v[t][i] += k * v[t][j]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for t in range(rows):
            a[t][i], a[t][j] = a[t][j], a[t][i]
        for t in range(cols):
            v[t][i], v[t][j] = v[t][j], v[t][i]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def nearest_quotient(x, pivot):
        # Balanced division: remainder in [-pivot/2, pivot/2].
        return (2 * x + pivot) // (2 * pivot)

    r = 0
    while r < rows and r < cols:
        # Locate the nonzero entry of smallest magnitude in the working block.
        pivot = None
        for i in range(r, rows):
            for j in range(r, cols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        row_swap(r, i)
        col_swap(r, j)
        if a[r][r] < 0:
            row_negate(r)
        # Shrink the pivot until it divides its whole row and column.  Each
        # balanced reduction at least halves the pivot, so this is fast and
        # keeps the entries from blowing up.
        while True:
            shrunk = False
            for i in range(r + 1, rows):
                if a[i][r] % a[r][r] != 0:
                    row_op(i, r, -nearest_quotient(a[i][r], a[r][r]))
                    row_swap(r, i)
                    if a[r][r] < 0:
                        row_negate(r)
                    shrunk = True
                    break
            if shrunk:
                continue
            for j in range(r + 1, cols):
                if a[r][j] % a[r][r] != 0:
                    col_op(j, r, -nearest_quotient(a[r][j], a[r][r]))
                    col_swap(r, j)
                    if a[r][r] < 0:
                        row_negate(r)
                    shrunk = True
                    break
            if not shrunk:
                break
        # Exact elimination of the pivot row and column.
        for i in range(r + 1, rows):
            if a[i][r] != 0:
                row_op(i, r, -(a[i][r] // a[r][r]))
        for j in range(r + 1, cols):
            if a[r][j] != 0:
                col_op(j, r, -(a[r][j] // a[r][r]))
        # Enforce divisibility over the remaining block: fold one offending
        # row into the pivot row and redo this r.  One at a time, or two bad
        # entries could cancel modulo the pivot and cycle forever.
        added = False
        for i in range(r + 1, rows):
            if any(a[i][j] % a[r][r] != 0 for j in range(r + 1, cols)):
                row_op(r, i, 1)
                added = True
                break
        if added:
            continue  # the shrink loop will strictly reduce the pivot
        r += 1

    d = [a[i][i] for i in range(min(rows, cols))]
    return d, u, v


class Presentation:
    """Z^g modulo integer relation columns, with named generators."""

    def __init__(self, generators):
        self.generators = list(generators)
        self.index = {g: i for i, g in enumerate(self.generators)}
        self.relations = []

    def add_relation(self, coeffs):
        """coeffs: mapping generator -> integer coefficient."""
        vec = [0] * len(self.generators)
        for g, c in coeffs.items():
            vec[self.index[g]] += c
        self.relations.append(vec)

    def solve(self):
        return SolvedPresentation(self)


class SolvedPresentation:
    """Smith-reduced presentation with element queries."""

    def __init__(self, pres):
        g = len(pres.generators)
        m = len(pres.relations)
        self.generators = pres.generators
        self.index = pres.index
        if g == 0:
            self.u = []
            self.orders = []
            self.free_positions = []
            self.torsion = []
            return
        if m == 0:
            matrix = [[0] for _ in range(g)]
        else:
            matrix = [[pres.relations[k][i] for k in range(m)] for i in range(g)]
        d, u, _v = smith_normal_form(matrix)
        self.u = u
        # Orders per adapted coordinate: d_i for i < len(d), else 0 (free).
        self.orders = [abs(x) for x in d] + [0] * (g - len(d))
        self.free_positions = [i for i, o in enumerate(self.orders) if o == 0]
        self.torsion = sorted(o for o in self.orders if o > 1)

    @property
    def betti(self):
        return len(self.free_positions)

    def invariant_factors(self):
        """Torsion invariant factors, each dividing the next."""
        return list(self.torsion)

    def coordinates(self, coeffs):
        """Adapted coordinates (w_i mod order_i) of an element of Z^g."""
        vec = [0] * len(self.generators)
        for g, c in coeffs.items():
            vec[self.index[g]] += c
        return [sum(self.u[i][t] * vec[t] for t in range(len(vec)))
                for i in range(len(vec))]

    def free_image(self, coeffs):
        """Image in the free quotient Z^betti."""
        w = self.coordinates(coeffs)
        return tuple(w[i] for i in self.free_positions)

    def is_torsion(self, coeffs):
        return all(x == 0 for x in self.free_image(coeffs))

    def element_order(self, coeffs):
        """Order of the class, or 0 if infinite."""
        if not self.is_torsion(coeffs):
            return 0
        w = self.coordinates(coeffs)
        order = 1
        for i, o in enumerate(self.orders):
            if o == 0:
                continue
            residue = w[i] % o
            if residue:
                k = o // gcd(o, residue)
                order = order * k // gcd(order, k)
        return order
