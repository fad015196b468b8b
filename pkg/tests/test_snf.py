"""Smith normal form and presented abelian groups."""

import random
from itertools import combinations
from math import gcd

from tautfol.snf import Presentation, smith_normal_form


def _mm(x, y):
    return [[sum(x[i][t] * y[t][j] for t in range(len(y)))
             for j in range(len(y[0]))] for i in range(len(x))]


def _minor_invariants(matrix):
    """Invariant factors from gcds of k x k minors: the independent oracle."""
    rows, cols = len(matrix), len(matrix[0])

    def det(sub):
        if len(sub) == 1:
            return sub[0][0]
        total = 0
        for j in range(len(sub)):
            minor = [row[:j] + row[j + 1:] for row in sub[1:]]
            total += (-1) ** j * sub[0][j] * det(minor)
        return total

    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in combinations(range(rows), k):
            for ci in combinations(range(cols), k):
                g = gcd(g, det([[matrix[i][j] for j in ci] for i in ri]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _check(matrix):
    rows, cols = len(matrix), len(matrix[0])
    d, u, v = smith_normal_form(matrix)
    product = _mm(_mm(u, matrix), v)
    for i in range(rows):
        for j in range(cols):
            expect = d[i] if i == j and i < len(d) else 0
            assert product[i][j] == expect
    nonzero = [abs(x) for x in d if x != 0]
    for i in range(len(nonzero) - 1):
        assert nonzero[i + 1] % nonzero[i] == 0
    return d


def test_known_forms():
    assert [abs(x) for x in _check([[2, 0], [0, 3]]) if x] == [1, 6]
    assert _check([[0]]) == [0]
    d = _check([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert [abs(x) for x in d] == _minor_invariants([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])


def test_random_matrices():
    rng = random.Random(11)
    for _ in range(250):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        matrix = [[rng.randint(-7, 7) for _ in range(cols)] for _ in range(rows)]
        _check(matrix)


def test_against_minor_gcds():
    rng = random.Random(12)
    for _ in range(80):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        matrix = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        d = _check(matrix)
        expected = _minor_invariants(matrix)
        assert [abs(x) for x in d if x != 0] == expected


def test_presentation_cyclic():
    pres = Presentation(["x", "y"])
    pres.add_relation({"x": 2})
    solved = pres.solve()
    assert solved.betti == 1
    assert solved.invariant_factors() == [2]
    assert solved.element_order({"x": 1}) == 2
    assert solved.element_order({"y": 1}) == 0
    assert solved.is_torsion({"x": 1})
    assert not solved.is_torsion({"y": 1})


def test_presentation_no_relations():
    pres = Presentation(["a", "b", "c"])
    solved = pres.solve()
    assert solved.betti == 3
    assert solved.invariant_factors() == []


def test_presentation_torsion_orders():
    pres = Presentation(["x", "y"])
    pres.add_relation({"x": 4})
    pres.add_relation({"y": 6})
    solved = pres.solve()
    assert solved.betti == 0
    assert solved.invariant_factors() == [2, 12]
    assert solved.element_order({"x": 1, "y": 1}) == 12
    assert solved.element_order({"x": 2}) == 2
