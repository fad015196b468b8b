"""Plumbing graphs: trees of Seifert pieces glued along boundary tori.

The JSON manifold format is the external contract:

    {
      "role": "closed" | "solid-torus",
      "pieces": [
        {
          "id": <string or integer>,
          "base": {"orientable": <bool>, "crosscaps": <int>},
          "cones": [[a, beta], ...],
          "b": <int>,
          "boundary": <int>
        }, ...
      ],
      "edges": [
        {"from": [id, idx], "to": [id, idx], "matrix": [[a, b], [c, d]]}, ...
      ]
    }

Boundary indices are 0-based.  Unknown keys are rejected.  An edge matrix
sends slope pairs (p, q) on the from-side torus frame to the to-side frame.

Every boundary torus carries the frame (h, h#) with h the fibre class of its
piece and h# = -d_j for the section class d_j used in the homology relations
a_i*x_i + beta_i*h = 0 and sum(x_i) + sum(d_j) + b*h = 0; this is the sign
pinned by the requirement that rational longitudes land inside detected sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .snf import Presentation
from .seifert import PieceError, SeifertPiece
from .slopes import GluingMatrix, Slope

SCHEMA_VERSION = 1


class ManifoldFormatError(ValueError):
    """Malformed manifold JSON."""


class RoleError(ValueError):
    """Operation applied to a graph with the wrong role."""


@dataclass(frozen=True)
class Edge:
    from_piece: object
    from_bdry: int
    to_piece: object
    to_bdry: int
    matrix: GluingMatrix
    ident: str = ""

    def other_side(self, piece_id, bdry):
        if (self.from_piece, self.from_bdry) == (piece_id, bdry):
            return self.to_piece, self.to_bdry
        return self.from_piece, self.from_bdry

    def touches(self, piece_id, bdry):
        return (self.from_piece, self.from_bdry) == (piece_id, bdry) or \
            (self.to_piece, self.to_bdry) == (piece_id, bdry)


class PlumbingGraph:
    """A tree of Seifert pieces with GL(2,Z) edge gluings."""

    def __init__(self, pieces, edges, role):
        self.pieces = {p.ident: p for p in pieces}
        if len(self.pieces) != len(pieces):
            raise ManifoldFormatError("duplicate piece ids")
        self.edges = tuple(edges)
        self.role = role
        self._by_boundary = {}
        for e in self.edges:
            for key in ((e.from_piece, e.from_bdry), (e.to_piece, e.to_bdry)):
                if key in self._by_boundary:
                    raise ManifoldFormatError(f"boundary {key} used by two edges")
                self._by_boundary[key] = e

    def piece(self, ident):
        return self.pieces[ident]

    def edge_at(self, piece_id, bdry):
        return self._by_boundary.get((piece_id, bdry))

    def edge_by_ident(self, ident):
        for e in self.edges:
            if e.ident == ident:
                return e
        raise KeyError(f"no edge {ident!r}")

    def dangling(self):
        """Boundary tori not used by any edge, as (piece id, index) pairs."""
        out = []
        for p in self.pieces.values():
            for j in range(p.boundary_count):
                if (p.ident, j) not in self._by_boundary:
                    out.append((p.ident, j))
        return out

    def root(self):
        """The unique dangling torus of a solid-torus-role graph."""
        if self.role != "solid-torus":
            raise RoleError("only solid-torus graphs have a root torus")
        d = self.dangling()
        if len(d) != 1:
            raise RoleError(f"expected one dangling torus, found {len(d)}")
        return d[0]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(graph):
    """Diagnostics (strings prefixed 'error:' or 'warning:'); empty is clean."""
    out = []
    if graph.role not in ("closed", "solid-torus"):
        out.append(f"error: unknown role {graph.role!r}")
    for p in graph.pieces.values():
        if not p.base_orientable and p.crosscaps > 1:
            out.append(f"error: piece {p.ident}: crosscap number >= 2 is unsupported")
        if p.is_solid_torus_piece:
            out.append(f"warning: piece {p.ident} is a fibred solid torus, not a JSJ piece")
        if p.is_product_piece:
            out.append(f"warning: piece {p.ident} is a product torus x interval, not a JSJ piece")
        for a, beta in p.cones:
            if not 0 < beta < a:
                out.append(
                    f"warning: piece {p.ident}: cone ({a}, {beta}) not normalized into (0, a)")
    for e in graph.edges:
        for pid, idx in ((e.from_piece, e.from_bdry), (e.to_piece, e.to_bdry)):
            if pid not in graph.pieces:
                out.append(f"error: edge {e.ident} references unknown piece {pid!r}")
            elif not 0 <= idx < graph.pieces[pid].boundary_count:
                out.append(f"error: edge {e.ident} boundary index {idx} out of range")
        if e.matrix.det != -1:
            out.append(f"error: edge {e.ident}: orientation-incompatible gluing (det != -1)")
    # Tree check: connected and |edges| = |pieces| - 1.
    ids = list(graph.pieces)
    parent = {i: i for i in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cycle = False
    for e in graph.edges:
        if e.from_piece in parent and e.to_piece in parent:
            ra, rb = find(e.from_piece), find(e.to_piece)
            if ra == rb:
                cycle = True
            parent[ra] = rb
    components = {find(i) for i in ids}
    if cycle or len(components) > 1 or len(graph.edges) != len(ids) - 1:
        out.append("error: underlying graph is not a tree")
    dangling = len(graph.dangling())
    if graph.role == "closed" and dangling != 0:
        out.append(f"error: closed role but {dangling} dangling boundary tori")
    if graph.role == "solid-torus" and dangling != 1:
        out.append(f"error: solid-torus role but {dangling} dangling boundary tori")
    return out


def errors_of(diagnostics):
    return [d for d in diagnostics if d.startswith("error:")]


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologySummary:
    betti: int
    invariant_factors: tuple
    boundary_images: dict  # (piece id, bdry) -> {"fibre": vec, "section": vec}


def _hom_matrix(matrix):
    """Edge matrix rewritten to act on homology coordinates (P, Q) = (p, -q)."""
    return GluingMatrix(matrix.a, -matrix.b, -matrix.c, matrix.d)


def presentation(graph):
    """Integer presentation of H_1 of the underlying manifold."""
    gens = []
    for p in graph.pieces.values():
        gens.append(("h", p.ident))
        gens.extend(("x", p.ident, i) for i in range(p.n))
        gens.extend(("d", p.ident, j) for j in range(p.boundary_count))
        gens.extend(("z", p.ident, k) for k in range(p.crosscaps))
    pres = Presentation(gens)
    for p in graph.pieces.values():
        for i, (a, beta) in enumerate(p.cones):
            pres.add_relation({("x", p.ident, i): a, ("h", p.ident): beta})
        rel = {("h", p.ident): p.b}
        for i in range(p.n):
            rel[("x", p.ident, i)] = 1
        for j in range(p.boundary_count):
            rel[("d", p.ident, j)] = 1
        for k in range(p.crosscaps):
            rel[("z", p.ident, k)] = 2
        pres.add_relation(rel)
        if not p.base_orientable:
            pres.add_relation({("h", p.ident): 2})
    for e in graph.edges:
        m = _hom_matrix(e.matrix)
        hf = ("h", e.from_piece)
        df = ("d", e.from_piece, e.from_bdry)
        ht = ("h", e.to_piece)
        dt = ("d", e.to_piece, e.to_bdry)
        pres.add_relation({hf: 1, ht: -m.a, dt: -m.c})
        pres.add_relation({df: 1, ht: -m.b, dt: -m.d})
    return pres


def homology(graph):
    solved = presentation(graph).solve()
    images = {}
    for pid, j in graph.dangling():
        images[(pid, j)] = {
            "fibre": solved.free_image({("h", pid): 1}),
            "section": solved.free_image({("d", pid, j): 1}),
        }
    return HomologySummary(
        betti=solved.betti,
        invariant_factors=tuple(solved.invariant_factors()),
        boundary_images=images,
    )


@dataclass(frozen=True)
class LongitudeResult:
    slope: Slope
    order: int


def rational_longitude(graph):
    """The primitive boundary class that is torsion in H_1, and its order."""
    pid, j = graph.root()
    solved = presentation(graph).solve()
    if solved.betti != 1:
        raise RoleError(
            f"rational longitude needs betti = 1, got {solved.betti}")
    fh = solved.free_image({("h", pid): 1})[0]
    fd = solved.free_image({("d", pid, j): 1})[0]
    if fh == 0 and fd == 0:
        raise RoleError("boundary torus maps to torsion; not a rational homology solid torus")
    # The class p*h - q*d is torsion iff p*fh - q*fd = 0.
    slope = Slope(fd, fh)
    order = solved.element_order({("h", pid): slope.p, ("d", pid, j): -slope.q})
    return LongitudeResult(slope=slope, order=order)


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


def normalize(graph):
    """Reduce every cone pair into (0, a) and absorb each piece's section
    obstruction into an edge-adjacent boundary frame where one exists.

    Homology, longitudes and all detection outputs are invariant; the
    dangling frame is never re-framed, so a piece whose only boundary is the
    dangling torus keeps its b.
    """
    new_pieces = []
    shifts = {}  # (piece id, bdry) -> integer frame shift
    for p in graph.pieces.values():
        cones = tuple((a, beta % a) for a, beta in p.cones)
        b_eff = p.b + sum(beta // a for a, beta in p.cones)
        target = None
        for j in range(p.boundary_count):
            if graph.edge_at(p.ident, j) is not None:
                target = j
                break
        if target is not None and b_eff != 0:
            shifts[(p.ident, target)] = b_eff
            b_eff = 0
        new_pieces.append(SeifertPiece(
            base_orientable=p.base_orientable, cones=cones, b=b_eff,
            boundary_count=p.boundary_count, crosscaps=p.crosscaps,
            ident=p.ident))
    new_edges = []
    for e in graph.edges:
        m = e.matrix
        bf = shifts.get((e.from_piece, e.from_bdry), 0)
        bt = shifts.get((e.to_piece, e.to_bdry), 0)
        if bf:
            m = m.compose(GluingMatrix(1, -bf, 0, 1))
        if bt:
            m = GluingMatrix(1, bt, 0, 1).compose(m)
        new_edges.append(Edge(e.from_piece, e.from_bdry, e.to_piece, e.to_bdry,
                              m, e.ident))
    return PlumbingGraph(new_pieces, new_edges, graph.role)


# ---------------------------------------------------------------------------
# Subtrees and splitting
# ---------------------------------------------------------------------------


def subtree(graph, root_piece, root_bdry):
    """The solid-torus-role graph on one side of a torus: all pieces reachable
    from ``root_piece`` without crossing the torus (root_piece, root_bdry)."""
    keep = {root_piece}
    frontier = [root_piece]
    edges = []
    while frontier:
        pid = frontier.pop()
        p = graph.pieces[pid]
        for j in range(p.boundary_count):
            if (pid, j) == (root_piece, root_bdry):
                continue
            e = graph.edge_at(pid, j)
            if e is None:
                continue
            oid, _ = e.other_side(pid, j)
            if oid not in keep:
                keep.add(oid)
                frontier.append(oid)
                edges.append(e)
    pieces = [graph.pieces[i] for i in graph.pieces if i in keep]
    return PlumbingGraph(pieces, edges, "solid-torus")


def split_at_edge(graph, edge):
    """Split a closed graph along a JSJ torus into two rooted solid tori.

    Returns (U, V): U rooted at the from-side frame, V at the to-side frame.
    """
    u = subtree(graph, edge.from_piece, edge.from_bdry)
    v = subtree(graph, edge.to_piece, edge.to_bdry)
    return u, v


# ---------------------------------------------------------------------------
# JSON manifold format
# ---------------------------------------------------------------------------


def _expect_keys(obj, keys, where):
    if not isinstance(obj, dict):
        raise ManifoldFormatError(f"{where}: expected an object")
    unknown = set(obj) - set(keys)
    if unknown:
        raise ManifoldFormatError(f"{where}: unknown keys {sorted(unknown)}")
    missing = set(keys) - set(obj)
    if missing:
        raise ManifoldFormatError(f"{where}: missing keys {sorted(missing)}")


def _int(value, where):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ManifoldFormatError(f"{where}: expected an integer")
    return value


def parse_manifold(data):
    """Build a PlumbingGraph from a decoded JSON object (strict)."""
    _expect_keys(data, ("role", "pieces", "edges"), "manifold")
    role = data["role"]
    if role not in ("closed", "solid-torus"):
        raise ManifoldFormatError(f"role must be 'closed' or 'solid-torus', got {role!r}")
    if not isinstance(data["pieces"], list) or not data["pieces"]:
        raise ManifoldFormatError("pieces must be a non-empty list")
    if not isinstance(data["edges"], list):
        raise ManifoldFormatError("edges must be a list")
    pieces = []
    for k, raw in enumerate(data["pieces"]):
        where = f"pieces[{k}]"
        _expect_keys(raw, ("id", "base", "cones", "b", "boundary"), where)
        if not isinstance(raw["id"], (str, int)) or isinstance(raw["id"], bool):
            raise ManifoldFormatError(f"{where}: id must be a string or integer")
        _expect_keys(raw["base"], ("orientable", "crosscaps"), f"{where}.base")
        if not isinstance(raw["base"]["orientable"], bool):
            raise ManifoldFormatError(f"{where}.base.orientable must be a boolean")
        crosscaps = _int(raw["base"]["crosscaps"], f"{where}.base.crosscaps")
        if not isinstance(raw["cones"], list):
            raise ManifoldFormatError(f"{where}.cones must be a list")
        cones = []
        for t, pair in enumerate(raw["cones"]):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ManifoldFormatError(f"{where}.cones[{t}] must be [a, beta]")
            cones.append((_int(pair[0], f"{where}.cones[{t}][0]"),
                          _int(pair[1], f"{where}.cones[{t}][1]")))
        try:
            pieces.append(SeifertPiece(
                base_orientable=raw["base"]["orientable"],
                cones=tuple(cones),
                b=_int(raw["b"], f"{where}.b"),
                boundary_count=_int(raw["boundary"], f"{where}.boundary"),
                crosscaps=crosscaps,
                ident=raw["id"]))
        except PieceError as exc:
            raise ManifoldFormatError(f"{where}: {exc}") from exc
    edges = []
    for k, raw in enumerate(data["edges"]):
        where = f"edges[{k}]"
        _expect_keys(raw, ("from", "to", "matrix"), where)
        ends = []
        for side in ("from", "to"):
            pair = raw[side]
            if not isinstance(pair, list) or len(pair) != 2:
                raise ManifoldFormatError(f"{where}.{side} must be [piece id, boundary index]")
            ends.append((pair[0], _int(pair[1], f"{where}.{side}[1]")))
        m = raw["matrix"]
        if (not isinstance(m, list) or len(m) != 2
                or any(not isinstance(row, list) or len(row) != 2 for row in m)):
            raise ManifoldFormatError(f"{where}.matrix must be a 2x2 integer matrix")
        entries = [_int(m[i][j], f"{where}.matrix[{i}][{j}]") for i in range(2) for j in range(2)]
        try:
            matrix = GluingMatrix(*entries)
        except ValueError as exc:
            raise ManifoldFormatError(f"{where}: {exc}") from exc
        edges.append(Edge(ends[0][0], ends[0][1], ends[1][0], ends[1][1],
                          matrix, f"e{k}"))
    try:
        return PlumbingGraph(pieces, edges, role)
    except ValueError as exc:
        raise ManifoldFormatError(str(exc)) from exc


def load_manifold(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifoldFormatError(f"cannot read manifold file: {exc}") from exc
    return parse_manifold(data)


def dump_manifold(graph):
    """The strict-format JSON object describing a graph."""
    return {
        "role": graph.role,
        "pieces": [
            {
                "id": p.ident,
                "base": {"orientable": p.base_orientable, "crosscaps": p.crosscaps},
                "cones": [[a, beta] for a, beta in p.cones],
                "b": p.b,
                "boundary": p.boundary_count,
            }
            for p in graph.pieces.values()
        ],
        "edges": [
            {
                "from": [e.from_piece, e.from_bdry],
                "to": [e.to_piece, e.to_bdry],
                "matrix": e.matrix.rows(),
            }
            for e in graph.edges
        ],
    }
