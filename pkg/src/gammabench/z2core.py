"""GF(2) linear algebra and the multigraph / chain-complex layer.

Chains are packed into Python ints (bit i = coefficient of basis element i),
so XOR is addition and ``popcount(a & b) mod 2`` is the bilinear pairing.
All elimination routines pivot on the lowest available index, which makes
every basis produced here reproducible across runs.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple


class LatticeError(ValueError):
    """Malformed lattice description."""


class DisconnectedError(LatticeError):
    """Graph is not connected."""


class OddDegreeError(LatticeError):
    """No Eulerian circuit: some vertex has odd degree."""

    def __init__(self, vertex: int):
        super().__init__(f"vertex {vertex} has odd degree")
        self.vertex = vertex


class NotACircuitError(LatticeError):
    """Edge sequence does not close up into a circuit."""


# ---------------------------------------------------------------------------
# bit vectors and matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BitVec:
    """Vector over GF(2) of fixed length ``n``, packed into an int."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits out of range for length {self.n}")

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "BitVec":
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for length {n}")
            bits ^= 1 << i
        return cls(n, bits)

    def __add__(self, other: "BitVec") -> "BitVec":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return BitVec(self.n, self.bits ^ other.bits)

    __xor__ = __add__

    def dot(self, other: "BitVec") -> int:
        """Bilinear pairing: popcount of AND, mod 2."""
        if self.n != other.n:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def get(self, i: int) -> int:
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def indices(self) -> list[int]:
        return [i for i in range(self.n) if (self.bits >> i) & 1]

    def is_zero(self) -> bool:
        return self.bits == 0

    def __repr__(self) -> str:
        return f"BitVec({self.n}, {{{','.join(map(str, self.indices()))}}})"


def parity(mask: int) -> int:
    return mask.bit_count() & 1


class BitMat:
    """Matrix over GF(2); each row is an int mask over ``ncols`` columns."""

    def __init__(self, nrows: int, ncols: int, rows: list[int] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = list(rows) if rows is not None else [0] * nrows
        if len(self.rows) != nrows:
            raise ValueError("row count mismatch")

    @classmethod
    def from_columns(cls, nrows: int, columns: list[int]) -> "BitMat":
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i in range(nrows):
                if (col >> i) & 1:
                    m.rows[i] |= 1 << j
        return m

    def column(self, j: int) -> int:
        col = 0
        for i in range(self.nrows):
            if (self.rows[i] >> j) & 1:
                col |= 1 << i
        return col

    def transpose(self) -> "BitMat":
        t = BitMat(self.ncols, self.nrows)
        for i, row in enumerate(self.rows):
            while row:
                j = (row & -row).bit_length() - 1
                t.rows[j] |= 1 << i
                row &= row - 1
        return t

    def mul_vec(self, v: BitVec) -> BitVec:
        if v.n != self.ncols:
            raise ValueError("dimension mismatch")
        bits = 0
        for i, row in enumerate(self.rows):
            if (row & v.bits).bit_count() & 1:
                bits |= 1 << i
        return BitVec(self.nrows, bits)

    def mul_mat(self, other: "BitMat") -> "BitMat":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        ot = other.transpose()
        out = BitMat(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            acc = 0
            for j, col in enumerate(ot.rows):
                if (row & col).bit_count() & 1:
                    acc |= 1 << j
            out.rows[i] = acc
        return out

    def _eliminated(self) -> tuple[list[int], list[int]]:
        """Row echelon form (lowest-index pivots); returns (rows, pivot columns)."""
        work = self.rows[:]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            pivot = None
            for rr in range(r, len(work)):
                if (work[rr] >> c) & 1:
                    pivot = rr
                    break
            if pivot is None:
                continue
            work[r], work[pivot] = work[pivot], work[r]
            for rr in range(len(work)):
                if rr != r and (work[rr] >> c) & 1:
                    work[rr] ^= work[r]
            pivots.append(c)
            r += 1
            if r == len(work):
                break
        return work, pivots

    def rank(self) -> int:
        return len(self._eliminated()[1])

    def kernel_basis(self) -> list[BitVec]:
        """Basis of {x : Mx = 0}, one vector per free column."""
        work, pivots = self._eliminated()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis = []
        for f in free:
            x = 1 << f
            for r, c in enumerate(pivots):
                if (work[r] >> f) & 1:
                    x |= 1 << c
            basis.append(BitVec(self.ncols, x))
        return basis

    def image_basis(self) -> list[BitVec]:
        """Basis of the column space."""
        _, pivots = self._eliminated()
        return [BitVec(self.nrows, self.column(c)) for c in pivots]

    def solve(self, b: BitVec) -> BitVec | None:
        """One solution of Mx = b (free variables 0), or None."""
        if b.n != self.nrows:
            raise ValueError("dimension mismatch")
        aug = BitMat(self.nrows, self.ncols + 1)
        for i in range(self.nrows):
            aug.rows[i] = self.rows[i] | (b.get(i) << self.ncols)
        work, pivots = aug._eliminated()
        if self.ncols in pivots:
            return None
        x = 0
        for r, c in enumerate(pivots):
            if (work[r] >> self.ncols) & 1:
                x |= 1 << c
        return BitVec(self.ncols, x)

    def in_image(self, b: BitVec) -> bool:
        return self.solve(b) is not None


def span_rank(vectors: Iterable[BitVec | int], n: int | None = None) -> int:
    """Rank of a list of GF(2) vectors (ints or BitVecs)."""
    masks = [v.bits if isinstance(v, BitVec) else v for v in vectors]
    basis: list[int] = []
    for m in masks:
        for b in basis:
            m = min(m, m ^ b)
        if m:
            basis.append(m)
            basis.sort(reverse=True)
    return len(basis)


def reduce_against(mask: int, basis: list[int]) -> int:
    """Reduce a mask against a (sorted, leading-bit distinct) GF(2) basis."""
    for b in basis:
        if mask ^ b < mask:
            mask ^= b
    return mask


class GF2Basis:
    """Incrementally built GF(2) basis with membership and coordinate queries."""

    def __init__(self):
        self.rows: list[int] = []       # reduced spanning vectors
        self.combos: list[int] = []     # combos[i] = original-vector mask producing rows[i]
        self.originals: list[int] = []

    def add(self, mask: int) -> bool:
        """Add a vector; returns True if it enlarged the span."""
        idx = len(self.originals)
        self.originals.append(mask)
        combo = 1 << idx
        m = mask
        for r, c in zip(self.rows, self.combos):
            if m ^ r < m:
                m ^= r
                combo ^= c
        if m == 0:
            return False
        self.rows.append(m)
        self.combos.append(combo)
        order = sorted(range(len(self.rows)), key=lambda i: -self.rows[i])
        self.rows = [self.rows[i] for i in order]
        self.combos = [self.combos[i] for i in order]
        return True

    def contains(self, mask: int) -> bool:
        m = mask
        for r in self.rows:
            if m ^ r < m:
                m ^= r
        return m == 0

    def coordinates(self, mask: int) -> int | None:
        """Mask over original vectors expressing ``mask``, or None."""
        m = mask
        combo = 0
        for r, c in zip(self.rows, self.combos):
            if m ^ r < m:
                m ^= r
                combo ^= c
        return combo if m == 0 else None

    def __len__(self) -> int:
        return len(self.rows)


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


class OEdge(NamedTuple):
    """Oriented edge: stored orientation when rev == 0, reversed when rev == 1."""

    edge: int
    rev: int = 0

    def reverse(self) -> "OEdge":
        return OEdge(self.edge, self.rev ^ 1)


class Graph:
    """Connected multigraph; parallel edges allowed, self-loops rejected.

    Optionally carries faces (closed edge walks) and per-vertex star
    orderings.  Edge indices follow input order; the stored pair (u, v)
    fixes the default orientation u -> v.
    """

    def __init__(
        self,
        nv: int,
        edges: list[tuple[int, int]],
        faces: list[list[int]] | None = None,
        star_orderings: dict[int, list[int]] | None = None,
    ):
        self.nv = nv
        self.edges = [tuple(e) for e in edges]
        self.faces = [list(f) for f in faces] if faces is not None else None
        self.star_orderings = (
            {int(v): list(o) for v, o in star_orderings.items()}
            if star_orderings is not None
            else None
        )
        self._validate()

    # -- construction / validation

    def _validate(self):
        if self.nv < 1:
            raise LatticeError("graph needs at least one vertex")
        for k, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.nv and 0 <= v < self.nv):
                raise LatticeError(f"edge {k} endpoint out of range")
            if u == v:
                raise LatticeError(f"edge {k} is a self-loop at vertex {u}")
        self._stars: list[list[int]] = [[] for _ in range(self.nv)]
        for k, (u, v) in enumerate(self.edges):
            self._stars[u].append(k)
            self._stars[v].append(k)
        if not self.edges and self.nv > 1:
            raise DisconnectedError("no edges")
        if self.nv > 1:
            seen = {0}
            queue = deque([0])
            while queue:
                w = queue.popleft()
                for k in self._stars[w]:
                    o = self.other_end(k, w)
                    if o not in seen:
                        seen.add(o)
                        queue.append(o)
            if len(seen) != self.nv:
                raise DisconnectedError("graph is not connected")
        if self.faces is not None:
            for i, f in enumerate(self.faces):
                try:
                    self.face_circuit(i)
                except NotACircuitError as exc:
                    raise LatticeError(f"face {i} is not a circuit: {exc}") from exc
        if self.star_orderings is not None:
            for v, order in self.star_orderings.items():
                if sorted(order) != sorted(self._stars[v]):
                    raise LatticeError(
                        f"star ordering at vertex {v} is not a permutation of its star"
                    )

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        data = json.loads(text)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        try:
            nv = int(data["vertices"])
            edges = [tuple(int(x) for x in e) for e in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise LatticeError(f"bad lattice description: {exc}") from exc
        if any(len(e) != 2 for e in edges):
            raise LatticeError("each edge must be a pair of vertices")
        faces = data.get("faces")
        star = data.get("star_orderings")
        if star is not None:
            star = {int(v): [int(x) for x in o] for v, o in star.items()}
        return cls(nv, edges, faces, star)

    def to_dict(self) -> dict:
        out: dict = {"vertices": self.nv, "edges": [list(e) for e in self.edges]}
        if self.faces is not None:
            out["faces"] = [list(f) for f in self.faces]
        if self.star_orderings is not None:
            out["star_orderings"] = {str(v): list(o) for v, o in self.star_orderings.items()}
        return out

    # -- basic queries

    @property
    def ne(self) -> int:
        return len(self.edges)

    def star(self, v: int) -> list[int]:
        return list(self._stars[v])

    def degree(self, v: int) -> int:
        return len(self._stars[v])

    def odd_vertices(self) -> list[int]:
        return [v for v in range(self.nv) if self.degree(v) % 2 == 1]

    def source(self, oe: OEdge) -> int:
        u, v = self.edges[oe.edge]
        return v if oe.rev else u

    def target(self, oe: OEdge) -> int:
        u, v = self.edges[oe.edge]
        return u if oe.rev else v

    def other_end(self, edge: int, v: int) -> int:
        u, w = self.edges[edge]
        if v == u:
            return w
        if v == w:
            return u
        raise ValueError(f"vertex {v} not on edge {edge}")

    def oriented_from(self, edge: int, v: int) -> OEdge:
        u, w = self.edges[edge]
        if v == u:
            return OEdge(edge, 0)
        if v == w:
            return OEdge(edge, 1)
        raise ValueError(f"vertex {v} not on edge {edge}")

    # -- chains

    def edge_chain(self, edges: Iterable[int]) -> BitVec:
        return BitVec.from_indices(self.ne, edges)

    def vertex_chain(self, vertices: Iterable[int]) -> BitVec:
        return BitVec.from_indices(self.nv, vertices)

    def boundary_of_edge(self, edge: int) -> BitVec:
        u, v = self.edges[edge]
        return BitVec(self.nv, (1 << u) | (1 << v))

    def coboundary_of_vertex(self, v: int) -> BitVec:
        return BitVec.from_indices(self.ne, self._stars[v])

    def walk_class(self, walk: Iterable[OEdge]) -> BitVec:
        bits = 0
        for oe in walk:
            bits ^= 1 << oe.edge
        return BitVec(self.ne, bits)

    def is_path(self, walk: list[OEdge]) -> bool:
        return all(
            self.target(walk[i]) == self.source(walk[i + 1]) for i in range(len(walk) - 1)
        )

    def is_circuit(self, walk: list[OEdge]) -> bool:
        if not walk:
            return False
        return self.is_path(walk) and self.target(walk[-1]) == self.source(walk[0])

    def face_circuit(self, face_index: int) -> list[OEdge]:
        """Orient the listed face edges into a closed walk; raise if impossible."""
        assert self.faces is not None
        edge_ids = self.faces[face_index]
        if not edge_ids:
            raise NotACircuitError("empty face")
        first = OEdge(edge_ids[0], 0)
        walk = [first]
        for k in edge_ids[1:]:
            head = self.target(walk[-1])
            u, v = self.edges[k]
            if head == u:
                walk.append(OEdge(k, 0))
            elif head == v:
                walk.append(OEdge(k, 1))
            else:
                raise NotACircuitError(f"edge {k} does not continue the walk")
        if self.target(walk[-1]) != self.source(walk[0]):
            raise NotACircuitError("walk does not close")
        return walk


# ---------------------------------------------------------------------------
# chain-complex operations
# ---------------------------------------------------------------------------


def boundary_matrix(g: Graph) -> BitMat:
    """Boundary map C1 -> C0; column of edge e is the sum of its endpoints."""
    m = BitMat(g.nv, g.ne)
    for k, (u, v) in enumerate(g.edges):
        m.rows[u] |= 1 << k
        m.rows[v] |= 1 << k
    return m


def coboundary_matrix(g: Graph) -> BitMat:
    """Coboundary map C^0 -> C^1, the transpose of the boundary."""
    return boundary_matrix(g).transpose()


def boundary2_matrix(g: Graph) -> BitMat:
    """Boundary map C2 -> C1; column of face f is the class of its boundary walk."""
    if g.faces is None:
        raise LatticeError("graph has no faces")
    m = BitMat(g.ne, len(g.faces))
    for j, f in enumerate(g.faces):
        for k in f:
            m.rows[k] ^= 1 << j
    return m


def cycle_basis(g: Graph) -> list[BitVec]:
    """Deterministic basis of the cycle space Z1 (dimension |E| - |V| + 1)."""
    return boundary_matrix(g).kernel_basis()


def zeta_chain(g: Graph) -> BitVec:
    """The 1-chain containing every edge once."""
    return BitVec(g.ne, (1 << g.ne) - 1 if g.ne else 0)


def spanning_tree(g: Graph) -> tuple[list[int | None], list[int | None]]:
    """BFS tree from vertex 0: (parent vertex, parent edge) per vertex."""
    parent_v: list[int | None] = [None] * g.nv
    parent_e: list[int | None] = [None] * g.nv
    seen = {0}
    queue = deque([0])
    while queue:
        w = queue.popleft()
        for k in g.star(w):
            o = g.other_end(k, w)
            if o not in seen:
                seen.add(o)
                parent_v[o] = w
                parent_e[o] = k
                queue.append(o)
    return parent_v, parent_e


def boundary_section(g: Graph) -> BitMat:
    """Linear right inverse of the boundary on B0, routed along a BFS tree.

    Column v holds the tree path from v to the root, so an even-weight
    vertex chain maps to the XOR of its path chains.
    """
    parent_v, parent_e = spanning_tree(g)
    cols = []
    for v in range(g.nv):
        mask = 0
        w = v
        while parent_e[w] is not None:
            mask ^= 1 << parent_e[w]
            w = parent_v[w]
        cols.append(mask)
    return BitMat.from_columns(g.ne, cols)


def tree_path(g: Graph, a: int, b: int) -> list[OEdge]:
    """Oriented walk a -> b inside the BFS tree."""
    parent_v, parent_e = spanning_tree(g)

    def root_chain(v: int) -> list[int]:
        out = [v]
        while parent_v[out[-1]] is not None:
            out.append(parent_v[out[-1]])
        return out

    ca, cb = root_chain(a), root_chain(b)
    sa, sb = set(ca), set(cb)
    lca = next(v for v in ca if v in sb)
    walk: list[OEdge] = []
    w = a
    while w != lca:
        walk.append(g.oriented_from(parent_e[w], w))
        w = parent_v[w]
    down: list[OEdge] = []
    w = b
    while w != lca:
        down.append(g.oriented_from(parent_e[w], w).reverse())
        w = parent_v[w]
    walk.extend(reversed(down))
    return walk


def fundamental_circuits(g: Graph) -> list[list[OEdge]]:
    """One edge-simple circuit per non-tree edge; their classes span Z1."""
    _, parent_e = spanning_tree(g)
    tree_edges = {k for k in parent_e if k is not None}
    circuits = []
    for k, (u, v) in enumerate(g.edges):
        if k in tree_edges:
            continue
        circuits.append([OEdge(k, 0)] + tree_path(g, v, u))
    return circuits


def eulerian_circuit(g: Graph, start: int = 0) -> list[OEdge]:
    """Closed walk using every edge exactly once (Hierholzer, lowest edge first)."""
    for v in range(g.nv):
        if g.degree(v) % 2 == 1:
            raise OddDegreeError(v)
    if g.ne == 0:
        return []
    used = [False] * g.ne
    stars = [sorted(g.star(v)) for v in range(g.nv)]
    ptrs = [0] * g.nv

    def next_edge(v: int) -> int | None:
        while ptrs[v] < len(stars[v]):
            k = stars[v][ptrs[v]]
            if not used[k]:
                return k
            ptrs[v] += 1
        return None

    circuit: list[OEdge] = []
    stack: list[tuple[int, OEdge | None]] = [(start, None)]
    while stack:
        v, via = stack[-1]
        k = next_edge(v)
        if k is None:
            stack.pop()
            if via is not None:
                circuit.append(via)
        else:
            used[k] = True
            oe = g.oriented_from(k, v)
            stack.append((g.target(oe), oe))
    circuit.reverse()
    if len(circuit) != g.ne or not g.is_circuit(circuit):
        raise LatticeError("failed to build an Eulerian circuit")
    return circuit


def homology_basis(g: Graph) -> list[BitVec]:
    """Cycle representatives of a basis of Z1 / im(boundary of faces)."""
    if g.faces is None:
        raise LatticeError("graph has no faces")
    b2 = boundary2_matrix(g)
    basis = GF2Basis()
    for col in b2.image_basis():
        basis.add(col.bits)
    reps = []
    for z in cycle_basis(g):
        if basis.add(z.bits):
            reps.append(z)
    return reps


class ChainComplex:
    """Precomputed boundary data for one graph.

    Holds the boundary/coboundary matrices, a deterministic cycle basis,
    matching edge-simple fundamental circuits, the tree section of the
    boundary, the all-edges chain, and (when faces are present) the face
    boundary map with a homology basis.
    """

    def __init__(self, g: Graph):
        self.graph = g
        self.boundary1 = boundary_matrix(g)
        self.coboundary0 = self.boundary1.transpose()
        self.section = boundary_section(g)
        self.circuits = fundamental_circuits(g)
        self.cycles = [g.walk_class(c) for c in self.circuits]
        self.zeta = zeta_chain(g)
        self._cycle_table = GF2Basis()
        for z in self.cycles:
            self._cycle_table.add(z.bits)
        if g.faces is not None:
            self.boundary2 = boundary2_matrix(g)
            self.h1_reps = homology_basis(g)
        else:
            self.boundary2 = None
            self.h1_reps = None

    def boundary(self, tau: BitVec) -> BitVec:
        return self.boundary1.mul_vec(tau)

    def coboundary(self, theta: BitVec) -> BitVec:
        return self.coboundary0.mul_vec(theta)

    def is_cycle(self, tau: BitVec) -> bool:
        return self.boundary(tau).is_zero()

    def r(self, eps: BitVec) -> BitVec:
        """Section of the boundary; only meaningful on even-weight chains."""
        return self.section.mul_vec(eps)

    def cycle_coordinates(self, tau: BitVec) -> list[int]:
        """Coefficients of a cycle in the fundamental-circuit basis."""
        combo = self._cycle_table.coordinates(tau.bits)
        if combo is None:
            raise ValueError("chain is not a cycle")
        return [(combo >> i) & 1 for i in range(len(self.cycles))]

    def dual_cochains(self) -> list[BitVec]:
        """Cochains A_i with (A_i, cycle_j) = delta_ij for the fundamental cycles."""
        k = len(self.cycles)
        rows = [z.bits for z in self.cycles]
        m = BitMat(k, self.graph.ne, rows)
        duals = []
        for i in range(k):
            b = BitVec(k, 1 << i)
            x = m.solve(b)
            assert x is not None
            duals.append(x)
        return duals

    def is_face_boundary(self, tau: BitVec) -> bool:
        if self.boundary2 is None:
            raise LatticeError("graph has no faces")
        return self.boundary2.in_image(tau)
