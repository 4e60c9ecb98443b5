"""The vertex-Clifford model: local generators, constraints, sectors, dictionary.

Each vertex carries one local Jordan-Wigner block of ceil(deg/2) qubits.
The position of an edge inside its vertex's ordering decides which local
Majorana realizes the generator for that (vertex, edge) pair, so a model
is completely fixed by a per-vertex ordering of the star plus a sign
chain eta.  With the ordering paired off as (first, second), (third,
fourth), ... the per-vertex parity word is a pure local Z string.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .fermi import block_majorana
from .opalg import (
    PauliSum,
    PauliTerm,
    QubitRegister,
    SparseState,
    product,
    sector_dimension_from_masks,
)
from .z2core import (
    BitVec,
    ChainComplex,
    GF2Basis,
    Graph,
    LatticeError,
    OEdge,
    OddDegreeError,
    eulerian_circuit,
)


@dataclass(frozen=True)
class OrderingChoice:
    """Per-vertex star orderings, per-edge orientation choices, global sign chain.

    The hopping-word formula cannot see an edge's direction (generators
    at distinct vertices commute), so the model fixes a reference
    orientation per edge; ``flips[e] = 1`` means the reference runs
    against the stored pair.
    """

    orders: tuple[tuple[int, ...], ...]
    eta: BitVec
    flips: tuple[int, ...]

    @classmethod
    def from_orders(
        cls,
        graph: Graph,
        orders: Sequence[Sequence[int]],
        eta: BitVec | None = None,
        flips: Sequence[int] | None = None,
    ):
        for v, order in enumerate(orders):
            if sorted(order) != sorted(graph.star(v)):
                raise LatticeError(f"ordering at vertex {v} is not a permutation of its star")
        eta = eta if eta is not None else BitVec(graph.nv, 0)
        flips = tuple(flips) if flips is not None else (0,) * graph.ne
        return cls(tuple(tuple(o) for o in orders), eta, flips)

    @classmethod
    def eulerian(cls, graph: Graph, eta: BitVec | None = None) -> "OrderingChoice":
        """Orderings and orientations read off a fixed Eulerian circuit.

        At each vertex the circuit's incoming/outgoing edge pairs are laid
        out in the order the circuit leaves the vertex; every edge is
        oriented the way the circuit traverses it.  At eta = 0 this makes
        the Eulerian constraint word equal minus the total parity.
        """
        circ = eulerian_circuit(graph)
        orders: list[list[int]] = [[] for _ in range(graph.nv)]
        flips = [0] * graph.ne
        for i, oe in enumerate(circ):
            v = graph.source(oe)
            prev = circ[i - 1]  # i == 0 wraps to the last edge
            orders[v].extend([prev.edge, oe.edge])
            flips[oe.edge] = oe.rev
        return cls.from_orders(graph, orders, eta, flips)

    @classmethod
    def from_graph(cls, graph: Graph, eta: BitVec | None = None) -> "OrderingChoice":
        """Use star orderings shipped with the graph, else fall back to Eulerian.

        Graphs with odd-degree vertices have no Eulerian circuit; they get
        the sorted star order instead.
        """
        if graph.star_orderings is not None:
            orders = [graph.star_orderings[v] for v in range(graph.nv)]
            return cls.from_orders(graph, orders, eta)
        if graph.odd_vertices():
            return cls.from_orders(graph, [sorted(graph.star(v)) for v in range(graph.nv)], eta)
        return cls.eulerian(graph, eta)

    def with_eta(self, eta: BitVec) -> "OrderingChoice":
        return OrderingChoice(self.orders, eta, self.flips)


def permutation_parity(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    par = 0
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        par ^= (clen - 1) & 1
    return par


class GammaModel:
    """Vertex-Clifford model over a graph with a fixed ordering choice."""

    def __init__(self, graph: Graph, choice: OrderingChoice | None = None):
        if graph.ne == 0:
            raise LatticeError("degenerate graph: no edges, no model")
        self.graph = graph
        self.cc = ChainComplex(graph)
        self.choice = choice if choice is not None else OrderingChoice.from_graph(graph)
        self.odd_vertices = graph.odd_vertices()
        self.block_size = [(graph.degree(v) + 1) // 2 for v in range(graph.nv)]
        self.offset = [0] * graph.nv
        for v in range(1, graph.nv):
            self.offset[v] = self.offset[v - 1] + self.block_size[v - 1]
        self.n = self.offset[-1] + self.block_size[-1]
        self.register = QubitRegister(
            self.n,
            tuple(
                ((v, k), self.offset[v] + k)
                for v in range(graph.nv)
                for k in range(self.block_size[v])
            ),
        )
        self._positions = [
            {e: j for j, e in enumerate(self.choice.orders[v])} for v in range(graph.nv)
        ]

    # -- generators

    def gamma(self, v: int, e: int) -> PauliTerm:
        """Local Clifford generator for the pair (vertex, incident edge)."""
        pos = self._positions[v].get(e)
        if pos is None:
            raise ValueError(f"edge {e} not incident to vertex {v}")
        return block_majorana(self.n, self.offset[v], pos)

    def gamma_star(self, v: int, order: Sequence[int] | None = None) -> PauliTerm:
        """Per-vertex parity word.

        Even degree: i^(deg/2) times the ordered product of all local
        generators, twisted by eta; flips sign under odd reorderings.
        Odd degree: the extra local Majorana, an independent generator.
        """
        deg = self.graph.degree(v)
        eta_sign = 2 * self.choice.eta.get(v)
        if deg % 2 == 1:
            return block_majorana(self.n, self.offset[v], deg).times_i(eta_sign)
        if order is None:
            order = self.choice.orders[v]
        base = self.choice.orders[v]
        if sorted(order) != sorted(base):
            raise ValueError("order must permute the star")
        perm = [base.index(e) for e in order]
        swap_sign = 2 * permutation_parity(perm)
        word = product([self.gamma(v, e) for e in base], self.n)
        return word.times_i(deg // 2 + eta_sign + swap_sign)

    def kinetic(self, oe: OEdge) -> PauliTerm:
        """Hopping word -i gamma(source, e) gamma(target, e).

        The base word is the same for both directions, so reversal flips
        the sign relative to the model's reference orientation.
        """
        u, v = self.graph.edges[oe.edge]
        base = (self.gamma(u, oe.edge) * self.gamma(v, oe.edge)).times_i(3)
        return -base if oe.rev ^ self.choice.flips[oe.edge] else base

    def circuit_op(self, circuit: list[OEdge]) -> PauliTerm:
        """Constraint word: ordered product of kinetic words along a circuit."""
        if not self.graph.is_circuit(circuit):
            raise LatticeError("not a circuit")
        return product([self.kinetic(oe) for oe in circuit], self.n)

    def path_op(self, path: list[OEdge]) -> PauliTerm:
        if not self.graph.is_path(path):
            raise LatticeError("not a path")
        return product([self.kinetic(oe) for oe in path], self.n)

    def intertwiner(self, tau: BitVec) -> PauliTerm:
        """Sector-shifting word: product of source generators over a cochain."""
        return product(
            [self.gamma(self.graph.edges[e][0], e) for e in tau.indices()], self.n
        )

    def twist(self, theta: BitVec) -> PauliTerm:
        """Ordering-change unitary for a 1-chain theta.

        Commutes with every kinetic word; conjugation flips the parity
        words on the boundary of theta.
        """
        boundary = self.cc.boundary(theta)
        stars = product([self.gamma_star(v) for v in boundary.indices()], self.n)
        hops = product([self.kinetic(OEdge(e, 0)) for e in theta.indices()], self.n)
        return stars * hops

    def total_parity(self) -> PauliTerm:
        return product([self.gamma_star(v) for v in range(self.graph.nv)], self.n)

    # -- representation bookkeeping

    def alpha(self) -> int:
        """Sign relating the Eulerian constraint word to the total parity."""
        if self.odd_vertices:
            raise OddDegreeError(self.odd_vertices[0])
        circ = eulerian_circuit(self.graph)
        residual = self.circuit_op(circ) * self.total_parity().inverse()
        return residual.sign_exponent()

    def manifest(self) -> dict:
        data = {
            "qubits": self.n,
            "layout": {str(v): [self.offset[v] + k for k in range(self.block_size[v])]
                       for v in range(self.graph.nv)},
            "ordering": [list(o) for o in self.choice.orders],
            "eta": self.choice.eta.indices(),
        }
        if not self.odd_vertices:
            data["alpha"] = self.alpha()
        return data

    # -- sectors

    def constraint_terms(self, label: Sequence[int] | None = None) -> list[tuple[PauliTerm, int]]:
        """(word, sign) pairs cutting out one sector of the constraint algebra."""
        k = len(self.cc.circuits)
        label = list(label) if label is not None else [0] * k
        if len(label) != k:
            raise ValueError(f"sector label needs {k} bits")
        return [
            (self.circuit_op(c), 1 - 2 * (a & 1))
            for c, a in zip(self.cc.circuits, label)
        ]

    def sector_dimensions(self, method: str = "trace") -> dict[tuple[int, ...], int]:
        """Dimension of every joint constraint eigenspace.

        method "trace": exact trace sums per sign pattern (cost 4^k).
        method "rank": GF(2) independence of the constraint words; all
        sectors then share dimension 2^(n - k).
        """
        ops = [self.circuit_op(c) for c in self.cc.circuits]
        k = len(ops)
        if method == "rank":
            basis = GF2Basis()
            for t in ops:
                if not t.is_hermitian() or (t * t).scalar() != 1:
                    raise AssertionError("constraint word is not an involution")
                if not basis.add((t.x << self.n) | t.z):
                    raise AssertionError("constraint words are GF(2) dependent")
            for i, a in enumerate(ops):
                for b in ops[i + 1:]:
                    if a.commutes_with(b):
                        raise AssertionError("constraint words do not commute")
            dim = 2 ** (self.n - k)
            return {self._label_bits(m, k): dim for m in range(2 ** k)}
        if method != "trace":
            raise ValueError("method must be 'trace' or 'rank'")
        out = {}
        for m in range(2 ** k):
            label = self._label_bits(m, k)
            out[label] = sector_dimension_from_masks(self.n, self.constraint_terms(label))
        return out

    @staticmethod
    def _label_bits(m: int, k: int) -> tuple[int, ...]:
        return tuple((m >> i) & 1 for i in range(k))

    def sector_of_state(self, state: SparseState, tol: float = 1e-9) -> tuple[int, ...]:
        """Read off the sector label of an eigenstate; reject mixed states."""
        label = []
        nrm2 = state.inner(state).real
        for circ in self.cc.circuits:
            image = self.circuit_op(circ).apply(state)
            ev = image.inner(state).real / nrm2
            diff = image.add(state.scale(-ev))
            if abs(abs(ev) - 1.0) > tol or diff.norm() > tol * 10:
                raise ValueError("state is not in a single sector")
            label.append(0 if ev > 0 else 1)
        return tuple(label)

    def sector_cochain(self, label: Sequence[int]) -> BitVec:
        """A gauge-field representative pairing to the given label on the cycle basis."""
        duals = self.cc.dual_cochains()
        bits = 0
        for a, d in zip(label, duals):
            if a & 1:
                bits ^= d.bits
        return BitVec(self.graph.ne, bits)

    def flux_parity_exponent(self, label: Sequence[int]) -> int:
        """Predicted total-parity exponent alpha + (A, all-edges chain) of a sector."""
        a_rep = self.sector_cochain(label)
        return (self.alpha() + a_rep.dot(self.cc.zeta)) % 2

    def parity_flux_check(self, state: SparseState, tol: float = 1e-9) -> bool:
        """Verify the total-parity eigenvalue demanded by the state's sector."""
        label = self.sector_of_state(state, tol)
        want = 1 - 2 * self.flux_parity_exponent(label)
        image = self.total_parity().apply(state)
        diff = image.add(state.scale(-want))
        return diff.norm() <= tol * 10

    # -- bosonization dictionary

    def bosonize_token(self, token: tuple, a_field: BitVec | None = None) -> PauliTerm:
        if token[0] == "g":
            return self.gamma_star(token[1])
        if token[0] == "s":
            term = self.kinetic(OEdge(token[1], token[2]))
            if a_field is not None and a_field.get(token[1]):
                term = -term
            return term
        raise ValueError(f"unknown token {token!r}")

    def bosonize_word(self, word: Sequence[tuple], a_field: BitVec | None = None) -> PauliTerm:
        return product([self.bosonize_token(t, a_field) for t in word], self.n)

    def bosonize(
        self,
        op: Iterable[tuple[complex, Sequence[tuple]]],
        a_field: BitVec | None = None,
    ) -> PauliSum:
        """Map a sum of even generator words into the vertex-Clifford algebra.

        Parity tokens become parity words, kinetic tokens become hopping
        words twisted by the external field.
        """
        return PauliSum(
            self.n, [(c, self.bosonize_word(w, a_field)) for c, w in op]
        )

    # -- odd-degree extension

    def dim_hilbert(self) -> int:
        return 2 ** self.n

    def odd_sector_dimension(self) -> int:
        """Per-sector dimension 2^(|V| - 1 + |V_odd| / 2)."""
        if len(self.odd_vertices) % 2:
            raise AssertionError("odd-degree vertex count must be even")
        return 2 ** (self.graph.nv - 1 + len(self.odd_vertices) // 2)

    def _corner_word(self, v: int) -> PauliTerm:
        gens = [self.gamma_star(v)] + [self.gamma(v, e) for e in self.choice.orders[v]]
        return product(gens, self.n)

    def verify_relations(self, rng=None, samples: int = 20) -> "RelationReport":
        """Phase-exact sweep of the generator relations on this model.

        Covers the per-vertex Clifford relations, hopping reversal and
        braiding, the centrality of every fundamental-circuit constraint
        word, plus seeded random sweeps of the sector-intertwiner and
        ordering-twist conjugation laws.
        """
        import random

        from .fermi import CheckRecord, RelationReport

        g = self.graph
        rng = rng if rng is not None else random.Random(0)
        recs: list[CheckRecord] = []

        ok = True
        for v in range(g.nv):
            gens = [self.gamma(v, e) for e in g.star(v)]
            for i, a in enumerate(gens):
                if (a * a).scalar() != 1 or not a.is_hermitian():
                    ok = False
                for b in gens[i + 1:]:
                    if a.commutes_with(b) != 1:
                        ok = False
        recs.append(CheckRecord("generator-clifford", ok))

        ok = True
        for v in range(g.nv):
            for w in range(v + 1, g.nv):
                for e in g.star(v):
                    for f in g.star(w):
                        if self.gamma(v, e).commutes_with(self.gamma(w, f)) != 0:
                            ok = False
        recs.append(CheckRecord("generator-cross-commute", ok))

        ok = True
        for v in range(g.nv):
            gs = self.gamma_star(v)
            if (gs * gs).scalar() != 1 or not gs.is_hermitian():
                ok = False
            for e in g.star(v):
                if gs.commutes_with(self.gamma(v, e)) != 1:
                    ok = False
        recs.append(CheckRecord("star-involutive", ok))

        ok = True
        for e in range(g.ne):
            s = self.kinetic(OEdge(e, 0))
            if self.kinetic(OEdge(e, 1)) != -s or (s * s).scalar() != -1 or s.dagger() != -s:
                ok = False
        recs.append(CheckRecord("hop-reversal-square", ok))

        ok = True
        for e in range(g.ne):
            for f in range(e + 1, g.ne):
                want = g.boundary_of_edge(e).dot(g.boundary_of_edge(f))
                if self.kinetic(OEdge(e, 0)).commutes_with(self.kinetic(OEdge(f, 0))) != want:
                    ok = False
        recs.append(CheckRecord("hop-braiding", ok))

        ok = True
        for v in range(g.nv):
            gs = self.gamma_star(v)
            for e in range(g.ne):
                want = g.boundary_of_edge(e).get(v)
                if gs.commutes_with(self.kinetic(OEdge(e, 0))) != want:
                    ok = False
        recs.append(CheckRecord("star-hop-braiding", ok))

        ok = True
        stars = [self.gamma_star(v) for v in range(g.nv)]
        hops = [self.kinetic(OEdge(e, 0)) for e in range(g.ne)]
        for circ in self.cc.circuits:
            w = self.circuit_op(circ)
            if (w * w).scalar() != 1 or not w.is_hermitian():
                ok = False
            if any(w.commutes_with(t) for t in stars + hops):
                ok = False
        recs.append(CheckRecord("constraint-central", ok))

        ok = True
        for _ in range(samples):
            tau = BitVec(g.ne, rng.randrange(2 ** g.ne))
            o_word = self.intertwiner(tau)
            for circ, cyc in zip(self.cc.circuits, self.cc.cycles):
                want = tau.dot(cyc)
                if o_word.commutes_with(self.circuit_op(circ)) != want:
                    ok = False
        recs.append(CheckRecord("intertwiner-braiding", ok))

        ok = True
        for _ in range(samples):
            theta = BitVec(g.ne, rng.randrange(2 ** g.ne))
            t_word = self.twist(theta)
            if any(t_word.commutes_with(h) for h in hops):
                ok = False
            bnd = self.cc.boundary(theta)
            for v in range(g.nv):
                conj = t_word * stars[v] * t_word.inverse()
                want = -stars[v] if bnd.get(v) else stars[v]
                if conj != want:
                    ok = False
        recs.append(CheckRecord("twist-conjugation", ok))

        return RelationReport(recs)

    def psi_path(self, path: list[OEdge]) -> PauliTerm:
        """String word for a path between two odd-degree vertices.

        Squares to -1, commutes with every hopping and parity word, obeys
        the concatenation and endpoint-braiding laws.
        """
        if not self.graph.is_path(path) or not path:
            raise LatticeError("not a path")
        v, w = self.graph.source(path[0]), self.graph.target(path[-1])
        for u in (v, w):
            if self.graph.degree(u) % 2 == 0:
                raise OddDegreeError(u)
        k = (self.graph.degree(v) + self.graph.degree(w)) // 2 + 1
        return (self._corner_word(v) * self.path_op(path) * self._corner_word(w)).times_i(k)
