"""Fock-space fermions: Majorana generators, the even subalgebra, normal forms.

One qubit per vertex, in input order; the vacuum is the all-zeros ket.
Creation/annihilation operators appear only through the two Majorana
words per vertex, so every even operator stays inside the phase-exact
Pauli algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .opalg import PauliTerm, product
from .z2core import BitVec, ChainComplex, Graph, OEdge

# word tokens: ("g", vertex) for a parity generator, ("s", edge, rev) for a
# kinetic generator with orientation
Token = tuple


def block_majorana(n: int, start: int, j: int) -> PauliTerm:
    """Majorana number j of a Jordan-Wigner chain occupying qubits from ``start``.

    Even j gives the X-type word, odd j the Y-type word, each with a Z
    string over the lower qubits of the same block.
    """
    q = start + j // 2
    if q >= n:
        raise ValueError("majorana index outside register")
    x = 1 << q
    z = (1 << q) - (1 << start)
    if j % 2:
        z |= 1 << q
        return PauliTerm(n, 1, x, z)
    return PauliTerm(n, 0, x, z)


class FermiAlgebra:
    """Even fermionic operators over a graph's vertex set."""

    def __init__(self, graph: Graph, complex_: ChainComplex | None = None):
        self.graph = graph
        self.cc = complex_ if complex_ is not None else ChainComplex(graph)
        self.n = graph.nv

    # -- generators

    def majorana(self, v: int, kind: str) -> PauliTerm:
        """Majorana word at vertex v; kind is "X" or "Y"."""
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range")
        j = 2 * v + (0 if kind == "X" else 1)
        if kind not in ("X", "Y"):
            raise ValueError("kind must be 'X' or 'Y'")
        return block_majorana(self.n, 0, j)

    def parity_op(self, v: int) -> PauliTerm:
        """Fermion parity at v: the single-qubit Z word."""
        x = self.majorana(v, "X")
        y = self.majorana(v, "Y")
        return (x * y).times_i(-1)

    def grading(self) -> PauliTerm:
        """Total fermion parity, the product of all vertex parities."""
        return product([self.parity_op(v) for v in range(self.n)], self.n)

    def kinetic_op(self, oe: OEdge) -> PauliTerm:
        """Hopping word X(source) X(target) for an oriented edge."""
        s, t = self.graph.source(oe), self.graph.target(oe)
        return self.majorana(s, "X") * self.majorana(t, "X")

    def kinetic_chain(self, tau: BitVec) -> PauliTerm:
        """Product of kinetic words over the support of a 1-chain.

        Edges are taken in increasing index order with their stored
        orientation; this fixes the sign ambiguity once and for all.
        """
        return product(
            [self.kinetic_op(OEdge(e, 0)) for e in tau.indices()], self.n
        )

    def parity_chain(self, eps: BitVec) -> PauliTerm:
        return product([self.parity_op(v) for v in eps.indices()], self.n)

    # -- words and normal forms

    def token_term(self, token: Token) -> PauliTerm:
        if token[0] == "g":
            return self.parity_op(token[1])
        if token[0] == "s":
            return self.kinetic_op(OEdge(token[1], token[2]))
        raise ValueError(f"unknown token {token!r}")

    def word_term(self, word: Sequence[Token]) -> PauliTerm:
        return product([self.token_term(t) for t in word], self.n)

    def normal_form(self, word: Sequence[Token]) -> "EvenWord":
        """Reduce a generator word to its canonical (sign, eps, beta) data.

        The vertex content eps and the boundary class beta of the edge
        content survive any rewriting; the sign is recovered exactly by
        dividing out the canonical representative in the Pauli algebra.
        """
        eps_bits = 0
        tau_bits = 0
        for t in word:
            if t[0] == "g":
                eps_bits ^= 1 << t[1]
            elif t[0] == "s":
                tau_bits ^= 1 << t[1]
            else:
                raise ValueError(f"unknown token {t!r}")
        eps = BitVec(self.n, eps_bits)
        tau = BitVec(self.graph.ne, tau_bits)
        beta = self.cc.boundary(tau)
        rep = self._canonical_term(eps, beta)
        residual = self.word_term(word) * rep.inverse()
        scalar = residual.scalar()
        if scalar is None:
            raise AssertionError("word does not reduce to its canonical form")
        phase = residual.phase
        if phase % 2:
            raise AssertionError("even word produced an imaginary sign")
        return EvenWord(self, phase, eps, beta)

    def _canonical_term(self, eps: BitVec, beta: BitVec) -> PauliTerm:
        return self.parity_chain(eps) * self.kinetic_chain(self.cc.r(beta))


@dataclass
class EvenWord:
    """Canonical form sign * parity(eps) * kinetic(r beta) of an even word."""

    algebra: FermiAlgebra
    phase: int  # power of i mod 4; closed products always land on 0 or 2
    eps: BitVec
    beta: BitVec

    def term(self) -> PauliTerm:
        return self.algebra._canonical_term(self.eps, self.beta).times_i(self.phase)

    def __mul__(self, other: "EvenWord") -> "EvenWord":
        if other.algebra is not self.algebra:
            raise ValueError("words from different algebras")
        prod = self.term() * other.term()
        eps = self.eps + other.eps
        beta = self.beta + other.beta
        rep = self.algebra._canonical_term(eps, beta)
        residual = prod * rep.inverse()
        scalar = residual.scalar()
        if scalar is None:
            raise AssertionError("product does not reduce to canonical form")
        return EvenWord(self.algebra, residual.phase, eps, beta)

    def key(self) -> tuple[int, int, int]:
        return (self.phase, self.eps.bits, self.beta.bits)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EvenWord) and self.key() == other.key()


# -- relation sweeps


@dataclass
class CheckRecord:
    check_id: str
    ok: bool
    detail: str = ""


@dataclass
class RelationReport:
    records: list[CheckRecord]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def first_failure(self) -> CheckRecord | None:
        for r in self.records:
            if not r.ok:
                return r
        return None


def _braiding_sign(a: PauliTerm, b: PauliTerm) -> int:
    return a.commutes_with(b)


def loop_relation_holds(
    alg: FermiAlgebra, circuit: list[OEdge], s_ops: dict[int, PauliTerm] | None = None
) -> bool:
    """Check that the kinetic word around a circuit multiplies to +1.

    ``s_ops`` may override the per-edge operators (stored orientation);
    tests use this to inject faults.
    """
    g = alg.graph
    if not g.is_circuit(circuit):
        raise ValueError("not a circuit")
    terms = []
    for oe in circuit:
        base = s_ops[oe.edge] if s_ops is not None else alg.kinetic_op(OEdge(oe.edge, 0))
        terms.append(-base if oe.rev else base)
    return product(terms, alg.n).scalar() == 1


def verify_even_relations(
    graph: Graph,
    alg: FermiAlgebra | None = None,
    extra_circuits: Iterable[list[OEdge]] = (),
) -> RelationReport:
    """Confirm the generator relations of the even algebra on one graph.

    Covers involutivity and commutation of parities, reversal and squares
    of kinetic words, both braiding families, and the loop relation on
    every fundamental circuit plus any extra circuits supplied.
    """
    alg = alg or FermiAlgebra(graph)
    g = graph
    recs: list[CheckRecord] = []

    ok = all(
        (alg.parity_op(v) * alg.parity_op(v)).scalar() == 1
        and alg.parity_op(v).is_hermitian()
        for v in range(g.nv)
    )
    recs.append(CheckRecord("parity-involutive", ok))

    ok = all(
        alg.parity_op(v).commutes_with(alg.parity_op(w)) == 0
        for v in range(g.nv)
        for w in range(v + 1, g.nv)
    )
    recs.append(CheckRecord("parity-commute", ok))

    ok = True
    for e in range(g.ne):
        s = alg.kinetic_op(OEdge(e, 0))
        if alg.kinetic_op(OEdge(e, 1)) != -s:
            ok = False
        if (s * s).scalar() != -1:
            ok = False
        if s.dagger() != -s:
            ok = False
    recs.append(CheckRecord("kinetic-reversal-square", ok))

    ok = True
    for e in range(g.ne):
        for f in range(e + 1, g.ne):
            want = g.boundary_of_edge(e).dot(g.boundary_of_edge(f))
            got = _braiding_sign(alg.kinetic_op(OEdge(e, 0)), alg.kinetic_op(OEdge(f, 0)))
            if got != want:
                ok = False
    recs.append(CheckRecord("kinetic-braiding", ok))

    ok = True
    for v in range(g.nv):
        pv = alg.parity_op(v)
        for e in range(g.ne):
            want = g.boundary_of_edge(e).get(v)
            if _braiding_sign(pv, alg.kinetic_op(OEdge(e, 0))) != want:
                ok = False
    recs.append(CheckRecord("parity-kinetic-braiding", ok))

    bad = None
    for circ in list(alg.cc.circuits) + list(extra_circuits):
        if not loop_relation_holds(alg, circ):
            bad = circ
            break
    recs.append(
        CheckRecord(
            "loop-relation",
            bad is None,
            "" if bad is None else f"failing circuit {[tuple(oe) for oe in bad]}",
        )
    )
    return RelationReport(recs)


def random_circuit(graph: Graph, rng, max_len: int = 40) -> list[OEdge]:
    """Random closed walk found by stepping until the start vertex recurs."""
    for _ in range(200):
        start = rng.randrange(graph.nv)
        walk: list[OEdge] = []
        v = start
        for _ in range(max_len):
            star = graph.star(v)
            oe = graph.oriented_from(star[rng.randrange(len(star))], v)
            walk.append(oe)
            v = graph.target(oe)
            if v == start:
                return walk
    raise RuntimeError("failed to sample a circuit")
