"""Quadratic hamiltonians: free-fermion oracle and bosonized spectra per sector.

The one-particle matrix drives everything on the oracle side: many-body
levels are parity-filtered subset sums of its eigenvalues.  The bosonized
hamiltonian is assembled from parity projectors and hopping words and
diagonalized sector by sector; the two columns must agree to tight
absolute tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fermi import FermiAlgebra
from .gamma import GammaModel
from .opalg import PauliSum, PauliTerm, SizeLimitError, spectrum
from .z2core import BitVec, Graph, OEdge


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """Hopping amplitudes per stored edge orientation plus on-site potentials.

    The reversed orientation automatically carries the conjugate
    amplitude, so hermiticity is built in.
    """

    hop: dict[int, complex]
    potential: dict[int, float] = field(default_factory=dict)

    def hop_oriented(self, oe: OEdge) -> complex:
        h = self.hop.get(oe.edge, 0.0)
        return np.conj(h) if oe.rev else h

    @classmethod
    def uniform(cls, graph: Graph, t: complex = 1.0, nu: float = 0.0) -> "QuadraticHamiltonian":
        return cls(
            {e: t for e in range(graph.ne)},
            {v: nu for v in range(graph.nv)},
        )


def one_particle_matrix(
    graph: Graph, ham: QuadraticHamiltonian, a_field: BitVec | None = None
) -> np.ndarray:
    """|V| x |V| hermitian matrix governing the single-fermion sector.

    Each oriented edge contributes -h at (target, source), twisted by the
    external field; potentials sit on the diagonal.
    """
    m = np.zeros((graph.nv, graph.nv), dtype=complex)
    for e in range(graph.ne):
        sign = -1.0 if (a_field is not None and a_field.get(e)) else 1.0
        for rev in (0, 1):
            oe = OEdge(e, rev)
            h = ham.hop_oriented(oe)
            if h:
                m[graph.target(oe), graph.source(oe)] -= sign * h
    for v, nu in ham.potential.items():
        m[v, v] += nu
    if not np.allclose(m, m.conj().T, atol=1e-12):
        raise ValueError("one-particle matrix is not hermitian")
    return m


def many_body_oracle(
    graph: Graph,
    ham: QuadraticHamiltonian,
    a_field: BitVec | None = None,
    parity: int | None = None,
) -> np.ndarray:
    """All subset sums of the one-particle eigenvalues, optionally parity-filtered."""
    if graph.nv > 24:
        raise SizeLimitError("subset enumeration beyond 24 vertices refused")
    levels = np.linalg.eigvalsh(one_particle_matrix(graph, ham, a_field))
    sums = np.array([0.0])
    sizes = np.array([0])
    for lam in levels:
        sums = np.concatenate([sums, sums + lam])
        sizes = np.concatenate([sizes, sizes + 1])
    if parity is not None:
        sums = sums[sizes % 2 == parity % 2]
    return np.sort(sums)


def _projector_expansion(hop_word: PauliTerm, left: PauliTerm, right: PauliTerm):
    """Terms of (1 + left)/2 * word * (1 + right)/2."""
    quarter = 0.25
    return [
        (quarter, hop_word),
        (quarter, left * hop_word),
        (quarter, hop_word * right),
        (quarter, left * hop_word * right),
    ]


def fermion_hamiltonian(alg: FermiAlgebra, ham: QuadraticHamiltonian) -> PauliSum:
    """The quadratic hamiltonian as a Pauli sum on the vertex register."""
    g = alg.graph
    terms: list[tuple[complex, PauliTerm]] = []
    for e in range(g.ne):
        for rev in (0, 1):
            oe = OEdge(e, rev)
            h = ham.hop_oriented(oe)
            if not h:
                continue
            s, t = g.source(oe), g.target(oe)
            word = alg.kinetic_op(oe)
            for c, w in _projector_expansion(word, alg.parity_op(s), alg.parity_op(t)):
                terms.append((h * c, w))
    for v, nu in ham.potential.items():
        if nu:
            terms.append((0.5 * nu, PauliTerm.identity(alg.n)))
            terms.append((-0.5 * nu, alg.parity_op(v)))
    return PauliSum(alg.n, terms)


def gamma_hamiltonian(
    model: GammaModel, ham: QuadraticHamiltonian, a_field: BitVec | None = None
) -> PauliSum:
    """Bosonized hamiltonian: parity words replace parities, hopping words replace hops."""
    g = model.graph
    terms: list[tuple[complex, PauliTerm]] = []
    for e in range(g.ne):
        twist = -1.0 if (a_field is not None and a_field.get(e)) else 1.0
        for rev in (0, 1):
            oe = OEdge(e, rev)
            h = ham.hop_oriented(oe)
            if not h:
                continue
            s, t = g.source(oe), g.target(oe)
            word = model.kinetic(oe)
            for c, w in _projector_expansion(word, model.gamma_star(s), model.gamma_star(t)):
                terms.append((twist * h * c, w))
    for v, nu in ham.potential.items():
        if nu:
            terms.append((0.5 * nu, PauliTerm.identity(model.n)))
            terms.append((-0.5 * nu, model.gamma_star(v)))
    return PauliSum(model.n, terms)


def constraint_penalty(model: GammaModel, strength: float) -> PauliSum:
    """Penalty J * sum over faces of (1 - constraint word) / 2."""
    g = model.graph
    if g.faces is None:
        raise ValueError("graph has no faces")
    terms: list[tuple[complex, PauliTerm]] = []
    for f in range(len(g.faces)):
        word = model.circuit_op(g.face_circuit(f))
        terms.append((0.5 * strength, PauliTerm.identity(model.n)))
        terms.append((-0.5 * strength, word))
    return PauliSum(model.n, terms)


@dataclass
class SectorSpectrum:
    label: tuple[int, ...]
    parity: int
    exact: list[float]
    oracle: list[float]

    @property
    def max_dev(self) -> float:
        if len(self.exact) != len(self.oracle):
            return float("inf")
        if not self.exact:
            return 0.0
        return float(np.max(np.abs(np.array(self.exact) - np.array(self.oracle))))


@dataclass
class SpectrumReport:
    sectors: list[SectorSpectrum]
    tolerance: float

    @property
    def max_dev(self) -> float:
        return max((s.max_dev for s in self.sectors), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_dev <= self.tolerance

    def failures(self) -> list[SectorSpectrum]:
        return [s for s in self.sectors if s.max_dev > self.tolerance]

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "max_deviation": self.max_dev,
            "ok": self.ok,
            "sectors": [
                {
                    "label": list(s.label),
                    "parity": s.parity,
                    "exact": s.exact,
                    "oracle": s.oracle,
                    "max_deviation": s.max_dev,
                }
                for s in self.sectors
            ],
        }


def spectrum_match(
    model: GammaModel,
    ham: QuadraticHamiltonian,
    labels: list[tuple[int, ...]] | None = None,
    tolerance: float = 1e-9,
) -> SpectrumReport:
    """Diagonalize the bosonized hamiltonian per sector against the oracle.

    Every sector label fixes both the constraint eigenvalues and, through
    the flux-parity relation, the fermion-number parity filter applied to
    the oracle's subset sums.
    """
    k = len(model.cc.circuits)
    if labels is None:
        labels = [model._label_bits(m, k) for m in range(2 ** k)]
    hg = gamma_hamiltonian(model, ham)
    sectors = []
    for label in labels:
        terms = model.constraint_terms(label)
        exact = spectrum(hg, terms)
        a_rep = model.sector_cochain(label)
        par = model.flux_parity_exponent(label)
        oracle = many_body_oracle(model.graph, ham, a_rep, par)
        sectors.append(
            SectorSpectrum(tuple(label), par, [float(x) for x in exact], [float(x) for x in oracle])
        )
    return SpectrumReport(sectors, tolerance)
