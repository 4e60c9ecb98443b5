"""Toroidal lattices and the explicit two-dimensional constraint solver.

Vertices of a d-torus are tuples modulo the side lengths; every vertex
has degree 2d.  In two dimensions with both sides even, the constraint
equations reduce on the fixed-parity subspace to a toric-code problem on
one effective qubit per vertex (the sigma frame), where the reference
and ground states have closed forms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .gamma import GammaModel, OrderingChoice
from .opalg import PauliTerm, SparseState, product, sector_project
from .z2core import BitMat, BitVec, Graph, LatticeError, OEdge


class TorusSizeError(LatticeError):
    """Side length below 3 or parity requirement violated."""


@dataclass(frozen=True)
class TorusSpec:
    """Torus with sizes L[0] x ... x L[d-1], all at least 3."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if not self.sizes or any(L < 3 for L in self.sizes):
            raise TorusSizeError("every side length must be at least 3")

    @property
    def d(self) -> int:
        return len(self.sizes)

    @property
    def nv(self) -> int:
        n = 1
        for L in self.sizes:
            n *= L
        return n

    # -- indexing

    def vertex_index(self, coords: tuple[int, ...]) -> int:
        idx = 0
        stride = 1
        for c, L in zip(coords, self.sizes):
            idx += (c % L) * stride
            stride *= L
        return idx

    def coords(self, index: int) -> tuple[int, ...]:
        out = []
        for L in self.sizes:
            out.append(index % L)
            index //= L
        return tuple(out)

    def translate(self, index: int, direction: int, steps: int = 1) -> int:
        """Shift a vertex by ``steps`` along ``direction`` (0-based)."""
        c = list(self.coords(index))
        c[direction] = (c[direction] + steps) % self.sizes[direction]
        return self.vertex_index(tuple(c))

    def edge_index(self, direction: int, vertex: int) -> int:
        """Edge leaving ``vertex`` in the positive ``direction``."""
        return direction * self.nv + vertex

    def edge_into(self, direction: int, vertex: int) -> int:
        """Edge arriving at ``vertex`` from the negative ``direction``."""
        return self.edge_index(direction, self.translate(vertex, direction, -1))

    def face_pairs(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(self.d), 2))

    def face_index(self, pair: tuple[int, int], vertex: int) -> int:
        p = self.face_pairs().index(pair)
        return p * self.nv + vertex

    def face_corners(self, face: int) -> tuple[int, int, int, int]:
        """Corners counterclockwise from the base vertex: v, v+i, v+i+j, v+j."""
        p, v = divmod(face, self.nv)
        i, j = self.face_pairs()[p]
        return (
            v,
            self.translate(v, i),
            self.translate(self.translate(v, i), j),
            self.translate(v, j),
        )

    def vertex_parity(self, vertex: int) -> int:
        """Even/odd sublattice label: sum of the first two coordinates mod 2."""
        c = self.coords(vertex)
        return (c[0] + c[1]) % 2

    def face_parity(self, face: int) -> int:
        """Parity of the face's base (south-west) corner."""
        return self.vertex_parity(face % self.nv)

    # -- graph construction

    def build(self) -> Graph:
        """Graph with all coordinate plaquettes as faces and direction-paired stars.

        The star at each vertex is ordered (+1, -1, +2, -2, ...), pairing
        the outgoing and incoming edge of every direction.
        """
        n = self.nv
        edges = []
        for i in range(self.d):
            for v in range(n):
                edges.append((v, self.translate(v, i)))
        faces = []
        for (i, j) in self.face_pairs():
            for v in range(n):
                a = v
                b = self.translate(v, i)
                dd = self.translate(v, j)
                faces.append(
                    [
                        self.edge_index(i, a),
                        self.edge_index(j, b),
                        self.edge_index(i, dd),
                        self.edge_index(j, a),
                    ]
                )
        star = {
            v: [
                e
                for i in range(self.d)
                for e in (self.edge_index(i, v), self.edge_into(i, v))
            ]
            for v in range(n)
        }
        return Graph(n, edges, faces, star)


def torus_model(spec: TorusSpec, eta: BitVec | None = None) -> GammaModel:
    g = spec.build()
    return GammaModel(g, OrderingChoice.from_graph(g, eta))


def alpha_formula(spec: TorusSpec, eta: BitVec | None = None) -> int:
    """Closed-form parity sign of the torus model: sum(eta) + sum_i prod_{j!=i} L_j."""
    total = eta.weight() if eta is not None else 0
    for i in range(spec.d):
        prod = 1
        for j, L in enumerate(spec.sizes):
            if j != i:
                prod *= L
        total += prod
    return total % 2


# -- plaquette / loop / wrap operators on the full vertex-Clifford register


def _gamma_dir(model: GammaModel, spec: TorusSpec, v: int, direction: int) -> PauliTerm:
    """Generator for (v, edge in signed direction); +k is 1-based direction k."""
    d = abs(direction) - 1
    e = spec.edge_index(d, v) if direction > 0 else spec.edge_into(d, v)
    return model.gamma(v, e)


def _gamma_pair(model, spec, v, d1, d2) -> PauliTerm:
    return _gamma_dir(model, spec, v, d1) * _gamma_dir(model, spec, v, d2)


def plaquette_op(model: GammaModel, spec: TorusSpec, face: int) -> PauliTerm:
    """Constraint word of a face, written corner by corner.

    Equals the circuit word of the face boundary; the signed-direction
    indices cycle around the corners.
    """
    p = face // spec.nv
    i, j = spec.face_pairs()[p]
    a, b, c, dd = spec.face_corners(face)
    i1, j1 = i + 1, j + 1
    word = (
        _gamma_pair(model, spec, a, i1, j1)
        * _gamma_pair(model, spec, b, j1, -i1)
        * _gamma_pair(model, spec, c, -i1, -j1)
        * _gamma_pair(model, spec, dd, -j1, i1)
    )
    return -word


def loop_op(model: GammaModel, spec: TorusSpec, direction: int, vertex: int) -> PauliTerm:
    """Straight winding-loop constraint word along a 0-based direction."""
    L = spec.sizes[direction]
    word = product(
        [
            _gamma_pair(model, spec, spec.translate(vertex, direction, k),
                        direction + 1, -(direction + 1))
            for k in range(L)
        ],
        model.n,
    )
    return (-word).times_i(L)


def xi_op(model: GammaModel, spec: TorusSpec, direction: int, vertex: int) -> PauliTerm:
    """Wrap operator flipping the matching loop word (d = 2, even sizes)."""
    if spec.d != 2:
        raise TorusSizeError("wrap operators are a two-dimensional construction")
    if any(L % 2 for L in spec.sizes):
        raise TorusSizeError("wrap operators need both sides even")
    other = 1 - direction
    terms = []
    for k in range(spec.sizes[other]):
        v = spec.translate(vertex, other, k)
        sign = -1 if k % 2 else 1
        if direction == 0:
            terms.append(_gamma_pair(model, spec, v, 1, sign * 2))
        else:
            terms.append(_gamma_pair(model, spec, v, sign * 1, 2))
    return product(terms, model.n)


# -- sigma frame: one effective qubit per vertex on the fixed-parity subspace


class SigmaFrame:
    """Per-vertex Pauli triple on the subspace of fixed per-vertex parity.

    sigma3/sigma1 are vertex-local pairs of Clifford generators chosen by
    sublattice parity; on the subspace where every per-vertex parity word
    is (-1)^(eta, v), they satisfy the standard Pauli relations and the
    vertex register reduces to one qubit per site.
    """

    def __init__(self, spec: TorusSpec, eta: BitVec | None = None):
        if spec.d != 2:
            raise TorusSizeError("the sigma frame is a two-dimensional construction")
        if any(L % 2 for L in spec.sizes):
            raise TorusSizeError("the sigma frame needs both sides even")
        self.spec = spec
        self.n = spec.nv
        self.eta = eta if eta is not None else BitVec(spec.nv, 0)

    # frame operators on the reduced register

    def sigma3(self, v: int) -> PauliTerm:
        return PauliTerm.z_op(self.n, v)

    def sigma1(self, v: int) -> PauliTerm:
        return PauliTerm.x_op(self.n, v)

    def sigma2(self, v: int) -> PauliTerm:
        return PauliTerm.y_op(self.n, v)

    # the same operators spelled with Clifford generators on the full register

    def sigma3_full(self, model: GammaModel, v: int) -> PauliTerm:
        if self.spec.vertex_parity(v) == 0:
            return _gamma_pair(model, self.spec, v, 1, 2).times_i(1)
        return _gamma_pair(model, self.spec, v, 1, -2).times_i(1)

    def sigma1_full(self, model: GammaModel, v: int) -> PauliTerm:
        if self.spec.vertex_parity(v) == 0:
            return _gamma_pair(model, self.spec, v, 1, -2).times_i(-1)
        return _gamma_pair(model, self.spec, v, 1, 2).times_i(1)

    def lift(self, model: GammaModel, term: PauliTerm) -> PauliTerm:
        """Rewrite a reduced-register word with full-register generators."""
        if term.n != self.n:
            raise ValueError("term not on the reduced register")
        xs = [self.sigma1_full(model, v) for v in range(self.n) if (term.x >> v) & 1]
        zs = [self.sigma3_full(model, v) for v in range(self.n) if (term.z >> v) & 1]
        return product(xs + zs, model.n).times_i(term.phase)

    def subspace_trivial(self, model: GammaModel, term: PauliTerm) -> bool:
        """True if a full-register word acts as identity on the fixed-parity subspace.

        Such words are exactly the products of (-1)^(eta, v) times the
        per-vertex parity words, which are local Z strings: match the Z
        mask per vertex block, then compare phases exactly.
        """
        if term.x != 0:
            return False
        chosen = []
        for v in range(self.spec.nv):
            block = ((1 << model.block_size[v]) - 1) << model.offset[v]
            zpart = term.z & block
            if zpart == 0:
                continue
            gs = model.gamma_star(v)
            if (gs.z & block) != zpart:
                return False
            sign = -1 if self.eta.get(v) else 1
            chosen.append(gs if sign == 1 else -gs)
        return product(chosen, model.n) == term

    def reduces_to(self, model: GammaModel, full: PauliTerm, reduced: PauliTerm) -> bool:
        """Verify a full-register word equals a reduced word on the subspace."""
        return self.subspace_trivial(model, full * self.lift(model, reduced).inverse())

    # -- reduced forms of the constraint and wrap operators

    def plaquette(self, face: int) -> PauliTerm:
        corners = self.spec.face_corners(face)
        if self.spec.face_parity(face) == 0:
            return product([self.sigma3(v) for v in corners], self.n)
        return product([self.sigma1(v) for v in corners], self.n)

    def loop(self, direction: int, vertex: int) -> PauliTerm:
        if self.spec.vertex_parity(vertex) != 0:
            raise ValueError("reference vertex must be on the even sublattice")
        L = self.spec.sizes[direction]
        word = product(
            [self.sigma2(self.spec.translate(vertex, direction, k)) for k in range(L)],
            self.n,
        )
        return -word

    def xi(self, direction: int, vertex: int) -> PauliTerm:
        if self.spec.vertex_parity(vertex) != 0:
            raise ValueError("reference vertex must be on the even sublattice")
        other = 1 - direction
        L = self.spec.sizes[other]
        word = product(
            [self.sigma3(self.spec.translate(vertex, other, k)) for k in range(L)],
            self.n,
        )
        return word.times_i(2 * ((L // 2) % 2))

    # -- admissible chains and closed-form states

    def even_face_corner_matrix(self) -> BitMat:
        """Rows: corner indicator chains of the even faces."""
        rows = []
        for f in range(len(self.spec.build().faces)):
            if self.spec.face_parity(f) == 0:
                mask = 0
                for v in self.spec.face_corners(f):
                    mask ^= 1 << v
                rows.append(mask)
        return BitMat(len(rows), self.n, rows)

    def admissible_dimension(self) -> int:
        return len(self.even_face_corner_matrix().kernel_basis())

    def admissible_chains(self) -> list[int]:
        """All vertex chains orthogonal to every even-face corner sum."""
        basis = [b.bits for b in self.even_face_corner_matrix().kernel_basis()]
        chains = []
        for combo in range(2 ** len(basis)):
            m = 0
            for i, b in enumerate(basis):
                if (combo >> i) & 1:
                    m ^= b
            chains.append(m)
        return sorted(chains)

    def ref_state(self, max_dim_log2: int = 24) -> SparseState:
        """Equal superposition of admissible chains; solves every face constraint."""
        dim = self.admissible_dimension()
        if dim > max_dim_log2:
            raise TorusSizeError(f"admissible support 2^{dim} exceeds the sparse bound")
        L1, L2 = self.spec.sizes
        amp = 2.0 ** (-(L1 * L2 + 2) / 4.0)
        return SparseState(self.n, {m: amp for m in self.admissible_chains()})

    def ground_state(self) -> SparseState:
        """Unique joint +1 eigenstate of all face and loop constraint words."""
        ref = self.ref_state()
        v0 = 0  # origin, even sublattice
        proj = sector_project(ref, [(self.loop(0, v0), 1), (self.loop(1, v0), 1)])
        return proj.scale(2.0)


def project_constraints(
    state: SparseState, terms: list[tuple[PauliTerm, int]], normalize: bool = True
) -> SparseState:
    """Generic projector route: apply all (1 + sign * word) / 2 factors."""
    out = sector_project(state, terms)
    return out.normalized() if normalize else out


def two_color_product_basis(
    model: GammaModel, shaded: list[int], parity_pattern: BitVec
) -> list[int]:
    """Computational kets solving all shaded face constraints in one parity class.

    Requires star orderings that make every shaded constraint word
    diagonal.  The parity pattern fixes the eigenvalue of each per-vertex
    parity word as (-1)^(pattern, v).
    """
    g = model.graph
    if g.faces is None:
        raise LatticeError("graph has no faces")
    ops = [model.circuit_op(g.face_circuit(f)) for f in shaded]
    for t in ops:
        if t.x != 0:
            raise LatticeError("a shaded constraint word is not diagonal in this layout")
    stars = [model.gamma_star(v) for v in range(g.nv)]
    kets = []
    for bits in range(2 ** model.n):
        if any(
            _diag_eigenvalue(t, bits) != 1 for t in ops
        ):
            continue
        ok = True
        for v, gs in enumerate(stars):
            want = -1 if parity_pattern.get(v) else 1
            if _diag_eigenvalue(gs, bits) != want:
                ok = False
                break
        if ok:
            kets.append(bits)
    return kets


def _diag_eigenvalue(term: PauliTerm, bits: int) -> complex:
    assert term.x == 0
    sign = 1 - 2 * ((term.z & bits).bit_count() & 1)
    return sign * (1j ** term.phase)


def two_color_state(
    model: GammaModel, shaded: list[int], parity_pattern: BitVec | None = None
) -> SparseState:
    """Sum over the white-orbit basis of shaded-solving product states.

    The white constraint words commute and square to one, so the orbit of
    one shaded solution ket under them is a genuine basis of product
    states permuted by every white word; its sum (the white projector
    applied to the seed) satisfies the constraints of both colours.
    """
    g = model.graph
    pattern = parity_pattern if parity_pattern is not None else BitVec(g.nv, 0)
    kets = two_color_product_basis(model, shaded, pattern)
    if not kets:
        raise LatticeError("no product-state solutions in this parity class")
    whites = [f for f in range(len(g.faces)) if f not in shaded]
    seed = SparseState.basis_state(model.n, kets[0])
    proj = sector_project(seed, [(model.circuit_op(g.face_circuit(f)), 1) for f in whites])
    if proj.norm() < 1e-12:
        raise LatticeError("white constraints annihilate this parity class")
    out = proj.normalized()
    solution_set = set(kets)
    if not set(out.amp) <= solution_set:
        raise AssertionError("white orbit left the shaded solution set")
    return out
