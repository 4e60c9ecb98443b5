"""GF(2) quadratic forms, symplectic bases, the Arf invariant, and central
extensions realized by Pauli words.

A quadratic form is stored by its values on a basis plus the Gram matrix
of its polar form.  The sign-extension groups carry generators that
square to a central sign and braid by the polar form; with Arf zero the
standard representation puts Z and X words on a canonical basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opalg import PauliTerm, product
from .z2core import BitMat, BitVec, GF2Basis, parity


class SingularFormError(ValueError):
    """Polar form is degenerate."""


class NotAnIsometryError(ValueError):
    """Linear map does not preserve the quadratic form."""


@dataclass(frozen=True)
class QuadraticFormZ2:
    """Quadratic form on GF(2)^dim with polar Gram matrix ``gram``.

    gram rows are int masks; diag[i] is the value on basis vector i.
    The polar form of a quadratic form is automatically alternating, so
    the diagonal of ``gram`` must vanish.
    """

    dim: int
    diag: tuple[int, ...]
    gram: tuple[int, ...]

    def __post_init__(self):
        if len(self.diag) != self.dim or len(self.gram) != self.dim:
            raise ValueError("dimension mismatch")
        for i, row in enumerate(self.gram):
            if (row >> i) & 1:
                raise ValueError("polar form must be alternating")
            for j in range(self.dim):
                if ((row >> j) & 1) != ((self.gram[j] >> i) & 1):
                    raise ValueError("polar form must be symmetric")

    def omega(self, x: int, y: int) -> int:
        """Polar form on packed vectors."""
        acc = 0
        xx = x
        while xx:
            i = (xx & -xx).bit_length() - 1
            acc ^= parity(self.gram[i] & y)
            xx &= xx - 1
        return acc

    def q(self, x: int) -> int:
        """Quadratic value: diagonal terms plus cross terms of the polar form."""
        idx = []
        xx = x
        while xx:
            idx.append((xx & -xx).bit_length() - 1)
            xx &= xx - 1
        val = 0
        for a, i in enumerate(idx):
            val ^= self.diag[i]
            for j in idx[a + 1:]:
                val ^= (self.gram[i] >> j) & 1
        return val

    def is_nonsingular(self) -> bool:
        return BitMat(self.dim, self.dim, list(self.gram)).rank() == self.dim

    def zero_count(self) -> int:
        """Number of vectors on which the form vanishes (enumeration)."""
        if self.dim > 22:
            raise ValueError("enumeration bound exceeded")
        return sum(1 for x in range(2 ** self.dim) if self.q(x) == 0)


def symplectic_basis(form: QuadraticFormZ2) -> list[tuple[int, int]]:
    """Hyperbolic pairs (e_i, f_i) with the canonical pairing, greedily chosen.

    Deterministic: each pivot is the lowest remaining basis direction.
    """
    if not form.is_nonsingular():
        raise SingularFormError("polar form is degenerate")
    remaining = [1 << i for i in range(form.dim)]
    pairs: list[tuple[int, int]] = []
    while remaining:
        e = remaining.pop(0)
        partner = next((y for y in remaining if form.omega(e, y) == 1), None)
        if partner is None:
            raise SingularFormError("no symplectic partner found")
        remaining.remove(partner)
        f = partner
        reduced = []
        for y in remaining:
            y ^= form.omega(y, f) * e ^ form.omega(y, e) * f
            if y:
                reduced.append(y)
        remaining = reduced
        pairs.append((e, f))
    return pairs


def arf(form: QuadraticFormZ2) -> int:
    """Arf invariant via a canonical basis: parity of the hyperbolic-pair products."""
    pairs = symplectic_basis(form)
    return sum(form.q(e) & form.q(f) for e, f in pairs) % 2


def arf_zero_count_check(form: QuadraticFormZ2) -> bool:
    """Zero counting agrees with the canonical-form invariant."""
    n = form.dim // 2
    zeros = form.zero_count()
    return zeros == 2 ** (form.dim - 1) + (-1) ** arf(form) * 2 ** (n - 1)


def isotropic_canonical_basis(form: QuadraticFormZ2) -> list[tuple[int, int]]:
    """Hyperbolic pairs with vanishing form values (needs Arf 0).

    Pairs with a single nonzero value are fixed inside their own plane;
    doubly-odd pairs are fixed two at a time by a small search in their
    four-dimensional span.
    """
    pairs = symplectic_basis(form)
    fixed: list[tuple[int, int]] = []
    odd: list[tuple[int, int]] = []
    for e, f in pairs:
        qe, qf = form.q(e), form.q(f)
        if (qe, qf) == (0, 0):
            fixed.append((e, f))
        elif (qe, qf) == (1, 0):
            fixed.append((f, e ^ f))
        elif (qe, qf) == (0, 1):
            fixed.append((e, e ^ f))
        else:
            odd.append((e, f))
    if len(odd) % 2:
        raise ValueError("Arf invariant is 1; no isotropic canonical basis")
    for k in range(0, len(odd), 2):
        e1, f1 = odd[k]
        e2, f2 = odd[k + 1]
        span = [e1, f1, e2, f2]
        vectors = []
        for mask in range(1, 16):
            v = 0
            for b in range(4):
                if (mask >> b) & 1:
                    v ^= span[b]
            vectors.append(v)
        found = None
        for u in vectors:
            if form.q(u):
                continue
            for w in vectors:
                if form.q(w) == 0 and form.omega(u, w) == 1:
                    found = (u, w)
                    break
            if found:
                break
        assert found is not None
        u, w = found
        rest = [v for v in vectors if form.omega(v, u) == 0 and form.omega(v, w) == 0]
        pair2 = None
        for a in rest:
            if form.q(a):
                continue
            for b in rest:
                if form.q(b) == 0 and form.omega(a, b) == 1:
                    pair2 = (a, b)
                    break
            if pair2:
                break
        assert pair2 is not None
        fixed.append((u, w))
        fixed.append(pair2)
    return fixed


@dataclass
class HeisenbergPresentation:
    """Pauli-word realization of the sign extension of a quadratic space.

    ``generators[i]`` represents basis vector i; the central element acts
    as -1.  ``coords`` maps a packed vector onto the canonical pairs used
    to build the words.
    """

    form: QuadraticFormZ2
    n_qubits: int
    generators: list[PauliTerm]
    pairs: list[tuple[int, int]]

    def word(self, x: int) -> PauliTerm:
        """A lift of a packed vector: ordered product of the basis generators."""
        terms = [self.generators[i] for i in range(self.form.dim) if (x >> i) & 1]
        return product(terms, self.n_qubits)

    def group_elements(self) -> list[PauliTerm]:
        return [self.word(x) for x in range(2 ** self.form.dim)]


def standard_rep(form: QuadraticFormZ2) -> HeisenbergPresentation:
    """Faithful irreducible sign-extension representation on n qubits (Arf 0).

    Canonical-pair coordinates become Z and X words; squares and braidings
    then reproduce the form exactly.
    """
    if arf(form) != 0:
        raise ValueError("standard representation as built here needs Arf 0")
    pairs = isotropic_canonical_basis(form)
    n = len(pairs)
    # coordinates of each basis vector in the canonical pair basis
    cols = []
    for e, f in pairs:
        cols.extend([e, f])
    mat = BitMat.from_columns(form.dim, cols)
    gens = []
    for i in range(form.dim):
        sol = mat.solve(BitVec(form.dim, 1 << i))
        assert sol is not None
        x = z = 0
        for k in range(n):
            if sol.get(2 * k):
                z |= 1 << k
            if sol.get(2 * k + 1):
                x |= 1 << k
        gens.append(PauliTerm(n, 0, x, z))
    return HeisenbergPresentation(form, n, gens, pairs)


def verify_presentation(rep: HeisenbergPresentation) -> bool:
    """Exact relation table: squares give the form, braidings give its polar."""
    form = rep.form
    for i, ti in enumerate(rep.generators):
        if (ti * ti).scalar() != (-1) ** form.diag[i]:
            return False
        for j in range(i + 1, form.dim):
            want = (form.gram[i] >> j) & 1
            if ti.commutes_with(rep.generators[j]) != want:
                return False
    return True


def commutant_dimension(rep: HeisenbergPresentation) -> int:
    """Dimension of the commutant: group average of |trace|^2, computed exactly.

    Both central lifts of a vector contribute the same squared trace, so
    the sum runs over vectors with a factor two.
    """
    total = 0.0
    for g in rep.group_elements():
        total += 2 * abs(g.trace()) ** 2
    order = 2 ** (rep.form.dim + 1)
    return int(round(total / order))


def isometry_check(form: QuadraticFormZ2, phi: list[int]) -> None:
    """phi[i] = image mask of basis vector i; must preserve the form."""
    if len(phi) != form.dim:
        raise NotAnIsometryError("dimension mismatch")
    if BitMat(form.dim, form.dim, list(phi)).rank() != form.dim:
        raise NotAnIsometryError("map is not invertible")
    for x in range(form.dim):
        if form.q(phi[x]) != form.diag[x]:
            raise NotAnIsometryError(f"value not preserved on basis vector {x}")
        for y in range(x + 1, form.dim):
            if form.omega(phi[x], phi[y]) != (form.gram[x] >> y) & 1:
                raise NotAnIsometryError(f"pairing not preserved on ({x}, {y})")


def apply_linear(phi: list[int], x: int) -> int:
    out = 0
    i = 0
    while x:
        if x & 1:
            out ^= phi[i]
        x >>= 1
        i += 1
    return out


def lift_isometry(form: QuadraticFormZ2, phi: list[int], rep: HeisenbergPresentation | None = None,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Unitary intertwiner between the representation and its isometry twist.

    Found by group-averaging a random seed matrix, which projects onto the
    one-dimensional intertwiner space; the phase is fixed by making the
    first nonzero entry positive real.
    """
    isometry_check(form, phi)
    rep = rep if rep is not None else standard_rep(form)
    if rep.n_qubits > 4:
        raise ValueError("dense intertwiner solve bound exceeded")
    rng = rng if rng is not None else np.random.default_rng(0)
    dim = 2 ** rep.n_qubits
    gen_images = [rep.word(apply_linear(phi, 1 << i)) for i in range(form.dim)]

    def image_word(x: int) -> PauliTerm:
        # homomorphism lift: ordered product of the generator images
        return product(
            [gen_images[i] for i in range(form.dim) if (x >> i) & 1], rep.n_qubits
        )

    seed = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    acc = np.zeros((dim, dim), dtype=complex)
    for x in range(2 ** form.dim):
        gm = rep.word(x).to_matrix()
        gm_t = image_word(x).to_matrix()
        acc += gm_t @ seed @ gm.conj().T
    if np.allclose(acc, 0.0, atol=1e-9):
        raise RuntimeError("group average vanished; retry with another seed")
    # Schur: acc is proportional to a unitary
    gram = acc.conj().T @ acc
    scale = np.sqrt(gram[0, 0].real)
    u = acc / scale
    if not np.allclose(u.conj().T @ u, np.eye(dim), atol=1e-8):
        raise RuntimeError("intertwiner is not unitary")
    flat = u.flatten()
    first = flat[np.argmax(np.abs(flat) > 1e-9)]
    u = u * (abs(first) / first)
    return u


def verify_intertwiner(form: QuadraticFormZ2, phi: list[int], u: np.ndarray,
                       rep: HeisenbergPresentation) -> bool:
    """Conjugation by u must send every generator to its image word exactly."""
    for i in range(form.dim):
        lhs = u @ rep.generators[i].to_matrix() @ u.conj().T
        rhs = rep.word(apply_linear(phi, 1 << i)).to_matrix()
        if not np.allclose(lhs, rhs, atol=1e-8):
            return False
    return True


def random_nonsingular_form(dim: int, rng: np.random.Generator) -> QuadraticFormZ2:
    """Random quadratic form with invertible polar Gram matrix."""
    while True:
        gram = [0] * dim
        for i in range(dim):
            for j in range(i + 1, dim):
                if rng.integers(2):
                    gram[i] |= 1 << j
                    gram[j] |= 1 << i
        form = QuadraticFormZ2(dim, tuple(int(rng.integers(2)) for _ in range(dim)), tuple(gram))
        if form.is_nonsingular():
            return form


def gauge_relations_form(gauge, model, circuit=None):
    """Quadratic form carried by the gauge-invariant generators, with witness.

    Builds the form from exact squares and braidings of the generator
    words, then exhibits an isotropic subspace of half dimension: the
    corner word together with the electric pair words.
    """
    from .gauge import gauge_invariant_generators
    from .z2core import eulerian_circuit

    g = gauge.graph
    circuit = circuit if circuit is not None else eulerian_circuit(g)
    gens = gauge_invariant_generators(gauge, circuit)
    words = gens.hop + gens.electric + [gens.corner]
    dim = len(words)
    diag = []
    for w in words:
        sq = (w * w).scalar()
        diag.append(0 if sq == 1 else 1)
    gram = [0] * dim
    for i in range(dim):
        for j in range(i + 1, dim):
            if words[i].commutes_with(words[j]):
                gram[i] |= 1 << j
                gram[j] |= 1 << i
    form = QuadraticFormZ2(dim, tuple(diag), tuple(gram))
    ne = g.ne
    witness = [1 << (dim - 1)] + [1 << (ne + i) for i in range(ne - 1)]
    return form, witness, words


def is_isotropic(form: QuadraticFormZ2, vectors: list[int]) -> bool:
    """The whole GF(2) span of the vectors has vanishing form values."""
    basis = GF2Basis()
    for v in vectors:
        basis.add(v)
    span = [0]
    for b in basis.rows:
        span = span + [s ^ b for s in span]
    return all(form.q(s) == 0 for s in span)
