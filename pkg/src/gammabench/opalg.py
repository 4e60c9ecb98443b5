"""Phase-exact Pauli-word algebra, sparse states, and spectral solves.

A ``PauliTerm`` stores i^phase * prod_k X_k^{x_k} * prod_k Z_k^{z_k} with
phase tracked mod 4, so products, daggers and commutators are exact
integer arithmetic.  Every operator in this package that is a signed
Pauli word lives in this representation; dense matrices appear only in
oracles and small spectral solves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .z2core import BitVec, GF2Basis, parity


class RegisterMismatchError(ValueError):
    """Operands live on registers of different sizes."""


class InconsistentSectorError(ValueError):
    """Requested joint eigenspace is empty."""


class SizeLimitError(ValueError):
    """Register too large for the requested dense computation."""


DENSE_QUBIT_LIMIT = 12

_I2 = np.eye(2, dtype=complex)
_X2 = np.array([[0, 1], [1, 0]], dtype=complex)
_Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
_XZ2 = _X2 @ _Z2

_PHASES = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class QubitRegister:
    """Fixed layout from abstract slots to qubit indices 0..n-1."""

    n: int
    layout: tuple[tuple[object, int], ...] = ()

    def __post_init__(self):
        qubits = [q for _, q in self.layout]
        if qubits and (sorted(qubits) != list(range(len(qubits))) or len(qubits) > self.n):
            raise ValueError("layout is not a bijection onto an initial segment")

    def qubit(self, slot: object) -> int:
        for s, q in self.layout:
            if s == slot:
                return q
        raise KeyError(slot)

    def slots(self) -> list[object]:
        return [s for s, _ in self.layout]


@dataclass(frozen=True)
class PauliTerm:
    """Signed Pauli word i^phase * X^x * Z^z on an n-qubit register."""

    n: int
    phase: int = 0  # power of i, mod 4
    x: int = 0
    z: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        if self.x >> self.n or self.z >> self.n or self.x < 0 or self.z < 0:
            raise ValueError("mask out of range")

    # -- constructors

    @classmethod
    def identity(cls, n: int) -> "PauliTerm":
        return cls(n)

    @classmethod
    def scalar_term(cls, n: int, phase: int) -> "PauliTerm":
        return cls(n, phase, 0, 0)

    @classmethod
    def x_op(cls, n: int, q: int) -> "PauliTerm":
        return cls(n, 0, 1 << q, 0)

    @classmethod
    def z_op(cls, n: int, q: int) -> "PauliTerm":
        return cls(n, 0, 0, 1 << q)

    @classmethod
    def y_op(cls, n: int, q: int) -> "PauliTerm":
        # Y = i X Z
        return cls(n, 1, 1 << q, 1 << q)

    # -- algebra

    def _check(self, other: "PauliTerm"):
        if self.n != other.n:
            raise RegisterMismatchError(f"{self.n} vs {other.n} qubits")

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        self._check(other)
        phase = self.phase + other.phase + 2 * parity(self.z & other.x)
        return PauliTerm(self.n, phase, self.x ^ other.x, self.z ^ other.z)

    def __neg__(self) -> "PauliTerm":
        return PauliTerm(self.n, self.phase + 2, self.x, self.z)

    def times_i(self, k: int = 1) -> "PauliTerm":
        return PauliTerm(self.n, self.phase + k, self.x, self.z)

    def dagger(self) -> "PauliTerm":
        phase = -self.phase + 2 * parity(self.x & self.z)
        return PauliTerm(self.n, phase, self.x, self.z)

    def inverse(self) -> "PauliTerm":
        # Pauli words are unitary
        return self.dagger()

    def commutes_with(self, other: "PauliTerm") -> int:
        """0 if the words commute, 1 if they anticommute."""
        self._check(other)
        return (parity(self.x & other.z) + parity(self.z & other.x)) & 1

    def is_hermitian(self) -> bool:
        return self.dagger() == self

    def scalar(self) -> complex | None:
        """The complex number this term equals, if it is a scalar."""
        if self.x == 0 and self.z == 0:
            return _PHASES[self.phase]
        return None

    def sign_exponent(self) -> int:
        """For a +/-1 scalar term, the exponent a in (-1)^a."""
        s = self.scalar()
        if s == 1:
            return 0
        if s == -1:
            return 1
        raise ValueError(f"term is not a real sign: {self}")

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def trace(self) -> complex:
        """Exact trace over the full register."""
        if self.x == 0 and self.z == 0:
            return _PHASES[self.phase] * (2 ** self.n)
        return 0.0

    # -- actions

    def apply(self, state: "SparseState") -> "SparseState":
        if state.n != self.n:
            raise RegisterMismatchError(f"{self.n} vs {state.n} qubits")
        ph = _PHASES[self.phase]
        amp = {}
        for s, a in state.amp.items():
            amp[s ^ self.x] = ph * a * (1 - 2 * parity(self.z & s))
        return SparseState(self.n, amp)

    def apply_vec(self, vec: np.ndarray) -> np.ndarray:
        """Action on a dense 2^n vector (basis index bit k = qubit k)."""
        idx = np.arange(vec.shape[0], dtype=np.int64)
        signs = 1 - 2 * (_popcount_array(idx & self.z) & 1)
        out = np.zeros_like(vec, dtype=complex)
        out[idx ^ self.x] = _PHASES[self.phase] * signs * vec
        return out

    def to_matrix(self) -> np.ndarray:
        if self.n > DENSE_QUBIT_LIMIT:
            raise SizeLimitError(f"dense matrix for {self.n} qubits refused")
        m = np.array([[1]], dtype=complex)
        for q in range(self.n - 1, -1, -1):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            local = (_I2, _X2, _Z2, _XZ2)[xb + 2 * zb]
            m = np.kron(m, local)
        return _PHASES[self.phase] * m

    def __repr__(self) -> str:
        parts = []
        for q in range(self.n):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            if xb or zb:
                parts.append(("X", "Z", "XZ")[(xb + 2 * zb) - 1] + str(q))
        body = ".".join(parts) if parts else "1"
        pref = ("+", "+i*", "-", "-i*")[self.phase]
        return f"{pref}{body}"


def pauli_mul(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    return a * b


def commutes(a: PauliTerm, b: PauliTerm) -> int:
    return a.commutes_with(b)


def product(terms: Iterable[PauliTerm], n: int | None = None) -> PauliTerm:
    """Ordered product of Pauli terms."""
    terms = list(terms)
    if not terms:
        if n is None:
            raise ValueError("empty product needs an explicit register size")
        return PauliTerm.identity(n)
    out = terms[0]
    for t in terms[1:]:
        out = out * t
    return out


def _popcount_array(arr: np.ndarray) -> np.ndarray:
    # vectorized popcount for int64 arrays
    out = np.zeros_like(arr)
    work = arr.copy()
    while work.any():
        out += work & 1
        work >>= 1
    return out


class PauliSum:
    """Linear combination of Pauli words with merged, canonically sorted terms."""

    def __init__(self, n: int, terms: Iterable[tuple[complex, PauliTerm]] = ()):
        self.n = n
        acc: dict[tuple[int, int], complex] = {}
        for coeff, term in terms:
            if term.n != n:
                raise RegisterMismatchError("term on wrong register")
            key = (term.x, term.z)
            acc[key] = acc.get(key, 0.0) + coeff * _PHASES[term.phase]
        self.terms: dict[tuple[int, int], complex] = {
            k: v for k, v in sorted(acc.items()) if abs(v) > 1e-14
        }

    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n)

    def items(self) -> list[tuple[complex, PauliTerm]]:
        return [(c, PauliTerm(self.n, 0, x, z)) for (x, z), c in self.terms.items()]

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise RegisterMismatchError("register mismatch")
        return PauliSum(self.n, self.items() + other.items())

    def scale(self, c: complex) -> "PauliSum":
        return PauliSum(self.n, [(c * coeff, t) for coeff, t in self.items()])

    def __mul__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise RegisterMismatchError("register mismatch")
        out = []
        for c1, t1 in self.items():
            for c2, t2 in other.items():
                out.append((c1 * c2, t1 * t2))
        return PauliSum(self.n, out)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        for (x, z), c in self.terms.items():
            want = np.conj(c) * (1 - 2 * parity(x & z))
            if abs(c - want) > tol:
                return False
        return True

    def commutes_with_term(self, term: PauliTerm, tol: float = 1e-12) -> bool:
        """True if [sum, term] = 0 exactly (term a Pauli word)."""
        comm = []
        for c, t in self.items():
            if t.commutes_with(term):
                comm.append((2 * c, t * term))
        return not PauliSum(self.n, comm).terms

    def apply(self, state: "SparseState") -> "SparseState":
        out = SparseState(self.n, {})
        for c, t in self.items():
            out = out.add(t.apply(state).scale(c))
        return out

    def apply_vec(self, vec: np.ndarray) -> np.ndarray:
        idx = np.arange(vec.shape[0], dtype=np.int64)
        out = np.zeros_like(vec, dtype=complex)
        for (x, z), c in self.terms.items():
            signs = 1 - 2 * (_popcount_array(idx & z) & 1)
            out[idx ^ x] += c * signs * vec
        return out

    def to_matrix(self) -> np.ndarray:
        if self.n > DENSE_QUBIT_LIMIT:
            raise SizeLimitError(f"dense matrix for {self.n} qubits refused")
        m = np.zeros((2 ** self.n, 2 ** self.n), dtype=complex)
        for c, t in self.items():
            m += c * t.to_matrix()
        return m

    def __len__(self) -> int:
        return len(self.terms)


class SparseState:
    """State vector as a map from basis bitstrings to amplitudes (qubit 0 = LSB)."""

    def __init__(self, n: int, amp: dict[int, complex] | None = None, prune: float = 1e-14):
        self.n = n
        self.amp = {s: a for s, a in (amp or {}).items() if abs(a) > prune}

    @classmethod
    def basis_state(cls, n: int, bits: int) -> "SparseState":
        return cls(n, {bits: 1.0})

    def add(self, other: "SparseState") -> "SparseState":
        if self.n != other.n:
            raise RegisterMismatchError("register mismatch")
        amp = dict(self.amp)
        for s, a in other.amp.items():
            amp[s] = amp.get(s, 0.0) + a
        return SparseState(self.n, amp)

    def scale(self, c: complex) -> "SparseState":
        return SparseState(self.n, {s: c * a for s, a in self.amp.items()})

    def inner(self, other: "SparseState") -> complex:
        if self.n != other.n:
            raise RegisterMismatchError("register mismatch")
        small, big = (self.amp, other.amp) if len(self.amp) < len(other.amp) else (other.amp, self.amp)
        if small is self.amp:
            return sum(np.conj(a) * big.get(s, 0.0) for s, a in small.items())
        return sum(np.conj(self.amp.get(s, 0.0)) * a for s, a in small.items())

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amp.values())))

    def normalized(self) -> "SparseState":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero state")
        return self.scale(1.0 / nrm)

    def support(self) -> set[int]:
        return set(self.amp)

    def to_vector(self) -> np.ndarray:
        if self.n > 24:
            raise SizeLimitError("dense vector too large")
        v = np.zeros(2 ** self.n, dtype=complex)
        for s, a in self.amp.items():
            v[s] = a
        return v

    def __len__(self) -> int:
        return len(self.amp)


def sector_project(state: SparseState, terms: Sequence[tuple[PauliTerm, int]]) -> SparseState:
    """Apply prod (1 + sign * term) / 2; result left unnormalized."""
    out = state
    for term, sign in terms:
        if term.n != state.n:
            raise RegisterMismatchError("register mismatch")
        out = out.add(term.apply(out).scale(sign)).scale(0.5)
    return out


def _sector_basis_sparse(
    n: int, sector: Sequence[tuple[PauliTerm, int]], expected_dim: int | None = None
) -> list[SparseState]:
    """Orthonormal basis of the joint eigenspace, built by projecting basis kets."""
    basis: list[SparseState] = []
    target = expected_dim
    for bits in range(2 ** n):
        v = sector_project(SparseState.basis_state(n, bits), sector)
        for b in basis:
            v = v.add(b.scale(-b.inner(v)))
        if v.norm() > 1e-9:
            basis.append(v.normalized())
            if target is not None and len(basis) == target:
                break
    return basis


def sector_dimension_from_masks(n: int, sector: Sequence[tuple[PauliTerm, int]]) -> int:
    """Dimension of the joint eigenspace via trace sums over the generated group.

    Exact: traces of Pauli words vanish unless the word is scalar.
    Raises InconsistentSectorError if the sign assignment is contradictory.
    """
    k = len(sector)
    total = 0.0
    for subset in range(2 ** k):
        word = PauliTerm.identity(n)
        sign = 1
        for i in range(k):
            if (subset >> i) & 1:
                word = word * sector[i][0]
                sign *= sector[i][1]
        tr = word.trace()
        total += sign * tr.real
        if abs(sign * tr.imag) > 1e-12:
            raise ValueError("sector terms do not have real joint traces")
    dim = total / 2 ** k
    if abs(dim - round(dim)) > 1e-9:
        raise ValueError("non-integer sector dimension")
    dim = int(round(dim))
    if dim == 0:
        raise InconsistentSectorError("joint eigenspace is empty")
    return dim


def spectrum(
    h: PauliSum,
    sector: Sequence[tuple[PauliTerm, int]] = (),
    k: int | None = None,
    dense_limit: int = DENSE_QUBIT_LIMIT,
) -> np.ndarray:
    """Sorted eigenvalues of a hermitian Pauli sum, optionally sector-restricted.

    With a sector, an orthonormal basis of the joint eigenspace is built by
    sparse projection and the restriction of h is diagonalized there.  Above
    the dense limit without a sector, matrix-free Lanczos returns the k
    extreme eigenvalues instead of the full spectrum.
    """
    if not h.is_hermitian():
        raise ValueError("hamiltonian is not hermitian")
    n = h.n
    for term, sign in sector:
        if sign not in (1, -1):
            raise ValueError("sector signs must be +1 or -1")
        if not h.commutes_with_term(term):
            raise ValueError("sector term does not commute with the hamiltonian")
    if sector:
        dim = sector_dimension_from_masks(n, sector)
        basis = _sector_basis_sparse(n, sector, expected_dim=dim)
        if len(basis) != dim:
            raise InconsistentSectorError(
                f"found {len(basis)} basis vectors, expected {dim}"
            )
        hb = [h.apply(b) for b in basis]
        sub = np.array([[bi.inner(hj) for hj in hb] for bi in basis])
        return np.sort(np.linalg.eigvalsh(sub))
    if n <= dense_limit:
        return np.sort(np.linalg.eigvalsh(h.to_matrix()))
    if k is None:
        raise SizeLimitError(
            f"full spectrum on {n} qubits needs a sector or an eigenvalue count k"
        )
    dim = 2 ** n
    op = LinearOperator((dim, dim), matvec=h.apply_vec, dtype=complex)
    vals = eigsh(op, k=k, which="SA", return_eigenvectors=False)
    return np.sort(vals)


# -- dense oracle helpers (test support)


def dense_commutator_is_zero(a: PauliTerm, b: PauliTerm, tol: float = 1e-12) -> bool:
    am, bm = a.to_matrix(), b.to_matrix()
    return bool(np.allclose(am @ bm - bm @ am, 0.0, atol=tol))
