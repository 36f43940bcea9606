"""Pauli-string Hamiltonians: parsing, expectation values and dense oracles.

Text format, one term per line::

    # comment
    0.4 ZI
    0.4 IZ
    0.2 XX

Qubit 0 is the leftmost character, which is also the most significant bit
of a basis-state index (``kron`` ordering).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

PAULI_CHARS = frozenset("IXYZ")
MAX_DENSE_QUBITS = 12

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class HamiltonianParseError(ValueError):
    """Raised for malformed Hamiltonian text."""


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    paulis: str

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise ValueError(f"coefficient must be finite, got {self.coefficient}")
        if not self.paulis or set(self.paulis) - PAULI_CHARS:
            raise ValueError(f"invalid Pauli string {self.paulis!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.paulis)

    def masks(self) -> tuple[int, int, int]:
        """Return ``(flip_mask, sign_mask, n_y)`` in big-endian bit order."""
        n = len(self.paulis)
        flip = sign = 0
        n_y = 0
        for q, p in enumerate(self.paulis):
            bit = 1 << (n - 1 - q)
            if p in "XY":
                flip |= bit
            if p in "YZ":
                sign |= bit
            if p == "Y":
                n_y += 1
        return flip, sign, n_y


@dataclass(frozen=True)
class Hamiltonian:
    n_qubits: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if not self.terms:
            raise ValueError("a Hamiltonian needs at least one term")
        for term in self.terms:
            if term.n_qubits != self.n_qubits:
                raise ValueError(
                    f"term {term.paulis!r} acts on {term.n_qubits} qubits, "
                    f"expected {self.n_qubits}"
                )

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[float, str]]) -> "Hamiltonian":
        terms = [PauliTerm(float(c), p) for c, p in terms]
        if not terms:
            raise ValueError("a Hamiltonian needs at least one term")
        return cls(terms[0].n_qubits, tuple(terms))

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coefficient for t in self.terms])

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "Hamiltonian") -> "Hamiltonian":
        if not isinstance(other, Hamiltonian):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit counts differ")
        return Hamiltonian(self.n_qubits, self.terms + other.terms)

    def __mul__(self, scalar: float) -> "Hamiltonian":
        scalar = float(scalar)
        return Hamiltonian(
            self.n_qubits,
            tuple(PauliTerm(scalar * t.coefficient, t.paulis) for t in self.terms),
        )

    __rmul__ = __mul__

    def canonicalize(self) -> "Hamiltonian":
        """Merge duplicate Pauli strings, keeping first-occurrence order."""
        merged: dict[str, float] = {}
        for term in self.terms:
            merged[term.paulis] = merged.get(term.paulis, 0.0) + term.coefficient
        return Hamiltonian(
            self.n_qubits, tuple(PauliTerm(c, p) for p, c in merged.items())
        )

    def to_text(self) -> str:
        # repr() gives the shortest round-trippable float
        return "".join(f"{t.coefficient!r} {t.paulis}\n" for t in self.terms)


def parse_hamiltonian(text: str) -> Hamiltonian:
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise HamiltonianParseError(
                f"line {lineno}: expected '<coefficient> <pauli-string>', got {raw!r}"
            )
        coeff_text, paulis = fields
        try:
            coeff = float(coeff_text)
        except ValueError:
            raise HamiltonianParseError(
                f"line {lineno}: malformed coefficient {coeff_text!r} "
                "(only real coefficients are accepted)"
            ) from None
        if not math.isfinite(coeff):
            raise HamiltonianParseError(f"line {lineno}: coefficient is not finite")
        paulis = paulis.upper()
        bad = set(paulis) - PAULI_CHARS
        if bad:
            raise HamiltonianParseError(
                f"line {lineno}: invalid Pauli characters {''.join(sorted(bad))!r}"
            )
        if terms and len(paulis) != len(terms[0].paulis):
            raise HamiltonianParseError(
                f"line {lineno}: Pauli string length {len(paulis)} is inconsistent "
                f"with {len(terms[0].paulis)}"
            )
        terms.append(PauliTerm(coeff, paulis))
    if not terms:
        raise HamiltonianParseError("no terms found")
    return Hamiltonian(len(terms[0].paulis), tuple(terms))


def load_hamiltonian(path) -> Hamiltonian:
    with open(path, encoding="utf-8") as fh:
        return parse_hamiltonian(fh.read())


def _parity_signs(idx: np.ndarray, mask: int) -> np.ndarray:
    """(-1)**popcount(idx & mask) as floats."""
    odd = np.bitwise_count(idx & mask) & 1
    return 1.0 - 2.0 * odd


def apply_pauli(term: PauliTerm, psi: np.ndarray) -> np.ndarray:
    """Return ``P|psi>`` (without the coefficient) using bit masks."""
    flip, sign, n_y = term.masks()
    idx = np.arange(psi.shape[0])
    phase = (1j) ** n_y * _parity_signs(idx, sign)
    out = np.empty_like(psi)
    out[idx ^ flip] = phase * psi
    return out


def _check_state(psi: np.ndarray, n_qubits: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.shape[0] != 1 << n_qubits:
        raise ValueError(
            f"state of shape {psi.shape} does not match {n_qubits} qubits"
        )
    norm = np.vdot(psi, psi).real
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"state is not normalized (norm^2 = {norm})")
    return psi


def expectation(h: Hamiltonian, psi: np.ndarray) -> float:
    psi = _check_state(psi, h.n_qubits)
    idx = np.arange(psi.shape[0])
    total = 0j
    # fixed term order keeps the sum bit-reproducible
    for term in h.terms:
        flip, sign, n_y = term.masks()
        parity = _parity_signs(idx, sign)
        value = (1j) ** n_y * np.sum(np.conj(psi[idx ^ flip]) * parity * psi)
        total += term.coefficient * value
    if abs(total.imag) > 1e-10:
        raise ArithmeticError(f"expectation has imaginary part {total.imag}")
    return float(total.real)


def pauli_matrix(paulis: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for p in paulis:
        out = np.kron(out, _PAULI_MATRICES[p])
    return out


def dense_matrix(h: Hamiltonian) -> np.ndarray:
    if h.n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(
            f"dense matrix limited to {MAX_DENSE_QUBITS} qubits, got {h.n_qubits}"
        )
    dim = 1 << h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for term in h.terms:
        out += term.coefficient * pauli_matrix(term.paulis)
    return out


def spectrum(h: Hamiltonian) -> np.ndarray:
    """All eigenvalues of ``h`` in ascending order."""
    return np.linalg.eigvalsh(dense_matrix(h))


def ground_energy_exact(h: Hamiltonian) -> float:
    return float(spectrum(h)[0])


def tfim_hamiltonian(n: int, coupling: float = 1.0, field: float = 1.0) -> Hamiltonian:
    """Open-chain transverse-field Ising model ``sum ZZ + sum X``."""
    if n < 2:
        raise ValueError("TFIM needs at least 2 qubits")
    terms: list[tuple[float, str]] = []
    for i in range(n - 1):
        terms.append((coupling, "I" * i + "ZZ" + "I" * (n - i - 2)))
    for i in range(n):
        terms.append((field, "I" * i + "X" + "I" * (n - i - 1)))
    return Hamiltonian.from_terms(terms)


def h2_hamiltonian(alpha: float = 0.4, beta: float = 0.2) -> Hamiltonian:
    return Hamiltonian.from_terms([(alpha, "ZI"), (alpha, "IZ"), (beta, "XX")])

