"""Exact quantum-mechanical reference for 2x2 and 3x3 Hermitian observables.

Operator bases (Pauli, Gell-Mann, and the spin-1 angular-momentum set
extended to eight traceless Hermitian operators), an in-repo Jacobi
eigensolver, Born outcome distributions, expectation values, variances,
generalized Bloch vectors and the spin-1 squares identity
Sx^2 + Sy^2 + Sz^2 = 2*I.

Everything here is a pure function of immutable inputs; downstream
modules treat this as the ground truth their deterministic outcome
models must reproduce.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PAULI",
    "GELL_MANN",
    "ANGULAR_MOMENTUM",
    "BASIS_KINDS",
    "OperatorBasis",
    "QuantumState",
    "BornDistribution",
    "KsIdentityReport",
    "SimultaneousEigenvector",
    "require_hermitian",
    "build_basis",
    "linear_observable",
    "spectral_decompose",
    "born_distribution",
    "expectation",
    "variance",
    "bloch_vector",
    "verify_ks_identity",
    "simultaneous_eigenbasis",
    "random_pure_state",
]

PAULI = "pauli"
GELL_MANN = "gell-mann"
ANGULAR_MOMENTUM = "angular-momentum"
BASIS_KINDS = (PAULI, GELL_MANN, ANGULAR_MOMENTUM)

HERMITIAN_TOL = 1e-12
DEGENERACY_TOL = 1e-8


def require_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return the matrix as a complex array, raising if it is not Hermitian."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("operator must be a square matrix")
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError("operator is not Hermitian")
    return m


def _pauli_matrices() -> np.ndarray:
    return np.array(
        [
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=complex,
    )


def _gell_mann_matrices() -> np.ndarray:
    s3 = np.sqrt(3.0)
    return np.array(
        [
            [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
            [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
            [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
            [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
            [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
            [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
            [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
            [[1 / s3, 0, 0], [0, 1 / s3, 0], [0, 0, -2 / s3]],
        ],
        dtype=complex,
    )


def _angular_momentum_matrices() -> np.ndarray:
    g = _gell_mann_matrices()
    s2 = np.sqrt(2.0)
    s3 = np.sqrt(3.0)
    return np.stack(
        [
            (g[0] + g[5]) / s2,
            (g[1] + g[6]) / s2,
            (s3 * g[7] + g[2]) / 2.0,
            (g[0] - g[5]) / s2,
            (g[1] - g[6]) / s2,
            (s3 * g[7] - g[2]) / 2.0,
            g[3],
            g[4],
        ]
    )


def _structure_constants(ops: np.ndarray, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Expansion coefficients of commutators and anticommutators.

    [T_i, T_j] = 2i * sum_k f_ijk T_k and
    {T_i, T_j} = (2/dim) Tr(T_i T_j) I + 2 * sum_k d_ijk T_k.
    Solved through the Gram matrix so the non-orthogonal angular-momentum
    set is handled the same way as the trace-orthogonal bases.
    """
    size = len(ops)
    gram = np.einsum("aij,bji->ab", ops, ops).real
    eye = np.eye(dim)
    f = np.zeros((size, size, size))
    d = np.zeros((size, size, size))
    for i in range(size):
        for j in range(size):
            prod = ops[i] @ ops[j]
            prod_t = ops[j] @ ops[i]
            comm = prod - prod_t
            rhs_f = (np.einsum("ij,kji->k", comm, ops) / 2j).real
            f[i, j] = np.linalg.solve(gram, rhs_f)
            anti = prod + prod_t
            anti = anti - (np.trace(anti) / dim) * eye
            rhs_d = np.einsum("ij,kji->k", anti, ops).real / 2.0
            d[i, j] = np.linalg.solve(gram, rhs_d)
    return f, d


@dataclass(frozen=True)
class OperatorBasis:
    """A set of traceless Hermitian operators with structure constants."""

    kind: str
    operators: np.ndarray
    f: np.ndarray
    d: np.ndarray

    @property
    def dim(self) -> int:
        return self.operators.shape[1]

    @property
    def size(self) -> int:
        return self.operators.shape[0]


def build_basis(kind: str) -> OperatorBasis:
    """Construct one of the named operator bases with f and d recomputed
    from its commutators and anticommutators."""
    if kind == PAULI:
        ops = _pauli_matrices()
    elif kind == GELL_MANN:
        ops = _gell_mann_matrices()
    elif kind == ANGULAR_MOMENTUM:
        ops = _angular_momentum_matrices()
    else:
        raise ValueError(f"unknown basis kind: {kind!r}")
    dim = ops.shape[1]
    f, d = _structure_constants(ops, dim)
    ops = ops.copy()
    ops.setflags(write=False)
    f.setflags(write=False)
    d.setflags(write=False)
    return OperatorBasis(kind=kind, operators=ops, f=f, d=d)


def linear_observable(coeffs, basis: OperatorBasis) -> np.ndarray:
    """Real linear combination of basis operators.

    For the angular-momentum basis a length-3 coefficient vector selects
    the three spin components.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.shape == (basis.size,):
        full = c
    elif basis.kind == ANGULAR_MOMENTUM and c.shape == (3,):
        full = np.zeros(basis.size)
        full[:3] = c
    else:
        raise ValueError(f"expected {basis.size} coefficients, got shape {c.shape}")
    return np.einsum("k,kij->ij", full, basis.operators)


def _jacobi_rotation(work: np.ndarray, vecs: np.ndarray, p: int, q: int) -> None:
    b = work[p, q]
    mag = abs(b)
    if mag == 0.0:
        return
    phase = b / mag
    app = work[p, p].real
    aqq = work[q, q].real
    tau = (aqq - app) / (2.0 * mag)
    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    dim = work.shape[0]
    rot = np.eye(dim, dtype=complex)
    rot[p, p] = c
    rot[p, q] = s
    rot[q, p] = -np.conj(phase) * s
    rot[q, q] = np.conj(phase) * c
    work[:, :] = rot.conj().T @ work @ rot
    vecs[:, :] = vecs @ rot


def spectral_decompose(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of a
    Hermitian matrix via cyclic complex Jacobi rotations.

    Returns (values, vectors) with vectors[:, k] the unit eigenvector of
    values[k].  Eigenvector phases are fixed so the largest-magnitude
    component is real and nonnegative, keeping output deterministic.
    """
    h = require_hermitian(matrix)
    dim = h.shape[0]
    scale = max(float(np.linalg.norm(h)), 1.0)
    work = h.copy()
    vecs = np.eye(dim, dtype=complex)
    for _ in range(100):
        off = np.sqrt(sum(abs(work[p, q]) ** 2 for p in range(dim) for q in range(p + 1, dim)))
        if off <= 1e-15 * scale:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                if abs(work[p, q]) > 1e-18 * scale:
                    _jacobi_rotation(work, vecs, p, q)
    values = np.diag(work).real.copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vecs = vecs[:, order]
    for k in range(dim):
        lead = int(np.argmax(np.abs(vecs[:, k])))
        pivot = vecs[lead, k]
        if abs(pivot) > 0.0:
            vecs[:, k] *= np.conj(pivot) / abs(pivot)
    residual = np.max(np.abs(h @ vecs - vecs @ np.diag(values)))
    if residual > 1e-9 * scale:
        raise RuntimeError(f"eigensolver residual {residual:.3e} too large")
    return values, vecs


@dataclass(frozen=True)
class QuantumState:
    """A pure or mixed state stored as its density matrix."""

    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @classmethod
    def from_pure(cls, amplitudes) -> "QuantumState":
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm_sq = float(np.sum(np.abs(vec) ** 2))
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"pure state must be normalised, |psi|^2 = {norm_sq}")
        rho = np.outer(vec, vec.conj())
        rho.setflags(write=False)
        return cls(rho=rho)

    @classmethod
    def from_density(cls, rho) -> "QuantumState":
        mat = require_hermitian(rho)
        if abs(np.trace(mat).real - 1.0) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        smallest = spectral_decompose(mat)[0][-1]
        if smallest < -1e-12:
            raise ValueError(f"density matrix has negative eigenvalue {smallest}")
        mat = mat.copy()
        mat.setflags(write=False)
        return cls(rho=mat)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "QuantumState":
        rho = np.eye(dim, dtype=complex) / dim
        rho.setflags(write=False)
        return cls(rho=rho)


def _check_dims(matrix: np.ndarray, state: QuantumState) -> None:
    if matrix.shape[0] != state.dim:
        raise ValueError(f"operator dimension {matrix.shape[0]} != state dimension {state.dim}")


@dataclass(frozen=True)
class BornDistribution:
    """Measurement outcomes (degenerate eigenvalues merged) and their
    Born probabilities, outcomes sorted descending."""

    outcomes: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probabilities, dtype=float)
        if np.any(probs < -1e-10) or np.any(probs > 1.0 + 1e-10):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise ValueError("probabilities must sum to 1")

    @property
    def mean(self) -> float:
        return float(np.dot(self.outcomes, self.probabilities))

    @property
    def second_moment(self) -> float:
        return float(np.dot(np.square(self.outcomes), self.probabilities))


def born_distribution(
    matrix, state: QuantumState, merge_tol: float = DEGENERACY_TOL
) -> BornDistribution:
    """Born rule: outcome probabilities are traces of the state against
    the eigenprojectors, with eigenvalues within ``merge_tol`` merged
    into a single outcome."""
    h = require_hermitian(matrix)
    _check_dims(h, state)
    values, vecs = spectral_decompose(h)
    slot_probs = np.einsum("ik,ij,jk->k", vecs.conj(), state.rho, vecs).real
    slot_probs = np.where(np.abs(slot_probs) < 1e-14, 0.0, slot_probs)

    outcomes: list[float] = []
    probs: list[float] = []
    start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[start] - values[k] > merge_tol:
            group = slice(start, k)
            outcomes.append(float(np.mean(values[group])))
            probs.append(float(np.sum(slot_probs[group])))
            start = k
    out = np.asarray(outcomes)
    pr = np.clip(np.asarray(probs), 0.0, None)
    out.setflags(write=False)
    pr.setflags(write=False)
    return BornDistribution(outcomes=out, probabilities=pr)


def expectation(matrix, state: QuantumState) -> float:
    """Trace of the state against the observable."""
    h = require_hermitian(matrix)
    _check_dims(h, state)
    return float(np.trace(state.rho @ h).real)


def variance(matrix, state: QuantumState) -> float:
    """Second moment minus squared mean, both computed as traces."""
    h = require_hermitian(matrix)
    _check_dims(h, state)
    mean = float(np.trace(state.rho @ h).real)
    second = float(np.trace(state.rho @ h @ h).real)
    return second - mean * mean


def bloch_vector(state: QuantumState, basis: OperatorBasis) -> np.ndarray:
    """Expectation value of every basis operator (the generalized Bloch
    vector labelling the state)."""
    if basis.dim != state.dim:
        raise ValueError("basis and state dimensions differ")
    return np.einsum("ij,kji->k", state.rho, basis.operators).real


@dataclass(frozen=True)
class KsIdentityReport:
    holds: bool
    residual: float


def verify_ks_identity(basis: OperatorBasis) -> KsIdentityReport:
    """Whether the first three basis operators satisfy
    T1^2 + T2^2 + T3^2 = 2*I (true for the angular-momentum set,
    false for the Gell-Mann set)."""
    squares = sum(op @ op for op in basis.operators[:3])
    residual = float(np.linalg.norm(squares - 2.0 * np.eye(basis.dim)))
    return KsIdentityReport(holds=residual < 1e-12, residual=residual)


@dataclass(frozen=True)
class SimultaneousEigenvector:
    """One common eigenvector of Sx^2, Sy^2, Sz^2 with its eigenvalue
    triple and the probability slot it is bound to downstream."""

    squares: tuple[int, int, int]
    vector: np.ndarray
    probability_slot: str


def simultaneous_eigenbasis() -> tuple[SimultaneousEigenvector, ...]:
    """The three common eigenvectors of the mutually commuting squared
    spin components; each eigenvalue triple sums to 2."""
    s2 = np.sqrt(2.0)
    rows = (
        SimultaneousEigenvector((1, 0, 1), np.array([1, 0, 1], dtype=complex) / s2, "p2"),
        SimultaneousEigenvector((0, 1, 1), np.array([1, 0, -1], dtype=complex) / s2, "p1"),
        SimultaneousEigenvector((1, 1, 0), np.array([0, 1, 0], dtype=complex), "p3"),
    )
    for row in rows:
        row.vector.setflags(write=False)
    return rows


def random_pure_state(dim: int, rng: np.random.Generator) -> QuantumState:
    """Haar-ish random pure state from complex normal amplitudes."""
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    vec = vec / np.linalg.norm(vec)
    return QuantumState.from_pure(vec)
