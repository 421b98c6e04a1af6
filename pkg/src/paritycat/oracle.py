"""Brute-force verification path.

Builds cats as dense vectors over the full Fock basis, splits them into an
``(N - M) x M`` coefficient matrix with the second-quantized splitting identity

    |n>^(N) = sum_{m <= n, |m| = M} sqrt(prod_i C(n_i, m_i) / C(N, M)) |n - m> (x) |m>,

forms the reduced density matrix and diagonalizes it with a cyclic Jacobi
eigensolver.  Nothing here uses the closed-form Schmidt coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .cats import CatParams, DegenerateCatError, cat_fock_amplitudes
from .combinatorics import composition_array, n_compositions, parity_array
from .schmidt import ZERO_THRESHOLD, symmetric_dim
from .states import CSLabel

MAX_BASIS = 2_000_000
MAX_MATRIX_DIM = 5000
MAX_SWEEPS = 100


class OracleCapError(ValueError):
    """Requested oracle problem exceeds the desk-scale caps."""


class JacobiConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class DenseSymState:
    D: int
    N: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class BipartiteMatrix:
    """Rows: compositions of ``N - M``; columns: compositions of ``M``."""

    matrix: np.ndarray
    D: int
    N: int
    M: int


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    D: int
    M: int


def _check_basis(D: int, N: int):
    if n_compositions(D, N) > MAX_BASIS:
        raise OracleCapError(f"basis size binom({N + D - 1},{D - 1}) exceeds {MAX_BASIS}")


def build_cat_state(p: CatParams) -> DenseSymState:
    """Dense amplitudes of ``|z>_c``.

    When the normalization underflows, the limit state is built instead: levels
    with ``z_i = 0`` hold ``c_i`` particles and the rest is filled with the
    unnormalized coherent-state coefficients, then normalized numerically.  For
    ``z = 0`` this is the unit vector on ``|N - |c|, c_1, ..., c_{D-1}>``.
    """
    _check_basis(p.D, p.N)
    try:
        amps = cat_fock_amplitudes(p)
    except DegenerateCatError:
        amps = _limit_amplitudes(p)
    amps = np.asarray(amps, dtype=complex)
    return DenseSymState(p.D, p.N, amps / np.linalg.norm(amps))


def _limit_amplitudes(p: CatParams) -> np.ndarray:
    comps = composition_array(p.D, p.N)
    z = p.z.to_complex()
    keep = parity_array(comps) == p.c
    log_abs = 0.5 * (gammaln(p.N + 1.0) - gammaln(comps + 1.0).sum(axis=1))
    phase = np.zeros(comps.shape[0])
    for i, zi in enumerate(z, start=1):
        k = comps[:, i]
        if abs(zi) <= ZERO_THRESHOLD:
            keep &= k == ((p.c >> (i - 1)) & 1)
        else:
            log_abs = log_abs + k * math.log(abs(zi))
            phase = phase + k * np.angle(zi)
    if not keep.any():
        raise DegenerateCatError("no Fock state survives in the limit")
    log_abs = np.where(keep, log_abs, -np.inf)
    log_abs -= log_abs[keep].max()
    return np.exp(log_abs) * np.exp(1j * phase)


def _index_map(D: int, K: int) -> dict[tuple[int, ...], int]:
    return {tuple(int(v) for v in row): i for i, row in enumerate(composition_array(D, K))}


def bipartite_expand(s: DenseSymState, M: int) -> BipartiteMatrix:
    """Coefficient matrix of ``s`` in the product basis ``|n - m>^(N-M) (x) |m>^(M)``."""
    D, N = s.D, s.N
    if not 1 <= M <= N - 1:
        raise ValueError(f"M={M} outside 1..{N - 1}")
    full = composition_array(D, N)
    rest_index = _index_map(D, N - M)
    kept = composition_array(D, M)
    out = np.zeros((n_compositions(D, N - M), kept.shape[0]), dtype=complex)
    log_total = gammaln(N + 1.0) - gammaln(M + 1.0) - gammaln(N - M + 1.0)
    nonzero = np.nonzero(s.amplitudes)[0]
    comps = full[nonzero]
    amps = s.amplitudes[nonzero]
    for j, m in enumerate(kept):
        ok = np.all(comps >= m, axis=1)
        if not ok.any():
            continue
        n = comps[ok]
        log_c = (gammaln(n + 1.0) - gammaln(m + 1.0) - gammaln(n - m + 1.0)).sum(axis=1)
        weight = np.exp(0.5 * (log_c - log_total))
        rows = [rest_index[tuple(int(v) for v in r)] for r in n - m]
        out[rows, j] += amps[ok] * weight
    return BipartiteMatrix(out, D, N, M)


def reduced_density_matrix(A: BipartiteMatrix) -> DensityMatrix:
    """Partial trace over the ``N - M`` factor: ``rho[m, m'] = sum_r A[r, m] conj(A[r, m'])``."""
    mat = A.matrix.T @ A.matrix.conj()
    return DensityMatrix(0.5 * (mat + mat.conj().T), A.D, A.M)


def _round_robin(n: int):
    players = list(range(n))
    for _ in range(n - 1):
        yield (np.array(players[: n // 2]), np.array(players[n // 2:][::-1]))
        players = [players[0], players[-1]] + players[1:-1]


def jacobi_eigh_real(a: np.ndarray, tol: float = 1e-13, scale: float | None = None,
                     vectors: bool = False):
    """Cyclic Jacobi for a real symmetric matrix of even order.

    Each step of a sweep applies ``n/2`` disjoint rotations chosen by a
    round-robin ordering, so every pair ``(p, q)`` is visited once per sweep.

    Returns:
        eigenvalues (unsorted diagonal), and the accumulated rotation matrix if
        ``vectors`` is true.

    Raises:
        JacobiConvergenceError: after ``MAX_SWEEPS`` sweeps without convergence.
    """
    A = np.array(a, dtype=float, copy=True)
    n = A.shape[0]
    if n % 2:
        raise ValueError("jacobi_eigh_real expects an even order; pad first")
    V = np.eye(n) if vectors else None
    if scale is None:
        scale = np.linalg.norm(A)
    target = tol * scale
    rounds = list(_round_robin(n))
    for _ in range(MAX_SWEEPS):
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= target:
            return (np.diag(A).copy(), V) if vectors else np.diag(A).copy()
        for P, Q in rounds:
            apq = A[P, Q]
            active = apq != 0.0
            if not active.any():
                continue
            tau = np.where(active, (A[Q, Q] - A[P, P]) / (2.0 * np.where(active, apq, 1.0)), 0.0)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            J = np.eye(n)
            J[P, P] = c
            J[Q, Q] = c
            J[P, Q] = s
            J[Q, P] = -s
            A = J.T @ A @ J
            A = 0.5 * (A + A.T)
            if vectors:
                V = V @ J
    raise JacobiConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")


def real_embedding(h: np.ndarray) -> np.ndarray:
    """``[[Re h, -Im h], [Im h, Re h]]``; every eigenvalue of ``h`` appears twice."""
    x, y = h.real, h.imag
    return np.block([[x, -y], [y, x]])


def hermitian_eigenvalues(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in descending order (Jacobi on the real embedding)."""
    h = np.asarray(getattr(rho, "matrix", rho))
    n = h.shape[0]
    if n > MAX_MATRIX_DIM:
        raise OracleCapError(f"matrix dimension {n} exceeds {MAX_MATRIX_DIM}")
    if n == 0:
        return np.zeros(0)
    trace = float(np.trace(h).real)
    scale = trace if trace > 0 else float(np.linalg.norm(h))
    if scale == 0.0:
        return np.zeros(n)
    # the embedding doubles the trace
    w = jacobi_eigh_real(real_embedding(h), scale=2.0 * scale)
    pairs = np.sort(w)[::-1].reshape(n, 2)
    return pairs.mean(axis=1)


@dataclass(frozen=True)
class SpectrumReport:
    params: CatParams
    M: int
    closed_form: np.ndarray
    oracle: np.ndarray
    max_deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def oracle_spectrum(p: CatParams, M: int) -> np.ndarray:
    _check_basis(p.D, p.N)
    dim = symmetric_dim(p.D, M)
    if dim > MAX_MATRIX_DIM:
        raise OracleCapError(f"RDM dimension {dim} exceeds {MAX_MATRIX_DIM}")
    rho = reduced_density_matrix(bipartite_expand(build_cat_state(p), M))
    return hermitian_eigenvalues(rho)


def verify_spectrum(p: CatParams, M: int, tol: float = 1e-9, perturb: float = 0.0) -> SpectrumReport:
    """Compare the closed-form spectrum with the brute-force RDM spectrum.

    ``perturb`` is added to the largest closed-form eigenvalue; it exists so the
    harness itself can be tested for failure detection.
    """
    from .limits import spectrum_at

    oracle = oracle_spectrum(p, M)
    closed = spectrum_at(p.z, p.c, p.N, M).padded(oracle.shape[0])
    if perturb:
        closed = closed.copy()
        closed[0] += perturb
    dev = float(np.max(np.abs(closed - oracle)))
    return SpectrumReport(p, M, closed, oracle, dev, tol)


def random_case(rng, dims=(2, 3, 4), max_N: int = 8, max_mag: float = 3.0):
    """Draw ``(CatParams, M)`` from a :class:`~paritycat.rng.SplitMix64` generator."""
    D = rng.choice(list(dims))
    N = rng.randint(2, max_N)
    M = rng.randint(1, N // 2)
    mags = [rng.uniform(0.0, max_mag) for _ in range(D - 1)]
    phases = [rng.uniform(0.0, 2 * math.pi) for _ in range(D - 1)]
    c = rng.randint(0, (1 << (D - 1)) - 1)
    while bin(c).count("1") > N:  # that sector is empty
        c = rng.randint(0, (1 << (D - 1)) - 1)
    return CatParams(CSLabel(tuple(mags), tuple(phases)), c, N), M
