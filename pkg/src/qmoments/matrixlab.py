"""Finite-dimensional Hermitian operator algebra.

This is the brute-force oracle side of the package: every operator
expression (commutators, modulus powers |M|^s, expectations, centered
moments) is computed exactly by spectral calculus on explicit matrices, so
inequality claims can be checked without any analytic shortcuts.

The eigensolver is a cyclic complex Jacobi iteration: deterministic,
dependency-free, and bit-stable across runs, which matters because harness
counterexamples must be reproducible from their seed alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import DataFormatError, DecompositionError, DomainError
from .rng import SplitMix64

_HERMITICITY_ATOL = 1e-12
_JACOBI_MAX_SWEEPS = 100
_RECON_RTOL = 1e-10


def _as_complex_square(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    """Private read-only copy, so value objects stay immutable in fact."""
    out = np.array(a, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class HermitianOperator:
    """An n x n complex matrix validated to equal its conjugate transpose."""

    entries: np.ndarray

    def __post_init__(self):
        m = _as_complex_square(self.entries)
        scale = max(1.0, float(np.abs(m).max(initial=0.0)))
        if np.abs(m - m.conj().T).max(initial=0.0) > _HERMITICITY_ATOL * scale:
            raise DomainError("matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "entries", _frozen(m))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def scaled(self, c: float) -> "HermitianOperator":
        return HermitianOperator(self.entries * float(c))


@dataclass(frozen=True)
class FiniteState:
    """A unit-norm complex amplitude vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).ravel()
        n = np.linalg.norm(v)
        if not math.isfinite(n) or n == 0.0:
            raise DomainError("state vector must have finite nonzero norm")
        if abs(n - 1.0) > 1e-12:
            v = v / n
        object.__setattr__(self, "amplitudes", _frozen(v))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues ascending, eigenvector columns unitary and phase-fixed."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def weights(self, psi: FiniteState) -> np.ndarray:
        """Spectral weights |<u_i|psi>|^2; they sum to 1."""
        amps = self.eigenvectors.conj().T @ psi.amplitudes
        return np.abs(amps) ** 2


def _check_dims(a, b) -> None:
    if a.dim != b.dim:
        raise DomainError(f"dimension mismatch: {a.dim} vs {b.dim}")


def _jacobi_rotate(m: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero m[p,q] (and m[q,p]) in place with a complex plane rotation."""
    apq = m[p, q]
    b = abs(apq)
    if b == 0.0:
        return
    phase = apq / b
    tau = (m[q, q].real - m[p, p].real) / (2.0 * b)
    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.hypot(1.0, t)
    s = c * t
    # columns, then rows, then the eigenvector accumulator
    col_p = m[:, p].copy()
    col_q = m[:, q].copy()
    m[:, p] = c * col_p - s * np.conj(phase) * col_q
    m[:, q] = s * phase * col_p + c * col_q
    row_p = m[p, :].copy()
    row_q = m[q, :].copy()
    m[p, :] = c * row_p - s * phase * row_q
    m[q, :] = s * np.conj(phase) * row_p + c * row_q
    m[p, q] = 0.0
    m[q, p] = 0.0
    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - s * np.conj(phase) * vq
    v[:, q] = s * phase * vp + c * vq


def _off_norm(m: np.ndarray) -> float:
    off = m - np.diag(np.diag(m))
    return float(np.linalg.norm(off))


def eigendecompose(op: HermitianOperator) -> SpectralDecomposition:
    """Cyclic Jacobi eigendecomposition with deterministic ordering.

    Sweeps rotate every upper off-diagonal element in row-major order until
    the off-diagonal Frobenius norm drops below 1e-14 * ||M||_F, capped at
    100 sweeps. Eigenvalues ascend; each eigenvector's first significant
    component is made real positive.
    """
    n = op.dim
    m = op.entries.astype(complex).copy()
    v = np.eye(n, dtype=complex)
    fro = float(np.linalg.norm(m))
    threshold = 1e-14 * max(fro, 1e-300)
    sweeps = 0
    while _off_norm(m) > threshold:
        if sweeps >= _JACOBI_MAX_SWEEPS:
            raise DecompositionError(
                f"Jacobi failed to converge in {_JACOBI_MAX_SWEEPS} sweeps; "
                f"off-diagonal residual {_off_norm(m):.3e} vs {threshold:.3e}"
            )
        skip = threshold / max(n, 1)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(m[p, q]) > skip:
                    _jacobi_rotate(m, v, p, q)
        sweeps += 1

    diag = np.diag(m)
    if np.abs(diag.imag).max(initial=0.0) > 1e-10 * max(fro, 1.0):
        raise DecompositionError("imaginary residue on the diagonal after Jacobi")
    eigenvalues = diag.real.copy()
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    v = v[:, order]
    # phase fix: first significant component real positive
    for j in range(n):
        col = v[:, j]
        idx = int(np.argmax(np.abs(col) > 1e-12))
        pivot = col[idx]
        if pivot != 0.0:
            v[:, j] = col * (np.conj(pivot) / abs(pivot))

    dec = SpectralDecomposition(_frozen(eigenvalues), _frozen(v))
    recon = dec.reconstruct()
    scale = max(float(np.abs(op.entries).max(initial=0.0)), 1e-300)
    if float(np.abs(recon - op.entries).max()) > _RECON_RTOL * scale:
        raise DecompositionError("spectral reconstruction residual above 1e-10")
    if float(np.abs(v.conj().T @ v - np.eye(n)).max()) > 1e-10:
        raise DecompositionError("eigenvector matrix lost unitarity")
    return dec


def commutator(a: HermitianOperator, b: HermitianOperator) -> np.ndarray:
    """[A, B] = AB - BA; anti-Hermitian for Hermitian inputs."""
    _check_dims(a, b)
    return a.entries @ b.entries - b.entries @ a.entries


def anticommutator(a: HermitianOperator, b: HermitianOperator) -> np.ndarray:
    """{A, B} = AB + BA; Hermitian for Hermitian inputs."""
    _check_dims(a, b)
    return a.entries @ b.entries + b.entries @ a.entries


def operator_abs_power(m, s: float) -> np.ndarray:
    """|M|^s as a positive semidefinite matrix.

    For Hermitian M this is U |Lambda|^s U^H; in general it is (M^H M)^{s/2},
    the unique positive-semidefinite modulus, so it applies to products of
    centered operators and to commutators alike.
    """
    if s <= 0.0:
        raise DomainError(f"power must be positive, got {s}")
    m = _as_complex_square(m)
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.conj().T).max(initial=0.0) <= _HERMITICITY_ATOL * scale:
        dec = eigendecompose(HermitianOperator(m))
        powered = np.abs(dec.eigenvalues) ** s
    else:
        h = m.conj().T @ m
        h = 0.5 * (h + h.conj().T)
        dec = eigendecompose(HermitianOperator(h))
        powered = np.clip(dec.eigenvalues, 0.0, None) ** (0.5 * s)
    u = dec.eigenvectors
    return (u * powered) @ u.conj().T


def expectation(op: HermitianOperator, psi: FiniteState) -> float:
    """<psi|M|psi> with the imaginary residue validated then discarded."""
    _check_dims(op, psi)
    v = psi.amplitudes
    val = complex(v.conj() @ (op.entries @ v))
    if abs(val.imag) > 1e-8 * max(1.0, abs(val.real)):
        raise DomainError(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def expectation_of_matrix(m: np.ndarray, psi: FiniteState) -> complex:
    """<psi|M|psi> for a general square matrix, kept complex."""
    v = psi.amplitudes
    return complex(v.conj() @ (m @ v))


def central_shift(op: HermitianOperator, psi: FiniteState) -> HermitianOperator:
    """A - <A> I, the centered operator whose expectation in psi is zero."""
    mu = expectation(op, psi)
    return HermitianOperator(op.entries - mu * np.eye(op.dim))


def abs_central_moment_finite(op: HermitianOperator, psi: FiniteState, s: float) -> float:
    """<psi| |A - <A>|^s |psi> = sum_i w_i |lambda_i - <A>|^s."""
    if s <= 0.0:
        raise DomainError(f"moment order must be positive, got {s}")
    _check_dims(op, psi)
    mu = expectation(op, psi)
    dec = eigendecompose(op)
    w = dec.weights(psi)
    return float(w @ np.abs(dec.eigenvalues - mu) ** s)


def abs_power_expectation(m: np.ndarray, psi: FiniteState, s: float) -> float:
    """<psi| |M|^s |psi> for a general square matrix, via spectral weights."""
    if s <= 0.0:
        raise DomainError(f"power must be positive, got {s}")
    m = _as_complex_square(m)
    h = m.conj().T @ m
    h = 0.5 * (h + h.conj().T)
    dec = eigendecompose(HermitianOperator(h))
    w = dec.weights(psi)
    return float(w @ np.clip(dec.eigenvalues, 0.0, None) ** (0.5 * s))


# ---------------------------------------------------------------------------
# catalog operators


def pauli(which: str) -> HermitianOperator:
    if which == "x":
        return HermitianOperator([[0, 1], [1, 0]])
    if which == "y":
        return HermitianOperator([[0, -1j], [1j, 0]])
    if which == "z":
        return HermitianOperator([[1, 0], [0, -1]])
    raise DomainError(f"unknown Pauli axis {which!r}")


def lowering_matrix(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    for i in range(dim - 1):
        a[i, i + 1] = math.sqrt(i + 1)
    return a


def truncated_canonical_pair(
    dim: int, hbar: float = 1.0, mass: float = 1.0, omega: float = 1.0
) -> tuple[HermitianOperator, HermitianOperator]:
    """Position/momentum matrices in the oscillator number basis.

    Their commutator equals i*hbar*I except for a defect block in the last
    basis row/column (the truncation boundary); states with no weight there
    see the ideal canonical algebra.
    """
    if dim < 2:
        raise DomainError("truncated pair needs dim >= 2")
    a = lowering_matrix(dim)
    ad = a.conj().T
    x = math.sqrt(hbar / (2.0 * mass * omega)) * (a + ad)
    p = 1j * math.sqrt(hbar * mass * omega / 2.0) * (ad - a)
    return HermitianOperator(x), HermitianOperator(p)


def ground_state(dim: int) -> FiniteState:
    v = np.zeros(dim, dtype=complex)
    v[0] = 1.0
    return FiniteState(v)


def random_hermitian(rng: SplitMix64, dim: int, scale: float = 1.0) -> HermitianOperator:
    """H = (G + G^H)/2 with G filled row-major, real part before imaginary."""
    g = np.empty((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            g[i, j] = complex(rng.normal(), rng.normal())
    return HermitianOperator(scale * 0.5 * (g + g.conj().T))


def random_state(rng: SplitMix64, dim: int) -> FiniteState:
    v = np.empty(dim, dtype=complex)
    for i in range(dim):
        v[i] = complex(rng.normal(), rng.normal())
    return FiniteState(v)


# ---------------------------------------------------------------------------
# JSON wire format: {"dim": n, "entries": [[re, im], ...]} row-major


def matrix_to_json(m: np.ndarray) -> str:
    m = _as_complex_square(m)
    pairs = [[float(z.real), float(z.imag)] for z in m.ravel()]
    return json.dumps({"dim": int(m.shape[0]), "entries": pairs})


def matrix_from_json(text: str) -> np.ndarray:
    try:
        obj = json.loads(text)
        dim = int(obj["dim"])
        pairs = obj["entries"]
        if dim <= 0 or len(pairs) != dim * dim:
            raise ValueError(f"need dim^2 = {dim * dim} entries, got {len(pairs)}")
        flat = np.array([complex(float(re), float(im)) for re, im in pairs])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataFormatError(f"bad matrix JSON: {exc}") from exc
    return flat.reshape(dim, dim)
