"""Complex Hermitian matrix kernel: spectral decomposition, Loewner order,
functional calculus, the matrix geometric mean, and seeded sampling.

All matrices are dense complex n x n arrays. Every operation is a pure
function of its inputs; returned arrays are marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    HermitianDefectError,
    InputError,
    NonPositiveError,
    NumericalError,
    UnboundedIntervalError,
)

__all__ = [
    "HermitianMatrix",
    "SpectralDecomposition",
    "SpectrumInterval",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "LoewnerResult",
    "eig_hermitian",
    "loewner_leq",
    "apply_function",
    "geometric_mean",
    "sample_hermitian",
    "haar_unitary",
]

HERMITIAN_ATOL = 1e-12  # entrywise |M - M*| allowed at construction


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _sym(a: np.ndarray) -> np.ndarray:
    """Average a with its adjoint; suppresses floating-point drift."""
    return (a + a.conj().T) / 2.0


def _eigh(a: np.ndarray):
    """Ascending eigenvalues and eigenvectors of a Hermitian array."""
    try:
        w, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed to converge: {exc}") from exc
    return w, u


def _max_abs_eig(a: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(a)))) if a.size else 0.0


def _sqrt_psd(a: np.ndarray) -> np.ndarray:
    """Square root of a PSD array; small negative eigenvalues are clipped."""
    w, u = _eigh(a)
    return _sym((u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T)


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances, interpreted relative to the spectral scale of the operand
    with an absolute floor."""

    construction_tol: float = 1e-12
    psd_tol: float = 1e-8
    solver_tol: float = 1e-9
    abs_floor: float = 1e-14

    def __post_init__(self):
        if min(self.construction_tol, self.psd_tol, self.solver_tol, self.abs_floor) <= 0:
            raise InputError("tolerances must be strictly positive")
        if self.construction_tol > self.psd_tol:
            raise InputError("construction_tol must not exceed psd_tol")

    def construction(self, scale: float = 1.0) -> float:
        return max(self.construction_tol * scale, self.abs_floor)

    def psd(self, scale: float = 1.0) -> float:
        return max(self.psd_tol * scale, self.abs_floor)

    def solver(self, scale: float = 1.0) -> float:
        return max(self.solver_tol * scale, self.abs_floor)


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """An n x n complex matrix with enforced self-adjointness.

    The stored array is the exact Hermitian average of the input and is
    read-only; instances are safe to share across threads.
    """

    entries: np.ndarray

    def __init__(self, entries, atol: float = HERMITIAN_ATOL):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise InputError("dimension must be at least 1")
        if not np.all(np.isfinite(a)):
            raise InputError("matrix entries must be finite")
        defect = np.abs(a - a.conj().T)
        if defect.size and float(defect.max()) > atol:
            j, k = np.unravel_index(int(np.argmax(defect)), defect.shape)
            raise HermitianDefectError(
                f"self-adjointness defect {float(defect.max()):.3e} at entry "
                f"({j},{k}) exceeds {atol:.0e}"
            )
        object.__setattr__(self, "entries", _freeze(_sym(a)))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self.entries

    @classmethod
    def identity(cls, dim: int) -> "HermitianMatrix":
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def diagonal(cls, values) -> "HermitianMatrix":
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    @classmethod
    def zero(cls, dim: int) -> "HermitianMatrix":
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Ascending real eigenvalues plus a unitary whose columns are the
    matching eigenvectors."""

    eigenvalues: np.ndarray
    unitary: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _freeze(np.asarray(self.eigenvalues, float)))
        object.__setattr__(self, "unitary", _freeze(np.asarray(self.unitary, np.complex128)))

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.unitary
        return _sym((u * self.eigenvalues) @ u.conj().T)

    def projector(self, i: int) -> np.ndarray:
        """Rank-one spectral projector onto the i-th eigenvector."""
        v = self.unitary[:, i]
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class SpectrumInterval:
    """A real interval, possibly unbounded, with open/closed endpoints."""

    lo: float = -math.inf
    hi: float = math.inf
    open_lo: bool = False
    open_hi: bool = False

    def __post_init__(self):
        if self.lo > self.hi:
            raise InputError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, t: float) -> bool:
        if self.open_lo:
            if t <= self.lo:
                return False
        elif t < self.lo:
            return False
        if self.open_hi:
            if t >= self.hi:
                return False
        elif t > self.hi:
            return False
        return True

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def __str__(self):
        left = "(" if (self.open_lo or not math.isfinite(self.lo)) else "["
        right = ")" if (self.open_hi or not math.isfinite(self.hi)) else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class LoewnerResult:
    holds: bool
    margin: float

    def __bool__(self):
        return self.holds


def eig_hermitian(H: HermitianMatrix) -> SpectralDecomposition:
    """Spectral decomposition with ascending eigenvalues.

    Deterministic for identical input. The unitary reconstructs the matrix
    as U diag(w) U*; column i yields the spectral projector for w[i].
    """
    w, u = _eigh(H.array)
    return SpectralDecomposition(eigenvalues=w, unitary=u)


def loewner_leq(
    A: HermitianMatrix, B: HermitianMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> LoewnerResult:
    """Decide A <= B in the Loewner order.

    Holds iff the smallest eigenvalue of B - A is >= -psd_tol * scale, where
    scale is the largest absolute eigenvalue among the operands. The margin
    is that smallest eigenvalue, so callers get a signed certificate.
    """
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dims {A.dim} and {B.dim} differ")
    margin = float(np.linalg.eigvalsh(B.array - A.array)[0])
    scale = max(_max_abs_eig(A.array), _max_abs_eig(B.array))
    return LoewnerResult(holds=margin >= -tol.psd(scale), margin=margin)


def apply_function(f, H: HermitianMatrix) -> HermitianMatrix:
    """Functional calculus: U diag(f(w)) U* over the decomposition of H.

    Every eigenvalue must lie in f's domain interval, with open endpoints
    excluded strictly.
    """
    w, u = _eigh(H.array)
    for lam in w:
        if not f.domain.contains(float(lam)):
            raise DomainError(float(lam), str(f.domain), getattr(f, "label", ""))
    fw = np.asarray(f.evaluator(w), dtype=float)
    return HermitianMatrix(_sym((u * fw) @ u.conj().T), atol=np.inf)


def _geometric_mean_arr(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    wa, ua = _eigh(a)
    rs = (ua * np.sqrt(wa)) @ ua.conj().T
    irs = (ua * (1.0 / np.sqrt(wa))) @ ua.conj().T
    mid = _sqrt_psd(_sym(irs @ b @ irs))
    return _sym(rs @ mid @ rs)


def geometric_mean(
    A: HermitianMatrix, B: HermitianMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> HermitianMatrix:
    """Matrix geometric mean A^(1/2) (A^(-1/2) B A^(-1/2))^(1/2) A^(1/2).

    Both operands must be strictly positive. The result is symmetric in its
    arguments and congruence-invariant up to rounding.
    """
    if A.dim != B.dim:
        raise DimensionMismatchError(f"dims {A.dim} and {B.dim} differ")
    for name, M in (("first", A), ("second", B)):
        w = np.linalg.eigvalsh(M.array)
        if w[0] <= tol.psd(float(np.max(np.abs(w)))):
            raise NonPositiveError(
                f"{name} operand is not strictly positive (min eigenvalue {w[0]:.3e})"
            )
    return HermitianMatrix(_geometric_mean_arr(A.array, B.array), atol=np.inf)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r).copy()
    d[d == 0] = 1.0  # measure-zero guard
    return q * (d / np.abs(d))


def sample_hermitian(
    dim: int,
    spectrum: SpectrumInterval,
    rng_seed,
    scale: float | None = None,
) -> HermitianMatrix:
    """Seed-deterministic random Hermitian matrix with eigenvalues strictly
    inside the given interval.

    Eigenvalues are drawn uniformly from the interval shrunk by a relative
    margin of 1e-6, in a Haar-random eigenbasis. An unbounded interval
    requires an explicit sampling `scale`, which replaces the missing
    endpoint(s) at distance `scale`.
    """
    if dim < 1:
        raise InputError("dimension must be at least 1")
    lo, hi = spectrum.lo, spectrum.hi
    if not math.isfinite(lo) or not math.isfinite(hi):
        if scale is None:
            raise UnboundedIntervalError(
                f"interval {spectrum} is unbounded; pass a sampling scale"
            )
        if not math.isfinite(lo) and not math.isfinite(hi):
            lo, hi = -scale, scale
        elif not math.isfinite(hi):
            hi = lo + scale
        else:
            lo = hi - scale
    pad = 1e-6 * max(hi - lo, abs(lo), abs(hi))
    if lo + pad > hi - pad:
        pad = (hi - lo) / 4.0
    rng = _seeded_rng(rng_seed)
    u = haar_unitary(dim, rng)
    w = np.sort(rng.uniform(lo + pad, hi - pad, size=dim))
    return HermitianMatrix(_sym((u * w) @ u.conj().T), atol=np.inf)


def _seeded_rng(seed) -> np.random.Generator:
    """Generator from an integer seed or a tuple used as an entropy pool."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence(seed))


def _rand_hermitian_arr(dim: int, lo: float, hi: float, rng: np.random.Generator) -> np.ndarray:
    """Internal sampler on raw arrays; eigenvalues uniform in [lo, hi]."""
    u = haar_unitary(dim, rng)
    w = rng.uniform(lo, hi, size=dim)
    return _sym((u * w) @ u.conj().T)
