"""Sampling-based verification and falsification of operator inequalities.

Every suite draws seeded random instances, checks one inequality in the
Loewner order, and either reports `no-violation-found` (evidence, not proof)
or returns a machine-checkable counterexample. Falsifiers escalate the
eigenvalue spread geometrically across three rounds, since several
inequalities only fail visibly for well-separated spectra.

Per-sample randomness is derived from (master seed, suite salt, sample
index), so verdicts are independent of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InputError, NonPositiveError, NumericalError
from .combinations import (
    _combine_arr,
    _inv_pd_arr,
    _sample_tuple_arrs,
    sample_map_family,
)
from .functions import ScalarFunctionSpec
from .hermitian import (
    DEFAULT_TOL,
    HermitianMatrix,
    SpectrumInterval,
    ToleranceConfig,
    _eigh,
    _geometric_mean_arr,
    _rand_hermitian_arr,
    _sym,
    haar_unitary,
)

__all__ = [
    "TestVerdict",
    "Counterexample",
    "midpoint_convexity_test",
    "jensen_test",
    "log_midpoint_test",
    "log_harmonic_jensen_test",
    "epigraph_closure_test",
    "log_epigraph_closure_test",
    "interval_set_falsifier",
    "sublevel_family_test",
    "embed_counterexample",
    "EVIDENCE_NOTE",
]

EVIDENCE_NOTE = "no-violation-found is sampling evidence, not a proof"

SPREADS = (1.0, 4.0, 16.0)

# per-suite salts for deriving sample seeds
_SALT_MIDPOINT = 1
_SALT_JENSEN = 2
_SALT_LOG_MIDPOINT = 3
_SALT_LOG_HARMONIC = 4
_SALT_EPIGRAPH = 5
_SALT_LOG_EPIGRAPH = 6
_SALT_INTERVAL = 7
_SALT_SUBLEVEL = 8


@dataclass(frozen=True, eq=False)
class Counterexample:
    """A reproducible witness that one sampled instance violates the
    inequality; `violation` is the most negative eigenvalue of rhs - lhs
    (or of the relevant membership defect)."""

    kind: str
    dim: int
    inputs: dict
    lhs: HermitianMatrix
    rhs: HermitianMatrix
    violation: float
    function: str | None = None
    mode: str | None = None

    def __post_init__(self):
        if not self.violation < 0:
            raise InputError("a counterexample must carry a negative violation")


@dataclass(frozen=True, eq=False)
class TestVerdict:
    __test__ = False  # not a pytest class

    status: str  # 'no-violation-found' | 'violated'
    samples_run: int
    worst_margin: float
    boundary_samples: int = 0
    resamples: int = 0
    counterexample: Counterexample | None = None

    def __post_init__(self):
        if (self.status == "violated") != (self.counterexample is not None):
            raise InputError("status 'violated' must come with a counterexample")

    @property
    def violated(self) -> bool:
        return self.status == "violated"


def _sample_rng(seed: int, salt: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((int(seed), salt, index)))


def _round_spread(index: int, samples: int) -> float:
    return SPREADS[min(index * 3 // max(samples, 1), 2)]


def _window(domain: SpectrumInterval, spread: float, positive: bool = False):
    """Finite eigenvalue window inside the domain for one escalation round."""
    lo, hi, open_lo = domain.lo, domain.hi, domain.open_lo
    if positive and lo < 0.0:
        lo, open_lo = 0.0, True
    if not math.isfinite(lo) and not math.isfinite(hi):
        lo_f, hi_f = -spread, spread
    elif math.isfinite(lo) and not math.isfinite(hi):
        lo_f = lo + 0.01 * spread if open_lo else lo
        hi_f = lo + spread
    elif not math.isfinite(lo):
        hi_f = hi - 0.01 * spread if domain.open_hi else hi
        lo_f = hi - spread
    else:
        lo_f, hi_f = lo, hi
    pad = 1e-6 * max(hi_f - lo_f, abs(lo_f), abs(hi_f))
    return lo_f + pad, hi_f - pad


def _specnorm(a: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(a))))


def _mineig(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(a)[0])


def _feval(f: ScalarFunctionSpec, a: np.ndarray, positive: bool = False) -> np.ndarray:
    w, u = _eigh(a)
    for lam in w:
        if not f.domain.contains(float(lam)):
            raise DomainError(float(lam), str(f.domain), f.label)
    fw = np.asarray(f.evaluator(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise NumericalError(f"{f.label} produced non-finite values")
    if positive and np.any(fw <= 0.0):
        raise NonPositiveError(f"{f.label} is not positive on the sampled spectrum")
    return _sym((u * fw) @ u.conj().T)


class _Tracker:
    """Margin bookkeeping shared by all suites."""

    def __init__(self, tol: ToleranceConfig):
        self.tol = tol
        self.worst = math.inf
        self.boundary = 0
        self.resamples = 0
        self.run = 0

    def classify(self, margin: float, scale: float) -> str:
        self.run += 1
        self.worst = min(self.worst, margin)
        thr = self.tol.psd(scale)
        if margin < -thr:
            return "violated"
        if margin < thr:
            self.boundary += 1
        return "ok"

    def verdict(self, counterexample: Counterexample | None = None) -> TestVerdict:
        return TestVerdict(
            status="violated" if counterexample is not None else "no-violation-found",
            samples_run=self.run,
            worst_margin=self.worst if math.isfinite(self.worst) else 0.0,
            boundary_samples=self.boundary,
            resamples=self.resamples,
            counterexample=counterexample,
        )


def _retry_domain(tracker: _Tracker, build, cap: int = 10):
    """Run `build` and retry on domain violations, counting resamples."""
    for _ in range(cap):
        try:
            return build()
        except DomainError:
            tracker.resamples += 1
    raise NumericalError(f"domain violations persisted through {cap} resampling attempts")


def _wrap(a: np.ndarray) -> HermitianMatrix:
    return HermitianMatrix(a, atol=np.inf)


def midpoint_convexity_test(
    f: ScalarFunctionSpec,
    dim: int,
    samples: int = 500,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TestVerdict:
    """Search for X, Y with f((X+Y)/2) not below (f(X)+f(Y))/2."""
    if dim < 1:
        raise InputError("dim must be at least 1")
    tr = _Tracker(tol)
    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_MIDPOINT, idx)
        lo, hi = _window(f.domain, _round_spread(idx, samples))
        if lo >= hi:
            raise InputError(f"domain {f.domain} is too small to sample")
        x = _rand_hermitian_arr(dim, lo, hi, rng)
        y = _rand_hermitian_arr(dim, lo, hi, rng)
        lhs = _feval(f, (x + y) / 2.0)
        rhs = (_feval(f, x) + _feval(f, y)) / 2.0
        margin = _mineig(rhs - lhs)
        scale = max(_specnorm(lhs), _specnorm(rhs))
        if tr.classify(margin, scale) == "violated":
            ce = Counterexample(
                kind="midpoint",
                dim=dim,
                function=f.label,
                inputs={"xs": [_wrap(x), _wrap(y)]},
                lhs=_wrap(lhs),
                rhs=_wrap(rhs),
                violation=margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def jensen_test(
    f: ScalarFunctionSpec,
    mode: str,
    dim: int,
    m: int = 2,
    samples: int = 500,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TestVerdict:
    """Check f(sum C_i* X_i C_i) <= sum C_i* f(X_i) C_i on sampled instances.

    Modes: 'isometry' (m = 1, a Haar unitary coefficient), 'tuple' (a random
    coefficient tuple), 'map-family' (the positive-linear-maps form
    f(sum Phi_i(X_i)) <= sum Phi_i(f(X_i))).
    """
    if mode not in ("isometry", "tuple", "map-family"):
        raise InputError(f"unknown jensen mode {mode!r}")
    if mode == "isometry" and m != 1:
        raise InputError("isometry mode requires m = 1")
    if dim < 1 or m < 1:
        raise InputError("dim and m must be at least 1")
    tr = _Tracker(tol)
    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_JENSEN, idx)
        lo, hi = _window(f.domain, _round_spread(idx, samples))
        if lo >= hi:
            raise InputError(f"domain {f.domain} is too small to sample")

        if mode == "map-family":
            fam = sample_map_family(dim, m, rng)

            def build():
                xs = [_rand_hermitian_arr(dim, lo, hi, rng) for _ in range(m)]
                value = _sym(sum(p.apply_arr(x) for p, x in zip(fam.maps, xs)))
                lhs = _feval(f, value)
                rhs = _sym(sum(p.apply_arr(_feval(f, x)) for p, x in zip(fam.maps, xs)))
                return xs, lhs, rhs

            xs, lhs, rhs = _retry_domain(tr, build)
            coeffs = None
        else:
            coeffs = _sample_tuple_arrs(dim, m, rng)

            def build():
                xs = [_rand_hermitian_arr(dim, lo, hi, rng) for _ in range(m)]
                lhs = _feval(f, _combine_arr(coeffs, xs))
                rhs = _combine_arr(coeffs, [_feval(f, x) for x in xs])
                return xs, lhs, rhs

            xs, lhs, rhs = _retry_domain(tr, build)
            fam = None

        margin = _mineig(rhs - lhs)
        scale = max(_specnorm(lhs), _specnorm(rhs))
        if tr.classify(margin, scale) == "violated":
            inputs = {"xs": [_wrap(x) for x in xs]}
            if coeffs is not None:
                inputs["coeffs"] = list(coeffs)
            if fam is not None:
                inputs["maps"] = fam
            ce = Counterexample(
                kind="jensen",
                dim=dim,
                function=f.label,
                mode=mode,
                inputs=inputs,
                lhs=_wrap(lhs),
                rhs=_wrap(rhs),
                violation=margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def log_midpoint_test(
    f: ScalarFunctionSpec,
    dim: int,
    samples: int = 500,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TestVerdict:
    """Check f((X+Y)/2) <= f(X) # f(Y) (geometric mean) on strictly positive
    pairs; f must map (0, inf) into (0, inf)."""
    if dim < 1:
        raise InputError("dim must be at least 1")
    tr = _Tracker(tol)
    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_LOG_MIDPOINT, idx)
        lo, hi = _window(f.domain, _round_spread(idx, samples), positive=True)
        if lo >= hi or hi <= 0:
            raise InputError(f"domain {f.domain} has no positive part to sample")
        x = _rand_hermitian_arr(dim, lo, hi, rng)
        y = _rand_hermitian_arr(dim, lo, hi, rng)
        lhs = _feval(f, (x + y) / 2.0, positive=True)
        rhs = _geometric_mean_arr(_feval(f, x, positive=True), _feval(f, y, positive=True))
        margin = _mineig(rhs - lhs)
        scale = max(_specnorm(lhs), _specnorm(rhs))
        if tr.classify(margin, scale) == "violated":
            ce = Counterexample(
                kind="log-midpoint",
                dim=dim,
                function=f.label,
                inputs={"xs": [_wrap(x), _wrap(y)]},
                lhs=_wrap(lhs),
                rhs=_wrap(rhs),
                violation=margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def log_harmonic_jensen_test(
    f: ScalarFunctionSpec,
    dim: int,
    m: int = 2,
    samples: int = 500,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TestVerdict:
    """Check the harmonic-mean strengthening of the Jensen inequality,
    f(sum C_i* X_i C_i) <= (sum C_i* f(X_i)^{-1} C_i)^{-1}, which
    characterizes operator log-convex functions."""
    if dim < 1 or m < 1:
        raise InputError("dim and m must be at least 1")
    tr = _Tracker(tol)
    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_LOG_HARMONIC, idx)
        lo, hi = _window(f.domain, _round_spread(idx, samples), positive=True)
        if lo >= hi or hi <= 0:
            raise InputError(f"domain {f.domain} has no positive part to sample")
        coeffs = _sample_tuple_arrs(dim, m, rng)
        xs = [_rand_hermitian_arr(dim, lo, hi, rng) for _ in range(m)]
        lhs = _feval(f, _combine_arr(coeffs, xs))
        inner = _combine_arr(coeffs, [_inv_pd_arr(_feval(f, x, positive=True)) for x in xs])
        rhs = _inv_pd_arr(inner)
        margin = _mineig(rhs - lhs)
        scale = max(_specnorm(lhs), _specnorm(rhs))
        if tr.classify(margin, scale) == "violated":
            ce = Counterexample(
                kind="log-harmonic-jensen",
                dim=dim,
                function=f.label,
                inputs={"xs": [_wrap(x) for x in xs], "coeffs": list(coeffs)},
                lhs=_wrap(lhs),
                rhs=_wrap(rhs),
                violation=margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def epigraph_closure_test(
    f: ScalarFunctionSpec,
    dim: int,
    m: int = 2,
    samples: int = 500,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
    noise_scale: float = 0.1,
) -> TestVerdict:
    """Sample pairs inside the operator epigraph {(X, Y): f(X) <= Y}, apply a
    random coefficient tuple componentwise, and check the combined pair did
    not leave the epigraph.

    Membership noise: Y = f(X) + G G* with the PSD part scaled to
    `noise_scale` times the norm of f(X); zero keeps Y on the boundary.
    """
    if dim < 1 or m < 1:
        raise InputError("dim and m must be at least 1")
    tr = _Tracker(tol)
    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_EPIGRAPH, idx)
        lo, hi = _window(f.domain, _round_spread(idx, samples))
        if lo >= hi:
            raise InputError(f"domain {f.domain} is too small to sample")
        coeffs = _sample_tuple_arrs(dim, m, rng)

        def build():
            xs = [_rand_hermitian_arr(dim, lo, hi, rng) for _ in range(m)]
            ys = [fx + _psd_noise(fx, dim, noise_scale, rng) for fx in (_feval(f, x) for x in xs)]
            lhs = _feval(f, _combine_arr(coeffs, xs))
            rhs = _combine_arr(coeffs, ys)
            return xs, ys, lhs, rhs

        xs, ys, lhs, rhs = _retry_domain(tr, build)
        margin = _mineig(rhs - lhs)
        scale = max(_specnorm(lhs), _specnorm(rhs))
        if tr.classify(margin, scale) == "violated":
            ce = Counterexample(
                kind="epigraph",
                dim=dim,
                function=f.label,
                inputs={
                    "xs": [_wrap(x) for x in xs],
                    "ys": [_wrap(y) for y in ys],
                    "coeffs": list(coeffs),
                },
                lhs=_wrap(lhs),
                rhs=_wrap(rhs),
                violation=margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def _psd_noise(ref: np.ndarray, dim: int, noise_scale: float, rng) -> np.ndarray:
    if noise_scale <= 0.0:
        return np.zeros((dim, dim), dtype=np.complex128)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    n = g @ g.conj().T
    top = _specnorm(n)
    if top == 0.0:
        return np.zeros((dim, dim), dtype=np.complex128)
    return n * (noise_scale * _specnorm(ref) / top)


def log_epigraph_closure_test(
    f: ScalarFunctionSpec,
    dim: int,
    m: int = 2,
    samples: int = 500,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
    noise_scale: float = 0.1,
) -> TestVerdict:
    """Closure of {(X, Y) positive: f(X^{-1}) <= Y} under componentwise
    log-combinations (harmonic C*-mixing of both components)."""
    if dim < 1 or m < 1:
        raise InputError("dim and m must be at least 1")
    tr = _Tracker(tol)
    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_LOG_EPIGRAPH, idx)
        lo, hi = _window(f.domain, _round_spread(idx, samples), positive=True)
        if lo >= hi or hi <= 0:
            raise InputError(f"domain {f.domain} has no positive part to sample")
        coeffs = _sample_tuple_arrs(dim, m, rng)

        def build():
            xs = [_rand_hermitian_arr(dim, lo, hi, rng) for _ in range(m)]
            fs = [_feval(f, _inv_pd_arr(x), positive=True) for x in xs]
            ys = [fx + _psd_noise(fx, dim, noise_scale, rng) for fx in fs]
            xc = _inv_pd_arr(_combine_arr(coeffs, [_inv_pd_arr(x) for x in xs]))
            yc = _inv_pd_arr(_combine_arr(coeffs, [_inv_pd_arr(y) for y in ys]))
            lhs = _feval(f, _inv_pd_arr(xc), positive=True)
            return xs, ys, lhs, yc

        xs, ys, lhs, rhs = _retry_domain(tr, build)
        margin = _mineig(rhs - lhs)
        scale = max(_specnorm(lhs), _specnorm(rhs))
        if tr.classify(margin, scale) == "violated":
            ce = Counterexample(
                kind="log-epigraph",
                dim=dim,
                function=f.label,
                inputs={
                    "xs": [_wrap(x) for x in xs],
                    "ys": [_wrap(y) for y in ys],
                    "coeffs": list(coeffs),
                },
                lhs=_wrap(lhs),
                rhs=_wrap(rhs),
                violation=margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def interval_set_falsifier(
    A: HermitianMatrix,
    samples: int = 500,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TestVerdict:
    """Search for a C*-combination of members of [0, A] that leaves [0, A].

    When A has two distinct eigenvalues the deterministic certificate is
    tried first: conjugating A by the unitary that swaps its extreme
    eigenvectors escapes the order interval whenever the spectrum is not a
    singleton. Random rounds then mix Haar-sampled members with random
    tuples.
    """
    a = A.array
    dim = A.dim
    w, u = _eigh(a)
    scale = float(np.max(np.abs(w))) if dim else 0.0
    if w[0] < -tol.psd(scale):
        raise NonPositiveError(f"A must be positive semidefinite (min eig {w[0]:.3e})")
    tr = _Tracker(tol)

    def membership_margin(x: np.ndarray) -> float:
        return min(_mineig(x), _mineig(a - x))

    # deterministic swap certificate
    if w[-1] - w[0] > 10.0 * tol.psd(scale):
        perm = np.eye(dim)
        perm[:, [0, dim - 1]] = perm[:, [dim - 1, 0]]
        swap = u @ perm @ u.conj().T
        combined = _sym(swap.conj().T @ a @ swap)
        margin = membership_margin(combined)
        if margin < -tol.psd(scale):
            tr.worst = margin
            ce = Counterexample(
                kind="interval-set",
                dim=dim,
                inputs={"xs": [A], "coeffs": [swap], "bound": A},
                lhs=_wrap(combined),
                rhs=A,
                violation=margin,
            )
            return tr.verdict(ce)

    sqrt_a = _sym((u * np.sqrt(np.clip(w, 0.0, None))) @ u.conj().T)
    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_INTERVAL, idx)
        m = int(rng.integers(1, 5))
        coeffs = _sample_tuple_arrs(dim, m, rng)
        xs = []
        for _ in range(m):
            wmix = _rand_hermitian_arr(dim, 0.0, 1.0, rng)  # member of [0, I]
            xs.append(_sym(sqrt_a @ wmix @ sqrt_a))
        combined = _combine_arr(coeffs, xs)
        margin = membership_margin(combined)
        if tr.classify(margin, max(scale, _specnorm(combined))) == "violated":
            ce = Counterexample(
                kind="interval-set",
                dim=dim,
                inputs={"xs": [_wrap(x) for x in xs], "coeffs": list(coeffs), "bound": A},
                lhs=_wrap(combined),
                rhs=A,
                violation=margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def sublevel_family_test(
    family: Sequence[tuple[ScalarFunctionSpec, float]],
    dim: int,
    m: int = 2,
    samples: int = 300,
    *,
    seed: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TestVerdict:
    """Closure of the joint sublevel set {X: f_a(X) <= M_a for all a} under
    C*-combinations; all f_a are expected operator convex.

    Member eigenvalues are rejection-sampled from the scalar feasible set
    {t: f_a(t) <= M_a for all a}; an empty feasible set raises.
    """
    if not family:
        raise InputError("the function family is empty")
    if dim < 1 or m < 1:
        raise InputError("dim and m must be at least 1")
    tr = _Tracker(tol)

    lo_d = max(f.domain.lo for f, _ in family)
    hi_d = min(f.domain.hi for f, _ in family)
    open_lo = any(f.domain.open_lo and f.domain.lo == lo_d for f, _ in family)
    open_hi = any(f.domain.open_hi and f.domain.hi == hi_d for f, _ in family)
    joint = SpectrumInterval(lo=lo_d, hi=hi_d, open_lo=open_lo, open_hi=open_hi)

    def feasible(t: float) -> bool:
        return all(float(f.evaluator(np.array([t]))[0]) <= bound for f, bound in family)

    def draw_member(rng, lo, hi):
        eigs = []
        rejects = 0
        while len(eigs) < dim:
            t = float(rng.uniform(lo, hi))
            if feasible(t):
                eigs.append(t)
            else:
                rejects += 1
                if rejects > 200 * dim:
                    raise InputError("sublevel bounds are infeasible over the sampled window")
        u_basis = haar_unitary(dim, rng)
        return _sym((u_basis * np.array(eigs)) @ u_basis.conj().T)

    for idx in range(samples):
        rng = _sample_rng(seed, _SALT_SUBLEVEL, idx)
        lo, hi = _window(joint, _round_spread(idx, samples))
        if lo >= hi:
            raise InputError("joint domain is too small to sample")
        coeffs = _sample_tuple_arrs(dim, m, rng)
        xs = [draw_member(rng, lo, hi) for _ in range(m)]
        combined = _combine_arr(coeffs, xs)
        worst_margin = math.inf
        worst_pair = None
        for f, bound in family:
            fx = _feval(f, combined)
            margin = float(bound - np.linalg.eigvalsh(fx)[-1])
            if margin < worst_margin:
                worst_margin = margin
                worst_pair = (f, bound, fx)
        f_bad, bound_bad, fx_bad = worst_pair
        scale = max(abs(bound_bad), _specnorm(fx_bad))
        if tr.classify(worst_margin, scale) == "violated":
            ce = Counterexample(
                kind="sublevel",
                dim=dim,
                function=f_bad.label,
                inputs={
                    "xs": [_wrap(x) for x in xs],
                    "coeffs": list(coeffs),
                    "bound_value": float(bound_bad),
                },
                lhs=_wrap(fx_bad),
                rhs=_wrap(bound_bad * np.eye(dim, dtype=np.complex128)),
                violation=worst_margin,
            )
            return tr.verdict(ce)
    return tr.verdict()


def embed_counterexample(ce: Counterexample, f: ScalarFunctionSpec, scalar: float) -> Counterexample:
    """Lift a midpoint or coefficient-tuple Jensen counterexample one
    dimension up by direct sum with a fixed scalar in f's domain.

    Operator convexity is inherited by compressions, so a violation at dim d
    embeds into dim d+1; the embedded instance is rebuilt and rechecked from
    scratch rather than assumed.
    """
    if ce.kind not in ("midpoint", "jensen"):
        raise InputError(f"embedding is not defined for kind {ce.kind!r}")
    if ce.kind == "jensen" and "coeffs" not in ce.inputs:
        raise InputError("only coefficient-tuple jensen counterexamples embed")
    if not f.domain.contains(scalar):
        raise DomainError(scalar, str(f.domain), f.label)

    def grow(x: np.ndarray, corner: complex) -> np.ndarray:
        d = x.shape[0]
        out = np.zeros((d + 1, d + 1), dtype=np.complex128)
        out[:d, :d] = x
        out[d, d] = corner
        return out

    xs = [grow(x.array, scalar) for x in ce.inputs["xs"]]
    if ce.kind == "midpoint":
        lhs = _feval(f, (xs[0] + xs[1]) / 2.0)
        rhs = (_feval(f, xs[0]) + _feval(f, xs[1])) / 2.0
        inputs = {"xs": [_wrap(x) for x in xs]}
    else:
        coeffs = [grow(c, 1.0 if i == 0 else 0.0) for i, c in enumerate(ce.inputs["coeffs"])]
        lhs = _feval(f, _combine_arr(coeffs, xs))
        rhs = _combine_arr(coeffs, [_feval(f, x) for x in xs])
        inputs = {"xs": [_wrap(x) for x in xs], "coeffs": coeffs}
    violation = _mineig(rhs - lhs)
    if not violation < 0:
        raise NumericalError("embedded instance no longer violates the inequality")
    return Counterexample(
        kind=ce.kind,
        dim=ce.dim + 1,
        function=ce.function,
        mode=ce.mode,
        inputs=inputs,
        lhs=_wrap(lhs),
        rhs=_wrap(rhs),
        violation=violation,
    )
