"""Linear stability of ring states: reduced 4x4 mode matrices and full Jacobians.

A mode-m perturbation moves particle j by h_j = xi_plus e^{i m theta_j}
+ xi_minus e^{-i m theta_j} (complex position offsets relative to the
ring).  Linearizing the dynamics in the co-rotating amplitudes
(xi_plus, conj(xi_minus)) and their time derivatives gives a 4x4 system
per mode whose first two rows are always [0 0 1 0], [0 0 0 1].

The position block is the symmetric 2x2 shape matrix
[[I1(m), I2(m)], [I2(m), I1(-m)]] built from pair-weight sums over the
ring chords; the velocity block encodes the damping mechanism:
self-propulsion (rank-1 per particle), velocity alignment (diagonal,
strictly negative for interior modes), or mill rotation (complex,
frequency-shifted).  The shape matrix being negative definite
(det > 0 and trace < 0) is equivalent to mode stability.

For cross-validation at small N the module also assembles the full
2N x 2N interaction Hessian and the 4N x 4N Jacobians, whose spectra
must agree in sign with the reduced criterion (theorem_witness).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .potentials import AlignmentKernel, Morse, PowerLaw, Propulsion
from .rings import RadiusProblem, ring_positions, solve_radius

__all__ = [
    "Classification",
    "ShapeMatrix",
    "ModeMatrix",
    "SpectralReport",
    "pair_weights",
    "mode_self_coupling",
    "mode_cross_coupling",
    "shape_matrix",
    "det_trace",
    "alignment_damping",
    "flock_mode_matrix",
    "cs_flock_mode_matrix",
    "mill_mode_matrix",
    "eig4",
    "classify",
    "mode_envelope",
    "det_asymptotics",
    "full_hessian",
    "full_flock_jacobian",
    "full_cs_jacobian",
    "dense_eigvals",
    "theorem_witness",
]


class Classification(str, Enum):
    """Outcome of a stability check.  Marginal is reported, never coerced."""

    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"
    INVALID = "invalid"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ShapeMatrix:
    """Symmetric 2x2 position block of a mode matrix."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (2, 2):
            raise ValueError("shape matrix must be 2x2")
        if not np.all(np.isfinite(e)):
            raise ValueError("shape matrix entries must be finite")
        if e[0, 1] != e[1, 0]:
            raise ValueError("shape matrix must have equal off-diagonal entries")
        object.__setattr__(self, "entries", e)


@dataclass(frozen=True)
class ModeMatrix:
    """4x4 linearization of one perturbation mode.

    ``model`` is one of ``"flock"``, ``"flock-cs"``, ``"mill"``; ``params``
    snapshots the inputs (a, b, n, m, radius, and alpha/gamma/omega/speed
    as applicable).  Rows 1-2 are the identity coupling of positions to
    velocities; only the mill variant is complex (when omega != 0).
    """

    entries: np.ndarray
    model: str
    params: dict

    def __post_init__(self):
        e = np.asarray(self.entries)
        if e.shape != (4, 4):
            raise ValueError("mode matrix must be 4x4")
        top = np.array([[0, 0, 1, 0], [0, 0, 0, 1]], dtype=e.dtype)
        if not np.array_equal(e[:2], top):
            raise ValueError("mode matrix rows 1-2 must be [0 0 1 0], [0 0 0 1]")
        object.__setattr__(self, "entries", e)

    @property
    def max_norm(self):
        return float(np.max(np.abs(self.entries)))


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalues and verdict for one mode."""

    m: int
    eigenvalues: tuple
    max_real: float
    classification: Classification


def _require_powerlaw(a, b):
    if not (a > b > 0):
        raise ValueError(f"power-law exponents need a > b > 0, got a={a}, b={b}")


def pair_weights(a, b, radius, n, p):
    """Per-chord weights (w1, w2) entering the mode coupling sums.

    With d = 2 radius sin(p pi / n) the weights are
    w1 = (-a d^(a-2) + b d^(b-2)) / (2n) and
    w2 = (-(a-2) d^(a-2) + (b-2) d^(b-2)) / (2n); w1 multiplies the
    self-coupling phase factors, w2 the cross-coupling ones.
    """
    _require_powerlaw(a, b)
    if not 1 <= p <= n - 1:
        raise ValueError("chord index p must satisfy 1 <= p <= n-1")
    d = 2.0 * radius * math.sin(p * math.pi / n)
    da = d ** (a - 2.0)
    db = d ** (b - 2.0)
    w1 = (-a * da + b * db) / (2.0 * n)
    w2 = (-(a - 2.0) * da + (b - 2.0) * db) / (2.0 * n)
    return w1, w2


def _checked_real_sum(re_terms, im_terms, label):
    re = math.fsum(re_terms)
    im = math.fsum(im_terms)
    if not abs(im) < 1e-10 * abs(re) + 1e-14:
        raise ArithmeticError(
            f"{label}: imaginary part {im:.3e} not negligible against {re:.3e}"
        )
    return re


def mode_self_coupling(a, b, radius, n, m):
    """Diagonal entry I1(m) of the shape matrix (I1(-m) for negated m).

    Defined through a complex phase sum whose imaginary part cancels by
    the p <-> n-p symmetry; the cancellation is asserted, then discarded.
    """
    _require_powerlaw(a, b)
    w1 = [pair_weights(a, b, radius, n, p)[0] for p in range(1, n)]
    ang = [2.0 * math.pi * p * (m + 1) / n for p in range(1, n)]
    re = [w * (1.0 - math.cos(t)) for w, t in zip(w1, ang)]
    im = [-w * math.sin(t) for w, t in zip(w1, ang)]
    return _checked_real_sum(re, im, "mode_self_coupling")


def mode_cross_coupling(a, b, radius, n, m):
    """Off-diagonal entry I2(m) of the shape matrix; even in m, zero at m=1."""
    _require_powerlaw(a, b)
    w2 = [pair_weights(a, b, radius, n, p)[1] for p in range(1, n)]
    re = []
    im = []
    for p, w in zip(range(1, n), w2):
        tm = 2.0 * math.pi * p * m / n
        t1 = 2.0 * math.pi * p / n
        re.append(w * (math.cos(tm) - math.cos(t1)))
        im.append(w * (math.sin(tm) - math.sin(t1)))
    return _checked_real_sum(re, im, "mode_cross_coupling")


# ---------------------------------------------------------------------------
# fast all-modes route: cosine transforms of the weight vectors
# ---------------------------------------------------------------------------


def _fold(k, n):
    """Map any integer phase index onto the rfft bin range [0, n//2]."""
    k = np.asarray(k) % n
    return np.minimum(k, n - k)


def _weight_vectors(a, b, radius, n):
    p = np.arange(1, n)
    d = 2.0 * radius * np.sin(p * np.pi / n)
    da = d ** (a - 2.0)
    db = d ** (b - 2.0)
    w1 = np.zeros(n)
    w2 = np.zeros(n)
    w1[1:] = (-a * da + b * db) / (2.0 * n)
    w2[1:] = (-(a - 2.0) * da + (b - 2.0) * db) / (2.0 * n)
    return w1, w2


def _coupling_tables(a, b, radius, n):
    """Cosine sums c[k] = sum_p w_p cos(2 pi p k / n) for both weights.

    I1(m) = c1[0] - c1[fold(m+1)]; I2(m) = c2[fold(m)] - c2[1].
    Agrees with the direct-summation route to roundoff (tested).
    """
    w1, w2 = _weight_vectors(a, b, radius, n)
    return np.fft.rfft(w1).real, np.fft.rfft(w2).real


def _couplings_from_tables(c1, c2, n, ms):
    ms = np.asarray(ms)
    i1_plus = c1[0] - c1[_fold(ms + 1, n)]
    i1_minus = c1[0] - c1[_fold(ms - 1, n)]
    i2 = c2[_fold(ms, n)] - c2[1]
    return i1_plus, i1_minus, i2


def _ring_radius(potential, n, speed):
    return solve_radius(RadiusProblem(potential=potential, n=n, speed=speed)).radius


def shape_matrix(a, b, n, m, speed=0.0):
    """Shape matrix [[I1(m), I2(m)], [I2(m), I1(-m)]] at the solved radius.

    ``speed`` > 0 solves the mill radius (centrifugal balance) first;
    speed 0 gives the flock ring.
    """
    R = _ring_radius(PowerLaw(a, b), n, speed)
    i1p = mode_self_coupling(a, b, R, n, m)
    i1m = mode_self_coupling(a, b, R, n, -m)
    i2 = mode_cross_coupling(a, b, R, n, m)
    return ShapeMatrix(entries=np.array([[i1p, i2], [i2, i1m]]))


def det_trace(sm):
    """Determinant and trace of a shape matrix; stability needs D>0 and T<0."""
    e = sm.entries
    return (
        float(e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]),
        float(e[0, 0] + e[1, 1]),
    )


def alignment_damping(gamma, radius, n, m, sign):
    """Velocity-alignment damping J_+ (sign=+1) or J_- (sign=-1) at mode m.

    (1/n) sum_p g(d_p) (cos(2 pi p (m+sign)/n) - 1) with d_p the true
    chord length 2 radius sin(p pi / n); each term is <= 0.  The phase
    sum's imaginary part cancels by symmetry and is asserted negligible.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    kernel = AlignmentKernel(gamma)
    re = []
    im = []
    for p in range(1, n):
        d = 2.0 * radius * math.sin(p * math.pi / n)
        g = float(kernel.value(d))
        t = 2.0 * math.pi * p * (m + sign) / n
        re.append(g * (math.cos(t) - 1.0))
        im.append(g * math.sin(t))
    return _checked_real_sum(re, im, "alignment_damping") / n


def _top_rows(dtype):
    top = np.zeros((2, 4), dtype=dtype)
    top[0, 2] = 1.0
    top[1, 3] = 1.0
    return top


def flock_mode_matrix(a, b, n, m, prop):
    """Mode matrix for the self-propelled flock ring.

    Rows 3-4: [I1(m), I2(m), -alpha, -alpha], [I2(m), I1(-m), -alpha,
    -alpha].  The velocity block is the rank-1 propulsion damping
    projected onto the mode amplitudes; its trace -2 alpha matches
    -2 beta |u0|^2, so only alpha enters.
    """
    if not isinstance(prop, Propulsion):
        raise TypeError("prop must be a Propulsion")
    R = _ring_radius(PowerLaw(a, b), n, 0.0)
    i1p = mode_self_coupling(a, b, R, n, m)
    i1m = mode_self_coupling(a, b, R, n, -m)
    i2 = mode_cross_coupling(a, b, R, n, m)
    al = prop.alpha
    entries = np.vstack(
        [
            _top_rows(float),
            np.array([[i1p, i2, -al, -al], [i2, i1m, -al, -al]]),
        ]
    )
    return ModeMatrix(
        entries=entries,
        model="flock",
        params={"a": a, "b": b, "n": n, "m": m, "radius": R, "alpha": al},
    )


def cs_flock_mode_matrix(a, b, n, m, gamma):
    """Mode matrix for the flock ring with velocity-alignment coupling.

    Rows 3-4: [I1(m), I2(m), J+(m), 0], [I2(m), I1(-m), 0, J-(m)];
    the velocity block is diagonal by construction.
    """
    if isinstance(gamma, AlignmentKernel):
        gamma = gamma.gamma
    R = _ring_radius(PowerLaw(a, b), n, 0.0)
    i1p = mode_self_coupling(a, b, R, n, m)
    i1m = mode_self_coupling(a, b, R, n, -m)
    i2 = mode_cross_coupling(a, b, R, n, m)
    jp = alignment_damping(gamma, R, n, m, +1)
    jm = alignment_damping(gamma, R, n, m, -1)
    entries = np.vstack(
        [
            _top_rows(float),
            np.array([[i1p, i2, jp, 0.0], [i2, i1m, 0.0, jm]]),
        ]
    )
    return ModeMatrix(
        entries=entries,
        model="flock-cs",
        params={"a": a, "b": b, "n": n, "m": m, "radius": R, "gamma": gamma},
    )


def mill_mode_matrix(a, b, n, m, alpha, speed):
    """Mode matrix for the rotating mill ring (counter-clockwise, omega > 0).

    Rows 3-4:
      [-i omega alpha + omega^2 + I1(m), -i omega alpha + I2(m), -alpha - 2 i omega, alpha]
      [ i omega alpha + I2(m),  i omega alpha + omega^2 + I1(-m), alpha, -alpha + 2 i omega]
    Real at speed 0, where the velocity block degenerates to
    [[-alpha, alpha], [alpha, -alpha]].
    """
    if not alpha > 0:
        raise ValueError("need alpha > 0")
    if speed < 0:
        raise ValueError("speed must be nonnegative")
    R = _ring_radius(PowerLaw(a, b), n, speed)
    w = speed / R
    i1p = mode_self_coupling(a, b, R, n, m)
    i1m = mode_self_coupling(a, b, R, n, -m)
    i2 = mode_cross_coupling(a, b, R, n, m)
    if speed == 0.0:
        rows = np.array(
            [[i1p, i2, -alpha, alpha], [i2, i1m, alpha, -alpha]], dtype=float
        )
        entries = np.vstack([_top_rows(float), rows])
    else:
        rows = np.array(
            [
                [
                    -1j * w * alpha + w * w + i1p,
                    -1j * w * alpha + i2,
                    -alpha - 2j * w,
                    alpha,
                ],
                [
                    1j * w * alpha + i2,
                    1j * w * alpha + w * w + i1m,
                    alpha,
                    -alpha + 2j * w,
                ],
            ],
            dtype=complex,
        )
        entries = np.vstack([_top_rows(complex), rows])
    return ModeMatrix(
        entries=entries,
        model="mill",
        params={
            "a": a,
            "b": b,
            "n": n,
            "m": m,
            "radius": R,
            "alpha": alpha,
            "speed": speed,
            "omega": w,
        },
    )


def eig4(mat):
    """Eigenvalues of a 4x4 mode matrix, sorted by descending real part.

    Contract (tested): each eigenvalue leaves (mat - lambda I) with
    smallest singular value below 1e-9 times the matrix max-norm, and
    the eigenvalue sum/product reconstruct trace/determinant to 1e-9
    relative.
    """
    entries = mat.entries if isinstance(mat, ModeMatrix) else np.asarray(mat)
    if entries.shape != (4, 4):
        raise ValueError("eig4 expects a 4x4 matrix")
    if not np.all(np.isfinite(entries)):
        raise ValueError("eig4 needs finite entries")
    try:
        vals = np.linalg.eigvals(entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy converges here
        raise ArithmeticError(f"eigenvalue iteration failed: {exc}") from exc
    order = np.lexsort((-vals.imag, -vals.real))
    return vals[order]


def classify(eigenvalues, tol=1e-8, forced=()):
    """Stability verdict from eigenvalue real parts.

    Unstable if some real part exceeds tol; stable if all lie below
    -tol, or if every eigenvalue inside the band matches one of the
    ``forced`` structurally-required values (zero modes and undamped
    oscillation pairs known analytically); otherwise marginal.
    """
    vals = np.asarray(eigenvalues, dtype=complex)
    max_re = float(np.max(vals.real))
    if max_re > tol:
        return Classification.UNSTABLE
    if max_re < -tol:
        return Classification.STABLE
    if len(forced):
        banded = vals[vals.real >= -tol]
        match_tol = 100.0 * tol
        targets = np.asarray(forced, dtype=complex)
        if all(np.min(np.abs(targets - lam)) <= match_tol for lam in banded):
            return Classification.STABLE
    return Classification.MARGINAL


def _forced_modes(model, n, m, i1p, i2):
    """Structurally-required neutral eigenvalues for the flock variants.

    m = 1 carries the rotation/translation zero mode; the self-conjugate
    mode 2m = 0 (mod n) of the propulsion flock decouples an undamped
    oscillation pair +- i sqrt(-(I1 - I2)).  Mill matrices never get a
    forced list: their near-zero modes are reported marginal.
    """
    if model == "mill":
        return ()
    forced = []
    if m % n in (1, n - 1):
        forced.append(0.0)
    if model == "flock" and (2 * m) % n == 0:
        mu_anti = i1p - i2
        if mu_anti < 0:
            s = math.sqrt(-mu_anti)
            forced.extend([1j * s, -1j * s])
    return tuple(forced)


def _report(mat):
    vals = eig4(mat)
    p = mat.params
    tol = 1e-8 * max(1.0, mat.max_norm)
    # the (3,1)/(3,2) entries are I1(m)/I2(m) for the flock variants,
    # which is all _forced_modes needs (mill gets no forced list)
    i1p = float(np.real(mat.entries[2, 0]))
    i2 = float(np.real(mat.entries[2, 1]))
    forced = _forced_modes(mat.model, p["n"], p["m"], i1p, i2)
    return SpectralReport(
        m=p["m"],
        eigenvalues=tuple(vals),
        max_real=float(np.max(vals.real)),
        classification=classify(vals, tol=tol, forced=forced),
    )


def _stacked_mode_matrices(model, a, b, n, R, ms, alpha, gamma, omega):
    """Assemble matrices for many modes at once from the cosine tables."""
    c1, c2 = _coupling_tables(a, b, R, n)
    i1p, i1m, i2 = _couplings_from_tables(c1, c2, n, ms)
    k = len(ms)
    if model == "mill" and omega != 0.0:
        A = np.zeros((k, 4, 4), dtype=complex)
    else:
        A = np.zeros((k, 4, 4))
    A[:, 0, 2] = 1.0
    A[:, 1, 3] = 1.0
    if model == "flock":
        A[:, 2, 0] = i1p
        A[:, 2, 1] = i2
        A[:, 2, 2] = A[:, 2, 3] = -alpha
        A[:, 3, 0] = i2
        A[:, 3, 1] = i1m
        A[:, 3, 2] = A[:, 3, 3] = -alpha
    elif model == "flock-cs":
        kernel = AlignmentKernel(gamma)
        p = np.arange(1, n)
        gv = np.zeros(n)
        gv[1:] = kernel.value(2.0 * R * np.sin(p * np.pi / n))
        gc = np.fft.rfft(gv).real / n
        jp = gc[_fold(np.asarray(ms) + 1, n)] - gc[0]
        jm = gc[_fold(np.asarray(ms) - 1, n)] - gc[0]
        A[:, 2, 0] = i1p
        A[:, 2, 1] = i2
        A[:, 2, 2] = jp
        A[:, 3, 0] = i2
        A[:, 3, 1] = i1m
        A[:, 3, 3] = jm
    elif model == "mill" and omega == 0.0:
        A[:, 2, 0] = i1p
        A[:, 2, 1] = i2
        A[:, 2, 2] = -alpha
        A[:, 2, 3] = alpha
        A[:, 3, 0] = i2
        A[:, 3, 1] = i1m
        A[:, 3, 2] = alpha
        A[:, 3, 3] = -alpha
    elif model == "mill":
        w = omega
        A[:, 2, 0] = -1j * w * alpha + w * w + i1p
        A[:, 2, 1] = -1j * w * alpha + i2
        A[:, 2, 2] = -alpha - 2j * w
        A[:, 2, 3] = alpha
        A[:, 3, 0] = 1j * w * alpha + i2
        A[:, 3, 1] = 1j * w * alpha + w * w + i1m
        A[:, 3, 2] = alpha
        A[:, 3, 3] = -alpha + 2j * w
    else:
        raise ValueError(f"unknown model {model!r}")
    return A, i1p, i1m, i2


_ENVELOPE_MODELS = ("flock", "flock-cs", "mill")


def mode_envelope(
    model, a, b, n, *, alpha=1.0, gamma=1.0, speed=0.0, m_min=2, m_max=None
):
    """Classify every mode in [m_min, m_max] and summarize the worst one.

    Returns (summary, reports): ``summary`` carries the argmax mode, its
    eigenvalues, and the aggregate verdict (stable only if every mode is
    stable; unstable if any is).  The default m_max is (n-1)//2, the
    largest mode below the self-conjugate wavelength, so the aggregate
    isn't polluted by the structurally neutral half-wavelength mode on
    even n; pass m_max explicitly to include it.
    """
    if model not in _ENVELOPE_MODELS:
        raise ValueError(f"model must be one of {_ENVELOPE_MODELS}")
    if m_max is None:
        m_max = (n - 1) // 2
    if not 2 <= m_min <= m_max:
        raise ValueError("need 2 <= m_min <= m_max")
    if model == "mill":
        R = _ring_radius(PowerLaw(a, b), n, speed)
        omega = speed / R
    else:
        R = _ring_radius(PowerLaw(a, b), n, 0.0)
        omega = 0.0
    ms = np.arange(m_min, m_max + 1)
    A, i1p, i1m, i2 = _stacked_mode_matrices(
        model, a, b, n, R, ms, alpha, gamma, omega
    )
    vals = np.linalg.eigvals(A)
    max_re = vals.real.max(axis=1)
    norms = np.maximum(1.0, np.abs(A).max(axis=(1, 2)))
    reports = []
    for idx, m in enumerate(ms):
        forced = _forced_modes(model, n, int(m), float(i1p[idx]), float(i2[idx]))
        row = vals[idx]
        row = row[np.lexsort((-row.imag, -row.real))]
        reports.append(
            SpectralReport(
                m=int(m),
                eigenvalues=tuple(row),
                max_real=float(max_re[idx]),
                classification=classify(
                    row, tol=1e-8 * norms[idx], forced=forced
                ),
            )
        )
    worst_idx = int(np.argmax(max_re))
    kinds = [r.classification for r in reports]
    if Classification.UNSTABLE in kinds:
        overall = Classification.UNSTABLE
    elif all(k == Classification.STABLE for k in kinds):
        overall = Classification.STABLE
    else:
        overall = Classification.MARGINAL
    worst = reports[worst_idx]
    summary = SpectralReport(
        m=worst.m,
        eigenvalues=worst.eigenvalues,
        max_real=worst.max_real,
        classification=overall,
    )
    return summary, reports


def _shape_mu_envelope(a, b, n, m_min=2, m_max=None, speed=0.0):
    """Largest shape-matrix eigenvalue per mode (the D/T criterion route).

    Returns (ms, mu1, tol) arrays; mu1[m] > tol means the positions-only
    criterion (det > 0 and trace < 0) fails for that mode.  Used by the
    flock region scans and the separatrix bisection, where the full 4x4
    spectrum adds nothing but cost.
    """
    if m_max is None:
        m_max = (n - 1) // 2
    R = _ring_radius(PowerLaw(a, b), n, speed)
    c1, c2 = _coupling_tables(a, b, R, n)
    ms = np.arange(m_min, m_max + 1)
    i1p, i1m, i2 = _couplings_from_tables(c1, c2, n, ms)
    half_diff = 0.5 * (i1p - i1m)
    mu1 = 0.5 * (i1p + i1m) + np.sqrt(half_diff * half_diff + i2 * i2)
    norms = np.maximum(1.0, np.maximum(np.abs(i1p), np.maximum(np.abs(i1m), np.abs(i2))))
    return ms, mu1, 1e-8 * norms


def det_asymptotics(a, b, n, m_values):
    """det(shape matrix) over the modes plus the log-log decay slope.

    Returns (table, slope) with table rows (m, det).  The determinant
    decays like a power of m with exponent 1-b for b in (1,2), so there
    is no spectral gap at large mode numbers.
    """
    R = _ring_radius(PowerLaw(a, b), n, 0.0)
    c1, c2 = _coupling_tables(a, b, R, n)
    ms = np.asarray(sorted(int(m) for m in m_values))
    if np.any(ms < 2) or np.any(ms > n - 2):
        raise ValueError("modes must lie in [2, n-2]")
    i1p, i1m, i2 = _couplings_from_tables(c1, c2, n, ms)
    dets = i1p * i1m - i2 * i2
    slope = float(np.polyfit(np.log(ms), np.log(np.abs(dets)), 1)[0])
    return [(int(m), float(d)) for m, d in zip(ms, dets)], slope


# ---------------------------------------------------------------------------
# full-system oracle
# ---------------------------------------------------------------------------


def full_hessian(potential, positions):
    """2N x 2N interaction Hessian at the given configuration.

    Block (j,l), j != l, is hess(k)(x_j - x_l)/N where hess(k) is the
    second derivative of the radial pair potential; diagonal blocks are
    minus the row sums, so rigid translations are in the kernel exactly
    and the matrix is symmetric by construction.
    """
    if not isinstance(potential, (PowerLaw, Morse)):
        raise TypeError("potential must be PowerLaw or Morse")
    x = np.asarray(positions, dtype=float)
    n = x.shape[0]
    H = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for l in range(n):
            if l == j:
                continue
            dx = x[j] - x[l]
            r = float(np.hypot(dx[0], dx[1]))
            rhat = dx / r
            kd = float(potential.deriv(r))
            kdd = float(potential.second_deriv(r))
            block = kdd * np.outer(rhat, rhat) + (kd / r) * (
                np.eye(2) - np.outer(rhat, rhat)
            )
            block /= n
            H[2 * j : 2 * j + 2, 2 * l : 2 * l + 2] = block
            H[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] -= block
    return H


def full_flock_jacobian(hessian, prop, direction=(1.0, 0.0)):
    """4N x 4N Jacobian [[0, Id], [hessian, -2 beta u0 u0^T]] of the flock.

    The drift direction is rotated to the first axis by default; the
    per-particle damping block is -2 alpha e e^T with e the unit drift
    direction (beta |u0|^2 = alpha).
    """
    H = np.asarray(hessian, dtype=float)
    two_n = H.shape[0]
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    damp = -2.0 * prop.alpha * np.outer(e, e)
    L = np.zeros((2 * two_n, 2 * two_n))
    L[:two_n, two_n:] = np.eye(two_n)
    L[two_n:, :two_n] = H
    for j in range(two_n // 2):
        L[two_n + 2 * j : two_n + 2 * j + 2, two_n + 2 * j : two_n + 2 * j + 2] = damp
    return L


def full_cs_jacobian(hessian, kernel, positions):
    """4N x 4N Jacobian [[0, Id], [hessian, -G]] of the alignment flock.

    (G v)_j = (1/N) sum_l g(|x_j - x_l|)(v_j - v_l); G is positive
    semi-definite with kernel spanned by the two rigid translations.
    """
    H = np.asarray(hessian, dtype=float)
    x = np.asarray(positions, dtype=float)
    n = x.shape[0]
    if H.shape[0] != 2 * n:
        raise ValueError("hessian size does not match positions")
    G = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for l in range(n):
            if l == j:
                continue
            g = float(kernel.value(float(np.hypot(*(x[j] - x[l]))))) / n
            G[2 * j, 2 * l] -= g
            G[2 * j + 1, 2 * l + 1] -= g
            G[2 * j, 2 * j] += g
            G[2 * j + 1, 2 * j + 1] += g
    L = np.zeros((4 * n, 4 * n))
    L[: 2 * n, 2 * n :] = np.eye(2 * n)
    L[2 * n :, : 2 * n] = H
    L[2 * n :, 2 * n :] = -G
    return L


def dense_eigvals(matrix):
    """Eigenvalues of a real matrix up to 128 x 128.

    Symmetric inputs (to 1e-12 relative) take the symmetric path and
    return real eigenvalues sorted descending; general inputs return
    complex eigenvalues sorted by descending real part.  Same residual
    contract as eig4.
    """
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("dense_eigvals expects a square matrix")
    if A.shape[0] > 128:
        raise ValueError("dense_eigvals is capped at 128 x 128")
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.T)) <= 1e-12 * scale:
        vals = np.linalg.eigvalsh(A)
        return vals[::-1]
    vals = np.linalg.eigvals(A)
    order = np.lexsort((-vals.imag, -vals.real))
    return vals[order]


def theorem_witness(a, b, n, coupling):
    """Check reduced-vs-full stability agreement at one small-N ring.

    Builds the flock ring, its interaction Hessian, and the full Jacobian
    for the given coupling (Propulsion or AlignmentKernel).  ``agree``
    states that the Hessian has a positive eigenvalue exactly when the
    Jacobian has an eigenvalue with positive real part, with tolerance
    bands wide enough to absorb the forced zero modes (translations and
    rotation, whose defective zeros split by roughly sqrt(eps) under
    finite-precision eigensolvers; hence the wider 1e-6 band on L).
    """
    if n > 32:
        raise ValueError("theorem_witness is a small-N oracle; use n <= 32")
    pot = PowerLaw(a, b)
    sol = solve_radius(RadiusProblem(potential=pot, n=n, speed=0.0))
    x = ring_positions(sol)
    H = full_hessian(pot, x)
    if isinstance(coupling, Propulsion):
        L = full_flock_jacobian(H, coupling)
    elif isinstance(coupling, AlignmentKernel):
        L = full_cs_jacobian(H, coupling, x)
    else:
        raise TypeError("coupling must be Propulsion or AlignmentKernel")
    mu = dense_eigvals(H)
    mu1 = float(mu[0])
    lam = np.linalg.eigvals(L)
    max_re = float(np.max(lam.real))
    tol_mu = 1e-8 * max(1.0, float(np.max(np.abs(H))))
    tol_l = 1e-6 * max(1.0, float(np.max(np.abs(L))))
    return {
        "mu1": mu1,
        "max_re_L": max_re,
        "agree": (mu1 > tol_mu) == (max_re > tol_l),
        "tol_mu": tol_mu,
        "tol_L": tol_l,
    }
