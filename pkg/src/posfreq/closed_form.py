"""Exact evaluators for the positive-frequency rectangle packet.

The field splits into a right-mover and a conjugated left-mover,

    Phi(x, t) = psi(x - t) + conj(psi(x + t)),

with ``psi`` built from real logarithms of absolute values and sign
functions. No complex logarithm is evaluated on the unregularized path, so
there is no branch cut to choose; the regularized form in
:func:`psi_plus_regularized` is the only place ``log`` sees a complex
argument, and there the argument always has positive imaginary part.

Conventions: ``sign(0) = 0`` and ``0 * ln 0 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DELTA_SING,
    PacketSpec,
    SingularKind,
    finalize,
    is_scalar,
)

_TWO_PI = 2.0 * np.pi
_FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class RegularizedPsiParams:
    eps: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f"regularization eps must be positive, got {self.eps!r}")


def _psi_raw(u, x0, b):
    """Right-mover values and singular mask (|u - x0 -+ b| < DELTA_SING)."""
    d = np.asarray(u, dtype=float) - x0
    lo = d + b
    hi = d - b
    singular = (np.abs(lo) < DELTA_SING) | (np.abs(hi) < DELTA_SING)
    re = (np.sign(lo) - np.sign(hi)) / (8.0 * b)
    with np.errstate(divide="ignore", invalid="ignore"):
        im = np.log(np.abs(lo) / np.abs(hi)) / (_FOUR_PI * b)
    im = np.where(singular, 0.0, im)
    return re + 1j * im, singular


def psi_plus(u, spec: PacketSpec):
    """Right-moving complex packet as a function of the co-moving argument.

    The real part is the local step ``1/(4b)`` on ``|u - x0| < b``; the
    imaginary part ``ln|(u-x0+b)/(u-x0-b)| / (4 pi b)`` is nonzero
    everywhere and decays like ``1 / (2 pi (u - x0))``.
    """
    vals, sing = _psi_raw(u, spec.x0, spec.b)
    return finalize(vals, sing, u, SingularKind.LOG_DIVERGENCE, is_scalar(u))


def psi_plus_regularized(u, spec: PacketSpec, reg: RegularizedPsiParams):
    """Right-mover at finite displacement ``eps`` into the upper half plane.

    Both logarithms are taken on the principal branch; since both arguments
    have imaginary part ``eps > 0`` this is the same sheet for both terms.
    Finite for every real ``u``.
    """
    d = np.asarray(u, dtype=float) - spec.x0
    b = spec.b
    z_lo = (d + b) + 1j * reg.eps
    z_hi = (d - b) + 1j * reg.eps
    vals = 1j / (_FOUR_PI * b) * (np.log(z_lo) - np.log(z_hi))
    return complex(vals) if is_scalar(u) else vals


def _phi_raw(x, t, x0, b):
    x = np.asarray(x, dtype=float)
    right, s1 = _psi_raw(x - t, x0, b)
    left, s2 = _psi_raw(x + t, x0, b)
    return right + np.conj(left), s1 | s2


def phi(x, t: float, spec: PacketSpec):
    """Positive-frequency field ``psi(x - t) + conj(psi(x + t))``.

    At ``t = 0`` the two imaginary tails cancel identically and the result
    is the rectangle of height ``1/(2b)``.
    """
    vals, sing = _phi_raw(x, t, spec.x0, spec.b)
    return finalize(vals, sing, x, SingularKind.LOG_DIVERGENCE, is_scalar(x))


def components(x, t: float, spec: PacketSpec):
    """Return ``(psi(x - t), conj(psi(x + t)))`` as masked arrays."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    right, s1 = _psi_raw(x - t, spec.x0, spec.b)
    left, s2 = _psi_raw(x + t, spec.x0, spec.b)
    kind = SingularKind.LOG_DIVERGENCE
    return (
        finalize(right, s1, x, kind, False),
        finalize(np.conj(left), s2, x, kind, False),
    )


def phi_time_derivative_t0(x, spec: PacketSpec):
    """Time derivative of the field at ``t = 0``; purely imaginary.

    Nonzero outside the packet and decaying like ``1/x**2``: the initial
    data is local but its time derivative is not.
    """
    d = np.asarray(x, dtype=float) - spec.x0
    b = spec.b
    hi = d - b
    lo = d + b
    sing = (np.abs(hi) < DELTA_SING) | (np.abs(lo) < DELTA_SING)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = 1j / (_TWO_PI * b) * (1.0 / hi - 1.0 / lo)
    vals = np.where(sing, 0.0, vals)
    return finalize(vals, sing, x, SingularKind.SIMPLE_POLE, is_scalar(x))


def rho_expectation(x, t: float, spec: PacketSpec):
    """Expectation of the localized number density ``a^dag(x) a(x)``.

    Equals ``2b |Phi(x, t)|**2``: the one-particle amplitude is the
    classical field rescaled from height ``1/(2b)`` to ``1/sqrt(2b)``.
    """
    vals, sing = _phi_raw(x, t, spec.x0, spec.b)
    dens = 2.0 * spec.b * (vals.real**2 + vals.imag**2)
    return finalize(dens, sing, x, SingularKind.LOG_DIVERGENCE, is_scalar(x))


def _energy_terms(x, spec: PacketSpec):
    u = np.asarray(x, dtype=float) - spec.x0
    b = spec.b
    am = np.abs(u - b)
    ap = np.abs(u + b)
    sing = (am < DELTA_SING) | (ap < DELTA_SING)
    sgn = np.sign(u - b) * np.sign(u + b)
    with np.errstate(divide="ignore", invalid="ignore"):
        poles = 1.0 / am + 1.0 / ap
        root = 1.0 / (np.sqrt(am) * np.sqrt(ap))
    return poles, root, sgn, sing


def energy_density_expectation(x, spec: PacketSpec):
    """Energy density ``<T00(x)>`` at ``t = 0``, cross term switched on inside.

    With ``u = x - x0``::

        (1/(4 pi b)) * (1/|u-b| + 1/|u+b|
                        - (1 - sgn(u-b) sgn(u+b)) / sqrt(|u-b| |u+b|))

    Zero at the centre, strictly positive for ``|u| > b`` with a ``1/u``
    tail. See :func:`energy_density_from_modes` for the value obtained by
    summing the mode integrals directly; the two differ in the sign
    multiplying the sign product.
    """
    poles, root, sgn, sing = _energy_terms(x, spec)
    with np.errstate(invalid="ignore"):
        vals = (poles - (1.0 - sgn) * root) / (_FOUR_PI * spec.b)
    vals = np.where(sing, 0.0, vals)
    return finalize(vals, sing, x, SingularKind.SIMPLE_POLE, is_scalar(x))


def energy_density_from_modes(x, spec: PacketSpec):
    """Energy density at ``t = 0`` from the normal-ordered mode integrals.

    The half-line integrals ``int_0^inf k**-0.5 exp(i k v) dk`` carry the
    phase ``exp(i pi sgn(v) / 4)``, so the cross term survives outside the
    packet and vanishes inside::

        (1/(4 pi b)) * (1/|u-b| + 1/|u+b|
                        - (1 + sgn(u-b) sgn(u+b)) / sqrt(|u-b| |u+b|))

    Positive everywhere, ``1/(2 pi b**2)`` at the centre, tail ``~ b/(4 pi u**3)``.
    """
    poles, root, sgn, sing = _energy_terms(x, spec)
    with np.errstate(invalid="ignore"):
        vals = (poles - (1.0 + sgn) * root) / (_FOUR_PI * spec.b)
    vals = np.where(sing, 0.0, vals)
    return finalize(vals, sing, x, SingularKind.SIMPLE_POLE, is_scalar(x))


def _xlog_abs(w):
    w = np.asarray(w, dtype=float)
    out = np.zeros_like(w)
    nz = w != 0
    out[nz] = w[nz] * np.log(np.abs(w[nz]))
    return out


def _psi2_raw(u, b):
    u = np.asarray(u, dtype=float)
    # (|u-2b| + |u+2b| - 2|u|) / (8b) written as the exact triangle
    re = np.maximum(0.0, 2.0 * b - np.abs(u)) / (4.0 * b)
    im = (_xlog_abs(u - 2 * b) + _xlog_abs(u + 2 * b) - 2.0 * _xlog_abs(u)) / (_FOUR_PI * b)
    return re + 1j * im


def psi2(u, b: float):
    """Overlap building block for two rectangles of common half-width ``b``.

    Real part: triangle of half-base ``2b`` and peak ``1/2``.
    Imaginary part: ``(w ln|w|)`` combined over ``w = u - 2b, u + 2b, u``
    with weights ``1, 1, -2``. The weights of the linear factors sum to
    zero, so the result does not depend on the length scale inside the
    logarithm; it is odd in ``u`` and ``~ b / (pi u)`` for ``|u| >> b``.
    """
    if not b > 0:
        raise ValueError(f"half-width must be positive, got {b!r}")
    vals = _psi2_raw(u, b)
    return complex(vals) if is_scalar(u) else vals


def overlap(t, detector: PacketSpec, source: PacketSpec):
    """Scalar product of the static detector packet with the evolved source.

    ``psi2(x1 - x0 - t) + conj(psi2(x1 - x0 + t))``. The real part is
    nonzero only while the causal transit ``|x1 - x0 - t| < 2b`` lasts; the
    imaginary part is nonzero for every ``t > 0``.
    """
    if detector.b != source.b:
        raise ValueError(
            f"detector and source must share a half-width, got {detector.b} and {source.b}"
        )
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("overlap is defined for t >= 0")
    d = detector.x0 - source.x0
    vals = _psi2_raw(d - t_arr, source.b) + np.conj(_psi2_raw(d + t_arr, source.b))
    return complex(vals) if is_scalar(t) else vals
