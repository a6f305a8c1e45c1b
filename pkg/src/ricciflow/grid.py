"""Discretization of the round sphere and its Mercator cylinder.

Latitude nodes are cell-centered, psi_j = -pi/2 + (j + 1/2) * h with
h = pi / n_cells, so no node sits on a pole and tan(psi), sec(psi) stay
finite everywhere.  Values beyond the poles are supplied by parity ghosts:
a meridian continued past a pole re-emerges at longitude theta + pi, so a
smooth field satisfies f(-pi/2 - d, theta) = f(-pi/2 + d, theta + pi).
Radial fields reflect without the theta shift; the ``parity`` tag of a
field chooses the sign picked up under that reflection (derivatives of
even fields are odd).

Differentiation uses 4th-order central stencils in psi (up to the third
derivative) and 2nd-order central differences in theta.  Surface
integrals use the midpoint rule against the cos(psi) area weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

__all__ = [
    "PsiGrid",
    "ThetaGrid",
    "ScalarField",
    "CylinderWindow",
    "d_dpsi",
    "laplacian_radial",
    "laplacian_full",
    "integrate_sphere",
    "to_cylinder",
    "gudermannian",
    "inverse_gudermannian",
]

# 4th-order central stencils; offsets -2..2 (-3..3 for the third derivative).
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D3 = np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0

_STENCILS = {1: _D1, 2: _D2, 3: _D3}
_PAD = 3  # widest half-stencil


@dataclass(frozen=True)
class PsiGrid:
    """Pole-avoiding, uniform, cell-centered latitude grid on (-pi/2, pi/2)."""

    n_cells: int

    def __post_init__(self):
        if self.n_cells < 8:
            raise ValueError(f"need at least 8 latitude cells, got {self.n_cells}")

    @cached_property
    def h(self) -> float:
        return np.pi / self.n_cells

    @cached_property
    def nodes(self) -> np.ndarray:
        return -np.pi / 2 + (np.arange(self.n_cells) + 0.5) * self.h

    @cached_property
    def cos(self) -> np.ndarray:
        return np.cos(self.nodes)

    @cached_property
    def sin(self) -> np.ndarray:
        return np.sin(self.nodes)

    @cached_property
    def tan(self) -> np.ndarray:
        return np.tan(self.nodes)

    @cached_property
    def sec(self) -> np.ndarray:
        return 1.0 / self.cos


@dataclass(frozen=True)
class ThetaGrid:
    """Periodic longitude grid, theta_k = k * 2pi / m_cells.

    m_cells must be even so the theta -> theta + pi pole reflection is an
    index roll.
    """

    m_cells: int

    def __post_init__(self):
        if self.m_cells < 4 or self.m_cells % 2:
            raise ValueError(f"m_cells must be even and >= 4, got {self.m_cells}")

    @cached_property
    def h(self) -> float:
        return 2.0 * np.pi / self.m_cells

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.arange(self.m_cells) * self.h


@dataclass(frozen=True)
class ScalarField:
    """Grid samples plus the reflection parity used for pole ghosts.

    1-D values live on a PsiGrid (radial field); 2-D values on
    PsiGrid x ThetaGrid with psi along axis 0.
    """

    values: np.ndarray
    parity: str = "even"

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")


def _pad_pole(values: np.ndarray, parity: str, width: int = _PAD) -> np.ndarray:
    """Extend values past both poles by parity reflection along axis 0.

    For 2-D fields the reflected rows are rolled by half a period in theta.
    """
    sign = 1.0 if parity == "even" else -1.0
    lo = values[:width][::-1]
    hi = values[-width:][::-1]
    if values.ndim == 2:
        half = values.shape[1] // 2
        lo = np.roll(lo, half, axis=1)
        hi = np.roll(hi, half, axis=1)
    return np.concatenate([sign * lo, values, sign * hi], axis=0)


def _apply_stencil(padded: np.ndarray, coeffs: np.ndarray, n: int) -> np.ndarray:
    """Dot a centered stencil with a pole-padded array along axis 0."""
    start = _PAD - len(coeffs) // 2
    out = coeffs[0] * padded[start : start + n]
    for k in range(1, len(coeffs)):
        if coeffs[k] != 0.0:
            out = out + coeffs[k] * padded[start + k : start + k + n]
    return out


def d_dpsi(f: ScalarField, g: PsiGrid, order: int = 1) -> ScalarField:
    """psi-derivative of the given order (1, 2 or 3), 4th-order accurate.

    Ghost values come from the parity reflection, so the stencil is exact
    for polynomials of degree <= 4 only away from the poles; for fields
    that are smooth on the sphere it is 4th-order accurate everywhere.
    """
    if order not in _STENCILS:
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    n = f.values.shape[0]
    if n != g.n_cells:
        raise ValueError(f"field has {n} latitude samples, grid has {g.n_cells}")
    padded = _pad_pole(f.values, f.parity)
    out = _apply_stencil(padded, _STENCILS[order], n) / g.h**order
    parity = f.parity if order % 2 == 0 else ("odd" if f.parity == "even" else "even")
    return ScalarField(out, parity)


def laplacian_radial(f: ScalarField, g: PsiGrid) -> ScalarField:
    """Round-sphere Laplacian of a radial field: f_psipsi - tan(psi) f_psi."""
    if f.values.ndim != 1:
        raise ValueError("laplacian_radial expects a radial (1-D) field")
    fp = d_dpsi(f, g, 1).values
    fpp = d_dpsi(f, g, 2).values
    return ScalarField(fpp - g.tan * fp, f.parity)


def laplacian_full(f: ScalarField, g: PsiGrid, tg: ThetaGrid) -> ScalarField:
    """Round-sphere Laplacian: f_psipsi - tan(psi) f_psi + sec^2(psi) f_thth."""
    if f.values.ndim != 2:
        raise ValueError("laplacian_full expects a 2-D field")
    if f.values.shape != (g.n_cells, tg.m_cells):
        raise ValueError(
            f"field shape {f.values.shape} does not match grid "
            f"({g.n_cells}, {tg.m_cells})"
        )
    fp = d_dpsi(f, g, 1).values
    fpp = d_dpsi(f, g, 2).values
    v = f.values
    ftt = (np.roll(v, -1, axis=1) - 2.0 * v + np.roll(v, 1, axis=1)) / tg.h**2
    lap = fpp - g.tan[:, None] * fp + g.sec[:, None] ** 2 * ftt
    return ScalarField(lap, f.parity)


def theta_derivative(f: ScalarField, tg: ThetaGrid) -> ScalarField:
    """2nd-order central theta-derivative of a 2-D field (periodic)."""
    v = f.values
    if v.ndim != 2:
        raise ValueError("theta_derivative expects a 2-D field")
    out = (np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)) / (2.0 * tg.h)
    return ScalarField(out, f.parity)


def integrate_sphere(f: ScalarField, g: PsiGrid, tg: ThetaGrid | None = None) -> float:
    """Midpoint-rule surface integral of f against da = cos(psi) dpsi dtheta.

    Radial fields are rotationally extended (factor 2*pi).
    """
    v = f.values
    if v.ndim == 1:
        return float(2.0 * np.pi * g.h * np.sum(v * g.cos))
    if tg is None:
        raise ValueError("2-D integration needs the theta grid")
    return float(g.h * tg.h * np.sum(v * g.cos[:, None]))


def gudermannian(x):
    """psi(x) = arctan(sinh x), written to avoid overflow for large |x|."""
    return 2.0 * np.arctan(np.tanh(np.asarray(x, dtype=float) / 2.0))


def inverse_gudermannian(psi):
    """x(psi) = arcsinh(tan psi)."""
    return np.arcsinh(np.tan(np.asarray(psi, dtype=float)))


@dataclass(frozen=True)
class CylinderWindow:
    """Uniform window in the Mercator coordinate x, for sampling only."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_max > self.x_min:
            raise ValueError(f"need x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if self.n < 2:
            raise ValueError("window needs at least 2 nodes")

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)


def to_cylinder(f: ScalarField, g: PsiGrid, window: CylinderWindow) -> np.ndarray:
    """Sample a radial field at psi(x) = arctan(sinh x) over the window.

    Uses monotone cubic (PCHIP) interpolation, which preserves positivity
    of pressure samples.  Raises if the window maps outside the node span.
    """
    if f.values.ndim != 1:
        raise ValueError("to_cylinder expects a radial field")
    psi = gudermannian(window.nodes)
    lo, hi = g.nodes[0], g.nodes[-1]
    if psi[0] < lo or psi[-1] > hi:
        x_lo, x_hi = inverse_gudermannian(lo), inverse_gudermannian(hi)
        raise ValueError(
            f"window [{window.x_min}, {window.x_max}] maps to psi range "
            f"[{psi[0]:.6f}, {psi[-1]:.6f}] outside grid coverage "
            f"[{lo:.6f}, {hi:.6f}] (resolvable x range [{x_lo:.4f}, {x_hi:.4f}])"
        )
    return PchipInterpolator(g.nodes, f.values)(psi)
