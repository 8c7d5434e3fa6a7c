"""Isolated bimodal solutions with unevenly distributed energy.

For a mode pair ``(n1, n2)`` the v/u coefficient ratios on each mode are
roots of unit-product quadratics derived from

    zeta = lam2 / lam1,    sigma = (k - lam1*lam2) / k,
    Phi = ((zeta+1) + (zeta-1) sigma^2) / (sigma zeta),
    Psi = ((zeta+1) - (zeta-1) sigma^2) / sigma.

``X, Y`` are the roots of ``q^2 - Phi q + 1 = 0`` (``X`` on the ``+sqrt``
branch) and ``W, Z`` the roots of ``q^2 - Psi q + 1 = 0``.  The axial
tensions of a solution are then pinned to

    f = (k X - lam1^2 - k) / lam1 = (k W - lam2^2 - k) / lam2,
    g = (k Y - lam1^2 - k) / lam1 = (k Z - lam2^2 - k) / lam2,

and the u-amplitudes ``(r, t)`` solve one of two circle-ellipse systems.
Solvability is gated by the thresholds ``m_small`` and ``m_big``:
four sign-symmetric roots exist per system exactly when

* ``lam1*lam2 in (k, 2k)``      and ``m_small < -beta < m_big``, or
* ``lam1*(lam2-lam1) > 2k``     and ``m_big < -beta``.

The equality seams ``lam1*lam2 == 2k`` and ``lam1*(lam2-lam1) == 2k``
collapse ``X == Y``; there the solutions merge into the EE continua and
are reported as ee-degenerate instead of being solved here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ModalSolution, Params
from .modesets import _rel_eq, effective_modes
from .spectrum import Spectrum

SEAM_RTOL = 1e-12


@dataclass(frozen=True)
class BimodalInvariants:
    pair: tuple[int, int]
    lam1: float
    lam2: float
    zeta: float
    sigma: float
    Phi: float
    Psi: float
    X: float
    Y: float
    W: float
    Z: float
    f: float
    g: float
    m_small: float
    m_big: float
    nu_shift: float  # k (X - Y) / (varrho lam1^2), the circle/ellipse offset


@dataclass(frozen=True)
class CircleEllipseSolutions:
    which: str  # "SIS1" | "SIS2"
    roots: tuple[tuple[float, float], ...]
    ee_degenerate: bool = False


def _unit_product_roots(s: float) -> tuple[float, float] | None:
    """Real roots of ``q^2 - s q + 1 = 0`` as (plus-branch, minus-branch).

    The larger-magnitude root is computed first and its partner recovered
    via the unit product, avoiding cancellation; a discriminant within
    ``-1e-12`` of zero (relative) is clamped to zero.
    """
    disc = s * s - 4.0
    if disc < 0.0:
        if disc > -1e-12 * max(1.0, s * s):
            disc = 0.0
        else:
            return None
    root = math.sqrt(disc)
    if s >= 0.0:
        big = 0.5 * (s + root)
        return big, 1.0 / big
    big = 0.5 * (s - root)
    return 1.0 / big, big


def compute_invariants(p: Params, spec: Spectrum, pair: tuple[int, int]) -> BimodalInvariants | None:
    """Derived algebra for a mode pair, or ``None`` when it cannot carry
    real coefficient ratios (product in ``(0, k)`` without the gap
    alternative, or the degenerate ``lam1*lam2 == k``)."""
    n1, n2 = pair
    if not n1 < n2:
        raise ValueError("pair must be strictly increasing")
    lam1 = spec.eigenvalue(n1)
    lam2 = spec.eigenvalue(n2)
    k = p.k
    prod = lam1 * lam2
    gap = lam1 * (lam2 - lam1)
    if _rel_eq(prod, k, SEAM_RTOL):
        return None
    if not (0.0 < prod <= 2.0 * k or gap >= 2.0 * k):
        return None
    zeta = lam2 / lam1
    sigma = (k - prod) / k
    Phi = ((zeta + 1.0) + (zeta - 1.0) * sigma * sigma) / (sigma * zeta)
    Psi = ((zeta + 1.0) - (zeta - 1.0) * sigma * sigma) / sigma
    xy = _unit_product_roots(Phi)
    wz = _unit_product_roots(Psi)
    if xy is None or wz is None:
        return None
    X, Y = xy
    W, Z = wz
    f = (k * X - lam1 * lam1 - k) / lam1
    g = (k * Y - lam1 * lam1 - k) / lam1
    m_small = (k * k + k * lam2 * (lam2 - lam1) + prod * prod) / ((prod - k) * lam2)
    m_big = (k * k - k * lam1 * (lam2 - lam1) + prod * prod) / ((prod - k) * lam1)
    nu_shift = k * (X - Y) / (p.varrho * lam1 * lam1)
    return BimodalInvariants(
        (n1, n2), lam1, lam2, zeta, sigma, Phi, Psi, X, Y, W, Z, f, g, m_small, m_big, nu_shift
    )


def _on_ee_seam(inv: BimodalInvariants, k: float) -> bool:
    prod = inv.lam1 * inv.lam2
    gap = inv.lam1 * (inv.lam2 - inv.lam1)
    return _rel_eq(prod, 2.0 * k, SEAM_RTOL) or _rel_eq(gap, 2.0 * k, SEAM_RTOL)


def _solvable(inv: BimodalInvariants, p: Params) -> bool:
    prod = inv.lam1 * inv.lam2
    gap = inv.lam1 * (inv.lam2 - inv.lam1)
    mb = -p.beta
    if p.k < prod < 2.0 * p.k:
        return inv.m_small < mb < inv.m_big
    if gap > 2.0 * p.k:
        return inv.m_big < mb
    return False


def solve_circle_ellipse(inv: BimodalInvariants, p: Params, which: str) -> CircleEllipseSolutions:
    """Solve the selected circle-ellipse system for ``(r, t)``.

    Returns the four sign-symmetric roots when the solvability window is
    open, an empty root list when it is closed, and an ``ee_degenerate``
    marker on the equality seams (those belong to the EE families).
    """
    if which not in ("SIS1", "SIS2"):
        raise ValueError("which must be 'SIS1' or 'SIS2'")
    if _on_ee_seam(inv, p.k):
        return CircleEllipseSolutions(which, (), ee_degenerate=True)
    if not _solvable(inv, p):
        return CircleEllipseSolutions(which, ())
    scale = p.varrho * inv.lam1
    F = (inv.f - p.beta) / scale
    G = (inv.g - p.beta) / scale
    if which == "SIS1":
        den = inv.W * inv.W - inv.X * inv.X
        r2 = (inv.W * inv.W * F - G) / den
        s2 = (G - inv.X * inv.X * F) / den
    else:
        den = inv.Z * inv.Z - inv.Y * inv.Y
        r2 = (inv.Z * inv.Z * G - F) / den
        s2 = (F - inv.Y * inv.Y * G) / den
    if not (r2 > 0.0 and s2 > 0.0):
        # only reachable by roundoff within a few ulps of the window edge
        return CircleEllipseSolutions(which, ())
    r = math.sqrt(r2)
    t = math.sqrt(s2 / inv.zeta)
    return CircleEllipseSolutions(which, ((r, t), (r, -t), (-r, t), (-r, -t)))


def bstar_kind(p: Params, spec: Spectrum, pair: tuple[int, int]) -> str | None:
    """Classify a pair as ``"B1*"`` (product window), ``"B2*"`` (gap
    window) or ``None``."""
    inv = compute_invariants(p, spec, pair)
    if inv is None or _on_ee_seam(inv, p.k) or not _solvable(inv, p):
        return None
    prod = inv.lam1 * inv.lam2
    return "B1*" if p.k < prod < 2.0 * p.k else "B2*"


def bstar_pairs(p: Params, spec: Spectrum) -> list[tuple[tuple[int, int], str]]:
    """All pairs carrying isolated non-EE bimodal solutions.  The scan is
    capped at ``n_star`` since such pairs are always effective."""
    part = effective_modes(p, spec)
    out = []
    for i, n1 in enumerate(part.E):
        for n2 in part.E[i + 1 :]:
            kind = bstar_kind(p, spec, (n1, n2))
            if kind is not None:
                out.append(((n1, n2), kind))
    return out


def enumerate_general_bimodal(
    p: Params, spec: Spectrum, pairs: list[tuple[int, int]] | None = None
) -> list[ModalSolution]:
    """All isolated bimodal solutions of unevenly distributed energy:
    eight per qualifying pair, four with v-ratios ``(X, W)`` and four
    with ``(Y, Z)``."""
    if pairs is None:
        part = effective_modes(p, spec)
        pairs = [
            (n1, part.E[j])
            for i, n1 in enumerate(part.E)
            for j in range(i + 1, len(part.E))
        ]
    out: list[ModalSolution] = []
    for pair in pairs:
        inv = compute_invariants(p, spec, pair)
        if inv is None:
            continue
        sols1 = solve_circle_ellipse(inv, p, "SIS1")
        if sols1.ee_degenerate:
            continue
        sols2 = solve_circle_ellipse(inv, p, "SIS2")
        n1, n2 = pair
        for r, t in sols1.roots:
            out.append(
                ModalSolution(
                    {n1: (r, r * inv.X), n2: (t, t * inv.W)}, tag="general-bimodal(XW)"
                )
            )
        for r, t in sols2.roots:
            out.append(
                ModalSolution(
                    {n1: (r, r * inv.Y), n2: (t, t * inv.Z)}, tag="general-bimodal(YZ)"
                )
            )
    return out
