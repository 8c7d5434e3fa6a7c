"""Effective modes and the resonant index sets carrying EE families.

The compression threshold for mode ``n`` is its eigenvalue: ``n`` is
effective when ``lam_n < -beta``.  Two further thresholds
``mu_n = 2k/lam_n + lam_n`` and ``nu_n = 3k/lam_n + lam_n`` split the
effective set into the three bands that control how many unimodal
branches exist.  The right edges use ``<=`` so boundary hits land in the
lower band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Params
from .spectrum import Spectrum


def mu_value(lam: float, k: float) -> float:
    return 2.0 * k / lam + lam


def nu_value(lam: float, k: float) -> float:
    return 3.0 * k / lam + lam


def _rel_eq(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class ModeSetPartition:
    E: tuple[int, ...]
    E1: tuple[int, ...]
    E2: tuple[int, ...]
    E3: tuple[int, ...]
    n_star: int

    def describe(self) -> dict:
        return {
            "E": list(self.E),
            "E1": list(self.E1),
            "E2": list(self.E2),
            "E3": list(self.E3),
            "n_star": self.n_star,
        }


def dirichlet_mode_count(beta: float) -> int:
    """Closed-form effective-mode count for the hinged-beam spectrum,
    ``ceil(sqrt(-beta/pi^2)) - 1``, valid for ``beta < 0``."""
    if beta >= 0.0:
        return 0
    return math.ceil(math.sqrt(-beta / math.pi ** 2)) - 1


def effective_modes(p: Params, spec: Spectrum) -> ModeSetPartition:
    """Partition ``{n <= n_max : lam_n < -beta}`` into the three bands.

    The scan is truncated at ``spec.n_max``; membership requires
    ``lam_n < -beta`` so the sets are finite regardless.
    """
    mb = -p.beta
    E, E1, E2, E3 = [], [], [], []
    for n in range(1, spec.n_max + 1):
        lam = spec.eigenvalue(n)
        if not lam < mb:
            break
        E.append(n)
        mu = mu_value(lam, p.k)
        nu = nu_value(lam, p.k)
        if mb <= mu:
            E1.append(n)
        elif mb <= nu:
            E2.append(n)
        else:
            E3.append(n)
    part = ModeSetPartition(tuple(E), tuple(E1), tuple(E2), tuple(E3), E[-1] if E else 0)
    if spec.generator == "dirichlet" and p.beta < 0.0 and part.n_star < spec.n_max:
        # closed-form count cross-check; skipped within roundoff of an
        # eigenvalue boundary where ceil() is unstable
        near_boundary = any(
            _rel_eq(mb, spec.eigenvalue(n), 1e-12) for n in range(1, spec.n_max + 1)
        )
        if not near_boundary and len(part.E) != dirichlet_mode_count(p.beta):
            raise RuntimeError(
                f"effective-mode count {len(part.E)} disagrees with closed form "
                f"{dirichlet_mode_count(p.beta)} at beta={p.beta}"
            )
    return part


def ee_bimodal_membership(
    p: Params, spec: Spectrum, pair: tuple[int, int], tol: float = 1e-9
) -> str | None:
    """Classify an index pair as ``"B1"``, ``"B2"`` or ``None``.

    B1 requires ``lam1*lam2 == 2k`` and ``lam1+lam2 < -beta``;
    B2 requires ``lam1*(lam2-lam1) == 2k`` and ``lam2 < -beta``.
    Equalities are tested with relative tolerance ``tol``, inequalities
    are strict.
    """
    n1, n2 = pair
    if not n1 < n2:
        raise ValueError("pair must be strictly increasing")
    lam1 = spec.eigenvalue(n1)
    lam2 = spec.eigenvalue(n2)
    mb = -p.beta
    if _rel_eq(lam1 * lam2, 2.0 * p.k, tol) and lam1 + lam2 < mb:
        return "B1"
    if _rel_eq(lam1 * (lam2 - lam1), 2.0 * p.k, tol) and lam2 < mb:
        return "B2"
    return None


def ee_trimodal_membership(
    p: Params, spec: Spectrum, triple: tuple[int, int, int], tol: float = 1e-9
) -> bool:
    """True when the triple carries a trimodal EE family:
    ``lam3 < -beta`` and ``lam1*(lam3-lam1) == lam2*(lam3-lam2) == 2k``."""
    n1, n2, n3 = triple
    if not n1 < n2 < n3:
        raise ValueError("triple must be strictly increasing")
    lam1 = spec.eigenvalue(n1)
    lam2 = spec.eigenvalue(n2)
    lam3 = spec.eigenvalue(n3)
    if not lam3 < -p.beta:
        return False
    two_k = 2.0 * p.k
    ok = _rel_eq(lam1 * (lam3 - lam1), two_k, tol) and _rel_eq(
        lam2 * (lam3 - lam2), two_k, tol
    )
    if ok and not _rel_eq(lam1 + lam2, lam3, tol):
        raise RuntimeError(
            f"triple {triple} passes the membership equalities but violates "
            f"lam1 + lam2 == lam3"
        )
    return ok


def required_k(spec: Spectrum, indices, family: str) -> float | None:
    """Invert the resonance equalities: the ``k`` at which the family
    exists for the given indices, or ``None`` when no such ``k`` exists.

    The inequality constraints (which involve ``beta``) are not checked.
    """
    if family == "B1":
        n1, n2 = indices
        return spec.eigenvalue(n1) * spec.eigenvalue(n2) / 2.0
    if family == "B2":
        n1, n2 = indices
        lam1 = spec.eigenvalue(n1)
        return lam1 * (spec.eigenvalue(n2) - lam1) / 2.0
    if family == "T":
        n1, n2, n3 = indices
        lam1 = spec.eigenvalue(n1)
        lam2 = spec.eigenvalue(n2)
        lam3 = spec.eigenvalue(n3)
        k1 = lam1 * (lam3 - lam1) / 2.0
        k2 = lam2 * (lam3 - lam2) / 2.0
        if _rel_eq(k1, k2, 1e-12):
            return k1
        return None
    raise ValueError(f"unknown family {family!r}")


def bimodal_ee_pairs(p: Params, spec: Spectrum, tol: float = 1e-9):
    """All B1/B2 pairs with both indices effective, as (pair, kind)."""
    part = effective_modes(p, spec)
    out = []
    for i, n1 in enumerate(part.E):
        for n2 in part.E[i + 1 :]:
            kind = ee_bimodal_membership(p, spec, (n1, n2), tol)
            if kind is not None:
                out.append(((n1, n2), kind))
    return out


def trimodal_ee_triples(p: Params, spec: Spectrum, tol: float = 1e-9):
    """All triples carrying a trimodal EE family at these parameters."""
    part = effective_modes(p, spec)
    out = []
    E = part.E
    for i, n1 in enumerate(E):
        for j in range(i + 1, len(E)):
            for m in range(j + 1, len(E)):
                if ee_trimodal_membership(p, spec, (n1, E[j], E[m]), tol):
                    out.append((n1, E[j], E[m]))
    return out


def trimodal_candidates(spec: Spectrum, n_limit: int | None = None, rel_tol: float = 1e-12):
    """Triples admitting *some* coupling ``k`` (and the ``k`` value).

    A triple qualifies when ``lam1*(lam3-lam1) == lam2*(lam3-lam2)``
    within ``rel_tol``; equivalently ``lam1 + lam2 == lam3``.  For power
    spectra with exponent above one this scan is provably empty.
    """
    limit = spec.n_max if n_limit is None else min(n_limit, spec.n_max)
    out = []
    for n1 in range(1, limit + 1):
        for n2 in range(n1 + 1, limit + 1):
            for n3 in range(n2 + 1, limit + 1):
                k = required_k(spec, (n1, n2, n3), "T")
                if k is not None:
                    out.append(((n1, n2, n3), k))
    return out
