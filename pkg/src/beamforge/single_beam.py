"""Reference single-beam models: plain extensible beam and beam on an
elastic foundation.

The plain beam buckles into exactly two solutions per effective mode.
The foundation model shifts the buckling thresholds by ``k / lam_n`` and
additionally carries ellipse families on pairs with ``lam1*lam2 == k``;
it admits no trimodal states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Params
from .errors import ValidationError
from .modesets import _rel_eq, effective_modes
from .spectrum import Spectrum


@dataclass(frozen=True)
class SingleBeamSolutionSet:
    model: str  # "plain" | "foundation"
    unimodal: tuple[tuple[int, float], ...]
    bimodal_families: tuple[tuple[tuple[int, int], float], ...]  # (pair, quadric constant)

    def describe(self) -> dict:
        return {
            "model": self.model,
            "unimodal": [{"n": n, "amplitude": a} for n, a in self.unimodal],
            "bimodal_families": [
                {"pair": list(pair), "quadric_constant": c}
                for pair, c in self.bimodal_families
            ],
        }


def enumerate_plain(p: Params, spec: Spectrum) -> SingleBeamSolutionSet:
    """Buckled states of the uncoupled beam: ``+-sqrt((-beta-lam)/(varrho
    lam))`` per effective mode, ``2|E|`` in total.  ``k`` is ignored."""
    part = effective_modes(p, spec)
    entries = []
    for n in part.E:
        lam = spec.eigenvalue(n)
        a = math.sqrt((-p.beta - lam) / (p.varrho * lam))
        entries.append((n, a))
        entries.append((n, -a))
    return SingleBeamSolutionSet("plain", tuple(entries), ())


def enumerate_foundation(p: Params, spec: Spectrum, tol: float = 1e-9) -> SingleBeamSolutionSet:
    """Steady states of the beam on a linear elastic foundation.

    Unimodal branches exist for ``k/lam + lam < -beta``; bimodal ellipse
    families for pairs with ``lam1*lam2 == k`` (relative tolerance
    ``tol``) and ``lam1 + lam2 < -beta``.
    """
    mb = -p.beta
    entries = []
    for n in range(1, spec.n_max + 1):
        lam = spec.eigenvalue(n)
        if lam >= mb:
            break
        if p.k / lam + lam < mb:
            a = math.sqrt((mb - p.k / lam - lam) / (p.varrho * lam))
            entries.append((n, a))
            entries.append((n, -a))
    families = []
    part = effective_modes(p, spec)
    for i, n1 in enumerate(part.E):
        lam1 = spec.eigenvalue(n1)
        for n2 in part.E[i + 1 :]:
            lam2 = spec.eigenvalue(n2)
            if _rel_eq(lam1 * lam2, p.k, tol) and lam1 + lam2 < mb:
                families.append(((n1, n2), lam1 + lam2 + p.beta))
    return SingleBeamSolutionSet("foundation", tuple(entries), tuple(families))


def single_beam_residual(model: str, p: Params, spec: Spectrum, n: int, amplitude: float) -> float:
    """Modal residual of a unimodal single-beam state:
    ``lam^2 a + C_u lam a`` plus ``k a`` for the foundation model."""
    lam = spec.eigenvalue(n)
    cu = p.beta + p.varrho * lam * amplitude * amplitude
    r = lam * lam * amplitude + cu * lam * amplitude
    if model == "foundation":
        r += p.k * amplitude
    elif model != "plain":
        raise ValidationError(f"unknown single-beam model {model!r}")
    return r
