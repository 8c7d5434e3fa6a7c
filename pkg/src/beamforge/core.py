"""Verification spine: parameters, modal solutions, residuals, EE test.

A stationary state of the coupled system is stored as a finite map from
mode index ``n`` to the coefficient pair ``(alpha_n, gamma_n)`` of the two
deflections on the eigenvector ``e_n``.  Verification is tag-blind: the
branch tag carried by a solution is metadata for reporting and is never
consulted when residuals are evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError
from .spectrum import Spectrum

MAX_ACTIVE_MODES = 3


@dataclass(frozen=True)
class Params:
    """Dimensionless drive: axial load ``beta``, extensibility ``varrho``,
    coupling stiffness ratio ``k``.  ``beta`` is unrestricted; the other
    two must be positive."""

    beta: float
    varrho: float
    k: float

    def __post_init__(self) -> None:
        if not self.varrho > 0.0:
            raise ValidationError("varrho must be positive")
        if not self.k > 0.0:
            raise ValidationError("k must be positive")

    def describe(self) -> dict:
        return {"beta": self.beta, "varrho": self.varrho, "k": self.k}


@dataclass(frozen=True)
class ModalSolution:
    """Finite modal coefficient map plus an informational branch tag.

    Invariants enforced at construction: at most three active modes
    (a mode is active when its pair is not exactly ``(0, 0)``), and
    ``alpha_n == 0`` iff ``gamma_n == 0`` for every stored mode.
    """

    modes: dict[int, tuple[float, float]]
    tag: str = "untagged"

    def __post_init__(self) -> None:
        norm: dict[int, tuple[float, float]] = {}
        for n in sorted(self.modes):
            a, g = self.modes[n]
            a = float(a)
            g = float(g)
            if (a == 0.0) != (g == 0.0):
                raise ValidationError(
                    f"mode {n}: alpha and gamma must vanish together (got {a}, {g})"
                )
            norm[int(n)] = (a, g)
        active = [n for n, (a, g) in norm.items() if (a, g) != (0.0, 0.0)]
        if len(active) > MAX_ACTIVE_MODES:
            raise ValidationError(
                f"solution has {len(active)} active modes; at most {MAX_ACTIVE_MODES} allowed"
            )
        object.__setattr__(self, "modes", norm)

    @staticmethod
    def trivial(tag: str = "trivial") -> "ModalSolution":
        return ModalSolution({}, tag=tag)

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(n for n, (a, g) in self.modes.items() if (a, g) != (0.0, 0.0))

    @property
    def is_trivial(self) -> bool:
        return not self.active

    def coefficient(self, n: int) -> tuple[float, float]:
        return self.modes.get(n, (0.0, 0.0))

    def to_json_dict(self, p: Params, spec: Spectrum) -> dict:
        cu, cv = axial_coefficients(self, p, spec)
        return {
            "modes": [
                {"n": n, "alpha": a, "gamma": g} for n, (a, g) in self.modes.items()
            ],
            "tag": self.tag,
            "C_u": cu,
            "C_v": cv,
        }


@dataclass(frozen=True)
class ResidualReport:
    """Per-mode residual pairs of the modal system plus scalar summaries.

    ``relative`` divides ``max_abs`` by the largest individual term
    magnitude (floored at 1) so that tolerances do not depend on the
    parameter scale.
    """

    per_mode: dict[int, tuple[float, float]]
    max_abs: float
    relative: float


@dataclass(frozen=True)
class CubicReport:
    """Values of the characteristic cubic at the active eigenvalues.

    ``values`` holds ``(lam_n, P(lam_n))`` pairs; ``max_relative`` is the
    largest magnitude normalized by the cubic's own term sizes.  When the
    solution has equidistributed energy the factored form
    ``(lam + C_u)(lam^2 + C_u lam + 2k)`` is evaluated as well and its
    worst relative disagreement with the expanded form is reported.
    """

    values: tuple[tuple[float, float], ...]
    max_relative: float
    factored_values: tuple[tuple[float, float], ...] | None = None
    factored_agreement: float | None = None


def axial_coefficients(sol: ModalSolution, p: Params, spec: Spectrum) -> tuple[float, float]:
    """Effective axial tensions ``C_u = beta + varrho*sum(lam_n alpha_n^2)``
    and the analogous ``C_v``."""
    cu = p.beta
    cv = p.beta
    for n, (a, g) in sol.modes.items():
        lam = spec.eigenvalue(n)
        cu += p.varrho * lam * a * a
        cv += p.varrho * lam * g * g
    return cu, cv


def modal_residual(sol: ModalSolution, p: Params, spec: Spectrum) -> ResidualReport:
    """Substitute the solution into the modal system and report the misfit.

    For each stored mode::

        r1 = lam^2 a + C_u lam a + k (a - g)
        r2 = lam^2 g + C_v lam g - k (a - g)

    with the axial coefficients computed from the solution itself.
    """
    cu, cv = axial_coefficients(sol, p, spec)
    per_mode: dict[int, tuple[float, float]] = {}
    max_abs = 0.0
    term_scale = 0.0
    for n, (a, g) in sol.modes.items():
        lam = spec.eigenvalue(n)
        r1 = lam * lam * a + cu * lam * a + p.k * (a - g)
        r2 = lam * lam * g + cv * lam * g - p.k * (a - g)
        per_mode[n] = (r1, r2)
        max_abs = max(max_abs, abs(r1), abs(r2))
        term_scale = max(
            term_scale,
            abs(lam * lam * a),
            abs(cu * lam * a),
            abs(lam * lam * g),
            abs(cv * lam * g),
            abs(p.k * a),
            abs(p.k * g),
        )
    return ResidualReport(per_mode, max_abs, max_abs / max(1.0, term_scale))


def residual_scale(sol: ModalSolution, p: Params, spec: Spectrum) -> float:
    """Scale ``max(1, lam_max^2, k, |beta| lam_max)`` over the active modes."""
    lam_max = max((spec.eigenvalue(n) for n in sol.active), default=0.0)
    return max(1.0, lam_max * lam_max, p.k, abs(p.beta) * lam_max)


def is_ee(sol: ModalSolution, p: Params, spec: Spectrum, tol: float = 1e-9) -> bool:
    """True when the energy is equidistributed: ``C_u == C_v`` within
    ``tol`` relative to ``max(1, |C_u|, |C_v|)``."""
    if not tol > 0.0:
        raise ValidationError("tolerance must be positive")
    cu, cv = axial_coefficients(sol, p, spec)
    return abs(cu - cv) <= tol * max(1.0, abs(cu), abs(cv))


def cubic_check(sol: ModalSolution, p: Params, spec: Spectrum, ee_tol: float = 1e-9) -> CubicReport:
    """Evaluate ``P(lam) = lam^3 + (C_u+C_v) lam^2 + (C_u C_v + 2k) lam
    + k (C_u+C_v)`` at each active eigenvalue.

    Every active eigenvalue of a valid nontrivial solution is a root of
    this cubic, so all values should vanish to roundoff.  When the
    solution is EE the factored form is evaluated as a cross-check.
    """
    if sol.is_trivial:
        raise ValidationError("cubic_check needs a nontrivial solution")
    cu, cv = axial_coefficients(sol, p, spec)
    s = cu + cv
    q = cu * cv + 2.0 * p.k
    values = []
    max_rel = 0.0
    for n in sol.active:
        lam = spec.eigenvalue(n)
        val = lam ** 3 + s * lam * lam + q * lam + p.k * s
        scale = max(1.0, abs(lam) ** 3, abs(s) * lam * lam, abs(q) * abs(lam), abs(p.k * s))
        values.append((lam, val))
        max_rel = max(max_rel, abs(val) / scale)
    factored = None
    agreement = None
    if is_ee(sol, p, spec, ee_tol):
        factored = []
        agreement = 0.0
        for lam, val in values:
            fval = (lam + cu) * (lam * lam + cu * lam + 2.0 * p.k)
            factored.append((lam, fval))
            scale = max(1.0, abs(lam) ** 3, abs(cu) * lam * lam, 2.0 * p.k * abs(lam))
            agreement = max(agreement, abs(fval - val) / scale)
        factored = tuple(factored)
    return CubicReport(tuple(values), max_rel, factored, agreement)


def solution_sort_key(sol: ModalSolution):
    """Deterministic ordering: mode count, mode indices, coefficients."""
    active = sol.active
    coeffs = tuple(c for n in active for c in sol.modes[n])
    return (len(active), active, coeffs)
