"""Physical-to-dimensionless parameter conversion for slender hinged
double beams joined by a linear elastic core."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Params
from .errors import ValidationError


@dataclass(frozen=True)
class PhysicalParams:
    """Raw beam data in one consistent unit system.

    ``rho_density`` only feeds the reported characteristic time and may
    be omitted.
    """

    ell: float  # natural length
    h: float  # thickness, h << ell
    E_mod: float  # Young modulus (force/area)
    nu_poisson: float  # Poisson ratio in (-1, 1/2)
    D_axial: float  # axial end displacement (signed)
    kappa_core: float  # core stiffness (force/length)
    omega_area: float  # cross-section area
    rho_density: float | None = None  # mass density per unit volume

    def __post_init__(self) -> None:
        if not self.ell > 0.0:
            raise ValidationError("ell must be positive")
        if not 0.0 < self.h < self.ell:
            raise ValidationError("thickness must satisfy 0 < h < ell")
        if not self.E_mod > 0.0:
            raise ValidationError("Young modulus must be positive")
        if not -1.0 < self.nu_poisson < 0.5:
            raise ValidationError("Poisson ratio must lie in (-1, 1/2)")
        if not self.kappa_core > 0.0:
            raise ValidationError("core stiffness must be positive")
        if not self.omega_area > 0.0:
            raise ValidationError("cross-section area must be positive")
        if self.rho_density is not None and not self.rho_density > 0.0:
            raise ValidationError("mass density must be positive")


@dataclass(frozen=True)
class ConversionDiagnostics:
    delta: float
    chi: float
    kappa: float
    slenderness: float  # h / ell
    tau0: float | None  # characteristic time, needs a density
    warnings: tuple[str, ...]

    def describe(self) -> dict:
        return {
            "delta": self.delta,
            "chi": self.chi,
            "kappa": self.kappa,
            "slenderness": self.slenderness,
            "tau0": self.tau0,
            "warnings": list(self.warnings),
        }


def dimensionless_params(phys: PhysicalParams) -> tuple[Params, ConversionDiagnostics]:
    """Map physical data to the dimensionless triple.

    Intermediate constants::

        delta = h^2 / (6 ell^2)
        chi   = 2 D / ell
        kappa = 2 kappa_core ell^2 (1 - nu^2) / (E |Omega| h)

    then ``beta = chi/delta``, ``varrho = 1/delta``, ``k = kappa/delta``.
    A warning (not an error) is attached when ``|chi|`` or ``kappa``
    strays far from the slenderness ``h/ell``, which is the magnitude the
    thin-beam derivation assumes; the stationary theory itself is valid
    for any ``beta`` and positive ``varrho, k``.
    """
    delta = phys.h * phys.h / (6.0 * phys.ell * phys.ell)
    chi = 2.0 * phys.D_axial / phys.ell
    kappa = (
        2.0
        * phys.kappa_core
        * phys.ell
        * phys.ell
        * (1.0 - phys.nu_poisson * phys.nu_poisson)
        / (phys.E_mod * phys.omega_area * phys.h)
    )
    slenderness = phys.h / phys.ell
    tau0 = None
    if phys.rho_density is not None:
        tau0 = math.sqrt(
            2.0 * phys.ell * phys.ell * phys.rho_density * (1.0 + phys.nu_poisson) / phys.E_mod
        )
    warnings = []
    if chi != 0.0 and not 0.1 <= abs(chi) / slenderness <= 10.0:
        warnings.append(
            f"|chi| = {abs(chi):.3g} is far from the slenderness h/ell = "
            f"{slenderness:.3g}; outside the asymptotic regime of the derivation"
        )
    if not 0.1 <= kappa / slenderness <= 10.0:
        warnings.append(
            f"kappa = {kappa:.3g} is far from the slenderness h/ell = "
            f"{slenderness:.3g}; outside the asymptotic regime of the derivation"
        )
    params = Params(beta=chi / delta, varrho=1.0 / delta, k=kappa / delta)
    return params, ConversionDiagnostics(
        delta, chi, kappa, slenderness, tau0, tuple(warnings)
    )
