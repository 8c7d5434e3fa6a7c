"""Brute-force verifier: solve the truncated modal system from many
random starts and reconcile the roots with the closed-form inventory.

The oracle knows nothing about branch structure.  It draws starts
uniformly from the amplitude box, runs damped Newton (see
:mod:`beamforge.kernels`), deduplicates converged roots, and reports
every distinct solution found.  ``match_against`` then classifies each
root as a known isolated solution, a point on an EE family, or
unmatched; unmatched roots indicate a bug somewhere.

Two generic devices make the search complete at desk scale without
peeking at the closed forms:

* support decomposition: every term of the mode-``j`` equations carries
  ``alpha_j`` or ``gamma_j``, so zeroing a mode pair satisfies its two
  equations identically, and any root supported on a subset of modes is
  a root of the restricted system on that subset.  Half the start budget
  is spread over the coordinate subproblems, where small-support roots
  have fat basins; the other half probes the full-dimensional system.
* deflation: within each subproblem the starts are processed in passes
  and the roots already found (including those inherited from smaller
  supports) are deflated away, so later starts either land somewhere new
  or fail.  Plain multistart misses small basins at desk-scale budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .core import ModalSolution, Params, solution_sort_key
from .ee_families import EEFamily
from .spectrum import Spectrum

NEWTON_TOL_FACTOR = 1e-11
DEDUP_RTOL = 1e-8
ACTIVE_AMPLITUDE_TOL = 1e-7
MATCH_RTOL = 1e-6
FULL_SUPPORT_PASSES = 8
SUBPROBLEM_PASSES = 2
DEFLATION_CAP = 128


def newton_scale(p: Params, spec: Spectrum, n_modes: int) -> float:
    """Residual scale ``max(1, lam_N^2, k, |beta| lam_N)`` of the
    truncated system."""
    lam_max = spec.eigenvalue(n_modes)
    return max(1.0, lam_max * lam_max, p.k, abs(p.beta) * lam_max)


def start_box_radius(p: Params, spec: Spectrum) -> float:
    """Half-width ``sqrt(max(1, -beta) / (varrho lam_1))`` of the start
    box; buckled amplitudes always fall inside it."""
    return float(np.sqrt(max(1.0, -p.beta) / (p.varrho * spec.eigenvalue(1))))


@dataclass
class MatchReport:
    matched: int
    on_family: int
    unmatched: list[ModalSolution]
    labels: list[str]  # per found root: trivial | isolated | family | unmatched
    missed_closed: list[ModalSolution]

    def describe(self) -> dict:
        return {
            "matched": self.matched,
            "on_family": self.on_family,
            "unmatched_count": len(self.unmatched),
            "missed_closed_count": len(self.missed_closed),
            "labels": list(self.labels),
        }


@dataclass
class OracleResult:
    found: list[ModalSolution]
    starts_used: int
    converged_count: int
    n_modes: int
    newton_tol: float
    box_radius: float
    backend: str
    matched: int = 0
    on_family: int = 0
    unmatched: list[ModalSolution] = field(default_factory=list)

    def attach_match(self, report: MatchReport) -> "OracleResult":
        self.matched = report.matched
        self.on_family = report.on_family
        self.unmatched = list(report.unmatched)
        return self

    def describe(self, p: Params, spec: Spectrum) -> dict:
        return {
            "n_modes": self.n_modes,
            "starts_used": self.starts_used,
            "converged_count": self.converged_count,
            "newton_tol": self.newton_tol,
            "box_radius": self.box_radius,
            "backend": self.backend,
            "found_count": len(self.found),
            "matched": self.matched,
            "on_family": self.on_family,
            "unmatched_count": len(self.unmatched),
            "found": [s.to_json_dict(p, spec) for s in self.found],
            "unmatched": [s.to_json_dict(p, spec) for s in self.unmatched],
        }


_SPLITTER = 134217729.0  # 2**27 + 1, Dekker splitting constant


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ca = _SPLITTER * a
    a_hi = ca - (ca - a)
    a_lo = a - a_hi
    cb = _SPLITTER * b
    b_hi = cb - (cb - b)
    b_lo = b - b_hi
    err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, err


def _dd_sum(terms: list[float]) -> tuple[float, float]:
    hi = math.fsum(terms)
    return hi, math.fsum(terms + [-hi])


def _accurate_residual(lams, beta, varrho, k, x) -> np.ndarray:
    """Compensated modal residual of a single point.

    The standard evaluation loses ~eps times the term magnitude to
    cancellation (the axial factor ``lam_m + C_u`` nearly vanishes on a
    solution), which caps how far Newton can polish a root near a
    junction of solution continua.  Exact products plus ``math.fsum``
    bring the error down to the order of the residual itself.
    """
    n = len(lams)
    sums = ([beta], [beta])
    for j in range(n):
        c1, c2 = _two_prod(varrho, lams[j])
        for block, acc in zip((x[:n], x[n:]), sums):
            s1, s2 = _two_prod(block[j], block[j])
            p1, p2 = _two_prod(s1, c1)
            acc.extend((p1, p2, s1 * c2 + s2 * c1 + s2 * c2))
    (cu_hi, cu_lo), (cv_hi, cv_lo) = _dd_sum(sums[0]), _dd_sum(sums[1])
    out = np.empty(2 * n)
    for m in range(n):
        lam = lams[m]
        a = x[m]
        g = x[n + m]
        d_hi, d_lo = _two_sum(a, -g)
        r1, r2 = _two_prod(k, d_hi)
        for row, coeff, (t_hi, t_lo), sign in (
            (m, a, _two_sum(lam, cu_hi), 1.0),
            (n + m, g, _two_sum(lam, cv_hi), -1.0),
        ):
            t_lo = t_lo + (cu_lo if sign > 0 else cv_lo)
            g1, g2 = _two_prod(lam, coeff)
            q1, q2 = _two_prod(g1, t_hi)
            out[row] = math.fsum(
                [q1, q2, g1 * t_lo, g2 * t_hi, g2 * t_lo,
                 sign * r1, sign * r2, sign * k * d_lo]
            )
    return out


def _accurate_polish(lams, p: Params, roots: np.ndarray, iterations: int = 60) -> np.ndarray:
    """Newton-polish each root with compensated residuals and a
    rank-cut least-squares step, so coefficients are resolved to full
    precision even where the Jacobian is nearly rank-deficient."""
    out = roots.copy()
    lam_list = [float(v) for v in lams]
    for i in range(out.shape[0]):
        x = out[i].copy()
        fx = _accurate_residual(lam_list, p.beta, p.varrho, p.k, x)
        best = np.abs(fx).max()
        for _ in range(iterations):
            J = kernels._jacobian_numpy(np.asarray(lams), p.beta, p.varrho, p.k, x[None, :])[0]
            step, *_ = np.linalg.lstsq(J, -fx, rcond=1e-10)
            improved = False
            t = 1.0
            for _bt in range(8):
                trial = x + t * step
                ft = _accurate_residual(lam_list, p.beta, p.varrho, p.k, trial)
                mag = np.abs(ft).max()
                if np.isfinite(mag) and mag < best:
                    x, fx, best = trial, ft, mag
                    improved = True
                    break
                t *= 0.5
            if not improved:
                break
        out[i] = x
    return out


def _dedup_merge(known: np.ndarray, roots: np.ndarray, radius: float) -> np.ndarray:
    """Greedy merge in arrival order; two roots are the same solution
    when every coefficient agrees within ``DEDUP_RTOL`` of the box
    radius."""
    tol = DEDUP_RTOL * radius
    reps = np.empty((known.shape[0] + roots.shape[0], roots.shape[1]))
    count = known.shape[0]
    reps[:count] = known
    for row in roots:
        if count and (np.abs(reps[:count] - row).max(axis=1) <= tol).any():
            continue
        reps[count] = row
        count += 1
    return reps[:count].copy()


def _mode_subsets(n_modes: int) -> list[tuple[int, ...]]:
    """All nonempty mode subsets, smallest supports first; the full
    support comes last."""
    out: list[tuple[int, ...]] = []
    for size in range(1, n_modes + 1):
        out.extend(combinations(range(1, n_modes + 1), size))
    return out


def _columns_for(subset: tuple[int, ...], n_modes: int) -> np.ndarray:
    """Full-layout column indices of a support's alpha and gamma blocks."""
    alpha = [n - 1 for n in subset]
    gamma = [n_modes + n - 1 for n in subset]
    return np.array(alpha + gamma, dtype=np.intp)


def galerkin_solve(
    p: Params,
    spec: Spectrum,
    n_modes: int,
    starts: int,
    seed: int = 0,
    backend: str | None = None,
) -> OracleResult:
    """Solve the ``2 * n_modes``-unknown modal system from ``starts``
    uniform random starts and return the deduplicated roots.

    Half the budget is split evenly over the proper mode-support
    subproblems (smallest supports first), each worked in deflation
    passes over its own box ``[-R, R]^(2|S|)`` with the roots inherited
    from smaller supports pre-deflated; the remaining budget probes the
    full-dimensional system the same way.  Budgets too small to cover
    the subproblems fall back to full-dimensional multistart.

    Convergence demands a max-abs residual of the *undeflated* system
    below ``1e-11`` times the system scale.  Starts that stall are
    discarded (counted via ``converged_count``).  Roots keep only modes
    with amplitude above ``1e-7``; more than three such modes would
    contradict the structure theory and raises.
    """
    if starts < 1:
        raise ValueError("starts must be positive")
    lams = spec.eigenvalues(n_modes)
    tol = NEWTON_TOL_FACTOR * newton_scale(p, spec, n_modes)
    radius = start_box_radius(p, spec)
    rng = np.random.default_rng(seed)
    chosen = backend or kernels.active_backend()
    subsets = _mode_subsets(n_modes)
    proper = subsets[:-1]
    share = (starts // 2) // len(proper) if proper else 0
    known = np.zeros((0, 2 * n_modes))
    converged_total = 0

    def run_block(subset, budget, passes):
        nonlocal known, converged_total
        if budget < 1:
            return
        cols = _columns_for(subset, n_modes)
        sub_lams = lams[[n - 1 for n in subset]]
        x0 = rng.uniform(-radius, radius, size=(budget, 2 * len(subset)))
        # roots living inside this subspace seed the deflation walls
        if known.shape[0]:
            outside = np.delete(known, cols, axis=1)
            inside = np.abs(outside).max(axis=1) <= ACTIVE_AMPLITUDE_TOL if outside.size else np.ones(known.shape[0], bool)
            deflate = known[inside][:, cols]
        else:
            deflate = np.zeros((0, 2 * len(subset)))
        for ci, chunk in enumerate(np.array_split(x0, min(passes, budget))):
            if not chunk.shape[0]:
                continue
            # the first chunk of every block runs plain damped Newton so
            # slow-converging continuum roots are reachable; the walls go
            # up afterwards to steer later starts somewhere new
            walls = np.zeros((0, chunk.shape[1])) if ci == 0 else deflate[:DEFLATION_CAP]
            roots, converged, _ = kernels.newton_batch(
                sub_lams,
                p.beta,
                p.varrho,
                p.k,
                chunk,
                tol,
                deflate=walls,
                backend=chosen,
            )
            converged_total += int(converged.sum())
            good = roots[converged]
            embedded = np.zeros((good.shape[0], 2 * n_modes))
            embedded[:, cols] = good
            before = known.shape[0]
            known = _dedup_merge(known, embedded, radius)
            deflate = np.concatenate([deflate, known[before:][:, cols]])

    for subset in proper:
        run_block(subset, share, SUBPROBLEM_PASSES)
    run_block(subsets[-1], starts - share * len(proper), FULL_SUPPORT_PASSES)

    if known.shape[0]:
        # polish to the numerical floor: near junctions of solution
        # continua an extra near-null Jacobian direction lets iterates
        # park ~sqrt(tol) off the manifold, so finish with compensated
        # residuals that are not limited by cancellation noise
        polished, _, _ = kernels.newton_batch(
            lams, p.beta, p.varrho, p.k, known, 0.0, max_iter=25, backend=chosen
        )
        polished = _accurate_polish(lams, p, polished)
        known = _dedup_merge(np.zeros((0, 2 * n_modes)), polished, radius)

    found: list[ModalSolution] = []
    for row in known:
        alphas = row[:n_modes]
        gammas = row[n_modes:]
        active = [
            j
            for j in range(n_modes)
            if max(abs(alphas[j]), abs(gammas[j])) > ACTIVE_AMPLITUDE_TOL
        ]
        if len(active) > 3:
            raise RuntimeError(
                f"oracle root with {len(active)} active modes contradicts the "
                f"three-mode bound: {row.tolist()}"
            )
        modes = {j + 1: (float(alphas[j]), float(gammas[j])) for j in active}
        found.append(ModalSolution(modes, tag="oracle"))
    found.sort(key=solution_sort_key)
    return OracleResult(
        found=found,
        starts_used=starts,
        converged_count=converged_total,
        n_modes=n_modes,
        newton_tol=tol,
        box_radius=radius,
        backend=chosen,
    )


def _coeffs_match(root: ModalSolution, closed: ModalSolution, tol: float) -> bool:
    if root.active != closed.active:
        return False
    for n in closed.active:
        ra, rg = root.modes[n]
        ca, cg = closed.modes[n]
        if abs(ra - ca) > tol * max(1.0, abs(ca)):
            return False
        if abs(rg - cg) > tol * max(1.0, abs(cg)):
            return False
    return True


def match_against(
    closed: list[ModalSolution],
    families: list[EEFamily],
    oracle_found: list[ModalSolution],
    tol: float = MATCH_RTOL,
) -> MatchReport:
    """Classify every oracle root against the closed-form inventory.

    A root is *matched* when each coefficient agrees with an isolated
    closed-form solution to ``tol`` relative (the trivial root always
    matches), *on_family* when its u-part sits on an EE quadric with the
    family's sign pattern, and *unmatched* otherwise.  ``missed_closed``
    lists isolated solutions no root landed on.
    """
    matched = 0
    on_family = 0
    unmatched: list[ModalSolution] = []
    labels: list[str] = []
    hit_closed = [False] * len(closed)
    for root in oracle_found:
        if root.is_trivial:
            matched += 1
            labels.append("trivial")
            continue
        hit = None
        for i, sol in enumerate(closed):
            if _coeffs_match(root, sol, tol):
                hit = i
                break
        if hit is not None:
            matched += 1
            hit_closed[hit] = True
            labels.append("isolated")
            continue
        if any(fam.contains(root, tol) for fam in families):
            on_family += 1
            labels.append("family")
            continue
        unmatched.append(root)
        labels.append("unmatched")
    missed = [
        sol for i, sol in enumerate(closed) if not hit_closed[i] and not sol.is_trivial
    ]
    return MatchReport(matched, on_family, unmatched, labels, missed)
