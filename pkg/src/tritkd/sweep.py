"""Parameter sweeps over the attack plane and the security crossover search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .attack import (
    AttackParams,
    ab_error,
    eve_error,
    mutual_info_ab,
    mutual_info_ae,
    srm_success,
)
from .correlations import CRITICAL_VISIBILITY

CSV_COLUMNS = (
    "f",
    "lam",
    "v",
    "p0",
    "p1",
    "e_ab",
    "e_eve",
    "i_ab",
    "i_ae",
    "bell_violated",
    "secure",
)


@dataclass(frozen=True)
class SweepRow:
    """All derived quantities at one (f, lam) grid point."""

    f: float
    lam: float
    v: float
    p0: float
    p1: float
    e_ab: float
    e_eve: float
    i_ab: float
    i_ae: float
    bell_violated: bool
    secure: bool


@dataclass(frozen=True)
class CrossoverResult:
    """Largest visibility at which the eavesdropper matches the parties' information."""

    v_max: float
    argmax_f: float
    argmax_lam: float
    tolerance: float


def sweep_rows(f_values, lam_values, log_base: float = 3.0) -> list[SweepRow]:
    """Evaluate every (f, lam) pair, f outermost, both axes in given order."""
    rows = []
    for f in f_values:
        for lam in lam_values:
            params = AttackParams(f=float(f), lam=float(lam))
            v = params.visibility
            i_ab = mutual_info_ab(params, log_base)
            i_ae = mutual_info_ae(params, log_base)
            rows.append(
                SweepRow(
                    f=params.f,
                    lam=params.lam,
                    v=v,
                    p0=(1.0 + 2.0 * v) / 3.0,
                    p1=(1.0 - v) / 3.0,
                    e_ab=ab_error(params),
                    e_eve=eve_error(params),
                    i_ab=i_ab,
                    i_ae=i_ae,
                    bell_violated=v >= CRITICAL_VISIBILITY - 1e-12,
                    secure=i_ab > i_ae,
                )
            )
    return rows


def format_csv(rows, comments=()) -> str:
    """Render rows as CSV with '#' comment lines, 9 significant digits."""
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(CSV_COLUMNS))
    for r in rows:
        reals = (r.f, r.lam, r.v, r.p0, r.p1, r.e_ab, r.e_eve, r.i_ab, r.i_ae)
        lines.append(
            ",".join(f"{x:.9g}" for x in reals)
            + f",{1 if r.bell_violated else 0},{1 if r.secure else 0}"
        )
    return "\n".join(lines) + "\n"


def _info_gap_nats(f_grid: np.ndarray, v: float) -> np.ndarray:
    """I_AE - I_AB in nats along the contour f*lam = v, vectorized over f."""
    p0 = (1.0 + 2.0 * v) / 3.0
    p12 = (1.0 - v) / 3.0

    i_ab = 0.0
    if p0 > 0.0:
        i_ab += p0 * np.log(1.0 + 2.0 * v)
    if p12 > 0.0:
        i_ab += 2.0 * p12 * np.log(1.0 - v)

    def group_term(w):
        t = np.full_like(w, np.log(3.0))
        t += np.where(w > 0.0, w * np.log(np.maximum(w, 1e-300)), 0.0)
        t += np.where(
            w < 1.0,
            (1.0 - w) * np.log(np.maximum((1.0 - w) / 2.0, 1e-300)),
            0.0,
        )
        return t

    i_ae = np.zeros_like(f_grid)
    if p0 > 0.0:
        lt0 = 0.5 * (3.0 * f_grid + 4.0 * v - 1.0) / (1.0 + 2.0 * v)
        i_ae += p0 * group_term(srm_success(lt0))
    if p12 > 0.0:
        lt12 = 0.5 * (3.0 * f_grid - 2.0 * v - 1.0) / (1.0 - v)
        i_ae += 2.0 * p12 * group_term(srm_success(lt12))
    return i_ae - i_ab


def _best_gap(v: float) -> tuple[float, float]:
    """(max gap, argmax f) of I_AE - I_AB over the visibility contour."""
    f_lo = max(v, 1e-9)  # lam = v/f must stay <= 1
    f_grid = np.linspace(f_lo, 1.0, 801)
    gaps = _info_gap_nats(f_grid, v)
    i = int(np.argmax(gaps))
    lo = f_grid[max(i - 1, 0)]
    hi = f_grid[min(i + 1, len(f_grid) - 1)]
    if hi <= lo:
        return float(gaps[i]), float(f_grid[i])
    res = minimize_scalar(
        lambda f: -float(_info_gap_nats(np.array([f]), v)[0]),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return -float(res.fun), float(res.x)


def find_crossover(tolerance: float = 1e-6, log_base: float = 3.0) -> CrossoverResult:
    """Largest visibility v = f*lam at which I_AE can still reach I_AB.

    Coarse scan over v locates the last sign change of the contour-maximized
    information gap; bisection refines it until the bracket is narrower than
    tolerance and the gap at the result is within tolerance (measured in the
    given log base; the location itself is base-independent).
    """
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    scale = 1.0 / np.log(log_base)

    vs = np.linspace(0.01, 0.999, 199)
    gaps = np.array([_best_gap(v)[0] for v in vs]) * scale
    crossings = np.nonzero((gaps[:-1] >= 0.0) & (gaps[1:] < 0.0))[0]
    if crossings.size == 0:
        raise RuntimeError("no sign change of the information gap found")
    lo, hi = float(vs[crossings[-1]]), float(vs[crossings[-1] + 1])

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _best_gap(mid)[0] >= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tolerance and abs(_best_gap(0.5 * (lo + hi))[0]) * scale <= tolerance:
            break

    v_max = 0.5 * (lo + hi)
    _, f_star = _best_gap(v_max)
    return CrossoverResult(
        v_max=v_max,
        argmax_f=f_star,
        argmax_lam=v_max / f_star,
        tolerance=tolerance,
    )
