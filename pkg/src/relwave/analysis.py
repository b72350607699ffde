"""Comparison metrics between the relativistic and non-relativistic predictions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .errors import DomainError
from .wavepacket import AutocorrTrace

DEGENERACY_FLOOR = 1e-12


@dataclass(frozen=True)
class ComparisonSeries:
    t: np.ndarray
    nr: np.ndarray
    rel: np.ndarray
    rel_diff: np.ndarray  # nan where degenerate
    degenerate: np.ndarray


@dataclass(frozen=True)
class Peak:
    t: float
    height: float
    prominence: float


@dataclass(frozen=True)
class PeakPair:
    t_rel: float
    t_nr: float
    shift: float
    predicted_shift: float
    height_rel: float = float("nan")
    height_nr: float = float("nan")
    ambiguous: bool = False


@dataclass
class PairingResult:
    pairs: list = field(default_factory=list)
    unmatched_rel: list = field(default_factory=list)
    unmatched_nr: list = field(default_factory=list)


def relative_difference_series(nr, rel, t=None, floor: float = DEGENERACY_FLOOR) -> ComparisonSeries:
    """Pointwise (NR - REL) / REL; samples with |REL| < floor * max|REL| are flagged degenerate."""
    nr = np.asarray(nr, dtype=float)
    rel = np.asarray(rel, dtype=float)
    if nr.shape != rel.shape:
        raise DomainError("series are on different grids")
    if t is None:
        t = np.arange(nr.size, dtype=float)
    t = np.asarray(t, dtype=float)
    if t.shape != nr.shape:
        raise DomainError("time grid does not match the series")
    scale = np.max(np.abs(rel)) if rel.size else 0.0
    degenerate = np.abs(rel) <= floor * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        rd = np.where(degenerate, np.nan, (nr - rel) / np.where(degenerate, 1.0, rel))
    return ComparisonSeries(t, nr, rel, rd, degenerate)


def windowed_max_abs(series: ComparisonSeries, center: float, half_width: float, min_samples: int = 100) -> float:
    """max |rel_diff| over non-degenerate samples with |t - center| <= half_width."""
    t = series.t
    if t.size == 0 or center - half_width < t.min() - 1e-9 * abs(center) or center + half_width > t.max() + 1e-9 * abs(center):
        raise DomainError("window extends beyond the series")
    sel = (np.abs(t - center) <= half_width * (1 + 1e-12)) & ~series.degenerate
    if sel.sum() == 0:
        raise DomainError("empty window")
    if sel.sum() < min_samples:
        raise DomainError(f"window holds {sel.sum()} samples, need {min_samples}")
    return float(np.max(np.abs(series.rel_diff[sel])))


def _uniform_step(t):
    dt = np.diff(t)
    if dt.size == 0:
        return 0.0
    step = float(np.mean(dt))
    slack = 1e-6 * abs(step) + 4.0 * np.spacing(np.max(np.abs(t)))
    if np.max(np.abs(dt - step)) > slack:
        raise DomainError("trace is not uniformly sampled")
    return step


def parabolic_vertex(ym1, y0, yp1):
    """Offset (in samples) and height of the parabola through three equispaced points."""
    denom = ym1 - 2.0 * y0 + yp1
    if denom == 0:
        return 0.0, y0
    p = 0.5 * (ym1 - yp1) / denom
    return p, y0 - 0.25 * (ym1 - yp1) * p


def find_peaks(trace: AutocorrTrace, min_height: float = 0.0, min_separation: float = 0.0) -> list[Peak]:
    """Local maxima of |C|^2 with 3-point parabolic refinement of time and height."""
    t = np.asarray(trace.times, dtype=float)
    y = trace.abs2
    step = _uniform_step(t)
    if y.size < 3:
        return []
    distance = max(1, int(round(min_separation / step))) if step else 1
    idx, props = signal.find_peaks(y, height=min_height, distance=distance, prominence=0)
    peaks = []
    for i, prom in zip(idx, props["prominences"]):
        p, h = parabolic_vertex(y[i - 1], y[i], y[i + 1])
        peaks.append(Peak(float(t[i] + p * step), float(h), float(prom)))
    return peaks


def pair_and_measure(rel_peaks, nr_peaks, expected_shift_fraction: float, step: float = 0.0) -> PairingResult:
    """Match each REL peak to the NR peak nearest ``t_rel * (1 + f)``.

    Candidates must lie within half the local peak spacing of the predicted
    position; among them the one minimising timing error (in tolerance units)
    plus relative height mismatch wins.  Near-equal timing distances (within
    ``step``) mark the pair ambiguous.
    """
    if not rel_peaks or not nr_peaks:
        raise DomainError("both peak lists must be non-empty")
    rel_t = np.array([p.t for p in rel_peaks])
    nr_t = np.array([p.t for p in nr_peaks])
    spacing_src = nr_t if nr_t.size > 1 else rel_t
    res = PairingResult()
    used = set()
    for pk in rel_peaks:
        predicted = pk.t * expected_shift_fraction
        target = pk.t + predicted
        if spacing_src.size > 1:
            j = np.searchsorted(spacing_src, target)
            gaps = np.diff(spacing_src)[max(0, j - 2):j + 1]
            tol = 0.5 * float(np.median(gaps)) if gaps.size else np.inf
        else:
            tol = np.inf
        dist = np.abs(nr_t - target)
        cand = np.where(dist <= tol)[0]
        if cand.size == 0:
            res.unmatched_rel.append(pk)
            continue
        hmis = np.array([abs(nr_peaks[i].height - pk.height) / max(pk.height, 1e-300) for i in cand])
        timing = dist[cand] / tol if np.isfinite(tol) else dist[cand] * 0
        score = timing + hmis
        best = cand[np.argmin(score)]
        ambiguous = cand.size > 1 and np.sort(dist[cand])[1] - np.sort(dist[cand])[0] <= step
        used.add(int(best))
        res.pairs.append(
            PeakPair(pk.t, nr_peaks[best].t, nr_peaks[best].t - pk.t, predicted,
                     pk.height, nr_peaks[best].height, bool(ambiguous))
        )
    res.unmatched_nr = [p for i, p in enumerate(nr_peaks) if i not in used]
    return res
