r"""Worked examples: a twin beam mixed at one beam splitter, and the three-mode
scheme in which one output is split again with vacuum at a balanced splitter.

Each scenario has a closed form and a simulated counterpart
(constructor -> passive network -> invariants).  The sweep tables behind the
surface plots are produced from these.
"""

import csv
import io
import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from .covariance import product, twin_beam, vacuum
from .errors import ParameterRangeError
from .invariants import gni_three_mode, gni_two_mode
from .passive import apply, beam_splitter, compose


def _check(B_p, T):
    B_p, T = float(B_p), float(T)
    if not (math.isfinite(B_p) and B_p >= 0):
        raise ParameterRangeError(f"B_p must be >= 0, got {B_p}")
    if not 0.0 <= T <= 1.0:
        raise ParameterRangeError(f"T must lie in [0, 1], got {T}")
    return B_p, T


@dataclass(frozen=True)
class TwinBeamBSResult:
    B_p: float
    T: float
    LNI1: float
    LNI2: float
    EI: float
    GNI: float
    ncl_window_halfwidth: float


@dataclass(frozen=True)
class ThreeModeSchemeResult:
    B_p: float
    T: float
    LNI1: float
    LNI2: float
    LNI3: float
    EI12: float
    EI13: float
    EI23: float
    GNI3: float
    asboth_estimate: float

    @property
    def LNI(self):
        return (self.LNI1, self.LNI2, self.LNI3)

    @property
    def EI_pair(self):
        return (self.EI12, self.EI13, self.EI23)


def ncl_window_halfwidth(B_p: float) -> float:
    """Local nonclassicality at the outputs requires ``|T - 1/2|`` below this."""
    return 0.5 / math.sqrt(B_p + 1)


def twin_beam_at_bs(B_p: float, T: float) -> TwinBeamBSResult:
    """Closed form for a twin beam whose arms meet at a beam splitter of transmissivity T."""
    B_p, T = _check(B_p, T)
    pairs = B_p * B_p + B_p
    lni = -B_p * B_p + 4 * T * (1 - T) * pairs
    ei = (2 * T - 1) ** 2 * pairs
    return TwinBeamBSResult(B_p, T, lni, lni, ei, 2 * B_p, ncl_window_halfwidth(B_p))


def twin_beam_at_bs_state(B_p: float, T: float, phase: float = 0.0):
    B_p, T = _check(B_p, T)
    return apply(beam_splitter(2, 0, 1, T, phase), twin_beam(B_p))


def simulate_twin_beam_at_bs(B_p: float, T: float, phase: float = 0.0) -> TwinBeamBSResult:
    """Same quantities computed numerically from the transformed state."""
    B_p, T = _check(B_p, T)
    r = gni_two_mode(twin_beam_at_bs_state(B_p, T, phase))
    return TwinBeamBSResult(B_p, T, r.LNI1, r.LNI2, r.EI, r.GNI, ncl_window_halfwidth(B_p))


def three_mode_scheme_state(B_p: float, T: float):
    """twin_beam(B_p) x vacuum, then BS(T) on modes 1-2, then a 50:50 BS on modes 2-3."""
    B_p, T = _check(B_p, T)
    network = compose(beam_splitter(3, 1, 2, 0.5), beam_splitter(3, 0, 1, T))
    return apply(network, product(twin_beam(B_p), vacuum(1)))


def three_mode_scheme(B_p: float, T: float) -> ThreeModeSchemeResult:
    """Invariants of the two-beam-splitter scheme, evaluated on the simulated state."""
    B_p, T = _check(B_p, T)
    r = gni_three_mode(three_mode_scheme_state(B_p, T))
    l1, l2, l3 = r.LNI
    e12, e13, e23 = r.EI_pair
    return ThreeModeSchemeResult(B_p, T, l1, l2, l3, e12, e13, e23, r.GNI3,
                                 l2 + l3 + 2 * e23)


def three_mode_scheme_closed_form(B_p: float, T: float) -> ThreeModeSchemeResult:
    r"""Closed form of the scheme.

    ``LNI1 = -B_p^2 + 4T(1-T)(B_p^2 + B_p)``, ``LNI2 = LNI3 = EI23 = LNI1/4`` and
    ``EI12 = EI13 = (1/2 - 2T(1-T))(B_p^2 + B_p)``.
    """
    B_p, T = _check(B_p, T)
    pairs = B_p * B_p + B_p
    lni1 = -B_p * B_p + 4 * T * (1 - T) * pairs
    q = lni1 / 4
    e1j = (0.5 - 2 * T * (1 - T)) * pairs
    return ThreeModeSchemeResult(B_p, T, lni1, q, q, e1j, e1j, q, 2 * B_p, 4 * q)


def asboth_estimate(B_p: float, T: float) -> float:
    """Nonclassicality of output 2 of the first splitter as seen by the second one:
    ``LNI2 + LNI3 + 2 EI23``, which equals ``4 EI23``."""
    return three_mode_scheme(B_p, T).asboth_estimate


# -- sweeps -----------------------------------------------------------------------

SCENARIOS = {
    "twinbeam-bs": (twin_beam_at_bs, TwinBeamBSResult),
    "three-mode": (three_mode_scheme, ThreeModeSchemeResult),
}

DEFAULT_BP_GRID = (0.0, 5.0, 0.25)
DEFAULT_T_GRID = (0.0, 1.0, 0.05)


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid ``start, start + step, ..., stop``."""
    if step <= 0 or stop < start:
        if step > 0 and stop == start:
            return np.array([float(start)])
        raise ValueError(f"invalid grid {start}:{stop}:{step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.minimum(start + step * np.arange(count), stop)


@dataclass(frozen=True)
class SweepTable:
    scenario: str
    columns: tuple
    rows: tuple

    def __len__(self):
        return len(self.rows)

    def to_csv(self, positive_only: bool = False) -> str:
        """CSV with a header row; numbers rendered with 12 significant digits.

        ``positive_only`` leaves negative scenario values empty, mirroring the
        surface plots which show only positive values.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("scenario",) + self.columns)
        for row in self.rows:
            cells = [self.scenario, _fmt(row[0]), _fmt(row[1])]
            for v in row[2:]:
                cells.append("" if positive_only and v < 0 else _fmt(v))
            writer.writerow(cells)
        return buf.getvalue()


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def sweep(scenario: str, bp_grid, t_grid) -> SweepTable:
    """Evaluate a scenario on every ``(B_p, T)`` point; rows ordered B_p-major."""
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; choose from {sorted(SCENARIOS)}")
    bp_grid, t_grid = list(bp_grid), list(t_grid)
    if not bp_grid or not t_grid:
        raise ValueError("sweep grids must not be empty")
    func, cls = SCENARIOS[scenario]
    columns = tuple(f.name for f in fields(cls))
    rows = tuple(astuple(func(b, t)) for b in bp_grid for t in t_grid)
    return SweepTable(scenario, columns, rows)
