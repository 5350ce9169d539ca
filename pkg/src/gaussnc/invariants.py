r"""Nonclassicality and entanglement quantifiers of two- and three-mode Gaussian states.

Two-mode quantities, with ``S_1, S_2, S_12`` the blocks of the symmetric
covariance matrix ``sigma``:

* local determinant ``I_j = B_j^2 - |C_j|^2`` and Lee depth ``tau_j = |C_j| - B_j``,
  linked by ``I_j = -tau_j (tau_j + 2 B_j)``; local nonclassicality ``LNI_j = -I_j``;
* ``IS1 = det S_1``, ``IS2 = det S_2``, ``IS3 = det S_12``, ``IS4 = det sigma``,
  ``DeltaTildeS = IS1 + IS2 - 2 IS3`` and ``DeltaS = IS1 + IS2 + 2 IS3``;
* entanglement invariant ``EI = DeltaTildeS/4 - IS4 - 1/16`` (positive iff the
  partial transpose is unphysical);
* ``d_minus``, the smallest symplectic eigenvalue of the partial transpose, and
  ``E_N = max(0, -ln(2 d_minus))``;
* the global invariant ``GNI = LNI_1 + LNI_2 + 2 EI``, conserved by every passive
  unitary.

For three modes the global invariant is built from the three local terms and
the three pairwise entanglement invariants; it is conserved only for pure states.
"""

import math
from dataclasses import asdict, dataclass
from itertools import combinations

import numpy as np

from .covariance import (
    MomentMatrices,
    QuadratureCM,
    reduce,
    require_physical,
    symplectic_eigenvalues,
    to_quadrature,
)
from .errors import DimensionMismatchError, NumericalDomainError

RADICAND_TOL = 1e-12
TOL_ENT = 1e-12


def _check_modes(state, n):
    if state.n != n:
        raise DimensionMismatchError(f"expected a {n}-mode state, got {state.n} modes")


def _det2(a):
    return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])


def _sqrt_clamped(x, what):
    if x < 0:
        if x < -RADICAND_TOL * max(1.0, abs(x)):
            raise NumericalDomainError(f"negative radicand in {what}: {x:.3e}")
        return 0.0
    return math.sqrt(x)


def local_determinant(state: MomentMatrices, j: int) -> float:
    """``I_j = B_j^2 - |C_j|^2``; negative values flag a nonclassical mode."""
    B = state.N[j, j].real
    return float(B * B - abs(state.M[j, j]) ** 2)


def lee_depth(state: MomentMatrices, j: int) -> float:
    """Sign-admitting Lee depth ``tau_j = |C_j| - B_j``, the largest eigenvalue of
    the ``j``-th diagonal block of the normally ordered matrix."""
    return float(abs(state.M[j, j]) - state.N[j, j].real)


def local_nonclassicality(state: MomentMatrices, j: int) -> float:
    return -local_determinant(state, j)


def simon_invariants(state) -> dict:
    """Determinant invariants of the two-mode symmetric covariance matrix."""
    cm = state if isinstance(state, QuadratureCM) else to_quadrature(state)
    _check_modes(cm, 2)
    IS1, IS2 = _det2(cm.block(0)), _det2(cm.block(1))
    IS3 = _det2(cm.cross(0, 1))
    IS4 = float(np.linalg.det(cm.sigma))
    return {
        "IS1": IS1,
        "IS2": IS2,
        "IS3": IS3,
        "IS4": IS4,
        "DeltaTildeS": IS1 + IS2 - 2 * IS3,
        "DeltaS": IS1 + IS2 + 2 * IS3,
    }


def _ei(si):
    return si["DeltaTildeS"] / 4 - si["IS4"] - 1 / 16


def entanglement_invariant(state) -> float:
    """Signed entanglement invariant ``EI = DeltaTildeS/4 - IS4 - 1/16``."""
    return _ei(simon_invariants(state))


def _d_minus_from(delta, is4):
    inner = _sqrt_clamped(delta * delta - 4 * is4, "d_minus inner root")
    if delta > 0 and is4 > 0:
        # delta - inner == 4 is4 / (delta + inner), without the cancellation
        return math.sqrt(2 * is4 / (delta + inner))
    return _sqrt_clamped(delta - inner, "d_minus outer root") / math.sqrt(2)


def d_minus(state) -> float:
    """Smallest symplectic eigenvalue of the partially transposed covariance matrix,
    ``(1/sqrt 2) sqrt(DeltaTildeS - sqrt(DeltaTildeS^2 - 4 IS4))``."""
    si = simon_invariants(state)
    return _d_minus_from(si["DeltaTildeS"], si["IS4"])


def d_minus_from_ei(state) -> float:
    """Same quantity written through ``I' = 4 IS4 + 4 EI + 1/4``."""
    si = simon_invariants(state)
    i_prime = 4 * si["IS4"] + 4 * _ei(si) + 0.25
    return _d_minus_from(i_prime, si["IS4"])


def partial_transpose(state) -> QuadratureCM:
    """Flip the sign of the last momentum quadrature (mirror reflection of mode 2)."""
    cm = state if isinstance(state, QuadratureCM) else to_quadrature(state)
    lam = np.ones(2 * cm.n)
    lam[-1] = -1.0
    return QuadratureCM(cm.sigma * np.outer(lam, lam))


def d_minus_pt(state) -> float:
    """``d_minus`` straight from the symplectic spectrum of the partial transpose."""
    return float(symplectic_eigenvalues(partial_transpose(state))[0])


def _log_neg_raw(dm):
    if dm <= 0:
        raise NumericalDomainError(f"d_minus must be positive, got {dm:.3e}")
    return -math.log(2 * dm)


def log_negativity(state) -> float:
    return max(0.0, _log_neg_raw(d_minus(state)))


def log_negativity_pure(ei: float) -> float:
    """``E_N = max(0, ln(2 sqrt(EI) + sqrt(1 + 4 EI)))``, valid for pure states."""
    if ei <= 0:
        return 0.0
    return max(0.0, math.log(2 * math.sqrt(ei) + math.sqrt(1 + 4 * ei)))


def _finite_dict(obj):
    out = asdict(obj)
    for key, value in out.items():
        values = value if isinstance(value, (list, tuple)) else [value]
        for v in values:
            if isinstance(v, float) and not math.isfinite(v):
                raise NumericalDomainError(f"report field {key} is not finite")
    return out


@dataclass(frozen=True)
class InvariantReport2:
    I1: float
    I2: float
    tau1: float
    tau2: float
    LNI1: float
    LNI2: float
    IS1: float
    IS2: float
    IS3: float
    IS4: float
    DeltaTildeS: float
    EI: float
    ppt_witness: float
    entangled: bool
    d_minus: float
    E_N: float
    E_N_unclipped: float
    Delta: float
    DeltaS: float
    GNI: float
    GNI_closed_form: float

    def to_dict(self) -> dict:
        return _finite_dict(self)


@dataclass(frozen=True)
class InvariantReport3:
    LNI: tuple
    EI_pair: tuple
    GNI3: float
    Delta3: float
    DeltaS3: float
    K: float
    GNI3_closed_form: float
    pairs: tuple = ((1, 2), (1, 3), (2, 3))

    def to_dict(self) -> dict:
        d = _finite_dict(self)
        d["LNI"] = list(self.LNI)
        d["EI_pair"] = {f"{a}{b}": v for (a, b), v in zip(self.pairs, self.EI_pair)}
        del d["pairs"]
        return d


def gni_two_mode(state: MomentMatrices, tol_phys: float = 1e-9) -> InvariantReport2:
    """Full two-mode report; ``GNI`` is the sum ``LNI1 + LNI2 + 2 EI`` and
    ``GNI_closed_form = -Delta + DeltaS/2 - 2 IS4 - 1/8`` the equivalent
    closed form in terms of global invariants."""
    _check_modes(state, 2)
    require_physical(state, tol_phys)
    I1, I2 = local_determinant(state, 0), local_determinant(state, 1)
    si = simon_invariants(state)
    ei = _ei(si)
    dm = _d_minus_from(si["DeltaTildeS"], si["IS4"])
    en_raw = _log_neg_raw(dm)
    delta = I1 + I2 + 2 * si["IS3"]
    return InvariantReport2(
        I1=I1,
        I2=I2,
        tau1=lee_depth(state, 0),
        tau2=lee_depth(state, 1),
        LNI1=-I1,
        LNI2=-I2,
        IS1=si["IS1"],
        IS2=si["IS2"],
        IS3=si["IS3"],
        IS4=si["IS4"],
        DeltaTildeS=si["DeltaTildeS"],
        EI=ei,
        ppt_witness=-ei,
        entangled=ei > TOL_ENT,
        d_minus=dm,
        E_N=max(0.0, en_raw),
        E_N_unclipped=en_raw,
        Delta=delta,
        DeltaS=si["DeltaS"],
        GNI=-I1 - I2 + 2 * ei,
        GNI_closed_form=-delta + si["DeltaS"] / 2 - 2 * si["IS4"] - 1 / 8,
    )


def gni_three_mode(state: MomentMatrices, tol_phys: float = 1e-9) -> InvariantReport3:
    """Three-mode report built from single-mode and two-mode reductions.

    ``GNI3 = sum LNI_j + 2 sum EI_jk``; the auxiliary ``Delta3``, ``DeltaS3`` and
    ``K`` satisfy ``GNI3 = -Delta3 + DeltaS3/2 - K - 3/8`` for every state.
    """
    _check_modes(state, 3)
    require_physical(state, tol_phys)
    cm = to_quadrature(state)
    lni = tuple(local_nonclassicality(state, j) for j in range(3))
    pairs = list(combinations(range(3), 2))
    ei_pair = tuple(entanglement_invariant(reduce(state, p)) for p in pairs)
    det_local = [_det2(cm.block(j)) for j in range(3)]
    det_cross = [_det2(cm.cross(j, k)) for j, k in pairs]
    det_pair = [float(np.linalg.det(cm.submatrix(p))) for p in pairs]
    delta3 = -sum(lni) + 2 * sum(det_cross)
    delta_s3 = sum(det_local) + 2 * sum(det_cross)
    K = 2 * sum(det_pair) - sum(det_local) / 2
    return InvariantReport3(
        LNI=lni,
        EI_pair=ei_pair,
        GNI3=sum(lni) + 2 * sum(ei_pair),
        Delta3=delta3,
        DeltaS3=delta_s3,
        K=K,
        GNI3_closed_form=-delta3 + delta_s3 / 2 - K - 3 / 8,
    )


def report(state: MomentMatrices):
    """Two- or three-mode report, chosen by the mode count."""
    if state.n == 2:
        return gni_two_mode(state)
    if state.n == 3:
        return gni_three_mode(state)
    raise DimensionMismatchError(f"invariant reports exist for 2 or 3 modes, got {state.n}")


def global_invariant(state: MomentMatrices) -> float:
    """``GNI`` for two modes, ``GNI3`` for three."""
    r = report(state)
    return r.GNI if state.n == 2 else r.GNI3
