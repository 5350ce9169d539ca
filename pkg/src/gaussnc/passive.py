"""Passive (photon-number preserving) linear-optical transformations.

A :class:`PassiveUnitary` ``U`` maps annihilation operators as ``a' = U a``.
On the moment matrices this is the congruence ``N' = conj(U) N U^T``,
``M' = U M U^T``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .covariance import MomentMatrices, QuadratureCM
from .errors import DimensionMismatchError, MalformedStateError, ParameterRangeError

UNITARITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PassiveUnitary:
    """An element of U(n), validated at construction and stored read-only."""

    U: np.ndarray

    def __post_init__(self):
        U = np.array(self.U, dtype=complex, copy=True)
        if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] < 1:
            raise ValueError(f"unitary must be a non-empty square matrix, got shape {U.shape}")
        residual = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
        if not residual <= UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary (|U^dag U - I| = {residual:.3e})")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def inverse(self) -> "PassiveUnitary":
        return PassiveUnitary(self.U.conj().T)

    def __matmul__(self, other):
        if isinstance(other, PassiveUnitary):
            return compose(self, other)
        if isinstance(other, MomentMatrices):
            return apply(self, other)
        return NotImplemented


def identity(n: int) -> PassiveUnitary:
    return PassiveUnitary(np.eye(n))


def _check_mode(n, j):
    if int(j) != j or not 0 <= j < n:
        raise ValueError(f"mode index {j} out of range for {n} modes")
    return int(j)


def beam_splitter(n: int, i: int, j: int, T: float, phase: float = 0.0) -> PassiveUnitary:
    r"""Beam splitter of transmissivity ``T`` between modes ``i`` and ``j``.

    The 2x2 block on ``(i, j)`` is
    ``[[sqrt(T), e^{i phase} sqrt(1-T)], [-e^{-i phase} sqrt(1-T), sqrt(T)]]``.
    """
    i, j = _check_mode(n, i), _check_mode(n, j)
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    T = float(T)
    if not 0.0 <= T <= 1.0:
        raise ParameterRangeError(f"transmissivity must lie in [0, 1], got {T}")
    t, r = math.sqrt(T), math.sqrt(1.0 - T)
    U = np.eye(n, dtype=complex)
    U[i, i] = U[j, j] = t
    U[i, j] = np.exp(1j * phase) * r
    U[j, i] = -np.exp(-1j * phase) * r
    return PassiveUnitary(U)


def phase_shifter(n: int, j: int, theta: float) -> PassiveUnitary:
    j = _check_mode(n, j)
    U = np.eye(n, dtype=complex)
    U[j, j] = np.exp(1j * theta)
    return PassiveUnitary(U)


def compose(a: PassiveUnitary, b: PassiveUnitary) -> PassiveUnitary:
    """``a @ b``: ``b`` acts first, then ``a``."""
    if a.n != b.n:
        raise DimensionMismatchError(f"cannot compose U({a.n}) with U({b.n})")
    return PassiveUnitary(a.U @ b.U)


def haar_random(n: int, seed=None) -> PassiveUnitary:
    """Haar-distributed U(n) sample.

    QR of a complex Ginibre matrix, with each column of ``Q`` rescaled by the
    phase of the matching diagonal entry of ``R`` so that ``R`` has a positive
    real diagonal.  ``seed`` feeds :func:`numpy.random.default_rng` (PCG64), or
    may be a ``Generator`` to draw several samples from one stream.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    return PassiveUnitary(q * (d / np.abs(d)))


def apply(u: PassiveUnitary, state: MomentMatrices) -> MomentMatrices:
    if u.n != state.n:
        raise DimensionMismatchError(f"U({u.n}) cannot act on a {state.n}-mode state")
    U = u.U
    return MomentMatrices(U.conj() @ state.N @ U.T, U @ state.M @ U.T)


def orthosymplectic(u: PassiveUnitary) -> np.ndarray:
    """Real ``2n x 2n`` orthogonal symplectic image of ``U`` in ``(x1, p1, ...)`` order.

    With ``X = Re U`` and ``Y = Im U`` the quadratures transform as
    ``x' = X x - Y p``, ``p' = Y x + X p``.
    """
    X, Y = u.U.real, u.U.imag
    n = u.n
    S = np.empty((2 * n, 2 * n))
    S[0::2, 0::2] = X
    S[0::2, 1::2] = -Y
    S[1::2, 0::2] = Y
    S[1::2, 1::2] = X
    return S


def apply_quadrature(u: PassiveUnitary, cm: QuadratureCM) -> QuadratureCM:
    if u.n != cm.n:
        raise DimensionMismatchError(f"U({u.n}) cannot act on a {cm.n}-mode state")
    S = orthosymplectic(u)
    return QuadratureCM(S @ cm.sigma @ S.T)


# -- network JSON -----------------------------------------------------------------

def _element_unitary(n, element, pos):
    if not isinstance(element, dict) or len(element) != 1:
        raise MalformedStateError(f"network element {pos} must be an object with one key")
    (kind, params), = element.items()
    if not isinstance(params, dict):
        raise MalformedStateError(f"network element {pos}: parameters must be an object")
    try:
        if kind == "bs":
            modes = params["modes"]
            if not isinstance(modes, list) or len(modes) != 2:
                raise MalformedStateError(f"network element {pos}: 'modes' must list two modes")
            i, j = (_one_based(n, m, pos) for m in modes)
            return beam_splitter(n, i, j, float(params["T"]), float(params.get("phase", 0.0)))
        if kind == "ps":
            j = _one_based(n, params["mode"], pos)
            return phase_shifter(n, j, float(params["theta"]))
        if kind == "unitary":
            U = np.array([[complex(v["re"], v.get("im", 0.0)) if isinstance(v, dict) else complex(v)
                           for v in row] for row in params["U"]])
            if U.shape != (n, n):
                raise DimensionMismatchError(
                    f"network element {pos}: unitary has shape {U.shape}, state has {n} modes")
            return PassiveUnitary(U)
    except (KeyError, TypeError) as exc:
        raise MalformedStateError(f"network element {pos}: missing or bad field {exc}") from exc
    raise MalformedStateError(f"network element {pos}: unknown element type {kind!r}")


def _one_based(n, m, pos):
    if isinstance(m, bool) or not isinstance(m, int):
        raise MalformedStateError(f"network element {pos}: mode {m!r} is not an integer")
    if not 1 <= m <= n:
        raise DimensionMismatchError(
            f"network element {pos}: mode {m} out of range for a {n}-mode state")
    return m - 1


def network_from_json(obj, n: int) -> PassiveUnitary:
    """Compose a network description into one unitary on ``n`` modes.

    ``obj`` is an ordered list such as
    ``[{"bs": {"modes": [1, 2], "T": 0.7, "phase": 0}}, {"ps": {"mode": 2, "theta": 1.57}}]``
    (1-based modes); elements act in list order.  ``{"elements": [...]}`` is also accepted.
    """
    if isinstance(obj, dict) and "elements" in obj:
        obj = obj["elements"]
    if not isinstance(obj, list):
        raise MalformedStateError("network JSON must be a list of elements")
    total = identity(n)
    for pos, element in enumerate(obj):
        try:
            total = compose(_element_unitary(n, element, pos), total)
        except ParameterRangeError as exc:
            raise MalformedStateError(f"network element {pos}: {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, (MalformedStateError, DimensionMismatchError)):
                raise
            raise MalformedStateError(f"network element {pos}: {exc}") from exc
    return total
