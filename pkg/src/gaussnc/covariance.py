r"""Gaussian-state data model in normal and symmetric operator ordering.

A zero-mean n-mode Gaussian state is stored as two complex matrices

.. math::

    N_{kl} = \langle \Delta a_k^\dagger \Delta a_l \rangle, \qquad
    M_{kl} = \langle \Delta a_k \Delta a_l \rangle,

so that ``B_j = N[j, j]``, ``C_j = M[j, j]``, ``D_jk = M[j, k]`` and
``Dbar_jk = -N[j, k]``.  The symmetrically ordered (quadrature) covariance
matrix uses ``x = (a + a^dag)/sqrt(2)``, ``p = (a - a^dag)/(i sqrt(2))`` in
mode-interleaved order ``(x_1, p_1, x_2, p_2, ...)``, so the vacuum has
``sigma = I/2``.  That vacuum convention is the one for which every pure
two-mode state has ``det(sigma) = 1/16``.

Mode indices in the Python API are 0-based.
"""

import ast
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    MalformedStateError,
    NumericalDegeneracyError,
    ParameterRangeError,
    UnphysicalStateError,
)

TOL_PHYS = 1e-9
TOL_PURE = 1e-9
_STRUCT_TOL = 1e-10


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MomentMatrices:
    """Normal moments ``N`` (Hermitian) and anomalous moments ``M`` (symmetric).

    The matrices are validated, exactly (anti)symmetrized to remove rounding
    noise, and stored read-only.
    """

    N: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        try:
            N = np.asarray(self.N, dtype=complex)
            M = np.asarray(self.M, dtype=complex)
        except (TypeError, ValueError) as exc:
            raise MalformedStateError(f"moment matrices are not numeric: {exc}") from exc
        if N.ndim != 2 or N.shape[0] != N.shape[1] or N.shape[0] < 1:
            raise MalformedStateError(f"N must be a non-empty square matrix, got shape {N.shape}")
        if M.shape != N.shape:
            raise MalformedStateError(f"M has shape {M.shape}, expected {N.shape}")
        if not (np.all(np.isfinite(N)) and np.all(np.isfinite(M))):
            raise MalformedStateError("moment matrices contain non-finite entries")
        scale = max(1.0, float(np.max(np.abs(N))), float(np.max(np.abs(M))))
        if np.max(np.abs(N - N.conj().T)) > _STRUCT_TOL * scale:
            raise MalformedStateError("N is not Hermitian")
        if np.max(np.abs(M - M.T)) > _STRUCT_TOL * scale:
            raise MalformedStateError("M is not symmetric")
        N = (N + N.conj().T) / 2
        M = (M + M.T) / 2
        if np.any(N.diagonal().real < -_STRUCT_TOL * scale):
            raise MalformedStateError("N has a negative diagonal entry (mean photon number)")
        object.__setattr__(self, "N", _frozen(N, complex))
        object.__setattr__(self, "M", _frozen(M, complex))

    @property
    def n(self) -> int:
        return self.N.shape[0]

    @property
    def B(self) -> np.ndarray:
        """Mean photon numbers ``B_j`` (real)."""
        return self.N.diagonal().real.copy()

    @property
    def C(self) -> np.ndarray:
        """Local anomalous moments ``C_j = <(Delta a_j)^2>``."""
        return self.M.diagonal().copy()

    def D(self, j: int, k: int) -> complex:
        return complex(self.M[j, k])

    def Dbar(self, j: int, k: int) -> complex:
        return complex(-self.N[j, k])

    def allclose(self, other, atol=1e-12) -> bool:
        return (
            self.n == other.n
            and np.allclose(self.N, other.N, rtol=0, atol=atol)
            and np.allclose(self.M, other.M, rtol=0, atol=atol)
        )

    def __repr__(self):
        return f"MomentMatrices(n={self.n}, B={np.round(self.B, 6).tolist()})"


@dataclass(frozen=True, eq=False)
class QuadratureCM:
    """Real symmetric ``2n x 2n`` covariance matrix, ordering ``(x1, p1, x2, p2, ...)``."""

    sigma: np.ndarray

    def __post_init__(self):
        try:
            s = np.asarray(self.sigma, dtype=float)
        except (TypeError, ValueError) as exc:
            raise MalformedStateError(f"covariance matrix is not real numeric: {exc}") from exc
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] == 0 or s.shape[0] % 2:
            raise MalformedStateError(f"sigma must be 2n x 2n, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise MalformedStateError("sigma contains non-finite entries")
        scale = max(1.0, float(np.max(np.abs(s))))
        if np.max(np.abs(s - s.T)) > _STRUCT_TOL * scale:
            raise MalformedStateError("sigma is not symmetric")
        object.__setattr__(self, "sigma", _frozen((s + s.T) / 2, float))

    @property
    def n(self) -> int:
        return self.sigma.shape[0] // 2

    def block(self, j: int) -> np.ndarray:
        """Local block ``S_j``."""
        return self.sigma[2 * j:2 * j + 2, 2 * j:2 * j + 2]

    def cross(self, j: int, k: int) -> np.ndarray:
        """Correlation block ``S_jk``."""
        return self.sigma[2 * j:2 * j + 2, 2 * k:2 * k + 2]

    def submatrix(self, modes) -> np.ndarray:
        idx = [i for m in modes for i in (2 * m, 2 * m + 1)]
        return self.sigma[np.ix_(idx, idx)]


def symplectic_form(n: int) -> np.ndarray:
    """Block-diagonal ``Omega`` with one ``[[0, 1], [-1, 0]]`` block per mode."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def normal_ordered_matrix(state: MomentMatrices) -> np.ndarray:
    r"""The complex ``2n x 2n`` matrix ``A`` of the normally ordered characteristic
    function ``C_N(beta) = exp(beta^dag A beta / 2)``, ``beta = (b1, b1*, b2, b2*, ...)``.

    Block ``(j, k)`` is ``[[-N[k, j], M[j, k]], [conj(M[j, k]), -N[j, k]]]``; for
    ``j == k`` this is ``[[-B_j, C_j], [C_j*, -B_j]]``.  Presentation only.
    """
    n = state.n
    A = np.empty((2 * n, 2 * n), dtype=complex)
    A[0::2, 0::2] = -state.N.T
    A[0::2, 1::2] = state.M
    A[1::2, 0::2] = state.M.conj()
    A[1::2, 1::2] = -state.N
    return A


def to_quadrature(state: MomentMatrices) -> QuadratureCM:
    """Convert normal/anomalous moments to the symmetric quadrature covariance."""
    n = state.n
    plus = state.M + state.N    # D - Dbar
    minus = state.M - state.N   # D + Dbar
    s = np.empty((2 * n, 2 * n))
    s[0::2, 0::2] = plus.real
    s[0::2, 1::2] = plus.imag
    s[1::2, 0::2] = minus.imag
    s[1::2, 1::2] = -minus.real
    return QuadratureCM(s + 0.5 * np.eye(2 * n))


def from_quadrature(cm: QuadratureCM) -> MomentMatrices:
    """Exact inverse of :func:`to_quadrature`."""
    if not isinstance(cm, QuadratureCM):
        cm = QuadratureCM(cm)
    s = cm.sigma - 0.5 * np.eye(2 * cm.n)
    xx, xp = s[0::2, 0::2], s[0::2, 1::2]
    px, pp = s[1::2, 0::2], s[1::2, 1::2]
    M = (xx - pp) / 2 + 1j * (xp + px) / 2
    N = (xx + pp) / 2 + 1j * (xp - px) / 2
    return MomentMatrices(N, M)


def _as_cm(x) -> QuadratureCM:
    if isinstance(x, QuadratureCM):
        return x
    if isinstance(x, MomentMatrices):
        return to_quadrature(x)
    return QuadratureCM(x)


class PhysicalityVerdict(NamedTuple):
    physical: bool
    min_eig: float


def validate_physical(state, tol_phys: float = TOL_PHYS) -> PhysicalityVerdict:
    """Check the uncertainty relation ``sigma + (i/2) Omega >= 0``.

    Returns the verdict together with the smallest eigenvalue of the Hermitian
    matrix; never raises for well-formed input.
    """
    cm = _as_cm(state)
    h = cm.sigma + 0.5j * symplectic_form(cm.n)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    return PhysicalityVerdict(min_eig >= -tol_phys, min_eig)


def require_physical(state, tol_phys: float = TOL_PHYS):
    verdict = validate_physical(state, tol_phys)
    if not verdict.physical:
        raise UnphysicalStateError(
            f"state violates the uncertainty relation (min_eig={verdict.min_eig:.3e})",
            min_eig=verdict.min_eig,
        )
    return state


def symplectic_eigenvalues(state, tol: float = 1e-9) -> np.ndarray:
    r"""Symplectic spectrum ``nu_1 <= ... <= nu_n`` of a positive-definite ``sigma``.

    The spectrum of ``i Omega sigma`` is ``{+nu_k, -nu_k}``.  It is computed from
    the similar Hermitian matrix ``sigma^{1/2} (i Omega) sigma^{1/2}`` so that
    degenerate values (pure states) are resolved to machine precision.
    """
    cm = _as_cm(state)
    n = cm.n
    w, v = np.linalg.eigh(cm.sigma)
    if w[0] <= 0:
        raise UnphysicalStateError(
            f"covariance matrix is not positive definite (min eigenvalue {w[0]:.3e})",
            min_eig=float(w[0]),
        )
    root = (v * np.sqrt(w)) @ v.T
    ev = np.linalg.eigvalsh(root @ (1j * symplectic_form(n)) @ root)
    neg, pos = -ev[:n][::-1], ev[n:]
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.any(neg < 0) or np.max(np.abs(neg - pos)) > tol * scale:
        raise NumericalDegeneracyError(f"spectrum of i*Omega*sigma is not +/- paired: {ev}")
    return (pos + neg) / 2


def purity_check(state, tol_pure: float = TOL_PURE, tol_phys: float = TOL_PHYS) -> bool:
    """True iff every symplectic eigenvalue equals 1/2 within ``tol_pure``."""
    require_physical(state, tol_phys)
    nu = symplectic_eigenvalues(state)
    return bool(np.all(np.abs(nu - 0.5) <= tol_pure))


def reduce(state: MomentMatrices, keep) -> MomentMatrices:
    """Marginal state on the modes in ``keep`` (0-based, returned in ascending order)."""
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must not be empty")
    if keep[0] < 0 or keep[-1] >= state.n:
        raise ValueError(f"mode indices {keep} out of range for {state.n} modes")
    idx = np.ix_(keep, keep)
    return MomentMatrices(state.N[idx], state.M[idx])


# -- constructors ---------------------------------------------------------------

def _check_nonneg(name, value):
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise ParameterRangeError(f"{name} must be a finite number >= 0, got {value}")
    return value


def vacuum(n: int = 1) -> MomentMatrices:
    if int(n) != n or n < 1:
        raise ParameterRangeError(f"mode count must be a positive integer, got {n}")
    n = int(n)
    return MomentMatrices(np.zeros((n, n)), np.zeros((n, n)))


def thermal(B: float) -> MomentMatrices:
    B = _check_nonneg("thermal mean photon number", B)
    return MomentMatrices([[B]], [[0.0]])


def squeezed_thermal(B_th: float, r: float, phi: float = 0.0) -> MomentMatrices:
    r"""Thermal state of mean ``B_th`` squeezed by ``r`` along angle ``phi``.

    ``B = B_th cosh 2r + sinh^2 r``, ``C = -e^{i phi} (B_th + 1/2) sinh 2r``.
    """
    B_th = _check_nonneg("B_th", B_th)
    r, phi = float(r), float(phi)
    if not (math.isfinite(r) and math.isfinite(phi)):
        raise ParameterRangeError("squeezing parameter and phase must be finite")
    B = B_th * math.cosh(2 * r) + math.sinh(r) ** 2
    C = -np.exp(1j * phi) * (B_th + 0.5) * math.sinh(2 * r)
    return MomentMatrices([[B]], [[C]])


def squeezed_vacuum(r: float, phi: float = 0.0) -> MomentMatrices:
    return squeezed_thermal(0.0, r, phi)


def noisy_twin_beam(B_p: float, B_n1: float = 0.0, B_n2: float = 0.0) -> MomentMatrices:
    """Twin beam with ``B_p`` mean photon pairs plus independent noise photons per arm."""
    B_p = _check_nonneg("B_p", B_p)
    B_n1 = _check_nonneg("B_n1", B_n1)
    B_n2 = _check_nonneg("B_n2", B_n2)
    d = math.sqrt(B_p * (B_p + 1))
    return MomentMatrices(np.diag([B_p + B_n1, B_p + B_n2]), [[0.0, d], [d, 0.0]])


def twin_beam(B_p: float) -> MomentMatrices:
    """Noiseless twin beam (two-mode squeezed vacuum) with ``B_p`` mean photon pairs."""
    return noisy_twin_beam(B_p)


def product(*states: MomentMatrices) -> MomentMatrices:
    """Tensor product, i.e. block-diagonal composition of the moment matrices."""
    if not states:
        raise ValueError("product of zero states")
    n = sum(s.n for s in states)
    N = np.zeros((n, n), dtype=complex)
    M = np.zeros((n, n), dtype=complex)
    i = 0
    for s in states:
        N[i:i + s.n, i:i + s.n] = s.N
        M[i:i + s.n, i:i + s.n] = s.M
        i += s.n
    return MomentMatrices(N, M)


CONSTRUCTORS = {
    "vacuum": vacuum,
    "thermal": thermal,
    "squeezed_thermal": squeezed_thermal,
    "squeezed_vacuum": squeezed_vacuum,
    "twin_beam": twin_beam,
    "noisy_twin_beam": noisy_twin_beam,
    "product": product,
}


def _eval_expr(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
            and not isinstance(node.value, bool):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_expr(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Mult, ast.Div)):
        a, b = _eval_expr(node.left), _eval_expr(node.right)
        if isinstance(node.op, ast.Div) and b == 0:
            raise MalformedStateError("division by zero in constructor spec")
        return a * b if isinstance(node.op, ast.Mult) else a / b
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        func = CONSTRUCTORS.get(node.func.id)
        if func is None:
            raise MalformedStateError(f"unknown state constructor {node.func.id!r}")
        args = [_eval_expr(a) for a in node.args]
        kwargs = {kw.arg: _eval_expr(kw.value) for kw in node.keywords}
        try:
            return func(*args, **kwargs)
        except (ParameterRangeError, MalformedStateError):
            raise
        except (TypeError, ValueError) as exc:
            raise MalformedStateError(f"bad arguments for {node.func.id}: {exc}") from exc
    raise MalformedStateError(f"unsupported expression in constructor spec: {ast.dump(node)}")


def make_state(spec) -> MomentMatrices:
    """Build a state from a constructor spec.

    ``spec`` is either an expression string such as
    ``"product(noisy_twin_beam(1, 0.3, 0.7), vacuum(1))"`` or a mapping
    ``{"kind": "twin_beam", "B_p": 1.0}`` (``product`` takes ``"states"``).
    """
    if isinstance(spec, MomentMatrices):
        return spec
    if isinstance(spec, str):
        try:
            tree = ast.parse(spec.strip(), mode="eval")
        except SyntaxError as exc:
            raise MalformedStateError(f"cannot parse constructor spec {spec!r}") from exc
        state = _eval_expr(tree.body)
        if not isinstance(state, MomentMatrices):
            raise MalformedStateError(f"constructor spec {spec!r} does not describe a state")
        return state
    if isinstance(spec, dict):
        params = dict(spec)
        kind = params.pop("kind", None)
        if kind not in CONSTRUCTORS:
            raise MalformedStateError(f"unknown state constructor {kind!r}")
        if kind == "product":
            return product(*(make_state(s) for s in params.get("states", [])))
        try:
            return CONSTRUCTORS[kind](**params)
        except TypeError as exc:
            raise MalformedStateError(f"bad parameters for {kind}: {exc}") from exc
    raise MalformedStateError(f"unsupported constructor spec type {type(spec).__name__}")


# -- JSON state schema ------------------------------------------------------------

def _parse_complex(value, where):
    if isinstance(value, bool):
        raise MalformedStateError(f"{where}: booleans are not numbers")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, dict) and set(value) <= {"re", "im"} and value:
        re, im = value.get("re", 0.0), value.get("im", 0.0)
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            return complex(re, im)
    raise MalformedStateError(f"{where}: expected a number or {{'re':..,'im':..}}, got {value!r}")


def _parse_matrix(rows, n, name):
    if not isinstance(rows, list) or len(rows) != n:
        raise MalformedStateError(f"{name} must be a list of {n} rows")
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MalformedStateError(f"{name}[{i}] must have {n} entries")
        for j, v in enumerate(row):
            out[i, j] = _parse_complex(v, f"{name}[{i}][{j}]")
    return out


def state_from_json(obj) -> MomentMatrices:
    """Parse a state from its JSON object form.

    Accepted forms: canonical ``{"modes", "N", "M"}``; the two-mode convenience
    form ``{"B1", "B2", "C1", "C2", "D12", "Dbar12"}``; a constructor object
    ``{"kind": ...}`` or ``{"constructor": "twin_beam(1)"}``.
    """
    if not isinstance(obj, dict):
        raise MalformedStateError("state JSON must be an object")
    if "constructor" in obj:
        return make_state(obj["constructor"])
    if "kind" in obj:
        return make_state(obj)
    if "N" in obj or "M" in obj:
        n = obj.get("modes")
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise MalformedStateError("'modes' must be a positive integer")
        N = _parse_matrix(obj.get("N"), n, "N")
        M = _parse_matrix(obj.get("M"), n, "M")
        return MomentMatrices(N, M)
    if "B1" in obj and "B2" in obj:
        B1 = _parse_complex(obj["B1"], "B1")
        B2 = _parse_complex(obj["B2"], "B2")
        if B1.imag or B2.imag:
            raise MalformedStateError("B1, B2 must be real")
        C1 = _parse_complex(obj.get("C1", 0.0), "C1")
        C2 = _parse_complex(obj.get("C2", 0.0), "C2")
        D = _parse_complex(obj.get("D12", 0.0), "D12")
        Dbar = _parse_complex(obj.get("Dbar12", 0.0), "Dbar12")
        N = np.array([[B1.real, -Dbar], [-Dbar.conjugate(), B2.real]])
        M = np.array([[C1, D], [D, C2]])
        return MomentMatrices(N, M)
    raise MalformedStateError("unrecognized state JSON form")


def _complex_json(z):
    z = complex(z)
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


def state_to_json(state: MomentMatrices) -> dict:
    """Canonical ``{"modes", "N", "M"}`` form."""
    return {
        "modes": state.n,
        "N": [[_complex_json(v) for v in row] for row in state.N],
        "M": [[_complex_json(v) for v in row] for row in state.M],
    }
