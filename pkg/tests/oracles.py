"""Independent reference computations used to freeze expected values.

Nothing here calls the moment/quadrature conversion or the invariant formulas
of the package; states are built in a truncated Fock space or directly as
quadrature covariance matrices, and symplectic spectra come from ``eigvals``
of ``Omega sigma``.
"""

import numpy as np
from scipy.linalg import expm


def omega(n):
    return np.kron(np.eye(n), [[0.0, 1.0], [-1.0, 0.0]])


def symplectic_spectrum(sigma):
    """Moduli of the eigenvalues of ``Omega sigma`` (they come in +/- i nu pairs)."""
    n = sigma.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(omega(n) @ sigma)))
    return ev[0::2]


def pt_d_minus(sigma):
    """Smallest symplectic eigenvalue after flipping the sign of ``p_2``."""
    lam = np.diag([1.0, 1.0, 1.0, -1.0])
    return symplectic_spectrum(lam @ sigma @ lam)[0]


def tmsv_sigma(B_p):
    """Textbook two-mode squeezed vacuum covariance, vacuum variance 1/2."""
    c = (2 * B_p + 1) / 2                 # cosh(2r)/2
    s = np.sqrt(B_p * (B_p + 1))          # sinh(2r)/2
    return np.array([
        [c, 0, s, 0],
        [0, c, 0, -s],
        [s, 0, c, 0],
        [0, -s, 0, c],
    ])


def annihilation(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def fock_two_mode_moments(psi, dim):
    """Second moments of a two-mode Fock-space pure state (zero mean assumed).

    Returns (N, M, sigma) with sigma in (x1, p1, x2, p2) ordering computed from
    the quadrature operators themselves.
    """
    a = annihilation(dim)
    eye = np.eye(dim)
    ops = [np.kron(a, eye), np.kron(eye, a)]
    # <A B> = (A^dag psi)^dag (B psi); only matrix-vector products needed
    low = [op @ psi for op in ops]                 # a_k psi
    up = [op.conj().T @ psi for op in ops]         # a_k^dag psi
    N = np.array([[np.vdot(low[k], low[l]) for l in range(2)] for k in range(2)])
    M = np.array([[np.vdot(up[k], low[l]) for l in range(2)] for k in range(2)])
    quads = []
    for lo, hi in zip(low, up):
        quads.append((lo + hi) / np.sqrt(2))
        quads.append((lo - hi) / (1j * np.sqrt(2)))
    # quadratures are Hermitian: <q_i q_j> = (q_i psi)^dag (q_j psi)
    sigma = np.array([[np.vdot(qi, qj).real for qj in quads] for qi in quads])
    return N, M, sigma


def fock_tmsv(B_p, dim):
    lam = np.sqrt(B_p / (B_p + 1))        # tanh r
    coeff = np.sqrt(1 - lam ** 2) * lam ** np.arange(dim)
    psi = np.zeros(dim * dim, dtype=complex)
    for k in range(dim):
        psi[k * dim + k] = coeff[k]
    return psi


def fock_squeezed_vacuum(r, phi, dim):
    """``exp((xi* a^2 - xi a^dag^2)/2)|0>`` with ``xi = r e^{i phi}``."""
    a = annihilation(dim)
    xi = r * np.exp(1j * phi)
    S = expm((np.conj(xi) * a @ a - xi * a.conj().T @ a.conj().T) / 2)
    vac = np.zeros(dim)
    vac[0] = 1
    psi = S @ vac
    ad = a.conj().T
    return psi, psi.conj() @ ad @ a @ psi, psi.conj() @ a @ a @ psi
