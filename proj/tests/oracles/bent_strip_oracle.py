"""Independent reference for the bent-strip bound state.

Strip of half-width a = 1 along a curve with curvature 0.5 exp(-s^2).
Weighted form  int h^-1 |psi_s|^2 + h |psi_u|^2  with mass  int h psi^2,
h = 1 - kappa(s) u, expanded in the Dirichlet sine modes of (-a, a),
Gauss-Legendre quadrature across, piecewise-linear finite differences along s.

Frozen result used by the acceptance test: E = 2.466122 (+- 3e-6),
from M = 8..16 modes, L = 96..384, hs = 1/16, 1/32 (Richardson in hs).
"""
import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as sla
from numpy.polynomial.legendre import leggauss

A = 1.0
K0 = 0.5
XG, WG = leggauss(64)
UG = A * XG
WU = A * WG


def kappa(s):
    return K0 * np.exp(-s * s)


def chi(n, u):
    return np.sin(n * np.pi * (u + A) / (2 * A)) / np.sqrt(A)


def dchi(n, u):
    return n * np.pi / (2 * A) * np.cos(n * np.pi * (u + A) / (2 * A)) / np.sqrt(A)


def solve(L, hs, modes=8):
    ns = int(round(2 * L / hs)) - 1
    s = -L + hs * np.arange(1, ns + 1)
    X = np.array([chi(n, UG) for n in range(1, modes + 1)])
    D = np.array([dchi(n, UG) for n in range(1, modes + 1)])

    def weights(sv):
        h = 1 - kappa(sv) * UG
        return (X * WU / h) @ X.T, (D * WU * h) @ D.T, (X * WU * h) @ X.T

    n = ns * modes
    K = sp.lil_matrix((n, n))
    M = sp.lil_matrix((n, n))
    faces = np.concatenate([[s[0] - hs], s]) + hs / 2
    for f, sf in enumerate(faces):
        af = weights(sf)[0] / hs
        left, right = f - 1, f
        for p, q, sign in [(left, left, 1), (right, right, 1), (left, right, -1), (right, left, -1)]:
            if 0 <= p < ns and 0 <= q < ns:
                K[p * modes:(p + 1) * modes, q * modes:(q + 1) * modes] += sign * af
    for i, sv in enumerate(s):
        _, b, m = weights(sv)
        K[i * modes:(i + 1) * modes, i * modes:(i + 1) * modes] += b * hs
        M[i * modes:(i + 1) * modes, i * modes:(i + 1) * modes] += m * hs
    w = sla.eigsh(K.tocsc(), k=2, M=M.tocsc(), sigma=2.0, which="LM", return_eigenvectors=False)
    return np.sort(w)


if __name__ == "__main__":
    for L in (96, 192):
        coarse = solve(L, 1 / 16)[0]
        fine = solve(L, 1 / 32)[0]
        print(L, coarse, fine, fine + (fine - coarse) / 3, flush=True)
