"""Eigendecomposition of the random-walk Laplacian and fractional powers.

The operator is L = Id - A D^{-1}. For regular graphs L is symmetric and is
diagonalized directly under the plain inner product. For non-regular graphs we
diagonalize the symmetric conjugate Id - D^{-1/2} A D^{-1/2} and map each
eigenvector psi to D^{1/2} psi, a right-eigenvector of L with the same
eigenvalue; the module inner product then carries per-vertex weights 1/deg so
the mapped eigenvectors stay orthonormal. Non-regular support is an extension
(the greedy sampler is designed for regular graphs and warns otherwise); note
that with this convention the trivial eigenvector of a non-regular graph is
proportional to the degree vector rather than constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError
from .graphs import Graph

# Eigenvalues this close to 0 are snapped to exactly 0 (trivial-mode detection).
ZERO_EIGENVALUE_TOL = 1e-9


@dataclass
class Spectrum:
    """Full eigendecomposition of L = Id - A D^{-1} for a connected graph.

    eigenvalues are ascending with the trivial eigenvalue stored as exactly 0;
    eigenvectors[:, i] belongs to eigenvalues[i] and the columns are
    orthonormal under the weighted inner product sum_x u(x) v(x) weights[x].
    Immutable after construction; safe for concurrent reads.
    """

    graph: Graph
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    weights: np.ndarray
    _potentials: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        """Module inner product (plain for regular graphs, 1/deg-weighted otherwise)."""
        return float(np.dot(u * self.weights, v))

    def coefficients(self, v: np.ndarray) -> np.ndarray:
        """Expansion coefficients of v in the eigenvector basis."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise InputError(f"vertex function has shape {v.shape}, expected ({self.n},)")
        return self.eigenvectors.T @ (self.weights * v)

    def synthesize(self, coeffs: np.ndarray) -> np.ndarray:
        """Inverse of coefficients: sum_i coeffs[i] * eigenvector_i."""
        return self.eigenvectors @ np.asarray(coeffs, dtype=float)


def decompose(g: Graph) -> Spectrum:
    """Dense eigendecomposition of Id - A D^{-1} (see module docstring)."""
    n = g.n
    adj = g.adjacency_matrix().toarray()
    deg = g.degrees.astype(float)
    if g.regular:
        lap = np.eye(n) - adj / deg[0]
        weights = np.ones(n)
        vals, vecs = np.linalg.eigh(lap)
    else:
        dis = 1.0 / np.sqrt(deg)
        sym = np.eye(n) - dis[:, None] * adj * dis[None, :]
        vals, vecs = np.linalg.eigh(sym)
        vecs = np.sqrt(deg)[:, None] * vecs
        weights = 1.0 / deg
    vals = vals.copy()
    vals[np.abs(vals) <= ZERO_EIGENVALUE_TOL] = 0.0
    if vals[0] != 0.0 or vals[1] <= 0.0:
        raise NumericalError(
            f"unexpected spectrum near zero: lambda_1={vals[0]!r}, lambda_2={vals[1]!r}"
        )
    if vals[-1] > 2.0 + 1e-9:
        raise NumericalError(f"eigenvalue {vals[-1]!r} above the [0, 2] range")
    # Deterministic sign: first non-negligible entry of each column positive.
    for i in range(n):
        col = vecs[:, i]
        nz = np.nonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0]
        if len(nz) and col[nz[0]] < 0:
            vecs[:, i] = -col
    return Spectrum(graph=g, eigenvalues=vals, eigenvectors=vecs, weights=weights)


def apply_fractional(s: Spectrum, v: np.ndarray, alpha: float) -> np.ndarray:
    """Apply the fractional power (-Laplacian)^alpha to a vertex function.

    Positive alpha uses the full spectrum; negative alpha inverts on the
    mean-zero subspace, skipping the trivial mode, so the result is orthogonal
    to it (zero plain mean on both regular and non-regular graphs).
    """
    if alpha == 0:
        raise InputError("alpha must be nonzero")
    c = s.coefficients(v)
    lam = s.eigenvalues
    if alpha > 0:
        scale = np.zeros_like(lam)
        nz = lam > 0
        scale[nz] = lam[nz] ** alpha
        return s.synthesize(c * scale)
    nz = lam > 0
    return s.eigenvectors[:, nz] @ (c[nz] * lam[nz] ** alpha)


def potential_matrix(s: Spectrum, alpha: float) -> np.ndarray:
    """Matrix whose column x is (-Laplacian)^{-alpha} applied to delta_x (cached)."""
    if not alpha > 0:
        raise InputError(f"potential exponent must be positive, got {alpha}")
    key = float(alpha)
    mat = s._potentials.get(key)
    if mat is None:
        lam = s.eigenvalues
        nz = lam > 0
        phi = s.eigenvectors[:, nz]
        mat = (phi * lam[nz] ** (-alpha)) @ phi.T * s.weights[None, :]
        s._potentials[key] = mat
    return mat


def point_potential(s: Spectrum, x: int, alpha: float) -> np.ndarray:
    """(-Laplacian)^{-alpha} of the point mass at vertex x (memoized per alpha)."""
    if not 0 <= x < s.n:
        raise InputError(f"vertex {x} out of range for n={s.n}")
    return potential_matrix(s, alpha)[:, x].copy()


def spectrum_to_json(s: Spectrum) -> dict:
    """JSON document caching a decomposition across CLI invocations."""
    return {
        "graph": s.graph.name,
        "n": s.n,
        "eigenvalues": s.eigenvalues.tolist(),
        "eigenvectors": s.eigenvectors.tolist(),
        "weights": s.weights.tolist(),
    }


def spectrum_from_json(doc: dict, graph: Graph) -> Spectrum:
    """Rebuild a Spectrum from its JSON document, validated against the graph."""
    try:
        n = int(doc["n"])
        vals = np.asarray(doc["eigenvalues"], dtype=float)
        vecs = np.asarray(doc["eigenvectors"], dtype=float)
        weights = np.asarray(doc["weights"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed spectrum document: {exc}") from None
    if n != graph.n or vals.shape != (n,) or vecs.shape != (n, n) or weights.shape != (n,):
        raise InputError(
            f"spectrum document does not match graph: n={n} vs graph n={graph.n}"
        )
    return Spectrum(graph=graph, eigenvalues=vals, eigenvectors=vecs, weights=weights)
