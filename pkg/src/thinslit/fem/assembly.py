"""Biquadratic stiffness/mass assembly and face integrals."""

import numpy as np
import scipy.sparse as sparse

# 1D quadratic Lagrange element on [0, 1], nodes (0, 1/2, 1)
_K1 = np.array([[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]]) / 3.0
_M1 = np.array([[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]]) / 30.0


def shape_1d(t):
    """Quadratic Lagrange basis at local coordinates ``t`` in [0, 1]."""
    t = np.asarray(t, dtype=float)
    return np.stack([2.0 * (t - 0.5) * (t - 1.0), 4.0 * t * (1.0 - t), 2.0 * t * (t - 0.5)], axis=-1)


def _rect_blocks(rm):
    hx = np.diff(rm.x_edges)
    hy = np.diff(rm.y_edges)
    # element (i, j) -> flattened i * ny + j, matching RectMesh.element_nodes
    HX = np.repeat(hx, len(hy))
    HY = np.tile(hy, len(hx))
    kx_my = np.einsum("ac,bd->abcd", _K1, _M1).reshape(9, 9)
    mx_ky = np.einsum("ac,bd->abcd", _M1, _K1).reshape(9, 9)
    mx_my = np.einsum("ac,bd->abcd", _M1, _M1).reshape(9, 9)
    stiff = (HY / HX)[:, None, None] * kx_my + (HX / HY)[:, None, None] * mx_ky
    mass = (HX * HY)[:, None, None] * mx_my
    return stiff, mass


def assemble_parts(mesh):
    """Global stiffness and mass matrices (real, symmetric, CSR)."""
    rows, cols, kvals, mvals = [], [], [], []
    for rm in mesh.rects.values():
        conn = rm.element_nodes()
        stiff, mass = _rect_blocks(rm)
        rows.append(np.repeat(conn, 9, axis=1).ravel())
        cols.append(np.tile(conn, (1, 9)).ravel())
        kvals.append(stiff.ravel())
        mvals.append(mass.ravel())
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    n = mesh.n_nodes
    K = sparse.coo_matrix((np.concatenate(kvals), (rows, cols)), shape=(n, n)).tocsr()
    M = sparse.coo_matrix((np.concatenate(mvals), (rows, cols)), shape=(n, n)).tocsr()
    return K, M


def assemble(mesh, omega):
    """``K - omega^2 M`` as a complex CSR matrix.

    Sound-hard walls are natural boundary conditions and need no rows
    modified; the matrix is symmetric.
    """
    K, M = assemble_parts(mesh)
    return (K - omega**2 * M).astype(complex)


_GAUSS_T, _GAUSS_W = np.polynomial.legendre.leggauss(10)
_GAUSS_T = 0.5 * (_GAUSS_T + 1.0)
_GAUSS_W = 0.5 * _GAUSS_W


def edge_integrals(edges, functions):
    """``int f(s) N_i(s) ds`` along a 1D Q2 edge for each function.

    ``edges`` are the element boundaries of the edge; ``functions`` maps an
    array of coordinates to an array of shape (n_functions, n_points).
    Returns an array (n_functions, 2 * len(edges) - 1).
    """
    h = np.diff(edges)
    pts = edges[:-1, None] + h[:, None] * _GAUSS_T[None, :]
    vals = functions(pts.ravel()).reshape(-1, len(h), len(_GAUSS_T))
    basis = shape_1d(_GAUSS_T)  # (q, 3)
    local = np.einsum("feq,qa,q,e->fea", vals, basis, _GAUSS_W, h)
    n_nodes = 2 * len(h) + 1
    out = np.zeros((vals.shape[0], n_nodes), dtype=local.dtype)
    for a in range(3):
        np.add.at(out, (slice(None), 2 * np.arange(len(h)) + a), local[:, :, a])
    return out
