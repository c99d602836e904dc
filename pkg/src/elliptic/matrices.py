# src/elliptic/matrices.py
from __future__ import annotations

"""Sparse Laplacians
------------------
Symmetric second-order Laplacians assembled as Kronecker sums of 1D matrices.
Unknowns are raveled in C order over the [i, j(, k)] layout.

Layouts:
  node_dirichlet  interior nodes, boundary values moved to the right-hand side
  cell_dirichlet  all cells, wall value zero through the ghost u_ghost = -u
  node_neumann    all nodes, homogeneous Neumann; boundary rows carry half
                  (edges) / quarter (corners) weights so L stays symmetric.
                  The operator approximated is M^-1 L, M the diagonal weights.
"""

import functools
from enum import Enum
from typing import List, Tuple

import numpy as np
import scipy.sparse as sp


class Layout(str, Enum):
    node_dirichlet = "node_dirichlet"
    cell_dirichlet = "cell_dirichlet"
    node_neumann = "node_neumann"


def unknown_count(n: int, layout: Layout) -> int:
    return {Layout.node_dirichlet: n - 1, Layout.cell_dirichlet: n, Layout.node_neumann: n + 1}[Layout(layout)]


# ---------- 1D building blocks ----------

def _second_difference(m: int, layout: Layout) -> sp.csr_matrix:
    main = -2.0 * np.ones(m)
    off = np.ones(m - 1)
    if layout == Layout.cell_dirichlet:
        main[0] = main[-1] = -3.0
    elif layout == Layout.node_neumann:
        main[0] = main[-1] = -1.0
    return sp.diags([off, main, off], [-1, 0, 1], format="csr")


def _mass_1d(m: int, layout: Layout) -> sp.csr_matrix:
    w = np.ones(m)
    if layout == Layout.node_neumann:
        w[0] = w[-1] = 0.5
    return sp.diags(w, format="csr")


def _kron_all(factors: List[sp.spmatrix]) -> sp.csr_matrix:
    out = factors[0]
    for f in factors[1:]:
        out = sp.kron(out, f, format="csr")
    return sp.csr_matrix(out)


# ---------- Public builders ----------

@functools.lru_cache(maxsize=32)
def laplacian_matrix(n: int, dim: int, layout: Layout, h: float) -> sp.csr_matrix:
    """L with L u ~ M lap(u) (M = I except for node_neumann)."""
    layout = Layout(layout)
    m = unknown_count(n, layout)
    s1 = _second_difference(m, layout)
    m1 = _mass_1d(m, layout)
    total = None
    for axis in range(dim):
        factors = [s1 if a == axis else m1 for a in range(dim)]
        term = _kron_all(factors)
        total = term if total is None else total + term
    return (total / h**2).tocsr()


@functools.lru_cache(maxsize=32)
def mass_matrix(n: int, dim: int, layout: Layout) -> sp.csr_matrix:
    layout = Layout(layout)
    m = unknown_count(n, layout)
    return _kron_all([_mass_1d(m, layout)] * dim)


def operator_matrix(n: int, dim: int, layout: Layout, h: float, shift: float, coeff: float) -> sp.csr_matrix:
    """A = shift M - coeff L (SPD for coeff > 0, semi-definite for node_neumann with shift = 0)."""
    a = -coeff * laplacian_matrix(n, dim, layout, h)
    if shift:
        a = a + shift * mass_matrix(n, dim, layout)
    return sp.csr_matrix(a)


# ---------- Transfer operators ----------

def _prolong_1d(n_coarse: int, layout: Layout) -> sp.csr_matrix:
    layout = Layout(layout)
    n_fine = 2 * n_coarse
    mc, mf = unknown_count(n_coarse, layout), unknown_count(n_fine, layout)
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []

    def add(r: int, c: int, v: float) -> None:
        if 0 <= r < mf:
            rows.append(r)
            cols.append(c)
            vals.append(v)

    if layout == Layout.cell_dirichlet:
        for i in range(mc):
            for f, nb in ((2 * i, i - 1), (2 * i + 1, i + 1)):
                add(f, i, 0.75)
                if 0 <= nb < mc:
                    add(f, nb, 0.25)
                else:
                    add(f, i, -0.25)  # ghost = -u
    elif layout == Layout.node_dirichlet:
        # coarse interior node i+1 sits at fine node 2(i+1) -> fine unknown 2i+1
        for i in range(mc):
            add(2 * i + 1, i, 1.0)
            add(2 * i, i, 0.5)
            add(2 * i + 2, i, 0.5)
    else:
        for i in range(mc):
            add(2 * i, i, 1.0)
            add(2 * i - 1, i, 0.5)
            add(2 * i + 1, i, 0.5)
    return sp.csr_matrix(sp.coo_matrix((vals, (rows, cols)), shape=(mf, mc)))


@functools.lru_cache(maxsize=32)
def prolongation(n_coarse: int, dim: int, layout: Layout) -> sp.csr_matrix:
    return _kron_all([_prolong_1d(n_coarse, layout)] * dim)


def restriction(n_coarse: int, dim: int, layout: Layout) -> sp.csr_matrix:
    """Full weighting, R = P^T / 2^d."""
    return sp.csr_matrix(prolongation(n_coarse, dim, layout).T / 2**dim)


# ---------- Boundary data ----------

def interior_slice(dim: int) -> Tuple[slice, ...]:
    return (slice(1, -1),) * dim


def dirichlet_lift(g: np.ndarray, h: float) -> np.ndarray:
    """
    Contribution of boundary node values to the 5/7-point Laplacian at interior
    nodes (interior entries of g are ignored).
    """
    dim = g.ndim
    b = g.copy()
    b[interior_slice(dim)] = 0.0
    out = np.zeros(tuple(s - 2 for s in g.shape))
    inner = interior_slice(dim)
    for axis in range(dim):
        for shift in (-1, 1):
            sl = list(inner)
            sl[axis] = slice(1 + shift, g.shape[axis] - 1 + shift)
            out += b[tuple(sl)]
    return out / h**2


__all__ = [
    "Layout",
    "unknown_count",
    "laplacian_matrix",
    "mass_matrix",
    "operator_matrix",
    "prolongation",
    "restriction",
    "interior_slice",
    "dirichlet_lift",
]
