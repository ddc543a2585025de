"""Fourier transforms, gamma functions and kernels, and the constants c_{H,G}.

Conventions:

* ``F(f)(x) = sum_y psi(Tr(x y)) f(y)`` on the Lie algebra; the restricted
  transform extends a function on G^F by zero, transforms, and restricts.
* ``gamma(pi) = pi(1)^{-1} sum_g phi(g) pi(g)`` and its inverse
  ``phi(g) = |G|^{-1} sum_pi gamma(pi) pi(1) conj(pi(g))``.
* ``F^G(f)(g) = sum_h phi(g h) f(h)``, which sends pi to gamma(pi) pi^v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .chartab import CharacterTable, ClassFunction, TableMismatch
from .dltheory import Series, TorusCharacter, TorusType, torus_table
from .errors import BudgetError
from .field import get_tower
from .group import ClassTable, GLBlock, StandardGroupSpec, det, gl_block, matmul

LIE_BUDGET = 100_000


# --- Lie algebra transform -------------------------------------------------------------


def lie_shape(spec: StandardGroupSpec) -> list[tuple[int, int]]:
    """Per block ``(Q, n*n)``: the Lie algebra is a tensor of n*n axes of size Q."""
    return [(spec.q**d, n * n) for n, d in spec.blocks]


def lie_size(spec: StandardGroupSpec) -> int:
    return int(np.prod([Q**m for Q, m in lie_shape(spec)]))


def _check_lie_budget(spec: StandardGroupSpec, budget: int, allow_gl3: bool):
    size = lie_size(spec)
    if size > budget:
        raise BudgetError(f"Lie algebra of {spec}", size, budget)
    if not allow_gl3 and any(n >= 3 for n, _ in spec.blocks):
        raise BudgetError(f"Lie algebra of {spec} (gl3 needs allow_gl3)", size, budget)


def lie_points(spec: StandardGroupSpec, block: int) -> np.ndarray:
    """All matrices of one block's Lie algebra, in flat-index order."""
    n, d = spec.blocks[block]
    Q = spec.q**d
    m = n * n
    idx = np.arange(Q**m, dtype=np.int64)
    pows = Q ** np.arange(m, dtype=np.int64)
    return ((idx[:, None] // pows) % Q).reshape(-1, n, n)


def lie_fourier(
    spec: StandardGroupSpec, f: np.ndarray, budget: int = LIE_BUDGET, allow_gl3: bool = False
) -> np.ndarray:
    """Fourier transform of a function on the Lie algebra (flat array, blocks most significant first)."""
    _check_lie_budget(spec, budget, allow_gl3)
    tower = get_tower(spec.q)
    f = np.asarray(f, dtype=complex)
    axes_sizes = []
    for Q, m in lie_shape(spec):
        axes_sizes.extend([Q] * m)
    g = f.reshape(axes_sizes)
    axis = 0
    perm = []
    for (n, d), (Q, m) in zip(spec.blocks, lie_shape(spec)):
        lev = tower.level(d)
        codes = np.arange(Q)
        A = tower.psi_codes(lev.mul_table if Q <= 1024 else lev.mul(codes[:, None], codes[None, :]), d)
        for a in range(m):
            g = np.moveaxis(np.tensordot(A, g, axes=([1], [axis + a])), 0, axis + a)
        # axis a holds entry position m-1-a = (i, j); pair it with (j, i)
        for a in range(m):
            i, j = divmod(m - 1 - a, n)
            perm.append(axis + m - 1 - (j * n + i))
        axis += m
    return g.transpose(perm).reshape(-1)


def extend_by_zero(f: ClassFunction) -> np.ndarray:
    """j_! f: the function on the Lie algebra equal to f on invertible matrices."""
    table = f.table
    spec = table.spec
    per_block = []
    for b, blk in enumerate(table.blocks):
        pts = lie_points(spec, b)
        cls = np.full(len(pts), -1, dtype=np.int64)
        nz = np.nonzero(_det_nonzero(blk, pts))[0]
        cls[nz] = blk.class_of_matrices(pts[nz])
        per_block.append(cls)
    flat = np.zeros(1, dtype=np.int64)
    valid = np.ones(1, dtype=bool)
    for cls, r in zip(per_block, table.radix):
        flat = (flat[:, None] * r + np.maximum(cls, 0)[None, :]).reshape(-1)
        valid = (valid[:, None] & (cls >= 0)[None, :]).reshape(-1)
    return np.where(valid, f.values[flat], 0)


def _det_nonzero(blk: GLBlock, pts: np.ndarray) -> np.ndarray:
    return det(blk.field, pts) != 0


def restrict_to_group(table: ClassTable, values: np.ndarray) -> ClassFunction:
    """j^*: read a Lie-algebra function at the class representatives."""
    spec = table.spec
    flat = np.zeros(table.nclasses, dtype=np.int64)
    sizes = [Q**m for Q, m in lie_shape(spec)]
    for k, label in enumerate(table.labels):
        idx = 0
        for b, (blk, i) in enumerate(zip(table.blocks, label)):
            idx = idx * sizes[b] + int(blk.keys(blk.reps[i]))
        flat[k] = idx
    return ClassFunction(table, np.asarray(values)[flat])


def restricted_fourier_via_lie(f: ClassFunction, budget: int = LIE_BUDGET, allow_gl3: bool = False) -> ClassFunction:
    spec = f.table.spec
    return restrict_to_group(f.table, lie_fourier(spec, extend_by_zero(f), budget, allow_gl3))


# --- restricted transform on class functions ------------------------------------------------


@lru_cache(maxsize=None)
def _block_fourier_matrix(q: int, n: int, d: int) -> np.ndarray:
    """``S[k, c] = sum_{y in C_c} psi(Tr(g_k y))`` for one block."""
    blk = gl_block(q, n, d)
    r = blk.nclasses
    S = np.zeros((r, r), dtype=complex)
    tower = get_tower(q)
    cls = blk.key_to_class
    for k in range(r):
        prod_ = matmul(blk.field, blk.reps[k], blk.elements)
        vals = tower.psi_codes(blk.trace_codes(prod_), 1)
        np.add.at(S[k], cls, vals)
    S.setflags(write=False)
    return S


def fourier_matrix(table: ClassTable) -> np.ndarray:
    S = np.ones((1, 1), dtype=complex)
    for (n, d) in table.spec.blocks:
        S = np.kron(S, _block_fourier_matrix(table.spec.q, n, d))
    return S


def restricted_fourier(f: ClassFunction) -> ClassFunction:
    """(j^* F j_! f)(g) = sum_{y in G^F} psi(Tr(g y)) f(y), as a class function."""
    return ClassFunction(f.table, fourier_matrix(f.table) @ f.values)


def restricted_fourier_kernel(table: ClassTable) -> ClassFunction:
    """The kernel of the restricted transform: g -> psi(Tr g)."""
    return ClassFunction(table, table.psi_trace)


# --- gamma <-> kernel ------------------------------------------------------------------------------


@dataclass(eq=False)
class GammaFunction:
    chars: CharacterTable
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.chars.nirr,):
            raise TableMismatch("gamma needs one value per irreducible character")


def gamma_from_kernel(phi: ClassFunction, chars: CharacterTable) -> GammaFunction:
    if phi.table is not chars.classes:
        raise TableMismatch("kernel and character table differ")
    t = chars.classes
    vals = (chars.values * t.sizes) @ phi.values / chars.degrees
    return GammaFunction(chars, vals)


def kernel_from_gamma(gamma: GammaFunction, chars: CharacterTable) -> ClassFunction:
    if gamma.chars is not chars:
        raise TableMismatch("gamma and character table differ")
    t = chars.classes
    vals = (gamma.values * chars.degrees) @ np.conj(chars.values) / t.order
    return ClassFunction(t, vals)


def apply_fourier_operator(phi: ClassFunction, f: ClassFunction) -> ClassFunction:
    """F(f)(g) = sum_h phi(g h) f(h) for a central f."""
    phi._check(f)
    t = phi.table
    a = t.structure_constants
    # #{h in C_l : g_k h in C_m} = |C_m| a[k, l, m] / |C_k|
    counts = a * t.sizes[None, None, :] / t.sizes[:, None, None]
    vals = np.einsum("klm,l,m->k", counts, f.values, phi.values)
    return ClassFunction(t, vals)


# --- constants and Gauss sums ---------------------------------------------------------------------


def _dim_eps(X) -> tuple[int, int, int]:
    if isinstance(X, TorusType):
        return X.spec.q, X.dim_v, X.epsilon
    return X.q, X.dim_v, X.epsilon


def c_pair(H, G) -> Fraction:
    """q^{dim V_H - dim V_G} eps_H eps_G."""
    qh, dh, eh = _dim_eps(H)
    qg, dg, eg = _dim_eps(G)
    if qh != qg:
        raise ValueError("groups over different base fields")
    return Fraction(qh) ** (dh - dg) * eh * eg


def torus_psi_trace(T: TorusType) -> ClassFunction:
    tab = torus_table(T)
    return ClassFunction(tab, tab.psi_trace)


def gauss_gamma_torus(T: TorusType, theta: TorusCharacter) -> complex:
    """sum_t psi(Tr t) theta(t); a product of classical Gauss sums over the coordinates."""
    return complex(np.sum(torus_psi_trace(T).values * theta.values().values))


def admissible_check(gamma: GammaFunction, series: list[Series]) -> float:
    dev = 0.0
    for s in series:
        v = gamma.values[list(s.members)]
        if len(v) > 1:
            dev = max(dev, float(np.max(np.abs(v[:, None] - v[None, :]))))
    return dev
