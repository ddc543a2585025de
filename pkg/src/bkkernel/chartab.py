"""Class functions and complex character tables via modular Dixon-Schneider.

Each GL block is handled separately: the class-multiplication matrices are
simultaneously diagonalized over F_P for a prime P = 1 mod the group
exponent, and every modular character value is lifted to C by decomposing
the eigenvalues of rho(g) through the power maps.  The primitive e-th root
``r0^((P-1)/e)`` (r0 the least primitive root mod P) is identified with
exp(2 pi i / e).  Tables of products are Kronecker products of block tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BudgetError
from .field import factorize
from .group import ClassTable, GLBlock

MAX_CLASSES = 200
VALUE_DIGITS = 8


class LiftError(ArithmeticError):
    pass


class TableMismatch(ValueError):
    pass


# --- class functions ------------------------------------------------------------


@dataclass(eq=False)
class ClassFunction:
    table: ClassTable
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.table.nclasses,):
            raise TableMismatch(f"expected {self.table.nclasses} values, got {self.values.shape}")

    def _check(self, other: ClassFunction):
        if other.table is not self.table:
            raise TableMismatch("class functions live on different class tables")

    def __add__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.table, self.values + other.values)

    def __sub__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.table, self.values - other.values)

    def __mul__(self, c) -> ClassFunction:
        if isinstance(c, ClassFunction):
            self._check(c)
            return ClassFunction(self.table, self.values * c.values)
        return ClassFunction(self.table, self.values * c)

    __rmul__ = __mul__

    def __neg__(self) -> ClassFunction:
        return ClassFunction(self.table, -self.values)

    def conj(self) -> ClassFunction:
        return ClassFunction(self.table, np.conj(self.values))

    def dual(self) -> ClassFunction:
        """g -> f(g^{-1})."""
        return ClassFunction(self.table, self.values[self.table.inverse_classes])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if len(self.values) else 0.0

    @classmethod
    def zero(cls, table: ClassTable) -> ClassFunction:
        return cls(table, np.zeros(table.nclasses, dtype=complex))

    @classmethod
    def indicator(cls, table: ClassTable, k: int) -> ClassFunction:
        v = np.zeros(table.nclasses, dtype=complex)
        v[k] = 1
        return cls(table, v)

    @classmethod
    def constant(cls, table: ClassTable, c=1.0) -> ClassFunction:
        return cls(table, np.full(table.nclasses, c, dtype=complex))


def inner_product(f: ClassFunction, h: ClassFunction) -> complex:
    """(1/|G|) sum_g f(g) conj(h(g))."""
    f._check(h)
    t = f.table
    return complex(np.sum(t.sizes * f.values * np.conj(h.values)) / t.order)


# --- modular linear algebra ---------------------------------------------------------


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def choose_prime(exponent: int, group_order: int) -> int:
    """Least prime P = 1 mod exponent with P > 2 sqrt(|G|)."""
    bound = 2 * math.isqrt(group_order) + 2
    P = exponent + 1
    while P <= bound or not _is_prime(P):
        P += exponent
    return P


def primitive_root(P: int) -> int:
    fac = factorize(P - 1)
    for r in range(2, P):
        if all(pow(r, (P - 1) // ell, P) != 1 for ell in fac):
            return r
    return 1


def _rref(A: np.ndarray, P: int) -> tuple[np.ndarray, list[int]]:
    M = np.array(A, dtype=np.int64) % P
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, P) % P
        col = M[:, c].copy()
        col[r] = 0
        M = (M - np.outer(col, M[r])) % P
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def nullspace(A: np.ndarray, P: int) -> np.ndarray:
    """Basis of the right nullspace mod P, as columns."""
    R, piv = _rref(A, P)
    n = A.shape[1]
    free = [c for c in range(n) if c not in piv]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        out[fc, j] = 1
        for i, pc in enumerate(piv):
            out[pc, j] = (-R[i, fc]) % P
    return out


def charpoly(A: np.ndarray, P: int) -> list[int]:
    """Characteristic polynomial mod P (coefficients low -> high) via Hessenberg form."""
    H = np.array(A, dtype=np.int64) % P
    m = H.shape[0]
    for j in range(m - 2):
        nz = np.nonzero(H[j + 1 :, j])[0]
        if len(nz) == 0:
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            H[[i, j + 1]] = H[[j + 1, i]]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        inv = pow(int(H[j + 1, j]), -1, P)
        for k in range(j + 2, m):
            if H[k, j]:
                u = int(H[k, j]) * inv % P
                H[k] = (H[k] - u * H[j + 1]) % P
                H[:, j + 1] = (H[:, j + 1] + u * H[:, k]) % P
    # p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
    polys = [[1]]
    for k in range(m):
        cur = [0] + polys[k]
        hk = int(H[k, k])
        for t, c in enumerate(polys[k]):
            cur[t] = (cur[t] - hk * c) % P
        prodsub = 1
        for i in range(k - 1, -1, -1):
            prodsub = prodsub * int(H[i + 1, i]) % P
            coef = int(H[i, k]) * prodsub % P
            if coef:
                for t, c in enumerate(polys[i]):
                    cur[t] = (cur[t] - coef * c) % P
        polys.append(cur)
    return polys[m]


def poly_roots(coeffs: list[int], P: int) -> list[int]:
    xs = np.arange(P, dtype=np.int64)
    acc = np.zeros(P, dtype=np.int64)
    for c in reversed(coeffs):
        acc = (acc * xs + c) % P
    return [int(x) for x in np.nonzero(acc == 0)[0]]


# --- Dixon-Schneider for one block -------------------------------------------------------


@dataclass
class BlockLift:
    """Exact data behind one block's table.

    ``modular[i, k]`` is chi_i(g_k) mod ``prime``; ``multiplicities[i][k]`` maps an
    exponent t (mod ``exponent``) to the multiplicity of exp(2 pi i t/e) as an
    eigenvalue of rho_i(g_k).
    """

    prime: int
    root: int
    exponent: int
    modular: np.ndarray
    multiplicities: list[list[dict[int, int]]]
    degrees: np.ndarray
    values: np.ndarray


def _split_spaces(mats: list[np.ndarray], r: int, P: int, rng: np.random.Generator) -> list[np.ndarray]:
    spaces = [np.eye(r, dtype=np.int64)]
    done: list[np.ndarray] = []
    attempts = 0
    while spaces:
        B = spaces.pop()
        m = B.shape[1]
        if m == 1:
            done.append(B)
            continue
        attempts += 1
        if attempts > 50 * r:
            raise LiftError("eigenspace splitting did not converge")
        coeffs = rng.integers(0, P, len(mats))
        M = np.zeros((r, r), dtype=np.int64)
        for c, Mi in zip(coeffs, mats):
            M = (M + int(c) * Mi) % P
        # restriction of M to span(B): M B = B A
        rows_sel = _independent_rows(B, P)
        Bsub = B[rows_sel]
        Binv = _inv_mod(Bsub, P)
        A = Binv @ ((M @ B) % P)[rows_sel] % P
        roots = poly_roots(charpoly(A, P), P)
        pieces = []
        for lam in roots:
            N = nullspace((A - lam * np.eye(m, dtype=np.int64)) % P, P)
            if N.shape[1]:
                pieces.append(B @ N % P)
        if sum(p.shape[1] for p in pieces) != m:
            raise LiftError("class algebra is not split semisimple mod P")
        if len(pieces) == 1:
            spaces.append(B)
        else:
            spaces.extend(pieces)
    return done


def _independent_rows(B: np.ndarray, P: int) -> list[int]:
    _, piv = _rref(B.T, P)
    return piv


def _inv_mod(A: np.ndarray, P: int) -> np.ndarray:
    m = A.shape[0]
    R, piv = _rref(np.concatenate([A % P, np.eye(m, dtype=np.int64)], axis=1), P)
    if piv[:m] != list(range(m)):
        raise LiftError("singular matrix mod P")
    return R[:, m:]


def block_table(block: GLBlock, seed: int = 0) -> BlockLift:
    r = block.nclasses
    if r > MAX_CLASSES:
        raise BudgetError(f"GL{block.n}(F{block.Q}) classes", r, MAX_CLASSES)
    order = block.order
    e = block.exponent
    P = choose_prime(e, order)
    a = block.structure_constants
    sizes = np.array(block.sizes, dtype=np.int64)
    mats = [a[i] % P for i in range(r)]
    rng = np.random.default_rng(seed)
    vecs = _split_spaces(mats, r, P, rng)
    if len(vecs) != r:
        raise LiftError(f"found {len(vecs)} central characters, expected {r}")
    one = block.identity_class
    inv_cls = block.inverse_classes
    size_inv = np.array([pow(int(s) % P, -1, P) for s in sizes], dtype=np.int64)
    root = primitive_root(P)
    z = pow(root, (P - 1) // e, P)
    zpows = np.array([pow(z, t, P) for t in range(e)], dtype=np.int64)
    orders = block.class_orders
    powmap = block.power_classes(e)

    rows_mod, degs = [], []
    for v in vecs:
        v = v[:, 0]
        omega = v * pow(int(v[one]), -1, P) % P
        s = int(np.sum(omega * omega[inv_cls] % P * size_inv % P) % P)
        d2 = order % P * pow(s, -1, P) % P
        deg = next((d for d in range(1, math.isqrt(order) + 1) if d * d % P == d2), None)
        if deg is None or order % deg:
            raise LiftError("no valid degree for a central character")
        rows_mod.append(deg * omega % P * size_inv % P)
        degs.append(deg)
    modular = np.array(rows_mod, dtype=np.int64)

    values = np.zeros((r, r), dtype=complex)
    mults: list[list[dict[int, int]]] = []
    roots = np.exp(2j * np.pi * np.arange(e) / e)
    for i in range(r):
        row_mult = []
        for k in range(r):
            o = int(orders[k])
            step = e // o
            chi_pows = modular[i, powmap[k, :o]]
            oinv = pow(o, -1, P)
            mk: dict[int, int] = {}
            for j in range(o):
                t = j * step
                # m_t = (1/o) sum_i chi(g^i) z^{-t i}
                exps = (-t * np.arange(o)) % e
                m = int(np.sum(chi_pows * zpows[exps] % P) % P * oinv % P)
                if m:
                    if m > degs[i]:
                        raise LiftError("eigenvalue multiplicity exceeds the degree")
                    mk[t] = m
            if sum(mk.values()) != degs[i]:
                raise LiftError("eigenvalue multiplicities do not sum to the degree")
            values[i, k] = sum(m * roots[t] for t, m in mk.items())
            row_mult.append(mk)
        mults.append(row_mult)

    order_idx = _row_order(values, np.array(degs))
    return BlockLift(
        prime=P,
        root=root,
        exponent=e,
        modular=modular[order_idx],
        multiplicities=[mults[i] for i in order_idx],
        degrees=np.array(degs, dtype=np.int64)[order_idx],
        values=values[order_idx],
    )


def _row_key(row: np.ndarray, degree: int):
    vals = tuple((round(float(z.real), VALUE_DIGITS) + 0.0, round(float(z.imag), VALUE_DIGITS) + 0.0) for z in row)
    return (int(degree), vals)


def _row_order(values: np.ndarray, degrees: np.ndarray) -> list[int]:
    return sorted(range(len(values)), key=lambda i: _row_key(values[i], degrees[i]))


# --- full tables ---------------------------------------------------------------------------


@dataclass(eq=False)
class CharacterTable:
    classes: ClassTable
    values: np.ndarray
    degrees: np.ndarray
    block_rows: list[tuple[int, ...]]
    lifts: list[BlockLift] = field(repr=False)

    @property
    def nirr(self) -> int:
        return len(self.degrees)

    def character(self, i: int) -> ClassFunction:
        return ClassFunction(self.classes, self.values[i])

    def characters(self) -> list[ClassFunction]:
        return [self.character(i) for i in range(self.nirr)]

    @cached_property
    def trivial_index(self) -> int:
        ones = np.all(np.abs(self.values - 1) < 1e-9, axis=1)
        return int(np.nonzero(ones)[0][0])

    def row_orthogonality_error(self) -> float:
        t = self.classes
        gram = (self.values * t.sizes) @ np.conj(self.values).T / t.order
        return float(np.max(np.abs(gram - np.eye(self.nirr))))

    def column_orthogonality_error(self) -> float:
        t = self.classes
        gram = np.conj(self.values).T @ self.values
        return float(np.max(np.abs(gram - np.diag(t.centralizers.astype(float)))))

    def regular_character(self) -> ClassFunction:
        return ClassFunction(self.classes, self.degrees @ self.values)


def dixon_table(table: ClassTable, seed: int = 0) -> CharacterTable:
    if table.nclasses > MAX_CLASSES:
        raise BudgetError("class count", table.nclasses, MAX_CLASSES)
    lifts = [block_table(b, seed) for b in table.blocks]
    values = np.ones((1, 1), dtype=complex)
    degrees = np.ones(1, dtype=np.int64)
    rows: list[tuple[int, ...]] = [()]
    for lift in lifts:
        values = np.kron(values, lift.values)
        degrees = np.kron(degrees, lift.degrees)
        rows = [a + (b,) for a in rows for b in range(len(lift.degrees))]
    idx = _row_order(values, degrees)
    return CharacterTable(
        classes=table,
        values=values[idx],
        degrees=degrees[idx],
        block_rows=[rows[i] for i in idx],
        lifts=lifts,
    )


def decompose(f: ClassFunction, chars: CharacterTable) -> np.ndarray:
    if f.table is not chars.classes:
        raise TableMismatch("class function and character table differ")
    t = chars.classes
    return (np.conj(chars.values) * t.sizes) @ f.values / t.order


def reconstruct(mult: np.ndarray, chars: CharacterTable) -> ClassFunction:
    return ClassFunction(chars.classes, np.asarray(mult) @ chars.values)


def numeric_central_characters(block: GLBlock, seed: int = 0) -> np.ndarray:
    """Floating-point debug oracle: degrees from a random class-algebra element."""
    a = block.structure_constants.astype(float)
    r = block.nclasses
    rng = np.random.default_rng(seed)
    M = np.tensordot(rng.standard_normal(r), a, axes=1)
    _, vecs = np.linalg.eig(M)
    one = block.identity_class
    sizes = np.array(block.sizes, dtype=float)
    inv = block.inverse_classes
    degs = []
    for j in range(r):
        omega = vecs[:, j] / vecs[one, j]
        s = np.sum(omega * omega[inv] / sizes)
        degs.append(math.sqrt(abs(block.order / s)))
    return np.sort(np.array(degs))
