"""Groups prod_i GL_{n_i}(F_{q^{d_i}}), their conjugacy classes and Jordan data.

Matrices are integer arrays of field codes (see :mod:`bkkernel.field`).
Conjugacy classes of one block GL_n(F_Q) are indexed by maps
``f -> lambda_f`` from monic irreducible polynomials ``f != X`` over F_Q to
partitions with ``sum deg(f) |lambda_f| = n``.  Element enumeration is only
used as a cross-check oracle and for class multiplication coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product

import numpy as np

from .errors import BudgetError, SpecError
from .field import FFElem, FieldLevel, factorize, get_tower, prime_power, residue_orbit
from .partitions import Partition, conjugate, gl_order, partitions

DEFAULT_BUDGET = 200_000
MATRIX_SPACE_LIMIT = 5_000_000


# --- group specifications --------------------------------------------------------


@dataclass(frozen=True)
class StandardGroupSpec:
    """``prod_i GL_{n_i}(F_{q^{d_i}})``; ``blocks`` holds the pairs ``(n_i, d_i)``."""

    q: int
    blocks: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prime_power(self.q)
        blocks = tuple((int(n), int(d)) for n, d in self.blocks)
        if not blocks or any(n < 1 or d < 1 for n, d in blocks):
            raise SpecError(f"bad block list {self.blocks!r}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def gl(cls, n: int, q: int, d: int = 1) -> StandardGroupSpec:
        return cls(q, ((n, d),))

    @classmethod
    def parse(cls, text: str, q: int) -> StandardGroupSpec:
        """Parse ``"2"``, ``"2,1"`` or ``"2:1,1:2"`` (``n`` or ``n:d`` per block)."""
        blocks = []
        for part in text.replace(" ", "").split(","):
            if not part:
                continue
            try:
                if ":" in part:
                    n, d = part.split(":")
                    blocks.append((int(n), int(d)))
                else:
                    blocks.append((int(part), 1))
            except ValueError as exc:
                raise SpecError(f"cannot parse block {part!r}") from exc
        return cls(q, tuple(blocks))

    def __str__(self) -> str:
        parts = [f"GL{n}(F{self.q ** d})" for n, d in self.blocks]
        return " x ".join(parts)

    @property
    def label(self) -> str:
        return ",".join(f"{n}:{d}" if d > 1 else str(n) for n, d in self.blocks)

    @property
    def order(self) -> int:
        return math.prod(gl_order(n, self.q**d) for n, d in self.blocks)

    @property
    def dim(self) -> int:
        return sum(d * n * n for n, d in self.blocks)

    @property
    def dim_v(self) -> int:
        return sum(d * n * (n - 1) // 2 for n, d in self.blocks)

    @property
    def split_rank(self) -> int:
        return sum(n for n, _ in self.blocks)

    @property
    def epsilon(self) -> int:
        return (-1) ** self.split_rank

    @property
    def p_prime_part(self) -> int:
        p, _ = prime_power(self.q)
        m = self.order
        while m % p == 0:
            m //= p
        return m

    @property
    def is_split(self) -> bool:
        return all(d == 1 for _, d in self.blocks)

    @cached_property
    def order_factorization(self) -> dict[int, int]:
        return factorize(self.order)


# --- matrix arithmetic over code tables ------------------------------------------


def matmul(F: FieldLevel, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    n = A.shape[-1]
    C = F.mul(A[..., :, 0, None], B[..., None, 0, :])
    for k in range(1, n):
        C = F.add(C, F.mul(A[..., :, k, None], B[..., None, k, :]))
    return np.asarray(C, dtype=np.int64)


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det(F: FieldLevel, A) -> np.ndarray:
    """Batched determinant by the Leibniz expansion (small n only)."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[-1]
    total = np.zeros(A.shape[:-2], dtype=np.int64)
    for perm in permutations(range(n)):
        term = A[..., 0, perm[0]]
        for i in range(1, n):
            term = F.mul(term, A[..., i, perm[i]])
        if _perm_sign(perm) < 0:
            term = F.neg(term)
        total = F.add(total, term)
    return np.asarray(total, dtype=np.int64)


def inverse(F: FieldLevel, A) -> np.ndarray:
    """Batched inverse via the adjugate."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[-1]
    dinv = F.inv(det(F, A))
    if n == 1:
        return np.asarray(dinv, dtype=np.int64)[..., None, None]
    out = np.zeros_like(A)
    idx = list(range(n))
    for i in range(n):
        for j in range(n):
            rows = [r for r in idx if r != j]
            cols = [c for c in idx if c != i]
            minor = det(F, A[..., rows, :][..., :, cols])
            if (i + j) % 2:
                minor = F.neg(minor)
            out[..., i, j] = F.mul(minor, dinv)
    return out


def identity(n: int, batch=()) -> np.ndarray:
    out = np.zeros(tuple(batch) + (n, n), dtype=np.int64)
    for i in range(n):
        out[..., i, i] = 1
    return out


def mat_power(F: FieldLevel, A, e: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if e < 0:
        A = inverse(F, A)
        e = -e
    result = identity(A.shape[-1], A.shape[:-2])
    base = A
    while e:
        if e & 1:
            result = matmul(F, result, base)
        base = matmul(F, base, base)
        e >>= 1
    return result


def rank(F: FieldLevel, A) -> int:
    """Rank of a single matrix by Gaussian elimination."""
    M = np.array(A, dtype=np.int64)
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c] != 0), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = F.mul(M[r], F.inv(M[r, c]))
        for i in range(rows):
            if i != r and M[i, c] != 0:
                M[i] = F.sub(M[i], F.mul(M[i, c], M[r]))
        r += 1
        if r == rows:
            break
    return r


def matrix_order(F: FieldLevel, A, group_factors: dict[int, int], group_order: int) -> int:
    n = np.asarray(A).shape[-1]
    one = identity(n)
    o = group_order
    for ell in group_factors:
        while o % ell == 0 and np.array_equal(mat_power(F, A, o // ell), one):
            o //= ell
    return o


# --- irreducible polynomials and class data ----------------------------------------


@dataclass(frozen=True)
class IrrPoly:
    """Monic irreducible f != X over F_Q with Q = q^d.

    ``root`` is the minimal log (at level ``d*degree``) among the roots of f;
    ``coeffs`` are level-``d`` codes, low to high, leading 1 included.
    """

    degree: int
    root: int
    coeffs: tuple[int, ...]

    @property
    def key(self) -> tuple[int, int]:
        return (self.degree, self.root)


ClassDatum = tuple[tuple[IrrPoly, Partition], ...]


def irreducible_polys(q: int, d: int, max_degree: int) -> list[IrrPoly]:
    tower = get_tower(q)
    Q = q**d
    base = tower.level(d)
    out = []
    for delta in range(1, max_degree + 1):
        L = d * delta
        lev = tower.level(L)
        N = Q**delta - 1
        for j in range(N):
            size, rep = residue_orbit(j, Q, N)
            if size != delta or rep != j:
                continue
            # f = prod_i (X - z^{Q^i}), coefficients at level L
            poly = [1]
            for i in range(delta):
                root = int(lev.exp[(j * Q**i) % N])
                nroot = int(lev.neg(root))
                new = [0] * (len(poly) + 1)
                for k, c in enumerate(poly):
                    new[k + 1] = int(lev.add(new[k + 1], c))
                    new[k] = int(lev.add(new[k], lev.mul(c, nroot)))
                poly = new
            coeffs = tuple(int(c) for c in tower.descend_code(np.array(poly), L, d))
            out.append(IrrPoly(delta, j, coeffs))
        expected = _count_irreducible(Q, delta) - (1 if delta == 1 else 0)
        got = sum(1 for f in out if f.degree == delta)
        if got != expected:
            raise AssertionError(f"found {got} irreducibles of degree {delta}, expected {expected}")
    assert base is not None
    return out


def _mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return (-1) ** len(fac)


def _count_irreducible(Q: int, n: int) -> int:
    return sum(_mobius(n // e) * Q**e for e in range(1, n + 1) if n % e == 0) // n


def class_data(polys: list[IrrPoly], n: int) -> list[ClassDatum]:
    out: list[ClassDatum] = []

    def rec(i: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(tuple(acc))
            return
        if i == len(polys):
            return
        rec(i + 1, remaining, acc)
        f = polys[i]
        for m in range(1, remaining // f.degree + 1):
            for lam in partitions(m):
                acc.append((f, lam))
                rec(i + 1, remaining - m * f.degree, acc)
                acc.pop()

    rec(0, n, [])
    out.sort(key=lambda datum: tuple((f.key, lam) for f, lam in datum))
    return out


def centralizer_order(datum: ClassDatum, Q: int) -> int:
    total = 1
    for f, lam in datum:
        t = Q**f.degree
        lc = conjugate(lam)
        mults: dict[int, int] = {}
        for part in lam:
            mults[part] = mults.get(part, 0) + 1
        expo = sum(x * x for x in lc) - sum(m * (m + 1) // 2 for m in mults.values())
        val = t**expo
        for m in mults.values():
            for j in range(1, m + 1):
                val *= t**j - 1
        total *= val
    return total


def companion(F: FieldLevel, f: IrrPoly) -> np.ndarray:
    k = f.degree
    C = np.zeros((k, k), dtype=np.int64)
    for i in range(1, k):
        C[i, i - 1] = 1
    for i in range(k):
        C[i, k - 1] = int(F.neg(f.coeffs[i]))
    return C


def datum_matrix(F: FieldLevel, datum: ClassDatum, n: int, semisimple: bool = False) -> np.ndarray:
    """Generalized Jordan form; with ``semisimple`` the superdiagonal identities are dropped."""
    M = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for f, lam in datum:
        C = companion(F, f)
        k = f.degree
        for part in lam:
            for b in range(part):
                s = pos + b * k
                M[s : s + k, s : s + k] = C
                if b + 1 < part and not semisimple:
                    for i in range(k):
                        M[s + i, s + k + i] = 1
            pos += part * k
    assert pos == n
    return M


def semisimple_datum(datum: ClassDatum) -> ClassDatum:
    return tuple((f, (1,) * sum(lam)) for f, lam in datum)


# --- one GL block -------------------------------------------------------------------


class GLBlock:
    """GL_n(F_Q), Q = q^d: classes by polynomial data, elements on demand."""

    def __init__(self, q: int, n: int, d: int = 1):
        self.q, self.n, self.d = q, n, d
        self.Q = q**d
        self.tower = get_tower(q)
        self.field = self.tower.level(d)
        self.order = gl_order(n, self.Q)
        self.factors = factorize(self.order)
        self.polys = irreducible_polys(q, d, n)
        self.classes = class_data(self.polys, n)
        self.centralizers = [centralizer_order(c, self.Q) for c in self.classes]
        self.sizes = [self.order // c for c in self.centralizers]
        if sum(self.sizes) != self.order:
            raise AssertionError("class equation fails")
        self.reps = np.stack([datum_matrix(self.field, c, n) for c in self.classes])
        self._index = {c: i for i, c in enumerate(self.classes)}
        self.poly_by_key = {f.key: f for f in self.polys}
        ident = tuple(
            (f, (1,) * n) for f in self.polys if f.degree == 1 and f.root == 0
        )
        self.identity_class = self._index[ident]

    @property
    def nclasses(self) -> int:
        return len(self.classes)

    def index_of(self, datum: ClassDatum) -> int:
        return self._index[tuple(datum)]

    # -- invariants of a single matrix --
    def poly_at(self, f: IrrPoly, M) -> np.ndarray:
        F = self.field
        M = np.asarray(M, dtype=np.int64)
        acc = np.zeros_like(M)
        power = identity(self.n)
        for c in f.coeffs:
            acc = F.add(acc, F.mul(c, power))
            power = matmul(F, power, M)
        return np.asarray(acc, dtype=np.int64)

    def kernel_dims(self, f: IrrPoly, M) -> list[int]:
        A = self.poly_at(f, M)
        dims, B = [], A
        for _ in range(self.n // f.degree):
            dims.append(self.n - rank(self.field, B))
            if len(dims) > 1 and dims[-1] == dims[-2]:
                break
            B = matmul(self.field, B, A)
        return dims

    def datum_of(self, M) -> ClassDatum:
        """Class datum of an invertible matrix from kernel dimensions of f(M)^k."""
        M = np.asarray(M, dtype=np.int64)
        out = []
        total = 0
        for f in self.polys:
            dims = self.kernel_dims(f, M)
            if dims[0] == 0:
                continue
            prev, conj = 0, []
            for dk in dims:
                step = (dk - prev) // f.degree
                if step == 0:
                    break
                conj.append(step)
                prev = dk
            lam = conjugate(tuple(conj))
            out.append((f, lam))
            total += f.degree * sum(lam)
        if total != self.n:
            raise ValueError("matrix is not invertible or not classifiable")
        out.sort(key=lambda item: item[0].key)
        return tuple(out)

    def classify(self, M) -> int:
        return self._index[self.datum_of(M)]

    # -- element enumeration (oracle) --
    def check_budget(self, budget: int | None):
        if budget is not None and self.order > budget:
            raise BudgetError(f"GL{self.n}(F{self.Q}) elements", self.order, budget)
        if self.Q ** (self.n * self.n) > MATRIX_SPACE_LIMIT:
            raise BudgetError(
                f"GL{self.n}(F{self.Q}) matrix space", self.Q ** (self.n * self.n), MATRIX_SPACE_LIMIT
            )

    @cached_property
    def elements(self) -> np.ndarray:
        self.check_budget(None)
        n, s = self.n, self.Q
        codes = np.arange(s ** (n * n), dtype=np.int64)
        pows = s ** np.arange(n * n, dtype=np.int64)
        mats = ((codes[:, None] // pows) % s).reshape(-1, n, n)
        keep = det(self.field, mats) != 0
        mats = mats[keep]
        if len(mats) != self.order:
            raise AssertionError("element count mismatch")
        return mats

    @cached_property
    def _key_pows(self) -> np.ndarray:
        return self.Q ** np.arange(self.n * self.n, dtype=np.int64)

    def keys(self, mats) -> np.ndarray:
        mats = np.asarray(mats, dtype=np.int64)
        return mats.reshape(mats.shape[:-2] + (-1,)) @ self._key_pows

    @cached_property
    def element_keys(self) -> np.ndarray:
        return self.keys(self.elements)

    def element_index(self, mats) -> np.ndarray:
        k = self.keys(mats)
        idx = np.searchsorted(self.element_keys, k)
        if np.any(idx >= len(self.element_keys)) or np.any(self.element_keys[np.minimum(idx, len(self.element_keys) - 1)] != k):
            raise ValueError("matrix not in group")
        return idx

    @cached_property
    def element_inverses(self) -> np.ndarray:
        return inverse(self.field, self.elements)

    @cached_property
    def key_to_class(self) -> np.ndarray:
        """Class index of every enumerated element, found by conjugation orbits."""
        F = self.field
        X, Xi = self.elements, self.element_inverses
        out = np.full(len(X), -1, dtype=np.int64)
        for c in range(self.nclasses):
            conj = matmul(F, matmul(F, X, self.reps[c]), Xi)
            idx = np.unique(self.element_index(conj))
            if len(idx) != self.sizes[c] or np.any(out[idx] >= 0):
                raise AssertionError(f"orbit of class {c} disagrees with its size")
            out[idx] = c
        if np.any(out < 0):
            raise AssertionError("classes do not cover the group")
        return out

    def class_of_matrices(self, mats) -> np.ndarray:
        return self.key_to_class[self.element_index(mats)]

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """``a[i, j, k] = #{(x, y) in C_i x C_j : x y = z_k}``."""
        r = self.nclasses
        F = self.field
        cx = self.key_to_class
        out = np.zeros((r, r, r), dtype=np.int64)
        for k in range(r):
            y = matmul(F, self.element_inverses, self.reps[k])
            cy = self.class_of_matrices(y)
            np.add.at(out, (cx, cy, k), 1)
        return out

    def power_classes(self, count: int) -> np.ndarray:
        """``out[k, i]`` = class of ``rep_k ** i`` for ``0 <= i < count``."""
        F = self.field
        out = np.zeros((self.nclasses, count), dtype=np.int64)
        cur = identity(self.n, (self.nclasses,))
        for i in range(count):
            out[:, i] = self.class_of_matrices(cur)
            cur = matmul(F, cur, self.reps)
        return out

    def power_map(self, e: int) -> np.ndarray:
        powers = mat_power(self.field, self.reps, e)
        return np.array([self.classify(P) for P in powers], dtype=np.int64)

    @cached_property
    def inverse_classes(self) -> np.ndarray:
        return self.power_map(-1)

    @cached_property
    def class_orders(self) -> np.ndarray:
        return np.array(
            [matrix_order(self.field, R, self.factors, self.order) for R in self.reps], dtype=np.int64
        )

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*[int(o) for o in self.class_orders])

    def semisimple_class(self, c: int) -> int:
        return self._index[semisimple_datum(self.classes[c])]

    def trace_codes(self, mats) -> np.ndarray:
        F = self.field
        mats = np.asarray(mats, dtype=np.int64)
        tr = mats[..., 0, 0]
        for i in range(1, self.n):
            tr = F.add(tr, mats[..., i, i])
        return self.tower.trace_codes(tr, self.d, 1)


_BLOCKS: dict[tuple[int, int, int], GLBlock] = {}


def gl_block(q: int, n: int, d: int = 1) -> GLBlock:
    key = (q, n, d)
    blk = _BLOCKS.get(key)
    if blk is None:
        blk = GLBlock(q, n, d)
        _BLOCKS[key] = blk
    return blk


# --- group elements -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupElement:
    spec: StandardGroupSpec
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.blocks) != len(self.spec.blocks):
            raise SpecError("block count mismatch")
        mats = tuple(np.asarray(b, dtype=np.int64) for b in self.blocks)
        for (n, _), M in zip(self.spec.blocks, mats):
            if M.shape != (n, n):
                raise SpecError(f"block of shape {M.shape}, expected {(n, n)}")
        object.__setattr__(self, "blocks", mats)

    def _fields(self):
        tower = get_tower(self.spec.q)
        return [tower.level(d) for _, d in self.spec.blocks]

    def __mul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(
            self.spec, tuple(matmul(F, A, B) for F, A, B in zip(self._fields(), self.blocks, other.blocks))
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.spec == other.spec and all(
            np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)
        )

    def inverse(self) -> GroupElement:
        return GroupElement(self.spec, tuple(inverse(F, A) for F, A in zip(self._fields(), self.blocks)))

    def power(self, e: int) -> GroupElement:
        return GroupElement(self.spec, tuple(mat_power(F, A, e) for F, A in zip(self._fields(), self.blocks)))

    def is_identity(self) -> bool:
        return all(np.array_equal(A, identity(A.shape[0])) for A in self.blocks)

    def order(self) -> int:
        spec = self.spec
        o = spec.order
        for ell in spec.order_factorization:
            while o % ell == 0 and self.power(o // ell).is_identity():
                o //= ell
        return o

    @classmethod
    def identity(cls, spec: StandardGroupSpec) -> GroupElement:
        return cls(spec, tuple(identity(n) for n, _ in spec.blocks))


def jordan_decompose(g: GroupElement) -> tuple[GroupElement, GroupElement]:
    """``(s, u)`` with ``g = s u = u s``, from the factorization of the order of g."""
    p, _ = prime_power(g.spec.q)
    o = g.order()
    pk = 1
    while o % (pk * p) == 0:
        pk *= p
    m = o // pk
    # e1 = 1 mod m, 0 mod pk ; e2 = 1 - e1
    if m == 1:
        e1 = 0
    elif pk == 1:
        e1 = 1
    else:
        e1 = pk * pow(pk, -1, m) % o
    e2 = (1 - e1) % o
    return g.power(e1), g.power(e2)


@dataclass(frozen=True)
class EigenFactor:
    """One factor GL_m(F_{q^{d*deg f}}) of a semisimple centralizer."""

    block: int
    poly: IrrPoly
    multiplicity: int
    level: int


def semisimple_centralizer(s: GroupElement) -> tuple[StandardGroupSpec, list[EigenFactor]]:
    spec = s.spec
    blocks: list[tuple[int, int]] = []
    factors: list[EigenFactor] = []
    for b, ((n, d), M) in enumerate(zip(spec.blocks, s.blocks)):
        blk = gl_block(spec.q, n, d)
        total = 0
        for f in blk.polys:
            dim = n - rank(blk.field, blk.poly_at(f, M))
            if dim == 0:
                continue
            m = dim // f.degree
            total += dim
            blocks.append((m, d * f.degree))
            factors.append(EigenFactor(b, f, m, d * f.degree))
        if total != n:
            raise ValueError("element is not semisimple")
    return StandardGroupSpec(spec.q, tuple(blocks)), factors


def trace_form(x) -> FFElem:
    """Sum over blocks of Tr_{F_{q^{d_i}}/F_q}(tr x_i); accepts any square blocks."""
    spec = x.spec
    tower = get_tower(spec.q)
    total = 0
    lev1 = tower.level(1)
    for (n, d), M in zip(spec.blocks, x.blocks):
        F = tower.level(d)
        tr = 0
        for i in range(n):
            tr = int(F.add(tr, int(M[i, i])))
        total = int(lev1.add(total, int(tower.trace_codes(np.array([tr]), d, 1)[0])))
    return tower.elem(1, total)


# --- class tables of products -------------------------------------------------------


def _kron_all(vectors):
    out = np.array([1], dtype=object)
    for v in vectors:
        out = np.kron(out, np.asarray(v, dtype=object))
    return out


@dataclass(frozen=True)
class JordanData:
    """Per block, the list ``(f, lambda_f)``: s has eigenvalues the roots of f with
    multiplicity |lambda_f| and u has Jordan type lambda_f on that eigenspace."""

    blocks: tuple[ClassDatum, ...]


class ClassTable:
    """Conjugacy classes of a product group; class ``k`` has per-block indices
    ``labels[k]`` in mixed radix with the first block most significant."""

    def __init__(self, spec: StandardGroupSpec, budget: int | None = DEFAULT_BUDGET):
        if budget is not None and spec.order > budget:
            raise BudgetError(f"group {spec}", spec.order, budget)
        self.spec = spec
        self.budget = budget
        self.blocks = tuple(gl_block(spec.q, n, d) for n, d in spec.blocks)
        self.radix = tuple(b.nclasses for b in self.blocks)
        self.labels = list(product(*[range(r) for r in self.radix]))
        self.nclasses = len(self.labels)
        sizes = _kron_all([b.sizes for b in self.blocks])
        cents = _kron_all([b.centralizers for b in self.blocks])
        self.sizes = np.array([int(x) for x in sizes], dtype=np.int64)
        self.centralizers = np.array([int(x) for x in cents], dtype=np.int64)
        self.order = spec.order
        self.identity = self.flat(tuple(b.identity_class for b in self.blocks))
        if int(self.sizes.sum()) != self.order:
            raise AssertionError("class equation fails")

    def flat(self, label) -> int:
        k = 0
        for i, r in zip(label, self.radix):
            k = k * r + int(i)
        return k

    def _combine(self, per_block: list[np.ndarray]) -> np.ndarray:
        """Combine per-block class maps (arrays of class indices) into a product map."""
        out = np.zeros(1, dtype=np.int64)
        for arr, r in zip(per_block, self.radix):
            out = (out[:, None] * r + np.asarray(arr, dtype=np.int64)[None, :]).reshape(-1)
        return out

    def rep(self, k: int) -> GroupElement:
        return GroupElement(self.spec, tuple(b.reps[i] for b, i in zip(self.blocks, self.labels[k])))

    def jordan(self, k: int) -> JordanData:
        return JordanData(tuple(b.classes[i] for b, i in zip(self.blocks, self.labels[k])))

    def semisimple_class(self, k: int) -> int:
        return self.flat(tuple(b.semisimple_class(i) for b, i in zip(self.blocks, self.labels[k])))

    def is_semisimple(self, k: int) -> bool:
        return self.semisimple_class(k) == k

    def is_unipotent(self, k: int) -> bool:
        return self.semisimple_class(k) == self.identity

    def classify(self, g: GroupElement) -> int:
        return self.flat(tuple(b.classify(M) for b, M in zip(self.blocks, g.blocks)))

    def power_map(self, e: int) -> np.ndarray:
        return self._combine([b.power_map(e) for b in self.blocks])

    @cached_property
    def inverse_classes(self) -> np.ndarray:
        return self._combine([b.inverse_classes for b in self.blocks])

    @cached_property
    def class_orders(self) -> np.ndarray:
        orders = [b.class_orders for b in self.blocks]
        out = np.ones(1, dtype=np.int64)
        for o in orders:
            out = np.lcm(out[:, None], o[None, :]).reshape(-1)
        return out

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*[b.exponent for b in self.blocks])

    @cached_property
    def structure_constants(self) -> np.ndarray:
        out = np.ones((1, 1, 1), dtype=np.int64)
        for b in self.blocks:
            a = b.structure_constants
            r0, r1 = out.shape[0], a.shape[0]
            out = np.einsum("ijk,abc->iajbkc", out, a).reshape(r0 * r1, r0 * r1, r0 * r1)
        return out

    @cached_property
    def trace_codes(self) -> np.ndarray:
        """trace_form of each class representative, as a level-1 code."""
        tower = get_tower(self.spec.q)
        lev1 = tower.level(1)
        per_block = [b.trace_codes(b.reps) for b in self.blocks]
        out = np.zeros(1, dtype=np.int64)
        for arr in per_block:
            out = lev1.add(out[:, None], np.asarray(arr)[None, :]).reshape(-1)
        return np.asarray(out, dtype=np.int64)

    @cached_property
    def psi_trace(self) -> np.ndarray:
        """psi(trace_form(g)) per class."""
        return get_tower(self.spec.q).psi_codes(self.trace_codes, 1)

    def describe(self, k: int) -> dict:
        blocks = []
        for b, i in zip(self.blocks, self.labels[k]):
            blocks.append(
                {
                    "rep": b.reps[i].tolist(),
                    "jordan": [
                        {"degree": f.degree, "root_log": f.root, "coeffs": list(f.coeffs), "partition": list(lam)}
                        for f, lam in b.classes[i]
                    ],
                }
            )
        return {
            "index": k,
            "size": int(self.sizes[k]),
            "centralizer": int(self.centralizers[k]),
            "order": int(self.class_orders[k]),
            "blocks": blocks,
        }


def build_class_table(spec: StandardGroupSpec, budget: int | None = DEFAULT_BUDGET) -> ClassTable:
    return ClassTable(spec, budget)
