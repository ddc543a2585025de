"""Maximal tori, Deligne-Lusztig induction and Lusztig series.

A torus of type ``(lambda^(1), ..., lambda^(b))`` in ``prod_i GL_{n_i}(F_{q^{d_i}})``
has points ``prod_{i,j} F_{q^{d_i lambda_j}}^x``; each factor is a *coordinate*
and functions on T^F are class functions on the class table of the group
``((1, d_i lambda_j), ...)``, whose class index is the tuple of discrete logs.

R_T^G is a real matrix ``W[k, t]`` with ``R_T(f)(g_k) = sum_t W[k, t] f(t)``:
for g = su,

    W[k, t] = |C(s)|^{-1} #{x : x^{-1} s x = t} * prod_f Q^{GL_{m_f}}_{nu_f(t)}(lambda_f)

where ``nu_f(t)`` collects the degrees over F_{Q^{deg f}} of the coordinates
of t whose minimal polynomial is f, and the Green polynomial is taken at
``Q^{deg f}``.  The count is done by brute force on matrices ("element") or
by comparing characteristic polynomials ("combinatorial").
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product

import numpy as np

from .chartab import CharacterTable, ClassFunction, TableMismatch, decompose
from .errors import SpecError
from .field import get_tower, residue_orbit
from .group import ClassTable, IrrPoly, StandardGroupSpec, gl_block, matmul
from .partitions import Partition, green_polynomial, partitions

INTEGRALITY_TOL = 1e-6


class SeriesError(AssertionError):
    """The Lusztig series fail to partition Irr(G^F)."""


# --- tori ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusType:
    spec: StandardGroupSpec
    parts: tuple[Partition, ...]

    def __post_init__(self):
        parts = tuple(tuple(sorted(p, reverse=True)) for p in self.parts)
        if len(parts) != len(self.spec.blocks) or any(
            sum(p) != n for p, (n, _) in zip(parts, self.spec.blocks)
        ):
            raise SpecError(f"torus type {self.parts} does not fit {self.spec}")
        object.__setattr__(self, "parts", parts)

    @property
    def coords(self) -> list[tuple[int, int, int]]:
        """``(block, part, level)`` for every coordinate; level is over F_q."""
        out = []
        for b, (lam, (_, d)) in enumerate(zip(self.parts, self.spec.blocks)):
            for part in lam:
                out.append((b, part, d * part))
        return out

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(c[2] for c in self.coords)

    @cached_property
    def torus_spec(self) -> StandardGroupSpec:
        return StandardGroupSpec(self.spec.q, tuple((1, lev) for lev in self.levels))

    @property
    def order(self) -> int:
        return self.torus_spec.order

    @property
    def epsilon(self) -> int:
        return (-1) ** len(self.coords)

    @property
    def dim_v(self) -> int:
        return 0

    def __str__(self) -> str:
        return "|".join("(" + ",".join(map(str, p)) + ")" for p in self.parts)


def torus_types(spec: StandardGroupSpec) -> list[TorusType]:
    choices = [partitions(n) for n, _ in spec.blocks]
    return [TorusType(spec, combo) for combo in product(*choices)]


_TORUS_TABLES: dict[StandardGroupSpec, ClassTable] = {}


def torus_table(T: TorusType) -> ClassTable:
    ts = T.torus_spec
    tab = _TORUS_TABLES.get(ts)
    if tab is None:
        tab = ClassTable(ts, budget=None)
        _TORUS_TABLES[ts] = tab
    return tab


def point_logs(T: TorusType) -> np.ndarray:
    """``(|T|, #coords)`` discrete logs of all torus points, in class order."""
    ranges = [np.arange(get_tower(T.spec.q).order(lev)) for lev in T.levels]
    grids = np.meshgrid(*ranges, indexing="ij")
    return np.stack([g.reshape(-1) for g in grids], axis=1).astype(np.int64)


@dataclass(frozen=True)
class TorusCharacter:
    torus: TorusType
    residues: tuple[int, ...]

    def __post_init__(self):
        tower = get_tower(self.torus.spec.q)
        res = tuple(int(k) % tower.order(lev) for k, lev in zip(self.residues, self.torus.levels))
        if len(res) != len(self.torus.levels):
            raise SpecError("one residue per torus coordinate is required")
        object.__setattr__(self, "residues", res)

    def values(self) -> ClassFunction:
        T = self.torus
        tower = get_tower(T.spec.q)
        logs = point_logs(T)
        phase = np.zeros(len(logs))
        for c, (k, lev) in enumerate(zip(self.residues, T.levels)):
            phase = phase + k * logs[:, c] / tower.order(lev)
        return ClassFunction(torus_table(T), np.exp(2j * np.pi * phase))

    @property
    def is_trivial(self) -> bool:
        return not any(self.residues)


def torus_characters(T: TorusType) -> list[TorusCharacter]:
    return [TorusCharacter(T, tuple(int(x) for x in row)) for row in point_logs(T)]


def character_matrix(T: TorusType) -> np.ndarray:
    """``Theta[a, t]`` = theta_a(t) with characters in the order of :func:`torus_characters`."""
    tower = get_tower(T.spec.q)
    logs = point_logs(T)
    phase = np.zeros((len(logs), len(logs)))
    for c, lev in enumerate(T.levels):
        phase += np.outer(logs[:, c], logs[:, c]) / tower.order(lev)
    return np.exp(2j * np.pi * phase)


# --- semisimple labels -----------------------------------------------------------------


Orbit = tuple[Fraction, int, int]


def fraction_orbit(a: Fraction, Q: int) -> tuple[Fraction, ...]:
    a = a - (a.numerator // a.denominator)
    seen = [a]
    cur = (a * Q) % 1
    while cur != a:
        seen.append(cur)
        cur = (cur * Q) % 1
    return tuple(sorted(seen))


@dataclass(frozen=True)
class SemisimpleLabel:
    """Per block, the sorted tuple of ``(orbit minimum, orbit size, multiplicity)``.

    Orbits are taken under multiplication by Q = q^{d_i} in (Q/Z)_{p'}.
    """

    q: int
    blocks: tuple[tuple[Orbit, ...], ...]
    fields: tuple[int, ...]

    @classmethod
    def from_fractions(cls, q: int, fracs: list[list[Fraction]], fields: tuple[int, ...]) -> SemisimpleLabel:
        """Build from per-block lists of eigenvalue fractions (orbits listed with repetition)."""
        blocks = []
        for lst, d in zip(fracs, fields):
            Q = q**d
            counts: dict[tuple[Fraction, ...], int] = {}
            for a in lst:
                orb = fraction_orbit(Fraction(a), Q)
                counts[orb] = counts.get(orb, 0) + 1
            entries = []
            for orb, c in counts.items():
                if c % len(orb):
                    raise SpecError("fraction list is not a union of Frobenius orbits")
                entries.append((orb[0], len(orb), c // len(orb)))
            blocks.append(tuple(sorted(entries)))
        return cls(q, tuple(blocks), tuple(fields))

    def weights(self) -> tuple[int, ...]:
        return tuple(sum(e * m for _, e, m in blk) for blk in self.blocks)

    def fractions(self) -> list[list[Fraction]]:
        """Every orbit element listed ``multiplicity`` times, per block."""
        out = []
        for blk, d in zip(self.blocks, self.fields):
            lst = []
            for a, _, m in blk:
                for x in fraction_orbit(a, self.q**d):
                    lst.extend([x] * m)
            out.append(lst)
        return out

    def __str__(self) -> str:
        parts = []
        for blk in self.blocks:
            parts.append(" + ".join(f"{m}*[{a}]" + (f"^{e}" if e > 1 else "") for a, e, m in blk))
        return " | ".join(parts)

    def to_json(self) -> list:
        return [
            [{"fraction": [a.numerator, a.denominator], "orbit_size": e, "multiplicity": m} for a, e, m in blk]
            for blk in self.blocks
        ]


def geometric_label(T: TorusType, theta: TorusCharacter) -> SemisimpleLabel:
    tower = get_tower(T.spec.q)
    fracs: list[list[Fraction]] = [[] for _ in T.spec.blocks]
    for (b, part, lev), k in zip(T.coords, theta.residues):
        d = T.spec.blocks[b][1]
        a = Fraction(k, tower.order(lev))
        orb = fraction_orbit(a, T.spec.q**d)
        # the block field sees this coordinate as `part` eigenvalues
        for x in orb:
            fracs[b].extend([x] * (part // len(orb)))
    return SemisimpleLabel.from_fractions(T.spec.q, fracs, tuple(d for _, d in T.spec.blocks))


# --- DL weights ----------------------------------------------------------------------------


def _coordinate_poly(block, j: int, part: int) -> tuple[IrrPoly, int]:
    """Minimal polynomial over F_Q of g_{d*part}^j, and the degree ``part/deg f``."""
    Q, d = block.Q, block.d
    N = Q**part - 1
    delta, _ = residue_orbit(j, Q, N)
    Nd = Q**delta - 1
    jd = j // (N // Nd)
    _, root = residue_orbit(jd, Q, Nd)
    return block.poly_by_key[(delta, root)], part // delta


@lru_cache(maxsize=None)
def _mult_matrices(q: int, d: int, part: int) -> np.ndarray:
    """Matrices over F_{q^d} of multiplication by every z in F_{q^{d part}}^x.

    The basis is ``1, g, ..., g^{part-1}`` with g the level-``d*part`` generator;
    index 0 of the first axis is the log of z.
    """
    tower = get_tower(q)
    L = d * part
    lev = tower.level(L)
    Q = q**d
    base = tower.embed_code(np.arange(Q), d, L) if part > 1 else np.arange(Q)
    combos = np.arange(Q**part, dtype=np.int64)
    digits = (combos[:, None] // (Q ** np.arange(part))) % Q
    codes = np.zeros(len(combos), dtype=np.int64)
    for i in range(part):
        codes = lev.add(codes, lev.mul(base[digits[:, i]], lev.exp[i % lev.order]))
    lookup = np.empty(lev.size, dtype=np.int64)
    lookup[codes] = combos
    N = lev.order
    zg = lev.exp[(np.arange(N)[:, None] + np.arange(part)[None, :]) % N]  # (N, part): z * g^i
    dig = digits[lookup[zg]]  # (N, col i, row r)
    return np.transpose(dig, (0, 2, 1)).astype(np.int64)


def _block_weights(T: TorusType, b: int, method: str) -> np.ndarray:
    spec = T.spec
    n, d = spec.blocks[b]
    blk = gl_block(spec.q, n, d)
    lam = T.parts[b]
    sub_spec = StandardGroupSpec(spec.q, ((n, d),))
    sub = TorusType(sub_spec, (lam,))
    pts = point_logs(sub)
    W = np.zeros((blk.nclasses, len(pts)))

    # eigenvalue data of every point
    data = []
    for row in pts:
        groups: dict[IrrPoly, list[int]] = {}
        for j, part in zip(row, lam):
            f, nu = _coordinate_poly(blk, int(j), part)
            groups.setdefault(f, []).append(nu)
        data.append(groups)

    ss_of = np.array([blk.semisimple_class(k) for k in range(blk.nclasses)])
    if method == "element":
        counts = _conjugation_counts(blk, sub, pts)
    elif method != "combinatorial":
        raise ValueError(f"unknown method {method!r}")

    for t, groups in enumerate(data):
        datum = tuple(sorted(((f, (1,) * sum(nu)) for f, nu in groups.items()), key=lambda x: x[0].key))
        s_idx = blk.index_of(datum)
        if method == "element":
            factor = counts[s_idx][t] / blk.centralizers[s_idx]
            if abs(factor - round(factor)) > 1e-12 or round(factor) not in (0, 1):
                raise AssertionError("conjugation count is not a multiple of the centralizer order")
            # only the matching semisimple class may see t
            for s2, cnt in counts.items():
                if s2 != s_idx and cnt[t]:
                    raise AssertionError("torus point conjugate to two semisimple classes")
            if round(factor) == 0:
                raise AssertionError("torus point not conjugate to its semisimple class")
        for k in np.nonzero(ss_of == s_idx)[0]:
            val = 1
            for f, lam_f in blk.classes[k]:
                nu = tuple(sorted(groups[f], reverse=True))
                val *= green_polynomial(nu, lam_f, blk.Q**f.degree)
            W[k, t] = val
    return W


def _conjugation_counts(blk, sub: TorusType, pts: np.ndarray) -> dict[int, np.ndarray]:
    """For each semisimple class s: #{x : x^{-1} s x = t} for every torus point t."""
    F = blk.field
    n = blk.n
    mats = np.zeros((len(pts), n, n), dtype=np.int64)
    pos = 0
    for c, part in enumerate(sub.parts[0]):
        M = _mult_matrices(blk.q, blk.d, part)
        mats[:, pos : pos + part, pos : pos + part] = M[pts[:, c]]
        pos += part
    tkeys = blk.keys(mats)
    X, Xi = blk.elements, blk.element_inverses
    out = {}
    for s in sorted({blk.semisimple_class(k) for k in range(blk.nclasses)}):
        conj = matmul(F, matmul(F, Xi, blk.reps[s]), X)
        keys, cnt = np.unique(blk.keys(conj), return_counts=True)
        idx = np.searchsorted(keys, tkeys)
        idx = np.minimum(idx, len(keys) - 1)
        out[s] = np.where(keys[idx] == tkeys, cnt[idx], 0)
    return out


_WEIGHTS: dict[tuple, np.ndarray] = {}


def dl_weights(table: ClassTable, T: TorusType, method: str = "element") -> np.ndarray:
    if T.spec != table.spec:
        raise TableMismatch("torus and class table belong to different groups")
    key = (T, method)
    W = _WEIGHTS.get(key)
    if W is None:
        W = np.ones((1, 1))
        for b in range(len(T.spec.blocks)):
            W = np.kron(W, _block_weights(T, b, method))
        W.setflags(write=False)
        _WEIGHTS[key] = W
    return W


def dl_induce(T: TorusType, f: ClassFunction, table: ClassTable, method: str = "element") -> ClassFunction:
    if f.table is not torus_table(T):
        raise TableMismatch("function is not on the torus")
    return ClassFunction(table, dl_weights(table, T, method) @ f.values)


def dl_character(T: TorusType, theta: TorusCharacter, table: ClassTable, method: str = "element") -> ClassFunction:
    return dl_induce(T, theta.values(), table, method)


def dl_restrict(f: ClassFunction, T: TorusType, method: str = "element") -> ClassFunction:
    """Adjoint of dl_induce for the normalized inner products."""
    table = f.table
    W = dl_weights(table, T, method)
    vals = (T.order / table.order) * (W.T @ (table.sizes * f.values))
    return ClassFunction(torus_table(T), vals)


def transporter_count(T: TorusType, theta: TorusCharacter, T2: TorusType, theta2: TorusCharacter) -> int:
    """#{w in W(T, T2)^F : w.theta = theta2}, block by block."""
    if T.spec != T2.spec:
        raise TableMismatch("tori of different groups")
    if T.parts != T2.parts:
        return 0
    tower = get_tower(T.spec.q)
    total = 1
    coords = T.coords
    for b, (_, d) in enumerate(T.spec.blocks):
        idx = [c for c, (bb, _, _) in enumerate(coords) if bb == b]
        Q = T.spec.q**d
        count = 0
        for perm in permutations(idx):
            if any(coords[i][1] != coords[j][1] for i, j in zip(idx, perm)):
                continue
            ways = 1
            for i, j in zip(idx, perm):
                N = tower.order(coords[i][2])
                part = coords[i][1]
                k, k2 = theta.residues[i], theta2.residues[j]
                ways *= sum(1 for e in range(part) if (k * Q**e - k2) % N == 0)
                if not ways:
                    break
            count += ways
        total *= count
    return total


# --- Lusztig series ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Series:
    label: SemisimpleLabel
    members: tuple[int, ...]


def lusztig_series(chars: CharacterTable, method: str = "element") -> list[Series]:
    table = chars.classes
    owner: dict[int, SemisimpleLabel] = {}
    for T in torus_types(table.spec):
        W = dl_weights(table, T, method)
        Theta = character_matrix(T)
        R = W @ Theta.T  # columns: R_T(theta) for each theta
        for a, theta in enumerate(torus_characters(T)):
            f = ClassFunction(table, R[:, a])
            mult = decompose(f, chars)
            if np.max(np.abs(mult - np.round(mult.real))) > INTEGRALITY_TOL:
                raise SeriesError("non-integral multiplicities in a DL character")
            label = geometric_label(T, theta)
            for i in np.nonzero(np.abs(mult) > 0.5)[0]:
                prev = owner.get(int(i))
                if prev is not None and prev != label:
                    raise SeriesError(f"irreducible {i} lies in two series {prev} and {label}")
                owner[int(i)] = label
    missing = [i for i in range(chars.nirr) if i not in owner]
    if missing:
        raise SeriesError(f"irreducibles {missing} occur in no DL character")
    groups: dict[SemisimpleLabel, list[int]] = {}
    for i in range(chars.nirr):
        groups.setdefault(owner[i], []).append(i)
    out = [Series(lab, tuple(m)) for lab, m in groups.items()]
    out.sort(key=lambda s: s.members[0])
    return out
