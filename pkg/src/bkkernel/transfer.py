"""Weight-matrix transfers and the two constructions of the kernel phi^G_rho.

A weight matrix with rows lambda_1..lambda_n in Z^m describes
rho^flat(t) = diag(prod_u t_u^{lambda_i[u]}) from the dual torus of a split
G (m = split rank) into GL_n.  Equal rows form the blocks of the Levi
L' = prod_j GL_{a_j}; the dual map rho: L' -> T sends l to
``x_u = prod_j det(l_j)^{v_j[u]}``.

Twisting conventions: for w in W_G(T), T_w^F = {t : t_{w(u)} = t_u^q}, read off
as one coordinate per w-cycle (its minimal member) at level = cycle length;
w' permutes the distinct weights by ``v_{w'(j)} = v_j o w^{-1}`` and
L'_{w'}^F = prod over w'-cycles of GL_a(F_{q^c}), the block at
``w'^k(j)`` being the k-th Frobenius twist of the block at j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from pathlib import Path

import numpy as np

from .chartab import CharacterTable, ClassFunction, dixon_table
from .dltheory import (
    SemisimpleLabel,
    Series,
    TorusCharacter,
    TorusType,
    dl_induce,
    geometric_label,
    lusztig_series,
    torus_characters,
    torus_table,
    torus_types,
)
from .errors import BudgetError, SpecError
from .field import get_tower
from .fourier import GammaFunction, c_pair, gauss_gamma_torus, kernel_from_gamma
from .group import ClassTable, StandardGroupSpec, det, gl_block

PUSH_BUDGET = 2_000_000
DEFAULT_TOL = 1e-6


# --- weight matrices and Levi data --------------------------------------------------------


def weyl_group(spec: StandardGroupSpec) -> list[tuple[int, ...]]:
    """W_G(T) as permutations of the torus coordinates that preserve the blocks."""
    ranges, start = [], 0
    for n, _ in spec.blocks:
        ranges.append(list(range(start, start + n)))
        start += n
    out = []
    for choice in product(*[permutations(r) for r in ranges]):
        w = []
        for r in choice:
            w.extend(r)
        out.append(tuple(w))
    return out


def _act(v: tuple[int, ...], w: tuple[int, ...]) -> tuple[int, ...]:
    """v o w^{-1}: the coordinate at w(u) receives v[u]."""
    out = [0] * len(v)
    for u, wu in enumerate(w):
        out[wu] = v[u]
    return tuple(out)


@dataclass(frozen=True)
class RhoFlatSpec:
    group: StandardGroupSpec
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not self.group.is_split:
            raise SpecError("weight matrices need a split group")
        m = self.group.split_rank
        if not rows or any(len(r) != m for r in rows):
            raise SpecError(f"every weight row needs {m} entries")
        base = sorted(rows)
        for w in weyl_group(self.group):
            if sorted(_act(r, w) for r in rows) != base:
                raise SpecError("row multiset is not stable under the Weyl group")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return self.group.split_rank

    @property
    def target(self) -> StandardGroupSpec:
        return StandardGroupSpec.gl(self.n, self.group.q)

    @classmethod
    def from_text(cls, group: StandardGroupSpec, text: str) -> RhoFlatSpec:
        rows = []
        for line in text.splitlines():
            line = line.split("#")[0].strip()
            if line:
                try:
                    rows.append(tuple(int(x) for x in line.split()))
                except ValueError as exc:
                    raise SpecError(f"bad weight row {line!r}") from exc
        return cls(group, tuple(rows))

    @classmethod
    def from_file(cls, group: StandardGroupSpec, path) -> RhoFlatSpec:
        return cls.from_text(group, Path(path).read_text())

    @classmethod
    def identity(cls, group: StandardGroupSpec) -> RhoFlatSpec:
        m = group.split_rank
        return cls(group, tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))


@dataclass(frozen=True)
class LeviData:
    weights: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]
    row_block: tuple[int, ...]

    @property
    def spec_sizes(self) -> list[int]:
        return list(self.sizes)

    def rows_of(self, j: int) -> list[int]:
        return [i for i, b in enumerate(self.row_block) if b == j]


def levi_of_weights(W: RhoFlatSpec) -> LeviData:
    weights: list[tuple[int, ...]] = []
    row_block = []
    for r in W.rows:
        if r not in weights:
            weights.append(r)
        row_block.append(weights.index(r))
    sizes = tuple(row_block.count(j) for j in range(len(weights)))
    return LeviData(tuple(weights), sizes, tuple(row_block))


def weyl_transport(w: tuple[int, ...], L: LeviData) -> tuple[int, ...]:
    """w' with v_{w'(j)} = v_j o w^{-1}."""
    out = []
    for v in L.weights:
        img = _act(v, w)
        if img not in L.weights:
            raise SpecError("w does not permute the distinct weights")
        out.append(L.weights.index(img))
    if sorted(out) != list(range(len(L.weights))):
        raise SpecError("w does not permute the distinct weights")
    return tuple(out)


def compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """(a o b)(j) = a(b(j))."""
    return tuple(a[b[j]] for j in range(len(b)))


def cycles(perm: tuple[int, ...], within: list[int] | None = None) -> list[tuple[int, ...]]:
    """Cycles ``(j, perm(j), perm^2(j), ...)`` started at their minimum,
    sorted by length (longest first) and then by that minimum."""
    items = range(len(perm)) if within is None else within
    seen, out = set(), []
    for j in sorted(items):
        if j in seen:
            continue
        cyc = [j]
        seen.add(j)
        k = perm[j]
        while k != j:
            cyc.append(k)
            seen.add(k)
            k = perm[k]
        out.append(tuple(cyc))
    out.sort(key=lambda c: (-len(c), c[0]))
    return out


def twisted_levi_spec(L: LeviData, wprime: tuple[int, ...], q: int) -> StandardGroupSpec:
    blocks = []
    for cyc in cycles(wprime):
        sizes = {L.sizes[j] for j in cyc}
        if len(sizes) != 1:
            raise SpecError("a cycle of w' mixes blocks of different sizes")
        blocks.append((L.sizes[cyc[0]], len(cyc)))
    return StandardGroupSpec(q, tuple(blocks))


# --- twisted data and the point maps --------------------------------------------------------


@dataclass(frozen=True)
class Twist:
    """Everything needed to evaluate rho_w: L'_{w'} -> T_w on points.

    ``blocks`` are ``(weight, size)`` for the Levi blocks (or for single rows
    in the torus route) and ``sigma`` is the induced block permutation.
    """

    W: RhoFlatSpec
    w: tuple[int, ...]
    sigma: tuple[int, ...]
    weights: tuple[tuple[int, ...], ...]
    sizes: tuple[int, ...]
    torus: TorusType
    t_cycles: tuple[tuple[int, ...], ...]
    l_cycles: tuple[tuple[int, ...], ...]

    @property
    def q(self) -> int:
        return self.W.group.q

    @property
    def levi_spec(self) -> StandardGroupSpec:
        return StandardGroupSpec(self.q, tuple((self.sizes[c[0]], len(c)) for c in self.l_cycles))

    @property
    def common_level(self) -> int:
        return math.lcm(*[len(c) for c in self.t_cycles + self.l_cycles])


def _torus_of(spec: StandardGroupSpec, w: tuple[int, ...]) -> tuple[TorusType, tuple[tuple[int, ...], ...]]:
    parts, t_cycles, start = [], [], 0
    for n, _ in spec.blocks:
        cyc = cycles(w, list(range(start, start + n)))
        parts.append(tuple(len(c) for c in cyc))
        t_cycles.extend(cyc)
        start += n
    return TorusType(spec, tuple(parts)), tuple(t_cycles)


def twist_levi(W: RhoFlatSpec, w: tuple[int, ...]) -> Twist:
    L = levi_of_weights(W)
    sigma = weyl_transport(w, L)
    T, t_cycles = _torus_of(W.group, w)
    l_cycles = tuple(cycles(sigma))
    for c in l_cycles:
        if len({L.sizes[j] for j in c}) != 1:
            raise SpecError("a cycle of w' mixes blocks of different sizes")
    return Twist(W, w, sigma, L.weights, L.sizes, T, t_cycles, l_cycles)


def torus_route_permutation(W: RhoFlatSpec, w: tuple[int, ...]) -> tuple[int, ...]:
    """w'' on rows: the r-th row of block j goes to the r-th row of block w'(j)."""
    L = levi_of_weights(W)
    wp = weyl_transport(w, L)
    out = [0] * W.n
    for j in range(len(L.weights)):
        for a, b in zip(L.rows_of(j), L.rows_of(wp[j])):
            out[a] = b
    return tuple(out)


def twist_torus_route(W: RhoFlatSpec, w: tuple[int, ...]) -> Twist:
    sigma = torus_route_permutation(W, w)
    for i in range(W.n):
        if W.rows[sigma[i]] != _act(W.rows[i], w):
            raise SpecError("row permutation is not compatible with w")
    T, t_cycles = _torus_of(W.group, w)
    return Twist(W, w, sigma, W.rows, (1,) * W.n, T, t_cycles, tuple(cycles(sigma)))


def rho_points(tw: Twist, z_logs: np.ndarray) -> np.ndarray:
    """Map block-determinant logs (one column per sigma-cycle, at its level)
    to T_w coordinate logs (one column per w-cycle, at its level)."""
    tower = get_tower(tw.q)
    q = tw.q
    D = tw.common_level
    ND = tower.order(D)
    z_logs = np.atleast_2d(np.asarray(z_logs, dtype=np.int64))
    m = len(tw.w)
    # logs at level D of det l_j for every block j
    J = len(tw.sigma)
    dets = np.zeros((len(z_logs), J), dtype=object)
    for col, cyc in enumerate(tw.l_cycles):
        c = len(cyc)
        base = z_logs[:, col].astype(object) * (ND // tower.order(c))
        for k, j in enumerate(cyc):
            dets[:, j] = (base * q**k) % ND
    x = np.zeros((len(z_logs), m), dtype=object)
    for j, v in enumerate(tw.weights):
        for u in range(m):
            if v[u]:
                x[:, u] = x[:, u] + v[u] * dets[:, j]
    x = x % ND
    # wF-fixedness: x_{w(u)} = q x_u
    for u in range(m):
        if np.any(x[:, tw.w[u]] != (q * x[:, u]) % ND):
            raise AssertionError("rho_w(l) is not fixed by wF")
    out = np.zeros((len(z_logs), len(tw.t_cycles)), dtype=np.int64)
    for col, cyc in enumerate(tw.t_cycles):
        r = ND // tower.order(len(cyc))
        vals = x[:, cyc[0]]
        if any(int(v) % r for v in vals):
            raise AssertionError("torus coordinate does not descend")
        out[:, col] = np.array([int(v) // r for v in vals], dtype=np.int64)
    return out


@lru_cache(maxsize=None)
def det_fiber_table(q: int, a: int, c: int) -> np.ndarray:
    """D(z) = sum over l in GL_a(F_{q^c}) with det l = g_c^z of psi(Tr l)."""
    blk = gl_block(q, a, c)
    if blk.order > PUSH_BUDGET:
        raise BudgetError(f"GL{a}(F{q ** c}) fiber sum", blk.order, PUSH_BUDGET)
    tower = get_tower(q)
    X = blk.elements
    logs = blk.field.log[det(blk.field, X)]
    vals = tower.psi_codes(blk.trace_codes(X), 1)
    out = np.zeros(tower.order(c), dtype=complex)
    np.add.at(out, logs, vals)
    out.setflags(write=False)
    return out


def _torus_flat_index(tw: Twist, x_logs: np.ndarray) -> np.ndarray:
    tower = get_tower(tw.q)
    idx = np.zeros(len(x_logs), dtype=np.int64)
    for col, lev in enumerate(tw.torus.levels):
        idx = idx * tower.order(lev) + x_logs[:, col]
    return idx


def pushforward(tw: Twist, method: str = "fibered") -> ClassFunction:
    """(rho_w)_!(psi o Tr) on T_w^F."""
    tower = get_tower(tw.q)
    tab = torus_table(tw.torus)
    out = np.zeros(tab.nclasses, dtype=complex)
    cyc_blocks = [(tw.sizes[c[0]], len(c)) for c in tw.l_cycles]
    if method == "fibered":
        tables = [det_fiber_table(tw.q, a, c) for a, c in cyc_blocks]
        size = math.prod(len(t) for t in tables)
        if size > PUSH_BUDGET:
            raise BudgetError("determinant tuples", size, PUSH_BUDGET)
        grids = np.meshgrid(*[np.arange(len(t)) for t in tables], indexing="ij")
        z = np.stack([g.reshape(-1) for g in grids], axis=1)
        vals = np.ones(len(z), dtype=complex)
        for col, t in enumerate(tables):
            vals = vals * t[z[:, col]]
    elif method == "enumerate":
        size = math.prod(gl_block(tw.q, a, c).order for a, c in cyc_blocks)
        if size > PUSH_BUDGET:
            raise BudgetError("Levi points", size, PUSH_BUDGET)
        logs, psis = [], []
        for a, c in cyc_blocks:
            blk = gl_block(tw.q, a, c)
            logs.append(blk.field.log[det(blk.field, blk.elements)])
            psis.append(tower.psi_codes(blk.trace_codes(blk.elements), 1))
        grids = np.meshgrid(*[np.arange(len(x)) for x in logs], indexing="ij")
        idx = [g.reshape(-1) for g in grids]
        z = np.stack([lg[i] for lg, i in zip(logs, idx)], axis=1)
        vals = np.ones(len(z), dtype=complex)
        for ps, i in zip(psis, idx):
            vals = vals * ps[i]
    else:
        raise ValueError(f"unknown pushforward method {method!r}")
    np.add.at(out, _torus_flat_index(tw, rho_points(tw, z)), vals)
    return ClassFunction(tab, out)


def phi_levi(spec: StandardGroupSpec) -> ClassFunction:
    """psi o Tr on the points of a (twisted) Levi."""
    tab = ClassTable(spec, budget=None)
    return ClassFunction(tab, tab.psi_trace)


# --- the two kernels ---------------------------------------------------------------------


@dataclass
class WeylTerm:
    w: tuple[int, ...]
    wprime: tuple[int, ...]
    torus: str
    levi: str
    constant: Fraction


def bk_kernel_geometric(
    W: RhoFlatSpec, table: ClassTable, method: str = "fibered", drop_epsilon: bool = False
) -> tuple[ClassFunction, list[WeylTerm]]:
    """(1/|W|) sum_w c_{T_w, L'_{w'}} R_{T_w}((rho_w)_!(psi o Tr))."""
    if table.spec != W.group:
        raise SpecError("class table and weight matrix use different groups")
    total = np.zeros(table.nclasses, dtype=complex)
    terms = []
    group = weyl_group(W.group)
    for w in group:
        tw = twist_levi(W, w)
        c = c_pair(tw.torus, tw.levi_spec)
        if drop_epsilon:
            c = abs(c)
        push = pushforward(tw, method)
        total += float(c) * dl_induce(tw.torus, push, table).values
        terms.append(WeylTerm(w, tw.sigma, str(tw.torus), str(tw.levi_spec), c))
    return ClassFunction(table, total / len(group)), terms


def transfer_label(s: SemisimpleLabel, W: RhoFlatSpec) -> SemisimpleLabel:
    if s.weights() != tuple(n for n, _ in W.group.blocks):
        raise SpecError("label weight does not match the group")
    a = [x for blk in s.fractions() for x in blk]
    b = [sum((row[u] * a[u] for u in range(len(a))), Fraction(0)) % 1 for row in W.rows]
    return SemisimpleLabel.from_fractions(W.group.q, [b], (1,))


def realize_label(s: SemisimpleLabel, n: int) -> tuple[TorusType, TorusCharacter]:
    """A DL pair of GL_n(F_q) with label s (one coordinate per orbit copy)."""
    q = s.q
    coords = []
    for a, e, mult in s.blocks[0]:
        coords.extend([(e, a)] * mult)
    coords.sort(key=lambda c: (-c[0], c[1]))
    T = TorusType(StandardGroupSpec.gl(n, q), (tuple(e for e, _ in coords),))
    res = []
    for e, a in coords:
        k = a * (q**e - 1)
        if k.denominator != 1:
            raise AssertionError("orbit fraction does not live at its level")
        res.append(int(k))
    theta = TorusCharacter(T, tuple(res))
    if geometric_label(T, theta) != s:
        raise AssertionError("realized DL pair has the wrong label")
    return T, theta


def realizing_pairs(s: SemisimpleLabel, n: int) -> list[tuple[TorusType, TorusCharacter]]:
    out = []
    for T in torus_types(StandardGroupSpec.gl(n, s.q)):
        for th in torus_characters(T):
            if geometric_label(T, th) == s:
                out.append((T, th))
    return out


def target_gamma(s_target: SemisimpleLabel, W: RhoFlatSpec, pair=None) -> complex:
    """gamma^{G'} on the series s', as c_{G',T'} gamma^{T'}(theta')."""
    T2, th2 = pair if pair is not None else realize_label(s_target, W.n)
    return complex(c_pair(W.target, T2)) * gauss_gamma_torus(T2, th2)


def bk_gamma(W: RhoFlatSpec, chars: CharacterTable, series: list[Series] | None = None) -> GammaFunction:
    if series is None:
        series = lusztig_series(chars)
    c = complex(c_pair(W.group, W.target))
    vals = np.zeros(chars.nirr, dtype=complex)
    for s in series:
        vals[list(s.members)] = c * target_gamma(transfer_label(s.label, W), W)
    return GammaFunction(chars, vals)


def bk_kernel_spectral(W: RhoFlatSpec, chars: CharacterTable, series: list[Series] | None = None) -> ClassFunction:
    return kernel_from_gamma(bk_gamma(W, chars, series), chars)


@dataclass
class TransferReport:
    group: str
    weights: tuple[tuple[int, ...], ...]
    classes: list[int]
    geometric: np.ndarray
    spectral: np.ndarray
    deviation: np.ndarray
    max_dev: float
    tol: float
    terms: list[WeylTerm] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.max_dev < self.tol)


def compare_kernels(
    W: RhoFlatSpec,
    table: ClassTable | None = None,
    chars: CharacterTable | None = None,
    tol: float = DEFAULT_TOL,
    drop_epsilon: bool = False,
) -> TransferReport:
    if table is None:
        table = chars.classes if chars is not None else ClassTable(W.group)
    if chars is None:
        chars = dixon_table(table)
    geo, terms = bk_kernel_geometric(W, table, drop_epsilon=drop_epsilon)
    spec = bk_kernel_spectral(W, chars)
    dev = np.abs(geo.values - spec.values)
    return TransferReport(
        group=str(W.group),
        weights=W.rows,
        classes=list(range(table.nclasses)),
        geometric=geo.values,
        spectral=spec.values,
        deviation=dev,
        max_dev=float(np.max(dev)),
        tol=tol,
        terms=terms,
    )


# --- consistency checks --------------------------------------------------------------------


def torus_route_check(W: RhoFlatSpec, w: tuple[int, ...]) -> tuple[ClassFunction, ClassFunction]:
    """Both sides of c_{T_w,L'} (rho_w)_!(psi Tr) = c_{T_w,T'} (rho_{w,T'})_!(psi Tr)."""
    lev = twist_levi(W, w)
    tor = twist_torus_route(W, w)
    lhs = float(c_pair(lev.torus, lev.levi_spec)) * pushforward(lev)
    rhs = float(c_pair(tor.torus, tor.levi_spec)) * pushforward(tor)
    return lhs, rhs


def pulled_back_label(W: RhoFlatSpec, w: tuple[int, ...], theta: TorusCharacter) -> SemisimpleLabel:
    """Label in G' of the series of theta o rho_w, a character of L'_{w'}^F."""
    tw = twist_levi(W, w)
    tower = get_tower(W.group.q)
    q = W.group.q
    fracs: list[Fraction] = []
    for col, cyc in enumerate(tw.l_cycles):
        c = len(cyc)
        a = tw.sizes[cyc[0]]
        z = np.zeros((1, len(tw.l_cycles)), dtype=np.int64)
        z[0, col] = 1
        x = rho_points(tw, z)[0]
        phase = sum(
            (Fraction(int(k) * int(xl), tower.order(lev)) for k, xl, lev in zip(theta.residues, x, tw.torus.levels)),
            Fraction(0),
        ) % 1
        # theta o rho_w on this block is chi o det with chi(g_c) = exp(2 pi i phase)
        for k in range(c):
            fracs.extend([(phase * q**k) % 1] * a)
    return SemisimpleLabel.from_fractions(q, [fracs], (1,))
