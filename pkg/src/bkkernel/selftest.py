"""Named acceptance checks A1..A11, each returning a measured value and a verdict."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .chartab import ClassFunction, decompose, dixon_table, inner_product
from .dltheory import (
    dl_character,
    dl_induce,
    dl_restrict,
    geometric_label,
    lusztig_series,
    torus_characters,
    torus_table,
    torus_types,
    transporter_count,
)
from .fourier import (
    GammaFunction,
    admissible_check,
    c_pair,
    gamma_from_kernel,
    gauss_gamma_torus,
    kernel_from_gamma,
    restricted_fourier,
    restricted_fourier_kernel,
    torus_psi_trace,
)
from .group import ClassTable, StandardGroupSpec
from .partitions import GreenTable, class_size_sn, partitions, sym_char, unipotent_degree
from .transfer import (
    RhoFlatSpec,
    compare_kernels,
    realizing_pairs,
    target_gamma,
    torus_route_check,
    transfer_label,
    weyl_group,
)


@dataclass
class CriterionResult:
    name: str
    title: str
    measured: float
    tol: float
    ok: bool
    seconds: float
    limit: float | None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.ok and (self.limit is None or self.seconds < self.limit)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        lim = f" limit={self.limit:g}s" if self.limit is not None else ""
        extra = f" [{self.detail}]" if self.detail else ""
        return (
            f"{self.name} {verdict} {self.title}: measured={self.measured:.3e} tol={self.tol:.0e} "
            f"time={self.seconds:.2f}s{lim}{extra}"
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "title": self.title,
            "measured": float(f"{self.measured:.15g}"),
            "tol": self.tol,
            "pass": self.passed,
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
            "detail": self.detail,
        }


def _gl(n: int, q: int) -> StandardGroupSpec:
    return StandardGroupSpec.gl(n, q)


_CACHE: dict = {}


def _setup(spec: StandardGroupSpec):
    if spec not in _CACHE:
        t = ClassTable(spec)
        _CACHE[spec] = (t, dixon_table(t))
    return _CACHE[spec]


def _qs(level: str, full: tuple[int, ...]) -> tuple[int, ...]:
    return full if level == "full" else full[:1]


# --- individual criteria ---------------------------------------------------------------------


def check_a1(level: str = "full") -> tuple[float, bool, str]:
    expected = {(2, 3): [1, 1, 2, 2, 2, 3, 3, 4], (2, 2): [1, 1, 2], (1, 3): [1, 1]}
    worst, ok, notes = 0.0, True, []
    for (n, q), degs in expected.items():
        t, X = _setup(_gl(n, q))
        got = sorted(int(round(d.real)) for d in X.degrees)
        err = max(X.row_orthogonality_error(), X.column_orthogonality_error())
        worst = max(worst, err)
        if got != degs:
            ok = False
            notes.append(f"GL{n}(F{q}) degrees {got}")
    return worst, ok and worst < 1e-9, "; ".join(notes)


def check_a2(level: str = "full") -> tuple[float, bool, str]:
    worst, bad = 0.0, 0
    for q in _qs(level, (3, 5)):
        spec = _gl(2, q)
        t, X = _setup(spec)
        pairs = [(T, th) for T in torus_types(spec) for th in torus_characters(T)]
        chars = {(T, th): dl_character(T, th, t) for T, th in pairs}
        for (T, th), R in chars.items():
            expect = spec.epsilon * T.epsilon * spec.p_prime_part // T.order
            worst = max(worst, abs(R.values[t.identity] - expect))
        for (T, th), R in chars.items():
            for (T2, th2), R2 in chars.items():
                dev = abs(inner_product(R, R2) - transporter_count(T, th, T2, th2))
                worst = max(worst, dev)
                bad += dev > 1e-9
    return worst, worst < 1e-9, f"{bad} pairs off" if bad else ""


def check_a3(level: str = "full") -> tuple[float, bool, str]:
    expected = {3: [2, 2, 1, 1, 1, 1], 2: [2, 1]}
    ok, notes = True, []
    for q, sizes in expected.items():
        t, X = _setup(_gl(2, q))
        series = lusztig_series(X)
        got = sorted((len(s.members) for s in series), reverse=True)
        members = sorted(i for s in series for i in s.members)
        if got != sorted(sizes, reverse=True) or members != list(range(X.nirr)):
            ok = False
            notes.append(f"GL2(F{q}) sizes {got}")
    return 0.0, ok, "; ".join(notes)


def check_a4(level: str = "full") -> tuple[float, bool, str]:
    worst = 0.0
    for q in _qs(level, (3, 5)):
        spec = _gl(2, q)
        t, _ = _setup(spec)
        psi = restricted_fourier_kernel(t)
        for T in torus_types(spec):
            worst = max(worst, (dl_restrict(psi, T) - torus_psi_trace(T)).max_abs())
    return worst, worst < 1e-8, ""


def check_a5(level: str = "full") -> tuple[float, bool, str]:
    spec = _gl(2, 3)
    t, X = _setup(spec)
    series = lusztig_series(X)
    gamma = gamma_from_kernel(restricted_fourier_kernel(t), X)
    worst = admissible_check(gamma, series)
    owner = {i: s for s in series for i in s.members}
    by_label = {s.label: s for s in series}
    for T in torus_types(spec):
        for th in torus_characters(T):
            s = by_label[geometric_label(T, th)]
            val = complex(c_pair(spec, T)) * gauss_gamma_torus(T, th)
            worst = max(worst, abs(val - gamma.values[s.members[0]]))
    assert len(owner) == X.nirr
    # single-coordinate Gauss sums over F_q and F_{q^2}
    for d in (1, 2):
        T = [T for T in torus_types(_gl(d, 3)) if T.parts == ((d,),)][0]
        for th in torus_characters(T):
            g = gauss_gamma_torus(T, th)
            target = abs(g + 1) if th.is_trivial else abs(abs(g) - 3 ** (d / 2))
            worst = max(worst, target)
    return worst, worst < 1e-8, ""


def check_a6(level: str = "full") -> tuple[float, bool, str]:
    worst = 0.0
    for q in _qs(level, (3, 5)):
        spec = _gl(2, q)
        t, X = _setup(spec)
        rep = compare_kernels(RhoFlatSpec.identity(spec), t, X)
        psi = t.psi_trace
        worst = max(worst, float(np.max(np.abs(rep.geometric - psi))), float(np.max(np.abs(rep.spectral - psi))))
    return worst, worst < 1e-8, ""


def check_a7(level: str = "full") -> tuple[float, bool, str]:
    spec = _gl(2, 3)
    t, X = _setup(spec)
    worst, notes = 0.0, []
    for name, rows in (("sym2", ((2, 0), (1, 1), (0, 2))), ("det", ((1, 1),))):
        rep = compare_kernels(RhoFlatSpec(spec, rows), t, X)
        worst = max(worst, rep.max_dev)
        notes.append(f"{name} {rep.max_dev:.1e}")
    return worst, worst < 1e-6, ", ".join(notes)


def check_a8(level: str = "full") -> tuple[float, bool, str]:
    spec = _gl(2, 3)
    W = RhoFlatSpec(spec, ((1, 0), (1, 0), (0, 1), (0, 1)))
    lhs, rhs = torus_route_check(W, (1, 0))
    dev = (lhs - rhs).max_abs()
    return dev, dev < 1e-6, f"|lhs|max={lhs.max_abs():.3g}"


def green_from_unipotents(n: int, q: int) -> dict[tuple, dict[tuple, complex]]:
    """Q_rho(u_mu) rebuilt as sum_lambda chi_lambda(rho) rho_lambda(u_mu), where the
    unipotent characters rho_lambda are located inside the G/B permutation character."""
    t, X = _setup(_gl(n, q))
    blk = t.blocks[0]
    E = blk.elements
    upper = np.all(np.tril(E, -1) == 0, axis=(1, 2))
    B = int(upper.sum())
    counts = np.bincount(blk.key_to_class[upper], minlength=blk.nclasses)
    perm = ClassFunction(t, t.centralizers * counts / B)
    mult = decompose(perm, X)
    where = {}
    for lam in partitions(n):
        deg = unipotent_degree(lam, q)
        hits = [i for i in np.nonzero(np.abs(mult) > 0.5)[0] if round(X.degrees[i].real) == deg]
        if len(hits) != 1 or round(mult[hits[0]].real) != sym_char(lam, (1,) * n):
            raise AssertionError(f"cannot locate the unipotent character {lam}")
        where[lam] = hits[0]
    out: dict = {}
    for k in range(t.nclasses):
        if not t.is_unipotent(k):
            continue
        mu = tuple(t.jordan(k).blocks[0][0][1])
        for rho in partitions(n):
            out.setdefault(rho, {})[mu] = sum(sym_char(lam, rho) * X.values[where[lam], k] for lam in partitions(n))
    return out


def check_a9(level: str = "full") -> tuple[float, bool, str]:
    worst, bad = 0.0, 0
    sizes = (1, 2, 3) if level == "full" else (1, 2)
    for n in sizes:
        for q in (2, 3):
            table = GreenTable.build(n, q)
            rebuilt = green_from_unipotents(n, q)
            for rho in table.types:
                for mu in table.types:
                    v = rebuilt[rho][mu]
                    worst = max(worst, abs(v - table.value(rho, mu)))
                    bad += int(round(v.real)) != table.value(rho, mu)
    return worst, bad == 0 and worst < 1e-6, f"{bad} entries differ" if bad else ""


def check_a10(level: str = "full") -> tuple[float, bool, str]:
    spec = _gl(2, 3)
    t, _ = _setup(spec)
    acc = np.zeros(t.nclasses, dtype=complex)
    for T in torus_types(spec):
        weight = 1
        for part in T.parts:
            weight *= class_size_sn(part)
        one = ClassFunction.indicator(torus_table(T), torus_table(T).identity)
        acc += weight * float(c_pair(T, spec)) * dl_induce(T, one, t).values
    acc /= len(weyl_group(spec))
    dev = float(np.max(np.abs(acc - ClassFunction.indicator(t, t.identity).values)))
    return dev, dev < 1e-8, ""


def check_a11(level: str = "full") -> tuple[float, bool, str]:
    spec = _gl(2, 3)
    t, X = _setup(spec)
    rng = np.random.default_rng(7)
    g = GammaFunction(X, rng.standard_normal(X.nirr) + 1j * rng.standard_normal(X.nirr))
    rt = float(np.max(np.abs(gamma_from_kernel(kernel_from_gamma(g, X), X).values - g.values)))
    comm = 0.0
    for T in torus_types(spec):
        c = float(c_pair(spec, T))
        for th in torus_characters(T):
            lhs = restricted_fourier(dl_character(T, th, t))
            rhs = c * dl_induce(T, restricted_fourier(th.values()), t)
            comm = max(comm, (lhs - rhs).max_abs())
    return max(rt, comm), rt < 1e-9 and comm < 1e-8, f"round trip {rt:.1e}, commutation {comm:.1e}"


CRITERIA = {
    "A1": ("character tables", check_a1, 1e-9, 5.0),
    "A2": ("DL degrees and inner products", check_a2, 1e-9, 60.0),
    "A3": ("Lusztig series", check_a3, 0.0, 30.0),
    "A4": ("restriction of psi o Tr", check_a4, 1e-8, None),
    "A5": ("gamma admissibility and Gauss sums", check_a5, 1e-8, 30.0),
    "A6": ("identity transfer", check_a6, 1e-8, None),
    "A7": ("geometric vs spectral kernel", check_a7, 1e-6, 120.0),
    "A8": ("torus vs Levi route", check_a8, 1e-6, 60.0),
    "A9": ("Green functions from unipotent characters", check_a9, 0.0, None),
    "A10": ("delta at 1 from tori", check_a10, 1e-8, None),
    "A11": ("Fourier calculus", check_a11, 1e-9, None),
}


def run_criterion(name: str, level: str = "full") -> CriterionResult:
    title, fn, tol, limit = CRITERIA[name]
    start = time.perf_counter()
    measured, ok, detail = fn(level)
    return CriterionResult(name, title, float(measured), tol, bool(ok), time.perf_counter() - start, limit, detail)


def run_selftest(level: str = "full", names: list[str] | None = None) -> list[CriterionResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"unknown level {level!r}")
    return [run_criterion(n, level) for n in (names or list(CRITERIA))]


def spectral_choice_spread(W: RhoFlatSpec, chars) -> float:
    """Largest change in the target gamma over all DL pairs realizing each transferred label."""
    worst = 0.0
    for s in lusztig_series(chars):
        s2 = transfer_label(s.label, W)
        vals = [target_gamma(s2, W, pair) for pair in realizing_pairs(s2, W.n)]
        worst = max(worst, max(abs(v - vals[0]) for v in vals))
    return worst


__all__ = ["CRITERIA", "CriterionResult", "run_criterion", "run_selftest", "spectral_choice_spread"]
