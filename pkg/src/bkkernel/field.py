"""Finite-field towers F_{q^d} with a compatible system of generators.

Every level F_{q^d} = F_{p^{ad}} is presented by the Conway polynomial of
degree ``a*d`` over F_p. Conway polynomials are norm-compatible, so the
generators g_d satisfy ``g_{d'} ** ((q^{d'}-1)/(q^d-1)) == g_d`` for
``d | d'``; embedding between levels is therefore plain rescaling of
discrete logarithms.

Elements are stored as integer *codes*: the F_p-coefficient vector of the
polynomial representative written in base p.  ``g_d ** j`` has log ``j``;
zero has log ``-1`` in array form and ``None`` in :class:`FFElem`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator

import numpy as np

MAX_LEVEL_SIZE = 10**6
TABLE_SIZE_LIMIT = 1024


class FieldError(ValueError):
    pass


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    m = n
    f = 2
    while f * f <= m:
        while m % f == 0:
            out[f] = out.get(f, 0) + 1
            m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, a)`` with ``q == p**a``; raise for anything else."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    fac = factorize(q)
    if len(fac) != 1:
        raise FieldError(f"q={q} is not a prime power")
    ((p, a),) = fac.items()
    return p, a


# --- polynomials over F_p, coefficient tuples low -> high --------------------


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    k = len(f) - 1
    res = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for i in range(len(res) - 1, k - 1, -1):
        c = res[i]
        if c:
            for j in range(k + 1):
                res[i - k + j] = (res[i - k + j] - c * f[j]) % p
    return res[:k]


def _ppowmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    k = len(f) - 1
    result = [1] + [0] * (k - 1)
    b = list(base) + [0] * (k - len(base))
    while e:
        if e & 1:
            result = _pmulmod(result, b, f, p)
        b = _pmulmod(b, b, f, p)
        e >>= 1
    return result


def _peval(poly: tuple[int, ...], x: list[int], f: list[int], p: int) -> list[int]:
    k = len(f) - 1
    acc = [0] * k
    for c in reversed(poly):
        acc = _pmulmod(acc, x, f, p)
        acc[0] = (acc[0] + c) % p
    return acc


def _is_primitive(f: list[int], p: int) -> bool:
    k = len(f) - 1
    n = p**k - 1
    x = [0, 1] + [0] * (k - 2) if k > 1 else [0]
    one = [1] + [0] * (k - 1)
    if k == 1:
        # root is -f0; check it generates F_p^*
        r = (-f[0]) % p
        if r == 0:
            return False
        return all(pow(r, n // ell, p) != 1 for ell in factorize(n)) if n > 1 else True
    if _ppowmod(x, n, f, p) != one:
        return False
    return all(_ppowmod(x, n // ell, f, p) != one for ell in factorize(n))


def _conway_candidates(p: int, k: int) -> Iterator[list[int]]:
    for a in product(range(p), repeat=k):
        # a = (a_{k-1}, ..., a_0);  f = x^k + sum (-1)^{k-i} a_i x^i
        coeffs = [0] * (k + 1)
        coeffs[k] = 1
        for pos, ai in enumerate(a):
            i = k - 1 - pos
            coeffs[i] = ((-1) ** (k - i) * ai) % p
        if coeffs[0] == 0:
            continue
        yield coeffs


@lru_cache(maxsize=None)
def conway_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Conway polynomial of degree ``k`` over F_p (coefficients low -> high)."""
    if p**k > MAX_LEVEL_SIZE:
        raise FieldError(f"F_{p}^{k} exceeds the level size limit {MAX_LEVEL_SIZE}")
    subs = [k // r for r in factorize(k)] if k > 1 else []
    for f in _conway_candidates(p, k):
        if not _is_primitive(f, p):
            continue
        ok = True
        for e in subs:
            ce = conway_polynomial(p, e)
            m = (p**k - 1) // (p**e - 1)
            x = [0, 1] + [0] * (k - 2)
            y = _ppowmod(x, m, f, p)
            if any(_peval(ce, y, f, p)):
                ok = False
                break
        if ok:
            return tuple(f)
    raise FieldError(f"no Conway polynomial found for p={p}, k={k}")


# --- one level of the tower --------------------------------------------------


class FieldLevel:
    """The field F_{p^k} presented by its Conway polynomial."""

    def __init__(self, p: int, k: int):
        size = p**k
        if size > MAX_LEVEL_SIZE:
            raise FieldError(f"F_{p}^{k} has {size} elements, above {MAX_LEVEL_SIZE}")
        self.p = p
        self.k = k
        self.size = size
        self.order = size - 1
        self.poly = conway_polynomial(p, k)
        self.exp, self.log = self._build_tables()
        self.pows = p ** np.arange(k, dtype=np.int64)

    def _build_tables(self) -> tuple[np.ndarray, np.ndarray]:
        p, k, n = self.p, self.k, self.order
        # columns of companion matrix act on coefficient vectors
        comp = np.zeros((k, k), dtype=np.int64)
        for i in range(1, k):
            comp[i, i - 1] = 1
        comp[:, k - 1] = [(-c) % p for c in self.poly[:k]]
        block = min(n, 2048)
        vecs = np.zeros((n, k), dtype=np.int64)
        v = np.zeros(k, dtype=np.int64)
        v[0] = 1
        for j in range(block):
            vecs[j] = v
            v = comp @ v % p
        step = np.eye(k, dtype=np.int64)
        base = comp.copy()
        e = block
        while e:
            if e & 1:
                step = step @ base % p
            base = base @ base % p
            e >>= 1
        j = block
        while j < n:
            m = min(block, n - j)
            vecs[j : j + m] = (vecs[j - block : j - block + m] @ step.T) % p
            j += m
        codes = vecs @ (p ** np.arange(k, dtype=np.int64))
        log = np.full(self.size, -1, dtype=np.int64)
        log[codes] = np.arange(n, dtype=np.int64)
        if (log[1:] < 0).any():
            raise FieldError("generator is not primitive")
        return codes, log

    # -- vectorized arithmetic on codes --
    def digits(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self.pows) % self.p

    def add(self, x, y):
        if self.size <= TABLE_SIZE_LIMIT:
            return self.add_table[x, y]
        d = (self.digits(x) + self.digits(y)) % self.p
        return d @ self.pows

    def neg(self, x):
        return ((-self.digits(x)) % self.p) @ self.pows

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        if self.size <= TABLE_SIZE_LIMIT:
            return self.mul_table[x, y]
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        lx, ly = self.log[x], self.log[y]
        out = self.exp[(lx + ly) % self.order]
        return np.where((lx < 0) | (ly < 0), 0, out)

    def inv(self, x):
        x = np.asarray(x, dtype=np.int64)
        lx = self.log[x]
        if (lx < 0).any():
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-lx) % self.order]

    def power(self, x, e: int):
        x = np.asarray(x, dtype=np.int64)
        lx = self.log[x]
        out = self.exp[(lx * e) % self.order]
        if e == 0:
            return np.ones_like(x)
        return np.where(lx < 0, 0, out)

    @cached_property
    def add_table(self) -> np.ndarray:
        allc = np.arange(self.size)
        d = (self.digits(allc)[:, None, :] + self.digits(allc)[None, :, :]) % self.p
        return (d @ self.pows).astype(np.int64)

    @cached_property
    def mul_table(self) -> np.ndarray:
        lg = self.log
        s = (lg[:, None] + lg[None, :]) % self.order
        out = self.exp[s]
        zero = (lg[:, None] < 0) | (lg[None, :] < 0)
        out[zero] = 0
        return out

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.neg(np.arange(self.size))

    @cached_property
    def abs_trace(self) -> np.ndarray:
        """Tr_{F_{p^k}/F_p} of every code, as an integer in [0, p)."""
        p, k, n = self.p, self.k, self.order
        basis_tr = np.zeros(k, dtype=np.int64)
        for i in range(k):
            acc = np.zeros(k, dtype=np.int64)
            for j in range(k):
                code = self.exp[(i * p**j) % n]
                acc = (acc + self.digits(code)) % p
            if acc[1:].any():
                raise FieldError("trace left the prime field")
            basis_tr[i] = acc[0]
        return (self.digits(np.arange(self.size)) @ basis_tr) % p


# --- the tower -----------------------------------------------------------------


@dataclass(frozen=True)
class FFElem:
    """Element of F_{q^level}; ``log is None`` marks zero."""

    level: int
    log: int | None

    @property
    def is_zero(self) -> bool:
        return self.log is None


class FieldTower:
    """Compatible presentations of all F_{q^d}; levels are built on demand.

    Level objects are cached and never mutated, so a tower can be shared
    read-only across threads once the needed levels exist.
    """

    def __init__(self, q: int, levels=(1,)):
        self.p, self.a = prime_power(q)
        self.q = q
        self._levels: dict[int, FieldLevel] = {}
        for d in levels:
            self.level(d)

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(sorted(self._levels))

    def level(self, d: int) -> FieldLevel:
        if d < 1:
            raise FieldError(f"level {d} not in tower")
        lev = self._levels.get(d)
        if lev is None:
            lev = FieldLevel(self.p, self.a * d)
            self._levels[d] = lev
        return lev

    def order(self, d: int) -> int:
        return self.q**d - 1

    def generator(self, d: int) -> FFElem:
        return FFElem(d, 1 % self.order(d) if self.order(d) > 1 else 0)

    # -- log rescaling between levels --
    def embed_log(self, log, d_from: int, d_to: int):
        if d_to % d_from:
            raise FieldError(f"level {d_from} does not divide {d_to}")
        return np.asarray(log) * (self.order(d_to) // self.order(d_from))

    def descend_log(self, log, d_from: int, d_to: int):
        """Log at level ``d_to`` of an element of level ``d_from`` lying in F_{q^d_to}."""
        if d_from % d_to:
            raise FieldError(f"level {d_to} does not divide {d_from}")
        r = self.order(d_from) // self.order(d_to)
        log = np.asarray(log)
        if np.any(log % r):
            raise FieldError("element does not lie in the requested subfield")
        return log // r

    def embed_code(self, code, d_from: int, d_to: int):
        src, dst = self.level(d_from), self.level(d_to)
        lg = src.log[np.asarray(code)]
        out = dst.exp[self.embed_log(np.where(lg < 0, 0, lg), d_from, d_to) % dst.order]
        return np.where(lg < 0, 0, out)

    def descend_code(self, code, d_from: int, d_to: int):
        src, dst = self.level(d_from), self.level(d_to)
        lg = src.log[np.asarray(code)]
        out = dst.exp[self.descend_log(np.where(lg < 0, 0, lg), d_from, d_to)]
        return np.where(lg < 0, 0, out)

    def embed(self, x: FFElem, d_to: int) -> FFElem:
        if x.is_zero:
            return FFElem(d_to, None)
        return FFElem(d_to, int(self.embed_log(x.log, x.level, d_to)))

    # -- element conversions --
    def code(self, x: FFElem) -> int:
        if x.is_zero:
            return 0
        return int(self.level(x.level).exp[x.log])

    def elem(self, d: int, code: int) -> FFElem:
        lg = int(self.level(d).log[code])
        return FFElem(d, None if lg < 0 else lg)

    def from_int(self, d: int, value: int) -> FFElem:
        """Element ``value * 1`` of the prime field, seen at level ``d``."""
        return self.elem(d, int(value) % self.p)

    # -- norm and trace --
    def norm(self, x: FFElem, to: int = 1) -> FFElem:
        if x.level % to:
            raise FieldError(f"level {to} does not divide {x.level}")
        if x.is_zero:
            return FFElem(to, None)
        # Nr(g_d^j) = g_d^{j N_d/N_to} = g_to^j
        return FFElem(to, x.log % self.order(to))

    def trace_codes(self, codes, d: int, to: int = 1):
        """Relative trace F_{q^d} -> F_{q^to} on an array of level-d codes."""
        if d % to:
            raise FieldError(f"level {to} does not divide {d}")
        lev = self.level(d)
        codes = np.asarray(codes, dtype=np.int64)
        qq = self.q**to
        acc = np.zeros_like(codes)
        cur = codes
        for _ in range(d // to):
            acc = lev.add(acc, cur)
            cur = lev.power(cur, qq)
        return self.descend_code(acc, d, to)

    def trace(self, x: FFElem, to: int = 1) -> FFElem:
        c = int(self.trace_codes(np.array([self.code(x)]), x.level, to)[0])
        return self.elem(to, c)

    # -- characters --
    def psi_codes(self, codes, d: int) -> np.ndarray:
        """Fixed additive character exp(2 pi i Tr_{F_{q^d}/F_p}(x)/p) on codes."""
        tr = self.level(d).abs_trace[np.asarray(codes, dtype=np.int64)]
        return np.exp(2j * np.pi * tr / self.p)

    def additive_char(self, x: FFElem) -> complex:
        return complex(self.psi_codes(np.array([self.code(x)]), x.level)[0])

    def mult_char_eval(self, k: int, x: FFElem) -> complex:
        if x.is_zero:
            raise FieldError("multiplicative character evaluated at zero")
        n = self.order(x.level)
        return cmath.exp(2j * math.pi * ((k * x.log) % n) / n)

    def frobenius_orbit(self, k: int, d: int) -> tuple[int, int]:
        """``(size, min representative)`` of the orbit of ``k`` under ``*q`` mod q^d-1."""
        return residue_orbit(k, self.q, self.order(d))

    # -- misc --
    def psi_prime(self) -> np.ndarray:
        """psi on F_q, indexed by level-1 code."""
        return self.psi_codes(np.arange(self.q), 1)


def residue_orbit(k: int, mult: int, modulus: int) -> tuple[int, int]:
    if modulus == 1:
        return 1, 0
    k %= modulus
    seen = [k]
    cur = (k * mult) % modulus
    while cur != k:
        seen.append(cur)
        cur = (cur * mult) % modulus
    return len(seen), min(seen)


_TOWERS: dict[int, FieldTower] = {}


def get_tower(q: int) -> FieldTower:
    """Shared tower for ``q``; all modules use it so generators agree."""
    tower = _TOWERS.get(q)
    if tower is None:
        tower = FieldTower(q)
        _TOWERS[q] = tower
    return tower
