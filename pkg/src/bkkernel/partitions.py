"""Partitions, symmetric-group characters and Green polynomials of GL_n.

Green polynomials use the Deligne-Lusztig normalization
``Q_rho(mu) = R_{T_rho}^{GL_n}(1)(u_mu)``: ``rho`` is the cycle type of the
torus (``(1^n)`` split, ``(n)`` Coxeter) and ``mu`` the Jordan type of the
unipotent element (``(1^n)`` identity, ``(n)`` regular).  They are built from
Kostka-Foulkes polynomials via the charge statistic:

    Q_rho(mu) = sum_lam chi^lam(rho) * q^{n(mu)} * K_{lam,mu}(1/q)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod

Partition = tuple[int, ...]


def partitions(n: int, max_part: int | None = None) -> list[Partition]:
    """All partitions of ``n`` in reverse-lexicographic order, ``(n)`` first."""
    if n == 0:
        return [()]
    if max_part is None:
        max_part = n
    out: list[Partition] = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def n_stat(lam: Partition) -> int:
    """n(lam) = sum (i-1) lam_i."""
    return sum(i * part for i, part in enumerate(lam))


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


def multiplicities(lam: Partition) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in lam:
        out[part] = out.get(part, 0) + 1
    return out


def hooks(lam: Partition) -> list[int]:
    lc = conjugate(lam)
    return [lam[i] - j + lc[j] - i - 1 for i in range(len(lam)) for j in range(lam[i])]


def sign(mu: Partition) -> int:
    return (-1) ** (sum(mu) - len(mu))


def class_size_sn(mu: Partition) -> int:
    """Number of permutations of cycle type ``mu``."""
    n = sum(mu)
    z = prod(part for part in mu) * prod(_fact(m) for m in multiplicities(mu).values())
    return _fact(n) // z


def _fact(n: int) -> int:
    return prod(range(1, n + 1))


def _check_same_size(lam: Partition, mu: Partition) -> None:
    if sum(lam) != sum(mu):
        raise ValueError(f"size mismatch: |{lam}| != |{mu}|")


@lru_cache(maxsize=None)
def sym_char(lam: Partition, mu: Partition) -> int:
    """chi^lam on cycle type mu, by Murnaghan-Nakayama on beta-sets."""
    lam, mu = tuple(lam), tuple(mu)
    _check_same_size(lam, mu)
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    ell = len(lam)
    beta = [lam[i] + ell - 1 - i for i in range(ell)]
    bset = set(beta)
    total = 0
    for i, b in enumerate(beta):
        nb = b - r
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for c in beta if nb < c < b)
        new = sorted([c for c in beta if c != b] + [nb], reverse=True)
        m = len(new)
        shape = tuple(x for x in (new[j] - (m - 1 - j) for j in range(m)) if x > 0)
        total += (-1) ** height * sym_char(shape, rest)
    return total


# --- Kostka-Foulkes via charge -------------------------------------------------


def _ssyt(shape: Partition, content: Partition):
    """Semistandard tableaux of ``shape`` and ``content`` as lists of rows."""
    n_letters = len(content)
    rows: list[list[int]] = [[] for _ in shape]

    def fill(letter: int):
        if letter > n_letters:
            yield [list(r) for r in rows]
            return
        yield from place(letter, content[letter - 1], 0)

    def place(letter: int, remaining: int, row: int):
        if remaining == 0:
            yield from fill(letter + 1)
            return
        if row >= len(shape):
            return
        # entries of `letter` in this row: at most free cells, column-strict
        free = shape[row] - len(rows[row])
        for cnt in range(min(free, remaining), -1, -1):
            start = len(rows[row])
            ok = True
            for c in range(start, start + cnt):
                if row > 0 and (c >= len(rows[row - 1]) or rows[row - 1][c] >= letter):
                    ok = False
                    break
            if not ok:
                continue
            rows[row].extend([letter] * cnt)
            yield from place(letter, remaining - cnt, row + 1)
            del rows[row][start:]

    yield from fill(1)


def charge(word: list[int]) -> int:
    """Lascoux-Schutzenberger charge of a word with partition content."""
    letters = list(word)
    used = [False] * len(letters)
    total = 0
    remaining = len(letters)
    while remaining:
        nxt = max(x for x, u in zip(letters, used) if not u)
        pos = len(letters)
        index = 0
        for target in range(1, nxt + 1):
            # scan leftwards cyclically from pos for an unused `target`
            found = None
            wrapped = False
            i = pos - 1
            for _ in range(len(letters)):
                if i < 0:
                    i = len(letters) - 1
                    wrapped = True
                if not used[i] and letters[i] == target:
                    found = i
                    break
                i -= 1
            if found is None:
                break
            if target > 1 and wrapped:
                index += 1
            total += index
            used[found] = True
            remaining -= 1
            pos = found
    return total


def _reading_word(rows: list[list[int]]) -> list[int]:
    word: list[int] = []
    for r in reversed(rows):
        word.extend(r)
    return word


@lru_cache(maxsize=None)
def kostka_foulkes(lam: Partition, mu: Partition) -> tuple[int, ...]:
    """Coefficients (low -> high in t) of K_{lam,mu}(t)."""
    _check_same_size(lam, mu)
    coeffs: dict[int, int] = {}
    for tab in _ssyt(lam, mu):
        c = charge(_reading_word(tab))
        coeffs[c] = coeffs.get(c, 0) + 1
    if not coeffs:
        return (0,)
    top = max(coeffs)
    return tuple(coeffs.get(i, 0) for i in range(top + 1))


@lru_cache(maxsize=None)
def green_polynomial_coeffs(rho: Partition, mu: Partition) -> tuple[int, ...]:
    """Coefficients (low -> high in q) of the Green polynomial Q_rho(mu)."""
    rho, mu = tuple(rho), tuple(mu)
    _check_same_size(rho, mu)
    nm = n_stat(mu)
    out = [0] * (nm + 1)
    for lam in partitions(sum(mu)):
        chi = sym_char(lam, rho)
        if chi == 0:
            continue
        for t_pow, c in enumerate(kostka_foulkes(lam, mu)):
            out[nm - t_pow] += chi * c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def green_polynomial(rho: Partition, mu: Partition, q: int) -> int:
    return sum(c * q**i for i, c in enumerate(green_polynomial_coeffs(tuple(rho), tuple(mu))))


def gl_order(n: int, q: int) -> int:
    return prod(q**n - q**j for j in range(n))


def gl_order_p_prime(n: int, q: int) -> int:
    return prod(q**i - 1 for i in range(1, n + 1))


def torus_order(rho: Partition, q: int) -> int:
    return prod(q**part - 1 for part in rho)


def unipotent_degree(lam: Partition, q: int) -> int:
    """Degree of the unipotent character of GL_n(F_q) labelled by ``lam``.

    ``(n)`` is the trivial character and ``(1^n)`` the Steinberg character.
    """
    n = sum(lam)
    num = q ** n_stat(lam) * prod(q**i - 1 for i in range(1, n + 1))
    den = prod(q**h - 1 for h in hooks(lam))
    if num % den:
        raise ArithmeticError("unipotent degree is not an integer")
    return num // den


@dataclass(frozen=True)
class GreenTable:
    """Values Q_rho(mu) for all torus types rho and unipotent types mu of GL_n."""

    n: int
    q: int
    types: tuple[Partition, ...]
    values: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, n: int, q: int) -> GreenTable:
        types = tuple(partitions(n))
        vals = tuple(tuple(green_polynomial(r, m, q) for m in types) for r in types)
        return cls(n, q, types, vals)

    def value(self, rho: Partition, mu: Partition) -> int:
        return self.values[self.types.index(tuple(rho))][self.types.index(tuple(mu))]

    def to_csv(self) -> str:
        head = "rho\\mu," + ",".join("-".join(map(str, m)) for m in self.types)
        lines = [head]
        for r, row in zip(self.types, self.values):
            lines.append("-".join(map(str, r)) + "," + ",".join(str(v) for v in row))
        return "\n".join(lines) + "\n"
