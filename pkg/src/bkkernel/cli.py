"""Command-line driver: bkkernel <subcommand> [options].

Options may also come from a flat ``key = value`` file given by ``--config``;
flags on the command line override the file.  Exit codes: 0 pass, 1 fail,
2 usage error, 3 budget error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .chartab import dixon_table
from .dltheory import TorusCharacter, TorusType, dl_character, geometric_label, lusztig_series
from .errors import BudgetError, SpecError
from .field import prime_power
from .fourier import GammaFunction, gamma_from_kernel, restricted_fourier_kernel
from .group import DEFAULT_BUDGET, ClassTable, StandardGroupSpec
from .partitions import GreenTable
from .transfer import (
    DEFAULT_TOL,
    RhoFlatSpec,
    bk_gamma,
    bk_kernel_geometric,
    bk_kernel_spectral,
    compare_kernels,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    q: int = 3
    spec: str = "2"
    n: int = 2
    weights: str | None = None
    torus: str | None = None
    theta: str | None = None
    mode: str = "both"
    tol: float = DEFAULT_TOL
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    jobs: int = 0
    level: str = "quick"
    only: str | None = None
    out: str | None = None

    def __post_init__(self):
        if self.budget <= 0:
            raise SpecError("budget must be positive")
        if self.mode not in ("geometric", "spectral", "both"):
            raise SpecError(f"unknown mode {self.mode!r}")
        if self.level not in ("quick", "full"):
            raise SpecError(f"unknown level {self.level!r}")
        prime_power(self.q)
        if self.jobs <= 0:
            self.jobs = os.cpu_count() or 1

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def group(self) -> StandardGroupSpec:
        return StandardGroupSpec.parse(self.spec, self.q)


def read_config_file(path) -> dict[str, str]:
    out = {}
    for num, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#")[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"{path}:{num}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    types = {f.name: f.type for f in fields(RunConfig)}
    merged: dict = {}
    if args.config:
        for key, val in read_config_file(args.config).items():
            if key not in types:
                raise SpecError(f"unknown config key {key!r}")
            merged[key] = val
    for key in types:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    conv = {"int": int, "float": float}
    clean = {}
    for key, val in merged.items():
        kind = str(types[key]).split()[0].replace("'", "")
        try:
            clean[key] = conv[kind](val) if kind in conv and isinstance(val, str) else val
        except ValueError as exc:
            raise SpecError(f"bad value {val!r} for {key}") from exc
    if isinstance(clean.get("theta"), list):
        clean["theta"] = " ".join(map(str, clean["theta"]))
    return RunConfig(**clean)


# --- serialization ----------------------------------------------------------------------


def _num(x: float) -> float:
    v = float(f"{float(x):.15g}")
    return 0.0 if v == 0 else v


def cjson(z) -> list[float]:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def cvec(v) -> list[list[float]]:
    return [cjson(z) for z in np.asarray(v).reshape(-1)]


def dump(obj, out: str | None):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _table(cfg: RunConfig) -> ClassTable:
    return ClassTable(cfg.group, budget=cfg.budget)


# --- subcommands -----------------------------------------------------------------------------


def cmd_classes(cfg: RunConfig) -> int:
    t = _table(cfg)
    classes = []
    for k in range(t.nclasses):
        d = t.describe(k)
        d["index"] = k
        classes.append(d)
    dump({"group": str(t.spec), "order": t.order, "classes": classes}, cfg.out)
    return EXIT_PASS


def cmd_chartab(cfg: RunConfig) -> int:
    t = _table(cfg)
    X = dixon_table(t, seed=cfg.seed)
    dump(
        {
            "group": str(t.spec),
            "class_sizes": [int(s) for s in t.sizes],
            "degrees": [int(round(d.real)) for d in X.degrees],
            "characters": [cvec(row) for row in X.values],
            "orthogonality_error": _num(max(X.row_orthogonality_error(), X.column_orthogonality_error())),
        },
        cfg.out,
    )
    return EXIT_PASS


def cmd_green(cfg: RunConfig) -> int:
    text = GreenTable.build(cfg.n, cfg.q).to_csv()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def parse_torus(spec: StandardGroupSpec, text: str) -> TorusType:
    """``"2"``, ``"1,1"`` or ``"2|1,1"``: one partition per block, separated by ``|``."""
    try:
        parts = tuple(tuple(int(x) for x in blk.strip("() ").split(",")) for blk in text.split("|"))
    except ValueError as exc:
        raise SpecError(f"cannot parse torus type {text!r}") from exc
    return TorusType(spec, parts)


def cmd_dl(cfg: RunConfig) -> int:
    t = _table(cfg)
    if not cfg.torus:
        raise SpecError("dl needs --torus")
    T = parse_torus(t.spec, cfg.torus)
    res = tuple(int(x) for x in (cfg.theta or "").replace(",", " ").split()) or (0,) * len(T.levels)
    if len(res) != len(T.levels):
        raise SpecError(f"theta needs {len(T.levels)} residues")
    theta = TorusCharacter(T, res)
    R = dl_character(T, theta, t)
    dump(
        {
            "group": str(t.spec),
            "torus": str(T),
            "theta": list(theta.residues),
            "label": str(geometric_label(T, theta)),
            "values": cvec(R.values),
        },
        cfg.out,
    )
    return EXIT_PASS


def _series_json(chars, series) -> list[dict]:
    return [
        {
            "label": str(s.label),
            "label_data": s.label.to_json(),
            "members": list(s.members),
            "degrees": [int(round(chars.degrees[i].real)) for i in s.members],
        }
        for s in series
    ]


def cmd_series(cfg: RunConfig) -> int:
    t = _table(cfg)
    X = dixon_table(t, seed=cfg.seed)
    dump({"group": str(t.spec), "series": _series_json(X, lusztig_series(X))}, cfg.out)
    return EXIT_PASS


def _weights(cfg: RunConfig) -> RhoFlatSpec:
    if cfg.weights is None:
        return RhoFlatSpec.identity(cfg.group)
    return RhoFlatSpec.from_file(cfg.group, cfg.weights)


def cmd_gamma(cfg: RunConfig) -> int:
    t = _table(cfg)
    X = dixon_table(t, seed=cfg.seed)
    series = lusztig_series(X)
    if cfg.weights:
        gamma: GammaFunction = bk_gamma(_weights(cfg), X, series)
    else:
        gamma = gamma_from_kernel(restricted_fourier_kernel(t), X)
    rows = []
    for s in series:
        rows.append({"label": str(s.label), "members": list(s.members), "gamma": cjson(gamma.values[s.members[0]])})
    dump({"group": str(t.spec), "weights": cfg.weights, "gamma": rows}, cfg.out)
    return EXIT_PASS


def cmd_kernel(cfg: RunConfig) -> int:
    W = _weights(cfg)
    t = _table(cfg)
    report: dict = {
        "group": str(t.spec),
        "weights": [list(r) for r in W.rows],
        "classes": list(range(t.nclasses)),
        "tol": cfg.tol,
    }
    status = EXIT_PASS
    if cfg.mode == "both":
        rep = compare_kernels(W, t, dixon_table(t, seed=cfg.seed), tol=cfg.tol)
        report.update(
            geometric=cvec(rep.geometric),
            spectral=cvec(rep.spectral),
            deviation=[_num(x) for x in rep.deviation],
            max_dev=_num(rep.max_dev),
            constants=[
                {"w": list(x.w), "w_prime": list(x.wprime), "torus": x.torus, "levi": x.levi, "c": str(x.constant)}
                for x in rep.terms
            ],
        )
        report["pass"] = rep.passed
        status = EXIT_PASS if rep.passed else EXIT_FAIL
    elif cfg.mode == "geometric":
        geo, _ = bk_kernel_geometric(W, t)
        report.update(geometric=cvec(geo.values), spectral=None, max_dev=None)
        report["pass"] = None
    else:
        spec = bk_kernel_spectral(W, dixon_table(t, seed=cfg.seed))
        report.update(geometric=None, spectral=cvec(spec.values), max_dev=None)
        report["pass"] = None
    dump(report, cfg.out)
    return status


def cmd_selftest(cfg: RunConfig) -> int:
    from .selftest import run_selftest

    names = [x.strip() for x in cfg.only.split(",")] if cfg.only else None
    results = run_selftest(cfg.level, names)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    if cfg.out:
        dump({"level": cfg.level, "results": [r.to_json() for r in results], "pass": ok}, cfg.out)
    return EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {
    "classes": cmd_classes,
    "chartab": cmd_chartab,
    "green": cmd_green,
    "dl": cmd_dl,
    "series": cmd_series,
    "gamma": cmd_gamma,
    "kernel": cmd_kernel,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")
    common.add_argument("--q", type=int, help="field size (a prime power)")
    common.add_argument("--spec", help='group blocks, e.g. "2" or "2:1,1:2" (n or n:d)')
    common.add_argument("--budget", type=int, help="largest group order for element-level work")
    common.add_argument("--seed", type=int, help="seed for the character table splitting")
    common.add_argument("--jobs", type=int, help="parallelism degree (recorded; sums run vectorized)")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="bkkernel", description="Braverman-Kazhdan kernels of finite GL groups")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classes", parents=[common], help="conjugacy classes as JSON")
    sub.add_parser("chartab", parents=[common], help="character table as JSON")
    g = sub.add_parser("green", parents=[common], help="Green functions of GL_n as CSV")
    g.add_argument("--n", type=int)
    d = sub.add_parser("dl", parents=[common], help="a Deligne-Lusztig character")
    d.add_argument("--torus", help='torus type, e.g. "2" or "1,1" (blocks separated by |)')
    d.add_argument("--theta", nargs="+", help="character residues, one per torus coordinate")
    sub.add_parser("series", parents=[common], help="Lusztig series with labels")
    ga = sub.add_parser("gamma", parents=[common], help="gamma values per series")
    ga.add_argument("--weights", help="weight matrix file (default: restricted Fourier kernel)")
    k = sub.add_parser("kernel", parents=[common], help="geometric and spectral kernels for a weight matrix")
    k.add_argument("--weights", help="weight matrix file, one row per line (default: identity)")
    k.add_argument("--mode", choices=("geometric", "spectral", "both"))
    k.add_argument("--tol", type=float)
    s = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    s.add_argument("--level", choices=("quick", "full"))
    s.add_argument("--only", help="comma-separated criterion names, e.g. A1,A7")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SpecError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
