"""Command-line interface: scenario configs in, plot-ready CSVs out.

Usage:
    posgame equilibrium --config cfg.json [--out DIR] [--seed N] [--renormalize-lambdas]
    posgame costs       --config cfg.json ...
    posgame centralize  --config cfg.json ...
    posgame poa         --config cfg.json ...
    posgame verify      --config cfg.json ...

One strict JSON schema drives all subcommands (sections: game, grid,
centralization, sweep, table, verify, output); each command reads the
sections it needs, so a single scenario file can serve several commands.
Unknown keys anywhere are rejected with their path.  Every CSV starts with a
comment line carrying the tool version and a hash of the effective config,
so identical config + seed reproduce byte-identical files.
Exit codes: 0 success, 1 config error, 2 numeric or verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .centralization import (
    FRACTION_BANDS,
    CentralizationScenario,
    averaged_report,
    naive_centralization_report,
    optimal_representation,
    sampled_report,
)
from .core import GameSpec, GameSpecError, NoConvergence, renormalize_lambdas, validate_spec
from .costs import aggregate_cost, cost_breakdown, price_of_anarchy
from .equilibrium import solve
from .verification import run_verification


class ConfigError(Exception):
    """Configuration problem; reported with the offending key path."""


class _Parser(argparse.ArgumentParser):
    """Exit 1 on usage errors; exit 2 is reserved for numeric failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    """12 significant digits, locale-independent."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


class _Section:
    """Strict view over one mapping in the config tree."""

    def __init__(self, data, path: str):
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected an object")
        self._data = dict(data)
        self.path = path

    def take(self, key, kind, required=False, default=None):
        if key not in self._data:
            if required:
                raise ConfigError(f"{self.path}.{key}: missing required key")
            return default
        value = self._data.pop(key)
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if kind in (int, float) and isinstance(value, bool):
            raise ConfigError(f"{self.path}.{key}: expected a number, got a boolean")
        if kind is not None and not isinstance(value, kind):
            raise ConfigError(
                f"{self.path}.{key}: expected {getattr(kind, '__name__', kind)}, "
                f"got {type(value).__name__}"
            )
        return value

    def take_section(self, key):
        if key not in self._data:
            return None
        return _Section(self._data.pop(key), f"{self.path}.{key}")

    def finish(self):
        if self._data:
            unknown = ", ".join(sorted(self._data))
            raise ConfigError(f"{self.path}: unknown keys: {unknown}")


def _number_list(section: _Section, key: str, required=False) -> list[float] | None:
    raw = section.take(key, list, required=required, default=None)
    if raw is None:
        return None
    out = []
    for k, v in enumerate(raw):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{section.path}.{key}[{k}]: expected a number")
        out.append(float(v))
    return out


def _int_list(section: _Section, key: str, required=False) -> list[int] | None:
    values = _number_list(section, key, required=required)
    if values is None:
        return None
    for v in values:
        if v != int(v):
            raise ConfigError(f"{section.path}.{key}: expected integers")
    return [int(v) for v in values]


@dataclass
class Scenario:
    """Validated scenario config; sections absent from the file are None."""

    n: int | None = None
    kappa: float | None = None
    spec: GameSpec | None = None
    n_points: int = 101
    n1: int | None = None
    lambda_firm: float | None = None
    delta_range: tuple[int, int] | None = None
    sweep_n: list[int] | None = None
    sweep_kappa: list[float] | None = None
    sweep_lambda1: list[float] | None = None
    table_kappa: list[float] | None = None
    table_rows: list[float] | None = None
    table_n: tuple[int, ...] = (20, 21, 22)
    table_n1: tuple[int, ...] = (3, 4, 5)
    table_mode: str = "quadrature"
    table_draws: int = 2000
    verify_n: tuple[int, ...] = (2, 3, 5)
    verify_kappa: tuple[float, ...] = (1.0, 5.0, 25.0)
    verify_draws: int = 1
    verify_n_steps: int = 2000
    verify_tol: float = 1e-8
    inject_bug: bool = False
    directory: str = "."
    seed: int = 0

    def require(self, value, message: str):
        if value is None:
            raise ConfigError(message)
        return value


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def parse_scenario(config: dict, renormalize: bool = False) -> Scenario:
    """Validate the whole config tree, regardless of which command runs."""
    root = _Section(config, "config")
    sc = Scenario()

    game = root.take_section("game")
    if game is not None:
        sc.n = game.take("n", int, required=True)
        sc.kappa = game.take("kappa", float, required=True)
        symmetric = game.take("symmetric", bool, default=False)
        lambdas = _number_list(game, "lambdas")
        game.finish()
        if symmetric and lambdas is not None:
            raise ConfigError("config.game: give either 'symmetric' or 'lambdas', not both")
        if sc.kappa < 0.0:
            raise ConfigError(f"config.game.kappa: must be non-negative, got {sc.kappa}")
        if symmetric or lambdas is not None:
            spec = (
                GameSpec.symmetric(sc.n, sc.kappa)
                if symmetric
                else GameSpec(n=sc.n, lambdas=tuple(lambdas), kappa=sc.kappa)
            )
            if renormalize:
                spec = renormalize_lambdas(spec)
            try:
                sc.spec = validate_spec(spec)
            except GameSpecError as exc:
                raise ConfigError(f"config.game: {exc}") from exc

    grid = root.take_section("grid")
    if grid is not None:
        sc.n_points = grid.take("n_points", int, default=101)
        grid.finish()
        if sc.n_points < 2:
            raise ConfigError("config.grid.n_points: must be at least 2")

    central = root.take_section("centralization")
    if central is not None:
        sc.n1 = central.take("n1", int, required=True)
        sc.lambda_firm = central.take("lambda_firm", float, required=True)
        rng = _int_list(central, "delta_range")
        central.finish()
        if rng is not None:
            if len(rng) != 2:
                raise ConfigError("config.centralization.delta_range: expected [lo, hi]")
            sc.delta_range = (rng[0], rng[1])

    sweep = root.take_section("sweep")
    if sweep is not None:
        sc.sweep_n = _int_list(sweep, "n")
        sc.sweep_kappa = _number_list(sweep, "kappa")
        sc.sweep_lambda1 = _number_list(sweep, "lambda1")
        sweep.finish()

    table = root.take_section("table")
    if table is not None:
        sc.table_kappa = _number_list(table, "kappa", required=True)
        sc.table_rows = _number_list(table, "rows", required=True)
        n_values = _int_list(table, "n")
        n1_values = _int_list(table, "n1")
        sc.table_mode = table.take("mode", str, default="quadrature")
        sc.table_draws = table.take("draws", int, default=2000)
        table.finish()
        if n_values:
            sc.table_n = tuple(n_values)
        if n1_values:
            sc.table_n1 = tuple(n1_values)
        if sc.table_mode not in ("quadrature", "sampled"):
            raise ConfigError(
                f"config.table.mode: expected 'quadrature' or 'sampled', got {sc.table_mode!r}"
            )
        for label in sc.table_rows:
            if label not in FRACTION_BANDS:
                raise ConfigError(
                    f"config.table.rows: {label} has no fraction band; known rows: "
                    + ", ".join(_fmt(k) for k in sorted(FRACTION_BANDS))
                )

    verify = root.take_section("verify")
    if verify is not None:
        n_values = _int_list(verify, "n")
        kappa_values = _number_list(verify, "kappa")
        sc.verify_draws = verify.take("draws", int, default=1)
        sc.verify_n_steps = verify.take("n_steps", int, default=2000)
        sc.verify_tol = verify.take("tol", float, default=1e-8)
        sc.inject_bug = verify.take("inject_bug", bool, default=False)
        verify.finish()
        if n_values:
            sc.verify_n = tuple(n_values)
        if kappa_values:
            sc.verify_kappa = tuple(kappa_values)

    output = root.take_section("output")
    if output is not None:
        sc.directory = output.take("directory", str, default=".")
        fmt = output.take("format", str, default="csv")
        sc.seed = output.take("seed", int, default=0)
        output.finish()
        if fmt != "csv":
            raise ConfigError(f"config.output.format: only 'csv' is supported, got {fmt!r}")
        if sc.seed < 0:
            raise ConfigError("config.output.seed: must be non-negative")

    root.finish()
    return sc


def _config_hash(config: dict, seed: int) -> str:
    payload = json.dumps(
        {"config": config, "seed": seed}, sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def _write_csv(out_dir: Path, name: str, header: list[str], rows, meta: str,
               extra_comments: list[str] | None = None) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    lines = [meta]
    lines.extend(extra_comments or [])
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def cmd_equilibrium(sc: Scenario, out_dir: Path, seed: int, meta: str) -> int:
    spec = sc.require(
        sc.spec, "config.game: 'lambdas' or 'symmetric' is required for equilibrium"
    )
    sol = solve(spec)
    t = np.linspace(0.0, 1.0, sc.n_points)
    columns = [t] + [s.position(t) for s in sol.strategies] + [sol.market(t)]
    header = ["t"] + [f"a_{i + 1}" for i in range(spec.n)] + ["m"]
    rows = [[col[k] for col in columns] for k in range(sc.n_points)]
    breakdown = cost_breakdown(spec)
    rows.append(["cost", *breakdown.per_trader, breakdown.aggregate])
    rows.append(["share", *breakdown.shares, 1.0])
    _write_csv(out_dir, "equilibrium.csv", header, rows, meta)
    return 0


def cmd_costs(sc: Scenario, out_dir: Path, seed: int, meta: str) -> int:
    n_values = sc.require(sc.sweep_n, "config.sweep.n: required for costs")
    kappa_values = sc.require(sc.sweep_kappa, "config.sweep.kappa: required for costs")
    lambda1_values = sc.require(sc.sweep_lambda1, "config.sweep.lambda1: required for costs")
    header = ["n", "kappa", "lambda1", "cost", "share", "fair_share_deviation", "aggregate"]
    rows = []
    for n in n_values:
        if n < 2:
            raise ConfigError("config.sweep.n: cost sweeps need n >= 2")
        for kappa in kappa_values:
            for lam1 in lambda1_values:
                if not 0.0 < lam1 < 1.0:
                    raise ConfigError(f"config.sweep.lambda1: {lam1} not in (0, 1)")
                rest = (1.0 - lam1) / (n - 1)
                spec = GameSpec(n=n, lambdas=(lam1,) + (rest,) * (n - 1), kappa=kappa)
                breakdown = cost_breakdown(spec)
                rows.append(
                    [
                        n,
                        kappa,
                        lam1,
                        breakdown.per_trader[0],
                        breakdown.shares[0],
                        breakdown.fair_share_deviation[0],
                        breakdown.aggregate,
                    ]
                )
    _write_csv(out_dir, "costs.csv", header, rows, meta)
    return 0


def cmd_centralize(sc: Scenario, out_dir: Path, seed: int, meta: str) -> int:
    n = sc.require(sc.n, "config.game.n: required for centralize")
    kappa = sc.require(sc.kappa, "config.game.kappa: required for centralize")
    n1 = sc.require(sc.n1, "config.centralization: required for centralize")
    if not 1 <= n1 < n:
        raise ConfigError(f"config.centralization.n1: need 1 <= n1 < n, got n1={n1}, n={n}")
    try:
        scenario = CentralizationScenario(
            n1=n1, n2=n - n1, lambda_firm=sc.lambda_firm, kappa=kappa
        )
    except ValueError as exc:
        raise ConfigError(f"config.centralization: {exc}") from exc

    rep = naive_centralization_report(scenario)
    header = [
        "n", "n1", "n2", "kappa", "lambda_firm",
        "firm_no_central", "nonfirm_no_central", "firm_central", "nonfirm_central",
        "pct_change_firm", "pct_change_nonfirm", "pct_change_total",
    ]
    row = [
        scenario.n, scenario.n1, scenario.n2, scenario.kappa, scenario.lambda_firm,
        rep.firm_cost_no_central, rep.nonfirm_cost_no_central,
        rep.firm_cost_central, rep.nonfirm_cost_central,
        rep.pct_change_firm, rep.pct_change_nonfirm, rep.pct_change_total,
    ]
    _write_csv(out_dir, "centralize_report.csv", header, [row], meta)

    try:
        curve = optimal_representation(scenario, delta_range=sc.delta_range)
    except ValueError as exc:
        raise ConfigError(f"config.centralization.delta_range: {exc}") from exc
    at_zero = curve.exact_costs[curve.deltas == 0]
    base_exact = float(at_zero[0]) if at_zero.size else None
    at_zero = curve.approx_costs[curve.deltas == 0]
    base_approx = float(at_zero[0]) if at_zero.size else None
    curve_header = ["delta", "represented", "exact_cost", "approx_cost",
                    "pct_change_exact", "pct_change_approx"]
    curve_rows = []
    for k, delta in enumerate(curve.deltas):
        exact = float(curve.exact_costs[k])
        approx = float(curve.approx_costs[k])
        curve_rows.append(
            [
                int(delta),
                int(delta) + scenario.n1,
                exact,
                approx,
                100.0 * (exact - base_exact) / base_exact if base_exact else float("nan"),
                100.0 * (approx - base_approx) / base_approx if base_approx else float("nan"),
            ]
        )
    comments = [
        f"# continuous_opt={_fmt(curve.continuous_opt)}"
        f" argmin_exact={curve.argmin_exact} argmin_approx={curve.argmin_approx}"
    ]
    _write_csv(out_dir, "centralize_curve.csv", curve_header, curve_rows, meta,
               extra_comments=comments)

    if sc.table_kappa is not None:
        table_header = [
            "lambda_row", "n1_mean", "kappa",
            "pct_change_firm", "pct_change_nonfirm", "pct_change_total",
            "firm_no_central", "firm_central", "nonfirm_no_central", "nonfirm_central",
        ]
        table_rows = []
        gen = np.random.default_rng(seed)
        for kap in sc.table_kappa:
            for label in sc.table_rows:
                band = FRACTION_BANDS[label]
                if sc.table_mode == "quadrature":
                    mean = averaged_report(kap, band, n_values=sc.table_n, n1_values=sc.table_n1)
                else:
                    mean = sampled_report(kap, band, n_values=sc.table_n,
                                          n1_values=sc.table_n1, draws=sc.table_draws, rng=gen)
                table_rows.append(
                    [
                        label, float(np.mean(sc.table_n1)), kap,
                        mean.pct_change_firm, mean.pct_change_nonfirm, mean.pct_change_total,
                        mean.firm_cost_no_central, mean.firm_cost_central,
                        mean.nonfirm_cost_no_central, mean.nonfirm_cost_central,
                    ]
                )
        _write_csv(out_dir, "centralize_table.csv", table_header, table_rows, meta)
    return 0


def cmd_poa(sc: Scenario, out_dir: Path, seed: int, meta: str) -> int:
    n_values = sc.require(sc.sweep_n, "config.sweep.n: required for poa")
    kappa_values = sc.require(sc.sweep_kappa, "config.sweep.kappa: required for poa")
    header = ["n", "kappa", "aggregate_cost", "pct_increase_vs_n2", "poa_ratio"]
    rows = []
    for kappa in kappa_values:
        if kappa <= 0.0:
            raise ConfigError(
                f"config.sweep.kappa: price-of-anarchy sweeps need kappa > 0, got {kappa}"
            )
        base = aggregate_cost(2, kappa)
        for n in n_values:
            if n < 2:
                raise ConfigError("config.sweep.n: need n >= 2")
            agg = aggregate_cost(n, kappa)
            rows.append(
                [n, kappa, agg, 100.0 * (agg - base) / base, price_of_anarchy(n, kappa)]
            )
    _write_csv(out_dir, "poa.csv", header, rows, meta)
    return 0


def cmd_verify(sc: Scenario, out_dir: Path, seed: int, meta: str) -> int:
    try:
        report = run_verification(
            n_values=sc.verify_n,
            kappa_values=sc.verify_kappa,
            draws=sc.verify_draws,
            n_steps=sc.verify_n_steps,
            tol=sc.verify_tol,
            seed=seed,
            bug_scale=1.01 if sc.inject_bug else 1.0,
        )
    except NoConvergence as exc:
        print(f"FAIL fixed-point iteration: {exc}", file=sys.stderr)
        return 2

    header = ["check", "measured", "threshold", "status", "detail"]
    rows = [
        [c.name, c.value, c.threshold, "PASS" if c.passed else "FAIL", c.detail]
        for c in report.checks
    ]
    _write_csv(out_dir, "verify_report.csv", header, rows, meta)
    for line in report.lines():
        print(line)
    if not report.passed:
        n_failed = sum(not c.passed for c in report.checks)
        print(f"verification FAILED: {n_failed}/{len(report.checks)} checks", file=sys.stderr)
        return 2
    print(f"verification passed: {len(report.checks)} checks")
    return 0


_COMMANDS = {
    "equilibrium": cmd_equilibrium,
    "costs": cmd_costs,
    "centralize": cmd_centralize,
    "poa": cmd_poa,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _Parser(
        prog="posgame",
        description="Equilibrium position-building analysis: strategies, costs, "
        "centralization and oracle verification.",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="JSON scenario config")
    parser.add_argument(
        "--out", default=None,
        help="output directory (default: config's output.directory or '.')",
    )
    parser.add_argument("--seed", type=int, default=None, help="override output.seed")
    parser.add_argument(
        "--renormalize-lambdas",
        action="store_true",
        help="rescale game.lambdas to sum to one instead of rejecting them",
    )
    args = parser.parse_args(argv)

    try:
        config = _load_config(args.config)
        scenario = parse_scenario(config, renormalize=args.renormalize_lambdas)
        seed = args.seed if args.seed is not None else scenario.seed
        if seed < 0:
            raise ConfigError("seed must be non-negative")
        out_dir = Path(args.out) if args.out is not None else Path(scenario.directory)
        meta = (
            f"# posgame {__version__} command={args.command} "
            f"config_sha256={_config_hash(config, seed)}"
        )
        return _COMMANDS[args.command](scenario, out_dir, seed, meta)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NoConvergence as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
