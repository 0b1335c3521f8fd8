"""Command-line front end for sweeps, thresholds, searches, and game runs.

Every subcommand reads one flat ``key = value`` config file, writes one
CSV whose first line is a manifest comment recording version, seed, and
config hash, and renders a companion PNG figure next to the CSV.  With
a fixed config and seed the CSV payload is reproducible byte for byte,
except for wall-clock ``seconds`` columns.

Exit codes: 0 success, 2 config problems, 3 capacity limits,
4 convergence failures.
"""

from __future__ import annotations

import argparse
import os
import sys
import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from .classical import (closed_form_bounds, exhaustive_search, game_label,
                        modulo_classical_upper_bound,
                        modulo_phase_sum_maximum)
from .config import Config, ConfigError, parse_config
from .errors import (BracketError, CapacityError, ConvergenceError,
                     GeometryError, NoSolutionError, ParameterError)
from .freefermion import (EXACT_ERROR, FINITE_THRESHOLD_TOL,
                          classical_parity_value, marked_threshold_field,
                          marked_threshold_magnetization,
                          threshold_asymptotic, threshold_finite,
                          three_bit_threshold_field, win_probability)
from .games import (MarkedParityGame, ModuloGame, ParityGame, PolygonGame,
                    ToricGame)
from .models import (GAMMA_FLOOR, ClockSpec, ClusterChainSpec, IsingSpec,
                     ToricLattice, ToricSpec, adiabatic_toric_state,
                     build_hamiltonian, dual_loop_operator, ground_state,
                     model_ground_state, team_loop_operator, toric_game_state,
                     toric_ideal_state)
from .plotting import (save_bound_figure, save_estimate_figure,
                       save_report_figure, save_search_figure,
                       save_sweep_figure, save_threshold_figure,
                       save_toric_figure)
from .protocols import (analytic_report, enumerate_plays,
                        oracle_win_probability, parity_fidelity_value,
                        polygon_estimate_criterion, polygon_estimate_value,
                        toric_perturbative_record)
from .statevec import expectation, make_named_state


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional parameter sweep: name, range, and grid size."""

    parameter: str
    minimum: float
    maximum: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise ConfigError(f"{self.parameter} sweep needs at least 2 steps")
        if not self.minimum < self.maximum:
            raise ConfigError(
                f"{self.parameter} sweep needs minimum < maximum")

    def values(self) -> np.ndarray:
        return np.linspace(self.minimum, self.maximum, self.steps)


def _num(x) -> str:
    return format(float(x), ".12g")


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _csv_path(args) -> str:
    return args.out if args.out else f"{args.command}.csv"


def _figure_path(csv_path: str) -> str:
    return os.path.splitext(csv_path)[0] + ".png"


def _write_csv(path, manifest, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(manifest + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _manifest(cfg: Config, seed: int) -> str:
    return (f"# phasegames {__version__} seed={seed} "
            f"config-sha256={cfg.sha256()}")


def _parallel_map(fn, items, workers):
    items = list(items)
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Config -> game / state builders


def _game_from_config(cfg: Config):
    """Build the configured game; returns (game, accepted key set)."""
    kind = cfg.get_str("game")
    if kind == "parity":
        return ParityGame(cfg.get_int("n")), {"game", "n"}
    if kind == "marked":
        keys = {"game", "n", "marked", "alpha"}
        game = MarkedParityGame(cfg.get_int("n"),
                                cfg.get_int_tuple("marked"),
                                cfg.get_fraction("alpha", Fraction(1, 2)))
        return game, keys
    if kind == "modulo":
        game = ModuloGame(cfg.get_int("n"), cfg.get_int("d"),
                          cfg.get_int("m"))
        return game, {"game", "n", "d", "m"}
    if kind == "polygon":
        if cfg.has("marked"):
            game = PolygonGame(cfg.get_int("n"), cfg.get_int_tuple("marked"))
        else:
            game = PolygonGame.ring(cfg.get_int("p"))
        return game, {"game", "n", "marked", "p"}
    if kind == "toric":
        lattice = ToricLattice(cfg.get_int("lx"), cfg.get_int("ly"))
        teams = cfg.get_int_tuple("teams", tuple(range(lattice.lx)))
        game = ToricGame(lattice, teams, cfg.get_int("dual_row", 0))
        return game, {"game", "lx", "ly", "teams", "dual_row"}
    raise ConfigError(f"unknown game {kind!r}", cfg.line_of("game"))


def _state_from_config(cfg: Config, game):
    """Build the configured strategy state; returns (state, keys, label)."""
    kind = cfg.get_str("state")
    keys = {"state"}
    if kind in ("ghz-plus", "ghz-minus", "x-polarized"):
        n = game.num_teams if isinstance(game, ToricGame) else game.num_players
        return make_named_state(kind, n), keys, kind
    if kind == "ghz-qudit":
        if not isinstance(game, ModuloGame):
            raise ConfigError("ghz-qudit pairs with the modulo game",
                              cfg.line_of("state"))
        state = make_named_state("ghz-qudit", game.num_players,
                                 local_dim=game.modulus)
        return state, keys, kind
    if kind == "cluster":
        state = make_named_state("cluster", 2 * game.num_players)
        return state, keys, kind
    if kind == "ising-ground":
        keys |= {"j", "gamma", "h"}
        spec = IsingSpec(game.num_players, cfg.get_float("j", 1.0),
                         cfg.get_float("gamma"), cfg.get_float("h", 0.0))
        return model_ground_state(spec), keys, kind
    if kind == "clock-ground":
        if not isinstance(game, ModuloGame):
            raise ConfigError("clock-ground pairs with the modulo game",
                              cfg.line_of("state"))
        keys |= {"j", "gamma", "h"}
        spec = ClockSpec(game.num_players, game.modulus,
                         cfg.get_float("j", 1.0), cfg.get_float("gamma"),
                         cfg.get_float("h", 0.0))
        return model_ground_state(spec), keys, kind
    if kind == "cluster-ground":
        keys |= {"lambda"}
        spec = ClusterChainSpec(game.num_players,
                                cfg.get_float("lambda", 0.0))
        return model_ground_state(spec), keys, kind
    if kind in ("toric-cat", "toric-sector", "toric-perturbed"):
        if not isinstance(game, ToricGame):
            raise ConfigError(f"{kind} pairs with the toric game",
                              cfg.line_of("state"))
        lattice = game.lattice
        if kind == "toric-cat":
            return toric_game_state(lattice), keys, kind
        if kind == "toric-sector":
            return toric_ideal_state(lattice, (0, 0)), keys, kind
        keys |= {"k", "kprime", "hx", "hz"}
        spec = ToricSpec(lattice, cfg.get_float("k", 1.0),
                         cfg.get_float("kprime", 1.0),
                         cfg.get_float("hx", 0.0), cfg.get_float("hz", 0.0))
        result = ground_state(build_hamiltonian(spec), k=4,
                              method="iterative")
        return adiabatic_toric_state(result, lattice), keys, kind
    raise ConfigError(f"unknown state {kind!r}", cfg.line_of("state"))


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_parity_sweep(args):
    cfg = parse_config(args.config)
    cfg.check_keys({"n", "j", "h", "gmin", "gmax", "steps"})
    n = cfg.get_int("n")
    if not 3 <= n <= 16:
        raise ConfigError("the diagonalization sweep supports 3 <= n <= 16",
                          cfg.line_of("n"))
    j = cfg.get_float("j", 1.0)
    h = cfg.get_float("h", 0.0)
    sweep = SweepSpec("gamma", cfg.get_float("gmin", 0.0),
                      cfg.get_float("gmax", 2.0), cfg.get_int("steps"))
    pcl = classical_parity_value(n)

    def point(g):
        gamma = max(float(g), GAMMA_FLOOR)
        spec = IsingSpec(n, j, gamma, h)
        ed = parity_fidelity_value(model_ground_state(spec))
        ff = win_probability(n, gamma) if h == 0.0 else None
        return ed, ff

    grid = sweep.values()
    results = _parallel_map(point, grid, args.workers)
    rows = [(_num(g), _num(h), _num(ed),
             "" if ff is None else _num(ff), _frac(pcl))
            for g, (ed, ff) in zip(grid, results)]
    path = _csv_path(args)
    _write_csv(path, _manifest(cfg, args.seed),
               ("g", "h", "pqu_ed", "pqu_freefermion", "pcl_star"), rows)
    save_sweep_figure(_figure_path(path), list(grid),
                      [ed for ed, _ in results],
                      [ff for _, ff in results] if h == 0.0 else None,
                      float(pcl), n, h)
    print(f"wrote {path} and {_figure_path(path)}")


def _cmd_threshold(args):
    cfg = parse_config(args.config)
    cfg.check_keys({"mode", "n", "alpha"})
    mode = cfg.get_str("mode")
    rows = []
    if mode == "finite":
        n = cfg.get_int("n")
        value = threshold_finite(n)
        rows.append((mode, f"n={n}", "threshold-field", _num(value),
                     _num(FINITE_THRESHOLD_TOL)))
    elif mode == "asymptotic":
        est = threshold_asymptotic()
        rows.append((mode, "", "threshold-field", _num(est.value),
                     _num(est.abs_error)))
    elif mode == "three-bit":
        rows.append((mode, "", "threshold-field",
                     _num(three_bit_threshold_field()), _num(EXACT_ERROR)))
    elif mode == "pbit-alpha":
        # Config alpha follows the weight-per-excitation convention
        # (alpha = 1 is uniform); the Bernoulli parameter is a/(1+a).
        alpha = cfg.get_fraction("alpha")
        if alpha <= 0:
            raise ConfigError("alpha must be positive", cfg.line_of("alpha"))
        bernoulli = alpha / (1 + alpha)
        rows.append((mode, f"alpha={alpha}", "m-star",
                     _num(marked_threshold_magnetization(bernoulli)),
                     _num(EXACT_ERROR)))
        rows.append((mode, f"alpha={alpha}", "threshold-field",
                     _num(marked_threshold_field(bernoulli)),
                     _num(EXACT_ERROR)))
    else:
        raise ConfigError(
            f"unknown mode {mode!r}; expected finite, asymptotic, "
            f"three-bit, or pbit-alpha", cfg.line_of("mode"))
    path = _csv_path(args)
    _write_csv(path, _manifest(cfg, args.seed),
               ("mode", "parameter", "quantity", "value", "abs_error"), rows)
    save_threshold_figure(_figure_path(path),
                          [f"{r[2]} {r[1]}".strip() for r in rows],
                          [float(r[3]) for r in rows],
                          [float(r[4]) for r in rows])
    print(f"wrote {path} and {_figure_path(path)}")


def _cmd_classical_search(args):
    cfg = parse_config(args.config)
    game, keys = _game_from_config(cfg)
    cfg.check_keys(keys | {"restriction", "allow_long"})
    restriction = cfg.get_str("restriction", "full")
    result = exhaustive_search(game, restriction,
                               partitions=max(1, args.workers),
                               allow_long=cfg.get_bool("allow_long", False))
    path = _csv_path(args)
    _write_csv(path, _manifest(cfg, args.seed),
               ("game", "space-size", "optimum-num", "optimum-den",
                "witnesses-count", "seconds"), [result.to_csv_row()])
    lower = upper = None
    try:
        bounds = closed_form_bounds(game)
        lower, upper = float(bounds.lower), float(bounds.upper)
    except ParameterError:
        pass
    save_search_figure(_figure_path(path), result.game_label,
                       float(result.optimum), lower, upper)
    print(f"wrote {path} and {_figure_path(path)}")
    print(f"{result.game_label}: optimum {result.optimum} over "
          f"{result.space_size} strategies "
          f"({result.optimal_count} maximizers)")


def _cmd_boyer(args):
    cfg = parse_config(args.config)
    cfg.check_keys({"d", "m", "nmin", "nmax"})
    d = cfg.get_int("d")
    m = cfg.get_int("m")
    nmin = cfg.get_int("nmin", 2)
    nmax = cfg.get_int("nmax", 8)
    if not 1 <= nmin <= nmax:
        raise ConfigError("need 1 <= nmin <= nmax", cfg.line_of("nmin"))
    s = modulo_phase_sum_maximum(d, m)
    n_values = list(range(nmin, nmax + 1))
    bounds = [modulo_classical_upper_bound(d, m, n, s) for n in n_values]
    rows = [(str(d), str(m), str(n), _num(s), _num(b))
            for n, b in zip(n_values, bounds)]
    path = _csv_path(args)
    _write_csv(path, _manifest(cfg, args.seed),
               ("divisor", "modulus", "n", "phase-sum", "upper-bound"), rows)
    save_bound_figure(_figure_path(path), n_values, bounds, s, d, m)
    print(f"wrote {path} and {_figure_path(path)}")
    print(f"phase sum s({d},{m}) = {s:.6f}")


def _format_outputs(outputs) -> str:
    if outputs and isinstance(outputs[0], tuple):
        return "/".join("".join(str(v) for v in t) for t in outputs)
    return "".join(str(v) for v in outputs)


def _cmd_game_run(args):
    cfg = parse_config(args.config)
    game, game_keys = _game_from_config(cfg)
    state, state_keys, label = _state_from_config(cfg, game)
    cfg.check_keys(game_keys | state_keys | {"samples"})
    samples = cfg.get_int("samples", 10)
    if samples < 0:
        raise ConfigError("samples must be nonnegative",
                          cfg.line_of("samples"))

    analytic = analytic_report(state, game, state_label=label)
    enumerated = oracle_win_probability(state, game, state_label=label)
    print(analytic.to_text())
    print()
    print(enumerated.to_text())

    if samples:
        print()
        print(f"sampled transcript (seed {args.seed}):")
        rng = np.random.default_rng(args.seed)
        for play in range(samples):
            inputs = game.sample_input(rng)
            plays = enumerate_plays(state, game, inputs)
            probs = np.array([p for _, p in plays], dtype=float)
            probs = probs / probs.sum()
            choice = int(rng.choice(len(plays), p=probs))
            outputs = plays[choice][0]
            verdict = "win" if game.judge(inputs, outputs) else "loss"
            print(f"  play {play + 1}: input "
                  f"{_format_outputs(inputs)} -> outputs "
                  f"{_format_outputs(outputs)} ({verdict})")

    path = _csv_path(args)
    _write_csv(path, _manifest(cfg, args.seed),
               ("game", "state", "method", "value", "error-bound"),
               [analytic.to_csv_row(), enumerated.to_csv_row()])
    save_report_figure(_figure_path(path),
                       f"{game_label(game)} with {label}",
                       [("analytic", analytic.value, analytic.per_input),
                        ("enumeration", enumerated.value,
                         enumerated.per_input)])
    print(f"wrote {path} and {_figure_path(path)}")


def _cmd_toric_pert(args):
    cfg = parse_config(args.config)
    cfg.check_keys({"lx", "ly", "k", "kprime", "hx", "hz"})
    lattice = ToricLattice(cfg.get_int("lx"), cfg.get_int("ly"))
    spec = ToricSpec(lattice, cfg.get_float("k", 1.0),
                     cfg.get_float("kprime", 1.0),
                     cfg.get_float("hx", 0.0), cfg.get_float("hz", 0.0))
    record = toric_perturbative_record(spec)
    result = ground_state(build_hamiltonian(spec), k=4, method="iterative")
    # Column loops stay sharp on the continued sector state; the readout
    # loop stays sharp on the continued game cat.
    sector = adiabatic_toric_state(result, lattice,
                                   reference=toric_ideal_state(lattice,
                                                               (0, 0)))
    cat = adiabatic_toric_state(result, lattice)

    rows = []
    names, measured, estimates = [], [], []
    for col in range(lattice.lx):
        w = expectation(sector, team_loop_operator(lattice, col)).real
        rel = abs(w - record.w_estimate) / record.w_estimate
        rows.append((f"team-loop-{col}", _num(w), _num(record.w_estimate),
                     _num(rel)))
        names.append(f"W{col}")
        measured.append(w)
        estimates.append(record.w_estimate)
    for row in range(lattice.ly):
        v = expectation(cat, dual_loop_operator(lattice, row)).real
        rel = abs(v - record.v_estimate) / record.v_estimate
        rows.append((f"dual-loop-{row}", _num(v), _num(record.v_estimate),
                     _num(rel)))
        names.append(f"V{row}")
        measured.append(v)
        estimates.append(record.v_estimate)
    rows.append(("w-star", "", _num(record.w_star), ""))
    rows.append(("team-spacing-bound", "", _num(record.team_spacing_bound),
                 ""))
    rows.append(("hx-bound", "", _num(record.hx_bound), ""))
    rows.append(("hz-bound", "", _num(record.hz_bound), ""))

    path = _csv_path(args)
    _write_csv(path, _manifest(cfg, args.seed),
               ("quantity", "measured", "estimate", "rel-error"), rows)
    save_toric_figure(_figure_path(path), names, measured, estimates)
    print(f"wrote {path} and {_figure_path(path)}")


def _cmd_polygon_estimate(args):
    cfg = parse_config(args.config)
    cfg.check_keys({"p", "smin", "smax", "steps"})
    p = cfg.get_int("p")
    sweep = SweepSpec("stabilizer-mean", cfg.get_float("smin", 0.0),
                      cfg.get_float("smax", 1.0), cfg.get_int("steps"))
    if not (0.0 <= sweep.minimum and sweep.maximum <= 1.0):
        raise ConfigError("the stabilizer mean lives in [0, 1]",
                          cfg.line_of("smin"))
    rows = []
    s_values = sweep.values()
    estimates = []
    for s in s_values:
        est = polygon_estimate_value(float(s), p)
        growth, limit = polygon_estimate_criterion(float(s))
        estimates.append(est)
        rows.append((str(p), _num(s), _num(est), _num(growth), _num(limit)))
    path = _csv_path(args)
    _write_csv(path, _manifest(cfg, args.seed),
               ("p", "s", "win-estimate", "growth-factor", "growth-limit"),
               rows)
    from .classical import polygon_classical_bounds
    lower = float(polygon_classical_bounds(p).lower)
    save_estimate_figure(_figure_path(path), list(s_values), estimates, p,
                         classical_lower=lower)
    print(f"wrote {path} and {_figure_path(path)}")


# ---------------------------------------------------------------------------
# Entry point

_HANDLERS = {
    "parity-sweep": _cmd_parity_sweep,
    "threshold": _cmd_threshold,
    "classical-search": _cmd_classical_search,
    "boyer": _cmd_boyer,
    "game-run": _cmd_game_run,
    "toric-pert": _cmd_toric_pert,
    "polygon-estimate": _cmd_polygon_estimate,
}

_HELP = {
    "parity-sweep": "parity-game win probability against transverse field",
    "threshold": "advantage-loss threshold fields",
    "classical-search": "exhaustive optimal classical strategy search",
    "boyer": "digit-game phase sum and classical bound table",
    "game-run": "play one game with one state, analytic and enumerated",
    "toric-pert": "perturbed toric loop expectations against estimates",
    "polygon-estimate": "polygon win estimate from a stabilizer mean",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasegames",
        description="nonlocal-game laboratory command line")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        cmd = sub.add_parser(name, help=_HELP[name])
        cmd.add_argument("--config", required=True,
                         help="path to a key = value config file")
        cmd.add_argument("--seed", type=int, default=0,
                         help="64-bit seed for sampled transcripts")
        cmd.add_argument("--workers", type=int, default=1,
                         help="worker threads for sweeps and searches")
        cmd.add_argument("--out", default=None,
                         help="CSV output path; the PNG lands beside it")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if not 0 <= args.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 bits")
        if args.workers < 1:
            raise ConfigError("workers must be at least 1")
        _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ParameterError, GeometryError, NoSolutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
