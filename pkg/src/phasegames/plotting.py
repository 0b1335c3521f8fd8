"""Figure rendering for the command-line reports.

Each save function takes plain sequences, draws one figure, and writes
it to the given path.  The Agg backend is forced so rendering works in
headless environments; nothing here touches a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_FIGSIZE = (6.4, 4.2)


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(path, g_values, ed_values, ff_values, classical,
                      num_players, h_field):
    """Win probability against transverse field, with the classical bar."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(g_values, ed_values, "o-", markersize=3,
            label="ground state (ED)")
    if ff_values is not None:
        ax.plot(g_values, ff_values, "--", label="free fermion")
    ax.axhline(classical, color="crimson", linestyle=":",
               label="classical optimum")
    ax.set_xlabel("transverse field g")
    ax.set_ylabel("win probability")
    ax.set_title(f"parity game, N={num_players}, h={h_field:g}")
    ax.grid(alpha=0.3)
    ax.legend()
    _finish(fig, path)


def save_threshold_figure(path, labels, values, errors):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    xs = range(len(labels))
    ax.errorbar(xs, values, yerr=errors, fmt="o", capsize=4)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("threshold field")
    ax.set_title("advantage-loss thresholds")
    ax.grid(alpha=0.3)
    _finish(fig, path)


def save_search_figure(path, label, optimum, lower=None, upper=None):
    """Search optimum against any closed-form bracket."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.bar([0], [optimum], width=0.5, label="search optimum")
    if lower is not None:
        ax.axhline(lower, color="seagreen", linestyle="--",
                   label="closed-form lower")
    if upper is not None and upper != lower:
        ax.axhline(upper, color="crimson", linestyle=":",
                   label="closed-form upper")
    ax.set_xticks([0])
    ax.set_xticklabels([label])
    ax.set_ylabel("win probability")
    ax.set_ylim(0.0, 1.05)
    ax.set_title("optimal classical strategy")
    ax.grid(alpha=0.3, axis="y")
    ax.legend()
    _finish(fig, path)


def save_bound_figure(path, n_values, bounds, phase_sum, divisor, modulus):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.semilogy(n_values, bounds, "o-",
                label=f"bound, s={phase_sum:.4f}")
    ax.axhline(1.0 / modulus, color="gray", linestyle=":",
               label="random guessing")
    ax.set_xlabel("players N")
    ax.set_ylabel("classical upper bound")
    ax.set_title(f"digit game D={divisor}, M={modulus}")
    ax.grid(alpha=0.3, which="both")
    ax.legend()
    _finish(fig, path)


def save_report_figure(path, title, reports):
    """Per-input win probabilities for one or more protocol reports.

    ``reports`` holds (label, value, per_input) triples; reports with an
    empty per-input table are drawn as horizontal value lines.
    """
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    width = 0.8 / max(1, sum(1 for _, _, per in reports if per))
    slot = 0
    ticks, tick_labels = [], []
    for label, value, per_input in reports:
        if per_input:
            xs = [i + slot * width for i in range(len(per_input))]
            ax.bar(xs, [p for _, p in per_input], width=width, label=label)
            if not ticks:
                ticks = [i + 0.4 for i in range(len(per_input))]
                tick_labels = ["".join(str(v) for v in inp)
                               for inp, _ in per_input]
            slot += 1
        else:
            ax.axhline(value, linestyle="--", label=f"{label} = {value:.6g}")
    if ticks:
        ax.set_xticks(ticks)
        ax.set_xticklabels(tick_labels, rotation=60, fontsize=7)
        ax.set_xlabel("input")
    ax.set_ylabel("win probability")
    ax.set_ylim(0.0, 1.05)
    ax.set_title(title)
    ax.grid(alpha=0.3, axis="y")
    ax.legend()
    _finish(fig, path)


def save_toric_figure(path, names, measured, estimates):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    xs = range(len(names))
    ax.bar([x - 0.2 for x in xs], measured, width=0.4, label="ED")
    ax.bar([x + 0.2 for x in xs], estimates, width=0.4,
           label="perimeter-law estimate")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylabel("loop expectation")
    ax.set_title("perturbed loop expectations")
    ax.grid(alpha=0.3, axis="y")
    ax.legend()
    _finish(fig, path)


def save_estimate_figure(path, s_values, estimates, num_marked,
                         classical_lower=None):
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(s_values, estimates, "o-", markersize=3,
            label="stabilizer-mean estimate")
    if classical_lower is not None:
        ax.axhline(classical_lower, color="crimson", linestyle=":",
                   label="classical lower bound")
    ax.set_xlabel("matching stabilizer mean S")
    ax.set_ylabel("estimated win probability")
    ax.set_title(f"polygon game, P={num_marked}")
    ax.grid(alpha=0.3)
    ax.legend()
    _finish(fig, path)
