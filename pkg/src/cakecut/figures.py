"""Matplotlib renderers for the report figures.

Exact rationals are converted to floats only here, at the plotting boundary.
All figures are written to files (headless Agg backend); nothing is shown
interactively.
"""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _save(fig, path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def render_gini_figure(rows, path) -> None:
    """Gini of the chained-game equilibrium vs player count, with approximations."""
    ns = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, [float(r[1]) for r in rows], "o-", label="exact")
    ax.plot(ns, [float(r[2]) for r in rows], "s--", label="asymptotic")
    ax.plot(ns, [float(r[3]) for r in rows], ":", color="gray", label="1 - 3/n")
    ax.set_xlabel("players n")
    ax.set_ylabel("Gini coefficient")
    ax.set_title("Inequality of the chained cut-and-choose equilibrium")
    ax.set_ylim(0, 1)
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def render_payoff_figure(curves: dict[int, list[tuple[Fraction, Fraction]]], path) -> None:
    """Normalized opening-cutter payoff vs deviation, one curve per player count."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for n in sorted(curves):
        points = curves[n]
        ax.plot([float(e) for e, _ in points], [float(p) for _, p in points],
                label=f"n = {n}")
    ax.axvline(0.0, color="gray", lw=0.8, alpha=0.6)
    ax.set_xlabel("deviation from the proportional cut")
    ax.set_ylabel("normalized payoff")
    ax.set_title("Opening-cutter payoff under the biggest-player rule")
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)


def render_poa_figure(rows, path) -> None:
    """Price of anarchy vs player count against the n/3 trend."""
    ns = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, [float(r[1]) for r in rows], "o-", label="exact")
    ax.plot(ns, [float(r[2]) for r in rows], "--", label="n/3")
    ax.set_xlabel("players n")
    ax.set_ylabel("price of anarchy")
    ax.set_title("Welfare cost of decentralized chaining")
    ax.grid(True, alpha=0.3)
    ax.legend()
    _save(fig, path)
