"""Figure rendering for scenario outcomes (matplotlib, file output only)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}

AXIS_LABELS = {
    "attenuation": "attenuation of mode B (1 - T)",
    "attenuation_db": "attenuation of mode B [dB]",
    "modulation": "modulation depth M [SNU]",
    "added_noise": "added noise on mode B [SNU]",
}


def _plot(ax, res, column, label=None, **kw):
    x = res.params
    y = res.column(column)
    err = res.error_column(column)
    if err is None:
        ax.plot(x, y, label=label, **kw)
    else:
        ax.errorbar(x, y, yerr=err, marker="o", ms=3, capsize=2, label=label, **kw)


def _units(outcome) -> str:
    first = next(iter(outcome.curves.values()))
    return first.config.get("units", "bits")


def _fig2(outcome):
    res = outcome.curves["entangled"]
    units = _units(outcome)
    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(7, 2.8))
    _plot(ax_a, res, "I", "I", color="tab:red")
    _plot(ax_a, res, "J", "J", color="tab:blue")
    ax_a.set_ylabel(f"mutual information [{units}]")
    ax_a.legend(frameon=False)
    _plot(ax_b, res, "D", color="k")
    ax_b.set_ylabel(f"Gaussian discord [{units}]")
    inset = ax_b.inset_axes([0.55, 0.55, 0.4, 0.4])
    _plot(inset, res, "E_N", color="tab:purple")
    inset.set_title("log. negativity", fontsize=7)
    inset.tick_params(labelsize=6)
    for ax in (ax_a, ax_b):
        ax.set_xlabel(AXIS_LABELS["attenuation"])
    return fig


def _fig3(outcome):
    units = _units(outcome)
    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(7, 2.8))
    for i, (label, res) in enumerate(outcome.curves.items()):
        color = f"C{i}"
        _plot(ax_a, res, "D", label, color=color)
        _plot(ax_b, res, "I", f"I {label}", color=color)
        _plot(ax_b, res, "J", f"J {label}", color=color, ls="--")
    ax_a.set_ylabel(f"Gaussian discord [{units}]")
    ax_b.set_ylabel(f"mutual information [{units}]")
    for ax in (ax_a, ax_b):
        ax.set_xscale("log")
        ax.set_xlabel(AXIS_LABELS["modulation"])
        ax.legend(frameon=False)
    return fig


def _single_panel(outcome, xkey):
    fig, ax = plt.subplots(figsize=(4.2, 3))
    for label, res in outcome.curves.items():
        ls = "--" if label.startswith("mix_") else "-"
        _plot(ax, res, "D", label, ls=ls)
    ax.set_xlabel(AXIS_LABELS.get(xkey, xkey))
    ax.set_ylabel(f"Gaussian discord [{_units(outcome)}]")
    ax.legend(frameon=False)
    return fig


def render_outcome(outcome, out_dir, fmt: str = "png") -> str:
    """Render one figure for ``outcome`` into ``out_dir``; returns the file path."""
    with plt.rc_context(RC):
        if outcome.name == "fig2" and "entangled" in outcome.curves:
            fig = _fig2(outcome)
        elif outcome.name == "fig3" and "ideal" in outcome.curves:
            fig = _fig3(outcome)
        else:
            first = next(iter(outcome.curves.values()))
            fig = _single_panel(outcome, first.parameter)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{outcome.name}.{fmt}")
        tmp = os.path.join(out_dir, f".{outcome.name}.tmp.{fmt}")
        fig.savefig(tmp, format=fmt)
        plt.close(fig)
    os.replace(tmp, path)
    return path
