"""Figure rendering for capacity sweeps.

Renders the curves produced by capacity.curve_sweep to an image file next to
the delimited output. Uses the Agg backend so it works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .capacity import CapacityCurve

_STYLES = {
    "C": dict(color="tab:blue", linestyle="--"),
    "C_flipped": dict(color="tab:red", linestyle="-"),
    "smith_smolin": dict(color="tab:blue", linestyle="--"),
    "Ic_flipped": dict(color="tab:red", linestyle="-"),
    "holevo_flipped": dict(color="tab:purple", linestyle="-."),
    "Q": dict(color="tab:blue", linestyle="--"),
    "Q_flipped": dict(color="tab:red", linestyle="-"),
}

_LABELS = {
    "C": "classical capacity, fixed direction",
    "C_flipped": "classical capacity, flipped",
    "smith_smolin": "quantum capacity upper bound, fixed direction",
    "Ic_flipped": "coherent-information lower bound, flipped",
    "holevo_flipped": "holevo information, flipped",
    "Q": "quantum capacity, fixed direction",
    "Q_flipped": "coherent information at I/2, flipped",
}


def render_curve(curve: CapacityCurve, path: str) -> None:
    """Plot every quantity of a sweep against its parameter and save to path."""
    by_quantity: dict[str, tuple[list[float], list[float]]] = {}
    order: list[str] = []
    for param, value, qid in curve.points:
        if qid not in by_quantity:
            by_quantity[qid] = ([], [])
            order.append(qid)
        by_quantity[qid][0].append(param)
        by_quantity[qid][1].append(value)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for qid in order:
        xs, ys = by_quantity[qid]
        ax.plot(xs, ys, label=_LABELS.get(qid, qid), **_STYLES.get(qid, {}))
    ax.set_xlabel(curve.parameter_name)
    ax.set_ylabel("bits per channel use")
    ax.set_title(f"{curve.family} channel, d = {curve.dim}")
    ax.grid(alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
