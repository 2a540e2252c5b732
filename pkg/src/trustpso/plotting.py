"""Self-contained SVG line charts for reproduced figures."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_COLUMNS = {"distance": (0, "mean honest distance to target [m]"),
            "r_md": (1, "attacker misdetection rate"),
            "r_fa": (2, "attacker false-alarm rate")}


def _label(figure, scenario) -> str:
    if figure == "fig2":
        return scenario.attack.model.value
    if figure == "fig3":
        return scenario.strategy.name
    return "conventional" if scenario.engine.value == "conventional" else scenario.policy.value


def plot_series(series, column: str, path, title: str, figure: str) -> Path:
    col, ylabel = _COLUMNS[column]
    plt.rcParams["svg.hashsalt"] = "trustpso"
    fig, ax = plt.subplots(figsize=(6, 4))
    for scenario, table in series:
        t = np.arange(1, len(table) + 1)
        ax.plot(t, table.mean[:, col], label=_label(figure, scenario))
    ax.set_xlabel("iteration")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_figure(figure: str, sub: str, series, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    columns = ("r_md", "r_fa") if figure == "fig3" else ("distance",)
    paths = []
    for column in columns:
        name = f"{sub}_{column}" if figure == "fig3" else sub
        paths.append(plot_series(series, column, out_dir / f"{name}.svg", name, figure))
    return paths
