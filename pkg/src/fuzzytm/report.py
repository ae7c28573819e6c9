"""Training-report output: CSV epoch logs and accuracy-curve figures."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .training import EpochReport

CSV_HEADER = "epoch,train_acc,test_acc,seconds"


def write_epoch_csv(reports: list[EpochReport], path) -> None:
    with open(path, "w") as f:
        f.write(CSV_HEADER + "\n")
        for r in reports:
            f.write(r.csv_line() + "\n")


def render_report(reports: list[EpochReport], out_dir, name: str = "training") -> dict:
    """Write the CSV log and an accuracy/time figure into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{name}.csv"
    write_epoch_csv(reports, csv_path)

    epochs = [r.epoch for r in reports]
    fig, (ax_acc, ax_time) = plt.subplots(1, 2, figsize=(10, 4))
    ax_acc.plot(epochs, [r.train_accuracy for r in reports], label="train")
    if any(r.test_accuracy is not None for r in reports):
        ax_acc.plot(epochs, [r.test_accuracy for r in reports], label="test")
    ax_acc.set_xlabel("epoch")
    ax_acc.set_ylabel("accuracy")
    ax_acc.set_ylim(0.0, 1.0)
    ax_acc.legend()
    ax_acc.grid(True, alpha=0.3)
    ax_time.plot(epochs, [r.wall_time for r in reports], color="tab:orange")
    ax_time.set_xlabel("epoch")
    ax_time.set_ylabel("seconds")
    ax_time.grid(True, alpha=0.3)
    fig.tight_layout()
    fig_path = out_dir / f"{name}.png"
    fig.savefig(fig_path, dpi=120)
    plt.close(fig)
    return {"csv": csv_path, "figure": fig_path}
