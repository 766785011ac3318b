"""Shared helpers for the demo scripts: output folder and optional plotting."""

from pathlib import Path

OUT = Path(__file__).resolve().parent / "output"


def pyplot():
    """Return matplotlib.pyplot (Agg backend) or None if it is not installed."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping figures")
        return None
    OUT.mkdir(exist_ok=True)
    return plt


def save(fig, name):
    path = OUT / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"wrote {path}")
