"""Size-growth measurements for products and powers of random grammars."""

from __future__ import annotations

import csv
import io
import random
from pathlib import Path

from .grammar import grammar_size
from .ops import multiply, power
from .randgen import random_pair
from .semiring import Ring, Z

FIELDS = ["op", "height", "sample", "vars_a", "vars_b", "rules_out", "bound",
          "size_a", "size_b", "size_out"]


def measure(seed: int = 0, samples: int = 10, max_height: int = 6, ring: Ring = Z) -> list[dict]:
    """One row per random product and per cube of a random grammar.

    For products ``bound`` is 5 * vars(a) * vars(b); for cubes it is left
    empty since no polynomial bound holds for unbounded powers.
    """
    rng = random.Random(seed)
    rows = []
    for h in range(1, max_height + 1):
        for s in range(samples):
            a, b = random_pair(rng, h, ring)
            p = multiply(a, a.start, b, b.start)
            rows.append(dict(op="mul", height=h, sample=s, vars_a=len(a), vars_b=len(b),
                             rules_out=len(p), bound=5 * len(a) * len(b),
                             size_a=grammar_size(a), size_b=grammar_size(b),
                             size_out=grammar_size(p)))
            c = power(a, None, 3)
            rows.append(dict(op="cube", height=h, sample=s, vars_a=len(a), vars_b=len(a),
                             rules_out=len(c), bound="", size_a=grammar_size(a),
                             size_b=grammar_size(a), size_out=grammar_size(c)))
    return rows


def to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def plot(rows: list[dict], path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for op, marker in (("mul", "o"), ("cube", "s")):
        pts = [(r["height"], r["size_out"]) for r in rows if r["op"] == op]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, marker=marker, alpha=0.6, label=f"{op} output size")
    heights = sorted({r["height"] for r in rows if r["op"] == "mul"})
    if heights:
        means = []
        for h in heights:
            vals = [r["size_a"] + r["size_b"] for r in rows if r["op"] == "mul" and r["height"] == h]
            means.append(sum(vals) / len(vals))
        ax.plot(heights, means, "k--", label="mean input size (a + b)")
    ax.set_xlabel("height")
    ax.set_ylabel("grammar size (bits)")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("Grammar size growth")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def write_report(out_dir: Path, **kw) -> tuple[Path, Path, list[dict]]:
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = measure(**kw)
    csv_path = out_dir / "size_growth.csv"
    png_path = out_dir / "size_growth.png"
    csv_path.write_text(to_csv(rows))
    plot(rows, png_path)
    return csv_path, png_path, rows
