"""Render the agreement/likelihood distribution diagram for one self-test run.

Example:
    python scripts/plot_selftest.py --disease 13 --out selftest_d13.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from diagnet.engine import chart_data
from diagnet.kb import default_kb, load_kb_file
from diagnet.selftest import self_test


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kb", metavar="PATH", default=None)
    parser.add_argument("--disease", type=int, default=13)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    kb = load_kb_file(args.kb) if args.kb else default_kb()
    result = self_test(kb, args.disease)
    bundle = chart_data(result)

    indices = [d for d, _, _, _ in bundle.bars]
    a_values = [a for _, _, a, _ in bundle.bars]
    l_values = [(l if l is not None else 0.0) for _, _, _, l in bundle.bars]

    fig, ax = plt.subplots(figsize=(9, 5))
    width = 0.4
    ax.bar([d - width / 2 for d in indices], a_values, width, label="agreement A(d) %")
    ax.bar([d + width / 2 for d in indices], l_values, width, label="likelihood L(d) %")
    if bundle.reference is not None:
        mean, plus_1, plus_2 = bundle.reference
        for level, label in [(mean, "mean"), (plus_1, "mean+1 sigma"),
                             (plus_2, "mean+2 sigma")]:
            ax.axhline(level, linestyle="--", linewidth=0.8, color="gray")
            ax.annotate(label, (indices[-1] + 0.55, level), fontsize=8,
                        va="center", color="gray")
    ax.set_xticks(indices)
    ax.set_xlabel("disease index d")
    ax.set_ylabel("percent")
    ax.set_title(f"Self-test of {result.selected_name} "
                 f"(reliability: {result.reliability})")
    ax.legend()
    fig.tight_layout()

    out = args.out or f"selftest_d{args.disease}.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
