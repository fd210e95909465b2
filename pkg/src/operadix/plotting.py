"""Figures for dimension tables and series comparisons (matplotlib, Agg)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .series import TruncatedEGF, exponent_vectors  # noqa: E402


def _weight_labels(s: TruncatedEGF):
    return [e for e in exponent_vectors(s.ncolours, s.N, 1)]


def _colour_names(s: TruncatedEGF):
    return list(s.names) if s.names else [str(c + 1) for c in range(s.ncolours)]


def plot_dimensions(s: TruncatedEGF, path, title=None):
    """One bar panel per output colour: dimension against weight vector,
    on a log scale (zero dimensions are drawn as gaps)."""
    exps = _weight_labels(s)
    names = _colour_names(s)
    fig, axes = plt.subplots(s.ncolours, 1, figsize=(max(6, 0.35 * len(exps)), 2.6 * s.ncolours), squeeze=False)
    ticks = ["".join(map(str, e)) if s.ncolours > 1 else str(e[0]) for e in exps]
    for c, ax in enumerate(axes[:, 0]):
        dims = [float(s.dimension(c, e)) for e in exps]
        ax.bar(range(len(exps)), dims, color="tab:blue")
        if any(d > 0 for d in dims):
            ax.set_yscale("log")
        ax.set_ylabel(f"dim, output {names[c]}")
        ax.set_xticks(range(len(exps)))
        ax.set_xticklabels(ticks, rotation=90, fontsize=7)
    axes[-1, 0].set_xlabel("weights (" + ",".join(names) + ")")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_comparison(computed: TruncatedEGF, expected: TruncatedEGF | None, path, title=None, expected_label="expected"):
    """Computed dimensions against an expected series; mismatches are red.
    ``expected`` may be None when the expected series could not be built."""
    exps = _weight_labels(computed)
    names = _colour_names(computed)
    fig, axes = plt.subplots(computed.ncolours, 1, figsize=(max(6, 0.35 * len(exps)), 2.6 * computed.ncolours), squeeze=False)
    xs = list(range(len(exps)))
    for c, ax in enumerate(axes[:, 0]):
        got = [float(computed.dimension(c, e)) for e in exps]
        ax.plot(xs, got, "o", color="tab:blue", label="normal forms")
        if expected is not None:
            want = [float(expected.dimension(c, e)) for e in exps]
            bad = [x for x, a, b in zip(xs, got, want) if a != b]
            ax.plot(xs, want, "x", color="black", label=expected_label)
            if bad:
                ax.plot(bad, [got[x] for x in bad], "o", color="tab:red", label="mismatch")
        ax.set_yscale("symlog", linthresh=1)
        ax.set_ylabel(f"output {names[c]}")
        ax.set_xticks(xs)
        ax.set_xticklabels(["".join(map(str, e)) for e in exps], rotation=90, fontsize=7)
        ax.legend(fontsize=7, loc="upper left")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
