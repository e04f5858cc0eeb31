"""Delay-profile figures."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .engine import DelayProfile  # noqa: E402


def plot_delay_profile(profile: DelayProfile, path: str, title: str = "") -> None:
    """Work steps and oracle calls per gap, one bar pair per output."""
    gaps = list(range(len(profile.per_output_steps)))
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 4.5))
    top.bar(gaps, profile.per_output_steps, color="tab:blue")
    top.set_ylabel("steps")
    bottom.bar(gaps, profile.per_output_oracle_calls, color="tab:orange")
    bottom.set_ylabel("oracle calls")
    bottom.set_xlabel("gap (before output i; last = after final output)")
    fig.suptitle(title or f"{profile.outputs} outputs, max oracle input {profile.max_oracle_input_size}")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
