"""Closed-loop transport/heat simulation and stabilization certificates."""

from ._core import (
    certify,
    compute_q,
    duality_pairing,
    evaluate_semigroup,
    fit_decay_rate,
    gain_window,
    norm,
    simulate,
)

__all__ = [
    "certify",
    "compute_q",
    "duality_pairing",
    "evaluate_semigroup",
    "fit_decay_rate",
    "gain_window",
    "norm",
    "simulate",
]
