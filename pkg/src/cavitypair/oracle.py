"""Closed-form predictions valid in the far-detuned (dispersive) regime.

When both delocalized field modes are far from the atomic transition the
photons only mediate an excitation exchange between the atoms, so the atomic
dynamics is analytic.  These expressions serve as independent references for
the full numerics.
"""

from __future__ import annotations

import numpy as np


def effective_concurrence_eg(exchange_rate: float, times: np.ndarray) -> np.ndarray:
    """Concurrence for one atom initially excited: |sin(2 * exchange_rate * t)|.

    The exchange produces cos(rate*t)|e g> - i sin(rate*t)|g e>, whose
    concurrence oscillates between separable and maximally entangled.
    """
    times = np.asarray(times, dtype=float)
    return np.abs(np.sin(2.0 * exchange_rate * times))


def effective_frozen_bell(times: np.ndarray) -> np.ndarray:
    """The symmetric Bell state is an exchange eigenstate: concurrence stays 1."""
    times = np.asarray(times, dtype=float)
    return np.ones_like(times)
