"""Central numeric tolerance policy.

Every "equals zero" decision in the package goes through one of these three
thresholds, so there is a single place to tighten or relax them:

* ``eps_zero``  -- is this expectation / defect norm zero?  Drives regime
  classification and the flush-to-zero of reported expectations.
* ``eps_herm``  -- elementwise Hermiticity check on operator construction.
* ``eps_eig``   -- eigenvalue slack: how negative an eigenvalue or an
  expectation may be before the model counts as unphysical.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    eps_zero: float = 1e-9
    eps_herm: float = 1e-12
    eps_eig: float = 1e-10

    def __post_init__(self) -> None:
        for name in ("eps_zero", "eps_herm", "eps_eig"):
            value = getattr(self, name)
            if not (value > 0.0):
                raise ValueError(f"{name} must be positive, got {value!r}")


DEFAULT_POLICY = NumericPolicy()
