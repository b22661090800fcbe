"""Decision functions: operators ``A`` with ``0 <= A <= I``.

``A`` is the acceptance operator of the null hypothesis, so the type I error
is ``1 - <P0, A>`` and the type II error is ``<P1, A>``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .hermitian import as_hermitian, is_decision_operator

WEIGHT_TOL = 1e-12
OPERATOR_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DecisionFunction:
    """Classical acceptance weights or a quantum acceptance operator."""

    kind: str
    values: np.ndarray

    def __post_init__(self):
        if self.kind == "classical":
            w = np.array(self.values, dtype=float).reshape(-1)
            if np.any(w < -WEIGHT_TOL) or np.any(w > 1 + WEIGHT_TOL):
                raise ValidationError("classical acceptance weights must lie in [0, 1]")
        elif self.kind == "quantum":
            w = as_hermitian(self.values, tol=1e-10)
            if not is_decision_operator(w, tol=OPERATOR_TOL):
                raise ValidationError("operator is not between 0 and I")
        else:
            raise ValidationError(f"unknown decision kind {self.kind!r}")
        w.setflags(write=False)
        object.__setattr__(self, "values", w)

    @classmethod
    def classical(cls, weights):
        return cls("classical", weights)

    @classmethod
    def quantum(cls, operator):
        return cls("quantum", operator)

    @property
    def dim(self):
        return self.values.shape[0]

    def operator(self):
        """Matrix form (diagonal for classical weights)."""
        if self.kind == "classical":
            return np.diag(self.values).astype(complex)
        return self.values

    def weight(self, outcome):
        """Acceptance probability of a single basis outcome."""
        if self.kind == "classical":
            return float(self.values[outcome])
        return float(self.values[outcome, outcome].real)
