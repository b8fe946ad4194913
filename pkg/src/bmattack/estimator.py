"""scikit-learn style wrapper: fit on observed bits, predict the generator's future output."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .attack import execute_attack, parse_bits, recover_internal_states
from .generators.base import ParameterError
from .statevec import DEFAULT_QUBIT_CAP


def check_bits(X) -> np.ndarray:
    """Validate an observed bit sequence given as ``"101"`` or a 1-D 0/1 array."""
    if isinstance(X, str):
        return np.array(parse_bits(X), dtype=int)
    arr = np.asarray(X)
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ParameterError(f"expected a 1-D bit sequence, got shape {arr.shape}")
    if arr.size and not np.all(np.isin(arr, (0, 1))):
        raise ParameterError("bit sequence may only contain 0 and 1")
    return np.array(parse_bits(arr.astype(int).tolist()), dtype=int)


class PermanentCompromiseAttack(BaseEstimator):
    """Recover a generator's internal state from its output, then predict ahead.

    Parameters
    ----------
    spec : GeneratorSpec
        The generator under attack.
    assumed_solutions : int
        Number of consistent states assumed when choosing the iteration count.
    rng_seed : int
        Seed for the simulated measurement.
    qubit_cap : int
        Upper bound on simulated qubits.

    Attributes
    ----------
    report_ : AttackReport
    representative_ : int
        Internal state right after the last observed output.
    first_state_ : int
        Internal state that produced the first observed bit.
    """

    def __init__(self, spec=None, assumed_solutions=1, rng_seed=0, qubit_cap=DEFAULT_QUBIT_CAP):
        self.spec = spec
        self.assumed_solutions = assumed_solutions
        self.rng_seed = rng_seed
        self.qubit_cap = qubit_cap

    def fit(self, X, y=None):
        if self.spec is None:
            raise ParameterError("spec must be set before fitting")
        bits = check_bits(X)
        self.report_ = execute_attack(self.spec, bits.tolist(), self.rng_seed,
                                      assumed_solutions=self.assumed_solutions,
                                      qubit_cap=self.qubit_cap)
        self.observed_bits_ = bits
        self.representative_ = self.report_.top_outcome
        self.first_state_ = self.report_.implied_first_state
        return self

    def predict(self, n_bits):
        """The next ``n_bits`` outputs after the observed ones."""
        check_is_fitted(self, "representative_")
        if n_bits < 0:
            raise ParameterError("n_bits must be non-negative")
        if n_bits == 0:
            return np.zeros(0, dtype=int)
        rec = recover_internal_states(self.spec, self.representative_, 0, n_bits - 1)
        return np.array([b for _, _, b in rec.chain], dtype=int)

    def score(self, X, y=None):
        """Fraction of a continuation ``X`` that :meth:`predict` gets right."""
        truth = check_bits(X)
        return float(np.mean(self.predict(len(truth)) == truth))
