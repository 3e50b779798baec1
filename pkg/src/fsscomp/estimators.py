"""scikit-learn compatible wrappers.

``CompensatedSource`` simulates one emitter + ramp configuration in ``fit``;
``MismatchResponse`` maps rows of compensation errors to entanglement
metrics; ``EntanglementMetrics`` turns density matrices into metric columns.
All three support ``get_params``/``set_params``/``clone``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analytic import analytic_density
from .cascade import CascadeParams, precession_rate
from .compensation import (
    MismatchSpec,
    RampParams,
    constant_phase,
    mismatch_of,
    ramp_from_mismatch,
)
from .core_state import BellTarget
from .experiments import METHODS, evaluate_mismatch
from .metrics import concurrence, fidelity, metrics_report, purity
from .montecarlo import McConfig, average_density
from .validation import check_density_stack, check_mismatch_array, check_nonneg, check_positive

__all__ = ["CompensatedSource", "EntanglementMetrics", "MismatchResponse"]

METRIC_NAMES = ("fidelity_phi_plus", "fidelity_phi_minus", "concurrence", "purity")


class _CascadeMixin:
    def _cascade(self) -> CascadeParams:
        return CascadeParams(
            fss=check_nonneg(self.fss, "fss"),
            tau_x=check_positive(self.tau_x, "tau_x"),
            tau_xx=check_positive(self.tau_xx, "tau_xx"),
        )

    def _mc_config(self) -> McConfig:
        return McConfig(
            seed=int(self.seed),
            batch_size=int(self.batch_size),
            rel_tol=float(self.rel_tol),
            max_samples=int(self.max_samples),
        )

    def _check_method(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")


class CompensatedSource(_CascadeMixin, BaseEstimator):
    """Averaged two-photon state of a quantum dot behind the compensating ramps.

    The ramp is either given explicitly through ``ramp`` or built from the
    mismatches ``d_omega1``, ``d_omega2`` and ``delta_t``. ``fit`` ignores its
    arguments and stores the averaged state.

    Attributes
    ----------
    rho_ : DensityMatrix
    n_samples_ : int
        Monte Carlo samples used (0 for the analytic method).
    converged_ : bool
    last_rel_change_ : float
    ramp_ : RampParams
    metrics_ : MetricsReport
    """

    def __init__(
        self,
        fss=3.0,
        tau_x=1.0,
        tau_xx=0.5,
        d_omega1=0.0,
        d_omega2=0.0,
        delta_t=0.0,
        ramp=None,
        method="monte_carlo",
        seed=0,
        batch_size=10_000,
        rel_tol=1e-6,
        max_samples=100_000_000,
        n_jobs=1,
    ):
        self.fss = fss
        self.tau_x = tau_x
        self.tau_xx = tau_xx
        self.d_omega1 = d_omega1
        self.d_omega2 = d_omega2
        self.delta_t = delta_t
        self.ramp = ramp
        self.method = method
        self.seed = seed
        self.batch_size = batch_size
        self.rel_tol = rel_tol
        self.max_samples = max_samples
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        self._check_method()
        p = self._cascade()
        if self.ramp is not None:
            if not isinstance(self.ramp, RampParams):
                raise TypeError("ramp must be a RampParams instance")
            ramp = self.ramp
        else:
            ramp = ramp_from_mismatch(
                MismatchSpec(self.d_omega1, self.d_omega2, self.delta_t), p
            )
        if self.method == "analytic":
            d1, d2 = mismatch_of(ramp, p)
            self.rho_ = analytic_density(d1, d2, constant_phase(ramp), p)
            self.n_samples_, self.converged_, self.last_rel_change_ = 0, True, 0.0
        else:
            res = average_density(p, ramp, self._mc_config(), n_jobs=self.n_jobs)
            self.rho_ = res.rho
            self.n_samples_ = res.n_samples
            self.converged_ = res.converged
            self.last_rel_change_ = res.last_rel_change
        self.ramp_ = ramp
        self.precession_rate_ = precession_rate(p)
        self.metrics_ = metrics_report(self.rho_)
        return self

    def score(self, X=None, y=None):
        """Concurrence of the fitted state."""
        check_is_fitted(self, "rho_")
        return self.metrics_.concurrence


class MismatchResponse(_CascadeMixin, BaseEstimator):
    """Predict entanglement metrics from rows of ``(d_omega1, d_omega2[, delta_t])``.

    ``predict`` returns columns ``fidelity_phi_plus, fidelity_phi_minus,
    concurrence, purity``.
    """

    def __init__(
        self,
        fss=3.0,
        tau_x=1.0,
        tau_xx=0.5,
        method="analytic",
        seed=0,
        batch_size=10_000,
        rel_tol=1e-6,
        max_samples=100_000_000,
        n_jobs=1,
    ):
        self.fss = fss
        self.tau_x = tau_x
        self.tau_xx = tau_xx
        self.method = method
        self.seed = seed
        self.batch_size = batch_size
        self.rel_tol = rel_tol
        self.max_samples = max_samples
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        self._check_method()
        self.cascade_ = self._cascade()
        self.mc_config_ = self._mc_config()
        self.precession_rate_ = precession_rate(self.cascade_)
        if X is not None:
            self.n_features_in_ = check_mismatch_array(X).shape[1]
        return self

    def _evaluate(self, X):
        check_is_fitted(self, "cascade_")
        rows = check_mismatch_array(X)
        for d1, d2, dt in rows:
            yield evaluate_mismatch(
                self.cascade_,
                MismatchSpec(d1, d2, dt),
                self.mc_config_,
                self.method,
                self.n_jobs,
            )

    def predict(self, X) -> np.ndarray:
        return np.array(
            [[getattr(row, name) for name in METRIC_NAMES] for row, _ in self._evaluate(X)]
        )

    def predict_density(self, X) -> np.ndarray:
        """Averaged density matrices, shape (n, 4, 4)."""
        return np.stack([np.array(rho.m) for _, rho in self._evaluate(X)])

    def get_feature_names_out(self, input_features=None):
        return np.array(METRIC_NAMES, dtype=object)


class EntanglementMetrics(TransformerMixin, BaseEstimator):
    """Stateless transformer from density matrices to metric columns.

    Output columns are one fidelity per entry of ``targets`` followed by
    concurrence and purity.
    """

    def __init__(self, targets=("PhiPlus", "PhiMinus")):
        self.targets = targets

    def fit(self, X=None, y=None):
        self.targets_ = tuple(BellTarget(t) for t in self.targets)
        if X is not None:
            check_density_stack(X)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "targets_")
        stack = check_density_stack(X)
        out = np.empty((len(stack), len(self.targets_) + 2))
        for i, rho in enumerate(stack):
            for j, t in enumerate(self.targets_):
                out[i, j] = fidelity(rho, t)
            out[i, -2] = concurrence(rho)
            out[i, -1] = purity(rho)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "targets_")
        names = [f"fidelity_{t.value}" for t in self.targets_]
        return np.array(names + ["concurrence", "purity"], dtype=object)
