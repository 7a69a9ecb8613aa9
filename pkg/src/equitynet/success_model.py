"""Success-probability functions P(Y) together with the complementarity strength."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidInputError, KinkReachedError, NegativePerformanceError


def _check_y(y: float) -> float:
    y = float(y)
    if y < 0:
        raise NegativePerformanceError(f"performance must be nonnegative, got {y}")
    return y


@dataclass(frozen=True)
class SuccessModel:
    beta: float

    is_linear = False

    def prob(self, y: float) -> float:
        raise NotImplementedError

    def deriv(self, y: float) -> float:
        raise NotImplementedError

    def second_deriv(self, y: float) -> float:
        raise NotImplementedError

    def with_beta(self, beta: float) -> "SuccessModel":
        return replace(self, beta=beta)

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class CappedLinear(SuccessModel):
    """P(Y) = min(alpha * Y, cap).

    Solvers treat P as exactly linear; asking for a derivative at or past the
    kink ``cap / alpha`` raises :class:`KinkReachedError` instead of silently
    switching to the flat branch.
    """

    alpha: float = 1.0
    cap: float = 1.0 - 1e-12

    is_linear = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise InvalidInputError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.cap < 1:
            raise InvalidInputError(f"cap must lie in (0, 1), got {self.cap}")
        if not self.beta > 0:
            raise InvalidInputError(f"beta must be positive, got {self.beta}")

    @property
    def kink(self) -> float:
        return self.cap / self.alpha

    def check_operative(self, y: float) -> None:
        if y >= self.kink:
            raise KinkReachedError(f"Y={y:.6g} reaches the cap of P at Y={self.kink:.6g}")

    def prob(self, y):
        if np.ndim(y):
            y = np.asarray(y, dtype=float)
            if np.any(y < 0):
                raise NegativePerformanceError("performance must be nonnegative")
            return np.minimum(self.alpha * y, self.cap)
        return min(self.alpha * _check_y(y), self.cap)

    def deriv(self, y):
        self.check_operative(_check_y(y))
        return self.alpha

    def second_deriv(self, y):
        self.check_operative(_check_y(y))
        return 0.0

    def to_config(self):
        return {"family": "capped_linear", "alpha": self.alpha, "cap": self.cap, "beta": self.beta}


@dataclass(frozen=True)
class Saturating(SuccessModel):
    """P(Y) = kappa * (1 - exp(-lam * Y)); strictly concave, range [0, kappa)."""

    kappa: float = 0.9
    lam: float = 1.0

    def __post_init__(self):
        if not 0 < self.kappa < 1:
            raise InvalidInputError(f"kappa must lie in (0, 1), got {self.kappa}")
        if not self.lam > 0:
            raise InvalidInputError(f"lambda must be positive, got {self.lam}")
        if not self.beta > 0:
            raise InvalidInputError(f"beta must be positive, got {self.beta}")

    def prob(self, y):
        if np.ndim(y):
            y = np.asarray(y, dtype=float)
            if np.any(y < 0):
                raise NegativePerformanceError("performance must be nonnegative")
            return -self.kappa * np.expm1(-self.lam * y)
        return -self.kappa * math.expm1(-self.lam * _check_y(y))

    def deriv(self, y):
        return self.kappa * self.lam * math.exp(-self.lam * _check_y(y))

    def second_deriv(self, y):
        return -self.kappa * self.lam**2 * math.exp(-self.lam * _check_y(y))

    def to_config(self):
        return {"family": "saturating", "kappa": self.kappa, "lambda": self.lam, "beta": self.beta}


def model_from_config(cfg: dict) -> SuccessModel:
    """Build a model from ``{"family": "capped_linear" | "saturating", ...}``."""
    if not isinstance(cfg, dict):
        raise InvalidInputError("model config must be a JSON object")
    family = cfg.get("family")
    try:
        if family == "capped_linear":
            return CappedLinear(beta=float(cfg["beta"]), alpha=float(cfg["alpha"]),
                                cap=float(cfg.get("cap", 1.0 - 1e-12)))
        if family == "saturating":
            return Saturating(beta=float(cfg["beta"]), kappa=float(cfg["kappa"]),
                              lam=float(cfg["lambda"]))
    except KeyError as exc:
        raise InvalidInputError(f"model config missing field {exc}") from exc
    raise InvalidInputError(f"unknown success-model family {family!r}")
