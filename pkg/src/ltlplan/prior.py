"""Option priors: uniform, manual preference, and a fitted-Q linear model.

The planner consumes a prior only through `predict` (a distribution over
the applicable options) and `rollout_policy` (a seeded sample from it),
so the three variants are interchangeable. The learned variant fits one
ridge-regularized linear Q head per option by fitted Q-iteration over
option-boundary transitions and turns Q values into probabilities with
a softmax.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .features import N_FEATURES
from .options import OPTION_ORDER

FEATURE_SCHEMA_VERSION = 1
DEFAULT_TEMPERATURE = 0.5
DEFAULT_MANUAL_PREFERENCES = {"Default": 10.0}
MANUAL_BASE_WEIGHT = 1.0
# uniform floor mixed into learned predictions: fitted Q values span
# hundreds of reward units, so a bare softmax saturates to one-hot and
# starves both widening and rollout sampling of alternatives
LEARNED_UNIFORM_MIX = 0.1


class EmptyApplicableSet(ValueError):
    pass


class DegenerateRegression(RuntimeError):
    pass


@dataclass(frozen=True)
class Transition:
    """One option-boundary sample: features at option start, the option
    taken, the return accumulated until the option ended, the features
    at that point, and whether the episode ended there."""
    features: tuple
    option: str
    reward: float
    next_features: tuple
    terminal: bool


@dataclass
class OptionPrior:
    kind: str = "uniform"  # uniform | manual | learned
    preferences: dict[str, float] = field(default_factory=dict)
    weights: dict[str, list[float]] = field(default_factory=dict)
    temperature: float = DEFAULT_TEMPERATURE

    def q_value(self, option: str, features) -> float:
        w = self.weights.get(option)
        if w is None:
            return 0.0
        total = w[-1]  # bias term rides in the last slot
        for wi, fi in zip(w, features):
            total += wi * fi
        return total


def uniform_prior() -> OptionPrior:
    return OptionPrior(kind="uniform")


def manual_prior(preferences: dict[str, float] | None = None) -> OptionPrior:
    prefs = dict(preferences or DEFAULT_MANUAL_PREFERENCES)
    return OptionPrior(kind="manual", preferences=prefs)


def predict(prior: OptionPrior, features, applicable) -> dict[str, float]:
    """Distribution over `applicable` options (normalized, deterministic)."""
    names = [n for n in OPTION_ORDER if n in applicable]
    if not names:
        raise EmptyApplicableSet("no applicable options")
    if prior.kind == "uniform":
        p = 1.0 / len(names)
        return {n: p for n in names}
    if prior.kind == "manual":
        raw = [prior.preferences.get(n, MANUAL_BASE_WEIGHT) for n in names]
        total = sum(raw)
        return {n: r / total for n, r in zip(names, raw)}
    if prior.kind == "learned":
        tau = prior.temperature
        scores = [prior.q_value(n, features) / tau for n in names]
        top = max(scores)
        exps = [math.exp(s - top) for s in scores]
        total = sum(exps)
        mix = LEARNED_UNIFORM_MIX
        floor = mix / len(names)
        return {n: (1.0 - mix) * e / total + floor for n, e in zip(names, exps)}
    raise ValueError(f"unknown prior kind {prior.kind!r}")


def rollout_policy(prior: OptionPrior, features, applicable,
                   rng: random.Random) -> str:
    """Sample an option from the prior's distribution; deterministic in rng."""
    dist = predict(prior, features, applicable)
    pick = rng.random()
    acc = 0.0
    last = None
    for name, p in dist.items():
        acc += p
        last = name
        if pick < acc:
            return name
    return last


def train_prior(data: list[Transition], iterations: int = 20,
                gamma: float = 0.95, tau: float = DEFAULT_TEMPERATURE,
                lam: float = 1e-3) -> OptionPrior:
    """Fitted Q-iteration with per-option ridge regression.

    Targets are r + gamma * max_o' Q(f', o') with terminal transitions
    bootstrapping to zero. Training stops early if the squared error on
    the training set stops decreasing.
    """
    if not data:
        raise ValueError("empty dataset")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must be in [0, 1]")

    by_option: dict[str, list[int]] = {}
    for i, t in enumerate(data):
        by_option.setdefault(t.option, []).append(i)

    n = len(data)
    dim = len(data[0].features) + 1
    X = np.ones((n, dim))
    X_next = np.ones((n, dim))
    rewards = np.array([t.reward for t in data])
    live = np.array([0.0 if t.terminal else 1.0 for t in data])
    for i, t in enumerate(data):
        X[i, :-1] = t.features
        X_next[i, :-1] = t.next_features

    weights = {name: np.zeros(dim) for name in by_option}
    prev_loss = math.inf
    prev_weights = weights
    for _ in range(max(1, iterations)):
        if weights:
            q_next = np.column_stack([X_next @ weights[name] for name in weights])
            bootstrap = q_next.max(axis=1)
        else:
            bootstrap = np.zeros(n)
        targets = rewards + gamma * live * bootstrap

        new_weights = {}
        for name, idxs in by_option.items():
            A = X[idxs]
            y = targets[idxs]
            gram = A.T @ A + lam * np.eye(dim)
            if lam == 0.0 and np.linalg.matrix_rank(gram) < dim:
                raise DegenerateRegression(
                    f"design matrix for option {name} is rank-deficient")
            new_weights[name] = np.linalg.solve(gram, A.T @ y)

        q_fit = np.array([X[i] @ new_weights[data[i].option] for i in range(n)])
        loss = float(np.mean((q_fit - targets) ** 2))
        if loss > prev_loss + 1e-12:
            weights = prev_weights
            break
        prev_loss = loss
        prev_weights = new_weights
        weights = new_weights

    packed = {name: [float(v) for v in w] for name, w in weights.items()}
    return OptionPrior(kind="learned", weights=packed, temperature=tau)


def save_prior(prior: OptionPrior, path: str) -> None:
    if prior.kind != "learned":
        raise ValueError("only learned priors are serialized")
    payload = {
        "kind": prior.kind,
        "temperature": prior.temperature,
        "feature_schema": FEATURE_SCHEMA_VERSION,
        "n_features": N_FEATURES,
        "weights": prior.weights,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_prior(path: str) -> OptionPrior:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("feature_schema") != FEATURE_SCHEMA_VERSION \
            or payload.get("n_features") != N_FEATURES:
        raise ValueError(
            f"prior at {path} was trained against a different feature schema")
    unknown = set(payload["weights"]) - set(OPTION_ORDER)
    if unknown:
        raise ValueError(f"prior mentions unknown options: {sorted(unknown)}")
    return OptionPrior(kind="learned", weights=payload["weights"],
                       temperature=float(payload["temperature"]))
