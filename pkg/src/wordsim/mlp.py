"""Multilayer perceptron regressor: tanh hidden layers, linear output,
minibatch SGD on mean squared error.

The learning rate halves whenever the validation loss stops improving by
``tol`` for ``patience`` epochs; training stops once the rate falls below
``lr_min`` or the epoch cap is reached, and the best-validation weights are
restored. Everything is driven by one seeded RNG, so a fit is reproducible
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, WordsimError


@dataclass
class MlpParams:
    hidden: tuple = (10, 10)
    learning_rate: float = 0.001
    max_epochs: int = 500
    batch_size: int = 200
    tol: float = 1e-4
    patience: int = 10
    validation_fraction: float = 0.1
    lr_min: float = 1e-6

    def __post_init__(self):
        self.hidden = tuple(int(h) for h in self.hidden)
        if not 1 <= len(self.hidden) <= 2 or any(h < 1 for h in self.hidden):
            raise WordsimError("hidden must be 1 or 2 positive layer sizes")
        if self.learning_rate <= 0 or self.max_epochs < 1:
            raise WordsimError("bad learning_rate or max_epochs")
        if not 0 < self.validation_fraction < 1:
            raise WordsimError("validation_fraction must be in (0, 1)")


def init_layers(n_features, hidden, rng):
    """Glorot-uniform weight matrices and zero biases."""
    sizes = [n_features, *hidden, 1]
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        b = np.zeros(fan_out)
        layers.append((w, b))
    return layers


def forward(layers, X):
    """Activations per layer; hidden layers tanh, output linear."""
    activations = [X]
    a = X
    for i, (w, b) in enumerate(layers):
        z = a @ w + b
        a = z if i == len(layers) - 1 else np.tanh(z)
        activations.append(a)
    return activations


def loss_and_grads(layers, X, y):
    """Mean-squared-error loss and its gradients w.r.t. every parameter."""
    activations = forward(layers, X)
    pred = activations[-1][:, 0]
    err = pred - y
    n = len(y)
    loss = float(err @ err) / n

    grads = [None] * len(layers)
    delta = (2.0 / n) * err[:, None]
    for i in range(len(layers) - 1, -1, -1):
        a_prev = activations[i]
        grads[i] = (a_prev.T @ delta, delta.sum(axis=0))
        if i > 0:
            w, _b = layers[i]
            delta = (delta @ w.T) * (1.0 - activations[i] ** 2)
    return loss, grads


class MlpModel:
    kind = "mlp"

    def __init__(self, layers, n_features, params, seed, n_epochs, converged):
        self.layers = layers
        self.n_features = n_features
        self.params = params
        self.seed = seed
        self.n_epochs = n_epochs
        self.converged = converged

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise WordsimError(
                f"expected {self.n_features} feature columns, got {X.shape}"
            )
        return forward(self.layers, X)[-1][:, 0]


def fit_mlp(X, y, params=None, seed=0):
    params = params or MlpParams()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise WordsimError("non-finite values in training data")
    n = len(y)
    if X.ndim != 2 or len(X) != n or n < 2:
        raise WordsimError("need a 2-D X with at least 2 rows")

    rng = np.random.default_rng(seed)
    layers = init_layers(X.shape[1], params.hidden, rng)

    perm = rng.permutation(n)
    n_val = min(max(1, int(round(params.validation_fraction * n))), n - 1)
    val_idx, train_idx = perm[:n_val], perm[n_val:]
    X_val, y_val = X[val_idx], y[val_idx]
    X_tr, y_tr = X[train_idx], y[train_idx]

    lr = params.learning_rate
    batch = min(params.batch_size, len(train_idx))
    best_loss = np.inf
    best_layers = [(w.copy(), b.copy()) for w, b in layers]
    stall = 0
    epoch = 0
    converged = False
    for epoch in range(1, params.max_epochs + 1):
        order = rng.permutation(len(train_idx))
        for start in range(0, len(order), batch):
            sel = order[start : start + batch]
            # overflow here is the divergence signal, not an error to warn on
            with np.errstate(over="ignore", invalid="ignore"):
                loss, grads = loss_and_grads(layers, X_tr[sel], y_tr[sel])
            if not np.isfinite(loss):
                raise NumericError("MLP training diverged: non-finite loss")
            layers = [
                (w - lr * gw, b - lr * gb)
                for (w, b), (gw, gb) in zip(layers, grads)
            ]
        with np.errstate(over="ignore", invalid="ignore"):
            val_loss, _ = loss_and_grads(layers, X_val, y_val)
        if not np.isfinite(val_loss):
            raise NumericError("MLP training diverged: non-finite loss")
        if best_loss - val_loss > params.tol:
            best_loss = val_loss
            best_layers = [(w.copy(), b.copy()) for w, b in layers]
            stall = 0
        else:
            stall += 1
            if stall >= params.patience:
                lr /= 2.0
                stall = 0
                if lr < params.lr_min:
                    converged = True
                    break

    return MlpModel(
        layers=best_layers,
        n_features=X.shape[1],
        params=params,
        seed=seed,
        n_epochs=epoch,
        converged=converged,
    )
