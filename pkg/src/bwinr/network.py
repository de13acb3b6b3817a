"""Coordinate MLP with hand-rolled reverse-mode gradients.

The model is a fixed-topology fully connected network: every hidden layer
applies one activation kind (with its scale) and the output layer is
linear. Forward passes record the per-layer tensors needed for an exact
backward pass; gradients are validated against finite differences in the
test suite (``grad_check``).

Checkpoints use a versioned plain-text format (header ``BWINR1``) that
round-trips float64 values exactly; see ``save_checkpoint``.
"""

from dataclasses import dataclass

import numpy as np

from .activations import Activation, apply
from .errors import ConfigurationError, InvalidInputError, ShapeError

CHECKPOINT_MAGIC = "BWINR1"

# Activation-argument value at the center of the wavelet bump, used to
# anchor wavelet supports inside the data domain at initialization.
_WAVELET_CENTER = 1.5


@dataclass(frozen=True)
class LayerSpec:
    in_dim: int
    out_dim: int
    activation: Activation

    def __post_init__(self):
        if self.in_dim < 1 or self.out_dim < 1:
            raise ConfigurationError(
                f"layer dims must be >= 1, got {self.in_dim}x{self.out_dim}"
            )


def mlp_specs(sizes, activation):
    """Hidden layers with ``activation``, linear output layer.

    ``sizes`` lists the layer widths input-first, e.g. [2, 300, 300, 300, 1].
    """
    if len(sizes) < 2:
        raise ConfigurationError("need at least an input and an output size")
    specs = [
        LayerSpec(sizes[i], sizes[i + 1], activation)
        for i in range(len(sizes) - 2)
    ]
    specs.append(LayerSpec(sizes[-2], sizes[-1], Activation("identity")))
    return specs


@dataclass
class NetworkParams:
    """All weights/biases plus the layer specs and the seed that built them.

    ``weights[l]`` has shape (out, in); row k is neuron k's input weight.
    ``biases[l]`` has shape (out,). Treated as immutable during training:
    optimizer steps produce fresh arrays.
    """

    specs: tuple
    weights: list
    biases: list
    seed: int

    @property
    def hidden_count(self):
        return len(self.specs) - 1

    def copy(self):
        return NetworkParams(
            specs=self.specs,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            seed=self.seed,
        )


@dataclass
class Gradients:
    weights: list
    biases: list


@dataclass
class ForwardTrace:
    """Per-layer tensors captured by ``forward`` for use in ``backward``."""

    inputs: np.ndarray           # (n, in_dim) batch fed to the first layer
    pre: list                    # (n, out_l) pre-activations per layer
    post: list                   # (n, out_l) post-activations per layer
    deriv: list                  # (n, out_l) activation derivatives per layer


def _validate_specs(specs):
    specs = tuple(specs)
    if not specs:
        raise ConfigurationError("empty layer spec list")
    for prev, cur in zip(specs, specs[1:]):
        if prev.out_dim != cur.in_dim:
            raise ConfigurationError(
                f"layer dims do not chain: {prev.out_dim} -> {cur.in_dim}"
            )
    return specs


def init_network(specs, seed):
    """Deterministic initialization from ``seed``.

    Weights are uniform on +-sqrt(6/in_dim). Hidden biases are uniform on
    [-1, 1], except for wavelet layers where each neuron's bias is chosen
    so the center of its compact support is attained at an anchor point
    drawn uniformly from [-1, 1]^in: with uniform biases a sizable
    fraction of wavelet neurons would never activate on the data domain
    (their support misses it entirely) and stay dead through training.
    Output biases start at zero.
    """
    specs = _validate_specs(specs)
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    last = len(specs) - 1
    for idx, spec in enumerate(specs):
        bound = np.sqrt(6.0 / spec.in_dim)
        w = rng.uniform(-bound, bound, size=(spec.out_dim, spec.in_dim))
        kind = spec.activation.kind
        if idx == last or kind == "identity":
            b = np.zeros(spec.out_dim)
        elif kind == "bwrelu":
            anchors = rng.uniform(-1.0, 1.0, size=(spec.out_dim, spec.in_dim))
            b = _WAVELET_CENTER / spec.activation.scale - np.sum(
                w * anchors, axis=1
            )
        else:
            b = rng.uniform(-1.0, 1.0, size=spec.out_dim)
        weights.append(w)
        biases.append(b)
    return NetworkParams(specs=specs, weights=weights, biases=biases, seed=seed)


def forward(params, X):
    """Network output and the trace needed to backpropagate through it."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeError(f"input batch must be 2-D, got ndim={X.ndim}")
    if X.shape[1] != params.specs[0].in_dim:
        raise ShapeError(
            f"input dim {X.shape[1]} != first layer in_dim "
            f"{params.specs[0].in_dim}"
        )
    a = X
    pre, post, deriv = [], [], []
    for spec, w, b in zip(params.specs, params.weights, params.biases):
        z = a @ w.T + b
        a, d = apply(spec.activation, z)
        pre.append(z)
        post.append(a)
        deriv.append(d)
    return a, ForwardTrace(inputs=X, pre=pre, post=post, deriv=deriv)


def backward(params, trace, dY):
    """Gradients of sum(dY * Y) w.r.t. every weight and bias.

    ``trace`` must come from a ``forward`` call on the same architecture
    and batch; mismatched shapes raise InvalidInputError.
    """
    dY = np.asarray(dY, dtype=float)
    n_layers = len(params.weights)
    if len(trace.post) != n_layers or len(trace.deriv) != n_layers:
        raise InvalidInputError("trace layer count does not match params")
    for spec, a in zip(params.specs, trace.post):
        if a.shape != (trace.inputs.shape[0], spec.out_dim):
            raise InvalidInputError("trace shapes do not match params")
    if dY.shape != trace.post[-1].shape:
        raise InvalidInputError(
            f"cotangent shape {dY.shape} != output shape {trace.post[-1].shape}"
        )
    d_weights = [None] * n_layers
    d_biases = [None] * n_layers
    delta = dY * trace.deriv[-1]
    for l in range(n_layers - 1, -1, -1):
        a_in = trace.inputs if l == 0 else trace.post[l - 1]
        d_weights[l] = delta.T @ a_in
        d_biases[l] = delta.sum(axis=0)
        if l > 0:
            delta = (delta @ params.weights[l]) * trace.deriv[l - 1]
    return Gradients(weights=d_weights, biases=d_biases)


def mse_and_gradients(params, X, targets):
    """Mean-squared-error loss and its exact parameter gradients."""
    targets = np.asarray(targets, dtype=float)
    Y, trace = forward(params, X)
    if Y.shape != targets.shape:
        raise ShapeError(f"output shape {Y.shape} != target shape {targets.shape}")
    resid = Y - targets
    loss = float(np.mean(resid * resid))
    grads = backward(params, trace, (2.0 / resid.size) * resid)
    return loss, grads


def grad_check(params, X, targets, h=1e-5):
    """Max relative error of analytic MSE gradients vs central differences.

    Intended for small networks (a few hundred parameters); each parameter
    costs two forward passes.
    """
    X = np.asarray(X, dtype=float)
    targets = np.asarray(targets, dtype=float)
    _, grads = mse_and_gradients(params, X, targets)

    def loss_at(p):
        Y, _ = forward(p, X)
        r = Y - targets
        return float(np.mean(r * r))

    worst = 0.0
    probe = params.copy()
    for arrays, g_arrays in (
        (probe.weights, grads.weights),
        (probe.biases, grads.biases),
    ):
        for arr, g in zip(arrays, g_arrays):
            flat = arr.reshape(-1)
            g_flat = g.reshape(-1)
            for i in range(flat.size):
                orig = flat[i]
                flat[i] = orig + h
                up = loss_at(probe)
                flat[i] = orig - h
                down = loss_at(probe)
                flat[i] = orig
                fd = (up - down) / (2.0 * h)
                err = abs(g_flat[i] - fd) / max(abs(g_flat[i]), 1e-8)
                worst = max(worst, err)
    return worst


def _format_scale(activation):
    return "-" if activation.scale is None else repr(float(activation.scale))


def save_checkpoint(params, path):
    """Write params as versioned text; float64 values round-trip exactly."""
    lines = [CHECKPOINT_MAGIC, f"seed {params.seed}", f"layers {len(params.specs)}"]
    for spec in params.specs:
        lines.append(
            f"layer {spec.in_dim} {spec.out_dim} "
            f"{spec.activation.kind} {_format_scale(spec.activation)}"
        )
    for l, (w, b) in enumerate(zip(params.weights, params.biases)):
        lines.append(f"tensor W{l}")
        lines.extend(" ".join(repr(v) for v in row) for row in w.tolist())
        lines.append(f"tensor b{l}")
        lines.append(" ".join(repr(v) for v in b.tolist()))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_checkpoint(path):
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CHECKPOINT_MAGIC:
        raise InvalidInputError(
            f"{path}: not a {CHECKPOINT_MAGIC} checkpoint"
        )
    seed = int(lines[1].split()[1])
    n_layers = int(lines[2].split()[1])
    specs = []
    for i in range(n_layers):
        _, in_dim, out_dim, kind, scale = lines[3 + i].split()
        act = Activation(kind, None if scale == "-" else float(scale))
        specs.append(LayerSpec(int(in_dim), int(out_dim), act))
    pos = 3 + n_layers
    weights, biases = [], []
    for l, spec in enumerate(specs):
        if lines[pos] != f"tensor W{l}":
            raise InvalidInputError(f"{path}: expected 'tensor W{l}' at line {pos + 1}")
        pos += 1
        w = np.array(
            [[float(v) for v in lines[pos + r].split()] for r in range(spec.out_dim)]
        )
        pos += spec.out_dim
        if lines[pos] != f"tensor b{l}":
            raise InvalidInputError(f"{path}: expected 'tensor b{l}' at line {pos + 1}")
        pos += 1
        b = np.array([float(v) for v in lines[pos].split()])
        pos += 1
        if w.shape != (spec.out_dim, spec.in_dim) or b.shape != (spec.out_dim,):
            raise InvalidInputError(f"{path}: tensor shape mismatch in layer {l}")
        weights.append(w)
        biases.append(b)
    return NetworkParams(
        specs=tuple(specs), weights=weights, biases=biases, seed=seed
    )
