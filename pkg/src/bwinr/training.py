"""Adam training loop with exponential learning-rate decay.

One full-batch step per epoch: render the network over the task's
coordinate grid, push the rendering through the task's linear operator,
take the MSE against the measurements, and backpropagate through operator
and network. Weight decay enters as an extra 2*lambda*w gradient on
weight matrices only; biases are never regularized.

The learning rate follows eta(t) = eta0 * r^(t/T). Runs are bit-for-bit
reproducible from the seed, and the log serializes to a fixed CSV schema
(``epoch,loss,psnr,lr,vnorm_total,feat_cond``).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .activations import Activation, positional_encoding
from .diagnostics import feature_gram_condition, psnr, variation_norm_deep
from .errors import (
    ConfigurationError,
    DivergenceError,
    NumericalError,
    ShapeError,
    UnsupportedActivationError,
)
from .network import backward, forward, init_network, mlp_specs

DIVERGENCE_THRESHOLD = 1e12

LOG_CSV_HEADER = "epoch,loss,psnr,lr,vnorm_total,feat_cond"


@dataclass(frozen=True)
class TrainConfig:
    """Architecture, optimizer schedule and diagnostics for one run."""

    activation: Activation
    epochs: int
    lr0: float
    decay: float = 0.1
    width: int = 300
    depth: int = 3
    weight_decay: float = 0.0
    seed: int = 0
    log_every: int | None = None       # default: max(1, epochs // 100)
    pe_levels: int | None = None       # Fourier-encode inputs when set
    target_loss: float | None = None   # early stop at this training loss
    track_feature_condition: bool = False
    feature_layer: int | None = None   # default: last hidden layer
    task_label: str = ""

    def __post_init__(self):
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")
        if not self.lr0 > 0:
            raise ConfigurationError(f"lr0 must be positive, got {self.lr0}")
        if not 0 < self.decay <= 1:
            raise ConfigurationError(
                f"decay must be in (0, 1], got {self.decay}"
            )
        if self.weight_decay < 0:
            raise ConfigurationError(
                f"weight_decay must be >= 0, got {self.weight_decay}"
            )
        if self.width < 1 or self.depth < 1:
            raise ConfigurationError(
                f"width/depth must be >= 1, got {self.width}/{self.depth}"
            )

    @property
    def diagnostic_period(self):
        if self.log_every is not None:
            return max(1, self.log_every)
        return max(1, self.epochs // 100)


def lr_at(cfg, t):
    """eta0 * r^(t/T); constant eta0 for zero-epoch configs."""
    if cfg.epochs == 0:
        return cfg.lr0
    return cfg.lr0 * cfg.decay ** (t / cfg.epochs)


@dataclass
class AdamState:
    m_weights: list
    m_biases: list
    v_weights: list
    v_biases: list
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def init_adam_state(params):
    return AdamState(
        m_weights=[np.zeros_like(w) for w in params.weights],
        m_biases=[np.zeros_like(b) for b in params.biases],
        v_weights=[np.zeros_like(w) for w in params.weights],
        v_biases=[np.zeros_like(b) for b in params.biases],
    )


def _adam_update(theta, g, m, v, state, t, lr):
    if not np.all(np.isfinite(g)):
        raise NumericalError("non-finite gradient encountered")
    m_new = state.beta1 * m + (1.0 - state.beta1) * g
    v_new = state.beta2 * v + (1.0 - state.beta2) * g * g
    step_size = lr * math.sqrt(1.0 - state.beta2**t) / (1.0 - state.beta1**t)
    theta_new = theta - step_size * m_new / (np.sqrt(v_new) + state.eps)
    return theta_new, m_new, v_new


def adam_step(params, grads, state, lr, weight_decay=0.0):
    """One bias-corrected Adam step; returns fresh (params, state).

    ``weight_decay`` adds 2*lambda*w to each weight gradient (biases are
    left unregularized).
    """
    t = state.step + 1
    new = params.copy()
    mw, vw, mb, vb = [], [], [], []
    for i, (w, gw) in enumerate(zip(params.weights, grads.weights)):
        if weight_decay:
            gw = gw + 2.0 * weight_decay * w
        w_new, m_new, v_new = _adam_update(
            w, gw, state.m_weights[i], state.v_weights[i], state, t, lr
        )
        new.weights[i] = w_new
        mw.append(m_new)
        vw.append(v_new)
    for i, (b, gb) in enumerate(zip(params.biases, grads.biases)):
        b_new, m_new, v_new = _adam_update(
            b, gb, state.m_biases[i], state.v_biases[i], state, t, lr
        )
        new.biases[i] = b_new
        mb.append(m_new)
        vb.append(v_new)
    new_state = AdamState(
        m_weights=mw, m_biases=mb, v_weights=vw, v_biases=vb, step=t,
        beta1=state.beta1, beta2=state.beta2, eps=state.eps,
    )
    return new, new_state


@dataclass(frozen=True)
class LogEntry:
    epoch: int
    loss: float
    psnr: float | None
    lr: float
    vnorm_total: float | None = None
    vnorm_layers: tuple | None = None
    feat_cond: float | None = None
    feat_cond_floored: bool | None = None


def _field_str(value):
    if value is None:
        return ""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return repr(float(value))


def _field_parse(text):
    if text == "":
        return None
    if text == "inf":
        return math.inf
    return float(text)


@dataclass
class TrainLog:
    entries: list = field(default_factory=list)

    def to_csv(self):
        lines = [LOG_CSV_HEADER]
        for e in self.entries:
            lines.append(",".join([
                str(e.epoch),
                _field_str(e.loss),
                _field_str(e.psnr),
                _field_str(e.lr),
                _field_str(e.vnorm_total),
                _field_str(e.feat_cond),
            ]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text):
        lines = [ln for ln in text.splitlines() if ln]
        if not lines or lines[0] != LOG_CSV_HEADER:
            raise ShapeError("unrecognized training-log CSV header")
        log = cls()
        for ln in lines[1:]:
            epoch, loss, snr, lr, vnorm, cond = ln.split(",")
            log.entries.append(LogEntry(
                epoch=int(epoch),
                loss=_field_parse(loss),
                psnr=_field_parse(snr),
                lr=_field_parse(lr),
                vnorm_total=_field_parse(vnorm),
                feat_cond=_field_parse(cond),
            ))
        return log


def prepare_inputs(cfg, task):
    """Network inputs for the task, Fourier-encoded when configured."""
    X = np.asarray(task.coords, dtype=float)
    if cfg.pe_levels is not None:
        X = positional_encoding(X, cfg.pe_levels)
    return X


def build_network(cfg, task):
    """Fresh network matching the task's input dimension."""
    X = prepare_inputs(cfg, task)
    sizes = [X.shape[1]] + [cfg.width] * cfg.depth + [1]
    return init_network(mlp_specs(sizes, cfg.activation), cfg.seed), X


def _loss_and_rendered(params, X, task):
    Y, trace = forward(params, X)
    rendered = Y.reshape(task.render_shape)
    out = task.operator.apply(rendered)
    resid = out - task.target
    loss = float(np.mean(resid * resid))
    return loss, resid, rendered, trace


def _diagnostics_entry(cfg, task, params, epoch, loss, lr, rendered):
    snr = None
    if task.reference is not None:
        snr = psnr(task.reference, rendered)
    vnorm_total = None
    vnorm_layers = None
    try:
        report = variation_norm_deep(params)
        vnorm_total, vnorm_layers = report.total, report.layers
    except UnsupportedActivationError:
        pass
    feat = floored = None
    if cfg.track_feature_condition:
        layer = cfg.feature_layer
        if layer is None:
            layer = len(params.specs) - 2
        X = prepare_inputs(cfg, task)
        cond = feature_gram_condition(params, X, layer)
        feat, floored = cond.value, cond.floored
    return LogEntry(
        epoch=epoch, loss=loss, psnr=snr, lr=lr,
        vnorm_total=vnorm_total, vnorm_layers=vnorm_layers,
        feat_cond=feat, feat_cond_floored=floored,
    )


def train(cfg, task):
    """Run the configured fit against ``task``; returns (params, log).

    Deterministic in ``cfg.seed``. Diagnostics are logged every
    ``cfg.diagnostic_period`` epochs and once more at the final state.
    Raises DivergenceError (log attached) if the loss blows past 1e12.
    """
    params, X = build_network(cfg, task)
    state = init_adam_state(params)
    log = TrainLog()
    period = cfg.diagnostic_period
    epochs_run = 0
    for t in range(cfg.epochs):
        loss, resid, rendered, trace = _loss_and_rendered(params, X, task)
        if not math.isfinite(loss) or loss > DIVERGENCE_THRESHOLD:
            raise DivergenceError(
                f"loss diverged at epoch {t}: {loss:.3e}", log=log
            )
        lr = lr_at(cfg, t)
        if t % period == 0:
            log.entries.append(
                _diagnostics_entry(cfg, task, params, t, loss, lr, rendered)
            )
        if cfg.target_loss is not None and loss <= cfg.target_loss:
            break
        d_rendered = task.operator.vjp((2.0 / resid.size) * resid)
        grads = backward(params, trace, d_rendered.reshape(-1, 1))
        params, state = adam_step(params, grads, state, lr, cfg.weight_decay)
        epochs_run = t + 1
    loss, _, rendered, _ = _loss_and_rendered(params, X, task)
    if not math.isfinite(loss) or loss > DIVERGENCE_THRESHOLD:
        raise DivergenceError(
            f"loss diverged at epoch {epochs_run}: {loss:.3e}", log=log
        )
    if not log.entries or log.entries[-1].epoch != epochs_run:
        log.entries.append(_diagnostics_entry(
            cfg, task, params, epochs_run, loss, lr_at(cfg, epochs_run), rendered
        ))
    return params, log
