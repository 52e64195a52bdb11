"""Dense ReLU network with hand-written backprop and an Adam optimizer.

Everything is float64. The network is small (a few dense layers) and is
used as the Q-function approximator, so the code favours clarity and
exact gradients over raw throughput.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import ConfigError, ContractError, NumericError, ShapeError

__all__ = ["Mlp", "Gradients", "Adam", "save_snapshot", "load_snapshot"]

_MAGIC = b"CSDQNMLP"
_VERSION = 1


def _layout(sizes):
    """Offsets of each weight matrix and bias vector inside one flat buffer."""
    shapes = [(o, i) for i, o in zip(sizes[:-1], sizes[1:])] + [(o,) for o in sizes[1:]]
    total = sum(int(np.prod(s)) for s in shapes)
    return shapes, total


def _views(flat, shapes):
    out, off = [], 0
    for shape in shapes:
        n = int(np.prod(shape))
        out.append(flat[off:off + n].reshape(shape))
        off += n
    half = len(shapes) // 2
    return out[:half], out[half:]


class Gradients:
    """Per-layer gradients, shaped exactly like the owning network's parameters.

    ``flat`` is the single buffer the per-layer arrays are views of.
    """

    def __init__(self, weights, biases, flat=None):
        if flat is None:
            arrays = [*weights, *biases]
            flat = np.concatenate([np.ravel(a) for a in arrays]).astype(np.float64)
            weights, biases = _views(flat, [np.shape(a) for a in arrays])
        self.flat = flat
        self.weights = list(weights)
        self.biases = list(biases)

    def arrays(self):
        return [*self.weights, *self.biases]

    def all_finite(self) -> bool:
        return bool(np.isfinite(self.flat).all())


class Mlp:
    """Feed-forward network, ReLU on hidden layers and identity on the output.

    Parameters
    ----------
    layer_sizes : sequence of int
        ``[n_inputs, hidden..., n_outputs]``; at least two entries.
    seed : int or numpy Generator, optional
        Source of the He-uniform weight draw. Biases start at zero.
    """

    def __init__(self, layer_sizes, seed=None):
        sizes = list(layer_sizes)
        if len(sizes) < 2:
            raise ConfigError(f"need at least input and output sizes, got {sizes}")
        if not all(isinstance(s, (int, np.integer)) and s > 0 for s in sizes):
            raise ConfigError(f"layer sizes must be positive integers, got {sizes}")
        sizes = [int(s) for s in sizes]
        self.layer_sizes = sizes
        self._shapes, total = _layout(sizes)
        # all parameters live in one buffer; weights/biases are views into it
        self.flat = np.zeros(total)
        self.weights, self.biases = _views(self.flat, self._shapes)
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        for w in self.weights:
            limit = np.sqrt(6.0 / w.shape[1])
            w[...] = rng.uniform(-limit, limit, size=w.shape)

    @property
    def n_inputs(self) -> int:
        return self.layer_sizes[0]

    @property
    def n_outputs(self) -> int:
        return self.layer_sizes[-1]

    def parameters(self) -> list[np.ndarray]:
        return [*self.weights, *self.biases]

    def _check_input(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2) or x.shape[-1] != self.n_inputs:
            raise ShapeError(f"expected input of length {self.n_inputs}, got shape {x.shape}")
        if not np.isfinite(x).all():
            raise NumericError("non-finite network input")
        return x

    def forward(self, x) -> np.ndarray:
        """Q-values for one state (1-D input) or a batch (2-D, one row per state)."""
        h = self._check_input(x)
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w.T + b
            if i < last:
                h = np.maximum(h, 0.0)
        return h

    __call__ = forward

    def backward(self, x, targets, action_mask, validate=True):
        """Squared error on the masked (taken) outputs and its exact gradient.

        ``x`` is one state or a batch. ``targets`` holds one real per sample and
        ``action_mask`` one one-hot row per sample. The loss is averaged over
        the batch; unmasked outputs contribute nothing. ``validate=False`` skips
        the argument checks for callers that build the mask themselves.
        """
        if validate:
            x = self._check_input(x)
        x2 = x[None, :] if x.ndim == 1 else x
        mask = np.asarray(action_mask, dtype=np.float64).reshape(x2.shape[0], -1)
        targets = np.asarray(targets, dtype=np.float64).reshape(-1)
        if validate:
            if mask.shape[1] != self.n_outputs or targets.shape[0] != x2.shape[0]:
                raise ShapeError(
                    f"mask {mask.shape} / targets {targets.shape} do not fit a batch of "
                    f"{x2.shape[0]} with {self.n_outputs} outputs"
                )
            if not (((mask == 0.0) | (mask == 1.0)).all() and (mask.sum(axis=1) == 1).all()):
                raise ContractError("action mask must have exactly one active entry per sample")

        # forward pass keeping pre-activations
        acts = [x2]
        pre = []
        h = x2
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w.T + b
            pre.append(z)
            h = np.maximum(z, 0.0) if i < last else z
            acts.append(h)

        n = x2.shape[0]
        chosen = (h * mask).sum(axis=1)
        err = chosen - targets
        loss = float(np.mean(err * err))
        delta = (2.0 / n) * err[:, None] * mask

        flat = np.empty_like(self.flat)
        gw, gb = _views(flat, self._shapes)
        for i in range(last, -1, -1):
            np.matmul(delta.T, acts[i], out=gw[i])
            np.sum(delta, axis=0, out=gb[i])
            if i > 0:
                # ReLU subgradient at exactly 0 is taken as 0
                delta = (delta @ self.weights[i]) * (pre[i - 1] > 0.0)
        grads = Gradients(gw, gb, flat)
        if not np.isfinite(loss) or not grads.all_finite():
            raise NumericError(f"non-finite loss or gradient (loss={loss})")
        return loss, grads

    def copy(self) -> "Mlp":
        other = Mlp.__new__(Mlp)
        other.layer_sizes = list(self.layer_sizes)
        other._shapes = self._shapes
        other.flat = self.flat.copy()
        other.weights, other.biases = _views(other.flat, self._shapes)
        return other

    def load_parameters_from(self, other: "Mlp") -> None:
        """Overwrite this network's parameters with an exact copy of ``other``'s."""
        if other.layer_sizes != self.layer_sizes:
            raise ShapeError(f"layer sizes differ: {other.layer_sizes} vs {self.layer_sizes}")
        self.flat[...] = other.flat

    def max_abs_difference(self, other: "Mlp") -> float:
        return float(np.max(np.abs(self.flat - other.flat)))

    def check_finite(self) -> None:
        if not np.isfinite(self.flat).all():
            raise NumericError("network parameters contain NaN or Inf")

    def __repr__(self):
        return f"Mlp(layer_sizes={self.layer_sizes})"


@dataclass
class Adam:
    """Adam with bias correction. Holds its own moment accumulators."""

    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: np.ndarray | None = field(default=None, repr=False)  # first moments, flat
    v: np.ndarray | None = field(default=None, repr=False)  # second moments, flat

    def step(self, net: Mlp, grads: Gradients) -> None:
        if [g.shape for g in grads.arrays()] != [p.shape for p in net.parameters()]:
            raise ShapeError("gradient shapes do not match network parameters")
        g = grads.flat
        if not np.isfinite(g).all():
            raise NumericError("non-finite gradient passed to Adam")
        if self.m is None:
            self.m = np.zeros_like(net.flat)
            self.v = np.zeros_like(net.flat)
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        self.m *= self.beta1
        self.m += (1.0 - self.beta1) * g
        self.v *= self.beta2
        self.v += (1.0 - self.beta2) * (g * g)
        net.flat -= self.learning_rate * (self.m / bc1) / (np.sqrt(self.v / bc2) + self.eps)
        net.check_finite()


def save_snapshot(net: Mlp, path) -> None:
    """Write layer sizes and row-major float64 parameters to a binary file."""
    Path(path).write_bytes(snapshot_bytes(net))


def snapshot_bytes(net: Mlp) -> bytes:
    sizes = net.layer_sizes
    head = _MAGIC + struct.pack(f"<II{len(sizes)}I", _VERSION, len(sizes), *sizes)
    body = b"".join(np.ascontiguousarray(p, dtype="<f8").tobytes() for p in net.parameters())
    return head + body


def load_snapshot(path_or_bytes) -> Mlp:
    data = path_or_bytes if isinstance(path_or_bytes, bytes) else Path(path_or_bytes).read_bytes()
    if not data.startswith(_MAGIC):
        raise ContractError("not a network snapshot (bad magic)")
    off = len(_MAGIC)
    version, n = struct.unpack_from("<II", data, off)
    if version != _VERSION:
        raise ContractError(f"unsupported snapshot version {version}")
    off += 8
    sizes = list(struct.unpack_from(f"<{n}I", data, off))
    off += 4 * n
    net = Mlp(sizes, seed=0)
    for p in net.parameters():
        count = p.size
        p[...] = np.frombuffer(data, dtype="<f8", count=count, offset=off).reshape(p.shape)
        off += 8 * count
    if off != len(data):
        raise ContractError("trailing bytes in snapshot")
    return net
