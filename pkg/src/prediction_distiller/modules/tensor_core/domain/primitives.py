# src/prediction_distiller/modules/tensor_core/domain/primitives.py
"""
Primitivos diferenciables (forward + backward) sobre numpy.

Arquitectura: Modular Monolith
Capa: Domain
Responsabilidad: Reglas de forma, evaluación y producto vector-jacobiano de
cada OpKind. Los primitivos preservan el dtype de sus entradas (float32 en
producción, float64 en el chequeo por diferencias finitas).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .exceptions import ShapeMismatchError
from .value_objects import OpKind, Tensor

Grads = tuple[Tensor | None, ...]


def _unbroadcast(grad: Tensor, shape: tuple[int, ...]) -> Tensor:
    """Reduce un gradiente broadcast a la forma original del operando."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _require_ndim(x: Tensor, ndim: int, op: str) -> None:
    if x.ndim != ndim:
        raise ShapeMismatchError(f"{op}: se esperaba rango {ndim}, forma {x.shape}")


def _log_softmax(z: Tensor) -> Tensor:
    shifted = z - z.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


class Primitive(ABC):
    """Contrato de un primitivo: forward devuelve (salida, cache)."""

    arity: int = 1

    @abstractmethod
    def forward(
        self, xs: Sequence[Tensor], attrs: Mapping[str, Any]
    ) -> tuple[Tensor, Any]: ...

    @abstractmethod
    def backward(
        self,
        g: Tensor,
        xs: Sequence[Tensor],
        out: Tensor,
        cache: Any,
        attrs: Mapping[str, Any],
        needs: Sequence[bool],
    ) -> Grads: ...


# === Álgebra lineal y convolución ===


class MatMul(Primitive):
    arity = 2

    def forward(self, xs, attrs):
        a, b = xs
        _require_ndim(a, 2, "matmul")
        _require_ndim(b, 2, "matmul")
        if a.shape[1] != b.shape[0]:
            raise ShapeMismatchError(f"matmul: {a.shape} @ {b.shape}")
        return a @ b, None

    def backward(self, g, xs, out, cache, attrs, needs):
        a, b = xs
        return (g @ b.T if needs[0] else None, a.T @ g if needs[1] else None)


class Conv2d(Primitive):
    """Convolución 2-D (NCHW) con stride y zero-padding, vía ventanas deslizantes."""

    arity = 3

    def forward(self, xs, attrs):
        x, w, b = xs
        _require_ndim(x, 4, "conv2d")
        _require_ndim(w, 4, "conv2d")
        if x.shape[1] != w.shape[1] or b.shape != (w.shape[0],):
            raise ShapeMismatchError(
                f"conv2d: entrada {x.shape}, pesos {w.shape}, bias {b.shape}"
            )
        stride, pad = attrs["stride"], attrs["pad"]
        kh, kw = w.shape[2:]
        xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
        if xp.shape[2] < kh or xp.shape[3] < kw:
            raise ShapeMismatchError(f"conv2d: kernel {kh}x{kw} mayor que {xp.shape}")
        windows = sliding_window_view(xp, (kh, kw), axis=(2, 3))[
            :, :, ::stride, ::stride
        ]
        out = np.tensordot(windows, w, axes=([1, 4, 5], [1, 2, 3]))
        out = np.ascontiguousarray(out.transpose(0, 3, 1, 2)) + b[None, :, None, None]
        return out, (windows, xp.shape)

    def backward(self, g, xs, out, cache, attrs, needs):
        x, w, _ = xs
        windows, padded_shape = cache
        stride, pad = attrs["stride"], attrs["pad"]
        kh, kw = w.shape[2:]
        g_nhwo = g.transpose(0, 2, 3, 1)

        dx = dw = db = None
        if needs[1]:
            dw = np.tensordot(g_nhwo, windows, axes=([0, 1, 2], [0, 2, 3]))
        if needs[2]:
            db = g.sum(axis=(0, 2, 3))
        if needs[0]:
            ho, wo = g.shape[2:]
            cols = np.tensordot(g_nhwo, w, axes=([3], [0]))  # (N, Ho, Wo, C, kh, kw)
            dxp = np.zeros(padded_shape, dtype=g.dtype)
            for i in range(kh):
                for j in range(kw):
                    dxp[
                        :,
                        :,
                        i : i + stride * (ho - 1) + 1 : stride,
                        j : j + stride * (wo - 1) + 1 : stride,
                    ] += cols[..., i, j].transpose(0, 3, 1, 2)
            dx = dxp[:, :, pad : pad + x.shape[2], pad : pad + x.shape[3]]
        return dx, dw, db


class InstanceNorm(Primitive):
    """Normalización por muestra y canal, con afinidad (gamma, beta) por canal."""

    arity = 3

    def forward(self, xs, attrs):
        x, gamma, beta = xs
        _require_ndim(x, 4, "instance_norm")
        channels = x.shape[1]
        if gamma.shape != (channels,) or beta.shape != (channels,):
            raise ShapeMismatchError(
                f"instance_norm: {x.shape} con gamma {gamma.shape}, beta {beta.shape}"
            )
        mu = x.mean(axis=(2, 3), keepdims=True)
        var = x.var(axis=(2, 3), keepdims=True)
        inv_std = 1.0 / np.sqrt(var + attrs["eps"])
        xhat = (x - mu) * inv_std
        out = gamma[None, :, None, None] * xhat + beta[None, :, None, None]
        return out, (xhat, inv_std)

    def backward(self, g, xs, out, cache, attrs, needs):
        _, gamma, _ = xs
        xhat, inv_std = cache
        dx = dgamma = dbeta = None
        if needs[0]:
            m = xhat.shape[2] * xhat.shape[3]
            dxhat = g * gamma[None, :, None, None]
            dx = (inv_std / m) * (
                m * dxhat
                - dxhat.sum(axis=(2, 3), keepdims=True)
                - xhat * (dxhat * xhat).sum(axis=(2, 3), keepdims=True)
            )
        if needs[1]:
            dgamma = (g * xhat).sum(axis=(0, 2, 3))
        if needs[2]:
            dbeta = g.sum(axis=(0, 2, 3))
        return dx, dgamma, dbeta


class AvgPool2(Primitive):
    """Average pooling 2x2 stride 2; filas/columnas impares sobrantes se descartan."""

    def forward(self, xs, attrs):
        (x,) = xs
        _require_ndim(x, 4, "avg_pool2")
        n, c, h, w = x.shape
        h2, w2 = h // 2, w // 2
        if h2 < 1 or w2 < 1:
            raise ShapeMismatchError(f"avg_pool2: espacial {h}x{w} demasiado pequeño")
        cropped = x[:, :, : 2 * h2, : 2 * w2]
        return cropped.reshape(n, c, h2, 2, w2, 2).mean(axis=(3, 5)), None

    def backward(self, g, xs, out, cache, attrs, needs):
        (x,) = xs
        h2, w2 = g.shape[2:]
        dx = np.zeros_like(x)
        dx[:, :, : 2 * h2, : 2 * w2] = np.repeat(np.repeat(g, 2, axis=2), 2, axis=3) / 4
        return (dx,)


class Flatten(Primitive):
    def forward(self, xs, attrs):
        (x,) = xs
        return x.reshape(x.shape[0], -1), None

    def backward(self, g, xs, out, cache, attrs, needs):
        return (g.reshape(xs[0].shape),)


# === Elementwise ===


class Relu(Primitive):
    def forward(self, xs, attrs):
        return np.maximum(xs[0], 0), None

    def backward(self, g, xs, out, cache, attrs, needs):
        return (g * (xs[0] > 0),)


class _Binary(Primitive):
    arity = 2

    def _check(self, a: Tensor, b: Tensor, op: str) -> None:
        try:
            np.broadcast_shapes(a.shape, b.shape)
        except ValueError as e:
            raise ShapeMismatchError(f"{op}: {a.shape} y {b.shape} no broadcast") from e


class Add(_Binary):
    def forward(self, xs, attrs):
        self._check(*xs, "add")
        return xs[0] + xs[1], None

    def backward(self, g, xs, out, cache, attrs, needs):
        a, b = xs
        return (
            _unbroadcast(g, a.shape) if needs[0] else None,
            _unbroadcast(g, b.shape) if needs[1] else None,
        )


class Sub(_Binary):
    def forward(self, xs, attrs):
        self._check(*xs, "sub")
        return xs[0] - xs[1], None

    def backward(self, g, xs, out, cache, attrs, needs):
        a, b = xs
        return (
            _unbroadcast(g, a.shape) if needs[0] else None,
            _unbroadcast(-g, b.shape) if needs[1] else None,
        )


class Mul(_Binary):
    def forward(self, xs, attrs):
        self._check(*xs, "mul")
        return xs[0] * xs[1], None

    def backward(self, g, xs, out, cache, attrs, needs):
        a, b = xs
        return (
            _unbroadcast(g * b, a.shape) if needs[0] else None,
            _unbroadcast(g * a, b.shape) if needs[1] else None,
        )


class Abs(Primitive):
    def forward(self, xs, attrs):
        return np.abs(xs[0]), None

    def backward(self, g, xs, out, cache, attrs, needs):
        # Subgradiente 0 en x == 0
        return (g * np.sign(xs[0]),)


class Log(Primitive):
    def forward(self, xs, attrs):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(xs[0]), None

    def backward(self, g, xs, out, cache, attrs, needs):
        return (g / xs[0],)


class Neg(Primitive):
    def forward(self, xs, attrs):
        return -xs[0], None

    def backward(self, g, xs, out, cache, attrs, needs):
        return (-g,)


class Scale(Primitive):
    def forward(self, xs, attrs):
        return xs[0] * xs[0].dtype.type(attrs["factor"]), None

    def backward(self, g, xs, out, cache, attrs, needs):
        return (g * g.dtype.type(attrs["factor"]),)


class ClampMin(Primitive):
    def forward(self, xs, attrs):
        return np.maximum(xs[0], xs[0].dtype.type(attrs["floor"])), None

    def backward(self, g, xs, out, cache, attrs, needs):
        return (g * (xs[0] > attrs["floor"]),)


# === Reducciones ===


class Sum(Primitive):
    def forward(self, xs, attrs):
        return np.asarray(xs[0].sum(axis=attrs.get("axis"))), None

    def backward(self, g, xs, out, cache, attrs, needs):
        (x,) = xs
        axis = attrs.get("axis")
        if axis is not None:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, x.shape).copy(),)


class Mean(Primitive):
    def forward(self, xs, attrs):
        return np.asarray(xs[0].mean(axis=attrs.get("axis"))), None

    def backward(self, g, xs, out, cache, attrs, needs):
        (x,) = xs
        axis = attrs.get("axis")
        count = x.size if axis is None else x.shape[axis]
        if axis is not None:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g / count, x.shape).copy(),)


# === Softmax y pérdidas ===


class Softmax(Primitive):
    def forward(self, xs, attrs):
        return np.exp(_log_softmax(xs[0])), None

    def backward(self, g, xs, out, cache, attrs, needs):
        return (out * (g - (g * out).sum(axis=-1, keepdims=True)),)


class CrossEntropy(Primitive):
    """-log softmax(z)[y] por fila; las etiquetas no reciben gradiente."""

    arity = 2

    def forward(self, xs, attrs):
        logits, labels = xs
        _require_ndim(logits, 2, "cross_entropy")
        labels = labels.astype(np.int64).reshape(-1)
        if labels.shape[0] != logits.shape[0]:
            raise ShapeMismatchError(
                f"cross_entropy: {logits.shape[0]} filas y {labels.shape[0]} etiquetas"
            )
        if labels.size and (labels.min() < 0 or labels.max() >= logits.shape[1]):
            raise ShapeMismatchError("cross_entropy: etiqueta fuera de rango")
        log_probs = _log_softmax(logits)
        rows = np.arange(logits.shape[0])
        return -log_probs[rows, labels], (np.exp(log_probs), labels)

    def backward(self, g, xs, out, cache, attrs, needs):
        probs, labels = cache
        dz = probs.copy()
        dz[np.arange(labels.shape[0]), labels] -= 1
        return (dz * g[:, None], None)


class SoftCrossEntropy(Primitive):
    """-Σ p·log softmax(z) por fila, con p una distribución objetivo."""

    arity = 2

    def forward(self, xs, attrs):
        logits, target = xs
        _require_ndim(logits, 2, "soft_cross_entropy")
        if logits.shape != target.shape:
            raise ShapeMismatchError(f"soft_cross_entropy: {logits.shape} vs {target.shape}")
        log_probs = _log_softmax(logits)
        return -(target * log_probs).sum(axis=-1), log_probs

    def backward(self, g, xs, out, cache, attrs, needs):
        _, target = xs
        log_probs = cache
        dz = dp = None
        if needs[0]:
            dz = (np.exp(log_probs) * target.sum(axis=-1, keepdims=True) - target) * g[:, None]
        if needs[1]:
            dp = -log_probs * g[:, None]
        return dz, dp


class _RowDistance(Primitive):
    """Distancia por fila (último eje) entre dos tensores de logits de igual forma."""

    arity = 2

    def _check(self, a: Tensor, b: Tensor) -> None:
        if a.shape != b.shape:
            raise ShapeMismatchError(f"distancia: longitudes {a.shape} y {b.shape}")


class L1Distance(_RowDistance):
    def forward(self, xs, attrs):
        self._check(*xs)
        return np.abs(xs[0] - xs[1]).sum(axis=-1), None

    def backward(self, g, xs, out, cache, attrs, needs):
        # Empates exactos: subgradiente 0
        da = np.sign(xs[0] - xs[1]) * g[..., None]
        return (da if needs[0] else None, -da if needs[1] else None)


class L2Distance(_RowDistance):
    def forward(self, xs, attrs):
        self._check(*xs)
        diff = xs[0] - xs[1]
        return np.sqrt((diff * diff).sum(axis=-1)), diff

    def backward(self, g, xs, out, cache, attrs, needs):
        diff = cache
        safe = np.where(out > 0, out, 1)
        da = np.where((out > 0)[..., None], diff / safe[..., None], 0) * g[..., None]
        return (da if needs[0] else None, -da if needs[1] else None)


class CosineDistance(_RowDistance):
    """
    1 - <a,b>/(|a||b|). Guardas: ambos nulos -> 0; solo uno nulo -> 1.
    En las filas con guarda el gradiente es 0.
    """

    def forward(self, xs, attrs):
        self._check(*xs)
        a, b = xs
        na = np.sqrt((a * a).sum(axis=-1))
        nb = np.sqrt((b * b).sum(axis=-1))
        valid = (na > 0) & (nb > 0)
        denom = np.where(valid, na * nb, 1)
        sim = np.where(valid, (a * b).sum(axis=-1) / denom, 0)
        both_zero = (na == 0) & (nb == 0)
        out = np.where(valid, 1 - sim, np.where(both_zero, 0, 1)).astype(a.dtype)
        return out, (na, nb, sim, valid)

    def backward(self, g, xs, out, cache, attrs, needs):
        a, b = xs
        na, nb, sim, valid = cache
        safe_a = np.where(valid, na, 1)[..., None]
        safe_b = np.where(valid, nb, 1)[..., None]
        scale = (np.where(valid, g, 0))[..., None]
        da = db = None
        if needs[0]:
            da = -(b / (safe_a * safe_b) - sim[..., None] * a / safe_a**2) * scale
        if needs[1]:
            db = -(a / (safe_a * safe_b) - sim[..., None] * b / safe_b**2) * scale
        return da, db


PRIMITIVES: dict[OpKind, Primitive] = {
    OpKind.MATMUL: MatMul(),
    OpKind.CONV2D: Conv2d(),
    OpKind.INSTANCE_NORM: InstanceNorm(),
    OpKind.RELU: Relu(),
    OpKind.AVG_POOL2: AvgPool2(),
    OpKind.FLATTEN: Flatten(),
    OpKind.ADD: Add(),
    OpKind.SUB: Sub(),
    OpKind.MUL: Mul(),
    OpKind.ABS: Abs(),
    OpKind.LOG: Log(),
    OpKind.NEG: Neg(),
    OpKind.SCALE: Scale(),
    OpKind.CLAMP_MIN: ClampMin(),
    OpKind.SUM: Sum(),
    OpKind.MEAN: Mean(),
    OpKind.SOFTMAX: Softmax(),
    OpKind.CROSS_ENTROPY: CrossEntropy(),
    OpKind.SOFT_CROSS_ENTROPY: SoftCrossEntropy(),
    OpKind.L1_DISTANCE: L1Distance(),
    OpKind.L2_DISTANCE: L2Distance(),
    OpKind.COSINE_DISTANCE: CosineDistance(),
}
