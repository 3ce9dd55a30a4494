"""
Reweighting curves g : simplex -> simplex with g_i(0) = 0 and g_i(1) = 1.

A curve receives a batch of weight vectors (k, n) and the anchor points
x_1..x_n of the tuple being combined, and returns reweighted vectors (k, n).
Most curves ignore the anchors; witness curves built for a specific map may
use them.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Sequence, Tuple

import numpy as np

from domains import SNAP_TOL, simplex_lattice

logger = logging.getLogger(__name__)

DEFAULT_EXPONENTS = (0.5, 1.0, 2.0, 3.0)

CurveFunc = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GCurve:
    name: str
    func: CurveFunc = field(compare=False, repr=False)
    params: Tuple = ()

    def __call__(self, lam: np.ndarray, anchors: np.ndarray) -> np.ndarray:
        lam = np.atleast_2d(np.asarray(lam, dtype=float))
        out = np.asarray(self.func(lam, np.asarray(anchors, dtype=float)), dtype=float)
        return out.reshape(lam.shape)

    def describe(self) -> Dict:
        return {"name": self.name, "params": [float(p) for p in self.params]}


def _renormalize(weights: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    total = weights.sum(axis=1, keepdims=True)
    safe = np.where(total > 0, total, 1.0)
    return np.where(total > 0, weights / safe, fallback)


def identity_curve() -> GCurve:
    return GCurve("identity", lambda lam, anchors: lam)


def power_curve(exponents: Sequence[float]) -> GCurve:
    p = np.asarray(exponents, dtype=float)

    def _apply(lam, anchors):
        if lam.shape[1] != p.size:
            raise ValueError(f"power curve of arity {p.size} applied to {lam.shape[1]} weights")
        return _renormalize(np.power(lam, p), lam)

    return GCurve("power", _apply, tuple(float(v) for v in p))


def gate_curve(level: float, axis: int = 0) -> GCurve:
    """
    Weights of anchors above `level` (along `axis`) are switched on only once
    the combined point passes `level`; the other anchors keep their weights.
    """

    def _apply(lam, anchors):
        coord = anchors[:, int(axis)]
        combined = lam @ coord
        above = coord > level + SNAP_TOL
        gate = np.maximum(0.0, combined - level - SNAP_TOL)[:, None]
        weights = np.where(above[None, :], lam * gate, lam)
        return _renormalize(weights, lam)

    return GCurve("gate", _apply, (float(level), float(int(axis))))


CURVE_FACTORIES: Dict[str, Callable[..., GCurve]] = {
    "identity": identity_curve,
    "power": power_curve,
    "gate": gate_curve,
}


def register_curve_factory(name: str, factory: Callable[..., GCurve]) -> None:
    if name in CURVE_FACTORIES:
        raise ValueError(f"curve factory '{name}' already registered")
    CURVE_FACTORIES[name] = factory


def curve_from_dict(spec: Dict) -> GCurve:
    name = spec.get("name")
    if name not in CURVE_FACTORIES:
        raise ValueError(f"unknown curve '{name}'")
    params = spec.get("params", [])
    if name == "power":
        return power_curve(params)
    return CURVE_FACTORIES[name](*params)


@dataclass
class GCurveFamily:
    """Identity, renormalized componentwise powers, and any registered extras."""

    exponents: Tuple[float, ...] = DEFAULT_EXPONENTS
    extra: List[GCurve] = field(default_factory=list)
    include_powers: bool = True

    def __post_init__(self):
        if not self.include_powers and not self.extra:
            # only the identity is left, which is still a valid family
            logger.debug("g-family reduced to the identity curve")

    def register(self, curve: GCurve) -> "GCurveFamily":
        self.extra.append(curve)
        return self

    def curves(self, n: int) -> Iterator[GCurve]:
        yield identity_curve()
        for curve in self.extra:
            yield curve
        if self.include_powers and n > 1:
            for combo in itertools.product(self.exponents, repeat=n):
                if all(p == 1.0 for p in combo):
                    continue
                yield power_curve(combo)

    def size(self, n: int) -> int:
        return sum(1 for _ in self.curves(n))


def check_curve(curve: GCurve, n: int, steps: int, anchors: np.ndarray, tol: float = 1e-9) -> List[str]:
    """Problems found with `curve` on the lattice of the (n-1)-simplex (empty when valid)."""
    problems = []
    lam = simplex_lattice(n, max(1, steps - 1))
    g = curve(lam, anchors)
    if np.any(g < -tol) or np.any(np.abs(g.sum(axis=1) - 1.0) > 1e-7):
        problems.append("values leave the simplex")
    zero = lam <= 0
    if np.any(np.abs(g[zero]) > tol):
        problems.append("g_i(0) != 0")
    vertices = curve(np.eye(n), anchors)
    if np.any(np.abs(np.diag(vertices) - 1.0) > 1e-7):
        problems.append("g_i(1) != 1")
    return problems
