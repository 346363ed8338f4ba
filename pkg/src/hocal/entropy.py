"""Generalized entropies, their proper losses, and Bregman divergences.

A concave function G on the simplex induces the proper loss
L<p||q> = G(q) + grad G(q) . (p - q) and the divergence D = L - G.
Four families are built in: Shannon (KL divergence), Brier (squared
distance; optionally the 4p(1-p) binary normalization), the exponential
family G_t(p) = -exp(t . p) used as a moment-generating diagnostic, and
user-supplied concave polynomials in the binary bias coordinate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError, InvalidDistribution
from .simplex import SimplexPoint

CONCAVITY_GRID_STEP = 1e-3


@dataclass(frozen=True)
class EntropySpec:
    """Which entropy family to use, with its parameters.

    kind is one of "shannon" (log_base > 1), "brier" (binary_scaled picks
    4p(1-p) on binary spaces), "exponential" (t a vector with entries in
    [-1, 1]), or "polynomial" (monomial coeffs in the bias coordinate,
    binary spaces only, concave on [0, 1]).
    """

    kind: str
    log_base: float = 2.0
    binary_scaled: bool = False
    t: tuple = ()
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in ("shannon", "brier", "exponential", "polynomial"):
            raise DomainError(f"unknown entropy kind {self.kind!r}")
        if self.kind == "shannon" and not self.log_base > 1.0:
            raise DomainError(f"log base must exceed 1, got {self.log_base}")
        if self.kind == "exponential":
            t = tuple(float(x) for x in self.t)
            if not t:
                raise DomainError("exponential entropy needs a t vector")
            if any(abs(x) > 1.0 for x in t):
                raise DomainError(f"t entries must lie in [-1, 1], got {t}")
            object.__setattr__(self, "t", t)
        if self.kind == "polynomial":
            coeffs = tuple(float(c) for c in self.coeffs)
            if not coeffs:
                raise DomainError("polynomial entropy needs coefficients")
            object.__setattr__(self, "coeffs", coeffs)
            xs = np.arange(0.0, 1.0 + CONCAVITY_GRID_STEP / 2, CONCAVITY_GRID_STEP)
            vals = np.polynomial.polynomial.polyval(xs, np.asarray(coeffs))
            second = vals[2:] - 2 * vals[1:-1] + vals[:-2]
            if second.max() > 1e-12:
                raise DomainError("polynomial is not concave on [0, 1]")

    # -- constructors ---------------------------------------------------

    @classmethod
    def shannon(cls, log_base: float = 2.0) -> "EntropySpec":
        return cls(kind="shannon", log_base=log_base)

    @classmethod
    def brier(cls, binary_scaled: bool = False) -> "EntropySpec":
        return cls(kind="brier", binary_scaled=binary_scaled)

    @classmethod
    def exponential(cls, t) -> "EntropySpec":
        return cls(kind="exponential", t=tuple(t))

    @classmethod
    def polynomial(cls, coeffs) -> "EntropySpec":
        return cls(kind="polynomial", coeffs=tuple(coeffs))

    # -- serialization --------------------------------------------------

    def to_json(self) -> str:
        payload = {"kind": self.kind}
        if self.kind == "shannon":
            payload["log_base"] = self.log_base
        elif self.kind == "brier":
            payload["binary_scaled"] = self.binary_scaled
        elif self.kind == "exponential":
            payload["t"] = list(self.t)
        else:
            payload["coeffs"] = list(self.coeffs)
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "EntropySpec":
        payload = json.loads(text)
        kind = payload.pop("kind")
        return cls(
            kind=kind,
            log_base=payload.get("log_base", 2.0),
            binary_scaled=payload.get("binary_scaled", False),
            t=tuple(payload.get("t", ())),
            coeffs=tuple(payload.get("coeffs", ())),
        )


def _require_binary(g: EntropySpec, p: SimplexPoint):
    if p.dim != 2:
        raise DimensionMismatch(f"{g.kind} entropy with these parameters needs a binary space")


def entropy_value(g: EntropySpec, p: SimplexPoint) -> float:
    """G(p), with the 0*log(0) = 0 convention for Shannon."""
    probs = p.as_array()
    if g.kind == "shannon":
        pos = probs > 0.0
        return float(-(probs[pos] * np.log(probs[pos])).sum() / math.log(g.log_base))
    if g.kind == "brier":
        if g.binary_scaled and p.dim == 2:
            return 4.0 * probs[0] * probs[1]
        return float(1.0 - (probs**2).sum())
    if g.kind == "exponential":
        if len(g.t) != p.dim:
            raise DimensionMismatch(f"t has {len(g.t)} entries for a {p.dim}-label point")
        return float(-math.exp(np.dot(g.t, probs)))
    _require_binary(g, p)
    return float(np.polynomial.polynomial.polyval(p.bias, np.asarray(g.coeffs)))


def gradient(g: EntropySpec, p: SimplexPoint) -> np.ndarray:
    """A gradient of G at p (unique up to a constant shift along the all-ones direction)."""
    probs = p.as_array()
    if g.kind == "shannon":
        if (probs <= 0.0).any():
            raise DomainError("Shannon gradient needs strictly positive coordinates")
        return -(np.log(probs) + 1.0) / math.log(g.log_base)
    if g.kind == "brier":
        if g.binary_scaled and p.dim == 2:
            return 4.0 * probs[::-1].copy()
        return -2.0 * probs
    if g.kind == "exponential":
        return -np.asarray(g.t) * math.exp(np.dot(g.t, probs))
    _require_binary(g, p)
    deriv = np.polynomial.polynomial.polyder(np.asarray(g.coeffs))
    return np.array([0.0, float(np.polynomial.polynomial.polyval(p.bias, deriv))])


def divergence(g: EntropySpec, p: SimplexPoint, q: SimplexPoint) -> float:
    """Bregman divergence D<p||q> = L<p||q> - G(p); non-negative.

    For Shannon this is the KL divergence; when q lacks mass somewhere p
    has it, the divergence is genuinely infinite and math.inf is returned
    as the sentinel rather than raising.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"{p.dim}-label point vs {q.dim}-label point")
    pa, qa = p.as_array(), q.as_array()
    if g.kind == "shannon":
        pos = pa > 0.0
        if (qa[pos] <= 0.0).any():
            return math.inf
        return float((pa[pos] * (np.log(pa[pos]) - np.log(qa[pos]))).sum() / math.log(g.log_base))
    if g.kind == "brier":
        if g.binary_scaled and p.dim == 2:
            return 4.0 * (pa[1] - qa[1]) ** 2
        return float(((pa - qa) ** 2).sum())
    return entropy_value(g, q) + float(gradient(g, q) @ (pa - qa)) - entropy_value(g, p)


def proper_loss(g: EntropySpec, p_true: SimplexPoint, q: SimplexPoint) -> float:
    """Expected loss of predicting q when truth is p_true; equals G + D."""
    if p_true.dim != q.dim:
        raise DimensionMismatch(f"{p_true.dim}-label point vs {q.dim}-label point")
    pa, qa = p_true.as_array(), q.as_array()
    if g.kind == "shannon":
        pos = pa > 0.0
        if (qa[pos] <= 0.0).any():
            return math.inf
        return float(-(pa[pos] * np.log(qa[pos])).sum() / math.log(g.log_base))
    return entropy_value(g, q) + float(gradient(g, q) @ (pa - qa))


def shannon_modulus_bound(x: float) -> float:
    """(4x)^(1/ln 4): a concave upper envelope for binary Shannon entropy in nats.

    Useful for sizing snapshot depth against a target estimation error.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"argument must lie in [0, 1], got {x}")
    return (4.0 * x) ** (1.0 / math.log(4.0))