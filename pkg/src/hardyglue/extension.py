"""Holomorphic-extension tests for boundary loops.

In the truncated model a loop extends to the unit disk iff its negative
modes vanish, a pair extends through a node iff additionally the constants
agree, and a pair bounds a holomorphic map on the annulus ``A(delta, 1)``
iff the coefficients match under the substitution ``y = delta/x``
(``eta_n = xi_{-n} delta^{-n}``).  Every finite Laurent series is
holomorphic on the open annulus, so the matching relation is the whole
content of the test; no growth condition is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .loops import Loop, sample_values, sobolev_norm
from .node_model import DEFAULT_SOBOLEV_S, NodeBoundary, node_membership

__all__ = [
    "ExtensionResult",
    "NodeData",
    "NodeVerdict",
    "VPrimeReport",
    "disk_extension_test",
    "disk_pair_node_test",
    "annulus_extension_test",
    "vprime_membership",
]


@dataclass(frozen=True)
class ExtensionResult:
    extends: bool
    defect: float


def disk_extension_test(xi: Loop, tol: float = 1e-10, s: float = DEFAULT_SOBOLEV_S) -> ExtensionResult:
    """Extension to the unit disk: the relative Sobolev norm of the n<0 part."""
    weights = (1.0 + np.abs(xi.modes[: xi.n_max])) ** (2.0 * s)
    power = np.sum(np.abs(xi.coeffs[: xi.n_max]) ** 2, axis=1)
    defect = float(np.sqrt(np.dot(weights, power))) / (1.0 + sobolev_norm(xi, s))
    return ExtensionResult(defect <= tol, defect)


def disk_pair_node_test(xi: Loop, eta: Loop, tol: float = 1e-10, s: float = DEFAULT_SOBOLEV_S) -> ExtensionResult:
    """Extension through a node: both loops extend to disks and the
    zeroth coefficients agree.

    The defect aggregates the negative-mode parts of both loops and the
    constant mismatch exactly as node membership at ``z = 0`` does, so the
    verdicts coincide at equal tolerance.
    """
    result = node_membership(NodeBoundary(0j, xi, eta), tol=tol, s=s)
    return ExtensionResult(result.member, result.residual)


def annulus_extension_test(
    xi: Loop, eta: Loop, delta: float, tol: float = 1e-10, s: float = DEFAULT_SOBOLEV_S
) -> ExtensionResult:
    """Extension to the annulus ``A(delta, 1)``: ``eta(y) = xi(delta/y)``.

    Checked per mode in the balanced form
    ``delta^(n/2) eta_n - delta^(-n/2) xi_{-n}``, which is equivalent to
    ``eta_n = xi_{-n} delta^{-n}``, exactly symmetric under swapping
    ``(xi, eta)``, and free of ``delta^(-n_max)`` overflow on clean data.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"annulus parameter must lie in (0, 1), got {delta}")
    if xi.m != eta.m or xi.n_max != eta.n_max:
        raise ValueError("xi and eta must share m and n_max")
    N = xi.n_max
    delta = float(delta)
    mismatch = np.zeros((2 * N + 1, xi.m), dtype=complex)
    for n in range(-N, N + 1):
        lhs = delta ** (n / 2.0) * eta.coeffs[N + n]
        rhs = delta ** (-n / 2.0) * xi.coeffs[N - n]
        mismatch[N + n] = lhs - rhs
    defect_loop = Loop(xi.m, N, mismatch)
    scale = 1.0 + max(sobolev_norm(xi, s), sobolev_norm(eta, s))
    defect = sobolev_norm(defect_loop, s) / scale
    return ExtensionResult(defect <= tol, defect)


@dataclass(frozen=True)
class NodeData:
    """Per-node boundary record: a disk pair at gluing parameter z, or an
    annulus of modulus delta."""

    kind: str
    xi: Loop
    eta: Loop
    z: complex = 0j
    delta: float | None = None

    def __post_init__(self):
        if self.kind not in ("disk_pair", "annulus"):
            raise ValueError(f"kind must be 'disk_pair' or 'annulus', got {self.kind!r}")
        if self.kind == "annulus":
            if self.delta is None or not (0.0 < self.delta < 1.0):
                raise ValueError("annulus record requires delta in (0, 1)")
        object.__setattr__(self, "z", complex(self.z))


@dataclass(frozen=True)
class NodeVerdict:
    index: int
    kind: str
    ball_ok: bool | None
    ball_sup: float | None
    extends: bool
    defect: float

    @property
    def passed(self) -> bool:
        return self.extends and self.ball_ok is not False


@dataclass(frozen=True)
class VPrimeReport:
    nodes: tuple
    member: bool


def _sampled_sup(loop: Loop) -> float:
    vals = sample_values(loop)
    return float(np.max(np.sqrt(np.sum(np.abs(vals) ** 2, axis=1))))


def vprime_membership(
    nodes, ball_check: bool = True, tol: float = 1e-10, s: float = DEFAULT_SOBOLEV_S
) -> VPrimeReport:
    """Nodewise extension report for loops written in unit-ball charts.

    For each record checks (a) the sampled sup-norm stays inside the open
    unit ball, and (b) disk-pair matching or (c) annulus matching as the
    kind dictates.  The configuration is a member iff every node passes.
    """
    verdicts = []
    for i, node in enumerate(nodes):
        if ball_check:
            sup = max(_sampled_sup(node.xi), _sampled_sup(node.eta))
            ball_ok = sup < 1.0
        else:
            sup = None
            ball_ok = None
        if node.kind == "disk_pair":
            res = node_membership(NodeBoundary(node.z, node.xi, node.eta), tol=tol, s=s)
            verdicts.append(NodeVerdict(i, node.kind, ball_ok, sup, res.member, res.residual))
        else:
            res = annulus_extension_test(node.xi, node.eta, node.delta, tol=tol, s=s)
            verdicts.append(NodeVerdict(i, node.kind, ball_ok, sup, res.extends, res.defect))
    return VPrimeReport(tuple(verdicts), all(v.passed for v in verdicts))
