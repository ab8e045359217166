"""The standard node, its boundary traces, and the gluing chart.

The local model lives on ``N_z = {(x, y) in D x D : x*y = z}`` with
``|z| < 1``: an annulus for ``z != 0``, two disks joined at a point for
``z = 0``.  Finite Laurent data ``v(x, y) = sum a_n x^n + sum b_n y^n + c``
restricts to a pair of boundary loops ``(xi, eta)`` on the two boundary
circles.  Such a pair arises from a holomorphic map on the fiber iff its
coefficients satisfy

* ``z != 0``:  ``eta_{-n} = z^n xi_n`` for all n (symmetrically
  ``xi_{-n} = z^n eta_n`` and ``xi_0 = eta_0``),
* ``z == 0``:  ``xi_0 = eta_0`` and all negative modes vanish.

The set of such pairs is parametrized by the chart
``xi = xi_+ + lam + T_z(eta_+)``, ``eta = eta_+ + lam + T_z(xi_+)`` where
``T_z`` maps the positive-mode coefficient ``c_n`` to ``z^n c_n`` at mode
``-n``.  Gluing the two disk coordinates gives the evaluation map
``H(x, y) = xi_+(x) + eta_+(y) + lam`` at ``z = x*y``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .loops import Loop, hardy_project, sobolev_norm

__all__ = [
    "DEFAULT_SOBOLEV_S",
    "NodeBoundary",
    "NodeChart",
    "NodePolynomial",
    "MembershipResult",
    "boundary_traces",
    "transfer_Tz",
    "node_membership",
    "membership_defect",
    "node_chart",
    "node_chart_inverse",
    "evaluate_H",
    "eval_plus",
    "holomorphicity_residual",
]

# Standing smoothness exponent: the model requires s + 1/2 > 1.
DEFAULT_SOBOLEV_S = 1.5


@dataclass(frozen=True)
class NodeBoundary:
    """Gluing parameter ``z`` and the pair of boundary loops ``(xi, eta)``."""

    z: complex
    xi: Loop
    eta: Loop

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if abs(self.z) >= 1.0:
            raise ValueError(f"gluing parameter must satisfy |z| < 1, got |z|={abs(self.z):.6g}")
        if self.xi.m != self.eta.m or self.xi.n_max != self.eta.n_max:
            raise ValueError("xi and eta must share m and n_max")


@dataclass(frozen=True)
class NodeChart:
    """Chart coordinates ``(z, xi_+, eta_+, lam)`` of a boundary pair.

    ``xi_plus`` and ``eta_plus`` may only carry modes n > 0; ``lam`` is the
    shared constant term in C^m.
    """

    z: complex
    xi_plus: Loop
    eta_plus: Loop
    lam: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if abs(self.z) >= 1.0:
            raise ValueError(f"gluing parameter must satisfy |z| < 1, got |z|={abs(self.z):.6g}")
        if self.xi_plus.m != self.eta_plus.m or self.xi_plus.n_max != self.eta_plus.n_max:
            raise ValueError("xi_plus and eta_plus must share m and n_max")
        for name, loop in (("xi_plus", self.xi_plus), ("eta_plus", self.eta_plus)):
            if np.any(loop.coeffs[: loop.n_max + 1] != 0):
                raise ValueError(f"{name} must vanish on modes n <= 0")
        lam = np.asarray(self.lam, dtype=complex).reshape(-1)
        if lam.shape != (self.xi_plus.m,):
            raise ValueError(f"lambda has shape {lam.shape}, expected ({self.xi_plus.m},)")
        lam.flags.writeable = False
        object.__setattr__(self, "lam", lam)


@dataclass(frozen=True)
class NodePolynomial:
    """Finite Laurent data ``v(x, y) = sum_{n>0} a_n x^n + sum_{n>0} b_n y^n + c``.

    ``a`` has shape (deg_x, m) with row i holding the coefficient of
    ``x^(i+1)``; likewise ``b`` for powers of y; ``c`` is the constant.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=complex)) if np.size(self.a) else np.zeros((0, np.size(self.c)), complex)
        b = np.atleast_2d(np.asarray(self.b, dtype=complex)) if np.size(self.b) else np.zeros((0, np.size(self.c)), complex)
        c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        m = c.shape[0]
        if a.shape[1:] != (m,) or b.shape[1:] != (m,):
            raise ValueError("a, b, c must agree on the target dimension m")
        for arr in (a, b, c):
            arr.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.c.shape[0]

    @property
    def deg_x(self) -> int:
        return self.a.shape[0]

    @property
    def deg_y(self) -> int:
        return self.b.shape[0]

    def __call__(self, x: complex, y: complex) -> np.ndarray:
        val = np.array(self.c, dtype=complex)
        for i, row in enumerate(self.a):
            val = val + row * x ** (i + 1)
        for j, row in enumerate(self.b):
            val = val + row * y ** (j + 1)
        return val


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    residual: float


def boundary_traces(poly: NodePolynomial, z: complex, n_max: int) -> NodeBoundary:
    """Boundary loops of Laurent data on ``N_z``.

    On the first boundary circle ``x`` runs over S^1 and ``y = z/x``; on
    the second ``y`` runs over S^1 and ``x = z/y``.  The substitution is
    carried out exactly at the coefficient level:
    ``xi = sum a_n x^n + sum b_n z^n x^-n + c`` and symmetrically for eta.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError(f"gluing parameter must satisfy |z| < 1, got |z|={abs(z):.6g}")
    if max(poly.deg_x, poly.deg_y) > n_max:
        raise ValueError(
            f"polynomial degree {max(poly.deg_x, poly.deg_y)} overflows truncation order {n_max}"
        )
    m = poly.m
    xi = np.zeros((2 * n_max + 1, m), dtype=complex)
    eta = np.zeros((2 * n_max + 1, m), dtype=complex)
    xi[n_max] = poly.c
    eta[n_max] = poly.c
    for i, row in enumerate(poly.a):
        n = i + 1
        xi[n_max + n] += row
        eta[n_max - n] += row * z**n
    for j, row in enumerate(poly.b):
        n = j + 1
        eta[n_max + n] += row
        xi[n_max - n] += row * z**n
    return NodeBoundary(z, Loop(m, n_max, xi), Loop(m, n_max, eta))


def transfer_Tz(z: complex, plus_loop: Loop) -> Loop:
    """Transfer operator: mode ``n > 0`` with coefficient ``c_n`` goes to
    mode ``-n`` with coefficient ``z^n c_n``.

    Defined on the closed disk; the norm bound |z| * |input| holds whenever
    |z| <= 1.
    """
    z = complex(z)
    if abs(z) > 1.0:
        raise ValueError(f"transfer operator requires |z| <= 1, got |z|={abs(z):.6g}")
    N = plus_loop.n_max
    if np.any(plus_loop.coeffs[: N + 1] != 0):
        raise ValueError("transfer operator input must be supported on modes n > 0")
    out = np.zeros_like(plus_loop.coeffs)
    for n in range(1, N + 1):
        out[N - n] = z**n * plus_loop.coeffs[N + n]
    return plus_loop.with_coeffs(out)


def membership_defect(b: NodeBoundary) -> tuple[Loop, Loop]:
    """Coefficient defect of the gluing relations, as a pair of loops.

    The xi-defect carries ``xi_{-n} - z^n eta_n`` at mode ``-n`` and
    ``xi_0 - eta_0`` at mode 0; the eta-defect carries
    ``eta_{-n} - z^n xi_n`` at mode ``-n``.  At ``z = 0`` this reduces
    exactly to the separate conditions: negative modes vanish and the
    constants agree.
    """
    N = b.xi.n_max
    m = b.xi.m
    z = b.z
    dxi = np.zeros((2 * N + 1, m), dtype=complex)
    deta = np.zeros((2 * N + 1, m), dtype=complex)
    dxi[N] = b.xi.coeffs[N] - b.eta.coeffs[N]
    if z == 0:
        dxi[:N] = b.xi.coeffs[:N]
        deta[:N] = b.eta.coeffs[:N]
    else:
        for n in range(1, N + 1):
            dxi[N - n] = b.xi.coeffs[N - n] - z**n * b.eta.coeffs[N + n]
            deta[N - n] = b.eta.coeffs[N - n] - z**n * b.xi.coeffs[N + n]
    return Loop(m, N, dxi), Loop(m, N, deta)


def node_membership(b: NodeBoundary, tol: float = 1e-10, s: float = DEFAULT_SOBOLEV_S) -> MembershipResult:
    """Test whether ``(z, xi, eta)`` are the boundary values of a holomorphic
    map on ``N_z``.

    The residual is the Sobolev-s norm of the relation defect divided by
    ``1 + max(|xi|_s, |eta|_s)``; membership means residual <= tol.
    """
    dxi, deta = membership_defect(b)
    defect = float(np.hypot(sobolev_norm(dxi, s), sobolev_norm(deta, s)))
    scale = 1.0 + max(sobolev_norm(b.xi, s), sobolev_norm(b.eta, s))
    residual = defect / scale
    return MembershipResult(residual <= tol, residual)


def node_chart(c: NodeChart) -> NodeBoundary:
    """Boundary pair of a chart point:
    ``xi = xi_+ + lam + T_z(eta_+)`` and ``eta = eta_+ + lam + T_z(xi_+)``."""
    N = c.xi_plus.n_max
    xi = np.array(c.xi_plus.coeffs)
    eta = np.array(c.eta_plus.coeffs)
    xi[N] += c.lam
    eta[N] += c.lam
    xi += transfer_Tz(c.z, c.eta_plus).coeffs
    eta += transfer_Tz(c.z, c.xi_plus).coeffs
    m = c.xi_plus.m
    return NodeBoundary(c.z, Loop(m, N, xi), Loop(m, N, eta))


def node_chart_inverse(b: NodeBoundary, tol: float = 1e-10, s: float = DEFAULT_SOBOLEV_S) -> NodeChart:
    """Chart coordinates of a boundary pair: ``lam = xi_0``, ``xi_+ = P_+ xi``,
    ``eta_+ = P_+ eta``.  Rejects non-members (the negative modes and the
    constant matching are exactly the membership relations)."""
    check = node_membership(b, tol=tol, s=s)
    if not check.member:
        raise ValueError(
            f"boundary pair is not a node member: residual {check.residual:.3e} > tol {tol:.3e}"
        )
    return NodeChart(
        b.z,
        hardy_project(b.xi, "plus"),
        hardy_project(b.eta, "plus"),
        hardy_project(b.xi, "constant"),
    )


def eval_plus(loop: Loop, point: complex) -> np.ndarray:
    """Evaluate the positive-mode power series ``sum_{n>0} c_n x^n`` at a point."""
    x = complex(point)
    N = loop.n_max
    val = np.zeros(loop.m, dtype=complex)
    for n in range(1, N + 1):
        val += loop.coeffs[N + n] * x**n
    return val


def evaluate_H(family, x: complex, y: complex, t=None) -> np.ndarray:
    """Glued evaluation ``H(x, y, t) = xi_+(x) + eta_+(y) + lam`` at ``z = x*y``.

    ``family`` is a callable ``(z, t) -> NodeChart`` describing a chart-valued
    family over the gluing parameter; exceptions it raises propagate as
    "family undefined at (z, t)".  At ``x = y = 0`` the value is ``lam(0, t)``.
    """
    x = complex(x)
    y = complex(y)
    if abs(x) >= 1.0 or abs(y) >= 1.0:
        raise ValueError("evaluation requires |x| < 1 and |y| < 1")
    chart = family(x * y, t)
    if not isinstance(chart, NodeChart):
        raise ValueError("family must return a NodeChart")
    return eval_plus(chart.xi_plus, x) + eval_plus(chart.eta_plus, y) + chart.lam


def holomorphicity_residual(h_fun, xs, ys, step: float = 1e-3) -> float:
    """Numerical Cauchy-Riemann check of a two-variable map.

    Evaluates centered-finite-difference Wirtinger derivatives d/d(conj x),
    d/d(conj y) of ``h_fun(x, y)`` on the grid ``xs x ys`` and returns the
    maximum modulus.  For a holomorphic family this is O(step^2); a value of
    order 1 flags genuine anti-holomorphic dependence.
    """
    h = float(step)
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    worst = 0.0
    for x in np.asarray(xs, dtype=complex):
        for y in np.asarray(ys, dtype=complex):
            dx_bar = (
                np.asarray(h_fun(x + h, y)) - np.asarray(h_fun(x - h, y))
                + 1j * (np.asarray(h_fun(x + 1j * h, y)) - np.asarray(h_fun(x - 1j * h, y)))
            ) / (4.0 * h)
            dy_bar = (
                np.asarray(h_fun(x, y + h)) - np.asarray(h_fun(x, y - h))
                + 1j * (np.asarray(h_fun(x, y + 1j * h)) - np.asarray(h_fun(x, y - 1j * h)))
            ) / (4.0 * h)
            worst = max(worst, float(np.max(np.abs(dx_bar))), float(np.max(np.abs(dy_bar))))
    return worst
