"""Neck degenerations, annulus energies, and vanishing-cycle contractions.

The neck of the node model at gluing parameter z, seen from the x-side, is
the annulus ``|z|/eps < |x| < eps``.  Restricting Laurent data to the neck
gives a Laurent series whose Dirichlet energy has the closed form
``pi * sum_{n != 0} n |a_n|^2 (R^{2n} - r^{2n})``; the convergence axiom
demands that the double limit (first k, then eps) of neck energies
vanishes.  The combinatorial side contracts vanishing cycles on dual
graphs: a nonseparating cycle trades a handle for a self-node, a
separating cycle splits a component, and both preserve the arithmetic
genus.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .loops import Loop
from .moduli import Component, NodalConfig
from .node_model import NodePolynomial

__all__ = [
    "NeckFamily",
    "EnergyRow",
    "EnergyReport",
    "NonseparatingCycle",
    "SeparatingCycle",
    "annulus_energy",
    "annulus_energy_quadrature",
    "neck_laurent",
    "energy_axiom_check",
    "apply_deformation",
]


def annulus_energy(loop: Loop, r: float, R: float) -> float:
    """Dirichlet energy of a Laurent series on ``r < |x| < R``.

    Closed form ``pi * sum_{n != 0} n |a_n|^2 (R^{2n} - r^{2n})``, summed
    over the target components; every term is nonnegative.
    """
    if not (0.0 < r < R <= 1.0):
        raise ValueError(f"annulus radii must satisfy 0 < r < R <= 1, got ({r}, {R})")
    total = 0.0
    N = loop.n_max
    for n in range(-N, N + 1):
        if n == 0:
            continue
        weight = float(np.sum(np.abs(loop.coeffs[N + n]) ** 2))
        if weight == 0.0:
            continue
        total += n * weight * (np.float64(R) ** (2 * n) - np.float64(r) ** (2 * n))
    return float(np.pi * total)


def annulus_energy_quadrature(loop: Loop, r: float, R: float,
                              n_theta: int | None = None, n_rad: int = 240) -> float:
    """Dirichlet energy by 2D quadrature of ``|f'|^2`` (independent check).

    The angular integral uses the trapezoid rule on a grid fine enough to
    be exact for the trigonometric polynomial ``|f'|^2``; the radial
    integral uses Gauss-Legendre in log-radius.
    """
    if not (0.0 < r < R <= 1.0):
        raise ValueError(f"annulus radii must satisfy 0 < r < R <= 1, got ({r}, {R})")
    N = loop.n_max
    P = n_theta if n_theta is not None else max(8 * (N + 1), 8)
    thetas = 2.0 * np.pi * np.arange(P) / P
    modes = loop.modes
    # f'(x) = sum n a_n x^(n-1); |f'|^2 on the circle of radius rho
    tnodes, tweights = np.polynomial.legendre.leggauss(n_rad)
    lo, hi = np.log(r), np.log(R)
    log_rho = 0.5 * (hi - lo) * tnodes + 0.5 * (hi + lo)
    rho = np.exp(log_rho)
    total = 0.0
    for rho_i, w_i in zip(rho, tweights):
        x = rho_i * np.exp(1j * thetas)
        deriv = np.zeros((P, loop.m), dtype=complex)
        for n, row in zip(modes, loop.coeffs):
            if n == 0 or not np.any(row):
                continue
            deriv += np.outer(n * x ** (n - 1), row)
        ring = float(np.mean(np.sum(np.abs(deriv) ** 2, axis=1))) * 2.0 * np.pi
        # dA = rho drho dtheta; drho = rho dlog_rho
        total += w_i * ring * rho_i**2
    return float(total * 0.5 * (hi - lo))


def neck_laurent(poly: NodePolynomial, z: complex, n_max: int) -> Loop:
    """Laurent series of ``v(x, z/x)`` in the x-coordinate of the neck."""
    z = complex(z)
    if max(poly.deg_x, poly.deg_y) > n_max:
        raise ValueError(
            f"polynomial degree {max(poly.deg_x, poly.deg_y)} overflows truncation order {n_max}"
        )
    m = poly.m
    coeffs = np.zeros((2 * n_max + 1, m), dtype=complex)
    coeffs[n_max] = poly.c
    for i, row in enumerate(poly.a):
        coeffs[n_max + i + 1] += row
    for j, row in enumerate(poly.b):
        coeffs[n_max - j - 1] += row * z ** (j + 1)
    return Loop(m, n_max, coeffs)


@dataclass(frozen=True)
class NeckFamily:
    """Gluing parameters decreasing to zero with Laurent data per index."""

    z_seq: tuple
    polys: tuple

    def __post_init__(self):
        z_seq = tuple(complex(z) for z in self.z_seq)
        if not z_seq:
            raise ValueError("family needs at least one gluing parameter")
        mags = [abs(z) for z in z_seq]
        if any(mag >= 1.0 for mag in mags):
            raise ValueError("all gluing parameters must satisfy |z| < 1")
        if any(b >= a for a, b in zip(mags, mags[1:])):
            raise ValueError("gluing parameter magnitudes must be strictly decreasing")
        polys = tuple(self.polys)
        if len(polys) != len(z_seq):
            raise ValueError(f"need one Laurent datum per parameter: {len(polys)} != {len(z_seq)}")
        object.__setattr__(self, "z_seq", z_seq)
        object.__setattr__(self, "polys", polys)

    @classmethod
    def from_constant(cls, poly: NodePolynomial, z_seq) -> "NeckFamily":
        z_seq = tuple(z_seq)
        return cls(z_seq, tuple(poly for _ in z_seq))


@dataclass(frozen=True)
class EnergyRow:
    eps: float
    k_index: int
    z_abs: float
    energy: float
    stable: bool


@dataclass(frozen=True)
class EnergyReport:
    rows: tuple
    passed: bool


def energy_axiom_check(fam: NeckFamily, eps_schedule, tol: float = 1e-6,
                       n_max: int = 32) -> EnergyReport:
    """Double-limit neck-energy check of the convergence axiom.

    For each eps the k-limit is taken as the energy at the largest k with
    ``|z_k| < eps^2/10`` (so the neck annulus is comfortably nondegenerate);
    the row is flagged stable when it agrees with the previous usable k to
    10% relative.  The family passes iff all rows are stable, the
    eps-indexed values are nonincreasing, and the last one is <= tol.
    """
    eps_schedule = [float(e) for e in eps_schedule]
    if any(e <= 0 for e in eps_schedule):
        raise ValueError("eps schedule entries must be positive")
    if any(b >= a for a, b in zip(eps_schedule, eps_schedule[1:])):
        raise ValueError("eps schedule must be strictly decreasing")
    rows = []
    for eps in eps_schedule:
        usable = [k for k, z in enumerate(fam.z_seq) if abs(z) < eps * eps / 10.0]
        if not usable:
            raise ValueError(
                f"no gluing parameter satisfies |z_k| < eps^2/10 for eps={eps:g}; "
                "extend the family"
            )
        k = usable[-1]
        z = fam.z_seq[k]
        neck = neck_laurent(fam.polys[k], z, n_max)
        energy = annulus_energy(neck, abs(z) / eps, eps)
        if len(usable) >= 2:
            k_prev = usable[-2]
            z_prev = fam.z_seq[k_prev]
            prev = annulus_energy(neck_laurent(fam.polys[k_prev], z_prev, n_max),
                                  abs(z_prev) / eps, eps)
            stable = abs(energy - prev) <= 0.1 * (abs(prev) + 1e-300)
        else:
            stable = True
        rows.append(EnergyRow(eps, k, abs(z), energy, stable))
    monotone = all(b.energy <= a.energy * (1.0 + 1e-9) + 1e-15 for a, b in zip(rows, rows[1:]))
    passed = monotone and all(r.stable for r in rows) and rows[-1].energy <= tol
    return EnergyReport(tuple(rows), passed)


@dataclass(frozen=True)
class NonseparatingCycle:
    """Contract a handle of one component into a self-node."""

    component: int


@dataclass(frozen=True)
class SeparatingCycle:
    """Split one component in two, joined by a fresh node.

    ``genus_first`` goes to the first half; the special points whose ids
    appear in ``points_first`` stay with it, the rest move to the second
    half (appended at the end of the component list).
    """

    component: int
    genus_first: int
    points_first: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "points_first", frozenset(self.points_first))


def _fresh_ids(cfg: NodalConfig, component: int, count: int) -> list:
    used = {pid for pair in cfg.nodes for ci, pid in pair if ci == component}
    used |= {pid for ci, pid in cfg.marks if ci == component}
    out, candidate = [], 0
    while len(out) < count:
        if candidate not in used:
            out.append(candidate)
        candidate += 1
    return out


def _contract_nonseparating(cfg: NodalConfig, cyc: NonseparatingCycle) -> NodalConfig:
    i = cyc.component
    if not (0 <= i < len(cfg.components)):
        raise ValueError(f"component index {i} out of range")
    comp = cfg.components[i]
    if comp.genus == 0:
        raise ValueError("nonseparating contraction needs a component of genus >= 1")
    pid1, pid2 = _fresh_ids(cfg, i, 2)
    components = list(cfg.components)
    components[i] = Component(comp.genus - 1, comp.ghost)
    nodes = list(cfg.nodes) + [((i, pid1), (i, pid2))]
    return NodalConfig(tuple(components), tuple(nodes), cfg.marks)


def _contract_separating(cfg: NodalConfig, cyc: SeparatingCycle) -> NodalConfig:
    i = cyc.component
    if not (0 <= i < len(cfg.components)):
        raise ValueError(f"component index {i} out of range")
    comp = cfg.components[i]
    if not (0 <= cyc.genus_first <= comp.genus):
        raise ValueError(f"genus split {cyc.genus_first} outside 0..{comp.genus}")
    new_index = len(cfg.components)
    components = list(cfg.components)
    components[i] = Component(cyc.genus_first, comp.ghost)
    components.append(Component(comp.genus - cyc.genus_first, comp.ghost))

    def relocate(ci: int, pid: int) -> tuple:
        if ci != i or pid in cyc.points_first:
            return (ci, pid)
        return (new_index, pid)

    nodes = [tuple(relocate(ci, pid) for ci, pid in pair) for pair in cfg.nodes]
    marks = [relocate(ci, pid) for ci, pid in cfg.marks]
    joint_first = _fresh_ids(cfg, i, 1)[0]
    joint_second = _fresh_ids(cfg, i, 2)[1]
    nodes.append(((i, joint_first), (new_index, joint_second)))
    return NodalConfig(tuple(components), tuple(nodes), tuple(marks))


def apply_deformation(cfg_src: NodalConfig, cycles) -> NodalConfig:
    """Contract vanishing cycles in order, returning the degenerated
    configuration; the arithmetic genus is preserved by each step."""
    cfg = cfg_src
    for cyc in cycles:
        if isinstance(cyc, NonseparatingCycle):
            cfg = _contract_nonseparating(cfg, cyc)
        elif isinstance(cyc, SeparatingCycle):
            cfg = _contract_separating(cfg, cyc)
        else:
            raise ValueError(f"unknown cycle type {type(cyc).__name__}")
    return cfg
