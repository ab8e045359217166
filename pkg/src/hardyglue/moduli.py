"""Marked nodal configurations, stability, and index/dimension formulas.

A `NodalConfig` is the combinatorial shadow of a marked nodal surface:
component genera with ghost flags, node pairs, and marked points.  The
numeric side collects the closed-form dimension counts (moduli dimension,
Riemann-Roch indices, Teichmuller dimension, isotropy groups, core slice
dimensions) and the Hardy-triple construction that realizes the
sphere/line-bundle indices as concrete subspace triples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fredholm import DEFAULT_RANK_TOL, SubspaceTriple

__all__ = [
    "Component",
    "NodalConfig",
    "TargetData",
    "IsotropyGroup",
    "LineBundleTriple",
    "arithmetic_genus",
    "special_point_count",
    "is_stable_map",
    "moduli_dimension",
    "riemann_roch_index",
    "isotropy_group",
    "teichmuller_dim",
    "core_slice_dims",
    "hardy_triple_for_line_bundle",
    "hardy_sphere_triple",
]


@dataclass(frozen=True)
class Component:
    genus: int
    ghost: bool = False

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError(f"component genus must be nonnegative, got {self.genus}")


@dataclass(frozen=True)
class NodalConfig:
    """Combinatorial marked nodal surface.

    ``nodes`` are unordered pairs of (component index, point id); ``marks``
    are single (component index, point id) entries.  Point ids must be
    distinct per component across nodes and marks, and the dual graph
    (components as vertices, nodes as edges) must be connected.
    """

    components: tuple
    nodes: tuple = field(default_factory=tuple)
    marks: tuple = field(default_factory=tuple)

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Component) else Component(*c) for c in self.components)
        if not comps:
            raise ValueError("configuration needs at least one component")
        object.__setattr__(self, "components", comps)
        nodes = tuple(tuple((int(ci), int(pid)) for ci, pid in pair) for pair in self.nodes)
        marks = tuple((int(ci), int(pid)) for ci, pid in self.marks)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "marks", marks)
        seen = set()
        for pair in nodes:
            if len(pair) != 2:
                raise ValueError(f"node must pair two points, got {pair}")
            for ci, pid in pair:
                self._check_point(ci, pid, seen)
        for ci, pid in marks:
            self._check_point(ci, pid, seen)
        if not self._connected():
            raise ValueError("dual graph of the configuration is not connected")

    def _check_point(self, ci: int, pid: int, seen: set):
        if not (0 <= ci < len(self.components)):
            raise ValueError(f"component index {ci} out of range")
        key = (ci, pid)
        if key in seen:
            raise ValueError(f"point id {pid} on component {ci} used twice")
        seen.add(key)

    def _connected(self) -> bool:
        n = len(self.components)
        adj = {i: set() for i in range(n)}
        for (ci, _), (cj, _) in self.nodes:
            adj[ci].add(cj)
            adj[cj].add(ci)
        stack, visited = [0], {0}
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in visited:
                    visited.add(nb)
                    stack.append(nb)
        return len(visited) == n

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_marks(self) -> int:
        return len(self.marks)


@dataclass(frozen=True)
class TargetData:
    """Target dimension m and the pairing of c1 of the tangent bundle with
    the map's homology class."""

    m: int
    c1d: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"target dimension must be nonnegative, got {self.m}")


def special_point_count(cfg: NodalConfig, component: int) -> int:
    """Marks plus node endpoints carried by one component (a self-node
    contributes two)."""
    count = sum(1 for ci, _ in cfg.marks if ci == component)
    for pair in cfg.nodes:
        count += sum(1 for ci, _ in pair if ci == component)
    return count


def arithmetic_genus(cfg: NodalConfig) -> int:
    """Genus of the nodal quotient: sum of genera + #nodes - #components + 1."""
    total = sum(c.genus for c in cfg.components)
    return total + cfg.n_nodes - len(cfg.components) + 1


def is_stable_map(cfg: NodalConfig) -> bool:
    """Finite automorphisms: every ghost genus-0 component carries at least
    three special points and every ghost genus-1 component at least one."""
    for i, comp in enumerate(cfg.components):
        if not comp.ghost:
            continue
        special = special_point_count(cfg, i)
        if comp.genus == 0 and special < 3:
            return False
        if comp.genus == 1 and special < 1:
            return False
    return True


def moduli_dimension(g: int, n: int, target: TargetData) -> int:
    """(g-1)(3-m) + <c1, d> + n."""
    return (g - 1) * (3 - target.m) + target.c1d + n


def riemann_roch_index(target: TargetData, g: int, field: str = "complex") -> int:
    """Riemann-Roch index of the linearized operator: m(1-g) + <c1, d>
    over C, twice that over R."""
    complex_index = target.m * (1 - g) + target.c1d
    if field == "complex":
        return complex_index
    if field == "real":
        return 2 * complex_index
    raise ValueError(f"field must be 'complex' or 'real', got {field!r}")


@dataclass(frozen=True)
class IsotropyGroup:
    name: str
    complex_dim: int


def isotropy_group(g: int, n: int) -> IsotropyGroup:
    """Identity component of the isotropy group of a (g, n) surface."""
    if n > 2 - 2 * g:
        return IsotropyGroup("trivial", 0)
    if g == 1 and n == 0:
        return IsotropyGroup("T^2", 1)
    if g == 0 and n == 2:
        return IsotropyGroup("C*", 1)
    if g == 0 and n == 1:
        return IsotropyGroup("C* x| C", 2)
    if g == 0 and n == 0:
        return IsotropyGroup("PSL(2,C)", 3)
    raise ValueError(f"no isotropy entry for (g, n) = ({g}, {n})")


def teichmuller_dim(g: int, n: int) -> int:
    """dim A - dim G = 3g - 3 + n in all cases (virtual: may be negative)."""
    return 3 * g - 3 + n


def core_slice_dims(g: int, n: int, k: int, target: TargetData) -> tuple:
    """Slice dimensions with k nodes: (3g-3+n-k, (m-3)(1-g) + <c1,d> + n - k).

    The second entry plus k recovers the moduli dimension exactly.
    """
    dim_core = 3 * g - 3 + n - k
    dim_x0 = (target.m - 3) * (1 - g) + target.c1d + n - k
    return dim_core, dim_x0


@dataclass(frozen=True)
class LineBundleTriple:
    triple: SubspaceTriple
    expected_index: int


def _mode_columns(n_max: int, modes) -> np.ndarray:
    dim = 2 * n_max + 1
    cols = np.zeros((dim, len(modes)), dtype=complex)
    for j, n in enumerate(modes):
        cols[n + n_max, j] = 1.0
    return cols


def hardy_triple_for_line_bundle(deg2d: int, n_max: int,
                                 rank_tol: float = DEFAULT_RANK_TOL) -> LineBundleTriple:
    """Hardy triple of a degree-``deg2d`` twisted bundle on the sphere.

    Ambient space: Laurent modes -n_max..n_max.  One side spans the modes
    extending over the inner disk (n >= 0); the other spans the modes of a
    twisted section extending over the outer disk (n <= deg2d).  They meet
    in the polynomials of degree <= deg2d, so the index is deg2d + 1,
    independent of the truncation as long as n_max > deg2d.
    """
    if deg2d < 0:
        raise ValueError(f"twist degree must be nonnegative, got {deg2d}")
    if n_max <= deg2d:
        raise ValueError(f"truncation {n_max} must exceed the twist degree {deg2d}")
    inner = _mode_columns(n_max, range(0, n_max + 1))
    outer = _mode_columns(n_max, range(-n_max, deg2d + 1))
    triple = SubspaceTriple(2 * n_max + 1, inner, outer, rank_tol)
    return LineBundleTriple(triple, deg2d + 1)


def hardy_sphere_triple(m: int, n_max: int, rank_tol: float = DEFAULT_RANK_TOL) -> SubspaceTriple:
    """Hardy split of sphere loops in C^m: nonnegative modes against
    nonpositive modes; they meet exactly in the constants."""
    if m < 1:
        raise ValueError(f"target dimension must be positive, got {m}")
    dim = 2 * n_max + 1

    def block(modes) -> np.ndarray:
        cols = np.zeros((dim * m, len(modes) * m), dtype=complex)
        for j, n in enumerate(modes):
            for comp in range(m):
                cols[(n + n_max) * m + comp, j * m + comp] = 1.0
        return cols

    plus_const = block(list(range(0, n_max + 1)))
    minus_const = block(list(range(-n_max, 1)))
    return SubspaceTriple(dim * m, plus_const, minus_const, rank_tol)
