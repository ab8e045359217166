"""Fredholm triples and quadruples in finite dimensions.

A triple is an ambient space ``C^N`` with two subspaces given by full-rank
basis matrices.  In finite dimensions every triple is Fredholm; its index
``dim(E' ∩ E'') - dim(E/(E'+E''))`` always equals ``p + q - N``, which the
test suite asserts as the Euler identity.  On top of the triples sit the
graph-form local quadruples ``X'' = {x'=0, xi=0}``,
``X' = {x''=0, xi=f(u,x')}`` with the distinguished intersection equation
``f(u, 0) = 0``, their finite-dimensional reductions
``U' = {(u,0,0,f(u,0))}``, ``U'' = {(u,0,0,0)}``, exactness tests for
morphisms, the ``+ dim Lambda`` parametrized index relation, and a damped
Gauss-Newton solver for the intersection equation.

All rank and nullspace decisions go through singular-value thresholding
with a single relative tolerance, so results do not depend on the choice
of basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "SubspaceTriple",
    "TripleIndex",
    "triple_index",
    "StabilityResult",
    "index_stability_check",
    "NormalSplitting",
    "normal_coordinates",
    "GraphPairLocal",
    "PolynomialMap",
    "FiniteDimReduction",
    "finite_dim_reduction",
    "TangentCheck",
    "NewtonResult",
    "intersect_newton",
    "exactness_check",
    "parametrized_index",
    "lambda_product_triple",
    "polynomial_test_set",
    "nullspace",
    "orthonormal_range",
    "subspace_intersection",
    "matrix_rank",
]

DEFAULT_RANK_TOL = 1e-9


def _as_basis(mat, n_rows: int, name: str) -> np.ndarray:
    m = np.asarray(mat, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    if m.size == 0:
        m = m.reshape(n_rows, 0)
    if m.shape[0] != n_rows:
        raise ValueError(f"{name}: expected {n_rows} rows, got shape {m.shape}")
    return m


def matrix_rank(M: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Rank by singular-value thresholding relative to the largest value."""
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def nullspace(M: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the kernel, columns of shape (n_cols, nullity)."""
    n_cols = M.shape[1]
    if n_cols == 0:
        return np.zeros((0, 0), dtype=complex)
    if M.size == 0:
        return np.eye(n_cols, dtype=complex)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > rank_tol * s[0]))
    return vh[rank:].conj().T


def orthonormal_range(M: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column span."""
    if M.shape[1] == 0 or M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    rank = int(np.sum(s > rank_tol * s[0]))
    return u[:, :rank]


def subspace_intersection(B1: np.ndarray, B2: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis of ``span(B1) ∩ span(B2)``.

    Vectors in the intersection are ``B1 a = B2 b``; they are read off the
    kernel of the stacked matrix ``[B1 | -B2]``.
    """
    p = B1.shape[1]
    if p == 0 or B2.shape[1] == 0:
        return np.zeros((B1.shape[0], 0), dtype=complex)
    null = nullspace(np.hstack([B1, -B2]), rank_tol)
    if null.shape[1] == 0:
        return np.zeros((B1.shape[0], 0), dtype=complex)
    return orthonormal_range(B1 @ null[:p], rank_tol)


@dataclass(frozen=True)
class SubspaceTriple:
    """Ambient dimension plus two full-column-rank subspace bases."""

    ambient_dim: int
    basis_prime: np.ndarray
    basis_dprime: np.ndarray
    rank_tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError(f"ambient dimension must be positive, got {self.ambient_dim}")
        bp = _as_basis(self.basis_prime, self.ambient_dim, "basis_prime")
        bq = _as_basis(self.basis_dprime, self.ambient_dim, "basis_dprime")
        for name, b in (("basis_prime", bp), ("basis_dprime", bq)):
            if b.shape[1] == 0:
                continue
            s = np.linalg.svd(b, compute_uv=False)
            if s[0] == 0.0 or s[-1] <= self.rank_tol * s[0]:
                raise ValueError(f"{name} is rank deficient (smallest/largest singular value "
                                 f"{0.0 if s[0] == 0 else s[-1] / s[0]:.3e} <= rank_tol)")
        for b in (bp, bq):
            b.flags.writeable = False
        object.__setattr__(self, "basis_prime", bp)
        object.__setattr__(self, "basis_dprime", bq)

    @property
    def p(self) -> int:
        return self.basis_prime.shape[1]

    @property
    def q(self) -> int:
        return self.basis_dprime.shape[1]


class TripleIndex(NamedTuple):
    dim_cap: int
    codim_sum: int
    index: int


def triple_index(t: SubspaceTriple) -> TripleIndex:
    """Intersection dimension, codimension of the sum, and their difference.

    ``dim_cap`` is the nullity of ``[B' | -B'']`` and ``codim_sum`` is
    ``N - rank[B' | B'']``; the index ``dim_cap - codim_sum`` satisfies the
    Euler identity ``p + q - N`` exactly.
    """
    stacked = np.hstack([t.basis_prime, t.basis_dprime])
    rank = matrix_rank(stacked, t.rank_tol)
    dim_cap = t.p + t.q - rank
    codim_sum = t.ambient_dim - rank
    return TripleIndex(dim_cap, codim_sum, dim_cap - codim_sum)


@dataclass(frozen=True)
class StabilityResult:
    verdict: str  # "stable" | "changed" | "inconclusive"
    min_gap: float
    trials: int

    def __bool__(self) -> bool:
        return self.verdict == "stable"


def _stacked_gap(t: SubspaceTriple) -> float:
    """Relative spectral gap protecting the rank decision of [B'|B'']."""
    stacked = np.hstack([t.basis_prime, t.basis_dprime])
    if stacked.size == 0:
        return 1.0
    s = np.linalg.svd(stacked, compute_uv=False)
    if s[0] == 0.0:
        return 0.0
    s = s / s[0]
    rank = int(np.sum(s > t.rank_tol))
    if rank == 0:
        return 0.0
    if rank < s.size:
        return float(s[rank - 1] - s[rank])
    return float(s[rank - 1])


def index_stability_check(t: SubspaceTriple, eps: float, trials: int = 100, seed: int = 0) -> StabilityResult:
    """Check that (dim_cap, codim_sum, index) survive random basis
    perturbations of relative size ``eps``.

    The verdict is only conclusive when ``eps < 0.1 * gap`` for the
    spectral gap of the stacked basis matrix; below that threshold a
    perturbation could flip the rank decision itself and the check reports
    "inconclusive" together with the observed gap.
    """
    gap = _stacked_gap(t)
    base = triple_index(t)
    rng = np.random.default_rng(seed)

    def perturb(b: np.ndarray) -> np.ndarray:
        if b.size == 0:
            return b
        g = rng.standard_normal(b.shape) + 1j * rng.standard_normal(b.shape)
        return b + eps * (np.linalg.norm(b) / np.linalg.norm(g)) * g

    changed = False
    for _ in range(trials):
        try:
            t2 = SubspaceTriple(t.ambient_dim, perturb(t.basis_prime), perturb(t.basis_dprime), t.rank_tol)
        except ValueError:
            changed = True
            break
        if triple_index(t2) != base:
            changed = True
            break
    if eps >= 0.1 * gap:
        return StabilityResult("inconclusive", gap, trials)
    return StabilityResult("changed" if changed else "stable", gap, trials)


@dataclass(frozen=True)
class NormalSplitting:
    """Orthonormal blocks splitting the ambient space along a triple.

    ``cap`` spans ``E' ∩ E''``, ``prime_comp`` its orthogonal complement
    inside E', ``dprime_comp`` the analogue in E'', and ``outer`` the
    orthogonal complement of ``E' + E''``.  The middle two blocks are each
    orthogonal to ``cap`` but in general not to each other; all four
    together form a basis of the ambient space.
    """

    cap: np.ndarray
    prime_comp: np.ndarray
    dprime_comp: np.ndarray
    outer: np.ndarray

    @property
    def dims(self) -> tuple:
        return (self.cap.shape[1], self.prime_comp.shape[1],
                self.dprime_comp.shape[1], self.outer.shape[1])

    def basis(self) -> np.ndarray:
        return np.hstack([self.cap, self.prime_comp, self.dprime_comp, self.outer])

    def projections(self) -> list:
        """Projections onto the four blocks along the direct sum; they add
        up to the identity."""
        S = self.basis()
        Sinv = np.linalg.inv(S)
        out = []
        start = 0
        for d in self.dims:
            block = S[:, start:start + d]
            out.append(block @ Sinv[start:start + d])
            start += d
        return out


def _complement_within(span_basis: np.ndarray, cap: np.ndarray, rank_tol: float) -> np.ndarray:
    if span_basis.shape[1] == 0 or cap.shape[1] == 0:
        return span_basis
    residue = span_basis - cap @ (cap.conj().T @ span_basis)
    # span_basis is orthonormal, so genuine complement directions have
    # singular values near 1; threshold absolutely, not against the largest
    # singular value of the (possibly pure-roundoff) residue.
    if residue.size == 0:
        return np.zeros((span_basis.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(residue, full_matrices=False)
    rank = int(np.sum(s > rank_tol))
    return u[:, :rank]


def normal_coordinates(t: SubspaceTriple) -> NormalSplitting:
    """Orthonormal splitting of the ambient space adapted to the triple."""
    cap = subspace_intersection(t.basis_prime, t.basis_dprime, t.rank_tol)
    q_prime = orthonormal_range(t.basis_prime, t.rank_tol)
    q_dprime = orthonormal_range(t.basis_dprime, t.rank_tol)
    prime_comp = _complement_within(q_prime, cap, t.rank_tol)
    dprime_comp = _complement_within(q_dprime, cap, t.rank_tol)
    stacked = np.hstack([t.basis_prime, t.basis_dprime])
    if stacked.size == 0:
        outer = np.eye(t.ambient_dim, dtype=complex)
    else:
        u, s, _ = np.linalg.svd(stacked, full_matrices=True)
        rank = 0 if s[0] == 0.0 else int(np.sum(s > t.rank_tol * s[0]))
        outer = u[:, rank:]
    split = NormalSplitting(cap, prime_comp, dprime_comp, outer)
    if sum(split.dims) != t.ambient_dim:
        raise ValueError(f"normal splitting dims {split.dims} do not sum to N={t.ambient_dim}; "
                         "the triple is too ill-conditioned for rank_tol")
    return split


def exactness_check(dh: np.ndarray, source: SubspaceTriple, target: SubspaceTriple,
                    rank_tol: float | None = None) -> bool:
    """Exactness of a linear morphism between triples.

    True iff ``dh`` maps the intersection block of the source bijectively
    onto the intersection block of the target and the induced map between
    the sum-quotients (computed on the orthogonal complements) is
    bijective.  Both conditions are rank decisions, hence invariant under
    change of basis of the four subspaces.
    """
    tol = rank_tol if rank_tol is not None else max(source.rank_tol, target.rank_tol)
    dh = np.asarray(dh, dtype=complex)
    if dh.shape != (target.ambient_dim, source.ambient_dim):
        raise ValueError(f"dh has shape {dh.shape}, expected "
                         f"({target.ambient_dim}, {source.ambient_dim})")
    ns = normal_coordinates(source)
    nt = normal_coordinates(target)
    c_s, c_t = ns.cap.shape[1], nt.cap.shape[1]
    q_s, q_t = ns.outer.shape[1], nt.outer.shape[1]
    if c_s != c_t or q_s != q_t:
        return False
    if c_s > 0 and matrix_rank(nt.cap.conj().T @ dh @ ns.cap, tol) != c_s:
        return False
    if q_s > 0 and matrix_rank(nt.outer.conj().T @ dh @ ns.outer, tol) != q_s:
        return False
    return True


def parametrized_index(base_triple_index: int, dim_lambda: int) -> int:
    """Index of a triple swept over a dim_lambda-parameter family with
    submersive projections: the base index plus dim_lambda."""
    if dim_lambda < 0:
        raise ValueError("parameter dimension must be nonnegative")
    return int(base_triple_index) + int(dim_lambda)


def lambda_product_triple(t: SubspaceTriple, dim_lambda: int) -> SubspaceTriple:
    """Explicit product triple over a parameter space: the Lambda directions
    are adjoined to the ambient space and to both subspaces."""
    if dim_lambda < 0:
        raise ValueError("parameter dimension must be nonnegative")
    L = dim_lambda
    N = t.ambient_dim
    eye = np.eye(L, dtype=complex)

    def extend(basis: np.ndarray) -> np.ndarray:
        top = np.hstack([eye, np.zeros((L, basis.shape[1]), dtype=complex)])
        bottom = np.hstack([np.zeros((N, L), dtype=complex), basis])
        return np.vstack([top, bottom])

    return SubspaceTriple(N + L, extend(t.basis_prime), extend(t.basis_dprime), t.rank_tol)


# ---------------------------------------------------------------------------
# graph-form local quadruples


@dataclass(frozen=True)
class GraphPairLocal:
    """Local graph data for a pair of submanifolds through the origin.

    ``dims = (d_u, d_xprime, d_xdprime, d_xi)`` fixes the coordinate
    blocks; ``f(u, xprime) -> xi`` is the graph map with ``f(0,0) = 0``.
    Jacobians come from central finite differences unless an exact ``jac``
    callable (returning the pair of block Jacobians) is supplied.  The
    model requires ``df(0,0) = 0``; pass ``allow_nonflat=True`` to skip
    that check for maps that are not in straightened form.
    """

    dims: tuple
    f: Callable
    jac: Callable | None = None
    fd_step: float = 1e-6
    allow_nonflat: bool = False

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 4 or any(d < 0 for d in dims):
            raise ValueError(f"dims must be four nonnegative integers, got {self.dims}")
        object.__setattr__(self, "dims", dims)
        u0 = np.zeros(dims[0], dtype=complex)
        xp0 = np.zeros(dims[1], dtype=complex)
        f0 = self.evaluate(u0, xp0)
        if np.linalg.norm(f0) > 1e-12:
            raise ValueError(f"graph map must satisfy f(0,0)=0, got |f(0,0)|={np.linalg.norm(f0):.3e}")
        if not self.allow_nonflat:
            ju, jxp = self.jacobian(u0, xp0)
            dnorm = max(np.linalg.norm(ju), np.linalg.norm(jxp)) if (ju.size or jxp.size) else 0.0
            if dnorm > 1e-8:
                raise ValueError(f"graph map must satisfy df(0,0)=0, got |df(0,0)|={dnorm:.3e} "
                                 "(use allow_nonflat=True for unstraightened data)")

    @property
    def d_u(self) -> int:
        return self.dims[0]

    @property
    def d_xi(self) -> int:
        return self.dims[3]

    def evaluate(self, u, xprime) -> np.ndarray:
        val = np.asarray(self.f(np.asarray(u, dtype=complex), np.asarray(xprime, dtype=complex)),
                         dtype=complex).reshape(-1)
        if val.shape != (self.dims[3],):
            raise ValueError(f"graph map returned shape {val.shape}, expected ({self.dims[3]},)")
        return val

    def jacobian(self, u, xprime) -> tuple:
        """Block Jacobians (df/du, df/dxprime) at (u, xprime)."""
        u = np.asarray(u, dtype=complex)
        xprime = np.asarray(xprime, dtype=complex)
        if self.jac is not None:
            ju, jxp = self.jac(u, xprime)
            return (np.asarray(ju, dtype=complex).reshape(self.dims[3], self.dims[0]),
                    np.asarray(jxp, dtype=complex).reshape(self.dims[3], self.dims[1]))
        h = self.fd_step * (1.0 + np.linalg.norm(np.concatenate([u, xprime])))
        ju = np.zeros((self.dims[3], self.dims[0]), dtype=complex)
        for j in range(self.dims[0]):
            e = np.zeros(self.dims[0], dtype=complex)
            e[j] = h
            ju[:, j] = (self.evaluate(u + e, xprime) - self.evaluate(u - e, xprime)) / (2.0 * h)
        jxp = np.zeros((self.dims[3], self.dims[1]), dtype=complex)
        for j in range(self.dims[1]):
            e = np.zeros(self.dims[1], dtype=complex)
            e[j] = h
            jxp[:, j] = (self.evaluate(u, xprime + e) - self.evaluate(u, xprime - e)) / (2.0 * h)
        return ju, jxp


@dataclass(frozen=True)
class PolynomialMap:
    """Polynomial graph map with exact Jacobians.

    ``terms[i]`` lists the monomials of the i-th output component as
    ``(coeff, u_exponents, xprime_exponents)``.  Usable directly as the
    ``f``/``jac`` pair of a `GraphPairLocal` via :meth:`as_graph`.
    """

    dims: tuple
    terms: tuple

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        norm_terms = []
        for comp in self.terms:
            rows = []
            for coeff, u_pows, xp_pows in comp:
                u_pows = tuple(int(p) for p in u_pows)
                xp_pows = tuple(int(p) for p in xp_pows)
                if len(u_pows) != dims[0] or len(xp_pows) != dims[1]:
                    raise ValueError("exponent tuples must match (d_u, d_xprime)")
                rows.append((complex(coeff), u_pows, xp_pows))
            norm_terms.append(tuple(rows))
        if len(norm_terms) != dims[3]:
            raise ValueError(f"need {dims[3]} components, got {len(norm_terms)}")
        object.__setattr__(self, "terms", tuple(norm_terms))

    @staticmethod
    def _monomial(vals: np.ndarray, pows: tuple) -> complex:
        out = 1.0 + 0j
        for v, p in zip(vals, pows):
            if p:
                out *= v**p
        return out

    def __call__(self, u, xprime) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        xp = np.asarray(xprime, dtype=complex)
        out = np.zeros(self.dims[3], dtype=complex)
        for i, comp in enumerate(self.terms):
            for coeff, u_pows, xp_pows in comp:
                out[i] += coeff * self._monomial(u, u_pows) * self._monomial(xp, xp_pows)
        return out

    def jacobian(self, u, xprime) -> tuple:
        u = np.asarray(u, dtype=complex)
        xp = np.asarray(xprime, dtype=complex)
        ju = np.zeros((self.dims[3], self.dims[0]), dtype=complex)
        jxp = np.zeros((self.dims[3], self.dims[1]), dtype=complex)
        for i, comp in enumerate(self.terms):
            for coeff, u_pows, xp_pows in comp:
                for k in range(self.dims[0]):
                    if u_pows[k]:
                        dropped = tuple(p - 1 if j == k else p for j, p in enumerate(u_pows))
                        ju[i, k] += coeff * u_pows[k] * self._monomial(u, dropped) * self._monomial(xp, xp_pows)
                for k in range(self.dims[1]):
                    if xp_pows[k]:
                        dropped = tuple(p - 1 if j == k else p for j, p in enumerate(xp_pows))
                        jxp[i, k] += coeff * xp_pows[k] * self._monomial(u, u_pows) * self._monomial(xp, dropped)
        return ju, jxp

    def as_graph(self, allow_nonflat: bool = False) -> GraphPairLocal:
        return GraphPairLocal(self.dims, self, jac=self.jacobian, allow_nonflat=allow_nonflat)


@dataclass(frozen=True)
class NewtonResult:
    converged: bool
    u: np.ndarray
    residual: float
    iterations: int


def intersect_newton(g: GraphPairLocal, seed, max_iter: int = 100, tol: float = 1e-12) -> NewtonResult:
    """Solve ``f(u, 0) = 0`` by damped Gauss-Newton.

    Uses Levenberg damping on the normal equations so the generic
    degeneracy ``df(0,0) = 0`` at the root does not break the step; double
    roots converge linearly, simple roots quadratically once the damping
    has wound down.
    """
    u = np.asarray(seed, dtype=complex).reshape(-1)
    if u.shape != (g.dims[0],):
        raise ValueError(f"seed has shape {u.shape}, expected ({g.dims[0]},)")
    xp0 = np.zeros(g.dims[1], dtype=complex)
    r = g.evaluate(u, xp0)
    rnorm = float(np.linalg.norm(r))
    mu = 1e-3
    for it in range(max_iter):
        if rnorm <= tol:
            return NewtonResult(True, u, rnorm, it)
        ju, _ = g.jacobian(u, xp0)
        gram = ju.conj().T @ ju
        rhs = -(ju.conj().T @ r)
        accepted = False
        for _ in range(40):
            try:
                step = np.linalg.solve(gram + mu * np.eye(g.dims[0]), rhs)
            except np.linalg.LinAlgError:
                mu *= 10.0
                continue
            cand = u + step
            rc = g.evaluate(cand, xp0)
            rcnorm = float(np.linalg.norm(rc))
            if rcnorm < rnorm:
                u, r, rnorm = cand, rc, rcnorm
                mu = max(mu / 3.0, 1e-14)
                accepted = True
                break
            mu *= 10.0
            if mu > 1e14:
                break
        if not accepted:
            return NewtonResult(rnorm <= tol, u, rnorm, it + 1)
    return NewtonResult(rnorm <= tol, u, rnorm, max_iter)


@dataclass(frozen=True)
class TangentCheck:
    dim_cap_reduced: int
    dim_cap_full: int
    subspace_gap: float
    quotient_reduced: int
    quotient_full: int

    @property
    def ok(self) -> bool:
        return (self.dim_cap_reduced == self.dim_cap_full
                and self.quotient_reduced == self.quotient_full
                and self.subspace_gap <= 1e-6)


@dataclass(frozen=True)
class FiniteDimReduction:
    """Finite-dimensional reduction of a graph-form quadruple.

    In the normal coordinates ``(u, x', x'', xi)`` the reduction is
    ``U = {(u,0,0,xi)}``, ``U' = {(u,0,0,f(u,0))}``, ``U'' = {(u,0,0,0)}``;
    the intersection of the original pair is cut out by ``f(u, 0) = 0``,
    and at every solution the tangent intersections and sum-quotients of
    the reduced pair match those of the full pair.
    """

    graph: GraphPairLocal

    @property
    def dims(self) -> tuple:
        return self.graph.dims

    def _split(self, point) -> tuple:
        du, dxp, dxd, dxi = self.dims
        point = np.asarray(point, dtype=complex).reshape(-1)
        if point.shape != (du + dxp + dxd + dxi,):
            raise ValueError(f"point has shape {point.shape}, expected ({du + dxp + dxd + dxi},)")
        return (point[:du], point[du:du + dxp], point[du + dxp:du + dxp + dxd],
                point[du + dxp + dxd:])

    def contains_U(self, point, tol: float = 1e-9) -> bool:
        u, xp, xd, xi = self._split(point)
        scale = 1.0 + float(np.linalg.norm(np.concatenate([u, xi])))
        return bool(np.linalg.norm(xp) <= tol * scale and np.linalg.norm(xd) <= tol * scale)

    def contains_Uprime(self, point, tol: float = 1e-9) -> bool:
        u, xp, xd, xi = self._split(point)
        if not self.contains_U(point, tol):
            return False
        target = self.graph.evaluate(u, np.zeros(self.dims[1], dtype=complex))
        scale = 1.0 + float(np.linalg.norm(u))
        return bool(np.linalg.norm(xi - target) <= tol * scale)

    def contains_Udprime(self, point, tol: float = 1e-9) -> bool:
        u, xp, xd, xi = self._split(point)
        scale = 1.0 + float(np.linalg.norm(u))
        return bool(self.contains_U(point, tol) and np.linalg.norm(xi) <= tol * scale)

    def intersection_residual(self, u) -> float:
        """Norm of the intersection equation f(u, 0)."""
        return float(np.linalg.norm(self.graph.evaluate(u, np.zeros(self.dims[1], dtype=complex))))

    def solve(self, seed, max_iter: int = 100, tol: float = 1e-12) -> NewtonResult:
        return intersect_newton(self.graph, seed, max_iter=max_iter, tol=tol)

    def tangent_bases(self, u) -> dict:
        """Ambient-coordinate tangent bases of U', U'', X', X'' at (u,0,0,0)."""
        du, dxp, dxd, dxi = self.dims
        D = du + dxp + dxd + dxi
        ju, jxp = self.graph.jacobian(u, np.zeros(dxp, dtype=complex))

        def rows(u_block, xp_block, xd_block, xi_block, width):
            mat = np.zeros((D, width), dtype=complex)
            mat[:du] = u_block
            mat[du:du + dxp] = xp_block
            mat[du + dxp:du + dxp + dxd] = xd_block
            mat[du + dxp + dxd:] = xi_block
            return mat

        eye_u = np.eye(du, dtype=complex)
        z = np.zeros
        t_uprime = rows(eye_u, z((dxp, du)), z((dxd, du)), ju, du)
        t_udprime = rows(eye_u, z((dxp, du)), z((dxd, du)), z((dxi, du)), du)
        t_xprime = rows(np.hstack([eye_u, z((du, dxp))]),
                        np.hstack([z((dxp, du)), np.eye(dxp, dtype=complex)]),
                        z((dxd, du + dxp)),
                        np.hstack([ju, jxp]), du + dxp)
        t_xdprime = rows(np.hstack([eye_u, z((du, dxd))]),
                         z((dxp, du + dxd)),
                         np.hstack([z((dxd, du)), np.eye(dxd, dtype=complex)]),
                         z((dxi, du + dxd)), du + dxd)
        t_u = rows(np.hstack([eye_u, z((du, dxi))]),
                   z((dxp, du + dxi)), z((dxd, du + dxi)),
                   np.hstack([z((dxi, du)), np.eye(dxi, dtype=complex)]), du + dxi)
        return {"U": t_u, "U'": t_uprime, "U''": t_udprime, "X'": t_xprime, "X''": t_xdprime}

    def tangent_check(self, u, rank_tol: float = DEFAULT_RANK_TOL) -> TangentCheck:
        """Verify the reduction identities at a solution of f(u,0)=0:
        ``T U' ∩ T U'' = T X' ∩ T X''`` and equality of the sum-quotient
        dimensions, all by rank computations."""
        bases = self.tangent_bases(u)
        du, dxp, dxd, dxi = self.dims
        D = du + dxp + dxd + dxi
        cap_reduced = subspace_intersection(bases["U'"], bases["U''"], rank_tol)
        cap_full = subspace_intersection(bases["X'"], bases["X''"], rank_tol)
        gap = 0.0
        if cap_reduced.shape[1] == cap_full.shape[1] and cap_reduced.shape[1] > 0:
            s = np.linalg.svd(cap_reduced.conj().T @ cap_full, compute_uv=False)
            gap = float(abs(1.0 - np.min(s)))
        elif cap_reduced.shape[1] != cap_full.shape[1]:
            gap = 1.0
        quotient_reduced = (du + dxi) - matrix_rank(np.hstack([bases["U'"], bases["U''"]]), rank_tol)
        quotient_full = D - matrix_rank(np.hstack([bases["X'"], bases["X''"]]), rank_tol)
        return TangentCheck(cap_reduced.shape[1], cap_full.shape[1], gap,
                            quotient_reduced, quotient_full)


def finite_dim_reduction(g: GraphPairLocal) -> FiniteDimReduction:
    """Finite-dimensional reduction descriptor of a graph-form quadruple."""
    return FiniteDimReduction(g)


def polynomial_test_set() -> list:
    """Shipped polynomial intersection problems with Newton seeds.

    Used by the verification suite: every Newton solution of ``f(u,0)=0``
    must pass the tangent identities of the finite-dimensional reduction.
    """
    cases = []
    # scalar double root u^2 = 0
    double_root = PolynomialMap((1, 1, 1, 1), [[(1.0, (2,), (0,))]])
    cases.append((double_root, [np.array([0.5 + 0j]), np.array([-0.35 + 0.2j])]))
    # union of axes u1*u2 = 0 with an x'-dependent graph term
    axes = PolynomialMap((2, 1, 1, 1), [[(1.0, (1, 1), (0,)), (1.0, (0, 0), (2,))]])
    cases.append((axes, [np.array([0.4 + 0j, 0.05 + 0j]), np.array([0.03 + 0j, -0.5 + 0.1j])]))
    # isolated degenerate root of a plane quadratic system
    quad_pair = PolynomialMap((2, 0, 1, 2),
                              [[(1.0, (2, 0), ()), (-1.0, (0, 2), ())],
                               [(1.0, (1, 1), ())]])
    cases.append((quad_pair, [np.array([0.3 + 0j, 0.2 + 0j])]))
    return cases
