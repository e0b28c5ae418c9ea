"""Subspaces of the weighted function space and invariance machinery.

A :class:`Subspace` stores an orthonormal frame for the weighted inner
product.  Numerical work happens in *weighted coordinates*: scaling a
function's entries by ``weights ** 0.5`` turns the weighted inner product
into the Euclidean one, so ranks, projectors and singular values can use
plain linear algebra.  Frames are stored unscaled (as functions on the
point set).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from .actions import translate
from .errors import DegenerateGeneratorError, InvarianceError
from .groups import Subgroup
from .scenario import Scenario
from .zak import zak_base, zak_base_inv, zak_stacked, zak_stacked_inv

RANK_TOL = 1e-10
DEFAULT_TOL = 1e-9


def orthonormal_columns(
    weights: np.ndarray,
    vectors: np.ndarray,
    tol: float = RANK_TOL,
    floor: float = 0.0,
) -> np.ndarray:
    """Orthonormal frame for the span of the columns, weighted inner product.

    Deterministic: column-pivoted QR in weighted coordinates, rank cut at
    ``tol`` relative to the largest pivot.  ``floor`` is an absolute pivot
    threshold on top of the relative one; derived inputs (mask images,
    projections of unit vectors) must pass it so that a matrix of pure
    roundoff noise ranks as zero instead of relative-to-itself.
    """
    a = np.asarray(vectors, dtype=complex)
    if a.ndim != 2:
        raise ValueError("expected a matrix of column vectors")
    if a.shape[1] == 0:
        return a.copy()
    root = np.sqrt(weights)
    q, r, _ = scipy.linalg.qr(a * root[:, None], mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] <= max(floor, 0.0):
        return np.zeros((a.shape[0], 0), dtype=complex)
    rank = int(np.sum(diag > max(tol * diag[0], floor)))
    return q[:, :rank] / root[:, None]


@dataclass(frozen=True)
class Subspace:
    """A subspace given by a weighted-orthonormal frame of columns."""

    scenario: Scenario
    frame: np.ndarray  # (n_points, dim)

    @classmethod
    def span(
        cls,
        scn: Scenario,
        vectors: Sequence[np.ndarray] | np.ndarray,
        tol: float = RANK_TOL,
        floor: float = 0.0,
    ) -> "Subspace":
        mat = _as_columns(scn, vectors)
        return cls(scn, orthonormal_columns(scn.action.weights, mat, tol, floor))

    @classmethod
    def zero(cls, scn: Scenario) -> "Subspace":
        return cls(scn, np.zeros((scn.action.n_points, 0), dtype=complex))

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    @cached_property
    def _weighted_frame(self) -> np.ndarray:
        return self.frame * np.sqrt(self.scenario.action.weights)[:, None]

    @cached_property
    def projector(self) -> np.ndarray:
        """Orthogonal projector in weighted coordinates (Hermitian, idempotent)."""
        q = self._weighted_frame
        return q @ q.conj().T

    def project(self, f: np.ndarray) -> np.ndarray:
        q = self._weighted_frame
        root = np.sqrt(self.scenario.action.weights)
        fw = np.asarray(f, dtype=complex) * (root if np.ndim(f) == 1 else root[:, None])
        return (q @ (q.conj().T @ fw)) / (root if np.ndim(f) == 1 else root[:, None])

    def residual(self, f: np.ndarray) -> float:
        """Weighted norm of stuff in f outside the subspace."""
        return float(self.scenario.action.norm(np.asarray(f, dtype=complex) - self.project(f)))

    def contains(self, f: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        scale = max(1.0, self.scenario.action.norm(f))
        return self.residual(f) <= tol * scale


def _as_columns(scn: Scenario, vectors) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        mat = np.asarray(vectors, dtype=complex)
    else:
        vecs = [np.asarray(v, dtype=complex) for v in vectors]
        if not vecs:
            raise ValueError("need at least one vector")
        mat = np.column_stack(vecs)
    if mat.shape[0] != scn.action.n_points:
        raise ValueError(
            f"vectors have {mat.shape[0]} entries, space has {scn.action.n_points} points"
        )
    return mat


def span_invariant(
    scn: Scenario,
    generators: Sequence[np.ndarray] | np.ndarray,
    subgroup: Subgroup | None = None,
    tol: float = RANK_TOL,
) -> Subspace:
    """Smallest subspace containing the generators and invariant under the subgroup.

    Defaults to the base subgroup.  The span is taken over every translate
    of every generator, then orthonormalized.
    """
    if subgroup is None:
        subgroup = scn.base
    mat = _as_columns(scn, generators)
    orbit = [translate(scn.action, g, mat) for g in subgroup.elements]
    return Subspace.span(scn, np.hstack(orbit), tol)


def is_invariant(
    space: Subspace, subgroup: Subgroup, tol: float = DEFAULT_TOL
) -> tuple[bool, float]:
    """Whether the subspace is preserved by every translation in the subgroup.

    Tests the subgroup's generators on the frame columns (enough, since the
    translations form a representation and generators reach everything).
    Returns the verdict and the worst residual.
    """
    scn = space.scenario
    if space.dim == 0:
        return True, 0.0
    probes = subgroup.generators if subgroup.generators else [subgroup.group.zero]
    worst = 0.0
    for g in probes:
        moved = translate(scn.action, g, space.frame)
        for k in range(moved.shape[1]):
            worst = max(worst, space.residual(moved[:, k]))
    return worst <= tol, worst


def require_base_invariant(space: Subspace, tol: float = DEFAULT_TOL) -> None:
    ok, res = is_invariant(space, space.scenario.base, tol)
    if not ok:
        raise InvarianceError(
            f"subspace is not invariant under the base subgroup (residual {res:.3e})"
        )


# -- principal (single-generator) spaces --------------------------------------


@dataclass(frozen=True)
class FiberMultiplier:
    """Fiberwise ratio tying a member of a principal space to its generator.

    ``values[w]`` multiplies the generator's base Zak fiber at
    ``dual_section[w]``; ``support[w]`` flags fibers where the generator is
    (numerically) nonzero.  The dual-group extension, constant on
    annihilator cosets, is available via :meth:`periodized`.
    """

    scenario: Scenario
    values: np.ndarray  # (n_fibers,)
    support: np.ndarray  # (n_fibers,) bool

    def periodized(self) -> np.ndarray:
        return self.values[self.scenario.dual_split[:, 0]]


def principal_membership(
    scn: Scenario,
    f: np.ndarray,
    psi: np.ndarray,
    tol: float = DEFAULT_TOL,
) -> FiberMultiplier | None:
    """Decide membership of f in the base-invariant space generated by psi.

    Works fiberwise on base Zak values: f belongs iff its fiber is a scalar
    multiple of psi's fiber wherever psi's fiber is nonzero, and vanishes
    where psi's fiber does.  Returns the multiplier on success, None
    otherwise.  A (numerically) zero psi is rejected.
    """
    zpsi = zak_base(scn, np.asarray(psi, dtype=complex))
    zf = zak_base(scn, np.asarray(f, dtype=complex))
    w = scn.tile_weights
    psi_sq = np.sum(np.abs(zpsi) ** 2 * w, axis=1)  # per-fiber squared norms
    peak = float(np.max(psi_sq))
    if peak <= 0.0 or scn.action.norm(psi) == 0.0:
        raise DegenerateGeneratorError("generator is zero")
    support = psi_sq > (RANK_TOL**2) * peak
    values = np.zeros(scn.n_fibers, dtype=complex)
    cross = np.sum(zf * np.conj(zpsi) * w, axis=1)
    values[support] = cross[support] / psi_sq[support]
    # residual of f against the fiberwise multiple, in the function norm
    diff = zf - values[:, None] * zpsi
    resid_sq = np.sum(np.abs(diff) ** 2 * w, axis=1)
    off = np.sum(np.abs(zf[~support]) ** 2 * w, axis=1) if np.any(~support) else 0.0
    total = float(np.sqrt((np.sum(resid_sq[support]) + np.sum(off)) / scn.n_fibers))
    scale = max(1.0, scn.action.norm(f))
    if total > tol * scale:
        return None
    return FiberMultiplier(scn, values, support)


def project_principal(
    scn: Scenario, g: np.ndarray, psi: np.ndarray
) -> tuple[np.ndarray, FiberMultiplier]:
    """Orthogonal projection of g onto the principal space of psi, fiberwise.

    Returns the projected function and the multiplier whose fiberwise
    product with psi's base Zak values gives the projection's values.
    """
    zpsi = zak_base(scn, np.asarray(psi, dtype=complex))
    zg = zak_base(scn, np.asarray(g, dtype=complex))
    w = scn.tile_weights
    psi_sq = np.sum(np.abs(zpsi) ** 2 * w, axis=1)
    peak = float(np.max(psi_sq))
    if peak <= 0.0:
        raise DegenerateGeneratorError("generator is zero")
    support = psi_sq > (RANK_TOL**2) * peak
    values = np.zeros(scn.n_fibers, dtype=complex)
    cross = np.sum(zg * np.conj(zpsi) * w, axis=1)
    values[support] = cross[support] / psi_sq[support]
    proj = zak_base_inv(scn, values[:, None] * zpsi)
    return proj, FiberMultiplier(scn, values, support)


# -- fiberwise structure of invariant spaces ----------------------------------


def fiber_matrices(scn: Scenario, vectors: np.ndarray) -> np.ndarray:
    """Per-fiber matrices of stacked Zak values in weighted coordinates.

    Shape (n_fibers, n_cosets * len(orbit_reps), n_vectors): column j of
    fiber w is the stacked Zak vector of ``vectors[:, j]`` at that fiber,
    with each orbit-representative slot scaled by ``rep_weight ** 0.5``.
    Euclidean norms per fiber then reproduce the weighted fiber norms.
    """
    vals = zak_stacked(scn, vectors)  # (w, k, c, d)
    root = np.sqrt(scn.rep_weights)
    if vals.ndim == 3:
        vals = vals[..., None]
    vals = vals * root[None, None, :, None]
    w, k, c, d = vals.shape
    return vals.reshape(w, k * c, d)


def fibers_from_matrix(scn: Scenario, fiber_cols: np.ndarray) -> np.ndarray:
    """Inverse of the weighted stacking: one function per fiber column set.

    ``fiber_cols`` has shape (n_fibers, n_cosets * len(orbit_reps), d); the
    result stacks d functions as columns, where function j has the given
    weighted fiber vectors (scaled back) as its stacked Zak transform.
    """
    w, kc, d = fiber_cols.shape
    c = len(scn.tiling.orbit_reps)
    vals = fiber_cols.reshape(w, scn.n_cosets, c, d) / np.sqrt(scn.rep_weights)[
        None, None, :, None
    ]
    return np.column_stack(
        [zak_stacked_inv(scn, vals[..., j]) for j in range(d)]
    )


def length(space: Subspace, tol: float = RANK_TOL) -> int:
    """Largest fiber dimension of a base-invariant subspace.

    Fiber ranks are cut relative to the largest singular value across all
    fibers, so fibers carrying nothing but roundoff count as empty.  This
    is the least number of generators realizing the space; see
    :func:`fiber_generators` for an explicit realization.
    """
    require_base_invariant(space)
    if space.dim == 0:
        return 0
    mats = fiber_matrices(space.scenario, space.frame)
    svals = [scipy.linalg.svdvals(mats[w]) for w in range(mats.shape[0])]
    top = max((s[0] for s in svals if s.size), default=0.0)
    if top <= 0.0:
        return 0
    return max(int(np.sum(s > tol * top)) for s in svals)


def fiber_generators(space: Subspace, tol: float = RANK_TOL) -> list[np.ndarray]:
    """``length(space)`` functions whose invariant span recovers the space.

    Built fiberwise: an orthonormal basis of every fiber is distributed
    across the generators (generator j takes the j-th basis vector of each
    fiber, where present), so the generators' fibers span every fiber of
    the space.
    """
    require_base_invariant(space)
    scn = space.scenario
    if space.dim == 0:
        return []
    mats = fiber_matrices(scn, space.frame)
    n_fibers, kc, _ = mats.shape
    top = max(
        (float(np.linalg.norm(mats[w], 2)) for w in range(n_fibers)), default=0.0
    )
    ell = 0
    bases = []
    for w in range(n_fibers):
        q = _euclid_orth(mats[w], tol, floor=tol * top)
        bases.append(q)
        ell = max(ell, q.shape[1])
    stacked = np.zeros((n_fibers, kc, ell), dtype=complex)
    for w, q in enumerate(bases):
        stacked[w, :, : q.shape[1]] = q
    gens = fibers_from_matrix(scn, stacked)
    return [gens[:, j] for j in range(ell)]


def _euclid_orth(
    mat: np.ndarray, tol: float = RANK_TOL, floor: float = 0.0
) -> np.ndarray:
    if mat.shape[1] == 0:
        return mat.copy()
    q, r, _ = scipy.linalg.qr(mat, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] <= max(floor, 0.0):
        return np.zeros((mat.shape[0], 0), dtype=complex)
    rank = int(np.sum(diag > max(tol * diag[0], floor)))
    return q[:, :rank]
