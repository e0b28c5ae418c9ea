"""Zak-type transforms for weighted free actions of finite abelian groups.

Three transforms, all bijective isometries:

* base Zak: indexed by (fiber label omega, tile point), where omega runs
  over ``dual_section`` and the tile is the base-subgroup tile;

      zak_base[f](omega)(x) = sum_{g in base} translate(g, f)(x) * pairing(-g, omega)

* full Zak: same construction for the whole group, indexed by (dual
  element, orbit representative);

* stacked Zak: the full Zak values regrouped per fiber into a vector of
  length ``n_cosets`` (one slot per base-annihilator element, in
  lexicographic order) and scaled by ``n_cosets ** -0.5`` so the transform
  stays an isometry.

Isometry conventions: the function side carries the point weights; the
dual side carries weight ``1/n_fibers`` per fiber for the base and stacked
transforms and ``1/group.order`` per dual element for the full transform.

``unfold_orbits`` is the companion fiberization into sequences over the
group: ``unfold_orbits(f)(x)(tau) = jacobian(tau, x)**0.5 * f(sigma_tau(x))``
for orbit representatives x.  Its rows transform under ``translate`` by
plain index translation, and their discrete Fourier transform recovers the
full Zak values at the negated dual element.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import Scenario

__all__ = [
    "BaseZakArray",
    "FullZakArray",
    "StackedZakArray",
    "zak_base",
    "zak_base_inv",
    "zak_full",
    "zak_full_inv",
    "zak_stacked",
    "zak_stacked_inv",
    "periodized_base",
    "unfold_orbits",
    "fold_orbits",
    "base_norm",
    "full_norm",
    "stacked_norm",
    "unfold_norm",
    "zak_relation_deviation",
]


def _orbit_values(f: np.ndarray, gather: np.ndarray, jhalf: np.ndarray) -> np.ndarray:
    f = np.asarray(f, dtype=complex)
    if f.ndim == 1:
        return jhalf * f[gather]
    return jhalf[..., None] * f[gather]


def zak_base(scn: Scenario, f: np.ndarray) -> np.ndarray:
    """Base Zak values, shape (n_fibers, len(tiles)); trailing axis for 2-D input."""
    gather, jhalf = scn._base_gather
    orbit = _orbit_values(f, gather, jhalf)
    if orbit.ndim == 2:
        return np.einsum("gc,gw->wc", orbit, scn.chars_base_omega)
    return np.einsum("gcd,gw->wcd", orbit, scn.chars_base_omega)


def zak_base_inv(scn: Scenario, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    chars = scn.chars_base_omega  # [g, w] = pairing(-base[g], omega[w])
    if values.ndim == 2:
        a = np.einsum("wc,gw->gc", values, np.conj(chars)) / scn.base.order
    else:
        a = np.einsum("wcd,gw->gcd", values, np.conj(chars)) / scn.base.order
    gather, jhalf = scn._base_gather
    shape = (scn.action.n_points,) + values.shape[2:]
    f = np.empty(shape, dtype=complex)
    f[gather.ravel()] = (a / (jhalf if a.ndim == 2 else jhalf[..., None])).reshape(
        (-1,) + shape[1:]
    )
    return f

def zak_full(scn: Scenario, f: np.ndarray) -> np.ndarray:
    """Full Zak values, shape (group.order, len(orbit_reps))."""
    gather, jhalf = scn._full_gather
    orbit = _orbit_values(f, gather, jhalf)
    if orbit.ndim == 2:
        return np.einsum("tc,th->hc", orbit, scn.chars_full)
    return np.einsum("tcd,th->hcd", orbit, scn.chars_full)


def zak_full_inv(scn: Scenario, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    chars = scn.chars_full
    if values.ndim == 2:
        a = np.einsum("hc,th->tc", values, np.conj(chars)) / scn.group.order
    else:
        a = np.einsum("hcd,th->tcd", values, np.conj(chars)) / scn.group.order
    gather, jhalf = scn._full_gather
    shape = (scn.action.n_points,) + values.shape[2:]
    f = np.empty(shape, dtype=complex)
    f[gather.ravel()] = (a / (jhalf if a.ndim == 2 else jhalf[..., None])).reshape(
        (-1,) + shape[1:]
    )
    return f


def zak_stacked(scn: Scenario, f: np.ndarray) -> np.ndarray:
    """Stacked Zak values, shape (n_fibers, n_cosets, len(orbit_reps))."""
    full = zak_full(scn, f)
    split = scn.dual_split
    shape = (scn.n_fibers, scn.n_cosets) + full.shape[1:]
    out = np.empty(shape, dtype=complex)
    out[split[:, 0], split[:, 1]] = full
    return out / np.sqrt(scn.n_cosets)


def zak_stacked_inv(scn: Scenario, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    split = scn.dual_split
    full = values[split[:, 0], split[:, 1]] * np.sqrt(scn.n_cosets)
    return zak_full_inv(scn, full)


def periodized_base(scn: Scenario, values: np.ndarray) -> np.ndarray:
    """Extend base Zak values to the whole dual group (annihilator-periodic)."""
    return np.asarray(values)[scn.dual_split[:, 0]]


def unfold_orbits(scn: Scenario, f: np.ndarray) -> np.ndarray:
    """Weighted orbit samples; shape (len(orbit_reps), group.order)."""
    gather, jhalf = scn._unfold_gather
    orbit = _orbit_values(f, gather, jhalf)
    return np.moveaxis(orbit, 0, 1)


def fold_orbits(scn: Scenario, phi: np.ndarray) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex)
    orbit = np.moveaxis(phi, 1, 0)
    gather, jhalf = scn._unfold_gather
    shape = (scn.action.n_points,) + phi.shape[2:]
    f = np.empty(shape, dtype=complex)
    f[gather.ravel()] = (
        orbit / (jhalf if orbit.ndim == 2 else jhalf[..., None])
    ).reshape((-1,) + shape[1:])
    return f


# -- norms under the transform conventions ------------------------------------


def base_norm(scn: Scenario, values: np.ndarray) -> float:
    e = np.abs(np.asarray(values)) ** 2
    w = scn.tile_weights if e.ndim == 2 else scn.tile_weights[:, None]
    return float(np.sqrt(np.sum(e * w) / scn.n_fibers))


def full_norm(scn: Scenario, values: np.ndarray) -> float:
    e = np.abs(np.asarray(values)) ** 2
    w = scn.rep_weights if e.ndim == 2 else scn.rep_weights[:, None]
    return float(np.sqrt(np.sum(e * w) / scn.group.order))


def stacked_norm(scn: Scenario, values: np.ndarray) -> float:
    e = np.abs(np.asarray(values)) ** 2
    w = scn.rep_weights if e.ndim == 3 else scn.rep_weights[:, None]
    return float(np.sqrt(np.sum(e * w) / scn.n_fibers))


def unfold_norm(scn: Scenario, phi: np.ndarray) -> float:
    e = np.abs(np.asarray(phi)) ** 2
    w = scn.rep_weights if e.ndim == 2 else scn.rep_weights[:, None]
    return float(np.sqrt(np.sum(e.sum(axis=1) * w)))


# -- typed wrappers -----------------------------------------------------------


@dataclass(frozen=True)
class BaseZakArray:
    """Base Zak transform of one function, with its index semantics."""

    scenario: Scenario
    values: np.ndarray  # (n_fibers, len(tiles))

    @classmethod
    def transform(cls, scn: Scenario, f: np.ndarray) -> "BaseZakArray":
        return cls(scn, zak_base(scn, f))

    def norm(self) -> float:
        return base_norm(self.scenario, self.values)

    def periodized(self) -> np.ndarray:
        """Values over the whole dual group; constant on annihilator cosets."""
        return periodized_base(self.scenario, self.values)

    def invert(self) -> np.ndarray:
        return zak_base_inv(self.scenario, self.values)


@dataclass(frozen=True)
class FullZakArray:
    scenario: Scenario
    values: np.ndarray  # (group.order, len(orbit_reps))

    @classmethod
    def transform(cls, scn: Scenario, f: np.ndarray) -> "FullZakArray":
        return cls(scn, zak_full(scn, f))

    def norm(self) -> float:
        return full_norm(self.scenario, self.values)

    def invert(self) -> np.ndarray:
        return zak_full_inv(self.scenario, self.values)


@dataclass(frozen=True)
class StackedZakArray:
    scenario: Scenario
    values: np.ndarray  # (n_fibers, n_cosets, len(orbit_reps))

    @classmethod
    def transform(cls, scn: Scenario, f: np.ndarray) -> "StackedZakArray":
        return cls(scn, zak_stacked(scn, f))

    def norm(self) -> float:
        return stacked_norm(self.scenario, self.values)

    def invert(self) -> np.ndarray:
        return zak_stacked_inv(self.scenario, self.values)


# -- the relation between the base and full transforms ------------------------


def zak_relation_deviation(scn: Scenario, f: np.ndarray) -> float:
    """Max deviation in the matrix relation tying the two Zak transforms.

    For each fiber omega and orbit representative x, the full Zak values at
    ``omega + annihilator_order[k]`` equal the matrix product F D V, where
    V stacks the base Zak values at ``sigma_{-a_j}(x)`` over the transversal,
    D is diagonal with entries ``jacobian(-a_j, x)**0.5 * pairing(-a_j, omega)``,
    and F is the coset character matrix ``[k, j] = pairing(-a_j, ann[k])``
    (``coset_dft``; unitary after scaling by ``n_cosets ** -0.5``).
    """
    f = np.asarray(f, dtype=complex)
    if f.ndim != 1:
        raise ValueError("relation check expects a single function")
    n_reps = len(scn.tiling.orbit_reps)
    vb = zak_base(scn, f).reshape(scn.n_fibers, scn.n_cosets, n_reps)
    negs = [scn.group.neg(a) for a in scn.transversal.representatives]
    chars_tr = scn.group.char_matrix(negs, list(scn.omega))  # [j, w]
    reps = np.asarray(scn.tiling.orbit_reps, dtype=np.intp)
    w = scn.action.weights
    jhalf = np.empty((scn.n_cosets, n_reps))
    for j, a in enumerate(negs):
        jhalf[j] = np.sqrt(w[scn.action.sigma(a)[reps]] / w[reps])
    dv = chars_tr.T[:, :, None] * jhalf[None, :, :] * vb  # (w, j, c)
    fdv = np.einsum("kj,wjc->wkc", scn.coset_dft, dv)
    full = zak_full(scn, f)
    u = full[scn.dual_unsplit]  # (w, k, c)
    return float(np.max(np.abs(fdv - u)))
