"""The validated bundle every transform works against.

A :class:`Scenario` ties together a finite abelian group, a nested pair of
subgroups (the *base* subgroup whose invariance defines the subspaces under
study, and the larger *extra* subgroup tested for additional invariance),
and a free weighted action.  Construction validates the chain, the action,
and the tilings, and precomputes the index tables the transforms need.

Naming used throughout the package:

* ``transversal``      - coset representatives of group / base, zero first;
* ``orbit_reps``       - smallest point of each orbit;
* ``tiles``            - tile of the base subgroup built from ``orbit_reps``;
* ``dual_section``     - coset representatives of dual / base-annihilator
                         (the fiber labels of the base Zak transform);
* ``block_section``    - representatives of base-annihilator /
                         extra-annihilator; these label the dual partition
                         blocks and the stacked-coordinate blocks.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .actions import ActionSpace, tiling_sets, validate_action
from .groups import (
    Element,
    FiniteAbelianGroup,
    Subgroup,
    annihilator,
    coset_section,
    validate_chain,
)


class Scenario:
    def __init__(
        self,
        group: FiniteAbelianGroup,
        base: Subgroup,
        extra: Subgroup,
        action: ActionSpace,
    ):
        if action.group != group:
            raise ValueError("action belongs to a different group")
        self.group = group
        self.base = base
        self.extra = extra
        self.action = action
        self.chain = validate_chain(base, extra, group)
        self.action_report = validate_action(action)
        self.transversal = coset_section(group, base)
        self.tiling = tiling_sets(action, base, self.transversal)
        self.base_annihilator = self.chain.base_annihilator
        self.extra_annihilator = self.chain.extra_annihilator
        self.dual_section = coset_section(group, self.base_annihilator)
        self.block_section = coset_section(
            group, self.extra_annihilator, within=self.base_annihilator
        )

    def __repr__(self) -> str:
        return (
            f"Scenario(moduli={self.group.moduli}, base_order={self.base.order}, "
            f"extra_order={self.extra.order}, points={self.action.n_points})"
        )

    # -- sizes ---------------------------------------------------------------

    @property
    def n_cosets(self) -> int:
        """Number of base cosets, written s+1 in the transform formulas."""
        return self.chain.index_base

    @property
    def n_fibers(self) -> int:
        """Number of base-Zak fibers; equals the base subgroup order."""
        return len(self.dual_section)

    @property
    def n_blocks(self) -> int:
        return len(self.block_section)

    @property
    def omega(self) -> tuple[Element, ...]:
        return self.dual_section.representatives

    @property
    def block_labels(self) -> tuple[Element, ...]:
        return self.block_section.representatives

    @property
    def annihilator_order(self) -> tuple[Element, ...]:
        """Base-annihilator elements in lexicographic order, zero first."""
        return tuple(self.base_annihilator.elements)

    # -- point weights on the two tiles --------------------------------------

    @cached_property
    def tile_weights(self) -> np.ndarray:
        return self.action.weights[np.asarray(self.tiling.tiles, dtype=np.intp)]

    @cached_property
    def rep_weights(self) -> np.ndarray:
        return self.action.weights[np.asarray(self.tiling.orbit_reps, dtype=np.intp)]

    # -- gather tables for the transforms ------------------------------------

    def _gather(self, movers: list[Element], cell: tuple[int, ...], sign: int):
        """Index/weight tables for ``sigma_{sign*m}(x)`` over movers x cell."""
        cell_arr = np.asarray(cell, dtype=np.intp)
        gather = np.empty((len(movers), len(cell)), dtype=np.intp)
        for i, m in enumerate(movers):
            el = m if sign > 0 else self.group.neg(m)
            gather[i] = self.action.sigma(el)[cell_arr]
        w = self.action.weights
        jhalf = np.sqrt(w[gather] / w[cell_arr][None, :])
        return gather, jhalf

    @cached_property
    def _base_gather(self):
        """sigma_{-gamma}(x) for gamma in base, x in tiles, plus jacobian roots."""
        return self._gather(self.base.elements, self.tiling.tiles, -1)

    @cached_property
    def _full_gather(self):
        """sigma_{-tau}(x) for tau in group, x in orbit_reps, plus jacobian roots."""
        return self._gather(self.group.elements, self.tiling.orbit_reps, -1)

    @cached_property
    def _unfold_gather(self):
        """sigma_{+tau}(x) for tau in group, x in orbit_reps, plus jacobian roots."""
        return self._gather(self.group.elements, self.tiling.orbit_reps, +1)

    @cached_property
    def _base_scatter(self):
        """Inverse of the base gather: point -> (mover position, tile position)."""
        gather, _ = self._base_gather
        return _invert_gather(gather, self.action.n_points)

    @cached_property
    def _full_scatter(self):
        gather, _ = self._full_gather
        return _invert_gather(gather, self.action.n_points)

    # -- character tables -----------------------------------------------------

    @cached_property
    def chars_base_omega(self) -> np.ndarray:
        """``[i, j] = pairing(-base[i], omega[j])``."""
        negs = [self.group.neg(g) for g in self.base.elements]
        return self.group.char_matrix(negs, list(self.omega))

    @cached_property
    def chars_full(self) -> np.ndarray:
        """``[i, j] = pairing(-group[i], group[j])`` over the whole (dual) group."""
        negs = [self.group.neg(g) for g in self.group.elements]
        return self.group.char_matrix(negs, self.group.elements)

    @cached_property
    def coset_dft(self) -> np.ndarray:
        """Matrix ``[k, j] = pairing(-a_j, annihilator_order[k])``.

        Scaled by ``n_cosets ** -0.5`` this is unitary: it is the character
        table of the quotient by the base subgroup against its annihilator.
        """
        negs = [self.group.neg(a) for a in self.transversal.representatives]
        return self.group.char_matrix(negs, list(self.annihilator_order)).T

    # -- dual bookkeeping ------------------------------------------------------

    @cached_property
    def dual_split(self) -> np.ndarray:
        """For each dual element index: (fiber position, annihilator position).

        Row ``i`` says ``group.elements[i] == omega[row[0]] + annihilator_order[row[1]]``.
        """
        ann_pos = {el: k for k, el in enumerate(self.annihilator_order)}
        out = np.empty((self.group.order, 2), dtype=np.intp)
        for i, el in enumerate(self.group.elements):
            w = self.dual_section.rep_of(el)
            out[i, 0] = self.dual_section.position_of(el)
            out[i, 1] = ann_pos[self.group.sub(el, w)]
        return out

    @cached_property
    def dual_unsplit(self) -> np.ndarray:
        """Dual index of ``omega[w] + annihilator_order[k]``, shape (n_fibers, n_cosets)."""
        out = np.empty((self.n_fibers, self.n_cosets), dtype=np.intp)
        out[self.dual_split[:, 0], self.dual_split[:, 1]] = np.arange(self.group.order)
        return out

    @cached_property
    def coordinate_labels(self) -> np.ndarray:
        """Block label position of each annihilator element (stacked coordinate)."""
        return np.array(
            [self.block_section.position_of(el) for el in self.annihilator_order],
            dtype=np.intp,
        )

    def block_coordinates(self, xi) -> np.ndarray:
        """Stacked-coordinate indices whose annihilator element lies in xi's block."""
        pos = self.block_section.position_of(xi)
        return np.flatnonzero(self.coordinate_labels == pos)


def _invert_gather(gather: np.ndarray, n_points: int) -> np.ndarray:
    out = np.full((n_points, 2), -1, dtype=np.intp)
    movers, cells = gather.shape
    for i in range(movers):
        for c in range(cells):
            out[gather[i, c]] = (i, c)
    assert np.all(out >= 0), "gather table does not cover every point"
    return out
