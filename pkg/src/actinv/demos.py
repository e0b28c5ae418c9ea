"""Built-in demonstration configurations with their expected headline values.

Each demo is a complete run configuration plus the facts the run must
reproduce; the demo command fails loudly if any expectation breaks.

* ``shear``    - single cyclic group of order 6, trivial base subgroup,
  extra subgroup of order 2: the dual partition splits the dual line into
  evens and odds.
* ``dilation`` - cyclic order 4 with geometrically growing weights, so the
  translation unitaries carry nontrivial weight ratios.
* ``remark33`` - order-12 chain with base of order 3 and extra of order 6;
  the canonical construction lands entirely in the identity-label
  component, which demonstrates why it is always extra-invariant.
"""
from __future__ import annotations

DEMO_CONFIGS: dict[str, dict] = {
    "shear": {
        "schema": 1,
        "group": {"moduli": [6]},
        "base": {"generators": []},
        "extra": {"generators": [[3]]},
        "action": {"points": 6, "permutations": [[1, 2, 3, 4, 5, 0]]},
        "subspace": {"canonical": True},
        "options": {"seed": 0},
    },
    "dilation": {
        "schema": 1,
        "group": {"moduli": [4]},
        "base": {"generators": []},
        "extra": {"generators": [[2]]},
        "action": {
            "points": 4,
            "permutations": [[1, 2, 3, 0]],
            "weights": [1.0, 2.0, 4.0, 8.0],
        },
        "subspace": {"canonical": True},
        "options": {"seed": 0},
    },
    "remark33": {
        "schema": 1,
        "group": {"moduli": [12]},
        "base": {"generators": [[4]]},
        "extra": {"generators": [[2]]},
        "action": {
            "points": 12,
            "permutations": [[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 0]],
        },
        "subspace": {"canonical": True},
        "options": {"seed": 0},
    },
}

DEMO_EXPECTATIONS: dict[str, dict] = {
    "shear": {
        "blocks": [
            {"label": [0], "elements": [[0], [2], [4]]},
            {"label": [1], "elements": [[1], [3], [5]]},
        ],
        "extra_invariant": True,
        "component_dims": [1, 0],
    },
    "dilation": {
        "blocks": [
            {"label": [0], "elements": [[0], [2]]},
            {"label": [1], "elements": [[1], [3]]},
        ],
        "extra_invariant": True,
        "component_dims": [1, 0],
    },
    "remark33": {
        "blocks": [
            {"label": [0], "elements": [[0], [1], [2], [6], [7], [8]]},
            {"label": [3], "elements": [[3], [4], [5], [9], [10], [11]]},
        ],
        "extra_invariant": True,
        "component_dims": [3, 0],
        "indices": [4, 2, 2],
    },
}
