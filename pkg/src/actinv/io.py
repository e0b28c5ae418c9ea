"""CSV import/export for transforms, frames and data vectors.

Complex values are stored as paired ``*_re`` / ``*_im`` columns.  Zak
arrays get one row per index tuple with the index coordinates spelled out;
frames and data matrices get one row per point and one column pair per
vector.  Row and column orders follow the package's canonical
enumerations, so exports are deterministic.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .zak import BaseZakArray, FullZakArray, StackedZakArray


def _dual_headers(rank: int, prefix: str) -> list[str]:
    return [f"{prefix}{j}" for j in range(rank)]


def write_zak_csv(path, array) -> None:
    """Write a Zak array (any of the three kinds) as CSV."""
    if not isinstance(array, (BaseZakArray, FullZakArray, StackedZakArray)):
        raise TypeError(f"not a Zak array: {type(array).__name__}")
    scn = array.scenario
    rank = scn.group.rank
    rows: list[list] = []
    if isinstance(array, BaseZakArray):
        header = _dual_headers(rank, "fiber") + ["tile", "re", "im"]
        for w, omega in enumerate(scn.omega):
            for c, point in enumerate(scn.tiling.tiles):
                v = array.values[w, c]
                rows.append(list(omega) + [point, v.real, v.imag])
    elif isinstance(array, FullZakArray):
        header = _dual_headers(rank, "dual") + ["rep", "re", "im"]
        for h, el in enumerate(scn.group.elements):
            for c, point in enumerate(scn.tiling.orbit_reps):
                v = array.values[h, c]
                rows.append(list(el) + [point, v.real, v.imag])
    elif isinstance(array, StackedZakArray):
        header = _dual_headers(rank, "fiber") + ["slot", "rep", "re", "im"]
        for w, omega in enumerate(scn.omega):
            for k in range(scn.n_cosets):
                for c, point in enumerate(scn.tiling.orbit_reps):
                    v = array.values[w, k, c]
                    rows.append(list(omega) + [k, point, v.real, v.imag])
    else:
        raise TypeError(f"not a Zak array: {type(array).__name__}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def write_columns_csv(path, matrix: np.ndarray) -> None:
    """Write complex column vectors (frame or data) as paired re/im columns."""
    mat = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if mat.shape[0] == 1 and matrix.ndim == 1:
        mat = mat.T
    n, d = mat.shape
    header = []
    for j in range(d):
        header += [f"c{j}_re", f"c{j}_im"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for x in range(n):
            row = []
            for j in range(d):
                row += [mat[x, j].real, mat[x, j].imag]
            writer.writerow(row)


def read_columns_csv(path) -> np.ndarray:
    """Read complex column vectors written by :func:`write_columns_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if len(header) % 2 or not header:
            raise ValueError(f"{path}: expected paired re/im columns")
        d = len(header) // 2
        for j in range(d):
            if header[2 * j] != f"c{j}_re" or header[2 * j + 1] != f"c{j}_im":
                raise ValueError(f"{path}: unexpected header {header}")
        data = []
        for line, row in enumerate(reader, start=2):
            if len(row) != 2 * d:
                raise ValueError(f"{path}:{line}: expected {2 * d} fields")
            data.append(
                [float(row[2 * j]) + 1j * float(row[2 * j + 1]) for j in range(d)]
            )
    if not data:
        raise ValueError(f"{path}: no data rows")
    return np.array(data, dtype=complex)


def ensure_parent(path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p
