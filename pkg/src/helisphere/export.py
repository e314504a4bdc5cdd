"""Stereographic projection, meshes and file formats.

Formats are fixed so that identical inputs give byte-identical files:

* OBJ: ``v`` lines (all coordinates, ``%.17g``) then 1-indexed ``f a b c d`` quads.
* CSV: header row, comma separated, ``%.17g`` floats.
* JSON: an array of check reports.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from ._backend import kernels, thread_count
from .errors import DomainError, PoleError
from .momentum import MomentumProfile, ProfileSamples
from .surface import HelicoidalSurface

POLE_GAP = 1e-9
DEFAULT_POLE = (0.0, 0.0, 0.0, 1.0)
CLIP_RADIUS = 1e3
CURVE_COLUMNS = ("s", "z", "lambda", "x", "y", "zc")


def _pole_basis(pole):
    """Orthonormal basis of ``pole``'s complement, as rows of a ``(3, 4)`` array.

    Gram-Schmidt over the coordinate axes, skipping the axis closest to the
    pole; for ``pole = e4`` this returns ``e1, e2, e3`` exactly.
    """
    skip = int(np.argmax(np.abs(pole)))
    rows = []
    for k in range(4):
        if k == skip:
            continue
        v = np.zeros(4)
        v[k] = 1.0
        v -= (v @ pole) * pole
        for r in rows:
            v -= (v @ r) * r
        rows.append(v / np.linalg.norm(v))
    return np.array(rows)


def _unit_pole(pole):
    pole = np.asarray(DEFAULT_POLE if pole is None else pole, dtype=float)
    if pole.shape != (4,):
        raise DomainError("pole must be a 4-vector")
    n = np.linalg.norm(pole)
    if abs(n - 1.0) > 1e-9:
        raise DomainError(f"pole must be a unit vector, |pole| = {n}")
    return pole / n


def stereographic_project(p, pole=None):
    """Project unit 4-vector(s) ``p`` from ``pole`` to 3-space.

    ``q = (p - <p, pole> pole) / (1 - <p, pole>)`` written in an orthonormal
    basis of the hyperplane orthogonal to ``pole``. Accepts ``(4,)`` or
    ``(..., 4)`` input.

    Raises
    ------
    PoleError
        If any point has ``<p, pole> >= 1 - 1e-9``.
    """
    pole = _unit_pole(pole)
    p = np.asarray(p, dtype=float)
    d = p @ pole
    if np.any(d >= 1.0 - POLE_GAP):
        raise PoleError("point too close to the projection pole")
    basis = _pole_basis(pole)
    return (p @ basis.T) / (1.0 - d)[..., None]


@dataclass
class Mesh:
    """Structured quad mesh; vertex ``i * n_t + j`` samples ``(s_i, t_j)``."""

    vertices: np.ndarray
    faces: np.ndarray
    grid_dims: tuple

    def __post_init__(self):
        n_s, n_t = self.grid_dims
        if self.vertices.shape[0] != n_s * n_t:
            raise ValueError("vertex count does not match the grid")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= n_s * n_t):
            raise ValueError("face index out of range")


def grid_faces(n_s: int, n_t: int) -> np.ndarray:
    """Row-major quads ``(a, b, c, d)`` (0-indexed) over an ``n_s x n_t`` grid."""
    i, j = np.meshgrid(np.arange(n_s - 1), np.arange(n_t - 1), indexing="ij")
    a = (i * n_t + j).ravel()
    return np.stack([a, a + n_t, a + n_t + 1, a + 1], axis=1)


def _immerse_rows(surf, s, t):
    # The profile is sampled once, serially: some families accumulate the
    # longitude along the samples, so chunking it would change the rounding.
    # Only the sweep, which is elementwise per row, runs in parallel.
    pos = surf.profile.at(s).pos
    h = float(surf.pitch)

    def sweep(rows):
        p = pos[rows]
        return np.asarray(kernels.helicoid_immersion(h, p[:, 0], p[:, 1], p[:, 2], t))

    workers = min(thread_count(), len(s))
    if workers <= 1:
        return sweep(slice(None))
    chunks = np.array_split(np.arange(len(s)), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(sweep, chunks))
    return np.concatenate(parts, axis=0)


def build_mesh(surf: HelicoidalSurface, s_range, t_range, n_s: int = 400, n_t: int = 400,
               projection="stereographic", pole=None) -> Mesh:
    """Sample the immersion on a grid and optionally project it.

    Parameters
    ----------
    projection : {"stereographic", None}
        ``None`` keeps the ambient 4-vectors.
    pole : 4-vector, optional
        Projection pole, default ``(0, 0, 0, 1)``.

    Points within 1e-9 of the pole are pushed out to radius 1e3 along their
    projected direction, faces touching them are dropped, and a warning is
    issued.
    """
    if n_s < 2 or n_t < 2:
        raise DomainError("a mesh needs at least 2 samples in each direction")
    s = np.linspace(float(s_range[0]), float(s_range[1]), n_s)
    t = np.linspace(float(t_range[0]), float(t_range[1]), n_t)
    X = _immerse_rows(surf, s, t).reshape(n_s * n_t, 4)
    faces = grid_faces(n_s, n_t)
    if projection is None:
        return Mesh(X, faces, (n_s, n_t))
    if projection != "stereographic":
        raise DomainError(f"unknown projection {projection!r}")
    pole = _unit_pole(pole)
    d = X @ pole
    near = d >= 1.0 - POLE_GAP
    V = np.empty((X.shape[0], 3))
    if np.any(~near):
        V[~near] = stereographic_project(X[~near], pole)
    if np.any(near):
        warnings.warn(f"{int(near.sum())} vertices within {POLE_GAP:g} of the pole were clipped",
                      RuntimeWarning, stacklevel=2)
        dirs = X[near] @ _pole_basis(pole).T
        norms = np.linalg.norm(dirs, axis=1)
        norms[norms == 0.0] = 1.0
        V[near] = CLIP_RADIUS * dirs / norms[:, None]
        faces = faces[~np.any(near[faces], axis=1)]
    return Mesh(V, faces, (n_s, n_t))


def _fmt(v):
    return "%.17g" % v


@contextmanager
def _text_sink(target):
    # Paths are opened and closed here; open streams are written to as is.
    if hasattr(target, "write"):
        yield target
    else:
        with open(target, "w", newline="\n") as fh:
            yield fh


def write_obj(mesh: Mesh, target) -> None:
    """Write ``mesh`` as OBJ with 1-indexed quad faces to a path or text stream."""
    with _text_sink(target) as fh:
        for row in mesh.vertices:
            fh.write("v " + " ".join(_fmt(v) for v in row) + "\n")
        for f in mesh.faces + 1:
            fh.write("f %d %d %d %d\n" % tuple(f))


def curve_table(samples: ProfileSamples) -> np.ndarray:
    """Columns ``s, z, lambda, x, y, zc`` of a sampled profile curve."""
    return np.column_stack([samples.s, samples.z, samples.lam,
                            samples.pos[:, 0], samples.pos[:, 1], samples.pos[:, 2]])


def write_curve_csv(samples: ProfileSamples, path) -> None:
    np.savetxt(path, curve_table(samples), fmt="%.17g", delimiter=",",
               header=",".join(CURVE_COLUMNS), comments="")


def read_curve_csv(path) -> np.ndarray:
    """Inverse of :func:`write_curve_csv`; returns the ``(n, 6)`` table."""
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def reports_to_json(reports) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)


def write_reports(reports, target) -> None:
    with _text_sink(target) as fh:
        fh.write(reports_to_json(reports) + "\n")


def _floats(text, n, spec):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise DomainError(f"cannot parse numbers in momentum spec {spec!r}") from None
    if len(vals) != n or not all(math.isfinite(v) for v in vals):
        raise DomainError(f"momentum spec {spec!r} needs {n} finite number(s)")
    return vals


def load_momentum_table(path) -> MomentumProfile:
    """Tabulated momentum from a CSV with columns ``z, K`` and optionally ``dK``.

    A non-numeric first row is treated as a header.
    """
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError:
        data = np.loadtxt(path, delimiter=",", ndmin=2, skiprows=1)
    if data.shape[1] not in (2, 3):
        raise DomainError("momentum table needs 2 or 3 columns: z, K[, dK]")
    dK = data[:, 2] if data.shape[1] == 3 else None
    return MomentumProfile.tabulated(data[:, 0], data[:, 1], dK)


def parse_momentum_spec(spec: str) -> MomentumProfile:
    """Parse ``const:c``, ``linear:k0,c``, ``catenary:c``, ``minimal:h,c`` or ``table:path``."""
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise DomainError(f"momentum spec {spec!r} lacks a ':'")
    kind = kind.strip().lower()
    if kind == "const":
        return MomentumProfile.constant(*_floats(rest, 1, spec))
    if kind == "linear":
        return MomentumProfile.linear(*_floats(rest, 2, spec))
    if kind == "catenary":
        return MomentumProfile.catenary(*_floats(rest, 1, spec))
    if kind == "minimal":
        return MomentumProfile.minimal_helicoidal(*_floats(rest, 2, spec))
    if kind == "table":
        return load_momentum_table(rest)
    raise DomainError(f"unknown momentum kind {kind!r}")
