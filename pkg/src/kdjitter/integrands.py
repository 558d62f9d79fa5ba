"""Test integrands on the unit cube with known reference integrals.

Two families, both seeded and fully reproducible:

* :func:`make_gmm` -- an isotropic Gaussian mixture with random centers and
  weights; the reference integral over the cube is the closed-form product
  of per-axis erf terms.
* :func:`make_pwconst` -- a piecewise-constant function.  In 2D the cube is
  Delaunay-triangulated over k random sites plus the corners and each
  triangle carries a random weight; in d >= 3 the regions are nearest-site
  cells of k random sites plus the 2^d corners.  Weights are scaled so the
  integral is 1: exactly in 2D (triangle areas are exact determinants),
  and to quasi-Monte Carlo oracle accuracy in d >= 3, where region volumes
  come from a 10^7-point low-discrepancy scan (absolute error ~1e-4 or
  better; the scan itself is deterministic, so the function is exactly
  reproducible either way).

Integrands serialize to self-describing JSON via ``to_json`` /
:func:`load_integrand` so experiment inputs can be archived and replayed.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, QhullError
from scipy.spatial.distance import cdist, pdist

from .rng import derive_seed
from .samplers import _halton_batch, _sobol_batch, SOBOL_MAX_DIM

_ORACLE_POINTS = 10_000_000


def gmm_reference(centers, weights, sigma: float) -> float:
    """Integral of the mixture over [0,1]^d: sum of per-axis erf products."""
    total = 0.0
    rt2 = sigma * math.sqrt(2.0)
    for center, w in zip(np.atleast_2d(centers), weights):
        axis_terms = [
            0.5 * (math.erf((1.0 - c) / rt2) + math.erf(c / rt2)) for c in center
        ]
        total += w * math.prod(axis_terms)
    return total


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """Isotropic Gaussian mixture density restricted to the unit cube."""

    centers: np.ndarray  # (k, d)
    weights: np.ndarray  # (k,), nonnegative, summing to 1
    sigma: float
    reference: float  # exact integral over [0,1]^d
    label: str = "gmm"

    @property
    def d(self) -> int:
        return self.centers.shape[1]

    @classmethod
    def create(cls, centers, weights, sigma: float, label: str = "gmm") -> "GaussianMixture":
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        weights = np.asarray(weights, dtype=float)
        return cls(centers, weights, float(sigma), gmm_reference(centers, weights, sigma), label)

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.d:
            raise ValueError(f"integrand is {self.d}-dimensional, points have {pts.shape[1]}")
        inv2s2 = 1.0 / (2.0 * self.sigma**2)
        out = np.zeros(pts.shape[0])
        for center, w in zip(self.centers, self.weights):
            delta = pts - center
            out += w * np.exp(-(delta**2).sum(axis=1) * inv2s2)
        return (2.0 * math.pi * self.sigma**2) ** (-self.d / 2.0) * out

    __call__ = evaluate

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "gmm",
                "label": self.label,
                "centers": self.centers.tolist(),
                "weights": self.weights.tolist(),
                "sigma": self.sigma,
                "reference_integral": self.reference,
            }
        )


def make_gmm(k: int, d: int, seed: int = 0) -> GaussianMixture:
    """Mixture of k modes at uniform random centers with random weights.

    The common width is one third of the minimum distance between centers
    (one third, full stop, when k = 1), so modes stay well separated.
    """
    if k < 1 or d < 1:
        raise ValueError(f"need k >= 1 and d >= 1, got k={k}, d={d}")
    rng = np.random.default_rng(derive_seed(seed, "gmm"))
    for _ in range(16):
        centers = rng.random((k, d))
        sigma = pdist(centers).min() / 3.0 if k >= 2 else 1.0 / 3.0
        if sigma > 1e-9:
            break
    else:  # pragma: no cover - k coincident centers is measure zero
        raise RuntimeError("could not draw separated mixture centers")
    raw = rng.random(k)
    weights = raw / raw.sum()
    return GaussianMixture(
        centers,
        weights,
        float(sigma),
        gmm_reference(centers, weights, sigma),
        label=f"gmm{k}_d{d}_s{seed}",
    )


@dataclass(frozen=True, eq=False)
class PiecewiseConstant:
    """Piecewise-constant positive function on [0,1]^d integrating to one.

    In 2D the pieces are Delaunay triangles over ``sites`` (point location
    via the triangulation); in d >= 3 they are nearest-site cells, with
    distance ties resolved to the lowest site index.
    """

    sites: np.ndarray  # (k + corners, d)
    weights: np.ndarray  # one value per region (triangle or site cell)
    reference: float
    label: str = "pwconst"
    _tri: Delaunay | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.d == 2:
            tri = Delaunay(self.sites)
            if tri.nsimplex != self.weights.shape[0]:
                raise ValueError(
                    f"{self.weights.shape[0]} weights for {tri.nsimplex} triangles"
                )
            object.__setattr__(self, "_tri", tri)
        elif self.sites.shape[0] != self.weights.shape[0]:
            raise ValueError(
                f"{self.weights.shape[0]} weights for {self.sites.shape[0]} site cells"
            )

    @property
    def d(self) -> int:
        return self.sites.shape[1]

    def evaluate(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.d:
            raise ValueError(f"integrand is {self.d}-dimensional, points have {pts.shape[1]}")
        if self.d == 2:
            simplex = self._tri.find_simplex(pts)
            miss = simplex < 0
            if miss.any():
                # boundary-degenerate queries: retry the slow robust path
                simplex[miss] = self._tri.find_simplex(pts[miss], bruteforce=True)
            if (simplex < 0).any():
                raise ValueError("point outside [0,1]^2")
            return self.weights[simplex]
        out = np.empty(pts.shape[0])
        chunk = max(1, 4_000_000 // self.sites.shape[0])
        for start in range(0, pts.shape[0], chunk):
            block = pts[start : start + chunk]
            nearest = cdist(block, self.sites).argmin(axis=1)
            out[start : start + chunk] = self.weights[nearest]
        return out

    __call__ = evaluate

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "pwconst",
                "label": self.label,
                "d": self.d,
                "sites": self.sites.tolist(),
                "weights": self.weights.tolist(),
                "reference_integral": self.reference,
            }
        )


def _corner_points(d: int) -> np.ndarray:
    return np.array(list(itertools.product((0.0, 1.0), repeat=d)))


def _triangle_areas(sites: np.ndarray, tri: Delaunay) -> np.ndarray:
    verts = sites[tri.simplices]
    edge1 = verts[:, 1] - verts[:, 0]
    edge2 = verts[:, 2] - verts[:, 0]
    return 0.5 * np.abs(edge1[:, 0] * edge2[:, 1] - edge1[:, 1] * edge2[:, 0])


def pwconst_from_sites_2d(interior_sites, raw_weights=None, label: str = "pwconst") -> PiecewiseConstant:
    """2D piecewise-constant integrand from explicit interior sites.

    The four cube corners are appended, the union is Delaunay-triangulated,
    and ``raw_weights`` (uniform 1s by default) are scaled so that
    sum(weight * area) = 1 exactly.
    """
    interior = np.atleast_2d(np.asarray(interior_sites, dtype=float))
    if interior.shape[1] != 2:
        raise ValueError("interior sites must be 2-dimensional")
    sites = np.vstack([interior, _corner_points(2)])
    tri = Delaunay(sites)
    areas = _triangle_areas(sites, tri)
    if abs(areas.sum() - 1.0) > 1e-9:
        raise ValueError("triangulation does not cover the unit square")
    raw = np.ones(tri.nsimplex) if raw_weights is None else np.asarray(raw_weights, float)
    if raw.shape[0] != tri.nsimplex or (raw <= 0).any():
        raise ValueError(f"need {tri.nsimplex} positive weights")
    weights = raw / (raw * areas).sum()
    return PiecewiseConstant(sites, weights, 1.0, label)


def _region_volumes(sites: np.ndarray, oracle_points: int) -> np.ndarray:
    """Nearest-site cell volumes from a deterministic low-discrepancy scan."""
    d = sites.shape[1]
    counts = np.zeros(sites.shape[0])
    chunk = 1_000_000
    for start in range(0, oracle_points, chunk):
        idx = np.arange(start, min(start + chunk, oracle_points))
        probes = _sobol_batch(idx, d) if d <= SOBOL_MAX_DIM else _halton_batch(idx, d)
        nearest = cdist(probes, sites).argmin(axis=1)
        counts += np.bincount(nearest, minlength=sites.shape[0])
    return counts / oracle_points


def make_pwconst(
    k: int, d: int, seed: int = 0, oracle_points: int = _ORACLE_POINTS
) -> PiecewiseConstant:
    """Random piecewise-constant integrand with k interior sites."""
    if k < 1 or d < 2:
        raise ValueError(f"need k >= 1 and d >= 2, got k={k}, d={d}")
    rng = np.random.default_rng(derive_seed(seed, "pwconst"))
    label = f"pwconst{k}_d{d}_s{seed}"
    if d == 2:
        for _ in range(8):
            interior = rng.random((k, 2))
            try:
                probe = Delaunay(np.vstack([interior, _corner_points(2)]))
            except QhullError:  # degenerate draw; redraw sites
                continue
            return pwconst_from_sites_2d(interior, rng.random(probe.nsimplex), label)
        raise RuntimeError("could not triangulate after 8 attempts")
    sites = np.vstack([rng.random((k, d)), _corner_points(d)])
    raw = rng.random(sites.shape[0]) + 1e-3  # keep every region's value positive
    volumes = _region_volumes(sites, oracle_points)
    weights = raw / (raw * volumes).sum()
    return PiecewiseConstant(sites, weights, 1.0, label)


def load_integrand(text: str):
    """Rebuild an integrand from its ``to_json`` form."""
    data = json.loads(text)
    kind = data.get("kind")
    if kind == "gmm":
        return GaussianMixture(
            np.asarray(data["centers"], dtype=float),
            np.asarray(data["weights"], dtype=float),
            float(data["sigma"]),
            float(data["reference_integral"]),
            data.get("label", "gmm"),
        )
    if kind == "pwconst":
        return PiecewiseConstant(
            np.asarray(data["sites"], dtype=float),
            np.asarray(data["weights"], dtype=float),
            float(data["reference_integral"]),
            data.get("label", "pwconst"),
        )
    raise ValueError(f"unknown integrand kind {kind!r}")
