"""Half-lazy walk engine, step ledger and exact spectral oracles.

The walk itself is a sparse matrix-vector iteration in float64. The spectral
side evaluates the character formulas for the additive model directly, so it
can serve as an independent check of the iteration.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .cayley import CayleyGraph
from .errors import EngineError, PreconditionViolated, UnknownVertex

CLAMP_SLACK = 1e-15
EIGEN_GROUP_TOL = 1e-10


@dataclass
class StepLedger:
    """Diffusion steps (W applications + measurements) and a digital-op tally.

    ``digital_ops`` only counts modular multiplications and Euclid iterations.
    """

    matrix_applications: int = 0
    measurements: int = 0
    digital_ops: int = 0

    @property
    def diffusion_steps(self) -> int:
        return self.matrix_applications + self.measurements

    def absorb(self, other: "StepLedger") -> None:
        self.matrix_applications += other.matrix_applications
        self.measurements += other.measurements
        self.digital_ops += other.digital_ops

    def as_dict(self) -> dict[str, int]:
        return {
            "matrix_applications": self.matrix_applications,
            "measurements": self.measurements,
            "diffusion_steps": self.diffusion_steps,
            "digital_ops": self.digital_ops,
        }


@dataclass
class WalkState:
    probabilities: np.ndarray
    graph: CayleyGraph
    iteration: int = 0
    ledger: StepLedger = field(default_factory=StepLedger)

    @classmethod
    def point_mass(cls, graph: CayleyGraph, vertex: int = 0) -> "WalkState":
        p = np.zeros(graph.order)
        p[vertex] = 1.0
        return cls(p, graph)


def half_lazy_step(state: WalkState) -> WalkState:
    """Apply ``W`` once, in place, and return the same state object."""
    p = state.graph.walk_matrix @ state.probabilities
    low = p.min()
    if low < 0:
        if low < -CLAMP_SLACK:
            raise EngineError(f"probability {low!r} below roundoff slack")
        np.maximum(p, 0.0, out=p)
    state.probabilities = p
    state.iteration += 1
    state.ledger.matrix_applications += 1
    return state


def run_walk(graph: CayleyGraph, n: int) -> WalkState:
    """Walk ``n`` steps from the point mass at the identity vertex."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    state = WalkState.point_mass(graph)
    for _ in range(n):
        half_lazy_step(state)
    return state


def measure(state: WalkState, vertex_id: int) -> float:
    """Read ``p_n`` at one vertex; every read costs one diffusion step."""
    if not 0 <= vertex_id < state.graph.order:
        raise UnknownVertex(vertex_id)
    state.ledger.measurements += 1
    return float(state.probabilities[vertex_id])


@dataclass(frozen=True)
class SpectralData:
    r: int
    M: int
    eta: np.ndarray
    lam: np.ndarray
    lambda_star: float


def _eta(r: int, M: int) -> np.ndarray:
    # Angles are formed from exact residues k * 2**j mod r to keep them in [0, 2pi).
    k = np.arange(r, dtype=np.int64)
    eta = np.zeros(r)
    for j in range(M + 1):
        phase = (k * pow(2, j, r)) % r
        eta += 2.0 * np.cos(2.0 * np.pi * phase / r)
    eta[0] = 2.0 * (M + 1)
    return eta


def spectral_data(r: int, M: int) -> SpectralData:
    """Adjacency and walk eigenvalues of the additive model, indexed by character ``k``."""
    if r < 1 or r % 2 == 0:
        raise ValueError(f"r must be a positive odd integer, got {r}")
    eta = _eta(r, M)
    lam = 0.5 * (1.0 + eta / (2 * (M + 1)))
    lam[0] = 1.0
    lambda_star = float(lam[1:].max()) if r > 1 else 0.0
    return SpectralData(r, M, eta, lam, lambda_star)


def spectral_walk_oracle(r: int, M: int, n: int, vertex) -> float | np.ndarray:
    """``p_n(x)`` from the character expansion, for the walk started at 0.

    ``vertex`` may be an int or an integer array.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    lam = spectral_data(r, M).lam
    weights = lam**n
    x = np.atleast_1d(np.asarray(vertex, dtype=np.int64))
    k = np.arange(r, dtype=np.int64)
    phase = np.outer(x, k) % r
    vals = (np.cos(2.0 * np.pi * phase / r) @ weights) / r
    return float(vals[0]) if np.ndim(vertex) == 0 else vals


def verify_korobov_bound(r: int, M: int) -> tuple[float, bool]:
    """Check ``max_k |eta_k| / (2(M+1)) < 1 - 1/(M+1)`` over nontrivial characters."""
    if r < 3 or r % 2 == 0:
        raise ValueError(f"r must be an odd integer >= 3, got {r}")
    if M < r.bit_length():
        raise PreconditionViolated(f"M={M} is below floor(log2 {r}) + 1 = {r.bit_length()}")
    eta = _eta(r, M)
    ratio = float(np.abs(eta[1:]).max() / (2 * (M + 1)))
    return ratio, ratio < 1 - 1 / (M + 1)


def fourier_coefficients(f, r: int, M: int) -> dict[float, np.ndarray]:
    """Split ``f`` on ``Z/r`` into its projections onto the eigenspaces of ``W``.

    Characters whose eigenvalues agree within 1e-10 share a projection. Keys
    are the smallest eigenvalue in each group; the projections sum to ``f``.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (r,):
        raise ValueError(f"f must have length {r}")
    lam = spectral_data(r, M).lam
    fhat = np.fft.fft(f)
    order = np.argsort(lam, kind="stable")
    groups: list[list[int]] = []
    for k in order:
        if groups and lam[k] - lam[groups[-1][-1]] <= EIGEN_GROUP_TOL:
            groups[-1].append(int(k))
        else:
            groups.append([int(k)])
    out = {}
    for members in groups:
        mask = np.zeros(r)
        mask[members] = 1.0
        out[float(lam[members[0]])] = np.fft.ifft(fhat * mask).real
    return out


def probability_csv(state: WalkState) -> str:
    """Render ``vertex,residue,probability,reciprocal`` rows with 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["vertex", "residue", "probability", "reciprocal"])
    for i, (element, p) in enumerate(zip(state.graph.vertices, state.probabilities)):
        recip = 1.0 / p if p > 0 else math.inf
        writer.writerow([i, element, f"{p:.17g}", f"{recip:.17g}"])
    return buf.getvalue()
