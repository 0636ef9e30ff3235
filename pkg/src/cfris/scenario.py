"""Random node layouts over a square service area.

All draws are uniform over the square.  Receiver-side nodes are
rejection-resampled until every radio link (AP-UE, BS-UE, BS-RIS,
RIS-UE) is at least ``min_separation`` long, so the propagation model
never sees a quasi-zero distance.  Points are drawn one node at a time
in a fixed order (APs, users, surfaces), which keeps a given node's
position stable when only later counts change.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

DEFAULT_SIDE_M = 1000.0
DEFAULT_MIN_SEPARATION_M = 10.0


@dataclass(frozen=True)
class AreaSpec:
    """Square service area with the base station at a fixed point."""

    side_length: float = DEFAULT_SIDE_M
    bs_position: tuple[float, float] | None = None  # None -> area center
    min_separation: float = DEFAULT_MIN_SEPARATION_M

    def __post_init__(self):
        if self.side_length <= 0:
            raise ConfigurationError("side_length must be positive")
        bs = self.bs_position
        if bs is None:
            bs = (self.side_length / 2.0, self.side_length / 2.0)
            object.__setattr__(self, "bs_position", bs)
        if not (0 <= bs[0] <= self.side_length and 0 <= bs[1] <= self.side_length):
            raise ConfigurationError("bs_position must lie inside the area")
        if self.min_separation < 0:
            raise ConfigurationError("min_separation must be non-negative")


@dataclass(frozen=True)
class Layout:
    """Positions (meters) of every node in one drop."""

    ap_positions: np.ndarray        # (M, 2)
    user_positions: np.ndarray      # (K, 2)
    ris_positions: np.ndarray       # (S, 2)
    bs_position: np.ndarray         # (2,)
    h_tx_m: float = 15.0
    h_rx_m: float = 1.65

    @property
    def m(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def k(self) -> int:
        return self.user_positions.shape[0]

    @property
    def s(self) -> int:
        return self.ris_positions.shape[0]


def distance(p, q) -> float:
    """Euclidean distance between two 2-D points."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return float(np.hypot(p[0] - q[0], p[1] - q[1]))


def pairwise_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All distances between rows of ``a`` (n,2) and rows of ``b`` (m,2)."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    return np.linalg.norm(a[:, None, :] - b[None, :, :], axis=-1)


def _draw_point_clear_of(rng: np.random.Generator, side: float,
                         obstacles: np.ndarray, min_sep: float) -> np.ndarray:
    """Uniform point at least ``min_sep`` away from every obstacle row."""
    while True:
        p = rng.uniform(0.0, side, 2)
        if obstacles.size == 0:
            return p
        if np.min(np.linalg.norm(obstacles - p, axis=1)) >= min_sep:
            return p


def generate_layout(area: AreaSpec, m: int, k: int, s: int,
                    rng: np.random.Generator,
                    h_tx_m: float = 15.0, h_rx_m: float = 1.65) -> Layout:
    """Draw one random drop of APs, users, and RIS surfaces.

    Users are re-drawn while closer than ``area.min_separation`` to any
    AP or to the BS; surfaces are re-drawn while closer than that to the
    BS or to any user.  AP positions are unconstrained among themselves
    (there is no AP-AP link).
    """
    if m < 1:
        raise ConfigurationError("at least one AP antenna is required (m >= 1)")
    if k < 1:
        raise ConfigurationError("at least one user is required (k >= 1)")
    if s < 0:
        raise ConfigurationError("surface count must be non-negative")

    side = area.side_length
    min_sep = area.min_separation
    bs = np.asarray(area.bs_position, dtype=float)

    aps = rng.uniform(0.0, side, (m, 2))

    ue_obstacles = np.vstack([aps, bs[None, :]])
    users = np.empty((k, 2))
    for i in range(k):
        users[i] = _draw_point_clear_of(rng, side, ue_obstacles, min_sep)

    ris_obstacles = np.vstack([bs[None, :], users])
    surfaces = np.empty((s, 2))
    for i in range(s):
        surfaces[i] = _draw_point_clear_of(rng, side, ris_obstacles, min_sep)

    return Layout(ap_positions=aps, user_positions=users,
                  ris_positions=surfaces, bs_position=bs,
                  h_tx_m=h_tx_m, h_rx_m=h_rx_m)
