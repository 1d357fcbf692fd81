"""Random test graphs with controlled density and degree variance.

Each node ``i`` draws a propensity ``p_i`` uniformly from ``[a, b]`` and
every pair ``{i, j}`` becomes an edge independently with probability
``(p_i + p_j) / 2``. The expected density is ``(a + b) / 2``; widening
``b - a`` spreads the degrees. ``a == b`` is the uniform G(n, p) model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, degree_variance, density, is_connected

#: Recorded in metadata so samples can be regenerated elsewhere.
RNG_ALGORITHM = "numpy.random.PCG64"
DEFAULT_MAX_ATTEMPTS = 1000


class GenerationExhausted(RuntimeError):
    """No connected sample within the attempt budget."""


@dataclass(frozen=True)
class GenParams:
    n: int
    a: float
    b: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if not 0.0 <= self.a <= self.b <= 1.0:
            raise ValueError(f"need 0 <= a <= b <= 1, got a={self.a}, b={self.b}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def expected_density(self) -> float:
        return (self.a + self.b) / 2


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _sample(params: GenParams, rng: np.random.Generator) -> Graph:
    n = params.n
    prop = rng.uniform(params.a, params.b, size=n)
    prob = (prop[:, None] + prop[None, :]) / 2.0
    draws = rng.random((n, n))
    iu, ju = np.triu_indices(n, k=1)
    hit = draws[iu, ju] < prob[iu, ju]
    edges = zip((iu[hit] + 1).tolist(), (ju[hit] + 1).tolist())
    return Graph.from_edges(n, edges)


def generate(params: GenParams) -> Graph:
    """One sample; identical params (seed included) give identical graphs."""
    return _sample(params, _rng(params.seed))


def generate_connected(params: GenParams, max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> Graph:
    graph, _ = generate_connected_with_attempts(params, max_attempts)
    return graph


def generate_connected_with_attempts(params: GenParams,
                                     max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> tuple[Graph, int]:
    """First connected sample drawn from the seed's stream, and the attempt count."""
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")
    rng = _rng(params.seed)
    for attempt in range(1, max_attempts + 1):
        g = _sample(params, rng)
        if is_connected(g):
            return g, attempt
    raise GenerationExhausted(
        f"no connected graph in {max_attempts} attempts for n={params.n}, "
        f"a={params.a}, b={params.b}; the parameters are too sparse")


def ndv_presets(n: int, d: float, seed: int = 0) -> tuple[GenParams, GenParams]:
    """Minimum-NDV ``(a=b=D)`` and maximum-NDV ``(a=0, b=2D)`` parameters."""
    if not 0.0 <= d <= 0.5:
        raise ValueError(f"density must lie in [0, 0.5] so that b = 2D <= 1, got {d}")
    return GenParams(n, d, d, seed), GenParams(n, 0.0, 2 * d, seed)


def preset(n: int, d: float, ndv: str, seed: int = 0) -> GenParams:
    lo, hi = ndv_presets(n, d, seed)
    if ndv == "min":
        return lo
    if ndv == "max":
        return hi
    raise ValueError(f"ndv must be 'min' or 'max', got {ndv!r}")


def metadata(params: GenParams, g: Graph, attempts: int) -> dict[str, object]:
    return {
        "n": params.n,
        "a": params.a,
        "b": params.b,
        "seed": params.seed,
        "rng": RNG_ALGORITHM,
        "attempts": attempts,
        "m": g.m,
        "density": round(density(g), 6),
        "degree_variance": round(degree_variance(g), 6),
    }


def format_metadata(meta: dict[str, object]) -> str:
    return "".join(f"{k}={v}\n" for k, v in meta.items())


def parse_metadata(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out
