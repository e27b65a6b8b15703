"""Moth-flame search engines.

Two variants share one loop skeleton:

* ``mfo``     - the classic logarithmic-spiral moth-flame search.
* ``nlcmfo``  - the Levy-chaotic variant: spiral time comes from a chaotic
  map instead of a uniform draw, the spiral is damped by a nonlinear weight
  that decays from 4 to ~0 over the run, and both the spiral term and the
  flame attractor are perturbed element-wise by a heavy-tailed Levy matrix.
  A stagnation watchdog swaps the active chaotic map (sine <-> chebyshev by
  default) whenever the flame fitness vector freezes for a window of
  iterations.

A run costs exactly pop_size * (max_iter + 1) objective evaluations: the
initial swarm is evaluated once before the first flame update, then every
iteration moves and re-evaluates all moths.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .space import SearchSpace
from .stochastic import ChaoticMap, LevySampler, make_rng

Objective = Callable[[np.ndarray], float]

_ALGORITHMS = ("mfo", "nlcmfo")


class ObjectiveError(RuntimeError):
    """Objective returned NaN/inf; carries the offending position."""

    def __init__(self, position: np.ndarray, value: float):
        self.position = np.array(position, copy=True)
        self.value = value
        super().__init__(
            f"objective returned non-finite value {value!r} at position "
            f"{self.position.tolist()!r}"
        )


@dataclass
class EngineConfig:
    algorithm: str = "nlcmfo"
    pop_size: int = 30
    max_iter: int = 500
    seed: int = 0
    b: float = 1.0                    # spiral shape constant
    levy_alpha: float = 1.5
    map_primary: str = "sine"
    map_secondary: str = "chebyshev"
    map_state0: float = 0.7
    stagnation_window: int = 5
    record_history: bool = False


@dataclass
class RunResult:
    """Outcome of one engine run.

    ``convergence``, ``mean_fitness`` and ``trajectory`` have length
    max_iter: best-so-far fitness, swarm mean fitness, and the first
    variable of the first moth after each iteration.  ``history`` (optional)
    stacks the post-move swarm of every iteration, shape (T, n, dim).
    ``wall_time`` is measured and excluded from the determinism contract;
    every other field replays bitwise under a fixed seed.
    """

    best_position: np.ndarray
    best_fitness: float
    convergence: np.ndarray
    mean_fitness: np.ndarray
    trajectory: np.ndarray
    evaluations: int
    wall_time: float
    history: Optional[np.ndarray] = None


# ---------------------------------------------------------------------------
# schedule and movement primitives
# ---------------------------------------------------------------------------

def flame_count(n: int, l: int, max_iter: int) -> int:
    """Surviving flames at iteration l: round(n - l*(n-1)/T), floored at 1.

    Half-away-from-zero rounding; decreases from n at l=0 to 1 at l=T.
    """
    return max(1, int(math.floor(n - l * (n - 1) / max_iter + 0.5)))


def convergence_constant(l: int, max_iter: int) -> float:
    """Spiral-time lower bound a, falling linearly from -1 (l=0) to -2 (l=T)."""
    return -1.0 - l / max_iter


def nonlinear_weight(l: int, max_iter: int) -> float:
    """Exploration damping w = 4 exp(-(6 l / T)^2): 4 at l=0, ~1e-15 by l=T."""
    return 4.0 * math.exp(-((6.0 * l / max_iter) ** 2))


def t_mfo(a: float, rng: np.random.Generator, size=None):
    """Classic spiral time t = (a-1)*U[0,1) + 1, in (a, 1]."""
    return (a - 1.0) * rng.random(size) + 1.0


def t_nlcmfo(a: float, cm):
    """Chaotic spiral time t = |(a-1)*cm + 1| for normalized chaotic cm in [0,1].

    Bounded by |a-1|-1 <= 2 for a in [-2,-1], so the spiral radius stays
    within the classic envelope while the sequence of t values is chaotic
    rather than i.i.d. uniform.
    """
    return np.abs((a - 1.0) * np.asarray(cm, dtype=np.float64) + 1.0)


def _cos2pi(t):
    """cos(2 pi t) with exact zeros at t = 0.25 + k/2.

    Plain cos leaves ~1e-16 residue at quarter points, which would break the
    documented identity that such a move lands exactly on the flame.
    """
    t = np.asarray(t, dtype=np.float64)
    c = np.cos(2.0 * math.pi * t)
    return np.where(np.mod(t, 0.5) == 0.25, 0.0, c)


def spiral_step_mfo(moth, flame, b: float, t):
    """Log-spiral move: S = |F - M| * e^(b t) * cos(2 pi t) + F.

    Broadcasts: rows or full (n, d) matrices, with t scalar or shaped to
    broadcast against the position array (e.g. (n, 1) for per-moth times).
    """
    d = np.abs(np.asarray(flame) - np.asarray(moth))
    return d * np.exp(b * np.asarray(t)) * _cos2pi(t) + flame


def spiral_step_nlcmfo(moth, flame, b: float, t, w: float, levy):
    """Levy-perturbed damped spiral: S = w*R.D*e^(bt)cos(2 pi t) + R.F.

    R (the Levy row or matrix) multiplies both the spiral term and the
    flame attractor element-wise; the flame term is deliberately perturbed
    too, which is what drives the strong pull toward the origin late in a
    run (and the known weakness on functions whose optimum sits far from
    the origin).
    """
    d = np.abs(np.asarray(flame) - np.asarray(moth))
    levy = np.asarray(levy)
    spiral = w * levy * d * np.exp(b * np.asarray(t)) * _cos2pi(t)
    return spiral + levy * np.asarray(flame)


def assign_flame(moth_index: int, flame_no: int) -> int:
    """Pair moth i with flame min(i, flame_no-1): ranked flame while one
    survives for this moth, otherwise the worst surviving flame."""
    return min(moth_index, flame_no - 1)


def evaluate_swarm(objective: Objective, positions: np.ndarray) -> np.ndarray:
    """Row-wise objective evaluation; NaN/inf aborts with the position."""
    fitness = np.empty(positions.shape[0])
    for i, row in enumerate(positions):
        value = float(objective(row))
        if not math.isfinite(value):
            raise ObjectiveError(row, value)
        fitness[i] = value
    return fitness


def update_flames(
    flame_pos: np.ndarray,
    flame_fit: np.ndarray,
    moth_pos: np.ndarray,
    moth_fit: np.ndarray,
    keep: int,
):
    """Merge the archive with the current swarm, keep the best ``keep`` rows.

    Stable ascending sort on fitness with archive rows listed first, so an
    earlier-seen solution wins ties and the archive never worsens.
    """
    if not np.isfinite(moth_fit).all():
        bad = int(np.flatnonzero(~np.isfinite(moth_fit))[0])
        raise ObjectiveError(moth_pos[bad], float(moth_fit[bad]))
    pos = np.concatenate([flame_pos, moth_pos], axis=0)
    fit = np.concatenate([flame_fit, moth_fit])
    order = np.argsort(fit, kind="stable")[:keep]
    return pos[order].copy(), fit[order].copy()


class MapScheduler:
    """Stagnation-driven toggle between a primary and a secondary chaotic map.

    Each iteration the engine compares the flame fitness vector with the
    previous iteration's; ``window`` consecutive exact repeats toggle the
    active map and reset the counter, any change resets the counter.
    """

    def __init__(self, primary: ChaoticMap, secondary: ChaoticMap, window: int = 5):
        if window < 1:
            raise ValueError("stagnation window must be >= 1")
        self.primary = primary
        self.secondary = secondary
        self.window = window
        self.active_is_primary = True
        self.counter = 0

    @property
    def active(self) -> ChaoticMap:
        return self.primary if self.active_is_primary else self.secondary

    def next_value(self) -> float:
        return self.active.step()

    def observe(self, fitness_now: np.ndarray, fitness_prev: np.ndarray) -> bool:
        """Feed one iteration's flame fitness; True when the map toggled."""
        if np.array_equal(fitness_now, fitness_prev):
            self.counter += 1
            if self.counter >= self.window:
                self.active_is_primary = not self.active_is_primary
                self.counter = 0
                return True
        else:
            self.counter = 0
        return False


def _validate(config: EngineConfig, space: SearchSpace) -> None:
    if config.algorithm not in _ALGORITHMS:
        raise ValueError(
            f"unknown algorithm {config.algorithm!r}; choose one of {_ALGORITHMS}"
        )
    if config.pop_size < 2:
        raise ValueError("pop_size must be >= 2")
    if config.max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if not math.isfinite(config.b):
        raise ValueError("spiral constant b must be finite")


def run(config: EngineConfig, space: SearchSpace, objective: Objective) -> RunResult:
    """Execute one seeded run; see the module docstring for the loop shape."""
    _validate(config, space)
    start = time.perf_counter()
    rng = make_rng(config.seed)
    n, big_t, dim = config.pop_size, config.max_iter, space.dim
    chaotic = config.algorithm == "nlcmfo"

    moths = space.sample(n, rng)
    fitness = evaluate_swarm(objective, moths)
    evaluations = n
    order = np.argsort(fitness, kind="stable")
    flame_pos, flame_fit = moths[order].copy(), fitness[order].copy()

    if chaotic:
        sampler = LevySampler(config.levy_alpha)
        scheduler = MapScheduler(
            ChaoticMap(config.map_primary, config.map_state0),
            ChaoticMap(config.map_secondary, config.map_state0),
            config.stagnation_window,
        )
        prev_fit = flame_fit.copy()

    convergence = np.empty(big_t)
    mean_fitness = np.empty(big_t)
    trajectory = np.empty(big_t)
    history = np.empty((big_t, n, dim)) if config.record_history else None

    moth_idx = np.arange(n)
    for l in range(1, big_t + 1):
        k = flame_count(n, l, big_t)
        a = convergence_constant(l, big_t)
        paired = flame_pos[np.minimum(moth_idx, k - 1)]
        if chaotic:
            w = nonlinear_weight(l, big_t)
            cm = np.array([scheduler.next_value() for _ in range(n)])
            t = t_nlcmfo(a, cm)
            levy = sampler.matrix(n, dim, rng)
            moths = spiral_step_nlcmfo(moths, paired, config.b, t[:, None], w, levy)
        else:
            t = t_mfo(a, rng, size=n)
            moths = spiral_step_mfo(moths, paired, config.b, t[:, None])
        moths = space.clip(moths)
        fitness = evaluate_swarm(objective, moths)
        evaluations += n
        flame_pos, flame_fit = update_flames(flame_pos, flame_fit, moths, fitness, n)

        convergence[l - 1] = flame_fit[0]
        mean_fitness[l - 1] = fitness.mean()
        trajectory[l - 1] = moths[0, 0]
        if history is not None:
            history[l - 1] = moths
        if chaotic:
            scheduler.observe(flame_fit, prev_fit)
            prev_fit = flame_fit.copy()

    return RunResult(
        best_position=flame_pos[0].copy(),
        best_fitness=float(flame_fit[0]),
        convergence=convergence,
        mean_fitness=mean_fitness,
        trajectory=trajectory,
        evaluations=evaluations,
        wall_time=time.perf_counter() - start,
        history=history,
    )
