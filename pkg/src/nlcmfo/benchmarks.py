"""The 23-function benchmark suite plus a composite-function plugin point.

F1-F7 are unimodal, F8-F13 multimodal (both families scale to any
dimension >= 1), F14-F23 fixed-dimension multimodal.  Each entry carries
its conventional dimension, box bounds, known minimum and, where known, a
reference minimizer polished to full float precision so fidelity tests can
assert |evaluate(minimizer) - f_min| <= 1e-4.

F24-F29 are composite-function slots: nothing is shipped for them, but an
external pack can register implementations (``register_composite``) or be
loaded from a directory of JSON files (``load_composite_pack``; format
documented on that function).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .space import SearchSpace


class UnknownFunctionError(LookupError):
    """Function id is not a known benchmark id."""


class CompositeUnavailableError(LookupError):
    """A composite slot (F24-F29) was requested but no pack is installed."""


class CompositeCollisionError(ValueError):
    """A composite id was registered twice."""


# ---------------------------------------------------------------------------
# raw function bodies
# ---------------------------------------------------------------------------

def _sphere(x):
    return float(np.sum(x * x))


def _abs_and_product(x):
    ax = np.abs(x)
    return float(np.sum(ax) + np.prod(ax))


def _double_sum(x):
    c = np.cumsum(x)
    return float(np.sum(c * c))


def _max_abs(x):
    return float(np.max(np.abs(x)))


def _rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (x[:-1] - 1.0) ** 2))


def _step(x):
    s = np.floor(x + 0.5)
    return float(np.sum(s * s))


def _quartic(x):
    return float(np.sum(np.arange(1.0, x.size + 1.0) * x**4))


def _quartic_noise(x, rng):
    return _quartic(x) + float(rng.random())


def _schwefel(x):
    return float(-np.sum(x * np.sin(np.sqrt(np.abs(x)))))


def _rastrigin(x):
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * math.pi * x) + 10.0))


def _ackley(x):
    n = x.size
    return float(
        -20.0 * math.exp(-0.2 * math.sqrt(np.sum(x * x) / n))
        - math.exp(np.sum(np.cos(2.0 * math.pi * x)) / n)
        + 20.0
        + math.e
    )


def _griewank(x):
    i = np.arange(1.0, x.size + 1.0)
    return float(np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def _penalty(x, a, k=100.0, m=4.0):
    out = np.zeros_like(x)
    over = x > a
    under = x < -a
    out[over] = k * (x[over] - a) ** m
    out[under] = k * (-x[under] - a) ** m
    return float(np.sum(out))


def _penalized_1(x):
    n = x.size
    y = 1.0 + (x + 1.0) / 4.0
    core = 10.0 * math.sin(math.pi * y[0]) ** 2
    if n > 1:
        core += float(
            np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(math.pi * y[1:]) ** 2))
        )
    core += (y[-1] - 1.0) ** 2
    return math.pi / n * core + _penalty(x, 10.0)


def _penalized_2(x):
    n = x.size
    core = math.sin(3.0 * math.pi * x[0]) ** 2
    if n > 1:
        core += float(
            np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * math.pi * x[1:]) ** 2))
        )
    core += (x[-1] - 1.0) ** 2 * (1.0 + math.sin(2.0 * math.pi * x[-1]) ** 2)
    return 0.1 * core + _penalty(x, 5.0)


# Shekel foxholes grid: 25 columns of (a_1j, a_2j)
_FOX_A1 = np.tile([-32.0, -16.0, 0.0, 16.0, 32.0], 5)
_FOX_A2 = np.repeat([-32.0, -16.0, 0.0, 16.0, 32.0], 5)
_FOX_J = np.arange(1.0, 26.0)


def _foxholes(x):
    den = _FOX_J + (x[0] - _FOX_A1) ** 6 + (x[1] - _FOX_A2) ** 6
    return float(1.0 / (1.0 / 500.0 + np.sum(1.0 / den)))


_KOW_A = np.array([0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                   0.0456, 0.0342, 0.0323, 0.0235, 0.0246])
_KOW_B = 1.0 / np.array([0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0])


def _kowalik(x):
    model = x[0] * (_KOW_B**2 + _KOW_B * x[1]) / (_KOW_B**2 + _KOW_B * x[2] + x[3])
    return float(np.sum((_KOW_A - model) ** 2))


def _six_hump_camel(x):
    x1, x2 = x[0], x[1]
    return float(
        4.0 * x1**2 - 2.1 * x1**4 + x1**6 / 3.0 + x1 * x2 - 4.0 * x2**2 + 4.0 * x2**4
    )


def _branin(x):
    x1, x2 = x[0], x[1]
    return float(
        (x2 - 5.1 * x1**2 / (4.0 * math.pi**2) + 5.0 * x1 / math.pi - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * math.pi)) * math.cos(x1)
        + 10.0
    )


def _goldstein_price(x):
    x1, x2 = x[0], x[1]
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return float(a * b)


_HART_C = np.array([1.0, 1.2, 3.0, 3.2])
_HART3_A = np.array([[3.0, 10.0, 30.0],
                     [0.1, 10.0, 35.0],
                     [3.0, 10.0, 30.0],
                     [0.1, 10.0, 35.0]])
_HART3_P = np.array([[0.3689, 0.1170, 0.2673],
                     [0.4699, 0.4387, 0.7470],
                     [0.1091, 0.8732, 0.5547],
                     [0.03815, 0.5743, 0.8828]])
_HART6_A = np.array([[10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
                     [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
                     [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
                     [17.0, 8.0, 0.05, 10.0, 0.1, 14.0]])
_HART6_P = np.array([[0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
                     [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
                     [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
                     [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381]])


def _hartmann3(x):
    return float(-np.sum(_HART_C * np.exp(-np.sum(_HART3_A * (x - _HART3_P) ** 2, axis=1))))


def _hartmann6(x):
    return float(-np.sum(_HART_C * np.exp(-np.sum(_HART6_A * (x - _HART6_P) ** 2, axis=1))))


_SHEKEL_A = np.array([[4.0, 4.0, 4.0, 4.0],
                      [1.0, 1.0, 1.0, 1.0],
                      [8.0, 8.0, 8.0, 8.0],
                      [6.0, 6.0, 6.0, 6.0],
                      [3.0, 7.0, 3.0, 7.0],
                      [2.0, 9.0, 2.0, 9.0],
                      [5.0, 5.0, 3.0, 3.0],
                      [8.0, 1.0, 8.0, 1.0],
                      [6.0, 2.0, 6.0, 2.0],
                      [7.0, 3.6, 7.0, 3.6]])
_SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


def _shekel(m: int):
    a, c = _SHEKEL_A[:m], _SHEKEL_C[:m]

    def f(x):
        return float(-np.sum(1.0 / (np.sum((x - a) ** 2, axis=1) + c)))

    return f


# named basis functions available to composite packs
BASIS_FUNCTIONS = {
    "sphere": _sphere,
    "abs_and_product": _abs_and_product,
    "double_sum": _double_sum,
    "max_abs": _max_abs,
    "rosenbrock": _rosenbrock,
    "step": _step,
    "quartic": _quartic,
    "schwefel": _schwefel,
    "rastrigin": _rastrigin,
    "ackley": _ackley,
    "griewank": _griewank,
    "penalized_1": _penalized_1,
    "penalized_2": _penalized_2,
}


# ---------------------------------------------------------------------------
# the catalogue
# ---------------------------------------------------------------------------

@dataclass
class BenchmarkFunction:
    """One benchmark entry: metadata plus a pure evaluation function."""

    fid: str
    name: str
    dim: int
    lower: float
    upper: float
    f_min: Optional[float]
    minimizer: Optional[np.ndarray]
    scalable: bool
    noisy: bool = False
    _eval: Callable = None

    def space(self, dim: Optional[int] = None) -> SearchSpace:
        """The function's box; scalable functions accept a dim override."""
        d = self.dim if dim is None else int(dim)
        if d != self.dim and not self.scalable:
            raise ValueError(
                f"{self.fid} is fixed at dimension {self.dim}, got {d}"
            )
        if d < 1:
            raise ValueError("dimension must be >= 1")
        return SearchSpace.cube(d, self.lower, self.upper)

    def evaluate(self, x, rng: Optional[np.random.Generator] = None) -> float:
        """Validated single evaluation; the noisy F7 requires an rng."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1:
            raise ValueError("point must be a 1-d vector")
        if self.scalable:
            if x.size < 1:
                raise ValueError("dimension must be >= 1")
        elif x.size != self.dim:
            raise ValueError(
                f"{self.fid} is fixed at dimension {self.dim}, got {x.size}"
            )
        if self.noisy:
            if rng is None:
                raise ValueError(
                    f"{self.fid} adds uniform noise per evaluation; pass a seeded rng"
                )
            return self._eval(x, rng)
        return self._eval(x)

    def objective(self, rng: Optional[np.random.Generator] = None):
        """Unvalidated closure for optimizer loops (dims come from space())."""
        if self.noisy:
            if rng is None:
                raise ValueError(
                    f"{self.fid} adds uniform noise per evaluation; pass a seeded rng"
                )
            fn = self._eval
            return lambda x: fn(x, rng)
        return self._eval


def _entry(fid, name, dim, lower, upper, f_min, minimizer, fn,
           scalable=False, noisy=False):
    m = None if minimizer is None else np.asarray(minimizer, dtype=np.float64)
    return BenchmarkFunction(fid, name, dim, float(lower), float(upper),
                             f_min, m, scalable, noisy, fn)


# Reference minimizers for F14-F23 were polished offline to full float
# precision (frozen here) so that local-minimality and f_min fidelity both
# hold; printed catalogues round these to 3-6 significant digits.
_BUILTIN = {
    "F1": _entry("F1", "sphere", 30, -100, 100, 0.0, np.zeros(30), _sphere, scalable=True),
    "F2": _entry("F2", "abs_and_product", 30, -10, 10, 0.0, np.zeros(30), _abs_and_product, scalable=True),
    "F3": _entry("F3", "double_sum", 30, -100, 100, 0.0, np.zeros(30), _double_sum, scalable=True),
    "F4": _entry("F4", "max_abs", 30, -100, 100, 0.0, np.zeros(30), _max_abs, scalable=True),
    "F5": _entry("F5", "rosenbrock", 30, -30, 30, 0.0, np.ones(30), _rosenbrock, scalable=True),
    "F6": _entry("F6", "step", 30, -100, 100, 0.0, np.zeros(30), _step, scalable=True),
    "F7": _entry("F7", "quartic_noise", 30, -1.28, 1.28, 0.0, np.zeros(30), _quartic_noise,
                 scalable=True, noisy=True),
    "F8": _entry("F8", "schwefel", 30, -500, 500, -12569.486618173014,
                 np.full(30, 420.96874657644923), _schwefel, scalable=True),
    "F9": _entry("F9", "rastrigin", 30, -5.12, 5.12, 0.0, np.zeros(30), _rastrigin, scalable=True),
    "F10": _entry("F10", "ackley", 30, -32, 32, 0.0, np.zeros(30), _ackley, scalable=True),
    "F11": _entry("F11", "griewank", 30, -600, 600, 0.0, np.zeros(30), _griewank, scalable=True),
    "F12": _entry("F12", "penalized_1", 30, -50, 50, 0.0, np.full(30, -1.0), _penalized_1,
                  scalable=True),
    "F13": _entry("F13", "penalized_2", 30, -50, 50, 0.0, np.ones(30), _penalized_2,
                  scalable=True),
    "F14": _entry("F14", "foxholes", 2, -65, 65, 0.9980038377944498,
                  [-31.97833357139726, -31.978336789414364], _foxholes),
    "F15": _entry("F15", "kowalik", 4, -5, 5, 0.0003074859878056055,
                  [0.19283345267974872, 0.1908362373090203,
                   0.12311729237896951, 0.13576598922143462], _kowalik),
    "F16": _entry("F16", "six_hump_camel", 2, -5, 5, -1.0316284534898776,
                  [0.08984201492945389, -0.712656402369394], _six_hump_camel),
    "F17": _entry("F17", "branin", 2, -5, 5, 0.39788735772973816,
                  [math.pi, 2.275], _branin),
    "F18": _entry("F18", "goldstein_price", 2, -2, 2, 3.0, [0.0, -1.0], _goldstein_price),
    "F19": _entry("F19", "hartmann_3", 3, 0, 1, -3.8627821478207554,
                  [0.11461432790029832, 0.5556488504420141, 0.8525469546889314],
                  _hartmann3),
    "F20": _entry("F20", "hartmann_6", 6, 0, 1, -3.322368011415515,
                  [0.2016895128922905, 0.15001069323742897, 0.4768739767611768,
                   0.2753324307839508, 0.31165161848739587, 0.6573005349989142],
                  _hartmann6),
    "F21": _entry("F21", "shekel_5", 4, 0, 10, -10.153199679058229,
                  [4.000037152376549, 4.000133278657566,
                   4.000037151057555, 4.000133277090425], _shekel(5)),
    "F22": _entry("F22", "shekel_7", 4, 0, 10, -10.402940566818662,
                  [4.000572914277084, 4.000689366040889,
                   3.9994897107938447, 3.9996061600067923], _shekel(7)),
    "F23": _entry("F23", "shekel_10", 4, 0, 10, -10.536409816692045,
                  [4.000746530253313, 4.000592936779709,
                   3.9996633957714787, 3.9995097993299975], _shekel(10)),
}

BUILTIN_IDS = tuple(_BUILTIN)
COMPOSITE_IDS = ("F24", "F25", "F26", "F27", "F28", "F29")

_composites: dict[str, BenchmarkFunction] = {}


def lookup(fid: str) -> BenchmarkFunction:
    """Fetch a benchmark by id (case-insensitive: 'f1' or 'F1')."""
    key = str(fid).upper()
    if key in _BUILTIN:
        return _BUILTIN[key]
    if key in _composites:
        return _composites[key]
    if key in COMPOSITE_IDS:
        raise CompositeUnavailableError(
            f"{key} is a composite function slot and no composite pack is "
            f"installed; register one with register_composite or "
            f"load_composite_pack"
        )
    raise UnknownFunctionError(f"unknown benchmark function id {fid!r}")


def evaluate(fid: str, x, rng: Optional[np.random.Generator] = None) -> float:
    """Evaluate a benchmark at a point (validates dimension; F7 needs rng)."""
    return lookup(fid).evaluate(x, rng=rng)


def register_composite(pack) -> None:
    """Register composite implementations for the F24-F29 slots.

    ``pack`` is one spec or an iterable of specs; a spec is a mapping or an
    object with fields id, dim, lower, upper, eval (callable vector->real)
    and optionally name, f_min, minimizer.  Ids must be F24-F29 and not yet
    registered.
    """
    specs = pack if isinstance(pack, (list, tuple)) else [pack]
    staged = []
    for spec in specs:
        get = spec.get if isinstance(spec, dict) else lambda k, d=None: getattr(spec, k, d)
        fid = str(get("id")).upper()
        if fid not in COMPOSITE_IDS:
            raise UnknownFunctionError(
                f"composite id must be one of {COMPOSITE_IDS}, got {fid!r}"
            )
        if fid in _composites:
            raise CompositeCollisionError(f"composite {fid} already registered")
        fn = get("eval")
        if not callable(fn):
            raise ValueError(f"composite {fid} needs a callable 'eval'")
        staged.append(_entry(
            fid, get("name", fid.lower()), int(get("dim")),
            get("lower"), get("upper"), get("f_min"), get("minimizer"),
            lambda x, _fn=fn: float(_fn(x)),
        ))
    for entry in staged:
        _composites[entry.fid] = entry


def clear_composites() -> None:
    """Drop all registered composites (test isolation hook)."""
    _composites.clear()


def load_composite_pack(directory) -> list[str]:
    """Load composite functions from a directory of JSON files.

    Each ``*.json`` file describes one function::

        {
          "id": "F24", "dim": 30, "lower": -100, "upper": 100,
          "f_min": 2400.0,                  # optional
          "minimizer": [...],               # optional
          "bias": 2400.0,                   # optional, default 0
          "components": [                   # optional, default []
            {"basis": "sphere",             # key in BASIS_FUNCTIONS
             "weight": 1.0,                 # optional, default 1
             "shift": [... dim floats ...], # optional, default zeros
             "rotation": [[dim x dim]]}     # optional, default identity
          ]
        }

    Evaluation is bias + sum_j weight_j * basis_j(R_j @ (x - shift_j)).
    This is a plugin data format, not an official competition definition;
    packs needing richer semantics register eval callables directly.
    """
    directory = Path(directory)
    files = sorted(directory.glob("*.json"))
    if not files:
        raise FileNotFoundError(f"no composite definitions (*.json) in {directory}")
    loaded = []
    for path in files:
        with open(path) as fh:
            raw = json.load(fh)
        dim = int(raw["dim"])
        bias = float(raw.get("bias", 0.0))
        parts = []
        for comp in raw.get("components", []):
            basis = BASIS_FUNCTIONS[comp["basis"]]
            weight = float(comp.get("weight", 1.0))
            shift = np.asarray(comp.get("shift", np.zeros(dim)), dtype=np.float64)
            rotation = comp.get("rotation")
            rotation = None if rotation is None else np.asarray(rotation, dtype=np.float64)
            parts.append((basis, weight, shift, rotation))

        def make_eval(parts=parts, bias=bias):
            def f(x):
                total = bias
                for basis, weight, shift, rotation in parts:
                    z = x - shift
                    if rotation is not None:
                        z = rotation @ z
                    total += weight * basis(z)
                return total
            return f

        register_composite({
            "id": raw["id"],
            "name": raw.get("name", str(raw["id"]).lower()),
            "dim": dim,
            "lower": raw["lower"],
            "upper": raw["upper"],
            "f_min": raw.get("f_min"),
            "minimizer": raw.get("minimizer"),
            "eval": make_eval(),
        })
        loaded.append(str(raw["id"]).upper())
    return loaded
