"""Memoryless collision search on an iterated map via Floyd, Brent or Nivasch."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from ._accel import py_func

__all__ = ["IterationOutcome", "ENGINE_NAMES", "floyd", "brent", "nivasch", "find_cycle", "find_cycle_table"]

ENGINE_NAMES = tuple(kernels.ENGINES)


@dataclass(frozen=True)
class IterationOutcome:
    """Shape of the rho path from a start point.

    ``colliding_pair`` is ``(a, b)`` with ``f(a) == f(b)`` where ``a`` is the
    last tail point and ``b`` the last cycle point before the cycle entry. It is
    ``None`` when the start already lies on the cycle.
    """

    tail: int
    cycle: int
    colliding_pair: Optional[tuple[int, int]]
    evaluations: int

    @property
    def rho(self) -> int:
        return self.tail + self.cycle


def _outcome(raw) -> IterationOutcome:
    tail, cycle, a, b, evals = raw
    pair = (int(a), int(b)) if tail > 0 else None
    return IterationOutcome(tail=int(tail), cycle=int(cycle), colliding_pair=pair, evaluations=int(evals))


def _kernel(engine: str):
    try:
        return kernels.ENGINES[engine]
    except KeyError:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINE_NAMES}") from None


def find_cycle(f: Callable[[int], int], x0: int, engine: str = "brent") -> IterationOutcome:
    """Run an engine on an arbitrary Python callable (always interpreted)."""
    return _outcome(py_func(_kernel(engine))(kernels.call_step, f, x0))


def floyd(f: Callable[[int], int], x0: int) -> IterationOutcome:
    return find_cycle(f, x0, "floyd")


def brent(f: Callable[[int], int], x0: int) -> IterationOutcome:
    return find_cycle(f, x0, "brent")


def nivasch(f: Callable[[int], int], x0: int) -> IterationOutcome:
    return find_cycle(f, x0, "nivasch")


def find_cycle_table(table, x0: int, engine: str = "brent") -> IterationOutcome:
    """Run an engine on the map ``x -> table[x]`` through the compiled kernel."""
    table = np.ascontiguousarray(table, dtype=np.uint64)
    return _outcome(_kernel(engine)(kernels.table_step, (table,), kernels.as_state(x0)))


def find_cycle_hash(compressor, n: int, flavor: int, x0: int, engine: str = "brent") -> IterationOutcome:
    """Run an engine on s -> compress(H(encode(s, flavor, 0))) using the active backend."""
    params = kernels.hash_step_params(compressor, n, flavor)
    return _outcome(_kernel(engine)(kernels.hash_step, params, kernels.as_state(x0)))
