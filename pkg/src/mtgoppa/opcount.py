"""Field-operation counters for the decoder complexity experiments.

A counter is installed for the current context with `use_counter`; while
active, element operations (and the bulk-ticking polynomial routines)
accumulate into it.  Counters are per-call accumulators: each decode
owns its own, so concurrent decodes never share state.

Counts follow the classical schoolbook cost model: a polynomial product
of degrees d1, d2 books (d1+1)(d2+1) multiplications regardless of how
the digits are ground out internally.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar

_ACTIVE: ContextVar["OpCounter | None"] = ContextVar("mtgoppa_opcounter", default=None)


class OpCounter:
    """Mutable (mul, add, inv) tallies, grouped by phase tag."""

    __slots__ = ("phases", "_phase")

    def __init__(self):
        self.phases: dict[str, dict[str, int]] = {}
        self._phase = "default"
        self.phases["default"] = {"mul": 0, "add": 0, "inv": 0}

    def _bucket(self) -> dict[str, int]:
        return self.phases[self._phase]

    @contextmanager
    def phase(self, name: str):
        prev = self._phase
        if name not in self.phases:
            self.phases[name] = {"mul": 0, "add": 0, "inv": 0}
        self._phase = name
        try:
            yield self
        finally:
            self._phase = prev

    def tick(self, op: str, amount: int = 1) -> None:
        self._bucket()[op] += amount

    def total(self, op: str) -> int:
        return sum(b[op] for b in self.phases.values())

    @property
    def mul(self) -> int:
        return self.total("mul")

    @property
    def add(self) -> int:
        return self.total("add")

    @property
    def inv(self) -> int:
        return self.total("inv")

    @property
    def mul_add(self) -> int:
        return self.mul + self.add

    def snapshot(self) -> dict[str, dict[str, int]]:
        return {k: dict(v) for k, v in self.phases.items()}

    def __repr__(self):
        return f"OpCounter(mul={self.mul}, add={self.add}, inv={self.inv})"


def get_counter() -> OpCounter | None:
    return _ACTIVE.get()


@contextmanager
def use_counter(counter: OpCounter):
    token = _ACTIVE.set(counter)
    try:
        yield counter
    finally:
        _ACTIVE.reset(token)
