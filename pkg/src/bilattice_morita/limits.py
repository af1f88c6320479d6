"""Size caps for closures and searches.

Caps live in a context variable so that callers (the CLI, the harness) can
raise or lower them for a block of work without threading extra arguments
through every function::

    with use_limits(elements=100_000):
        S = bil_of(E)
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace

from .errors import SizeLimitExceeded

DEFAULT_ELEMENT_CAP = 20_000
DEFAULT_NODE_CAP = 1_000_000


@dataclass(frozen=True)
class Limits:
    elements: int = DEFAULT_ELEMENT_CAP
    nodes: int = DEFAULT_NODE_CAP


_current: contextvars.ContextVar[Limits] = contextvars.ContextVar("limits", default=Limits())


def current_limits() -> Limits:
    return _current.get()


@contextlib.contextmanager
def use_limits(elements: int | None = None, nodes: int | None = None):
    lim = _current.get()
    if elements is not None:
        lim = replace(lim, elements=elements)
    if nodes is not None:
        lim = replace(lim, nodes=nodes)
    token = _current.set(lim)
    try:
        yield lim
    finally:
        _current.reset(token)


def check_elements(count: int, what: str) -> None:
    cap = _current.get().elements
    if count > cap:
        raise SizeLimitExceeded(f"{what}: {count} elements exceeds cap {cap}")
