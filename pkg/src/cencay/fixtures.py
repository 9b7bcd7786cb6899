"""Builtin groups, constructed from hardcoded permutation generators."""

from __future__ import annotations

import re
from functools import lru_cache

from .errors import InvalidInputError
from .group import FiniteGroup, group_from_generators

_GENERATORS: dict[str, list[tuple[int, ...]]] = {
    "alt5": [(1, 2, 3, 4, 0), (1, 2, 0, 3, 4)],
    "sym5": [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)],
    "alt6": [(0, 2, 3, 4, 5, 1), (1, 2, 0, 3, 4, 5)],
    "sym6": [(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)],
    # PSL(2,7) on the projective line over F_7 (point 7 is infinity):
    # x -> x+1 and x -> -1/x
    "psl27": [(1, 2, 3, 4, 5, 6, 0, 7), (7, 6, 3, 2, 5, 4, 1, 0)],
    # PGL(2,7): add x -> 3x
    "pgl27": [
        (1, 2, 3, 4, 5, 6, 0, 7),
        (7, 6, 3, 2, 5, 4, 1, 0),
        (0, 3, 6, 2, 5, 1, 4, 7),
    ],
}

_TRIVIAL_RE = re.compile(r"trivial(\d*)$")

BUILTIN_NAMES = tuple(sorted(_GENERATORS)) + ("trivial",)


@lru_cache(maxsize=None)
def builtin_group(name: str) -> FiniteGroup:
    """A builtin group by name; trivialN is the trivial group on N points."""
    if name in _GENERATORS:
        return group_from_generators(_GENERATORS[name])
    m = _TRIVIAL_RE.match(name)
    if m:
        degree = int(m.group(1)) if m.group(1) else 1
        return group_from_generators([], degree=max(degree, 1))
    raise InvalidInputError(
        f"unknown group name {name!r}; available: {', '.join(BUILTIN_NAMES)}"
    )
