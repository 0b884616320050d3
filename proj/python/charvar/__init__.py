"""Goldman pairings on PSL(2,C) character varieties and Schwarzian monodromy."""

import json

from ._core import (
    InputError,
    __version__,
    adjoint_action,
    fox,
    killing,
    parse_word,
    run,
)
from . import _core


def identities(signature):
    return json.loads(_core.identities(_dumps(signature)))


def monodromy(sphere):
    return json.loads(_core.monodromy(_dumps(sphere)))


def goldman(bundle):
    return _core.goldman(_dumps(bundle))


def _dumps(value):
    return value if isinstance(value, str) else json.dumps(value)


__all__ = [
    "InputError",
    "__version__",
    "adjoint_action",
    "fox",
    "goldman",
    "identities",
    "killing",
    "monodromy",
    "parse_word",
    "run",
]
