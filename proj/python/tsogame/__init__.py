"""Safety games on concurrent programs under SC and TSO."""

import json

from . import _tsogame
from ._tsogame import ProgramError, SizeLimitError, atm_accepts, classify, format_program, generate

__all__ = [
    "ProgramError",
    "SizeLimitError",
    "atm_accepts",
    "classify",
    "format_program",
    "generate",
    "harness",
    "reach",
    "solve",
]


def solve(text, policy=None, semantics="tso", bounded=None, max_nodes=20_000_000):
    """Verdict for the program's game, as the CLI's `solve` prints it."""
    return json.loads(_tsogame.solve(text, policy, semantics, bounded, max_nodes))


def reach(text, mode="sc", target=None, capacity=1):
    """Reachability of `target` (default: the finals) with a shortest witness."""
    return json.loads(_tsogame.reach(text, mode, target, capacity))


def harness(pcs, variant, capacity=6):
    """Bounded channel reachability against the generated game's winner."""
    return json.loads(_tsogame.harness(pcs, variant, capacity))
