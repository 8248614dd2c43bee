"""Process-wide switches read from the environment."""

from __future__ import annotations

import os

#: Set to a non-empty value other than "0" to force the pure-numpy kernels.
NO_JIT_ENV = "BAGREFINE_NO_JIT"
#: Overrides every size cap when set to an integer.
MAXN_ENV = "BAGREFINE_MAXN"


def jit_disabled() -> bool:
    return os.environ.get(NO_JIT_ENV, "") not in ("", "0")


def size_cap(default: int) -> int:
    """Return the cap for an operation, honouring ``BAGREFINE_MAXN``."""
    raw = os.environ.get(MAXN_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default
