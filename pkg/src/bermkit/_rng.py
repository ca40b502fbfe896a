"""Deterministic seed derivation.

Every stochastic component in the package draws from a
``numpy.random.default_rng`` seeded through :func:`derive_seed`, a stable
hash of labelled parts.  This keeps independent cells of a simulation suite
on independent streams while guaranteeing bit-identical results across
runs, thread counts, and platforms: the derivation depends only on the
argument values, never on process state.
"""

from __future__ import annotations

import hashlib

_SEP = "\x1f"  # unit separator: cannot appear in the canonical encodings


def _canon(part) -> str:
    # bool must be checked before int (bool is an int subclass)
    if isinstance(part, bool):
        return f"b:{int(part)}"
    if isinstance(part, int):
        return f"i:{part}"
    if isinstance(part, float):
        return f"f:{part!r}"
    if isinstance(part, str):
        return f"s:{part}"
    raise TypeError(f"cannot derive a seed from {type(part).__name__!r}")


def derive_seed(*parts) -> int:
    """Collapse labelled parts into a stable non-negative 63-bit integer.

    Parameters
    ----------
    *parts : int, str, float or bool
        Any mixture of hashable primitives, e.g.
        ``derive_seed(base_seed, scenario_name, replicate)``.

    Returns
    -------
    int
        A seed in ``[0, 2**63)`` suitable for ``numpy.random.default_rng``.
    """
    if not parts:
        raise TypeError("derive_seed requires at least one part")
    canon = _SEP.join(_canon(p) for p in parts)
    digest = hashlib.sha256(canon.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1
