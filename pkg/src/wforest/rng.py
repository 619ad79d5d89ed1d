"""Keyed counter-based randomness.

Every random quantity in this package is a pure function of a 64-bit seed,
a short domain string, and integer counters.  There is no global state and
no draw order, so per-edge decisions are independent of iteration order and
safe under parallel evaluation.
"""

import hashlib

_MASK = (1 << 64) - 1


def u64(seed: int, domain: str, *counters: int) -> int:
    """Uniform 64-bit integer keyed by (seed, domain, counters)."""
    h = hashlib.blake2b(digest_size=8, key=(seed & _MASK).to_bytes(8, "little"))
    h.update(domain.encode())
    for c in counters:
        h.update(int(c).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest(), "little")


def threshold(p: float) -> int:
    """Integer cutoff so that u64 < threshold(p) has probability p exactly at p=0,1."""
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return 1 << 64
    return int(p * (1 << 64))


def subseed(seed: int, domain: str, *counters: int) -> int:
    """Derive an independent 64-bit seed (for per-run streams)."""
    return u64(seed, domain, *counters)
