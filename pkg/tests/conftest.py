from __future__ import annotations

from functools import lru_cache

from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def trial_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@lru_cache(maxsize=None)
def pth_powers(q: int, p: int) -> frozenset[int]:
    """Brute force: the set of x^p mod q."""
    return frozenset(pow(x, p, q) for x in range(q))


@lru_cache(maxsize=None)
def brute_dlog(q: int, g: int) -> dict[int, int]:
    out, cur = {}, 1
    for k in range(q - 1):
        out[cur] = k
        cur = cur * g % q
    return out
