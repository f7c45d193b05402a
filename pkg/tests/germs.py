"""Germs shared by the test modules, with cached analyses."""
from __future__ import annotations

import random
from functools import lru_cache

from planegerms.analysis import analyze
from planegerms.bivariate import BivarPoly
from planegerms.parser import parse_poly

# reference germs: two cusps plus two smooth arcs on one line, a deformed product
# with repeated factors, and four pairs of branches splitting at height 5
CUSPS = "((x-y^2)^2-y^6)*(x-y^3)*(x-y^4)"
DEFORMED = "(x-y^2)^2*(x-y^3)^2*(x-y^4)*(x-2*y^4)*(x-3*y^4) - 6*y^22"
PAIRS = "((x-y^2)^2-y^10)*((x-y^3)^2-y^10)*((x-y^4)^2-y^10)*(x^2-y^10)"
REFERENCE = [CUSPS, DEFORMED, PAIRS]

# isolated singularities with known Milnor numbers
SMALL = {
    "x^2-y^3": 2,
    "x^3-y^4": 6,
    "x*y": 1,
    "x*y*(x+y)": 4,
    "x^2*y+y^4": 5,
    "y^2-x^3": 2,
    "x^2+y^2": 1,
    "x^4-y^4": 9,
    "x^3+y^3": 4,
    "x^5-y^7+x^2*y^4": 23,
    "(x^2-y^3)*(x^2-2*y^3)": 15,
    "x^3-3*x*y^4+y^7": 10,
    "(x^2-y^3)^2-x*y^5": 16,
    "y*(x^2-y^3)": 5,
    "x*(x-y)*(x-2*y)*(x^2-y^5)": 25,
}

NONISOLATED = ["x^2", "(x^2-y^3)^2", "x^2*y"]
SMOOTH = ["x", "y", "x+y^2"]

CORPUS = REFERENCE + [s for s in SMALL]


@lru_cache(maxsize=None)
def germ(text: str, **kw):
    return analyze(parse_poly(text), **kw)


def poly(text: str) -> BivarPoly:
    return parse_poly(text)


def generated_germs(n: int, seed: int = 7) -> list[str]:
    """Products of branches ``x - c y^e`` plus a high-order perturbation."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        k = rng.randint(2, 4)
        parts = []
        for _ in range(k):
            c = rng.choice([1, 2, 3, -1, -2])
            e = rng.randint(2, 4)
            parts.append(f"(x - {c}*y^{e})" if c > 0 else f"(x + {-c}*y^{e})")
        pert = f"{rng.choice([1, 2, -1])}*y^{rng.randint(9, 13)}"
        s = "*".join(parts) + " + " + pert
        if s not in out:
            out.append(s)
    return out


def random_map(rng: random.Random, polynomial: bool):
    """An invertible linear map, optionally followed by a triangular automorphism."""
    x, y = BivarPoly.x(), BivarPoly.y()
    while True:
        a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
        if a * d - b * c:
            break
    X, Y = a * x + b * y, c * x + d * y
    if polynomial:
        s = rng.choice([-2, -1, 1, 2])
        if rng.random() < 0.5:
            X = X + s * Y ** 2
        else:
            Y = Y + s * X ** 2
    return X, Y, (a, b, c, d)
