"""Group words such as "B A B^-1" or "(T^3 V)^3" and their evaluation."""
from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(\()|(\))|\^\s*(-?\d+)|([A-Z]))")


def parse(word: str):
    """Nested list of (item, exponent); items are labels or sub-lists."""
    pos = 0
    stack = [[]]
    word = word.strip()
    if word == "1":
        return []
    while pos < len(word):
        mt = _TOKEN.match(word, pos)
        if not mt:
            raise ValueError(f"cannot parse word {word!r} at {pos}")
        pos = mt.end()
        lpar, rpar, exp, label = mt.groups()
        if lpar:
            stack.append([])
        elif rpar:
            sub = stack.pop()
            stack[-1].append([sub, 1])
        elif exp is not None:
            if not stack[-1]:
                raise ValueError(f"dangling exponent in {word!r}")
            stack[-1][-1][1] *= int(exp)
        else:
            stack[-1].append([label, 1])
    if len(stack) != 1:
        raise ValueError(f"unbalanced parentheses in {word!r}")
    return stack[0]


def evaluate(word, images: dict, identity, inverse=None):
    """Product of images along a parsed or textual word.

    Negative exponents use `inverse` when given, else power(-e).
    """
    if isinstance(word, str):
        word = parse(word)
    cache = {}
    result = None
    for item, e in word:
        base = images[item] if isinstance(item, str) else evaluate(item, images, identity, inverse)
        if e < 0:
            key = id(base)
            if inverse is not None:
                if key not in cache:
                    cache[key] = inverse(base)
                base, e = cache[key], -e
            else:
                base = base ** e
                e = 1
        if e == 0:
            continue
        term = _power(base, e)
        result = term if result is None else result @ term
    return identity if result is None else result


def _power(x, e):
    out = None
    while True:
        if e & 1:
            out = x if out is None else out @ x
        e >>= 1
        if not e:
            return out
        x = x @ x


def check(relation: str, images: dict, identity, inverse=None) -> bool:
    lhs, rhs = relation.split("=")
    return evaluate(lhs, images, identity, inverse) == evaluate(rhs, images, identity, inverse)
