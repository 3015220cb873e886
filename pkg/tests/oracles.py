"""Independent reference implementations used as test oracles.

Everything in this file is deliberately written without importing the
package under test.  Expression trees are plain tuples, arithmetic is
re-derived from first principles, and expected values are frozen here so
the main implementation can be checked against a second, unrelated code
path.
"""

from __future__ import annotations

import random

I64_MIN = -(2**63)
I64_MAX = 2**63 - 1

VAR_NAMES = ("a", "b", "x", "y", "speed")


class OracleEvalError(Exception):
    """Unbound variable, division by zero, or overflow in the oracle."""


# Tuple trees: ("num", v) | ("var", name) | (op, left, right) with op in +-*/.


def reference_eval(tree, env=None):
    env = env or {}
    kind = tree[0]
    if kind == "num":
        return tree[1]
    if kind == "var":
        if tree[1] not in env:
            raise OracleEvalError("unbound variable %s" % tree[1])
        return env[tree[1]]
    left = reference_eval(tree[1], env)
    right = reference_eval(tree[2], env)
    if kind == "+":
        result = left + right
    elif kind == "-":
        result = left - right
    elif kind == "*":
        result = left * right
    elif kind == "/":
        if right == 0:
            raise OracleEvalError("division by zero")
        # Truncation toward zero, derived from floor division.
        result = left // right
        if result < 0 and result * right != left:
            result += 1
    else:
        raise AssertionError("bad oracle node %r" % (tree,))
    if not I64_MIN <= result <= I64_MAX:
        raise OracleEvalError("overflow")
    return result


def random_tree(rng: random.Random, max_depth: int, allow_vars: bool = False):
    """Random tuple tree, leaf values in [-20, 20], depth bounded."""
    if max_depth <= 0 or rng.random() < 0.3:
        if allow_vars and rng.random() < 0.25:
            return ("var", rng.choice(VAR_NAMES))
        return ("num", rng.randint(-20, 20))
    op = rng.choice("+-*/")
    return (op, random_tree(rng, max_depth - 1, allow_vars),
            random_tree(rng, max_depth - 1, allow_vars))


def random_env(rng: random.Random):
    return {name: rng.randint(-20, 20) for name in VAR_NAMES}


def tree_to_text(tree) -> str:
    """Fully parenthesized infix text for a tuple tree."""
    kind = tree[0]
    if kind == "num":
        return str(tree[1])
    if kind == "var":
        return tree[1]
    return "(%s %s %s)" % (tree_to_text(tree[1]), kind, tree_to_text(tree[2]))


# Frozen arithmetic expectations, each worked out by hand.
FROZEN_EVAL_CASES = [
    ("5 + 3 - 2", 6),
    ("2+3*4", 14),
    ("2 * (3 + 4)", 14),
    ("10/3", 3),
    ("-10/3", -3),
    ("10 / -3", -3),
    ("-5 + 3", -2),
    ("7 - -2", 9),
    ("0 * 12345", 0),
    ("((5 + 3) - 2)", 6),
]


def expected_money(minor: int) -> str:
    """Money display rule recomputed independently: one decimal when the
    cents part is a multiple of ten, two otherwise."""
    units = minor // 100
    cents = minor % 100
    if cents % 10 == 0:
        return "%d.%d" % (units, cents // 10)
    return "%d.%02d" % (units, cents)


def expected_discount(price_minor: int, kind: str, amount: int = 0) -> int:
    """Closed-form recomputation of the discount rules."""
    if kind == "none":
        return price_minor
    if kind == "pct":
        return price_minor - (price_minor * amount) // 100
    if kind == "fixed":
        return max(price_minor - amount, 0)
    raise AssertionError(kind)


def replay_content(writes) -> str:
    """Document content after a sequence of appends."""
    return "".join(writes)


def undone_content(writes, undo_count: int) -> str:
    """Content after undoing the last undo_count appends."""
    keep = len(writes) - undo_count
    return "".join(list(writes)[:keep])


BASE_COFFEE_COST = 500
LAYER_DELTAS = {"milk": 150, "sugar": 50}


def expected_stack_cost(layers) -> int:
    return BASE_COFFEE_COST + sum(LAYER_DELTAS[name] for name in layers)
