"""Integer semantics shared by the virtual machine and the tree-walking oracle.

Both executors import from here so the overflow bounds, division rule and
the ``odd`` predicate cannot drift apart.
"""

INT_MIN = -(2**31)
INT_MAX = 2**31 - 1

# Highest usable stack index is STACK_LIMIT - 1.
STACK_LIMIT = 1 << 13


class ArithmeticFault(Exception):
    pass


def in_range(value: int) -> bool:
    return INT_MIN <= value <= INT_MAX


def checked(value: int) -> int:
    if not in_range(value):
        raise ArithmeticFault(f"desbordamiento aritmético ({value})")
    return value


def div_trunc(a: int, b: int) -> int:
    """Integer division rounding toward zero."""
    if b == 0:
        raise ArithmeticFault("división entre cero")
    q = abs(a) // abs(b)
    if (a < 0) != (b < 0):
        q = -q
    return checked(q)


def is_odd(value: int) -> int:
    return 1 if value % 2 != 0 else 0


def apply_unary(code: int, value: int) -> int:
    if code == 1:
        return checked(-value)
    if code == 6:
        return is_odd(value)
    raise ValueError(f"not a unary operation code: {code}")


def apply_binary(code: int, a: int, b: int) -> int:
    if code == 2:
        return checked(a + b)
    if code == 3:
        return checked(a - b)
    if code == 4:
        return checked(a * b)
    if code == 5:
        return div_trunc(a, b)
    if code == 8:
        return int(a == b)
    if code == 9:
        return int(a != b)
    if code == 10:
        return int(a < b)
    if code == 11:
        return int(a >= b)
    if code == 12:
        return int(a > b)
    if code == 13:
        return int(a <= b)
    raise ValueError(f"not a binary operation code: {code}")
