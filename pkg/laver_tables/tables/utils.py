"""Various utility functions."""

from laver_tables.tables.exceptions import DomainError


def mod_rep(x: int, modulus: int) -> int:
    """Map an integer to its representative in 1..modulus."""
    if modulus < 1:
        msg = f"Modulus must be positive, got {modulus}"
        raise DomainError(msg)

    return (x - 1) % modulus + 1


def is_power_of_two(x: int) -> bool:
    """Check whether x is 2^k for some k >= 0."""
    return x > 0 and x & (x - 1) == 0


def two_adic_valuation(x: int) -> int:
    """Exponent of the largest power of 2 dividing a positive integer."""
    if x < 1:
        msg = f"Valuation is only defined for positive integers, got {x}"
        raise DomainError(msg)

    return (x & -x).bit_length() - 1


def check_element(x: int, size: int, name: str = "element") -> None:
    """Raise DomainError unless 1 <= x <= size."""
    if not 1 <= x <= size:
        msg = f"{name} {x} is outside 1..{size}"
        raise DomainError(msg)
