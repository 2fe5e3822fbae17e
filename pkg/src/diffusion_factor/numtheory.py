"""Exact modular arithmetic and the brute-force oracles the rest of the package checks against.

Everything here is a pure function on Python integers. Exponents may be
arbitrarily long (``2**M * q`` easily exceeds 64 bits); moduli are capped by
:data:`MAX_MODULUS` in :func:`screen_input` to keep the desk-scale contract.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import BadFactorization, NotAUnit, OutOfRange

MAX_MODULUS = 2**64 - 1

# Deterministic for every n < 3.3e24, which covers the 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class Residue:
    """An integer modulo ``modulus``, kept in canonical form."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} not reduced modulo {self.modulus}")

    @classmethod
    def of(cls, value: int, modulus: int) -> "Residue":
        return cls(value % modulus, modulus)

    def is_unit(self) -> bool:
        return gcd(self.value, self.modulus) == 1

    def __mul__(self, other: "Residue") -> "Residue":
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")
        return Residue(self.value * other.value % self.modulus, self.modulus)

    def __pow__(self, exponent: int) -> "Residue":
        return Residue(mod_pow(self.value, exponent, self.modulus), self.modulus)

    def inverse(self) -> "Residue":
        return Residue(mod_inverse(self.value, self.modulus), self.modulus)

    def __int__(self):
        return self.value


def euclid(a: int, b: int) -> tuple[int, int]:
    """Return ``(gcd(a, b), division_steps)`` using the Euclidean algorithm."""
    if a < 0 or b < 0:
        raise ValueError("euclid expects nonnegative integers")
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    steps = 0
    while b:
        a, b = b, a % b
        steps += 1
    return a, steps


def gcd(a: int, b: int) -> int:
    return euclid(a, b)[0]


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Left-to-right square-and-multiply; ``exponent`` may be any nonnegative int."""
    if exponent < 0:
        raise ValueError("negative exponents are not supported; invert first")
    if modulus == 1:
        return 0
    base %= modulus
    result = 1
    for bit in bin(exponent)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = result * base % modulus
    return result


def modpow_cost(exponent: int) -> int:
    """Modular multiplications spent by :func:`mod_pow` (squarings plus multiplies)."""
    if exponent <= 0:
        return 0
    return exponent.bit_length() - 1 + bin(exponent).count("1") - 1


def mod_inverse(value: int, modulus: int) -> int:
    if gcd(value % modulus, modulus) != 1:
        raise NotAUnit(f"{value} is not invertible modulo {modulus}")
    return pow(value, -1, modulus)


def exponent_bound(n: int) -> int:
    """``floor(log2 n) + 1``, computed exactly."""
    if n < 1:
        raise ValueError("n must be positive")
    return n.bit_length()


def order_bruteforce(a: int, modulus: int) -> int:
    """Least ``r >= 1`` with ``a**r == 1 (mod modulus)``, by successive multiplication."""
    a %= modulus
    if gcd(a, modulus) != 1:
        raise NotAUnit(f"{a} is not a unit modulo {modulus}")
    if modulus == 1:
        return 1
    r, x = 1, a
    while x != 1:
        x = x * a % modulus
        r += 1
    return r


class TwoAdicSplit(NamedTuple):
    power: int
    odd_part: int

    @property
    def value(self) -> int:
        return (1 << self.power) * self.odd_part


def two_adic_split(n: int) -> TwoAdicSplit:
    if n < 1:
        raise ValueError("n must be positive")
    power = (n & -n).bit_length() - 1
    return TwoAdicSplit(power, n >> power)


def cyclic_power_order(n: int, d: int) -> int:
    """Order of ``u**d`` in a cyclic group of order ``n`` generated by ``u``."""
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    return n // gcd(n, d)


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization into sorted ``(prime, exponent)`` pairs.

    Only used on small numbers (orders, candidate periods, test moduli).
    """
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def order_from_multiple(a: int, multiple: int, modulus: int) -> int:
    """Reduce a known multiple of ``ord(a)`` down to the order itself."""
    if mod_pow(a, multiple, modulus) != 1:
        raise ValueError(f"{a}^{multiple} is not 1 modulo {modulus}")
    r = multiple
    for p, _ in factorize(multiple):
        while r % p == 0 and mod_pow(a, r // p, modulus) == 1:
            r //= p
    return r


def is_order(a: int, h: int, modulus: int) -> bool:
    """True iff ``h`` is exactly the multiplicative order of ``a``."""
    if h < 1 or mod_pow(a, h, modulus) != 1:
        return False
    return all(mod_pow(a, h // p, modulus) != 1 for p, _ in factorize(h))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the 64-bit range."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def integer_root(n: int, k: int) -> int:
    """Largest ``x`` with ``x**k <= n``."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)  # upper bound on the root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


class ScreenKind(enum.Enum):
    COMPOSITE = "composite"
    PRIME = "prime"
    PRIME_POWER = "prime_power"
    EVEN = "even"


@dataclass(frozen=True)
class ScreenResult:
    kind: ScreenKind
    prime: int | None = None
    exponent: int | None = None

    def __str__(self):
        if self.kind is ScreenKind.PRIME_POWER:
            return f"prime power: {self.prime}^{self.exponent}"
        if self.kind is ScreenKind.PRIME:
            return f"prime: {self.prime}"
        if self.kind is ScreenKind.EVEN:
            return "even"
        return "composite, not a prime power"


def screen_input(n: int, limit: int = MAX_MODULUS) -> ScreenResult:
    """Classify ``n`` as even, prime, a prime power, or a composite the pipeline accepts.

    Even numbers are reported as EVEN before any other test, including ``n = 2``
    and powers of two.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if n > limit:
        raise OutOfRange(f"{n} exceeds the supported modulus width ({limit})")
    if n % 2 == 0:
        return ScreenResult(ScreenKind.EVEN)
    if is_prime(n):
        return ScreenResult(ScreenKind.PRIME, n, 1)
    for k in range(exponent_bound(n), 1, -1):
        root = integer_root(n, k)
        if root > 1 and root**k == n and is_prime(root):
            return ScreenResult(ScreenKind.PRIME_POWER, root, k)
    return ScreenResult(ScreenKind.COMPOSITE)


@dataclass(frozen=True)
class CrtProfile:
    """Image of a unit under ``Z_N^* -> prod Z_{p^e}^*`` in primitive-root coordinates.

    ``exponents[i]`` lies in ``1..group_orders[i]``, so the identity maps to the
    full group orders rather than to zeros.
    """

    prime_powers: tuple[tuple[int, int], ...]
    generators: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.prime_powers)

    @property
    def group_orders(self) -> tuple[int, ...]:
        return tuple(p ** (e - 1) * (p - 1) for p, e in self.prime_powers)

    @property
    def two_adic_orders(self) -> tuple[int, ...]:
        """``c_i`` with ``2**c_i`` exactly dividing each component group order."""
        return tuple(two_adic_split(g).power for g in self.group_orders)

    def reconstruct(self) -> int:
        """Recombine ``u_i**d_i`` by the Chinese remainder theorem."""
        n = 1
        for m in self.moduli:
            n *= m
        total = 0
        for u, d, m in zip(self.generators, self.exponents, self.moduli):
            rest = n // m
            total += mod_pow(u, d, m) * rest * pow(rest, -1, m)
        return total % n


def primitive_root(modulus: int, group_order: int) -> int:
    """Smallest generator of the cyclic group ``Z_modulus^*`` of the given order."""
    primes = [p for p, _ in factorize(group_order)]
    for g in range(2, modulus):
        if gcd(g, modulus) != 1:
            continue
        if all(mod_pow(g, group_order // p, modulus) != 1 for p in primes):
            return g
    if modulus == 2:
        return 1
    raise ValueError(f"Z_{modulus}^* is not cyclic")


def crt_profile(a: int, prime_powers: list[tuple[int, int]]) -> CrtProfile:
    """Primitive-root coordinates of ``a`` modulo each prime power (brute-force logs)."""
    n = 1
    for p, e in prime_powers:
        if p % 2 == 0 or not is_prime(p) or e < 1:
            raise BadFactorization(f"({p}, {e}) is not an odd prime power")
        n *= p**e
    if len({p for p, _ in prime_powers}) != len(prime_powers):
        raise BadFactorization("primes must be distinct")
    if gcd(a % n, n) != 1:
        raise NotAUnit(f"{a} is not a unit modulo {n}")
    gens, exps = [], []
    for p, e in prime_powers:
        m = p**e
        order = p ** (e - 1) * (p - 1)
        u = primitive_root(m, order)
        target = a % m
        x, d = u, 1
        while x != target:
            x = x * u % m
            d += 1
        gens.append(u)
        exps.append(d)
    profile = CrtProfile(tuple(prime_powers), tuple(gens), tuple(exps))
    if profile.reconstruct() != a % n:
        raise BadFactorization("CRT reconstruction failed")
    return profile


def p_success(m: int) -> Fraction:
    """Success lower bound ``1 - (m + 1) / 2**m`` for ``m`` distinct prime factors."""
    if m < 2:
        raise ValueError("need at least two distinct prime factors")
    return 1 - Fraction(m + 1, 2**m)


def failure_bound(m: int, attempts: int) -> Fraction:
    """Upper bound on the chance that ``attempts`` independent runs all fail."""
    return (1 - p_success(m)) ** attempts
