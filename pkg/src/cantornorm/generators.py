"""Stock bit-sequence generators used to populate program registries.

Each generator is a total map position -> bit. Where the generated stream
denotes a rational number (everything except the concatenation sequence),
`exact_value` returns it, which lets report code cross-check bit
classifications against true mod-1 orbit points.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ConfigError


def champernowne_digit(base: int, index: int) -> int:
    """Digit `index` of the concatenated numerals 0, 1, 2, ... in `base`."""
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if index < 0:
        raise ValueError("index must be >= 0")
    if index == 0:
        return 0  # the numeral for 0
    idx = index - 1
    length = 1
    while True:
        span = (base - 1) * base ** (length - 1) * length
        if idx < span:
            numeral = base ** (length - 1) + idx // length
            pos = idx % length
            return numeral // base ** (length - 1 - pos) % base
        idx -= span
        length += 1


def champernowne_bits(base: int, n: int) -> list[int]:
    """First n digits of the concatenation of 0, 1, 2, ... written in `base`."""
    if n < 0:
        raise ValueError("digit count must be >= 0")
    return [champernowne_digit(base, i) for i in range(n)]


def rational_bits(p: int, q: int, n: int) -> list[int]:
    """First n bits of p/q by binary long division.

    Dyadic inputs come out as the terminating expansion (all-zero tail),
    never as an all-ones tail.
    """
    if q <= 0 or not 0 <= p < q:
        raise ValueError(f"need 0 <= p < q, got {p}/{q}")
    if n < 0:
        raise ValueError("bit count must be >= 0")
    bits = []
    r = p
    for _ in range(n):
        r *= 2
        bits.append(r // q)
        r %= q
    return bits


def periodic_bits(pattern: Sequence[int], n: int) -> list[int]:
    """The pattern repeated and truncated to n bits."""
    pat = tuple(pattern)
    if not pat:
        raise ValueError("pattern must be nonempty")
    for b in pat:
        if b not in (0, 1):
            raise ValueError(f"bit out of range: {b!r}")
    if n < 0:
        raise ValueError("bit count must be >= 0")
    return [pat[i % len(pat)] for i in range(n)]


@dataclass(frozen=True)
class Oracle:
    """Infinite bit source: an explicit finite prefix, one default bit beyond."""

    prefix: tuple[int, ...] = ()
    default: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        for b in self.prefix:
            if b not in (0, 1):
                raise ValueError(f"bit out of range: {b!r}")
        if self.default not in (0, 1):
            raise ValueError(f"default bit out of range: {self.default!r}")

    def bit_at(self, position: int) -> int:
        if position < 0:
            raise ValueError("position must be >= 0")
        if position < len(self.prefix):
            return self.prefix[position]
        return self.default


class BitGenerator(ABC):
    """A total map from positions to bits."""

    kind: str = ""

    @abstractmethod
    def bit_at(self, position: int) -> int: ...

    def prefix(self, n: int) -> list[int]:
        return [self.bit_at(p) for p in range(n)]

    @abstractmethod
    def exact_value(self) -> Fraction | None:
        """The stream's value as the sum of bit(n) / 2**(n+1), when rational."""

    @abstractmethod
    def ends_in_ones(self) -> bool:
        """True when all but finitely many bits are 1."""

    @abstractmethod
    def params(self) -> dict: ...

    def to_config(self) -> dict:
        return {"kind": self.kind, **self.params()}


@dataclass(frozen=True)
class ConstantBits(BitGenerator):
    bit: int = 0
    kind = "constant"

    def __post_init__(self) -> None:
        if self.bit not in (0, 1):
            raise ValueError(f"bit out of range: {self.bit!r}")

    def bit_at(self, position: int) -> int:
        if position < 0:
            raise ValueError("position must be >= 0")
        return self.bit

    def exact_value(self) -> Fraction:
        return Fraction(self.bit)

    def ends_in_ones(self) -> bool:
        return self.bit == 1

    def params(self) -> dict:
        return {"bit": self.bit}


@dataclass(frozen=True)
class PeriodicBits(BitGenerator):
    pattern: tuple[int, ...]
    kind = "periodic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "pattern", tuple(self.pattern))
        if not self.pattern:
            raise ValueError("pattern must be nonempty")
        for b in self.pattern:
            if b not in (0, 1):
                raise ValueError(f"bit out of range: {b!r}")

    def bit_at(self, position: int) -> int:
        if position < 0:
            raise ValueError("position must be >= 0")
        return self.pattern[position % len(self.pattern)]

    def exact_value(self) -> Fraction:
        numerator = 0
        for b in self.pattern:
            numerator = (numerator << 1) | b
        return Fraction(numerator, 2 ** len(self.pattern) - 1)

    def ends_in_ones(self) -> bool:
        return all(b == 1 for b in self.pattern)

    def params(self) -> dict:
        return {"pattern": "".join(str(b) for b in self.pattern)}


@dataclass(frozen=True)
class TableBits(BitGenerator):
    """Finitely many explicit bits over a constant default."""

    assignments: Mapping[int, int] | tuple[tuple[int, int], ...] = ()
    default: int = 0
    kind = "table"

    def __post_init__(self) -> None:
        items = (self.assignments.items()
                 if isinstance(self.assignments, Mapping) else self.assignments)
        norm = tuple(sorted((int(p), int(b)) for p, b in items))
        if len({p for p, _ in norm}) != len(norm):
            raise ValueError("duplicate table position")
        for p, b in norm:
            if p < 0:
                raise ValueError(f"position must be >= 0, got {p}")
            if b not in (0, 1):
                raise ValueError(f"bit out of range: {b!r}")
        if self.default not in (0, 1):
            raise ValueError(f"default bit out of range: {self.default!r}")
        object.__setattr__(self, "assignments", norm)

    def bit_at(self, position: int) -> int:
        if position < 0:
            raise ValueError("position must be >= 0")
        for p, b in self.assignments:
            if p == position:
                return b
        return self.default

    def exact_value(self) -> Fraction:
        value = Fraction(self.default)
        for p, b in self.assignments:
            value += Fraction(b - self.default, 2 ** (p + 1))
        return value

    def ends_in_ones(self) -> bool:
        return self.default == 1

    def params(self) -> dict:
        return {"bits": {str(p): b for p, b in self.assignments},
                "default": self.default}


@dataclass(frozen=True)
class RationalBits(BitGenerator):
    """Binary expansion of numerator/denominator, terminating form preferred."""

    numerator: int
    denominator: int
    kind = "rational"

    def __post_init__(self) -> None:
        if self.denominator <= 0 or not 0 <= self.numerator < self.denominator:
            raise ValueError(
                f"need 0 <= p < q, got {self.numerator}/{self.denominator}")

    def bit_at(self, position: int) -> int:
        if position < 0:
            raise ValueError("position must be >= 0")
        return (self.numerator << (position + 1)) // self.denominator % 2

    def exact_value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def ends_in_ones(self) -> bool:
        return False

    def params(self) -> dict:
        return {"numerator": self.numerator, "denominator": self.denominator}


@dataclass(frozen=True)
class ChampernowneBits(BitGenerator):
    """Base-2 concatenation of 0, 1, 10, 11, 100, ... (irrational value)."""

    kind = "champernowne"

    def bit_at(self, position: int) -> int:
        return champernowne_digit(2, position)

    def exact_value(self) -> None:
        return None

    def ends_in_ones(self) -> bool:
        return False

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class OracleBits(BitGenerator):
    """Bit `position` of the attached oracle."""

    oracle: Oracle
    kind = "oracle-bit"

    def bit_at(self, position: int) -> int:
        return self.oracle.bit_at(position)

    def exact_value(self) -> Fraction:
        numerator = 0
        for b in self.oracle.prefix:
            numerator = (numerator << 1) | b
        length = len(self.oracle.prefix)
        return Fraction(numerator + self.oracle.default, 2 ** length)

    def ends_in_ones(self) -> bool:
        return self.oracle.default == 1

    def params(self) -> dict:
        return {}


def _config_bit(cfg: Mapping, key: str, default: int | None = None) -> int:
    value = cfg.get(key, default)
    if value not in (0, 1):
        raise ConfigError(f"{key!r} must be 0 or 1, got {value!r}")
    return value


def generator_from_config(cfg: Mapping, oracle: Oracle | None = None) -> BitGenerator:
    """Build a generator from one registry-config entry (sans halting rule)."""
    kind = cfg.get("kind")
    try:
        if kind == "constant":
            return ConstantBits(_config_bit(cfg, "bit", 0))
        if kind == "periodic":
            pattern = cfg.get("pattern")
            if not isinstance(pattern, str) or not pattern or set(pattern) - {"0", "1"}:
                raise ConfigError("'pattern' must be a nonempty string of 0/1")
            return PeriodicBits(tuple(int(c) for c in pattern))
        if kind == "table":
            raw = cfg.get("bits", {})
            if not isinstance(raw, Mapping):
                raise ConfigError("'bits' must map positions to bits")
            return TableBits({int(p): b for p, b in raw.items()},
                             _config_bit(cfg, "default", 0))
        if kind == "rational":
            return RationalBits(int(cfg.get("numerator", 0)),
                                int(cfg.get("denominator", 1)))
        if kind == "champernowne":
            return ChampernowneBits()
        if kind == "oracle-bit":
            if oracle is None:
                raise ConfigError("oracle-bit program requires an oracle")
            return OracleBits(oracle)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {kind} program: {exc}") from None
    raise ConfigError(f"unknown program kind: {kind!r}")
