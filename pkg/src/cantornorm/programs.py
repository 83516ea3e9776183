"""Registry of effectively presented binary sequences with declared settling times.

An entry's step-bounded value at a position is its settled bit once the
entry's declared halting time there is within the budget, and 0 before that;
each value therefore changes at most once as the budget grows, and only from
0 to 1. Halting times are declared at registration rather than measured,
which keeps settlement decidable and every downstream construction exact.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ConfigError
from .generators import BitGenerator, Oracle, generator_from_config

REGISTRY_FORMAT = "registry/1"


class HaltRule(ABC):
    """Total map position -> number of steps before the value there appears."""

    rule: str = ""

    @abstractmethod
    def steps_at(self, position: int) -> int: ...

    @abstractmethod
    def max_through(self, position: int) -> int:
        """Largest steps_at(p) over p <= position."""

    @abstractmethod
    def params(self) -> dict: ...

    def to_config(self) -> dict:
        return {"rule": self.rule, **self.params()}


def _check_position(position: int) -> None:
    if position < 0:
        raise ValueError("position must be >= 0")


@dataclass(frozen=True)
class ConstantHalt(HaltRule):
    steps: int = 0
    rule = "constant"

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise ValueError("steps must be >= 0")

    def steps_at(self, position: int) -> int:
        _check_position(position)
        return self.steps

    def max_through(self, position: int) -> int:
        _check_position(position)
        return self.steps

    def params(self) -> dict:
        return {"steps": self.steps}


@dataclass(frozen=True)
class LinearHalt(HaltRule):
    slope: int = 1
    intercept: int = 0
    rule = "linear"

    def __post_init__(self) -> None:
        if self.slope < 0 or self.intercept < 0:
            raise ValueError("slope and intercept must be >= 0")

    def steps_at(self, position: int) -> int:
        _check_position(position)
        return self.slope * position + self.intercept

    def max_through(self, position: int) -> int:
        return self.steps_at(position)  # nondecreasing since slope >= 0

    def params(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept}


@dataclass(frozen=True)
class TableHalt(HaltRule):
    """Finitely many explicit halting times over a constant default."""

    entries: Mapping[int, int] | tuple[tuple[int, int], ...] = ()
    default: int = 0
    rule = "table"

    def __post_init__(self) -> None:
        items = (self.entries.items()
                 if isinstance(self.entries, Mapping) else self.entries)
        norm = tuple(sorted((int(p), int(s)) for p, s in items))
        if len({p for p, _ in norm}) != len(norm):
            raise ValueError("duplicate table position")
        for p, s in norm:
            if p < 0 or s < 0:
                raise ValueError("positions and steps must be >= 0")
        if self.default < 0:
            raise ValueError("default steps must be >= 0")
        object.__setattr__(self, "entries", norm)

    def steps_at(self, position: int) -> int:
        _check_position(position)
        for p, s in self.entries:
            if p == position:
                return s
        return self.default

    def max_through(self, position: int) -> int:
        _check_position(position)
        listed = [s for p, s in self.entries if p <= position]
        # the default applies unless every position <= `position` is listed
        if len(listed) < position + 1:
            listed.append(self.default)
        return max(listed)

    def params(self) -> dict:
        return {"steps": {str(p): s for p, s in self.entries},
                "default": self.default}


def halt_from_config(cfg) -> HaltRule:
    """Build a halting rule from config; missing config means settled at once."""
    if cfg is None:
        return ConstantHalt(0)
    if not isinstance(cfg, Mapping):
        raise ConfigError("'halt' must be an object")
    rule = cfg.get("rule")
    try:
        if rule == "constant":
            return ConstantHalt(int(cfg.get("steps", 0)))
        if rule == "linear":
            return LinearHalt(int(cfg.get("slope", 1)), int(cfg.get("intercept", 0)))
        if rule == "table":
            raw = cfg.get("steps", {})
            if not isinstance(raw, Mapping):
                raise ConfigError("'steps' must map positions to step counts")
            return TableHalt({int(p): s for p, s in raw.items()},
                             int(cfg.get("default", 0)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {rule} halting rule: {exc}") from None
    raise ConfigError(f"unknown halting rule: {rule!r}")


@dataclass(frozen=True)
class ProgramEntry:
    index: int
    generator: BitGenerator
    halt: HaltRule
    alias_of: int | None = None

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError("index must be >= 0")


@dataclass(frozen=True)
class Registry:
    """Ordered program entries plus an optional oracle bit source."""

    entries: tuple[ProgramEntry, ...] = ()
    oracle: Oracle | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        for pos, entry in enumerate(self.entries):
            if entry.index != pos:
                raise ConfigError(
                    f"entry at position {pos} carries index {entry.index}")
            if entry.alias_of is not None:
                if not 0 <= entry.alias_of < pos:
                    raise ConfigError(
                        f"entry {pos}: alias_of must name an earlier entry")
                target = self.entries[entry.alias_of]
                if entry.generator != target.generator or entry.halt != target.halt:
                    raise ConfigError(
                        f"entry {pos}: alias must share its target's generator "
                        f"and halting rule")

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, e: int) -> ProgramEntry:
        if not 0 <= e < len(self.entries):
            raise IndexError(f"unknown program index: {e}")
        return self.entries[e]

    def eval_bounded(self, e: int, budget: int, position: int) -> int:
        """Program e's value at `position` after `budget` steps: the settled
        bit once the declared halting time is within budget, 0 before that."""
        entry = self.entry(e)
        if budget < 0:
            raise ValueError("budget must be >= 0")
        _check_position(position)
        if entry.halt.steps_at(position) <= budget:
            return entry.generator.bit_at(position)
        return 0

    def eval_limit(self, e: int, position: int) -> int:
        """Program e's settled bit at `position`."""
        entry = self.entry(e)
        _check_position(position)
        return entry.generator.bit_at(position)

    def settle_budget(self, e: int, max_position: int) -> int:
        """A budget settling program e on every position <= max_position."""
        entry = self.entry(e)
        _check_position(max_position)
        return entry.halt.max_through(max_position)

    def root_of(self, e: int) -> int:
        """The non-alias index an entry ultimately duplicates."""
        entry = self.entry(e)
        while entry.alias_of is not None:
            entry = self.entries[entry.alias_of]
        return entry.index

    def alias_groups(self) -> dict[int, list[int]]:
        """Indices grouped by the non-alias entry they duplicate."""
        groups: dict[int, list[int]] = {}
        for entry in self.entries:
            groups.setdefault(self.root_of(entry.index), []).append(entry.index)
        return groups

    @classmethod
    def assemble(cls, programs: Sequence, oracle: Oracle | None = None) -> "Registry":
        """Entries from (generator, halt) pairs; a bare int aliases that index."""
        entries: list[ProgramEntry] = []
        for item in programs:
            if isinstance(item, int):
                if not 0 <= item < len(entries):
                    raise ConfigError(
                        f"alias target {item} must name an earlier entry")
                target = entries[item]
                entries.append(ProgramEntry(len(entries), target.generator,
                                            target.halt, alias_of=item))
            else:
                generator, halt = item
                entries.append(ProgramEntry(len(entries), generator, halt))
        return cls(tuple(entries), oracle)

    @classmethod
    def from_config(cls, cfg: Mapping, oracle: Oracle | None = None) -> "Registry":
        """Registry from a parsed config object; a passed oracle wins over the
        config's own."""
        if not isinstance(cfg, Mapping):
            raise ConfigError("registry config must be a JSON object")
        fmt = cfg.get("format", REGISTRY_FORMAT)
        if fmt != REGISTRY_FORMAT:
            raise ConfigError(f"unsupported registry format: {fmt!r}")
        if oracle is None and cfg.get("oracle") is not None:
            oracle = oracle_from_config(cfg["oracle"])
        raw_entries = cfg.get("entries")
        if not isinstance(raw_entries, list):
            raise ConfigError("registry config needs an 'entries' list")
        programs: list = []
        for pos, raw in enumerate(raw_entries):
            if not isinstance(raw, Mapping):
                raise ConfigError(f"entry {pos} must be an object")
            try:
                if "alias_of" in raw:
                    target = raw["alias_of"]
                    if not isinstance(target, int):
                        raise ConfigError("alias_of must be an integer index")
                    programs.append(target)
                else:
                    programs.append((generator_from_config(raw, oracle),
                                     halt_from_config(raw.get("halt"))))
            except ConfigError as exc:
                raise ConfigError(f"entry {pos}: {exc}") from None
        return cls.assemble(programs, oracle)

    @classmethod
    def from_file(cls, path, oracle_path=None) -> "Registry":
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"registry file not found: {p}")
        try:
            cfg = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"registry file {p} is not valid JSON: {exc}") from None
        oracle = load_oracle_file(oracle_path) if oracle_path is not None else None
        return cls.from_config(cfg, oracle=oracle)

    def to_config(self) -> dict:
        entries = []
        for entry in self.entries:
            if entry.alias_of is not None:
                entries.append({"alias_of": entry.alias_of})
            else:
                entries.append({**entry.generator.to_config(),
                                "halt": entry.halt.to_config()})
        cfg: dict = {"format": REGISTRY_FORMAT, "entries": entries}
        if self.oracle is not None:
            cfg["oracle"] = {
                "prefix": "".join(str(b) for b in self.oracle.prefix),
                "default": self.oracle.default,
            }
        return cfg


def oracle_from_config(cfg) -> Oracle:
    if not isinstance(cfg, Mapping):
        raise ConfigError("'oracle' must be an object")
    prefix = cfg.get("prefix", "")
    if not isinstance(prefix, str) or set(prefix) - {"0", "1"}:
        raise ConfigError("oracle 'prefix' must be a string of 0/1")
    default = cfg.get("default", 0)
    if default not in (0, 1):
        raise ConfigError("oracle 'default' must be 0 or 1")
    return Oracle(tuple(int(c) for c in prefix), default)


def load_oracle_file(path) -> Oracle:
    """Parse a bit-prefix file: runs of 0/1 characters on any number of lines
    are concatenated into the prefix, '#' lines are comments, and an optional
    'default=<0|1>' line fixes the bit beyond the prefix (0 if absent)."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"oracle file not found: {p}")
    prefix: list[int] = []
    default = 0
    for lineno, line in enumerate(p.read_text().splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if text.startswith("default="):
            value = text[len("default="):].strip()
            if value not in ("0", "1"):
                raise ConfigError(f"{p}:{lineno}: default must be 0 or 1")
            default = int(value)
            continue
        for ch in text:
            if ch in " \t":
                continue
            if ch not in "01":
                raise ConfigError(f"{p}:{lineno}: unexpected character {ch!r}")
            prefix.append(int(ch))
    return Oracle(tuple(prefix), default)
