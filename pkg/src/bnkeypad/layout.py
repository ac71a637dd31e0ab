"""Keypad layouts: construction, serialization, and slot lookup.

A layout maps each of the 12 physical keys to an ordered slot list; under
multi-tap the n-th slot of a key costs n presses. Four keys have reserved
roles: the symbol key (vowel signs + punctuation), the vowel key, the
space key, and the link key that joins consonants into conjuncts.

The proposed construction deals the frequency-sorted consonants across
the consonant keys in boustrophedon rounds (forward, reversed, forward,
...), which keeps consecutive high-frequency consonants off the same key.
The sequential strategy -- fill the most flexible key completely, then
the next -- is the jamming baseline to compare against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from math import ceil
from typing import Mapping

from .bn_text import (
    CONJUNCT_JOINER,
    CONSONANTS,
    INDEPENDENT_VOWELS,
    SPACE_UNIT,
    SYMBOLS,
    VOWEL_SIGNS,
    FrequencyTable,
    GraphemeUnit,
    parse_unit_token,
    unit_token,
)
from .ergonomics import DEFAULT_CONSONANT_KEYS, KEYPAD_KEYS, ErgonomicModel, rank_keys
from .errors import IncompleteAlphabetError, LayoutInvariantError, LayoutSyntaxError


class Role(Enum):
    SYMBOL = "symbol"
    VOWEL = "vowel"
    SPACE = "space"
    LINK = "link"


DEFAULT_ROLES: dict[Role, str] = {
    Role.SYMBOL: "1",
    Role.VOWEL: "9",
    Role.SPACE: "0",
    Role.LINK: "*",
}


class Strategy(Enum):
    SERPENTINE = "serpentine"
    SEQUENTIAL = "sequential"
    CUSTOM = "custom"


@dataclass(frozen=True)
class PlacementPolicy:
    """How consonants are dealt onto the consonant keys.

    ``consonant_keys`` default to the flexibility ranking of keys 2-8.
    ``custom_slots`` supplies an explicit per-key consonant placement and
    is only consulted by the CUSTOM strategy.
    """

    strategy: Strategy = Strategy.SERPENTINE
    consonant_keys: tuple[str, ...] | None = None
    custom_slots: Mapping[str, tuple[GraphemeUnit, ...]] | None = None


@dataclass(frozen=True)
class Layout:
    """Immutable key -> slot-list mapping with reserved-key roles.

    Construction validates the invariants: no unit occupies two slots,
    the space key holds exactly the space, the link key exactly the
    conjunct joiner. Missing keys are normalized to empty slot lists.
    """

    slots: Mapping[str, tuple[GraphemeUnit, ...]]
    roles: Mapping[Role, str] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if "\t" in self.name or "\n" in self.name:
            raise ValueError("layout name must not contain tabs or newlines")
        for key in self.slots:
            if key not in KEYPAD_KEYS:
                raise LayoutInvariantError(f"unknown key {key!r}")
        complete = {k: tuple(self.slots.get(k, ())) for k in KEYPAD_KEYS}
        object.__setattr__(self, "slots", complete)
        roles = dict(self.roles)
        object.__setattr__(self, "roles", roles)

        seen: dict[GraphemeUnit, str] = {}
        for key in KEYPAD_KEYS:
            for unit in complete[key]:
                if unit in seen:
                    raise LayoutInvariantError(
                        f"unit {unit.display} assigned to both key {seen[unit]} and key {key}"
                    )
                seen[unit] = key

        role_keys = list(roles.values())
        if len(set(role_keys)) != len(role_keys):
            raise LayoutInvariantError("two roles share one key")
        for role, key in roles.items():
            if key not in KEYPAD_KEYS:
                raise LayoutInvariantError(f"role {role.value} names unknown key {key!r}")
        space_key = roles.get(Role.SPACE)
        if space_key is not None and complete[space_key] != (SPACE_UNIT,):
            raise LayoutInvariantError(f"space key {space_key} must hold exactly the space")
        link_key = roles.get(Role.LINK)
        if link_key is not None and complete[link_key] != (CONJUNCT_JOINER,):
            raise LayoutInvariantError(f"link key {link_key} must hold exactly the conjunct joiner")

    @cached_property
    def _positions(self) -> dict[GraphemeUnit, tuple[str, int]]:
        pos: dict[GraphemeUnit, tuple[str, int]] = {}
        for key in KEYPAD_KEYS:
            for i, unit in enumerate(self.slots[key], start=1):
                pos[unit] = (key, i)
        return pos

    def position(self, unit: GraphemeUnit) -> tuple[str, int] | None:
        """(key, 1-based slot) of a unit, i.e. its key and tap count."""
        return self._positions.get(unit)

    def units(self) -> list[GraphemeUnit]:
        return [u for key in KEYPAD_KEYS for u in self.slots[key]]


def lookup(layout: Layout, unit: GraphemeUnit) -> tuple[str, int] | None:
    """(key, slot index) for a unit, or ``None`` when not in the layout."""
    return layout.position(unit)


def deal_serpentine(units, keys) -> dict[str, tuple[GraphemeUnit, ...]]:
    """Deal an ordered unit list boustrophedon: forward, reversed, forward, ...

    Each key receives floor or ceil of len(units)/len(keys) slots, and
    rank-adjacent units share a key only at the direction turns.
    """
    out: dict[str, list[GraphemeUnit]] = {key: [] for key in keys}
    k = len(keys)
    for round_no, start in enumerate(range(0, len(units), k)):
        chunk = units[start:start + k]
        order = tuple(keys) if round_no % 2 == 0 else tuple(reversed(keys))
        for key, unit in zip(order, chunk):
            out[key].append(unit)
    return {key: tuple(slots) for key, slots in out.items()}


def deal_sequential(units, keys) -> dict[str, tuple[GraphemeUnit, ...]]:
    """Fill each key to capacity before moving to the next (jamming baseline)."""
    capacity = ceil(len(units) / len(keys))
    out = {}
    for i, key in enumerate(keys):
        out[key] = tuple(units[i * capacity:(i + 1) * capacity])
    return out


def build_layout(freq: FrequencyTable, model: ErgonomicModel,
                 policy: PlacementPolicy | None = None,
                 roles: Mapping[Role, str] | None = None,
                 name: str | None = None) -> Layout:
    """Construct the frequency-based layout for the given corpus statistics.

    The symbol key takes vowel signs and symbols ordered by descending
    corpus frequency; the vowel key takes the 11 independent vowels in
    dictionary order; consonants are dealt per the policy strategy. The
    table must contain all 35 consonants.
    """
    policy = policy or PlacementPolicy()
    roles = dict(DEFAULT_ROLES if roles is None else roles)
    for role in Role:
        if role not in roles:
            raise ValueError(f"build_layout needs a key for role {role.value!r}")

    missing = [u for u in CONSONANTS if u not in freq.counts]
    if missing:
        raise IncompleteAlphabetError(missing)

    consonant_keys = policy.consonant_keys
    if consonant_keys is None:
        consonant_keys = tuple(rank_keys(model, DEFAULT_CONSONANT_KEYS))
    if not consonant_keys or len(set(consonant_keys)) != len(consonant_keys):
        raise LayoutInvariantError("consonant keys must be non-empty and duplicate-free")
    if set(consonant_keys) & set(roles.values()):
        raise LayoutInvariantError("consonant keys overlap reserved role keys")

    def by_count(unit: GraphemeUnit):
        return (-freq.counts.get(unit, 0), unit.codepoints)

    consonants = sorted(CONSONANTS, key=by_count)
    if policy.strategy is Strategy.SERPENTINE:
        dealt = deal_serpentine(consonants, consonant_keys)
    elif policy.strategy is Strategy.SEQUENTIAL:
        dealt = deal_sequential(consonants, consonant_keys)
    else:
        if policy.custom_slots is None:
            raise ValueError("CUSTOM strategy requires policy.custom_slots")
        dealt = {key: tuple(units) for key, units in policy.custom_slots.items()}
        placed = sorted((u for units in dealt.values() for u in units),
                        key=lambda u: u.codepoints)
        if placed != sorted(CONSONANTS, key=lambda u: u.codepoints):
            raise LayoutInvariantError("custom slots must place each consonant exactly once")
        if set(dealt) & set(roles.values()):
            raise LayoutInvariantError("custom slots overlap reserved role keys")

    slots: dict[str, tuple[GraphemeUnit, ...]] = {
        roles[Role.SYMBOL]: tuple(sorted(VOWEL_SIGNS + SYMBOLS, key=by_count)),
        roles[Role.VOWEL]: INDEPENDENT_VOWELS,  # already in dictionary order
        roles[Role.SPACE]: (SPACE_UNIT,),
        roles[Role.LINK]: (CONJUNCT_JOINER,),
    }
    slots.update(dealt)
    if name is None:
        name = policy.strategy.value
    return Layout(slots=slots, roles=roles, name=name)


HEADER = "keypad-layout v1"


def serialize(layout: Layout) -> str:
    """Canonical text form: header, name, roles, then one row per key."""
    lines = [HEADER, f"name\t{layout.name}"]
    roles_txt = ",".join(f"{role.value}={key}"
                         for role, key in sorted(layout.roles.items(),
                                                 key=lambda kv: kv[0].value))
    lines.append(f"roles\t{roles_txt}")
    for key in KEYPAD_KEYS:
        units_txt = ",".join(unit_token(u) for u in layout.slots[key])
        lines.append(f"{key}\t{units_txt}")
    return "\n".join(lines) + "\n"


def parse(document: str) -> Layout:
    """Parse a layout document; inverse of :func:`serialize`.

    Lines starting with ``#`` are comments unless the ``#`` is immediately
    followed by a TAB, which is the hash key's own row.
    """
    lines = document.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise LayoutSyntaxError(1, f"expected header {HEADER!r}")
    name = ""
    roles: dict[Role, str] = {}
    slots: dict[str, tuple[GraphemeUnit, ...]] = {}
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        if line.startswith("#") and not line.startswith("#\t"):
            continue
        head, sep, rest = line.partition("\t")
        if not sep:
            raise LayoutSyntaxError(i, "expected a TAB-separated row")
        if head == "name":
            name = rest
        elif head == "roles":
            for item in filter(None, rest.split(",")):
                role_txt, eq, key = item.partition("=")
                try:
                    role = Role(role_txt)
                except ValueError:
                    raise LayoutSyntaxError(i, f"unknown role {role_txt!r}") from None
                if not eq or not key:
                    raise LayoutSyntaxError(i, f"malformed role assignment {item!r}")
                if role in roles:
                    raise LayoutSyntaxError(i, f"duplicate role {role_txt!r}")
                roles[role] = key
        elif head in KEYPAD_KEYS:
            if head in slots:
                raise LayoutSyntaxError(i, f"duplicate row for key {head!r}")
            units = []
            for token in filter(None, (t.strip() for t in rest.split(","))):
                try:
                    units.append(parse_unit_token(token))
                except ValueError as exc:
                    raise LayoutSyntaxError(i, str(exc)) from None
            slots[head] = tuple(units)
        else:
            raise LayoutSyntaxError(i, f"unrecognized row {head!r}")
    return Layout(slots=slots, roles=roles, name=name)


def load_layout(path) -> Layout:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())
