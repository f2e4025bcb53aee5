"""Hierarchical geographic addresses over a recursively quartered world map.

The world (latitude -90..90, longitude -180..180) is split into four
rectangles, each rectangle again into four, and so on.  One address level
is a 4-bit mask over the four child rectangles, so a full 128-bit IPv6
payload holds up to 32 levels.  Rectangles are numbered with a reflected
("mirrored") labelling: two touching rectangles that belong to different
parents carry the same number, which keeps the masks of a bounding box
compact across parent boundaries.

Orientation convention (calibrated): longitude cells are indexed west to
east, latitude cells north to south, and a cell's number is taken from
the table below using the reflected bit of each axis index.

    x-bit 0, y-bit 0 -> 3      x-bit 1, y-bit 0 -> 4
    x-bit 0, y-bit 1 -> 2      x-bit 1, y-bit 1 -> 1

Rectangle k maps to mask bit 1 -> 1000, 2 -> 0100, 3 -> 0010, 4 -> 0001.
"""

from __future__ import annotations

import ipaddress
import re
from dataclasses import dataclass
from typing import Iterable

MAX_LEVELS = 32

# mask bit for rectangle number k (1..4), most significant bit first
_RECT_BIT = {1: 0b1000, 2: 0b0100, 3: 0b0010, 4: 0b0001}
_BIT_RECT = {v: k for k, v in _RECT_BIT.items()}

# (x_bit, y_bit) -> rectangle number
_DIGIT = {(0, 0): 3, (0, 1): 2, (1, 0): 4, (1, 1): 1}


class AddressError(ValueError):
    """Invalid coordinates, levels or address operands."""


@dataclass(frozen=True)
class BoundingBox:
    """Geographic area bounded by min/max latitude and longitude."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self):
        if not (-90.0 <= self.lat_min < self.lat_max <= 90.0):
            raise AddressError(f"invalid latitude bounds {self.lat_min}..{self.lat_max}")
        if not (-180.0 <= self.lon_min < self.lon_max <= 180.0):
            raise AddressError(f"invalid longitude bounds {self.lon_min}..{self.lon_max}")


@dataclass(frozen=True)
class GeoAddress:
    """Sequence of 4-bit rectangle masks, one per subdivision level."""

    levels: tuple[int, ...]

    def __post_init__(self):
        if len(self.levels) > MAX_LEVELS:
            raise AddressError(f"address longer than {MAX_LEVELS} levels")
        for nibble in self.levels:
            if not 1 <= nibble <= 0xF:
                raise AddressError(f"invalid level mask {nibble:#x}")

    def __len__(self):
        return len(self.levels)

    def rectangles(self, level: int) -> tuple[int, ...]:
        """Rectangle numbers selected at a level (0-based index)."""
        mask = self.levels[level]
        return tuple(k for k in (1, 2, 3, 4) if mask & _RECT_BIT[k])


def _axis_bit(index: int) -> int:
    # reflected labelling: mirror twins across a parent boundary share the bit
    return (index ^ (index >> 1)) & 1


def _cell_indexes(lat: float, lon: float, level: int) -> tuple[int, int]:
    n = 1 << level
    tx = (lon + 180.0) / 360.0
    ty = (90.0 - lat) / 180.0
    i = min(int(tx * n), n - 1)
    j = min(int(ty * n), n - 1)
    return i, j


def _check_point(lat: float, lon: float):
    if not -90.0 <= lat <= 90.0:
        raise AddressError(f"latitude {lat} out of range")
    if not -180.0 <= lon <= 180.0:
        raise AddressError(f"longitude {lon} out of range")


def encode_cell(lat: float, lon: float, level: int) -> GeoAddress:
    """Address of the single level-`level` cell containing a point."""
    _check_point(lat, lon)
    if not 1 <= level <= MAX_LEVELS:
        raise AddressError(f"level {level} out of range 1..{MAX_LEVELS}")
    nibbles = []
    for lv in range(1, level + 1):
        i, j = _cell_indexes(lat, lon, lv)
        digit = _DIGIT[(_axis_bit(i), _axis_bit(j))]
        nibbles.append(_RECT_BIT[digit])
    return GeoAddress(tuple(nibbles))


def encode_bbox(bbox: BoundingBox, max_level: int) -> GeoAddress:
    """Shortest address whose per-level mask cross-product covers the box.

    Masks are the numbers of all cells the box touches at each level; the
    covered area is the cross-product of the per-level selections and may
    exceed the box.  Trailing all-ones levels add no precision and are
    dropped.
    """
    if not 1 <= max_level <= MAX_LEVELS:
        raise AddressError(f"max_level {max_level} out of range 1..{MAX_LEVELS}")
    nibbles = []
    for lv in range(1, max_level + 1):
        i0, j0 = _cell_indexes(bbox.lat_max, bbox.lon_min, lv)  # NW corner
        i1, j1 = _cell_indexes(bbox.lat_min, bbox.lon_max, lv)  # SE corner
        xs = {0, 1} if i1 - i0 >= 3 else {_axis_bit(i) for i in range(i0, i1 + 1)}
        ys = {0, 1} if j1 - j0 >= 3 else {_axis_bit(j) for j in range(j0, j1 + 1)}
        mask = 0
        for x in xs:
            for y in ys:
                mask |= _RECT_BIT[_DIGIT[(x, y)]]
        nibbles.append(mask)
    while len(nibbles) > 1 and nibbles[-1] == 0xF:
        nibbles.pop()
    return GeoAddress(tuple(nibbles))


def overlaps(a: GeoAddress, b: GeoAddress) -> bool:
    """True iff the two addressed areas overlap.

    Bitwise AND per level: overlap requires at least one shared bit in
    every 4-bit group up to the length of the shorter address.
    """
    if not a.levels or not b.levels:
        raise AddressError("overlap test requires nonempty addresses")
    return all(x & y for x, y in zip(a.levels, b.levels))


def aggregate(addrs: Iterable[GeoAddress]) -> GeoAddress:
    """Single address covering the union of the inputs.

    Per level the masks are OR-ed; the result is truncated to the
    shortest input so it still overlaps every contributor.
    """
    addrs = list(addrs)
    if not addrs:
        raise AddressError("cannot aggregate an empty set of addresses")
    depth = min(len(a) for a in addrs)
    merged = []
    for lv in range(depth):
        mask = 0
        for a in addrs:
            mask |= a.levels[lv]
        merged.append(mask)
    return GeoAddress(tuple(merged))


def to_hex(a: GeoAddress) -> str:
    """Pack an address into IPv6 hexadecimal text, nibbles MSB first."""
    value = 0
    for k, nibble in enumerate(a.levels):
        value |= nibble << (124 - 4 * k)
    return ipaddress.IPv6Address(value).compressed


def parse_hex(text: str) -> GeoAddress:
    """Inverse of :func:`to_hex`; length is the last nonzero nibble."""
    value = int(ipaddress.IPv6Address(text))
    nibbles = [(value >> (124 - 4 * k)) & 0xF for k in range(MAX_LEVELS)]
    while nibbles and nibbles[-1] == 0:
        nibbles.pop()
    if any(n == 0 for n in nibbles):
        raise AddressError(f"embedded zero level in {text!r}")
    return GeoAddress(tuple(nibbles))


_DOT_GROUP = re.compile(r"\[([1-4](?:\s*,\s*[1-4])*)\]|([1-4])")


def parse_dotted(text: str) -> GeoAddress:
    """Parse dotted notation like ``4.4.2.[2,3]`` used in examples/tests."""
    nibbles = []
    for part in text.strip().split("."):
        m = _DOT_GROUP.fullmatch(part.strip())
        if not m:
            raise AddressError(f"bad dotted level {part!r}")
        digits = m.group(1).split(",") if m.group(1) else [m.group(2)]
        mask = 0
        for d in digits:
            mask |= _RECT_BIT[int(d)]
        nibbles.append(mask)
    return GeoAddress(tuple(nibbles))


def to_dotted(a: GeoAddress) -> str:
    parts = []
    for lv in range(len(a)):
        rects = a.rectangles(lv)
        parts.append(str(rects[0]) if len(rects) == 1 else "[%s]" % ",".join(map(str, rects)))
    return ".".join(parts)
