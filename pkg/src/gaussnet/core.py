"""Exact Gaussian-integer arithmetic and the dense degree-4 network G_k.

The network generated by alpha_k = k + (k+1)i has 2k^2 + 2k + 1 nodes, the
maximum possible for diameter k.  Nodes are the canonical residues modulo
alpha_k, i.e. the lattice points of the diamond |x| + |y| <= k, which tile
the plane under the alpha_k lattice and therefore form a complete residue
system.  Two nodes are adjacent when their difference reduces to one of the
four units +1, -1, +i, -i.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Iterator


@dataclass(frozen=True, slots=True)
class GaussInt:
    """A Gaussian integer x + yi with exact (arbitrary-size) components."""

    x: int
    y: int

    def __add__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.x, -self.y)

    def __mul__(self, other: "GaussInt") -> "GaussInt":
        return GaussInt(
            self.x * other.x - self.y * other.y,
            self.x * other.y + self.y * other.x,
        )

    def conj(self) -> "GaussInt":
        return GaussInt(self.x, -self.y)

    def l1(self) -> int:
        """Taxicab length |x| + |y|; graph distance from 0 inside the diamond."""
        return abs(self.x) + abs(self.y)

    def __str__(self) -> str:
        return format_node(self)

    def __repr__(self) -> str:
        return f"GaussInt({self.x}, {self.y})"


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
IMAG = GaussInt(0, 1)

#: The four unit directions, in the fixed order +1, -1, +i, -i.
DIRECTIONS: tuple[GaussInt, ...] = (ONE, -ONE, IMAG, -IMAG)

_DIR_NAMES = {ONE: "+1", -ONE: "-1", IMAG: "+i", -IMAG: "-i"}


def direction_name(d: GaussInt) -> str:
    """Printable name of a unit direction (+1, -1, +i, -i)."""
    try:
        return _DIR_NAMES[d]
    except KeyError:
        raise ValueError(f"not a unit direction: {d!r}") from None


def norm(a: GaussInt) -> int:
    """Field norm x^2 + y^2; equals the node count when a generates a network."""
    return a.x * a.x + a.y * a.y


def alpha(k: int) -> GaussInt:
    """Generator k + (k+1)i of the dense diameter-k network."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return GaussInt(k, k + 1)


def node_count(k: int) -> int:
    return 2 * k * k + 2 * k + 1


def is_canonical(z: GaussInt, k: int) -> bool:
    return z.l1() <= k


def _round_div(a: int, b: int) -> int:
    """Round a/b to the nearest integer, ties away from zero.  b > 0."""
    if a >= 0:
        return (2 * a + b) // (2 * b)
    return -((-2 * a + b) // (2 * b))


def reduce(z: GaussInt, k: int) -> GaussInt:
    """Canonical representative of z modulo alpha_k inside the diamond.

    Rounding division gives a remainder of norm at most norm(alpha)/2, which
    can still fall outside the diamond; the true quotient then differs from
    the rounded one by at most 1 per component, so a search over the 3x3
    quotient neighbourhood always finds the unique diamond representative.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a = GaussInt(k, k + 1)
    n = 2 * k * k + 2 * k + 1
    t = z * a.conj()
    qx = _round_div(t.x, n)
    qy = _round_div(t.y, n)
    for dx, dy in ((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1),
                   (1, 1), (1, -1), (-1, 1), (-1, -1)):
        q = GaussInt(qx + dx, qy + dy)
        r = z - q * a
        if abs(r.x) + abs(r.y) <= k:
            return r
    raise AssertionError(f"no diamond representative for {z!r} mod alpha_{k}")


def rho(z: GaussInt, t: int = 1) -> GaussInt:
    """Rotate z by t quarter turns counterclockwise: rho(x+yi) = -y+xi."""
    x, y = z.x, z.y
    for _ in range(t % 4):
        x, y = -y, x
    return GaussInt(x, y)


def translate(z: GaussInt, s: GaussInt, k: int) -> GaussInt:
    """Translation automorphism: (z + s) mod alpha_k.  Bijective on V_k."""
    return reduce(z + s, k)


def neighbors(v: GaussInt, k: int) -> list[GaussInt]:
    """The four neighbours of v, reduced to canonical form, in +1,-1,+i,-i order."""
    return [reduce(v + d, k) for d in DIRECTIONS]


class RegionClass(Enum):
    """Partition classes of the node set, defined on the first quadrant wedge.

    S: the unit node on the positive real axis (x = 1).
    B: the interior of the positive real axis (1 < x < k).
    P: the endpoint of the positive real axis (x = k).
    R: the first row above the axis (y = 1, 0 < x < k).
    Q: the remaining wedge interior (x > 0, y > 1, x + y <= k).
    ORIGIN: the root node 0, outside all twenty quadrant regions.
    """

    S = "S"
    B = "B"
    R = "R"
    Q = "Q"
    P = "P"
    ORIGIN = "origin"


@dataclass(frozen=True, slots=True)
class Region:
    """One of the 21 partition classes: a class letter plus a quadrant 1..4."""

    cls: RegionClass
    quadrant: int

    def __str__(self) -> str:
        if self.cls is RegionClass.ORIGIN:
            return "origin"
        return f"{self.cls.value}{self.quadrant}"


ORIGIN_REGION = Region(RegionClass.ORIGIN, 0)


def _wedge_class(v: GaussInt, k: int) -> RegionClass | None:
    """Class of v within the first-quadrant wedge {x >= 1, y >= 0, x+y <= k}."""
    x, y = v.x, v.y
    if y == 0:
        if x == 1:
            return RegionClass.S
        if 1 < x < k:
            return RegionClass.B
        if x == k:
            return RegionClass.P
    elif y == 1 and 0 < x < k:
        return RegionClass.R
    elif y > 1 and x > 0 and x + y <= k:
        return RegionClass.Q
    return None


# Quadrant q regions are the images of quadrant 1 under rho^(q-1).  This
# orientation is pinned by the routing regression tests: under it the
# table-driven router reproduces every tree path, and -i lands in S4 with
# parent -2i as the parent/child table requires.
QUADRANT_SENSE = 1


def classify(v: GaussInt, k: int) -> Region:
    """The unique region containing canonical v; rejects non-canonical input."""
    if not is_canonical(v, k):
        raise ValueError(f"{v} is not canonical for k={k}")
    if v == ZERO:
        return ORIGIN_REGION
    for q in range(4):
        cls = _wedge_class(rho(v, -q * QUADRANT_SENSE), k)
        if cls is not None:
            return Region(cls, q + 1)
    raise AssertionError(f"{v} not covered by any region (k={k})")


# -- node literals ----------------------------------------------------------

_NODE_RE = re.compile(
    r"""^\s*(?:
        (?P<re1>[+-]?\d+)\s*(?P<im1>[+-](?:\d+)?)i   # x+yi / x-yi / x+i
      | (?P<im2>[+-]?(?:\d+)?)i                      # yi / i / -i
      | (?P<re2>[+-]?\d+)                            # x
    )\s*$""",
    re.VERBOSE,
)


def parse_node(text: str) -> GaussInt:
    """Parse a node literal like "0", "-2", "3i", "-i" or "-2+2i"."""
    cleaned = text.replace("−", "-").replace(" ", "")
    m = _NODE_RE.match(cleaned)
    if not m:
        raise ValueError(f"malformed node literal: {text!r}")
    if m.group("re1") is not None:
        x = int(m.group("re1"))
        im = m.group("im1")
        y = int(im) if im not in ("+", "-") else int(im + "1")
    elif m.group("im2") is not None:
        im = m.group("im2")
        x = 0
        y = int(im) if im not in ("", "+", "-") else int((im or "+") + "1")
    else:
        x = int(m.group("re2"))
        y = 0
    return GaussInt(x, y)


def format_node(v: GaussInt) -> str:
    """Canonical node literal; inverse of parse_node."""
    x, y = v.x, v.y
    if y == 0:
        return str(x)
    imag = "i" if abs(y) == 1 else f"{abs(y)}i"
    sign = "-" if y < 0 else ""
    if x == 0:
        return sign + imag
    sign = "-" if y < 0 else "+"
    return f"{x}{sign}{imag}"


# -- the network ------------------------------------------------------------

def _node_key(v: GaussInt) -> tuple[int, int]:
    return (v.x, v.y)


def diamond_nodes(k: int) -> list[GaussInt]:
    """All canonical residues, sorted lexicographically by (x, y)."""
    out = []
    for x in range(-k, k + 1):
        span = k - abs(x)
        for y in range(-span, span + 1):
            out.append(GaussInt(x, y))
    return out


class Network:
    """The dense Gaussian network of diameter k, built once and shared read-only."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        self.alpha = alpha(k)
        self.nodes: tuple[GaussInt, ...] = tuple(diamond_nodes(k))
        self._index = {v: i for i, v in enumerate(self.nodes)}
        self._adj = {v: tuple(neighbors(v, k)) for v in self.nodes}

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v: GaussInt) -> bool:
        return v in self._index

    def __iter__(self) -> Iterator[GaussInt]:
        return iter(self.nodes)

    def index(self, v: GaussInt) -> int:
        return self._index[v]

    def neighbors(self, v: GaussInt) -> tuple[GaussInt, ...]:
        return self._adj[v]

    def edges(self) -> list[tuple[GaussInt, GaussInt]]:
        """Each adjacency once, ordered by the lexicographically smaller endpoint."""
        out = []
        for v in self.nodes:
            for w in self._adj[v]:
                if _node_key(v) < _node_key(w):
                    out.append((v, w))
        out.sort(key=lambda e: (_node_key(e[0]), _node_key(e[1])))
        return out

    def is_wraparound(self, a: GaussInt, b: GaussInt) -> bool:
        """True when the raw Gaussian difference of the endpoints is not a unit."""
        return (a - b).l1() != 1

    def to_json(self) -> str:
        payload = {
            "k": self.k,
            "alpha": {"x": self.alpha.x, "y": self.alpha.y},
            "nodes": [{"x": v.x, "y": v.y} for v in self.nodes],
            "edges": [
                [{"x": a.x, "y": a.y}, {"x": b.x, "y": b.y}]
                for a, b in self.edges()
            ],
        }
        return json.dumps(payload, indent=2)

    def to_dot(self) -> str:
        lines = [f"graph gaussian_{self.k} {{"]
        for v in self.nodes:
            lines.append(f'  "{format_node(v)}";')
        for a, b in self.edges():
            style = " [style=dashed]" if self.is_wraparound(a, b) else ""
            lines.append(f'  "{format_node(a)}" -- "{format_node(b)}"{style};')
        lines.append("}")
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=32)
def network(k: int) -> Network:
    """Shared immutable Network instance for k."""
    return Network(k)


def bfs_distance(u: GaussInt, v: GaussInt, k: int) -> int:
    """Graph distance between canonical u and v."""
    if not is_canonical(u, k) or not is_canonical(v, k):
        raise ValueError("nodes must be canonical")
    if u == v:
        return 0
    return distances_from(u, k)[v]


def distances_from(u: GaussInt, k: int) -> dict[GaussInt, int]:
    """BFS distances from u to every node."""
    net = network(k)
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for a in frontier:
            for b in net.neighbors(a):
                if b not in dist:
                    dist[b] = dist[a] + 1
                    nxt.append(b)
        frontier = nxt
    return dist
