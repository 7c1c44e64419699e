"""Balanced c-partite tournaments: representation, validation, degrees, .mpt I/O.

Vertex ids run over ``0 .. r*c - 1`` and part ``i`` owns ids ``[i*r, (i+1)*r)``,
so ``part(v) == v // r``.  The orientation is stored as a dense 0/1 matrix
``adj`` with ``adj[u, v] == 1`` iff the arc goes ``u -> v``.

Note on notation: the minimum part-restricted in-degree is sometimes written
with a ``+`` superscript by mistake; here the four extremes
``Delta_V^+``, ``delta_V^+``, ``Delta_V^-``, ``delta_V^-`` are kept distinct.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 4096


class MptError(ValueError):
    """Base class for instance-level errors."""


class InvalidInstance(MptError):
    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.message = message


class MptParseError(MptError):
    """Malformed .mpt text.  ``line``/``column`` are 1-based, ``offset`` is a byte offset."""

    def __init__(self, message: str, line: int, column: int = 1, offset: int | None = None):
        loc = f"line {line}, column {column}"
        if offset is not None:
            loc += f", byte {offset}"
        super().__init__(f"{message} ({loc})")
        self.message = message
        self.line = line
        self.column = column
        self.offset = offset


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    kind: str | None = None  # first violated invariant
    message: str = ""
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class MptInstance:
    """An immutable balanced c-partite tournament (build via the constructors below)."""

    c: int
    r: int
    adj: np.ndarray = field(repr=False)
    comments: tuple[str, ...] = ()

    def __post_init__(self):
        a = np.ascontiguousarray(self.adj, dtype=np.uint8)
        a.setflags(write=False)
        object.__setattr__(self, "adj", a)

    def __eq__(self, other):
        if not isinstance(other, MptInstance):
            return NotImplemented
        return self.c == other.c and self.r == other.r and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.c, self.r, self.adj.tobytes()))

    @property
    def n(self) -> int:
        return self.r * self.c

    def part(self, v: int) -> int:
        return v // self.r

    def part_vertices(self, i: int) -> range:
        return range(i * self.r, (i + 1) * self.r)

    def arc(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def _check_vertex(self, x: int) -> None:
        if not (0 <= x < self.n):
            raise IndexError(f"vertex {x} out of range 0..{self.n - 1}")

    @cached_property
    def part_out(self) -> np.ndarray:
        """``part_out[x, i] = d_i^+(x)`` (0 on x's own part)."""
        return self.adj.reshape(self.n, self.c, self.r).sum(axis=2, dtype=np.int64)

    @cached_property
    def part_in(self) -> np.ndarray:
        pin = self.r - self.part_out
        own = np.arange(self.n) // self.r
        pin[np.arange(self.n), own] = 0
        return pin

    @cached_property
    def out_degree(self) -> np.ndarray:
        return self.part_out.sum(axis=1)

    @cached_property
    def in_degree(self) -> np.ndarray:
        return self.r * (self.c - 1) - self.out_degree

    @cached_property
    def bitrows(self) -> tuple[int, ...]:
        """Out-neighbourhoods as Python int bitmasks."""
        packed = np.packbits(self.adj, axis=1, bitorder="little")
        return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)

    # constructors

    @classmethod
    def from_matrix(cls, c: int, r: int, matrix, comments: Sequence[str] = ()) -> "MptInstance":
        """Build from an (rc x rc) 0/1 matrix; raises InvalidInstance."""
        a = np.asarray(matrix, dtype=np.uint8)
        rep = _check_matrix(c, r, a)
        if not rep.ok:
            raise InvalidInstance(rep.kind, rep.message)
        return cls(c, r, a, tuple(comments))

    @classmethod
    def from_arcs(cls, c: int, r: int, arcs: Iterable[tuple[int, int]]) -> "MptInstance":
        arcs = list(arcs)
        rep = validate({"c": c, "r": r, "arcs": arcs})
        if not rep.ok:
            raise InvalidInstance(rep.kind, rep.message)
        n = r * c
        a = np.zeros((n, n), dtype=np.uint8)
        for u, v in arcs:
            a[u, v] = 1
        return cls(c, r, a)

    def arcs(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(self.adj)
        return list(zip(us.tolist(), vs.tolist()))

    def relabel_parts(self, order: Sequence[int]) -> "MptInstance":
        """Instance whose part ``k`` is the old part ``order[k]`` (local order kept)."""
        if sorted(order) != list(range(self.c)):
            raise ValueError("order must be a permutation of the parts")
        perm = np.concatenate([np.arange(p * self.r, (p + 1) * self.r) for p in order])
        return MptInstance(self.c, self.r, self.adj[np.ix_(perm, perm)])


def _same_part_mask(c: int, r: int) -> np.ndarray:
    p = np.arange(r * c) // r
    return p[:, None] == p[None, :]


def _check_matrix(c: int, r: int, a: np.ndarray) -> ValidationReport:
    if c < 2 or r < 1:
        return ValidationReport(False, "bad-shape", f"need c >= 2 and r >= 1, got c={c}, r={r}")
    n = r * c
    if n > MAX_ORDER:
        return ValidationReport(False, "bad-shape", f"order {n} exceeds {MAX_ORDER}")
    if a.shape != (n, n):
        return ValidationReport(False, "bad-shape", f"matrix shape {a.shape} != ({n}, {n})")
    if ((a != 0) & (a != 1)).any():
        return ValidationReport(False, "bad-entry", "entries must be 0 or 1")
    same = _same_part_mask(c, r)
    bad = np.argwhere(same & (a == 1))
    if len(bad):
        u, v = map(int, bad[0])
        return ValidationReport(False, "same-part arc", f"arc {u}->{v} inside part {u // r}", (u, v))
    both = np.argwhere(np.triu((a == 1) & (a.T == 1)))
    if len(both):
        u, v = map(int, both[0])
        return ValidationReport(False, "duplicated arc", f"arcs {u}->{v} and {v}->{u}", (u, v))
    missing = np.argwhere(np.triu(~same & (a == 0) & (a.T == 0)))
    if len(missing):
        u, v = map(int, missing[0])
        return ValidationReport(False, "missing arc", f"no arc between {u} and {v}", (u, v))
    return ValidationReport(True)


def validate(raw) -> ValidationReport:
    """Check raw instance data without raising.

    ``raw`` is either an MptInstance or a mapping with keys ``c``, ``r`` and
    ``arcs`` (iterable of ``(u, v)`` pairs) or ``matrix``; an optional ``parts``
    list gives each vertex's part label and must match the ``v // r`` layout.
    """
    if isinstance(raw, MptInstance):
        return _check_matrix(raw.c, raw.r, raw.adj)
    try:
        c, r = int(raw["c"]), int(raw["r"])
    except (KeyError, TypeError, ValueError) as exc:
        return ValidationReport(False, "bad-shape", f"missing or non-integer c/r: {exc}")
    if c < 2 or r < 1:
        return ValidationReport(False, "bad-shape", f"need c >= 2 and r >= 1, got c={c}, r={r}")
    n = r * c
    parts = raw.get("parts")
    if parts is not None:
        parts = list(parts)
        counts = [0] * max(c, max(parts, default=0) + 1)
        for p in parts:
            counts[p] += 1
        if len(counts) != c or any(k != r for k in counts):
            return ValidationReport(False, "unbalanced part", f"part sizes {counts}, expected {c} parts of {r}")
        for v, p in enumerate(parts):
            if p != v // r:
                return ValidationReport(False, "bad-layout", f"vertex {v} labelled part {p}, layout requires {v // r}")
    if "matrix" in raw:
        return _check_matrix(c, r, np.asarray(raw["matrix"]))
    seen: set[tuple[int, int]] = set()
    for u, v in raw.get("arcs", ()):
        if not (0 <= u < n and 0 <= v < n):
            return ValidationReport(False, "bad-vertex", f"arc {u}->{v} outside 0..{n - 1}", (u, v))
        if u // r == v // r:
            return ValidationReport(False, "same-part arc", f"arc {u}->{v} inside part {u // r}", (u, v))
        if (u, v) in seen or (v, u) in seen:
            return ValidationReport(False, "duplicated arc", f"pair {{{u}, {v}}} oriented twice", (u, v))
        seen.add((u, v))
    for u in range(n):
        for v in range(u + 1, n):
            if u // r != v // r and (u, v) not in seen and (v, u) not in seen:
                return ValidationReport(False, "missing arc", f"no arc between {u} and {v}", (u, v))
    return ValidationReport(True)


# degrees


@dataclass(frozen=True)
class DegreeProfile:
    vertex: int
    part: int
    d_plus: int
    d_minus: int
    part_plus: dict[int, int]  # d_i^+ for every i != part
    part_minus: dict[int, int]

    @property
    def dv_plus_max(self) -> int:
        return max(self.part_plus.values())

    @property
    def dv_plus_min(self) -> int:
        return min(self.part_plus.values())

    @property
    def dv_minus_max(self) -> int:
        return max(self.part_minus.values())

    @property
    def dv_minus_min(self) -> int:
        return min(self.part_minus.values())


def degree_profile(inst: MptInstance, x: int) -> DegreeProfile:
    inst._check_vertex(x)
    own = inst.part(x)
    plus = {i: int(inst.part_out[x, i]) for i in range(inst.c) if i != own}
    minus = {i: inst.r - d for i, d in plus.items()}
    return DegreeProfile(x, own, int(inst.out_degree[x]), int(inst.in_degree[x]), plus, minus)


@dataclass(frozen=True)
class IrregularityReport:
    Delta: int
    delta: int
    i_g: int
    Delta_V_plus: int
    delta_V_plus: int
    Delta_V_minus: int
    delta_V_minus: int
    mu: int
    alpha: Fraction
    beta: Fraction

    def to_json(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["alpha"] = str(self.alpha)
        d["beta"] = str(self.beta)
        return d


def irregularity(inst: MptInstance) -> IrregularityReport:
    own = np.arange(inst.n) // inst.r
    cross = np.ones((inst.n, inst.c), dtype=bool)
    cross[np.arange(inst.n), own] = False
    dp = inst.part_out[cross]
    dm = inst.part_in[cross]
    semis = np.concatenate([inst.out_degree, inst.in_degree])
    Delta, delta = int(semis.max()), int(semis.min())
    Dvp, dvp, Dvm, dvm = int(dp.max()), int(dp.min()), int(dm.max()), int(dm.min())
    norm = inst.r * (inst.c - 1)
    return IrregularityReport(
        Delta=Delta,
        delta=delta,
        i_g=Delta - delta,
        Delta_V_plus=Dvp,
        delta_V_plus=dvp,
        Delta_V_minus=Dvm,
        delta_V_minus=dvm,
        mu=max(Dvp - dvp, Dvm - dvm),
        alpha=Fraction(2 * Delta, norm),
        beta=Fraction(2 * delta, norm),
    )


# transversals and tournaments


@dataclass(frozen=True, eq=False)
class Tournament:
    """An order-n tournament; ``vertices`` optionally maps local index -> instance id."""

    adj: np.ndarray = field(repr=False)
    vertices: tuple[int, ...] | None = None

    def __post_init__(self):
        a = np.ascontiguousarray(self.adj, dtype=np.uint8)
        a.setflags(write=False)
        object.__setattr__(self, "adj", a)

    def __eq__(self, other):
        if not isinstance(other, Tournament):
            return NotImplemented
        return np.array_equal(self.adj, other.adj) and self.vertices == other.vertices

    @property
    def order(self) -> int:
        return self.adj.shape[0]

    @cached_property
    def scores(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    @classmethod
    def from_matrix(cls, matrix, vertices=None) -> "Tournament":
        a = np.asarray(matrix, dtype=np.uint8)
        n = a.shape[0]
        if a.shape != (n, n) or a.diagonal().any() or not np.array_equal(a + a.T, 1 - np.eye(n, dtype=np.uint8)):
            raise ValueError("not a tournament matrix")
        return cls(a, None if vertices is None else tuple(vertices))


def check_transversal(inst: MptInstance, t: Sequence[int]) -> tuple[int, ...]:
    t = tuple(int(v) for v in t)
    if len(t) != inst.c:
        raise ValueError(f"transversal needs {inst.c} vertices, got {len(t)}")
    for i, v in enumerate(t):
        inst._check_vertex(v)
        if inst.part(v) != i:
            raise ValueError(f"position {i} holds vertex {v} of part {inst.part(v)}")
    return t


def induce_transversal(inst: MptInstance, t: Sequence[int]) -> Tournament:
    t = check_transversal(inst, t)
    idx = np.asarray(t)
    return Tournament(inst.adj[np.ix_(idx, idx)], t)


# .mpt text format


def serialize(inst: MptInstance) -> str:
    lines = [f"mpt {inst.c} {inst.r}"]
    lines += [f"# {s}" if s else "#" for s in inst.comments]
    same = _same_part_mask(inst.c, inst.r)
    chars = np.where(same, ord("."), np.where(inst.adj == 1, ord("1"), ord("0"))).astype(np.uint8)
    lines += [row.tobytes().decode("ascii") for row in chars]
    return "\n".join(lines) + "\n"


def parse(text: str) -> MptInstance:
    """Parse .mpt text; raises MptParseError with line/column/byte position."""
    lines = text.split("\n")
    offsets = [0]
    for ln in lines[:-1]:
        offsets.append(offsets[-1] + len(ln.encode("utf-8")) + 1)

    def err(msg, li, col=1):
        return MptParseError(msg, li + 1, col, offsets[li] + col - 1 if li < len(offsets) else None)

    head = lines[0].rstrip("\r").split(" ")
    if len(head) != 3 or head[0] != "mpt":
        raise err("header must be 'mpt <c> <r>'", 0)
    try:
        c, r = int(head[1]), int(head[2])
    except ValueError:
        raise err("c and r must be integers", 0, 5) from None
    if c < 2 or r < 1 or r * c > MAX_ORDER:
        raise err(f"unsupported c={c}, r={r}", 0, 5)
    n = r * c
    li = 1
    comments = []
    while li < len(lines) and lines[li].startswith("#"):
        comments.append(lines[li][2:] if lines[li].startswith("# ") else lines[li][1:])
        li += 1
    rows = []
    for u in range(n):
        if li >= len(lines) or (li == len(lines) - 1 and lines[li] == ""):
            raise err(f"expected {n} matrix rows, found {u}", min(li, len(lines) - 1))
        row = lines[li].rstrip("\r")
        if len(row) != n:
            raise err(f"row {u} has {len(row)} characters, expected {n}", li, min(len(row), n) + 1)
        bad = next((j for j, ch in enumerate(row) if ch not in "01."), None)
        if bad is not None:
            raise err(f"unexpected character {row[bad]!r}", li, bad + 1)
        rows.append(row)
        li += 1
    if any(s.strip() for s in lines[li:]):
        extra = next(k for k in range(li, len(lines)) if lines[k].strip())
        raise err("trailing content after matrix", extra)

    grid = np.frombuffer("".join(rows).encode("ascii"), dtype=np.uint8).reshape(n, n)
    first_row = li - n
    same = _same_part_mask(c, r)
    dots = grid == ord(".")
    wrong = np.argwhere(dots != same)
    if len(wrong):
        u, v = map(int, wrong[0])
        what = "'.' between different parts" if dots[u, v] else "arc inside a part"
        raise err(f"{what} at ({u}, {v})", first_row + u, v + 1)
    ones = grid == ord("1")
    asym = np.argwhere(~same & (ones == ones.T))
    if len(asym):
        u, v = map(int, asym[0])
        kind = "duplicated arc" if ones[u, v] else "missing arc"
        raise err(f"{kind}: ({u}, {v}) and ({v}, {u}) both '{grid[u, v]:c}'", first_row + u, v + 1)
    return MptInstance(c, r, ones.astype(np.uint8), tuple(comments))
