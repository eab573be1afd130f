"""Exact canonical representation of the generated subalgebra's elements.

Every element is a finite union of basis sets: singletons A(p,m), row
pattern tails S(p,m), row off-pattern tails Sbar(p,m), full rows V(p),
down-sets D(p) and up-sets U(p).  A ``SymbolicSet`` stores the element as a
canonical function from levels to canonical row descriptions, with constant
behaviour (empty or full) outside a finite level window.  All Boolean
operations, the image/preimage operators, cardinality, and level extrema
are computed exactly; equality is structural equality of canonical forms.

Two independent implementations of the operators are provided:
``apply_f``/``apply_g`` derive the result from the three edge rules of the
frame, level by level; ``apply_f_table``/``apply_g_table`` decompose the
argument into basis sets and apply a per-kind clause table.  The audit
module compares both against the finite truncation oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .frames import TruncationSpec, VertexId
from .sparam import SParameter

# ---------------------------------------------------------------------------
# canonical rows


@dataclass(frozen=True)
class Row:
    """Canonical description of one level's index set.

    Denotes ``prefix`` together with, from ``start`` on, all pattern indices
    (if ``pat_tail``) and all off-pattern indices (if ``off_tail``).
    Canonical form: prefix is a subset of [1, start); start is minimal;
    ``off_tail`` is set only when the off-pattern tail is infinite.
    """

    prefix: frozenset[int]
    start: int
    pat_tail: bool
    off_tail: bool


EMPTY_ROW = Row(frozenset(), 1, False, False)
FULL_ROW = Row(frozenset(), 1, True, True)


def make_row(s: SParameter, members: set[int], base: int, pat_tail: bool, off_tail: bool) -> Row:
    """Canonicalize a loose row description.

    Semantics of the input: ``members`` plus the selected tails from
    ``base`` on.  ``members`` may contain indices at or above ``base``.

    When the parameter's off-pattern class is finite (all-in tail), the only
    canonical tail forms are (False, False) and (True, True): a pattern tail
    is then cofinite, so it is stored as a full tail with the finitely many
    missing indices pushed into the prefix region.
    """
    base = max(base, 1)
    members = {n for n in members if n >= 1}

    def mem(n: int) -> bool:
        if n in members:
            return True
        if n < base:
            return False
        return pat_tail if s.in_pattern(n) else off_tail

    horizon = max([base, s.stable_from] + [n + 1 for n in members])
    if not s.off_pattern_infinite():
        out_pat, out_off = (pat_tail, pat_tail)  # cofinite iff the pattern tail is on
    else:
        out_pat, out_off = pat_tail, off_tail
    explicit = {n for n in range(1, horizon) if mem(n)}
    start = horizon
    while start > 1:
        n = start - 1
        expected = out_pat if s.in_pattern(n) else out_off
        if (n in explicit) != expected:
            break
        explicit.discard(n)
        start -= 1
    return Row(frozenset(explicit), start, out_pat, out_off)


def row_contains(s: SParameter, r: Row, n: int) -> bool:
    if n < 1:
        return False
    if n < r.start:
        return n in r.prefix
    return r.pat_tail if s.in_pattern(n) else r.off_tail


def row_members_below(s: SParameter, r: Row, k: int) -> set[int]:
    return {n for n in range(1, k) if row_contains(s, r, n)}


def _row_binary(s: SParameter, a: Row, b: Row, op) -> Row:
    base = max(a.start, b.start)
    ma = row_members_below(s, a, base)
    mb = row_members_below(s, b, base)
    members = {n for n in range(1, base) if op(n in ma, n in mb)}
    return make_row(s, members, base, op(a.pat_tail, b.pat_tail), op(a.off_tail, b.off_tail))


def row_union(s, a, b):
    return _row_binary(s, a, b, lambda x, y: x or y)


def row_intersect(s, a, b):
    return _row_binary(s, a, b, lambda x, y: x and y)


def row_complement(s: SParameter, r: Row) -> Row:
    members = {n for n in range(1, r.start) if n not in r.prefix}
    return make_row(s, members, r.start, not r.pat_tail, not r.off_tail)


def row_is_infinite(r: Row) -> bool:
    return r.pat_tail or r.off_tail


def row_count(r: Row) -> int | None:
    """Number of members, or None when infinite."""
    return None if row_is_infinite(r) else len(r.prefix)


def row_min(s: SParameter, r: Row) -> int | None:
    candidates = []
    if r.prefix:
        candidates.append(min(r.prefix))
    if r.pat_tail:
        candidates.append(s.pattern_min(r.start))
    if r.off_tail:
        off = s.off_pattern_min(r.start)
        if off is not None:
            candidates.append(off)
    return min(candidates) if candidates else None


def row_max(s: SParameter, r: Row) -> int | None:
    """Greatest member for finite rows; None means unbounded (or use row_count
    to distinguish the empty row)."""
    if row_is_infinite(r):
        return None
    return max(r.prefix) if r.prefix else None


def row_meets_pattern(s: SParameter, r: Row) -> bool:
    """Whether the row contains some pattern index."""
    return r.pat_tail or any(s.in_pattern(n) for n in r.prefix)


def pattern_row(s: SParameter, start: int = 1) -> Row:
    return make_row(s, set(), start, True, False)


def off_pattern_row(s: SParameter, start: int) -> Row:
    """Off-pattern indices >= max(start, 2); may canonicalize to empty."""
    return make_row(s, set(), max(start, 2), False, True)


def tail_row(s: SParameter, start: int) -> Row:
    """All indices >= start."""
    return make_row(s, set(), max(start, 1), True, True)


# ---------------------------------------------------------------------------
# symbolic sets


@dataclass(frozen=True)
class SymbolicSet:
    """Canonical element of the generated subalgebra for one parameter.

    Levels below ``anchor`` behave as ``below_full``; levels from
    ``anchor + len(rows)`` on behave as ``above_full``; ``rows`` give the
    levels in between.  Canonical form: boundary rows differ from the
    adjacent constant row, and a fully constant set has anchor 0.
    """

    sparam: SParameter
    below_full: bool
    above_full: bool
    anchor: int
    rows: tuple[Row, ...]

    def row_at(self, level: int) -> Row:
        if level < self.anchor:
            return FULL_ROW if self.below_full else EMPTY_ROW
        if level >= self.anchor + len(self.rows):
            return FULL_ROW if self.above_full else EMPTY_ROW
        return self.rows[level - self.anchor]

    def __str__(self) -> str:
        return display(self)


def _make_set(
    s: SParameter, below_full: bool, above_full: bool, lo: int, rows: list[Row]
) -> SymbolicSet:
    below_row = FULL_ROW if below_full else EMPTY_ROW
    above_row = FULL_ROW if above_full else EMPTY_ROW
    rows = list(rows)
    while rows and rows[0] == below_row:
        rows.pop(0)
        lo += 1
    while rows and rows[-1] == above_row:
        rows.pop()
    if not rows and below_full == above_full:
        lo = 0
    return SymbolicSet(s, below_full, above_full, lo, tuple(rows))


def empty_set(s: SParameter) -> SymbolicSet:
    return SymbolicSet(s, False, False, 0, ())


def full_set(s: SParameter) -> SymbolicSet:
    return SymbolicSet(s, True, True, 0, ())


def is_empty(x: SymbolicSet) -> bool:
    return not x.below_full and not x.above_full and not x.rows


def is_full(x: SymbolicSet) -> bool:
    return x.below_full and x.above_full and not x.rows


def is_equal(x: SymbolicSet, y: SymbolicSet) -> bool:
    _check_same_param(x, y)
    return x == y


def _check_same_param(x: SymbolicSet, y: SymbolicSet):
    if x.sparam != y.sparam:
        raise ValueError("operands built over different S-parameters")


def _span(x: SymbolicSet) -> tuple[int, int] | None:
    if x.rows:
        return (x.anchor, x.anchor + len(x.rows) - 1)
    if x.below_full != x.above_full:
        return (x.anchor, x.anchor - 1)
    return None


def _binary(x: SymbolicSet, y: SymbolicSet, mode_op, row_op) -> SymbolicSet:
    _check_same_param(x, y)
    s = x.sparam
    spans = [sp for sp in (_span(x), _span(y)) if sp is not None]
    below = mode_op(x.below_full, y.below_full)
    above = mode_op(x.above_full, y.above_full)
    if not spans:
        return _make_set(s, below, above, 0, [])
    lo = min(sp[0] for sp in spans)
    hi = max(max(sp[1] for sp in spans), lo - 1)
    rows = [row_op(s, x.row_at(q), y.row_at(q)) for q in range(lo, hi + 1)]
    return _make_set(s, below, above, lo, rows)


def union(x: SymbolicSet, y: SymbolicSet) -> SymbolicSet:
    return _binary(x, y, lambda a, b: a or b, row_union)


def intersect(x: SymbolicSet, y: SymbolicSet) -> SymbolicSet:
    return _binary(x, y, lambda a, b: a and b, row_intersect)


def complement(x: SymbolicSet) -> SymbolicSet:
    s = x.sparam
    rows = [row_complement(s, r) for r in x.rows]
    return _make_set(s, not x.below_full, not x.above_full, x.anchor, rows)


def union_all(s: SParameter, parts) -> SymbolicSet:
    out = empty_set(s)
    for part in parts:
        out = union(out, part)
    return out


def member(x: SymbolicSet, v: VertexId) -> bool:
    return row_contains(x.sparam, x.row_at(v.level), v.index)


# ---------------------------------------------------------------------------
# basis sets


@dataclass(frozen=True)
class BasisSet:
    """Named generator: kinds A, S, Sbar (indexed), V, D, U (level only)."""

    kind: str
    level: int
    index: int | None = None

    def __post_init__(self):
        if self.kind not in ("A", "S", "Sbar", "V", "D", "U"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        needs_index = self.kind in ("A", "S", "Sbar")
        if needs_index and (self.index is None or self.index < 1):
            raise ValueError(f"kind {self.kind} needs an index >= 1")
        if not needs_index and self.index is not None:
            raise ValueError(f"kind {self.kind} takes no index")

    def __str__(self) -> str:
        if self.index is None:
            return f"{self.kind}({self.level})"
        return f"{self.kind}({self.level},{self.index})"


def basis(s: SParameter, b: BasisSet) -> SymbolicSet:
    p, m = b.level, b.index
    if b.kind == "A":
        return _make_set(s, False, False, p, [make_row(s, {m}, m + 1, False, False)])
    if b.kind == "S":
        return _make_set(s, False, False, p, [pattern_row(s, m)])
    if b.kind == "Sbar":
        return _make_set(s, False, False, p, [off_pattern_row(s, m)])
    if b.kind == "V":
        return _make_set(s, False, False, p, [FULL_ROW])
    if b.kind == "D":
        return SymbolicSet(s, True, False, p + 1, ())
    return SymbolicSet(s, False, True, p, ())  # U


def basis_a(s, p, m):
    return basis(s, BasisSet("A", p, m))


def basis_srow(s, p, m):
    return basis(s, BasisSet("S", p, m))


def basis_sbar(s, p, m):
    return basis(s, BasisSet("Sbar", p, m))


def basis_vrow(s, p):
    return basis(s, BasisSet("V", p))


def basis_d(s, p):
    return basis(s, BasisSet("D", p))


def basis_u(s, p):
    return basis(s, BasisSet("U", p))


# ---------------------------------------------------------------------------
# image and preimage, rule-based

# The three edge rules induce, level by level:
#   image:    any nonempty level strictly above q fills level q; within a row
#             the image is the down-closure plus one successor step; a row's
#             index 1 contributes the pattern tail of the next level up.
#   preimage: any nonempty level strictly below q fills level q; within a row
#             the preimage is the up-closure from min-1; index 1 of the level
#             below sees a row iff the row meets the pattern.


def _f_row_image(s: SParameter, r: Row) -> Row:
    if r == EMPTY_ROW:
        return EMPTY_ROW
    if row_is_infinite(r):
        return FULL_ROW
    top = max(r.prefix)
    return make_row(s, set(range(1, top + 2)), top + 2, False, False)


def _g_row_image(s: SParameter, r: Row) -> Row:
    if r == EMPTY_ROW:
        return EMPTY_ROW
    lo = max(1, row_min(s, r) - 1)
    return tail_row(s, lo)


def apply_f(x: SymbolicSet) -> SymbolicSet:
    s = x.sparam
    if is_empty(x):
        return x
    if x.above_full:
        return full_set(s)
    top_level = x.anchor + len(x.rows) - 1 if x.rows else x.anchor - 1
    top = x.row_at(top_level)
    out_top = _f_row_image(s, top)
    if row_contains(s, x.row_at(top_level - 1), 1):
        out_top = row_union(s, out_top, pattern_row(s))
    out_above = pattern_row(s) if row_contains(s, top, 1) else EMPTY_ROW
    return _make_set(s, True, False, top_level, [out_top, out_above])


def apply_g(x: SymbolicSet) -> SymbolicSet:
    s = x.sparam
    if is_empty(x):
        return x
    if x.below_full:
        return full_set(s)
    low_level = x.anchor
    low = x.row_at(low_level)
    out_low = _g_row_image(s, low)
    if row_meets_pattern(s, x.row_at(low_level + 1)):
        out_low = row_union(s, out_low, make_row(s, {1}, 2, False, False))
    out_below = (
        make_row(s, {1}, 2, False, False) if row_meets_pattern(s, low) else EMPTY_ROW
    )
    return _make_set(s, False, True, low_level - 1, [out_below, out_low])


# ---------------------------------------------------------------------------
# decomposition and the clause-table path


_KIND_RANK = {"D": 0, "A": 1, "V": 2, "S": 3, "Sbar": 4, "U": 5}


def _basis_sort_key(b: BasisSet):
    group = 0 if b.kind == "D" else 2 if b.kind == "U" else 1
    return (group, b.level, _KIND_RANK[b.kind], b.index or 0)


def decompose_to_basis(x: SymbolicSet) -> tuple[BasisSet, ...]:
    """Basis sets whose union is exactly x, in canonical order."""
    s = x.sparam
    parts: list[BasisSet] = []
    if x.below_full:
        parts.append(BasisSet("D", x.anchor - 1))
    for offset, row in enumerate(x.rows):
        p = x.anchor + offset
        for n in sorted(row.prefix):
            parts.append(BasisSet("A", p, n))
        if row.pat_tail and row.off_tail:
            if row.start == 1:
                parts.append(BasisSet("V", p))
            else:
                parts.append(BasisSet("S", p, row.start))
                if s.off_pattern_min(row.start) is not None:
                    parts.append(BasisSet("Sbar", p, row.start))
        elif row.pat_tail:
            parts.append(BasisSet("S", p, row.start))
        elif row.off_tail:
            if row.start == 1:
                # the off-pattern tail from 1 contains index 1, which the
                # Sbar basis sets exclude
                parts.append(BasisSet("A", p, 1))
                parts.append(BasisSet("Sbar", p, 2))
            else:
                parts.append(BasisSet("Sbar", p, row.start))
    if x.above_full:
        parts.append(BasisSet("U", x.anchor + len(x.rows)))
    return tuple(sorted(parts, key=_basis_sort_key))


def _sbar_members(s: SParameter, m: int) -> tuple[tuple[int, ...], bool]:
    """Indices of the off-pattern tail from m (excluding 1): (listed, infinite)."""
    return s.off_pattern_from(max(m, 2))


def _clause_f(s: SParameter, b: BasisSet) -> SymbolicSet:
    p, m = b.level, b.index
    if b.kind == "A":
        if m == 1:
            return union_all(
                s, [basis_a(s, p, 1), basis_a(s, p, 2), basis_d(s, p - 1), basis_srow(s, p + 1, 1)]
            )
        parts = [basis_a(s, p, n) for n in range(1, m + 2)]
        return union_all(s, parts + [basis_d(s, p - 1)])
    if b.kind in ("D", "V"):
        return union(basis_d(s, p), basis_srow(s, p + 1, 1))
    if b.kind == "U":
        return full_set(s)
    if b.kind == "S":
        return basis_d(s, p)
    listed, infinite = _sbar_members(s, m)
    if infinite:
        return basis_d(s, p)
    if not listed:
        return empty_set(s)
    parts = [basis_a(s, p, n) for n in range(1, max(listed) + 2)]
    return union_all(s, parts + [basis_d(s, p - 1)])


def _clause_g(s: SParameter, b: BasisSet) -> SymbolicSet:
    p, m = b.level, b.index
    if b.kind == "A":
        if m == 1:
            return basis_u(s, p)
        if m == 2:
            return union(basis_a(s, p - 1, 1), basis_u(s, p))
        out = union_all(
            s, [basis_u(s, p + 1), basis_srow(s, p, m - 1), basis_sbar(s, p, m - 1)]
        )
        if s.in_pattern(m):
            out = union(out, basis_a(s, p - 1, 1))
        return out
    if b.kind in ("U", "V"):
        return union(basis_a(s, p - 1, 1), basis_u(s, p))
    if b.kind == "D":
        return full_set(s)
    if b.kind == "S":
        t = s.pattern_min(m)
        if t <= 2:
            return union(basis_a(s, p - 1, 1), basis_u(s, p))
        return union_all(
            s,
            [
                basis_a(s, p - 1, 1),
                basis_u(s, p + 1),
                basis_srow(s, p, t - 1),
                basis_sbar(s, p, t - 1),
            ],
        )
    mn = s.off_pattern_min(max(m, 2))
    if mn is None:
        return empty_set(s)
    return union_all(
        s, [basis_srow(s, p, mn - 1), basis_sbar(s, p, mn - 1), basis_u(s, p + 1)]
    )


def apply_f_table(x: SymbolicSet) -> SymbolicSet:
    s = x.sparam
    return union_all(s, (_clause_f(s, b) for b in decompose_to_basis(x)))


def apply_g_table(x: SymbolicSet) -> SymbolicSet:
    s = x.sparam
    return union_all(s, (_clause_g(s, b) for b in decompose_to_basis(x)))


# ---------------------------------------------------------------------------
# cardinality, extrema, shift, restriction


@dataclass(frozen=True)
class Cardinality:
    """Finite count or infinite (count None)."""

    count: int | None

    @property
    def is_finite(self) -> bool:
        return self.count is not None

    def __str__(self) -> str:
        return "infinite" if self.count is None else str(self.count)


INFINITE = Cardinality(None)


def cardinality(x: SymbolicSet) -> Cardinality:
    if x.below_full or x.above_full:
        return INFINITE
    total = 0
    for row in x.rows:
        n = row_count(row)
        if n is None:
            return INFINITE
        total += n
    return Cardinality(total)


def atom_test(x: SymbolicSet) -> bool:
    return cardinality(x) == Cardinality(1)


@dataclass(frozen=True)
class LevelExtent:
    """Extent of a set's levels: empty set, unbounded, or a concrete level."""

    kind: str  # "empty" | "unbounded" | "level"
    level: int | None = None


NO_LEVELS = LevelExtent("empty")
UNBOUNDED = LevelExtent("unbounded")


def max_level(x: SymbolicSet) -> LevelExtent:
    if is_empty(x):
        return NO_LEVELS
    if x.above_full:
        return UNBOUNDED
    if x.rows:
        return LevelExtent("level", x.anchor + len(x.rows) - 1)
    return LevelExtent("level", x.anchor - 1)  # below_full, transition at anchor


def min_level(x: SymbolicSet) -> LevelExtent:
    if is_empty(x):
        return NO_LEVELS
    if x.below_full:
        return UNBOUNDED
    return LevelExtent("level", x.anchor)


def shift(x: SymbolicSet, delta: int) -> SymbolicSet:
    """Relabel every vertex (p, m) to (p + delta, m)."""
    if not x.rows and x.below_full == x.above_full:
        return x  # constant sets are level-invariant
    return SymbolicSet(x.sparam, x.below_full, x.above_full, x.anchor + delta, x.rows)


def restrict_to_window(x: SymbolicSet, spec: TruncationSpec) -> tuple[VertexId, ...]:
    """Members inside the window, in canonical order."""
    out = []
    for p in range(spec.level_lo, spec.level_hi + 1):
        row = x.row_at(p)
        for n in range(1, spec.index_max + 1):
            if row_contains(x.sparam, row, n):
                out.append(VertexId(p, n))
    return tuple(out)


# ---------------------------------------------------------------------------
# display syntax


def display(x: SymbolicSet) -> str:
    parts = decompose_to_basis(x)
    if not parts:
        return "0"
    return " + ".join(str(b) for b in parts)


_BASIS_RE = re.compile(r"^(A|Sbar|S|D|U|V)\(\s*(-?\d+)\s*(?:,\s*(\d+)\s*)?\)$")


def parse_set(s: SParameter, text: str) -> SymbolicSet:
    """Parse the display syntax (any order of basis terms); '0' is empty."""
    body = text.strip()
    if body in ("0", "empty"):
        return empty_set(s)
    out = empty_set(s)
    for chunk in body.split("+"):
        token = chunk.strip()
        match = _BASIS_RE.match(token)
        if match is None:
            raise ValueError(f"cannot parse basis term {token!r}")
        kind, level, index = match.group(1), int(match.group(2)), match.group(3)
        b = BasisSet(kind, level, int(index) if index is not None else None)
        out = union(out, basis(s, b))
    return out


# ---------------------------------------------------------------------------
# canonical-form validation


def validate_canonical(x: SymbolicSet) -> bool:
    """Assert the structural invariants of the canonical form."""
    s = x.sparam
    below_row = FULL_ROW if x.below_full else EMPTY_ROW
    above_row = FULL_ROW if x.above_full else EMPTY_ROW
    if x.rows:
        if x.rows[0] == below_row or x.rows[-1] == above_row:
            raise ValueError("window not minimal")
    elif x.below_full == x.above_full and x.anchor != 0:
        raise ValueError("constant set must have anchor 0")
    for row in x.rows:
        if any(n >= row.start or n < 1 for n in row.prefix):
            raise ValueError("row prefix outside [1, start)")
        if row.off_tail and not row.pat_tail and not s.off_pattern_infinite():
            raise ValueError("off-pattern tail flag on a finite tail")
        if row.pat_tail != row.off_tail and not s.off_pattern_infinite():
            raise ValueError("mixed tail flags under a finite off-pattern")
        redone = make_row(s, set(row.prefix), row.start, row.pat_tail, row.off_tail)
        if redone != row:
            raise ValueError(f"row not canonical: {row} vs {redone}")
    return True
