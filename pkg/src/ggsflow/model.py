"""Domain types for GGS pairs: kinds, natures, singularities and flow lines.

A pair is purely combinatorial.  Each singularity carries a *kind* (the local
model of the singular surface around it) and a *nature* (a word describing
the local dynamics).  The nature determines the chain generators the
singularity contributes: one generator of index 0 per attracting letter, of
index 1 per saddle letter and of index 2 per repelling letter.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple


class KindError(ValueError):
    """Malformed kind expression."""


class NatureError(ValueError):
    """Malformed nature word."""


# ---------------------------------------------------------------------------
# Kinds


class Kind:
    """Base class of the kind algebra.  Instances are immutable and hashable."""

    def singular_number(self) -> int:
        raise NotImplementedError

    @property
    def is_regular(self) -> bool:
        return False

    def basic(self) -> bool:
        """True for the non-composite constructors."""
        return not isinstance(self, (Wedge, Concat))

    def components(self) -> Iterator["Kind"]:
        """Basic constructors appearing in the expression, left to right."""
        yield self

    @staticmethod
    def parse(text: str, strict: bool = True) -> "Kind":
        return parse_kind(text, strict=strict)


@dataclass(frozen=True)
class Regular(Kind):
    def singular_number(self) -> int:
        return 0

    @property
    def is_regular(self) -> bool:
        return True

    def __str__(self) -> str:
        return "R"


@dataclass(frozen=True)
class _Arity(Kind):
    n: int
    _tag = "?"
    _min = 2

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < self._min:
            raise KindError(f"{type(self).__name__} needs arity >= {self._min}, got {self.n}")

    def __str__(self) -> str:
        return f"{self._tag}{self.n}"


@dataclass(frozen=True)
class Cone(_Arity):
    _tag = "C"

    def singular_number(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class CrossCap(_Arity):
    _tag = "W"

    def singular_number(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class Double(_Arity):
    _tag = "D"

    def singular_number(self) -> int:
        return 2 * (self.n - 1)


@dataclass(frozen=True)
class Triple(_Arity):
    """Triple crossing with ``n = 2k + 1`` sheets."""

    _tag = "T"
    _min = 3

    def __post_init__(self):
        super().__post_init__()
        if self.n % 2 == 0:
            raise KindError(f"Triple arity must be odd, got {self.n}")

    def singular_number(self) -> int:
        return 6 * ((self.n - 1) // 2)


@dataclass(frozen=True)
class Wedge(Kind):
    left: Kind
    right: Kind

    def singular_number(self) -> int:
        return self.left.singular_number() + self.right.singular_number() + 1

    def components(self):
        yield from self.left.components()
        yield from self.right.components()

    def __str__(self) -> str:
        return f"wedge({self.left},{self.right})"


@dataclass(frozen=True)
class Concat(Kind):
    left: Kind
    right: Kind

    def singular_number(self) -> int:
        return self.left.singular_number() + self.right.singular_number()

    def components(self):
        yield from self.left.components()
        yield from self.right.components()

    def __str__(self) -> str:
        return f"cat({self.left},{self.right})"


REGULAR = Regular()


def cone(n: int) -> Kind:
    """Cone with ``n`` sheets; a one-sheet cone is just a regular point."""
    return REGULAR if n == 1 else Cone(n)


def wedge(p: Kind, q: Kind) -> Kind:
    return Wedge(p, q)


def concat(p: Kind, q: Kind) -> Kind:
    """Concatenation with regular operands dropped (``RQ = Q``, ``PR = P``)."""
    if p.is_regular:
        return q
    if q.is_regular:
        return p
    return Concat(p, q)


def singular_number(kind: Kind) -> int:
    """Folds plus cone sheets minus one, evaluated compositionally."""
    return kind.singular_number()


def singular_number_by_table(kind: Kind) -> Optional[int]:
    """Second evaluator that only knows the eight tabulated forms.

    Returns ``None`` for expressions outside those forms (e.g. a concatenation
    whose left operand is not a cross-cap, other than double-then-triple).
    """
    if isinstance(kind, Regular):
        return 0
    if isinstance(kind, (Cone, CrossCap)):
        return kind.n - 1
    if isinstance(kind, Double):
        return 2 * (kind.n - 1)
    if isinstance(kind, Triple):
        return 6 * ((kind.n - 1) // 2)
    if isinstance(kind, Wedge):
        a = singular_number_by_table(kind.left)
        b = singular_number_by_table(kind.right)
        return None if a is None or b is None else a + b + 1
    if isinstance(kind, Concat):
        left, right = kind.left, kind.right
        if isinstance(left, Double) and isinstance(right, Triple):
            return 2 * (left.n - 1) + 6 * ((right.n - 1) // 2)
        if isinstance(left, CrossCap):
            rest = singular_number_by_table(right)
            return None if rest is None else (left.n - 1) + rest
    return None


_KIND_TOKEN = re.compile(r"\s*(wedge|cat|[RCWDT]\d*|\(|\)|,)")


def parse_kind(text: str, strict: bool = True) -> Kind:
    """Parse ``R | C<n> | W<n> | D<n> | T<n> | wedge(e,e) | cat(e,e)``.

    With ``strict`` set, ``cat`` is limited to a cross-cap followed by a double
    or triple crossing, or a double followed by a triple crossing.
    """
    pos = 0
    tokens: List[Tuple[str, int]] = []
    text = text.strip()
    while pos < len(text):
        m = _KIND_TOKEN.match(text, pos)
        if not m:
            raise KindError(f"unexpected character {text[pos]!r} at offset {pos} in kind {text!r}")
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    if not tokens:
        raise KindError("empty kind expression")
    it = iter(tokens + [("", len(text))])
    cur = [next(it)]

    def take(expected: Optional[str] = None) -> str:
        tok, off = cur[0]
        if expected is not None and tok != expected:
            raise KindError(f"expected {expected!r} at offset {off} in kind {text!r}, got {tok or 'end'!r}")
        cur[0] = next(it, ("", len(text)))
        return tok

    def expr() -> Kind:
        tok, off = cur[0]
        if tok in ("wedge", "cat"):
            take()
            take("(")
            a = expr()
            take(",")
            b = expr()
            take(")")
            if tok == "wedge":
                return wedge(a, b)
            if strict and not _concat_allowed(a, b):
                raise KindError(f"cat({a},{b}) is not an admissible concatenation")
            return concat(a, b)
        if tok == "R":
            take()
            return REGULAR
        if tok and tok[0] in "CWDT" and len(tok) > 1:
            take()
            cls = {"C": Cone, "W": CrossCap, "D": Double, "T": Triple}[tok[0]]
            return cls(int(tok[1:]))
        raise KindError(f"unexpected token {tok or 'end'!r} at offset {off} in kind {text!r}")

    result = expr()
    if cur[0][0]:
        raise KindError(f"trailing input at offset {cur[0][1]} in kind {text!r}")
    return result


def _concat_allowed(a: Kind, b: Kind) -> bool:
    if isinstance(a, CrossCap):
        return isinstance(b, (Double, Triple))
    if isinstance(a, Double):
        return isinstance(b, Triple)
    return False


# ---------------------------------------------------------------------------
# Natures

LETTERS = ("a", "s", "s_s", "s_u", "r")
SADDLE_LETTERS = frozenset({"s", "s_s", "s_u"})
_INDEX_OF_LETTER = {"a": 0, "s": 1, "s_s": 1, "s_u": 1, "r": 2}
_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")
_NATURE_TOKEN = re.compile(r"(s_s|s_u|a|s|r)(?:\^?(\d+))?")


@dataclass(frozen=True)
class Nature:
    """A word over ``a, s, s_s, s_u, r``, stored with exponents expanded."""

    letters: Tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise NatureError("nature word must be non-empty")
        for x in self.letters:
            if x not in _INDEX_OF_LETTER:
                raise NatureError(f"unknown nature letter {x!r}")

    @classmethod
    def parse(cls, text: str) -> "Nature":
        """Parse written notation such as ``sr``, ``r^2``, ``r²``, ``s_s a``."""
        src = text.translate(_SUPERSCRIPTS)
        letters: List[str] = []
        pos = 0
        while pos < len(src):
            if src[pos].isspace():
                pos += 1
                continue
            m = _NATURE_TOKEN.match(src, pos)
            if not m:
                raise NatureError(f"bad nature token {src[pos:pos + 4]!r} at offset {pos} in {text!r}")
            count = int(m.group(2)) if m.group(2) else 1
            if count < 1:
                raise NatureError(f"exponent must be positive in {text!r}")
            letters.extend([m.group(1)] * count)
            pos = m.end()
        return cls(tuple(letters))

    def eta(self, k: int) -> int:
        return sum(1 for x in self.letters if _INDEX_OF_LETTER[x] == k)

    def numbers(self) -> Tuple[int, int, int]:
        return (self.eta(0), self.eta(1), self.eta(2))

    def has_saddle(self) -> bool:
        return any(x in SADDLE_LETTERS for x in self.letters)

    def positions(self, k: int) -> List[int]:
        """Word offsets of the letters that produce index-``k`` generators."""
        return [i for i, x in enumerate(self.letters) if _INDEX_OF_LETTER[x] == k]

    def __add__(self, other: "Nature") -> "Nature":
        return Nature(self.letters + other.letters)

    def __str__(self) -> str:
        out = []
        for letter, run in _runs(self.letters):
            out.append(letter if run == 1 else f"{letter}^{run}")
        return "".join(out)


def _runs(letters: Sequence[str]):
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        yield letters[i], j - i
        i = j


def letter_index(letter: str) -> int:
    return _INDEX_OF_LETTER[letter]


def nature_numbers(nature: Nature | str) -> Tuple[int, int, int]:
    """``(eta_0, eta_1, eta_2)``: attracting, saddle and repelling letter counts."""
    if isinstance(nature, str):
        nature = Nature.parse(nature)
    return nature.numbers()


# ---------------------------------------------------------------------------
# Pair structure


@dataclass(frozen=True)
class Singularity:
    id: str
    kind: Kind
    nature: Nature
    lift_count: Optional[int] = None

    def eta(self, k: int) -> int:
        return self.nature.eta(k)

    @property
    def is_saddle_cone(self) -> bool:
        return isinstance(self.kind, Cone) and self.nature.has_saddle()


@dataclass(frozen=True, order=True)
class Generator:
    """Chain generator ``h^slot_k(sing)``; written ``sing:k:slot``."""

    sing: str
    k: int
    slot: int

    def __str__(self) -> str:
        return f"{self.sing}:{self.k}:{self.slot}"

    @classmethod
    def parse(cls, text: str) -> "Generator":
        parts = text.rsplit(":", 2)
        if len(parts) != 3 or not parts[0]:
            raise ValueError(f"generator must look like <sid>:<k>:<i>, got {text!r}")
        try:
            k, slot = int(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"generator index and slot must be integers in {text!r}") from None
        return cls(parts[0], k, slot)


REGULAR_PART = "regular"
FOLD_PART = "fold"


@dataclass(frozen=True)
class FlowLine:
    id: str
    src: Generator
    dst: Generator
    part: str
    lifts: Tuple[int, ...]


@dataclass(frozen=True)
class FoldArc:
    a: str
    b: str


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


@dataclass(frozen=True)
class GGSPair:
    name: str
    singularities: Tuple[Singularity, ...]
    lines: Tuple[FlowLine, ...] = ()
    folds: Tuple[FoldArc, ...] = ()
    orientable: bool = True
    order: Optional[Tuple[Generator, ...]] = None
    _index: Dict[str, Singularity] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "singularities", tuple(self.singularities))
        object.__setattr__(self, "lines", tuple(self.lines))
        object.__setattr__(self, "folds", tuple(self.folds))
        if self.order is not None:
            object.__setattr__(self, "order", tuple(self.order))
        index = {}
        for s in self.singularities:
            index.setdefault(s.id, s)
        object.__setattr__(self, "_index", index)

    def sing(self, sid: str) -> Singularity:
        return self._index[sid]

    def has(self, sid: str) -> bool:
        return sid in self._index

    def declaration_rank(self, sid: str) -> int:
        for i, s in enumerate(self.singularities):
            if s.id == sid:
                return i
        raise KeyError(sid)

    def is_saddle_cone_generator(self, g: Generator) -> bool:
        return g.k == 1 and g.sing in self._index and self._index[g.sing].is_saddle_cone

    def generator_exists(self, g: Generator) -> bool:
        s = self._index.get(g.sing)
        return s is not None and g.k in (0, 1, 2) and 1 <= g.slot <= s.eta(g.k)

    def total_singular_number(self) -> int:
        return sum(s.kind.singular_number() for s in self.singularities)


def generators(pair: GGSPair) -> Dict[int, List[Generator]]:
    """Generators grouped by index; declaration order, then slot."""
    out: Dict[int, List[Generator]] = {0: [], 1: [], 2: []}
    for s in pair.singularities:
        for k in (0, 1, 2):
            out[k].extend(Generator(s.id, k, i) for i in range(1, s.eta(k) + 1))
    return out


def default_order(pair: GGSPair) -> List[Generator]:
    g = generators(pair)
    return g[0] + g[1] + g[2]


def expected_lift_arity(line: FlowLine, pair: GGSPair) -> int:
    if line.part == FOLD_PART:
        return 2
    if pair.is_saddle_cone_generator(line.src) or pair.is_saddle_cone_generator(line.dst):
        return 2
    return 1


def _crosscap_vs_crossing(a: Kind, b: Kind) -> bool:
    return isinstance(a, CrossCap) and isinstance(b, (Double, Triple))


def validate_condition_H(pair: GGSPair) -> List[Violation]:
    """Every structural problem of the pair; an empty list means valid."""
    out: List[Violation] = []
    seen = set()
    for s in pair.singularities:
        if s.id in seen:
            out.append(Violation("duplicate-id", f"singularity {s.id!r} declared twice"))
        seen.add(s.id)
        if s.lift_count is not None and s.lift_count < 1:
            out.append(Violation("lift-count", f"singularity {s.id!r} has lift count {s.lift_count}"))

    line_ids = set()
    for line in pair.lines:
        if line.id in line_ids:
            out.append(Violation("duplicate-id", f"flow line {line.id!r} declared twice"))
        line_ids.add(line.id)
        bad_ref = False
        for end, g in (("src", line.src), ("dst", line.dst)):
            if not pair.has(g.sing):
                out.append(Violation("dangling-ref", f"line {line.id}: {end} {g} names unknown singularity"))
                bad_ref = True
            elif not pair.generator_exists(g):
                out.append(Violation("slot-range", f"line {line.id}: {end} {g} is not a generator of {g.sing}"))
                bad_ref = True
        if line.src.k != line.dst.k + 1:
            out.append(Violation("index-step", f"line {line.id}: {line.src} -> {line.dst} must lower the index by one"))
        if line.part not in (REGULAR_PART, FOLD_PART):
            out.append(Violation("line-part", f"line {line.id}: unknown part {line.part!r}"))
        if any(x not in (-1, 1) for x in line.lifts):
            out.append(Violation("lift-sign", f"line {line.id}: lift signs must be +1 or -1"))
        if not bad_ref:
            want = expected_lift_arity(line, pair)
            if len(line.lifts) != want:
                why = "fold line" if line.part == FOLD_PART else (
                    "saddle-cone endpoint" if want == 2 else "regular line")
                out.append(Violation("lift-arity",
                                     f"line {line.id}: {why} needs {want} lift sign(s), got {len(line.lifts)}"))

    for arc in pair.folds:
        ends = []
        for sid in (arc.a, arc.b):
            if not pair.has(sid):
                out.append(Violation("dangling-ref", f"fold {arc.a}-{arc.b}: unknown singularity {sid!r}"))
            elif pair.sing(sid).kind.is_regular:
                out.append(Violation("fold-regular", f"fold {arc.a}-{arc.b}: {sid} is a regular point"))
            else:
                ends.append(pair.sing(sid).kind)
        if len(ends) == 2 and (_crosscap_vs_crossing(*ends) or _crosscap_vs_crossing(ends[1], ends[0])):
            out.append(Violation("fold-crosscap-crossing",
                                 f"fold {arc.a}-{arc.b} joins a cross-cap to a double or triple crossing"))

    if pair.order is not None:
        want = set(default_order(pair))
        got = list(pair.order)
        if len(set(got)) != len(got) or set(got) != want:
            out.append(Violation("order", "declared order must list every generator exactly once"))
    return out


def _expected_extremal_count(kind: Kind) -> Optional[int]:
    """Number of attracting (or repelling) letters the conventions assign."""
    if isinstance(kind, (Regular, Cone, CrossCap)):
        return 1
    if isinstance(kind, (Double, Triple)):
        return kind.n
    if isinstance(kind, Wedge):
        left, right = kind.left, kind.right
        if isinstance(left, (Cone, CrossCap)) and isinstance(right, (CrossCap, Double, Triple)):
            return _expected_extremal_count(right)
        if isinstance(left, (Double, Triple)) and isinstance(right, (Double, Triple)):
            return left.n + right.n
        return None
    if isinstance(kind, Concat):
        left, right = kind.left, kind.right
        if isinstance(left, CrossCap) and isinstance(right, (Double, Triple)):
            return right.n
        if isinstance(left, Double) and isinstance(right, Triple):
            return left.n + right.n - 1
    return None


def nature_warnings(pair: GGSPair) -> List[str]:
    """Soft checks of the letter-count conventions for purely attracting or
    repelling singularities."""
    out = []
    for s in pair.singularities:
        letters = set(s.nature.letters)
        if letters not in ({"a"}, {"r"}):
            continue
        want = _expected_extremal_count(s.kind)
        have = len(s.nature.letters)
        if want is not None and want != have:
            out.append(f"{s.id}: kind {s.kind} conventionally has {want} "
                       f"{'attracting' if 'a' in letters else 'repelling'} letter(s), nature {s.nature} has {have}")
    return out
