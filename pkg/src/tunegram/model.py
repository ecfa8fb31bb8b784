"""Core value types: tunes, grammar symbols, rules, grammars, mutation kinds.

A tune is a plain sequence of integer pitches.  A grammar is a flat
context-free grammar over those integers: rule 0 is the start rule and
every other rule must be referenced at least twice for the grammar to be
in canonical (Sequitur) form.  Everything here is immutable; mutation
operators build new grammars rather than editing in place.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

Note = int
Tune = tuple[Note, ...]

ROOT_ID = 0


class TunegramError(Exception):
    """Base class for errors raised by this package."""


class EmptyTuneError(TunegramError):
    """An operation that needs at least one note was given none."""


class TuneTooShortError(TunegramError):
    """An operation that needs at least two notes was given fewer."""


class GrammarStructureError(TunegramError):
    """A grammar is structurally unusable (cycle, dangling ref, empty rhs)."""


class UnknownRuleError(GrammarStructureError):
    """A rule id does not exist in the grammar."""


# ---------------------------------------------------------------------------
# symbols and rules


@dataclass(frozen=True, slots=True)
class Terminal:
    """A concrete note (integer pitch or interval)."""

    value: int


@dataclass(frozen=True, slots=True)
class RuleRef:
    """A reference to another rule by id."""

    rule_id: int


Symbol = Union[Terminal, RuleRef]


def format_symbol(sym: Symbol) -> str:
    if isinstance(sym, Terminal):
        return str(sym.value)
    return f"p{sym.rule_id}"


@dataclass(frozen=True, slots=True)
class Rule:
    """One production: ``rule_id -> rhs``.  The rhs is never empty."""

    rule_id: int
    rhs: tuple[Symbol, ...]

    def __post_init__(self) -> None:
        if self.rule_id < 0:
            raise ValueError(f"rule id must be non-negative, got {self.rule_id}")


# ---------------------------------------------------------------------------
# grammars


@dataclass(frozen=True)
class Grammar:
    """An immutable set of rules indexed by id, with rule 0 as the root.

    ``rules`` is stored sorted by id.  Use :func:`validate_grammar` to
    check structural validity and canonicality; the constructor only
    rejects duplicate ids so that invalid intermediate grammars can
    still be represented (mutation candidates are validated separately).
    """

    rules: tuple[Rule, ...]
    _by_id: dict[int, Rule] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.rules, key=lambda r: r.rule_id))
        by_id = {r.rule_id: r for r in ordered}
        if len(by_id) != len(ordered):
            counts = Counter(r.rule_id for r in ordered)
            dupes = sorted(i for i, n in counts.items() if n > 1)
            raise ValueError(f"duplicate rule ids: {dupes}")
        object.__setattr__(self, "rules", ordered)
        object.__setattr__(self, "_by_id", by_id)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Iterable[Symbol | int | str]]) -> Grammar:
        """Build a grammar from ``{id: rhs}`` with a little sugar.

        In the rhs, plain ints become terminals and strings like ``"p3"``
        become rule references.  Handy for tests and fixtures.
        """
        rules = []
        for rule_id, rhs in mapping.items():
            symbols: list[Symbol] = []
            for item in rhs:
                if isinstance(item, (Terminal, RuleRef)):
                    symbols.append(item)
                elif isinstance(item, int):
                    symbols.append(Terminal(item))
                elif isinstance(item, str) and re.fullmatch(r"p\d+", item):
                    symbols.append(RuleRef(int(item[1:])))
                else:
                    raise ValueError(f"cannot interpret rhs item {item!r}")
            rules.append(Rule(rule_id, tuple(symbols)))
        return cls(tuple(rules))

    def rule(self, rule_id: int) -> Rule:
        try:
            return self._by_id[rule_id]
        except KeyError:
            raise UnknownRuleError(f"no rule with id {rule_id}") from None

    @property
    def root(self) -> Rule:
        return self.rule(ROOT_ID)

    def rule_ids(self) -> tuple[int, ...]:
        return tuple(r.rule_id for r in self.rules)

    def __contains__(self, rule_id: int) -> bool:
        return rule_id in self._by_id

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)


def reference_counts(g: Grammar) -> Counter[int]:
    """How many times each rule id is referenced across all rhs."""
    counts: Counter[int] = Counter()
    for rule in g:
        for sym in rule.rhs:
            if isinstance(sym, RuleRef):
                counts[sym.rule_id] += 1
    return counts


def render_grammar(g: Grammar) -> str:
    """Canonical text form, one rule per line, sorted by id.

    Terminals print as bare integers and references as ``p<id>``::

        p0 -> p1 3 -2 p1
        p1 -> 5 5

    The output ends with a newline and is byte-stable for a given
    grammar, so it can serve as a golden-file format.
    """
    lines = []
    for rule in g.rules:
        body = " ".join(format_symbol(s) for s in rule.rhs)
        lines.append(f"p{rule.rule_id} -> {body}\n")
    return "".join(lines)


def parse_grammar(text: str) -> Grammar:
    """Inverse of :func:`render_grammar` (also accepts ``;`` separators)."""
    rules = []
    for chunk in re.split(r"[;\n]", text):
        line = chunk.strip()
        if not line:
            continue
        head, arrow, body = line.partition("->")
        if not arrow:
            raise ValueError(f"missing '->' in rule {line!r}")
        m = re.fullmatch(r"p(\d+)", head.strip())
        if not m:
            raise ValueError(f"bad rule head {head.strip()!r}")
        symbols: list[Symbol] = []
        for tok in body.split():
            ref = re.fullmatch(r"p(\d+)", tok)
            if ref:
                symbols.append(RuleRef(int(ref.group(1))))
            else:
                symbols.append(Terminal(int(tok)))
        rules.append(Rule(int(m.group(1)), tuple(symbols)))
    return Grammar(tuple(rules))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate_grammar`.

    Structural problems make a grammar unusable (it cannot be expanded);
    canonicality problems only mean it is not in Sequitur normal form,
    which is the expected state for freshly mutated grammars.
    """

    structural_violations: tuple[str, ...]
    canonical_violations: tuple[str, ...]

    @property
    def structural_ok(self) -> bool:
        return not self.structural_violations

    @property
    def canonical_ok(self) -> bool:
        return not self.canonical_violations

    @property
    def ok(self) -> bool:
        return self.structural_ok and self.canonical_ok


def _find_cycle(g: Grammar) -> list[int] | None:
    """Return one cycle through the reference relation, or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {r.rule_id: WHITE for r in g}
    for start in colour:
        if colour[start] != WHITE:
            continue
        stack: list[tuple[int, Iterator[int]]] = [(start, _ref_iter(g, start))]
        colour[start] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in colour:
                    continue  # dangling ref, reported separately
                if colour[nxt] == GREY:
                    path = [frame[0] for frame in stack]
                    return path[path.index(nxt):] + [nxt]
                if colour[nxt] == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, _ref_iter(g, nxt)))
                    advanced = True
                    break
            if not advanced:
                colour[node] = BLACK
                stack.pop()
    return None


def _ref_iter(g: Grammar, rule_id: int) -> Iterator[int]:
    for sym in g.rule(rule_id).rhs:
        if isinstance(sym, RuleRef):
            yield sym.rule_id


def digram_census(g: Grammar) -> dict[tuple[Symbol, Symbol], list[tuple[int, int]]]:
    """All adjacent symbol pairs, keyed by pair, valued by (rule, index)."""
    census: dict[tuple[Symbol, Symbol], list[tuple[int, int]]] = {}
    for rule in g:
        for i in range(len(rule.rhs) - 1):
            census.setdefault((rule.rhs[i], rule.rhs[i + 1]), []).append((rule.rule_id, i))
    return census


def validate_grammar(g: Grammar) -> ValidationReport:
    """Check structural validity and canonicality, reported separately.

    Structural: rule 0 exists, every rhs is non-empty, every reference
    resolves, and the reference relation is acyclic.

    Canonical (Sequitur invariants): no digram occurs twice, except that
    overlapping occurrences of a digram with equal halves (as in
    ``4 4 4``) do not count as repeats; and every rule besides the root
    is referenced at least twice.
    """
    structural: list[str] = []
    canonical: list[str] = []

    if ROOT_ID not in g:
        structural.append("missing root rule p0")
    for rule in g:
        if not rule.rhs:
            structural.append(f"rule p{rule.rule_id} has an empty rhs")
    known = set(g.rule_ids())
    for rule in g:
        for sym in rule.rhs:
            if isinstance(sym, RuleRef) and sym.rule_id not in known:
                structural.append(
                    f"rule p{rule.rule_id} references missing rule p{sym.rule_id}")
    cycle = _find_cycle(g)
    if cycle is not None:
        structural.append("reference cycle: " + " -> ".join(f"p{i}" for i in cycle))

    for (a, b), places in digram_census(g).items():
        if len(places) < 2:
            continue
        # Overlapping occurrences of an equal-halves digram (x x inside
        # x x x) are the one sanctioned repeat; any pair of occurrences
        # that do not overlap is a violation.
        distinct = [
            (p, q)
            for i, p in enumerate(places)
            for q in places[i + 1:]
            if not (a == b and p[0] == q[0] and abs(p[1] - q[1]) == 1)
        ]
        if distinct:
            where = ", ".join(f"p{r}@{i}" for r, i in places)
            canonical.append(
                f"digram {format_symbol(a)} {format_symbol(b)} repeats at {where}")

    counts = reference_counts(g)
    for rule in g:
        if rule.rule_id == ROOT_ID:
            continue
        if counts[rule.rule_id] < 2:
            canonical.append(
                f"rule p{rule.rule_id} is referenced {counts[rule.rule_id]} time(s)")

    return ValidationReport(tuple(structural), tuple(canonical))


# ---------------------------------------------------------------------------
# mutation kinds


class MutationKind(enum.IntEnum):
    """The structure-level mutation operators, indexed 1 to 19.

    Short codes follow the add/remove/move/swap taxonomy used in the
    musicology literature (1A* act on rule references, 1B* on notes,
    1C* mix the two, 1D and 2A* act on whole rules).
    """

    ADD_RULE_REF = 1           # 1A1
    REMOVE_RULE_REF = 2        # 1A2
    MOVE_RULE_REF_WITHIN = 3   # 1A3A
    MOVE_RULE_REF_ACROSS = 4   # 1A3B
    SWAP_RULE_REFS_WITHIN = 5  # 1A4A
    SWAP_RULE_REFS_ACROSS = 6  # 1A4B
    ADD_NOTE = 7               # 1B1
    REMOVE_NOTE = 8            # 1B2
    MOVE_NOTE_WITHIN = 9       # 1B3A
    MOVE_NOTE_ACROSS = 10      # 1B3B
    SWAP_NOTES_WITHIN = 11     # 1B4A
    SWAP_NOTES_ACROSS = 12     # 1B4B
    SWAP_REF_WITH_NOTE = 13    # 1C1A
    SWAP_REF_WITH_NOTE_ACROSS = 14  # 1C1B
    REVERSE_RULE = 15          # 1C2
    REVERSE_SPAN = 16          # 1C3
    SWAP_DEFINITIONS = 17      # 1D
    ADD_RULE = 18              # 2A1
    REMOVE_RULE = 19           # 2A2

    @property
    def code(self) -> str:
        return _KIND_CODES[self]

    @classmethod
    def from_code(cls, code: str) -> MutationKind:
        try:
            return _CODE_KINDS[code.upper()]
        except KeyError:
            raise ValueError(f"unknown mutation code {code!r}") from None

    @classmethod
    def parse(cls, text: str) -> MutationKind:
        """Accept either an index ("17") or a code ("1D")."""
        text = text.strip()
        if text.isdigit():
            try:
                return cls(int(text))
            except ValueError:
                raise ValueError(f"mutation index out of range: {text}") from None
        return cls.from_code(text)


_KIND_CODES: dict[MutationKind, str] = {
    MutationKind.ADD_RULE_REF: "1A1",
    MutationKind.REMOVE_RULE_REF: "1A2",
    MutationKind.MOVE_RULE_REF_WITHIN: "1A3A",
    MutationKind.MOVE_RULE_REF_ACROSS: "1A3B",
    MutationKind.SWAP_RULE_REFS_WITHIN: "1A4A",
    MutationKind.SWAP_RULE_REFS_ACROSS: "1A4B",
    MutationKind.ADD_NOTE: "1B1",
    MutationKind.REMOVE_NOTE: "1B2",
    MutationKind.MOVE_NOTE_WITHIN: "1B3A",
    MutationKind.MOVE_NOTE_ACROSS: "1B3B",
    MutationKind.SWAP_NOTES_WITHIN: "1B4A",
    MutationKind.SWAP_NOTES_ACROSS: "1B4B",
    MutationKind.SWAP_REF_WITH_NOTE: "1C1A",
    MutationKind.SWAP_REF_WITH_NOTE_ACROSS: "1C1B",
    MutationKind.REVERSE_RULE: "1C2",
    MutationKind.REVERSE_SPAN: "1C3",
    MutationKind.SWAP_DEFINITIONS: "1D",
    MutationKind.ADD_RULE: "2A1",
    MutationKind.REMOVE_RULE: "2A2",
}
_CODE_KINDS = {code: kind for kind, code in _KIND_CODES.items()}


# ---------------------------------------------------------------------------
# alphabets and trajectories


@dataclass(frozen=True)
class NoteAlphabet:
    """The set of notes a mutated tune may draw from.

    Frozen from the original tune at the start of a run so that
    inserted notes never leave the tune's own vocabulary.
    """

    notes: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.notes:
            raise EmptyTuneError("alphabet needs at least one note")
        ordered = tuple(sorted(set(self.notes)))
        object.__setattr__(self, "notes", ordered)

    @classmethod
    def from_tune(cls, tune: Sequence[int]) -> NoteAlphabet:
        if not tune:
            raise EmptyTuneError("cannot build an alphabet from an empty tune")
        return cls(tuple(tune))

    def __contains__(self, note: int) -> bool:
        return note in self.notes

    def __len__(self) -> int:
        return len(self.notes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.notes)


@dataclass(frozen=True, slots=True)
class TrajectoryRecord:
    """One step of a mutation run, as logged by the pipeline."""

    step: int
    kind: MutationKind
    ed_vs_original: int
    ed_vs_previous: int
    length: int
    pai: int
