"""The variation loop: mutate the grammar, expand, reparse, repeat.

A run starts from a tune, freezes its alphabet, and then iterates:
induce a grammar, apply one random mutation, expand back to a tune,
and (by default) reparse so the next mutation sees a canonical
grammar.  Each step logs edit distance against the original and the
previous tune, the tune length, and the PAI of the reparsed tune.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .metrics import levenshtein
from .model import (
    EmptyTuneError,
    MutationKind,
    NoteAlphabet,
    TrajectoryRecord,
    Tune,
    TunegramError,
)
from .mutation import (
    RandomSource,
    applicable,
    apply_mutation,
    derive_seed,
    random_mutation,
)
from .sequitur import expand, induce, pai

#: Kind 18 is left out of generation runs by default; see RunConfig.
DEFAULT_EXCLUDED = frozenset({MutationKind.ADD_RULE})


class StepFailedError(TunegramError):
    """A run step could not produce a mutation; carries the step index."""

    def __init__(self, step: int, reason: Exception) -> None:
        super().__init__(f"step {step} failed: {reason}")
        self.step = step
        self.reason = reason


@dataclass(frozen=True)
class RunConfig:
    """Settings for one mutation run.

    ``reparse_each_step`` mirrors the loop described alongside the
    operators: every mutation is followed by expand + reparse.  Setting
    it to False mutates one grammar in place across steps (an ablation
    mode; recorded PAI is still that of the reparsed tune).
    """

    steps: int
    seed: int
    excluded: frozenset[MutationKind] = DEFAULT_EXCLUDED
    reparse_each_step: bool = True

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        excluded = frozenset(MutationKind(k) for k in self.excluded)
        if len(excluded) >= len(MutationKind):
            raise ValueError("cannot exclude every mutation kind")
        object.__setattr__(self, "excluded", excluded)


@dataclass(frozen=True)
class RunResult:
    original: Tune
    final: Tune
    trajectory: tuple[TrajectoryRecord, ...]
    kinds_applied: tuple[MutationKind, ...]


def step(
    current: Tune,
    original_alphabet: NoteAlphabet,
    rng: RandomSource,
    excluded: frozenset[MutationKind] = DEFAULT_EXCLUDED,
    *,
    kind: MutationKind | None = None,
    targets: tuple | None = None,
) -> tuple[Tune, MutationKind]:
    """One loop iteration: induce, mutate once, expand.

    ``kind``/``targets`` force the mutation (golden tests); forced
    targets take no rng draws.  The caller reparses by feeding the
    returned tune back in, which is what :func:`run` does.
    """
    if not current:
        raise EmptyTuneError("cannot step an empty tune")
    g = induce(current)
    for _ in range(100):
        if kind is not None:
            outcome = apply_mutation(g, kind, original_alphabet, rng,
                                     targets=targets)
        else:
            outcome = random_mutation(g, original_alphabet, rng, excluded)
        new_tune = expand(outcome.grammar)
        if new_tune:
            return new_tune, outcome.kind
    # Unreachable for structurally valid grammars (every rule expands to
    # at least one note); kept as a hard stop rather than a silent loop.
    raise TunegramError("mutation kept producing empty expansions")


def run(
    t: Sequence[int],
    cfg: RunConfig,
    *,
    kind: MutationKind | None = None,
    targets: tuple | None = None,
) -> RunResult:
    """Run cfg.steps mutations starting from t and record the trajectory.

    The note alphabet is frozen from t; mutated tunes never pick up
    notes the original did not contain.  Forcing ``kind``/``targets``
    applies to every step and exists for single-step golden tests.
    """
    original = tuple(t)
    if not original:
        raise EmptyTuneError("cannot run on an empty tune")
    alphabet = NoteAlphabet.from_tune(original)
    rng = RandomSource(cfg.seed)

    current = original
    grammar = induce(current)
    records: list[TrajectoryRecord] = []
    kinds: list[MutationKind] = []
    for step_no in range(1, cfg.steps + 1):
        try:
            if kind is not None:
                outcome = apply_mutation(grammar, kind, alphabet, rng,
                                         targets=targets)
            else:
                outcome = random_mutation(grammar, alphabet, rng, cfg.excluded)
        except TunegramError as exc:
            raise StepFailedError(step_no, exc) from exc
        new_tune = expand(outcome.grammar)
        reparsed = induce(new_tune)
        records.append(TrajectoryRecord(
            step=step_no,
            kind=outcome.kind,
            ed_vs_original=levenshtein(original, new_tune),
            ed_vs_previous=levenshtein(current, new_tune),
            length=len(new_tune),
            pai=pai(reparsed),
        ))
        kinds.append(outcome.kind)
        current = new_tune
        grammar = reparsed if cfg.reparse_each_step else outcome.grammar
    return RunResult(original, current, tuple(records), tuple(kinds))


def run_per_kind(t: Sequence[int], seed: int) -> dict[MutationKind, int]:
    """Apply each kind once, independently, to induce(t).

    Returns kind -> ED(mutated tune, t); kinds that are inapplicable to
    this tune's grammar are simply absent.  Each kind gets its own
    derived RandomSource, so measurements do not influence one another.
    """
    original = tuple(t)
    if not original:
        raise EmptyTuneError("cannot measure an empty tune")
    g = induce(original)
    alphabet = NoteAlphabet.from_tune(original)
    out: dict[MutationKind, int] = {}
    for kind in MutationKind:
        if not applicable(g, kind):
            continue
        rng = RandomSource(derive_seed(seed, int(kind)))
        outcome = apply_mutation(g, kind, alphabet, rng)
        out[kind] = levenshtein(original, expand(outcome.grammar))
    return out
