"""Finite dynamic logic: Hoare triples, strongest postconditions, boxes.

Predicates are subsets of a finite world set and events are binary
relations on it, so the truth-value lattice is two-valued.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from itertools import chain, combinations

Predicate = frozenset


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class DynamicFrame:
    worlds: tuple[str, ...]
    events: Mapping[str, frozenset[tuple[str, str]]]

    def __post_init__(self) -> None:
        ws = set(self.worlds)
        if len(ws) != len(self.worlds):
            raise FrameError("duplicate world")
        for name, rel in self.events.items():
            for w, w2 in rel:
                if w not in ws or w2 not in ws:
                    raise FrameError(f"relation {name!r} mentions an undeclared world")

    def relation(self, e: str) -> frozenset[tuple[str, str]]:
        try:
            return self.events[e]
        except KeyError:
            raise FrameError(f"unknown event {e!r}") from None

    def predicate(self, ws: Iterable[str]) -> Predicate:
        p = frozenset(ws)
        unknown = p - set(self.worlds)
        if unknown:
            raise FrameError(f"unknown world(s): {', '.join(sorted(unknown))}")
        return p

    @property
    def top(self) -> Predicate:
        return frozenset(self.worlds)

    def predicates(self) -> Iterator[Predicate]:
        """Every subset of the worlds."""
        ws = self.worlds
        for c in chain.from_iterable(combinations(ws, n) for n in range(len(ws) + 1)):
            yield frozenset(c)

    def compose(self, e1: str, e2: str, name: str | None = None) -> DynamicFrame:
        """Frame extended with the sequential composition ``e1 ; e2``."""
        r1, r2 = self.relation(e1), self.relation(e2)
        seq = frozenset((w, w3) for w, w2 in r1 for v, w3 in r2 if w2 == v)
        events = dict(self.events)
        events[name or f"{e1};{e2}"] = seq
        return DynamicFrame(self.worlds, events)


@dataclass(frozen=True)
class HoareTriple:
    pre: Predicate
    event: str
    post: Predicate


def sp(frame: DynamicFrame, a: Predicate, e: str) -> Predicate:
    """Strongest postcondition: the image of ``a`` under ``e``."""
    return frozenset(w2 for w, w2 in frame.relation(e) if w in a)


def wp(frame: DynamicFrame, e: str, b: Predicate) -> Predicate:
    """Weakest precondition ``[e]b``: worlds whose every successor lies in ``b``."""
    bad = {w for w, w2 in frame.relation(e) if w2 not in b}
    return frozenset(w for w in frame.worlds if w not in bad)


def hoare(frame: DynamicFrame, t: HoareTriple) -> bool:
    return sp(frame, t.pre, t.event) <= t.post


def hoare_via_wp(frame: DynamicFrame, t: HoareTriple) -> bool:
    return t.pre <= wp(frame, t.event, t.post)


@dataclass(frozen=True)
class GaloisReport:
    """Counts of checked instances and of those that held."""

    pairs: int
    agree: int
    singles: int
    interior: int
    closure: int

    @property
    def ok(self) -> bool:
        return self.pairs == self.agree and self.singles == self.interior == self.closure


def check_galois(frame: DynamicFrame) -> GaloisReport:
    """Check both triple formulations on every (A, e, B), and the interior
    and closure laws on every predicate and event."""
    pairs = agree = singles = interior = closure = 0
    preds = list(frame.predicates())
    for e in frame.events:
        wps = {b: wp(frame, e, b) for b in preds}
        sps = {a: sp(frame, a, e) for a in preds}
        for p in preds:
            singles += 1
            interior += sp(frame, wps[p], e) <= p
            closure += p <= wp(frame, e, sps[p])
        for a in preds:
            for b in preds:
                pairs += 1
                agree += (sps[a] <= b) == (a <= wps[b])
    return GaloisReport(pairs, agree, singles, interior, closure)


def parse_frame(text: str) -> DynamicFrame:
    """Read a frame file.

    ``worlds: w0 w1 ...`` first, then ``rel <name>: w w'`` lines; a
    ``rel <name>:`` line with no pair declares an empty relation.
    """
    worlds: list[str] | None = None
    events: dict[str, set] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("worlds:"):
            worlds = line[len("worlds:"):].split()
            continue
        if line.startswith("rel ") and ":" in line:
            name, rest = line[4:].split(":", 1)
            pair = rest.split()
            rel = events.setdefault(name.strip(), set())
            if len(pair) == 2:
                rel.add((pair[0], pair[1]))
            elif pair:
                raise FrameError(f"line {lineno}: expected 'rel <name>: w w2'")
            continue
        raise FrameError(f"line {lineno}: unrecognized line")
    if worlds is None:
        raise FrameError("missing 'worlds:' line")
    return DynamicFrame(tuple(worlds), {k: frozenset(v) for k, v in events.items()})


def format_predicate(p: Predicate, frame: DynamicFrame) -> str:
    return "{" + ",".join(w for w in frame.worlds if w in p) + "}"
