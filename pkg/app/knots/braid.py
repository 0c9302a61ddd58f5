"""
Braid words and the oriented diagrams of their closures.

A letter i stands for the generator sigma_|i|, with the sign of i as the
crossing sign. Diagrams are purely combinatorial: arcs are numbered, every
crossing records which arc enters and leaves over and under.
"""
from __future__ import annotations

import dataclasses
import logging
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.exceptions import BraidParseError, InvalidBraidError

logger = logging.getLogger(__name__)

OVER = "over"
UNDER = "under"


@dataclasses.dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        if self.strands < 1:
            raise InvalidBraidError(f"strand count must be at least 1, got {self.strands}")
        for letter in self.letters:
            if letter == 0 or abs(letter) > self.strands - 1:
                raise InvalidBraidError(f"generator {letter} does not exist on {self.strands} strands")

    @classmethod
    def natural(cls, letters: Iterable[int]) -> "BraidWord":
        """Word on max|i| + 1 strands"""
        letters = tuple(letters)
        return cls(max((abs(x) for x in letters), default=0) + 1, letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid(self)

    @property
    def writhe(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)


def parse_braid(text: str) -> BraidWord:
    """
    Parse whitespace-separated nonzero integers, optionally prefixed by "n:"

    Args:
        text: Braid text such as "1 -2 1 -2" or "3:1 1 1"

    Returns:
        BraidWord: forced strand count, or max|i| + 1

    Raises:
        BraidParseError: with the offending token position
    """
    forced: Optional[int] = None
    body = text
    if ":" in text:
        prefix, body = text.split(":", 1)
        try:
            forced = int(prefix.strip())
        except ValueError:
            raise BraidParseError(f"strand prefix {prefix.strip()!r} is not an integer", position=0)
        if forced < 1:
            raise BraidParseError(f"strand count must be at least 1, got {forced}", position=0)

    letters: List[int] = []
    for position, token in enumerate(body.split()):
        try:
            letter = int(token)
        except ValueError:
            raise BraidParseError(f"non-integer token {token!r}", position=position)
        if letter == 0:
            raise BraidParseError("zero is not a generator", position=position)
        if forced is not None and abs(letter) >= forced:
            raise BraidParseError(f"generator {letter} needs more than {forced} strands", position=position)
        letters.append(letter)

    if forced is not None:
        return BraidWord(forced, tuple(letters))
    return BraidWord.natural(letters)


def format_braid(b: BraidWord) -> str:
    body = " ".join(str(x) for x in b.letters)
    natural = max((abs(x) for x in b.letters), default=0) + 1
    if b.strands != natural:
        return f"{b.strands}:{body}"
    return body


def closure_permutation(b: BraidWord) -> Tuple[int, ...]:
    """perm[j] is the bottom position reached by the strand entering at top position j"""
    at_position = list(range(b.strands))
    for letter in b.letters:
        left = abs(letter) - 1
        at_position[left], at_position[left + 1] = at_position[left + 1], at_position[left]
    perm = [0] * b.strands
    for position, strand in enumerate(at_position):
        perm[strand] = position
    return tuple(perm)


def closure_component_count(b: BraidWord) -> int:
    perm = closure_permutation(b)
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
    return cycles


@dataclasses.dataclass(frozen=True)
class Crossing:
    index: int
    sign: int
    over_in: int
    over_out: int
    under_in: int
    under_out: int


@dataclasses.dataclass(frozen=True)
class Diagram:
    """Closure diagram of a braid word, with its basepoint traversal"""

    braid: BraidWord
    crossings: Tuple[Crossing, ...]
    arc_count: int
    components: int
    first_visits: Tuple[Tuple[int, str], ...]

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def first_bad_crossing(self) -> Optional[int]:
        """Index of the first crossing met as an under-pass, or None for a descending diagram"""
        for index, role in self.first_visits:
            if role == UNDER:
                return index
        return None

    def is_descending(self) -> bool:
        return self.first_bad_crossing() is None

    def switched(self, index: int) -> BraidWord:
        letters = list(self.braid.letters)
        letters[index] = -letters[index]
        return BraidWord(self.braid.strands, tuple(letters))

    def smoothed(self, index: int) -> BraidWord:
        letters = self.braid.letters
        return BraidWord(self.braid.strands, letters[:index] + letters[index + 1:])


def braid_to_diagram(b: BraidWord) -> Diagram:
    """
    Build the closure diagram of a braid word

    Both outgoing arcs of a crossing are numbered in the same order whatever
    its sign, so switching a crossing keeps every arc id and only swaps the
    over and under roles.
    """
    n = b.strands
    current = list(range(n))
    next_arc = n
    raw: List[Tuple[int, int, int, int, int, int]] = []
    for index, letter in enumerate(b.letters):
        left = abs(letter) - 1
        out_left, out_right = next_arc, next_arc + 1
        next_arc += 2
        if letter > 0:
            row = (index, 1, current[left], out_right, current[left + 1], out_left)
        else:
            row = (index, -1, current[left + 1], out_left, current[left], out_right)
        raw.append(row)
        current[left], current[left + 1] = out_left, out_right

    # the closure glues bottom position j to top position j
    alias = {current[j]: j for j in range(n) if current[j] != j}
    used = sorted(set(range(n)) | {alias.get(arc, arc) for row in raw for arc in row[2:]})
    renumber = {arc: i for i, arc in enumerate(used)}

    def resolve(arc: int) -> int:
        return renumber[alias.get(arc, arc)]

    crossings = tuple(
        Crossing(index, sign, resolve(oi), resolve(oo), resolve(ui), resolve(uo))
        for index, sign, oi, oo, ui, uo in raw
    )

    head: Dict[int, Tuple[int, str]] = {}
    successor: Dict[int, int] = {}
    for c in crossings:
        head[c.over_in] = (c.index, OVER)
        successor[c.over_in] = c.over_out
        head[c.under_in] = (c.index, UNDER)
        successor[c.under_in] = c.under_out

    visited = set()
    first_role: Dict[int, str] = {}
    first_visits: List[Tuple[int, str]] = []
    components = 0
    for start in range(len(used)):
        if start in visited:
            continue
        components += 1
        arc = start
        while arc not in visited:
            visited.add(arc)
            if arc not in head:
                break
            index, role = head[arc]
            if index not in first_role:
                first_role[index] = role
                first_visits.append((index, role))
            arc = successor[arc]

    return Diagram(b, crossings, len(used), components, tuple(first_visits))


def _free_reduce(letters: Sequence[int]) -> List[int]:
    stack: List[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    while len(stack) >= 2 and stack[0] == -stack[-1]:
        stack = stack[1:-1]
    return stack


def _shift_down(letters: Sequence[int]) -> List[int]:
    return [x - 1 if x > 0 else x + 1 for x in letters]


def markov_reduce(b: BraidWord) -> Tuple[BraidWord, int]:
    """
    Simplify a word without changing its closure up to split unknots

    Applies cyclic free reduction, removal of an outer strand that never
    crosses, and destabilization of an outer generator that occurs once.

    Returns:
        Tuple of the reduced word and the number of split-off unknotted components
    """
    letters = list(b.letters)
    strands = b.strands
    split = 0
    changed = True
    while changed:
        changed = False
        letters = _free_reduce(letters)
        if strands == 1:
            break
        top = strands - 1
        counts = Counter(abs(x) for x in letters)
        if counts[top] == 0:
            strands -= 1
            split += 1
            changed = True
        elif counts[1] == 0:
            letters = _shift_down(letters)
            strands -= 1
            split += 1
            changed = True
        elif counts[top] == 1:
            i = next(i for i, x in enumerate(letters) if abs(x) == top)
            letters = letters[i + 1:] + letters[:i]
            strands -= 1
            changed = True
        elif counts[1] == 1:
            i = next(i for i, x in enumerate(letters) if abs(x) == 1)
            letters = _shift_down(letters[i + 1:] + letters[:i])
            strands -= 1
            changed = True
    return BraidWord(strands, tuple(letters)), split


def canonical_key(b: BraidWord) -> Tuple[int, Tuple[int, ...]]:
    """Strand count with the lexicographically least rotation of the letters"""
    letters = b.letters
    if not letters:
        return b.strands, ()
    return b.strands, min(letters[i:] + letters[:i] for i in range(len(letters)))
