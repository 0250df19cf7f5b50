"""Club sequences: the schedule of fibers collapsed during state synthesis.

A club term is a length-n word whose letters are dits followed by a
non-empty run of clubs, e.g. ``21♣♣`` for d=3, n=4. Terms are stored as the
numeric prefix plus the word length.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .core import STAR, TARGET, ControlWord, ValidationError

CLUB = "♣"
CLUB_ASCII = "c"


@dataclass(frozen=True)
class ClubTerm:
    d: int
    n: int
    prefix: tuple

    def __post_init__(self):
        prefix = tuple(int(c) for c in self.prefix)
        object.__setattr__(self, "prefix", prefix)
        if len(prefix) >= self.n:
            raise ValidationError("a club term needs at least one club")
        if any(not 0 <= c < self.d for c in prefix):
            raise ValidationError(f"dit out of range in club term prefix {prefix}")

    @property
    def letters(self) -> tuple:
        return self.prefix + (CLUB,) * (self.n - len(self.prefix))

    @property
    def leftmost_club(self) -> int:
        return len(self.prefix)

    @property
    def rightmost_nonzero(self) -> Optional[int]:
        for i in range(len(self.prefix) - 1, -1, -1):
            if self.prefix[i] > 0:
                return i
        return None

    def control_word(self) -> ControlWord:
        """Target on the leftmost club, one control on the rightmost nonzero dit."""
        letters = [STAR] * self.n
        letters[self.leftmost_club] = TARGET
        q = self.rightmost_nonzero
        if q is not None:
            letters[q] = self.prefix[q]
        return ControlWord(self.d, tuple(letters))

    def render(self, utf8: bool = True) -> str:
        club = CLUB if utf8 else CLUB_ASCII
        sep = "" if self.d <= 10 else ","
        return sep.join([str(c) for c in self.prefix] + [club] * (self.n - len(self.prefix)))

    @classmethod
    def parse(cls, text: str, d: int) -> "ClubTerm":
        """Parse ``"21♣♣"`` or ``"21cc"``."""
        letters = text.split(",") if "," in text else list(text)
        prefix = []
        seen_club = False
        for x in letters:
            if x in (CLUB, CLUB_ASCII):
                seen_club = True
            elif seen_club:
                raise ValidationError(f"clubs must form a suffix: {text!r}")
            else:
                prefix.append(int(x))
        return cls(d, len(letters), tuple(prefix))

    def __str__(self) -> str:
        return self.render()


def leftmost_club(t: ClubTerm) -> int:
    return t.leftmost_club


def rightmost_nonzero(t: ClubTerm) -> Optional[int]:
    return t.rightmost_nonzero


def _check(d: int, n: int) -> None:
    if d < 2:
        raise ValidationError("d must be at least 2")
    if n < 1:
        raise ValidationError("n must be at least 1")


def sequence_length(d: int, n: int) -> int:
    """Number of terms, (d^n - 1)/(d - 1)."""
    _check(d, n)
    return (d**n - 1) // (d - 1)


def iter_club_sequence(d: int, n: int) -> Iterator[ClubTerm]:
    """Yield the club sequence lazily, in order."""
    _check(d, n)
    for prefix in _prefixes(d, n):
        yield ClubTerm(d, n, prefix)


def _prefixes(d: int, n: int) -> Iterator[tuple]:
    # d prefixed copies of the (n-1)-sequence, then the all-club term
    if n > 1:
        for q in range(d):
            for rest in _prefixes(d, n - 1):
                yield (q,) + rest
    yield ()


@lru_cache(maxsize=64)
def make_club_sequence(d: int, n: int) -> tuple:
    """The full club sequence for (d, n) as a tuple of :class:`ClubTerm`."""
    return tuple(iter_club_sequence(d, n))
