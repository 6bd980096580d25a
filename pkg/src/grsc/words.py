"""Letters and words over S ⊔ S^{-1}.

Letters are encoded as nonzero integers: generator ``i`` (0-based) is
``i + 1`` and its formal inverse is ``-(i + 1)``.  A word is a tuple of
letters.  :class:`Alphabet` converts between this encoding and the textual
form used in files and on the command line (``a b -a -b``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple  # tuple[int, ...]


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    names: tuple

    def __post_init__(self):
        seen = set()
        for name in self.names:
            if not name or any(ch.isspace() for ch in name) or name.startswith("-"):
                raise WordSyntaxError(f"invalid letter name {name!r}")
            if name in seen:
                raise WordSyntaxError(f"duplicate letter name {name!r}")
            seen.add(name)

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise WordSyntaxError(f"unknown letter {name!r}") from None

    def letter(self, name: str, sign: int = 1) -> int:
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return sign * (self.index(name) + 1)

    def letters(self) -> list:
        """All letters in the canonical order a, -a, b, -b, ..."""
        out = []
        for i in range(len(self.names)):
            out += [i + 1, -(i + 1)]
        return out

    def parse_word(self, text: str) -> Word:
        out = []
        for tok in text.split():
            if tok.startswith("-"):
                out.append(-self.letter(tok[1:]))
            else:
                out.append(self.letter(tok))
        return tuple(out)

    def name(self, x: int) -> str:
        base = self.names[abs(x) - 1]
        return base if x > 0 else "-" + base

    def format_word(self, w: Sequence[int]) -> str:
        return " ".join(self.name(x) for x in w)


def letter_key(x: int) -> tuple:
    """Sort key: a < -a < b < -b < ..."""
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Sequence[int]) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def is_freely_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return is_freely_reduced(w) and (len(w) < 2 or w[0] != -w[-1])


def free_reduce(w: Iterable[int]) -> Word:
    stack = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def rotations(w: Sequence[int]):
    w = tuple(w)
    for i in range(max(len(w), 1)):
        yield w[i:] + w[:i]


def cyclic_canonical(w: Sequence[int]) -> Word:
    """Shortlex-least rotation of ``w`` or of its inverse."""
    cands = list(rotations(w)) + list(rotations(inverse(w)))
    return min(cands, key=shortlex_key)


def reduced_words(letters: Sequence[int], length: int):
    """Yield every freely reduced word of exactly ``length`` letters."""
    if length == 0:
        yield ()
        return
    stack = [(x,) for x in reversed(letters)]
    while stack:
        w = stack.pop()
        if len(w) == length:
            yield w
            continue
        for x in reversed(letters):
            if x != -w[-1]:
                stack.append(w + (x,))
