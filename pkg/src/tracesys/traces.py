"""Trace monoids over an independence alphabet.

Traces are stored directly in Cartier-Foata normal form: a tuple of
nonempty cliques, each clique encoded as a bitmask over the alphabet's
letter order.  Equality of traces is therefore equality of tuples.

Letters are plain strings.  A clique, as seen by callers, is a
``frozenset`` of letters; the bitmask encoding is internal.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import InputError, OrderError

Clique = frozenset


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class IndependenceAlphabet:
    """A finite ordered alphabet with a symmetric irreflexive independence relation."""

    letters: tuple
    independent: frozenset = frozenset()

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        pairs = frozenset(frozenset(p) for p in self.independent)
        object.__setattr__(self, "independent", pairs)
        if len(set(letters)) != len(letters):
            raise InputError(f"duplicate letters in alphabet {list(letters)}")
        for letter in letters:
            if not isinstance(letter, str) or not letter or "|" in letter or letter.split() != [letter]:
                raise InputError(f"invalid letter name {letter!r}")
        known = set(letters)
        for pair in pairs:
            if len(pair) != 2:
                raise InputError(
                    f"independence pair {sorted(pair)} is not a pair of distinct letters")
            unknown = pair - known
            if unknown:
                raise InputError(f"independence pair mentions unknown letter(s) {sorted(unknown)}")

    @classmethod
    def of(cls, letters: Iterable[str], independent: Iterable[Iterable[str]] = ()) -> "IndependenceAlphabet":
        return cls(tuple(letters), frozenset(frozenset(p) for p in independent))

    @classmethod
    def free(cls, letters: Iterable[str]) -> "IndependenceAlphabet":
        return cls(tuple(letters), frozenset())

    @classmethod
    def free_commutative(cls, letters: Iterable[str]) -> "IndependenceAlphabet":
        letters = tuple(letters)
        pairs = frozenset(
            frozenset((a, b)) for i, a in enumerate(letters) for b in letters[i + 1:])
        return cls(letters, pairs)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, letter):
        return letter in self.index

    @cached_property
    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.letters)}

    @cached_property
    def dep_masks(self) -> tuple:
        """``dep_masks[i]``: bitmask of letters dependent on letter ``i`` (itself included)."""
        n = len(self.letters)
        masks = [(1 << n) - 1] * n
        for pair in self.independent:
            a, b = (self.index[x] for x in pair)
            masks[a] &= ~(1 << b)
            masks[b] &= ~(1 << a)
        return tuple(masks)

    @cached_property
    def _dep_lists(self) -> tuple:
        return tuple(tuple(iter_bits(m)) for m in self.dep_masks)

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.letters)) - 1

    def letter_index(self, letter: str) -> int:
        try:
            return self.index[letter]
        except KeyError:
            raise InputError(f"unknown letter {letter!r}") from None

    def is_independent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.independent

    def depends(self, a: str, b: str) -> bool:
        self.letter_index(a)
        self.letter_index(b)
        return not self.is_independent(a, b)

    def mask_of(self, letters: Iterable[str]) -> int:
        mask = 0
        for a in letters:
            mask |= 1 << self.letter_index(a)
        return mask

    def clique_of(self, mask: int) -> Clique:
        return frozenset(self.letters[i] for i in iter_bits(mask))

    def sorted_letters(self, mask: int) -> list:
        return [self.letters[i] for i in iter_bits(mask)]

    def is_clique_mask(self, mask: int) -> bool:
        return all(not (self.dep_masks[i] & mask & ~(1 << i)) for i in iter_bits(mask))

    def is_normal_pair_mask(self, c: int, d: int) -> bool:
        return all(self.dep_masks[i] & c for i in iter_bits(d))

    @cached_property
    def clique_masks(self) -> tuple:
        """All clique bitmasks, ordered by size then lexicographically."""
        found = [0]

        def extend(mask, start):
            for i in range(start, len(self.letters)):
                if self.dep_masks[i] & mask:
                    continue
                found.append(mask | (1 << i))
                extend(mask | (1 << i), i + 1)

        extend(0, 0)
        found.sort(key=lambda m: (m.bit_count(), tuple(iter_bits(m))))
        return tuple(found)

    def dependence_pairs(self) -> list:
        """Unordered pairs of distinct dependent letters (edges of the Coxeter graph)."""
        return [(a, b) for i, a in enumerate(self.letters) for b in self.letters[i + 1:]
                if not self.is_independent(a, b)]

    def is_connected(self) -> bool:
        """Whether the dependence graph is connected (the empty alphabet counts as connected)."""
        if not self.letters:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for i in iter_bits(frontier):
                nxt |= self.dep_masks[i]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == self.full_mask

    def is_refined_by(self, other: "IndependenceAlphabet") -> bool:
        """True when both alphabets share letters and this independence is contained in ``other``'s."""
        return set(self.letters) == set(other.letters) and self.independent <= other.independent

    def without(self, letter: str) -> "IndependenceAlphabet":
        self.letter_index(letter)
        return IndependenceAlphabet(
            tuple(a for a in self.letters if a != letter),
            frozenset(p for p in self.independent if letter not in p))

    def format_clique(self, mask: int) -> str:
        return "".join(self.sorted_letters(mask)) if mask else "ε"


# -- internal normal-form machinery on bitmask tuples ------------------------

def _normal_form(alphabet: IndependenceAlphabet, indices: Iterable[int]) -> tuple:
    level = [0] * len(alphabet.letters)
    deps = alphabet._dep_lists
    layers: list = []
    for i in indices:
        h = 0
        for j in deps[i]:
            if level[j] > h:
                h = level[j]
        if h == len(layers):
            layers.append(0)
        layers[h] |= 1 << i
        level[i] = h + 1
    return tuple(layers)


def _word(masks: Sequence[int]) -> list:
    return [i for m in masks for i in iter_bits(m)]


def _append_letter(alphabet: IndependenceAlphabet, masks: tuple, i: int) -> tuple:
    dep = alphabet.dep_masks[i]
    k = len(masks)
    while k and not masks[k - 1] & dep:
        k -= 1
    if k == len(masks):
        return masks + (1 << i,)
    return masks[:k] + (masks[k] | (1 << i),) + masks[k + 1:]


def _remove_minimal(alphabet: IndependenceAlphabet, masks: tuple, sub: int) -> tuple:
    """Left-cancel the clique ``sub``, which must be contained in the first clique."""
    if not sub:
        return masks
    rest = masks[0] & ~sub
    return _normal_form(alphabet, list(iter_bits(rest)) + _word(masks[1:]))


def _residual_masks(alphabet, xm: tuple, ym: tuple) -> Optional[tuple]:
    cur = ym
    for m in xm:
        if not cur or m & ~cur[0]:
            return None
        cur = _remove_minimal(alphabet, cur, m)
    return cur


def _glb_masks(alphabet, xm: tuple, ym: tuple):
    common_word: list = []
    while xm and ym:
        common = xm[0] & ym[0]
        if not common:
            break
        common_word.extend(iter_bits(common))
        xm = _remove_minimal(alphabet, xm, common)
        ym = _remove_minimal(alphabet, ym, common)
    return _normal_form(alphabet, common_word), xm, ym


def _letters_used(masks: Iterable[int]) -> int:
    used = 0
    for m in masks:
        used |= m
    return used


# -- public types -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Trace:
    """A trace, held as its Cartier-Foata normal form.

    Build traces with :func:`normalize_word` or :func:`parse_trace` rather
    than by hand; the constructor trusts ``masks`` to be a normal sequence.
    """

    alphabet: IndependenceAlphabet
    masks: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return self.masks == other.masks and (
            self.alphabet is other.alphabet or self.alphabet == other.alphabet)

    def __hash__(self):
        return hash(self.masks)

    def __len__(self):
        return sum(m.bit_count() for m in self.masks)

    def __bool__(self):
        return bool(self.masks)

    def __mul__(self, other):
        if not isinstance(other, Trace):
            return NotImplemented
        return concat(self, other)

    @property
    def height(self) -> int:
        return len(self.masks)

    @property
    def cliques(self) -> tuple:
        return tuple(self.alphabet.clique_of(m) for m in self.masks)

    def clique(self, i: int) -> Clique:
        """``C_i``: the ``i``-th clique (1-based) of the generalised normal form."""
        if i < 1:
            raise IndexError("clique indices start at 1")
        return self.cliques[i - 1] if i <= len(self.masks) else frozenset()

    def word(self) -> tuple:
        """One linearization: cliques in order, letters in alphabet order inside each."""
        return tuple(self.alphabet.letters[i] for i in _word(self.masks))

    def letters_used(self) -> frozenset:
        return self.alphabet.clique_of(_letters_used(self.masks))

    def is_clique(self) -> bool:
        return len(self.masks) <= 1

    def __str__(self):
        if not self.masks:
            return "ε"
        return " | ".join(" ".join(self.alphabet.sorted_letters(m)) for m in self.masks)

    def __repr__(self):
        return f"Trace({str(self)!r})"


@dataclass(frozen=True)
class OmegaTrace:
    """An eventually periodic infinite trace ``prefix · cycle^ω`` in normal form."""

    alphabet: IndependenceAlphabet
    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise InputError("the cycle of an infinite trace must be nonempty")
        seq = self.prefix + self.cycle + self.cycle
        for m in seq:
            if not m or not self.alphabet.is_clique_mask(m) or m & ~self.alphabet.full_mask:
                raise InputError("infinite trace contains an empty or invalid clique")
        for c, d in zip(seq, seq[1:]):
            if not self.alphabet.is_normal_pair_mask(c, d):
                raise InputError(
                    f"cliques {self.alphabet.format_clique(c)} -> "
                    f"{self.alphabet.format_clique(d)} do not form a normal pair")

    @classmethod
    def of(cls, alphabet: IndependenceAlphabet, prefix: Iterable[Iterable[str]],
           cycle: Iterable[Iterable[str]]) -> "OmegaTrace":
        return cls(alphabet, tuple(alphabet.mask_of(c) for c in prefix),
                   tuple(alphabet.mask_of(c) for c in cycle))

    def clique_mask(self, i: int) -> int:
        """Bitmask of the ``i``-th clique (0-based)."""
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def unfold(self, k: int) -> tuple:
        return tuple(self.clique_mask(i) for i in range(k))

    def truncate(self, k: int) -> Trace:
        """The finite trace formed by the first ``k`` cliques."""
        return Trace(self.alphabet, self.unfold(k))

    def __str__(self):
        fmt = self.alphabet.format_clique
        pre = ", ".join(fmt(m) for m in self.prefix)
        cyc = ", ".join(fmt(m) for m in self.cycle)
        return f"({pre})({cyc})^ω" if pre else f"({cyc})^ω"


# -- operations ---------------------------------------------------------------

def normalize_word(alphabet: IndependenceAlphabet, word: Iterable[str]) -> Trace:
    """Cartier-Foata normal form of the congruence class of ``word``."""
    indices = [alphabet.letter_index(a) for a in word]
    return Trace(alphabet, _normal_form(alphabet, indices))


def parse_trace(alphabet: IndependenceAlphabet, text: str) -> Trace:
    """Parse the text form ``"a0 a3 | a0 a2"``; any grouping is accepted and renormalized."""
    text = text.strip()
    if text in ("", "ε", "eps"):
        return Trace(alphabet)
    return normalize_word(alphabet, text.replace("|", " ").split())


def empty_trace(alphabet: IndependenceAlphabet) -> Trace:
    return Trace(alphabet)


def letter(alphabet: IndependenceAlphabet, a: str) -> Trace:
    return Trace(alphabet, (1 << alphabet.letter_index(a),))


def clique_trace(alphabet: IndependenceAlphabet, letters: Iterable[str]) -> Trace:
    mask = alphabet.mask_of(letters)
    if not alphabet.is_clique_mask(mask):
        raise InputError(f"{sorted(letters)} is not a clique")
    return Trace(alphabet, (mask,) if mask else ())


def _same_alphabet(x: Trace, y: Trace):
    if x.alphabet is not y.alphabet and x.alphabet != y.alphabet:
        raise InputError("traces live over different alphabets")


def concat(x: Trace, y: Trace) -> Trace:
    _same_alphabet(x, y)
    if not y.masks:
        return x
    if not x.masks:
        return y
    return Trace(x.alphabet, _normal_form(x.alphabet, _word(x.masks) + _word(y.masks)))


def is_normal_sequence(alphabet: IndependenceAlphabet, masks: Sequence[int]) -> bool:
    return all(alphabet.is_normal_pair_mask(c, d) for c, d in zip(masks, masks[1:]))


def leq(x: Trace, y: Trace) -> bool:
    """Left divisibility ``x <= y``."""
    _same_alphabet(x, y)
    return _residual_masks(x.alphabet, x.masks, y.masks) is not None


def residual(x: Trace, y: Trace) -> Trace:
    """The unique ``z`` with ``x · z = y``; raises :class:`OrderError` unless ``x <= y``."""
    _same_alphabet(x, y)
    rest = _residual_masks(x.alphabet, x.masks, y.masks)
    if rest is None:
        raise OrderError(f"{x} is not a prefix of {y}")
    return Trace(x.alphabet, rest)


def glb(x: Trace, y: Trace) -> Trace:
    _same_alphabet(x, y)
    g, _, _ = _glb_masks(x.alphabet, x.masks, y.masks)
    return Trace(x.alphabet, g)


def lub(x: Trace, y: Trace) -> Optional[Trace]:
    """Least upper bound, or ``None`` when ``x`` and ``y`` have no common upper bound.

    With ``g = x ∧ y``, an upper bound exists exactly when every letter of
    ``g\\x`` is independent of every letter of ``g\\y``; then the lub is
    ``g · (g\\x) · (g\\y)``.
    """
    _same_alphabet(x, y)
    alphabet = x.alphabet
    g, xr, yr = _glb_masks(alphabet, x.masks, y.masks)
    used_y = _letters_used(yr)
    for i in iter_bits(_letters_used(xr)):
        if alphabet.dep_masks[i] & used_y:
            return None
    return Trace(alphabet, _normal_form(alphabet, _word(g) + _word(xr) + _word(yr)))


def project(x: Trace, target: IndependenceAlphabet) -> Trace:
    """Image of ``x`` under the canonical surjection onto a coarser trace monoid."""
    if not x.alphabet.is_refined_by(target):
        raise InputError("projection target must have the same letters and a larger independence")
    return normalize_word(target, x.word())


def _prefix_levels(alphabet: IndependenceAlphabet, masks: tuple, max_len: int) -> list:
    """Prefixes of the finite normal sequence ``masks``, grouped by length.

    Returns a list whose entry ``n`` maps each prefix (as masks) to its residual.
    """
    levels = [{(): masks}]
    for _ in range(max_len):
        nxt: dict = {}
        for xm, rest in levels[-1].items():
            if not rest:
                continue
            for i in iter_bits(rest[0]):
                nx = _append_letter(alphabet, xm, i)
                if nx not in nxt:
                    nxt[nx] = _remove_minimal(alphabet, rest, 1 << i)
        levels.append(nxt)
    return levels


def subtraces(omega: Union[Trace, OmegaTrace], max_len: int) -> list:
    """All traces ``x <= omega`` with ``|x| <= max_len``, as one list per length."""
    if isinstance(omega, OmegaTrace):
        masks = omega.unfold(max_len)
    else:
        masks = omega.masks
    levels = _prefix_levels(omega.alphabet, masks, max_len)
    return [sorted((Trace(omega.alphabet, xm) for xm in level), key=_trace_sort_key)
            for level in levels]


def count_subtraces(omega: Union[Trace, OmegaTrace], n: int) -> int:
    """Number of traces ``x <= omega`` with ``|x| = n``.

    Only the first ``n`` cliques of ``omega`` matter, so the infinite trace
    is unfolded to that depth.
    """
    if n < 0:
        raise InputError("length must be nonnegative")
    masks = omega.unfold(n) if isinstance(omega, OmegaTrace) else omega.masks
    return len(_prefix_levels(omega.alphabet, masks, n)[n])


def subtrace_bound(n: int, alphabet_size: int) -> int:
    """Number of elements of length ``n`` in the free commutative monoid on the alphabet."""
    if alphabet_size == 0:
        return 1 if n == 0 else 0
    return comb(n + alphabet_size - 1, alphabet_size - 1)


def lift(y: Trace, omega: Union[Trace, OmegaTrace]) -> Optional[Trace]:
    """The unique ``x <= omega`` whose projection is ``y``, or ``None``.

    Rebuilds ``x`` clique by clique: its first clique is the intersection
    of the first cliques of ``y`` and ``omega``, then both are left-cancelled
    by it and the step repeats.
    """
    source = omega.alphabet
    target = y.alphabet
    if not source.is_refined_by(target):
        raise InputError("lift requires the trace to live in a coarser monoid than omega")
    n = len(y)
    full = omega.unfold(n) if isinstance(omega, OmegaTrace) else omega.masks
    # bit positions may differ between the two alphabets when letter orders differ
    to_target = [target.index[a] for a in source.letters]
    to_source = [source.index[a] for a in target.letters]

    def conv(mask, table):
        out = 0
        for i in iter_bits(mask):
            out |= 1 << table[i]
        return out

    w = full
    rest = y.masks
    pieces: list = []
    while rest:
        if not w:
            return None
        c = conv(rest[0], to_source) & w[0]
        if not c:
            return None
        pieces.append(c)
        w = _remove_minimal(source, w, c)
        rest = _remove_minimal(target, rest, conv(c, to_target))
    xm = _normal_form(source, _word(pieces))
    if _residual_masks(source, xm, full) is None:
        return None
    x = Trace(source, xm)
    return x if project(x, target) == y else None


def _trace_sort_key(x: Trace):
    return (len(x), x.height, tuple(tuple(iter_bits(m)) for m in x.masks))


def trace_sort_key(x: Trace):
    """Deterministic ordering: by length, height, then cliques lexicographically."""
    return _trace_sort_key(x)


def render_heap(x: Trace) -> str:
    """ASCII heap of pieces, one row per normal-form clique, ground at the bottom."""
    if not x.masks:
        return ""
    alphabet = x.alphabet
    width = max(len(a) for a in alphabet.letters) + 2
    rows = []
    for m in reversed(x.masks):
        cells = []
        for i, a in enumerate(alphabet.letters):
            cells.append(f"[{a}]".center(width) if m >> i & 1 else " " * width)
        rows.append(" ".join(cells).rstrip())
    ground = "-" * (len(alphabet.letters) * (width + 1) - 1)
    return "\n".join(rows + [ground])
