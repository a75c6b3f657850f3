"""Finite magmas, word problems, and their language carriers.

A language used by a generalized quantifier is carried by one of three
bodies: a DFA, a CNF grammar, or a word problem over a finite
multiplication table. `LanguageSpec` wraps a body together with an ordered
alphabet, and `language_member` dispatches membership to the right
algorithm.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    EmptyWord,
    CapExceeded,
    InvariantViolation,
    LetterOutOfAlphabet,
    NotAssociative,
    NotCnf,
)

BRACKETING_CAP = 12


@dataclass(frozen=True)
class Magma:
    """Finite multiplication table with an identity element.

    `table[x][y]` is the index of x*y (row operand on the left).
    """

    elements: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int
    name: str = ""

    def __post_init__(self):
        g = len(self.elements)
        if len(set(self.elements)) != g or g == 0:
            raise InvariantViolation(f"magma {self.name!r}: element names not distinct")
        if len(self.table) != g or any(len(row) != g for row in self.table):
            raise InvariantViolation(f"magma {self.name!r}: table is not {g}x{g}")
        for row in self.table:
            for v in row:
                if not 0 <= v < g:
                    raise InvariantViolation(
                        f"magma {self.name!r}: table entry {v} out of range"
                    )
        e = self.identity
        if not 0 <= e < g:
            raise InvariantViolation(f"magma {self.name!r}: identity index out of range")
        for x in range(g):
            if self.table[e][x] != x or self.table[x][e] != x:
                raise InvariantViolation(
                    f"magma {self.name!r}: identity law fails at {self.elements[x]}"
                )

    @property
    def size(self):
        return len(self.elements)

    def index(self, name: str) -> int:
        return self.elements.index(name)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]


def check_associative(m: Magma) -> bool:
    """Exhaustive O(g^3) associativity test."""
    t = m.table
    rng = range(m.size)
    return all(
        t[t[x][y]][z] == t[x][t[y][z]] for x in rng for y in rng for z in rng
    )


@dataclass(frozen=True)
class WordProblem:
    """Accepting subset of a magma, defining the language W(accept, magma)."""

    magma: Magma
    accept: frozenset[int]
    associative: bool

    def __post_init__(self):
        if any(not 0 <= x < self.magma.size for x in self.accept):
            raise InvariantViolation("accept set contains out-of-range elements")
        if self.associative != check_associative(self.magma):
            raise InvariantViolation("associative flag does not match the table")

    @classmethod
    def of(cls, magma: Magma, accept) -> "WordProblem":
        return cls(magma, frozenset(accept), check_associative(magma))


def monoid_word_eval(wp: WordProblem, word) -> int:
    """Left fold of the table over `word`, starting at the identity."""
    if not wp.associative:
        raise NotAssociative("monoid_word_eval needs an associative word problem")
    table = wp.magma.table
    acc = wp.magma.identity
    for x in word:
        acc = table[acc][x]
    return acc


def groupoid_reachable(m: Magma, word) -> frozenset[int]:
    """All elements some bracketing of `word` multiplies out to.

    Interval dynamic programming over subword spans; sets kept as bitmasks.
    """
    word = tuple(word)
    if not word:
        raise EmptyWord("groupoid_reachable needs a nonempty word")
    n = len(word)
    table = m.table
    # reach[i][j] = bitmask of elements reachable from word[i..j] inclusive
    reach = [[0] * n for _ in range(n)]
    for i, x in enumerate(word):
        reach[i][i] = 1 << x
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span - 1
            acc = 0
            for k in range(i, j):
                left = reach[i][k]
                right = reach[k + 1][j]
                for x in _bits(left):
                    row = table[x]
                    for y in _bits(right):
                        acc |= 1 << row[y]
            reach[i][j] = acc
    return frozenset(_bits(reach[0][n - 1]))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def brute_force_bracketings(m: Magma, word, cap: int = BRACKETING_CAP) -> frozenset[int]:
    """Independent oracle: evaluate every full binary bracketing of `word`."""
    word = tuple(word)
    if not word:
        raise EmptyWord("brute_force_bracketings needs a nonempty word")
    if len(word) > cap:
        raise CapExceeded(
            f"word length {len(word)} exceeds bracketing cap {cap}", required=len(word)
        )
    table = m.table

    def values(lo: int, hi: int):
        if hi - lo == 1:
            yield word[lo]
            return
        for mid in range(lo + 1, hi):
            for lv in values(lo, mid):
                row = table[lv]
                for rv in values(mid, hi):
                    yield row[rv]

    return frozenset(values(0, len(word)))


def word_problem_member(wp: WordProblem, word) -> bool:
    word = tuple(word)
    if not word:
        return wp.magma.identity in wp.accept
    if wp.associative:
        return monoid_word_eval(wp, word) in wp.accept
    return bool(groupoid_reachable(wp.magma, word) & wp.accept)


# ---------------------------------------------------------------------------
# DFAs and CNF grammars


@dataclass(frozen=True)
class Dfa:
    """Total deterministic automaton; `trans[q][a]` is the successor state."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    trans: tuple[tuple[int, ...], ...]
    start: int
    finals: frozenset[int]

    def __post_init__(self):
        q = len(self.states)
        if len(self.trans) != q or any(len(row) != len(self.alphabet) for row in self.trans):
            raise InvariantViolation("DFA transition table is not total")
        if any(not 0 <= t < q for row in self.trans for t in row):
            raise InvariantViolation("DFA transition target out of range")
        if not 0 <= self.start < q:
            raise InvariantViolation("DFA start state out of range")
        if any(not 0 <= f < q for f in self.finals):
            raise InvariantViolation("DFA final state out of range")

    def letter_index(self, a: str) -> int:
        return self.alphabet.index(a)

    def run(self, word) -> bool:
        state = self.start
        for a in word:
            state = self.trans[state][self.alphabet.index(a)]
        return state in self.finals


@dataclass(frozen=True)
class Cfg:
    """Chomsky-normal-form grammar.

    `binary` holds productions A -> B C as index triples; `lexical` holds
    A -> a pairs. Membership of the empty word is carried by the flag, never
    by a production.
    """

    nonterminals: tuple[str, ...]
    terminals: tuple[str, ...]
    binary: tuple[tuple[int, int, int], ...]
    lexical: tuple[tuple[int, str], ...]
    start: int
    epsilon_in_language: bool = False

    def __post_init__(self):
        nn = len(self.nonterminals)
        for a, b, c in self.binary:
            if not (0 <= a < nn and 0 <= b < nn and 0 <= c < nn):
                raise NotCnf("binary production index out of range")
        for a, t in self.lexical:
            if not 0 <= a < nn:
                raise NotCnf("lexical production index out of range")
            if t not in self.terminals:
                raise NotCnf(f"lexical production uses unknown terminal {t!r}")
        if not 0 <= self.start < nn:
            raise InvariantViolation("grammar start symbol out of range")

    @classmethod
    def from_rules(cls, nonterminals, terminals, rules, start, epsilon_in_language=False):
        """Build from (lhs, rhs) pairs; rhs is a terminal string or a NT pair."""
        nts = tuple(nonterminals)
        idx = {a: i for i, a in enumerate(nts)}
        binary = []
        lexical = []
        for lhs, rhs in rules:
            if isinstance(rhs, str):
                lexical.append((idx[lhs], rhs))
            elif len(rhs) == 2:
                binary.append((idx[lhs], idx[rhs[0]], idx[rhs[1]]))
            else:
                raise NotCnf(f"production {lhs} -> {rhs!r} is not CNF")
        return cls(nts, tuple(terminals), tuple(binary), tuple(lexical),
                   idx[start], epsilon_in_language)


def cyk_member(g: Cfg, word) -> bool:
    """CNF interval dynamic programming, one bitmask of start positions per
    nonterminal and span length."""
    word = tuple(word)
    n = len(word)
    if n == 0:
        return g.epsilon_in_language
    nn = len(g.nonterminals)
    lex = {}
    for a, t in g.lexical:
        lex.setdefault(t, []).append(a)
    row1 = [0] * nn
    for i, t in enumerate(word):
        for a in lex.get(t, ()):
            row1[a] |= 1 << i
    rows = [None, row1]
    for span in range(2, n + 1):
        row = [0] * nn
        for l1 in range(1, span):
            left = rows[l1]
            right = rows[span - l1]
            for a, b, c in g.binary:
                row[a] |= left[b] & (right[c] >> l1)
        rows.append(row)
    return bool(rows[n][g.start] & 1)


def cfg_to_groupoid(g: Cfg):
    """Powerset-of-nonterminals groupoid with a fresh adjoined identity.

    Returns (WordProblem, homomorphism letter -> element index). For every
    nonempty word w: w in L(g) iff h(w) is in the word problem.
    """
    nn = len(g.nonterminals)
    nmasks = 1 << nn
    # element 0 is the adjoined identity; element i+1 carries subset mask i
    size = nmasks + 1

    def combine(x_mask: int, y_mask: int) -> int:
        out = 0
        for a, b, c in g.binary:
            if (x_mask >> b) & 1 and (y_mask >> c) & 1:
                out |= 1 << a
        return out

    table = []
    for x in range(size):
        row = []
        for y in range(size):
            if x == 0:
                row.append(y)
            elif y == 0:
                row.append(x)
            else:
                row.append(combine(x - 1, y - 1) + 1)
        table.append(tuple(row))

    def mask_name(mask: int) -> str:
        if mask == 0:
            return "{}"
        return "{" + ",".join(nt for i, nt in enumerate(g.nonterminals)
                              if (mask >> i) & 1) + "}"

    elements = ("I",) + tuple(mask_name(m) for m in range(nmasks))
    magma = Magma(elements, tuple(table), 0, name="powerset")
    accept = frozenset(
        m + 1 for m in range(nmasks) if (m >> g.start) & 1
    )
    wp = WordProblem.of(magma, accept)
    hom = {}
    for t in g.terminals:
        mask = 0
        for a, lt in g.lexical:
            if lt == t:
                mask |= 1 << a
        hom[t] = mask + 1
    return wp, hom


def regular_to_monoid(d: Dfa):
    """Transition-monoid construction.

    Elements are the state transformations generated by the letters, closed
    under composition, with the identity transformation adjoined. Returns
    (WordProblem with associative=True, homomorphism letter -> element index).
    """
    q = len(d.states)
    ident = tuple(range(q))
    gens = {}
    for ai, a in enumerate(d.alphabet):
        gens[a] = tuple(d.trans[s][ai] for s in range(q))

    elems = {ident}
    frontier = [ident]
    gen_list = list(gens.values())
    while frontier:
        nxt = []
        for f in frontier:
            for gtr in gen_list:
                composed = tuple(gtr[f[s]] for s in range(q))
                if composed not in elems:
                    elems.add(composed)
                    nxt.append(composed)
        frontier = nxt
    ordered = [ident] + sorted(elems - {ident})
    index = {f: i for i, f in enumerate(ordered)}
    table = tuple(
        tuple(index[tuple(gf[ff[s]] for s in range(q))] for gf in ordered)
        for ff in ordered
    )

    def tname(f):
        return "id" if f == ident else "[" + " ".join(str(x) for x in f) + "]"

    magma = Magma(tuple(tname(f) for f in ordered), table, 0, name="transition")
    accept = frozenset(i for f, i in index.items() if f[d.start] in d.finals)
    wp = WordProblem(magma, accept, True)
    hom = {a: index[tr] for a, tr in gens.items()}
    return wp, hom


# ---------------------------------------------------------------------------
# Language specs


@dataclass
class LanguageSpec:
    """Named language with an explicit, ordered alphabet.

    For a WordProblem body, `letter_map` sends alphabet letters bijectively
    to magma element indices (defaults to positional).
    """

    name: str
    alphabet: tuple[str, ...]
    body: object
    declared_neutral: str | None = None
    letter_map: dict | None = None
    _member_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InvariantViolation(f"language {self.name!r}: duplicate letters")
        if self.declared_neutral is not None and self.declared_neutral not in self.alphabet:
            raise InvariantViolation(
                f"language {self.name!r}: neutral letter not in alphabet"
            )
        body = self.body
        if isinstance(body, WordProblem):
            if self.letter_map is None:
                self.letter_map = {a: i for i, a in enumerate(self.alphabet)}
            if sorted(self.letter_map.values()) != list(range(body.magma.size)) or set(
                self.letter_map
            ) != set(self.alphabet):
                raise InvariantViolation(
                    f"language {self.name!r}: letters must map bijectively to elements"
                )
        elif isinstance(body, Dfa):
            if set(self.alphabet) != set(body.alphabet):
                raise InvariantViolation(
                    f"language {self.name!r}: alphabet disagrees with DFA alphabet"
                )
        elif isinstance(body, Cfg):
            if set(self.alphabet) != set(body.terminals):
                raise InvariantViolation(
                    f"language {self.name!r}: alphabet disagrees with grammar terminals"
                )
        else:
            raise InvariantViolation(
                f"language {self.name!r}: unsupported body {type(body).__name__}"
            )

    @property
    def size(self) -> int:
        return len(self.alphabet)

    def member(self, word) -> bool:
        return language_member(self, word)


def language_member(spec: LanguageSpec, word) -> bool:
    """Membership of `word` (an iterable of letters) in the named language."""
    word = "".join(word)
    for a in word:
        if a not in spec.alphabet:
            raise LetterOutOfAlphabet(
                f"letter {a!r} not in alphabet of language {spec.name!r}"
            )
    cached = spec._member_cache.get(word)
    if cached is not None:
        return cached
    body = spec.body
    if isinstance(body, Dfa):
        result = body.run(word)
    elif isinstance(body, Cfg):
        result = cyk_member(body, word)
    else:
        result = word_problem_member(body, [spec.letter_map[a] for a in word])
    if len(spec._member_cache) > 4096:
        spec._member_cache.clear()
    spec._member_cache[word] = result
    return result


def is_neutral_letter_bounded(spec: LanguageSpec, letter: str, max_len: int) -> bool:
    """Bounded test of `uv in L iff u letter v in L`, sound for refutation."""
    if letter not in spec.alphabet:
        raise LetterOutOfAlphabet(f"{letter!r} not in alphabet of {spec.name!r}")
    for length in range(0, max_len + 1):
        for w in itertools.product(spec.alphabet, repeat=length):
            base = language_member(spec, w)
            for cut in range(length + 1):
                padded = w[:cut] + (letter,) + w[cut:]
                if language_member(spec, padded) != base:
                    return False
    return True


def is_symmetric_bounded(spec: LanguageSpec, max_len: int) -> bool:
    """True iff membership depends only on letter counts, up to `max_len`."""
    for length in range(1, max_len + 1):
        seen = {}
        for w in itertools.product(spec.alphabet, repeat=length):
            counts = tuple(sorted((a, w.count(a)) for a in spec.alphabet))
            value = language_member(spec, w)
            if seen.setdefault(counts, value) != value:
                return False
    return True


def pad_language(spec: LanguageSpec, pad_letter: str, name: str | None = None) -> LanguageSpec:
    """Extend a language with a fresh neutral letter (appended last).

    The result accepts w iff deleting every `pad_letter` from w leaves a
    member of the original language.
    """
    if pad_letter in spec.alphabet:
        raise InvariantViolation(f"pad letter {pad_letter!r} already in alphabet")
    name = name or spec.name + "_pad"
    alphabet = spec.alphabet + (pad_letter,)
    body = spec.body
    if isinstance(body, Dfa):
        pad_trans = tuple(row + (q,) for q, row in enumerate(body.trans))
        new = Dfa(body.states, body.alphabet + (pad_letter,), pad_trans,
                  body.start, body.finals)
        return LanguageSpec(name, alphabet, new, declared_neutral=pad_letter)
    if isinstance(body, Cfg):
        return LanguageSpec(name, alphabet, _pad_cfg(body, pad_letter),
                            declared_neutral=pad_letter)
    raise InvariantViolation("pad_language supports DFA and CNF grammar bodies only")


def _pad_cfg(g: Cfg, pad: str) -> Cfg:
    # Every padded word is p0 a1 p1 a2 ... ar pr with pi in pad*. Leading pads
    # attach to the following letter; trailing pads hang off a new start.
    h = "_H"
    p = "_P"
    old = g.nonterminals
    wrapped = {nt: "_W" + nt for nt in old}  # letter-carrying wrappers
    new_start = "_S"
    nts = (new_start, p, h) + old + tuple(wrapped[nt] for nt in old)
    binary = []
    lexical = [(2, pad)]  # h -> pad
    idx = {nt: i for i, nt in enumerate(nts)}
    binary.append((idx[p], idx[h], idx[p]))
    lexical.append((idx[p], pad))
    shift = {}
    for i, nt in enumerate(old):
        shift[i] = idx[nt]
    for a, b, c in g.binary:
        binary.append((shift[a], idx[wrapped[old[b]]], idx[wrapped[old[c]]]))
    for a, t in g.lexical:
        lexical.append((shift[a], t))
    for nt in old:
        binary.append((idx[wrapped[nt]], idx[p], idx[nt]))
        # wrapper also derives the bare nonterminal
        for a, b, c in g.binary:
            if old[a] == nt:
                binary.append((idx[wrapped[nt]], idx[wrapped[old[b]]], idx[wrapped[old[c]]]))
        for a, t in g.lexical:
            if old[a] == nt:
                lexical.append((idx[wrapped[nt]], t))
    start_w = idx[wrapped[old[g.start]]]
    binary.append((idx[new_start], start_w, idx[p]))
    # new start also derives the unpadded-tail form and pure pad strings
    for b in list(binary):
        if b[0] == start_w:
            binary.append((idx[new_start], b[1], b[2]))
    for a, t in list(lexical):
        if a == start_w:
            lexical.append((idx[new_start], t))
    eps = g.epsilon_in_language
    if eps:
        # pure pad strings project to the empty word
        binary.append((idx[new_start], idx[h], idx[p]))
        lexical.append((idx[new_start], pad))
    return Cfg(nts, g.terminals + (pad,), tuple(binary), tuple(lexical),
               idx[new_start], eps)
