"""Finite leaf automata: computation trees, leaf strings, membership.

A leaf automaton reads a word; each transition fans a state out to an
ordered nonempty sequence of successors, so the computation is a tree.
The leaf string lists the value map over the leaves left to right, and
membership holds when that string lies in the chosen leaf language.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Dfa, LanguageSpec, language_member
from .errors import CapExceeded, InvariantViolation


@dataclass(frozen=True)
class LeafAutomaton:
    """states, input alphabet, delta as tuple-of-tuples of successor tuples
    (delta[state][letter] is a nonempty tuple of state indices), start state,
    leaf alphabet, and beta mapping each state to a leaf letter."""

    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    delta: tuple
    start: int
    leaf_alphabet: tuple[str, ...]
    beta: tuple[str, ...]

    def __post_init__(self):
        nq, na = len(self.states), len(self.input_alphabet)
        if len(self.delta) != nq:
            raise InvariantViolation("delta must have one row per state")
        for row in self.delta:
            if len(row) != na:
                raise InvariantViolation("delta row width must match the alphabet")
            for succ in row:
                if not succ:
                    raise InvariantViolation("successor sequences must be nonempty")
                for q in succ:
                    if not 0 <= q < nq:
                        raise InvariantViolation(f"successor state {q} out of range")
        if not 0 <= self.start < nq:
            raise InvariantViolation("start state out of range")
        if len(self.beta) != nq:
            raise InvariantViolation("beta must be total on states")
        for x in self.beta:
            if x not in self.leaf_alphabet:
                raise InvariantViolation(f"beta value {x!r} outside the leaf alphabet")

    def letter_index(self, a: str) -> int:
        try:
            return self.input_alphabet.index(a)
        except ValueError:
            raise InvariantViolation(
                f"letter {a!r} outside the input alphabet") from None


def leaf_count(M: LeafAutomaton, w: str) -> int:
    """Leaves of the computation tree, by per-state counts folded from the
    end of the word; exact big integers."""
    counts = [1] * len(M.states)
    for a in reversed(w):
        ai = M.letter_index(a)
        counts = [sum(counts[q] for q in M.delta[s][ai])
                  for s in range(len(M.states))]
    return counts[M.start]


def _leaf_letters(M: LeafAutomaton, w: str):
    """Leaf letters in left-to-right order via iterative depth-first walk."""
    letters = [M.letter_index(a) for a in w]
    n = len(letters)
    # stack frames: (state, depth, next child index)
    stack = [[M.start, 0, 0]]
    while stack:
        state, depth, child = stack[-1]
        if depth == n:
            yield M.beta[state]
            stack.pop()
            continue
        succ = M.delta[state][letters[depth]]
        if child == len(succ):
            stack.pop()
            continue
        stack[-1][2] += 1
        stack.append([succ[child], depth + 1, 0])


def leaf_string(M: LeafAutomaton, w: str, cap: int = 1 << 16) -> str:
    """The concatenated beta values over the computation tree's leaves."""
    total = leaf_count(M, w)
    if total > cap:
        raise CapExceeded(
            f"leaf string for {w!r} has length {total}, cap is {cap}",
            required=total)
    return "".join(_leaf_letters(M, w))


def leaffa_member(M: LeafAutomaton, leaf_spec: LanguageSpec, w: str,
                  cap: int = 1 << 16) -> bool:
    """w is accepted when the leaf string lies in leaf_spec.

    Regular leaf specs consume the leaf string as a stream (the cap bounds
    nothing there); other specs materialize it under the cap.
    """
    for x in set(M.beta):
        if x not in leaf_spec.alphabet:
            raise InvariantViolation(
                f"beta value {x!r} outside the leaf language alphabet")
    body = leaf_spec.body
    if isinstance(body, Dfa):
        state = body.start
        idx = {a: i for i, a in enumerate(body.alphabet)}
        for x in _leaf_letters(M, w):
            state = body.trans[state][idx[x]]
        return state in body.finals
    return language_member(leaf_spec, leaf_string(M, w, cap))
