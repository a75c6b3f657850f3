"""Formula AST and exact evaluation over string and constant structures.

First-order generalized quantifier nodes build a word over the quantifier
language's alphabet, one letter per lexicographically ordered tuple of
domain elements; second-order monadic/m-ary nodes do the same over all
instances of their bound relation variables, ordered either by interleaved
or concatenated bit codes. Membership of the induced word decides the node.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import LanguageSpec, language_member
from .errors import (
    EmptyDomain,
    InstanceCapExceeded,
    InvariantViolation,
    RankOutOfRange,
    UnboundVariable,
    UnknownFragment,
    UnknownLetter,
)

INTERLEAVED = "interleaved"   # Q1 ordering: position-major bit codes
CONCATENATED = "concatenated"  # Q* ordering: variable-major bit codes

DEFAULT_INSTANCE_CAP = 1 << 24


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Min:
    pass


@dataclass(frozen=True)
class Max:
    pass


@dataclass(frozen=True)
class ConstSym:
    """Constant symbol of a constant signature (not a string letter)."""
    name: str


MIN = Min()
MAX = Max()

Term = Var | Min | Max | ConstSym


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Lt:
    left: Term
    right: Term


@dataclass(frozen=True)
class Letter:
    letter: str
    term: Term


@dataclass(frozen=True)
class InRel:
    rel: str
    args: tuple


@dataclass(frozen=True)
class PlusAtom:
    a: Term
    b: Term
    c: Term


@dataclass(frozen=True)
class TimesAtom:
    a: Term
    b: Term
    c: Term


@dataclass(frozen=True)
class BitAtom:
    """bit(a, j): the weight-2^j bit of a is 1."""
    a: Term
    j: Term


@dataclass(frozen=True)
class HighBit:
    """Bit of val(value) with weight 2^(floor(log2 N) - (val(pos)+1)).

    Reads val(value) as a floor(log2 N)-digit most-significant-first string,
    N the domain size. False when pos walks off that string.
    """
    value: Term
    pos: Term


@dataclass(frozen=True)
class SizeBit:
    """Bit of the domain size N itself at the same msb-relative position."""
    pos: Term


@dataclass(frozen=True)
class LtLog:
    """val(term) < floor(log2 N)."""
    term: Term


@dataclass(frozen=True)
class LtPowLog:
    """val(term) < 2^floor(log2 N)."""
    term: Term


@dataclass(frozen=True)
class SetTimes:
    """Product of set-coded integers: code(X) * code(Y) = code(Z).

    Monadic relation variables are read as most-significant-first bit
    strings over the domain.
    """
    x: str
    y: str
    z: str


@dataclass(frozen=True)
class ShuffleBit:
    """Membership in one component of the code permutation that aligns the
    interleaved and concatenated instance orderings (monadic case).

    direction 'to_interleaved': evaluated against sets listed in interleaved
    position, decodes the concatenated reading, and vice versa for
    'to_concatenated'.
    """
    direction: str  # 'to_interleaved' | 'to_concatenated'
    index: int      # which original variable (0-based)
    width: int      # k, the number of bound variables
    point: Term
    set_vars: tuple


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class ExistsFO:
    var: str
    body: object


@dataclass(frozen=True)
class ForallFO:
    var: str
    body: object


@dataclass(frozen=True)
class ExistsSO:
    """Existential monadic second-order quantifier."""
    var: str
    body: object


@dataclass(frozen=True)
class LindFO:
    """First-order generalized quantifier node over a named language."""
    lang: str
    vars: tuple
    args: tuple

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars) or not self.vars:
            raise InvariantViolation("quantifier variables must be distinct")


@dataclass(frozen=True)
class LindSO:
    """Second-order generalized quantifier node.

    `ordering` selects the instance serialization; `arity` is the common
    arity m of the bound relation variables.
    """
    lang: str
    ordering: str
    arity: int
    vars: tuple
    args: tuple

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars) or not self.vars:
            raise InvariantViolation("quantifier variables must be distinct")
        if self.ordering not in (INTERLEAVED, CONCATENATED):
            raise InvariantViolation(f"unknown ordering {self.ordering!r}")
        if self.arity < 1:
            raise InvariantViolation("relation arity must be positive")


def iff(a, b):
    return And(Or(Not(a), b), Or(Not(b), a))


def implies(a, b):
    return Or(Not(a), b)


# ---------------------------------------------------------------------------
# Structures

@dataclass(frozen=True)
class StringStructure:
    """Word as a first-order structure: one letter predicate per position."""

    alphabet: tuple[str, ...]
    letters: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InvariantViolation("alphabet letters must be distinct")
        for a in self.letters:
            if a not in self.alphabet:
                raise UnknownLetter(f"letter {a!r} not in alphabet {self.alphabet}")

    @property
    def size(self) -> int:
        return len(self.letters)

    @property
    def word(self) -> str:
        return "".join(self.letters)

    def __str__(self):
        return self.word or "<empty>"


def structure_from_string(alphabet, text: str) -> StringStructure:
    return StringStructure(tuple(alphabet), tuple(text))


@dataclass(frozen=True)
class ConstStructure:
    """Structure of a pure constant signature with numeric built-ins."""

    size: int
    constants: tuple  # sorted (name, value) pairs

    def __post_init__(self):
        for name, v in self.constants:
            if not 0 <= v < self.size:
                raise InvariantViolation(f"constant {name} = {v} outside domain")

    @classmethod
    def of(cls, size: int, constants: dict) -> "ConstStructure":
        return cls(size, tuple(sorted(constants.items())))

    def const(self, name: str) -> int:
        for n, v in self.constants:
            if n == name:
                return v
        raise UnboundVariable(f"unknown constant {name!r}")

    def __str__(self):
        body = ",".join(f"{n}={v}" for n, v in self.constants)
        return f"<n={self.size} {body}>"


# ---------------------------------------------------------------------------
# Instance codes

def _tuple_space(n: int, m: int):
    return list(itertools.product(range(n), repeat=m))


def instance_rank(sets, n: int, ordering: str, m: int = 1) -> int:
    """Rank of a k-tuple of m-ary relations under the given ordering.

    Each relation is coded by the bit string over lexicographically ordered
    m-tuples; codes are read most significant bit first.
    """
    k = len(sets)
    tuples = _tuple_space(n, m)
    npos = len(tuples)
    total_bits = npos * k
    rank = 0
    for i, s in enumerate(sets):
        for j, t in enumerate(tuples):
            if t in s:
                if ordering == INTERLEAVED:
                    b = j * k + i
                elif ordering == CONCATENATED:
                    b = i * npos + j
                else:
                    raise InvariantViolation(f"unknown ordering {ordering!r}")
                rank |= 1 << (total_bits - 1 - b)
    return rank


def instance_unrank(rank: int, n: int, k: int, ordering: str, m: int = 1):
    """Inverse of instance_rank; returns a k-tuple of frozensets of tuples."""
    tuples = _tuple_space(n, m)
    npos = len(tuples)
    total_bits = npos * k
    if not 0 <= rank < (1 << total_bits):
        raise RankOutOfRange(f"rank {rank} outside [0, 2^{total_bits})")
    sets = []
    for i in range(k):
        members = []
        for j, t in enumerate(tuples):
            if ordering == INTERLEAVED:
                b = j * k + i
            elif ordering == CONCATENATED:
                b = i * npos + j
            else:
                raise InvariantViolation(f"unknown ordering {ordering!r}")
            if (rank >> (total_bits - 1 - b)) & 1:
                members.append(t)
        sets.append(frozenset(members))
    return tuple(sets)


def set_code_value(s, n: int) -> int:
    """Monadic relation read as an n-digit msb-first binary number."""
    v = 0
    for j in range(n):
        if (j,) in s:
            v |= 1 << (n - 1 - j)
    return v


def set_from_code_value(v: int, n: int) -> frozenset:
    return frozenset((j,) for j in range(n) if (v >> (n - 1 - j)) & 1)


# ---------------------------------------------------------------------------
# Evaluation

class _Ctx:
    __slots__ = ("struct", "registry", "cap", "n")

    def __init__(self, struct, registry, cap):
        self.struct = struct
        self.registry = registry or {}
        self.cap = cap
        self.n = struct.size


def _term_value(ctx, env, t):
    if type(t) is Var:
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(f"unbound variable {t.name!r}") from None
    if type(t) is Min:
        if ctx.n == 0:
            raise EmptyDomain("min over the empty structure")
        return 0
    if type(t) is Max:
        if ctx.n == 0:
            raise EmptyDomain("max over the empty structure")
        return ctx.n - 1
    if type(t) is ConstSym:
        return ctx.struct.const(t.name)
    raise InvariantViolation(f"not a term: {t!r}")


def _resolve(ctx, name: str) -> LanguageSpec:
    from .errors import UnknownLanguage
    try:
        return ctx.registry[name]
    except KeyError:
        raise UnknownLanguage(f"language {name!r} not registered") from None


def _letter_for(ctx, env, node, values, spec):
    """First-match letter rule: argument formulas tried left to right."""
    for idx, arg in enumerate(node.args):
        sub = dict(env)
        sub.update(values)
        if _eval(ctx, sub, arg):
            return spec.alphabet[idx]
    return spec.alphabet[-1]


def _lindfo_word(ctx, env, node):
    spec = _resolve(ctx, node.lang)
    if len(node.args) != spec.size - 1:
        from .errors import ArityMismatch
        raise ArityMismatch(
            f"{node.lang} takes {spec.size - 1} arguments, got {len(node.args)}"
        )
    if ctx.n == 0:
        raise EmptyDomain("generalized quantifier over the empty structure")
    k = len(node.vars)
    letters = []
    for tup in itertools.product(range(ctx.n), repeat=k):
        values = dict(zip(node.vars, tup))
        letters.append(_letter_for(ctx, env, node, values, spec))
    return spec, "".join(letters)


def _lindso_word(ctx, env, node):
    spec = _resolve(ctx, node.lang)
    if len(node.args) != spec.size - 1:
        from .errors import ArityMismatch
        raise ArityMismatch(
            f"{node.lang} takes {spec.size - 1} arguments, got {len(node.args)}"
        )
    if ctx.n == 0:
        raise EmptyDomain("generalized quantifier over the empty structure")
    k = len(node.vars)
    bits = (ctx.n ** node.arity) * k
    if bits > 60 or (1 << bits) > ctx.cap:
        raise InstanceCapExceeded(
            f"2^{bits} instances exceed the cap {ctx.cap}", required=bits
        )
    letters = []
    for rank in range(1 << bits):
        sets = instance_unrank(rank, ctx.n, k, node.ordering, node.arity)
        values = dict(zip(node.vars, sets))
        letters.append(_letter_for(ctx, env, node, values, spec))
    return spec, "".join(letters)


def _floor_log2(n: int) -> int:
    return n.bit_length() - 1


def _eval(ctx, env, f) -> bool:
    ty = type(f)
    if ty is TrueF:
        return True
    if ty is FalseF:
        return False
    if ty is Eq:
        return _term_value(ctx, env, f.left) == _term_value(ctx, env, f.right)
    if ty is Lt:
        return _term_value(ctx, env, f.left) < _term_value(ctx, env, f.right)
    if ty is Letter:
        pos = _term_value(ctx, env, f.term)
        return ctx.struct.letters[pos] == f.letter
    if ty is InRel:
        try:
            s = env[f.rel]
        except KeyError:
            raise UnboundVariable(f"unbound relation variable {f.rel!r}") from None
        return tuple(_term_value(ctx, env, t) for t in f.args) in s
    if ty is PlusAtom:
        return (_term_value(ctx, env, f.a) + _term_value(ctx, env, f.b)
                == _term_value(ctx, env, f.c))
    if ty is TimesAtom:
        return (_term_value(ctx, env, f.a) * _term_value(ctx, env, f.b)
                == _term_value(ctx, env, f.c))
    if ty is BitAtom:
        a = _term_value(ctx, env, f.a)
        j = _term_value(ctx, env, f.j)
        return bool((a >> j) & 1)
    if ty is HighBit:
        m = _floor_log2(ctx.n)
        v = _term_value(ctx, env, f.value)
        p = _term_value(ctx, env, f.pos)
        if p >= m:
            return False
        return bool((v >> (m - 1 - p)) & 1)
    if ty is SizeBit:
        m = _floor_log2(ctx.n)
        p = _term_value(ctx, env, f.pos)
        if p >= m:
            return False
        return bool((ctx.n >> (m - 1 - p)) & 1)
    if ty is LtLog:
        return _term_value(ctx, env, f.term) < _floor_log2(ctx.n)
    if ty is LtPowLog:
        return _term_value(ctx, env, f.term) < (1 << _floor_log2(ctx.n))
    if ty is SetTimes:
        try:
            xv = set_code_value(env[f.x], ctx.n)
            yv = set_code_value(env[f.y], ctx.n)
            zv = set_code_value(env[f.z], ctx.n)
        except KeyError as e:
            raise UnboundVariable(f"unbound relation variable {e.args[0]!r}") from None
        return xv * yv == zv
    if ty is ShuffleBit:
        return _eval_shuffle(ctx, env, f)
    if ty is Not:
        return not _eval(ctx, env, f.body)
    if ty is And:
        return _eval(ctx, env, f.left) and _eval(ctx, env, f.right)
    if ty is Or:
        return _eval(ctx, env, f.left) or _eval(ctx, env, f.right)
    if ty is ExistsFO or ty is ForallFO:
        if ctx.n == 0:
            raise EmptyDomain("quantifier over the empty structure")
        want = ty is ExistsFO
        for v in range(ctx.n):
            env2 = dict(env)
            env2[f.var] = v
            if _eval(ctx, env2, f.body) == want:
                return want
        return not want
    if ty is ExistsSO:
        if ctx.n == 0:
            raise EmptyDomain("quantifier over the empty structure")
        for mask in range(1 << ctx.n):
            env2 = dict(env)
            env2[f.var] = frozenset((j,) for j in range(ctx.n) if (mask >> j) & 1)
            if _eval(ctx, env2, f.body):
                return True
        return False
    if ty is LindFO:
        spec, word = _lindfo_word(ctx, env, f)
        return language_member(spec, word)
    if ty is LindSO:
        spec, word = _lindso_word(ctx, env, f)
        return language_member(spec, word)
    raise InvariantViolation(f"not a formula: {f!r}")


def _eval_shuffle(ctx, env, f: ShuffleBit) -> bool:
    n = ctx.n
    k = f.width
    x = _term_value(ctx, env, f.point)
    sets = []
    for v in f.set_vars:
        try:
            sets.append(env[v])
        except KeyError:
            raise UnboundVariable(f"unbound relation variable {v!r}") from None
    if n == 1:
        return (x,) in sets[f.index]
    if f.direction == "to_interleaved":
        # sets follow the interleaved enumeration; recover the concatenated
        # reading of flat bit position index*n + x
        p = f.index * n + x
        return (p // k,) in sets[p % k]
    if f.direction == "to_concatenated":
        p = x * k + f.index
        return (p % n,) in sets[p // n]
    raise InvariantViolation(f"unknown shuffle direction {f.direction!r}")


def evaluate(struct, formula, assignment=None, *, registry=None,
             instance_cap=DEFAULT_INSTANCE_CAP) -> bool:
    """Tarskian truth of `formula` in `struct` under `assignment`."""
    ctx = _Ctx(struct, registry, instance_cap)
    return _eval(ctx, dict(assignment or {}), formula)


def induced_word(struct, assignment, node, *, registry=None,
                 instance_cap=DEFAULT_INSTANCE_CAP) -> str:
    """The exact word a generalized quantifier node tests for membership."""
    ctx = _Ctx(struct, registry, instance_cap)
    env = dict(assignment or {})
    if isinstance(node, LindFO):
        _, word = _lindfo_word(ctx, env, node)
    elif isinstance(node, LindSO):
        _, word = _lindso_word(ctx, env, node)
    else:
        raise InvariantViolation("induced_word needs a generalized quantifier node")
    return word


def define_language(sentence, alphabet, max_n: int, *, registry=None,
                    instance_cap=DEFAULT_INSTANCE_CAP):
    """All nonempty strings of length <= max_n satisfying the sentence."""
    out = []
    for length in range(1, max_n + 1):
        for w in itertools.product(alphabet, repeat=length):
            struct = StringStructure(tuple(alphabet), w)
            if evaluate(struct, sentence, registry=registry,
                        instance_cap=instance_cap):
                out.append("".join(w))
    return out


# ---------------------------------------------------------------------------
# Variable bookkeeping

def free_variables(f):
    """(free first-order names, free second-order names)."""
    fo: set = set()
    so: set = set()
    _free(f, fo, so, set(), set())
    return fo, so


def _term_free(t, fo, bound_fo):
    if type(t) is Var and t.name not in bound_fo:
        fo.add(t.name)


def _free(f, fo, so, bound_fo, bound_so):
    ty = type(f)
    if ty in (TrueF, FalseF):
        return
    if ty in (Eq, Lt):
        _term_free(f.left, fo, bound_fo)
        _term_free(f.right, fo, bound_fo)
    elif ty is Letter:
        _term_free(f.term, fo, bound_fo)
    elif ty is InRel:
        if f.rel not in bound_so:
            so.add(f.rel)
        for t in f.args:
            _term_free(t, fo, bound_fo)
    elif ty in (PlusAtom, TimesAtom):
        for t in (f.a, f.b, f.c):
            _term_free(t, fo, bound_fo)
    elif ty is BitAtom:
        _term_free(f.a, fo, bound_fo)
        _term_free(f.j, fo, bound_fo)
    elif ty is HighBit:
        _term_free(f.value, fo, bound_fo)
        _term_free(f.pos, fo, bound_fo)
    elif ty in (SizeBit,):
        _term_free(f.pos, fo, bound_fo)
    elif ty in (LtLog, LtPowLog):
        _term_free(f.term, fo, bound_fo)
    elif ty is SetTimes:
        for name in (f.x, f.y, f.z):
            if name not in bound_so:
                so.add(name)
    elif ty is ShuffleBit:
        _term_free(f.point, fo, bound_fo)
        for name in f.set_vars:
            if name not in bound_so:
                so.add(name)
    elif ty is Not:
        _free(f.body, fo, so, bound_fo, bound_so)
    elif ty in (And, Or):
        _free(f.left, fo, so, bound_fo, bound_so)
        _free(f.right, fo, so, bound_fo, bound_so)
    elif ty in (ExistsFO, ForallFO):
        _free(f.body, fo, so, bound_fo | {f.var}, bound_so)
    elif ty is ExistsSO:
        _free(f.body, fo, so, bound_fo, bound_so | {f.var})
    elif ty is LindFO:
        inner = bound_fo | set(f.vars)
        for a in f.args:
            _free(a, fo, so, inner, bound_so)
    elif ty is LindSO:
        inner = bound_so | set(f.vars)
        for a in f.args:
            _free(a, fo, so, bound_fo, inner)
    else:
        raise InvariantViolation(f"not a formula: {f!r}")


def eliminate_min_max(f, counter=None):
    """Replace min/max terms by quantified variables pinned by order atoms.

    Used by translations whose target domain moves the endpoints.
    """
    if counter is None:
        counter = itertools.count()

    def fresh(which):
        return f"_{which}{next(counter)}"

    def has_endpoint(node):
        found = [False]

        def walk_terms(t):
            if type(t) in (Min, Max):
                found[0] = True

        _walk(node, walk_terms)
        return found[0]

    def rewrite(node):
        ty = type(node)
        if ty in (Eq, Lt, Letter, PlusAtom, TimesAtom, BitAtom, HighBit,
                  SizeBit, LtLog, LtPowLog, InRel, ShuffleBit):
            terms = _atom_terms(node)
            if not any(type(t) in (Min, Max) for t in terms):
                return node
            out = node
            wrappers = []
            for t in terms:
                if type(t) is Min:
                    v = fresh("min")
                    out = _subst_term(out, t, Var(v))
                    wrappers.append((v, ForallFO, Lt))
                elif type(t) is Max:
                    v = fresh("max")
                    out = _subst_term(out, t, Var(v))
                    wrappers.append((v, "max"))
            for w in reversed(wrappers):
                v = w[0]
                if w[1] == "max":
                    pin = Not(ExistsFO(v + "u", Lt(Var(v), Var(v + "u"))))
                else:
                    pin = Not(ExistsFO(v + "u", Lt(Var(v + "u"), Var(v))))
                out = ExistsFO(v, And(pin, out))
            return out
        if ty in (TrueF, FalseF, SetTimes):
            return node
        if ty is Not:
            return Not(rewrite(node.body))
        if ty is And:
            return And(rewrite(node.left), rewrite(node.right))
        if ty is Or:
            return Or(rewrite(node.left), rewrite(node.right))
        if ty in (ExistsFO, ForallFO):
            return ty(node.var, rewrite(node.body))
        if ty is ExistsSO:
            return ExistsSO(node.var, rewrite(node.body))
        if ty is LindFO:
            return LindFO(node.lang, node.vars, tuple(rewrite(a) for a in node.args))
        if ty is LindSO:
            return LindSO(node.lang, node.ordering, node.arity, node.vars,
                          tuple(rewrite(a) for a in node.args))
        raise InvariantViolation(f"not a formula: {node!r}")

    return rewrite(f)


def _atom_terms(node):
    ty = type(node)
    if ty in (Eq, Lt):
        return [node.left, node.right]
    if ty is Letter:
        return [node.term]
    if ty in (PlusAtom, TimesAtom):
        return [node.a, node.b, node.c]
    if ty is BitAtom:
        return [node.a, node.j]
    if ty is HighBit:
        return [node.value, node.pos]
    if ty is SizeBit:
        return [node.pos]
    if ty in (LtLog, LtPowLog):
        return [node.term]
    if ty is InRel:
        return list(node.args)
    if ty is ShuffleBit:
        return [node.point]
    return []


def _subst_term(node, old, new):
    def sub(t):
        return new if t == old else t

    ty = type(node)
    if ty in (Eq, Lt):
        return ty(sub(node.left), sub(node.right))
    if ty is Letter:
        return Letter(node.letter, sub(node.term))
    if ty in (PlusAtom, TimesAtom):
        return ty(sub(node.a), sub(node.b), sub(node.c))
    if ty is BitAtom:
        return BitAtom(sub(node.a), sub(node.j))
    if ty is HighBit:
        return HighBit(sub(node.value), sub(node.pos))
    if ty is SizeBit:
        return SizeBit(sub(node.pos))
    if ty in (LtLog, LtPowLog):
        return ty(sub(node.term))
    if ty is InRel:
        return InRel(node.rel, tuple(sub(t) for t in node.args))
    if ty is ShuffleBit:
        return ShuffleBit(node.direction, node.index, node.width,
                          sub(node.point), node.set_vars)
    return node


def _walk(node, on_term):
    ty = type(node)
    for t in _atom_terms(node):
        on_term(t)
    if ty is Not:
        _walk(node.body, on_term)
    elif ty in (And, Or):
        _walk(node.left, on_term)
        _walk(node.right, on_term)
    elif ty in (ExistsFO, ForallFO, ExistsSO):
        _walk(node.body, on_term)
    elif ty in (LindFO, LindSO):
        for a in node.args:
            _walk(a, on_term)


def walk_formulas(node):
    """Yield every subformula, root first."""
    yield node
    ty = type(node)
    if ty is Not:
        yield from walk_formulas(node.body)
    elif ty in (And, Or):
        yield from walk_formulas(node.left)
        yield from walk_formulas(node.right)
    elif ty in (ExistsFO, ForallFO, ExistsSO):
        yield from walk_formulas(node.body)
    elif ty in (LindFO, LindSO):
        for a in node.args:
            yield from walk_formulas(a)


# ---------------------------------------------------------------------------
# Fragments

ARITH_ATOMS = (PlusAtom, TimesAtom, BitAtom, HighBit, SizeBit, LtLog,
               LtPowLog, SetTimes, ShuffleBit)

FRAGMENTS = (
    "FO", "FO+arith", "qfree-no-arith", "Q-qfree-no-arith",
    "QL-FO", "QL-FO+arith", "FO(QL)", "FO(QL)+arith",
    "Q1-FO", "Q1-FO+arith", "Qstar-FO", "Qstar-FO+arith",
    "SOM", "SOM(Q1)", "SOM(Qstar)", "SOM(Qstar)+arith",
)

_ALIASES = {
    "FO(+,x)": "FO+arith",
    "Q_L-FO": "QL-FO",
    "FO(Q_L)": "FO(QL)",
}


def fragment_check(formula, fragment: str):
    """Shape test for the named fragment; returns (ok, diagnostic)."""
    fragment = _ALIASES.get(fragment, fragment)
    if fragment not in FRAGMENTS:
        raise UnknownFragment(f"unknown fragment {fragment!r}")
    arith = fragment.endswith("+arith")
    base = fragment[:-6] if arith else fragment

    def no_arith(node):
        for sub in walk_formulas(node):
            if isinstance(sub, ARITH_ATOMS):
                return f"arithmetic atom {type(sub).__name__} present"
        return None

    def no_so(node):
        for sub in walk_formulas(node):
            if isinstance(sub, (ExistsSO, LindSO)):
                return f"second-order construct {type(sub).__name__} present"
            if isinstance(sub, InRel):
                return f"relation atom on {sub.rel!r} present"
            if isinstance(sub, SetTimes):
                return "set-arithmetic atom present"
        return None

    def no_lind(node):
        for sub in walk_formulas(node):
            if isinstance(sub, (LindFO, LindSO)):
                return f"generalized quantifier {type(sub).__name__} present"
        return None

    def no_quant(node):
        for sub in walk_formulas(node):
            if isinstance(sub, (ExistsFO, ForallFO, ExistsSO, LindFO, LindSO)):
                return f"quantifier {type(sub).__name__} present"
        return None

    def fo_args_ok(node, allow_inrel_of):
        # FO body: no SO quantifiers, no LindSO; InRel only on listed names
        for sub in walk_formulas(node):
            if isinstance(sub, (ExistsSO, LindSO)):
                return f"nested second-order {type(sub).__name__}"
            if isinstance(sub, InRel) and sub.rel not in allow_inrel_of:
                return f"relation atom on foreign variable {sub.rel!r}"
        return None

    bad = None
    if base == "FO":
        bad = no_so(formula) or no_lind(formula) or (None if arith else no_arith(formula))
    elif base == "qfree-no-arith":
        bad = no_quant(formula) or no_so(formula) or no_arith(formula)
    elif base == "Q-qfree-no-arith":
        if not isinstance(formula, LindFO):
            bad = "outermost node is not a first-order generalized quantifier"
        else:
            for a in formula.args:
                bad = no_quant(a) or no_so(a) or no_arith(a)
                if bad:
                    break
    elif base == "QL-FO":
        if not isinstance(formula, LindFO):
            bad = "outermost node is not a first-order generalized quantifier"
        else:
            for a in formula.args:
                bad = no_so(a) or no_lind(a) or (None if arith else no_arith(a))
                if bad:
                    break
    elif base == "FO(QL)":
        bad = no_so(formula) or (None if arith else no_arith(formula))
    elif base in ("Q1-FO", "Qstar-FO"):
        want = INTERLEAVED if base == "Q1-FO" else CONCATENATED
        if not isinstance(formula, LindSO):
            bad = "outermost node is not a second-order generalized quantifier"
        elif formula.ordering != want:
            bad = f"outer quantifier uses the {formula.ordering} ordering"
        else:
            for a in formula.args:
                bad = fo_args_ok(a, set(formula.vars)) or (
                    None if arith else no_arith(a))
                if bad:
                    break
    elif base == "SOM":
        bad = no_lind(formula) or no_arith(formula)
        if bad is None:
            for sub in walk_formulas(formula):
                if isinstance(sub, InRel) and len(sub.args) != 1:
                    bad = f"non-monadic relation atom on {sub.rel!r}"
                    break
    elif base in ("SOM(Q1)", "SOM(Qstar)"):
        want = INTERLEAVED if base == "SOM(Q1)" else CONCATENATED
        for sub in walk_formulas(formula):
            if isinstance(sub, LindFO):
                bad = "first-order generalized quantifier present"
                break
            if isinstance(sub, LindSO):
                if sub.ordering != want:
                    bad = f"quantifier with the {sub.ordering} ordering present"
                    break
                if sub.arity != 1:
                    bad = "non-monadic second-order quantifier present"
                    break
            if isinstance(sub, InRel) and len(sub.args) != 1:
                bad = f"non-monadic relation atom on {sub.rel!r}"
                break
        if bad is None and not arith:
            bad = no_arith(formula)
    if bad is None:
        return True, "ok"
    return False, bad
