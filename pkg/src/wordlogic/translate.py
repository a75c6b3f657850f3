"""Constructive formula translations, each with a semantic-equivalence check.

Every operation here rewrites formulas between fragments or signatures and
comes with an explicit structure mapper where the universe changes. The
`check_equivalence` validator exhaustively tests the contract on a finite
range of structures and assignments and packages the outcome in a
TranslationReport.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .algebra import LanguageSpec, is_neutral_letter_bounded, language_member
from .errors import (
    FragmentViolation,
    InvariantViolation,
    NestedUnsupported,
    NoNeutralLetter,
    NonConstantSignature,
    NonMonadicNode,
    ExponentCapExceeded,
    UnknownLanguage,
)
from .logic import (
    CONCATENATED,
    DEFAULT_INSTANCE_CAP,
    INTERLEAVED,
    And,
    BitAtom,
    ConstStructure,
    ConstSym,
    Eq,
    ExistsFO,
    ExistsSO,
    FalseF,
    ForallFO,
    HighBit,
    InRel,
    Letter,
    LindFO,
    LindSO,
    Lt,
    LtLog,
    LtPowLog,
    Max,
    Min,
    Not,
    Or,
    PlusAtom,
    SetTimes,
    ShuffleBit,
    SizeBit,
    StringStructure,
    TimesAtom,
    TrueF,
    Var,
    eliminate_min_max,
    evaluate,
    fragment_check,
    free_variables,
    iff,
    implies,
    walk_formulas,
)

ARITH_LIKE = (PlusAtom, TimesAtom, BitAtom, HighBit, SizeBit, LtLog,
              LtPowLog, SetTimes, ShuffleBit)


# ---------------------------------------------------------------------------
# Shared helpers

def _all_names(f, acc=None):
    """Every variable-ish name occurring anywhere in the formula."""
    if acc is None:
        acc = set()
    ty = type(f)
    for sub in walk_formulas(f):
        sty = type(sub)
        if sty in (ExistsFO, ForallFO, ExistsSO):
            acc.add(sub.var)
        elif sty in (LindFO, LindSO):
            acc.update(sub.vars)
        elif sty is InRel:
            acc.add(sub.rel)
        elif sty is SetTimes:
            acc.update((sub.x, sub.y, sub.z))
        elif sty is ShuffleBit:
            acc.update(sub.set_vars)
        from .logic import _atom_terms
        for t in _atom_terms(sub):
            if type(t) is Var:
                acc.add(t.name)
    return acc


class _Gensym:
    def __init__(self, used):
        self.used = set(used)
        self.n = 0

    def __call__(self, base):
        while True:
            name = f"_{base}{self.n}"
            self.n += 1
            if name not in self.used:
                self.used.add(name)
                return name


def _map_formula(f, fn):
    """Rebuild bottom-up, applying fn to every formula node."""
    ty = type(f)
    if ty is Not:
        out = Not(_map_formula(f.body, fn))
    elif ty is And:
        out = And(_map_formula(f.left, fn), _map_formula(f.right, fn))
    elif ty is Or:
        out = Or(_map_formula(f.left, fn), _map_formula(f.right, fn))
    elif ty in (ExistsFO, ForallFO):
        out = ty(f.var, _map_formula(f.body, fn))
    elif ty is ExistsSO:
        out = ExistsSO(f.var, _map_formula(f.body, fn))
    elif ty is LindFO:
        out = LindFO(f.lang, f.vars, tuple(_map_formula(a, fn) for a in f.args))
    elif ty is LindSO:
        out = LindSO(f.lang, f.ordering, f.arity, f.vars,
                     tuple(_map_formula(a, fn) for a in f.args))
    else:
        out = f
    return fn(out)


def _resolve(registry, name):
    try:
        return registry[name]
    except (KeyError, TypeError):
        raise UnknownLanguage(f"language {name!r} not registered") from None


def _require_neutral_last(spec: LanguageSpec):
    if spec.declared_neutral is None:
        raise NoNeutralLetter(f"{spec.name} has no declared neutral letter")
    if spec.declared_neutral != spec.alphabet[-1]:
        raise NoNeutralLetter(
            f"{spec.name}: neutral letter {spec.declared_neutral!r} must be "
            f"the last alphabet letter")


# ---------------------------------------------------------------------------
# Ordering swap (interleaved <-> concatenated, monadic)

_INVERSE_DIR = {"to_interleaved": "to_concatenated",
                "to_concatenated": "to_interleaved"}


def _swap_refs(g, bound, direction, k, var_tuple):
    """Replace references to the bound monadic variables by the code
    permutation atom; an already-permuted reference in the opposite
    direction collapses back to a plain membership atom."""
    ty = type(g)
    if ty is InRel and g.rel in bound:
        if len(g.args) != 1:
            raise NonMonadicNode(
                f"relation {g.rel!r} used with arity {len(g.args)}")
        return ShuffleBit(direction, var_tuple.index(g.rel), k, g.args[0],
                          var_tuple)
    if ty is ShuffleBit and bound & set(g.set_vars):
        if (g.set_vars == var_tuple and g.width == k
                and g.direction == _INVERSE_DIR[direction]):
            return InRel(var_tuple[g.index], (g.point,))
        raise NestedUnsupported(
            "bound variables feed an incompatible permutation atom")
    if ty is SetTimes and bound & {g.x, g.y, g.z}:
        raise NestedUnsupported(
            "bound variables feed a set-arithmetic atom")
    if ty is Not:
        return Not(_swap_refs(g.body, bound, direction, k, var_tuple))
    if ty in (And, Or):
        return ty(_swap_refs(g.left, bound, direction, k, var_tuple),
                  _swap_refs(g.right, bound, direction, k, var_tuple))
    if ty in (ExistsFO, ForallFO):
        return ty(g.var, _swap_refs(g.body, bound, direction, k, var_tuple))
    if ty is ExistsSO:
        inner = bound - {g.var}
        if not inner:
            return g
        return ExistsSO(g.var, _swap_refs(g.body, inner, direction, k,
                                          var_tuple))
    if ty in (LindFO, LindSO):
        inner = bound - set(g.vars) if ty is LindSO else bound
        if not inner:
            return g
        cls_args = tuple(_swap_refs(a, inner, direction, k, var_tuple)
                         for a in g.args)
        if ty is LindFO:
            return LindFO(g.lang, g.vars, cls_args)
        return LindSO(g.lang, g.ordering, g.arity, g.vars, cls_args)
    return g


def _swap_node(node: LindSO, target_ordering):
    if node.arity != 1:
        raise NonMonadicNode(
            "ordering swap is defined for monadic quantifiers only")
    k = len(node.vars)
    direction = ("to_interleaved" if target_ordering == INTERLEAVED
                 else "to_concatenated")
    bound = set(node.vars)
    args = tuple(_swap_refs(a, bound, direction, k, node.vars)
                 for a in node.args)
    return LindSO(node.lang, target_ordering, node.arity, node.vars, args)


def q_star_to_q1(formula):
    """Rewrite every concatenated-ordering quantifier node to interleaved."""
    def fn(g):
        if isinstance(g, LindSO) and g.ordering == CONCATENATED:
            return _swap_node(g, INTERLEAVED)
        return g
    return _map_formula(formula, fn)


def q1_to_q_star(formula):
    """Rewrite every interleaved-ordering quantifier node to concatenated."""
    def fn(g):
        if isinstance(g, LindSO) and g.ordering == INTERLEAVED:
            return _swap_node(g, CONCATENATED)
        return g
    return _map_formula(formula, fn)


# ---------------------------------------------------------------------------
# Arity collapse

def _subst_rel_refs(g, bound, replace):
    """Replace InRel atoms on bound names via replace(name, args)."""
    ty = type(g)
    if ty is InRel and g.rel in bound:
        return replace(g.rel, g.args)
    if ty is ShuffleBit and bound & set(g.set_vars):
        raise NestedUnsupported("bound variables feed a permutation atom")
    if ty is SetTimes and bound & {g.x, g.y, g.z}:
        raise NestedUnsupported("bound variables feed a set-arithmetic atom")
    if ty is Not:
        return Not(_subst_rel_refs(g.body, bound, replace))
    if ty in (And, Or):
        return ty(_subst_rel_refs(g.left, bound, replace),
                  _subst_rel_refs(g.right, bound, replace))
    if ty in (ExistsFO, ForallFO):
        return ty(g.var, _subst_rel_refs(g.body, bound, replace))
    if ty is ExistsSO:
        inner = bound - {g.var}
        return ExistsSO(g.var, _subst_rel_refs(g.body, inner, replace)) \
            if inner else g
    if ty in (LindFO, LindSO):
        inner = bound - set(g.vars) if ty is LindSO else bound
        if not inner:
            return g
        args = tuple(_subst_rel_refs(a, inner, replace) for a in g.args)
        if ty is LindFO:
            return LindFO(g.lang, g.vars, args)
        return LindSO(g.lang, g.ordering, g.arity, g.vars, args)
    return g


def arity_collapse(formula, registry, *, neutral_check_len=8):
    """Collapse a single outer concatenated quantifier binding k m-ary
    variables into one binding a single higher-arity variable.

    Index tags become binary prefixes over the elements 0 and 1; ill-formed
    code relations make every argument false, so the language's neutral
    letter (required to be last) absorbs them. Valid on domains of size 2
    and up.
    """
    if not (isinstance(formula, LindSO) and formula.ordering == CONCATENATED):
        raise FragmentViolation(
            "expected a single outer concatenated-ordering quantifier node")
    spec = _resolve(registry, formula.lang)
    _require_neutral_last(spec)
    if not is_neutral_letter_bounded(spec, spec.declared_neutral,
                                     neutral_check_len):
        raise NoNeutralLetter(
            f"{spec.name}: letter {spec.declared_neutral!r} fails the "
            f"bounded neutrality check")
    k = len(formula.vars)
    m = formula.arity
    tag_bits = max(1, math.ceil(math.log2(k))) if k > 1 else 1
    gensym = _Gensym(_all_names(formula))
    rel = gensym("R")
    z0, z1 = gensym("z"), gensym("z")

    def tag_terms(i):
        return tuple(Var(z1) if (i >> (tag_bits - 1 - b)) & 1 else Var(z0)
                     for b in range(tag_bits))

    u = gensym("u")
    is_zero = Not(ExistsFO(u, Lt(Var(u), Var(z0))))
    is_one = And(Lt(Var(z0), Var(z1)),
                 Not(ExistsFO(u, And(Lt(Var(z0), Var(u)),
                                     Lt(Var(u), Var(z1))))))
    wvars = tuple(gensym("w") for _ in range(tag_bits + m))
    tag_match = None
    for i in range(k):
        clause = None
        for b, t in enumerate(tag_terms(i)):
            eq = Eq(Var(wvars[b]), t)
            clause = eq if clause is None else And(clause, eq)
        tag_match = clause if tag_match is None else Or(tag_match, clause)
    well_formed = implies(InRel(rel, tuple(Var(w) for w in wvars)), tag_match)
    for w in reversed(wvars):
        well_formed = ForallFO(w, well_formed)

    def replace(name, args):
        if len(args) != m:
            raise InvariantViolation(
                f"relation {name!r} used with arity {len(args)}, expected {m}")
        return InRel(rel, tag_terms(formula.vars.index(name)) + tuple(args))

    new_args = []
    for a in formula.args:
        body = And(well_formed, _subst_rel_refs(a, set(formula.vars), replace))
        wrapped = ExistsFO(z0, And(is_zero, ExistsFO(z1, And(is_one, body))))
        new_args.append(wrapped)
    return LindSO(formula.lang, CONCATENATED, m + tag_bits, (rel,),
                  tuple(new_args))


# ---------------------------------------------------------------------------
# Padding translation

@dataclass(frozen=True)
class PaddedSignature:
    base_alphabet: tuple[str, ...]
    pad_letter: str
    k: int

    def __post_init__(self):
        if self.pad_letter in self.base_alphabet:
            raise InvariantViolation("pad letter must be outside the base alphabet")

    @property
    def alphabet(self):
        return self.base_alphabet + (self.pad_letter,)


def pad_string(w: str, k: int, pad: str) -> str:
    return w + pad * (len(w) ** k - len(w))


def _size_chain(gensym, mp, k, tail):
    """Exists-chain pinning c_j = (mp+1)^j - 1 for j = 1..k; tail sees c_k."""
    c = mp
    out = tail
    holes = []
    for _ in range(k - 1):
        t, r, cn = gensym("t"), gensym("r"), gensym("c")
        holes.append((c, t, r, cn))
        c = cn
    out = tail(c)
    for prev, t, r, cn in reversed(holes):
        step = And(TimesAtom(Var(prev), Var(mp), Var(t)),
                   And(PlusAtom(Var(t), Var(prev), Var(r)),
                       PlusAtom(Var(r), Var(mp), Var(cn))))
        out = ExistsFO(t, ExistsFO(r, ExistsFO(cn, And(step, out))))
    return out


def pad_translate(formula, alphabet, pad_letter="#"):
    """Turn a sentence with one outer concatenated quantifier over k-ary
    relations into one over unary relations on the padded universe.

    Returns (translated sentence, shape sentence chi, structure mapper);
    the translated sentence already conjoins chi.
    """
    ok, why = fragment_check(formula, "Qstar-FO")
    if not ok:
        raise FragmentViolation(why)
    sig = PaddedSignature(tuple(alphabet), pad_letter, formula.arity)
    k = formula.arity
    src = eliminate_min_max(formula)
    gensym = _Gensym(_all_names(src))
    mp = gensym("mp")

    def last_nonpad(v):
        u = gensym("u")
        return And(Not(Letter(pad_letter, Var(v))),
                   Not(ExistsFO(u, And(Lt(Var(v), Var(u)),
                                       Not(Letter(pad_letter, Var(u)))))))

    def le_mp(x):
        return Or(Lt(Var(x), Var(mp)), Eq(Var(x), Var(mp)))

    bound_vars = set(src.vars)

    def rw(g):
        ty = type(g)
        if ty is InRel and g.rel in bound_vars:
            if k == 1:
                return InRel(g.rel, g.args)
            acc = g.args[0]
            binders = []
            for t in g.args[1:]:
                q, r, s = gensym("q"), gensym("r"), gensym("s")
                step = And(TimesAtom(acc, Var(mp), Var(q)),
                           And(PlusAtom(Var(q), acc, Var(r)),
                               PlusAtom(Var(r), t, Var(s))))
                binders.append((q, r, s, step))
                acc = Var(s)
            out = InRel(g.rel, (acc,))
            for q, r, s, step in reversed(binders):
                out = ExistsFO(q, ExistsFO(r, ExistsFO(s, And(step, out))))
            return out
        if ty is Not:
            return Not(rw(g.body))
        if ty in (And, Or):
            return ty(rw(g.left), rw(g.right))
        if ty is ExistsFO:
            return ExistsFO(g.var, And(le_mp(g.var), rw(g.body)))
        if ty is ForallFO:
            return ForallFO(g.var, implies(le_mp(g.var), rw(g.body)))
        return g

    new_node = LindSO(src.lang, CONCATENATED, 1, src.vars,
                      tuple(rw(a) for a in src.args))
    phi_star = ExistsFO(mp, And(last_nonpad(mp), new_node))

    # chi: pads form a suffix and the length is (last nonpad + 1)^k
    up, vp = gensym("u"), gensym("v")
    suffix = ForallFO(up, ForallFO(vp, implies(
        And(Letter(pad_letter, Var(up)), Lt(Var(up), Var(vp))),
        Letter(pad_letter, Var(vp)))))
    mp2 = gensym("mp")

    def is_max(cvar):
        uu = gensym("u")
        return Not(ExistsFO(uu, Lt(Var(cvar), Var(uu))))

    size = ExistsFO(mp2, And(last_nonpad(mp2),
                             _size_chain(gensym, mp2, k, is_max)))
    chi = And(suffix, size)

    def mapper(st: StringStructure) -> StringStructure:
        return StringStructure(sig.alphabet,
                               tuple(pad_string(st.word, k, pad_letter)))

    return And(phi_star, chi), chi, mapper


# ---------------------------------------------------------------------------
# Tally languages

def tally_member(spec: LanguageSpec, n: int) -> bool:
    """1^n lies in the tally language of spec: the binary expansion of n
    is 1w for some nonempty w in the language."""
    if n < 2:
        return False
    return language_member(spec, format(n, "b")[1:])


def tally_of(spec: LanguageSpec):
    desc = (f"unary strings 1^n whose size has binary expansion 1w "
            f"with w in {spec.name}")
    return desc, lambda n: tally_member(spec, n)


# ---------------------------------------------------------------------------
# Tally translations (binary strings <-> unary strings with arithmetic)

def tally_translate_fwd(formula, registry):
    """Monadic second-order sentence over binary strings to a first-order
    arithmetic sentence over unary strings: the word becomes the low bits
    of the domain size, sets become integers read bitwise."""
    ok, why = fragment_check(formula, "SOM(Qstar)")
    if not ok:
        raise FragmentViolation(why)
    for sub in walk_formulas(formula):
        if isinstance(sub, LindSO):
            _require_neutral_last(_resolve(registry, sub.lang))
        if isinstance(sub, Letter) and sub.letter not in ("1", "0"):
            raise FragmentViolation(
                f"letter {sub.letter!r} outside the binary alphabet")
    src = eliminate_min_max(formula)

    def rw(g):
        ty = type(g)
        if ty is Letter:
            atom = SizeBit(g.term)
            return atom if g.letter == "1" else Not(atom)
        if ty is InRel:
            return HighBit(Var(g.rel), g.args[0])
        if ty is Not:
            return Not(rw(g.body))
        if ty in (And, Or):
            return ty(rw(g.left), rw(g.right))
        if ty is ExistsFO:
            return ExistsFO(g.var, And(LtLog(Var(g.var)), rw(g.body)))
        if ty is ForallFO:
            return ForallFO(g.var, implies(LtLog(Var(g.var)), rw(g.body)))
        if ty is ExistsSO:
            return ExistsFO(g.var, And(LtPowLog(Var(g.var)), rw(g.body)))
        if ty is LindSO:
            chi = None
            for v in g.vars:
                guard = LtPowLog(Var(v))
                chi = guard if chi is None else And(chi, guard)
            return LindFO(g.lang, g.vars,
                          tuple(And(chi, rw(a)) for a in g.args))
        return g

    def mapper(st: StringStructure) -> StringStructure:
        n = int("1" + st.word, 2)
        return StringStructure(("1",), ("1",) * n)

    return rw(src), mapper


def tally_translate_bwd(formula, registry):
    """First-order arithmetic sentence over unary strings to a monadic
    second-order sentence over the binary expansion of the size."""
    ok, why = fragment_check(formula, "FO(QL)+arith")
    if not ok:
        raise FragmentViolation(why)
    for sub in walk_formulas(formula):
        if isinstance(sub, (BitAtom, HighBit, SizeBit, LtLog, LtPowLog,
                            SetTimes, ShuffleBit)):
            raise FragmentViolation(
                f"atom {type(sub).__name__} has no counterpart here")
        if isinstance(sub, LindFO):
            _require_neutral_last(_resolve(registry, sub.lang))
        if isinstance(sub, Letter) and sub.letter != "1":
            raise FragmentViolation(
                f"letter {sub.letter!r} outside the unary alphabet")
    src = eliminate_min_max(formula)
    gensym = _Gensym(_all_names(src))

    def vname(t):
        if type(t) is not Var:
            raise FragmentViolation(f"unsupported term {t!r}")
        return t.name

    def mem(name):
        return lambda z: InRel(name, (Var(z),))

    def ones():
        return lambda z: Letter("1", Var(z))

    def set_eq(ma, mb):
        z = gensym("z")
        return ForallFO(z, iff(ma(z), mb(z)))

    def set_lt(ma, mb):
        z, u = gensym("z"), gensym("u")
        return ExistsFO(z, And(Not(ma(z)), And(mb(z), ForallFO(
            u, implies(Lt(Var(u), Var(z)), iff(ma(u), mb(u)))))))

    def delta(name):
        # the code of a bound set must stay below the structure's size,
        # whose code is exactly the set of 1-positions
        return set_lt(mem(name), ones())

    def xor(a, b):
        return Not(iff(a, b))

    def set_plus(xn, yn, zn):
        p, q, r = gensym("p"), gensym("q"), gensym("r")
        x, y, z = mem(xn), mem(yn), mem(zn)

        def carry_into(pos_strict):
            inner = ForallFO(r, implies(
                And(pos_strict(Var(r)), Lt(Var(r), Var(q))),
                Or(x(r), y(r))))
            return ExistsFO(q, And(pos_strict(Var(q)),
                                   And(x(q), And(y(q), inner))))

        bit_ok = ForallFO(p, iff(z(p), xor(xor(x(p), y(p)),
                                           carry_into(lambda t: Lt(Var(p), t)))))
        no_overflow = Not(carry_into(lambda t: TrueF()))
        return And(bit_ok, no_overflow)

    def rw(g):
        ty = type(g)
        if ty is Eq:
            return set_eq(mem(vname(g.left)), mem(vname(g.right)))
        if ty is Lt:
            return set_lt(mem(vname(g.left)), mem(vname(g.right)))
        if ty is Letter:
            return TrueF()
        if ty is PlusAtom:
            return set_plus(vname(g.a), vname(g.b), vname(g.c))
        if ty is TimesAtom:
            return SetTimes(vname(g.a), vname(g.b), vname(g.c))
        if ty is Not:
            return Not(rw(g.body))
        if ty in (And, Or):
            return ty(rw(g.left), rw(g.right))
        if ty is ExistsFO:
            return ExistsSO(g.var, And(delta(g.var), rw(g.body)))
        if ty is ForallFO:
            return Not(ExistsSO(g.var, And(delta(g.var), Not(rw(g.body)))))
        if ty is LindFO:
            chi = None
            for v in g.vars:
                guard = delta(v)
                chi = guard if chi is None else And(chi, guard)
            return LindSO(g.lang, CONCATENATED, 1, g.vars,
                          tuple(And(chi, rw(a)) for a in g.args))
        return g

    def mapper(st: StringStructure) -> StringStructure:
        return StringStructure(("1", "0"), tuple(format(st.size, "b")))

    return rw(src), mapper


# ---------------------------------------------------------------------------
# Constant signatures as strings

def subset_letter(mask: int) -> str:
    return f"s{mask}"


def subset_alphabet(s: int):
    return tuple(subset_letter(mask) for mask in range(1 << s))


def const_string(struct: ConstStructure, const_names) -> StringStructure:
    names = tuple(const_names)
    letters = []
    for b in range(struct.size):
        mask = 0
        for i, c in enumerate(names):
            if struct.const(c) == b:
                mask |= 1 << i
        letters.append(subset_letter(mask))
    return StringStructure(subset_alphabet(len(names)), tuple(letters))


def const_rewrite(formula, const_names):
    """Formula over a pure constant signature to one over strings whose
    letters name the subset of constants sitting at each position.

    Returns (formula, mapper)."""
    names = tuple(const_names)
    index = {c: i for i, c in enumerate(names)}
    for sub in walk_formulas(formula):
        if isinstance(sub, Letter):
            raise NonConstantSignature("letter atoms in a constant signature")
        from .logic import _atom_terms
        for t in _atom_terms(sub):
            if type(t) is ConstSym and t.name not in index:
                raise NonConstantSignature(f"unknown constant {t.name!r}")
    gensym = _Gensym(_all_names(formula))

    def holds_at(cname, y):
        i = index[cname]
        out = None
        for mask in range(1 << len(names)):
            if (mask >> i) & 1:
                atom = Letter(subset_letter(mask), Var(y))
                out = atom if out is None else Or(out, atom)
        return out

    from .logic import _atom_terms, _subst_term

    def rw(g):
        ty = type(g)
        if ty in (Not,):
            return Not(rw(g.body))
        if ty in (And, Or):
            return ty(rw(g.left), rw(g.right))
        if ty in (ExistsFO, ForallFO):
            return ty(g.var, rw(g.body))
        if ty is ExistsSO:
            return ExistsSO(g.var, rw(g.body))
        if ty is LindFO:
            return LindFO(g.lang, g.vars, tuple(rw(a) for a in g.args))
        if ty is LindSO:
            return LindSO(g.lang, g.ordering, g.arity, g.vars,
                          tuple(rw(a) for a in g.args))
        out = g
        wrappers = []
        for t in dict.fromkeys(_atom_terms(g)):
            if type(t) is ConstSym:
                y = gensym("y")
                out = _subst_term(out, t, Var(y))
                wrappers.append((y, t.name))
        for y, cname in reversed(wrappers):
            out = ExistsFO(y, And(holds_at(cname, y), out))
        return out

    return rw(formula), lambda st: const_string(st, names)


def const_unrewrite(formula, const_names):
    """Inverse direction: subset-letter atoms back to constant equalities."""
    names = tuple(const_names)

    def rw(g):
        ty = type(g)
        if ty is Letter:
            if not (g.letter.startswith("s") and g.letter[1:].isdigit()):
                raise NonConstantSignature(
                    f"letter {g.letter!r} is not a subset letter")
            mask = int(g.letter[1:])
            out = None
            for i, c in enumerate(names):
                atom = Eq(ConstSym(c), g.term)
                if not (mask >> i) & 1:
                    atom = Not(atom)
                out = atom if out is None else And(out, atom)
            return out if out is not None else TrueF()
        if ty is Not:
            return Not(rw(g.body))
        if ty in (And, Or):
            return ty(rw(g.left), rw(g.right))
        if ty in (ExistsFO, ForallFO):
            return ty(g.var, rw(g.body))
        if ty is ExistsSO:
            return ExistsSO(g.var, rw(g.body))
        if ty is LindFO:
            return LindFO(g.lang, g.vars, tuple(rw(a) for a in g.args))
        if ty is LindSO:
            return LindSO(g.lang, g.ordering, g.arity, g.vars,
                          tuple(rw(a) for a in g.args))
        return g

    return rw(formula)


# ---------------------------------------------------------------------------
# Exponential-universe translation

def const_name_for(letter: str) -> str:
    return f"c_{letter}"


def exp_structure(st: StringStructure, cap: int = 5) -> ConstStructure:
    """String of length n as a constant structure on 2^n elements: each
    letter's position set becomes an integer read most significant first."""
    n = st.size
    if n > cap:
        raise ExponentCapExceeded(
            f"universe 2^{n} exceeds the exponent cap {cap}", required=n)
    consts = {}
    for a in st.alphabet:
        consts[const_name_for(a)] = sum(
            1 << (n - 1 - j) for j, x in enumerate(st.letters) if x == a)
    return ConstStructure.of(1 << n, consts)


def exp_translate(formula, alphabet, *, cap: int = 5):
    """Monadic second-order sentence over strings to a first-order
    arithmetic sentence over the exponential constant structure."""
    ok, why = fragment_check(formula, "SOM(Qstar)")
    if not ok:
        raise FragmentViolation(why)
    alphabet = tuple(alphabet)
    for sub in walk_formulas(formula):
        if isinstance(sub, Letter) and sub.letter not in alphabet:
            raise FragmentViolation(
                f"letter {sub.letter!r} outside the alphabet {alphabet}")
    src = eliminate_min_max(formula)

    def rw(g):
        ty = type(g)
        if ty is Letter:
            return HighBit(ConstSym(const_name_for(g.letter)), g.term)
        if ty is InRel:
            return HighBit(Var(g.rel), g.args[0])
        if ty is Not:
            return Not(rw(g.body))
        if ty in (And, Or):
            return ty(rw(g.left), rw(g.right))
        if ty is ExistsFO:
            return ExistsFO(g.var, And(LtLog(Var(g.var)), rw(g.body)))
        if ty is ForallFO:
            return ForallFO(g.var, implies(LtLog(Var(g.var)), rw(g.body)))
        if ty is ExistsSO:
            return ExistsFO(g.var, rw(g.body))
        if ty is LindSO:
            return LindFO(g.lang, g.vars, tuple(rw(a) for a in g.args))
        return g

    return rw(src), lambda st: exp_structure(st, cap)


def exp_translate_rev(formula, alphabet):
    """First-order arithmetic-free sentence over the exponential constant
    structure back to a monadic second-order sentence over strings."""
    okq, _ = fragment_check(formula, "Q-qfree-no-arith")
    okf, _ = fragment_check(formula, "qfree-no-arith")
    if not (okq or okf):
        raise FragmentViolation(
            "expected a quantifier-free formula, optionally under one outer "
            "generalized quantifier, without arithmetic")
    alphabet = tuple(alphabet)
    letter_of = {const_name_for(a): a for a in alphabet}
    gensym = _Gensym(_all_names(formula))

    def mem(t):
        ty = type(t)
        if ty is Min:
            return lambda z: FalseF()
        if ty is Max:
            return lambda z: TrueF()
        if ty is ConstSym:
            if t.name not in letter_of:
                raise FragmentViolation(f"unknown constant {t.name!r}")
            return lambda z: Letter(letter_of[t.name], Var(z))
        return lambda z: InRel(t.name, (Var(z),))

    def set_eq(ma, mb):
        z = gensym("z")
        return ForallFO(z, iff(ma(z), mb(z)))

    def set_lt(ma, mb):
        z, u = gensym("z"), gensym("u")
        return ExistsFO(z, And(Not(ma(z)), And(mb(z), ForallFO(
            u, implies(Lt(Var(u), Var(z)), iff(ma(u), mb(u)))))))

    def rw(g):
        ty = type(g)
        if ty is Eq:
            return set_eq(mem(g.left), mem(g.right))
        if ty is Lt:
            return set_lt(mem(g.left), mem(g.right))
        if ty is Not:
            return Not(rw(g.body))
        if ty in (And, Or):
            return ty(rw(g.left), rw(g.right))
        if ty is LindFO:
            return LindSO(g.lang, CONCATENATED, 1, g.vars,
                          tuple(rw(a) for a in g.args))
        if ty in (TrueF, FalseF):
            return g
        raise FragmentViolation(f"unsupported construct {type(g).__name__}")

    return rw(formula)


# ---------------------------------------------------------------------------
# Equivalence validation

@dataclass(frozen=True)
class TranslationReport:
    source: object
    target: object
    mapper_desc: str
    max_n: int
    verdict: str  # 'equivalent-on-range' | 'counterexample'
    counterexample: tuple | None = None  # (structure repr, assignment repr)
    notes: tuple = ()

    def verdict_line(self) -> str:
        if self.verdict == "equivalent-on-range":
            return "verdict: equivalent"
        st, asg = self.counterexample
        return f"verdict: counterexample {st} {asg}"

    def render(self) -> str:
        from .sexpr import format_formula
        lines = [
            f"source: {format_formula(self.source)}",
            f"target: {format_formula(self.target)}",
            f"mapper: {self.mapper_desc}",
            f"range: n <= {self.max_n}",
        ]
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(self.verdict_line())
        return "\n".join(lines)


def string_structures(alphabet, max_n: int, min_n: int = 1):
    alphabet = tuple(alphabet)
    for length in range(min_n, max_n + 1):
        for w in itertools.product(alphabet, repeat=length):
            yield StringStructure(alphabet, w)


def const_structures(const_names, max_n: int, min_n: int = 1):
    names = tuple(const_names)
    for n in range(min_n, max_n + 1):
        for vals in itertools.product(range(n), repeat=len(names)):
            yield ConstStructure.of(n, dict(zip(names, vals)))


def _assignments(fo_vars, so_vars, n):
    fo_vars, so_vars = sorted(fo_vars), sorted(so_vars)
    fo_space = [range(n)] * len(fo_vars)
    so_space = [[frozenset((j,) for j in range(n) if (mask >> j) & 1)
                 for mask in range(1 << n)]] * len(so_vars)
    for fo_vals in itertools.product(*fo_space):
        for so_vals in itertools.product(*so_space):
            env = dict(zip(fo_vars, fo_vals))
            env.update(zip(so_vars, so_vals))
            yield env


def _fmt_assignment(env):
    if not env:
        return "{}"
    parts = []
    for k in sorted(env):
        v = env[k]
        if isinstance(v, frozenset):
            v = "{" + ",".join(str(t[0]) for t in sorted(v)) + "}"
        parts.append(f"{k}={v}")
    return "{" + ",".join(parts) + "}"


def check_equivalence(source, target, structures, *, registry=None,
                      mapper=None, mapper_desc="identity",
                      instance_cap=DEFAULT_INSTANCE_CAP, notes=()):
    """Exhaustively compare truth of source and target over the structures.

    With a mapper, both formulas must be sentences: source is evaluated on
    each structure, target on its image. Without one, open formulas are
    compared pointwise over all assignments to their free variables
    (second-order variables monadic)."""
    fo_s, so_s = free_variables(source)
    fo_t, so_t = free_variables(target)
    open_vars = fo_s | fo_t, so_s | so_t
    if mapper is not None and (open_vars[0] or open_vars[1]):
        raise InvariantViolation(
            "mapped equivalence checks require closed formulas")
    max_n = 0
    for st in structures:
        max_n = max(max_n, st.size)
        tgt = mapper(st) if mapper is not None else st
        if mapper is None and (open_vars[0] or open_vars[1]):
            envs = _assignments(open_vars[0], open_vars[1], st.size)
        else:
            envs = [{}]
        for env in envs:
            a = evaluate(st, source, env, registry=registry,
                         instance_cap=instance_cap)
            b = evaluate(tgt, target, env, registry=registry,
                         instance_cap=instance_cap)
            if a != b:
                return TranslationReport(
                    source, target, mapper_desc, max_n, "counterexample",
                    (str(st), _fmt_assignment(env)), tuple(notes))
    return TranslationReport(source, target, mapper_desc, max_n,
                             "equivalent-on-range", None, tuple(notes))
