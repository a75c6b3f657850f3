import pytest

from wordlogic.errors import (
    ExponentCapExceeded,
    FragmentViolation,
    InvariantViolation,
    NestedUnsupported,
    NoNeutralLetter,
    NonConstantSignature,
    NonMonadicNode,
)
from wordlogic.logic import (
    CONCATENATED,
    INTERLEAVED,
    MAX,
    And,
    BitAtom,
    ConstSym,
    Eq,
    ExistsFO,
    ForallFO,
    InRel,
    Letter,
    LindFO,
    LindSO,
    Lt,
    Not,
    PlusAtom,
    SetTimes,
    TrueF,
    Var,
    evaluate,
    instance_rank,
    instance_unrank,
)
from wordlogic.translate import (
    arity_collapse,
    check_equivalence,
    const_rewrite,
    const_string,
    const_structures,
    const_unrewrite,
    exp_structure,
    exp_translate,
    exp_translate_rev,
    pad_string,
    pad_translate,
    q1_to_q_star,
    q_star_to_q1,
    string_structures,
    tally_member,
    tally_translate_bwd,
    tally_translate_fwd,
)

AB = ("a", "b")


def x_in(X):
    return ExistsFO("x", InRel(X, (Var("x"),)))


# ---------------------------------------------------------------------------
# Ordering swap

def test_ordering_swap_round_trip_structural():
    f = LindSO("Lmod2", CONCATENATED, 1, ("X",), (x_in("X"),))
    g = q_star_to_q1(f)
    assert g.ordering == INTERLEAVED
    assert q1_to_q_star(g) == f


def test_ordering_swap_witness_codes():
    # the swap realizes the code permutation: the concatenated reading of
    # rank 2 at n=2, k=2 is rank 4
    sets = instance_unrank(2, 2, 2, INTERLEAVED)
    assert instance_rank(sets, 2, CONCATENATED) == 4
    assert instance_unrank(4, 2, 2, CONCATENATED) == sets


def test_ordering_swap_equivalent(registry):
    arg = ExistsFO("x", And(InRel("X", (Var("x"),)),
                            Not(InRel("Y", (Var("x"),)))))
    for lang, vars_ in [("Lmod2", ("X", "Y")), ("Maj", ("X",))]:
        use = arg if len(vars_) == 2 else x_in("X")
        f = LindSO(lang, CONCATENATED, 1, vars_, (use,))
        rep = check_equivalence(f, q_star_to_q1(f),
                                string_structures(AB, 3), registry=registry)
        assert rep.verdict == "equivalent-on-range", rep.render()


def test_ordering_swap_open_formula(registry):
    # a free set variable stays untouched and the check runs pointwise
    f = LindSO("Lexists", INTERLEAVED, 1, ("X",),
               (ExistsFO("x", And(InRel("X", (Var("x"),)),
                                  InRel("Z", (Var("x"),)))),))
    rep = check_equivalence(f, q1_to_q_star(f), string_structures(AB, 3),
                            registry=registry)
    assert rep.verdict == "equivalent-on-range", rep.render()


def test_ordering_swap_rejects_nonmonadic():
    f = LindSO("Lexists", CONCATENATED, 2, ("X",),
               (ExistsFO("x", InRel("X", (Var("x"), Var("x")))),))
    with pytest.raises(NonMonadicNode):
        q_star_to_q1(f)


def test_ordering_swap_rejects_set_arithmetic():
    f = LindSO("Lexists", CONCATENATED, 1, ("X",),
               (SetTimes("X", "X", "X"),))
    with pytest.raises(NestedUnsupported):
        q_star_to_q1(f)


# ---------------------------------------------------------------------------
# Arity collapse

def test_arity_collapse_majpad(registry):
    args = (x_in("X"), x_in("Y"))
    f = LindSO("MajPad", CONCATENATED, 1, ("X", "Y"), args)
    g = arity_collapse(f, registry)
    assert g.arity == 2 and len(g.vars) == 1
    rep = check_equivalence(f, g, string_structures(AB, 3, min_n=2),
                            registry=registry)
    assert rep.verdict == "equivalent-on-range", rep.render()


def test_arity_collapse_single_variable(registry):
    f = LindSO("Lmod2", CONCATENATED, 1, ("X",), (x_in("X"),))
    g = arity_collapse(f, registry)
    assert g.arity == 2  # one tag bit even for k = 1
    rep = check_equivalence(f, g, string_structures(AB, 3, min_n=2),
                            registry=registry)
    assert rep.verdict == "equivalent-on-range", rep.render()


def test_arity_collapse_needs_neutral(registry):
    f = LindSO("Maj", CONCATENATED, 1, ("X",), (x_in("X"),))
    with pytest.raises(NoNeutralLetter):
        arity_collapse(f, registry)
    # Lforall declares a neutral letter, but not as the last alphabet letter
    g = LindSO("Lforall", CONCATENATED, 1, ("X",), (x_in("X"),))
    with pytest.raises(NoNeutralLetter):
        arity_collapse(g, registry)


def test_arity_collapse_needs_outer_node(registry):
    with pytest.raises(FragmentViolation):
        arity_collapse(ExistsFO("x", Letter("a", Var("x"))), registry)


# ---------------------------------------------------------------------------
# Padding

def test_pad_string():
    assert pad_string("ab", 2, "#") == "ab##"
    assert pad_string("abc", 2, "#") == "abc" + "#" * 6
    assert pad_string("a", 3, "#") == "a"


def test_pad_translate_equivalent(registry):
    arg = ExistsFO("x", ExistsFO("y", And(Lt(Var("x"), Var("y")),
                                          InRel("X", (Var("x"), Var("y"))))))
    f = LindSO("Maj", CONCATENATED, 2, ("X",), (arg,))
    g, chi, mapper = pad_translate(f, AB)
    rep = check_equivalence(f, g, string_structures(AB, 3), registry=registry,
                            mapper=mapper, mapper_desc="pad to n^2")
    assert rep.verdict == "equivalent-on-range", rep.render()


def test_pad_chi_characterizes_padded_strings(registry):
    f = LindSO("Maj", CONCATENATED, 2, ("X",),
               (InRel("X", (Var("x"), Var("x"))),))
    f = LindSO("Maj", CONCATENATED, 2, ("X",), (x_in("X"),))
    _, chi, mapper = pad_translate(f, AB)
    import itertools
    padded = {mapper(st).word for st in string_structures(AB, 2)}
    full = ("a", "b", "#")
    for length in range(1, 5):
        for w in itertools.product(full, repeat=length):
            from wordlogic.logic import StringStructure
            st = StringStructure(full, w)
            assert evaluate(st, chi, registry=registry) == \
                ("".join(w) in padded), w


def test_pad_translate_fragment_guard(registry):
    with pytest.raises(FragmentViolation):
        pad_translate(ExistsFO("x", Letter("a", Var("x"))), AB)


# ---------------------------------------------------------------------------
# Tally translations

def test_tally_member(registry):
    spec = registry["Lexists"]
    # binary expansion of n is 1w; membership asks w to contain a one
    assert not tally_member(spec, 1)
    assert not tally_member(spec, 2)   # w = "0"
    assert tally_member(spec, 3)       # w = "1"
    assert tally_member(spec, 5)       # w = "01"
    assert not tally_member(spec, 4)   # w = "00"


def test_tally_fwd_equivalent(registry):
    args = [
        ExistsFO("x", Letter("1", Var("x"))),
        ForallFO("x", Letter("0", Var("x"))),
    ]
    for arg in args:
        f = LindSO("Lmod2", CONCATENATED, 1, ("X",),
                   (And(x_in("X"), arg),))
        g, mapper = tally_translate_fwd(f, registry)
        rep = check_equivalence(f, g, string_structures(("1", "0"), 3),
                                registry=registry, mapper=mapper,
                                mapper_desc="w -> 1^int(1w, 2)")
        assert rep.verdict == "equivalent-on-range", rep.render()


def test_tally_fwd_rejects_nonbinary(registry):
    f = LindSO("Lmod2", CONCATENATED, 1, ("X",),
               (ExistsFO("x", Letter("a", Var("x"))),))
    with pytest.raises(FragmentViolation):
        tally_translate_fwd(f, registry)


def test_tally_bwd_equivalent(registry):
    ones = ("1",)
    formulas = [
        ExistsFO("x", ExistsFO("y", Lt(Var("x"), Var("y")))),
        ExistsFO("x", ExistsFO("y", PlusAtom(Var("x"), Var("x"), Var("y")))),
        LindFO("Lmod2", ("x",), (ExistsFO("y", Lt(Var("y"), Var("x"))),)),
    ]
    for f in formulas:
        g, mapper = tally_translate_bwd(f, registry)
        rep = check_equivalence(f, g, string_structures(ones, 12),
                                registry=registry, mapper=mapper,
                                mapper_desc="1^n -> bin(n)")
        assert rep.verdict == "equivalent-on-range", rep.render()


def test_tally_bwd_rejects_arithmetic_views(registry):
    f = ExistsFO("x", BitAtom(Var("x"), Var("x")))
    with pytest.raises(FragmentViolation):
        tally_translate_bwd(f, registry)


# ---------------------------------------------------------------------------
# Constant signatures

def test_const_string_letters():
    from wordlogic.logic import ConstStructure
    st = ConstStructure.of(3, {"c1": 0, "c2": 2})
    s = const_string(st, ("c1", "c2"))
    assert s.word == "s1s0s2"


def test_const_rewrite_equivalent():
    names = ("c1", "c2")
    formulas = [
        Lt(ConstSym("c1"), ConstSym("c2")),
        Eq(ConstSym("c1"), ConstSym("c2")),
        ExistsFO("x", And(Lt(ConstSym("c1"), Var("x")),
                          Lt(Var("x"), ConstSym("c2")))),
    ]
    for f in formulas:
        g, mapper = const_rewrite(f, names)
        rep = check_equivalence(f, g, const_structures(names, 4),
                                mapper=mapper, mapper_desc="subset letters")
        assert rep.verdict == "equivalent-on-range", rep.render()


def test_const_round_trip_equivalent():
    names = ("c1", "c2")
    f = ExistsFO("x", And(Lt(ConstSym("c1"), Var("x")),
                          Eq(Var("x"), ConstSym("c2"))))
    g, _ = const_rewrite(f, names)
    back = const_unrewrite(g, names)
    rep = check_equivalence(f, back, const_structures(names, 4))
    assert rep.verdict == "equivalent-on-range", rep.render()


def test_const_rewrite_rejects_letters():
    with pytest.raises(NonConstantSignature):
        const_rewrite(Letter("a", ConstSym("c1")), ("c1",))
    with pytest.raises(NonConstantSignature):
        const_rewrite(Eq(ConstSym("zz"), MAX), ("c1",))


def test_const_unrewrite_rejects_foreign_letters():
    with pytest.raises(NonConstantSignature):
        const_unrewrite(Letter("a", Var("x")), ("c1",))


# ---------------------------------------------------------------------------
# Exponential universe

def test_exp_structure_codes():
    from wordlogic.logic import structure_from_string
    st = structure_from_string(AB, "aab")
    big = exp_structure(st)
    assert big.size == 8
    assert big.const("c_a") == 0b110
    assert big.const("c_b") == 0b001


def test_exp_structure_cap():
    from wordlogic.logic import structure_from_string
    with pytest.raises(ExponentCapExceeded) as ei:
        exp_structure(structure_from_string(AB, "a" * 6), cap=5)
    assert ei.value.required == 6


def test_exp_translate_equivalent(registry):
    formulas = [
        ExistsFO("x", Letter("a", Var("x"))),
        LindSO("Lmod2", CONCATENATED, 1, ("X",),
               (ExistsFO("x", And(InRel("X", (Var("x"),)),
                                  Letter("b", Var("x")))),)),
    ]
    for f in formulas:
        g, mapper = exp_translate(f, AB)
        rep = check_equivalence(f, g, string_structures(AB, 4),
                                registry=registry, mapper=mapper,
                                mapper_desc="w -> <2^n; characteristic codes>")
        assert rep.verdict == "equivalent-on-range", rep.render()


def test_exp_translate_rev_equivalent(registry):
    # c_a = max says every position carries the letter a
    f = Eq(ConstSym("c_a"), MAX)
    g = exp_translate_rev(f, AB)
    rep = check_equivalence(g, f, string_structures(AB, 4),
                            registry=registry, mapper=exp_structure,
                            mapper_desc="w -> <2^n; characteristic codes>")
    assert rep.verdict == "equivalent-on-range", rep.render()
    h = exp_translate_rev(LindFO("Lexists", ("x",),
                                 (Lt(ConstSym("c_b"), Var("x")),)), AB)
    rep = check_equivalence(h, LindFO("Lexists", ("x",),
                                      (Lt(ConstSym("c_b"), Var("x")),)),
                            string_structures(AB, 4), registry=registry,
                            mapper=exp_structure,
                            mapper_desc="w -> <2^n; characteristic codes>")
    assert rep.verdict == "equivalent-on-range", rep.render()


def test_exp_translate_rev_fragment_guard():
    with pytest.raises(FragmentViolation):
        exp_translate_rev(ExistsFO("x", Eq(Var("x"), MAX)), AB)


# ---------------------------------------------------------------------------
# Reports

def test_check_equivalence_counterexample(registry):
    f = ExistsFO("x", Letter("a", Var("x")))
    g = ForallFO("x", Letter("a", Var("x")))
    rep = check_equivalence(f, g, string_structures(AB, 2),
                            registry=registry)
    assert rep.verdict == "counterexample"
    assert rep.verdict_line().startswith("verdict: counterexample")
    assert "source:" in rep.render() and "verdict:" in rep.render()


def test_check_equivalence_rejects_open_with_mapper(registry):
    f = Letter("a", Var("x"))
    with pytest.raises(InvariantViolation):
        check_equivalence(f, f, string_structures(AB, 2),
                          registry=registry, mapper=lambda s: s)
