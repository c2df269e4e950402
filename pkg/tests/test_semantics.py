"""Name resolution, diagnostics, generic expansion, and the rewriter."""

import pytest

from flucid.semantics import (
    DEFAULT_DIMENSION,
    FlucidSemanticError,
    REWRITTEN_BIN,
    REWRITTEN_UNARY,
    analyze,
    promote_generic,
    rewrite_to_core,
)
from flucid.syntax import nodes as N
from flucid.syntax import parse, pretty_print
from flucid.values import (
    EvidentialStatement,
    FlucidError,
    ObservationSequence,
    PLUS_INF,
    make_observation,
)


def codes(err: FlucidSemanticError):
    return {r.code for r in err.records}


# --- name resolution ---------------------------------------------------------


def test_simple_program_builds_environment():
    result = analyze(parse("x where x = 1; end"))
    assert result.env["x"].kind == "var"
    assert result.env["x"].source == "x"
    assert result.tree.body == N.Ident("x")
    assert result.errors == ()


def test_shadowing_gets_distinct_names():
    src = "x + (x where x = 2; end) where x = 1; end"
    result = analyze(parse(src))
    assert set(result.env) == {"x", "x#2"}
    outer_ref = result.tree.body.left
    inner_where = result.tree.body.right
    assert outer_ref == N.Ident("x")
    assert inner_where.body == N.Ident("x#2")
    assert inner_where.decls[0].name == "x#2"


def test_forward_and_mutual_references_allowed():
    analyze(parse("y where y = z + 1; z = 2; end"))
    analyze(parse("a where a = b; b = a; end"))


def test_duplicate_declaration_is_reported():
    with pytest.raises(FlucidSemanticError) as exc:
        analyze(parse("x where x = 1; x = 2; end"))
    assert "duplicate-declaration" in codes(exc.value)


def test_undefined_identifier_is_reported():
    with pytest.raises(FlucidSemanticError) as exc:
        analyze(parse("y where x = 1; end"))
    assert "undefined-identifier" in codes(exc.value)
    record = exc.value.records[0]
    assert record.severity == "error"
    assert record.to_dict()["line"] == 1
    assert "undefined-identifier" in record.render()


def test_member_assignment_is_not_a_declaration():
    with pytest.raises(FlucidSemanticError) as exc:
        analyze(parse("x where x = 1; x.w = 2; end"))
    assert "unsupported-member-assignment" in codes(exc.value)


def test_builtin_call_arity():
    analyze(parse("bel(x) where x = 1; end"))
    with pytest.raises(FlucidSemanticError) as exc:
        analyze(parse("bel(x, x) where x = 1; end"))
    assert "arity-mismatch" in codes(exc.value)


def test_function_call_arity():
    analyze(parse("f(1) where f(a) = a; end"))
    with pytest.raises(FlucidSemanticError) as exc:
        analyze(parse("f(1, 2) where f(a) = a; end"))
    assert "arity-mismatch" in codes(exc.value)
    with pytest.raises(FlucidSemanticError) as exc:
        analyze(parse("f(1) where f[A](a) = a; end"))
    assert "arity-mismatch" in codes(exc.value)


def test_oversized_observation_tuple():
    with pytest.raises(FlucidSemanticError) as exc:
        analyze(parse("x where observation x = (1, 2, 3, 4, 5, 6); end"))
    assert "observation-arity" in codes(exc.value)


def test_context_keys_need_no_declaration():
    result = analyze(parse('x @ [t:1, q:"a"] where x = #t; end'))
    assert result.errors == ()
    # the query against the implicit dimension keeps its source name
    assert result.env["x"].node.expr == N.HashExpr(N.Ident("t"))


def test_context_key_resolves_to_nearest_dimension():
    src = ("(x @ [t:1] where dimension t; x = 1; end)"
           " where dimension t; end")
    result = analyze(parse(src))
    inner = result.tree.body
    key = inner.body.right.entries[0].key
    assert key == N.Ident("t#2")


def test_dimension_and_function_names_are_values_too():
    analyze(parse('I where dimension I : unordered finite nonperiodic '
                  '{"a"}; end'))
    analyze(parse("f where f[A](x) = x; end"))


def test_operator_suffix_dimension_is_implicit():
    result = analyze(parse("x fby.q 1 where x = 1; end"))
    assert result.tree.body.dim == "q"


def test_hop_annotations_stay_verbatim():
    src = 'a pby [es.#, I:"(u)"] b where a = 1; b = 2; end'
    result = analyze(parse(src))
    hop = result.tree.body
    assert hop.annotation == parse(src).body.annotation


def test_formals_shadow_and_are_registered():
    src = "f[A](s) where dimension A; s = 1; f[S](s) = s; end"
    result = analyze(parse(src))
    fn = result.env["f"]
    assert fn.kind == "func"
    assert fn.dim_params == ("S",)
    assert fn.params == ("s#2",)
    assert result.env["s#2"].kind == "formal"
    assert result.env["s#2"].owner == "f"
    assert fn.node.body == N.Ident("s#2")


def test_analysis_is_deterministic_and_idempotent():
    src = "x + (x where x = 2; end) where x = 1; end"
    first = analyze(parse(src))
    second = analyze(parse(src))
    assert first.tree == second.tree
    assert set(first.env) == set(second.env)
    again = analyze(first.tree)
    assert again.tree == first.tree


# --- generic-width expansion -------------------------------------------------


def test_observation_expands_to_width_variants():
    variants = promote_generic(make_observation("p", 1, 3))
    assert [v.min for v in variants] == [1, 2, 3, 4]
    assert all(v.max == 0 for v in variants)
    assert all(v.property == "p" for v in variants)


def test_sequence_expands_to_cross_product():
    os = ObservationSequence(
        (make_observation("A", 1, 3), make_observation("B", 1, 2)))
    variants = promote_generic(os)
    assert len(variants) == 12
    assert len(set(variants)) == 12
    assert all(all(o.max == 0 for o in v.observations) for v in variants)


def test_statement_expands_per_sequence():
    es = EvidentialStatement((
        ObservationSequence((make_observation("A", 1, 1),), name="a"),
        ObservationSequence((make_observation("B", 1, 2),), name="b"),
    ), name="es")
    variants = promote_generic(es)
    assert len(variants) == 6
    assert all(isinstance(v, EvidentialStatement) for v in variants)


def test_unbounded_width_needs_horizon():
    os = ObservationSequence((make_observation("p", 0, PLUS_INF),))
    with pytest.raises(FlucidError):
        promote_generic(os)
    assert len(promote_generic(os, horizon=3)) == 4


# --- core rewriting ----------------------------------------------------------


def rw(src: str) -> N.Node:
    return rewrite_to_core(parse(src))


def test_positional_operators_become_navigation():
    assert rw("first x") == parse("x @.d 0")
    assert rw("next x") == parse("x @.d (#d + 1)")
    assert rw("prev x") == parse("x @.d (#d - 1)")
    assert rw("second x") == parse("(x @.d (#d + 1)) @.d 0")


def test_followed_by_becomes_conditional():
    assert rw("x fby.d y") == parse(
        "if #d == 0 then x else y @.d (#d - 1) fi")
    assert rw("x fby.t y") == parse(
        "if #t == 0 then x else y @.t (#t - 1) fi")


def test_word_negations_become_symbols():
    assert rw("neg x") == parse("-x")
    assert rw("not x") == parse("!x")
    assert rw("x and y") == parse("if x && y then 1 else 0 fi")
    assert rw("x nor y") == parse("if x || y then 0 else 1 fi")


def _remaining_ops(node, acc):
    if isinstance(node, N.StreamUnary):
        acc.add(node.op)
    if isinstance(node, N.StreamBin) and node.annotation is None:
        acc.add(node.op)
    if isinstance(node, N.Node):
        for value in vars(node).values():
            _remaining_ops(value, acc)
    elif isinstance(node, tuple):
        for item in node:
            _remaining_ops(item, acc)


SOUP = ("(a wvr b) + (a nwvr b) + (a upon b) + (a nupon b)"
        " + (a rwvr b) + (a nrwvr b) + (a rupon b) + (a nrupon b)"
        " + (a asa b) + (a nasa b) + (a ala b) + (a nala b)"
        " + (a pby b) + (a fby b) + (a xor b) + (a nand b)"
        " + (a nxor b) + (a or b)"
        " + last a + prelast a + second a + first a + neg a + not a")


def test_no_derived_operator_survives_rewriting():
    seen = set()
    _remaining_ops(rw(SOUP), seen)
    assert not (seen & REWRITTEN_UNARY)
    assert not (seen & REWRITTEN_BIN)
    assert seen <= {"iseod", "isbod"}


def test_rewriting_is_idempotent_and_deterministic():
    once = rw(SOUP)
    assert rewrite_to_core(once) == once
    assert rw(SOUP) == once


def test_rewriting_leaves_what_it_does_not_define():
    assert rw("a nfby b") == parse("a nfby b")
    assert rw("iseod a") == parse("iseod a")
    assert rw("a band b") == parse("a band b")
    assert rw("combine(a, b)") == parse("combine(a, b)")


def test_annotated_hops_are_not_streams():
    src = 'a pby [es.#, I:"(u)"] b'
    assert rw(src) == parse(src)


def _declared_names(node, acc):
    if isinstance(node, N.VarDecl):
        acc.add(node.name)
    if isinstance(node, N.Node):
        for value in vars(node).values():
            _declared_names(value, acc)
    elif isinstance(node, tuple):
        for item in node:
            _declared_names(item, acc)


def test_fresh_names_do_not_capture():
    tree = rw("_x1 wvr _y1")
    bound = set()
    _declared_names(tree, bound)
    assert "_x1" not in bound
    assert "_y1" not in bound
    # the operands are still referenced
    names = set()
    _collect = lambda n: _remaining_ops(n, set())
    text = pretty_print(tree)
    assert "_x1" in text and "_y1" in text
