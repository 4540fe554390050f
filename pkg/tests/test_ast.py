from bpldiff.ast import (
    FALSE,
    TRUE,
    Assert,
    Assign,
    Binary,
    BinOp,
    BoolLit,
    If,
    IntLit,
    InvalidIdentifierError,
    LocalDecl,
    Program,
    TermStats,
    TypeTag,
    Unary,
    UnOp,
    Var,
    While,
    assigned_names,
    body_stats,
    concat,
    depth,
    expr_vars,
    is_valid_identifier,
    literal_type,
    stmt_stats,
    structural_hash,
    term_stats,
)
import pytest

# identifiers ----

def test_valid_identifiers():
    for name in ('x', 'AE', 'count_1', 'v9', 'G'):
        assert is_valid_identifier(name)

def test_invalid_identifiers():
    for name in ('', '1x', '_x', 'x-y', 'while', 'int', 'div', 'main', 'true'):
        assert not is_valid_identifier(name)

def test_builtin_type_names_are_reserved():
    for name in ('bv32', 'bv1', 'float24e8', 'rmode', 'RNE', 'real'):
        assert not is_valid_identifier(name)
    for name in ('bv', 'bvx', 'bv32x', 'float', 'x_bv8'):
        assert is_valid_identifier(name)
    with pytest.raises(InvalidIdentifierError):
        LocalDecl('bv32', TypeTag.INT, IntLit(0))

def test_var_rejects_keywords():
    with pytest.raises(InvalidIdentifierError) as error:
        Var('assert')
    assert error.value.name == 'assert'

def test_assign_and_decl_reject_bad_names():
    with pytest.raises(InvalidIdentifierError):
        Assign('2x', IntLit(0))
    with pytest.raises(InvalidIdentifierError):
        LocalDecl('bool', TypeTag.BOOL, TRUE)

# literals ----

def test_int_and_bool_literals_differ():
    assert IntLit(1) != BoolLit(True)
    assert IntLit(0) != BoolLit(False)

def test_literal_type():
    assert literal_type(IntLit(-4)) is TypeTag.INT
    assert literal_type(FALSE) is TypeTag.BOOL

# structure ----

def test_programs_compare_structurally(success_program):
    rebuilt = Program(
        (LocalDecl('x', TypeTag.INT, IntLit(0)),),
        (Assert(Binary(BinOp.EQ_INT, Var('x'), IntLit(0))),)
    )
    assert rebuilt == success_program
    assert hash(rebuilt) == hash(success_program)
    assert structural_hash(rebuilt) == structural_hash(success_program)

def test_structural_hash_tells_programs_apart(success_program, failure_program):
    assert structural_hash(success_program) != structural_hash(failure_program)

def test_concat_is_associative():
    a, b, c = (Assert(TRUE),), (Assign('x', IntLit(1)),), (Assert(FALSE),)
    assert concat(concat(a, b), c) == concat(a, concat(b, c))
    assert concat((), a) == a

# depth ----

def test_depth_of_empty_program():
    assert depth(Program()) == 0

def test_depth_of_single_assert_true():
    assert depth(Program((), (Assert(TRUE),))) == 2

def test_depth_of_examples(success_program, loop_program):
    assert depth(success_program) == 3
    assert depth(loop_program) == 4

def test_depth_counts_locals():
    decls = tuple(LocalDecl(f'v{i}', TypeTag.INT, IntLit(i)) for i in range(5))
    assert depth(Program(decls, ())) == 5

def test_depth_of_long_body():
    body = tuple(Assert(TRUE) for _ in range(4))
    assert depth(Program((), body)) == 5

# statistics ----

def test_term_stats_of_success(success_program):
    assert term_stats(success_program) == TermStats(
        n_locals=1, n_statements=1, n_comp_exprs=1, n_literals=2
    )

def test_term_stats_of_loop(loop_program):
    assert term_stats(loop_program) == TermStats(
        n_locals=1, n_statements=3, n_literals=4
    )

def test_unary_classification():
    neg = Assert(Binary(BinOp.LT, Unary(UnOp.NEG, IntLit(1)), IntLit(0)))
    assert stmt_stats(neg) == TermStats(n_statements=1, n_arith_exprs=1, n_comp_exprs=1, n_literals=2)
    negation = Assert(Unary(UnOp.NOT, FALSE))
    assert stmt_stats(negation) == TermStats(n_statements=1, n_bool_exprs=1, n_literals=1)

def test_stats_are_additive():
    b1 = (Assign('x', Binary(BinOp.ADD, Var('x'), IntLit(1))),)
    b2 = (If(TRUE, (Assert(FALSE),), ()), While(FALSE, ()))
    assert body_stats(concat(b1, b2)) == body_stats(b1) + body_stats(b2)

def test_stats_as_dict():
    assert TermStats(n_locals=2).as_dict() == {
        'n_locals': 2,
        'n_statements': 0,
        'n_arith_exprs': 0,
        'n_bool_exprs': 0,
        'n_comp_exprs': 0,
        'n_literals': 0,
    }

# traversal ----

def test_assigned_names_reach_nested_bodies(stable_guard_program):
    assert assigned_names(stable_guard_program.body) == {'G'}

def test_expr_vars():
    e = Binary(BinOp.AND, Var('a'), Unary(UnOp.NOT, Binary(BinOp.LT, Var('b'), IntLit(0))))
    assert expr_vars(e) == {'a', 'b'}
