import os

from bpldiff.ast import (
    FALSE,
    TRUE,
    Assert,
    Assign,
    Binary,
    BinOp,
    If,
    IntLit,
    LocalDecl,
    Program,
    TypeTag,
    Unary,
    UnOp,
    Var,
    While,
)
from bpldiff.boogie import boogie_available
import pytest

INT, BOOL = TypeTag.INT, TypeTag.BOOL


def pytest_collection_modifyitems(config, items):
    skip_boogie = pytest.mark.skip(reason='no Boogie binary found')
    skip_slow = pytest.mark.skip(reason='set BPLDIFF_SLOW=1 to run')
    has_boogie = boogie_available()
    run_slow = os.environ.get('BPLDIFF_SLOW') == '1'
    for item in items:
        if 'boogie' in item.keywords and not has_boogie:
            item.add_marker(skip_boogie)
        if 'slow' in item.keywords and not run_slow:
            item.add_marker(skip_slow)


def x_is(value: int) -> tuple[LocalDecl, ...]:
    return (LocalDecl('x', INT, IntLit(value)),)


@pytest.fixture
def success_program():
    return Program(x_is(0), (Assert(Binary(BinOp.EQ_INT, Var('x'), IntLit(0))),))

@pytest.fixture
def failure_program():
    return Program(x_is(3), (Assert(Binary(BinOp.LT, Var('x'), IntLit(0))),))

@pytest.fixture
def name_error_program():
    return Program(x_is(0), (Assert(Binary(BinOp.EQ_INT, Var('y'), IntLit(0))),))

@pytest.fixture
def type_error_program():
    return Program(x_is(0), (Assert(Var('x')),))

@pytest.fixture
def loop_program():
    return Program(x_is(3), (
        While(TRUE, (Assign('x', IntLit(0)),)),
        Assert(FALSE),
    ))

@pytest.fixture
def timeout_program():
    return Program(x_is(0), (
        While(
            Binary(BinOp.LT, Var('x'), IntLit(1000000)),
            (Assign('x', Binary(BinOp.ADD, Var('x'), IntLit(1))),)
        ),
        Assert(FALSE),
    ))

@pytest.fixture
def example_programs(
    success_program,
    failure_program,
    name_error_program,
    type_error_program,
    loop_program,
    timeout_program
):
    return {
        'success': success_program,
        'failure': failure_program,
        'name_error': name_error_program,
        'type_error': type_error_program,
        'loop': loop_program,
        'timeout': timeout_program,
    }

@pytest.fixture
def stable_guard_program():
    """A loop nest whose guards are true on entry and stay true."""
    G = Var('G')
    return Program((LocalDecl('G', BOOL, FALSE),), (
        Assign('G', TRUE),
        Assign('G', G),
        Assert(Binary(
            BinOp.AND,
            Binary(BinOp.LT, IntLit(0), IntLit(1)),
            Binary(BinOp.EQ_INT, IntLit(1), IntLit(1))
        )),
        While(G, (
            While(G, (Assert(Unary(UnOp.NOT, Binary(BinOp.IMPLIES, TRUE, FALSE))),)),
            Assign('G', TRUE),
        )),
        Assert(FALSE),
    ))

@pytest.fixture
def dead_loop_program():
    """A loop whose guard is false on entry, so its body never runs."""
    s, AE = Var('s'), Var('AE')
    neg_zero = Unary(UnOp.NEG, IntLit(0))
    return Program((LocalDecl('s', BOOL, FALSE), LocalDecl('AE', BOOL, FALSE)), (
        Assign('s', FALSE),
        Assign('AE', FALSE),
        While(s, (
            If(
                Binary(BinOp.GT, Binary(BinOp.ADD, Binary(BinOp.MUL, neg_zero, IntLit(0)), neg_zero), IntLit(1)),
                (),
                (While(s, (
                    Assign('AE', TRUE),
                    Assign('s', Unary(UnOp.NOT, Binary(BinOp.AND, s, Unary(UnOp.NOT, FALSE)))),
                )),)
            ),
            Assign('s', TRUE),
            If(
                Binary(BinOp.GE, IntLit(0), IntLit(-3)),
                (If(FALSE, (), (
                    Assert(Binary(BinOp.IFF_EQ_BOOL, Unary(UnOp.NOT, Binary(BinOp.AND, TRUE, s)), AE)),
                )),),
                ()
            ),
        )),
    ))
