import random

import pytest
from hypothesis import given, settings, strategies as st

from emalp import (
    Apply,
    Atom,
    Const,
    ParseError,
    Program,
    Rule,
    ValidationFailure,
    parse_body,
    parse_program,
    serialize_program,
)
from genprog import random_emalp


def test_parse_division_rule():
    program = parse_program("p <-p min(div1(q, add(add(s,t), 0.1)), 1) with 0.5;")
    rule = program.rules[0]
    assert rule == Rule(
        Atom("p"),
        "product",
        Apply("min", (
            Apply("div1", (Atom("q"), Apply("add", (Apply("add", (Atom("s"), Atom("t"))),
                                                    Const(0.1))))),
            Const(1.0),
        )),
        0.5,
    )


def test_parse_constraint():
    program = parse_program("0.7 <-l neg1(q) with 1;")
    rule = program.rules[0]
    assert rule.is_constraint
    assert rule.head == Const(0.7)
    assert rule.impl == "lukasiewicz"
    assert rule.weight == 1.0


def test_parse_fractions():
    program = parse_program("p <-g 9/85 with 8/37;")
    assert program.rules[0].body == Const(9 / 85)
    assert program.rules[0].weight == 8 / 37


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as err:
        parse_program("p <-g q q with 1;")
    assert err.value.line == 1
    assert err.value.col > 1


def test_parse_errors():
    with pytest.raises(ParseError, match="unknown builtin"):
        parse_program("p <-g foo(q) with 1;")
    with pytest.raises(ParseError, match="applied to"):
        parse_program("p <-g neg1(q, s) with 1;")
    with pytest.raises(ParseError, match="applied to"):
        parse_program("p <-g min(q) with 1;")
    with pytest.raises(ParseError, match="outside"):
        parse_program("p <-g q with 1.5;")
    with pytest.raises(ParseError, match="outside"):
        parse_program("p <-g 3/2 with 1;")
    with pytest.raises(ParseError, match="must be a literal"):
        parse_program("p <-g f(q, s) with 1;")
    with pytest.raises(ParseError, match="implication tag"):
        parse_program("p <-x q with 1;")
    with pytest.raises(ParseError, match="unexpected character"):
        parse_program("p <-g q with 1!")


def test_validation_failures_raise_on_parse():
    with pytest.raises(ValidationFailure):
        parse_program("p <-g max(q, neg1(q)) with 1;")
    with pytest.raises(ValidationFailure):
        parse_program("0.7 <-l p with 0.5;")
    with pytest.raises(ValidationFailure):
        parse_program("p <-g add(q, s) with 1;")
    # duplicate atoms accepted only with the override
    text = "p <-g and_g(q, q) with 1;"
    with pytest.raises(ValidationFailure):
        parse_program(text)
    assert len(parse_program(text, allow_repeats=True).rules) == 1


def test_comments_and_whitespace():
    program = parse_program("# header\np <-g q with 1;  # trailing\n\n# done\n")
    assert len(program.rules) == 1


def test_empty_program():
    assert parse_program("") == Program(())
    assert serialize_program(Program(())) == ""


def test_serialize_fact_golden():
    program = parse_program("s <-g 1 with 0.8;")
    assert serialize_program(program) == "s <-g 1 with 0.8;\n"


def test_round_trip_motor(motor, motor_text):
    assert parse_program(serialize_program(motor)) == motor


def test_round_trip_preserves_odd_values():
    program = parse_program("p <-p neg2(q) with 9/85;")
    assert parse_program(serialize_program(program)) == program


@settings(max_examples=60)
@given(st.integers(0, 10 ** 9))
def test_round_trip_random_programs(seed):
    rng = random.Random(seed)
    program = random_emalp(rng, max_atoms=4, max_rules=5, max_constraints=2,
                           values=(0.0, 0.25, 1 / 3, 0.5, 1.0))
    assert parse_program(serialize_program(program)) == program


def test_threshold_call_after_matching_tag():
    # the tag and the threshold builtin share the letter g
    program = parse_program("p <-g g(0.5, q) with 1;")
    assert program.rules[0].body == Apply("g", (Const(0.5), Atom("q")))


def test_programmatic_atom_names_validated():
    from emalp import Rule, validate_program

    bad = Program((Rule(Atom("with"), "godel", Const(0.5), 1.0),))
    assert any("invalid atom name" in str(i) for i in validate_program(bad).issues)
    worse = Program((Rule(Atom("a b"), "godel", Const(0.5), 1.0),))
    assert not validate_program(worse).ok


def test_parse_body_helper():
    assert parse_body("min(p, q, 0.5)") == Apply("min", (Atom("p"), Atom("q"), Const(0.5)))
    with pytest.raises(ParseError):
        parse_body("min(p, q) trailing")
