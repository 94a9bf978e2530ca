import pytest

import lwlite

OVERLOADING = """\
overload add : 'a -> 'a -> 'a
let twice x = add x x
let twice_one = twice 1
let over add a b = a + b
let four = twice twice_one
"""


def test_check_reports_binding_types():
    bindings = dict(lwlite.check(OVERLOADING))
    assert bindings["twice"] == "{ add : 'a -> 'a -> 'a } => 'a -> 'a"
    assert bindings["four"] == "int"


def test_run_evaluates_ground_bindings():
    values = dict(lwlite.run(OVERLOADING))
    assert values == {"four": "4"}


def test_core_emits_dictionary_passing():
    core = lwlite.core(OVERLOADING)
    assert "fun add%1 x -> add%1 x x" in core


def test_type_of_expression_with_prelude():
    assert lwlite.type_of("1 + 2") == "int"
    t = lwlite.type_of("eject multR", prelude="let multR r = foldl r.times r.one")
    assert t == "{ ?one : 'a; ?times : 'b -> 'a -> 'a } => 'b list -> 'a"


def test_inject_eject_round_trip():
    prelude = (
        "overload zero : 'a\n"
        "overload add : 'a -> 'a -> 'a\n"
        "let rec sum l = match l with | [] -> zero | x :: xs -> add x (sum xs)\n"
    )
    assert (
        lwlite.type_of("eject (inject sum)", prelude=prelude)
        == "{ add : 'a -> 'a -> 'a; zero : 'a } => 'a list -> 'a"
    )


def test_errors_raise():
    with pytest.raises(RuntimeError):
        lwlite.check("let x = nodef")
