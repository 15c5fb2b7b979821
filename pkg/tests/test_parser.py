import functools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eatxt import ElementKind, emit, keyword_suggest, lex, parse, validate
from eatxt.lexer import TokenKind, TriviaKind, detokenize
from eatxt.metamodel import KEYWORDS
from eatxt.parser import levenshtein
from eatxt.synth import generate_model

from conftest import V2112, V22, corpus, parse_clean


@functools.lru_cache(maxsize=None)
def edit_distance(a, b):
    """Plain recursive definition, used only as an oracle."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        edit_distance(a[1:], b) + 1,
        edit_distance(a, b[1:]) + 1,
        edit_distance(a[1:], b[1:]) + (a[0] != b[0]),
    )


def kinds(tokens):
    return [(t.kind, t.text) for t in tokens]


def test_lex_simple():
    tokens, diags = lex("EAPackage P;")
    assert kinds(tokens) == [
        (TokenKind.KEYWORD, "EAPackage"),
        (TokenKind.IDENTIFIER, "P"),
        (TokenKind.PUNCT, ";"),
        (TokenKind.EOF, ""),
    ]
    assert diags == []


def test_lex_comment_is_trivia():
    tokens, diags = lex("// note\n")
    assert kinds(tokens) == [(TokenKind.EOF, "")]
    assert tokens[0].leading[0].kind is TriviaKind.COMMENT
    assert diags == []


def test_lex_unknown_character_skipped():
    tokens, diags = lex("EAPackage P @ ;")
    assert [t.text for t in tokens] == ["EAPackage", "P", ";", ""]
    (d,) = diags
    assert d.code == "E001" and (d.span.line, d.span.column) == (1, 13)


def test_lex_crlf_counts_one_line_break():
    tokens, _ = lex("EAPackage A;\r\nEAPackage B;\r\n")
    b = [t for t in tokens if t.text == "B"][0]
    assert (b.span.line, b.span.column) == (2, 11)


@settings(max_examples=200)
@given(st.lists(st.sampled_from(list("EAPackge {};./\n\r\t@xé_9") + ["EAPackage", "//c"]), max_size=40).map("".join))
def test_lexing_is_lossless(source):
    tokens, _ = lex(source)
    assert detokenize(tokens) == source


@settings(max_examples=200)
@given(st.text(max_size=60))
def test_diagnostic_spans_within_source(source):
    _, diags = parse(source)
    lines = source.replace("\r\n", "\n").split("\n")
    for d in diags:
        assert 1 <= d.span.line <= len(lines)
        assert 1 <= d.span.column <= len(lines[d.span.line - 1]) + 1
        assert 0 <= d.span.offset <= len(source)


def test_parse_nested_port():
    m = parse_clean("EAPackage P { DesignFunctionType FDA { FunctionFlowPort speed { direction in; } } }")
    speed = m.find("/P/FDA/speed")
    assert speed.kind is ElementKind.FunctionFlowPort
    assert speed.attributes == {"direction": "in"}
    assert speed.span.line == 1 and speed.span.column == 40


def test_parse_short_name_typed_instead_of_keyword():
    m, diags = parse("shortName P { }")
    (d,) = diags
    assert d.code == "E002"
    assert (d.span.line, d.span.column) == (1, 1)
    assert "expected one of: EAPackage" in d.message
    assert d.hint == "did you mean the element keyword 'EAPackage'?"
    assert m.roots == ()


def test_parse_empty_element():
    m = parse_clean("EAPackage Empty;")
    (root,) = m.roots
    assert root.short_name == "Empty" and root.is_empty


def test_parse_misspelled_keyword_in_body_gets_suggestion():
    _, diags = parse("EAPackage P { DesignFunctonType T { } EAPackage Q; }")
    (d,) = diags
    assert d.code == "E002"
    assert d.hint == "did you mean the element keyword 'DesignFunctionType'?"


def test_parse_expected_set_listed():
    _, diags = parse("EAPackage P { DesignFunctionType T { ; } }")
    (d,) = diags
    assert d.code == "E001"
    for word in ("DesignFunctionPrototype", "FunctionConnector", "FunctionFlowPort", "'}'"):
        assert word in d.message


def test_parse_missing_close_brace():
    m, diags = parse("EAPackage P { EAPackage Q;")
    assert [d.code for d in diags] == ["E001"]
    assert "end of input" in diags[0].message
    assert m.roots[0].children[0].short_name == "Q"


def test_attribute_names_are_contextual():
    m = parse_clean("EAPackage type { DesignFunctionType from { FunctionFlowPort direction { direction in; } } }")
    assert m.find("/type/from/direction").get("direction") == "in"


def test_duplicate_attribute():
    _, diags = parse("EAPackage P { DesignFunctionType T { FunctionFlowPort a { direction in; direction out; } } }")
    assert [d.code for d in diags] == ["E004"]


def test_keyword_suggest_examples():
    assert keyword_suggest("EAPackge", KEYWORDS) == "EAPackage"
    assert edit_distance("EAPackge", "EAPackage") == 1
    assert keyword_suggest("EAPackage", KEYWORDS) == "EAPackage"
    assert keyword_suggest("zzzz", KEYWORDS) is None
    assert min(edit_distance("zzzz", k) for k in KEYWORDS) > 2


def test_keyword_suggest_requires_unique_minimum():
    assert keyword_suggest("ab", {"aa", "bb"}) is None
    assert keyword_suggest("ab", {"aa", "abc", "xyz"}) is None
    assert keyword_suggest("ab", {"ab", "abc"}) == "ab"


@settings(max_examples=200)
@given(st.text(alphabet="abcAB", max_size=7), st.text(alphabet="abcAB", max_size=7))
def test_levenshtein_matches_recursive_definition(a, b):
    assert levenshtein(a, b) == edit_distance(a, b)


@settings(max_examples=100)
@given(st.text(alphabet="EAPckgDsinFuto", min_size=1, max_size=12))
def test_keyword_suggest_against_brute_force(word):
    scored = sorted((edit_distance(word, k), k) for k in KEYWORDS)
    best = scored[0][0]
    winners = [k for d, k in scored if d == best]
    expected = winners[0] if best <= 2 and len(winners) == 1 else None
    assert keyword_suggest(word, KEYWORDS) == expected


def test_parse_round_trips_generated_models():
    for m in corpus(20):
        again, diags = parse(emit(m), m.version)
        assert diags == []
        from eatxt import model_equal

        assert model_equal(m, again)


def _mutations(text, rng):
    """Break one attribute line of a formatted model in a few different ways."""
    lines = text.split("\n")
    candidates = [i for i, line in enumerate(lines) if line.strip().startswith(("direction", "type", "from", "to"))]
    i = rng.choice(candidates)
    line = lines[i]
    broken = rng.choice(
        [
            line.replace(";", ""),
            line.replace(";", " ;;"),
            line.replace(" ", " @ ", 1),
            line.rstrip(";") + " extra;",
            line.replace(" ", " . ", 1),
        ]
    )
    lines[i] = broken
    return "\n".join(lines), i


def _element_names(model):
    return [el.short_name for el in model.walk()]


@pytest.mark.parametrize("seed", range(30))
def test_bad_attribute_never_hides_siblings(seed):
    rng = random.Random(seed)
    m = generate_model(random.Random(seed), 60, (V2112, V22)[seed % 2])
    text = emit(m)
    mutated, _ = _mutations(text, rng)
    damaged, diags = parse(mutated, m.version)
    assert diags, "mutation should produce a diagnostic"
    assert _element_names(damaged) == _element_names(m)
