from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibcat import corpus as cp
from fibcat.acceptance import corrupt_composition
from fibcat.errors import DocumentValidationError, FormatSyntaxError, UnresolvedReference
from fibcat.textformat import Document, parse, parse_file, print_document, quote, same_document, tokenize

from strategies import small_categories

CORPUS = {k: print_document(d) for k, d in cp.corpus().items()}


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    for k, text in CORPUS.items():
        (root / k).write_text(text, encoding="utf-8")
    return root


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_files_are_fixed_points(corpus_dir, name):
    doc = parse_file(corpus_dir / name)
    assert print_document(doc) == CORPUS[name]


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_reparse_preserves_structure(corpus_dir, name):
    doc = parse_file(corpus_dir / name)
    again = parse(print_document(doc), base_dir=corpus_dir)
    assert same_document(doc, again)


def test_corrupted_composite_is_located(tmp_path):
    text, line = corrupt_composition(CORPUS[cp.CATEGORY_FILE])
    (tmp_path / "bad.fcat").write_text(text, encoding="utf-8")
    with pytest.raises(DocumentValidationError) as exc:
        parse_file(tmp_path / "bad.fcat")
    assert exc.value.line == line


def test_syntax_error_carries_line_and_column():
    text = "category C\n  object x\n  arrow f x -> x\nend\n"
    with pytest.raises(FormatSyntaxError) as exc:
        parse(text)
    assert exc.value.line == 3
    assert exc.value.col >= 1


def test_missing_end_is_reported_at_block_head():
    with pytest.raises(FormatSyntaxError) as exc:
        parse("\n\ncategory C\n  object x\n")
    assert exc.value.line == 3


def test_unknown_category_reference():
    text = "functor F : A -> B\nend\n"
    with pytest.raises(UnresolvedReference) as exc:
        parse(text)
    assert "A" in exc.value.name


def test_missing_include_is_an_error(tmp_path):
    (tmp_path / "a.fcat").write_text("include nowhere.fcat\n", encoding="utf-8")
    with pytest.raises(Exception) as exc:
        parse_file(tmp_path / "a.fcat")
    assert "nowhere.fcat" in str(exc.value)


def test_include_cycle_is_rejected(tmp_path):
    (tmp_path / "a.fcat").write_text("include b.fcat\n", encoding="utf-8")
    (tmp_path / "b.fcat").write_text("include a.fcat\n", encoding="utf-8")
    with pytest.raises(FormatSyntaxError):
        parse_file(tmp_path / "a.fcat")


def test_comments_and_blank_lines_are_ignored():
    doc = parse("# two objects\n\ncategory C  # trailing\n  object x\n  arrow i : x -> x\n  identity x = i\n  comp i i = i\nend\n")
    assert doc.value("C").n_arr == 1


@given(small_categories())
def test_categories_round_trip(C):
    doc = Document()
    doc.category("C", C)
    text = print_document(doc)
    back = parse(text)
    assert back.value("C") == C
    assert print_document(back) == text


names = st.text(st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=6)


@given(names)
def test_quoted_names_tokenize_back(name):
    toks = tokenize(f"object {quote(name)}", 1)
    assert [t.text for t in toks] == ["object", name]


@given(st.lists(names, min_size=1, max_size=4, unique=True))
def test_discrete_categories_with_awkward_names_round_trip(labels):
    from fibcat.category import discrete_category

    C = discrete_category(labels).relabel(obj_labels=labels, arr_labels=[f"id:{x}" for x in labels])
    doc = Document()
    doc.category("weird name", C)
    back = parse(print_document(doc))
    assert back.value("weird name").same_labels(C)
