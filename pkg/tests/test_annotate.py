from __future__ import annotations

import csv
import io

import pytest
from hypothesis import given, settings, strategies as st

from newsstance.annotate import (AnnotationError, attach_text, export_annotation_template,
                                 import_annotations, parse_annotations, sample_seed_set)
from newsstance.labels import PartyLabel, StanceLabel

from .conftest import make_article

HEADER = "Usuario\tTipo\tInclinación\tPalabras_Clave\n"


def test_rows_from_the_annotated_sample():
    text = HEADER + (
        "nanobis\tde apoyo\tFrancia Insumisa (LFI)\tpaix en Ukraine\n"
        "Fergus\tde crítica\tPartido Socialista (PS)\tdéfaite de la Russie, défaite de l'Ukraine\n"
        "pierre\tPregunta\tIndeterminado\t\n"
    )
    nanobis, fergus, pierre = parse_annotations(text)
    assert (nanobis.stance, nanobis.party, nanobis.keywords) == (
        StanceLabel.APOYO, PartyLabel.LFI, ("paix en Ukraine",))
    assert fergus.keywords == ("défaite de la Russie", "défaite de l'Ukraine")
    assert (pierre.stance, pierre.party, pierre.keywords) == (
        StanceLabel.PREGUNTA, PartyLabel.INDETERMINADO, ())
    assert nanobis.comment_ref is None


def test_unknown_party_reports_line():
    text = HEADER + "a\tde apoyo\tLFI\tx\nb\tde apoyo\tPartido Pirata\tx\n"
    with pytest.raises(AnnotationError) as info:
        parse_annotations(text)
    assert info.value.line == 3


def test_missing_column_is_file_level_error():
    with pytest.raises(AnnotationError, match="Inclinación"):
        parse_annotations("Usuario\tTipo\tPalabras_Clave\na\tde apoyo\tx\n")
    with pytest.raises(AnnotationError):
        parse_annotations("")


def test_spaced_keyword_header_and_blank_rows():
    text = "Usuario\tTipo\tInclinación\tPalabras Clave\n\t\t\t\nZolko\tde acusación\tRN\thaine\n"
    (row,) = parse_annotations(text)
    assert row.party is PartyLabel.RN and row.keywords == ("haine",)


def _corpus(sizes):
    return [make_article(f"a{i}", [f"comentario {i}.{j}" for j in range(n)]) for i, n in enumerate(sizes)]


def test_seed_sample_is_stratified():
    corpus = _corpus([6] * 60)
    refs = sample_seed_set(corpus, 50, seed=7)
    assert len(refs) == len(set(refs)) == 50
    picked_articles = {r.rsplit("-", 1)[0] for r in refs}
    assert picked_articles == {f"a{i}" for i in range(50)}


def test_seed_sample_edges():
    corpus = _corpus([2, 3])
    assert sample_seed_set(corpus, 0, seed=1) == []
    assert sorted(sample_seed_set(corpus, 99, seed=1)) == sorted(
        c.comment_id for a in corpus for c in a.comments)
    assert sample_seed_set(corpus, 3, seed=5) == sample_seed_set(corpus, 3, seed=5)
    with pytest.raises(ValueError):
        sample_seed_set(_corpus([0, 0]), 3, seed=1)
    with pytest.raises(ValueError):
        sample_seed_set(corpus, -1, seed=1)


@given(st.lists(st.integers(0, 8), min_size=1, max_size=12).filter(any),
       st.integers(0, 80), st.integers(0, 2**32))
def test_seed_sample_properties(sizes, n, seed):
    corpus = _corpus(sizes)
    refs = sample_seed_set(corpus, n, seed)
    total = sum(sizes)
    assert len(refs) == len(set(refs)) == min(n, total)
    # round-robin: no article gets a second pick while another with spare comments has none
    per_article = {}
    for ref in refs:
        guid = ref.rsplit("-", 1)[0]
        per_article[guid] = per_article.get(guid, 0) + 1
    counts = [per_article.get(f"a{i}", 0) for i in range(len(corpus))]
    assert sum(counts) == len(refs)
    for have, size in zip(counts, sizes):
        if have < size:
            assert all(c <= have + 1 for c in counts)


def test_template_layout():
    corpus = _corpus([2, 1])
    text = export_annotation_template([], corpus)
    assert text == "ID\tTítulo\tUsuario\tExtracto\tTipo\tInclinación\tPalabras_Clave\n"
    rows = list(csv.reader(io.StringIO(export_annotation_template(["a0-0", "a0-1", "a1-0"], corpus)),
                           delimiter="\t"))
    assert len(rows) == 4
    assert rows[1][:4] == ["a0-0", "A0", "user0", "comentario 0.0"]
    assert rows[1][4:] == ["", "", ""]
    with pytest.raises(AnnotationError):
        export_annotation_template(["nope"], corpus)


STANCE_SPELLINGS = ["de apoyo", "de crítica", "De acusación", "Rechazo", "de admiración",
                    "Pregunta", "Información"]
PARTY_SPELLINGS = ["Francia Insumisa (LFI)", "Partido Socialista (PS)", "Reagrupación Nacional (RN)",
                   "La République En Marche! (LREM)", "Los Republicanos (LR)", "Indeterminado"]


def fill(template: str, labels) -> str:
    rows = list(csv.reader(io.StringIO(template), delimiter="\t"))
    out = io.StringIO()
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(rows[0])
    for row, (stance, party, keywords) in zip(rows[1:], labels):
        writer.writerow(row[:4] + [stance, party, keywords])
    return out.getvalue()


def test_fill_and_import_every_label(tmp_path):
    corpus = _corpus([4, 4, 4])
    refs = sample_seed_set(corpus, 7, seed=3)
    labels = [(s, PARTY_SPELLINGS[i % 6], f"kw{i}, otro {i}") for i, s in enumerate(STANCE_SPELLINGS)]
    path = tmp_path / "filled.tsv"
    path.write_bytes(b"\xef\xbb\xbf" + fill(export_annotation_template(refs, corpus), labels).encode())
    imported = import_annotations(path)
    assert [a.comment_ref for a in imported] == refs
    assert [a.stance for a in imported] == [StanceLabel.parse(s) for s, _, _ in labels]
    assert [a.party for a in imported] == [PartyLabel.parse(p) for _, p, _ in labels]
    assert {a.stance for a in imported} == set(StanceLabel)
    assert imported[0].keywords == ("kw0", "otro 0")
    full = attach_text(imported, corpus)
    assert all(a.text.startswith("comentario") for a in full)


@settings(max_examples=60)
@given(st.lists(st.tuples(st.sampled_from(list(StanceLabel)), st.sampled_from(list(PartyLabel)),
                          st.lists(st.text("abcdéè ", min_size=1, max_size=8).filter(str.strip),
                                   max_size=3)),
                min_size=1, max_size=8))
def test_export_import_preserves_labels(labels):
    corpus = _corpus([3, 3, 3])
    refs = [c.comment_id for a in corpus for c in a.comments][: len(labels)]
    filled = fill(export_annotation_template(refs, corpus),
                  [(s.render(), p.display_name, ", ".join(k)) for s, p, k in labels])
    imported = parse_annotations(filled)
    assert [(a.comment_ref, a.stance, a.party) for a in imported] == [
        (r, s, p) for r, (s, p, _) in zip(refs, labels)]
    assert [a.keywords for a in imported] == [tuple(k.strip() for k in kw) for _, _, kw in labels]
