from __future__ import annotations

import json

import pytest
from hypothesis import given, strategies as st

from newsstance.analysis import InterestMatrix
from newsstance.labels import PartyLabel
from newsstance.tables import (Shares, Table, emit_tables, matrix_from_table, read_table,
                               render_table, to_table)

MATRIX = InterestMatrix(["RN", "LFI", "Indeterminado"], ["Economía", "Seguridad"],
                        [[1, 2], [3, 0], [0, 0]])


def test_matrix_rows_sorted_by_label():
    text = render_table(to_table(MATRIX))
    assert text == "label\tEconomía\tSeguridad\nIndeterminado\t0\t0\nLFI\t3\t0\nRN\t1\t2\n"


def test_shares_have_six_decimals():
    text = render_table(to_table(Shares(MATRIX)))
    assert "RN\t0.333333\t0.666667" in text
    assert "Indeterminado\t0.000000\t0.000000" in text


def test_distribution_and_term_tables():
    dist = {PartyLabel.RN: 2, PartyLabel.LFI: 1, PartyLabel.INDETERMINADO: 1}
    assert render_table(to_table(dist)).splitlines() == [
        "label\tcount\tshare", "Indeterminado\t1\t0.250000", "LFI\t1\t0.250000", "RN\t2\t0.500000"]
    terms = {"Izquierda": [("résistance", 2), ("paix", 1)], "Derecha": [("otan", 1)]}
    assert render_table(to_table(terms)).splitlines()[1:] == [
        "Derecha\t1\totan\t1", "Izquierda\t1\trésistance\t2", "Izquierda\t2\tpaix\t1"]


def test_structured_records():
    lines = render_table(to_table(Shares(MATRIX)), "structured-record").splitlines()
    assert json.loads(lines[0]) == {"label": "Indeterminado", "Economía": 0.0, "Seguridad": 0.0}
    assert json.loads(lines[2])["Economía"] == 0.333333


def test_emit_one_file_per_product(tmp_path):
    paths = emit_tables({"topic_interest": MATRIX, "topic_interest_shares": Shares(MATRIX)}, tmp_path)
    assert [p.name for p in paths] == ["topic_interest.tsv", "topic_interest_shares.tsv"]
    assert matrix_from_table(read_table(paths[0])).counts == [[0, 0], [3, 0], [1, 2]]
    jsonl = emit_tables({"m": MATRIX}, tmp_path, "structured-record")
    assert read_table(jsonl[0]).rows[0] == ["Indeterminado", 0, 0]
    with pytest.raises(ValueError):
        emit_tables({}, tmp_path)
    with pytest.raises(ValueError):
        emit_tables({"m": MATRIX}, tmp_path, "xlsx")
    with pytest.raises(TypeError):
        to_table(42)


@given(rows=st.lists(st.tuples(st.sampled_from(["LFI", "PS", "RN", "LR", "LREM"]),
                          st.integers(0, 50), st.integers(0, 50)),
                min_size=1, max_size=5, unique_by=lambda r: r[0]))
def test_table_files_round_trip(rows, tmp_path_factory):
    m = InterestMatrix([r[0] for r in rows], ["A", "B"], [[r[1], r[2]] for r in rows])
    out = tmp_path_factory.mktemp("t")
    (path,) = emit_tables({"m": m}, out)
    back = matrix_from_table(read_table(path))
    assert back.rows == sorted(m.rows)
    for label in m.rows:
        assert back.counts[back.rows.index(label)] == m.counts[m.rows.index(label)]
    assert render_table(Table(["label", "x"], [["a", 0.5]])) == "label\tx\na\t0.500000\n"
