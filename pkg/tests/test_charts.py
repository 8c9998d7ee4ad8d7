from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rhoext import bockstein as bss
from rhoext.algebra import TruncationWindow
from rhoext.charts import (
    Chart,
    Dot,
    Line,
    chart_of_page,
    display_label,
    dot_totals,
    emit,
    file_name,
    from_tsv,
    slice_totals,
    to_svg,
    to_tsv,
)

GOLDEN = Path(__file__).parent / "golden"
WINDOW = TruncationWindow(weight_cap=2, v_cap=2, a_cap=6, stems=(-2, 6), sigmas=(-4, 4))


@pytest.fixture(scope="module")
def ctx():
    return bss.BSSContext(WINDOW, adams_cap=2)


@pytest.fixture(scope="module")
def charts(ctx):
    inf = bss.einfty_page(ctx)
    return {w: chart_of_page(inf, w) for w in range(WINDOW.weight_cap + 1)}


def test_empty_chart_golden():
    text = (GOLDEN / "empty.tsv").read_text()
    assert to_tsv(Chart(0, "Einf")) == text
    assert from_tsv(text) == Chart(0, "Einf")


@pytest.mark.parametrize("weight", [0, 2])
def test_window_chart_golden(charts, weight):
    text = (GOLDEN / file_name(weight, "Einf", "tsv")).read_text()
    assert emit(charts[weight], "tsv") == text
    assert from_tsv(text) == charts[weight]


def test_weight0_has_periodic_v1(charts):
    d = charts[0].dot((2, 1, "v1"))
    assert d is not None
    assert d.period == 4


def test_weight2_hidden_extension_line(charts):
    line = Line("hidden", (2, 0, "t0^2"), (2, 1, "e1*v1*a^2"))
    assert line in charts[2].lines


def test_hidden_lines_only_from_annotations(charts):
    assert all(ln.kind != "hidden" for w in (0, 1) for ln in charts[w].lines)


def test_weight1_is_weight0_shifted_by_t0(ctx, charts):
    lo, hi = WINDOW.stems
    w0 = {(s + 1, f): n for (s, f), n in dot_totals(ctx, charts[0]).items() if s + 1 <= hi}
    w1 = {k: n for k, n in dot_totals(ctx, charts[1]).items() if k[0] > lo}
    assert w0 == w1


@pytest.mark.parametrize("weight", range(3))
def test_dots_account_for_every_slice_class(ctx, charts, weight):
    assert dot_totals(ctx, charts[weight]) == slice_totals(bss.einfty_page(ctx), weight)


@pytest.mark.parametrize("weight", range(3))
def test_charts_validate_and_round_trip(charts, weight):
    c = charts[weight]
    assert c.validate() == []
    assert from_tsv(to_tsv(c)) == c


def test_lower_page_chart(ctx):
    c = chart_of_page(bss.page(ctx, 1), 0)
    assert c.validate() == []
    assert dot_totals(ctx, c) == slice_totals(bss.page(ctx, 1), 0)


def test_weight_outside_window_rejected(ctx):
    with pytest.raises(ValueError):
        chart_of_page(bss.einfty_page(ctx), 5)


labels = st.sampled_from(["1", "t0", "e1*a^2", "v1", "t0^2*v1*a"])
dots = st.builds(Dot, st.integers(-4, 12), st.integers(0, 5), labels, st.sampled_from([0, 2, 4, 8]), st.integers(0, 4))


@given(st.lists(dots, max_size=8, unique_by=lambda d: d.key), st.data())
def test_tsv_round_trip_property(ds, data):
    lines = []
    if len(ds) >= 2:
        for _ in range(data.draw(st.integers(0, 4))):
            a, b = data.draw(st.sampled_from(ds)), data.draw(st.sampled_from(ds))
            lines.append(Line(data.draw(st.sampled_from(["v0", "a", "v1", "hidden"])), a.key, b.key))
    c = Chart(1, "E3", list(ds), sorted(set(lines)))
    assert from_tsv(to_tsv(c)) == c


def test_svg_is_deterministic_and_has_legend(charts):
    svg = to_svg(charts[0])
    assert svg == emit(charts[0], "svg")
    assert svg.startswith("<?xml") or svg.startswith("<svg")
    assert "v0" in svg and "hidden" in svg


def test_file_name():
    assert file_name(2, "Einf", "svg") == "weight2_pageEinf.svg"
    assert file_name(0, "3", "tsv") == "weight0_page3.tsv"


def test_high_v_suppression_drops_dots_and_lines(ctx):
    inf = bss.einfty_page(ctx)
    full = chart_of_page(inf, 0, hide_v_from=None)
    cut = chart_of_page(inf, 0, hide_v_from=1)
    assert any("v1" in d.label for d in full.dots)
    assert not any("v1" in d.label for d in cut.dots)
    assert not any(ln.kind == "v1" for ln in cut.lines)
    assert not cut.validate()
    assert dot_totals(ctx, cut) == slice_totals(inf, 0, hide_v_from=1)


def test_default_suppression_is_a_no_op_below_v5(ctx, charts):
    assert chart_of_page(bss.einfty_page(ctx), 2, hide_v_from=None) == charts[2]


@pytest.mark.parametrize(
    "label, shown",
    [("t0^2", "e1*u"), ("t0^3*a^2", "t0*a^2*e1*u"), ("t0^2*e1*v1*u^-2", "e1^2*v1*u^-1"), ("t0*v1", "t0*v1"), ("1", "1")],
)
def test_display_label(label, shown):
    assert display_label(label) == shown


def test_relabelled_svg_mentions_the_swap(charts):
    plain = to_svg(charts[2])
    swapped = emit(charts[2], "svg", relabel_t0_squared=True)
    assert "t0^2" in plain and "labels show t0^2 as u*e1" not in plain
    assert "labels show t0^2 as u*e1" in swapped
    assert ">t0^2<" not in swapped and "<title>t0^2" not in swapped
