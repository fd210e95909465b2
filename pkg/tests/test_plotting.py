from operadix import catalogue as cat
from operadix.plotting import plot_comparison, plot_dimensions
from operadix.series import eval_closed_form

from conftest import entry


def series(name, N=4):
    return cat.entry_series(entry(name), N)


def test_dimensions_png(tmp_path):
    p = tmp_path / "d.png"
    assert plot_dimensions(series("LieR"), p, title="LieR") == p
    assert p.stat().st_size > 1000


def test_single_colour(tmp_path):
    s = cat.doc_series(cat.helper("Lie", ("A",), "A"), 5)
    p = tmp_path / "lie.svg"
    plot_dimensions(s, p)
    assert "<svg" in p.read_text()


def test_comparison_marks_mismatch(tmp_path):
    s = series("MLie")
    expected = eval_closed_form(entry("MLie").expected_series(), 2, 4)
    bad, good = tmp_path / "bad.svg", tmp_path / "good.svg"
    plot_comparison(s, expected, bad, title="MLie")
    plot_comparison(s, s, good)
    # svg keeps legend labels as text comments
    assert "mismatch" in bad.read_text()
    assert "mismatch" not in good.read_text()


def test_comparison_without_expected(tmp_path):
    p = tmp_path / "lp.png"
    plot_comparison(series("LP"), None, p, expected_label="closed form")
    assert p.exists()
