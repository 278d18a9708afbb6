import xml.etree.ElementTree as ET

import pytest

from sseqbench.chart import Chart
from sseqbench.ko import ko_chart
from sseqbench.render import LayoutError, RenderOptions, render_chart

NS = "{http://www.w3.org/2000/svg}"


def test_ko_render_is_deterministic_and_valid():
    a = render_chart(ko_chart())
    assert a == render_chart(ko_chart())
    root = ET.fromstring(a)
    classes = [e for e in root.iter() if e.get("class") == "class"]
    assert len(classes) == 12
    arrows = [e for e in root.iter(f"{NS}line") if e.get("class") == "d3"]
    assert len(arrows) == 2


def test_labels_toggle():
    with_labels = render_chart(ko_chart())
    without = render_chart(ko_chart(), RenderOptions(labels=False))
    assert "eta^3" in with_labels and "eta^3" not in without


def test_tmf_window_shows_h2g(fx):
    svg = render_chart(fx.tmf, RenderOptions(window=(20, 26, 0, 6)))
    assert "h2g" in svg
    ET.fromstring(svg)


def test_empty_chart():
    svg = render_chart(Chart("empty", (0, 3, 0, 3), {}))
    root = ET.fromstring(svg)
    assert not [e for e in root.iter() if e.get("class") == "class"]


def test_budget():
    with pytest.raises(LayoutError, match="split"):
        render_chart(Chart("huge", (0, 1000, 0, 100), {}))
