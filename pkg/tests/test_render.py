import re

import pytest

from bolza.render import MAX_DEPTH, RenderSpec, render_svg, tiles


def _paths(svg, group):
    block = re.search(rf'<g id="{group}"[^>]*>(.*?)</g>', svg, re.S).group(1)
    return re.findall(r'<path class="geodesic" data-word="([^"]+)" d="([^"]+)"', block)


def test_render_is_deterministic(model):
    spec = RenderSpec(systems=["Sys", "SecondSystoles"], depth=2)
    assert render_svg(spec, model) == render_svg(spec, model)


def test_systole_arcs(model):
    svg = render_svg(RenderSpec(systems=["Sys"]), model)
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    got = _paths(svg, "Sys")
    assert len(got) == 12 and len({w for w, _ in got}) == 12
    assert svg.count("<circle") == 1 + 1 + 8 + 8  # disc, centre, vertices, midpoints


def test_second_systoles_include_four_diameters(model):
    got = _paths(render_svg(RenderSpec(systems=["SecondSystoles"]), model), "SecondSystoles")
    assert len(got) == 12
    # a geodesic through the centre is drawn as a straight segment
    straight = [w for w, d in got if re.search(r"A [\d.]+ [\d.]+ 0 0 [01] ", d) is None]
    assert len(straight) == 4


def test_custom_words(model):
    svg = render_svg(RenderSpec(systems=[], words=["AbCD"]), model)
    assert [w for w, _ in _paths(svg, "custom")] == ["AbCD"]


def test_depth_limits(model):
    with pytest.raises(ValueError):
        RenderSpec(depth=MAX_DEPTH + 1)
    assert len(tiles(0, model)) == 1
    assert len(tiles(1, model)) == 9


def test_unknown_system(model):
    with pytest.raises(ValueError):
        render_svg(RenderSpec(systems=["Nope"]), model)
