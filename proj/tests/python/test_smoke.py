import math
import os
from pathlib import Path

import pytest

polyproj = pytest.importorskip("polyproj")

DATA = Path(os.environ.get("POLYPROJ_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def toy_region():
    region = polyproj.make_region(
        2,
        [[1.0, 1.0, -1.0]],
        [0.0],
        [[0, 0, 1], [-1, 0, 0], [0, -1, 0], [1, 0, 0], [0, 1, 0]],
        [1.5, 0, 0, 1, 1],
    )
    region.w_max = [1.0, 1.0]
    return region


def test_toy_projection_matches_fme():
    region = toy_region()
    result = polyproj.phi_run(region)
    poly = result.polytope
    assert not result.iteration_cap_reached
    assert poly.count("Discovered") == 1
    normal, offset, prov = poly.facets[-1]
    assert prov == "Discovered"
    assert normal[0] == pytest.approx(math.sqrt(0.5))
    assert offset == pytest.approx(-1.5 * math.sqrt(0.5))
    equal, violation = polyproj.regions_equivalent(poly, polyproj.fme_project(region), 1e-6)
    assert equal and violation < 1e-6


def test_membership_and_support():
    region = toy_region()
    assert polyproj.membership(region, [0.5, 0.5])
    assert not polyproj.membership(region, [1.0, 0.9])
    assert polyproj.support_value(region, [1.0, 1.0]) == pytest.approx(1.5)


def test_classification_report():
    region = toy_region()
    poly = polyproj.phi_run(region).polytope
    report = polyproj.classify_samples(region, poly, 2000, 7)
    assert report["E_r"] == 0.0
    assert sum(report["color_counts"].values()) == 2000
    assert polyproj.classify_samples(region, poly, 2000, 7) == report


def test_round_trip_and_vertices():
    region = polyproj.LinearRegion.from_json((DATA / "toy_region.json").read_text())
    poly = polyproj.phi_run(region).polytope
    again = polyproj.Polytope.from_json(poly.to_json())
    assert again.facets == poly.facets
    assert len(polyproj.enumerate_vertices(poly)) == 5
    for _, validity, support in polyproj.facet_support_audit(region, poly):
        assert validity <= 1e-7 and support <= 1e-6


def test_network_region_and_errors():
    region = polyproj.build_region(str(DATA / "two_bus.json"), [2], [0.5])
    assert region.n_w == 1
    assert region.columns[0] == "w[2]"
    with pytest.raises(polyproj.ValidationError):
        polyproj.build_region(str(DATA / "two_bus.json"), [7], [0.5])
    with pytest.raises(polyproj.ParseError):
        polyproj.LinearRegion.from_json("{")
    with pytest.raises(polyproj.Error):
        polyproj.phi_run(region, phi_deg=-1.0)
