import json
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist
from scipy.stats import ortho_group

from eqsphere.geometry import to_cartesian
from eqsphere.metrics import (
    CoincidentPointsWarning,
    MetricsReport,
    cap_discrepancy,
    compute_metrics,
    covering_radius,
    log_energy,
    max_diameter,
    min_distance,
    packing_density,
    region_diameter,
    riesz_energy,
)
from eqsphere.partition import Interval, Region, eq_partition
from eqsphere.points import CodeSet, eq_points

from conftest import random_unit

ANTIPODES = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])


def sampled_diameter(region, n=61):
    # independent lower bound: all pairwise chords over a dense grid of the region
    grids = [np.linspace(iv.lo, iv.hi, n) for iv in region.intervals]
    mesh = np.meshgrid(*grids, indexing="ij")
    ang = np.stack([m.ravel() for m in mesh], axis=1)
    pts = to_cartesian(ang)
    return float(cdist(pts, pts).max())


def band(t1, t2, w):
    return Region((Interval(t1, t2), Interval(0.0, w)), "zonal")


# --- diameters ------------------------------------------------------------------

def test_diameter_whole_sphere_and_hemisphere():
    assert max_diameter(eq_partition(d=2, N=1)).value == 2.0
    assert max_diameter(eq_partition(d=2, N=1)).ratio == 2.0
    assert max_diameter(eq_partition(d=2, N=2)).value == pytest.approx(2.0, abs=1e-15)
    assert max_diameter(eq_partition(d=3, N=1)).value == 2.0


def test_diameter_cap_pi_over_3():
    cap = Region((Interval(0.0, math.pi / 3), Interval(0.0, 2 * math.pi, True)), "cap_north")
    assert region_diameter(cap) == pytest.approx(2 * math.sin(math.pi / 3), rel=1e-15)
    assert region_diameter(cap) == pytest.approx(1.7321, abs=5e-5)
    # dense sampling of the boundary circle
    phi = np.linspace(0, 2 * math.pi, 20001)
    ring = to_cartesian(np.column_stack([np.full_like(phi, math.pi / 3), phi]))
    far = np.linalg.norm(ring - ring[0], axis=1).max()
    assert far == pytest.approx(region_diameter(cap), abs=1e-7)


def test_diameter_south_cap_mirrors_north():
    n = Region((Interval(0.0, 0.4), Interval(0.0, 2 * math.pi, True)), "cap_north")
    s = Region((Interval(math.pi - 0.4, math.pi, True), Interval(0.0, 2 * math.pi, True)), "cap_south")
    assert region_diameter(n) == pytest.approx(region_diameter(s), rel=1e-15)


@given(
    st.floats(0.0, math.pi),
    st.floats(1e-3, math.pi),
    st.floats(1e-3, 2 * math.pi),
)
@settings(max_examples=80, deadline=None)
def test_band_diameter_exact_against_sampling(t1, h, w):
    t2 = min(math.pi, t1 + h)
    region = band(t1, t2, w)
    exact = region_diameter(region)
    n = 61
    sampled = sampled_diameter(region, n)
    # grid spacing bounds how far the sampled maximum can fall short
    step = (t2 - t1) / (n - 1) + w / (n - 1)
    assert sampled <= exact + 1e-12
    assert exact <= sampled + step


@pytest.mark.parametrize("N", [3, 10, 33, 100])
def test_partition_region_diameters_against_sampling(N):
    tree = eq_partition(d=2, N=N, offset_scheme="stagger")
    for r in tree.regions:
        if r.kind != "zonal":
            continue
        exact = region_diameter(r)
        sampled = sampled_diameter(r, 41)
        assert sampled <= exact + 1e-12
        assert exact <= sampled + 0.1 * exact


def test_high_dimension_diameter_is_a_lower_bound_growing_with_samples():
    tree = eq_partition(d=3, N=50)
    for r in tree.regions:
        if r.kind != "zonal":
            continue
        coarse, fine = region_diameter(r, 5), region_diameter(r, 9)
        # the 5-point grid is a subset of the 9-point grid
        assert coarse <= fine + 1e-15
        assert fine <= 2.0
    est = max_diameter(tree)
    assert not est.exact and est.samples == 5
    assert max_diameter(eq_partition(d=2, N=50)).exact


def test_arc_diameter():
    tree = eq_partition(d=1, N=6)
    assert max_diameter(tree).value == pytest.approx(2 * math.sin(math.pi / 6), rel=1e-14)


@pytest.mark.parametrize("N", [33, 100, 400, 1000])
def test_diameter_ratio_bounded(N):
    assert max_diameter(eq_partition(d=2, N=N)).ratio <= 7.0


# --- separation and packing ---------------------------------------------------

def test_min_distance_antipodal_pair():
    assert min_distance(ANTIPODES) == 2.0
    assert min_distance(ANTIPODES, method="tree") == 2.0


@pytest.mark.parametrize("N", [2, 3, 7, 64, 1000])
def test_min_distance_circle(N):
    code = eq_points(eq_partition(d=1, N=N))
    assert min_distance(code) == pytest.approx(2 * math.sin(math.pi / N), rel=1e-13)


def test_min_distance_needs_two_points():
    with pytest.raises(ValueError):
        min_distance(np.array([[1.0, 0.0, 0.0]]))
    with pytest.raises(ValueError):
        min_distance(ANTIPODES, method="grid")


def test_min_distance_eqp_2_33_tree_equals_brute():
    code = eq_points(eq_partition(d=2, N=33))
    assert min_distance(code, method="tree") == min_distance(code, method="brute")


def test_min_distance_tree_equals_brute_on_random_codes():
    rng = np.random.default_rng(7)
    for k in range(50):
        d = int(rng.integers(1, 5))
        n = int(rng.integers(2, 501))
        pts = random_unit(d, n, seed=1000 + k)
        if k % 5 == 0:
            # near-duplicates stress the candidate radius
            pts[-1] = pts[0] + 1e-9
            pts[-1] /= np.linalg.norm(pts[-1])
        assert min_distance(pts, method="tree") == min_distance(pts, method="brute"), k


def test_packing_density_examples():
    assert packing_density(ANTIPODES) == pytest.approx(1.0, rel=1e-15)
    for N in (2, 5, 17, 360):
        assert packing_density(eq_points(eq_partition(d=1, N=N))) == pytest.approx(1.0, rel=1e-12)


def test_packing_density_matches_monte_carlo_union_area():
    code = eq_points(eq_partition(d=2, N=400))
    density = packing_density(code)
    radius = 2 * math.asin(min_distance(code) / 2) / 2
    chord = 2 * math.sin(radius / 2)
    kd = cKDTree(code.points)
    rng = np.random.default_rng(11)
    hit, total = 0, 0
    for _ in range(8):
        xs = random_unit(2, 500_000, int(rng.integers(2**32)))
        dist, _ = kd.query(xs)
        hit += int((dist <= chord).sum())
        total += len(xs)
    assert abs(hit / total - density) <= 1e-3
    assert 0 < density <= 1


# --- covering -----------------------------------------------------------------

def test_covering_radius_single_point():
    code = np.array([[1.0, 0.0, 0.0]])
    r = covering_radius(code, samples=100_000, seed=3)
    assert math.pi - 0.05 < r <= math.pi


def test_covering_radius_is_deterministic_and_monotone():
    code = eq_points(eq_partition(d=2, N=200))
    prev = 0.0
    for n in (1000, 2000, 4000, 8000, 16000):
        r = covering_radius(code, samples=n, seed=5)
        assert r == covering_radius(code, samples=n, seed=5)
        assert r >= prev
        prev = r


def test_covering_radius_chunking_invariant():
    code = eq_points(eq_partition(d=3, N=80))
    assert covering_radius(code, 5000, seed=2, chunk=777) == covering_radius(code, 5000, seed=2)


def test_covering_radius_rejects_zero_samples():
    with pytest.raises(ValueError):
        covering_radius(ANTIPODES, samples=0)


# --- energies -----------------------------------------------------------------

def test_riesz_antipodal_pair():
    assert riesz_energy(ANTIPODES, 1.0) == pytest.approx(0.25, rel=1e-15)


def test_log_antipodal_pair():
    assert log_energy(ANTIPODES) == pytest.approx(-math.log(2) / 2, rel=1e-15)
    assert log_energy(ANTIPODES) == pytest.approx(-0.34657, abs=5e-6)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.5])
def test_riesz_matches_direct_double_loop(s):
    pts = random_unit(3, 60, seed=4)
    total = 0.0
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i != j:
                total += np.linalg.norm(pts[i] - pts[j]) ** (-s)
    assert riesz_energy(pts, s) == pytest.approx(total / 60**2, rel=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_energies_rotation_invariant(d):
    pts = eq_points(eq_partition(d=d, N=150)).points
    Q = ortho_group.rvs(d + 1, random_state=9)
    rotated = pts @ Q.T
    for s in (1.0, 2.0):
        assert riesz_energy(rotated, s) == pytest.approx(riesz_energy(pts, s), rel=1e-10)
    assert log_energy(rotated) == pytest.approx(log_energy(pts), rel=1e-10)


def test_energy_independent_of_block_size(monkeypatch):
    import eqsphere.metrics as M

    pts = random_unit(2, 1300, seed=8)
    ref = riesz_energy(pts, 1.0)
    monkeypatch.setattr(M, "BLOCK", 97)
    assert M.riesz_energy(pts, 1.0) == ref


def test_coincident_points_give_infinity_and_warn():
    pts = np.array([[1.0, 0, 0], [0, 1.0, 0], [1.0, 0, 0]])
    with pytest.warns(CoincidentPointsWarning, match="0 and 2"):
        assert riesz_energy(pts, 1.0) == math.inf
    with pytest.warns(CoincidentPointsWarning):
        assert log_energy(pts) == math.inf


def test_riesz_rejects_bad_input():
    with pytest.raises(ValueError):
        riesz_energy(ANTIPODES, 0.0)
    with pytest.raises(ValueError):
        log_energy(ANTIPODES[:1])


# --- discrepancy --------------------------------------------------------------

def test_discrepancy_single_point_is_one():
    assert cap_discrepancy(np.array([[0.0, 1.0, 0.0]]), trials=100) == pytest.approx(1.0)


def test_discrepancy_monotone_in_trials_and_reproducible():
    code = random_unit(2, 150, seed=12)
    prev = 0.0
    for t in (10, 100, 1000, 10000):
        v = cap_discrepancy(code, trials=t, seed=4)
        assert v == cap_discrepancy(code, trials=t, seed=4)
        assert prev <= v <= 1
        prev = v


def discrepancy_oracle(pts, trials, seed):
    # independent membership test: geodesic angle via atan2, radii enumerated explicitly
    from eqsphere.geometry import cap_area, sphere_area

    d = pts.shape[1] - 1
    n = len(pts)
    frac = lambda r: cap_area(d, r) / sphere_area(d)

    def angle(a, b):
        return math.atan2(np.linalg.norm(a - b * np.dot(a, b)), np.dot(a, b))

    g = np.random.default_rng([seed, 1]).standard_normal((trials, d + 1))
    centres = g / np.linalg.norm(g, axis=1, keepdims=True)
    radii = np.random.default_rng([seed, 2]).uniform(0.0, math.pi, trials)
    worst = 0.0
    for c, r in zip(centres, radii):
        k = sum(angle(p, c) <= r for p in pts)
        worst = max(worst, abs(k / n - frac(r)))
    for c in pts:
        angs = sorted(angle(p, c) for p in pts)
        for k, a in enumerate(angs, start=1):
            worst = max(worst, k / n - frac(a), frac(a) - (k - 1) / n)
    return worst


@pytest.mark.parametrize("d, n, seed", [(2, 7, 0), (2, 20, 3), (3, 12, 5)])
def test_discrepancy_matches_scalar_oracle(d, n, seed):
    pts = random_unit(d, n, seed=seed + 100)
    assert cap_discrepancy(pts, trials=300, seed=seed) == pytest.approx(
        discrepancy_oracle(pts, 300, seed), abs=1e-9)


def test_discrepancy_decreases_for_eqp():
    vals = [cap_discrepancy(eq_points(eq_partition(d=2, N=N)), trials=2000) for N in (33, 100, 400)]
    assert vals[0] > vals[1] > vals[2]


# --- report -------------------------------------------------------------------

def test_compute_metrics_report_fields():
    tree = eq_partition(d=2, N=100)
    rep = compute_metrics(eq_points(tree), tree, s_values=(1, 2), samples=5000, trials=500, seed=3)
    assert isinstance(rep, MetricsReport)
    assert rep.N == 100 and rep.d == 2 and rep.seed == 3 and rep.mc_samples == 5000
    assert set(rep.riesz_energy) == {"1.0", "2.0"}
    assert 0 < rep.packing_density <= 1
    assert 0 <= rep.cap_discrepancy_estimate <= 1
    assert 0 < rep.min_distance <= 2
    assert rep.min_distance_ratio == pytest.approx(rep.min_distance * 10)
    assert rep.diameter_ratio == pytest.approx(rep.max_region_diameter * 10)
    assert rep.diameter_exact is True


def test_report_serialisation():
    code = eq_points(eq_partition(d=2, N=40))
    rep = compute_metrics(code, s_values=(1.0,), samples=2000, trials=200)
    doc = json.loads(rep.to_json())
    assert doc["schema_version"] == 1
    assert doc["max_region_diameter"] is None
    assert doc["riesz_energy"]["1.0"] == rep.riesz_energy["1.0"]
    header, row, *rest = rep.to_csv().splitlines()
    assert rest == []
    cols = header.split(",")
    assert "riesz_energy_s=1.0" in cols and "covering_radius_estimate" in cols
    values = dict(zip(cols, row.split(",")))
    assert float(values["log_energy"]) == rep.log_energy
    assert values["max_region_diameter"] == ""
    assert compute_metrics(code, samples=2000, trials=200).to_json() == rep.to_json()


def test_metrics_accept_codeset_and_array_alike():
    code = eq_points(eq_partition(d=3, N=30))
    assert log_energy(code) == log_energy(np.array(code.points))
    assert isinstance(code, CodeSet)


def test_no_warnings_for_regular_codes():
    code = eq_points(eq_partition(d=2, N=50))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        riesz_energy(code, 1.0)
        log_energy(code)
