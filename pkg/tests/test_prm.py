import math
import random

import pytest
from gmpy2 import mpq

from mmsplan import scenes
from mmsplan.geometry import collides
from mmsplan.prm import FloatChecker, Metric, angle_diff, build_roadmap, prm_path_valid, prm_query, to_configuration
from helpers import random_scene


def test_metric_wraps_angle():
    m = Metric(1.0, 4.0)
    assert m.distance((0, 0, math.pi - 0.1), (0, 0, -math.pi + 0.1)) == pytest.approx(0.4)
    assert angle_diff(0.1, -0.1) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        Metric(0.0, 1.0)


def test_float_checker_agrees_with_exact():
    rnd = random.Random(5)
    for _ in range(3):
        scene = random_scene(rnd)
        checker = FloatChecker(scene)
        for _ in range(300):
            q = (rnd.uniform(0, 10), rnd.uniform(0, 10), rnd.uniform(-math.pi, math.pi))
            assert checker.collides(q) == collides(scene, to_configuration(q))


def test_empty_scene_one_component():
    scene, _ = scenes.get("empty")
    rm = build_roadmap(scene, 150, seed=0)
    assert rm.num_components == 1


def test_wall_split_stays_apart():
    scene, q = scenes.get("wall-split")
    rm = build_roadmap(scene, 400, seed=0)
    assert rm.num_components >= 2
    assert prm_query(rm, scene, q.source, q.target) is None


def test_roadmap_determinism():
    scene, _ = scenes.get("snake")
    a = build_roadmap(scene, 300, seed=4)
    b = build_roadmap(scene, 300, seed=4)
    assert a.milestones == b.milestones and a.edges == b.edges
    c = build_roadmap(scene, 300, seed=5)
    assert c.milestones != a.milestones


def test_no_cycles_gives_forest():
    scene, _ = scenes.get("snake")
    rm = build_roadmap(scene, 300, seed=1)
    assert len(rm.edges) == len(rm.milestones) - rm.num_components
    cyc = build_roadmap(scene, 300, seed=1, cycles=True)
    assert len(cyc.edges) > len(cyc.milestones) - cyc.num_components


def test_direct_path():
    scene, _ = scenes.get("empty")
    rm = build_roadmap(scene, 20, seed=0)
    path = prm_query(rm, scene, (3.0, 3.0, 0.0), (3.5, 3.0, 0.1))
    assert path.waypoints == [(3.0, 3.0, 0.0), (3.5, 3.0, 0.1)]


def test_invalid_query():
    scene, q = scenes.get("wall-split")
    rm = build_roadmap(scene, 20, seed=0)
    with pytest.raises(ValueError, match="invalid query"):
        prm_query(rm, scene, (5.0, 5.0, 0.0), q.target)


def test_tunnel_path_valid():
    scene, q = scenes.tunnel(mpq(1, 2))
    rm = build_roadmap(scene, 2000, seed=0)
    path = prm_query(rm, scene, q.source, q.target)
    assert path is not None
    assert prm_path_valid(scene, path, rm.resolution / 2)
    assert path.waypoints[0] == pytest.approx((float(q.source.x), float(q.source.y), q.source.rotation.angle))


def test_bad_budget():
    scene, _ = scenes.get("empty")
    with pytest.raises(ValueError):
        build_roadmap(scene, 0)


@pytest.mark.slow
def test_success_grows_with_budget():
    scene, q = scenes.get("snake")
    rates = []
    for budget in (100, 250, 500):
        ok = sum(prm_query(build_roadmap(scene, budget, seed=s), scene, q.source, q.target) is not None for s in range(20))
        rates.append(ok)
    assert rates == sorted(rates)
    assert rates[-1] == 20
