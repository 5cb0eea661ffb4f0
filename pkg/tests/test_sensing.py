import numpy as np
import pytest

from helpers import make_world, oracle_quadrants
from swarmtaxis.fields import ArenaKind, build_arena
from swarmtaxis.sensing import (
    SENSOR_DEFAULT,
    QuadrantReading,
    SensorFrame,
    normalize,
    normalize_all,
    sense,
    sense_all,
)


def test_lone_robot_reads_defaults(center_arena):
    world = make_world([[15.0, 15.0]], [0.0])
    frame = sense(world, 0, center_arena)
    for q in frame.quadrants:
        assert q == QuadrantReading(SENSOR_DEFAULT, 0.0)
    assert frame.light == 255.0


def test_neighbor_dead_ahead(center_arena):
    world = make_world([[10.0, 10.0], [11.0, 10.0]], [0.0, 0.0])
    frame = sense(world, 0, center_arena)
    front, back, left, right = frame.quadrants
    assert front.distance == pytest.approx(1.0)
    assert front.heading == pytest.approx(0.0)
    assert back == QuadrantReading(SENSOR_DEFAULT, 0.0)
    assert left == QuadrantReading(SENSOR_DEFAULT, 0.0)
    assert right == QuadrantReading(SENSOR_DEFAULT, 0.0)


def test_out_of_range_neighbor_ignored(center_arena):
    world = make_world([[10.0, 10.0], [12.5, 10.0]], [0.0, 0.0])
    frame = sense(world, 0, center_arena)
    assert frame.quadrants[0] == QuadrantReading(SENSOR_DEFAULT, 0.0)


def test_boundary_bearing_goes_counterclockwise(center_arena):
    # neighbor at exactly +45 degrees: left quadrant, not front
    d = 1.0 / np.sqrt(2.0)
    world = make_world([[10.0, 10.0], [10.0 + d, 10.0 + d]], [0.0, 0.0])
    frame = sense(world, 0, center_arena)
    assert frame.quadrants[0] == QuadrantReading(SENSOR_DEFAULT, 0.0)  # front empty
    assert frame.quadrants[2].distance == pytest.approx(1.0)  # left hit


def test_matches_exhaustive_oracle(center_arena, rng):
    for _ in range(200):
        n = int(rng.integers(2, 12))
        world = make_world(
            rng.uniform(5.0, 25.0, size=(n, 2)),
            rng.uniform(-np.pi, np.pi, size=n),
        )
        dist, theta, light = sense_all(world, center_arena)
        for i in range(n):
            expected = oracle_quadrants(world.pose, i)
            frame = sense(world, i, center_arena)
            for k in range(4):
                assert frame.quadrants[k].distance == expected[k][0]
                assert frame.quadrants[k].heading == expected[k][1]
                assert dist[i, k] == expected[k][0]
                assert theta[i, k] == expected[k][1]


def test_quadrants_partition_all_neighbors(rng, center_arena):
    # every in-range neighbor lands in exactly one quadrant of the oracle
    for _ in range(50):
        n = int(rng.integers(3, 10))
        world = make_world(
            rng.uniform(14.0, 16.0, size=(n, 2)),
            rng.uniform(-np.pi, np.pi, size=n),
        )
        for i in range(n):
            in_range = sum(
                1
                for j in range(n)
                if j != i and np.linalg.norm(world.pose[j, :2] - world.pose[i, :2]) <= 2.0
            )
            readings = oracle_quadrants(world.pose, i)
            hits = sum(1 for r in readings if r[0] <= 2.0)
            assert hits <= in_range
            if in_range == 0:
                assert hits == 0


def test_translation_invariance(rng):
    field = build_arena(ArenaKind.LINEAR, 10)
    n = 6
    pos = rng.uniform(10.0, 14.0, size=(n, 2))
    headings = rng.uniform(-np.pi, np.pi, size=n)
    w1 = make_world(pos, headings)
    w2 = make_world(pos + np.array([2.5, -1.75]), headings)
    d1, t1, _ = sense_all(w1, field)
    d2, t2, _ = sense_all(w2, field)
    assert np.allclose(d1, d2, atol=1e-12)
    assert np.allclose(t1, t2, atol=1e-12)


def test_quarter_turn_permutes_quadrants(center_arena):
    # rotate the world (and the robot's heading) by 90 degrees:
    # front -> front, but a fixed neighbor cycles front->left->back->right
    base = np.array([10.0, 10.0])
    neighbor = np.array([11.0, 10.0])
    world = make_world([base, neighbor], [0.0, 0.0])
    d0, t0, _ = sense_all(world, center_arena)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])  # +90 degrees about base
    world90 = make_world(
        [base, base + rot @ (neighbor - base)], [np.pi / 2.0, 0.0]
    )
    d90, t90, _ = sense_all(world90, center_arena)
    assert np.allclose(d90[0], d0[0])
    assert np.allclose(t90[0], t0[0], atol=1e-12)


class TestNormalize:
    def test_default_reading_maps_to_one(self):
        frame = SensorFrame(
            quadrants=tuple(QuadrantReading(SENSOR_DEFAULT, 0.0) for _ in range(4)),
            light=0.0,
        )
        out = normalize(frame)
        assert np.allclose(out[0:8:2], 1.0)
        assert np.allclose(out[1:8:2], 0.0)

    def test_light_endpoints(self):
        quadrants = tuple(QuadrantReading(SENSOR_DEFAULT, 0.0) for _ in range(4))
        assert normalize(SensorFrame(quadrants, 255.0))[8] == pytest.approx(1.0)
        assert normalize(SensorFrame(quadrants, 0.0))[8] == pytest.approx(-1.0)

    def test_distance_midpoint(self):
        quadrants = (
            QuadrantReading(1.005, 0.0),
            QuadrantReading(SENSOR_DEFAULT, 0.0),
            QuadrantReading(SENSOR_DEFAULT, 0.0),
            QuadrantReading(SENSOR_DEFAULT, 0.0),
        )
        assert normalize(SensorFrame(quadrants, 100.0))[0] == pytest.approx(0.0)

    def test_all_components_bounded(self, rng, center_arena):
        for _ in range(50):
            n = int(rng.integers(1, 10))
            world = make_world(
                rng.uniform(0.0, 30.0, size=(n, 2)),
                rng.uniform(-np.pi, np.pi, size=n),
            )
            dist, theta, light = sense_all(world, center_arena)
            inputs = normalize_all(dist, theta, light)
            assert np.all(inputs >= -1.0)
            assert np.all(inputs <= 1.0)

    def test_batch_matches_scalar(self, rng, center_arena):
        n = 8
        world = make_world(
            rng.uniform(12.0, 18.0, size=(n, 2)),
            rng.uniform(-np.pi, np.pi, size=n),
        )
        dist, theta, light = sense_all(world, center_arena)
        batch = normalize_all(dist, theta, light)
        for i in range(n):
            assert np.allclose(batch[i], normalize(sense(world, i, center_arena)), atol=1e-12)
