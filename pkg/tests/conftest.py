import random
from pathlib import Path

import pytest

from fuzzyforce import (
    AXES,
    Grip,
    MoveL,
    Pose,
    RobotProgram,
    Scene,
    SceneObject,
    SetForce,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def scenarios_dir() -> Path:
    return SCENARIOS


def random_pose(rng: random.Random, quantize: bool = False) -> Pose:
    def coord():
        v = rng.uniform(-500.0, 500.0)
        return round(v, 6) if quantize else v

    return Pose(
        coord(),
        coord(),
        coord(),
        rng.uniform(-400.0, 400.0),
        rng.uniform(-400.0, 400.0),
        rng.uniform(-400.0, 400.0),
    )


def random_scene(rng: random.Random) -> Scene:
    objects = []
    for i in range(rng.randint(1, 6)):
        tags = rng.choice([("pick",), ("place",), ("obstacle",), ("pick", "obstacle"), ("place", "obstacle")])
        objects.append(SceneObject(f"part{i}", random_pose(rng), frozenset(tags)))
    return Scene(tuple(objects), clearance=rng.uniform(1.0, 80.0), speed=rng.uniform(1.0, 200.0))


def random_program(rng: random.Random) -> RobotProgram:
    # positions quantized to 1e-6 mm so the 6-decimal program text
    # round-trips exactly
    instructions = [MoveL(random_pose(rng, quantize=True), round(rng.uniform(1.0, 200.0), 3))]
    held = False
    for _ in range(rng.randint(0, 15)):
        roll = rng.random()
        if roll < 0.5:
            instructions.append(MoveL(random_pose(rng, quantize=True), round(rng.uniform(1.0, 200.0), 3)))
        elif roll < 0.8:
            instructions.append(Grip(not held))
            held = not held
        else:
            instructions.append(SetForce(rng.choice(AXES), rng.uniform(-50.0, 50.0)))
    if held:
        instructions.append(Grip(False))
    return RobotProgram(tuple(instructions))
