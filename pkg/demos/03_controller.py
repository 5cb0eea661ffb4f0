"""Reservoir controllers and the regulatory mechanism.

The hidden layers are frozen random weights; only the 2x9 output layer per
sub-group evolves. One 36-value genotype therefore carries two complete
behaviors, and the regulatory policy decides per robot which one runs.
"""

import numpy as np

from swarmtaxis.controller import (
    RegulatoryPolicy,
    build_reservoir,
    decode,
    forward,
    regulate,
)

# same seed -> same reservoir, forever; different sub-groups use different seeds
green = build_reservoir(1000)
red = build_reservoir(2000)
print(f"reservoir weights frozen in [-1, 1]: "
      f"min {green.w_h1.min():.3f}, max {green.w_h1.max():.3f}")

genotype = np.random.default_rng(7).uniform(-2.0, 2.0, size=36)
layer_green, layer_red = decode(genotype)
inputs = np.random.default_rng(8).uniform(-1.0, 1.0, size=9)
v_g, w_g = forward(green, layer_green, inputs)
v_r, w_r = forward(red, layer_red, inputs)
print(f"same inputs, different phenotypes: green -> v={v_g:+.3f} w={w_g:+.3f}, "
      f"red -> v={v_r:+.3f} w={w_r:+.3f}")

# the regulatory policy maps local light to a green-expression probability,
# re-drawn every 5 simulated seconds
policy = RegulatoryPolicy()
print(f"\npolicy thresholds {policy.thresholds}, probabilities {policy.probabilities}")
rng = np.random.default_rng(9)
for light in (20.0, 150.0, 250.0):
    draws = [regulate(policy, light, rng) for _ in range(10_000)]
    print(f"  light {light:5.1f}: p_green={policy.p_green(light):.2f}, "
          f"observed green fraction {np.mean(np.array(draws) == 0):.3f}")
