"""Reproducible random streams.

Every stream is a `numpy.random.Generator` on the counter-based Philox bit generator,
seeded by `SeedSequence(seed, spawn_key=keys)`. The key tuple names the purpose of the
stream, so that two consumers of the same seed never share draws:

    (OFFLINE_INPUT,)        offline excitation inputs
    (OFFLINE_DISTURBANCE,)  offline disturbances
    (OFFLINE_NOISE,)        offline output noise
    (ONLINE_NOISE,)         closed-loop output noise
    (ONLINE_DISTURBANCE,)   closed-loop disturbances
    (QUERY,)                random prediction queries
    (OFFLINE_STATE,)        initial states of separate offline experiments
"""
import numpy

OFFLINE_INPUT = 0
OFFLINE_DISTURBANCE = 1
OFFLINE_NOISE = 2
ONLINE_NOISE = 3
ONLINE_DISTURBANCE = 4
QUERY = 5
OFFLINE_STATE = 6


def make_stream(seed, *keys):
    seq = numpy.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return numpy.random.Generator(numpy.random.Philox(seq))
