import random
from pathlib import Path

import pytest

from ftig.algebra import ALPHA_TF, ALPHAS, CLIENT, SERVICE, Generator, Interface

FIXTURES = Path(__file__).parent / "fixtures"

ENTITIES = ("e1", "e2", "e3", "e4")
ACTIONS = ("a", "b")
MOTIVES = ("m1", "m2", "m3")

# tiny catalog for the reflection oracle: 2 entities x 1 action x 1 motive
TINY_ENTITIES = ("e", "f")
TINY_ACTION = "a"
TINY_MOTIVE = "m"


@pytest.fixture
def rng():
    return random.Random(20260810)


def random_generator(rng, entities=ENTITIES, actions=ACTIONS, motives=MOTIVES,
                     local=False, alphas=(ALPHA_TF,), composite_motives=False):
    polarity = rng.choice((SERVICE, CLIENT))
    if composite_motives:
        motive = tuple(rng.choice(motives) for _ in range(rng.randint(0, 3)))
    else:
        motive = (rng.choice(motives),)
    host = None if local else rng.choice(entities)
    return Generator(rng.choice(entities), rng.choice(actions), motive,
                     polarity, host, rng.choice(alphas))


def random_interface(rng, entities=ENTITIES, actions=ACTIONS, motives=MOTIVES,
                     local=False, alphas=(ALPHA_TF,), max_terms=5,
                     coeff_range=(-3, 3), composite_motives=False):
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        coeff = 0
        while coeff == 0:
            coeff = rng.randint(*coeff_range)
        terms.append((random_generator(rng, entities, actions, motives, local,
                                       alphas, composite_motives), coeff))
    return Interface(terms)


def random_monoid_interface(rng, **kw):
    kw.setdefault("coeff_range", (1, 3))
    return random_interface(rng, **kw)
