"""Random query suites shared by the oracle-agreement and invariant tests."""
import random

from xq.compile import circuit_to_mlp
from xq.random_models import (
    random_bool_circuit,
    random_fbdd,
    random_instance,
    random_mlp,
    random_partial_of,
    random_perceptron,
)


def fbdd_case(rng, n_max=12):
    n = rng.randint(1, n_max)
    return random_fbdd(rng, n, rng.randint(0, 3 * n)), n


def perceptron_case(rng, n_max=12):
    n = rng.randint(1, n_max)
    return random_perceptron(rng, n, integer=rng.random() < 0.3), n


def mlp_case(rng, n_max=12):
    n = rng.randint(1, n_max)
    if rng.random() < 0.3:
        return circuit_to_mlp(random_bool_circuit(rng, n, rng.randint(1, 6))), n
    hidden = tuple(rng.randint(1, 4) for _ in range(rng.randint(1, 2)))
    return random_mlp(rng, n, hidden=hidden, bound=rng.choice((2, 4, 8))), n


CASES = {"fbdd": fbdd_case, "perceptron": perceptron_case, "mlp": mlp_case}


def query_cases(family, query, count, seed, n_max=12):
    """Yields ``(model, x, y, k)`` tuples; ``y`` is a random partial instance completed by ``x``."""
    rng = random.Random(f"{family}-{query}-{seed}")
    for _ in range(count):
        model, n = CASES[family](rng, n_max)
        x = random_instance(rng, n)
        y = random_partial_of(rng, x, rng.random())
        k = rng.randint(0, min(n, 4 if query == "msr" else n))
        yield model, x, y, k
