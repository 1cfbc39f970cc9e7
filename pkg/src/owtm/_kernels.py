"""Numba-compiled update and evaluation kernels for the clause banks.

All functions take raw state arrays so they stay allocation-free inside the
training loop. The `gen` argument is a ``numpy.random.Generator``; numba
shares its bit-generator state with the interpreter, so a single seeded
generator drives the whole training run deterministically.

State convention: automaton states live in [1, 2N]; action is Include iff
state > N. Literal k in [0, o) is the plain feature x_k, literal o + k is
its negation. During training an empty clause (no includes) evaluates to 1,
during inference to 0.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _clamp(v, t):
    if v > t:
        return t
    if v < -t:
        return -t
    return v


@njit(cache=True)
def activation_probabilities(vote, vote_target):
    """Feedback activation probabilities for a (clamped) vote sum.

    Returns (p_when_target_1, p_when_target_0). Both lie in [0, 1] for any
    vote because of the clamp.
    """
    vc = _clamp(vote, vote_target)
    p1 = (vote_target - vc) / (2.0 * vote_target)
    p0 = (vote_target + vc) / (2.0 * vote_target)
    return p1, p0


@njit(cache=True)
def clause_output(states, row, x, n_states, training):
    """Evaluate clause `row` on one example. Conjunction over included literals."""
    o = states.shape[1] // 2
    empty = True
    for k in range(o):
        if states[row, k] > n_states:
            empty = False
            if x[k] == 0:
                return 0
        if states[row, o + k] > n_states:
            empty = False
            if x[k] == 1:
                return 0
    if empty and not training:
        return 0
    return 1


@njit(cache=True)
def type_i(states, row, x, output, sensitivity, n_states, gen):
    """Frequent-pattern feedback on one clause.

    Matching clause: satisfied literals are pushed toward Include with
    probability (s-1)/s, unsatisfied ones toward Exclude with probability
    1/s. Non-matching clause: every automaton drifts toward Exclude with
    probability 1/s.
    """
    o = states.shape[1] // 2
    p_reward = (sensitivity - 1.0) / sensitivity
    p_penalty = 1.0 / sensitivity
    if output == 1:
        for k in range(o):
            if x[k] == 1:
                if gen.random() < p_reward and states[row, k] < 2 * n_states:
                    states[row, k] += 1
                if gen.random() < p_penalty and states[row, o + k] > 1:
                    states[row, o + k] -= 1
            else:
                if gen.random() < p_penalty and states[row, k] > 1:
                    states[row, k] -= 1
                if gen.random() < p_reward and states[row, o + k] < 2 * n_states:
                    states[row, o + k] += 1
    else:
        for kk in range(2 * o):
            if gen.random() < p_penalty and states[row, kk] > 1:
                states[row, kk] -= 1


@njit(cache=True)
def type_ii(states, row, x, output, n_states):
    """Discrimination feedback: on a matching clause, step every excluded
    literal whose value is 0 one state toward Include. Deterministic."""
    if output != 1:
        return
    o = states.shape[1] // 2
    for k in range(o):
        if x[k] == 0 and states[row, k] <= n_states:
            states[row, k] += 1
        if x[k] == 1 and states[row, o + k] <= n_states:
            states[row, o + k] += 1


@njit(cache=True)
def fit_epochs(states, X, y, n_pos, vote_target, sensitivity, n_states, epochs, gen):
    """Run the full feedback loop: `epochs` passes over shuffled examples.

    Clause outputs and the vote sum are computed once per example, before
    any state update, so the per-clause updates are order-independent.
    """
    m = states.shape[0]
    n = X.shape[0]
    order = np.arange(n)
    outputs = np.empty(m, np.uint8)
    for _ in range(epochs):
        for i in range(n - 1, 0, -1):
            j = int(gen.integers(0, i + 1))
            tmp = order[i]
            order[i] = order[j]
            order[j] = tmp
        for idx in range(n):
            e = order[idx]
            x = X[e]
            target = y[e]
            vote = 0
            for row in range(m):
                out = clause_output(states, row, x, n_states, True)
                outputs[row] = out
                if out == 1:
                    vote += 1 if row < n_pos else -1
            p1, p0 = activation_probabilities(vote, vote_target)
            p_act = p1 if target == 1 else p0
            for row in range(m):
                if gen.random() >= p_act:
                    continue
                positive = row < n_pos
                if (target == 1) == positive:
                    type_i(states, row, x, outputs[row], sensitivity, n_states, gen)
                else:
                    type_ii(states, row, x, outputs[row], n_states)


def warmup() -> None:
    """Force JIT compilation of the training path (first call per process)."""
    states = np.full((2, 4), 3, dtype=np.int32)
    x = np.zeros((1, 2), dtype=np.uint8)
    y = np.ones(1, dtype=np.uint8)
    fit_epochs(states, x, y, 1, 1, 2.0, 2, 1, np.random.default_rng(0))
