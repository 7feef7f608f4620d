"""Adaptive rule deployment by a two-layer winner-take-all network.

Each agent owns a private network whose output neurons are bound to the
candidate generate-and-test rules. Firing is purely local extremal
dynamics: a random input neuron activates, then only the strongest synapse
propagates at each layer. The rule reached stays active for a fixed
interval of learning cycles; an agent ranked in the worst part of the
population gets the synapses along its active path depressed before the
next deployment, so persistently unsuccessful paths lose their argmax and
are abandoned. There is no reward signal, only punishment.

Weights are not clamped at zero: depressed synapses may go negative and
simply stop winning competitions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import uniform_real


@dataclass(frozen=True)
class DeployerParams:
    """Network shape and deployment schedule.

    n_k must equal the number of candidate rules. t_l is the redeploy
    interval in learning cycles; r_w the fraction of agents punished.
    """

    n_k: int
    n_i: int = 3
    n_j: int = 20
    t_l: int = 100
    r_w: float = 0.2

    def __post_init__(self):
        if min(self.n_i, self.n_j, self.n_k) < 1:
            raise ValueError("all layer sizes must be >= 1")
        if self.t_l < 1:
            raise ValueError(f"redeploy interval must be >= 1, got {self.t_l}")
        if not 0.0 < self.r_w < 1.0:
            raise ValueError(f"worse ratio must be in (0, 1), got {self.r_w}")


@dataclass
class DeployerNetwork:
    """Synaptic strengths plus the currently firing path and its countdown.

    w1 has shape (n_j, n_i), w2 has shape (n_k, n_j); w1[j, i] connects
    input i to middle neuron j, w2[k, j] connects middle j to output k.
    """

    w1: np.ndarray
    w2: np.ndarray
    t_l: int
    active_path: tuple | None = None
    cycles_remaining: int = 0


def init_network(params: DeployerParams, rng) -> DeployerNetwork:
    """Fresh network with every synaptic strength drawn uniformly from [0, 1)."""
    w1 = rng.random((params.n_j, params.n_i))
    w2 = rng.random((params.n_k, params.n_j))
    return DeployerNetwork(w1=w1, w2=w2, t_l=params.t_l)


def fire(net: DeployerNetwork, rng) -> int:
    """Pick a rule by extremal dynamics and start a new interval.

    A random input neuron activates; at each layer only the neuron behind
    the maximum synaptic strength fires (argmax ties break to the lowest
    index). Records the traversed path and resets the countdown.
    """
    i = int(rng.integers(0, net.w1.shape[1]))
    j = int(np.argmax(net.w1[:, i]))
    k = int(np.argmax(net.w2[:, j]))
    net.active_path = (i, j, k)
    net.cycles_remaining = net.t_l
    return k


def depress(net: DeployerNetwork, xi: float) -> None:
    """Weaken both synapses along the active path by the same amount."""
    if net.active_path is None:
        raise RuntimeError("cannot depress before the first firing")
    i, j, k = net.active_path
    net.w1[j, i] -= xi
    net.w2[k, j] -= xi


def deploy_step(net: DeployerNetwork, params: DeployerParams, agent_rank_fraction: float, rng) -> int:
    """Advance the deployment clock by one learning cycle; return the rule slot.

    Mid-interval the active rule persists unchanged. At an interval
    boundary the agent is punished first if its published best ranks in the
    worst r_w fraction of the population (rank fraction 0 = best), then the
    network refires to pick the rule for the next interval.
    """
    if net.cycles_remaining <= 0:
        if agent_rank_fraction >= 1.0 - params.r_w:
            depress(net, uniform_real(rng))
        fire(net, rng)
    net.cycles_remaining -= 1
    return net.active_path[2]
