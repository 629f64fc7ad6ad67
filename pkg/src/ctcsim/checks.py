"""Randomized property suite for the fixed-point solvers.

Each instance draws a Haar-random interaction on 1-2 CR qubits and a 2- or
4-dimensional CTC, with a random pure CR input, and checks that the induced
channel is CPTP, that the averaged-orbit solver converges, and that its
answer lies in the affine set found from the nullspace.
"""
from dataclasses import dataclass

import numpy as np

from . import qlin
from .dctc import (
    RESIDUAL_ACCEPT,
    ConvergenceError,
    fixed_point_space,
    induced_channel,
    solve_fixed_point,
)

AGREEMENT_TOL = 1e-7


@dataclass
class InstanceResult:
    index: int
    d_cr: int
    d_ctc: int
    residual: float
    agreement: float
    problems: list

    @property
    def passed(self) -> bool:
        return not self.problems


def random_instance(rng: np.random.Generator):
    d_cr = 2 ** int(rng.integers(1, 3))
    d_ctc = int(rng.choice([2, 4]))
    u = qlin.haar_unitary(d_cr * d_ctc, rng)
    rho_in = qlin.random_pure_state(d_cr, rng)
    return u, rho_in


def run_instance(index: int, seed_seq: np.random.SeedSequence, corrupt: bool = False) -> InstanceResult:
    rng = np.random.default_rng(seed_seq)
    u, rho_in = random_instance(rng)
    ch = induced_channel(u, rho_in)
    if corrupt:
        ch.superoperator = 1.01 * ch.superoperator
    d_cr, d_ctc = rho_in.shape[0], ch.d_ctc
    problems = ch.check()
    if problems:
        return InstanceResult(index, d_cr, d_ctc, np.nan, np.nan, problems)
    residual = agreement = np.nan
    try:
        rho = solve_fixed_point(ch, "canonical")
        residual = ch.residual(rho)
        agreement = fixed_point_space(ch, extremes=False).distance(rho)
    except ConvergenceError as exc:
        problems.append(str(exc))
    if residual > RESIDUAL_ACCEPT:
        problems.append(f"residual {residual:.3g} above {RESIDUAL_ACCEPT:g}")
    if agreement > AGREEMENT_TOL:
        problems.append(f"nullspace and orbit solutions disagree by {agreement:.3g}")
    return InstanceResult(index, d_cr, d_ctc, residual, agreement, problems)


def run_property_suite(seed: int, count: int, corrupt: bool = False) -> list[InstanceResult]:
    """Run ``count`` independent instances; instance ``k`` depends only on ``(seed, k)``."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [run_instance(k, s, corrupt) for k, s in enumerate(children)]
