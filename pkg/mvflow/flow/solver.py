#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Flow Solver

This module provides the evolution engine of the mixed-volume-preserving
flow dh/dt = phi_bar - Phi(F) in support-function variables: the global term,
the normal speed, the explicit stability bound, the two-stage midpoint step
and the run loop with termination classification.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from mvflow.analysis.monitor import record
from mvflow.curvature.functions import evaluate, evaluate_phi
from mvflow.geometry.bodies import make_body
from mvflow.geometry.support import curvatures, _grid
from mvflow.utils.error_handler import ConfigError, ConvexityLossError, DomainError, MVFlowError
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# max|speed| below this fraction of max Phi counts as stationary
STATIONARY_TOLERANCE = 1e-13

# Largest perturbation of h used by the integral identity, relative to mean h
IDENTITY_PERTURBATION = 1e-5


@dataclass(frozen=True)
class FlowLaw:
    """
    The flow law dh/dt = phi_bar_m - F^beta.

    Attributes:
        spec (CurvatureSpec): Curvature function F
        beta (float): Exponent of the speed
        m_index (int): Preserved mixed volume V_{n-m}
    """
    spec: object
    beta: float
    m_index: int


def _weight(curv, m_index):
    """E_{m+1}(lam) times the area weight; the plain area weight for m = -1."""
    return curv.curvature_integrand(m_index + 1)


def global_term(state, spec, beta, m_index):
    """
    The averaged speed phi_bar_m = int E_{m+1} Phi dmu / int E_{m+1} dmu.

    Args:
        state: Flow state or grid
        spec (CurvatureSpec): Curvature function
        beta (float): Exponent
        m_index (int): Preserved index, E_0 = 1 when m = -1

    Returns:
        float: phi_bar, strictly positive

    Raises:
        MVFlowError: If the weight integral is not positive
    """
    curv = curvatures(state)
    phi = np.asarray(evaluate_phi(spec, beta, curv.lam, order=0).value)
    return _averaged(curv, phi, m_index)


def speed_field(state, spec, beta, phi_bar):
    """
    Normal speed phi_bar - Phi(F(lam)) at every node.

    Returns:
        numpy.ndarray: Speed per node
    """
    curv = curvatures(state)
    phi = np.asarray(evaluate_phi(spec, beta, curv.lam, order=0).value)
    return phi_bar - phi


def stable_dt(state, spec, beta, cfl_safety):
    """
    Explicit stability bound cfl * spacing^2 / max(beta F^(beta-1) sum f_i / min R^2).

    The bound is further scaled by the grid's stability factor (finite-difference
    order and number of angular directions).

    Returns:
        float: Time step
    """
    grid = _grid(state)
    curv = grid.curvatures()
    bundle = evaluate(spec, curv.lam, order=1)
    return _stability_bound(grid, np.asarray(bundle.value), np.sum(bundle.gradient, axis=-1),
                            beta, cfl_safety)


def _stability_bound(grid, f, trace, beta, cfl_safety):
    coefficient = beta * f ** (beta - 1.0) * trace / grid.curvatures().radii[:, -1] ** 2
    spacing = grid.spacing()
    return float(cfl_safety * grid.stability_scale * spacing * spacing / np.max(coefficient))


def _averaged(curv, phi, m_index):
    weight = _weight(curv, m_index)
    denominator = np.sum(weight)
    if not denominator > 0.0:
        raise MVFlowError(f"degenerate global-term denominator {denominator}")
    return float(np.sum(weight * phi) / denominator)


def _stage_speed(grid, law):
    """Speed of an intermediate stage; its radii are floor-checked by curvatures()."""
    curv = grid.curvatures()
    phi = np.asarray(evaluate_phi(law.spec, law.beta, curv.lam, order=0, check=False).value)
    return _averaged(curv, phi, law.m_index) - phi


class FlowState:
    """
    A support-function grid at time t with its cached curvature data.

    The cache is built on construction; states are never mutated.
    """

    def __init__(self, grid, law, t=0.0, step=0, check=True):
        """
        Initialize a flow state.

        Args:
            grid (SupportGrid): Geometry
            law (FlowLaw): Flow law
            t (float, optional): Time
            step (int, optional): Step counter
            check (bool, optional): Verify the curvature function against the
                cone and the dimension; states advanced by step() skip it

        Raises:
            ConvexityLossError: If the grid is not strictly convex
        """
        self.grid = grid
        self.law = law
        self.t = float(t)
        self.step = int(step)
        self.curvature = grid.curvatures()
        bundle = evaluate(law.spec, self.curvature.lam, order=1, check=check)
        self.f = np.asarray(bundle.value)
        self.f_trace = np.sum(bundle.gradient, axis=-1)
        self.phi = self.f if law.beta == 1.0 else self.f ** law.beta
        self.phi_bar = _averaged(self.curvature, self.phi, law.m_index)

    @property
    def n(self):
        return self.grid.n

    @property
    def h(self):
        return self.grid.h

    @property
    def speed(self):
        return self.phi_bar - self.phi

    def is_stationary(self):
        return float(np.max(np.abs(self.speed))) <= STATIONARY_TOLERANCE * float(np.max(self.phi))

    def stable_dt(self, cfl_safety):
        """stable_dt() from the cached F and sum f_i of this state."""
        return _stability_bound(self.grid, self.f, self.f_trace, self.law.beta, cfl_safety)

    def advanced(self, h, dt):
        return FlowState(self.grid.with_values(h), self.law, self.t + dt, self.step + 1,
                         check=False)


def step(state, dt):
    """
    Two-stage explicit midpoint step with phi_bar recomputed at each stage.

    h* = h + dt s(h), h+ = h + dt s((h + h*) / 2).

    Args:
        state (FlowState): Current state
        dt (float): Step size, at most stable_dt

    Returns:
        FlowState: The advanced state

    Raises:
        ConvexityLossError: If an intermediate or final radius loses positivity
    """
    h = state.h
    midpoint = _stage_speed(state.grid.with_values(h + 0.5 * dt * state.speed), state.law)
    return state.advanced(h + dt * midpoint, dt)


def initial_body(config):
    """
    Closed-form initial body of a configuration.

    Raises:
        ConfigError: If the body descriptor is invalid for the configuration
    """
    try:
        return make_body(config.initial['kind'], config.initial['params'], config.n)
    except DomainError as exc:
        raise ConfigError(str(exc), field='initial') from exc


def build_initial_state(config):
    """
    Sample the initial body on the configured backend.

    Returns:
        FlowState: State at t = 0

    Raises:
        ConfigError: If the body cannot be sampled or is not strictly convex on the grid
    """
    body = initial_body(config)
    try:
        grid = body.grid(config.backend['kind'], config.resolution, config.fd_order)
        return FlowState(grid, FlowLaw(config.spec, config.beta, config.m_index))
    except DomainError as exc:
        raise ConfigError(str(exc), field='initial') from exc
    except ConvexityLossError as exc:
        raise ConfigError(f"initial body is not strictly convex on the grid ({exc})",
                          field='initial') from exc


@dataclass
class FlowResult:
    """
    Outcome of a run.

    Attributes:
        config (FlowConfig): The run configuration
        trajectory (list): MonitorRecord sequence
        initial_state (FlowState): State at t = 0
        final_state (FlowState): Last state reached
        last_valid_state (FlowState): Last strictly convex state
        reason (str): converged, convexity_loss, max_steps or t_end
        stationary (bool): Whether convergence was detected as a vanishing speed
        failure (dict): Node and value of a convexity loss
        conservation_drift (float): max relative drift of the preserved volume
        wall_time (float): Seconds spent in the loop
    """
    config: object
    trajectory: list
    initial_state: object
    final_state: object
    last_valid_state: object
    reason: str
    stationary: bool = False
    failure: dict = None
    conservation_drift: float = 0.0
    wall_time: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def converged(self):
        return self.reason == 'converged'

    def summary(self):
        last = self.trajectory[-1]
        return {
            'termination_reason': self.reason,
            'stationary': self.stationary,
            'failure': self.failure,
            'steps': last.step,
            't_final': last.t,
            'records': len(self.trajectory),
            'conservation_drift': self.conservation_drift,
            'final_f_max': last.f_max,
            'final_pinch_ratio': last.pinch_ratio,
            'final_rho_minus': last.rho_minus,
            'final_rho_plus': last.rho_plus,
            'wall_time': self.wall_time,
        }


def run(config, on_record=None, on_step=None):
    """
    Advance a configured flow until a termination rule fires.

    Records are emitted at step 0, every `cadence` steps and at the final
    state. The run converges when f_max stays below f_tolerance for
    `convergence_window` consecutive records or the speed vanishes to
    round-off.

    Args:
        config (FlowConfig): Validated configuration
        on_record (callable, optional): Called as on_record(record, state)
        on_step (callable, optional): Called as on_step(state) with the initial
            state and after every accepted step

    Returns:
        FlowResult: Trajectory, states and termination reason

    Raises:
        ConfigError: Before any stepping, if the initial data are invalid
    """
    state = build_initial_state(config)
    initial = state
    logger.info(f"Starting run {config.config_hash()[:12]}: {config!r}")
    start = time.perf_counter()

    trajectory = []
    min_f_integral = 0.0

    def emit(current, dt):
        entry = record(current, config, dt=dt, min_f_integral=min_f_integral)
        trajectory.append(entry)
        logger.debug(f"step {entry.step} t={entry.t:.6g} f_max={entry.f_max:.3e} "
                     f"pinch={entry.pinch_ratio:.6f}")
        if on_record is not None:
            on_record(entry, current)
        return entry

    reason, failure, stationary = None, None, False
    below = 0
    first = emit(state, 0.0)
    if on_step is not None:
        on_step(state)
    if state.is_stationary():
        reason, stationary = 'converged', True
    elif first.f_max < config.f_tolerance:
        below = 1

    dt = 0.0
    while reason is None:
        if state.t >= config.t_end:
            reason = 't_end'
            break
        if state.step >= config.max_steps:
            reason = 'max_steps'
            break
        dt = min(state.stable_dt(config.cfl_safety), config.t_end - state.t)
        try:
            advanced = step(state, dt)
        except ConvexityLossError as exc:
            reason = 'convexity_loss'
            failure = {'node': exc.node, 'value': exc.value, 'step': state.step + 1,
                       't': state.t + dt}
            logger.warning(f"Convexity lost at node {exc.node} (radius {exc.value:.3e}) "
                           f"after step {state.step}")
            break
        min_f_integral += dt * float(np.min(state.f))
        state = advanced
        if on_step is not None:
            on_step(state)

        if state.step % config.cadence == 0:
            entry = emit(state, dt)
            below = below + 1 if entry.f_max < config.f_tolerance else 0
            if below >= config.convergence_window:
                reason = 'converged'
            elif state.is_stationary():
                reason, stationary = 'converged', True

    if trajectory[-1].step != state.step:
        emit(state, dt)

    v0 = trajectory[0].preserved_volume
    drift = max(abs(r.preserved_volume - v0) for r in trajectory) / v0
    wall = time.perf_counter() - start
    logger.info(f"Run finished: {reason} after {state.step} steps, t={state.t:.6g}, "
                f"drift={drift:.3e}, {wall:.1f}s")

    return FlowResult(
        config=config,
        trajectory=trajectory,
        initial_state=initial,
        final_state=state,
        last_valid_state=state,
        reason=reason,
        stationary=stationary,
        failure=failure,
        conservation_drift=float(drift),
        wall_time=wall,
    )


def integral_identity_check(state, spec, beta, m, flow_index=-1):
    """
    Residual of d/dt int E_m dmu = (m + 1) int s E_{m+1} dmu.

    The left side is a symmetric difference of int E_m dmu (the enclosed
    volume for m = -1, whose identity reads d/dt Vol = int s dmu) across
    h -/+ tau s, with s the speed of the flow preserving V_{n - flow_index}.
    The residual is normalized by (m + 1) int |s| E_{m+1} dmu, so it stays
    meaningful when both sides vanish.

    Args:
        state: Flow state or grid
        spec (CurvatureSpec): Curvature function
        beta (float): Exponent
        m (int): Index in -1..n
        flow_index (int, optional): Preserved index of the flow supplying the speed

    Returns:
        float: Relative residual; absolute when the speed vanishes; 0.0 for m = n
    """
    grid = _grid(state)
    n = grid.n
    if not -1 <= m <= n:
        raise DomainError(f"index m={m} outside -1..{n}")
    if m == n:
        # int E_n dmu is the area of the unit sphere for every convex body
        return 0.0

    curv = grid.curvatures()
    phi_bar = global_term(grid, spec, beta, flow_index)
    s = speed_field(grid, spec, beta, phi_bar)
    factor = 1.0 if m == -1 else float(m + 1)
    weight = _weight(curv, m)
    rhs = factor * float(np.sum(s * weight))

    phi_max = float(np.max(phi_bar - s))
    if float(np.max(np.abs(s))) <= STATIONARY_TOLERANCE * phi_max:
        return abs(rhs)

    def integral(h):
        g = grid.with_values(h)
        if m == -1:
            return float(np.sum(h * g.curvatures().weights)) / (n + 1)
        return float(np.sum(g.curvatures().curvature_integrand(m)))

    tau = IDENTITY_PERTURBATION * float(np.mean(grid.h)) / float(np.max(np.abs(s)))
    lhs = (integral(grid.h + tau * s) - integral(grid.h - tau * s)) / (2.0 * tau)
    scale = factor * float(np.sum(np.abs(s) * weight))
    return abs(lhs - rhs) / scale
