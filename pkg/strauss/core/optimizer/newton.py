from collections.abc import Sequence
from typing import Any, NamedTuple, Optional

import numpy as np

from strauss.core._common_types import Objective
from strauss.core._logger import logger
from strauss.core.domain.errors import DomainError
from strauss.core.domain.graphon import FloatArray
from strauss.core.domain.params import LocalMax, NewtonOptions

# Relative accuracy assumed for objective values when telling progress from rounding noise
VALUE_NOISE = 1e-13
# Cap on a gradient-ascent step, relative to max(1, |x|∞)
MAX_ASCENT_STEP = 0.1


class _Infeasible(Exception):
    pass


def evaluate(objective: Objective, x: FloatArray) -> Optional[float]:
    """The objective value, None when the point is infeasible"""
    try:
        value = objective(x)
    except DomainError:
        return None
    if value is None or not np.isfinite(value):
        return None
    return float(value)


def fd_steps(x: FloatArray, fd_step: float) -> FloatArray:
    return fd_step * np.maximum(1.0, np.abs(x))


def _value_noise(f: float) -> float:
    return VALUE_NOISE * max(1.0, abs(f))


def finite_difference_derivatives(
    objective: Objective,
    x: FloatArray,
    f0: float,
    h: FloatArray,
) -> tuple[FloatArray, FloatArray]:
    """Central-difference gradient and Hessian. Raises _Infeasible if the stencil leaves the domain"""

    def at(*moves: tuple[int, int]) -> float:
        y = x.copy()
        for i, sign in moves:
            y[i] += sign * h[i]
        v = evaluate(objective, y)
        if v is None:
            raise _Infeasible
        return v

    n = len(x)
    grad = np.empty(n)
    hess = np.empty((n, n))
    for i in range(n):
        fp, fm = at((i, 1)), at((i, -1))
        grad[i] = (fp - fm) / (2 * h[i])
        hess[i, i] = (fp - 2 * f0 + fm) / h[i] ** 2
        for j in range(i):
            cross = at((i, 1), (j, 1)) - at((i, 1), (j, -1)) - at((i, -1), (j, 1)) + at((i, -1), (j, -1))
            hess[i, j] = hess[j, i] = cross / (4 * h[i] * h[j])
    return grad, hess


def _derivatives(
    objective: Objective,
    x: FloatArray,
    f0: float,
    opts: NewtonOptions,
) -> Optional[tuple[FloatArray, FloatArray, FloatArray]]:
    # Near the boundary of the feasible region the stencil is shrunk until it fits
    h = fd_steps(x, opts.fd_step)
    for _ in range(20):
        try:
            grad, hess = finite_difference_derivatives(objective, x, f0, h)
            return grad, hess, h
        except _Infeasible:
            h = h / 4
    return None


def boundary_maximum(objective: Objective, x: FloatArray, f: float, fd_step: float) -> bool:
    """Whether x maximizes the objective on the edge of its feasible region, to first order.

    Every coordinate step of one finite-difference length either leaves the region or does not
    improve the objective beyond rounding noise, and at least one of them leaves it."""
    h = fd_steps(x, fd_step)
    blocked = False
    for i in range(len(x)):
        for sign in (1, -1):
            y = x.copy()
            y[i] += sign * h[i]
            value = evaluate(objective, y)
            if value is None:
                blocked = True
            elif value > f + _value_noise(f):
                return False
    return blocked


def _stopped(objective: Objective, x: FloatArray, f: float, opts: NewtonOptions, **fields: Any) -> LocalMax:
    on_boundary = boundary_maximum(objective, x, f, opts.fd_step)
    if not on_boundary:
        logger.warning("Newton stopped short of a maximum at %s", x.tolist())
    return LocalMax(point=x.tolist(), value=f, converged=on_boundary, on_boundary=on_boundary, **fields)


class _Direction(NamedTuple):
    vector: FloatArray
    newton: bool


def _direction(grad: FloatArray, hess: FloatArray, x: FloatArray) -> _Direction:
    try:
        np.linalg.cholesky(-hess)
        return _Direction(np.linalg.solve(hess, -grad), newton=True)
    except np.linalg.LinAlgError:
        pass

    # Not negative definite: gradient ascent scaled by the largest curvature
    scale = max(float(np.max(np.abs(np.diag(hess)))), 1e-12)
    step = grad / scale
    cap = MAX_ASCENT_STEP * max(1.0, float(np.max(np.abs(x))))
    longest = float(np.max(np.abs(step)))
    if longest > cap:
        step = step * (cap / longest)
    return _Direction(step, newton=False)


def _line_search(
    objective: Objective,
    x: FloatArray,
    f: float,
    direction: FloatArray,
    opts: NewtonOptions,
) -> Optional[tuple[FloatArray, float]]:
    t = 1.0
    for _ in range(opts.max_backtracks):
        candidate = x + t * direction
        value = evaluate(objective, candidate)
        if value is not None and value >= f:
            return candidate, value
        t *= opts.damping
    return None


def newton_maximize(objective: Objective, x0: Sequence[float], opts: Optional[NewtonOptions] = None) -> LocalMax:
    """Damped Newton ascent from x0 with finite-difference derivatives.

    Steps that leave the feasible region or lower the objective are shortened by opts.damping.
    When the Hessian is not negative definite the iteration falls back to a gradient step.
    The result is never worse than x0. It is flagged converged when the gradient is below
    grad_tol, when the Newton step is below step_tol and the gradient is within the
    finite-difference noise floor, or when the iteration is stuck against the edge of the
    feasible region with no feasible step uphill (on_boundary)."""
    opts = opts or NewtonOptions()
    x = np.array(x0, dtype=np.float64)
    f = evaluate(objective, x)
    if f is None:
        raise DomainError("Objective is invalid at the starting point", x0=x.tolist())

    gnorm: Optional[float] = None
    small_step = False
    for iteration in range(1, opts.max_iter + 1):
        derivatives = _derivatives(objective, x, f, opts)
        if derivatives is None:
            logger.debug("No feasible difference stencil at %s", x.tolist())
            return _stopped(objective, x, f, opts, iterations=iteration, gradient_norm=gnorm)
        grad, hess, h = derivatives
        gnorm = float(np.max(np.abs(grad)))
        noise_floor = max(opts.grad_tol, _value_noise(f) / float(np.min(h)))
        logger.debug("Newton iteration %d: x=%s f=%.17g |g|=%.3g", iteration, x.tolist(), f, gnorm)

        if gnorm <= opts.grad_tol or (small_step and gnorm <= noise_floor):
            return LocalMax(point=x.tolist(), value=f, converged=True, iterations=iteration, gradient_norm=gnorm)

        direction = _direction(grad, hess, x)
        accepted = _line_search(objective, x, f, direction.vector, opts)
        if accepted is None:
            # A Newton step whose predicted gain is below rounding noise cannot be verified
            gain = 0.5 * float(grad @ direction.vector)
            if direction.newton and gain <= _value_noise(f) and gnorm <= noise_floor:
                return LocalMax(point=x.tolist(), value=f, converged=True, iterations=iteration, gradient_norm=gnorm)
            logger.debug("Newton line search failed at %s (|g|=%.3g)", x.tolist(), gnorm)
            return _stopped(objective, x, f, opts, iterations=iteration, gradient_norm=gnorm)

        x_new, f = accepted
        small_step = direction.newton and float(np.max(np.abs(x_new - x))) <= opts.step_tol * (
            1 + float(np.max(np.abs(x_new)))
        )
        x = x_new

    logger.debug("Newton used all %d iterations at %s", opts.max_iter, x.tolist())
    return _stopped(objective, x, f, opts, iterations=opts.max_iter, gradient_norm=gnorm)
