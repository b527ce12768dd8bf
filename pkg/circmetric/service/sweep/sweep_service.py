import threading
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from circmetric.angles import angle_pair, direct_trace, limit_cos_q, limit_estimate
from circmetric.circulant import SymCirc4, Vector4
from circmetric.errors import CircmetricError
from circmetric.metric import ConformalParams

from ..base import ServiceBase


@dataclass(frozen=True)
class SweepCell:
    index: int
    alpha: float
    beta: float


@dataclass(frozen=True)
class SweepResult:
    index: int
    alpha: float
    beta: float
    status: str
    limit_cos_q: Optional[float] = None
    limit_cos_q2: Optional[float] = None
    converged: Optional[bool] = None
    exact_limit_cos_q: Optional[float] = None


def sweep_grid(alpha_range: tuple[float, float, int], beta_range: tuple[float, float, int]) -> list[SweepCell]:
    """Row-major cells, alpha in the outer loop."""
    alphas = np.linspace(alpha_range[0], alpha_range[1], int(alpha_range[2]))
    betas = np.linspace(beta_range[0], beta_range[1], int(beta_range[2]))
    return [
        SweepCell(i * len(betas) + j, float(alpha), float(beta))
        for i, alpha in enumerate(alphas)
        for j, beta in enumerate(betas)
    ]


class SweepService(ServiceBase):
    def __init__(self, g0: SymCirc4, w: Vector4, steps: int, tolerance: float, workers: int = 4):
        super().__init__("sweep", workers)
        self.g0 = g0
        self.w = w
        self.steps = steps
        self.tolerance = tolerance
        self._cells: dict[int, SweepCell] = {}
        self._started: set[int] = set()
        self._results: dict[int, SweepResult] = {}
        self._results_lock = threading.Lock()

    def submit(self, cell: SweepCell):
        with self._results_lock:
            self._cells[cell.index] = cell
        self.dispatch("cell", cell)

    def handle_event(self, event_type: str, payload: Any):
        if event_type == "cell":
            self._handle_cell(payload)
        else:
            self.logger.warning(f"Unknown event type: {event_type}")

    def _handle_cell(self, cell: SweepCell):
        with self._results_lock:
            self._started.add(cell.index)
        cp = ConformalParams(cell.alpha, cell.beta)
        if not cp.is_valid:
            result = SweepResult(cell.index, cell.alpha, cell.beta, "invalid_params")
        else:
            try:
                trace = direct_trace(self.g0, self.w, cp, self.steps, renormalize=True)
                estimate = limit_estimate(trace, self.tolerance)
                result = SweepResult(
                    cell.index,
                    cell.alpha,
                    cell.beta,
                    "ok",
                    estimate.limit_cos_q,
                    estimate.limit_cos_q2,
                    estimate.converged,
                    limit_cos_q(angle_pair(self.g0, self.w)),
                )
            except CircmetricError as e:
                self.logger.error(f"Cell {cell.index} ({cell.alpha}, {cell.beta}) failed: {e}")
                result = SweepResult(cell.index, cell.alpha, cell.beta, type(e).__name__)

        with self._results_lock:
            self._results[cell.index] = result
        self.logger.debug(f"Cell {cell.index} done: {result.status}")

    def results(self) -> list[SweepResult]:
        """One row per submitted cell; cells without a result are marked error or unfinished."""
        with self._results_lock:
            results = dict(self._results)
            for index, cell in self._cells.items():
                if index not in results:
                    status = "error" if index in self._started else "unfinished"
                    results[index] = SweepResult(cell.index, cell.alpha, cell.beta, status)
            return [results[i] for i in sorted(results)]


def run_sweep(
    g0: SymCirc4,
    w: Vector4,
    cells: list[SweepCell],
    steps: int,
    tolerance: float,
    workers: int = 4,
    timeout: Optional[float] = None,
) -> list[SweepResult]:
    service = SweepService(g0, w, steps, tolerance, workers)
    service.start()
    try:
        for cell in cells:
            service.submit(cell)
        if not service.wait_until_idle(timeout):
            service.logger.warning(f"Sweep did not finish within {timeout}s")
    finally:
        service.stop()
    return service.results()
