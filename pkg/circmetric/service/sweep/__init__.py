from .sweep_service import SweepCell, SweepResult, SweepService, run_sweep, sweep_grid

__all__ = ['SweepCell', 'SweepResult', 'SweepService', 'run_sweep', 'sweep_grid']
