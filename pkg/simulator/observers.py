"""
Simulation observers
Callbacks invoked on every state of a simulation
"""

from abc import ABC, abstractmethod

from .history import HistoryState


class SimulationObserver(ABC):
    """Base class for per-step observers; observers never modify the dynamics"""

    @abstractmethod
    def observe(self, state: HistoryState) -> None:
        """Called on the initial state and after every step"""
        pass

    def finalize(self, record) -> None:
        """Called once with the finished TrajectoryRecord"""
        pass
