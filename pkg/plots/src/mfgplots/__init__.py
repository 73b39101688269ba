"""Figure rendering for the major/minor LQ game experiment pipeline."""

from .figures import plot_correlations, plot_trajectories
from .io import DataError, load_correlation_matrix, load_trajectories

__version__ = "0.1.0"
