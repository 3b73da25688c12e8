"""Physical constants (SI) used throughout the simulator."""

from scipy.constants import c as C_VACUUM          # speed of light [m/s]
from scipy.constants import hbar as HBAR           # reduced Planck constant [J s]
from scipy.constants import epsilon_0 as EPSILON_0  # vacuum permittivity [F/m]

__all__ = ["C_VACUUM", "HBAR", "EPSILON_0"]
