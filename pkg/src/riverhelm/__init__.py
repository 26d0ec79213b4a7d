"""riverhelm: fleet control for simulated biomimetic river submarines."""

__version__ = "0.1.0"
