"""A discrete-time, agent-based nuclear fuel cycle simulation kernel."""

__version__ = "0.1.0"
