"""Knowledge-driven swarm shepherding workbench."""

__version__ = "0.1.0"
