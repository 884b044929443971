"""maintviz: mine git history, classify commits by maintenance activity, explore the profiles."""

__version__ = "0.1.0"
