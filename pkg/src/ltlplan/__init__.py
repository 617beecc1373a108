"""MCTS planning over driving options with runtime LTL monitoring."""

__version__ = "0.1.0"
