"""Safe Petri nets, occurrence nets, (reversible) prime event structures and
reversible causal nets, with the translations between them."""

__version__ = "0.1.0"
