"""Classification of Fano varieties of Picard number one with a torus action
of complexity one, via their graded trinomial Cox rings."""

__version__ = "0.1.0"
