"""Exterior differential systems toolkit for the r-th modified dispersionless KP family."""
__version__ = "0.1.0"
