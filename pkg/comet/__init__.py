"""Exact algebra and crystal toolkit for the comet quiver."""
