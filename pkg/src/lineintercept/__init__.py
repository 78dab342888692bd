"""Placement of unit-speed vehicles that intercept targets generated on a segment."""
