"""Data layer for haltlab."""
