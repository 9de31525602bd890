"""Compact ancestry labeling schemes for rooted forests."""
