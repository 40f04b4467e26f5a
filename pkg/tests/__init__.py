"""
Test suite for grid_plot.
"""
