"""Cevian simplices: volume ratios, bounds and the extremal problem."""
