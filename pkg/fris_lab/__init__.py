"""Fluid RIS on-off selection simulator."""
