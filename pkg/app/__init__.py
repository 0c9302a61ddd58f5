"""
Twist Obstruction Engine Application Package
"""

__version__ = "0.1.0"
