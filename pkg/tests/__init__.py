# __init__.py
__version__ = "0.1.0"
__author__ = "Fabien Nugier"

"""
The :mod:`levyheat.tests` module includes the unit tests of LevyHeat.
"""



