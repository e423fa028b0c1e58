"""
Relevance BVASS Toolkit
-----------------------
Provers for implicational relevance logic (sequent and focusing calculi),
branching vector addition systems with states, and the reductions that
connect provability with coverability.
"""

__version__ = "1.0.0"
__author__ = "Relevance BVASS Team"
