"""Exact-arithmetic engine for maze and multation categories.

Submodules:

- scalars: rationals, generalized binomials, formal linear combinations
- multisets: finite multi-sets and their enumeration primitives
- msetcat: multations and the multi-set category
- labycat: mazes, the labyrinth category and its quotients
- bridge: the translation functors between the two categories
- functor_lab: module functors, deviations, cross-effects, presentations
- cli: command-line front end
"""

__version__ = "0.1.0"
