"""quadconics: a verification kernel for quadrilateral-in-conic configurations.

The package builds the full named-point configuration attached to a
quadrilateral inscribed in a conic, checks a registry of classical incidence
claims about it over exact rational or float arithmetic, runs the closure
dynamics of inscribed/circumscribed conic pairs, and exposes everything
through a CLI, a JSON session protocol and a FastAPI service.
"""

__version__ = "0.1.0"
