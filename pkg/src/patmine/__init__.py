"""Patent analytics toolkit.

Builds co-registration collaboration networks from patent records, scores
them (degree, closeness, betweenness, eigenvector, communities), clusters
patent texts, and fits logistic life-cycle curves per cluster to classify
each technology's maturity stage.
"""

__version__ = "0.1.0"
