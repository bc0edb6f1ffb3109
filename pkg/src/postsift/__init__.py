"""Informative-post classification toolkit.

Feature extraction (handcrafted, TF-IDF bag-of-words, embedding
averages, frozen sentence vectors), six classical classifiers trained
from scratch, a two-branch hybrid neural head, and a seeded k-fold
cross-validation harness with macro P/R/F1 reporting.
"""

__version__ = "0.1.0"
