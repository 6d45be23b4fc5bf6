"""wuglabels: human-readable definitions for Word Usage Graph clusters.

Three labeling methods (lexical overlap, gloss retrieval, generate-then-
aggregate), plus the blinded 'guess the cluster by definition' evaluation:
item construction, an annotation service, majority-vote scoring and
agreement statistics.
"""

__version__ = "0.1.0"
