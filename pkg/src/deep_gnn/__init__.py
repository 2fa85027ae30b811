"""Deep GNN Lab - propagation limits, over-smoothing metrics and deep node classifiers."""

__version__ = "0.1.0"
