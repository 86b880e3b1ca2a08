"""
Duplicate removal: DBSCAN on window centers, one representative per cluster.

Dependencies:
- numpy
- scikit-learn for DBSCAN
"""

import logging

import numpy as np
from sklearn.cluster import DBSCAN

from errors import ParameterError

logger = logging.getLogger(__name__)


def cluster_labels(centers, eps, min_pts=1):
    """DBSCAN labels of 1-D centers; -1 marks noise (only possible when min_pts > 1)."""
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 1)
    if centers.size == 0:
        return np.empty(0, dtype=np.int64)
    return DBSCAN(eps=eps, min_samples=min_pts).fit(centers).labels_


def dedup(items, eps, min_pts=1):
    """
    Keep the highest-probability item of each cluster of centers.

    Args:
        items: Objects with .center and .prob (candidates or annotations)
        eps: Clustering radius in samples
        min_pts: DBSCAN minimum neighbourhood size; noise is dropped

    With min_pts=1 representatives are more than eps apart and a second pass
    returns them unchanged. With min_pts > 1 the function is not idempotent: a
    second pass drops every isolated representative as noise.

    Returns:
        list: Selected items, sorted by center; ties go to the earliest center
    """
    if eps <= 0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    if min_pts < 1:
        raise ParameterError(f"min_pts must be >= 1, got {min_pts}")
    items = sorted(items, key=lambda item: item.center)
    labels = cluster_labels([item.center for item in items], eps, min_pts)

    selected = []
    for label in np.unique(labels):
        if label < 0:
            continue
        members = [items[i] for i in np.flatnonzero(labels == label)]
        selected.append(min(members, key=lambda item: (-item.prob, item.center)))
    selected.sort(key=lambda item: item.center)
    logger.debug("Deduplicated %d items into %d", len(items), len(selected))
    return selected
