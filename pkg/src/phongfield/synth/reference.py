"""参考谱与特征值比较指标"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def sphere_connection_reference(count: int) -> list[tuple[float, int]]:
    """单位球面联络 Laplacian 的 (特征值, 重数) 簇

    第 n 簇特征值为 n(n+1) - 1，重数 4n + 2；截断最后一簇使重数之和为 ``count``。
    """
    clusters = []
    remaining = count
    n = 1
    while remaining > 0:
        mult = min(4 * n + 2, remaining)
        clusters.append((float(n * (n + 1) - 1), mult))
        remaining -= mult
        n += 1
    return clusters


def sphere_connection_values(count: int) -> np.ndarray:
    """参考簇展开成 ``count`` 个升序值"""
    return np.concatenate(
        [np.full(m, v) for v, m in sphere_connection_reference(count)]
    ) if count > 0 else np.zeros(0)


def relative_errors(computed: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """|a - b| / |a + b| per index."""
    a = np.asarray(computed, dtype=np.float64)
    b = np.asarray(reference, dtype=np.float64)
    den = np.abs(a + b)
    return np.abs(a - b) / np.where(den > 0, den, 1.0)


@dataclass(frozen=True)
class ClusterStats:
    value: float
    size: int
    mean: float
    spread: float
    mean_rel_deviation: float


def cluster_statistics(values: np.ndarray, clusters: list[tuple[float, int]]) -> list[ClusterStats]:
    """按参考簇大小把升序值分成连续块"""
    values = np.sort(np.asarray(values, dtype=np.float64))
    out = []
    start = 0
    for ref, size in clusters:
        block = values[start:start + size]
        if len(block) < size:
            break
        out.append(ClusterStats(
            value=ref,
            size=size,
            mean=float(block.mean()),
            spread=float(block.max() - block.min()),
            mean_rel_deviation=float(np.mean(np.abs(block - ref) / abs(ref))),
        ))
        start += size
    return out


def cluster_gap_ratio(values: np.ndarray, clusters: list[tuple[float, int]]) -> float:
    """相邻簇之间的最小间隙与簇内最大展宽之比"""
    values = np.sort(np.asarray(values, dtype=np.float64))
    bounds = np.cumsum([size for _, size in clusters])
    gaps = [values[b] - values[b - 1] for b in bounds[:-1] if b < len(values)]
    stats = cluster_statistics(values, clusters)
    spread = max((s.spread for s in stats), default=0.0)
    if not gaps:
        return float("inf")
    return float(min(gaps) / spread) if spread > 0 else float("inf")
