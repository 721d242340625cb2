"""Communication overhead accounting per fusion scheme.

Elements count complex IQ samples as single items (the 512-vs-32
convention), so SignalStack/FeatureCnn = L/d = 16. The report also carries
the reals-based ratio (1024/32 = 32x) for transparency. Bytes assume f32
reals: a complex sample is 8 bytes, a feature or a label 4.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classify import FusionScheme


@dataclass(frozen=True)
class SchemeOverhead:
    scheme: str
    elements_per_node: int
    bytes_per_node: int
    total_elements: int  # across the N transmitting nodes
    ratio_vs_signal: float | None  # signal elements / scheme elements


@dataclass(frozen=True)
class OverheadReport:
    n_nodes: int
    frame_length: int
    feature_dim: int
    rows: tuple[SchemeOverhead, ...]
    reals_ratio_signal_vs_feature: float

    def row(self, scheme: FusionScheme) -> SchemeOverhead:
        return next(r for r in self.rows if r.scheme == scheme.value)

    def to_json(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "frame_length": self.frame_length,
            "feature_dim": self.feature_dim,
            "reals_ratio_signal_vs_feature": self.reals_ratio_signal_vs_feature,
            "rows": [
                {
                    "scheme": r.scheme,
                    "elements_per_node": r.elements_per_node,
                    "bytes_per_node": r.bytes_per_node,
                    "total_elements": r.total_elements,
                    "ratio_vs_signal": r.ratio_vs_signal,
                }
                for r in self.rows
            ],
        }


_ELEMENTS = {
    FusionScheme.SINGLE: lambda L, d: 0,  # non-cooperative: nothing transmitted
    FusionScheme.DECISION_VOTE: lambda L, d: 1,
    FusionScheme.SIGNAL_STACK: lambda L, d: L,
    FusionScheme.FEATURE_CNN: lambda L, d: d,
    FusionScheme.FEATURE_PCA: lambda L, d: d,
}

_BYTES_PER_ELEMENT = {
    FusionScheme.SINGLE: 0,
    FusionScheme.DECISION_VOTE: 4,  # one label as f32
    FusionScheme.SIGNAL_STACK: 8,  # complex sample = two f32 reals
    FusionScheme.FEATURE_CNN: 4,
    FusionScheme.FEATURE_PCA: 4,
}


def overhead_per_sample(n_nodes: int, frame_length: int = 512, feature_dim: int = 32) -> OverheadReport:
    signal_elements = frame_length
    rows = []
    for scheme in FusionScheme:
        elements = _ELEMENTS[scheme](frame_length, feature_dim)
        rows.append(
            SchemeOverhead(
                scheme=scheme.value,
                elements_per_node=elements,
                bytes_per_node=elements * _BYTES_PER_ELEMENT[scheme],
                total_elements=elements * n_nodes,
                ratio_vs_signal=(signal_elements / elements) if elements else None,
            )
        )
    return OverheadReport(
        n_nodes=n_nodes,
        frame_length=frame_length,
        feature_dim=feature_dim,
        rows=tuple(rows),
        reals_ratio_signal_vs_feature=2 * frame_length / feature_dim,
    )
