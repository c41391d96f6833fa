"""Feedback stability certification via multiplier-region separation.

For the negative feedback loop of two stable systems, closed-loop L2
stability follows when each system's SG sits in a positive-negative
multiplier region and the inverted first region is strictly separated from
the negated second:

    margin = dist(S(Pi_1)^{-1}, -S(Pi_2)) > 0.

All region operations have closed forms for the circular family, so the
margin itself is exact. A sampled homotopy sweep over scalings tau in (0, 1]
is provided for comparison with separation-over-scalings tests; being a
finite sample it is labeled a numeric check, not a proof.

Well-posedness of the loop is an assumption surfaced in the report, not
verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .lmi import CertResult, certify_multiplier
from .lti import StateSpace, is_hurwitz
from .regions import (
    EmptyRegion,
    MultiplierPi,
    RegionGeom,
    invert_region,
    is_positive_negative,
    negate_region,
    region_distance,
    region_of_multiplier,
    region_to_json,
    scale_region,
)

__all__ = [
    "StabilityReport",
    "hard_margin",
    "certify_feedback",
    "soft_homotopy_sweep",
    "DEFAULT_TAU_GRID",
]

DEFAULT_TAU_GRID = np.linspace(0.01, 1.0, 101)


def hard_margin(pi1: MultiplierPi, pi2: MultiplierPi) -> float:
    """Separation margin dist(S(Pi1)^{-1}, -S(Pi2)), exact in closed form."""
    r1 = region_of_multiplier(pi1)
    r2 = region_of_multiplier(pi2)
    for r, name in ((r1, "pi1"), (r2, "pi2")):
        if isinstance(r, EmptyRegion):
            raise ValueError(f"region of {name} is empty; margin undefined")
    return region_distance(invert_region(r1), negate_region(r2))


@dataclass
class StabilityReport:
    pi1: MultiplierPi
    pi2: MultiplierPi
    region1_inv: Optional[RegionGeom]
    region2_neg: Optional[RegionGeom]
    margin: float
    certified: bool
    pathway: str  # 'hard_via_soft_regions' | 'soft_homotopy_numeric'
    containment1: Optional[CertResult] = None
    containment2: Optional[CertResult] = None
    reasons: list = field(default_factory=list)
    tau_margins: Optional[list] = None
    well_posedness: str = "assumed, not verified"

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "pathway": self.pathway,
            "pi1": [self.pi1.a, self.pi1.b, self.pi1.c],
            "pi2": [self.pi2.a, self.pi2.b, self.pi2.c],
            "margin": self.margin,
            "certified": self.certified,
            "reasons": list(self.reasons),
            "well_posedness": self.well_posedness,
        }
        if self.region1_inv is not None:
            out["region1_inv"] = region_to_json(self.region1_inv)
        if self.region2_neg is not None:
            out["region2_neg"] = region_to_json(self.region2_neg)
        for name, cert in (("containment1", self.containment1),
                           ("containment2", self.containment2)):
            if cert is not None:
                out[name] = {
                    "feasible": cert.feasible,
                    "hard_containment": cert.hard_containment,
                    "status": cert.diagnostics.get("status"),
                }
        if self.tau_margins is not None:
            out["tau_margins"] = [[t, m] for t, m in self.tau_margins]
            out["min_tau_margin"] = min(m for _, m in self.tau_margins)
        return out


def certify_feedback(sys1: StateSpace, sys2: StateSpace, pi1: MultiplierPi,
                     pi2: MultiplierPi, backend: Optional[str] = None,
                     tau_grid: Optional[Sequence[float]] = None,
                     **options) -> StabilityReport:
    """Certify L2 stability of the negative feedback loop of sys1 and sys2.

    Requires both systems stable and both multipliers positive-negative;
    certifies SG containment for each pair via the soft LMI, then checks the
    closed-form separation margin. ``certified`` is true only when both
    containments hold (with the positive-negative upgrade to truncated
    signals) and the margin is strictly positive. Passing a ``tau_grid``
    additionally records the sampled homotopy margins.
    """
    reasons = []
    for k, s in ((1, sys1), (2, sys2)):
        hw = is_hurwitz(s)
        if not hw.stable:
            raise ValueError(
                f"sys{k} is not stable (spectral abscissa {hw.abscissa:.4g})"
            )
    pn1 = is_positive_negative(pi1)
    pn2 = is_positive_negative(pi2)
    if not pn1:
        reasons.append("pi1: multiplier not positive-negative")
    if not pn2:
        reasons.append("pi2: multiplier not positive-negative")

    cert1 = certify_multiplier(sys1, pi1, backend=backend, **options)
    cert2 = certify_multiplier(sys2, pi2, backend=backend, **options)
    if not cert1.feasible:
        reasons.append(f"sys1: containment not certified "
                       f"({cert1.diagnostics.get('status')})")
    if not cert2.feasible:
        reasons.append(f"sys2: containment not certified "
                       f"({cert2.diagnostics.get('status')})")

    r1 = region_of_multiplier(pi1)
    r2 = region_of_multiplier(pi2)
    region1_inv = region2_neg = None
    margin = math.nan
    if not isinstance(r1, EmptyRegion) and not isinstance(r2, EmptyRegion):
        region1_inv = invert_region(r1)
        region2_neg = negate_region(r2)
        margin = region_distance(region1_inv, region2_neg)
        if margin <= 0:
            reasons.append("regions not strictly separated (margin 0)")
    else:
        reasons.append("empty multiplier region")

    certified = (pn1 and pn2 and cert1.hard_containment
                 and cert2.hard_containment and margin > 0)
    report = StabilityReport(
        pi1=pi1, pi2=pi2, region1_inv=region1_inv, region2_neg=region2_neg,
        margin=margin, certified=certified, pathway="hard_via_soft_regions",
        containment1=cert1, containment2=cert2, reasons=reasons,
    )
    if tau_grid is not None:
        report.tau_margins = soft_homotopy_sweep(pi1, pi2, tau_grid)
        report.pathway = "hard_via_soft_regions"  # sweep is advisory only
    return report


def soft_homotopy_sweep(pi1: MultiplierPi, pi2: MultiplierPi,
                        tau_grid: Optional[Sequence[float]] = None) -> list:
    """Sampled margins dist(S(Pi1)^{-1}, -tau S(Pi2)) for tau in (0, 1].

    A numeric check only: finitely many tau values cannot prove the
    all-scalings condition. At tau = 1 the value coincides with hard_margin.
    """
    taus = DEFAULT_TAU_GRID if tau_grid is None else np.asarray(tau_grid, float)
    if np.any((taus <= 0.0) | (taus > 1.0)):
        raise ValueError("tau values must lie in (0, 1]")
    r1 = region_of_multiplier(pi1)
    r2 = region_of_multiplier(pi2)
    for r, name in ((r1, "pi1"), (r2, "pi2")):
        if isinstance(r, EmptyRegion):
            raise ValueError(f"region of {name} is empty; margin undefined")
    inv1 = invert_region(r1)
    neg2 = negate_region(r2)
    return [(float(t), float(region_distance(inv1, scale_region(neg2, t))))
            for t in taus]
