"""Reference experiments and their expected four-decimal values.

Each ``reproduce_table_N`` runs one experiment and compares every reference
cell against the computed value.  Absolute tolerance is 1e-3 (values were
given to four decimals) unless a check states otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import make_flow, run_flow, stability_probe
from .equivalence import signature_distance
from .polygon import Polygon
from .shapes import random_polygon

CELL_TOL = 1e-3

TABLE1_POINTS = [(10, 22, 1), (8, 2, 1), (21, 0, 1), (37, 2, 1), (48, 28, 1)]
TABLE1_ROWS = {
    0: ([0.3529, 0.2197, 6.7931, 2.3401, 0.8113], [0.2059, 1.1970, 6.2069, -0.0508, -0.1822], 2.1034, 1.4754),
    1: ([0.6626, 0.2006, 2.9832, 1.9907, 1.2665], [-0.0057, 0.7068, 3.9409, 0.516, 0.1659], 1.4207, 1.0648),
    2: ([0.8991, 0.1980, 1.8838, 1.7414, 1.7128], [-0.1481, 0.4731, 3.2194, 0.7994, 0.5557], 1.2870, 0.9799),
    38: ([2.7020, 0.2964, 0.2123, 0.6569, 8.9517], [-0.7114, -0.1680, 1.4857, 1.0401, 11.1729], 2.5639, 2.5639),
}

TABLE2_POINTS = [(19, 14), (14, 1), (15, 6), (15, 1), (8, 2), (13, 16), (3, 14)]
TABLE2_ROWS = {
    0: ([0.0577, 0.4167, 7, 2.9429, -1.2621, 0.2462, -6.5],
        [-0.3846, -2.0833, -7.2, -0.71429, -0.233, -1.7231, 3.75]),
    1: ([-0.1, -52.625, 3.7601, -1.3095, -0.1225, 11.0866, 0.0284],
        [-1.4, 24.625, -0.5986, 0.1282, -1.4973, -7.25984, -0.1335]),
    2: ([-11.9758, 4.1652, -1.2438, -0.4682, 2.633, 0.0683, -0.1914],
        [-5.0645, -0.3288, 0.4609, -1.3367, -1.6375, 0.1149, 0.534]),
    58: ([1.0] * 7, [1.247] * 7),
}

TABLE3_POINTS = [(11, 11, 11), (2, 9, 3), (1, 0, 12), (11, 7, 5), (16, 3, 13), (19, 16, 14), (3, 6, 15)]
TABLE3_ROWS = {  # (tau, kappa, kappa_bar)
    0: ([-0.6633, -0.9674, 0.3333, 1.7041, -2.4104, -0.2373, 0.8788],
        [0.963, 1.1608, -0.8755, 0.7683, -3.9179, -0.088, -3.8571],
        [-0.8923, -0.5198, 0.2209, -3.3165, 3.403, -0.528, 5.381]),
    1: ([-0.9353, -0.528, 0.6395, -4.0293, -1.4148, -0.5419, -0.1725],
        [1.3269, 1.3226, 0.1845, -2.3033, -3.5754, -0.5521, -0.6792],
        [-1.1188, 0.8732, -0.4358, 11.0184, 0.7806, -1.1093, -0.1472]),
    2: ([-2.5512, 0.0864, 0.4804, -0.2972, -0.4865, 0.7871, -0.4657],
        [5.5328, 0.7072, 1.006, 0.256, -1.1362, 1.4537, -0.601],
        [-1.8581, 0.8153, -0.1699, 1.3297, -0.1413, 4.3427, -1.4155]),
    40: ([0.0] * 7, [1.0] * 7, [1.247] * 7),
}

TABLE4_POINTS = [(0, 10), (1, 10), (2, 8), (2, 5), (1, 3), (0, 3), (-1, 5), (-1, 8)]
TABLE4_ROWS = {
    0: ([1, 1.5, 1, 0.6667, 1, 1.5, 1, 0.6667], [2, 1.5, 1.3333, 1, 2, 1.5, 1.3333, 1]),
    1: ([1.5, 1.16667, 0.8571, 0.6667, 1.5, 1.16667, 0.8571, 0.6667],
        [2, 1.3333, 1.1429, 1.3333, 2, 1.3333, 1.1429, 1.3333]),
    2: ([1.5, 1, 0.6667, 1, 1.5, 1, 0.6667, 1], [2, 1, 1.3333, 1.5, 2, 1, 1.3333, 1.5]),
    3: ([1.5, 0.6667, 0.8333, 1.2, 1.5, 0.6667, 0.8333, 1.2], [1.5, 1, 1.5, 1.8, 1.5, 1, 1.5, 1.8]),
    4: ([1, 0.6667, 1, 1.5, 1, 0.6667, 1, 1.5], [1.3333, 1, 2, 1.5, 1.3333, 1, 2, 1.5]),
}

TABLE5_LIMITS = {  # (kappa, kappa_bar, tau) of the limit heptagon
    0.1: ([610.7435] + [0.3433] * 6,
          [-534.4434] + [0.6484] * 5 + [75.9567],
          [542.8570] + [-0.2349] * 4 + [7.7651, -67.5432]),
    0.2: ([46.4871] + [0.5274] * 6,
          [-31.1672] + [0.8180] * 5 + [14.7925],
          [34.8254] + [-0.1598] * 4 + [2.8402, -11.1344]),
}
TABLE5_SEEDS = (1, 2)
TABLE5_RTOL = 1e-2
TABLE5_AGREEMENT = 1e-4


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    computed: float
    tolerance: float
    relative: bool = False

    @property
    def ok(self) -> bool:
        err = abs(self.computed - self.expected)
        bound = self.tolerance * abs(self.expected) if self.relative else self.tolerance
        return bool(np.isfinite(self.computed)) and err <= bound


@dataclass
class TableResult:
    table: int
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def add_row(self, name: str, expected, computed, tol: float = CELL_TOL, relative: bool = False):
        for i, (e, c) in enumerate(zip(expected, computed)):
            self.checks.append(Check(f"{name}[{i}]", float(e), float(c), tol, relative))

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"table {self.table}: {status} ({len(self.checks) - len(self.failures)}/{len(self.checks)} cells)"]
        for c in self.failures:
            lines.append(f"  {c.name}: expected {c.expected:.4f}, got {c.computed:.4f}")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def reproduce_table_1(max_generations: int = 60) -> TableResult:
    """Transversal flow with mean-curvature weights on a planar pentagon in space."""
    res = TableResult(1)
    trace = run_flow(make_flow("transversal", recipe="mean"), Polygon(TABLE1_POINTS), max_generations)
    sigs = trace.signatures
    for g, (k, kb, a1, a2) in TABLE1_ROWS.items():
        s = sigs[g]
        res.add_row(f"kappa^{g}", k, s.kappa)
        res.add_row(f"kappa_bar^{g}", kb, s.kappa_bar)
        res.add_row(f"a1^{g}", [a1], [s.kappa.mean()])
        res.add_row(f"a2^{g}", [a2], [s.kappa_bar.mean()])
    # the stable state: means agree at 2.5639 by some generation within the budget
    hit = next((g for g, s in enumerate(sigs)
                if abs(s.kappa.mean() - 2.5639) < 1e-2 and abs(s.kappa_bar.mean() - 2.5639) < 1e-2), None)
    res.add_row(f"a1^{max_generations}", [2.5639], [sigs[-1].kappa.mean()], 1e-2)
    res.add_row(f"a2^{max_generations}", [2.5639], [sigs[-1].kappa_bar.mean()], 1e-2)
    res.notes.append(f"means first reach 2.5639 +- 1e-2 at generation {hit}")
    res.notes.append(f"max prediction/recomputation gap {trace.max_cross_check():.1e}")
    return res


def reproduce_table_2(generations: int = 80) -> TableResult:
    """Proportional division with alpha = 0.8 on a planar heptagon."""
    res = TableResult(2)
    trace = run_flow(make_flow("proportional", alpha=0.8), Polygon(TABLE2_POINTS), generations)
    sigs = trace.signatures
    for g, (k, kb) in TABLE2_ROWS.items():
        res.add_row(f"kappa^{g}", k, sigs[g].kappa)
        res.add_row(f"kappa_bar^{g}", kb, sigs[g].kappa_bar)
    res.add_row("kappa_bar^final vs 2cos(2pi/7)", [2 * np.cos(2 * np.pi / 7)] * 7, sigs[-1].kappa_bar)
    res.notes.append(f"max prediction/recomputation gap {trace.max_cross_check():.1e}")
    return res


def reproduce_table_3(generations: int = 60) -> TableResult:
    """Proportional division with alpha = 0.4 on a space heptagon."""
    res = TableResult(3)
    trace = run_flow(make_flow("proportional", alpha=0.4), Polygon(TABLE3_POINTS), generations)
    sigs = trace.signatures
    for g, (t, k, kb) in TABLE3_ROWS.items():
        tol = 1e-6 if g == 40 else CELL_TOL  # given in units of 1e-7 at generation 40
        res.add_row(f"tau^{g}", t, sigs[g].tau, tol)
        res.add_row(f"kappa^{g}", k, sigs[g].kappa)
        res.add_row(f"kappa_bar^{g}", kb, sigs[g].kappa_bar)
    res.notes.append(f"max |tau| at generation 40: {np.abs(sigs[40].tau).max():.1e}")
    res.notes.append(f"max prediction/recomputation gap {trace.max_cross_check():.1e}")
    return res


def reproduce_table_4() -> TableResult:
    """Inverse pentagram map on a parallel, equal-opposite-sides octagon."""
    res = TableResult(4)
    report, trace = stability_probe(make_flow("inverse-pentagram"), Polygon(TABLE4_POINTS),
                                    max_generations=8, max_period=8)
    sigs = trace.signatures
    if len(sigs) < 5:
        sigs = run_flow(make_flow("inverse-pentagram"), Polygon(TABLE4_POINTS), 4).signatures
    for g, (k, kb) in TABLE4_ROWS.items():
        res.add_row(f"kappa^{g}", k, sigs[g].kappa)
        res.add_row(f"kappa_bar^{g}", kb, sigs[g].kappa_bar)
    dist, shift = signature_distance(sigs[0], sigs[4])
    res.checks.append(Check("generation 4 vs generation 0 (cyclic)", 0.0, dist, 1e-9))
    period = report.periodic.period if report.periodic else None
    res.checks.append(Check("period", 4.0, float(period or 0), 0.0))
    res.notes.append(f"generation 4 = generation 0 shifted by {shift}; probe: period {period}")
    return res


def endpoint_limit(c: float, seed: int, variant: str = "verbatim", tol: float = 1e-10,
                   max_generations: int = 6000):
    """Iterate the endpoint flow from a seeded random heptagon until the signature settles."""
    poly = random_polygon(np.random.default_rng(seed), 7, dimension=3)
    report, trace = stability_probe(make_flow("endpoint", c=c, variant=variant), poly,
                                    max_generations=max_generations, max_period=1, tol=tol)
    return trace.signatures[-1], report, len(trace) - 1


def reproduce_table_5(seeds=TABLE5_SEEDS, variant: str = "verbatim") -> TableResult:
    """Endpoint flow limits for c = 0.1 and c = 0.2, from several random seeds."""
    res = TableResult(5)
    for c, (k, kb, t) in TABLE5_LIMITS.items():
        limits = []
        for seed in seeds:
            sig, report, gens = endpoint_limit(c, seed, variant)
            limits.append(sig)
            res.add_row(f"c={c} seed={seed} kappa", k, sig.kappa, TABLE5_RTOL, relative=True)
            res.add_row(f"c={c} seed={seed} kappa_bar", kb, sig.kappa_bar, TABLE5_RTOL, relative=True)
            res.add_row(f"c={c} seed={seed} tau", t, sig.tau, TABLE5_RTOL, relative=True)
            res.notes.append(f"c={c} seed={seed}: {gens} generations, {'settled' if report.stable else 'not settled'}")
        for other in limits[1:]:
            gap = float(np.abs(other.values - limits[0].values).max() / np.abs(limits[0].values).max())
            res.checks.append(Check(f"c={c} seed agreement (relative)", 0.0, gap, TABLE5_AGREEMENT))
    if not res.passed:
        res.notes.append(f"the {variant} last-vertex rule does not reproduce the reference limits")
    return res


REPRODUCERS = {1: reproduce_table_1, 2: reproduce_table_2, 3: reproduce_table_3,
               4: reproduce_table_4, 5: reproduce_table_5}


def reproduce(table: int) -> TableResult:
    if table not in REPRODUCERS:
        raise ValueError(f"no table {table}; choose from {sorted(REPRODUCERS)}")
    return REPRODUCERS[table]()

