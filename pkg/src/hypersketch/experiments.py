"""Named, seeded experiments that check the randomized guarantees against exact oracles.

Each experiment returns an :class:`ExperimentReport` whose metrics depend
only on (name, parameters, seed); ``wall_time_ms`` is the one field that
varies between runs.
"""

from __future__ import annotations

import json
import logging
import math
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable

import numpy as np

from .contract import contraction_trials, cut_count_bound, q_bound, sunflower
from .hypercore import Hypergraph, cut_weights, enumerate_cuts_below, random_hypergraph, weights_close
from .maxcutlab import build_gadget, cycle_lengths, exact_max_cut, gadget_expected_value, gen_bhh, graph_from_edges, two_party_estimate
from .mincut import min_cut, strong_connectivities
from .satsketch import assignment_masks, cnf_to_hypergraph, exact_values, random_cnf, sketch_formula
from .sparsify import SparsifyParams, edge_probabilities, expected_size_bound, max_relative_error, sparsify

__all__ = ["EXPERIMENTS", "ExperimentReport", "UnknownExperimentError", "run_experiment"]

log = logging.getLogger(__name__)


class UnknownExperimentError(KeyError):
    pass


@dataclass
class ExperimentReport:
    experiment: str
    parameters: dict[str, Any]
    seed: int
    metrics: dict[str, float]
    passed: bool
    wall_time_ms: float = 0.0

    def to_dict(self, *, timing: bool = True) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["metrics"] = {k: v if math.isfinite(v) else str(v) for k, v in d["metrics"].items()}
        if not timing:
            d.pop("wall_time_ms")
        return d

    def to_json(self, *, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing=timing), sort_keys=True)


def _cut_counting(p: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    checks = c1_viol = c4_viol = 0
    worst = 0.0
    for r in p["r_values"]:
        for n in p["n_values"]:
            for _ in range(p["instances"]):
                H = random_hypergraph(n, p["edges_per_vertex"] * n, r, rng, min_size=2, weights=p["weights"], connected=True)
                _, w_hat = min_cut(H)
                for alpha in p["alphas"]:
                    count = len(enumerate_cuts_below(H, alpha * w_hat))
                    bound = cut_count_bound(n, r, alpha)
                    checks += 1
                    worst = max(worst, count / bound)
                    if count > bound:
                        c1_viol += 1
                        log.warning("constant-1 bound exceeded: n=%d r=%d alpha=%s count=%d", n, r, alpha, count)
                    if count > 4 * bound:
                        c4_viol += 1
    metrics = {"checks": checks, "constant1_violations": c1_viol, "constant4_violations": c4_viol, "max_count_over_bound": worst}
    return metrics, c4_viol == 0


def _sunflower_count(p: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    r, alpha = p["r"], p["alpha"]
    metrics, ok = {}, True
    for m in p["m_values"]:
        H = sunflower(r, m, alpha)
        _, w_hat = min_cut(H)
        count = len(enumerate_cuts_below(H, alpha * w_hat))
        need = m * (2 ** (r - 1) - 1)
        metrics[f"m{m}_min_cut"] = w_hat
        metrics[f"m{m}_near_min_cuts"] = count
        metrics[f"m{m}_required"] = need
        ok &= count >= need and count <= 4 * cut_count_bound(H.n, r, alpha)
    return metrics, ok


def _contraction_probability(p: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    trials = p["trials"]
    checks = failures = 0
    worst_margin = math.inf
    specs = [(3, p["instances"]), (2, p["karger_instances"])]
    for r, count in specs:
        for idx in range(count):
            n = int(rng.integers(p["n_min"], p["n_max"] + 1))
            H = random_hypergraph(n, 2 * n, r, rng, min_size=2, weights=p["weights"], connected=True)
            _, w_hat = min_cut(H)
            target = [c.canonical_mask for c, _ in enumerate_cuts_below(H, w_hat)]
            q = q_bound(n, r, 1)
            if r == 2 and not weights_close(q, 2 / (n * (n - 1))):
                failures += 1
            masks = contraction_trials(H, 1, trials, int(rng.integers(0, 2**31)))
            uniq, counts = np.unique(masks, return_counts=True)
            freq = dict(zip(uniq.tolist(), (counts / trials).tolist()))
            sigma = math.sqrt(q * (1 - q) / trials)
            for mask in target:
                f = freq.get(mask, 0.0)
                checks += 1
                worst_margin = min(worst_margin, (f - (q - 4 * sigma)) / sigma)
                if f < q - 4 * sigma:
                    failures += 1
    metrics = {"checks": checks, "failures": failures, "worst_margin_sigmas": worst_margin}
    return metrics, failures == 0


def _sparsifier_quality(p: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    n, m, r, d = p["n"], p["m"], p["r"], p["d"]
    seeds = p["seeds"]
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64) << 1
    configs = fails = size_fails = 0
    worst_rate, worst_err = 1.0, 0.0
    first = None
    for g in range(p["graphs"]):
        H = random_hypergraph(n, m, r, rng)
        strengths = strong_connectivities(H)
        if first is None:
            first = (H, strengths)
        for eps in p["epsilons"]:
            good, sizes = 0, []
            for s in range(seeds):
                sparse, rep = sparsify(H, SparsifyParams(eps, d, seed=1000 * g + s), strengths=strengths)
                err = max_relative_error(H, sparse, masks)
                worst_err = max(worst_err, err)
                good += err <= eps
                sizes.append(rep.edge_count)
            configs += 1
            rate = good / seeds
            worst_rate = min(worst_rate, rate)
            fails += rate < 0.9
            size_fails += float(np.mean(sizes)) > expected_size_bound(n, r, eps, d)
    # unbiasedness of three fixed cuts on the first graph
    H, strengths = first
    eps = max(p["epsilons"])
    fixed = np.array([0b10, (1 << (n // 2)) - 2, int(rng.integers(1, 1 << (n - 1))) << 1], dtype=np.int64)
    truth = cut_weights(H, fixed)
    total = np.zeros(3)
    for s in range(p["unbiased_seeds"]):
        sparse, _ = sparsify(H, SparsifyParams(eps, d, seed=10**6 + s), strengths=strengths)
        total += cut_weights(sparse, fixed)
    mean = total / p["unbiased_seeds"]
    probs = edge_probabilities(H, strengths, SparsifyParams(eps, d))
    var_term = H.weight_array**2 * (1 - probs) / probs
    unbiased_fails, worst_z = 0, 0.0
    for i, mask in enumerate(fixed):
        crossing = np.array([bool(em & int(mask)) and (em & int(mask)) != em for em in H.edge_masks])
        sd = math.sqrt(var_term[crossing].sum() / p["unbiased_seeds"])
        dev = abs(mean[i] - truth[i])
        if sd == 0:
            unbiased_fails += not weights_close(mean[i], truth[i])
        else:
            worst_z = max(worst_z, dev / sd)
            unbiased_fails += dev > 3 * sd
    metrics = {
        "configs": configs,
        "configs_below_90pct": fails,
        "worst_success_rate": worst_rate,
        "worst_max_relative_error": worst_err,
        "size_bound_violations": size_fails,
        "unbiased_failures": unbiased_fails,
        "unbiased_worst_z": worst_z,
    }
    return metrics, fails == 0 and size_fails == 0 and unbiased_fails == 0


def _sat_quality(p: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    nv, eps, d, r = p["n"], p["epsilon"], p["d"], p["r"]
    phi = random_cnf(nv, p["m"], r, rng)
    H, _, _ = cnf_to_hypergraph(phi)
    strengths = strong_connectivities(H)
    exact = exact_values(phi).astype(float)
    masks = assignment_masks(nv)
    bound = expected_size_bound(H.n, r + 1, eps, d)
    good, worst_err, max_edges = 0, 0.0, 0
    for s in range(p["seeds"]):
        sk = sketch_formula(phi, eps, d, seed=s, strengths=strengths)
        est = cut_weights(sk.hypergraph, masks)
        nz = exact > 0
        if np.any(~nz & (est != 0)):
            err = math.inf
        else:
            err = float(np.max(np.abs(est[nz] / exact[nz] - 1))) if nz.any() else 0.0
        worst_err = max(worst_err, err)
        good += err <= eps
        max_edges = max(max_edges, sk.hypergraph.m)
    rate = good / p["seeds"]
    metrics = {"success_rate": rate, "worst_max_relative_error": worst_err, "max_edges": max_edges, "edge_bound": bound}
    return metrics, rate >= 0.9 and max_edges <= bound


def _gadget_values(p: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    if "k" in p:
        inst = gen_bhh(p["k"], p["t"], p["b"], rng)
        g = build_gadget(inst)
        got, want = exact_max_cut(g.graph), gadget_expected_value(inst.n, inst.t, inst.b)
        shape_ok = cycle_lengths(g.graph) == _expected_cycles(inst.n, inst.t, inst.b)
        return {"maxcut": got, "expected": want, "cycles_ok": int(shape_ok)}, got == want and shape_ok
    instances = mismatches = 0
    for k in range(1, p["k_max"] + 1):
        for t in p["t_values"]:
            for b in (0, 1):
                for _ in range(p["repeats"]):
                    inst = gen_bhh(k, t, b, rng)
                    g = build_gadget(inst)
                    instances += 1
                    ok = exact_max_cut(g.graph) == gadget_expected_value(inst.n, t, b)
                    ok &= cycle_lengths(g.graph) == _expected_cycles(inst.n, t, b)
                    mismatches += not ok
    return {"instances": instances, "mismatches": mismatches}, mismatches == 0


def _expected_cycles(n: int, t: int, b: int) -> list[int]:
    return [2 * t + 1] * (2 * n // t) if b == 0 else [4 * t + 2] * (n // t)


def _two_party_bound(p: dict, rng: np.random.Generator) -> tuple[dict, bool]:
    violations = tight = 0
    for _ in range(p["graphs"]):
        n = int(rng.integers(2, p["n"] + 1))
        m = int(rng.integers(1, 2 * n + 1))
        edges = []
        while len(edges) < m:
            a, b = (int(v) for v in rng.choice(n, size=2, replace=False))
            edges.append((a, b))
        split = rng.integers(0, 2, size=m)
        EA = [e for e, s in zip(edges, split) if s == 0]
        EB = [e for e, s in zip(edges, split) if s == 1]
        wa = int(exact_max_cut(graph_from_edges(n, EA)))
        wb = int(exact_max_cut(graph_from_edges(n, EB)))
        w = int(exact_max_cut(graph_from_edges(n, edges)))
        if not (2 * (wa + wb) <= 3 * w and w <= wa + wb):
            violations += 1
        # Bob holding nothing: the estimate is exactly two thirds of the truth
        tight += math.isclose(two_party_estimate(edges, [], n), 2 * w / 3, rel_tol=1e-12)
    metrics = {"pairs": p["graphs"], "violations": violations, "empty_bob_tight": tight}
    return metrics, violations == 0 and tight == p["graphs"]


EXPERIMENTS: dict[str, tuple[Callable, dict]] = {
    "cut-counting": (
        _cut_counting,
        {"n_values": [6, 10, 14], "r_values": [2, 3, 4], "alphas": [1, 1.5, 2], "instances": 2, "edges_per_vertex": 2, "weights": [1, 2, 3]},
    ),
    "sunflower-count": (_sunflower_count, {"r": 3, "m_values": [2, 3], "alpha": 2}),
    "contraction-probability": (
        _contraction_probability,
        {"instances": 10, "karger_instances": 3, "n_min": 5, "n_max": 8, "trials": 100_000, "weights": [1, 2, 3]},
    ),
    "sparsifier-quality": (
        _sparsifier_quality,
        {"graphs": 10, "n": 12, "m": 600, "r": 3, "epsilons": [0.3, 0.5], "d": 1.0, "seeds": 20, "unbiased_seeds": 1000},
    ),
    "sat-quality": (_sat_quality, {"n": 10, "m": 500, "r": 3, "epsilon": 0.4, "d": 1.0, "seeds": 20}),
    "gadget-values": (_gadget_values, {"k_max": 4, "t_values": [2, 3, 4], "repeats": 2}),
    "two-party-bound": (_two_party_bound, {"n": 10, "graphs": 200}),
}


def run_experiment(name: str, params: dict | None = None, seed: int = 0) -> ExperimentReport:
    """Run a named experiment; ``params`` override the defaults key by key."""
    if name not in EXPERIMENTS:
        raise UnknownExperimentError(name)
    fn, defaults = EXPERIMENTS[name]
    merged = {**defaults, **(params or {})}
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    metrics, passed = fn(merged, rng)
    elapsed = (time.perf_counter() - start) * 1000
    metrics = {k: (float(v) if isinstance(v, (float, np.floating)) else int(v)) for k, v in metrics.items()}
    return ExperimentReport(name, merged, seed, metrics, bool(passed), round(elapsed, 3))
