"""Experiment drivers behind the command-line subcommands.

Each driver takes resolved parameters and a seed and returns an :class:`Artifact`:
an optional table (CSV-ready, independent variable first), a JSON-ready report and a
dict of named pass/fail checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import benchmarks as bm
from . import chaos, designs, geometry, haar, levels, models, spectra
from .errors import ConfigError
from .linalg import PAULI_X, PAULI_Z, embed_site, is_unitary
from .rng import RngSeed


@dataclass
class Artifact:
    columns: list[str] | None = None
    rows: list[list] | None = None
    report: dict = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class Param:
    type: type
    default: object
    help: str = ""


def _ints(text) -> list[int]:
    """'1,2,5' or 'start:stop:step' (stop exclusive) -> list of ints."""
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    text = str(text).strip()
    if ":" in text:
        parts = [int(x) for x in text.split(":")]
        return list(range(*parts))
    return [int(x) for x in text.split(",") if x.strip()]


IntList = _ints


# -- drivers ------------------------------------------------------------------

def run_haar_sample(p, seed: RngSeed) -> Artifact:
    rows = []
    ok = True
    for k, s in enumerate(seed.children(p["samples"])):
        if p["kind"] == "state":
            amps = haar.sample_haar_state(p["D"], s).amplitudes
            rows += [[k, i, a.real, a.imag] for i, a in enumerate(amps)]
        elif p["kind"] == "unitary":
            u = haar.sample_haar_unitary(p["D"], s)
            ok &= is_unitary(u)
            rows += [[k, i, j, u[i, j].real, u[i, j].imag] for i in range(p["D"]) for j in range(p["D"])]
        else:
            raise ConfigError(f"kind must be 'state' or 'unitary', got {p['kind']!r}")
    cols = ["sample", "i", "re", "im"] if p["kind"] == "state" else ["sample", "row", "col", "re", "im"]
    return Artifact(cols, rows, {"D": p["D"], "kind": p["kind"]}, {"unitary": bool(ok)})


def run_spectrum(p, seed: RngSeed) -> Artifact:
    split = spectra.BipartiteSplit(p["m"], p["n"])
    eig = spectra.sample_spectra(split, p["samples"], seed)
    lo, hi = spectra.mp_edges(split.canonical())
    edges = np.linspace(lo, hi, p["bins"] + 1)
    counts, _ = np.histogram(eig.ravel(), bins=edges)
    width = np.diff(edges)
    density = counts / eig.size / width
    mass = spectra.mp_bin_masses(edges, split.canonical())
    centres = (edges[:-1] + edges[1:]) / 2
    rows = [[c, d, m / w, spectra.mp_pdf(c, split.canonical())]
            for c, d, m, w in zip(centres, density, mass, width)]
    l1 = spectra.mp_l1_distance(eig, split.canonical(), p["bins"])
    report = {"lambda_minus": lo, "lambda_plus": hi, "l1_distance": l1,
              "min_eigenvalue": float(eig.min()), "max_eigenvalue": float(eig.max())}
    return Artifact(["lambda", "density", "mp_bin_density", "mp_density"], rows, report,
                    {"mp_l1_below_0.05": l1 < 0.05})


def moments_row(m: int, n: int, samples: int, seed: RngSeed) -> dict:
    split = spectra.BipartiteSplit(m, n)
    pred = spectra.moment_predictions(split.canonical())
    eig = spectra.sample_spectra(split, samples, seed)
    pur = spectra.purity(eig)
    ent = spectra.von_neumann_entropy(eig)
    return {
        "m": m, "n": n, "samples": samples,
        "purity_pred": pred.purity_mean, "purity_mc": float(pur.mean()),
        "purity_se": float(pur.std(ddof=1) / np.sqrt(samples)),
        "entropy_pred": pred.page_exact, "entropy_mc": float(ent.mean()),
        "entropy_se": float(ent.std(ddof=1) / np.sqrt(samples)),
        "entropy_asymptotic": pred.page_asymptotic,
    }


def run_moments(p, seed: RngSeed) -> Artifact:
    row = moments_row(p["m"], p["n"], p["samples"], seed)
    checks = {
        "purity_within_3se": abs(row["purity_mc"] - row["purity_pred"]) <= 3 * row["purity_se"],
        "entropy_within_3se": abs(row["entropy_mc"] - row["entropy_pred"]) <= 3 * row["entropy_se"],
    }
    cols = list(row)
    return Artifact(cols, [[row[c] for c in cols]], row, checks)


def schmidt_entropies(m: int, n: int, samples: int, seed: RngSeed) -> np.ndarray:
    """Subsystem entropies from Schmidt values (SVD of the m x n coefficient matrix)."""
    def one(s):
        c = haar.sample_haar_state(m * n, s).amplitudes.reshape(m, n)
        return spectra.von_neumann_entropy(np.linalg.svd(c, compute_uv=False) ** 2)
    return np.array([one(s) for s in seed.children(samples)])


def page_curve(total_qubits: int, samples: int, seed: RngSeed) -> list[dict]:
    d = 2**total_qubits
    out = []
    for k in range(1, total_qubits):
        m = 2**k
        ent = schmidt_entropies(m, d // m, samples, seed.child(k))
        out.append({"m": m, "log_m": float(np.log(m)), "entropy_mc": float(ent.mean()),
                    "entropy_se": float(ent.std(ddof=1) / np.sqrt(samples)),
                    "page_exact": spectra.page_entropy(m, d // m)})
    return out


def page_curve_checks(curve: list[dict], total: int) -> dict[str, bool]:
    d = 2**total
    by_m = {r["m"]: r for r in curve}
    rising = [r for r in curve if r["m"] ** 2 <= d]
    means = [r["entropy_mc"] for r in rising]
    monotone = all(b >= a for a, b in zip(means, means[1:]))
    sym = True
    for m, r in by_m.items():
        mirror = by_m.get(d // m)
        if mirror is not None and m < d // m:
            se = np.hypot(r["entropy_se"], mirror["entropy_se"])
            sym &= abs(r["entropy_mc"] - mirror["entropy_mc"]) <= 3 * se
    return {"monotone_to_half": bool(monotone), "symmetric_m_n": bool(sym)}


def run_page_curve(p, seed: RngSeed) -> Artifact:
    curve = page_curve(p["total_qubits"], p["samples"], seed)
    cols = ["m", "log_m", "entropy_mc", "entropy_se", "page_exact"]
    return Artifact(cols, [[r[c] for c in cols] for r in curve], {"curve": curve},
                    page_curve_checks(curve, p["total_qubits"]))


def _sff_sampler(p) -> Callable[[RngSeed], object]:
    model = p["model"]
    if model == "gue":
        return lambda s: models.build_gue(p["D"], s)
    if model == "poisson":
        return lambda s: s.generator().standard_normal(p["D"])
    if model == "syk":
        return lambda s: models.build_syk4(p["N"], 1.0, s)
    raise ConfigError(f"unknown SFF model {model!r} (gue, poisson, syk)")


def run_sff(p, seed: RngSeed) -> Artifact:
    times = np.logspace(np.log10(p["t_min"]), np.log10(p["t_max"]), p["n_times"])
    curve = chaos.sff_curve(_sff_sampler(p), times, p["beta"], p["draws"], seed)
    d = p["D"] if p["model"] != "syk" else 2 ** p["N"]
    analysis = chaos.analyze_sff(curve, p["late_time"])
    report = {"dip_time": analysis.dip_time, "dip_value": analysis.dip_value,
              "ramp_window": analysis.ramp_window, "ramp_slope": analysis.ramp_slope,
              "plateau": analysis.plateau, "has_ramp": analysis.has_ramp, "D": d}
    checks = {}
    if p["beta"] == 0:
        checks["plateau_within_10pct_of_D"] = abs(analysis.plateau / d - 1) < 0.1
    if p["model"] == "gue":
        checks["ramp_detected"] = analysis.has_ramp
    elif p["model"] == "poisson":
        checks["no_ramp"] = not analysis.has_ramp
    rows = [[t, k, e, kn] for t, k, e, kn in zip(curve.times, curve.values, curve.standard_errors, curve.normalized)]
    return Artifact(["t", "K", "K_se", "K_normalized"], rows, report, checks)


def _ising(p):
    return models.build_mixed_field_ising(p["L"], p["J"], p["hx"], p["hz"])


def run_otoc(p, seed: RngSeed) -> Artifact:
    model = _ising(p)
    w = embed_site(PAULI_X, p["w_site"], p["L"])
    v = embed_site(PAULI_X, p["v_site"] % p["L"], p["L"])
    times = np.linspace(0, p["t_max"], p["n_times"])
    pts = chaos.otoc_series(w, v, model, times, p["beta"])
    rows = [[pt.t, pt.F.real, pt.F.imag, pt.C, pt.C - 2 * (1 - pt.F.real)] for pt in pts]
    resid = max(abs(r[4]) for r in rows)
    checks = {"identity_1e-9": resid < 1e-9}
    if p["w_site"] != p["v_site"] % p["L"]:
        checks["F0_equals_1"] = abs(pts[0].F - 1) < 1e-12
    return Artifact(["t", "F_re", "F_im", "C", "identity_residual"], rows,
                    {"max_identity_residual": resid}, checks)


def run_cone(p, seed: RngSeed) -> Artifact:
    model = _ising(p)
    ops = [embed_site(PAULI_Z, i, p["L"]) for i in range(p["L"])]
    times = np.linspace(0, p["t_max"], p["n_times"])
    cone = chaos.commutator_cone(model, ops, times, p["source"])
    front = chaos.front_positions(cone, p["source"])
    rows = [[t, *c, int(f)] for t, c, f in zip(times, cone, front)]
    return Artifact(["t", *[f"site_{i}" for i in range(p["L"])], "front"], rows,
                    {"front": front.tolist()},
                    {"front_monotone": bool(np.all(np.diff(front) >= 0))})


def _ensemble(p) -> designs.UnitaryEnsemble:
    name = p["ensemble"]
    if name == "pauli":
        return designs.pauli_group(1)
    if name == "clifford":
        return designs.clifford_group(1)
    if name == "clifford2":
        return designs.clifford_group(2)
    if name == "identity":
        return designs.UnitaryEnsemble.explicit([np.eye(2)], name="identity")
    if name == "haar":
        return designs.UnitaryEnsemble.haar(2 ** p["qubits"])
    if name == "brickwall":
        return designs.brick_wall_ensemble(p["qubits"], p["depth"])
    raise ConfigError(f"unknown ensemble {name!r}")


def run_design_test(p, seed: RngSeed) -> Artifact:
    rep = designs.design_test(_ensemble(p), p["t"], n_samples=p["samples"],
                              tolerance=p["tolerance"], seed=seed)
    report = {"ensemble": p["ensemble"], "t": rep.t, "max_deviation": rep.max_deviation,
              "mc_error": rep.mc_error, "tolerance": rep.tolerance, "pass": rep.passed}
    return Artifact(["t", "max_deviation", "mc_error", "pass"],
                    [[rep.t, rep.max_deviation, rep.mc_error, rep.passed]], report,
                    {"design_pass": rep.passed} if p["expect_pass"] else {"design_fail": not rep.passed})


def _noise(kind: str, dim: int, value: float):
    if kind == "none":
        return None
    if kind == "depolarizing":
        return bm.depolarizing(dim, value)
    if dim != 2:
        raise ConfigError(f"{kind} noise is single-qubit only")
    if kind == "amplitude_damping":
        return bm.amplitude_damping(value)
    if kind == "dephasing":
        return bm.dephasing(value)
    raise ConfigError(f"unknown noise {kind!r}")


def run_rb(p, seed: RngSeed) -> Artifact:
    d = 2 ** p["qubits"]
    noise = _noise(p["noise"], d, p["noise_param"])
    res = bm.rb_experiment(p["qubits"], noise, _ints(p["lengths"]), p["sequences"], p["shots"] or None, seed)
    f = res.fit
    rows = [[int(m), s, e, f.A * f.p**m + f.B] for m, s, e in zip(res.lengths, res.survival, res.stderr)]
    report = {"A": f.A, "p": f.p, "B": f.B, "stderr": list(f.stderr), "identifiable": f.identifiable,
              "avg_fidelity": res.avg_fidelity}
    checks = {}
    if noise is None:
        checks["p_compatible_with_1"] = (not f.identifiable) or abs(f.p - 1) <= 3 * f.stderr[1]
    elif p["noise"] == "depolarizing":
        checks["p_matches_noise"] = abs(f.p - p["noise_param"]) <= max(3 * f.stderr[1], 2e-3)
    return Artifact(["m", "survival", "stderr", "fit"], rows, report, checks)


def run_xeb(p, seed: RngSeed) -> Artifact:
    noise = _noise(p["noise"], 2 ** p["qubits"], p["noise_param"])
    results = bm.xeb_experiment(p["qubits"], _ints(p["depths"]), noise, p["circuits"], p["shots"], seed)
    rows = [[r.depth, r.f_xeb, r.stderr, r.f_xeb_normalized, r.stderr_normalized,
             bm.porter_thomas_ks(r.scaled_probs)] for r in results]
    report = {"results": [dict(zip(["depth", "f_xeb", "stderr", "f_xeb_normalized",
                                    "stderr_normalized", "porter_thomas_ks"], row)) for row in rows]}
    return Artifact(["depth", "f_xeb", "stderr", "f_xeb_normalized", "stderr_normalized", "porter_thomas_ks"],
                    rows, report)


def run_geometry(p, seed: RngSeed) -> Artifact:
    rows = []
    for steps in _ints(p["steps"]):
        path = geometry.UnitaryPath.from_hamiltonian(PAULI_Z, p["t"], steps)
        length = geometry.path_length(path)
        rows.append([steps, length, length - geometry.geodesic_length(PAULI_Z, p["t"])])
    g = geometry.numerical_metric(p["beta_angle"], p["gamma"], p["delta"]) / 2
    m = geometry.su2_metric(p["gamma"])
    metric_err = float(np.max(np.abs(np.diag(g) - [m.g_bb, m.g_gg, m.g_dd])))
    cross = float(np.max(np.abs(g - np.diag(np.diag(g)))))
    report = {"metric_max_error": metric_err, "metric_max_cross_term": cross,
              "analytic": {"g_bb": m.g_bb, "g_gg": m.g_gg, "g_dd": m.g_dd}}
    return Artifact(["steps", "length", "error"], rows, report,
                    {"metric_1e-6": metric_err < 1e-6 and cross < 1e-6})


# -- registry -------------------------------------------------------------------

_ISING = {"L": Param(int, 8), "J": Param(float, models.ISING_DEFAULTS["J"]),
          "hx": Param(float, models.ISING_DEFAULTS["hx"]), "hz": Param(float, models.ISING_DEFAULTS["hz"])}

EXPERIMENTS: dict[str, tuple[Callable, dict[str, Param]]] = {
    "haar-sample": (run_haar_sample, {"D": Param(int, 8), "kind": Param(str, "state"),
                                      "samples": Param(int, 1)}),
    "spectrum": (run_spectrum, {"m": Param(int, 64), "n": Param(int, 256), "samples": Param(int, 200),
                                "bins": Param(int, 24)}),
    "moments": (run_moments, {"m": Param(int, 2), "n": Param(int, 2), "samples": Param(int, 10_000)}),
    "page-curve": (run_page_curve, {"total_qubits": Param(int, 10), "samples": Param(int, 2000)}),
    "sff": (run_sff, {"model": Param(str, "gue"), "D": Param(int, 128), "N": Param(int, 8),
                      "draws": Param(int, 200), "beta": Param(float, 0.0), "t_min": Param(float, 0.1),
                      "t_max": Param(float, 3e4), "n_times": Param(int, 300),
                      "late_time": Param(float, 3000.0)}),
    "otoc": (run_otoc, {**_ISING, "w_site": Param(int, 0), "v_site": Param(int, -1),
                        "t_max": Param(float, 8.0), "n_times": Param(int, 41), "beta": Param(float, 0.0)}),
    "cone": (run_cone, {**_ISING, "source": Param(int, 0), "t_max": Param(float, 6.0),
                        "n_times": Param(int, 31)}),
    "design-test": (run_design_test, {"ensemble": Param(str, "clifford"), "t": Param(int, 2),
                                      "qubits": Param(int, 1), "depth": Param(int, 4),
                                      "samples": Param(int, 20_000), "tolerance": Param(float, 1e-8),
                                      "expect_pass": Param(bool, True)}),
    "rb": (run_rb, {"qubits": Param(int, 1), "noise": Param(str, "depolarizing"),
                    "noise_param": Param(float, 0.99), "lengths": Param(IntList, "1:101"),
                    "sequences": Param(int, 200), "shots": Param(int, 1000)}),
    "xeb": (run_xeb, {"qubits": Param(int, 4), "depths": Param(IntList, "16"), "noise": Param(str, "none"),
                      "noise_param": Param(float, 0.0), "circuits": Param(int, 100), "shots": Param(int, 500)}),
    "geometry": (run_geometry, {"t": Param(float, 1.0), "steps": Param(IntList, "250,500,1000,2000"),
                                "beta_angle": Param(float, 0.3), "gamma": Param(float, 0.7),
                                "delta": Param(float, 1.1)}),
}
