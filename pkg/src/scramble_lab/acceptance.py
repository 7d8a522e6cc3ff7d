"""End-to-end acceptance criteria, shared by ``tests/test_acceptance.py`` and the
``reproduce-paper`` subcommand.  Every check compares a simulation against an
independent closed form at a fixed tolerance."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import benchmarks as bm
from . import chaos, designs, geometry, haar, levels, models, spectra
from .experiments import moments_row, page_curve, page_curve_checks
from .linalg import PAULI_X, PAULI_Z, embed_site, tensor_product
from .rng import RngSeed

ACCEPTANCE_SEED = RngSeed(20240917)


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] C{self.criterion:02d} {self.name}: {self.detail}"


def _seed(k: int) -> RngSeed:
    return ACCEPTANCE_SEED.child(k)


def criterion_1() -> list[Check]:
    out = []
    for i, (m, n) in enumerate([(2, 2), (2, 4), (4, 4), (4, 8)]):
        r = moments_row(m, n, 10_000, _seed(1).child(i))
        dev = abs(r["purity_mc"] - r["purity_pred"])
        out.append(Check(1, f"purity ({m},{n})", dev <= 3 * r["purity_se"],
                         f"MC {r['purity_mc']:.5f} vs {r['purity_pred']:.5f}, |dev|/SE = {dev / r['purity_se']:.2f}"))
    return out


def criterion_2() -> list[Check]:
    out = []
    for i, (m, n, target) in enumerate([(2, 2, 1 / 3), (2, 4, 1 / 5 + 1 / 6 + 1 / 7)]):
        r = moments_row(m, n, 10_000, _seed(2).child(i))
        dev = abs(r["entropy_mc"] - target)
        out.append(Check(2, f"Page entropy ({m},{n})", dev <= 3 * r["entropy_se"],
                         f"MC {r['entropy_mc']:.5f} vs {target:.6f}, |dev|/SE = {dev / r['entropy_se']:.2f}"))
    pred = spectra.moment_predictions(spectra.BipartiteSplit(4, 64))
    rel = abs(pred.page_asymptotic - pred.page_exact) / pred.page_exact
    out.append(Check(2, "asymptotic Page form at (4,64)", rel < 0.02,
                     f"exact {pred.page_exact:.5f}, asymptotic {pred.page_asymptotic:.5f}, rel {rel:.4f}"))
    return out


def criterion_3() -> list[Check]:
    curve = page_curve(10, 2000, _seed(3))
    checks = page_curve_checks(curve, 10)
    means = ", ".join(f"{r['m']}:{r['entropy_mc']:.3f}" for r in curve)
    return [Check(3, "Page curve monotone up to m = n", checks["monotone_to_half"], means),
            Check(3, "Page curve symmetric under m <-> n (3 SE)", checks["symmetric_m_n"], means)]


def _induced_spectra(samples: int = 200):
    split = spectra.BipartiteSplit(64, 256)
    return split, spectra.sample_spectra(split, samples, _seed(4))


def criterion_4() -> list[Check]:
    split, eig = _induced_spectra()
    l1 = spectra.mp_l1_distance(eig, split)
    lo, hi = spectra.mp_edges(split)
    slack = 3 * split.m ** (-2 / 3) * hi
    inside = eig.min() >= lo - slack and eig.max() <= hi + slack
    return [Check(4, "MP histogram L1 < 0.05", l1 < 0.05, f"L1 = {l1:.4f}"),
            Check(4, "support within MP edges +- 3 m^(-2/3) lambda+", bool(inside),
                  f"[{eig.min():.5f}, {eig.max():.5f}] vs [{lo - slack:.5f}, {hi + slack:.5f}]")]


def criterion_5() -> list[Check]:
    _, eig = _induced_spectra()
    s = levels.ensemble_spacings(eig)
    ks = levels.spacing_ks(s, 2)
    small = float(np.mean(s < 0.1))
    poisson = RngSeed.child(_seed(5), 0).generator().uniform(0, 1, 10_000)
    sp = levels.bulk_spacings(levels.unfold(poisson))
    ks_p = levels.spacing_ks(sp / sp.mean(), None)
    return [Check(5, "induced spacings vs beta=2 surmise KS < 0.05", ks < 0.05, f"KS = {ks:.4f} ({s.size} spacings)"),
            Check(5, "P(s < 0.1) < 0.01", small < 0.01, f"P = {small:.5f}"),
            Check(5, "Poisson control vs exp(-s) KS < 0.05", ks_p < 0.05, f"KS = {ks_p:.4f}")]


def criterion_6() -> list[Check]:
    x = _seed(6).child(0).generator().uniform(0, 1, 10_000)
    u = levels.unfold(x)
    ratios = [levels.number_variance(u, L) / L for L in range(1, 11)]
    worst = max(abs(r - 1) for r in ratios)
    gue = [models.build_gue(256, s).eigenvalues for s in _seed(6).child(1).children(20)]
    sigma5 = np.mean([levels.number_variance(levels.unfold(e)[25:-25], 5.0) for e in gue])
    return [Check(6, "Poisson number variance = L +- 10% (L = 1..10)", worst <= 0.10, f"max rel dev {worst:.3f}"),
            Check(6, "GUE number variance Sigma^2(5) < 5", sigma5 < 5, f"Sigma^2(5) = {sigma5:.3f}")]


SFF_TIMES = np.logspace(-1, np.log10(3e4), 300)


def criterion_7() -> list[Check]:
    d = 128
    seeds = _seed(7).child(0).children(200)
    k0 = max(abs(chaos.sff(models.build_gue(d, s).eigenvalues, 0.0, 0.0) - d * d) for s in seeds[:20])
    curve = chaos.sff_curve(lambda s: models.build_gue(d, s), SFF_TIMES, 0.0, 200, _seed(7).child(0))
    a = chaos.analyze_sff(curve, late_time=3000.0)
    pois = chaos.sff_curve(lambda s: s.generator().standard_normal(d), SFF_TIMES, 0.0, 200, _seed(7).child(1))
    b = chaos.analyze_sff(pois, late_time=3000.0)
    plateau_ok = abs(a.plateau / d - 1) <= 0.10
    return [Check(7, "K(0) = D^2 per draw", k0 < 1e-8 * d * d, f"max |K(0) - D^2| = {k0:.2e}"),
            Check(7, "GUE dip-ramp-plateau", a.has_dip and a.has_ramp and plateau_ok,
                  f"dip t={a.dip_time:.1f}, ramp {a.ramp_window} slope {a.ramp_slope:.2f}, plateau/D = {a.plateau / d:.3f}"),
            Check(7, "Poisson control has no ramp", not b.has_ramp,
                  f"ramp window {b.ramp_window}, plateau/D = {b.plateau / d:.3f}")]


def criterion_8() -> list[Check]:
    L = 8
    model = models.build_mixed_field_ising(L)
    w, v = embed_site(PAULI_X, 0, L), embed_site(PAULI_X, L - 1, L)
    times = np.linspace(0, 8, 41)
    pts = chaos.otoc_series(w, v, model, times)
    resid = max(abs(p.C - 2 * (1 - p.F.real)) for p in pts)
    cone = chaos.commutator_cone(model, [embed_site(PAULI_Z, i, L) for i in range(L)], np.linspace(0, 6, 31))
    front = chaos.front_positions(cone)
    return [Check(8, "C = 2(1 - Re F) on Ising L=8 grid", resid < 1e-9, f"max residual {resid:.2e}"),
            Check(8, "F(0) = 1 for disjoint probes", abs(pts[0].F - 1) < 1e-12, f"F(0) = {pts[0].F:.15f}"),
            Check(8, "light-cone front monotone", bool(np.all(np.diff(front) >= 0)), f"front {front.tolist()}")]


def criterion_9() -> list[Check]:
    t = np.linspace(0, 5, 60)
    pts = [chaos.OtocPoint(float(x), 1 - 0.5e-4 * np.exp(1.4 * x), 1e-4 * np.exp(1.4 * x)) for x in t]
    fit = chaos.lyapunov_fit(pts)
    law = [chaos.scrambling_time(1.0, np.e), chaos.scrambling_time(2.0, np.e**4),
           chaos.scrambling_time(0.5, 200.0, "entropy") - chaos.scrambling_time(0.5, 100.0, "entropy")]
    exact = np.allclose(law, [1.0, 2.0, np.log(2) / 0.5], rtol=0, atol=1e-12)
    return [Check(9, "synthetic lambda_L recovered to 1e-6", abs(fit.lambda_l - 0.7) < 1e-6,
                  f"lambda_L = {fit.lambda_l:.10f}"),
            Check(9, "scrambling time log law", bool(exact), f"{law}")]


def criterion_10() -> list[Check]:
    pauli, cliff = designs.pauli_group(1), designs.clifford_group(1)
    p1 = designs.design_test(pauli, 1, n_samples=20_000, seed=_seed(10).child(0))
    p2 = designs.design_test(pauli, 2, n_samples=20_000, seed=_seed(10).child(1))
    c2 = designs.design_test(cliff, 2, n_samples=20_000, seed=_seed(10).child(2))
    n, depth, seeds = 4, 16, 500
    pur = []
    for s in _seed(10).child(3).children(seeds):
        c = designs.brick_wall_state(n, depth, s).reshape(4, 4)
        pur.append(spectra.purity(np.linalg.eigvalsh(c @ c.conj().T)))
    pur = np.array(pur)
    se = pur.std(ddof=1) / np.sqrt(seeds)
    target = spectra.moment_predictions(spectra.BipartiteSplit(4, 4)).purity_mean
    return [Check(10, "Pauli group passes t=1", p1.passed, f"dev {p1.max_deviation:.2e}"),
            Check(10, "Pauli group fails t=2", not p2.passed, f"dev {p2.max_deviation:.3f} vs 5*err {5 * p2.mc_error:.3f}"),
            Check(10, "Clifford group passes t=2", c2.passed, f"dev {c2.max_deviation:.4f} vs 5*err {5 * c2.mc_error:.4f}"),
            Check(10, "brick-wall purity -> 8/17 at depth 16", abs(pur.mean() - target) <= 3 * se,
                  f"{pur.mean():.4f} +- {se:.4f} vs {target:.4f}")]


def criterion_11() -> list[Check]:
    res = bm.rb_experiment(1, bm.depolarizing(2, 0.99), np.arange(1, 101), 200, 1000, _seed(11))
    tw = bm.twirl_channel(designs.clifford_group(1), bm.amplitude_damping(0.1))
    r = tw.ptm()
    off = float(np.max(np.abs(r - np.diag(np.diag(r)))))
    iso = float(np.ptp(np.diag(r)[1:]))
    return [Check(11, "RB fitted p = 0.99 +- 0.002", abs(res.fit.p - 0.99) <= 0.002, f"p = {res.fit.p:.5f}"),
            Check(11, "avg_gate_fidelity(0.99, 2) = 0.995", bm.avg_gate_fidelity(0.99, 2) == 0.995,
                  f"{bm.avg_gate_fidelity(0.99, 2)!r}"),
            Check(11, "Clifford-twirled amplitude damping is depolarizing", off < 1e-9 and iso < 1e-9,
                  f"max off-diagonal {off:.1e}, anisotropy {iso:.1e}")]


def criterion_12() -> list[Check]:
    clean = bm.xeb_experiment(4, [16], None, 100, 500, _seed(12).child(0))[0]
    dead = bm.xeb_experiment(4, [16], bm.depolarizing(16, 0.0), 100, 500, _seed(12).child(1))[0]
    ks = bm.porter_thomas_ks(clean.scaled_probs)
    return [Check(12, "noiseless F_XEB = 1 +- 3 SE", abs(clean.f_xeb - 1) <= 3 * clean.stderr,
                  f"F_XEB = {clean.f_xeb:.4f} +- {clean.stderr:.4f} "
                  f"(ideal-normalized {clean.f_xeb_normalized:.4f} +- {clean.stderr_normalized:.4f})"),
            Check(12, "depolarized F_XEB = 0 +- 3 SE", abs(dead.f_xeb) <= 3 * dead.stderr,
                  f"F_XEB = {dead.f_xeb:.4f} +- {dead.stderr:.4f}"),
            Check(12, "ideal probabilities vs Porter-Thomas KS < 0.05", ks < 0.05, f"KS = {ks:.4f}")]


def criterion_13() -> list[Check]:
    d, n = 16, 10_000
    chi = haar.overlap_samples(d, n, _seed(13).child(0))
    se = chi.std(ddof=1) / np.sqrt(n)
    var = chi.var(ddof=1)
    stated_var = 1 / (d**2 * (d + 1))
    # standard error of the sample variance from the fourth central moment
    var_se = np.sqrt((np.mean((chi - chi.mean()) ** 4) - var**2) / n)
    dims = [4, 8, 16, 32, 64, 128, 256]
    variances = [haar.concentration_experiment(D, tensor_product(PAULI_Z), 4000, _seed(13).child(D)).variance
                 for D in dims]
    slope = np.polyfit(np.log(dims), np.log(variances), 1)[0]
    return [Check(13, "overlap mean 1/16 +- 3 SE", abs(chi.mean() - 1 / d) <= 3 * se,
                  f"{chi.mean():.5f} +- {se:.5f}"),
            Check(13, "overlap variance = 1/(D^2 (D+1)) (3 SE)", abs(var - stated_var) <= 3 * var_se,
                  f"sample {var:.6f} +- {var_se:.6f} vs stated {stated_var:.6f}; "
                  f"Beta(1,D-1) gives {haar.overlap_moments(d)[1]:.6f}"),
            Check(13, "Var<Z_1> log-log slope -1 +- 0.15", abs(slope + 1) <= 0.15, f"slope {slope:.3f}")]


def criterion_14() -> list[Check]:
    rng = _seed(14).generator()
    errs, cross = [], []
    for _ in range(20):
        b, g, dl = rng.uniform(0, 2 * np.pi, 3)
        num = geometry.numerical_metric(b, g, dl) / 2
        m = geometry.su2_metric(g)
        errs.append(np.max(np.abs(np.diag(num) - [m.g_bb, m.g_gg, m.g_dd])))
        cross.append(np.max(np.abs(num - np.diag(np.diag(num)))))
    path = geometry.UnitaryPath.from_hamiltonian(PAULI_Z, 1.0, 1000)
    length = geometry.path_length(path)
    v = haar.sample_haar_unitary(2, _seed(14).child(1))
    bi = max(abs(geometry.path_length(path.left(v)) - length), abs(geometry.path_length(path.right(v)) - length))
    return [Check(14, "SU(2) metric matches within 1e-6, no cross terms", max(errs) < 1e-6 and max(cross) < 1e-6,
                  f"max err {max(errs):.1e}, max cross {max(cross):.1e}"),
            Check(14, "length of exp(-iZt) = sqrt(2) +- 1e-3", abs(length - np.sqrt(2)) < 1e-3,
                  f"L = {length:.8f}"),
            Check(14, "bi-invariance of length to 1e-9", bi < 1e-9, f"max change {bi:.1e}")]


CRITERIA: dict[int, Callable[[], list[Check]]] = {
    k: globals()[f"criterion_{k}"] for k in range(1, 15)
}


def run_all(only=None) -> list[Check]:
    out = []
    for k, fn in CRITERIA.items():
        if only is None or k in only:
            out.extend(fn())
    return out
