//! Verification campaign: one named check per claimed property of the
//! measures and the divergence family.
//!
//! Each check runs seeded randomized trials, counts violations against its
//! tolerance, and reports the worst violation together with replayable
//! counterexamples (states serialized in the dense JSON descriptor form).
//! Checks are deterministic for a fixed configuration; reports serialize as
//! JSON lines with stable field order. Conjecture-class telemetry (ordering
//! of the two measures beyond the proven family) is reported without ever
//! setting the failure flag.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::entropy::{
    h_alpha_beta, unified_relative_entropy, AlphaZParams, EntropyParams, TsallisParam,
};
use crate::error::{Error, Result};
use crate::matrix::{
    direct_sum, partial_trace, tensor, trace_product_power, ComplexMatrix, DensityMatrix, Keep,
    Tolerances,
};
use crate::monotones::{
    lemma3_maximize, me, me_qubit_closed_form, mh, mh_qubit_closed_form, m_alpha_z, m_tsallis,
    werner_mh_closed_form, Lemma3Problem, MonotoneParams,
};
use crate::optim::OptimizerConfig;
use crate::states::{
    apply_channel, apply_kraus_list, bloch_to_density, density_to_bloch, is_real_state,
    kraus_selective_outcomes, random_complex_kraus, random_density, random_real_density,
    random_real_kraus, remark1_state, werner, BlochVector, StateDescriptor, WernerParam,
};

/// Registry of check ids, in report order.
pub const CHECK_IDS: [&str; 30] = [
    "lemma1_i",
    "lemma1_ii",
    "lemma1_iii",
    "lemma1_iv",
    "lemma1_v",
    "lemma1_vi",
    "lemma2",
    "lemma3",
    "lemma4",
    "m1",
    "m2",
    "m3",
    "m4",
    "m5",
    "thm2",
    "thm3",
    "thm4",
    "thm5",
    "thm6",
    "thm7",
    "cor1",
    "thm9_1",
    "thm9_2",
    "thm9_3",
    "thm9_4",
    "thm9_5",
    "remark1",
    "remark3",
    "eq22_crosscheck",
    "eq26_crosscheck",
];

/// What each check verifies, for report consumers.
pub fn check_description(id: &str) -> &'static str {
    match id {
        "lemma1_i" => "divergence nonnegativity and faithfulness",
        "lemma1_ii" => "divergence data processing under arbitrary channels",
        "lemma1_iii" => "divergence joint convexity",
        "lemma1_iv" => "divergence monotonicity under partial trace",
        "lemma1_v" => "divergence monotone increasing in alpha",
        "lemma1_vi" => "divergence monotone decreasing in beta",
        "lemma2" => "real channels commute with conjugation",
        "lemma3" => "scalar maximizer closed form beats grid search",
        "lemma4" => "blockwise minimizer identity for weighted direct sums",
        "m1" => "measures vanish exactly on real states",
        "m2" => "measures nonincreasing under real channels",
        "m3" => "strong monotonicity under selective real measurements",
        "m4" => "measure convexity under mixing",
        "m5" => "direct-sum additivity at beta = 1",
        "thm2" => "alpha reflection identity for the conjugate measure",
        "thm3" => "conjugate-measure superadditivity under direct sum",
        "thm4" => "conjugate measure nonincreasing under partial trace",
        "thm5" => "conjugate-measure tensor subadditivity",
        "thm6" => "conjugate-measure parameter monotonicity",
        "thm7" => "ordering chain of the comparison measures",
        "cor1" => "conjugate-measure additivity iff beta = 1",
        "thm9_1" => "minimization-measure superadditivity under direct sum",
        "thm9_2" => "minimization-measure additivity at beta = 1",
        "thm9_3" => "minimization measure nonincreasing under partial trace",
        "thm9_4" => "minimization-measure tensor subadditivity",
        "thm9_5" => "minimization measure decreasing in beta",
        "remark1" => "bipartite counterexample to cross-cut subadditivity",
        "remark3" => "conjugate measure dominates minimization measure (family assertion + telemetry)",
        "eq22_crosscheck" => "printed qubit kernel vs spectral route",
        "eq26_crosscheck" => "printed Werner closed form vs spectral route",
        _ => "unknown",
    }
}

/// Configuration for a verification run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub tol_overrides: BTreeMap<String, f64>,
    pub dims: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub z_grid: Vec<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            trials: 200,
            tol_overrides: BTreeMap::new(),
            dims: vec![2, 4],
            alpha_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            beta_grid: vec![0.2, 0.4, 0.6, 0.8, 1.0],
            z_grid: vec![0.55, 0.7, 0.9],
        }
    }
}

impl SuiteConfig {
    fn tolerance(&self, check_id: &str, default: f64) -> f64 {
        self.tol_overrides.get(check_id).copied().unwrap_or(default)
    }
}

/// A counterexample: replayable input plus the observed values.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub input: Value,
    pub observed: Value,
}

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub trials: usize,
    pub failures: usize,
    pub worst_violation: f64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub telemetry: Option<Value>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Accumulates trial outcomes for one check.
struct Recorder {
    trials: usize,
    failures: usize,
    worst: f64,
    counterexamples: Vec<Counterexample>,
}

const MAX_COUNTEREXAMPLES: usize = 10;

impl Recorder {
    fn new() -> Self {
        Recorder {
            trials: 0,
            failures: 0,
            worst: 0.0,
            counterexamples: Vec::new(),
        }
    }

    /// Record one trial. `violation` is the amount by which the checked
    /// inequality was exceeded beyond its tolerance (<= 0 means pass).
    fn trial(&mut self, violation: f64, input: impl FnOnce() -> Value, observed: impl FnOnce() -> Value) {
        self.trials += 1;
        if violation > 0.0 {
            self.failures += 1;
            self.worst = self.worst.max(violation);
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(Counterexample {
                    input: input(),
                    observed: observed(),
                });
            }
        }
    }

    fn finish(self, check_id: &str, start: Instant, telemetry: Option<Value>) -> CheckReport {
        CheckReport {
            check_id: check_id.to_string(),
            trials: self.trials,
            failures: self.failures,
            worst_violation: self.worst,
            counterexamples: self.counterexamples,
            elapsed_ms: start.elapsed().as_millis(),
            telemetry,
        }
    }
}

fn fnv1a(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x1_0000_01b3);
    }
    hash
}

fn check_seed(cfg: &SuiteConfig, check_id: &str, stream: u64) -> u64 {
    cfg.seed ^ fnv1a(check_id) ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn state_json(rho: &DensityMatrix) -> Value {
    serde_json::to_value(StateDescriptor::dense_from(rho)).expect("descriptor serializes")
}

fn measure_grid(cfg: &SuiteConfig) -> Vec<(f64, f64)> {
    let mut grid = Vec::new();
    for &a in &cfg.alpha_grid {
        for &b in &cfg.beta_grid {
            if a > 0.0 && a < 1.0 && b > 0.0 && b <= 1.0 {
                grid.push((a, b));
            }
        }
    }
    grid
}

/// Cycle deterministically through the parameter grid.
fn grid_pick(grid: &[(f64, f64)], index: usize) -> (f64, f64) {
    grid[index % grid.len()]
}

/// Run a single named check.
pub fn run_check(check_id: &str, cfg: &SuiteConfig) -> Result<CheckReport> {
    let tol = Tolerances::default();
    let start = Instant::now();
    let report = match check_id {
        "lemma1_i" => check_lemma1_i(cfg, &tol, start),
        "lemma1_ii" => check_lemma1_ii(cfg, &tol, start),
        "lemma1_iii" => check_lemma1_iii(cfg, &tol, start),
        "lemma1_iv" => check_lemma1_iv(cfg, &tol, start),
        "lemma1_v" => check_lemma1_param_monotone(cfg, &tol, start, true),
        "lemma1_vi" => check_lemma1_param_monotone(cfg, &tol, start, false),
        "lemma2" => check_lemma2(cfg, &tol, start),
        "lemma3" => check_lemma3(cfg, start),
        "lemma4" => check_lemma4(cfg, &tol, start),
        "m1" => check_m1(cfg, &tol, start),
        "m2" => check_m2(cfg, &tol, start),
        "m3" => check_m3(cfg, &tol, start),
        "m4" => check_m4(cfg, &tol, start),
        "m5" => check_additivity(cfg, &tol, start, "m5", &[1.0]),
        "thm2" => check_thm2(cfg, &tol, start),
        "thm3" => check_superadditivity(cfg, &tol, start, "thm3", Measure::Mh),
        "thm4" => check_partial_trace(cfg, &tol, start, "thm4", Measure::Mh),
        "thm5" => check_tensor_subadditivity(cfg, &tol, start, "thm5", Measure::Mh),
        "thm6" => check_thm6(cfg, &tol, start),
        "thm7" => check_thm7(cfg, &tol, start),
        "cor1" => check_cor1(cfg, &tol, start),
        "thm9_1" => check_superadditivity(cfg, &tol, start, "thm9_1", Measure::Me),
        "thm9_2" => check_additivity_me_beta1(cfg, &tol, start),
        "thm9_3" => check_partial_trace(cfg, &tol, start, "thm9_3", Measure::Me),
        "thm9_4" => check_tensor_subadditivity(cfg, &tol, start, "thm9_4", Measure::Me),
        "thm9_5" => check_thm9_5(cfg, &tol, start),
        "remark1" => check_remark1(cfg, &tol, start),
        "remark3" => check_remark3(cfg, &tol, start),
        "eq22_crosscheck" => check_eq22(cfg, &tol, start),
        "eq26_crosscheck" => check_eq26(cfg, &tol, start),
        other => return Err(Error::UnknownCheck(other.to_string())),
    };
    Ok(report)
}

/// Run every registered check once, in registry order.
pub fn run_all(cfg: &SuiteConfig) -> Vec<CheckReport> {
    CHECK_IDS
        .iter()
        .map(|id| run_check(id, cfg).expect("registry ids are valid"))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Measure {
    Mh,
    Me,
}

impl Measure {
    fn name(&self) -> &'static str {
        match self {
            Measure::Mh => "mh",
            Measure::Me => "me",
        }
    }
}

fn eval_measure(
    which: Measure,
    rho: &DensityMatrix,
    p: &MonotoneParams,
    tol: &Tolerances,
) -> f64 {
    match which {
        Measure::Mh => mh(rho, p, tol).expect("valid measure inputs"),
        Measure::Me => me(rho, p, &OptimizerConfig::fast(), tol)
            .expect("valid measure inputs")
            .value,
    }
}

fn check_lemma1_i(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("lemma1_i", 1e-10);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let rho = random_density(d, check_seed(cfg, "lemma1_i", trial as u64));
        let sigma = random_density(d, check_seed(cfg, "lemma1_i", (trial + cfg.trials) as u64));
        let (a, b) = grid_pick(&grid, trial);
        let p = EntropyParams::new(a, b).expect("grid in range");

        let self_d = unified_relative_entropy(&rho, &rho, &p, tol).expect("valid");
        let cross_d = unified_relative_entropy(&rho, &sigma, &p, tol).expect("valid");
        // Nonnegativity, zero at equal arguments, and faithfulness: a tiny
        // divergence must mean the states are close.
        let mut violation = (self_d.abs() - check_tol).max(-cross_d - check_tol);
        let gap = rho.matrix().max_abs_diff(sigma.matrix());
        if cross_d <= check_tol && gap > 1e-6 {
            violation = violation.max(gap);
        }
        rec.trial(
            violation,
            || json!({"rho": state_json(&rho), "sigma": state_json(&sigma), "alpha": a, "beta": b}),
            || json!({"d_self": self_d, "d_cross": cross_d, "state_gap": gap}),
        );
    }
    rec.finish("lemma1_i", start, None)
}

fn check_lemma1_ii(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("lemma1_ii", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, "lemma1_ii", trial as u64);
        let rho = random_density(d, base);
        let sigma = random_density(d, base.wrapping_add(1));
        // Arbitrary (complex) channels, not just real ones.
        let kraus = random_complex_kraus(d, 2, base.wrapping_add(2));
        let (a, b) = grid_pick(&grid, trial);
        let p = EntropyParams::new(a, b).expect("grid in range");
        let before = unified_relative_entropy(&rho, &sigma, &p, tol).expect("valid");
        let after = unified_relative_entropy(
            &apply_kraus_list(&rho, &kraus),
            &apply_kraus_list(&sigma, &kraus),
            &p,
            tol,
        )
        .expect("valid");
        rec.trial(
            after - before - check_tol,
            || json!({"rho": state_json(&rho), "sigma": state_json(&sigma), "alpha": a, "beta": b}),
            || json!({"before": before, "after": after}),
        );
    }
    rec.finish("lemma1_ii", start, None)
}

fn check_lemma1_iii(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("lemma1_iii", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, "lemma1_iii", trial as u64);
        let weights = mixture_weights(base, 3);
        let rhos: Vec<DensityMatrix> = (0..3)
            .map(|i| random_density(d, base.wrapping_add(10 + i)))
            .collect();
        let sigmas: Vec<DensityMatrix> = (0..3)
            .map(|i| random_density(d, base.wrapping_add(20 + i)))
            .collect();
        let (a, b) = grid_pick(&grid, trial);
        let p = EntropyParams::new(a, b).expect("grid in range");

        let mix_rho = mix(&weights, &rhos);
        let mix_sigma = mix(&weights, &sigmas);
        let lhs = unified_relative_entropy(&mix_rho, &mix_sigma, &p, tol).expect("valid");
        let rhs: f64 = weights
            .iter()
            .zip(rhos.iter().zip(sigmas.iter()))
            .map(|(w, (r, s))| w * unified_relative_entropy(r, s, &p, tol).expect("valid"))
            .sum();
        rec.trial(
            lhs - rhs - check_tol,
            || json!({"weights": weights, "alpha": a, "beta": b}),
            || json!({"mixture": lhs, "average": rhs}),
        );
    }
    rec.finish("lemma1_iii", start, None)
}

fn check_lemma1_iv(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("lemma1_iv", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let base = check_seed(cfg, "lemma1_iv", trial as u64);
        let rho = random_density(4, base);
        let sigma = random_density(4, base.wrapping_add(1));
        let (a, b) = grid_pick(&grid, trial);
        let p = EntropyParams::new(a, b).expect("grid in range");
        let full = unified_relative_entropy(&rho, &sigma, &p, tol).expect("valid");
        let r1 = DensityMatrix::new_unchecked(
            partial_trace(rho.matrix(), (2, 2), Keep::First).expect("dims"),
        );
        let s1 = DensityMatrix::new_unchecked(
            partial_trace(sigma.matrix(), (2, 2), Keep::First).expect("dims"),
        );
        let reduced = unified_relative_entropy(&r1, &s1, &p, tol).expect("valid");
        rec.trial(
            reduced - full - check_tol,
            || json!({"rho": state_json(&rho), "sigma": state_json(&sigma), "alpha": a, "beta": b}),
            || json!({"full": full, "reduced": reduced}),
        );
    }
    rec.finish("lemma1_iv", start, None)
}

fn check_lemma1_param_monotone(
    cfg: &SuiteConfig,
    tol: &Tolerances,
    start: Instant,
    in_alpha: bool,
) -> CheckReport {
    let id = if in_alpha { "lemma1_v" } else { "lemma1_vi" };
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance(id, 1e-9);
    let alphas: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let betas: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let trials = cfg.trials.min(50).max(1);
    for trial in 0..trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, id, trial as u64);
        let rho = random_density(d, base);
        let sigma = random_density(d, base.wrapping_add(1));
        let mut worst: f64 = f64::NEG_INFINITY;
        let mut worst_at = (0.0, 0.0, 0.0);
        if in_alpha {
            for &b in &betas {
                let mut prev: Option<f64> = None;
                for &a in &alphas {
                    let v = unified_relative_entropy(
                        &rho,
                        &sigma,
                        &EntropyParams::new(a, b).expect("grid"),
                        tol,
                    )
                    .expect("valid");
                    if let Some(pv) = prev {
                        let gap = pv - v; // increasing in alpha means pv <= v
                        if gap > worst {
                            worst = gap;
                            worst_at = (a, b, v);
                        }
                    }
                    prev = Some(v);
                }
            }
        } else {
            for &a in &alphas {
                let mut prev: Option<f64> = None;
                for &b in &betas {
                    let v = unified_relative_entropy(
                        &rho,
                        &sigma,
                        &EntropyParams::new(a, b).expect("grid"),
                        tol,
                    )
                    .expect("valid");
                    if let Some(pv) = prev {
                        let gap = v - pv; // decreasing in beta means v <= pv
                        if gap > worst {
                            worst = gap;
                            worst_at = (a, b, v);
                        }
                    }
                    prev = Some(v);
                }
            }
        }
        rec.trial(
            worst - check_tol,
            || json!({"rho": state_json(&rho), "sigma": state_json(&sigma)}),
            || json!({"worst_gap": worst, "at": worst_at}),
        );
    }
    rec.finish(id, start, None)
}

fn check_lemma2(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("lemma2", 1e-12);
    let trials = cfg.trials.max(100);
    for trial in 0..trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, "lemma2", trial as u64);
        let rho = random_density(d, base);
        let ch = random_real_kraus(d, 1 + (trial % 3), base.wrapping_add(1));
        let lhs = apply_channel(&rho.conjugate(), &ch).expect("dims");
        let rhs = apply_channel(&rho, &ch).expect("dims").conjugate();
        let gap = lhs.matrix().max_abs_diff(rhs.matrix());
        rec.trial(
            gap - check_tol,
            || json!({"rho": state_json(&rho), "n_kraus": ch.len()}),
            || json!({"max_abs_gap": gap}),
        );
    }
    let _ = tol;
    rec.finish("lemma2", start, None)
}

fn check_lemma3(cfg: &SuiteConfig, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("lemma3", 1e-6);
    let trials = cfg.trials.min(50).max(1);

    // Reference instance with frozen values.
    let reference = Lemma3Problem {
        a: 1.0,
        b: 0.6,
        c: 0.0,
        alpha: 0.5,
    };
    let sol = lemma3_maximize(&reference).expect("valid instance");
    let ref_violation = (sol.x0 - 1.0 / 17.0)
        .abs()
        .max((sol.f_max - 1.6492422).abs() / 10.0 - 1e-7)
        .max((sol.theta0 - std::f64::consts::FRAC_PI_2).abs());
    rec.trial(
        ref_violation - 1e-6,
        || json!({"a": 1.0, "b": 0.6, "c": 0.0, "alpha": 0.5}),
        || json!({"x0": sol.x0, "theta0": sol.theta0, "f_max": sol.f_max}),
    );

    for trial in 0..trials {
        let base = check_seed(cfg, "lemma3", trial as u64);
        let mut sub = splitmix(base);
        let g = 0.05 + 0.85 * unit(&mut sub);
        let phi = std::f64::consts::TAU * unit(&mut sub);
        let prob = Lemma3Problem {
            a: g + 0.05 + unit(&mut sub),
            b: g * phi.sin(),
            c: g * phi.cos(),
            alpha: 0.05 + 0.9 * unit(&mut sub),
        };
        let sol = lemma3_maximize(&prob).expect("A > g by construction");
        let n = 400;
        let mut grid_best = f64::NEG_INFINITY;
        for i in 0..n {
            let x = 0.5 * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let th = std::f64::consts::TAU * j as f64 / (n - 1) as f64;
                let v = prob.value(x, th);
                if v > grid_best {
                    grid_best = v;
                }
            }
        }
        rec.trial(
            grid_best - sol.f_max - check_tol,
            || json!({"a": prob.a, "b": prob.b, "c": prob.c, "alpha": prob.alpha}),
            || json!({"closed_form": sol.f_max, "grid_best": grid_best}),
        );
    }
    rec.finish("lemma3", start, None)
}

fn check_lemma4(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("lemma4", 1e-6);
    let grid = measure_grid(cfg);
    let trials = cfg.trials.min(60).max(1);
    for trial in 0..trials {
        let base = check_seed(cfg, "lemma4", trial as u64);
        let mut sub = splitmix(base);
        let rho = random_density(2, base.wrapping_add(1));
        let tau = random_density(2, base.wrapping_add(2));
        let p_weight = unit(&mut sub);
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");

        let block_rho = me_qubit_closed_form(&density_to_bloch(&rho).expect("qubit"), &p, tol)
            .expect("valid");
        let block_tau = me_qubit_closed_form(&density_to_bloch(&tau).expect("qubit"), &p, tol)
            .expect("valid");
        let blockwise_trace =
            p_weight * block_rho.achieved_trace + (1.0 - p_weight) * block_tau.achieved_trace;
        let blockwise_value = h_alpha_beta(blockwise_trace, a, b).expect("valid");

        let joined = direct_sum(p_weight, &rho, &tau).expect("weight in range");
        let joint = me(&joined, &p, &OptimizerConfig::fast(), tol).expect("valid");

        let gap = (joint.value - blockwise_value).abs();
        rec.trial(
            gap - check_tol,
            || {
                json!({
                    "rho": state_json(&rho),
                    "tau": state_json(&tau),
                    "p": p_weight,
                    "alpha": a,
                    "beta": b
                })
            },
            || {
                json!({
                    "optimizer_value": joint.value,
                    "blockwise_value": blockwise_value,
                    "optimizer_trace": joint.achieved_trace,
                    "blockwise_trace": blockwise_trace
                })
            },
        );
    }
    rec.finish("lemma4", start, None)
}

fn check_m1(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("m1", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, "m1", trial as u64);
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");

        // Real states must measure zero; generic complex states must not.
        let real = random_real_density(d, base);
        let complex = random_density(d, base.wrapping_add(1));
        let mut violation: f64 = -1.0;
        let mut observed = serde_json::Map::new();
        for which in [Measure::Mh, Measure::Me] {
            let vr = eval_measure(which, &real, &p, tol);
            let vc = eval_measure(which, &complex, &p, tol);
            violation = violation.max(vr.abs() - check_tol).max(-vc - 1e-10);
            if vc <= check_tol && !is_real_state(&complex, 1e-7) {
                violation = violation.max(1.0);
            }
            observed.insert(format!("{}_real", which.name()), json!(vr));
            observed.insert(format!("{}_complex", which.name()), json!(vc));
        }
        rec.trial(
            violation,
            || json!({"real": state_json(&real), "complex": state_json(&complex), "alpha": a, "beta": b}),
            || Value::Object(observed),
        );
    }
    rec.finish("m1", start, None)
}

fn check_m2(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("m2", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, "m2", trial as u64);
        let rho = random_density(d, base);
        let ch = random_real_kraus(d, 1 + (trial % 3), base.wrapping_add(1));
        let mapped = apply_channel(&rho, &ch).expect("dims");
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let mut violation: f64 = -1.0;
        let mut observed = serde_json::Map::new();
        for which in [Measure::Mh, Measure::Me] {
            let before = eval_measure(which, &rho, &p, tol);
            let after = eval_measure(which, &mapped, &p, tol);
            violation = violation.max(after - before - check_tol);
            observed.insert(format!("{}_before", which.name()), json!(before));
            observed.insert(format!("{}_after", which.name()), json!(after));
        }
        rec.trial(
            violation,
            || json!({"rho": state_json(&rho), "n_kraus": ch.len(), "alpha": a, "beta": b}),
            || Value::Object(observed),
        );
    }
    rec.finish("m2", start, None)
}

fn check_m3(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("m3", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, "m3", trial as u64);
        let rho = random_density(d, base);
        let ch = random_real_kraus(d, 2 + (trial % 2), base.wrapping_add(1));
        let outcomes = kraus_selective_outcomes(&rho, &ch).expect("dims");
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let mut violation: f64 = -1.0;
        let mut observed = serde_json::Map::new();
        for which in [Measure::Mh, Measure::Me] {
            let total = eval_measure(which, &rho, &p, tol);
            let selective: f64 = outcomes
                .iter()
                .map(|(pj, rj)| pj * eval_measure(which, rj, &p, tol))
                .sum();
            violation = violation.max(selective - total - check_tol);
            observed.insert(format!("{}_total", which.name()), json!(total));
            observed.insert(format!("{}_selective", which.name()), json!(selective));
        }
        rec.trial(
            violation,
            || json!({"rho": state_json(&rho), "n_kraus": ch.len(), "alpha": a, "beta": b}),
            || Value::Object(observed),
        );
    }
    rec.finish("m3", start, None)
}

fn check_m4(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("m4", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let base = check_seed(cfg, "m4", trial as u64);
        let weights = mixture_weights(base, 3);
        let rhos: Vec<DensityMatrix> = (0..3)
            .map(|i| random_density(d, base.wrapping_add(10 + i)))
            .collect();
        let mixture = mix(&weights, &rhos);
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let mut violation: f64 = -1.0;
        let mut observed = serde_json::Map::new();
        for which in [Measure::Mh, Measure::Me] {
            let lhs = eval_measure(which, &mixture, &p, tol);
            let rhs: f64 = weights
                .iter()
                .zip(rhos.iter())
                .map(|(w, r)| w * eval_measure(which, r, &p, tol))
                .sum();
            violation = violation.max(lhs - rhs - check_tol);
            observed.insert(format!("{}_mixture", which.name()), json!(lhs));
            observed.insert(format!("{}_average", which.name()), json!(rhs));
        }
        rec.trial(
            violation,
            || json!({"weights": weights, "alpha": a, "beta": b}),
            || Value::Object(observed),
        );
    }
    rec.finish("m4", start, None)
}

/// Additivity of both measures under weighted direct sums at the listed
/// beta values.
fn check_additivity(
    cfg: &SuiteConfig,
    tol: &Tolerances,
    start: Instant,
    id: &str,
    betas: &[f64],
) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance(id, 1e-9);
    for trial in 0..cfg.trials {
        let base = check_seed(cfg, id, trial as u64);
        let mut sub = splitmix(base);
        let rho = random_density(2, base.wrapping_add(1));
        let tau = random_density(2, base.wrapping_add(2));
        let w = 0.05 + 0.9 * unit(&mut sub);
        let a = cfg.alpha_grid[trial % cfg.alpha_grid.len()].clamp(0.05, 0.95);
        let b = betas[trial % betas.len()];
        let p = MonotoneParams::new(a, b).expect("grid");
        let joined = direct_sum(w, &rho, &tau).expect("weight");
        let mut violation: f64 = -1.0;
        let mut observed = serde_json::Map::new();
        for which in [Measure::Mh, Measure::Me] {
            let joint = eval_measure(which, &joined, &p, tol);
            let split = w * eval_measure(which, &rho, &p, tol)
                + (1.0 - w) * eval_measure(which, &tau, &p, tol);
            violation = violation.max((joint - split).abs() - check_tol);
            observed.insert(format!("{}_joint", which.name()), json!(joint));
            observed.insert(format!("{}_split", which.name()), json!(split));
        }
        rec.trial(
            violation,
            || json!({"rho": state_json(&rho), "tau": state_json(&tau), "p": w, "alpha": a, "beta": b}),
            || Value::Object(observed),
        );
    }
    rec.finish(id, start, None)
}

fn check_thm2(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("thm2", 1e-10);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let rho = random_density(d, check_seed(cfg, "thm2", trial as u64));
        let (a, b) = grid_pick(&grid, trial);
        let a = a.clamp(0.05, 0.95);
        let lhs = mh(&rho, &MonotoneParams::new(1.0 - a, b).expect("range"), tol)
            .expect("valid")
            / (1.0 - a);
        let rhs = mh(&rho, &MonotoneParams::new(a, b).expect("range"), tol).expect("valid") / a;
        rec.trial(
            (lhs - rhs).abs() - check_tol,
            || json!({"rho": state_json(&rho), "alpha": a, "beta": b}),
            || json!({"reflected": lhs, "direct": rhs}),
        );
    }
    rec.finish("thm2", start, None)
}

/// Superadditivity under weighted direct sums, as claimed:
/// measure(p rho1 (+) (1-p) rho2) >= p measure(rho1) + (1-p) measure(rho2).
fn check_superadditivity(
    cfg: &SuiteConfig,
    tol: &Tolerances,
    start: Instant,
    id: &str,
    which: Measure,
) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance(id, 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let base = check_seed(cfg, id, trial as u64);
        let mut sub = splitmix(base);
        let rho = random_density(2, base.wrapping_add(1));
        let tau = random_density(2, base.wrapping_add(2));
        let w = 0.05 + 0.9 * unit(&mut sub);
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let joined = direct_sum(w, &rho, &tau).expect("weight");
        let joint = eval_measure(which, &joined, &p, tol);
        let split =
            w * eval_measure(which, &rho, &p, tol) + (1.0 - w) * eval_measure(which, &tau, &p, tol);
        rec.trial(
            split - joint - check_tol,
            || json!({"rho": state_json(&rho), "tau": state_json(&tau), "p": w, "alpha": a, "beta": b}),
            || json!({"joint": joint, "weighted_split": split}),
        );
    }
    rec.finish(id, start, None)
}

fn check_partial_trace(
    cfg: &SuiteConfig,
    tol: &Tolerances,
    start: Instant,
    id: &str,
    which: Measure,
) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance(id, 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let rho = random_density(4, check_seed(cfg, id, trial as u64));
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let full = eval_measure(which, &rho, &p, tol);
        let marginal = DensityMatrix::new_unchecked(
            partial_trace(rho.matrix(), (2, 2), Keep::First).expect("dims"),
        );
        let reduced = eval_measure(which, &marginal, &p, tol);
        rec.trial(
            reduced - full - check_tol,
            || json!({"rho": state_json(&rho), "alpha": a, "beta": b}),
            || json!({"full": full, "reduced": reduced}),
        );
    }
    rec.finish(id, start, None)
}

fn check_tensor_subadditivity(
    cfg: &SuiteConfig,
    tol: &Tolerances,
    start: Instant,
    id: &str,
    which: Measure,
) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance(id, 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let base = check_seed(cfg, id, trial as u64);
        let rho = random_density(2, base);
        // Alternate a generic factor with a real one to exercise the
        // equality case.
        let real_factor = trial % 2 == 0;
        let tau = if real_factor {
            random_real_density(2, base.wrapping_add(1))
        } else {
            random_density(2, base.wrapping_add(1))
        };
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let product = DensityMatrix::new_unchecked(tensor(rho.matrix(), tau.matrix()));
        let joint = eval_measure(which, &product, &p, tol);
        let v_rho = eval_measure(which, &rho, &p, tol);
        let v_tau = eval_measure(which, &tau, &p, tol);
        let mut violation = joint - (v_rho + v_tau) - check_tol;
        if real_factor {
            violation = violation.max((joint - v_rho).abs() - check_tol);
        }
        rec.trial(
            violation,
            || json!({"rho": state_json(&rho), "tau": state_json(&tau), "alpha": a, "beta": b, "real_factor": real_factor}),
            || json!({"joint": joint, "sum": v_rho + v_tau}),
        );
    }
    rec.finish(id, start, None)
}

fn check_thm6(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("thm6", 1e-9);
    let alphas: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let betas: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let trials = cfg.trials.min(50).max(1);
    for trial in 0..trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let rho = random_density(d, check_seed(cfg, "thm6", trial as u64));
        let mut worst: f64 = f64::NEG_INFINITY;
        // Nondecreasing in alpha for every fixed beta.
        for &b in &betas {
            let mut prev: Option<f64> = None;
            for &a in &alphas {
                let v = mh(&rho, &MonotoneParams::new(a, b).expect("grid"), tol).expect("valid");
                if let Some(pv) = prev {
                    worst = worst.max(pv - v);
                }
                prev = Some(v);
            }
        }
        // Nonincreasing in beta for every fixed alpha.
        for &a in &alphas {
            let mut prev: Option<f64> = None;
            for &b in &betas {
                let v = mh(&rho, &MonotoneParams::new(a, b).expect("grid"), tol).expect("valid");
                if let Some(pv) = prev {
                    worst = worst.max(v - pv);
                }
                prev = Some(v);
            }
        }
        rec.trial(
            worst - check_tol,
            || json!({"rho": state_json(&rho)}),
            || json!({"worst_gap": worst}),
        );
    }
    rec.finish("thm6", start, None)
}

fn check_thm7(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("thm7", 1e-9);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let rho = random_density(d, check_seed(cfg, "thm7", trial as u64));
        let (a_raw, b) = grid_pick(&grid, trial);
        let a = a_raw.clamp(0.1, 0.9);
        let z = cfg.z_grid[trial % cfg.z_grid.len()].max(a.max(1.0 - a)).min(0.99);

        let m_az = m_alpha_z(&rho, &AlphaZParams::new(a, z).expect("range"), tol).expect("valid");
        let m_t = m_tsallis(&rho, &TsallisParam::new(a).expect("range"), tol).expect("valid");
        let m_h = mh(&rho, &MonotoneParams::new(a, b).expect("range"), tol).expect("valid");
        let mut violation = (m_az - m_t - check_tol).max(m_t - m_h - check_tol);
        let mut first_link = None;
        // The z = alpha lower bound only exists when alpha >= 1 - alpha.
        if a >= 0.5 {
            let m_r = m_alpha_z(&rho, &AlphaZParams::new(a, a).expect("range"), tol).expect("valid");
            violation = violation.max(m_r - m_az - check_tol);
            first_link = Some(m_r);
        }
        rec.trial(
            violation,
            || json!({"rho": state_json(&rho), "alpha": a, "beta": b, "z": z}),
            || json!({"m_alpha_r": first_link, "m_alpha_z": m_az, "m_tsallis": m_t, "m_h": m_h}),
        );
    }
    rec.finish("thm7", start, None)
}

fn check_cor1(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("cor1", 1e-9);
    for trial in 0..cfg.trials {
        let base = check_seed(cfg, "cor1", trial as u64);
        let mut sub = splitmix(base);
        let rho = random_density(2, base.wrapping_add(1));
        let tau = random_density(2, base.wrapping_add(2));
        let w = 0.05 + 0.9 * unit(&mut sub);
        let a = cfg.alpha_grid[trial % cfg.alpha_grid.len()].clamp(0.05, 0.95);
        let joined = direct_sum(w, &rho, &tau).expect("weight");

        // Additivity of the conjugate measure at beta = 1.
        let p1 = MonotoneParams::new(a, 1.0).expect("range");
        let joint = mh(&joined, &p1, tol).expect("valid");
        let split = w * mh(&rho, &p1, tol).expect("valid")
            + (1.0 - w) * mh(&tau, &p1, tol).expect("valid");
        let mut violation = (joint - split).abs() - check_tol;

        // For beta < 1 equality holds exactly when the conjugate traces
        // coincide; with well-separated traces the gap must be visible.
        let t_rho = trace_product_power(&rho, &rho.conjugate(), a, tol).expect("valid");
        let t_tau = trace_product_power(&tau, &tau.conjugate(), a, tol).expect("valid");
        let pb = MonotoneParams::new(a, 0.5).expect("range");
        let joint_b = mh(&joined, &pb, tol).expect("valid");
        let split_b = w * mh(&rho, &pb, tol).expect("valid")
            + (1.0 - w) * mh(&tau, &pb, tol).expect("valid");
        if (t_rho - t_tau).abs() > 0.05 {
            if (joint_b - split_b).abs() <= check_tol {
                violation = violation.max(1.0);
            }
        }
        rec.trial(
            violation,
            || json!({"rho": state_json(&rho), "tau": state_json(&tau), "p": w, "alpha": a}),
            || json!({"beta1_joint": joint, "beta1_split": split, "beta_half_joint": joint_b, "beta_half_split": split_b, "t_rho": t_rho, "t_tau": t_tau}),
        );
    }
    rec.finish("cor1", start, None)
}

/// Direct-sum additivity of the minimization measure at beta = 1, as claimed.
fn check_additivity_me_beta1(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("thm9_2", 1e-9);
    for trial in 0..cfg.trials {
        let base = check_seed(cfg, "thm9_2", trial as u64);
        let mut sub = splitmix(base);
        let rho = random_density(2, base.wrapping_add(1));
        let tau = random_density(2, base.wrapping_add(2));
        let w = 0.05 + 0.9 * unit(&mut sub);
        let a = cfg.alpha_grid[trial % cfg.alpha_grid.len()].clamp(0.05, 0.95);
        let p = MonotoneParams::new(a, 1.0).expect("range");
        let joined = direct_sum(w, &rho, &tau).expect("weight");
        let joint = eval_measure(Measure::Me, &joined, &p, tol);
        let split = w * eval_measure(Measure::Me, &rho, &p, tol)
            + (1.0 - w) * eval_measure(Measure::Me, &tau, &p, tol);
        rec.trial(
            (joint - split).abs() - check_tol,
            || json!({"rho": state_json(&rho), "tau": state_json(&tau), "p": w, "alpha": a}),
            || json!({"joint": joint, "split": split}),
        );
    }
    rec.finish("thm9_2", start, None)
}

fn check_thm9_5(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("thm9_5", 1e-9);
    let betas: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let trials = cfg.trials.min(100).max(1);
    for trial in 0..trials {
        let d = cfg.dims[trial % cfg.dims.len()];
        let rho = random_density(d, check_seed(cfg, "thm9_5", trial as u64));
        let a = cfg.alpha_grid[trial % cfg.alpha_grid.len()].clamp(0.05, 0.95);
        let mut worst: f64 = f64::NEG_INFINITY;
        let mut prev: Option<f64> = None;
        for &b in &betas {
            let v = eval_measure(Measure::Me, &rho, &MonotoneParams::new(a, b).expect("grid"), tol);
            if let Some(pv) = prev {
                worst = worst.max(v - pv);
            }
            prev = Some(v);
        }
        rec.trial(
            worst - check_tol,
            || json!({"rho": state_json(&rho), "alpha": a}),
            || json!({"worst_gap": worst}),
        );
    }
    rec.finish("thm9_5", start, None)
}

fn check_remark1(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("remark1", 1e-9);
    let grid = measure_grid(cfg);
    let rho = remark1_state();
    for trial in 0..cfg.trials.min(50).max(1) {
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let joint = mh(&rho, &p, tol).expect("valid");
        let expect = 1.0 / ((1.0 - a) * b);
        let marg_a = DensityMatrix::new_unchecked(
            partial_trace(rho.matrix(), (2, 2), Keep::First).expect("dims"),
        );
        let marg_b = DensityMatrix::new_unchecked(
            partial_trace(rho.matrix(), (2, 2), Keep::Second).expect("dims"),
        );
        let va = mh(&marg_a, &p, tol).expect("valid");
        let vb = mh(&marg_b, &p, tol).expect("valid");
        // Marginals are free, the joint value is the maximal one, and the
        // cross-cut "subadditivity" is violated by this state.
        let violation = va
            .abs()
            .max(vb.abs())
            .max((joint - expect).abs())
            .max(va + vb + check_tol - joint);
        rec.trial(
            violation - check_tol,
            || json!({"state": state_json(&rho), "alpha": a, "beta": b}),
            || json!({"joint": joint, "marginal_a": va, "marginal_b": vb, "closed_form": expect}),
        );
    }
    rec.finish("remark1", start, None)
}

fn check_remark3(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("remark3", 1e-9);
    let grid = measure_grid(cfg);

    // Asserted part: on the (0, r2, 0) family the conjugate measure
    // dominates the minimization measure.
    for (i, r2) in (0..101).map(|i| (i, i as f64 / 100.0)) {
        let v = BlochVector::new(0.0, r2, 0.0);
        let rho = bloch_to_density(&v).expect("in ball");
        let (a, b) = grid_pick(&grid, i);
        let p = MonotoneParams::new(a, b).expect("grid");
        let vh = mh(&rho, &p, tol).expect("valid");
        let ve = me_qubit_closed_form(&v, &p, tol).expect("valid").value;
        rec.trial(
            ve - vh - check_tol,
            || json!({"bloch": [0.0, r2, 0.0], "alpha": a, "beta": b}),
            || json!({"mh": vh, "me": ve}),
        );
    }

    // Telemetry: general qubits and dimension 4, reported but never failed.
    let mut qubit_violations = 0usize;
    let mut d4_violations = 0usize;
    let mut worst_gap: f64 = 0.0;
    let telemetry_trials = cfg.trials.min(500);
    for trial in 0..telemetry_trials {
        let base = check_seed(cfg, "remark3", 1000 + trial as u64);
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let rho = random_density(2, base);
        let vh = mh(&rho, &p, tol).expect("valid");
        let ve = eval_measure(Measure::Me, &rho, &p, tol);
        if ve > vh + 1e-9 {
            qubit_violations += 1;
            worst_gap = worst_gap.max(ve - vh);
        }
        if trial % 5 == 0 {
            let rho4 = random_density(4, base.wrapping_add(1));
            let vh4 = mh(&rho4, &p, tol).expect("valid");
            let ve4 = eval_measure(Measure::Me, &rho4, &p, tol);
            if ve4 > vh4 + 1e-9 {
                d4_violations += 1;
                worst_gap = worst_gap.max(ve4 - vh4);
            }
        }
    }
    let telemetry = json!({
        "conjecture": "mh >= me beyond the proven family",
        "qubit_trials": telemetry_trials,
        "qubit_violations": qubit_violations,
        "d4_trials": telemetry_trials.div_ceil(5),
        "d4_violations": d4_violations,
        "worst_gap": worst_gap,
    });
    rec.finish("remark3", start, Some(telemetry))
}

fn check_eq22(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("eq22_crosscheck", 1e-6);
    let grid = measure_grid(cfg);
    for trial in 0..cfg.trials {
        let base = check_seed(cfg, "eq22_crosscheck", trial as u64);
        let mut sub = splitmix(base);
        let v = loop {
            let c = BlochVector::new(
                2.0 * unit(&mut sub) - 1.0,
                2.0 * unit(&mut sub) - 1.0,
                2.0 * unit(&mut sub) - 1.0,
            );
            if c.norm() <= 1.0 && c.r2 != 0.0 {
                break c;
            }
        };
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let closed = mh_qubit_closed_form(&v, &p, tol).expect("valid");
        let spectral = mh(&bloch_to_density(&v).expect("ball"), &p, tol).expect("valid");
        rec.trial(
            (closed - spectral).abs() - check_tol,
            || json!({"bloch": [v.r1, v.r2, v.r3], "alpha": a, "beta": b}),
            || json!({"closed_form": closed, "spectral": spectral}),
        );
    }
    rec.finish("eq22_crosscheck", start, None)
}

fn check_eq26(cfg: &SuiteConfig, tol: &Tolerances, start: Instant) -> CheckReport {
    let mut rec = Recorder::new();
    let check_tol = cfg.tolerance("eq26_crosscheck", 1e-9);
    let grid = measure_grid(cfg);
    for (trial, k) in (0..cfg.trials.min(101)).map(|i| {
        (
            i,
            i as f64 / (cfg.trials.min(101).max(2) - 1) as f64,
        )
    }) {
        let (a, b) = grid_pick(&grid, trial);
        let p = MonotoneParams::new(a, b).expect("grid");
        let closed = werner_mh_closed_form(k, &p).expect("range");
        let spectral = mh(&werner(WernerParam::new(k).expect("range")), &p, tol).expect("valid");
        rec.trial(
            (closed - spectral).abs() - check_tol,
            || json!({"werner": k, "alpha": a, "beta": b}),
            || json!({"closed_form": closed, "spectral": spectral}),
        );
    }
    rec.finish("eq26_crosscheck", start, None)
}

fn mixture_weights(seed: u64, n: usize) -> Vec<f64> {
    let mut sub = splitmix(seed);
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + unit(&mut sub)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn mix(weights: &[f64], states: &[DensityMatrix]) -> DensityMatrix {
    let d = states[0].dim();
    let mut acc = ComplexMatrix::zeros(d);
    for (w, s) in weights.iter().zip(states.iter()) {
        acc = acc.add(&s.matrix().scale_re(*w));
    }
    DensityMatrix::new_unchecked(acc)
}

/// Tiny deterministic stream for scalar draws inside checks.
struct SplitMix(u64);

fn splitmix(seed: u64) -> SplitMix {
    SplitMix(seed)
}

impl SplitMix {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

fn unit(s: &mut SplitMix) -> f64 {
    (s.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> SuiteConfig {
        SuiteConfig {
            trials: 30,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn registry_is_complete_and_unique() {
        assert!(CHECK_IDS.len() >= 24);
        let mut sorted: Vec<&str> = CHECK_IDS.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), CHECK_IDS.len());
        for id in CHECK_IDS {
            assert_ne!(check_description(id), "unknown");
        }
        // The statement list the registry must cover, one check each.
        let statements = [
            "lemma1_i", "lemma1_ii", "lemma1_iii", "lemma1_iv", "lemma1_v", "lemma1_vi",
            "lemma2", "lemma3", "lemma4", "m1", "m2", "m3", "m4", "m5", "thm2", "thm3",
            "thm4", "thm5", "thm6", "thm7", "cor1", "thm9_1", "thm9_2", "thm9_3", "thm9_4",
            "thm9_5", "remark1", "remark3", "eq22_crosscheck", "eq26_crosscheck",
        ];
        for st in statements {
            assert!(CHECK_IDS.contains(&st), "missing {st}");
        }
        assert_eq!(statements.len(), CHECK_IDS.len());
    }

    #[test]
    fn unknown_check_errors() {
        assert!(matches!(
            run_check("nope", &small_cfg()),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = small_cfg();
        for id in ["m1", "thm2", "lemma2"] {
            let a = run_check(id, &cfg).unwrap();
            let b = run_check(id, &cfg).unwrap();
            assert_eq!(a.trials, b.trials);
            assert_eq!(a.failures, b.failures);
            assert_eq!(a.worst_violation, b.worst_violation);
            assert_eq!(
                serde_json::to_string(&a.counterexamples).unwrap(),
                serde_json::to_string(&b.counterexamples).unwrap()
            );
        }
    }

    #[test]
    fn sound_checks_pass_small_suite() {
        let cfg = small_cfg();
        for id in [
            "lemma1_i", "lemma1_ii", "lemma1_iii", "lemma1_iv", "lemma2", "m1", "m2", "m4",
            "thm2", "thm4", "thm5", "thm7", "remark1", "eq22_crosscheck",
        ] {
            let report = run_check(id, &cfg).unwrap();
            assert_eq!(
                report.failures, 0,
                "{id}: worst violation {}",
                report.worst_violation
            );
        }
    }

    #[test]
    fn tightened_tolerance_documents_float_floor() {
        let mut cfg = small_cfg();
        cfg.tol_overrides.insert("thm2".into(), 1e-15);
        cfg.trials = 100;
        let report = run_check("thm2", &cfg).unwrap();
        assert!(report.failures > 0, "1e-15 is below the rounding floor");
    }

    #[test]
    fn remark3_family_assertion_holds_and_telemetry_present() {
        let report = run_check("remark3", &small_cfg()).unwrap();
        assert_eq!(report.failures, 0);
        let telemetry = report.telemetry.expect("always reported");
        assert_eq!(telemetry["qubit_violations"], 0);
    }

    #[test]
    fn report_serialization_shape() {
        let report = run_check("lemma3", &SuiteConfig { trials: 3, ..SuiteConfig::default() }).unwrap();
        let line = report.to_json_line();
        let v: Value = serde_json::from_str(&line).unwrap();
        for key in ["check_id", "trials", "failures", "worst_violation", "counterexamples", "elapsed_ms"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
