//! Self-check suite behind the `verify` subcommand.
//!
//! Every check pits an independent route against the production path:
//! closed-form kernels against direct mode quadrature, the Cartesian engine
//! against the polar one, both against the zero-mean orthant formula, the
//! whole pipeline against a discretized-field rebuild, and the probability
//! sum rules against exact constants. Randomised draws are seeded, so a
//! report is reproducible given its seed.

use crate::kernels::{
    self, kernel_set, FieldModel, FieldVariant, KernelSet, StateSpec,
};
use crate::oracle::{orthant_q, DiscretizedField};
use crate::quasiprob::{
    lg_correlators, qp_sign_cartesian, quasi_prob, Engine, ProjectionScheme, QuadratureConfig,
    QuasiProbQuery, Reference, Sign,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Verification depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult {
            name,
            passed,
            detail,
        }
    }
}

/// A completed verification run.
#[derive(Debug, Clone)]
pub struct Report {
    pub level: Level,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

fn draw_model(rng: &mut ChaCha8Rng, variant: FieldVariant) -> FieldModel {
    let l = rng.gen_range(0.5..3.0);
    FieldModel::new(variant, l).expect("valid L")
}

fn draw_state(rng: &mut ChaCha8Rng, with_coherent: bool) -> StateSpec {
    let xi = if with_coherent {
        rng.gen_range(0.0..10.0)
    } else {
        0.0
    };
    StateSpec::new(
        xi,
        1.0,
        0.0,
        rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
    .expect("valid state")
}

fn rel_err(got: num_complex::Complex64, want: num_complex::Complex64) -> f64 {
    let denom = want.norm().max(1e-12);
    (got - want).norm() / denom
}

/// Closed-form kernels against the defining mode integrals, with an
/// injectable closed-form evaluator so mutations are provably caught.
pub fn kernel_check_with(
    eval: &dyn Fn(&FieldModel, &StateSpec, f64, f64) -> KernelSet,
    samples_per_model: usize,
    seed: u64,
) -> CheckResult {
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for variant in [FieldVariant::Scalar3d, FieldVariant::Chiral1d] {
        let mut rng = rng_for(seed, variant as u64 + 1);
        for _ in 0..samples_per_model {
            let model = draw_model(&mut rng, variant);
            let state = draw_state(&mut rng, false);
            let l = model.coarse_length();
            let t1 = rng.gen_range(0.0..5.0 * l);
            let t2 = rng.gen_range(0.0..5.0 * l);
            let closed = eval(&model, &state, t1, t2);
            let quad = match kernels::oracle_kernels(&model, &state, t1, t2) {
                Ok(k) => k,
                Err(e) => {
                    return CheckResult::new(
                        "kernel closed forms vs mode quadrature",
                        false,
                        format!("oracle quadrature failed: {e}"),
                    )
                }
            };
            for (lbl, g, w) in [
                ("a1", closed.a1, quad.a1),
                ("a2", closed.a2, quad.a2),
                ("b", closed.b, quad.b),
            ] {
                let e = rel_err(g, w);
                if e > worst {
                    worst = e;
                    detail = format!(
                        "worst {lbl} rel err {e:.2e} ({variant:?}, L={l:.3}, t1={t1:.3}, t2={t2:.3})"
                    );
                }
            }
        }
    }
    CheckResult::new(
        "kernel closed forms vs mode quadrature",
        worst <= 1e-8,
        format!("{detail}; tolerance 1e-8"),
    )
}

fn check_kernels(samples: usize, seed: u64) -> CheckResult {
    kernel_check_with(
        &|m, s, t1, t2| kernel_set(m, s, t1, t2),
        samples,
        seed,
    )
}

fn check_engine_equivalence(draws: usize, seed: u64) -> CheckResult {
    let cfg_polar = QuadratureConfig::default();
    let cfg_cart = QuadratureConfig {
        engine: Engine::Cartesian,
        ..cfg_polar
    };
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for variant in [FieldVariant::Scalar3d, FieldVariant::Chiral1d] {
        let mut rng = rng_for(seed, 0x10 + variant as u64);
        for _ in 0..draws / 2 {
            let model = draw_model(&mut rng, variant);
            let state = draw_state(&mut rng, true);
            let l = model.coarse_length();
            let t1 = rng.gen_range(0.0..3.0 * l);
            let t2 = t1 + rng.gen_range(0.05 * l..4.0 * l);
            let s1 = if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
            let s2 = if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
            let query = QuasiProbQuery::new(s1, s2, t1, t2).expect("valid query");
            let scheme = ProjectionScheme::sign_zero();
            let a = quasi_prob(&model, &state, &scheme, &query, &cfg_cart);
            let b = quasi_prob(&model, &state, &scheme, &query, &cfg_polar);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    let e = (a.q - b.q).abs();
                    if e > worst {
                        worst = e;
                        detail = format!(
                            "worst |cartesian-polar| = {e:.2e} ({variant:?}, t1={t1:.3}, t2={t2:.3})"
                        );
                    }
                }
                (a, b) => {
                    return CheckResult::new(
                        "Cartesian vs polar engine",
                        false,
                        format!("engine failure: {:?} / {:?}", a.err(), b.err()),
                    )
                }
            }
        }
    }
    CheckResult::new(
        "Cartesian vs polar engine",
        worst <= 1e-6,
        format!("{detail}; tolerance 1e-6"),
    )
}

fn check_sum_rules(seed: u64) -> CheckResult {
    let cfg = QuadratureConfig::default();
    let mut rng = rng_for(seed, 0x20);
    let mut worst_sum = 0.0f64;
    let mut worst_exch = 0.0f64;
    let mut worst_flip = 0.0f64;
    for variant in [FieldVariant::Scalar3d, FieldVariant::Chiral1d] {
        for scheme_kind in 0..2 {
            for round in 0..3 {
                let model = draw_model(&mut rng, variant);
                // alternate coherent and centred states so the sign-flip
                // symmetry gets exercised on the sign scheme
                let state = if scheme_kind == 0 {
                    draw_state(&mut rng, round % 2 == 0)
                } else {
                    draw_state(&mut rng, false)
                };
                let scheme = if scheme_kind == 0 {
                    ProjectionScheme::sign_zero()
                } else {
                    ProjectionScheme::window(rng.gen_range(0.0..0.6) / model.coarse_length())
                        .expect("valid w")
                };
                let l = model.coarse_length();
                let t1 = rng.gen_range(0.0..2.0 * l);
                let t2 = t1 + rng.gen_range(0.1 * l..3.0 * l);
                let mut total = 0.0;
                for s1 in Sign::BOTH {
                    for s2 in Sign::BOTH {
                        let q = QuasiProbQuery::new(s1, s2, t1, t2).expect("valid");
                        let fwd = quasi_prob(&model, &state, &scheme, &q, &cfg);
                        let qr = QuasiProbQuery::new(s2, s1, t2, t1).expect("valid");
                        let rev = quasi_prob(&model, &state, &scheme, &qr, &cfg);
                        match (fwd, rev) {
                            (Ok(f), Ok(r)) => {
                                total += f.q;
                                worst_exch = worst_exch.max((f.q - r.q).abs());
                                // even Gaussian measure flips the sign
                                // variable: q_{s1,s2} = q_{-s1,-s2} for the
                                // zero-threshold sign scheme. (The window
                                // variable is even in the field, so no such
                                // relation exists there.)
                                if state.xi() == 0.0 && scheme_kind == 0 {
                                    let qf =
                                        QuasiProbQuery::new(s1.flip(), s2.flip(), t1, t2)
                                            .expect("valid");
                                    if let Ok(fl) = quasi_prob(&model, &state, &scheme, &qf, &cfg)
                                    {
                                        worst_flip = worst_flip.max((f.q - fl.q).abs());
                                    }
                                }
                            }
                            _ => {
                                return CheckResult::new(
                                    "sum rules and symmetries",
                                    false,
                                    "engine failure during sum-rule sweep".into(),
                                )
                            }
                        }
                    }
                }
                worst_sum = worst_sum.max((total - 1.0).abs());
            }
        }
    }
    let passed = worst_sum <= 4e-9 && worst_exch <= 1e-8 && worst_flip <= 1e-8;
    CheckResult::new(
        "sum rules and symmetries",
        passed,
        format!(
            "completeness {worst_sum:.2e} (tol 4e-9), exchange {worst_exch:.2e}, sign flip {worst_flip:.2e} (tol 1e-8)"
        ),
    )
}

fn check_coherent_vacuum_equivalence(seed: u64) -> CheckResult {
    let cfg = QuadratureConfig::default();
    let mut rng = rng_for(seed, 0x30);
    let mut worst = 0.0f64;
    for variant in [FieldVariant::Scalar3d, FieldVariant::Chiral1d] {
        for _ in 0..4 {
            let model = draw_model(&mut rng, variant);
            let coherent = StateSpec::new(
                rng.gen_range(1.0..10.0),
                1.0,
                0.0,
                rng.gen_range(0.0..0.8),
                0.0,
            )
            .expect("valid");
            let l = model.coarse_length();
            let t1 = rng.gen_range(0.0..2.0 * l);
            let t2 = t1 + rng.gen_range(0.2 * l..3.0 * l);
            // same squeeze, no displacement; threshold carries the drift
            let vacuum_side =
                StateSpec::new(0.0, 1.0, 0.0, coherent.r(), coherent.theta()).expect("valid");
            let phi1 = -kernels::coherent_mean(&model, &coherent, t1);
            let phi2 = -kernels::coherent_mean(&model, &coherent, t2);
            for (s1, s2) in [(Sign::Minus, Sign::Plus), (Sign::Plus, Sign::Plus)] {
                let q = QuasiProbQuery::new(s1, s2, t1, t2).expect("valid");
                let a = quasi_prob(
                    &model,
                    &coherent,
                    &ProjectionScheme::sign_zero(),
                    &q,
                    &cfg,
                );
                let b = quasi_prob(
                    &model,
                    &vacuum_side,
                    &ProjectionScheme::SignThreshold {
                        reference: Reference::Tabulated { phi1, phi2 },
                    },
                    &q,
                    &cfg,
                );
                match (a, b) {
                    (Ok(a), Ok(b)) => worst = worst.max((a.q - b.q).abs()),
                    _ => {
                        return CheckResult::new(
                            "coherent state vs shifted-threshold vacuum",
                            false,
                            "engine failure".into(),
                        )
                    }
                }
            }
        }
    }
    CheckResult::new(
        "coherent state vs shifted-threshold vacuum",
        worst <= 1e-9,
        format!("worst |difference| = {worst:.2e}; tolerance 1e-9"),
    )
}

fn check_r_zero_continuity(seed: u64) -> CheckResult {
    let cfg = QuadratureConfig::default();
    let mut rng = rng_for(seed, 0x40);
    let mut worst = 0.0f64;
    for variant in [FieldVariant::Scalar3d, FieldVariant::Chiral1d] {
        let model = draw_model(&mut rng, variant);
        let xi = rng.gen_range(0.0..8.0);
        let squeezed = StateSpec::new(xi, 1.0, 0.0, 1e-12, 0.3).expect("valid");
        let coherent = StateSpec::new(xi, 1.0, 0.0, 0.0, 0.0).expect("valid");
        let l = model.coarse_length();
        let t2 = rng.gen_range(0.3 * l..3.0 * l);
        for s1 in Sign::BOTH {
            let q = QuasiProbQuery::new(s1, Sign::Plus, 0.0, t2).expect("valid");
            let a = quasi_prob(&model, &squeezed, &ProjectionScheme::sign_zero(), &q, &cfg);
            let b = quasi_prob(&model, &coherent, &ProjectionScheme::sign_zero(), &q, &cfg);
            match (a, b) {
                (Ok(a), Ok(b)) => worst = worst.max((a.q - b.q).abs()),
                _ => {
                    return CheckResult::new(
                        "squeezed pipeline r -> 0 continuity",
                        false,
                        "engine failure".into(),
                    )
                }
            }
        }
    }
    CheckResult::new(
        "squeezed pipeline r -> 0 continuity",
        worst <= 1e-8,
        format!("worst |difference| = {worst:.2e}; tolerance 1e-8"),
    )
}

fn check_orthant(draws: usize, seed: u64) -> CheckResult {
    let cfg = QuadratureConfig::default();
    let mut rng = rng_for(seed, 0x50);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let a1 = num_complex::Complex64::new(rng.gen_range(0.5..2.0), 0.0);
        let a2 = num_complex::Complex64::new(rng.gen_range(0.5..2.0), 0.0);
        let mag = rng.gen_range(0.0..0.9) * (a1.re * a2.re).sqrt();
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let b = num_complex::Complex64::from_polar(mag, phase);
        let ks = KernelSet::from_parts(a1, a2, b, 0.0, 0.0);
        let s1 = if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
        let s2 = if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus };
        let q = QuasiProbQuery::new(s1, s2, 0.0, 1.0).expect("valid");
        let via_quad = match qp_sign_cartesian(&ks, &q, &cfg) {
            Ok(r) => r.q,
            Err(e) => {
                return CheckResult::new(
                    "orthant formula vs Cartesian engine",
                    false,
                    format!("engine failure: {e}"),
                )
            }
        };
        let via_formula = match orthant_q(a1, a2, b, s1, s2) {
            Ok(v) => v,
            Err(e) => {
                return CheckResult::new(
                    "orthant formula vs Cartesian engine",
                    false,
                    format!("orthant failure: {e}"),
                )
            }
        };
        worst = worst.max((via_quad - via_formula).abs());
    }
    CheckResult::new(
        "orthant formula vs Cartesian engine",
        worst <= 1e-7,
        format!("worst |difference| = {worst:.2e} over {draws} draws; tolerance 1e-7"),
    )
}

fn check_near_coincidence() -> CheckResult {
    let cfg = QuadratureConfig::default();
    let mut worst_cross = 0.0f64;
    let mut worst_marg = 0.0f64;
    for (variant, xi) in [(FieldVariant::Scalar3d, 0.0), (FieldVariant::Chiral1d, 3.0)] {
        let model = FieldModel::new(variant, 1.0).expect("valid");
        let state = StateSpec::new(xi, 1.0, 0.0, 0.0, 0.0).expect("valid");
        let scheme = ProjectionScheme::sign_zero();
        let t1 = 0.9;
        let t2 = t1 + 1e-4;
        for s in Sign::BOTH {
            let q_cross = QuasiProbQuery::new(s, s.flip(), t1, t2).expect("valid");
            let q_same = QuasiProbQuery::new(s, s, t1, t2).expect("valid");
            let (a, b) = match (
                quasi_prob(&model, &state, &scheme, &q_cross, &cfg),
                quasi_prob(&model, &state, &scheme, &q_same, &cfg),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    return CheckResult::new(
                        "near-coincidence projector algebra",
                        false,
                        "engine failure".into(),
                    )
                }
            };
            worst_cross = worst_cross.max(a.q.abs());
            let ks = kernel_set(&model, &state, t1, t2);
            let marginal =
                0.5 * (1.0 + s.value() * crate::specfun::erf_real(ks.e1 / (2.0 * ks.a1.re).sqrt()));
            worst_marg = worst_marg.max((b.q - marginal).abs());
        }
    }
    CheckResult::new(
        "near-coincidence projector algebra",
        worst_cross < 5e-3 && worst_marg < 5e-3,
        format!(
            "opposite-sign residue {worst_cross:.2e}, marginal mismatch {worst_marg:.2e}; tolerance 5e-3"
        ),
    )
}

fn check_marginalization(seed: u64) -> CheckResult {
    let cfg = QuadratureConfig::default();
    let mut rng = rng_for(seed, 0x60);
    let model = draw_model(&mut rng, FieldVariant::Scalar3d);
    let state = draw_state(&mut rng, true);
    let scheme = ProjectionScheme::sign_zero();
    let t1 = 0.6 * model.coarse_length();
    let mut worst_spread = 0.0f64;
    let mut worst_value = 0.0f64;
    for s1 in Sign::BOTH {
        let mut marginals = Vec::new();
        for step in 1..4 {
            let t2 = t1 + step as f64 * model.coarse_length();
            let mut m = 0.0;
            for s2 in Sign::BOTH {
                let q = QuasiProbQuery::new(s1, s2, t1, t2).expect("valid");
                match quasi_prob(&model, &state, &scheme, &q, &cfg) {
                    Ok(r) => m += r.q,
                    Err(_) => {
                        return CheckResult::new(
                            "one-time marginal independence of t2",
                            false,
                            "engine failure".into(),
                        )
                    }
                }
            }
            marginals.push(m);
        }
        let lo = marginals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = marginals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        worst_spread = worst_spread.max(hi - lo);
        let ks = kernel_set(&model, &state, t1, t1 + 1.0);
        let want =
            0.5 * (1.0 + s1.value() * crate::specfun::erf_real(ks.e1 / (2.0 * ks.a1.re).sqrt()));
        worst_value = worst_value.max((marginals[0] - want).abs());
    }
    CheckResult::new(
        "one-time marginal independence of t2",
        worst_spread <= 4e-8 && worst_value <= 4e-8,
        format!("spread over t2 {worst_spread:.2e}, mismatch vs Gaussian tail {worst_value:.2e}; tolerance 4e-8"),
    )
}

fn check_discretized(seed: u64) -> CheckResult {
    let cfg = QuadratureConfig::default();
    let _ = seed;
    let mut worst_coarse = 0.0f64;
    let mut improved = true;
    let mut worst_kernel = 0.0f64;
    // canonical parameter sets
    let cases = [
        (FieldVariant::Scalar3d, 0.0, 0.0),
        (FieldVariant::Scalar3d, 0.5, 0.0),
        (FieldVariant::Chiral1d, 0.0, 0.0),
        (FieldVariant::Chiral1d, 0.3, 0.0),
        (FieldVariant::Scalar3d, 0.8, 1.1),
    ];
    for (variant, r, th) in cases {
        let model = FieldModel::new(variant, 1.0).expect("valid");
        let state = StateSpec::new(0.0, 1.0, 0.0, r, th).expect("valid");
        let scheme = ProjectionScheme::sign_zero();
        let query = QuasiProbQuery::new(Sign::Plus, Sign::Plus, 0.0, 1.3).expect("valid");
        let exact = match quasi_prob(&model, &state, &scheme, &query, &cfg) {
            Ok(v) => v.q,
            Err(_) => {
                return CheckResult::new(
                    "discretized-field rebuild converges",
                    false,
                    "continuum engine failure".into(),
                )
            }
        };
        let mut errs = Vec::new();
        for n in [256usize, 512] {
            let field = DiscretizedField::new(&model, n, 12.0).expect("valid");
            match crate::oracle::discretized_q(&field, &model, &state, &scheme, &query, &cfg) {
                Ok(v) => errs.push((v - exact).abs()),
                Err(_) => {
                    return CheckResult::new(
                        "discretized-field rebuild converges",
                        false,
                        "discretized engine failure".into(),
                    )
                }
            }
        }
        worst_coarse = worst_coarse.max(errs[0]);
        if errs[1] > errs[0] + 1e-12 {
            improved = false;
        }
        // kernel-level agreement at high resolution (absolute; the kernels
        // themselves are O(1e-2))
        let fine = DiscretizedField::new(&model, 1024, 16.0).expect("valid");
        let kd = fine.kernels(&model, &state, 0.0, 1.3);
        let kc = kernel_set(&model, &state, 0.0, 1.3);
        worst_kernel = worst_kernel
            .max((kd.a1 - kc.a1).norm())
            .max((kd.b - kc.b).norm());
    }
    CheckResult::new(
        "discretized-field rebuild converges",
        worst_coarse <= 1e-3 && improved && worst_kernel <= 1e-6,
        format!(
            "|q256 - q| <= {worst_coarse:.2e} (tol 1e-3), refinement improves: {improved}, kernels at 1024 modes {worst_kernel:.2e} (tol 1e-6)"
        ),
    )
}

fn check_correlator_identities(seed: u64) -> CheckResult {
    let cfg = QuadratureConfig::default();
    let mut rng = rng_for(seed, 0x70);
    let model = draw_model(&mut rng, FieldVariant::Scalar3d);
    let state = draw_state(&mut rng, true);
    let scheme = ProjectionScheme::sign_zero();
    let t1 = 0.3;
    let t2 = 1.7;
    let (m1, m2, corr) = match lg_correlators(&model, &state, &scheme, t1, t2, &cfg) {
        Ok(v) => v,
        Err(_) => {
            return CheckResult::new(
                "correlator sum rules",
                false,
                "engine failure".into(),
            )
        }
    };
    let ks = kernel_set(&model, &state, t1, t2);
    let w1 = crate::specfun::erf_real(ks.e1 / (2.0 * ks.a1.re).sqrt());
    let w2 = crate::specfun::erf_real(ks.e2 / (2.0 * ks.a2.re).sqrt());
    let ok = (m1 - w1).abs() <= 1e-7 && (m2 - w2).abs() <= 1e-7 && corr.abs() <= 1.0 + 1e-9;
    CheckResult::new(
        "correlator sum rules",
        ok,
        format!(
            "<Q1> err {:.2e}, <Q2> err {:.2e}, |sym corr| = {:.3}",
            (m1 - w1).abs(),
            (m2 - w2).abs(),
            corr.abs()
        ),
    )
}

/// Run the suite. `Quick` covers the probability identities, engine
/// equivalences and a kernel spot check; `Full` widens the kernel sweep to
/// 200 draws per model and adds the discretized-field convergence study.
pub fn run(level: Level, seed: u64) -> Report {
    let mut checks = vec![
        check_kernels(if level == Level::Full { 200 } else { 40 }, seed),
        check_engine_equivalence(100, seed),
        check_sum_rules(seed),
        check_coherent_vacuum_equivalence(seed),
        check_r_zero_continuity(seed),
        check_orthant(200, seed),
        check_near_coincidence(),
        check_marginalization(seed),
        check_correlator_identities(seed),
    ];
    if level == Level::Full {
        checks.push(check_discretized(seed));
    }
    Report {
        level,
        seed,
        checks,
    }
}
