//! Acceptance checks shared by the `acceptance` test target and `torfill selftest`.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chains::{degree, parallelogram_cycle, StraightSimplex, TorusChain};
use crate::exactlinalg::{det_exact, mat_pow, Matrix};
use crate::filling::base::solve_base;
use crate::filling::{fv_upper_experiment, least_squares, minimax_relative_fit, reduce_parallelogram, s1_reduce};
use crate::filling::{BaseKey, CertCache};
use crate::psl2z::{decompose, family_matrix};
use crate::sampling::{random_int_matrix, random_sl2_word, random_sln};
use crate::spectral::{analyze, basic_inequalities, family_rho, fv_lower_bound, gelfand_sequence, torsion_growth_table};
use crate::spectral::CircleStatus;

/// Sample sizes and tolerances of the acceptance criteria.
pub mod tol {
    pub const C1_SAMPLES: usize = 100;
    pub const C1_MAX_WORD_LEN: usize = 40;
    pub const C1_MAX_NORM: f64 = 1e6;
    pub const C1_MAX_SECONDS: f64 = 5.0;

    pub const C2_MAX_REL_RESIDUAL: f64 = 0.20;
    pub const C2_J_MAX: u64 = 8;

    pub const C3_MAX_ARG: i64 = 200;
    pub const C3_MAX_SECONDS: f64 = 60.0;
    /// Moves per step: two per phase-1 step, at most three per halving, plus a constant.
    pub const C3_MOVE_CONSTANT: f64 = 6.0;

    pub const C4_K_MAX: u64 = 40;
    pub const C4_REL: f64 = 0.05;
    pub const C4_MAX_SECONDS: f64 = 10.0;

    pub const C5_SAMPLES: usize = 200;
    pub const C5_MAX_DIM: usize = 3;
    pub const C5_ENTRY: i64 = 10;

    pub const C6_SAMPLES: usize = 200;
    pub const C6_ENTRY: i64 = 1_000_000;

    pub const C7_SAMPLES: usize = 500;
    pub const C7_MAX_DIM: usize = 4;
    pub const C7_ENTRY: i64 = 5;
    pub const C7_GELFAND_POWER: usize = 64;
    pub const C7_GELFAND_REL: f64 = 0.1;
    pub const C7_ANOSOV_SAMPLES: usize = 20;
    pub const C7_FAMILY_MAX: u64 = 50;
    pub const C7_FAMILY_TOL: f64 = 1e-9;

    pub const C8_MAX_SECONDS: f64 = 120.0;

    pub const C9_SAMPLES: usize = 500;
    pub const C9_FAMILY_MAX: u32 = 10;

    pub const C10_SLACK: f64 = 1e-9;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn scale(self) -> usize {
        match self {
            Level::Quick => 1,
            Level::Full => 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub pass: bool,
    pub summary: String,
    /// Extra report lines, e.g. table rows.
    pub details: Vec<String>,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {} {}: {} ({:.2}s)",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.summary,
            self.seconds
        )
    }
}

/// Shared state: later criteria reuse the samples and constants of earlier ones.
#[derive(Default)]
struct Context {
    /// (log2 ||A||, cost) from criterion 1.
    c1_points: Vec<(f64, f64)>,
    /// Empirical K from criterion 2.
    k_hat: Option<f64>,
    anosov: Vec<Matrix<BigInt>>,
}

fn timed(id: u8, f: impl FnOnce() -> (bool, String, Vec<String>)) -> CriterionResult {
    let t = Instant::now();
    let (pass, summary, details) = f();
    CriterionResult {
        id,
        pass,
        summary,
        details,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Runs criteria 1..=10 in order, handing each result to `sink` as soon as it is known.
pub fn run(level: Level, seed: u64, mut sink: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let mut ctx = Context::default();
    let mut out = Vec::new();
    let steps: [fn(&mut Context, Level, u64) -> CriterionResult; 10] = [
        criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8, criterion9,
        criterion10,
    ];
    for step in steps {
        let r = step(&mut ctx, level, seed);
        sink(&r);
        out.push(r);
    }
    out
}

fn criterion1(ctx: &mut Context, level: Level, seed: u64) -> CriterionResult {
    timed(1, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1);
        let n = tol::C1_SAMPLES * level.scale();
        let mut failures = 0;
        let mut worst = 0.0f64;
        let mut max_log2 = 0.0f64;
        for _ in 0..n {
            let a = random_sl2_word(&mut rng, tol::C1_MAX_WORD_LEN, tol::C1_MAX_NORM);
            let t = Instant::now();
            let ok = match reduce_parallelogram(&a) {
                Ok(r) => {
                    let v = r.certificate.verify();
                    ctx.c1_points.push((r.log2_norm, to_f64(&r.cost)));
                    max_log2 = max_log2.max(r.log2_norm);
                    v.ok && r.final_size.is_one()
                }
                Err(_) => false,
            };
            let dt = t.elapsed().as_secs_f64();
            worst = worst.max(dt);
            if !ok || dt >= tol::C1_MAX_SECONDS {
                failures += 1;
            }
        }
        (
            failures == 0,
            format!(
                "{} of {n} SL(2,Z) words verified exactly, max log2_norm {max_log2:.2}, slowest {worst:.3}s (limit {}s)",
                n - failures,
                tol::C1_MAX_SECONDS
            ),
            Vec::new(),
        )
    })
}

fn criterion2(ctx: &mut Context, level: Level, _seed: u64) -> CriterionResult {
    let pts = ctx.c1_points.clone();
    let mut k_hat = None;
    let r = timed(2, || {
        let fit = minimax_relative_fit(&pts);
        let (ols_slope, ols_intercept) = least_squares(&pts);
        let fit_ok = fit.max_rel_residual <= tol::C2_MAX_REL_RESIDUAL;
        let cat = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let log2_rho = analyze(&cat).map(|s| s.rho.log2()).unwrap_or(f64::NAN);
        let j_max = tol::C2_J_MAX + if level == Level::Full { 2 } else { 0 };
        let mut details = vec![format!(
            "affine fit: best max relative residual {:.4} (limit {}), slope {:.2}, intercept {:.2}; least squares slope {ols_slope:.2}, intercept {ols_intercept:.2}",
            fit.max_rel_residual, tol::C2_MAX_REL_RESIDUAL, fit.slope, fit.intercept
        )];
        let upper_ok = match fv_upper_experiment(&cat, j_max) {
            Ok(rep) => {
                let k = rep
                    .rows
                    .iter()
                    .map(|r| r.cost_over_j / log2_rho)
                    .fold(0.0, f64::max);
                for r in &rep.rows {
                    details.push(format!(
                        "j={} cost={} cost_over_j={:.2} log2_norm={:.3} verified={}",
                        r.j, r.cost, r.cost_over_j, r.log2_norm, r.verified
                    ));
                }
                k_hat = Some(k);
                let bound = (1.0 + tol::C2_MAX_REL_RESIDUAL) * ols_slope;
                details.push(format!("K_hat={k:.2} against 1.2 x sample slope {bound:.2}"));
                rep.rows.iter().all(|r| r.verified) && k <= bound
            }
            Err(_) => false,
        };
        (
            fit_ok && upper_ok,
            format!(
                "affine fit residual {:.3} vs limit {} ({}); fv_upper on [[2,1],[1,1]] K_hat={} ({})",
                fit.max_rel_residual,
                tol::C2_MAX_REL_RESIDUAL,
                if fit_ok { "ok" } else { "exceeded" },
                k_hat.map_or("n/a".into(), |k| format!("{k:.2}")),
                if upper_ok { "ok" } else { "failed" }
            ),
            details,
        )
    });
    ctx.k_hat = k_hat;
    r
}

fn criterion3(_ctx: &mut Context, _level: Level, _seed: u64) -> CriterionResult {
    timed(3, || {
        let t = Instant::now();
        let max = tol::C3_MAX_ARG;
        let rows: Vec<(bool, bool, f64)> = (1..=max)
            .into_par_iter()
            .flat_map_iter(|a| (1..=max).map(move |l| (a, l)))
            .map(|(a, l)| match s1_reduce(&BigInt::from(a), &BigInt::from(l)) {
                Ok((_, tr)) => {
                    let c = tr.check();
                    let scale = ((a * l) as f64).log2() + 1.0;
                    (c.ok(), c.m_bound_literal, tr.moves as f64 / scale)
                }
                Err(_) => (false, false, f64::INFINITY),
            })
            .collect();
        let dt = t.elapsed().as_secs_f64();
        let bad = rows.iter().filter(|r| !r.0).count();
        let literal = rows.iter().filter(|r| !r.1).count();
        let c_hat = rows.iter().map(|r| r.2).fold(0.0, f64::max);
        let pass = bad == 0 && c_hat <= tol::C3_MOVE_CONSTANT && dt < tol::C3_MAX_SECONDS;
        (
            pass,
            format!(
                "{} pairs, {bad} invariant violations, fitted C={c_hat:.3} (a-priori {}), sweep {dt:.1}s (limit {}s)",
                rows.len(),
                tol::C3_MOVE_CONSTANT,
                tol::C3_MAX_SECONDS
            ),
            vec![format!(
                "M <= 1 + log2(l)/2 read with l the original argument: {literal} violations (checked against the phase-1 input a*l instead)"
            )],
        )
    })
}

fn criterion4(_ctx: &mut Context, _level: Level, _seed: u64) -> CriterionResult {
    timed(4, || {
        let cat = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let target = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        let t = Instant::now();
        let rows = match torsion_growth_table(&cat, tol::C4_K_MAX) {
            Ok(r) => r,
            Err(e) => return (false, format!("torsion table failed: {e}"), Vec::new()),
        };
        let dt = t.elapsed().as_secs_f64();
        let t1 = rows[0].torsion_order.clone();
        let t2 = rows[1].torsion_order.clone();
        let last = rows.last().expect("k_max >= 1").log_tors_over_k;
        let rel = (last - target).abs() / target;
        let pass = t1.is_one() && t2 == BigInt::from(5) && rel < tol::C4_REL && dt < tol::C4_MAX_SECONDS;
        (
            pass,
            format!(
                "|tors| at k=1,2 = {t1}, {t2}; ln|tors|/k at k={} = {last:.5}, ln target {target:.5}, rel err {rel:.4} (limit {}), {dt:.2}s",
                tol::C4_K_MAX,
                tol::C4_REL
            ),
            Vec::new(),
        )
    })
}

fn criterion5(_ctx: &mut Context, level: Level, seed: u64) -> CriterionResult {
    timed(5, || {
        let n = tol::C5_SAMPLES * level.scale();
        let mats: Vec<Matrix<BigInt>> = {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc5);
            (0..n)
                .map(|i| random_int_matrix(&mut rng, 1 + i % tol::C5_MAX_DIM, tol::C5_ENTRY))
                .collect()
        };
        let mismatches = mats
            .par_iter()
            .enumerate()
            .filter(|(i, a)| {
                let q = parallelogram_cycle(&a.columns()).expect("square");
                let d = degree(&q, seed.wrapping_add(*i as u64));
                d.ok() != det_exact(a).ok()
            })
            .count();
        (mismatches == 0, format!("{n} matrices, {mismatches} degree/det mismatches"), Vec::new())
    })
}

fn random_chain<R: Rng>(rng: &mut R, n: usize, k: usize, terms: usize, bound: i64) -> TorusChain<BigInt> {
    let mut c = TorusChain::zero(n, k);
    for _ in 0..terms {
        let verts: Vec<Vec<BigInt>> = (0..=k)
            .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
            .collect();
        let coeff = BigInt::from(rng.gen_range(-3..=3));
        c.add_term(StraightSimplex::canonicalize(&verts).expect("consistent dims"), coeff);
    }
    c
}

fn criterion6(_ctx: &mut Context, level: Level, seed: u64) -> CriterionResult {
    timed(6, || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc6);
        let n_samples = tol::C6_SAMPLES * level.scale();
        let bound = tol::C6_ENTRY;
        let mut fails = [0usize; 5];
        for i in 0..n_samples {
            let n = 1 + i % 4;
            let k = 1 + (i / 4) % 3;
            let c = random_chain(&mut rng, n, k, 6, bound);
            if !c.boundary().boundary().is_zero() {
                fails[0] += 1;
            }
            let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
            let p = c.prism(&v).expect("dims");
            if p.boundary() != c.boundary().prism(&v).expect("dims") {
                fails[1] += 1;
            }
            if p.l1_norm() > BigInt::from(k as u64 + 1) * c.l1_norm() {
                fails[2] += 1;
            }
            let kq = 1 + i % n;
            let gens: Vec<Vec<BigInt>> = (0..kq)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
                .collect();
            let q = parallelogram_cycle(&gens).expect("dims");
            if !q.boundary().is_zero() {
                fails[3] += 1;
            }
            let fact: u64 = (1..=kq as u64).product();
            if q.l1_norm() > BigInt::from(fact) {
                fails[4] += 1;
            }
        }
        let total: usize = fails.iter().sum();
        (
            total == 0,
            format!(
                "{n_samples} samples, entries up to {bound}: d^2=0 fails {}, dP=Pd fails {}, prism norm fails {}, dQ=0 fails {}, |Q|<=k! fails {}",
                fails[0], fails[1], fails[2], fails[3], fails[4]
            ),
            Vec::new(),
        )
    })
}

fn is_anosov(a: &Matrix<BigInt>) -> bool {
    analyze(a).is_ok_and(|s| s.roots.iter().all(|r| r.status != CircleStatus::On))
}

fn anosov_samples(seed: u64, count: usize) -> Vec<Matrix<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = 2 + out.len() % 3;
        let a = random_sln(&mut rng, n, 4 + n);
        if is_anosov(&a) {
            out.push(a);
        }
    }
    out
}

fn criterion7(ctx: &mut Context, level: Level, seed: u64) -> CriterionResult {
    timed(7, || {
        let n = tol::C7_SAMPLES * level.scale();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc7);
        let mut mats = Vec::with_capacity(n);
        let mut nilpotent = 0;
        while mats.len() < n {
            let a = random_int_matrix(&mut rng, 1 + mats.len() % tol::C7_MAX_DIM, tol::C7_ENTRY);
            // ln rho is undefined for nilpotent matrices
            if mat_pow(&a, a.rows() as u64).is_ok_and(|p| p.is_zero()) {
                nilpotent += 1;
                continue;
            }
            mats.push(a);
        }
        let ineq_fail = mats
            .par_iter()
            .filter(|a| !basic_inequalities(a, a.rows()).is_ok_and(|b| b.left_holds && b.right_holds))
            .count();

        ctx.anosov = anosov_samples(seed, tol::C7_ANOSOV_SAMPLES * level.scale());
        let gelfand: Vec<f64> = ctx
            .anosov
            .par_iter()
            .map(|a| {
                let rho = analyze(a).map(|s| s.rho).unwrap_or(f64::NAN);
                let g = gelfand_sequence(a, tol::C7_GELFAND_POWER).map(|s| s[s.len() - 1]).unwrap_or(f64::NAN);
                (g - rho).abs() / rho
            })
            .collect();
        let worst_gelfand = gelfand.iter().copied().fold(0.0, f64::max);
        let gelfand_ok = gelfand.iter().all(|e| *e < tol::C7_GELFAND_REL);

        let family_err = (1..=tol::C7_FAMILY_MAX)
            .map(|i| {
                let rho = analyze(&family_matrix(i as u32)).map(|s| s.rho).unwrap_or(f64::NAN);
                (rho - family_rho(i)).abs()
            })
            .fold(0.0, f64::max);
        let family_ok = family_err <= tol::C7_FAMILY_TOL;
        (
            ineq_fail == 0 && gelfand_ok && family_ok,
            format!(
                "basic inequalities: {ineq_fail} of {n} fail ({nilpotent} nilpotent draws skipped); Gelfand tail worst rel err {worst_gelfand:.4} over {} Anosov samples (limit {}); family rho max abs err {family_err:.2e} (limit {:.0e})",
                ctx.anosov.len(),
                tol::C7_GELFAND_REL,
                tol::C7_FAMILY_TOL
            ),
            Vec::new(),
        )
    })
}

fn criterion8(_ctx: &mut Context, _level: Level, _seed: u64) -> CriterionResult {
    timed(8, || {
        let t = Instant::now();
        let mut details = Vec::new();
        let mut all_ok = true;
        let mut solved = Vec::new();
        for key in BaseKey::table() {
            let k0 = Instant::now();
            match solve_base(key) {
                Ok(c) => {
                    let want = key.universal_cycle().and_then(|e| Ok(e.to_chain()?));
                    let ok = c.verify().ok && want.is_ok_and(|w| w == c.target);
                    all_ok &= ok;
                    details.push(format!(
                        "{key}: cost={} verified={ok} ({:.3}s)",
                        c.cost,
                        k0.elapsed().as_secs_f64()
                    ));
                    solved.push((key, c));
                }
                Err(e) => {
                    all_ok = false;
                    details.push(format!("{key}: {e}"));
                }
            }
        }
        let dt = t.elapsed().as_secs_f64();
        let round_trip = cache_round_trip(&solved);
        details.push(format!("cache round trip: {}", if round_trip { "bit-exact" } else { "FAILED" }));
        (
            all_ok && round_trip && dt < tol::C8_MAX_SECONDS,
            format!(
                "{} keys solved and verified in {dt:.2}s (limit {}s), cache round trip {}",
                solved.len(),
                tol::C8_MAX_SECONDS,
                if round_trip { "ok" } else { "failed" }
            ),
            details,
        )
    })
}

fn cache_round_trip(solved: &[(BaseKey, crate::filling::FillingCertificate)]) -> bool {
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let dir = std::env::temp_dir().join(format!("torfill-selftest-{}-{stamp}", std::process::id()));
    let check = || -> Option<bool> {
        let cache = CertCache::new(Some(dir.clone()));
        for (key, cert) in solved {
            cache.store(*key, cert).ok()?;
            let path = cache.path_for(*key)?;
            let bytes = std::fs::read(&path).ok()?;
            let fresh = CertCache::new(Some(dir.clone()));
            let loaded = fresh.load(*key).ok()??;
            if &loaded != cert {
                return Some(false);
            }
            fresh.store(*key, &loaded).ok()?;
            if std::fs::read(&path).ok()? != bytes {
                return Some(false);
            }
        }
        Some(true)
    };
    let ok = check().unwrap_or(false);
    let _ = std::fs::remove_dir_all(&dir);
    ok
}

fn criterion9(_ctx: &mut Context, level: Level, seed: u64) -> CriterionResult {
    timed(9, || {
        let n = tol::C9_SAMPLES * level.scale();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc9);
        let mats: Vec<Matrix<BigInt>> = (0..n).map(|_| random_sl2_word(&mut rng, 40, 1e12)).collect();
        let bad_round_trip = mats
            .par_iter()
            .filter(|a| {
                !decompose(a).is_ok_and(|d| {
                    let b = d.word.reconstruct();
                    &b == *a || b.scale(&-BigInt::one()) == **a
                })
            })
            .count();
        let mut bad_len = Vec::new();
        for i in 1..=tol::C9_FAMILY_MAX {
            for j in 1..=tol::C9_FAMILY_MAX {
                let want = (j * (2 * i + 2)) as usize;
                let got = mat_pow(&family_matrix(i), j as u64)
                    .ok()
                    .and_then(|p| decompose(&p).ok())
                    .map(|d| d.word.cyclically_reduced_length());
                if got != Some(want) {
                    bad_len.push(format!("i={i} j={j}: got {got:?}, want {want}"));
                }
            }
        }
        (
            bad_round_trip == 0 && bad_len.is_empty(),
            format!(
                "{n} round trips with {bad_round_trip} failures; cyclically reduced lengths of A_i^j for i,j <= {}: {} mismatches",
                tol::C9_FAMILY_MAX,
                bad_len.len()
            ),
            bad_len,
        )
    })
}

fn criterion10(ctx: &mut Context, _level: Level, seed: u64) -> CriterionResult {
    let k_hat = ctx.k_hat;
    let anosov = if ctx.anosov.is_empty() { anosov_samples(seed, tol::C7_ANOSOV_SAMPLES) } else { ctx.anosov.clone() };
    timed(10, || {
        let Some(k_hat) = k_hat else {
            return (false, "no empirical K_hat from criterion 2".into(), Vec::new());
        };
        let mut details = vec!["n | rho | fv_lower | n*K_hat*log2(rho) | ok".to_string()];
        let mut bound_fail = 0;
        for a in &anosov {
            let n = a.rows();
            let (rho, lower) = match (analyze(a), fv_lower_bound(a, n)) {
                (Ok(s), Ok(l)) => (s.rho, l),
                _ => {
                    bound_fail += 1;
                    continue;
                }
            };
            let upper = n as f64 * k_hat * rho.log2();
            let ok = lower <= upper + tol::C10_SLACK;
            bound_fail += usize::from(!ok);
            details.push(format!("{n} | {rho:.6} | {lower:.6} | {upper:.3} | {ok}"));
        }
        // the lower bound vanishes exactly on the certified unit-circle path
        let mut probes: Vec<Matrix<BigInt>> = vec![
            Matrix::identity(2),
            Matrix::from_i64(&[&[1, 1], &[0, 1]]),
            Matrix::from_i64(&[&[0, -1], &[1, 0]]),
            Matrix::from_i64(&[&[0, -1], &[1, 1]]),
            Matrix::from_i64(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
            Matrix::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[0, 0, 1]]),
            Matrix::from_i64(&[&[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]),
        ];
        probes.extend(anosov.iter().take(5).cloned());
        let mut flag_fail = 0;
        for a in &probes {
            let ok = match (analyze(a), fv_lower_bound(a, a.rows())) {
                (Ok(s), Ok(l)) => (l == 0.0) == s.unit_root_flag,
                _ => false,
            };
            flag_fail += usize::from(!ok);
        }
        (
            bound_fail == 0 && flag_fail == 0,
            format!(
                "{} Anosov samples, {bound_fail} bound violations with K_hat={k_hat:.2}; zero-bound iff unit_root_flag: {flag_fail} of {} probes disagree",
                anosov.len(),
                probes.len()
            ),
            details,
        )
    })
}

pub fn all_pass(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.pass)
}
