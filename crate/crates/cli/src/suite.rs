use std::sync::Arc;
use std::time::Instant;

use anyhow::Result;
use clap::ValueEnum;
use finspeh::gamma::{
    class_function_residual, dual_zeta_operator, exceptional_terms, gk_gamma, lambda2_dual_normalization, zeta_operator,
};
use finspeh::glgroup::{diag_k, FqMatrix};
use finspeh::levelzero::{
    functional_equation_mismatch, jpss_gamma, local_dual_zeta, local_gamma, local_zeta, LevelZeroParams,
};
use finspeh::linalg::{proportionality, random_cvec, sup_norm, CMat, C64, ONE, ZERO};
use finspeh::repcore::{swap_identity_residual, Rep};
use finspeh::speh::{apply_projector, kc_functional_recursive, projector_trace, ProjectorForm, ProjectorKind, SpehModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::commands::{pairs, PairData};
use crate::config::RunConfig;
use crate::data::{sign_at_minus_one, tau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Hecke,
    Projectors,
    Whittaker,
    Gamma,
    Local,
    All,
}

impl SuiteName {
    fn label(self) -> &'static str {
        match self {
            SuiteName::Hecke => "hecke",
            SuiteName::Projectors => "projectors",
            SuiteName::Whittaker => "whittaker",
            SuiteName::Gamma => "gamma",
            SuiteName::Local => "local",
            SuiteName::All => "all",
        }
    }

    fn expand(self) -> Vec<SuiteName> {
        match self {
            SuiteName::All => vec![SuiteName::Hecke, SuiteName::Projectors, SuiteName::Whittaker, SuiteName::Gamma, SuiteName::Local],
            s => vec![s],
        }
    }

    /// Offset mixed into the run seed so each suite draws its own stream.
    fn stream(self) -> u64 {
        self as u64 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    fn measured(id: impl Into<String>, residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        let status = if residual.is_finite() && residual <= tolerance { Status::Pass } else { Status::Fail };
        Check { id: id.into(), status, residual, tolerance, detail: detail.into() }
    }

    fn skipped(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { id: id.into(), status: Status::Skip, residual: 0.0, tolerance: 0.0, detail: detail.into() }
    }

    fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "status": self.status.as_str(),
            "residual": finspeh::export::number(self.residual),
            "tolerance": finspeh::export::number(self.tolerance),
            "detail": self.detail,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub runtime_s: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// Runtime is left out so that reports are reproducible byte for byte.
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "status": if self.passed() { "pass" } else { "fail" },
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn csv_rows(&self) -> Vec<Value> {
        self.checks
            .iter()
            .map(|c| {
                let mut row = c.to_json();
                row["suite"] = json!(self.suite);
                row
            })
            .collect()
    }
}

/// Shared inputs of the suites: the Speh model of the configured `τ` and the knobs.
struct Context<'a> {
    cfg: &'a RunConfig,
    tau: Arc<Rep>,
    speh: SpehModel,
    perturb: f64,
}

impl Context<'_> {
    fn rng(&self, suite: SuiteName) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(suite.stream()))
    }

    fn shape(&self) -> String {
        format!("(k,c,q)=({},{},{})", self.cfg.k, self.cfg.c, self.cfg.q)
    }

    /// The identity for dense models, a few random columns otherwise.
    fn probe(&self, rng: &mut ChaCha8Rng) -> CMat {
        let model = self.speh.model();
        let n = model.dim();
        if self.speh.hecke().is_dense() {
            return CMat::identity(n, n);
        }
        let cols: Vec<C64> = (0..PROBE_COLUMNS).flat_map(|_| model.random_vector(rng)).collect();
        CMat::from_column_slice(n, PROBE_COLUMNS, &cols)
    }
}

const PROBE_COLUMNS: usize = 4;
const BESSEL_PAIRS: usize = 20;
const FE_DATA: usize = 3;
const JPSS_TOL: f64 = 1e-10;

pub fn run(cfg: &RunConfig, suite: SuiteName, perturb: f64) -> Result<Vec<SuiteReport>> {
    let t = tau(cfg.k, cfg.q, cfg.tau, cfg.tol)?;
    let speh = SpehModel::new(t.clone(), cfg.c, cfg.seed, cfg.tol)?;
    let ctx = Context { cfg, tau: t, speh, perturb };
    suite
        .expand()
        .par_iter()
        .map(|&s| {
            let start = Instant::now();
            let checks = match s {
                SuiteName::Hecke => hecke(&ctx),
                SuiteName::Projectors => projectors(&ctx),
                SuiteName::Whittaker => whittaker(&ctx),
                SuiteName::Gamma => gamma(&ctx),
                SuiteName::Local => local(&ctx),
                SuiteName::All => unreachable!("expanded above"),
            }?;
            Ok(SuiteReport { suite: s.label(), checks, runtime_s: start.elapsed().as_secs_f64() })
        })
        .collect()
}

fn hecke(ctx: &Context) -> Result<Vec<Check>> {
    let mut rng = ctx.rng(SuiteName::Hecke);
    let m = ctx.probe(&mut rng);
    let (quad, braid, comm) = ctx.speh.hecke().relation_residuals(&m);
    let tol = ctx.cfg.tol;
    let detail = format!("{} on {} columns", ctx.shape(), m.ncols());
    Ok(vec![
        Check::measured("hecke.quadratic", quad, tol, detail.clone()),
        Check::measured("hecke.braid", braid, tol, detail.clone()),
        Check::measured("hecke.commuting", comm, tol, detail),
    ])
}

fn projectors(ctx: &Context) -> Result<Vec<Check>> {
    let mut rng = ctx.rng(SuiteName::Projectors);
    let m = ctx.probe(&mut rng);
    let hecke = ctx.speh.hecke();
    let tol = ctx.cfg.tol;
    let mut checks = Vec::new();
    let mut sums = Vec::new();
    for (kind, name) in [(ProjectorKind::Speh, "speh"), (ProjectorKind::Steinberg, "steinberg")] {
        let s = apply_projector(hecke, kind, ProjectorForm::Sum, &m);
        let l = apply_projector(hecke, kind, ProjectorForm::ProductLeftToRight, &m);
        let r = apply_projector(hecke, kind, ProjectorForm::ProductRightToLeft, &m);
        let detail = ctx.shape();
        checks.push(Check::measured(format!("projectors.{name}.sum_vs_product_lr"), sup_norm(&(&s - &l)), tol, detail.clone()));
        checks.push(Check::measured(format!("projectors.{name}.sum_vs_product_rl"), sup_norm(&(&s - &r)), tol, detail.clone()));
        let ss = apply_projector(hecke, kind, ProjectorForm::ProductLeftToRight, &s);
        checks.push(Check::measured(format!("projectors.{name}.idempotent"), sup_norm(&(&ss - &s)), tol, detail));
        sums.push(s);
    }
    if ctx.cfg.c >= 2 {
        let cross = apply_projector(hecke, ProjectorKind::Steinberg, ProjectorForm::Sum, &sums[0]);
        checks.push(Check::measured("projectors.orthogonal", sup_norm(&cross), tol, "P_St P_Speh"));
    } else {
        checks.push(Check::skipped("projectors.orthogonal", "both projectors are the identity when c = 1"));
    }
    let rs = projector_trace(hecke, ProjectorKind::Speh);
    let rst = projector_trace(hecke, ProjectorKind::Steinberg);
    let integrality = (rs - rs.re.round()).norm().max((rst - rst.re.round()).norm());
    checks.push(Check::measured("projectors.trace_integral", integrality, 1e-6, format!("tr P_Speh = {:.6}, tr P_St = {:.6}", rs.re, rst.re)));
    checks.push(Check::measured("projectors.rank_order", (rs.re - rst.re).max(0.0), tol, "rank P_Speh <= rank P_St"));
    Ok(checks)
}

fn whittaker(ctx: &Context) -> Result<Vec<Check>> {
    let mut rng = ctx.rng(SuiteName::Whittaker);
    let (sm, tol) = (&ctx.speh, ctx.cfg.tol);
    let model = sm.model();
    let (n, k, c, q) = (model.n(), model.k(), model.c(), model.q());
    let mut checks = vec![Check::measured("whittaker.equivariance", sm.equivariance_residual()?, tol, ctx.shape())];

    // ψ_{(k,c)}-vectors of the Speh subspace span a line: the second singular value vanishes.
    let cols: Vec<C64> = (0..3).flat_map(|_| model.random_vector(&mut rng)).collect();
    let f = CMat::from_column_slice(model.dim(), 3, &cols);
    let image = sm.kc_projector().apply(&apply_projector(sm.hecke(), ProjectorKind::Speh, ProjectorForm::ProductLeftToRight, &f));
    let mut sv: Vec<f64> = image.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let uniqueness = if sv[0] > 0.0 { sv[1] / sv[0] } else { f64::INFINITY };
    checks.push(Check::measured("whittaker.uniqueness", uniqueness, tol, format!("σ₁ = {:.3e}, σ₂ = {:.3e}", sv[0], sv[1])));

    for c1 in 1..c {
        let a = kc_functional_recursive(model, (c1, c - c1))?;
        let conj: Vec<C64> = a.iter().map(|z| z.conj()).collect();
        let riesz = sm.project(ProjectorKind::Speh, &conj);
        let (alpha, res) = proportionality(&riesz, sm.whittaker_vector());
        let res = if alpha.norm() > tol { res } else { f64::INFINITY };
        checks.push(Check::measured(format!("whittaker.split_{c1}_{}", c - c1), res, tol, format!("ratio {:.6e}", alpha.norm())));
    }

    let id = FqMatrix::identity(n, q);
    checks.push(Check::measured("whittaker.bessel_identity", (sm.bessel(&id) - ONE).norm(), tol, "B(I) = 1"));
    let omega = model.omega();
    let mut worst = 0.0f64;
    for _ in 0..BESSEL_PAIRS {
        let h = FqMatrix::random_invertible(c, q, &mut rng);
        let g = FqMatrix::random_invertible(n, q, &mut rng);
        let lhs = sm.bessel(&diag_k(&h, k).mul(&g));
        worst = worst.max((lhs - omega.eval(h.det())? * sm.bessel(&g)).norm());
    }
    checks.push(Check::measured("whittaker.bessel_equivariance", worst, tol, format!("{BESSEL_PAIRS} random (h, g)")));
    Ok(checks)
}

fn gamma_unavailable(ctx: &Context, suite: &str) -> Option<Vec<Check>> {
    (ctx.cfg.k < 2).then(|| vec![Check::skipped(format!("{suite}.all"), "gamma factors need k >= 2")])
}

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    random_cvec(n, rng).iter().copied().collect()
}

fn gamma(ctx: &Context) -> Result<Vec<Check>> {
    if let Some(skip) = gamma_unavailable(ctx, "gamma") {
        return Ok(skip);
    }
    let mut rng = ctx.rng(SuiteName::Gamma);
    let (sm, cfg) = (&ctx.speh, ctx.cfg);
    let (k, c, q) = (cfg.k, cfg.c, cfg.q);
    let tol = cfg.tol;
    let mut checks = Vec::new();
    let class_pairs: Vec<(FqMatrix, FqMatrix)> =
        (0..10).map(|_| (FqMatrix::random_invertible(c, q, &mut rng), FqMatrix::random_invertible(c, q, &mut rng))).collect();
    checks.push(Check::measured("gamma.class_function", class_function_residual(sm, &class_pairs)?, tol, "B̃ on 10 conjugate pairs"));
    checks.push(Check::measured("gamma.swap_identity", swap_identity_residual(&ctx.tau)?, tol, format!("τ = {}", cfg.tau)));
    if k == c && c >= 2 {
        let norm = lambda2_dual_normalization(sm)?;
        let expected = 1.0 / ctx.tau.dim() as f64;
        checks.push(Check::measured("gamma.lambda2_dual_normalization", (norm - expected).norm(), tol, format!("expected 1/{}", ctx.tau.dim())));
    }
    let qc = (q as f64).powf(-(c as f64) / 2.0);
    for PairData { label, pi } in pairs(cfg, &ctx.tau)? {
        let id = format!("gamma.pi{}", label.pi_id);
        let g = gk_gamma(sm, &pi, tol)?;
        let gt = g.gamma_tilde + ctx.perturb;
        checks.push(Check::measured(format!("{id}.schur"), g.schur_residual, tol, ""));
        if label.exceptional {
            checks.push(Check::measured(format!("{id}.exceptional_value"), (gt + qc).norm(), tol, format!("γ̃ = {gt:.6}")));
            let mut worst = 0.0f64;
            for _ in 0..FE_DATA {
                let f = sm.project(ProjectorKind::Speh, &sm.model().random_vector(&mut rng));
                let v = random_vec(pi.dim(), &mut rng);
                let vd = random_vec(pi.dim(), &mut rng);
                let terms = exceptional_terms(sm, &pi, &f, &v, &vd)?.with_unit_zeta()?;
                worst = worst.max(terms.residuals(gt).max());
            }
            checks.push(Check::measured(format!("{id}.modified_fe"), worst, tol, format!("{FE_DATA} random (f, v, v∨)")));
        } else {
            checks.push(Check::measured(format!("{id}.unit_modulus"), (gt.norm() - 1.0).abs(), tol, format!("γ̃ = {gt:.6}")));
            let mut worst = 0.0f64;
            for _ in 0..FE_DATA {
                let f = sm.project(ProjectorKind::Speh, &sm.model().random_vector(&mut rng));
                let z = zeta_operator(&pi, k, |x| sm.whittaker_function(&f, x))?;
                let zd = dual_zeta_operator(&pi, k, |x| sm.whittaker_function(&f, x))?;
                worst = worst.max(sup_norm(&(zd - &z * gt)) / sup_norm(&z).max(f64::MIN_POSITIVE));
            }
            checks.push(Check::measured(format!("{id}.functional_equation"), worst, tol, format!("{FE_DATA} random W")));
        }
    }
    Ok(checks)
}

fn random_unit(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn local(ctx: &Context) -> Result<Vec<Check>> {
    if let Some(skip) = gamma_unavailable(ctx, "local") {
        return Ok(skip);
    }
    let mut rng = ctx.rng(SuiteName::Local);
    let (sm, cfg) = (&ctx.speh, ctx.cfg);
    let (k, c, q, tol) = (cfg.k, cfg.c, cfg.q, cfg.tol);
    let tau_sign = sign_at_minus_one(&ctx.tau, tol)?;
    let bump = C64::new(1.0 + ctx.perturb, 0.0);
    let mut checks = Vec::new();
    for PairData { label, pi } in pairs(cfg, &ctx.tau)? {
        let id = format!("local.pi{}", label.pi_id);
        let g = gk_gamma(sm, &pi, tol)?;
        let p = LevelZeroParams::new(q, k, c, random_unit(&mut rng), random_unit(&mut rng), tau_sign, sign_at_minus_one(&pi, tol)?)?;
        let gamma = &local_gamma(&p, g.gamma_tilde, label.exceptional)? * bump;
        let mut worst = 0.0f64;
        for _ in 0..FE_DATA {
            let f = sm.project(ProjectorKind::Speh, &sm.model().random_vector(&mut rng));
            let (z, dual) = if label.exceptional {
                let v = random_vec(pi.dim(), &mut rng);
                let vd = random_vec(pi.dim(), &mut rng);
                let t = exceptional_terms(sm, &pi, &f, &v, &vd)?.with_unit_zeta()?;
                (local_zeta(&p, true, t.zeta, t.lambda2)?, local_dual_zeta(&p, true, t.dual_zeta, t.lambda2_dual_term())?)
            } else {
                let z = zeta_operator(&pi, k, |x| sm.whittaker_function(&f, x))?;
                let zd = dual_zeta_operator(&pi, k, |x| sm.whittaker_function(&f, x))?;
                // The largest entry of each side, scaled to modulus 1 so the tolerance is relative.
                let (i, j) = (0..pi.dim())
                    .flat_map(|i| (0..pi.dim()).map(move |j| (i, j)))
                    .max_by(|a, b| z[*a].norm().total_cmp(&z[*b].norm()))
                    .expect("π is nonzero");
                let s = C64::new(1.0 / z[(i, j)].norm().max(f64::MIN_POSITIVE), 0.0);
                (local_zeta(&p, false, z[(i, j)] * s, ZERO)?, local_dual_zeta(&p, false, zd[(i, j)] * s, ZERO)?)
            };
            worst = worst.max(functional_equation_mismatch(&p, &z, &dual, &gamma));
        }
        checks.push(Check::measured(format!("{id}.functional_equation"), worst, tol, format!("{FE_DATA} random data")));
        if label.exceptional {
            let jpss = jpss_gamma(&p)?;
            checks.push(Check::measured(format!("{id}.jpss"), gamma.mismatch(&jpss), JPSS_TOL, "closed form"));
        }
    }
    Ok(checks)
}
