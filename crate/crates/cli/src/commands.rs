use std::sync::Arc;

use anyhow::Result;
use finspeh::error::Error;
use finspeh::export::{self, PairLabel};
use finspeh::gamma::{b_tilde_table, gk_gamma};
use finspeh::glgroup::{enumerate_group, FqMatrix};
use finspeh::levelzero::{jpss_gamma, local_gamma, LevelZeroParams};
use finspeh::linalg::ONE;
use finspeh::repcore::Rep;
use finspeh::speh::{projector_trace, ProjectorKind, SpehModel};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::data::{cuspidal_list, is_exceptional, select, sign_at_minus_one, tau};

pub fn cuspidals(cfg: &RunConfig) -> Result<Vec<Value>> {
    let n = cfg.n.unwrap_or(cfg.k);
    let list = cuspidal_list(n, cfg.q, cfg.tol)?;
    list.par_iter()
        .map(|(id, r)| {
            let omega = r.central_character(cfg.tol)?;
            let self_dual = Rep::contragredient(r).is_isomorphic(r, cfg.tol)?;
            Ok(json!({
                "index": id,
                "n": n,
                "q": cfg.q,
                "dim": r.dim(),
                "central_character": omega.exponent(),
                "central_sign": omega.sign() as i8,
                "self_dual": self_dual,
            }))
        })
        .collect()
}

fn speh_model(cfg: &RunConfig) -> Result<(Arc<Rep>, SpehModel)> {
    let t = tau(cfg.k, cfg.q, cfg.tau, cfg.tol)?;
    let sm = SpehModel::new(t.clone(), cfg.c, cfg.seed, cfg.tol)?;
    Ok((t, sm))
}

pub fn speh(cfg: &RunConfig) -> Result<Vec<Value>> {
    let (_, sm) = speh_model(cfg)?;
    let model = sm.model();
    let id = FqMatrix::identity(model.n(), cfg.q);
    Ok(vec![json!({
        "q": cfg.q,
        "k": cfg.k,
        "c": cfg.c,
        "tau_id": cfg.tau,
        "induced_dim": model.dim(),
        "speh_dim": projector_trace(sm.hecke(), ProjectorKind::Speh).re.round() as i64,
        "steinberg_dim": projector_trace(sm.hecke(), ProjectorKind::Steinberg).re.round() as i64,
        "dense": sm.hecke().is_dense(),
        "equivariance_residual": export::number(sm.equivariance_residual()?),
        "bessel_identity": export::complex(sm.bessel(&id)),
    })])
}

/// `B̃(h)` for every `h ∈ GL_c` (with the matching `g`), or `B(g)` on all of `GL_{kc}` when `all`.
pub fn bessel_speh(cfg: &RunConfig, all: bool) -> Result<Vec<Value>> {
    let (_, sm) = speh_model(cfg)?;
    if all {
        let group = enumerate_group(sm.model().n(), cfg.q)?;
        return Ok(group.par_iter().map(|g| export::bessel_row(g, sm.bessel(g))).collect());
    }
    let k = cfg.k;
    b_tilde_table(&sm)?
        .into_iter()
        .map(|(h, value)| {
            let g = finspeh::glgroup::bessel_argument(&h, k)?;
            let mut row = export::bessel_row(&g, value);
            row["h"] = export::matrix(&h);
            Ok(row)
        })
        .collect()
}

/// The `π` to pair with: characters of `F_q^×` when `c = 1`, cuspidals of `GL_c` otherwise.
pub fn pi_list(cfg: &RunConfig) -> Result<Vec<(usize, Arc<Rep>)>> {
    select(cuspidal_list(cfg.c, cfg.q, cfg.tol)?, cfg.pi, "π")
}

fn require_gamma_k(cfg: &RunConfig) -> Result<()> {
    if cfg.k < 2 {
        return Err(Error::Unsupported("gamma factors need k >= 2 (τ on GL_1 has no (k,c) gamma factor here)".into()).into());
    }
    Ok(())
}

pub struct PairData {
    pub label: PairLabel,
    pub pi: Arc<Rep>,
}

/// `π` for each selected id. When `π ≅ τ∨` the contragredient model of `τ` itself is used, since
/// the pairings between `π` and `τ` assume the dual basis.
pub fn pairs(cfg: &RunConfig, t: &Arc<Rep>) -> Result<Vec<PairData>> {
    pi_list(cfg)?
        .into_iter()
        .map(|(pi_id, pi)| {
            let exceptional = is_exceptional(t, &pi, cfg.tol)?;
            let pi = if exceptional { Arc::new(Rep::contragredient(t)) } else { pi };
            let label = PairLabel { q: cfg.q, k: cfg.k, c: cfg.c, tau_id: cfg.tau, pi_id, exceptional };
            Ok(PairData { label, pi })
        })
        .collect()
}

pub fn gamma(cfg: &RunConfig) -> Result<Vec<Value>> {
    require_gamma_k(cfg)?;
    let (t, sm) = speh_model(cfg)?;
    pairs(cfg, &t)?
        .par_iter()
        .map(|p| Ok(export::gamma_row(&p.label, &gk_gamma(&sm, &p.pi, cfg.tol)?)))
        .collect()
}

/// Level-zero gamma factors for unramified lifts, as rational functions of `X`.
pub fn local_gamma_rows(cfg: &RunConfig) -> Result<Vec<Value>> {
    require_gamma_k(cfg)?;
    let (t, sm) = speh_model(cfg)?;
    let tau_sign = sign_at_minus_one(&t, cfg.tol)?;
    pairs(cfg, &t)?
        .par_iter()
        .map(|p| {
            let g = gk_gamma(&sm, &p.pi, cfg.tol)?;
            let params = LevelZeroParams::new(cfg.q, cfg.k, cfg.c, ONE, ONE, tau_sign, sign_at_minus_one(&p.pi, cfg.tol)?)?;
            let gamma = local_gamma(&params, g.gamma_tilde, p.label.exceptional)?;
            let mut row = export::rational_function(&gamma);
            row["q"] = json!(cfg.q);
            row["k"] = json!(cfg.k);
            row["c"] = json!(cfg.c);
            row["tau_id"] = json!(cfg.tau);
            row["pi_id"] = json!(p.label.pi_id);
            row["exceptional"] = json!(p.label.exceptional);
            row["gamma_tilde"] = export::complex(g.gamma_tilde);
            if p.label.exceptional {
                row["jpss_mismatch"] = export::number(gamma.mismatch(&jpss_gamma(&params)?));
            }
            Ok(row)
        })
        .collect()
}
