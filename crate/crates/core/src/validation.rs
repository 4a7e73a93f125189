//! Regression suite against the reference numbers: perfect-mirror limits,
//! the ratio maxima, thickness factors, and the internal equivalences between
//! independent routes to the same energy.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::Result;
use crate::exact::{
    exact_plate_plate, pws_via_reflection, slab_reflection_exact, slab_reflection_summed,
    thin_slab_first_order, Polarization, ThinSlabSource, WaveParams,
};
use crate::materials::{MaterialModel, Response};
use crate::pws::{
    atom_slab_thickness_factor, oracle_pws, pws_atom_plate, pws_atom_slab, pws_energy, pws_long_range,
    pws_plate_plate, pws_slab_slab, pws_sphere_plate, slab_slab_thickness_factor, GeometryKind,
    GeometrySpec,
};
use crate::quadrature::QuadratureConfig;
use crate::ratios::{
    default_eps_grid, find_extremum, ratio_atom_plate_lr, ratio_atom_slab_lr, ratio_plate_plate_lr, ratio_slab_slab_lr, ratio_sphere_pws_limits, sign_changes,
    sweep, SweepSpec,
};
use crate::specfun::{primitive, primitive_chain_check, PrimitiveKind};

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("[{status}] {:>2}. {}: {}", self.id, self.title, self.detail)
    }
}

type Check = fn(&QuadratureConfig) -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, Check); 12] = [
    (1, "perfect-mirror atom-plate ratio 23/20", perfect_mirror_atom_plate),
    (2, "atom-plate maximum", atom_plate_maximum),
    (3, "silicon atom-plate ratio", silicon_point),
    (4, "perfect-mirror plate-plate ratio 621/(8 pi^4)", perfect_mirror_plate_plate),
    (5, "perfect-mirror Lifshitz energy", casimir_energy),
    (6, "plate-plate maximum and crossing", plate_plate_maximum),
    (7, "thickness factors", thickness_factors),
    (8, "closed-form PWS against brute-force summation", oracle_equivalence),
    (9, "reflection-path equivalence", reflection_equivalence),
    (10, "dilute-limit equivalence", dilute_equivalence),
    (11, "special functions", special_functions),
    (12, "sphere anchors", sphere_anchors),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Runs one criterion by number (1-based).
pub fn run_criterion(id: u8, cfg: &QuadratureConfig) -> Option<CriterionOutcome> {
    let (id, title, check) = *CRITERIA.iter().find(|c| c.0 == id)?;
    let (passed, detail) = match check(cfg) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionOutcome { id, title, passed, detail })
}

/// Runs every criterion, in parallel, returning the outcomes in order.
pub fn run_all(cfg: &QuadratureConfig) -> Vec<CriterionOutcome> {
    CRITERIA
        .par_iter()
        .map(|c| run_criterion(c.0, cfg).expect("known criterion"))
        .collect()
}

fn ratio_of(p: Result<crate::ratios::RatioPoint>) -> Result<f64> {
    Ok(p?.ratio.unwrap_or(f64::NAN))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn perfect_mirror_atom_plate(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let target = 23.0 / 20.0;
    let at_1e8 = ratio_of(ratio_atom_plate_lr(1e8, cfg))?;
    let mirror = ratio_of(ratio_atom_plate_lr(f64::INFINITY, cfg))?;
    let ok = (at_1e8 - target).abs() <= 1e-4 && (mirror - target).abs() <= 1e-4;
    Ok((
        ok,
        format!(
            "eps=1e8: {at_1e8:.7} (off {:.2e}), perfect mirror: {mirror:.7} (off {:.2e}), tol 1e-4",
            (at_1e8 - target).abs(),
            (mirror - target).abs()
        ),
    ))
}

fn atom_plate_maximum(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let e = find_extremum(|x| ratio_of(ratio_atom_plate_lr(x, cfg)), 2.0, 100.0)?;
    let ok = (e.x - 14.9).abs() <= 0.3 && (e.value - 1.321).abs() <= 0.003;
    Ok((ok, format!("eps* = {:.4}, ratio = {:.5}", e.x, e.value)))
}

fn silicon_point(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let r = ratio_of(ratio_atom_plate_lr(11.87, cfg))?;
    Ok(((r - 1.319).abs() <= 0.003, format!("ratio(11.87) = {r:.5}")))
}

fn perfect_mirror_plate_plate(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let target = 621.0 / (8.0 * PI.powi(4));
    let r = ratio_of(ratio_plate_plate_lr(f64::INFINITY, cfg))?;
    Ok(((r - target).abs() <= 1e-3, format!("ratio = {r:.6}, 621/(8 pi^4) = {target:.6}")))
}

fn casimir_energy(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let pm = MaterialModel::perfect_mirror();
    let mut worst: f64 = 0.0;
    for l in [1.0f64, 3.0] {
        let u = exact_plate_plate(&pm, &pm, l, cfg)?.value;
        worst = worst.max(rel(u, -PI * PI / (720.0 * l.powi(3))));
    }
    Ok((worst <= 1e-8, format!("max relative deviation {worst:.2e} at L in {{1, 3}}")))
}

fn plate_plate_maximum(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let points = sweep(&SweepSpec::new(GeometryKind::PlatePlate, default_eps_grid(), vec![]), cfg)?;
    let (i_max, _) = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.ratio.map(|r| (i, r)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty sweep");
    let lo = points[i_max.saturating_sub(1)].eps0;
    let hi = points[(i_max + 1).min(points.len() - 1)].eps0;
    let peak = find_extremum(|x| ratio_of(ratio_plate_plate_lr(x, cfg)), lo, hi)?;
    let crossings = sign_changes(&points);
    let crossing_ok = crossings.len() == 1 && crossings[0].0 >= 30.0 && crossings[0].1 <= 1000.0;
    let ok = (1.55..=1.65).contains(&peak.value) && crossing_ok;
    Ok((
        ok,
        format!(
            "max {:.4} at eps = {:.3}; sign changes of (ratio - 1): {:?}",
            peak.value, peak.x, crossings
        ),
    ))
}

fn thickness_factors(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let a = MaterialModel::static_alpha(0.01, 1.0)?;
    let plate = pws_atom_plate(&a, &a, 1.0, cfg)?.value;
    let plates = pws_plate_plate(&a, &a, 1.0, cfg)?.value;
    let mut pws_worst: f64 = 0.0;
    let mut mirror_worst: f64 = 0.0;
    let bulk_pm = ratio_of(ratio_atom_plate_lr(f64::INFINITY, cfg))?;
    let bulk_pm_pp = ratio_of(ratio_plate_plate_lr(f64::INFINITY, cfg))?;
    for e in [0.1, 1.0, 10.0] {
        let fa = atom_slab_thickness_factor(e);
        let fs = slab_slab_thickness_factor(e, e);
        pws_worst = pws_worst.max(rel(pws_atom_slab(&a, &a, 1.0, e, cfg)?.value / plate, fa));
        pws_worst = pws_worst.max(rel(pws_slab_slab(&a, &a, 1.0, e, e, cfg)?.value / plates, fs));
        // Perfect reflectors on the exact side: the slab reflects like the bulk.
        for eps in [1e10, f64::INFINITY] {
            let bulk_a = if eps.is_infinite() { bulk_pm } else { ratio_of(ratio_atom_plate_lr(eps, cfg))? };
            let bulk_s = if eps.is_infinite() { bulk_pm_pp } else { ratio_of(ratio_plate_plate_lr(eps, cfg))? };
            let ra = ratio_of(ratio_atom_slab_lr(eps, e, cfg))? / bulk_a;
            let rs = ratio_of(ratio_slab_slab_lr(eps, e, cfg))? / bulk_s;
            mirror_worst = mirror_worst.max((ra - fa).abs()).max((rs - fs).abs());
        }
    }
    Ok((
        pws_worst <= 1e-8 && mirror_worst <= 1e-3,
        format!("static PWS factors: max rel dev {pws_worst:.2e}; perfect-mirror exact side: max dev {mirror_worst:.2e}"),
    ))
}

fn oracle_equivalence(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let s1 = MaterialModel::static_alpha(0.01, 1.0)?;
    let s2 = MaterialModel::static_alpha(0.02, 0.5)?;
    let lor = MaterialModel::new(Response::LorentzAlpha { a0: 0.01, u_res: 1.5 }, 1.0)?;
    let cases: Vec<(GeometrySpec, MaterialModel, MaterialModel)> = vec![
        (GeometrySpec::AtomSlab { l: 1.0, e_a: 1.0 }, s1, s1),
        (GeometrySpec::AtomSlab { l: 0.5, e_a: 0.1 }, s1, s2),
        (GeometrySpec::AtomSlab { l: 2.0, e_a: 5.0 }, s2, s1),
        (GeometrySpec::AtomSlab { l: 1.0, e_a: 20.0 }, s1, s1),
        (GeometrySpec::AtomSlab { l: 1.0, e_a: 0.5 }, lor, lor),
        (GeometrySpec::SlabSlab { l: 1.0, e_a: 0.5, e_b: 0.5 }, s1, s1),
        (GeometrySpec::SlabSlab { l: 1.0, e_a: 0.2, e_b: 2.0 }, s1, s2),
        (GeometrySpec::SlabSlab { l: 0.3, e_a: 1.0, e_b: 1.0 }, s2, s2),
        (GeometrySpec::SlabSlab { l: 1.0, e_a: 20.0, e_b: 20.0 }, s1, s1),
        (GeometrySpec::SlabSlab { l: 1.0, e_a: 0.5, e_b: 1.0 }, lor, lor),
        (GeometrySpec::SphereSlab { l_center: 2.0, radius: 1.0, e_a: 1.0 }, s1, s1),
        (GeometrySpec::SphereSlab { l_center: 1.2, radius: 1.0, e_a: 0.5 }, s1, s2),
        (GeometrySpec::SphereSlab { l_center: 5.0, radius: 0.5, e_a: 3.0 }, s2, s1),
        (GeometrySpec::SphereSlab { l_center: 3.0, radius: 2.0, e_a: 20.0 }, s1, s1),
        (GeometrySpec::SphereSlab { l_center: 2.0, radius: 1.0, e_a: 1.0 }, lor, lor),
    ];
    let oracle_cfg = cfg.with_rel_tol(cfg.rel_tol.max(1e-9));
    let devs: Vec<(GeometrySpec, f64)> = cases
        .par_iter()
        .map(|(g, ma, mb)| {
            let closed = pws_energy(*g, ma, mb, cfg)?.value;
            let oracle = oracle_pws(*g, ma, mb, &oracle_cfg)?.value;
            Ok((*g, rel(oracle, closed)))
        })
        .collect::<Result<_>>()?;
    let worst = devs.iter().map(|d| d.1).fold(0.0, f64::max);
    Ok((
        worst <= 1e-6,
        format!("{} points (5 per geometry), max relative deviation {worst:.2e}", devs.len()),
    ))
}

fn reflection_equivalence(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let s = MaterialModel::static_alpha(0.01, 1.0)?;
    let lor = MaterialModel::new(Response::LorentzAlpha { a0: 0.01, u_res: 1.0 }, 1.0)?;
    let lor_eps = MaterialModel::new(Response::LorentzEps { eps0: 3.0, u_res: 2.0 }, 1.0)?;
    let cases = [(s, 1.0, 1.0), (s, 0.5, 3.0), (lor, 1.0, 1.0), (lor, 2.0, 0.3), (lor_eps, 0.5, 1.0)];
    let mut worst: f64 = 0.0;
    for (m, l, e) in cases {
        let direct = pws_atom_slab(&m, &s, l, e, cfg)?.value;
        let via = pws_via_reflection(&m, &s, l, e, cfg)?.value;
        worst = worst.max(rel(via, direct));
    }
    Ok((worst <= 1e-8, format!("{} cases (static and Lorentz), max relative deviation {worst:.2e}", cases.len())))
}

fn dilute_equivalence(_cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let x = 1e-3;
    let eps = 1.0 + x;
    let alpha = x / (4.0 * PI);
    let m = MaterialModel::static_alpha(alpha, 1.0)?;
    let mut worst: f64 = 0.0;
    for u in [0.05, 0.3, 1.0, 3.0, 10.0] {
        for s in [1.0, 1.2, 2.0, 5.0, 20.0] {
            let w = WaveParams::new(u, u * s)?;
            for e in [0.1, 1.0, 10.0] {
                for p in Polarization::BOTH {
                    let exact = slab_reflection_exact(eps, w, e, p);
                    let summed = slab_reflection_summed(&m, w, e, p)?;
                    worst = worst.max(rel(summed, exact));
                }
            }
        }
    }
    // First-order coefficients against central differences in the thickness.
    let mut fd_worst: f64 = 0.0;
    let eps_thin = 3.0;
    for (u, kappa) in [(0.3, 0.5), (1.0, 1.0), (0.2, 3.0), (2.0, 2.5)] {
        let w = WaveParams::new(u, kappa)?;
        let h = 1e-5 / kappa;
        for p in Polarization::BOTH {
            let fd = (slab_reflection_exact(eps_thin, w, h, p) - slab_reflection_exact(eps_thin, w, -h, p)) / (2.0 * h);
            let closed = thin_slab_first_order(ThinSlabSource::Exact { eps: eps_thin }, w, 1.0, p);
            fd_worst = fd_worst.max(rel(fd, closed));
            let dense = MaterialModel::static_alpha(0.05, 2.0)?;
            let fd = (slab_reflection_summed(&dense, w, h, p)? - slab_reflection_summed(&dense, w, -h, p)?) / (2.0 * h);
            let closed = thin_slab_first_order(ThinSlabSource::Summed { number_density: 2.0, alpha: 0.05 }, w, 1.0, p);
            fd_worst = fd_worst.max(rel(fd, closed));
        }
    }
    Ok((
        worst <= 1e-3 && fd_worst <= 1e-8,
        format!("5x5x3 grid, max relative gap {worst:.2e}; thin-slab expansions vs finite differences {fd_worst:.2e}"),
    ))
}

fn special_functions(_cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let j0 = primitive(PrimitiveKind::J, 0.0)?;
    let j_ok = j0 == -23.0 / 15.0;
    let mut chain_worst: f64 = 0.0;
    for kind in &PrimitiveKind::ALL[..6] {
        for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let dev = primitive_chain_check(*kind, x, x * 1e-3)?;
            chain_worst = chain_worst.max((dev / primitive(*kind, x)?).abs());
        }
    }
    let mut tail: f64 = 0.0;
    for kind in PrimitiveKind::ALL {
        tail = tail.max(primitive(kind, 100.0)?.abs());
    }
    Ok((
        j_ok && chain_worst <= 1e-6 && tail < 1e-40,
        format!("j(0) = {j0:.16}; derivative chain max rel dev {chain_worst:.2e}; max |prim(100)| = {tail:.2e}"),
    ))
}

fn sphere_anchors(cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let (a, n) = (0.01, 1.0);
    let m = MaterialModel::static_alpha(a, n)?;
    let mut closed_worst: f64 = 0.0;
    for (lc, r) in [(2.0f64, 1.0f64), (1.05, 1.0), (4.0, 1.5), (10.0, 0.1)] {
        let q = pws_sphere_plate(&m, &m, lc, r, cfg)?.value;
        let s = lc * lc - r * r;
        let closed = -23.0 / 30.0 * PI * r.powi(3) * n * n * a * a / (s * s);
        closed_worst = closed_worst.max(rel(q, closed));
    }
    let (lc, r) = (1.0, 1e-4);
    let sphere = pws_sphere_plate(&m, &m, lc, r, cfg)?.value;
    let atom = pws_atom_plate(&m, &m, lc, cfg)?.value;
    let point = sphere / (4.0 / 3.0 * PI * r.powi(3) * n * atom);
    let lr = pws_long_range(GeometrySpec::SpherePlate { l_center: lc, radius: r }, &m, &m)?.value;
    let small = ratio_sphere_pws_limits(&MaterialModel::perfect_mirror(), 1e4, cfg)?.ratio.unwrap_or(f64::NAN);
    let ok = closed_worst <= 1e-10 && (point - 1.0).abs() <= 1e-6 && rel(lr, sphere) <= 1e-10
        && (small - 23.0 / 30.0).abs() <= 1e-5;
    Ok((
        ok,
        format!(
            "closed form max rel dev {closed_worst:.2e}; R->0 sphere/(volume x atom) = {point:.9}; small perfect-mirror sphere ratio {small:.6}"
        ),
    ))
}
