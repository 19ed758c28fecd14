//! The six batch commands. Each returns a JSON report and an optional CSV
//! sidecar; nothing here touches the file system except matrix export.

use crate::scenario::{Scenario, VariantSpec};
use qlevy::algebra::{reduce, relation_catalog, AlgElt, GenSym, Variant};
use qlevy::gauss::{gaussian_functional, no_gc_witness, recover_params, k3_battery};
use qlevy::hopf::{gram, is_generating, k1_battery, min_eig, ConvExpConfig, ConvSemigroup, Functional};
use qlevy::repkit::export::write_binary;
use qlevy::repkit::{decompose, eigen_one_symmetry, maximal_gaussian_subspace, projector_distance, MatRep, C, DEEP};
use qlevy::schurmann::plimit::core_mask;
use qlevy::schurmann::{
    cocycle_from_eta_nn, counterexample_n3, hunt_decompose, HuntDecomposition, HuntOptions, Method, PsiExact, PsiPLimit,
    Schedule,
};
use qlevy::uqn::{lift_rep, uq_hunt, uq_no_gc_witness};
use qlevy::{QError, QResult};
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

pub struct Output {
    pub report: Value,
    pub csv: Option<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// `index,element,re,im` per battery element.
fn psi_csv(battery: &[AlgElt], vals: &[C]) -> String {
    let mut s = String::from("index,element,re,im\n");
    for (i, (a, v)) in battery.iter().zip(vals).enumerate() {
        writeln!(s, "{},{},{:e},{:e}", i, quote(&a.to_string()), v.re, v.im).unwrap();
    }
    s
}

fn eval_all(psi: &Functional, battery: &[AlgElt]) -> Vec<C> {
    qlevy::par::map(battery, |a| psi.eval(a))
}

fn sanitize(g: GenSym) -> String {
    g.to_string().chars().filter(|c| c.is_ascii_alphanumeric() || *c == '*').map(|c| if c == '*' { 's' } else { c }).collect()
}

/// Scenario representation, or the SU_q(2) irrep of size `dim` (block
/// embedded at the top-left corner for N > 2).
fn rep_or_default(sc: &Scenario) -> QResult<MatRep> {
    if let Some(r) = sc.build_rep()? {
        return Ok(r);
    }
    let q0 = sc.q0()?;
    let rho = MatRep::suq2_irrep(sc.dim.unwrap_or(64), q0)?;
    let ctx = sc.ctx();
    match ctx.variant {
        Variant::SUq if ctx.n == 2 => Ok(rho),
        Variant::SUq => MatRep::block_embed(&rho, ctx.n, 0),
        _ => rho.pullback(&qlevy::hopf::Morphism::t_breve(2)?).and_then(|r| {
            if ctx.n == 2 {
                Ok(r)
            } else {
                Err(QError::Precondition("U_q scenarios need an explicit rep".into()))
            }
        }),
    }
}

pub fn check_relations(sc: &Scenario, out: &Path) -> QResult<Output> {
    let ctx = sc.ctx();
    let cat = relation_catalog(ctx);
    let failing: Vec<String> = qlevy::par::map(&cat, |r| match reduce(&r.elt) {
        Ok(x) if x.is_zero() => None,
        _ => Some(r.name.clone()),
    })
    .into_iter()
    .flatten()
    .collect();
    let pi = rep_or_default(sc)?;
    let res = pi.relation_residuals()?;
    let max_interior = res.iter().map(|r| r.interior).fold(0.0, f64::max);
    let max_full = res.iter().map(|r| r.full).fold(0.0, f64::max);
    let mut csv = String::from("relation,degree,interior,full\n");
    for r in &res {
        writeln!(csv, "{},{},{:e},{:e}", quote(&r.name), r.degree, r.interior, r.full).unwrap();
    }
    let mut exported = Vec::new();
    if sc.export_matrices {
        let dir = out.join("matrices");
        std::fs::create_dir_all(&dir).map_err(|e| QError::Precondition(e.to_string()))?;
        for g in pi.ctx.generators(false) {
            let name = format!("{}.bin", sanitize(g));
            let f = std::fs::File::create(dir.join(&name)).map_err(|e| QError::Precondition(e.to_string()))?;
            write_binary(std::io::BufWriter::new(f), &pi.image(g).to_dense()).map_err(|e| QError::Precondition(e.to_string()))?;
            exported.push(format!("matrices/{}", name));
        }
    }
    Ok(Output {
        report: json!({
            "command": "check-relations",
            "context": ctx.to_string(),
            "symbolic": { "relations": cat.len(), "failing": failing },
            "representation": { "tag": pi.tag, "dim": pi.dim, "max_generator_norm": pi.max_generator_norm() },
            "max_interior_residual": max_interior,
            "max_full_residual": max_full,
            "residuals": to_value(&res),
            "exported": exported,
        }),
        csv: Some(csv),
    })
}

pub fn gauss(sc: &Scenario) -> QResult<Output> {
    let ctx = sc.ctx();
    let q0 = sc.q0()?;
    let tol = sc.tol();
    if sc.gauss.is_none() {
        return Err(QError::Precondition("the gauss command needs a [gauss] table".into()));
    }
    let p = sc.gauss_params();
    let psi = gaussian_functional(ctx, q0, &p)?;
    let back = recover_params(&psi, tol)?;
    let mut err = 0.0f64;
    for (a, b) in p.r.iter().zip(&back.r) {
        err = err.max((a - b).abs());
    }
    for (ra, rb) in p.rr.iter().zip(&back.rr) {
        for (a, b) in ra.iter().zip(rb) {
            err = err.max((a - b).abs());
        }
    }
    let k3 = k3_battery(ctx);
    let k3_max = qlevy::par::map(&k3, |a| psi.eval(a).norm()).into_iter().fold(0.0, f64::max);
    let battery = k1_battery(ctx, &sc.battery_spec())?;
    let vals = eval_all(&psi, &battery);
    let gen = is_generating(&psi, &battery, tol);
    let witness = match ctx.variant {
        Variant::SUq if ctx.n >= 3 => Some(no_gc_witness(ctx.n)?.1),
        Variant::Uq if ctx.n >= 2 => Some(uq_no_gc_witness(ctx.n)?),
        _ => None,
    };
    Ok(Output {
        report: json!({
            "command": "gauss",
            "context": ctx.to_string(),
            "params": to_value(&p),
            "recovered": to_value(&back),
            "roundtrip_error": err,
            "k3_max": k3_max,
            "generating": to_value(&gen),
            "no_gc_witness": witness.as_ref().map(|w| json!({
                "hermitian": w.hermitian,
                "max_imag": w.max_imag,
                "gram_re": w.gram_re,
                "gram_im": w.gram_im,
            })),
        }),
        csv: Some(psi_csv(&battery, &vals)),
    })
}

pub fn decompose_cmd(sc: &Scenario) -> QResult<Output> {
    let pi = sc.build_rep()?.ok_or_else(|| QError::Precondition("the decompose command needs a [rep] table".into()))?;
    let tol = sc.tol();
    let work = if sc.variant == VariantSpec::Uq { lift_rep(&pi)? } else { pi };
    let d = decompose(&work, tol)?;
    let g = maximal_gaussian_subspace(&work, tol);
    let lvl1 = d.level(1).map(|l| projector_distance(&g, &l.basis));
    let levels: Vec<Value> = d
        .levels
        .iter()
        .map(|l| json!({ "n": l.n, "dim": l.basis.ncols(), "injectivity": l.injectivity }))
        .collect();
    let mut csv = String::from("level,dim,injectivity\n");
    for l in &d.levels {
        writeln!(csv, "{},{},{}", l.n, l.basis.ncols(), l.injectivity.map(|x| format!("{:e}", x)).unwrap_or_default()).unwrap();
    }
    Ok(Output {
        report: json!({
            "command": "decompose",
            "context": work.ctx.to_string(),
            "dim": work.dim,
            "dims": to_value(&d.dims()),
            "levels": levels,
            "diagnostics": to_value(&d.diagnostics),
            "gaussian_subspace_dim": g.ncols(),
            "gaussian_vs_level_one": lvl1,
            "eigen_one_symmetry": eigen_one_symmetry(&work, tol),
        }),
        csv: Some(csv),
    })
}

/// The pipeline shared by `hunt` and `semigroup`; returns the decomposition
/// on the working group and the functional on the scenario group.
fn run_hunt(sc: &Scenario) -> QResult<(HuntDecomposition, Functional, Option<f64>)> {
    let q0 = sc.q0()?;
    let pi = sc.build_rep()?;
    let spec = match &pi {
        Some(p) => sc.eta_spec(p.dim)?,
        None if sc.levels.is_empty() => Default::default(),
        None => return Err(QError::Precondition("levels given without a [rep] table".into())),
    };
    let opts = HuntOptions { tol: sc.tol(), method: sc.method(), sched: sc.schedule() };
    let g = sc.gauss_params();
    match sc.variant {
        VariantSpec::Suq => {
            let h = hunt_decompose(sc.ctx(), q0, pi.as_ref(), &spec, &g, &opts)?;
            let psi = h.psi.clone();
            Ok((h, psi, None))
        }
        VariantSpec::Uq => {
            let h = uq_hunt(sc.n, q0, pi.as_ref(), &spec, &g, &opts)?;
            Ok((h.lifted, h.psi, Some(h.kernel_residual)))
        }
    }
}

#[derive(Serialize)]
struct RouteReport {
    n: usize,
    core: Option<u32>,
    cocycle_distance: Option<f64>,
    psi_distance: Option<f64>,
    error: Option<String>,
}

/// Closed form against p-limit for one level: cocycle values on the core and
/// psi on centered words of degree 1 and 2.
fn route_agreement(h: &HuntDecomposition, sched: &Schedule) -> Vec<RouteReport> {
    h.levels
        .iter()
        .map(|l| {
            let run = || -> QResult<(u32, f64, f64)> {
                let pi = l.eta.pi.clone();
                let top = l.eta.value(GenSym::u(l.n, l.n)).clone();
                let (cf, pl) = (
                    cocycle_from_eta_nn(pi.clone(), &top, Method::ClosedForm, sched)?,
                    cocycle_from_eta_nn(pi.clone(), &top, Method::PLimit, sched)?,
                );
                // truncation corners differ between the routes; compare on
                // the deeper half unless a core is configured
                let top_depth = pi.depth.iter().cloned().filter(|&d| d != DEEP).max().unwrap_or(0);
                let core = sched.core.unwrap_or(top_depth / 2);
                let mask = core_mask(&pi.depth, Some(core)).unwrap();
                let cd = cf.max_distance_on(&pl, Some(&mask));
                let ex = PsiExact::new(Arc::new(cf));
                let pp = PsiPLimit::from_top(pi.clone(), &top, sched)?;
                let b = k1_battery(pi.ctx, &qlevy::hopf::BatterySpec::new(2))?;
                let mut pd = 0.0f64;
                for a in &b {
                    pd = pd.max((ex.eval(a)? - pp.eval(a)?.value).norm());
                }
                Ok((core, cd, pd))
            };
            match run() {
                Ok((k, c, p)) => RouteReport { n: l.n, core: Some(k), cocycle_distance: Some(c), psi_distance: Some(p), error: None },
                Err(e) => RouteReport { n: l.n, core: None, cocycle_distance: None, psi_distance: None, error: Some(e.to_string()) },
            }
        })
        .collect()
}

pub fn hunt(sc: &Scenario) -> QResult<Output> {
    let tol = sc.tol();
    let (h, psi, kernel_residual) = run_hunt(sc)?;
    let summary = h.summary(sc.living_degree.or(Some(1)), tol)?;
    let work_battery = k1_battery(h.ctx, &sc.battery_spec())?;
    let battery = k1_battery(sc.ctx(), &sc.battery_spec())?;
    let vals = eval_all(&psi, &battery);
    let gen = is_generating(&psi, &battery, tol);
    let routes = route_agreement(&h, &sc.schedule());
    let recovered = recover_params(&h.psi_g, tol).ok();
    Ok(Output {
        report: json!({
            "command": "hunt",
            "context": sc.ctx().to_string(),
            "levels": to_value(&summary),
            "dims": h.decomposition.as_ref().map(|d| to_value(&d.dims())),
            "gauss": to_value(&h.gauss),
            "gauss_recovered": recovered.map(|r| to_value(&r)),
            "generating": to_value(&gen),
            "sum_defect": h.sum_defect(&work_battery),
            "jump_projection_defect": h.jump_projection_defect(&work_battery),
            "kernel_residual": kernel_residual,
            "route_agreement": to_value(&routes),
            "battery_size": battery.len(),
        }),
        csv: Some(psi_csv(&battery, &vals)),
    })
}

pub fn counterexample(sc: &Scenario) -> QResult<Output> {
    let m = sc.dim.unwrap_or(48);
    let sched = match &sc.schedule {
        Some(_) => sc.schedule(),
        None => Schedule { m_min: 6, m_max: 12, tol: 1e-8, core: None },
    };
    let r = counterexample_n3(m, sc.q0()?, &sched)?;
    let mut csv = String::from("m,p,norm,oracle\n");
    for (i, mm) in r.m.iter().enumerate() {
        writeln!(csv, "{},{:e},{:e},{:e}", mm, Schedule::p(*mm), r.norms[i], r.oracle.norms[i]).unwrap();
    }
    let mut report = to_value(&r);
    if let Value::Object(o) = &mut report {
        o.insert("command".into(), json!("counterexample"));
        if let Some(Value::Object(or)) = o.get_mut("oracle") {
            // the per-k sequences are long; keep the summary
            or.remove("x");
            or.remove("partial_sums");
        }
    }
    Ok(Output { report, csv: Some(csv) })
}

pub fn semigroup(sc: &Scenario) -> QResult<Output> {
    let tol = sc.tol();
    let (_, psi, _) = run_hunt(sc)?;
    let ctx = psi.ctx();
    let times = sc.times.clone().unwrap_or_else(|| vec![0.05, 0.1]);
    let battery = k1_battery(ctx, &sc.battery_spec())?;
    let mut gb = vec![AlgElt::one(ctx)];
    gb.extend(k1_battery(ctx, &qlevy::hopf::BatterySpec::new(1))?);
    let sg = Arc::new(ConvSemigroup::new(psi.clone(), ConvExpConfig::default()));
    let mut rows = Vec::new();
    let mut csv = String::from("t,index,element,re,im\n");
    for &t in &times {
        let phi = sg.state(t);
        let one = sg.value(t, &AlgElt::one(ctx))?;
        let half = sg.state(t / 2.0);
        let sq = half.convolve(&half)?;
        let vals = eval_all(&phi, &battery);
        let defect = qlevy::par::map(&battery, |a| (sq.eval(a) - phi.eval(a)).norm()).into_iter().fold(0.0, f64::max);
        let me = min_eig(&gram(&phi, &gb));
        for (i, (a, v)) in battery.iter().zip(&vals).enumerate() {
            writeln!(csv, "{},{},{},{:e},{:e}", t, i, quote(&a.to_string()), v.re, v.im).unwrap();
        }
        rows.push(json!({
            "t": t,
            "phi_one_error": (one - C::new(1.0, 0.0)).norm(),
            "semigroup_defect": defect,
            "gram_min_eig": me,
            "positive": me >= -tol.max(1e-6),
        }));
    }
    let gen = is_generating(&psi, &battery, tol);
    Ok(Output {
        report: json!({
            "command": "semigroup",
            "context": ctx.to_string(),
            "generating": to_value(&gen),
            "times": rows,
            "battery_size": battery.len(),
        }),
        csv: Some(csv),
    })
}
