//! Scenario files (TOML) and their translation into library objects.

use qlevy::algebra::{Ctx, QPoint, Variant};
use qlevy::gauss::GaussParams;
use qlevy::hopf::{BatterySpec, Morphism};
use qlevy::repkit::{MatRep, Vector, C};
use qlevy::schurmann::{EtaSpec, Method, Schedule};
use qlevy::{QError, QResult};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum VariantSpec {
    #[default]
    Suq,
    Uq,
}

/// Representation constructors. `suq2` is an SU_q(2) irrep; `block` places an
/// SU_q(n) representation in rows m+1..m+n of the scenario group.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RepSpec {
    Suq2 { dim: usize },
    Trivial { dim: usize },
    Torus { theta: Vec<f64> },
    Block { m: usize, inner: Box<RepSpec> },
    Conv { left: Box<RepSpec>, right: Box<RepSpec> },
    Sum { parts: Vec<RepSpec> },
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GaussSpec {
    pub r: Vec<f64>,
    #[serde(rename = "R")]
    pub rr: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct BatteryConfig {
    pub max_degree: usize,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig { max_degree: 2, generators: Vec::new(), count: 0, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub m_min: u32,
    pub m_max: u32,
    pub tol: f64,
    #[serde(default)]
    pub core: Option<u32>,
}

/// `eta(u_nn)` for one level, in the coordinates of the scenario
/// representation; a list of `[re, im]` pairs, zero-padded to its dimension.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct LevelSpec {
    pub n: usize,
    pub eta: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    #[default]
    ClosedForm,
    Plimit,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub variant: VariantSpec,
    #[serde(rename = "N")]
    pub n: usize,
    /// Rational deformation parameter in (0, 1), e.g. "1/2".
    #[serde(default = "default_q")]
    pub q: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub gauss: Option<GaussSpec>,
    #[serde(default)]
    pub rep: Option<RepSpec>,
    #[serde(default)]
    pub levels: Vec<LevelSpec>,
    #[serde(default)]
    pub battery: BatteryConfig,
    #[serde(default)]
    pub schedule: Option<ScheduleConfig>,
    #[serde(default)]
    pub method: MethodSpec,
    /// Truncation size for `counterexample` and the default `check-relations` irrep.
    #[serde(default)]
    pub dim: Option<usize>,
    /// Times for `semigroup`.
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    /// Degree of the living-on check in `hunt`.
    #[serde(default)]
    pub living_degree: Option<usize>,
    /// Also write the generator matrices (binary) in `check-relations`.
    #[serde(default)]
    pub export_matrices: bool,
}

fn default_q() -> String {
    "1/2".into()
}

pub fn schema_json() -> String {
    serde_json::to_string_pretty(&schemars::schema_for!(Scenario)).expect("schema serializes")
}

/// Command line overrides.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub dim: Option<usize>,
}

impl Scenario {
    pub fn load(path: &Path) -> QResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| QError::Precondition(format!("{}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> QResult<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| QError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = Some(s);
        }
        if let Some(t) = o.tol {
            self.tol = Some(t);
        }
        if let Some(d) = o.dim {
            self.dim = Some(d);
        }
    }

    fn validate(&self) -> QResult<()> {
        let min = if self.variant == VariantSpec::Uq { 1 } else { 2 };
        if self.n < min || self.n > 6 {
            return Err(QError::Precondition(format!("N = {} out of range", self.n)));
        }
        self.q0()?;
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(QError::Precondition(format!("tol must be positive, got {}", t)));
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> Ctx {
        match self.variant {
            VariantSpec::Suq => Ctx::new(self.n, Variant::SUq),
            VariantSpec::Uq => Ctx::uq(self.n),
        }
    }

    /// Context the numerical pipeline runs in (U_q(N) goes through SU_q(N+1)).
    pub fn work_ctx(&self) -> Ctx {
        match self.variant {
            VariantSpec::Suq => self.ctx(),
            VariantSpec::Uq => Ctx::suq(self.n + 1),
        }
    }

    pub fn q0(&self) -> QResult<QPoint> {
        QPoint::parse(&self.q)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(1e-8)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(self.battery.seed)
    }

    pub fn battery_spec(&self) -> BatterySpec {
        BatterySpec {
            max_degree: self.battery.max_degree,
            generators: self.battery.generators.clone(),
            count: self.battery.count,
            seed: self.seed(),
        }
    }

    pub fn schedule(&self) -> Schedule {
        match &self.schedule {
            Some(s) => Schedule { m_min: s.m_min, m_max: s.m_max, tol: s.tol, core: s.core },
            None => Schedule::default(),
        }
    }

    pub fn method(&self) -> Method {
        match self.method {
            MethodSpec::ClosedForm => Method::ClosedForm,
            MethodSpec::Plimit => Method::PLimit,
        }
    }

    /// Gaussian parameters; zero when absent.
    pub fn gauss_params(&self) -> GaussParams {
        let d = qlevy::hopf::directions(self.work_ctx()).count();
        match &self.gauss {
            Some(g) => GaussParams { r: g.r.clone(), rr: g.rr.clone() },
            None => GaussParams { r: vec![0.0; d], rr: vec![vec![0.0; d]; d] },
        }
    }

    pub fn build_rep(&self) -> QResult<Option<MatRep>> {
        let spec = match &self.rep {
            Some(s) => s,
            None => return Ok(None),
        };
        let q0 = self.q0()?;
        let ctx = self.ctx();
        let rep = to_scenario(build(spec, ctx, &q0)?, ctx)?;
        if rep.ctx != ctx {
            return Err(QError::ContextMismatch(format!("representation of {} in a {} scenario", rep.ctx, ctx)));
        }
        Ok(Some(rep))
    }

    /// Level data in the coordinates of a representation of dimension `dim`.
    pub fn eta_spec(&self, dim: usize) -> QResult<EtaSpec> {
        let mut per_level = BTreeMap::new();
        for l in &self.levels {
            if l.eta.len() > dim {
                return Err(QError::Precondition(format!("eta for level {} has {} entries, representation has {}", l.n, l.eta.len(), dim)));
            }
            let mut v = Vector::from_element(dim, C::new(0.0, 0.0));
            for (i, [re, im]) in l.eta.iter().enumerate() {
                v[i] = C::new(*re, *im);
            }
            if per_level.insert(l.n, v).is_some() {
                return Err(QError::Precondition(format!("level {} given twice", l.n)));
            }
        }
        Ok(EtaSpec { per_level })
    }
}

/// SU_q(N) representations in a U_q(N) scenario are pulled back along `Dinv -> 1`.
fn to_scenario(rep: MatRep, ctx: Ctx) -> QResult<MatRep> {
    if ctx.variant == Variant::Uq && rep.ctx == Ctx::suq(ctx.n) {
        rep.pullback(&Morphism::t_breve(ctx.n)?)
    } else {
        Ok(rep)
    }
}

fn build(spec: &RepSpec, ctx: Ctx, q0: &QPoint) -> QResult<MatRep> {
    match spec {
        RepSpec::Suq2 { dim } => MatRep::suq2_irrep(*dim, q0.clone()),
        RepSpec::Trivial { dim } => Ok(MatRep::trivial(ctx, q0.clone(), *dim)),
        RepSpec::Torus { theta } => MatRep::torus_char(ctx, q0.clone(), theta),
        RepSpec::Block { m, inner } => {
            let inner = build(inner, ctx, q0)?;
            MatRep::block_embed(&inner, ctx.n, *m)
        }
        RepSpec::Conv { left, right } => {
            MatRep::conv_product(&to_scenario(build(left, ctx, q0)?, ctx)?, &to_scenario(build(right, ctx, q0)?, ctx)?)
        }
        RepSpec::Sum { parts } => {
            let ps = parts.iter().map(|p| to_scenario(build(p, ctx, q0)?, ctx)).collect::<QResult<Vec<_>>>()?;
            MatRep::direct_sum(&ps)
        }
    }
}
