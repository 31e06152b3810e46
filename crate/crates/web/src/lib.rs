//! Browser bindings. Every export takes and returns JSON text so the page
//! needs no generated glue beyond `wasm-bindgen`'s string passing.
//!
//! Replies are `{"ok": true, ...}` or `{"ok": false, "error": "..."}`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use betajack::ensembles::{moment, negative_moment, secular_mean, EnsembleKind, EnsembleSpec};
use betajack::jack::{engine, Basis};
use betajack::sampler::{compare, Method, SamplerConfig, Target};
use betajack::{Error, Partition, Rational};

/// Ensemble parameters as sent by the page. Numbers are rational strings.
#[derive(Debug, Deserialize)]
pub struct EnsembleParams {
    pub ensemble: EnsembleKind,
    pub n: usize,
    pub alpha: String,
    #[serde(default)]
    pub gamma: Option<String>,
    #[serde(default)]
    pub gamma1: Option<String>,
    #[serde(default)]
    pub gamma2: Option<String>,
}

fn q(s: &str) -> Result<Rational, Error> {
    s.trim().parse()
}

fn need(v: &Option<String>, name: &str) -> Result<Rational, Error> {
    q(v.as_deref().ok_or_else(|| Error::Domain(format!("{name} is required")))?)
}

impl EnsembleParams {
    pub fn spec(&self) -> Result<EnsembleSpec, Error> {
        let a = q(&self.alpha)?;
        match self.ensemble {
            EnsembleKind::Gaussian => EnsembleSpec::gaussian(self.n, a),
            EnsembleKind::Laguerre => EnsembleSpec::laguerre(self.n, a, need(&self.gamma, "gamma")?),
            EnsembleKind::Jacobi => {
                EnsembleSpec::jacobi(self.n, a, need(&self.gamma1, "gamma1")?, need(&self.gamma2, "gamma2")?)
            }
        }
    }
}

fn reply(r: Result<Value, Error>) -> String {
    let v = match r {
        Ok(Value::Object(mut m)) => {
            m.insert("ok".into(), json!(true));
            Value::Object(m)
        }
        Ok(other) => json!({ "ok": true, "result": other }),
        Err(e) => json!({ "ok": false, "error": e.to_string() }),
    };
    v.to_string()
}

fn parse<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T, Error> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Deserialize)]
struct MomentsRequest {
    #[serde(flatten)]
    params: EnsembleParams,
    k_max: usize,
    #[serde(default)]
    negative: bool,
}

#[derive(Serialize)]
struct MomentRow {
    k: i64,
    value: Rational,
    approx: f64,
    secular: Option<Rational>,
}

/// Exact `M_1..M_kmax` (or `M_{-1}..M_{-kmax}`) with the secular means.
pub fn moments_table(request: &str) -> String {
    reply((|| {
        let r: MomentsRequest = parse(request)?;
        let spec = r.params.spec()?;
        let mut rows = Vec::new();
        for k in 1..=r.k_max {
            let m = if r.negative { negative_moment(k, &spec, None)? } else { moment(k, &spec)? };
            let secular = if r.negative { None } else { Some(secular_mean(k, &spec)?.value) };
            rows.push(MomentRow { k: m.k, approx: m.value.to_f64(), value: m.value, secular });
        }
        Ok(json!({ "ensemble": spec.to_string(), "rows": rows }))
    })())
}

#[derive(Deserialize)]
struct JackRequest {
    lambda: String,
    alpha: String,
    normalization: Basis,
    basis: Basis,
}

/// A Jack polynomial expanded in another basis.
pub fn jack_expansion(request: &str) -> String {
    reply((|| {
        let r: JackRequest = parse(request)?;
        if !r.normalization.is_jack() {
            return Err(Error::Domain("normalization must be jackP, jackJ or jackC".into()));
        }
        let lambda: Partition = r.lambda.parse()?;
        let e = engine(&q(&r.alpha)?)?;
        let f = e.convert(&e.jack_element(&lambda, r.normalization), r.basis)?;
        let terms: Vec<Value> = f
            .terms()
            .map(|(mu, c)| json!({ "label": format!("{}{mu}", r.basis.symbol()), "coeff": c }))
            .collect();
        Ok(json!({ "title": format!("{}_{lambda}", r.normalization.symbol()), "terms": terms }))
    })())
}

#[derive(Deserialize)]
struct CompareRequest {
    #[serde(flatten)]
    params: EnsembleParams,
    targets: String,
    #[serde(default = "default_steps")]
    steps: usize,
    #[serde(default = "default_seed")]
    seed: u64,
}

fn default_steps() -> usize {
    20_000
}

fn default_seed() -> u64 {
    42
}

/// Metropolis estimates next to the exact values.
pub fn sampler_vs_exact(request: &str) -> String {
    reply((|| {
        let r: CompareRequest = parse(request)?;
        let spec = r.params.spec()?;
        let targets = Target::parse_list(&r.targets)?;
        if r.steps > 2_000_000 {
            return Err(Error::Domain("at most 2000000 steps per chain in the browser".into()));
        }
        let config = SamplerConfig {
            chains: 2,
            steps_per_chain: r.steps,
            burn_in: 2_000,
            master_seed: r.seed,
            method: Method::Metropolis,
            ..SamplerConfig::default()
        };
        let report = compare(&spec, &targets, &config)?;
        Ok(json!({ "ensemble": spec.to_string(), "passed": report.passed(), "report": report }))
    })())
}

#[wasm_bindgen(js_name = momentsTable)]
pub fn moments_table_js(request: &str) -> String {
    moments_table(request)
}

#[wasm_bindgen(js_name = jackExpansion)]
pub fn jack_expansion_js(request: &str) -> String {
    jack_expansion(request)
}

#[wasm_bindgen(js_name = samplerVsExact)]
pub fn sampler_vs_exact_js(request: &str) -> String {
    sampler_vs_exact(request)
}
