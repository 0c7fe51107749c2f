//! Instance documents, check orchestration, and report emission.
//!
//! An instance document is JSON with a `p` moment source, an optional `q`
//! source, the relation tables, and an optional config block:
//!
//! ```json
//! {
//!   "p": {"type": "family", "name": "chebyshev_t"},
//!   "q": {"type": "family", "name": "chebyshev_u"},
//!   "relation": {"N": 0, "M": 2, "r": {}, "s": {"1": ["0", ...], "2": ["0", "0", "-1/4", ...]}},
//!   "config": {"n_max": 12, "horizon": 30, "checks": ["initial", "inverse"]}
//! }
//! ```
//!
//! Sources: `{"type":"family","name":...,"alpha":...,"beta":...}`,
//! `{"type":"moments","moments":[...]}`, or
//! `{"type":"recurrence","beta":[...],"gamma":[...]}`. Relation tables are
//! keyed by the lag `i` as a string, one coefficient per `n` starting at
//! `n = 0`, and must reach `n_max`.

use std::collections::BTreeMap;

use num::Zero;
use serde::Deserialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::rational::{self, Rational};
use crate::functionals::MomentFunctional;
use crate::inverse;
use crate::mops::{ClassicalFamily, Mops, RecurrenceCoeffs};
use crate::ortho;
use crate::relation::{
    lemma_residuals_a, lemma_residuals_b, RelationInstance, StructureRelation, VOrigin,
};
use crate::report::{
    rational_strings, CheckResult, CheckStatus, InstanceSummary, PipelineReport, Witness,
};

/// The selectable checks, in pipeline order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CheckKind {
    Initial,
    LemmaDets,
    Inverse,
    Constancy,
    Nonvanishing,
    Uniqueness,
    Prop31,
    Prop32,
    Thm33,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Initial,
        CheckKind::LemmaDets,
        CheckKind::Inverse,
        CheckKind::Constancy,
        CheckKind::Nonvanishing,
        CheckKind::Uniqueness,
        CheckKind::Prop31,
        CheckKind::Prop32,
        CheckKind::Thm33,
    ];

    /// The functional-relation half of the pipeline.
    pub const INVERSE_SET: [CheckKind; 6] = [
        CheckKind::Initial,
        CheckKind::LemmaDets,
        CheckKind::Inverse,
        CheckKind::Constancy,
        CheckKind::Nonvanishing,
        CheckKind::Uniqueness,
    ];

    /// The orthogonality-characterization half.
    pub const ORTHO_SET: [CheckKind; 3] = [CheckKind::Prop31, CheckKind::Prop32, CheckKind::Thm33];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Initial => "initial",
            CheckKind::LemmaDets => "lemma_dets",
            CheckKind::Inverse => "inverse",
            CheckKind::Constancy => "constancy",
            CheckKind::Nonvanishing => "nonvanishing",
            CheckKind::Uniqueness => "uniqueness",
            CheckKind::Prop31 => "prop31",
            CheckKind::Prop32 => "prop32",
            CheckKind::Thm33 => "thm33",
        }
    }

    pub fn parse(name: &str) -> Result<CheckKind> {
        CheckKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::SchemaError {
                path: "config.checks".into(),
                message: format!("unknown check {name:?}"),
            })
    }
}

/// Pipeline configuration after defaults and overrides.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PipelineConfig {
    pub n_max: usize,
    /// Moment horizon for the `u` side (`2 n_max + N + M + 2` by default).
    pub horizon: usize,
    pub checks: Vec<CheckKind>,
}

/// CLI-level overrides applied on top of the document's config block.
#[derive(Clone, Default, Debug)]
pub struct Overrides {
    pub n_max: Option<usize>,
    pub horizon: Option<usize>,
    pub checks: Option<Vec<CheckKind>>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum SourceDoc {
    Family {
        name: String,
        #[serde(default)]
        alpha: Option<String>,
        #[serde(default)]
        beta: Option<String>,
    },
    Moments {
        moments: Vec<String>,
    },
    Recurrence {
        beta: Vec<String>,
        gamma: Vec<String>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(default)]
    r: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    s: BTreeMap<String, Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    n_max: Option<usize>,
    horizon: Option<usize>,
    checks: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    p: SourceDoc,
    #[serde(default)]
    q: Option<SourceDoc>,
    relation: RelationDoc,
    #[serde(default)]
    config: Option<ConfigDoc>,
}

fn schema_err(path: &str, message: impl Into<String>) -> Error {
    Error::SchemaError {
        path: path.into(),
        message: message.into(),
    }
}

fn parse_rational_at(path: &str, index: usize, s: &str) -> Result<Rational> {
    rational::parse(s).map_err(|e| schema_err(&format!("{path}[{index}]"), e.to_string()))
}

fn parse_rational_list(path: &str, values: &[String]) -> Result<Vec<Rational>> {
    values
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational_at(path, i, s))
        .collect()
}

impl SourceDoc {
    fn describe(&self) -> String {
        match self {
            SourceDoc::Family { name, alpha, beta } => {
                let mut s = format!("family:{name}");
                if let Some(a) = alpha {
                    s.push_str(&format!(" alpha={a}"));
                }
                if let Some(b) = beta {
                    s.push_str(&format!(" beta={b}"));
                }
                s
            }
            SourceDoc::Moments { moments } => format!("moments[{}]", moments.len()),
            SourceDoc::Recurrence { beta, .. } => format!("recurrence[{}]", beta.len()),
        }
    }

    /// Builds the functional, aiming for truncation depth `horizon` (moment
    /// lists may provide less; generated sources provide exactly it).
    fn build(&self, path: &str, horizon: usize) -> Result<MomentFunctional> {
        match self {
            SourceDoc::Family { name, alpha, beta } => {
                let family = family_by_name(path, name, alpha.as_deref(), beta.as_deref())?;
                MomentFunctional::new_normalized(family.moments(horizon)?)
            }
            SourceDoc::Moments { moments } => {
                let values = parse_rational_list(&format!("{path}.moments"), moments)?;
                MomentFunctional::new_normalized(values)
            }
            SourceDoc::Recurrence { beta, gamma } => {
                let betas = parse_rational_list(&format!("{path}.beta"), beta)?;
                let gammas = parse_rational_list(&format!("{path}.gamma"), gamma)?;
                let rc = RecurrenceCoeffs::new(betas, gammas)?;
                let depth = horizon.min(rc.len());
                let moments = crate::mops::moments_from_recurrence(&rc, depth)?;
                MomentFunctional::new_normalized(moments)
            }
        }
    }
}

/// Resolves a family name plus optional rational parameters.
pub fn family_by_name(
    path: &str,
    name: &str,
    alpha: Option<&str>,
    beta: Option<&str>,
) -> Result<ClassicalFamily> {
    let parse_param = |label: &str, value: Option<&str>| -> Result<Option<Rational>> {
        value
            .map(|s| {
                rational::parse(s)
                    .map_err(|e| schema_err(&format!("{path}.{label}"), e.to_string()))
            })
            .transpose()
    };
    let alpha = parse_param("alpha", alpha)?;
    let beta = parse_param("beta", beta)?;
    match name {
        "legendre" => Ok(ClassicalFamily::Legendre),
        "chebyshev_t" => Ok(ClassicalFamily::ChebyshevT),
        "chebyshev_u" => Ok(ClassicalFamily::ChebyshevU),
        "jacobi" => {
            let alpha = alpha.ok_or_else(|| schema_err(path, "jacobi needs alpha"))?;
            let beta = beta.ok_or_else(|| schema_err(path, "jacobi needs beta"))?;
            Ok(ClassicalFamily::Jacobi { alpha, beta })
        }
        "laguerre" => {
            let alpha = alpha.ok_or_else(|| schema_err(path, "laguerre needs alpha"))?;
            Ok(ClassicalFamily::Laguerre { alpha })
        }
        "hermite" => Ok(ClassicalFamily::Hermite),
        other => Err(schema_err(path, format!("unknown family {other:?}"))),
    }
}

fn parse_table(
    path: &str,
    window: usize,
    table: &BTreeMap<String, Vec<String>>,
    n_max: usize,
) -> Result<Vec<Vec<Rational>>> {
    let mut rows = Vec::with_capacity(window);
    for i in 1..=window {
        let key = i.to_string();
        let row = table
            .get(&key)
            .ok_or_else(|| schema_err(&format!("{path}.{key}"), "missing table row"))?;
        if row.len() < n_max + 1 {
            return Err(Error::InsufficientCoefficients {
                what: "relation table row",
                needed: n_max,
                available: row.len().saturating_sub(1),
            });
        }
        let mut parsed = parse_rational_list(&format!("{path}.{key}"), row)?;
        parsed.truncate(n_max + 1);
        rows.push(parsed);
    }
    for key in table.keys() {
        let idx: usize = key
            .parse()
            .map_err(|_| schema_err(&format!("{path}.{key}"), "row key must be an integer"))?;
        if idx == 0 || idx > window {
            return Err(schema_err(
                &format!("{path}.{key}"),
                format!("row index out of window 1..={window}"),
            ));
        }
    }
    Ok(rows)
}

/// Parses an instance document, applies config defaults and overrides, and
/// builds the full relation instance (P MOPS, R, Q, and the `v` side when it
/// is given or derivable).
pub fn parse_instance(
    document: &str,
    overrides: &Overrides,
) -> Result<(RelationInstance, PipelineConfig, InstanceSummary)> {
    let doc: InstanceDoc = serde_json::from_str(document)
        .map_err(|e| schema_err("$", e.to_string()))?;
    let cfg_doc = doc.config.unwrap_or_default();
    let (n_w, m_w) = (doc.relation.n, doc.relation.m);

    let n_max = overrides.n_max.or(cfg_doc.n_max).unwrap_or(12);
    if n_max < n_w + m_w + 2 {
        return Err(schema_err(
            "config.n_max",
            format!("n_max must be at least N + M + 2 = {}", n_w + m_w + 2),
        ));
    }
    let horizon = overrides
        .horizon
        .or(cfg_doc.horizon)
        .unwrap_or(2 * n_max + n_w + m_w + 2);
    if horizon < 2 * n_max {
        return Err(schema_err(
            "config.horizon",
            format!("horizon must be at least 2 n_max = {}", 2 * n_max),
        ));
    }
    let checks = match (&overrides.checks, &cfg_doc.checks) {
        (Some(c), _) => c.clone(),
        (None, Some(names)) => names
            .iter()
            .map(|s| CheckKind::parse(s))
            .collect::<Result<Vec<_>>>()?,
        (None, None) => CheckKind::ALL.to_vec(),
    };

    let u = doc.p.build("p", horizon)?;
    if u.truncation() < 2 * n_max {
        return Err(Error::TruncationExceeded {
            needed: 2 * n_max,
            available: u.truncation(),
        });
    }
    // regularity is certified, never assumed: the Hankel certificate here,
    // the nonzero-norm route inside the orthogonalization below
    let cert = u.hankel_regular(n_max)?;
    if let Some(order) = cert.first_zero() {
        return Err(Error::NotRegular { order });
    }
    let p = Mops::from_functional(u, n_max)?;

    let r_table = parse_table("relation.r", n_w, &doc.relation.r, n_max)?;
    let s_table = parse_table("relation.s", m_w, &doc.relation.s, n_max)?;
    let rel = StructureRelation::new(n_w, m_w, r_table, s_table)?;
    let mut instance = RelationInstance::build(p, rel)?;

    match &doc.q {
        Some(q_source) => {
            let v = q_source.build("q", horizon)?;
            instance.attach_v(v)?;
        }
        None => {
            instance.certify_q_side()?;
        }
    }

    let summary = InstanceSummary {
        n_window: n_w,
        m_window: m_w,
        n_max,
        horizon_u: instance.p().functional().truncation(),
        horizon_v: instance
            .v_side()
            .ok()
            .map(|side| side.functional().truncation()),
        p_source: doc.p.describe(),
        v_status: match instance.v_origin() {
            VOrigin::Given => "given".into(),
            VOrigin::Derived => "derived".into(),
            VOrigin::Unavailable(reason) => format!("unavailable: {reason}"),
        },
    };
    let config = PipelineConfig {
        n_max,
        horizon,
        checks,
    };
    Ok((instance, config, summary))
}

/// Runs the selected checks in dependency order. Nothing is silently
/// skipped: a check whose prerequisite is unmet reports `skipped` with the
/// reason, and any `fail`/`skipped` makes the overall verdict fail.
pub fn run_pipeline(
    inst: &RelationInstance,
    cfg: &PipelineConfig,
    summary: InstanceSummary,
) -> PipelineReport {
    let mut checks = Vec::new();
    // initial-conditions gate shared by the downstream inverse-problem checks
    let ic = inverse::check_initial_conditions(inst);
    let ic_pass = matches!(&ic, Ok(ic) if ic.pass);
    let ic_reason = match &ic {
        Ok(ic) if !ic.pass => "initial conditions fail".to_string(),
        Ok(_) => String::new(),
        Err(e) => format!("initial conditions not evaluable: {e}"),
    };

    for kind in CheckKind::ALL {
        if !cfg.checks.contains(&kind) {
            continue;
        }
        let result = match kind {
            CheckKind::Initial => run_initial(&ic),
            CheckKind::LemmaDets => run_lemma_dets(inst, cfg),
            CheckKind::Inverse => gate(kind, ic_pass, &ic_reason, || run_inverse(inst)),
            CheckKind::Constancy => {
                gate(kind, ic_pass, &ic_reason, || run_constancy(inst, cfg))
            }
            CheckKind::Nonvanishing => {
                gate(kind, ic_pass, &ic_reason, || run_nonvanishing(inst, cfg))
            }
            CheckKind::Uniqueness => run_uniqueness(inst),
            CheckKind::Prop31 => run_prop31(inst, cfg),
            CheckKind::Prop32 => run_prop32(inst, cfg),
            CheckKind::Thm33 => run_thm33(inst),
        };
        checks.push(result);
    }
    let pass = PipelineReport::compute_pass(&checks);
    PipelineReport {
        instance: summary,
        checks,
        pass,
    }
}

fn gate<F>(kind: CheckKind, ic_pass: bool, ic_reason: &str, f: F) -> CheckResult
where
    F: FnOnce() -> CheckResult,
{
    if ic_pass {
        f()
    } else {
        CheckResult::skipped(kind.name(), ic_reason)
    }
}

fn run_initial(ic: &Result<inverse::InitialConditions>) -> CheckResult {
    let name = CheckKind::Initial.name();
    match ic {
        Err(e) => CheckResult::skipped(name, e.to_string()),
        Ok(ic) => {
            let mut r = CheckResult::new(
                name,
                if ic.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
            );
            let fmt = |v: &Option<Rational>| {
                v.as_ref()
                    .map(rational::to_string)
                    .unwrap_or_else(|| "n/a".into())
            };
            r.data = json!({
                "detA": fmt(&ic.det_a),
                "r_lead": fmt(&ic.r_lead),
                "s_lead": fmt(&ic.s_lead),
                "trivial": ic.trivial,
            });
            if !ic.pass {
                if let Some(d) = &ic.det_a {
                    if d.is_zero() {
                        r.witnesses.push(Witness::new("det A").with_value(d));
                    }
                }
                if let Some(v) = &ic.r_lead {
                    if v.is_zero() {
                        r.witnesses.push(Witness::new("r_{N,N+M}").with_value(v));
                    }
                }
                if let Some(v) = &ic.s_lead {
                    if v.is_zero() {
                        r.witnesses.push(Witness::new("s_{M,N+M}").with_value(v));
                    }
                }
            }
            if ic.trivial {
                r.annotations.push("N = M = 0: P = Q forced".into());
            }
            r
        }
    }
}

fn run_lemma_dets(inst: &RelationInstance, cfg: &PipelineConfig) -> CheckResult {
    let name = CheckKind::LemmaDets.name();
    let rel = inst.relation();
    let (n_w, m_w) = (rel.n_window(), rel.m_window());
    if n_w + m_w == 0 {
        return CheckResult::not_applicable(name, "no relation coefficients for N = M = 0");
    }
    let n_from = n_w + m_w;
    let mut witnesses = Vec::new();
    let mut data = serde_json::Map::new();
    let mut failed = false;

    // part (a): needs v (Q orthogonal with respect to it)
    match (n_w, inst.v_side()) {
        (0, _) => {
            data.insert("part_a".into(), json!("not applicable: N = 0"));
        }
        (_, Err(_)) => {
            data.insert("part_a".into(), json!("skipped: v unavailable"));
        }
        (_, Ok(v_side)) => {
            let hi = cfg.n_max.min(v_side.pairing_limit(n_w - 1));
            match lemma_residuals_a(v_side, inst.p().polys(), rel, n_from, hi) {
                Err(e) => {
                    data.insert("part_a".into(), json!(format!("skipped: {e}")));
                }
                Ok(rows) => {
                    for (n, value) in &rows {
                        if !value.is_zero() {
                            failed = true;
                            witnesses.push(
                                Witness::new("det B_n - (-1)^N r_{N,n} det B_{n-1}")
                                    .at_n(*n)
                                    .with_value(value),
                            );
                        }
                    }
                    data.insert(
                        "part_a".into(),
                        json!({"n_from": n_from, "n_to": hi, "residuals_zero": !failed}),
                    );
                }
            }
        }
    }

    // part (b): needs only the (P, u) side
    if m_w == 0 {
        data.insert("part_b".into(), json!("not applicable: M = 0"));
    } else {
        let u_side = inst.u_side();
        let hi = cfg.n_max.min(u_side.pairing_limit(m_w - 1));
        match lemma_residuals_b(&u_side, inst.q_polys(), rel, n_from, hi) {
            Err(e) => {
                data.insert("part_b".into(), json!(format!("skipped: {e}")));
            }
            Ok(rows) => {
                let mut part_failed = false;
                for (n, value) in &rows {
                    if !value.is_zero() {
                        part_failed = true;
                        witnesses.push(
                            Witness::new("det B~_n - (-1)^M s_{M,n} det B~_{n-1}")
                                .at_n(*n)
                                .with_value(value),
                        );
                    }
                }
                failed |= part_failed;
                data.insert(
                    "part_b".into(),
                    json!({"n_from": n_from, "n_to": hi, "residuals_zero": !part_failed}),
                );
            }
        }
    }

    let mut r = CheckResult::new(
        name,
        if failed {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        },
    );
    r.witnesses = witnesses;
    r.data = serde_json::Value::Object(data);
    r
}

fn run_inverse(inst: &RelationInstance) -> CheckResult {
    let name = CheckKind::Inverse.name();
    match inverse::build_functional_relation(inst) {
        Ok(fr) => {
            let mut r = CheckResult::new(name, CheckStatus::Pass);
            r.data = json!({
                "phi": rational_strings(fr.phi.coeffs()),
                "psi": rational_strings(fr.psi.coeffs()),
                "lambda": rational_strings(&fr.lambda),
                "mu": rational_strings(&fr.mu),
                "verified_to": fr.verified_to,
                "trivial": fr.trivial,
            });
            r
        }
        Err(Error::SingularSystem { side, n }) => {
            let mut r = CheckResult::new(name, CheckStatus::Fail);
            r.witnesses
                .push(Witness::new(format!("singular {side} system")).at_n(n));
            r
        }
        Err(e) => CheckResult::skipped(name, e.to_string()),
    }
}

fn run_constancy(inst: &RelationInstance, cfg: &PipelineConfig) -> CheckResult {
    let name = CheckKind::Constancy.name();
    let rel = inst.relation();
    if rel.n_window() + rel.m_window() == 0 {
        return CheckResult::not_applicable(name, "no coefficients for N = M = 0");
    }
    match inverse::check_constancy(inst, rel.n_window() + rel.m_window(), cfg.n_max) {
        Ok(out) => {
            let mut r = CheckResult::new(
                name,
                if out.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
            );
            if let Some((side, i, n)) = &out.first_violation {
                r.witnesses.push(
                    Witness::new(format!("{side} coefficient varies with n"))
                        .at_i(*i)
                        .at_n(*n),
                );
            }
            let describe = |rows: &Option<Vec<(usize, Vec<Rational>)>>| match rows {
                None => json!("not applicable"),
                Some(rows) => json!({
                    "solved_at": rows.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
                    "first_row": rows.first().map(|(_, row)| rational_strings(row)),
                }),
            };
            r.data = json!({
                "lambda": describe(&out.lambda_rows),
                "mu": describe(&out.mu_rows),
            });
            r
        }
        Err(Error::SingularSystem { side, n }) => {
            let mut r = CheckResult::new(name, CheckStatus::Fail);
            r.witnesses
                .push(Witness::new(format!("singular {side} system")).at_n(n));
            r
        }
        Err(e) => CheckResult::skipped(name, e.to_string()),
    }
}

fn run_nonvanishing(inst: &RelationInstance, cfg: &PipelineConfig) -> CheckResult {
    let name = CheckKind::Nonvanishing.name();
    let rel = inst.relation();
    if rel.n_window() + rel.m_window() == 0 {
        return CheckResult::not_applicable(name, "no coefficients for N = M = 0");
    }
    match inverse::check_nonvanishing(inst, cfg.n_max) {
        Ok(out) => {
            let mut r = CheckResult::new(
                name,
                if out.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
            );
            if let Some(n) = out.r_zero_at {
                r.witnesses.push(Witness::new("r_{N,n} = 0").at_n(n));
            }
            if let Some(n) = out.s_zero_at {
                r.witnesses.push(Witness::new("s_{M,n} = 0").at_n(n));
            }
            let cross = match &out.cross_residuals {
                None => json!("skipped: v unavailable"),
                Some(rows) => {
                    for (n, value) in rows {
                        if !value.is_zero() {
                            r.witnesses.push(
                                Witness::new("cross-identity residual")
                                    .at_n(*n)
                                    .with_value(value),
                            );
                        }
                    }
                    json!({
                        "n_to": rows.last().map(|(n, _)| *n),
                        "all_zero": rows.iter().all(|(_, v)| v.is_zero()),
                    })
                }
            };
            r.data = json!({
                "n_from": out.n_from,
                "n_to": out.n_to,
                "cross_identity": cross,
            });
            r
        }
        Err(e) => CheckResult::skipped(name, e.to_string()),
    }
}

fn run_uniqueness(inst: &RelationInstance) -> CheckResult {
    let name = CheckKind::Uniqueness.name();
    let rel = inst.relation();
    let v_side = match inst.v_side() {
        Ok(side) => side,
        Err(e) => return CheckResult::skipped(name, e.to_string()),
    };
    let u = inst.p().functional();
    let v = v_side.functional();
    let (n_w, m_w) = (rel.n_window(), rel.m_window());
    let k_horizon = (u.truncation() - m_w).min(v.truncation() - n_w);
    if k_horizon < n_w + m_w + 2 {
        return CheckResult::skipped(
            name,
            format!("truncation supports only k <= {k_horizon}"),
        );
    }
    match inverse::uniqueness_dimension(u, v, n_w, m_w, k_horizon) {
        Ok(dimension) => {
            let unique = dimension == 1;
            let mut r = CheckResult::new(
                name,
                if unique {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
            );
            r.data = json!({"dimension": dimension, "horizon": k_horizon});
            if !unique {
                r.witnesses.push(Witness::new(format!(
                    "solution space of (Phi~, Psi~) has dimension {dimension}"
                )));
            }
            r.annotations.push(
                "dimension 1 certifies uniqueness up to scale at this horizon only".into(),
            );
            r
        }
        Err(e) => CheckResult::skipped(name, e.to_string()),
    }
}

fn grid_json(grid: &ortho::ConditionGrid) -> serde_json::Value {
    json!({
        "family": match grid.family {
            ortho::ConditionFamily::A => "A",
            ortho::ConditionFamily::B => "B",
        },
        "checked_ranges": grid
            .ranges
            .iter()
            .map(|r| json!({"i": r.i, "n_from": r.n_from, "n_to": r.n_to}))
            .collect::<Vec<_>>(),
        "violations": grid
            .violations()
            .map(|(i, n, v)| json!({"i": i, "n": n, "value": rational::to_string(v)}))
            .collect::<Vec<_>>(),
    })
}

fn grid_witnesses(grid: &ortho::ConditionGrid, label: &str, out: &mut Vec<Witness>) {
    for (i, n, value) in grid.violations() {
        out.push(
            Witness::new(format!("{label}_{{i,n}}"))
                .at_i(*i)
                .at_n(*n)
                .with_value(value),
        );
    }
}

fn run_prop31(inst: &RelationInstance, cfg: &PipelineConfig) -> CheckResult {
    let name = CheckKind::Prop31.name();
    let rel = inst.relation();
    if rel.n_window() == 0 {
        return CheckResult::not_applicable(name, "N = 0: R = P is orthogonal by hypothesis");
    }
    match ortho::check_r_orthogonal(inst.p().recurrence(), rel, cfg.n_max) {
        Ok(check) => {
            let mut r = CheckResult::new(
                name,
                if check.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
            );
            grid_witnesses(&check.grid, "A", &mut r.witnesses);
            for i in &check.gamma_zero_indices {
                r.witnesses.push(Witness::new("gamma*_i = 0").at_i(*i));
            }
            r.data = json!({
                "grid": grid_json(&check.grid),
                "oracle_is_mops": check.oracle_is_mops,
                "oracle_agrees": check.oracle_agrees,
            });
            r
        }
        Err(e) => CheckResult::skipped(name, e.to_string()),
    }
}

fn run_prop32(inst: &RelationInstance, cfg: &PipelineConfig) -> CheckResult {
    let name = CheckKind::Prop32.name();
    let rel = inst.relation();
    if rel.m_window() == 0 {
        return CheckResult::not_applicable(name, "M = 0: Q = R, nothing further to solve");
    }
    // star coefficients must describe a genuine MOPS: either N = 0 (R = P)
    // or the prop31 characterization passes.
    let star = if rel.n_window() == 0 {
        let rc = inst.p().recurrence();
        ortho::StarCoeffs {
            beta_star: rc.betas()[..cfg.n_max].to_vec(),
            gamma_star: rc.gammas()[..cfg.n_max - 1].to_vec(),
        }
    } else {
        match ortho::check_r_orthogonal(inst.p().recurrence(), rel, cfg.n_max) {
            Ok(check) if check.pass => {
                match ortho::star_coeffs(inst.p().recurrence(), rel, cfg.n_max) {
                    Ok(star) => star,
                    Err(e) => return CheckResult::skipped(name, e.to_string()),
                }
            }
            Ok(_) => {
                return CheckResult::skipped(name, "R is not orthogonal (prop31 fails)")
            }
            Err(e) => return CheckResult::skipped(name, e.to_string()),
        }
    };
    match ortho::check_q_orthogonal(&star, rel, cfg.n_max) {
        Ok(check) => {
            let mut r = CheckResult::new(
                name,
                if check.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
            );
            grid_witnesses(&check.grid, "B", &mut r.witnesses);
            r.data = json!({
                "grid": grid_json(&check.grid),
                "oracle_is_mops": check.oracle_is_mops,
                "oracle_agrees": check.oracle_agrees,
            });
            r
        }
        Err(e) => CheckResult::skipped(name, e.to_string()),
    }
}

fn run_thm33(inst: &RelationInstance) -> CheckResult {
    let name = CheckKind::Thm33.name();
    match ortho::theorem_main_check(inst) {
        Ok(check) => {
            let mut r = CheckResult::new(
                name,
                if check.pass {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
            );
            if let Some(grid) = &check.a_grid {
                grid_witnesses(grid, "A", &mut r.witnesses);
            }
            if let Some(grid) = &check.b_grid {
                grid_witnesses(grid, "B", &mut r.witnesses);
            }
            if !check.prefix_ttrr_ok {
                r.witnesses
                    .push(Witness::new("Q prefix fails the three-term recurrence"));
            }
            if !check.coupled_identities_ok {
                r.witnesses
                    .push(Witness::new("coupled coefficient identities violated"));
            }
            r.data = json!({
                "detA": check.det_a.as_ref().map(rational::to_string),
                "reduced_route": check.reduced_route,
                "prefix_ttrr_ok": check.prefix_ttrr_ok,
                "coupled_identities_ok": check.coupled_identities_ok,
                "a_grid": check.a_grid.as_ref().map(grid_json),
                "b_grid": check.b_grid.as_ref().map(grid_json),
                "oracle_is_mops": check.oracle_is_mops,
                "oracle_agrees": check.oracle_agrees,
            });
            r.annotations = check.annotations.clone();
            r.annotations.push(forward_direction_note());
            r
        }
        Err(Error::HypothesisFail(detail)) => {
            let mut r = CheckResult::skipped(name, format!("hypothesis fails: {detail}"));
            r.annotations.push(forward_direction_note());
            r
        }
        Err(e) => CheckResult::skipped(name, e.to_string()),
    }
}

fn forward_direction_note() -> String {
    "forward direction (Q orthogonal implies the coefficient identities) needs only the \
     initial conditions; the converse direction needs r_{N,n} s_{M,n} != 0 for all n >= N+M"
        .into()
}

/// Renders a report in the requested format.
pub fn emit(report: &PipelineReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report.to_canonical_json(),
        OutputFormat::Text => report.to_text(),
    }
}

/// Output format selector for [`emit`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Exact family data for the `family` CLI subcommand: moments through `k`
/// plus the recurrence extracted from them.
pub fn family_dump(family: &ClassicalFamily, k: usize) -> Result<serde_json::Value> {
    let (functional, rc) = family.functional_and_recurrence(k)?;
    Ok(json!({
        "moments": rational_strings(functional.moments()),
        "beta": rational_strings(rc.betas()),
        "gamma": rational_strings(rc.gammas()),
    }))
}
