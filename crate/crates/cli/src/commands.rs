//! Command implementations. Each returns a JSON report and an exit code;
//! printing is left to the caller.

use localh::complex::{
    is_quasi_geometric, validate_homology_triangulation, Face, SimplexSet, SimplicialComplex,
    Triangulation, VertexId, DEFAULT_FACE_CEILING,
};
use localh::face_ring::{LinearForm, LsopConfig, Monomial};
use localh::field::Field;
use localh::functor::{
    check_functor_composition, check_monotonicity, induced_map, vanishing_structure_audit,
    AnalysisReport,
};
use localh::linalg::{rank, Matrix};
use localh::local::{
    build_resolution, index_set_elements, local_h_incexc, restrict_module, restricted_standalone,
    verify_exactness, LocalError, LocalSetup,
};
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::{Input, TriangulationFile};

/// A finished command: its report and the process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }

    fn with(report: Value, fine: bool, failure_code: i32) -> Self {
        Outcome {
            report,
            code: if fine { 0 } else { failure_code },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Module,
    Incexc,
    Both,
}

impl Method {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "module" => Ok(Method::Module),
            "incexc" => Ok(Method::Incexc),
            "both" => Ok(Method::Both),
            _ => Err(CliError::Usage(format!(
                "unknown method `{s}`; expected module, incexc or both"
            ))),
        }
    }
}

/// `a,b,c` → labels; the empty string is the empty face.
pub fn parse_face(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

/// `a,b;b,c` → facets.
pub fn parse_facets(s: &str) -> Vec<Vec<String>> {
    s.split(';')
        .map(parse_face)
        .filter(|f| !f.is_empty())
        .collect()
}

fn sorted(mut labels: Vec<String>) -> Value {
    labels.sort();
    json!(labels)
}

fn face_json(t: &Triangulation, f: &Face) -> Value {
    sorted(t.labels_of(f))
}

fn set_json(t: &Triangulation, s: SimplexSet) -> Value {
    sorted(t.simplex_set_labels(s))
}

fn monomial_json(t: &Triangulation, x: &Monomial) -> Value {
    let labels: Vec<String> = x
        .vars()
        .iter()
        .map(|&v| t.vertex_labels()[v as usize].clone())
        .collect();
    sorted(labels)
}

fn scalar<F: Field>(x: &F) -> Value {
    match x.to_i64() {
        Some(i) => json!(i),
        None => json!(x.to_string()),
    }
}

fn form_json<F: Field>(t: &Triangulation, form: &LinearForm<F>) -> Value {
    let map: Map<String, Value> = form
        .terms()
        .iter()
        .map(|(v, c)| (t.vertex_labels()[*v as usize].clone(), scalar(c)))
        .collect();
    Value::Object(map)
}

fn sparse_entries<F: Field>(m: &Matrix<F>) -> Value {
    let mut out = Vec::new();
    for (r, row) in m.rows().enumerate() {
        for (c, x) in row {
            out.push(json!([r, c, scalar(&x)]));
        }
    }
    json!(out)
}

fn dense_json<F: Field>(m: &Matrix<F>) -> Value {
    json!(m
        .to_dense()
        .iter()
        .map(|row| row.iter().map(scalar).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn triangulation_file(input: &Input) -> Result<&TriangulationFile, CliError> {
    match input {
        Input::Triangulation(t) => Ok(t),
        Input::Standalone(_) => Err(CliError::Usage(
            "this command needs a triangulation file, not a standalone face".into(),
        )),
    }
}

/// Builds the triangulation and rejects inputs that are not quasi-geometric
/// homology triangulations.
pub fn prepare(input: &Input, cfg: &RunConfig) -> Result<Triangulation, CliError> {
    let t = triangulation_file(input)?.builder().build()?;
    let report = validate_homology_triangulation(&t, cfg.mode, cfg.field, DEFAULT_FACE_CEILING)?;
    if let Some(v) = report.violations.first() {
        return Err(CliError::Validation(format!(
            "not a homology triangulation: {} on {:?}",
            v.condition,
            t.simplex_set_labels(v.subset)
        )));
    }
    if let (false, Some(w)) = is_quasi_geometric(&t) {
        return Err(CliError::Validation(format!(
            "not quasi-geometric: face {:?}",
            t.labels_of(&w.face)
        )));
    }
    Ok(t)
}

fn face_of(t: &Triangulation, labels: &[String]) -> Result<Face, CliError> {
    let f = t.face_from_labels(labels)?;
    if !t.complex().contains(&f) {
        return Err(CliError::Usage(format!("{labels:?} is not a face")));
    }
    Ok(f)
}

fn unsupported(cfg: &RunConfig) -> CliError {
    CliError::Usage(format!("no compiled field for {}", cfg.field))
}

fn header(name: &str, cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    m.insert("field".into(), json!(cfg.field.to_string()));
    m.insert("seed".into(), json!(cfg.seed));
    m
}

pub fn validate(input: &Input, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let file = triangulation_file(input)?;
    let mut report = Map::new();
    report.insert("name".into(), json!(file.name));
    report.insert("mode".into(), json!(cfg.mode));
    report.insert("field".into(), json!(cfg.field.to_string()));
    let mut checks = Map::new();
    checks.insert("schema".into(), json!({"passed": true}));
    let t = match file.builder().build() {
        Ok(t) => t,
        Err(e) => {
            checks.insert(
                "carrier_map".into(),
                json!({"passed": false, "error": e.to_string()}),
            );
            report.insert("checks".into(), Value::Object(checks));
            report.insert("passed".into(), json!(false));
            return Ok(Outcome::with(Value::Object(report), false, 2));
        }
    };
    checks.insert("carrier_map".into(), json!({"passed": true}));
    let homology = validate_homology_triangulation(&t, cfg.mode, cfg.field, DEFAULT_FACE_CEILING)?;
    let violations: Vec<Value> = homology
        .violations
        .iter()
        .map(|v| {
            json!({
                "subset": set_json(&t, v.subset),
                "face": v.face.as_ref().map(|f| face_json(&t, f)),
                "condition": v.condition,
                "betti": v.betti,
            })
        })
        .collect();
    checks.insert(
        "homology".into(),
        json!({
            "passed": homology.passed(),
            "subsets_checked": homology.subsets_checked,
            "violations": violations,
        }),
    );
    let (qg, witness) = is_quasi_geometric(&t);
    checks.insert(
        "quasi_geometric".into(),
        json!({
            "passed": qg,
            "witness": witness.map(|w| json!({
                "face": face_json(&t, &w.face),
                "subset": set_json(&t, w.subset),
                "restriction_dim": w.restriction_dim,
            })),
        }),
    );
    let passed = homology.passed() && qg;
    report.insert("checks".into(), Value::Object(checks));
    report.insert("passed".into(), json!(passed));
    Ok(Outcome::with(Value::Object(report), passed, 2))
}

pub fn local_h(
    input: &Input,
    face: &[String],
    method: Method,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let t = prepare(input, cfg)?;
    let e = face_of(&t, face)?;
    let mut report = header(t.name(), cfg);
    let d = t.n() - e.len();
    report.insert("face".into(), face_json(&t, &e));
    report.insert("d".into(), json!(d));
    let mut methods = Map::new();
    let mut fine = true;
    let mut values = Vec::new();
    if method != Method::Incexc {
        let horizon = cfg.horizon(d).max(d);
        let dims = localh::with_field!(cfg.field, F => {
            let setup = LocalSetup::<F>::new(&t, &e, cfg.seed, LsopConfig::default())?;
            setup.module(horizon).dims
        }, else return Err(unsupported(cfg)));
        let ell: Vec<i64> = dims[..=d].iter().map(|&x| x as i64).collect();
        if dims[d + 1..].iter().any(|&x| x != 0) {
            fine = false;
            report.insert("trap".into(), json!("L is nonzero above degree d"));
        }
        report.insert("dims".into(), json!(dims));
        methods.insert("module".into(), json!(ell));
        values.push(ell);
    }
    if method != Method::Module {
        let ell = local_h_incexc(&t, &e)?.values;
        methods.insert("incexc".into(), json!(ell));
        values.push(ell);
    }
    if method == Method::Both {
        let agreement = values[0] == values[1];
        fine &= agreement;
        report.insert("agreement".into(), json!(agreement));
    }
    report.insert("ell".into(), json!(values[0]));
    report.insert("methods".into(), Value::Object(methods));
    Ok(Outcome::with(Value::Object(report), fine, 3))
}

pub fn resolution(
    input: &Input,
    face: &[String],
    verify: bool,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let t = prepare(input, cfg)?;
    let e = face_of(&t, face)?;
    localh::with_field!(cfg.field, F => resolution_in::<F>(&t, &e, verify, cfg), else Err(unsupported(cfg)))
}

fn resolution_in<F: Field>(
    t: &Triangulation,
    e: &Face,
    verify: bool,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let setup = LocalSetup::<F>::new(t, e, cfg.seed, LsopConfig::default())?;
    let horizon = cfg.horizon(setup.d());
    let res = build_resolution(&setup, horizon)?;
    let mut report = header(t.name(), cfg);
    report.insert("face".into(), face_json(t, e));
    report.insert("d".into(), json!(res.d));
    report.insert(
        "lsop".into(),
        json!(setup
            .lsop()
            .forms()
            .iter()
            .map(|f| form_json(t, f))
            .collect::<Vec<_>>()),
    );
    let terms: Vec<Vec<Vec<usize>>> = res
        .terms
        .iter()
        .map(|ts| {
            ts.iter()
                .map(|&s| index_set_elements(s).iter().map(|i| i + 1).collect())
                .collect()
        })
        .collect();
    report.insert("terms".into(), json!(terms));
    let degrees: Vec<Value> = res
        .degrees
        .iter()
        .map(|deg| {
            json!({
                "degree": deg.degree,
                "ell": deg.ell,
                "term_dims": (0..=res.d).map(|k| deg.term_dim(k)).collect::<Vec<_>>(),
                "augmentation_rank": rank(&deg.augmentation),
                "differentials": deg.differentials.iter().enumerate().map(|(k, m)| json!({
                    "from": k + 1,
                    "shape": [m.nrows(), m.ncols()],
                    "entries": sparse_entries(m),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    report.insert("degrees".into(), json!(degrees));
    let mut fine = true;
    if verify {
        let ex = verify_exactness(&res);
        fine = ex.passed();
        report.insert(
            "exactness".into(),
            json!({
                "passed": ex.passed(),
                "degrees": ex.degrees.iter().map(|c| json!({
                    "degree": c.degree,
                    "dims": c.dims,
                    "ranks": c.ranks,
                    "alternating_sum": c.alternating_sum,
                    "failures": c.failures.iter().map(|(p, r)| json!({"position": p, "reason": r})).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(Outcome::with(Value::Object(report), fine, 3))
}

pub struct MapRequest<'a> {
    pub face: &'a [String],
    pub target: &'a [String],
    pub check_surjective: bool,
    pub compose: Option<&'a [String]>,
}

pub fn map(input: &Input, req: &MapRequest<'_>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = prepare(input, cfg)?;
    let e = face_of(&t, req.face)?;
    let e_prime = face_of(&t, req.target)?;
    let e_second = req.compose.map(|f| face_of(&t, f)).transpose()?;
    localh::with_field!(cfg.field, F => map_in::<F>(&t, &e, &e_prime, e_second.as_ref(), req.check_surjective, cfg), else Err(unsupported(cfg)))
}

fn map_in<F: Field>(
    t: &Triangulation,
    e: &Face,
    e_prime: &Face,
    e_second: Option<&Face>,
    check_surjective: bool,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let setup = LocalSetup::<F>::new(t, e, cfg.seed, LsopConfig::default())?;
    let horizon = cfg.horizon(setup.d());
    let phi = induced_map(&setup, e_prime, cfg.seed.wrapping_add(1), horizon)?;
    let mut report = header(t.name(), cfg);
    report.insert("face".into(), face_json(t, e));
    report.insert("target_face".into(), face_json(t, e_prime));
    report.insert(
        "star".into(),
        json!(phi
            .star()
            .facets()
            .iter()
            .map(|f| face_json(t, f))
            .collect::<Vec<_>>()),
    );
    report.insert(
        "restricted_forms".into(),
        json!(phi
            .restricted_forms()
            .iter()
            .map(|f| form_json(t, f))
            .collect::<Vec<_>>()),
    );
    report.insert(
        "zeta".into(),
        json!(phi
            .zeta()
            .iter()
            .map(|f| form_json(t, f))
            .collect::<Vec<_>>()),
    );
    report.insert(
        "zeta_sources".into(),
        json!(phi.zeta_sources().iter().map(|i| i + 1).collect::<Vec<_>>()),
    );
    report.insert(
        "substitutions".into(),
        json!(phi
            .substitutions()
            .iter()
            .map(
                |(v, f)| json!({"vertex": t.vertex_labels()[*v as usize], "form": form_json(t, f)})
            )
            .collect::<Vec<_>>()),
    );
    report.insert(
        "degrees".into(),
        json!(phi
            .degrees()
            .iter()
            .map(|d| json!({
                "degree": d.degree,
                "source": d.source_reps.iter().map(|x| monomial_json(t, x)).collect::<Vec<_>>(),
                "target": d.target_reps.iter().map(|x| monomial_json(t, x)).collect::<Vec<_>>(),
                "matrix": dense_json(&d.matrix),
                "rank": rank(&d.matrix),
            }))
            .collect::<Vec<_>>()),
    );
    let mut code = 0;
    if check_surjective {
        match check_monotonicity(&phi) {
            Ok(m) => {
                if !m.passed() {
                    code = 3;
                }
                let mut v = serde_json::to_value(&m).expect("serializable");
                v["passed"] = json!(m.passed());
                report.insert("monotonicity".into(), v);
            }
            Err(LocalError::Precondition(msg)) => {
                code = 2;
                report.insert(
                    "monotonicity".into(),
                    json!({
                        "rejected": msg,
                        "source_ell": setup.module(setup.d()).dims,
                        "target_ell": phi.target().module(phi.target().d()).dims,
                    }),
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(e2) = e_second {
        let s = cfg.seed;
        let seeds = [
            s.wrapping_add(1),
            s.wrapping_add(2),
            s.wrapping_add(3),
            s.wrapping_add(4),
        ];
        let c = check_functor_composition(&setup, e_prime, e2, seeds, horizon)?;
        if !c.passed() {
            code = 3;
        }
        let mut v = serde_json::to_value(&c).expect("serializable");
        v["passed"] = json!(c.passed());
        v["face"] = face_json(t, e2);
        report.insert("composition".into(), v);
    }
    Ok(Outcome {
        report: Value::Object(report),
        code,
    })
}

fn analysis_json(t: &Triangulation, r: &AnalysisReport) -> Value {
    json!({
        "face": face_json(t, &r.e),
        "verdict": r.verdict,
        "ell": r.ell,
        "passed": r.passed(),
        "witnesses": r.witnesses.iter().map(|w| json!({
            "face": face_json(t, &w.face),
            "kind": w.kind,
            "degree": w.degree,
            "bound": w.bound,
            "confirmed": w.confirmed,
        })).collect::<Vec<_>>(),
        "audits": r.audits.iter().map(|a| json!({
            "name": a.name,
            "checked": a.checked,
            "failures": a.failures.iter().map(|f| face_json(t, f)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "skipped": r.skipped.iter().map(|f| face_json(t, f)).collect::<Vec<_>>(),
    })
}

pub fn audit(input: &Input, face: &[String], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let t = prepare(input, cfg)?;
    let e = face_of(&t, face)?;
    let r = localh::with_field!(cfg.field, F => {
        let setup = LocalSetup::<F>::new(&t, &e, cfg.seed, LsopConfig::default())?;
        vanishing_structure_audit(&setup)?
    }, else return Err(unsupported(cfg)));
    let mut report = header(t.name(), cfg);
    report.insert("analysis".into(), analysis_json(&t, &r));
    Ok(Outcome::with(Value::Object(report), r.passed(), 3))
}

/// Restriction of `L(Γ,E)` to `Δ` (default: the whole link), or the
/// restricted module of a standalone face.
pub fn restrict(
    input: &Input,
    face: &[String],
    delta: Option<&[Vec<String>]>,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    match input {
        Input::Standalone(s) => {
            if !face.is_empty() || delta.is_some() {
                return Err(CliError::Usage(
                    "a standalone face takes neither --face nor --delta".into(),
                ));
            }
            let f = s.to_face()?;
            let horizon = cfg.horizon(f.d());
            let r = localh::with_field!(cfg.field, F => {
                restricted_standalone::<F>(&f, cfg.seed, horizon, LsopConfig::default())?
            }, else return Err(unsupported(cfg)));
            let mut report = header(&s.name, cfg);
            report.insert("d".into(), json!(f.d()));
            report.insert("dims".into(), json!(r.module.dims));
            report.insert("ideal_dims".into(), json!(r.module.ideal_dims));
            report.insert("kernel_dims".into(), json!(r.module.kernel_dims));
            report.insert("seeds".into(), json!(r.seeds));
            report.insert("attempts".into(), json!(r.attempts));
            report.insert("zero".into(), json!(r.module.is_zero()));
            Ok(Outcome::ok(Value::Object(report)))
        }
        Input::Triangulation(_) => {
            let t = prepare(input, cfg)?;
            let e = face_of(&t, face)?;
            let r = localh::with_field!(cfg.field, F => {
                let setup = LocalSetup::<F>::new(&t, &e, cfg.seed, LsopConfig::default())?;
                let delta = match delta {
                    Some(facets) => {
                        let ids = facets
                            .iter()
                            .map(|f| Ok(t.face_from_labels(f)?.vertices().to_vec()))
                            .collect::<Result<Vec<Vec<VertexId>>, CliError>>()?;
                        SimplicialComplex::build(&ids)?
                    }
                    None => setup.link().clone(),
                };
                let horizon = cfg.horizon(setup.d());
                (restrict_module(&setup, &delta, horizon)?, delta)
            }, else return Err(unsupported(cfg)));
            let (module, delta) = r;
            let mut report = header(t.name(), cfg);
            report.insert("face".into(), face_json(&t, &e));
            report.insert(
                "delta".into(),
                json!(delta
                    .facets()
                    .iter()
                    .map(|f| face_json(&t, f))
                    .collect::<Vec<_>>()),
            );
            report.insert("dims".into(), json!(module.dims));
            report.insert("ideal_dims".into(), json!(module.ideal_dims));
            report.insert("kernel_dims".into(), json!(module.kernel_dims));
            report.insert("zero".into(), json!(module.is_zero()));
            Ok(Outcome::ok(Value::Object(report)))
        }
    }
}

pub fn corpus(name: Option<&str>) -> Result<Outcome, CliError> {
    match name {
        None => Ok(Outcome::ok(json!({
            "triangulations": crate::corpus::TRIANGULATIONS,
            "standalone": crate::corpus::STANDALONE,
        }))),
        Some(n) => Ok(Outcome::ok(crate::corpus::builtin(n)?.to_value())),
    }
}

pub fn error_report(e: &CliError) -> Value {
    json!({"error": e.kind(), "message": e.to_string()})
}
