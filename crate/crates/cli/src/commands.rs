use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use fwb_core::cohomology::{carlson_module, minimal_resolution, poincare_series, resolve_trivial, CohomologyClass};
use fwb_core::field_linalg::{jordan_type, Elem, Field, Matrix};
use fwb_core::hopf::{canonical_json, Algebra};
use fwb_core::kernels::{CaseId, KernelBundle};
use fwb_core::modules::{CoproductChoice, FDModule, ModuleFile};
use fwb_core::pi_points::{BetaSubgroup, Family, PiPoints, SupportSet};
use fwb_core::suites::battery::{battery_file_name, stored_battery};
use fwb_core::suites::{run_suite, SuiteName, SuiteParams, SuiteReport};

use crate::config::WorkbenchConfig;
use crate::{FamilyArgs, Target, Verdict};

/// Every file the CLI writes: the result plus the seed and hashes of the
/// inputs it was computed from. Timing lives in `elapsed_ms` only.
#[derive(Serialize)]
struct Artifact<T: Serialize> {
    command: String,
    version: &'static str,
    seed: u64,
    inputs: BTreeMap<String, String>,
    result: T,
    elapsed_ms: u64,
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn stem(case: &CaseId) -> String {
    battery_file_name(case).trim_end_matches(".json").to_string()
}

fn write(cfg: &WorkbenchConfig, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.output_dir).with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    let path = cfg.output_dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn emit<T: Serialize>(
    cfg: &WorkbenchConfig,
    command: &str,
    inputs: BTreeMap<String, String>,
    result: T,
    start: Instant,
    file: Option<&str>,
) -> Result<()> {
    let art = Artifact {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        inputs,
        result,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    let text = canonical_json(&art)?;
    if let Some(name) = file {
        write(cfg, name, &text)?;
    }
    print!("{text}");
    Ok(())
}

/// `s` with every run of non-alphanumeric characters replaced by `_`.
fn slug(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        if ch.is_ascii_alphanumeric() {
            out.push(ch);
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out.trim_end_matches('_').to_string()
}

fn parse_case(s: &str) -> Result<CaseId> {
    s.parse().with_context(|| format!("bad case id {s:?}"))
}

fn load_bundle(cfg: &WorkbenchConfig, case: &CaseId) -> Result<Arc<KernelBundle>> {
    let b = KernelBundle::build(*case)?;
    let big = b.dims().into_iter().max().unwrap_or(0);
    if big > cfg.guards.max_dim {
        bail!("{case}: algebra dimension {big} exceeds guard {}", cfg.guards.max_dim);
    }
    Ok(Arc::new(b))
}

/// "k", "regular" or a module file over D̃ or O. Returns the module and its
/// input hash.
fn load_module(cfg: &WorkbenchConfig, b: &KernelBundle, spec: &str) -> Result<(FDModule, String)> {
    let dt = Algebra::from(b.extended.clone());
    let f = Field::new(b.case.p(), 1)?;
    let (m, hash) = match spec {
        "k" | "trivial" => (FDModule::trivial(&dt, &f)?, sha256(spec.as_bytes())),
        "regular" => (FDModule::regular(&dt, &f)?, sha256(spec.as_bytes())),
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading module {path}"))?;
            let file: ModuleFile = serde_json::from_str(&text).with_context(|| format!("parsing module {path}"))?;
            if file.dim > cfg.guards.max_dim {
                bail!("module dimension {} exceeds guard {}", file.dim, cfg.guards.max_dim);
            }
            let alg = [dt.clone(), Algebra::from(b.o.clone())]
                .into_iter()
                .find(|a| a.name() == file.algebra)
                .ok_or_else(|| anyhow!("module {path} is over {:?}, not D̃ or O of {}", file.algebra, b.case))?;
            (FDModule::from_file(&file, &alg)?, sha256(text.as_bytes()))
        }
    };
    Ok((m, hash))
}

fn family(cfg: &WorkbenchConfig, case: CaseId, args: &FamilyArgs) -> Result<Family> {
    let fam = match args.beta.as_deref() {
        None => Family::standard(case, args.field_ext)?,
        Some(s) => {
            let beta = match s {
                "whole" => BetaSubgroup::Whole,
                "trivial" | "none" => BetaSubgroup::Trivial,
                _ => BetaSubgroup::Axis(
                    s.strip_prefix("axis:")
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| anyhow!("bad --beta {s:?}; expected whole, trivial or axis:<i>"))?,
                ),
            };
            Family::new(case, args.field_ext, beta)?
        }
    };
    let n = fam.point_count();
    if n > cfg.guards.max_family as u128 {
        bail!("family {} has {n} points, above guard {}", fam.id(), cfg.guards.max_family);
    }
    Ok(fam)
}

/// Points with each coordinate written as its coefficient vector.
fn support_json(s: &SupportSet) -> Result<Value> {
    let f = Field::from_desc(s.field.clone())?;
    let pts: Vec<Vec<Vec<u32>>> = s.points.iter().map(|p| p.iter().map(|&x| f.coeffs(x)).collect()).collect();
    Ok(json!({
        "family": s.family,
        "field": s.field,
        "module": s.module,
        "points": pts,
        "family_points": s.family_points,
        "whole_family": s.is_whole_family(),
    }))
}

fn support_csv(s: &SupportSet) -> Result<String> {
    let f = Field::from_desc(s.field.clone())?;
    let width = s.points.first().map_or(0, |p| p.len());
    let mut out = (0..width).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
    out.push('\n');
    for p in &s.points {
        let cells: Vec<String> = p
            .iter()
            .map(|&x| f.coeffs(x).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn build(cfg: &WorkbenchConfig, case: &str) -> Result<Verdict> {
    let start = Instant::now();
    let c = parse_case(case)?;
    let b = load_bundle(cfg, &c)?;
    let text = canonical_json(&b.to_file())?;
    let name = format!("{}.bundle.json", stem(&c));
    let path = write(cfg, &name, &text)?;
    let inputs = BTreeMap::from([("case".to_string(), case.to_string())]);
    let result = json!({
        "case": c.to_string(),
        "dims": {
            "coord": b.coord.dim(),
            "group": b.group.dim(),
            "double": b.double.dim(),
            "extended": b.extended.dim(),
            "o": b.o.dim(),
        },
        "bundle": path.display().to_string(),
        "bundle_sha256": sha256(text.as_bytes()),
    });
    emit(cfg, "build", inputs, result, start, None)?;
    Ok(Verdict::Pass)
}

pub fn support(
    cfg: &WorkbenchConfig,
    case: &str,
    module: &str,
    fam_args: &FamilyArgs,
    tensor: Option<&str>,
    both: bool,
    csv: bool,
) -> Result<Verdict> {
    let start = Instant::now();
    let c = parse_case(case)?;
    let b = load_bundle(cfg, &c)?;
    let pp = PiPoints::new(b.clone());
    let fam = family(cfg, c, fam_args)?;
    let (m, hm) = load_module(cfg, &b, module)?;
    let mut inputs = BTreeMap::from([("case".to_string(), case.to_string()), ("module".to_string(), hm)]);
    let sm = pp.support(&m, &fam)?;
    let mut verdict = Verdict::Pass;
    let mut result = json!({ "support": support_json(&sm)? });
    let mut csv_set = sm.clone();
    if let Some(t) = tensor {
        let (n, hn) = load_module(cfg, &b, t)?;
        inputs.insert("tensor".into(), hn);
        if !m.algebra().same(n.algebra()) {
            bail!("both modules must live over the same algebra");
        }
        let sn = pp.support(&n, &fam)?;
        let st = pp.support(&m.tensor(&n, CoproductChoice::HopfCoproduct)?, &fam)?;
        let meet: Vec<Vec<Elem>> = sm.points.iter().filter(|p| sn.contains(p)).cloned().collect();
        let holds = st.points == meet;
        result["tensor_support"] = support_json(&st)?;
        result["other_support"] = support_json(&sn)?;
        result["tensor_property"] = json!(holds);
        if !holds {
            verdict = Verdict::Fail;
        }
        if both {
            let restrict = |x: &FDModule| -> Result<FDModule> {
                if x.algebra().name() == b.o.name() {
                    Ok(x.clone())
                } else {
                    Ok(x.restrict_along(&b.i_o)?)
                }
            };
            let (mo, no) = (restrict(&m)?, restrict(&n)?);
            let hopf = pp.support(&mo.tensor(&no, CoproductChoice::HopfCoproduct)?, &fam)?;
            let group = pp.support(&mo.tensor(&no, CoproductChoice::GroupCoproduct)?, &fam)?;
            let agree = hopf.points == group.points;
            result["o_hopf_support"] = support_json(&hopf)?;
            result["o_group_support"] = support_json(&group)?;
            result["coproducts_agree"] = json!(agree);
            if !agree {
                verdict = Verdict::Fail;
            }
        }
        csv_set = st;
    }
    let base = format!("support_{}", slug(&fam.id()));
    if csv {
        write(cfg, &format!("{base}.csv"), &support_csv(&csv_set)?)?;
    }
    emit(cfg, "support", inputs, result, start, Some(&format!("{base}.json")))?;
    Ok(verdict)
}

pub fn jordan(cfg: &WorkbenchConfig, case: &str, module: &str, fam_args: &FamilyArgs) -> Result<Verdict> {
    let start = Instant::now();
    let c = parse_case(case)?;
    let b = load_bundle(cfg, &c)?;
    let pp = PiPoints::new(b.clone());
    let fam = family(cfg, c, fam_args)?;
    let (m, hm) = load_module(cfg, &b, module)?;
    let f = fam.field()?;
    let types = pp.jordan_types(&m, &fam)?;
    let max = fwb_core::pi_points::maximal_types(&types);
    let rows: Vec<Value> = types
        .iter()
        .map(|(p, t)| json!({"point": p.iter().map(|&x| f.coeffs(x)).collect::<Vec<_>>(), "jordan_type": t.parts()}))
        .collect();
    let inputs = BTreeMap::from([("case".to_string(), case.to_string()), ("module".to_string(), hm)]);
    let result = json!({"family": fam.id(), "module": m.name(), "types": rows, "maximal": max});
    emit(cfg, "jordan", inputs, result, start, None)?;
    Ok(Verdict::Pass)
}

pub fn jordan_matrix(cfg: &WorkbenchConfig, path: &Path, p: u32) -> Result<Verdict> {
    let start = Instant::now();
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows: Vec<Vec<u32>> = serde_json::from_str(&text).context("matrix must be a JSON list of integer rows")?;
    if rows.len() > cfg.guards.max_dim {
        bail!("matrix size {} exceeds guard {}", rows.len(), cfg.guards.max_dim);
    }
    let f = Field::new(p, 1)?;
    let data = rows
        .iter()
        .flatten()
        .map(|&x| f.from_coeffs(&[x]))
        .collect::<fwb_core::Result<Vec<_>>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        bail!("matrix is not square");
    }
    let m = Matrix::from_vec(&f, n, n, data)?;
    let t = jordan_type(&m, p)?;
    let inputs = BTreeMap::from([("matrix".to_string(), sha256(text.as_bytes()))]);
    let result = json!({"p": p, "dim": n, "jordan_type": t.parts(), "free": t.parts().iter().all(|&x| x == p as usize)});
    emit(cfg, "jordan", inputs, result, start, None)?;
    Ok(Verdict::Pass)
}

fn target_algebra(b: &KernelBundle, t: Target) -> Algebra {
    match t {
        Target::Extended => Algebra::from(b.extended.clone()),
        Target::O => Algebra::from(b.o.clone()),
        Target::Double => Algebra::from(b.double.clone()),
        Target::Coord => Algebra::from(b.coord.clone()),
        Target::Group => Algebra::from(b.group.clone()),
    }
}

pub fn cohomology(
    cfg: &WorkbenchConfig,
    case: &str,
    target: Target,
    length: usize,
    module: Option<&Path>,
    carlson: Option<usize>,
    class: Option<Vec<u32>>,
) -> Result<Verdict> {
    let start = Instant::now();
    let c = parse_case(case)?;
    let b = load_bundle(cfg, &c)?;
    let alg = target_algebra(&b, target);
    let tname = format!("{target:?}").to_lowercase();
    let base = format!("{}_{tname}", stem(&c));
    let mut inputs = BTreeMap::from([("case".to_string(), case.to_string()), ("target".to_string(), tname)]);
    let mut result = json!({"algebra": alg.name(), "length": length});
    let res = if let Some(path) = module {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        inputs.insert("module".into(), sha256(text.as_bytes()));
        let m = FDModule::from_json(&text, &alg)?;
        if m.dim() > cfg.guards.max_dim {
            bail!("module dimension {} exceeds guard {}", m.dim(), cfg.guards.max_dim);
        }
        let res = minimal_resolution(&m, length)?;
        result["betti"] = json!(res.betti());
        res
    } else {
        let series = poincare_series(&alg, length)?;
        write(cfg, &format!("{base}_betti.csv"), &series.to_csv())?;
        result["betti"] = json!(series.betti);
        result["growth_degree"] = json!(series.growth_degree);
        resolve_trivial(&alg, length.max(carlson.unwrap_or(0)))?
    };
    let dump = write(cfg, &format!("{base}_resolution.json"), &canonical_json(&res.dump())?)?;
    result["resolution"] = json!(dump.display().to_string());
    if let Some(n) = carlson {
        if n == 0 || n % 2 == 1 {
            bail!("--carlson needs a positive even degree, got {n}");
        }
        let f = res.field().clone();
        let zeta = match class {
            Some(cs) => {
                let coeffs = cs.iter().map(|&x| f.from_coeffs(&[x])).collect::<fwb_core::Result<Vec<_>>>()?;
                CohomologyClass::new(&res, n, coeffs)?
            }
            None => CohomologyClass::basis(&res, n, 0)?,
        };
        let l = carlson_module(&res, &zeta)?;
        let omega = res.syzygy(n)?.dim();
        let lfile = write(cfg, &format!("{base}_L{n}.json"), &canonical_json(&l.to_file())?)?;
        result["carlson"] = json!({
            "degree": n,
            "class": zeta.coeffs,
            "omega_dim": omega,
            "dim": l.dim(),
            "module": lfile.display().to_string(),
        });
    }
    emit(cfg, "cohomology", inputs, result, start, Some(&format!("{base}_summary.json")))?;
    Ok(Verdict::Pass)
}

fn report_name(suite: SuiteName, case: &str) -> String {
    format!("reports/{suite}__{}.json", slug(case))
}

pub fn verify(cfg: &WorkbenchConfig, suite: &str, cases: &[String], params: &SuiteParams) -> Result<Verdict> {
    let suites: Vec<SuiteName> = if suite == "all" {
        SuiteName::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let jobs: Vec<(SuiteName, String)> = suites
        .iter()
        .flat_map(|&s| {
            let cs = if cases.is_empty() { s.default_cases() } else { cases.to_vec() };
            cs.into_iter().map(move |c| (s, c))
        })
        .collect();
    std::fs::create_dir_all(cfg.output_dir.join("reports"))?;
    let outcomes: Vec<Result<(SuiteName, String, SuiteReport, BTreeMap<String, String>)>> = jobs
        .par_iter()
        .map(|(s, c)| {
            let report = run_suite(*s, c, params).with_context(|| format!("{s} on {c}"))?;
            let mut inputs = BTreeMap::from([
                ("case".to_string(), c.clone()),
                ("params".to_string(), sha256(serde_json::to_string(params)?.as_bytes())),
            ]);
            if let Some(text) = c.parse::<CaseId>().ok().and_then(|id| stored_battery(&id)) {
                inputs.insert("battery".into(), sha256(text.as_bytes()));
            }
            Ok((*s, c.clone(), report, inputs))
        })
        .collect();
    let mut verdict = Verdict::Pass;
    for o in outcomes {
        let (s, c, report, inputs) = o?;
        let art = Artifact {
            command: format!("verify {s}"),
            version: env!("CARGO_PKG_VERSION"),
            seed: cfg.seed,
            inputs,
            elapsed_ms: report.elapsed_ms,
            result: &report,
        };
        write(cfg, &report_name(s, &c), &canonical_json(&art)?)?;
        println!(
            "{} {s} {c} trials={} counterexamples={}",
            if report.pass { "PASS" } else { "FAIL" },
            report.trials,
            report.counterexamples.len()
        );
        if !report.pass {
            verdict = Verdict::Fail;
        }
    }
    Ok(verdict)
}

pub fn report(cfg: &WorkbenchConfig, dir: Option<PathBuf>) -> Result<Verdict> {
    let start = Instant::now();
    let dir = dir.unwrap_or_else(|| cfg.output_dir.join("reports"));
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no reports in {}", dir.display());
    }
    let mut rows = Vec::new();
    let mut inputs = BTreeMap::new();
    let mut all = true;
    for p in &paths {
        let text = std::fs::read_to_string(p)?;
        let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
        let r = &v["result"];
        let pass = r["pass"].as_bool().ok_or_else(|| anyhow!("{} is not a suite report", p.display()))?;
        all &= pass;
        let name = p.file_name().unwrap_or_default().to_string_lossy().to_string();
        inputs.insert(name, sha256(text.as_bytes()));
        rows.push(json!({
            "suite": r["suite"],
            "case": r["case"],
            "pass": pass,
            "trials": r["trials"],
            "counterexamples": r["counterexamples"].as_array().map_or(0, |a| a.len()),
        }));
    }
    emit(cfg, "report", inputs, json!({"pass": all, "reports": rows}), start, Some("summary.json"))?;
    Ok(if all { Verdict::Pass } else { Verdict::Fail })
}
