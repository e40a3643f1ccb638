//! End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero
//! exit if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fwb_core::cohomology::{
    carlson_module, growth_degree, poincare_series, resolve_trivial, restriction_on_cohomology, CohomologyClass,
};
use fwb_core::field_linalg::{jordan_type, Elem, Field, Matrix, Partition};
use fwb_core::hopf::Algebra;
use fwb_core::kernels::{coordinate_algebra, CaseId, GroupSchemeSpec, KernelBundle};
use fwb_core::modules::is_isomorphic;
use fwb_core::suites::battery::{battery, BATTERY_MAX_DIM};
use fwb_core::suites::{
    suite_carlson, suite_coproduct_invariance, suite_fp1, suite_module_classes, suite_projectivity_detection,
    suite_structure_maps, suite_tensor_property, SuiteName, SuiteParams, SuiteReport,
};

const SEED: u64 = 0x5eed;
const FP1_TRIALS: usize = 1000;
const FP1_MAX_DIM: usize = 12;
const FP1_SECONDS: f64 = 60.0;
const BETTI_DEGREE: usize = 8;
const JORDAN_SAMPLES: usize = 500;
const SMASH_PAIRS: usize = 1000;
/// Above this dimension random elements have `SPARSE_TERMS` nonzero
/// coordinates.
const DENSE_ELEMENTS_UP_TO: usize = 128;
const SPARSE_TERMS: usize = 16;

type Outcome = Result<String, String>;

fn case(s: &str) -> CaseId {
    s.parse().unwrap()
}

fn params(field_degrees: &[u32]) -> SuiteParams {
    SuiteParams {
        seed: SEED,
        field_degrees: field_degrees.to_vec(),
        ..SuiteParams::default()
    }
}

fn check_reports(reports: &[SuiteReport]) -> Outcome {
    let trials: usize = reports.iter().map(|r| r.trials).sum();
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {}: {:?}", r.suite, r.case, r.counterexamples.first()))
        .collect();
    if bad.is_empty() {
        Ok(format!("{} runs, {trials} checks, 0 exceptions", reports.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn run_all(f: fn(&CaseId, &SuiteParams) -> fwb_core::Result<SuiteReport>, cases: &[&str], p: &SuiteParams) -> Result<Vec<SuiteReport>, String> {
    cases.iter().map(|c| f(&case(c), p).map_err(|e| format!("{c}: {e}"))).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let reports: Vec<SuiteReport> = [2, 3, 5]
        .into_iter()
        .map(|p| suite_fp1(p, FP1_MAX_DIM, FP1_TRIALS, SEED).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let secs = start.elapsed().as_secs_f64();
    let summary = check_reports(&reports)?;
    if secs > FP1_SECONDS {
        return Err(format!("{summary} but took {secs:.1} s"));
    }
    Ok(format!("{summary}, {secs:.1} s"))
}

fn criterion_2() -> Outcome {
    let cases = ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1"];
    for c in cases {
        let (_, mods) = battery(&Arc::new(KernelBundle::build(case(c)).unwrap())).map_err(|e| e.to_string())?;
        let small = mods.iter().filter(|m| m.dim() <= BATTERY_MAX_DIM).count();
        if small < 8 {
            return Err(format!("{c}: only {small} battery modules of dimension <= {BATTERY_MAX_DIM}"));
        }
    }
    let p = params(&[1, 2]);
    let mut reports = run_all(suite_tensor_property, &cases, &p)?;
    reports.extend(run_all(suite_coproduct_invariance, &cases, &p)?);
    check_reports(&reports)
}

fn criterion_3() -> Outcome {
    let reports = run_all(suite_projectivity_detection, &["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1"], &params(&[1, 2]))?;
    check_reports(&reports)
}

fn criterion_4() -> Outcome {
    let cases = [
        "Ga:n=1,p=2,r=1",
        "Ga:n=1,p=2,r=2",
        "Ga:n=1,p=3,r=1",
        "Ga:n=1,p=3,r=2",
        "Heis3:p=3,r=1",
    ];
    let reports = run_all(suite_structure_maps, &cases, &params(&[1]))?;
    for r in &reports {
        if r.trials != 6 {
            return Err(format!("{} ran {} of 6 structure checks", r.case, r.trials));
        }
    }
    check_reports(&reports)
}

/// Betti numbers of k over k[x]/x^n (n >= 2) are all 1; tensor products
/// convolve.
fn truncated_oracle(factors: usize, len: usize) -> Vec<usize> {
    let mut seq = vec![1; len + 1];
    for _ in 1..factors {
        seq = (0..=len).map(|n| seq[..=n].iter().sum()).collect();
    }
    seq
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for p in [2, 3] {
        let b = KernelBundle::build(case(&format!("Ga:n=1,p={p},r=1"))).unwrap();
        let g = GroupSchemeSpec::additive(1, p).unwrap();
        let x = Algebra::from(Arc::new(coordinate_algebra(&g, 2).unwrap()));
        let algebras = [
            ("D~", Algebra::from(b.extended.clone()), 2),
            ("O", Algebra::from(b.o.clone()), 2),
            ("k[x]/x^p^2", x, 1),
            ("k[u]/u^p", Algebra::from(b.group.clone()), 1),
        ];
        for (name, alg, factors) in algebras {
            let s = poincare_series(&alg, BETTI_DEGREE).map_err(|e| format!("{name} p={p}: {e}"))?;
            let want = truncated_oracle(factors, BETTI_DEGREE);
            if s.betti != want {
                return Err(format!("{name} p={p}: betti {:?}, oracle {want:?}", s.betti));
            }
            if name == "D~" && (s.growth_degree != Some(1) || growth_degree(&want) != Some(1)) {
                return Err(format!("D~ p={p}: growth degree {:?}, expected linear", s.growth_degree));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} algebras through degree {BETTI_DEGREE}, D~ growth linear"))
}

fn carlson_restriction() -> Result<usize, String> {
    let b = KernelBundle::build(case("Ga:n=1,p=2,r=1")).unwrap();
    let o = b.i_o.source().clone();
    let rd = resolve_trivial(b.i_o.target(), 2).map_err(|e| e.to_string())?;
    let ro = resolve_trivial(&o, 2).map_err(|e| e.to_string())?;
    let res = restriction_on_cohomology(&b.i_o, &ro, &rd, 2).map_err(|e| e.to_string())?;
    let n = rd.betti()[2];
    let mut count = 0;
    for code in 1..(1usize << n) {
        let coeffs: Vec<Elem> = (0..n).map(|i| ((code >> i) & 1) as Elem).collect();
        let zeta = CohomologyClass::new(&rd, 2, coeffs.clone()).unwrap();
        let restricted = carlson_module(&rd, &zeta).unwrap().restrict_along(&b.i_o).unwrap();
        let zo = CohomologyClass::new(&ro, 2, res[2].mul_vec(&zeta.coeffs)).unwrap();
        let lo = if zo.is_zero() {
            ro.syzygy(2).unwrap().direct_sum(&ro.syzygy(1).unwrap()).unwrap()
        } else {
            carlson_module(&ro, &zo).unwrap()
        };
        let (core, _) = restricted.split_free().unwrap();
        let (core_o, _) = lo.split_free().unwrap();
        if !is_isomorphic(&core, &core_o, SEED).unwrap() {
            return Err(format!("restriction of L_zeta for {coeffs:?} is not L_zeta_O plus free"));
        }
        count += 1;
    }
    Ok(count)
}

fn criterion_6() -> Outcome {
    let p = SuiteParams {
        carlson_degrees: vec![2],
        ..params(&[1, 2])
    };
    let r = suite_carlson(&case("Ga:n=1,p=2,r=1"), &p).map_err(|e| e.to_string())?;
    let summary = check_reports(&[r])?;
    let n = carlson_restriction()?;
    Ok(format!("{summary}; {n} restrictions split"))
}

fn criterion_7() -> Outcome {
    let cases = SuiteName::ModuleClasses.default_cases();
    let cases: Vec<&str> = cases.iter().map(|s| s.as_str()).collect();
    let reports = run_all(suite_module_classes, &cases, &params(&[1, 2]))?;
    check_reports(&reports)
}

/// A p-nilpotent matrix with known Jordan type: blocks conjugated by a
/// random invertible matrix whose columns are the Jordan basis.
fn jordan_sample(f: &Field, p: usize, rng: &mut ChaCha8Rng) -> (Matrix, Matrix, Matrix, Partition) {
    let n = rng.gen_range(1..=12);
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left.min(p));
        parts.push(s);
        left -= s;
    }
    let mut j = Matrix::zeros(f, n, n);
    let mut at = 0;
    for &s in &parts {
        for i in 0..s - 1 {
            j.set(at + i + 1, at + i, 1);
        }
        at += s;
    }
    let (c, ci) = loop {
        let c = Matrix::random(f, n, n, rng);
        if let Some(ci) = c.inverse() {
            break (c, ci);
        }
    };
    let a = c.mul(&j).unwrap().mul(&ci).unwrap();
    (a, c, j, Partition::new(parts))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for p in [2u32, 3, 5] {
        let f = Field::new(p, 1).unwrap();
        for i in 0..JORDAN_SAMPLES {
            let (a, c, j, want) = jordan_sample(&f, p as usize, &mut rng);
            if a.mul(&c).unwrap() != c.mul(&j).unwrap() {
                return Err(format!("p={p} sample {i}: oracle basis is not a Jordan basis"));
            }
            let got = jordan_type(&a, p).map_err(|e| e.to_string())?;
            if got != want {
                return Err(format!("p={p} sample {i}: jordan_type {got:?}, oracle {want:?}"));
            }
        }
    }
    let cases = [
        "Ga:n=1,p=2,r=1",
        "Ga:n=1,p=2,r=2",
        "Ga:n=1,p=3,r=1",
        "Ga:n=1,p=3,r=2",
        "Ga:n=1,p=5,r=1",
        "Ga:n=2,p=2,r=1",
        "Ga:n=3,p=2,r=1",
        "Heis3:p=2,r=1",
        "Heis3:p=3,r=1",
        "Gm:p=2,r=1",
        "Gm:p=2,r=2",
        "Gm:p=3,r=1",
    ];
    let mut algebras = 0;
    let mut skipped = 0;
    for c in cases {
        let b = KernelBundle::build(case(c)).map_err(|e| format!("{c}: {e}"))?;
        for s in [&b.double, &b.extended, &b.o] {
            let dense = match s.dense_realization() {
                Ok(d) => d,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            let lazy = Algebra::from(s.clone());
            let q = s.field().order();
            let d = s.dim();
            let element = |rng: &mut ChaCha8Rng| -> Vec<Elem> {
                if d <= DENSE_ELEMENTS_UP_TO {
                    return (0..d).map(|_| rng.gen_range(0..q) as Elem).collect();
                }
                let mut v = vec![0; d];
                for _ in 0..SPARSE_TERMS {
                    v[rng.gen_range(0..d)] = rng.gen_range(1..q) as Elem;
                }
                v
            };
            for _ in 0..SMASH_PAIRS {
                let (x, y) = (element(&mut rng), element(&mut rng));
                if lazy.mul(&x, &y) != dense.mul(&x, &y) {
                    return Err(format!("{}: lazy and dense products differ", s.name()));
                }
            }
            algebras += 1;
        }
    }
    Ok(format!(
        "{} Jordan samples; {SMASH_PAIRS} pairs on each of {algebras} smash products ({skipped} above the dense guard)",
        3 * JORDAN_SAMPLES
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("fp1 commuting-triple fuzz", criterion_1),
        ("tensor product property, both coproducts", criterion_2),
        ("projectivity detection", criterion_3),
        ("structure maps", criterion_4),
        ("Betti numbers and growth", criterion_5),
        ("Carlson supports and restriction", criterion_6),
        ("module classes", criterion_7),
        ("Jordan and smash oracles", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {} PASS {name}: {msg} [{secs:.1} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {msg} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
