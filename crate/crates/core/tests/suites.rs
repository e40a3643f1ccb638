use std::path::PathBuf;
use std::sync::Arc;

use fwb_core::field_linalg::{Field, Matrix};
use fwb_core::kernels::{CaseId, KernelBundle};
use fwb_core::modules::{is_isomorphic, CoproductChoice, FDModule};
use fwb_core::pi_points::{Family, PiPoints};
use fwb_core::suites::battery::{
    battery, battery_file_name, battery_from_json, battery_to_json, generate_battery, order_ideals, stored_battery,
};
use fwb_core::suites::fp1::Triple;
use fwb_core::suites::{run_suite, suite_fp1, SuiteName, SuiteParams};

const BATTERY_CASES: [&str; 3] = ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Heis3:p=3,r=1"];

fn case(s: &str) -> CaseId {
    s.parse().unwrap()
}

fn mat(f: &Field, rows: &[&[u16]]) -> Matrix {
    Matrix::from_rows(f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Set FWB_WRITE_BATTERIES=1 to rewrite the stored batteries.
#[test]
fn stored_batteries_match_generator() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/batteries");
    for s in BATTERY_CASES {
        let c = case(s);
        let (target, mods) = generate_battery(&c).unwrap();
        let text = battery_to_json(&c, target, &mods).unwrap();
        if std::env::var("FWB_WRITE_BATTERIES").is_ok() {
            std::fs::write(dir.join(battery_file_name(&c)), &text).unwrap();
            continue;
        }
        assert_eq!(stored_battery(&c).unwrap(), text, "{s}");
        let bundle = KernelBundle::build(c).unwrap();
        let (t2, back) = battery_from_json(&text, &bundle).unwrap();
        assert_eq!(t2, target);
        assert_eq!(back.len(), mods.len());
        for (a, b) in back.iter().zip(&mods) {
            assert_eq!(a.name(), b.name());
            assert_eq!(a.dim(), b.dim());
            assert!(is_isomorphic(a, b, 1).unwrap());
        }
    }
}

#[test]
fn battery_contents() {
    let bundle = Arc::new(KernelBundle::build(case("Ga:n=1,p=2,r=1")).unwrap());
    let (_, mods) = battery(&bundle).unwrap();
    assert_eq!(mods[0].dim(), 1);
    assert!(mods.iter().all(|m| m.dim() <= 8));
    // nonempty staircases 4 >= a >= b >= 0 in the 4 x 2 box
    let staircases = (0..=4).flat_map(|a| (0..=a).map(move |b| (a, b))).filter(|&(a, _)| a > 0).count();
    assert_eq!(order_ideals(&[4, 2], 8).len(), staircases);
    let bundle = Arc::new(KernelBundle::build(case("Ga:n=1,p=3,r=1")).unwrap());
    let (_, mods) = battery(&bundle).unwrap();
    assert!(mods.iter().any(|m| m.dim() == 27));
}

#[test]
fn fp1_hand_examples() {
    let f = Field::new(2, 1).unwrap();
    let z = mat(&f, &[&[0, 0], &[0, 0]]);
    let n = mat(&f, &[&[0, 0], &[1, 0]]);
    // α = 0, β = γ = 0 on k: both non-projective
    let t = Triple { alpha: mat(&f, &[&[0]]), beta: mat(&f, &[&[0]]), gamma: mat(&f, &[&[0]]) };
    t.check(2, 1).unwrap();
    assert_eq!(t.verdicts(2).unwrap(), (false, false));
    // α a Jordan block: projective, and stays so after a nilpotent shift
    let t = Triple { alpha: n.clone(), beta: n.clone(), gamma: n.clone() };
    t.check(2, 1).unwrap();
    assert_eq!(t.verdicts(2).unwrap(), (true, true));
    let t = Triple { alpha: z.clone(), beta: n.clone(), gamma: mat(&f, &[&[1, 0], &[0, 1]]) };
    assert!(t.check(2, 1).is_err() || t.verdicts(2).unwrap() == (false, true));
    let t = Triple { alpha: n.clone(), beta: z.clone(), gamma: z };
    assert_eq!(t.verdicts(2).unwrap(), (true, true));
}

#[test]
fn fp1_fuzz_at_three() {
    let r = suite_fp1(3, 12, 1000, 7).unwrap();
    assert_eq!(r.trials, 1000);
    assert!(r.pass, "{:?}", &r.counterexamples[..r.counterexamples.len().min(2)]);
}

#[test]
fn fp1_reports_are_reproducible() {
    let a = suite_fp1(2, 8, 50, 11).unwrap();
    let b = suite_fp1(2, 8, 50, 11).unwrap();
    assert_eq!(a.canonical_json().unwrap(), b.canonical_json().unwrap());
    let c = suite_fp1(2, 8, 50, 12).unwrap();
    assert_ne!(a.canonical_json().unwrap(), c.canonical_json().unwrap());
}

#[test]
fn tensor_with_trivial_module() {
    let c = case("Ga:n=1,p=2,r=1");
    let pp = PiPoints::new(Arc::new(KernelBundle::build(c).unwrap()));
    let bundle = Arc::new(pp.bundle().clone());
    let (_, mods) = battery(&bundle).unwrap();
    let k = &mods[0];
    let fam = Family::standard(c, 1).unwrap();
    for m in &mods[1..6] {
        let t = m.tensor(k, CoproductChoice::HopfCoproduct).unwrap();
        assert!(is_isomorphic(&t, m, 1).unwrap());
        assert_eq!(pp.support(&t, &fam).unwrap().points, pp.support(m, &fam).unwrap().points);
    }
}

#[test]
fn inflated_regular_support_is_beta_zero() {
    let c = case("Ga:n=1,p=2,r=1");
    let pp = PiPoints::new(Arc::new(KernelBundle::build(c).unwrap()));
    let b = pp.bundle();
    let f = Field::new(2, 1).unwrap();
    let dt = pp.extended();
    let h = b.extended.h();
    let nb = b.extended.b().generators().len();
    let mut actions = vec![Matrix::zeros(&f, h.dim(), h.dim()); nb];
    for &g in h.generators() {
        actions.push(h.left_mult_matrix(&h.basis_vec(g)).base_change(&f).unwrap());
    }
    let m = FDModule::new("inflated", dt, &f, actions).unwrap();
    let fam = Family::standard(c, 1).unwrap();
    assert_eq!(pp.support(&m, &fam).unwrap().points, vec![vec![1, 0]]);
}

#[test]
fn suite_names_round_trip() {
    for n in SuiteName::ALL {
        assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        assert!(!n.default_cases().is_empty());
    }
    assert!("nope".parse::<SuiteName>().is_err());
}

#[test]
fn structure_maps_pass() {
    let params = SuiteParams::default();
    for c in ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Heis3:p=2,r=1"] {
        let r = run_suite(SuiteName::StructureMaps, c, &params).unwrap();
        assert!(r.pass, "{c}: {:?}", r.counterexamples);
        assert_eq!(r.trials, 6);
    }
}

#[test]
fn small_suites_pass() {
    let params = SuiteParams { field_degrees: vec![1], ..SuiteParams::default() };
    for name in [SuiteName::ProjectivityDetection, SuiteName::TensorProperty, SuiteName::ModuleClasses] {
        let r = run_suite(name, "Ga:n=1,p=2,r=1", &params).unwrap();
        assert!(r.pass, "{name}: {:?}", r.counterexamples);
        assert!(r.trials > 0);
    }
}

#[test]
fn carlson_suite_small() {
    let params = SuiteParams { field_degrees: vec![1], carlson_degrees: vec![2], ..SuiteParams::default() };
    let r = run_suite(SuiteName::Carlson, "Ga:n=1,p=2,r=1", &params).unwrap();
    assert!(r.pass, "{:?}", r.counterexamples);
    assert!(r.trials > 0);
}
