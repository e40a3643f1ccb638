use fwb_core::hopf::{canonical_json, check_algebra_axioms, check_hopf_axioms, AlgebraFile};
use fwb_core::kernels::{BundleFile, CaseId, KernelBundle};

fn bundle(s: &str) -> KernelBundle {
    KernelBundle::build(s.parse::<CaseId>().unwrap()).unwrap()
}

#[test]
fn bundles_round_trip_bit_exactly() {
    for s in ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Gm:p=2,r=1", "Heis3:p=2,r=1"] {
        let b = bundle(s);
        let file = b.to_file();
        let text = canonical_json(&file).unwrap();
        let parsed: BundleFile = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, file, "{s}");
        let back = KernelBundle::from_file(&parsed).unwrap();
        assert_eq!(back.dims(), b.dims());
        assert_eq!(canonical_json(&back.to_file()).unwrap(), text, "{s}");
    }
}

#[test]
fn reloaded_algebras_pass_axioms() {
    let b = bundle("Ga:n=1,p=2,r=1");
    assert_eq!(b.dims(), [2, 2, 4, 8, 4]);
    for a in [&b.coord, &b.group] {
        let back = AlgebraFile::from_algebra(a).load().unwrap();
        assert!(check_algebra_axioms(&back, 1).ok());
        assert!(check_hopf_axioms(&back, 1).ok());
        assert_eq!(AlgebraFile::from_algebra(&back), AlgebraFile::from_algebra(a));
    }
}

#[test]
fn multiplicative_coordinate_ring() {
    // k[x]/(x^2 - 1) at p = 2, stored in the local coordinate y = x - 1
    let b = bundle("Gm:p=2,r=1");
    let a = &b.coord;
    assert_eq!(a.dim(), 2);
    let u = a.unit().to_vec();
    let y = (0..2).map(|i| a.basis_vec(i)).find(|v| *v != u).unwrap();
    let x: Vec<u16> = u.iter().zip(&y).map(|(s, t)| (s + t) % 2).collect();
    assert_eq!(a.mul(&x, &x), u);
    assert_ne!(x, u);
}

#[test]
fn corrupted_files_are_rejected() {
    let b = bundle("Ga:n=1,p=2,r=1");
    let mut f = b.to_file();
    f.dims[3] = 9;
    assert!(KernelBundle::from_file(&f).is_err());
    let mut f = b.to_file();
    f.extended.action.retain(|t| t.0 == 0);
    assert!(KernelBundle::from_file(&f).is_err());
    let mut f = b.to_file();
    f.i_o.images.pop();
    assert!(KernelBundle::from_file(&f).is_err());
    let mut f = b.to_file();
    f.coord.mult[0].2 = vec![5];
    assert!(KernelBundle::from_file(&f).is_err());
}
