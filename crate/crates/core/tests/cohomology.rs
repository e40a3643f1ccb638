use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fwb_core::cohomology::*;
use fwb_core::field_linalg::{Elem, Field, Matrix};
use fwb_core::hopf::{tensor_algebra, Algebra, AlgebraMorphism};
use fwb_core::kernels::*;
use fwb_core::modules::*;
use fwb_core::pi_points::*;
use fwb_core::Error;

fn f(p: u32, e: u32) -> Field {
    Field::new(p, e).unwrap()
}

/// k[x]/x^{p^s}.
fn truncated(p: u32, s: u32) -> Algebra {
    Algebra::from(coordinate_algebra(&GroupSchemeSpec::additive(1, p).unwrap(), s).unwrap())
}

fn bundle(s: &str) -> KernelBundle {
    KernelBundle::build(s.parse().unwrap()).unwrap()
}

fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    (0..a.len().min(b.len())).map(|n| (0..=n).map(|i| a[i] * b[n - i]).sum()).collect()
}

/// Positions of the nonzero coordinates of an algebra element.
fn support_of(x: &[Elem]) -> Vec<usize> {
    x.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| i).collect()
}

/// D̃ → B, `b # h ↦ ε(h) b`.
fn kill_group_part(b: &KernelBundle) -> AlgebraMorphism {
    let dt = Algebra::from(b.extended.clone());
    let base = Algebra::from(b.extended.b().clone());
    let h = b.extended.h().clone();
    let dh = h.dim();
    AlgebraMorphism::from_fn("kill_h", dt, base.clone(), |idx| {
        let (i, j) = (idx / dh, idx % dh);
        let mut v = base.zero_vec();
        v[i] = h.augmentation()[j];
        v
    })
    .unwrap()
}

#[test]
fn dual_numbers_resolution() {
    let a = truncated(2, 1);
    let res = resolve_trivial(&a, 6).unwrap();
    assert_eq!(res.betti(), &[1; 7]);
    let u = idx(&a, "x");
    for n in 1..=6 {
        assert_eq!(support_of(res.differential(n).entry(0, 0)), vec![u]);
    }
}

#[test]
fn truncated_polynomial_differentials_alternate() {
    for (p, s) in [(2, 2), (3, 1), (3, 2), (5, 1)] {
        let a = truncated(p, s);
        let m = a.dim();
        let res = resolve_trivial(&a, 6).unwrap();
        assert_eq!(res.betti(), &[1; 7]);
        for n in 1..=6 {
            let e = res.differential(n).entry(0, 0).to_vec();
            let power = if n % 2 == 1 { 1 } else { m - 1 };
            let want = idx(&a, &if power == 1 { "x".to_string() } else { format!("x^{power}") });
            assert_eq!(support_of(&e), vec![want], "p={p} s={s} n={n}");
        }
    }
}

#[test]
fn extended_double_betti_linear() {
    for p in [2, 3] {
        let b = bundle(&format!("Ga:n=1,p={p},r=1"));
        let dt = Algebra::from(b.extended.clone());
        let series = poincare_series(&dt, 6).unwrap();
        assert_eq!(series.betti, (1..=7).collect::<Vec<_>>());
        assert_eq!(series.growth_degree, Some(1));
        let o = poincare_series(&Algebra::from(b.o.clone()), 6).unwrap();
        assert_eq!(o.betti, series.betti);
    }
    let line = poincare_series(&truncated(3, 1), 8).unwrap();
    assert_eq!((line.betti, line.growth_degree), (vec![1; 9], Some(0)));
    assert!(line_csv_ok(&poincare_series(&truncated(2, 1), 2).unwrap().to_csv()));
}

fn line_csv_ok(s: &str) -> bool {
    s == "degree,betti\n0,1\n1,1\n2,1\n"
}

#[test]
fn growth_degree_fit() {
    assert_eq!(growth_degree(&[1, 1, 1, 1]), Some(0));
    assert_eq!(growth_degree(&[1, 2, 3, 4, 5]), Some(1));
    assert_eq!(growth_degree(&[1, 3, 6, 10, 15, 21]), Some(2));
    assert_eq!(growth_degree(&[1]), None);
}

#[test]
fn kunneth_on_tensor_products() {
    for p in [2, 3] {
        let pieces = [
            truncated(p, 1),
            truncated(p, 2),
            Algebra::from(group_algebra(&GroupSchemeSpec::additive(1, p).unwrap(), 1).unwrap()),
            Algebra::from(divided_power_algebra(p, 2).unwrap()),
        ];
        for a in &pieces {
            for b in &pieces {
                let (da, db) = (a.as_dense().unwrap(), b.as_dense().unwrap());
                if da.dim() * db.dim() > 27 {
                    continue;
                }
                let ab = Algebra::from(tensor_algebra(da, db, "ab").unwrap());
                let len = 8;
                let ba = resolve_trivial(a, len).unwrap();
                let bb = resolve_trivial(b, len).unwrap();
                let bab = resolve_trivial(&ab, len).unwrap();
                assert_eq!(bab.betti(), convolve(ba.betti(), bb.betti()), "{} ⊗ {}", a.name(), b.name());
            }
        }
    }
    let two = bundle("Ga:n=2,p=2,r=1");
    let res = resolve_trivial(&Algebra::from(two.extended.clone()), 4).unwrap();
    assert_eq!(res.betti(), &[1, 4, 10, 20, 35]);
}

#[test]
fn resolutions_of_modules() {
    let a = truncated(2, 2);
    let k = f(2, 1);
    let reg = FDModule::regular(&a, &k).unwrap();
    assert_eq!(minimal_resolution(&reg, 3).unwrap().betti(), &[1, 0, 0, 0]);
    let x2 = a.basis_vec(idx(&a, "x^2"));
    let span = reg.submodule_span(&[x2]);
    let half = reg.quotient(span.basis()).unwrap();
    let res = minimal_resolution(&half, 4).unwrap();
    assert_eq!(res.betti(), &[1; 5]);
    let dump = res.dump();
    assert_eq!(dump.labels.len(), 4);
    let json = serde_json::to_string(&dump).unwrap();
    let back: ResolutionDump = serde_json::from_str(&json).unwrap();
    assert_eq!(back.differentials, dump.differentials);
}

#[test]
fn resolution_guards() {
    let k = f(2, 1);
    let a = truncated(2, 1);
    assert!(matches!(resolve_trivial(&a, 13), Err(Error::Guard { .. })));
    let gm = Algebra::from(group_algebra(&GroupSchemeSpec::multiplicative(3).unwrap(), 1).unwrap());
    assert!(matches!(resolve_trivial(&gm, 2), Err(Error::NotLocal(_))));
    let big = FDModule::free(&a, &k, 65).unwrap();
    assert!(matches!(minimal_resolution(&big, 1), Err(Error::Guard { .. })));
}

#[test]
fn pullback_examples() {
    let a = truncated(2, 1);
    let k = f(2, 1);
    let res = resolve_trivial(&a, 3).unwrap();
    let u = a.basis_vec(idx(&a, "x"));
    let id = TruncatedLineMap { field: k.clone(), image: u.clone() };
    let zero = CohomologyClass::new(&res, 1, vec![0]).unwrap();
    assert!(pullback_class(&res, &id, &zero).unwrap().is_zero());
    let gen = CohomologyClass::basis(&res, 1, 0).unwrap();
    assert!(!pullback_class(&res, &id, &gen).unwrap().is_zero());
    let not_flat = TruncatedLineMap { field: k, image: a.zero_vec() };
    assert!(pullback_class(&res, &not_flat, &gen).is_err());
}

/// The degree-2 class inflated from the polynomial factor of D̃(G_a(1)).
fn polynomial_class(b: &KernelBundle, res: &FreeResolution) -> CohomologyClass {
    let pi = kill_group_part(b);
    let base = resolve_trivial(pi.target(), 2).unwrap();
    let maps = restriction_on_cohomology(&pi, res, &base, 2).unwrap();
    let coeffs = maps[2].mul_vec(&[1]);
    CohomologyClass::new(res, 2, coeffs).unwrap()
}

#[test]
fn pullback_of_polynomial_class() {
    let b = Arc::new(bundle("Ga:n=1,p=2,r=1"));
    let c = PiPoints::new(b.clone());
    let dt = c.extended();
    let res = resolve_trivial(&dt, 2).unwrap();
    let zeta = polynomial_class(&b, &res);
    assert!(!zeta.is_zero());
    let k = f(2, 1);
    let at = |alpha: Elem, beta: Elem| {
        let pr = PiPointPair::new(k.desc().clone(), vec![alpha], vec![beta], BetaSubgroup::Whole).unwrap();
        let image = c.combined_in_extended(&pr).unwrap();
        pullback_class(&res, &TruncatedLineMap { field: k.clone(), image }, &zeta).unwrap()
    };
    assert!(at(0, 1).is_zero());
    assert!(!at(1, 0).is_zero());
}

#[test]
fn restriction_identity_and_injectivity() {
    let b = bundle("Ga:n=1,p=2,r=1");
    let dt = Algebra::from(b.extended.clone());
    let rd = resolve_trivial(&dt, 6).unwrap();
    for (n, m) in restriction_on_cohomology(&AlgebraMorphism::identity(&dt), &rd, &rd, 4)
        .unwrap()
        .iter()
        .enumerate()
    {
        assert_eq!(m, &Matrix::identity(rd.field(), rd.betti()[n]));
    }
    let ro = resolve_trivial(&b.i_o.source().clone(), 6).unwrap();
    let io = restriction_on_cohomology(&b.i_o, &ro, &rd, 6).unwrap();
    let long = resolve_trivial(&dt, 12).unwrap();
    for n in [0, 2, 4, 6] {
        // η ⊗ v dies on O, so the kernel is nonzero from degree 2 on
        let kernel = io[n].kernel_vectors();
        assert_eq!(io[n].rank() + kernel.len(), rd.betti()[n]);
        for v in kernel {
            let zeta = CohomologyClass::new(&long, n, v).unwrap();
            assert_eq!(nilpotency_index(&long, &zeta).unwrap(), Some(2), "degree {n}");
        }
    }
    let rank2 = io[2].rank();
    assert_eq!((rank2, rd.betti()[2]), (2, 3));
    let d = Algebra::from(b.double.clone());
    let rq = resolve_trivial(&d, 1).unwrap();
    let rd1 = resolve_trivial(&dt, 1).unwrap();
    let q = restriction_on_cohomology(&b.q, &rd1, &rq, 1).unwrap();
    assert_eq!(q[1].rank(), rq.betti()[1]);
}

#[test]
fn restriction_is_functorial() {
    let b = bundle("Ga:n=1,p=2,r=1");
    let o = b.i_o.source().clone();
    let dt = b.i_o.target().clone();
    let d = Algebra::from(b.double.clone());
    let (ro, rdt, rd) = (
        resolve_trivial(&o, 4).unwrap(),
        resolve_trivial(&dt, 4).unwrap(),
        resolve_trivial(&d, 4).unwrap(),
    );
    let comp = b.q.after(&b.i_o).unwrap();
    let direct = restriction_on_cohomology(&comp, &ro, &rd, 4).unwrap();
    let first = restriction_on_cohomology(&b.i_o, &ro, &rdt, 4).unwrap();
    let second = restriction_on_cohomology(&b.q, &rdt, &rd, 4).unwrap();
    for n in 0..=4 {
        assert_eq!(direct[n], first[n].mul(&second[n]).unwrap(), "degree {n}");
    }
}

#[test]
fn carlson_small_cases() {
    let a = truncated(2, 1);
    let res = resolve_trivial(&a, 2).unwrap();
    let zeta = CohomologyClass::basis(&res, 2, 0).unwrap();
    let l = carlson_module(&res, &zeta).unwrap();
    assert_eq!(l.dim(), res.syzygy(2).unwrap().dim() - 1);
    assert_eq!(l.dim(), 0);
    let zero = CohomologyClass::new(&res, 2, vec![0]).unwrap();
    assert!(carlson_module(&res, &zero).is_err());
    let odd = CohomologyClass::basis(&res, 1, 0).unwrap();
    assert!(carlson_module(&res, &odd).is_err());

    let b = bundle("Ga:n=1,p=2,r=1");
    let rd = resolve_trivial(&Algebra::from(b.extended.clone()), 2).unwrap();
    for i in 0..3 {
        let zeta = CohomologyClass::basis(&rd, 2, i).unwrap();
        let l = carlson_module(&rd, &zeta).unwrap();
        assert_eq!(l.dim(), rd.syzygy(2).unwrap().dim() - 1);
        l.check_relations().unwrap();
    }
}

/// All nonzero classes of a given degree over the prime field.
fn nonzero_classes(res: &FreeResolution, n: usize) -> Vec<CohomologyClass> {
    let b = res.betti()[n];
    let p = res.field().p() as usize;
    (1..p.pow(b as u32))
        .map(|mut code| {
            let coeffs = (0..b)
                .map(|_| {
                    let c = (code % p) as Elem;
                    code /= p;
                    c
                })
                .collect();
            CohomologyClass::new(res, n, coeffs).unwrap()
        })
        .collect()
}

#[test]
fn carlson_support_is_zero_locus() {
    let b = Arc::new(bundle("Ga:n=1,p=2,r=1"));
    let c = PiPoints::new(b.clone());
    let res = resolve_trivial(&c.extended(), 2).unwrap();
    for zeta in nonzero_classes(&res, 2) {
        let l = carlson_module(&res, &zeta).unwrap();
        for e in [1, 2] {
            let fam = Family::standard(b.case, e).unwrap();
            let k = fam.field().unwrap();
            let support = c.support(&l, &fam).unwrap();
            let locus: Vec<Vec<Elem>> = fam
                .points()
                .unwrap()
                .into_iter()
                .filter(|pt| {
                    let pr = fam.pair(pt).unwrap();
                    let image = c.combined_in_extended(&pr).unwrap();
                    let map = TruncatedLineMap { field: k.clone(), image };
                    pullback_class(&res, &map, &zeta).unwrap().is_zero()
                })
                .collect();
            assert_eq!(support.points, locus, "ζ = {:?}, F_2^{e}", zeta.coeffs);
        }
    }
}

#[test]
fn carlson_restricts_to_o() {
    let b = bundle("Ga:n=1,p=2,r=1");
    let o = b.i_o.source().clone();
    let rd = resolve_trivial(b.i_o.target(), 2).unwrap();
    let ro = resolve_trivial(&o, 2).unwrap();
    let res = restriction_on_cohomology(&b.i_o, &ro, &rd, 2).unwrap();
    for zeta in nonzero_classes(&rd, 2) {
        let restricted = carlson_module(&rd, &zeta).unwrap().restrict_along(&b.i_o).unwrap();
        let zo = CohomologyClass::new(&ro, 2, res[2].mul_vec(&zeta.coeffs)).unwrap();
        // a class dying on O leaves Ω² ⊕ Ω, the kernel of a stably zero map
        let lo = if zo.is_zero() {
            ro.syzygy(2).unwrap().direct_sum(&ro.syzygy(1).unwrap()).unwrap()
        } else {
            carlson_module(&ro, &zo).unwrap()
        };
        let (core, _) = restricted.split_free().unwrap();
        let (core_o, _) = lo.split_free().unwrap();
        assert!(is_isomorphic(&core, &core_o, 7).unwrap(), "ζ = {:?}", zeta.coeffs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pullback_is_linear(seed in any::<u64>()) {
        let b = Arc::new(bundle("Ga:n=1,p=3,r=1"));
        let c = PiPoints::new(b.clone());
        let res = resolve_trivial(&c.extended(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = f(3, 1);
        let n = rng.gen_range(1..=2usize);
        let rand_class = |rng: &mut ChaCha8Rng| {
            let v = (0..res.betti()[n]).map(|_| rng.gen_range(0..3)).collect();
            CohomologyClass::new(&res, n, v).unwrap()
        };
        let (z1, z2) = (rand_class(&mut rng), rand_class(&mut rng));
        let (s, t): (Elem, Elem) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let sum: Vec<Elem> = z1.coeffs.iter().zip(&z2.coeffs).map(|(&a, &b)| k.add(k.mul(s, a), k.mul(t, b))).collect();
        let z = CohomologyClass::new(&res, n, sum).unwrap();
        let fam = Family::standard(b.case, 1).unwrap();
        let pts = fam.points().unwrap();
        let pt = &pts[rng.gen_range(0..pts.len())];
        let image = c.combined_in_extended(&fam.pair(pt).unwrap()).unwrap();
        let map = TruncatedLineMap { field: k.clone(), image };
        let (a, bb, ab) = (
            pullback_class(&res, &map, &z1).unwrap(),
            pullback_class(&res, &map, &z2).unwrap(),
            pullback_class(&res, &map, &z).unwrap(),
        );
        prop_assert_eq!(ab.coeffs, vec![k.add(k.mul(s, a.coeffs[0]), k.mul(t, bb.coeffs[0]))]);
    }

    #[test]
    fn pullback_is_functorial(seed in any::<u64>()) {
        let b = Arc::new(bundle("Ga:n=1,p=2,r=1"));
        let c = PiPoints::new(b.clone());
        let o = c.o();
        let (ro, rd) = (resolve_trivial(&o, 4).unwrap(), resolve_trivial(&c.extended(), 4).unwrap());
        let io = restriction_on_cohomology(&b.i_o, &ro, &rd, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4usize);
        let v: Vec<Elem> = (0..rd.betti()[n]).map(|_| rng.gen_range(0..2)).collect();
        let zeta = CohomologyClass::new(&rd, n, v).unwrap();
        let zo = CohomologyClass::new(&ro, n, io[n].mul_vec(&zeta.coeffs)).unwrap();
        let fam = Family::standard(b.case, 2).unwrap();
        let k = fam.field().unwrap();
        let pts = fam.points().unwrap();
        let pr = fam.pair(&pts[rng.gen_range(0..pts.len())]).unwrap();
        let in_o = TruncatedLineMap { field: k.clone(), image: c.combined_element(&pr).unwrap() };
        let in_d = TruncatedLineMap { field: k, image: c.combined_in_extended(&pr).unwrap() };
        prop_assert_eq!(
            pullback_class(&ro, &in_o, &zo).unwrap(),
            pullback_class(&rd, &in_d, &zeta).unwrap()
        );
    }
}

fn idx(a: &Algebra, label: &str) -> usize {
    (0..a.dim()).find(|&i| a.label(i) == label).unwrap()
}

#[test]
fn yoneda_products_on_truncated_polynomials() {
    let res = resolve_trivial(&truncated(2, 1), 8).unwrap();
    let w = CohomologyClass::basis(&res, 1, 0).unwrap();
    assert_eq!(nilpotency_index(&res, &w).unwrap(), None);
    assert_eq!(yoneda_product(&res, &w, &w).unwrap().coeffs, vec![1]);

    let res = resolve_trivial(&truncated(2, 2), 8).unwrap();
    let eta = CohomologyClass::basis(&res, 1, 0).unwrap();
    let z = CohomologyClass::basis(&res, 2, 0).unwrap();
    assert_eq!(nilpotency_index(&res, &eta).unwrap(), Some(2));
    assert_eq!(nilpotency_index(&res, &z).unwrap(), None);
    assert!(!yoneda_product(&res, &eta, &z).unwrap().is_zero());

    let res = resolve_trivial(&truncated(3, 1), 6).unwrap();
    let eta = CohomologyClass::basis(&res, 1, 0).unwrap();
    assert_eq!(nilpotency_index(&res, &eta).unwrap(), Some(2));
}
