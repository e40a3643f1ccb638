use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fwb_core::field_linalg::{jordan_type, Elem, Field, Matrix, Partition};
use fwb_core::hopf::Algebra;
use fwb_core::kernels::*;
use fwb_core::modules::*;
use fwb_core::pi_points::*;
use fwb_core::Error;

fn ctx(s: &str) -> PiPoints {
    PiPoints::build(s.parse().unwrap()).unwrap()
}

fn f(p: u32, e: u32) -> Field {
    Field::new(p, e).unwrap()
}

fn pair(field: &Field, alpha: &[Elem], beta: &[Elem], sel: BetaSubgroup) -> PiPointPair {
    PiPointPair::new(field.desc().clone(), alpha.to_vec(), beta.to_vec(), sel).unwrap()
}

/// Dense left multiplication matrix of `x` on the regular module, built
/// from the product of basis elements over the prime field.
fn dense_left_mult(alg: &Algebra, k: &Field, x: &[Elem]) -> Matrix {
    let d = alg.dim();
    let mut m = Matrix::zeros(k, d, d);
    for (i, &c) in x.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for col in 0..d {
            let prod = alg.mul(&alg.basis_vec(i), &alg.basis_vec(col));
            for (row, &v) in prod.iter().enumerate() {
                if v != 0 {
                    m.set(row, col, k.add(m.get(row, col), k.mul(c, v)));
                }
            }
        }
    }
    m
}

/// k[x]/x^2 ⊗ k[u]/u^2 over D̃(G_a(1)) at p = 2, a quotient of the regular
/// module by the submodule generated by x^2.
fn half_module(c: &PiPoints) -> FDModule {
    let d = c.extended();
    let reg = FDModule::regular(&d, &f(2, 1)).unwrap();
    let x2 = (0..d.dim()).find(|&i| d.label(i) == "x^2#δ(1)").unwrap();
    let span = reg.submodule_span(&[d.basis_vec(x2)]);
    reg.quotient(span.basis()).unwrap()
}

#[test]
fn combined_element_ga() {
    let c = ctx("Ga:n=1,p=2,r=1");
    let o = c.o();
    let x = c.combined_element(&pair(&f(2, 1), &[1], &[1], BetaSubgroup::Whole)).unwrap();
    let support: Vec<String> = (0..o.dim()).filter(|&i| x[i] != 0).map(|i| o.label(i)).collect();
    assert_eq!(support, vec!["1#δ(x)", "x^2#δ(1)"]);
    let a = c.combined_element(&pair(&f(2, 1), &[1], &[0], BetaSubgroup::Whole)).unwrap();
    assert_eq!(a, c.alpha_element(&pair(&f(2, 1), &[1], &[0], BetaSubgroup::Whole)).unwrap());
    let labels: Vec<String> = (0..o.dim()).filter(|&i| a[i] != 0).map(|i| o.label(i)).collect();
    assert_eq!(labels, vec!["x^2#δ(1)"]);
    assert!(matches!(
        PiPointPair::new(f(2, 1).desc().clone(), vec![0], vec![0], BetaSubgroup::Whole),
        Err(Error::Invalid(_))
    ));
}

#[test]
fn heisenberg_center_plus_axis_is_p_nilpotent() {
    let c = ctx("Heis3:p=3,r=1");
    let k = f(3, 1);
    let pr = pair(&k, &[0, 0, 1], &[1], BetaSubgroup::Axis(0));
    let x = c.combined_element(&pr).unwrap();
    let o = c.o();
    let x2 = o.mul(&x, &x);
    assert!(x2.iter().any(|&v| v != 0));
    assert!(o.mul(&x2, &x).iter().all(|&v| v == 0));
    let y = c.combined_in_extended(&pr).unwrap();
    let d = c.extended();
    let y3 = d.mul(&d.mul(&y, &y), &y);
    assert!(y3.iter().all(|&v| v == 0));
    assert!(c.certify_flat(&pr).unwrap());
}

#[test]
fn flatness_against_dense_rank() {
    let c = ctx("Ga:n=1,p=2,r=1");
    let o = c.o();
    let k = f(2, 1);
    let pr = pair(&k, &[1], &[0], BetaSubgroup::Whole);
    assert!(c.certify_flat(&pr).unwrap());
    let m = dense_left_mult(&o, &k, &c.combined_element(&pr).unwrap());
    assert_eq!(m.rank(), 2);
    assert!(c.certify_flat(&pair(&k, &[0], &[1], BetaSubgroup::Whole)).unwrap());

    for case in ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Ga:n=2,p=2,r=1", "Ga:n=1,p=2,r=2", "Heis3:p=2,r=1"] {
        let c = ctx(case);
        let fam = Family::standard(case.parse().unwrap(), 2).unwrap();
        let k = fam.field().unwrap();
        let p = k.p();
        for pt in fam.points().unwrap().into_iter().take(40) {
            let pr = fam.pair(&pt).unwrap();
            let m = dense_left_mult(&c.o(), &k, &c.combined_element(&pr).unwrap());
            let jt = jordan_type(&m, p).unwrap();
            let free = jt.parts().iter().all(|&b| b == p as usize);
            assert_eq!(c.certify_flat(&pr).unwrap(), free, "{case} {pt:?}");
        }
    }
}

#[test]
fn flat_in_extended_agrees_with_o() {
    for case in ["Ga:n=1,p=2,r=1", "Ga:n=1,p=3,r=1", "Heis3:p=2,r=1"] {
        let c = ctx(case);
        let fam = Family::standard(case.parse().unwrap(), 1).unwrap();
        for pt in fam.points().unwrap().into_iter().take(12) {
            let pr = fam.pair(&pt).unwrap();
            assert_eq!(
                c.certify_flat_in_extended(&pr).unwrap(),
                c.certify_flat(&pr).unwrap(),
                "{case} {pt:?}"
            );
        }
    }
}

#[test]
fn pullback_examples() {
    let c = ctx("Ga:n=1,p=2,r=1");
    let k = f(2, 1);
    let o = c.o();
    let triv = FDModule::trivial(&o, &k).unwrap();
    let pr = pair(&k, &[1], &[1], BetaSubgroup::Whole);
    let n = c.pullback(&triv, &pr).unwrap();
    assert_eq!((n.rows(), n.is_zero()), (1, true));

    let reg = FDModule::regular(&o, &k).unwrap();
    let n = c.pullback(&reg, &pr).unwrap();
    assert_eq!(n, dense_left_mult(&o, &k, &c.combined_element(&pr).unwrap()));

    let m = half_module(&c);
    assert_eq!(m.dim(), 4);
    let n = c.pullback(&m, &pair(&k, &[1], &[0], BetaSubgroup::Whole)).unwrap();
    assert!(n.is_zero());
    assert_eq!(jordan_type(&n, 2).unwrap(), Partition::uniform(1, 4));

    let wrong = FDModule::trivial(&Algebra::from(c.bundle().double.clone()), &k).unwrap();
    assert!(c.pullback(&wrong, &pr).is_err());
}

#[test]
fn support_examples() {
    let c = ctx("Ga:n=1,p=2,r=1");
    let case: CaseId = "Ga:n=1,p=2,r=1".parse().unwrap();
    let fam = Family::standard(case, 1).unwrap();
    let k = f(2, 1);
    let d = c.extended();
    let triv = c.support(&FDModule::trivial(&d, &k).unwrap(), &fam).unwrap();
    assert_eq!(triv.points, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert!(triv.is_whole_family());

    let half = c.support(&half_module(&c), &fam).unwrap();
    assert_eq!(half.points, vec![vec![1, 0]]);

    let reg = c.support(&FDModule::regular(&d, &k).unwrap(), &fam).unwrap();
    assert!(reg.points.is_empty());

    let mx = c.max_jordan_type(&half_module(&c), &fam).unwrap();
    assert_eq!(mx.top, Some(Partition::uniform(2, 2)));
    assert_ne!(mx.witnesses[0], vec![1, 0]);
    let mx = c.max_jordan_type(&FDModule::regular(&d, &k).unwrap(), &fam).unwrap();
    assert_eq!(mx.top, Some(Partition::uniform(2, 4)));
    let mx = c.max_jordan_type(&FDModule::trivial(&d, &k).unwrap(), &fam).unwrap();
    assert_eq!(mx.top, Some(Partition::uniform(1, 1)));

    let json = serde_json::to_string(&half).unwrap();
    let back: SupportSet = serde_json::from_str(&json).unwrap();
    assert_eq!(back, half);
}

#[test]
fn trivial_module_support_is_whole_family_for_heisenberg() {
    let case: CaseId = "Heis3:p=3,r=1".parse().unwrap();
    let c = PiPoints::build(case).unwrap();
    let k = f(3, 1);
    for sel in [BetaSubgroup::Axis(0), BetaSubgroup::Axis(2)] {
        let fam = Family::new(case, 1, sel).unwrap();
        let s = c.support(&FDModule::trivial(&c.extended(), &k).unwrap(), &fam).unwrap();
        assert_eq!(s.points.len() as u128, fam.point_count());
        assert!(s.is_whole_family());
    }
}

#[test]
fn families_and_guards() {
    let case: CaseId = "Ga:n=2,p=7,r=2".parse().unwrap();
    let fam = Family::standard(case, 2).unwrap();
    assert_eq!(fam.nparams(), 6);
    assert!(fam.point_count() > 1_000_000);
    assert!(matches!(fam.points(), Err(Error::Guard { .. })));
    let small = Family::standard("Ga:n=1,p=3,r=1".parse().unwrap(), 2).unwrap();
    let pts = small.points().unwrap();
    assert_eq!(pts.len(), 10);
    assert!(pts.windows(2).all(|w| w[0] < w[1]));
    assert!(pts.iter().all(|p| p.iter().find(|&&x| x != 0) == Some(&1)));
    assert!(Family::new("Gm:p=2,r=1".parse().unwrap(), 1, BetaSubgroup::Whole).is_err());
    assert!(Family::new("Heis3:p=3,r=1".parse().unwrap(), 1, BetaSubgroup::Whole).is_err());
    assert!(Family::new("Ga:n=1,p=2,r=1".parse().unwrap(), 3, BetaSubgroup::Whole).is_err());
    let gm = Family::standard("Gm:p=2,r=1".parse().unwrap(), 1).unwrap();
    assert_eq!((gm.alpha_len(), gm.beta_len()), (1, 0));
}

/// Two dim-2 O(G_a(1))-modules at p = 2: X = x^2 acting by a Jordan block
/// and u acting by zero, and the reverse.
fn axis_modules(c: &PiPoints) -> (FDModule, FDModule) {
    let o = c.o();
    let k = f(2, 1);
    let j = Matrix::from_ints(&k, 2, 2, &[0, 1, 0, 0]);
    let z = Matrix::zeros(&k, 2, 2);
    let xi = o.generators().iter().position(|&g| o.label(g).starts_with('x')).unwrap();
    let mut a = vec![z.clone(), z.clone()];
    a[xi] = j.clone();
    let mut b = vec![j.clone(), j];
    b[xi] = z;
    (
        FDModule::new("X", o.clone(), &k, a).unwrap(),
        FDModule::new("U", o, &k, b).unwrap(),
    )
}

#[test]
fn tensor_choices_agree_pointwise() {
    let c = ctx("Ga:n=1,p=2,r=1");
    let (m, n) = axis_modules(&c);
    let case = c.bundle().case;
    for (m, n) in [(&m, &n), (&m, &m), (&n, &n)] {
        let hopf = m.tensor(n, CoproductChoice::HopfCoproduct).unwrap();
        let group = m.tensor(n, CoproductChoice::GroupCoproduct).unwrap();
        for e in [1, 2] {
            let fam = Family::standard(case, e).unwrap();
            for pt in fam.points().unwrap() {
                let pr = fam.pair(&pt).unwrap();
                let a = jordan_type(&c.pullback(&hopf, &pr).unwrap(), 2).unwrap();
                let b = jordan_type(&c.pullback(&group, &pr).unwrap(), 2).unwrap();
                let free = |t: &Partition| t.parts().iter().all(|&x| x == 2);
                assert_eq!(free(&a), free(&b), "{pt:?}");
            }
        }
    }
}

/// Random module over D̃(G_a(1)) at p = 2: a sum of cyclic pieces of the
/// regular module and their quotients, in a random basis.
fn random_extended_module(c: &PiPoints, rng: &mut ChaCha8Rng) -> FDModule {
    let d = c.extended();
    let k = f(2, 1);
    let reg = FDModule::regular(&d, &k).unwrap();
    let pieces = rng.gen_range(1..3);
    let mut out: Option<FDModule> = None;
    for _ in 0..pieces {
        let v = d.random_element(2, rng);
        let w = d.random_element(2, rng);
        let cyc = reg.submodule_span(&[v]);
        let sub = reg.submodule(cyc.basis()).unwrap();
        let piece = if rng.gen_bool(0.5) && sub.dim() > 0 {
            let kill = sub.submodule_span(&[sub_vector(&sub, &w)]);
            sub.quotient(kill.basis()).unwrap()
        } else {
            sub
        };
        if piece.dim() == 0 {
            continue;
        }
        out = Some(match out {
            None => piece,
            Some(m) => m.direct_sum(&piece).unwrap(),
        });
    }
    out.unwrap_or_else(|| FDModule::trivial(&d, &k).unwrap())
}

fn sub_vector(m: &FDModule, w: &[Elem]) -> Vec<Elem> {
    let mut v = vec![0; m.dim()];
    for (i, x) in v.iter_mut().enumerate() {
        *x = w[i % w.len()];
    }
    v
}

fn union(a: &SupportSet, b: &SupportSet) -> Vec<Vec<Elem>> {
    let mut u: Vec<Vec<Elem>> = a.points.iter().chain(&b.points).cloned().collect();
    u.sort();
    u.dedup();
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn support_of_sum_is_union(seed in any::<u64>()) {
        let c = ctx("Ga:n=1,p=2,r=1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_extended_module(&c, &mut rng);
        let n = random_extended_module(&c, &mut rng);
        let fam = Family::standard(c.bundle().case, 2).unwrap();
        let s = c.support(&m.direct_sum(&n).unwrap(), &fam).unwrap();
        let (sm, sn) = (c.support(&m, &fam).unwrap(), c.support(&n, &fam).unwrap());
        prop_assert_eq!(s.points, union(&sm, &sn));
    }

    #[test]
    fn support_two_out_of_three(seed in any::<u64>()) {
        let c = ctx("Ga:n=1,p=2,r=1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_extended_module(&c, &mut rng);
        let v: Vec<Elem> = (0..m.dim()).map(|_| rng.gen_range(0..2)).collect();
        let span = m.submodule_span(&[v]);
        let sub = m.submodule(span.basis()).unwrap();
        let quo = m.quotient(span.basis()).unwrap();
        let fam = Family::standard(c.bundle().case, 1).unwrap();
        let sets: Vec<Vec<Vec<Elem>>> = [&sub, &m, &quo]
            .iter()
            .map(|x| if x.dim() == 0 { Vec::new() } else { c.support(x, &fam).unwrap().points })
            .collect();
        for (a, b, cc) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
            for pt in &sets[a] {
                prop_assert!(sets[b].contains(pt) || sets[cc].contains(pt));
            }
        }
    }

    #[test]
    fn restriction_to_o_gives_same_support(seed in any::<u64>()) {
        let c = ctx("Ga:n=1,p=2,r=1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_extended_module(&c, &mut rng);
        let res = m.restrict_along(&c.bundle().i_o).unwrap();
        let fam = Family::standard(c.bundle().case, 2).unwrap();
        prop_assert_eq!(c.support(&m, &fam).unwrap().points, c.support(&res, &fam).unwrap().points);
    }

    #[test]
    fn enlarging_the_field_keeps_points(seed in any::<u64>()) {
        let c = ctx("Ga:n=1,p=2,r=1");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_extended_module(&c, &mut rng);
        let case = c.bundle().case;
        let small = c.support(&m, &Family::standard(case, 1).unwrap()).unwrap();
        let big = c.support(&m, &Family::standard(case, 2).unwrap()).unwrap();
        for pt in &small.points {
            prop_assert!(big.contains(pt));
        }
    }
}

#[test]
fn support_over_heisenberg_o_modules() {
    let case: CaseId = "Heis3:p=2,r=1".parse().unwrap();
    let c = Arc::new(PiPoints::build(case).unwrap());
    let k = f(2, 1);
    let o = c.o();
    let reg = FDModule::regular(&o, &k).unwrap();
    for sel in [BetaSubgroup::Axis(0), BetaSubgroup::Axis(1), BetaSubgroup::Axis(2)] {
        let fam = Family::new(case, 1, sel).unwrap();
        assert!(c.support(&reg, &fam).unwrap().points.is_empty());
        let triv = FDModule::trivial(&o, &k).unwrap();
        assert!(c.support(&triv, &fam).unwrap().is_whole_family());
    }
}
