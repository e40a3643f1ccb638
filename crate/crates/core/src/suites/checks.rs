use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use crate::cohomology::{carlson_module, pullback_class, resolve_trivial, CohomologyClass, TruncatedLineMap};
use crate::error::{Error, Result};
use crate::field_linalg::{is_free_nilpotent, Elem, Field, Matrix};
use crate::hopf::Algebra;
use crate::kernels::{
    frobenius_id, nu_isomorphism, o_freeness, quasilogarithm, twisted_subalgebra, CaseId, KernelBundle, Kind,
};
use crate::modules::{CoproductChoice, FDModule};
use crate::pi_points::{BetaSubgroup, Family, PiPoints};

use super::battery::{battery, monomial_module, order_ideals, BatteryTarget};
use super::{SuiteName, SuiteParams, SuiteReport};

type Point = Vec<Elem>;

fn context(case: &CaseId) -> Result<PiPoints> {
    Ok(PiPoints::new(Arc::new(KernelBundle::build(*case)?)))
}

fn families(case: &CaseId, params: &SuiteParams, beta: Option<BetaSubgroup>) -> Result<Vec<Family>> {
    params
        .field_degrees
        .iter()
        .map(|&e| match beta {
            Some(b) => Family::new(*case, e, b),
            None => Family::standard(*case, e),
        })
        .collect()
}

fn support_points(c: &PiPoints, m: &FDModule, fam: &Family) -> Result<BTreeSet<Point>> {
    if m.dim() == 0 {
        return Ok(BTreeSet::new());
    }
    Ok(c.support(m, fam)?.points.into_iter().collect())
}

fn flat_points(c: &PiPoints, fam: &Family) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for pt in fam.points()? {
        if c.certify_flat(&fam.pair(&pt)?)? {
            out.push(pt);
        }
    }
    Ok(out)
}

fn sorted(s: &BTreeSet<Point>) -> Vec<Point> {
    s.iter().cloned().collect()
}

/// The battery of a case as O-modules.
fn o_battery(c: &PiPoints) -> Result<Vec<FDModule>> {
    let bundle = Arc::new(c.bundle().clone());
    let (target, mods) = battery(&bundle)?;
    match target {
        BatteryTarget::O => Ok(mods),
        BatteryTarget::Extended => mods.iter().map(|m| m.restrict_along(&bundle.i_o)).collect(),
    }
}

fn extended_battery(c: &PiPoints) -> Result<Vec<FDModule>> {
    let bundle = Arc::new(c.bundle().clone());
    match battery(&bundle)? {
        (BatteryTarget::Extended, mods) => Ok(mods),
        (BatteryTarget::O, _) => Err(Error::Invalid(format!(
            "the battery of {} lives over O, not D̃",
            bundle.case
        ))),
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Projectivity of pullbacks of `M ⊗ M'` under the two coproducts on O
/// agrees at every flat point.
pub fn suite_coproduct_invariance(case: &CaseId, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let c = context(case)?;
    let mut report = SuiteReport::new(SuiteName::CoproductInvariance, &case.to_string(), params.seed);
    let beta = match case.group.kind {
        Kind::Heisenberg3 => Some(BetaSubgroup::Trivial),
        _ => None,
    };
    let mods = o_battery(&c)?;
    let p = case.p();
    for fam in families(case, params, beta)? {
        let pts = flat_points(&c, &fam)?;
        let results: Vec<Result<Vec<(bool, serde_json::Value)>>> = pairs(mods.len())
            .into_par_iter()
            .map(|(i, j)| {
                let hopf = mods[i].tensor(&mods[j], CoproductChoice::HopfCoproduct)?;
                let group = mods[i].tensor(&mods[j], CoproductChoice::GroupCoproduct)?;
                pts.iter()
                    .map(|pt| {
                        let pr = fam.pair(pt)?;
                        let a = is_free_nilpotent(&c.pullback(&hopf, &pr)?, p);
                        let b = is_free_nilpotent(&c.pullback(&group, &pr)?, p);
                        Ok((
                            a == b,
                            json!({"family": fam.id(), "modules": [mods[i].name(), mods[j].name()],
                                   "point": pt, "hopf_projective": a, "group_projective": b}),
                        ))
                    })
                    .collect()
            })
            .collect();
        for r in results {
            for (ok, cx) in r? {
                report.record(ok, || cx);
            }
        }
    }
    report.notes.push(format!("{} battery modules over O", mods.len()));
    Ok(report.finish(start))
}

/// support(M ⊗ M') = support(M) ∩ support(M') for the Hopf coproduct of D̃
/// and for both coproducts after restriction to O.
pub fn suite_tensor_property(case: &CaseId, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let c = context(case)?;
    let mut report = SuiteReport::new(SuiteName::TensorProperty, &case.to_string(), params.seed);
    let mods = extended_battery(&c)?;
    let i_o = c.bundle().i_o.clone();
    let restricted: Vec<FDModule> = mods.iter().map(|m| m.restrict_along(&i_o)).collect::<Result<_>>()?;
    for fam in families(case, params, None)? {
        let single: Vec<BTreeSet<Point>> = mods
            .par_iter()
            .map(|m| support_points(&c, m, &fam))
            .collect::<Result<_>>()?;
        let results: Vec<Result<Vec<(bool, serde_json::Value)>>> = pairs(mods.len())
            .into_par_iter()
            .map(|(i, j)| {
                let expected: BTreeSet<Point> = single[i].intersection(&single[j]).cloned().collect();
                let products = [
                    ("extended/hopf", mods[i].tensor(&mods[j], CoproductChoice::HopfCoproduct)?),
                    ("o/hopf", restricted[i].tensor(&restricted[j], CoproductChoice::HopfCoproduct)?),
                    ("o/group", restricted[i].tensor(&restricted[j], CoproductChoice::GroupCoproduct)?),
                ];
                products
                    .iter()
                    .map(|(label, t)| {
                        let got = support_points(&c, t, &fam)?;
                        Ok((
                            got == expected,
                            json!({"family": fam.id(), "tensor": label,
                                   "modules": [mods[i].name(), mods[j].name()],
                                   "support": sorted(&got), "intersection": sorted(&expected)}),
                        ))
                    })
                    .collect()
            })
            .collect();
        for r in results {
            for (ok, cx) in r? {
                report.record(ok, || cx);
            }
        }
    }
    report.notes.push(format!("{} battery modules over D̃", mods.len()));
    Ok(report.finish(start))
}

/// is_projective(M) ⇔ support(M) = ∅ over each enumerated family.
pub fn suite_projectivity_detection(case: &CaseId, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let c = context(case)?;
    let mut report = SuiteReport::new(SuiteName::ProjectivityDetection, &case.to_string(), params.seed);
    let mods = extended_battery(&c)?;
    let mut projective = 0;
    for m in &mods {
        let proj = m.is_projective_local()?;
        projective += proj as usize;
        for fam in families(case, params, None)? {
            let s = support_points(&c, m, &fam)?;
            report.record(proj == s.is_empty(), || {
                json!({"family": fam.id(), "module": m.name(), "projective": proj, "support": sorted(&s)})
            });
        }
    }
    report.notes.push(format!("{projective} of {} battery modules projective", mods.len()));
    Ok(report.finish(start))
}

/// Exact checks of ν, the freeness of D̃ over O, q, q∘i_D = F # id and the
/// quasilogarithm.
pub fn suite_structure_maps(case: &CaseId, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let b = KernelBundle::build(*case)?;
    let (g, r) = (case.group, case.r);
    let mut report = SuiteReport::new(SuiteName::StructureMaps, &case.to_string(), params.seed);
    let mut check = |name: &str, outcome: Result<bool>| {
        let (ok, detail) = match outcome {
            Ok(ok) => (ok, String::new()),
            Err(e) => (false, e.to_string()),
        };
        report.record(ok, || json!({"check": name, "detail": detail}));
    };
    check(
        "nu_bijective_algebra_map",
        nu_isomorphism(&g, r, &b.o).and_then(|nu| {
            nu.check_multiplicative()?;
            Ok(nu.is_injective() && nu.is_surjective() && nu.preserves_unit())
        }),
    );
    check(
        "extended_free_over_o",
        o_freeness(&g, r, &b.extended, &b.o, &b.i_o).map(|rep| rep.ok()),
    );
    check(
        "i_o_injective_algebra_map",
        b.i_o.check_multiplicative().map(|_| b.i_o.is_injective()),
    );
    check(
        "q_surjective_algebra_map",
        b.q.check_multiplicative().map(|_| b.q.is_surjective()),
    );
    check(
        "q_after_i_d_is_frobenius_id",
        twisted_subalgebra(&g, r, 1, &b.extended).and_then(|(t, i_d)| {
            let fid = frobenius_id(&g, r, &t, &b.double)?;
            fid.check_multiplicative()?;
            Ok(b.q.after(&i_d)?.images() == fid.images())
        }),
    );
    let gated = !g.quasilog_eligible();
    check(
        "quasilog",
        match quasilogarithm(&g, r) {
            Ok(ql) => ql
                .map
                .check_multiplicative()
                .map(|_| !gated && ql.is_bijective() && ql.vanishes_at_identity()),
            Err(_) if gated => Ok(true),
            Err(e) => Err(e),
        },
    );
    if gated {
        report.notes.push("quasilogarithm hypotheses fail; rejection checked".into());
    }
    Ok(report.finish(start))
}

/// D̃-modules on which B acts trivially, from small monomial modules over
/// the generators of H and the regular H-module.
fn inflated_modules(dt: &Algebra, b: &KernelBundle, f: &Field) -> Result<Vec<FDModule>> {
    let nb = b.extended.b().generators().len();
    let nh = b.extended.h().generators().len();
    let p = f.p() as usize;
    let vars: Vec<usize> = (nb..nb + nh).collect();
    let mut out = Vec::new();
    for ideal in order_ideals(&vec![p; nh], p) {
        if let Ok(m) = monomial_module(dt, f, &vars, &ideal, &format!("inflated{ideal:?}")) {
            out.push(m);
        }
    }
    let h = b.extended.h();
    let mut actions = vec![Matrix::zeros(f, h.dim(), h.dim()); nb];
    for &g in h.generators() {
        actions.push(h.left_mult_matrix(&h.basis_vec(g)).base_change(f)?);
    }
    let reg = FDModule::new("inflated regular H", dt.clone(), f, actions)?;
    let k = out[0].clone();
    out.push(k.direct_sum(&reg)?.with_name("k ⊕ inflated regular H"));
    out.push(reg);
    Ok(out)
}

/// D̃ ⊗_H k, whose restriction to B is free of rank one.
fn induced_from_trivial(dt: &Algebra, b: &KernelBundle, f: &Field) -> Result<FDModule> {
    let reg = FDModule::regular(dt, f)?;
    let (ub, _) = b.extended.unit_indices();
    let h = b.extended.h();
    let vectors: Vec<Vec<Elem>> = h
        .generators()
        .iter()
        .map(|&g| dt.basis_vec(b.extended.index(ub, g)))
        .collect();
    let span = reg.submodule_span(&vectors);
    Ok(reg.quotient(span.basis())?.with_name("D̃ ⊗_H k"))
}

/// Inflated modules contain the β = 0 locus in their support and are
/// otherwise governed by the β leg; modules free over B avoid it.
pub fn suite_module_classes(case: &CaseId, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let c = context(case)?;
    let b = c.bundle().clone();
    let f = Field::new(case.p(), 1)?;
    let dt = c.extended();
    let p = case.p();
    let mut report = SuiteReport::new(SuiteName::ModuleClasses, &case.to_string(), params.seed);
    let inflated = inflated_modules(&dt, &b, &f)?;
    let mut projective_over_b = vec![induced_from_trivial(&dt, &b, &f)?];
    if dt.dim() <= 64 {
        projective_over_b.push(FDModule::regular(&dt, &f)?);
    }
    for fam in families(case, params, None)? {
        let a = fam.alpha_len();
        let flat = flat_points(&c, &fam)?;
        let beta_zero: BTreeSet<Point> = flat.iter().filter(|pt| pt[a..].iter().all(|&x| x == 0)).cloned().collect();
        for m in &inflated {
            let s = support_points(&c, m, &fam)?;
            let mut predicted = beta_zero.clone();
            for pt in flat.iter().filter(|pt| !beta_zero.contains(*pt)) {
                let mut only_beta = pt.clone();
                only_beta[..a].iter_mut().for_each(|x| *x = 0);
                let pr = fam.pair(&only_beta)?;
                if !is_free_nilpotent(&c.pullback(m, &pr)?, p) {
                    predicted.insert(pt.clone());
                }
            }
            report.record(beta_zero.is_subset(&s) && s == predicted, || {
                json!({"family": fam.id(), "class": "inflated", "module": m.name(),
                       "support": sorted(&s), "predicted": sorted(&predicted)})
            });
        }
        for m in &projective_over_b {
            let s = support_points(&c, m, &fam)?;
            let hit: BTreeSet<Point> = s.intersection(&beta_zero).cloned().collect();
            report.record(hit.is_empty(), || {
                json!({"family": fam.id(), "class": "projective_over_b", "module": m.name(),
                       "support_on_beta_zero": sorted(&hit)})
            });
        }
    }
    report.notes.push(format!(
        "{} inflated and {} B-projective witnesses",
        inflated.len(),
        projective_over_b.len()
    ));
    Ok(report.finish(start))
}

/// All nonzero coefficient vectors of length `n` over F_p with first
/// nonzero entry 1.
fn normalized_vectors(p: u32, n: usize) -> Vec<Vec<Elem>> {
    let p = p as usize;
    (1..p.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let c = (code % p) as Elem;
                    code /= p;
                    c
                })
                .collect::<Vec<_>>()
        })
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

/// support(L_ζ) equals the zero locus of the pulled-back class, for every
/// nonzero class of the requested even degrees up to scalars.
pub fn suite_carlson(case: &CaseId, params: &SuiteParams) -> Result<SuiteReport> {
    let start = Instant::now();
    let c = context(case)?;
    let mut report = SuiteReport::new(SuiteName::Carlson, &case.to_string(), params.seed);
    let top = params.carlson_degrees.iter().copied().max().unwrap_or(2);
    let dt = c.extended();
    let res = resolve_trivial(&dt, top)?;
    let p = case.p();
    let fams = families(case, params, None)?;
    for &n in &params.carlson_degrees {
        for coeffs in normalized_vectors(p, res.betti()[n]) {
            let zeta = CohomologyClass::new(&res, n, coeffs.clone())?;
            let l = carlson_module(&res, &zeta)?;
            for fam in &fams {
                let k = fam.field()?;
                let support = support_points(&c, &l, fam)?;
                let mut locus = BTreeSet::new();
                for pt in flat_points(&c, fam)? {
                    let image = c.combined_in_extended(&fam.pair(&pt)?)?;
                    let map = TruncatedLineMap { field: k.clone(), image };
                    if pullback_class(&res, &map, &zeta)?.is_zero() {
                        locus.insert(pt);
                    }
                }
                report.record(support == locus, || {
                    json!({"family": fam.id(), "degree": n, "class": coeffs,
                           "support": sorted(&support), "zero_locus": sorted(&locus)})
                });
                if p > 2 {
                    let f = res.field();
                    let scaled: Vec<Elem> = coeffs.iter().map(|&x| f.mul(x, f.from_int(2))).collect();
                    let ls = carlson_module(&res, &CohomologyClass::new(&res, n, scaled)?)?;
                    let s2 = support_points(&c, &ls, fam)?;
                    report.record(s2 == support, || {
                        json!({"family": fam.id(), "degree": n, "class": coeffs, "scaled_support": sorted(&s2)})
                    });
                }
            }
        }
    }
    Ok(report.finish(start))
}
