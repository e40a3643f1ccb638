//! The coadjoint action of kG_(r) on k[G_(s)], `(h·f)(x) = f(h⁻¹ x h)`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field_linalg::{Elem, Field};
use crate::hopf::{SparseVec, StructuredAlgebra};

use super::coord::Monomials;
use super::spec::GroupSchemeSpec;

/// Sparse element of `k[G_(s)] ⊗ k[G_(r)]` keyed by `u * dim_r + v`.
type Coaction = Vec<(u64, Elem)>;

fn monomials(g: &GroupSchemeSpec, s: u32) -> Monomials {
    Monomials {
        nvars: g.dim(),
        bound: (g.p as usize).pow(s),
    }
}

fn pair_mul(f: &Field, ms: &Monomials, mr: &Monomials, x: &Coaction, y: &Coaction) -> Coaction {
    let dr = mr.dim() as u64;
    let mut acc: HashMap<u64, Elem> = HashMap::new();
    for &(p, a) in x {
        for &(q, b) in y {
            let (Some(l), Some(r)) = (
                ms.mul((p / dr) as usize, (q / dr) as usize),
                mr.mul((p % dr) as usize, (q % dr) as usize),
            ) else {
                continue;
            };
            let e = acc.entry(l as u64 * dr + r as u64).or_insert(0);
            *e = f.add(*e, f.mul(a, b));
        }
    }
    let mut v: Coaction = acc.into_iter().filter(|&(_, a)| a != 0).collect();
    v.sort_unstable();
    v
}

/// Truncation k[G_(s)] → k[G_(r)] on monomial indices.
fn truncate(ms: &Monomials, mr: &Monomials, i: usize) -> Option<usize> {
    let e = ms.exps(i);
    e.iter().all(|&x| x < mr.bound).then(|| mr.index(&e))
}

/// `ρ(f) = Σ f₂ ⊗ π(S(f₁) f₃)` for every monomial `f` of k[G_(s)], computed
/// on the coordinate generators from the coproduct and antipode and
/// extended multiplicatively.
pub fn conjugation_coaction(coord_s: &StructuredAlgebra, g: &GroupSchemeSpec, r: u32, s: u32) -> Result<Vec<Coaction>> {
    let (ms, mr) = (monomials(g, s), monomials(g, r));
    if coord_s.dim() != ms.dim() {
        return Err(Error::Shape("coordinate algebra does not match the group".into()));
    }
    let hd = coord_s
        .hopf()
        .ok_or_else(|| Error::Missing("coordinate algebra without coproduct".into()))?;
    let f = coord_s.field();
    let d = ms.dim();
    let dr = mr.dim() as u64;
    let gens: Vec<Coaction> = (0..g.dim())
        .map(|v| {
            let mut acc: HashMap<u64, Elem> = HashMap::new();
            for (pk, c) in hd.coproduct.row(ms.var(v)) {
                let (f1, rest) = (pk / d, pk % d);
                let s1 = coord_s.antipode_of(&coord_s.basis_vec(f1)).expect("Hopf data present");
                for (qk, c2) in hd.coproduct.row(rest) {
                    let (f2, f3) = (qk / d, qk % d);
                    let prod = coord_s.mul(&s1, &coord_s.basis_vec(f3));
                    for (w, x) in prod.iter().enumerate().filter(|(_, &x)| x != 0) {
                        if let Some(t) = truncate(&ms, &mr, w) {
                            let e = acc.entry(f2 as u64 * dr + t as u64).or_insert(0);
                            *e = f.add(*e, f.mul(f.mul(c, c2), *x));
                        }
                    }
                }
            }
            let mut out: Coaction = acc.into_iter().filter(|&(_, a)| a != 0).collect();
            out.sort_unstable();
            out
        })
        .collect();
    let mut rho: Vec<Coaction> = Vec::with_capacity(d);
    for idx in 0..d {
        if idx == 0 {
            rho.push(vec![(0, 1)]);
            continue;
        }
        let mut e = ms.exps(idx);
        let v = e.iter().position(|&x| x > 0).expect("nonconstant monomial");
        e[v] -= 1;
        let parent = ms.index(&e);
        let next = pair_mul(f, &ms, &mr, &rho[parent], &gens[v]);
        rho.push(next);
    }
    Ok(rho)
}

/// Action tensor of kG_(r) on k[G_(s)] in the layout expected by
/// [`crate::hopf::LazySmash::new`]: row `j * dim k[G_(s)] + k` is `δ_j · b_k`,
/// where `δ_j` is dual to the `j`-th monomial of k[G_(r)].
pub fn coadjoint_action(coord_s: &StructuredAlgebra, g: &GroupSchemeSpec, r: u32, s: u32) -> Result<Vec<SparseVec>> {
    if s != r && s != r + 1 {
        return Err(Error::Invalid(format!("coadjoint action needs s in {{r, r+1}}, got r = {r}, s = {s}")));
    }
    let db = coord_s.dim();
    let dr = monomials(g, r).dim();
    let mut rows: Vec<SparseVec> = vec![Vec::new(); db * dr];
    if g.is_abelian() {
        for k in 0..db {
            rows[k].push((k as u32, 1));
        }
        return Ok(rows);
    }
    let rho = conjugation_coaction(coord_s, g, r, s)?;
    for (k, terms) in rho.iter().enumerate() {
        for &(pk, c) in terms {
            let (u, j) = ((pk / dr as u64) as usize, (pk % dr as u64) as usize);
            rows[j * db + k].push((u as u32, c));
        }
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    Ok(rows)
}
