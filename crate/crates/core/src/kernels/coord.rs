//! Coordinate algebras k[G_(s)] as truncated polynomial rings, and their
//! duals, the group algebras kG_(s).

use std::collections::HashMap;

use crate::error::{guard, Error, Result};
use crate::field_linalg::{Elem, Field, MAX_DIM};
use crate::hopf::{dual_hopf, AlgebraData, HopfData, SparseTable, SparseVec, StructuredAlgebra};

use super::spec::{GroupSchemeSpec, Kind};

/// Monomials `x_0^{e_0} ... x_{n-1}^{e_{n-1}}` with every `e_i < bound`,
/// indexed by `Σ e_i bound^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomials {
    pub nvars: usize,
    pub bound: usize,
}

impl Monomials {
    pub fn dim(&self) -> usize {
        self.bound.pow(self.nvars as u32)
    }

    pub fn index(&self, e: &[usize]) -> usize {
        e.iter().rev().fold(0, |acc, &x| acc * self.bound + x)
    }

    pub fn exps(&self, mut idx: usize) -> Vec<usize> {
        (0..self.nvars)
            .map(|_| {
                let x = idx % self.bound;
                idx /= self.bound;
                x
            })
            .collect()
    }

    /// Product of two monomials, `None` if it is truncated away.
    pub fn mul(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.exps(i), self.exps(j));
        let e: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        e.iter().all(|&x| x < self.bound).then(|| self.index(&e))
    }

    pub fn var(&self, i: usize) -> usize {
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        self.index(&e)
    }

    pub fn label(&self, names: &[String], idx: usize) -> String {
        let e = self.exps(idx);
        let parts: Vec<String> = e
            .iter()
            .zip(names)
            .filter(|(&x, _)| x > 0)
            .map(|(&x, n)| if x == 1 { n.clone() } else { format!("{n}^{x}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A polynomial in the coordinate ring: (coefficient, exponent vector).
type Poly = Vec<(i64, Vec<usize>)>;
/// An element of the tensor square: (coefficient, left exponents, right exponents).
type Poly2 = Vec<(i64, Vec<usize>, Vec<usize>)>;

fn unit_vec(n: usize, i: usize) -> Vec<usize> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Coproducts of the coordinate generators, read off from the group law.
fn generator_coproducts(g: &GroupSchemeSpec) -> Vec<Poly2> {
    let n = g.dim();
    let z = vec![0; n];
    let primitive = |i: usize| vec![(1, unit_vec(n, i), z.clone()), (1, z.clone(), unit_vec(n, i))];
    match g.kind {
        Kind::Additive(_) => (0..n).map(primitive).collect(),
        // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')
        Kind::Heisenberg3 => {
            let mut dc = primitive(2);
            dc.push((1, unit_vec(3, 0), unit_vec(3, 1)));
            vec![primitive(0), primitive(1), dc]
        }
        // x = 1 + t and x ↦ x ⊗ x
        Kind::Multiplicative => {
            let mut dt = primitive(0);
            dt.push((1, vec![1], vec![1]));
            vec![dt]
        }
    }
}

/// Antipodes of the generators (the group inverse).
fn generator_antipodes(g: &GroupSchemeSpec, bound: usize) -> Vec<Poly> {
    let n = g.dim();
    match g.kind {
        Kind::Additive(_) => (0..n).map(|i| vec![(-1, unit_vec(n, i))]).collect(),
        // (a,b,c)^{-1} = (-a, -b, -c + ab)
        Kind::Heisenberg3 => vec![
            vec![(-1, unit_vec(3, 0))],
            vec![(-1, unit_vec(3, 1))],
            vec![(-1, unit_vec(3, 2)), (1, vec![1, 1, 0])],
        ],
        // (1+t)^{-1} - 1 = Σ_{k ≥ 1} (-t)^k
        Kind::Multiplicative => vec![(1..bound)
            .map(|k| (if k % 2 == 0 { 1 } else { -1 }, vec![k]))
            .collect()],
    }
}

fn poly_vec(f: &Field, m: &Monomials, p: &Poly) -> Vec<Elem> {
    let mut v = vec![0; m.dim()];
    for (c, e) in p {
        if e.iter().all(|&x| x < m.bound) {
            let i = m.index(e);
            v[i] = f.add(v[i], f.from_int(*c));
        }
    }
    v
}

/// Multiplies two sparse elements of `A ⊗ A` where A has monomial basis `m`.
fn tensor_mul(f: &Field, m: &Monomials, x: &[(u64, Elem)], y: &[(u64, Elem)]) -> Vec<(u64, Elem)> {
    let d = m.dim() as u64;
    let mut acc: HashMap<u64, Elem> = HashMap::new();
    for &(p, a) in x {
        for &(q, b) in y {
            let (Some(l), Some(r)) = (
                m.mul((p / d) as usize, (q / d) as usize),
                m.mul((p % d) as usize, (q % d) as usize),
            ) else {
                continue;
            };
            let e = acc.entry(l as u64 * d + r as u64).or_insert(0);
            *e = f.add(*e, f.mul(a, b));
        }
    }
    let mut v: Vec<(u64, Elem)> = acc.into_iter().filter(|&(_, a)| a != 0).collect();
    v.sort_unstable();
    v
}

/// The truncated polynomial ring on the catalog coordinates with every
/// exponent below `bound`, with multiplication only.
pub(crate) fn truncated_ring(f: &Field, names: &[String], bound: usize, name: &str) -> Result<(StructuredAlgebra, Monomials)> {
    let m = Monomials {
        nvars: names.len(),
        bound,
    };
    let d = m.dim();
    guard("coordinate algebra dimension", d, MAX_DIM)?;
    let mut mult = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            mult.push(m.mul(i, j).map(|k| vec![(k as u32, 1)]).unwrap_or_default());
        }
    }
    let mut unit = vec![0; d];
    unit[0] = 1;
    let alg = StructuredAlgebra::new(
        f,
        AlgebraData {
            name: name.to_string(),
            labels: (0..d).map(|i| m.label(names, i)).collect(),
            mult,
            unit: unit.clone(),
            augmentation: unit,
            generators: (0..names.len()).map(|i| m.var(i)).collect(),
        },
    )?;
    Ok((alg, m))
}

/// k[G_(s)]: the coordinate algebra of the s-th Frobenius kernel, with
/// coproduct, counit and antipode coming from the group law.
pub fn coordinate_algebra(g: &GroupSchemeSpec, s: u32) -> Result<StructuredAlgebra> {
    let names = g.var_names();
    let bound = (g.p as usize).pow(s);
    guard(
        "coordinate algebra dimension",
        bound.saturating_pow(names.len() as u32),
        MAX_DIM,
    )?;
    let f = Field::prime(g.p)?;
    let (alg, m) = truncated_ring(&f, &names, bound, &format!("k[{}_({s})]", g.short_name()))?;
    let cop = hopf_from_generators(&f, &m, &generator_coproducts(g), &generator_antipodes(g, bound))?;
    alg.with_hopf(cop)
}

/// Extends generator coproducts and antipodes multiplicatively over a
/// commutative truncated polynomial ring.
pub(crate) fn hopf_from_generators(f: &Field, m: &Monomials, dgen: &[Poly2], sgen: &[Poly]) -> Result<HopfData> {
    let d = m.dim();
    let n = m.nvars;
    let d64 = d as u64;
    let gen_cop: Vec<Vec<(u64, Elem)>> = dgen
        .iter()
        .map(|terms| {
            let mut v: Vec<(u64, Elem)> = Vec::new();
            for (c, l, r) in terms {
                if l.iter().chain(r).all(|&x| x < m.bound) {
                    v.push((m.index(l) as u64 * d64 + m.index(r) as u64, f.from_int(*c)));
                }
            }
            v
        })
        .collect();
    let gen_s: Vec<Vec<Elem>> = sgen.iter().map(|p| poly_vec(f, m, p)).collect();
    let mut cop: Vec<Vec<(u64, Elem)>> = Vec::with_capacity(d);
    let mut anti: Vec<Vec<Elem>> = Vec::with_capacity(d);
    let mut unit = vec![0; d];
    unit[0] = 1;
    let ring_mul = |x: &[Elem], y: &[Elem]| -> Vec<Elem> {
        let mut out = vec![0; d];
        for (i, &a) in x.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in y.iter().enumerate().filter(|(_, &b)| b != 0) {
                if let Some(k) = m.mul(i, j) {
                    out[k] = f.add(out[k], f.mul(a, b));
                }
            }
        }
        out
    };
    for idx in 0..d {
        if idx == 0 {
            cop.push(vec![(0, 1)]);
            anti.push(unit.clone());
            continue;
        }
        let e = m.exps(idx);
        let v = (0..n).find(|&i| e[i] > 0).expect("nonconstant monomial");
        let mut pe = e.clone();
        pe[v] -= 1;
        let parent = m.index(&pe);
        cop.push(tensor_mul(f, m, &cop[parent], &gen_cop[v]));
        anti.push(ring_mul(&anti[parent], &gen_s[v]));
    }
    let to_sparse = |v: Vec<Elem>| -> SparseVec {
        v.iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| (i as u32, a))
            .collect()
    };
    Ok(HopfData {
        coproduct: SparseTable::from_rows(
            cop.into_iter()
                .map(|v| v.into_iter().map(|(k, c)| (k as u32, c)).collect()),
        ),
        counit: unit,
        antipode: SparseTable::from_rows(anti.into_iter().map(to_sparse)),
    })
}

/// kG_(s), the dual Hopf algebra of k[G_(s)]. Basis element `δ(m)` is dual
/// to the monomial `m`.
pub fn group_algebra(g: &GroupSchemeSpec, s: u32) -> Result<StructuredAlgebra> {
    let coord = coordinate_algebra(g, s)?;
    dual_hopf(&coord, &format!("k{}_({s})", g.short_name()), |l| format!("δ({l})"))
}

/// Lucas binomial coefficient C(n, k) mod p.
pub fn lucas_binomial(mut n: usize, mut k: usize, p: usize) -> usize {
    let mut acc = 1;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1;
        for t in 0..b {
            c = c * (a - t) / (t + 1);
        }
        acc = acc * (c % p) % p;
        n /= p;
        k /= p;
    }
    acc
}

/// The divided power algebra with basis γ_0..γ_{p^s - 1},
/// γ_a γ_b = C(a+b, a) γ_{a+b} and Δ(γ_c) = Σ γ_a ⊗ γ_{c-a}.
pub fn divided_power_algebra(p: u32, s: u32) -> Result<StructuredAlgebra> {
    let f = Field::prime(p)?;
    let n = (p as usize).pow(s);
    guard("divided power algebra dimension", n, MAX_DIM)?;
    let pu = p as usize;
    let mut mult = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let c = if a + b < n { lucas_binomial(a + b, a, pu) } else { 0 };
            mult.push(if c == 0 { vec![] } else { vec![((a + b) as u32, c as Elem)] });
        }
    }
    let mut unit = vec![0; n];
    unit[0] = 1;
    let cop = (0..n)
        .map(|c| (0..=c).map(|a| ((a * n + (c - a)) as u32, 1)).collect())
        .collect::<Vec<SparseVec>>();
    // S(γ_c) = (-1)^c γ_c
    let anti = (0..n)
        .map(|c| vec![(c as u32, if c % 2 == 0 { 1 } else { f.neg(1) })])
        .collect::<Vec<SparseVec>>();
    let gens: Vec<usize> = (0..s).map(|i| pu.pow(i)).collect();
    StructuredAlgebra::new(
        &f,
        AlgebraData {
            name: format!("Γ_{p}({s})"),
            labels: (0..n).map(|c| format!("γ_{c}")).collect(),
            mult,
            unit: unit.clone(),
            augmentation: unit.clone(),
            generators: gens,
        },
    )?
    .with_hopf(HopfData {
        coproduct: SparseTable::from_rows(cop),
        counit: unit,
        antipode: SparseTable::from_rows(anti),
    })
}

/// Whether two algebras on the same index set have identical structure
/// constants, coproducts and antipodes.
pub fn same_structure(a: &StructuredAlgebra, b: &StructuredAlgebra) -> bool {
    a.dim() == b.dim()
        && a.mult_table() == b.mult_table()
        && a.unit() == b.unit()
        && a.augmentation() == b.augmentation()
        && a.hopf() == b.hopf()
}

/// Error for features that need a quasilogarithm.
pub(crate) fn require_quasilog(g: &GroupSchemeSpec) -> Result<()> {
    if g.quasilog_eligible() {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "{} at p = {} has no quasilogarithm in the catalog",
            g.short_name(),
            g.p
        )))
    }
}

/// The truncated symmetric algebra `k[X_1..X_n]/(X_i^p)` with primitive
/// variables, the coordinate algebra of a vector group's first Frobenius
/// kernel.
pub fn truncated_symmetric_algebra(p: u32, names: &[String], name: &str) -> Result<StructuredAlgebra> {
    let f = Field::prime(p)?;
    let n = names.len();
    let (alg, m) = truncated_ring(&f, names, p as usize, name)?;
    let z = vec![0; n];
    let dgen: Vec<Poly2> = (0..n)
        .map(|i| vec![(1, unit_vec(n, i), z.clone()), (1, z.clone(), unit_vec(n, i))])
        .collect();
    let sgen: Vec<Poly> = (0..n).map(|i| vec![(-1, unit_vec(n, i))]).collect();
    let hopf = hopf_from_generators(&f, &m, &dgen, &sgen)?;
    alg.with_hopf(hopf)
}
