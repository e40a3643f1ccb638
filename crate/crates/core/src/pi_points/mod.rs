//! π-point pairs, flatness, pullbacks and support sets over rational
//! parameter families.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::field_linalg::{is_free_nilpotent, jordan_type, Elem, Field, FieldDesc, Matrix, Partition};
use crate::hopf::sparse::{nonzeros, sparse_rank};
use crate::hopf::{Algebra, SparseVec};
use crate::kernels::{CaseId, KernelBundle, Kind, Monomials};
use crate::modules::FDModule;

/// Largest number of parameter points a support computation will visit.
pub const MAX_FAMILY_POINTS: usize = 1_000_000;

/// Largest algebra in which flatness is certified by a regular-action rank.
pub const MAX_FLAT_DIM: usize = 4096;

/// The abelian unipotent subgroup whose group algebra carries the β leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BetaSubgroup {
    /// The whole group (vector groups only).
    Whole,
    /// The copy of G_a on the given coordinate axis.
    Axis(usize),
    /// No β leg.
    Trivial,
}

impl fmt::Display for BetaSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaSubgroup::Whole => write!(f, "whole"),
            BetaSubgroup::Axis(v) => write!(f, "axis{v}"),
            BetaSubgroup::Trivial => write!(f, "none"),
        }
    }
}

/// A parameter family: projective space over the α coefficients followed
/// by the β coefficients, with entries in F_{p^degree}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    pub case: CaseId,
    pub degree: u32,
    pub beta: BetaSubgroup,
}

impl Family {
    pub fn new(case: CaseId, degree: u32, beta: BetaSubgroup) -> Result<Self> {
        if !(1..=2).contains(&degree) {
            return Err(Error::Invalid(format!("family field degree {degree} not in 1..=2")));
        }
        let g = case.group;
        match (g.kind, beta) {
            (_, BetaSubgroup::Trivial) => {}
            (Kind::Additive(_), BetaSubgroup::Whole) => {}
            (Kind::Additive(_) | Kind::Heisenberg3, BetaSubgroup::Axis(v)) if v < g.dim() => {}
            (Kind::Multiplicative, _) => {
                return Err(Error::Invalid("Gm has no unipotent subgroup to carry β".into()))
            }
            _ => return Err(Error::Invalid(format!("β subgroup {beta} not available for {}", g.short_name()))),
        }
        Ok(Family { case, degree, beta })
    }

    /// The catalog default: the whole group for vector groups, the first
    /// axis for the Heisenberg group, no β leg for Gm.
    pub fn standard(case: CaseId, degree: u32) -> Result<Self> {
        let beta = match case.group.kind {
            Kind::Additive(_) => BetaSubgroup::Whole,
            Kind::Heisenberg3 => BetaSubgroup::Axis(0),
            Kind::Multiplicative => BetaSubgroup::Trivial,
        };
        Self::new(case, degree, beta)
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self.case.p(), self.degree)
    }

    pub fn alpha_len(&self) -> usize {
        self.case.group.dim()
    }

    pub fn beta_len(&self) -> usize {
        let r = self.case.r as usize;
        match self.beta {
            BetaSubgroup::Whole => self.case.group.dim() * r,
            BetaSubgroup::Axis(_) => r,
            BetaSubgroup::Trivial => 0,
        }
    }

    pub fn nparams(&self) -> usize {
        self.alpha_len() + self.beta_len()
    }

    pub fn id(&self) -> String {
        format!("{}|F{}^{}|beta={}", self.case, self.case.p(), self.degree, self.beta)
    }

    pub fn point_count(&self) -> u128 {
        let q = (self.case.p() as u128).pow(self.degree);
        (q.saturating_pow(self.nparams() as u32) - 1) / (q - 1)
    }

    /// All normalized points (first nonzero coordinate 1), sorted.
    pub fn points(&self) -> Result<Vec<Vec<Elem>>> {
        let count = self.point_count();
        guard(
            &format!("points of family {}", self.id()),
            count.min(usize::MAX as u128) as usize,
            MAX_FAMILY_POINTS,
        )?;
        let n = self.nparams();
        let q = (self.case.p() as usize).pow(self.degree);
        let mut out = Vec::with_capacity(count as usize);
        for lead in 0..n {
            let tail = n - lead - 1;
            for code in 0..q.pow(tail as u32) {
                let mut v = vec![0 as Elem; n];
                v[lead] = 1;
                let mut c = code;
                for k in (lead + 1..n).rev() {
                    v[k] = (c % q) as Elem;
                    c /= q;
                }
                out.push(v);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn pair(&self, point: &[Elem]) -> Result<PiPointPair> {
        if point.len() != self.nparams() {
            return Err(Error::Shape("parameter point length".into()));
        }
        let a = self.alpha_len();
        PiPointPair::new(
            self.field()?.desc().clone(),
            point[..a].to_vec(),
            point[a..].to_vec(),
            self.beta,
        )
    }
}

/// A π-point pair given by coefficients over the designated generators of
/// K[G_(r+1)/G_(r)] (α leg) and over the γ_{p^i} of the chosen subgroup
/// (β leg).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiPointPair {
    pub field: FieldDesc,
    pub alpha: Vec<Elem>,
    pub beta: Vec<Elem>,
    pub beta_subgroup: BetaSubgroup,
}

impl PiPointPair {
    pub fn new(field: FieldDesc, alpha: Vec<Elem>, beta: Vec<Elem>, beta_subgroup: BetaSubgroup) -> Result<Self> {
        if alpha.iter().chain(&beta).all(|&x| x == 0) {
            return Err(Error::Invalid("π-point pair with both legs zero".into()));
        }
        if beta_subgroup == BetaSubgroup::Trivial && !beta.is_empty() {
            return Err(Error::Shape("β coefficients without a β subgroup".into()));
        }
        let k = Field::from_desc(field.clone())?;
        if alpha.iter().chain(&beta).any(|&x| x as usize >= k.order()) {
            return Err(Error::InvalidField("coefficient outside the field".into()));
        }
        Ok(PiPointPair { field, alpha, beta, beta_subgroup })
    }

    pub fn alpha_is_zero(&self) -> bool {
        self.alpha.iter().all(|&x| x == 0)
    }

    pub fn beta_is_zero(&self) -> bool {
        self.beta.iter().all(|&x| x == 0)
    }
}

/// Verdicts of a module over a parameter family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSet {
    pub family: String,
    pub field: FieldDesc,
    pub module: String,
    /// Points whose pullback is not free, sorted.
    pub points: Vec<Vec<Elem>>,
    pub family_points: usize,
    pub elapsed_ms: u64,
}

impl SupportSet {
    pub fn contains(&self, point: &[Elem]) -> bool {
        self.points.binary_search_by(|p| p.as_slice().cmp(point)).is_ok()
    }

    pub fn is_whole_family(&self) -> bool {
        self.points.len() == self.family_points
    }
}

/// Dominance-maximal Jordan types observed over a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxJordanType {
    /// The unique maximum when it dominates every observed type.
    pub top: Option<Partition>,
    pub maxima: Vec<Partition>,
    /// A point attaining each maximum.
    pub witnesses: Vec<Vec<Elem>>,
}

/// Sparse columns of left multiplication by `x` (coefficients in `k`) on
/// an algebra over the prime field.
fn left_mult_columns(alg: &Algebra, k: &Field, x: &[Elem]) -> Vec<SparseVec> {
    let d = alg.dim();
    let support: Vec<(usize, Elem)> = nonzeros(x).collect();
    (0..d)
        .into_par_iter()
        .map(|col| {
            let mut acc = vec![0 as Elem; d];
            let e = alg.basis_vec(col);
            for &(i, c) in &support {
                let prod = alg.mul(&alg.basis_vec(i), &e);
                k.axpy(&mut acc, c, &prod);
            }
            nonzeros(&acc).map(|(i, a)| (i as u32, a)).collect()
        })
        .collect()
}

/// `x y` for elements with coefficients in an extension `k` of the
/// algebra's field.
fn mul_over(alg: &Algebra, k: &Field, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; alg.dim()];
    for (i, a) in nonzeros(x) {
        for (j, b) in nonzeros(y) {
            let prod = alg.mul(&alg.basis_vec(i), &alg.basis_vec(j));
            k.axpy(&mut out, k.mul(a, b), &prod);
        }
    }
    out
}

/// Whether `x` (with `x^p = 0`) makes the algebra a free `K[t]/t^p`-module
/// under left multiplication: the rank must be `d - d/p`.
pub fn flat_in(alg: &Algebra, k: &Field, x: &[Elem]) -> Result<bool> {
    let d = alg.dim();
    guard("flatness certification dimension", d, MAX_FLAT_DIM)?;
    let p = k.p() as usize;
    let mut pw = x.to_vec();
    for _ in 1..p {
        pw = mul_over(alg, k, &pw, x);
    }
    if pw.iter().any(|&c| c != 0) {
        return Err(Error::NotNilpotent { p: k.p() });
    }
    if d % p != 0 {
        return Ok(false);
    }
    Ok(sparse_rank(k, left_mult_columns(alg, k, x)) == d - d / p)
}

/// π-point computations for one catalog case.
#[derive(Clone)]
pub struct PiPoints {
    bundle: Arc<KernelBundle>,
}

impl PiPoints {
    pub fn new(bundle: Arc<KernelBundle>) -> Self {
        PiPoints { bundle }
    }

    pub fn build(case: CaseId) -> Result<Self> {
        Ok(Self::new(Arc::new(KernelBundle::build(case)?)))
    }

    pub fn bundle(&self) -> &KernelBundle {
        &self.bundle
    }

    pub fn o(&self) -> Algebra {
        Algebra::from(self.bundle.o.clone())
    }

    pub fn extended(&self) -> Algebra {
        Algebra::from(self.bundle.extended.clone())
    }

    fn case(&self) -> CaseId {
        self.bundle.case
    }

    /// Indices in kG_(r) of `δ(x_v^{p^i})`, the image of γ_{p^i} under the
    /// inclusion of the `v`-th coordinate G_a(r).
    fn beta_indices(&self, sel: BetaSubgroup) -> Vec<usize> {
        let case = self.case();
        let g = case.group;
        let m = Monomials {
            nvars: g.dim(),
            bound: (g.p as usize).pow(case.r),
        };
        let axis = |v: usize| -> Vec<usize> {
            (0..case.r)
                .map(|i| {
                    let mut e = vec![0; g.dim()];
                    e[v] = (g.p as usize).pow(i);
                    m.index(&e)
                })
                .collect()
        };
        match sel {
            BetaSubgroup::Whole => (0..g.dim()).flat_map(axis).collect(),
            BetaSubgroup::Axis(v) => axis(v),
            BetaSubgroup::Trivial => Vec::new(),
        }
    }

    fn check_pair(&self, pair: &PiPointPair) -> Result<Field> {
        let case = self.case();
        let k = Field::from_desc(pair.field.clone())?;
        if k.p() != case.p() {
            return Err(Error::InvalidField("pair field has the wrong characteristic".into()));
        }
        if pair.alpha.len() != case.group.dim() {
            return Err(Error::Shape("α coefficient count".into()));
        }
        if pair.beta.len() != self.beta_indices(pair.beta_subgroup).len() {
            return Err(Error::Shape("β coefficient count".into()));
        }
        Family::new(case, 1, pair.beta_subgroup)?;
        Ok(k)
    }

    /// The α leg `α(t) # 1` in O(G_(r))_K.
    pub fn alpha_element(&self, pair: &PiPointPair) -> Result<Vec<Elem>> {
        self.check_pair(pair)?;
        let o = &self.bundle.o;
        let (_, uh) = o.unit_indices();
        let mut x = vec![0; o.dim()];
        for (&g, &a) in o.b().generators().iter().zip(&pair.alpha) {
            x[o.index(g, uh)] = a;
        }
        Ok(x)
    }

    /// The β leg `1 # β(t)` in O(G_(r))_K.
    pub fn beta_element(&self, pair: &PiPointPair) -> Result<Vec<Elem>> {
        self.check_pair(pair)?;
        let o = &self.bundle.o;
        let (ub, _) = o.unit_indices();
        let mut x = vec![0; o.dim()];
        for (&j, &b) in self.beta_indices(pair.beta_subgroup).iter().zip(&pair.beta) {
            x[o.index(ub, j)] = b;
        }
        Ok(x)
    }

    /// `α(t) # 1 + 1 # β(t)` in O(G_(r))_K.
    pub fn combined_element(&self, pair: &PiPointPair) -> Result<Vec<Elem>> {
        let k = self.check_pair(pair)?;
        let mut x = self.alpha_element(pair)?;
        let y = self.beta_element(pair)?;
        for (a, b) in x.iter_mut().zip(y) {
            *a = k.add(*a, b);
        }
        Ok(x)
    }

    /// The image of the combined element under i_O.
    pub fn combined_in_extended(&self, pair: &PiPointPair) -> Result<Vec<Elem>> {
        let x = self.combined_element(pair)?;
        self.push_to_extended(&x)
    }

    /// Applies i_O to an element with coefficients in an extension field;
    /// i_O sends basis elements to basis elements.
    fn push_to_extended(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let i_o = &self.bundle.i_o;
        let mut out = vec![0; self.bundle.extended.dim()];
        for (i, c) in nonzeros(x) {
            match i_o.images()[i].as_slice() {
                [(j, 1)] => out[*j as usize] = c,
                _ => return Err(Error::Invalid("i_O is not a basis inclusion".into())),
            }
        }
        Ok(out)
    }

    /// Each nonzero leg is flat in its tensor factor and the combined
    /// element is flat in O(G_(r))_K.
    pub fn certify_flat(&self, pair: &PiPointPair) -> Result<bool> {
        let k = self.check_pair(pair)?;
        let o = self.o();
        if !pair.alpha_is_zero() && !flat_in(&o, &k, &self.alpha_element(pair)?)? {
            return Ok(false);
        }
        if !pair.beta_is_zero() && !flat_in(&o, &k, &self.beta_element(pair)?)? {
            return Ok(false);
        }
        flat_in(&o, &k, &self.combined_element(pair)?)
    }

    /// Flatness of `i_O ∘ (α + β)` checked directly in D̃(G_(r))_K.
    pub fn certify_flat_in_extended(&self, pair: &PiPointPair) -> Result<bool> {
        let k = self.check_pair(pair)?;
        flat_in(&self.extended(), &k, &self.combined_in_extended(pair)?)
    }

    /// The action of the combined element on `M_K` for a module over O or
    /// D̃. The result lives over the larger of K and the module's field.
    pub fn pullback(&self, m: &FDModule, pair: &PiPointPair) -> Result<Matrix> {
        let k = self.check_pair(pair)?;
        let field = if k.embeds_in(m.field()) {
            m.field().clone()
        } else if m.field().embeds_in(&k) {
            k
        } else {
            return Err(Error::InvalidField("pair and module fields are incomparable".into()));
        };
        let mk = if m.field() == &field { m.clone() } else { m.base_change(&field)? };
        let x = self.combined_element(pair)?;
        let alg = m.algebra();
        if alg.name() == self.bundle.o.name() && alg.dim() == self.bundle.o.dim() {
            mk.act(&x)
        } else if alg.name() == self.bundle.extended.name() && alg.dim() == self.bundle.extended.dim() {
            mk.act(&self.push_to_extended(&x)?)
        } else {
            Err(Error::Shape(format!(
                "pullback needs a module over {} or {}, got {}",
                self.bundle.o.name(),
                self.bundle.extended.name(),
                alg.name()
            )))
        }
    }

    fn check_family(&self, family: &Family) -> Result<()> {
        if family.case != self.case() {
            return Err(Error::Invalid(format!("family for {} used with {}", family.case, self.case())));
        }
        Ok(())
    }

    /// Flat-certified points of the family with their Jordan types on `m`.
    pub fn jordan_types(&self, m: &FDModule, family: &Family) -> Result<Vec<(Vec<Elem>, Partition)>> {
        self.check_family(family)?;
        let p = family.case.p();
        family
            .points()?
            .into_par_iter()
            .map(|pt| -> Result<Option<(Vec<Elem>, Partition)>> {
                let pair = family.pair(&pt)?;
                if !self.certify_flat(&pair)? {
                    return Ok(None);
                }
                let n = self.pullback(m, &pair)?;
                Ok(Some((pt, jordan_type(&n, p)?)))
            })
            .filter_map(|r| r.transpose())
            .collect()
    }

    /// The flat-certified points at which the pullback of `m` is not free.
    pub fn support(&self, m: &FDModule, family: &Family) -> Result<SupportSet> {
        self.check_family(family)?;
        let start = Instant::now();
        let p = family.case.p();
        let pts = family.points()?;
        let verdicts: Vec<Option<(Vec<Elem>, bool)>> = pts
            .into_par_iter()
            .map(|pt| -> Result<Option<(Vec<Elem>, bool)>> {
                let pair = family.pair(&pt)?;
                if !self.certify_flat(&pair)? {
                    return Ok(None);
                }
                let n = self.pullback(m, &pair)?;
                Ok(Some((pt, !is_free_nilpotent(&n, p))))
            })
            .collect::<Result<_>>()?;
        let family_points = verdicts.iter().flatten().count();
        let mut points: Vec<Vec<Elem>> = verdicts.into_iter().flatten().filter(|v| v.1).map(|v| v.0).collect();
        points.sort();
        Ok(SupportSet {
            family: family.id(),
            field: family.field()?.desc().clone(),
            module: m.name().to_string(),
            points,
            family_points,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    /// Dominance-maximal Jordan types of the pullbacks over the family.
    pub fn max_jordan_type(&self, m: &FDModule, family: &Family) -> Result<MaxJordanType> {
        let types = self.jordan_types(m, family)?;
        Ok(maximal_types(&types))
    }
}

/// Maximal elements under dominance, with the first point attaining each.
pub fn maximal_types(types: &[(Vec<Elem>, Partition)]) -> MaxJordanType {
    let mut distinct: Vec<(Partition, Vec<Elem>)> = Vec::new();
    for (pt, t) in types {
        if !distinct.iter().any(|(d, _)| d == t) {
            distinct.push((t.clone(), pt.clone()));
        }
    }
    let maxima: Vec<(Partition, Vec<Elem>)> = distinct
        .iter()
        .filter(|(t, _)| {
            !distinct
                .iter()
                .any(|(u, _)| u != t && u.dominance_cmp(t) == Some(Ordering::Greater))
        })
        .cloned()
        .collect();
    let top = match maxima.as_slice() {
        [(t, _)] if distinct.iter().all(|(u, _)| t.dominates(u)) => Some(t.clone()),
        _ => None,
    };
    let (mut maxima, mut witnesses): (Vec<_>, Vec<_>) = maxima.into_iter().unzip();
    let mut order: Vec<usize> = (0..maxima.len()).collect();
    order.sort_by(|&a, &b| maxima[b].cmp(&maxima[a]));
    maxima = order.iter().map(|&i| maxima[i].clone()).collect();
    witnesses = order.iter().map(|&i| witnesses[i].clone()).collect();
    MaxJordanType { top, maxima, witnesses }
}
