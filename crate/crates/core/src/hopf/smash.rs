//! Smash products `B # H` kept in factored form, and the [`Algebra`] handle
//! that hides whether an algebra is dense or lazy.

use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{guard, Error, Result};
use crate::field_linalg::{Elem, Field, MAX_DIM};

use super::algebra::{b_unit_index, AlgebraData, AlgebraRef, HopfData, StructuredAlgebra};
use super::sparse::{nonzeros, normalize, SparseTable, SparseVec};

/// `B # H` for a Hopf algebra `H` acting on an algebra `B`, with product
/// `(f#h)(f'#h') = Σ f (h₁·f') # h₂ h'` and the tensor product coalgebra
/// structure. Basis element `b_i # h_j` has index `i * dim H + j`.
#[derive(Debug)]
pub struct LazySmash {
    name: String,
    b: AlgebraRef,
    h: AlgebraRef,
    /// Row `j * dim B + k` is `h_j · b_k`.
    action: SparseTable,
    unit_b: usize,
    unit_h: usize,
    dense: OnceLock<std::result::Result<AlgebraRef, String>>,
}

impl LazySmash {
    /// Builds the smash product after checking that `action` makes `B` an
    /// `H`-module algebra. `action[j * dim B + k]` is `h_j · b_k`.
    pub fn new(name: &str, b: AlgebraRef, h: AlgebraRef, action: Vec<SparseVec>) -> Result<Self> {
        if b.field() != h.field() {
            return Err(Error::Shape("smash factors over different fields".into()));
        }
        if h.hopf().is_none() {
            return Err(Error::Missing("acting algebra needs a coproduct".into()));
        }
        if action.len() != b.dim() * h.dim() {
            return Err(Error::Shape("action tensor size".into()));
        }
        let unit_b = b_unit_index(&b).ok_or_else(|| Error::Invalid("unit of B is not a basis vector".into()))?;
        let unit_h = b_unit_index(&h).ok_or_else(|| Error::Invalid("unit of H is not a basis vector".into()))?;
        let f = b.field().clone();
        let s = LazySmash {
            name: name.to_string(),
            action: SparseTable::from_rows(action.into_iter().map(|v| normalize(&f, v))),
            b,
            h,
            unit_b,
            unit_h,
            dense: OnceLock::new(),
        };
        s.check_module_algebra()?;
        Ok(s)
    }

    /// Checks `h·(f g) = Σ (h₁·f)(h₂·g)` for basis `h`, `f` and generators
    /// `g`; `h·1 = ε(h) 1`; `(h' h)·f = h'·(h·f)` for generators `h'`; and
    /// `1·f = f`. Together these imply the axioms for all elements.
    pub fn check_module_algebra(&self) -> Result<()> {
        let (b, h) = (&self.b, &self.h);
        let f = b.field();
        let (db, dh) = (b.dim(), h.dim());
        let hd = h.hopf().expect("checked at construction");
        for j in 0..dh {
            let one = self.act_basis(j, self.unit_b);
            let mut expect = vec![0; db];
            expect[self.unit_b] = hd.counit[j];
            if one != expect {
                return Err(Error::Axiom(format!(
                    "{}: {}·1 is not ε·1",
                    self.name,
                    h.labels()[j]
                )));
            }
            for k in 0..db {
                for &g in b.generators() {
                    let lhs = self.act(j, &sparse_basis(b.mul_basis(k, g), db));
                    let mut rhs = vec![0; db];
                    for (pk, c) in hd.coproduct.row(j) {
                        let (j1, j2) = (pk / dh, pk % dh);
                        let x = self.act_basis(j1, k);
                        let y = self.act_basis(j2, g);
                        let xy = b.mul(&x, &y);
                        f.axpy(&mut rhs, c, &xy);
                    }
                    if lhs != rhs {
                        return Err(Error::Axiom(format!(
                            "{}: {} does not act as an algebra map on {}·{}",
                            self.name,
                            h.labels()[j],
                            b.labels()[k],
                            b.labels()[g]
                        )));
                    }
                }
            }
        }
        for k in 0..db {
            let mut e = vec![0; db];
            e[k] = 1;
            if self.act_basis(self.unit_h, k) != e {
                return Err(Error::Axiom(format!("{}: unit of H acts nontrivially", self.name)));
            }
            for &g in h.generators() {
                for j in 0..dh {
                    let gh = h.mul_basis(g, j);
                    let mut lhs = vec![0; db];
                    for &(jj, c) in &gh {
                        let v = self.act_basis(jj as usize, k);
                        f.axpy(&mut lhs, c, &v);
                    }
                    let rhs = self.act(g, &self.act_basis(j, k));
                    if lhs != rhs {
                        return Err(Error::Axiom(format!(
                            "{}: action is not associative at ({}, {}, {})",
                            self.name,
                            h.labels()[g],
                            h.labels()[j],
                            b.labels()[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &Field {
        self.b.field()
    }

    pub fn b(&self) -> &AlgebraRef {
        &self.b
    }

    pub fn h(&self) -> &AlgebraRef {
        &self.h
    }

    pub fn action_table(&self) -> &SparseTable {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.b.dim() * self.h.dim()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.h.dim() + j
    }

    #[inline]
    pub fn split(&self, idx: usize) -> (usize, usize) {
        (idx / self.h.dim(), idx % self.h.dim())
    }

    pub fn unit_indices(&self) -> (usize, usize) {
        (self.unit_b, self.unit_h)
    }

    /// `h_j · b_k` as a dense vector of B.
    pub fn act_basis(&self, j: usize, k: usize) -> Vec<Elem> {
        let mut v = vec![0; self.b.dim()];
        self.action.add_row_into(self.field(), &mut v, j * self.b.dim() + k, 1);
        v
    }

    /// `h_j · x` for `x` in B.
    pub fn act(&self, j: usize, x: &[Elem]) -> Vec<Elem> {
        let db = self.b.dim();
        let mut v = vec![0; db];
        for (k, a) in nonzeros(x) {
            self.action.add_row_into(self.field(), &mut v, j * db + k, a);
        }
        v
    }

    /// Whether `h · f = ε(h) f` for every basis pair.
    pub fn action_is_trivial(&self) -> bool {
        let hd = self.h.hopf().expect("checked at construction");
        let db = self.b.dim();
        (0..self.h.dim()).all(|j| {
            (0..db).all(|k| {
                let v = self.action.row_vec(j * db + k);
                let e = hd.counit[j];
                if e == 0 {
                    v.is_empty()
                } else {
                    v == vec![(k as u32, e)]
                }
            })
        })
    }

    /// `f # h` from factor vectors.
    pub fn pure(&self, f: &[Elem], h: &[Elem]) -> Vec<Elem> {
        let fld = self.field();
        let dh = self.h.dim();
        let mut out = vec![0; self.dim()];
        for (i, a) in nonzeros(f) {
            for (j, c) in nonzeros(h) {
                out[i * dh + j] = fld.mul(a, c);
            }
        }
        out
    }

    /// Product of two elements given in the `b_i # h_j` basis.
    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let (db, dh) = (self.b.dim(), self.h.dim());
        let hd = self.h.hopf().expect("checked at construction");
        let mut out = vec![0; self.dim()];
        let ys: Vec<(usize, Elem)> = nonzeros(y).collect();
        let mut bvec = vec![0; db];
        let mut hvec = vec![0; dh];
        for (xi, a) in nonzeros(x) {
            let (i, j) = (xi / dh, xi % dh);
            for (pk, c) in hd.coproduct.row(j) {
                let (j1, j2) = (pk / dh, pk % dh);
                let ac = f.mul(a, c);
                for &(yi, b) in &ys {
                    let (k, l) = (yi / dh, yi % dh);
                    let coef = f.mul(ac, b);
                    bvec.iter_mut().for_each(|v| *v = 0);
                    for (m, d) in self.action.row(j1 * db + k) {
                        self.b.mul_basis_into(&mut bvec, i, m, d);
                    }
                    hvec.iter_mut().for_each(|v| *v = 0);
                    self.h.mul_basis_into(&mut hvec, j2, l, coef);
                    for (bi, bv) in nonzeros(&bvec) {
                        for (hi, hv) in nonzeros(&hvec) {
                            let o = bi * dh + hi;
                            out[o] = f.add(out[o], f.mul(bv, hv));
                        }
                    }
                }
            }
        }
        out
    }

    /// Coproduct of a basis element over pair indices of the smash.
    pub fn coproduct_basis(&self, idx: usize) -> Result<SparseVec> {
        let (bh, hh) = match (self.b.hopf(), self.h.hopf()) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::Missing("smash factor without coproduct".into())),
        };
        Ok(tensor_coproduct_row(self, &bh.coproduct, &hh.coproduct, idx))
    }

    /// Materializes the structure tensor, coproduct, counit and antipode
    /// `S(f#h) = (1#S(h))(S(f)#1)`. Cached.
    pub fn dense_realization(&self) -> Result<AlgebraRef> {
        self.dense
            .get_or_init(|| self.build_dense().map(Arc::new).map_err(|e| e.to_string()))
            .clone()
            .map_err(|e| Error::Invalid(e))
    }

    fn build_dense(&self) -> Result<StructuredAlgebra> {
        let d = self.dim();
        guard("dense realization dimension", d, MAX_DIM)?;
        let f = self.field().clone();
        let (db, dh) = (self.b.dim(), self.h.dim());
        let mut mult = Vec::with_capacity(d * d);
        for x in 0..d {
            for y in 0..d {
                let mut ex = vec![0; d];
                ex[x] = 1;
                let mut ey = vec![0; d];
                ey[y] = 1;
                mult.push(nonzeros(&self.mul(&ex, &ey)).map(|(i, a)| (i as u32, a)).collect());
            }
        }
        let labels = (0..d)
            .map(|idx| {
                let (i, j) = self.split(idx);
                format!("{}#{}", self.b.labels()[i], self.h.labels()[j])
            })
            .collect();
        let mut unit = vec![0; d];
        unit[self.index(self.unit_b, self.unit_h)] = 1;
        let aug = self.pure(self.b.augmentation(), self.h.augmentation());
        let mut generators: Vec<usize> = self
            .b
            .generators()
            .iter()
            .map(|&g| self.index(g, self.unit_h))
            .collect();
        generators.extend(self.h.generators().iter().map(|&g| self.index(self.unit_b, g)));
        let mut alg = StructuredAlgebra::new(
            &f,
            AlgebraData {
                name: format!("{} (dense)", self.name),
                labels,
                mult,
                unit,
                augmentation: aug,
                generators,
            },
        )?;
        if let (Some(bh), Some(hh)) = (self.b.hopf(), self.h.hopf()) {
            let coproduct = SparseTable::from_rows(
                (0..d).map(|idx| tensor_coproduct_row(self, &bh.coproduct, &hh.coproduct, idx)),
            );
            let counit = self.pure(&bh.counit, &hh.counit);
            let mut antipode = Vec::with_capacity(d);
            for idx in 0..d {
                let (i, j) = self.split(idx);
                let mut sb = vec![0; db];
                bh.antipode.add_row_into(&f, &mut sb, i, 1);
                let mut sh = vec![0; dh];
                hh.antipode.add_row_into(&f, &mut sh, j, 1);
                let mut one_b = vec![0; db];
                one_b[self.unit_b] = 1;
                let mut one_h = vec![0; dh];
                one_h[self.unit_h] = 1;
                let left = self.pure(&one_b, &sh);
                let right = self.pure(&sb, &one_h);
                let s = self.mul(&left, &right);
                antipode.push(nonzeros(&s).map(|(i, a)| (i as u32, a)).collect());
            }
            alg = alg.with_hopf(HopfData {
                coproduct,
                counit,
                antipode: SparseTable::from_rows(antipode),
            })?;
            let bg = self.b.group_coproduct();
            let hg = self.h.group_coproduct();
            if bg.is_some() || hg.is_some() {
                let cop = SparseTable::from_rows((0..d).map(|idx| {
                    tensor_coproduct_row(
                        self,
                        bg.unwrap_or(&bh.coproduct),
                        hg.unwrap_or(&hh.coproduct),
                        idx,
                    )
                }));
                alg = alg.with_group_coproduct(cop)?;
            }
        }
        Ok(alg)
    }
}

fn sparse_basis(v: SparseVec, len: usize) -> Vec<Elem> {
    super::sparse::densify(&v, len)
}

/// `Δ(b_i # h_j) = Σ (b_i1 # h_j1) ⊗ (b_i2 # h_j2)` over smash pair indices.
fn tensor_coproduct_row(s: &LazySmash, cb: &SparseTable, ch: &SparseTable, idx: usize) -> SparseVec {
    let f = s.field();
    let (db, dh) = (s.b.dim(), s.h.dim());
    let d = (db * dh) as u64;
    let (i, j) = s.split(idx);
    let mut v = Vec::new();
    for (pb, x) in cb.row(i) {
        let (i1, i2) = (pb / db, pb % db);
        for (ph, y) in ch.row(j) {
            let (j1, j2) = (ph / dh, ph % dh);
            let left = (i1 * dh + j1) as u64;
            let right = (i2 * dh + j2) as u64;
            v.push(((left * d + right) as u32, f.mul(x, y)));
        }
    }
    normalize(f, v)
}

/// An algebra handle: dense structure constants or a lazy smash product.
#[derive(Clone, Debug)]
pub enum Algebra {
    Dense(AlgebraRef),
    Smash(Arc<LazySmash>),
}

impl From<StructuredAlgebra> for Algebra {
    fn from(a: StructuredAlgebra) -> Self {
        Algebra::Dense(Arc::new(a))
    }
}

impl From<AlgebraRef> for Algebra {
    fn from(a: AlgebraRef) -> Self {
        Algebra::Dense(a)
    }
}

impl From<LazySmash> for Algebra {
    fn from(a: LazySmash) -> Self {
        Algebra::Smash(Arc::new(a))
    }
}

impl From<Arc<LazySmash>> for Algebra {
    fn from(a: Arc<LazySmash>) -> Self {
        Algebra::Smash(a)
    }
}

impl Algebra {
    pub fn field(&self) -> &Field {
        match self {
            Algebra::Dense(a) => a.field(),
            Algebra::Smash(s) => s.field(),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Algebra::Dense(a) => a.name(),
            Algebra::Smash(s) => s.name(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Algebra::Dense(a) => a.dim(),
            Algebra::Smash(s) => s.dim(),
        }
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self, Algebra::Smash(_))
    }

    pub fn as_dense(&self) -> Option<&AlgebraRef> {
        match self {
            Algebra::Dense(a) => Some(a),
            Algebra::Smash(_) => None,
        }
    }

    pub fn as_smash(&self) -> Option<&Arc<LazySmash>> {
        match self {
            Algebra::Smash(s) => Some(s),
            Algebra::Dense(_) => None,
        }
    }

    /// The dense structure constants, materializing a smash product if
    /// needed.
    pub fn dense(&self) -> Result<AlgebraRef> {
        match self {
            Algebra::Dense(a) => Ok(a.clone()),
            Algebra::Smash(s) => s.dense_realization(),
        }
    }

    pub fn same(&self, other: &Algebra) -> bool {
        match (self, other) {
            (Algebra::Dense(a), Algebra::Dense(b)) => Arc::ptr_eq(a, b),
            (Algebra::Smash(a), Algebra::Smash(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    pub fn label(&self, i: usize) -> String {
        match self {
            Algebra::Dense(a) => a.labels()[i].clone(),
            Algebra::Smash(s) => {
                let (x, y) = s.split(i);
                format!("{}#{}", s.b().labels()[x], s.h().labels()[y])
            }
        }
    }

    pub fn unit(&self) -> Vec<Elem> {
        match self {
            Algebra::Dense(a) => a.unit().to_vec(),
            Algebra::Smash(s) => {
                let mut v = vec![0; s.dim()];
                let (i, j) = s.unit_indices();
                v[s.index(i, j)] = 1;
                v
            }
        }
    }

    pub fn zero_vec(&self) -> Vec<Elem> {
        vec![0; self.dim()]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn epsilon(&self, x: &[Elem]) -> Elem {
        match self {
            Algebra::Dense(a) => a.epsilon(x),
            Algebra::Smash(s) => {
                let f = s.field();
                let (eb, eh) = (s.b().augmentation(), s.h().augmentation());
                nonzeros(x).fold(0, |acc, (idx, a)| {
                    let (i, j) = s.split(idx);
                    f.add(acc, f.mul(a, f.mul(eb[i], eh[j])))
                })
            }
        }
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        match self {
            Algebra::Dense(a) => a.mul(x, y),
            Algebra::Smash(s) => s.mul(x, y),
        }
    }

    pub fn pow(&self, x: &[Elem], n: u32) -> Vec<Elem> {
        let mut acc = self.unit();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Designated generators as basis indices: for a smash product, the
    /// generators of B (as `g # 1`) followed by those of H (as `1 # g`).
    pub fn generators(&self) -> Vec<usize> {
        match self {
            Algebra::Dense(a) => a.generators().to_vec(),
            Algebra::Smash(s) => {
                let (ub, uh) = s.unit_indices();
                let mut g: Vec<usize> = s.b().generators().iter().map(|&x| s.index(x, uh)).collect();
                g.extend(s.h().generators().iter().map(|&y| s.index(ub, y)));
                g
            }
        }
    }

    /// Whether the Hopf coproduct is available.
    pub fn has_coproduct(&self) -> bool {
        match self {
            Algebra::Dense(a) => a.hopf().is_some(),
            Algebra::Smash(s) => s.b().hopf().is_some() && s.h().hopf().is_some(),
        }
    }

    pub fn has_group_coproduct(&self) -> bool {
        match self {
            Algebra::Dense(a) => a.group_coproduct().is_some(),
            Algebra::Smash(s) => {
                s.b().group_coproduct().is_some() || s.h().group_coproduct().is_some()
            }
        }
    }

    /// Hopf coproduct of a basis element, over pair indices `j * dim + k`.
    pub fn coproduct_basis(&self, i: usize) -> Result<SparseVec> {
        match self {
            Algebra::Dense(a) => a
                .hopf()
                .map(|h| h.coproduct.row_vec(i))
                .ok_or_else(|| Error::Missing(format!("{} has no coproduct", a.name()))),
            Algebra::Smash(s) => s.coproduct_basis(i),
        }
    }

    /// The alternative (group-scheme) coproduct of a basis element.
    pub fn group_coproduct_basis(&self, i: usize) -> Result<SparseVec> {
        let missing = || Error::Missing(format!("{} has no group coproduct", self.name()));
        match self {
            Algebra::Dense(a) => a.group_coproduct().map(|g| g.row_vec(i)).ok_or_else(missing),
            Algebra::Smash(s) => {
                if !self.has_group_coproduct() {
                    return Err(missing());
                }
                let (bh, hh) = (s.b().hopf().ok_or_else(missing)?, s.h().hopf().ok_or_else(missing)?);
                let cb = s.b().group_coproduct().unwrap_or(&bh.coproduct);
                let ch = s.h().group_coproduct().unwrap_or(&hh.coproduct);
                Ok(tensor_coproduct_row(s, cb, ch, i))
            }
        }
    }

    /// Local means the augmentation ideal is nilpotent; a smash product is
    /// treated as local when both factors are.
    pub fn is_local(&self) -> bool {
        match self {
            Algebra::Dense(a) => a.is_local(),
            Algebra::Smash(s) => s.b().is_local() && s.h().is_local(),
        }
    }

    /// Antipode of a basis element; `S(f#h) = (1#S(h))(S(f)#1)` on a smash.
    pub fn antipode_basis(&self, i: usize) -> Result<Vec<Elem>> {
        match self {
            Algebra::Dense(a) => a.antipode_of(&a.basis_vec(i)),
            Algebra::Smash(s) => {
                let missing = || Error::Missing(format!("{} has no antipode", s.name()));
                let (bh, hh) = (s.b().hopf().ok_or_else(missing)?, s.h().hopf().ok_or_else(missing)?);
                let f = s.field();
                let (x, y) = s.split(i);
                let (ub, uh) = s.unit_indices();
                let mut sb = vec![0; s.b().dim()];
                bh.antipode.add_row_into(f, &mut sb, x, 1);
                let mut sh = vec![0; s.h().dim()];
                hh.antipode.add_row_into(f, &mut sh, y, 1);
                let one_b = s.b().basis_vec(ub);
                let one_h = s.h().basis_vec(uh);
                Ok(s.mul(&s.pure(&one_b, &sh), &s.pure(&sb, &one_h)))
            }
        }
    }

    /// Augmentation of each basis element.
    pub fn augmentation(&self) -> Vec<Elem> {
        match self {
            Algebra::Dense(a) => a.augmentation().to_vec(),
            Algebra::Smash(s) => {
                let f = s.field();
                let (eb, eh) = (s.b().augmentation(), s.h().augmentation());
                (0..s.dim())
                    .map(|idx| {
                        let (i, j) = s.split(idx);
                        f.mul(eb[i], eh[j])
                    })
                    .collect()
            }
        }
    }

    /// Random element with at most `support` nonzero coordinates (all
    /// coordinates when `support >= dim`).
    pub fn random_element<R: Rng + ?Sized>(&self, support: usize, rng: &mut R) -> Vec<Elem> {
        let f = self.field();
        if support >= self.dim() {
            (0..self.dim()).map(|_| f.random(rng)).collect()
        } else {
            let mut v = vec![0; self.dim()];
            for _ in 0..support {
                let i = rng.gen_range(0..self.dim());
                v[i] = f.random(rng);
            }
            v
        }
    }
}
