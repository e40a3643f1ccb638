//! Finite-dimensional algebras given by structure constants, with optional
//! Hopf structure.

use std::sync::{Arc, OnceLock};

use crate::error::{guard, Error, Result};
use crate::field_linalg::{Elem, Field, Matrix, RowSpace, MAX_DIM};

use super::sparse::{nonzeros, normalize, SparseTable, SparseVec};

/// Coproduct, counit and antipode of a Hopf algebra with basis `b_0..b_{n-1}`.
///
/// `coproduct` row `i` lists `Δ(b_i)` over pair indices `j * n + k` standing
/// for `b_j ⊗ b_k`; `antipode` row `i` is `S(b_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfData {
    pub coproduct: SparseTable,
    pub counit: Vec<Elem>,
    pub antipode: SparseTable,
}

impl HopfData {
    /// The co-opposite structure: Δ^cop = flip ∘ Δ and S^cop = S^{-1}.
    ///
    /// All Hopf algebras built here have involutive antipodes, so `S` is
    /// kept; [`crate::hopf::check_hopf_axioms`] verifies the result.
    pub fn co_opposite(&self, dim: usize) -> HopfData {
        let f_rows = self.coproduct.rows().map(|row| {
            let mut v: SparseVec = row
                .into_iter()
                .map(|(pk, c)| {
                    let (j, k) = (pk as usize / dim, pk as usize % dim);
                    ((k * dim + j) as u32, c)
                })
                .collect();
            v.sort_unstable_by_key(|&(i, _)| i);
            v
        });
        HopfData {
            coproduct: SparseTable::from_rows(f_rows),
            counit: self.counit.clone(),
            antipode: self.antipode.clone(),
        }
    }
}

/// A spanning set of words in the designated generators, used to turn
/// generator actions into actions of arbitrary basis elements.
#[derive(Clone, Debug)]
pub struct WordBasis {
    /// `parents[w] = (v, g)` means word `w = v · g`; word 0 is the empty word.
    pub parents: Vec<Option<(usize, usize)>>,
    /// Each basis element expressed in the words.
    pub basis_in_words: Vec<SparseVec>,
    /// Every product `word · generator` that is not itself a word, written
    /// in the words: `(word, generator position, coordinates)`.
    pub relations: Vec<(usize, usize, SparseVec)>,
}

/// A finite-dimensional associative unital algebra over a prime or
/// extension field, stored by its structure constants.
#[derive(Debug)]
pub struct StructuredAlgebra {
    field: Field,
    name: String,
    dim: usize,
    labels: Vec<String>,
    mult: SparseTable,
    unit: Vec<Elem>,
    augmentation: Vec<Elem>,
    generators: Vec<usize>,
    hopf: Option<HopfData>,
    group_coproduct: Option<SparseTable>,
    words: OnceLock<std::result::Result<WordBasis, String>>,
    local: OnceLock<bool>,
}

impl Clone for StructuredAlgebra {
    fn clone(&self) -> Self {
        StructuredAlgebra {
            field: self.field.clone(),
            name: self.name.clone(),
            dim: self.dim,
            labels: self.labels.clone(),
            mult: self.mult.clone(),
            unit: self.unit.clone(),
            augmentation: self.augmentation.clone(),
            generators: self.generators.clone(),
            hopf: self.hopf.clone(),
            group_coproduct: self.group_coproduct.clone(),
            words: OnceLock::new(),
            local: OnceLock::new(),
        }
    }
}

/// Raw data for [`StructuredAlgebra::new`].
pub struct AlgebraData {
    pub name: String,
    pub labels: Vec<String>,
    /// Row `i * dim + j` is the product `b_i b_j`.
    pub mult: Vec<SparseVec>,
    pub unit: Vec<Elem>,
    pub augmentation: Vec<Elem>,
    pub generators: Vec<usize>,
}

impl StructuredAlgebra {
    pub fn new(field: &Field, data: AlgebraData) -> Result<Self> {
        let dim = data.labels.len();
        guard("algebra dimension", dim, MAX_DIM)?;
        if data.mult.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} product rows for dimension {dim}",
                data.mult.len()
            )));
        }
        if data.unit.len() != dim || data.augmentation.len() != dim {
            return Err(Error::Shape("unit or augmentation length".into()));
        }
        let q = field.order();
        let bad_entry = data
            .mult
            .iter()
            .flatten()
            .any(|&(k, c)| k as usize >= dim || c as usize >= q);
        if bad_entry || data.generators.iter().any(|&g| g >= dim) {
            return Err(Error::Invalid("structure constant out of range".into()));
        }
        let mult = SparseTable::from_rows(data.mult.into_iter().map(|r| normalize(field, r)));
        Ok(StructuredAlgebra {
            field: field.clone(),
            name: data.name,
            dim,
            labels: data.labels,
            mult,
            unit: data.unit,
            augmentation: data.augmentation,
            generators: data.generators,
            hopf: None,
            group_coproduct: None,
            words: OnceLock::new(),
            local: OnceLock::new(),
        })
    }

    pub fn with_hopf(mut self, hopf: HopfData) -> Result<Self> {
        let d = self.dim;
        if hopf.coproduct.len() != d || hopf.antipode.len() != d || hopf.counit.len() != d {
            return Err(Error::Shape("Hopf data size".into()));
        }
        self.hopf = Some(hopf);
        Ok(self)
    }

    pub fn without_hopf(mut self) -> Self {
        self.hopf = None;
        self.group_coproduct = None;
        self
    }

    pub fn with_group_coproduct(mut self, cop: SparseTable) -> Result<Self> {
        if cop.len() != self.dim {
            return Err(Error::Shape("group coproduct size".into()));
        }
        self.group_coproduct = Some(cop);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_generators(mut self, generators: Vec<usize>) -> Self {
        self.generators = generators;
        self.words = OnceLock::new();
        self.local = OnceLock::new();
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }

    pub fn augmentation(&self) -> &[Elem] {
        &self.augmentation
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn hopf(&self) -> Option<&HopfData> {
        self.hopf.as_ref()
    }

    pub fn group_coproduct(&self) -> Option<&SparseTable> {
        self.group_coproduct.as_ref()
    }

    pub fn mult_table(&self) -> &SparseTable {
        &self.mult
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn zero(&self) -> Vec<Elem> {
        vec![0; self.dim]
    }

    #[inline]
    pub fn mul_basis_into(&self, dst: &mut [Elem], i: usize, j: usize, coef: Elem) {
        self.mult.add_row_into(&self.field, dst, i * self.dim + j, coef);
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> SparseVec {
        self.mult.row_vec(i * self.dim + j)
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![0; self.dim];
        let ys: Vec<(usize, Elem)> = nonzeros(y).collect();
        for (i, a) in nonzeros(x) {
            for &(j, b) in &ys {
                self.mul_basis_into(&mut out, i, j, f.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, x: &[Elem], n: u32) -> Vec<Elem> {
        let mut acc = self.unit.clone();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn epsilon(&self, x: &[Elem]) -> Elem {
        self.field.dot(&self.augmentation, x)
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_mult_matrix(&self, x: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
        let f = &self.field;
        for (i, a) in nonzeros(x) {
            for j in 0..self.dim {
                for (k, c) in self.mult.row(i * self.dim + j) {
                    let e = m.get(k, j);
                    m.set(k, j, f.add(e, f.mul(a, c)));
                }
            }
        }
        m
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_mult_matrix(&self, x: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
        let f = &self.field;
        for (i, a) in nonzeros(x) {
            for j in 0..self.dim {
                for (k, c) in self.mult.row(j * self.dim + i) {
                    let e = m.get(k, j);
                    m.set(k, j, f.add(e, f.mul(a, c)));
                }
            }
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.mul_basis(i, j) == self.mul_basis(j, i)))
    }

    /// Same structure constants over a field containing this one.
    pub fn base_change(&self, target: &Field) -> Result<StructuredAlgebra> {
        if !self.field.embeds_in(target) {
            return Err(Error::InvalidField(format!(
                "{:?} does not embed in {:?}",
                self.field, target
            )));
        }
        let mut out = self.clone();
        out.field = target.clone();
        Ok(out)
    }

    /// Replaces the coproduct by its co-opposite.
    pub fn co_opposite(&self) -> Result<StructuredAlgebra> {
        let hopf = self
            .hopf
            .as_ref()
            .ok_or_else(|| Error::Missing(format!("{} has no coproduct", self.name)))?;
        let mut out = self.clone();
        out.hopf = Some(hopf.co_opposite(self.dim));
        out.name = format!("{}^cop", self.name);
        Ok(out)
    }

    /// Words in the generators spanning the algebra, computed once.
    pub fn word_basis(&self) -> Result<&WordBasis> {
        self.words
            .get_or_init(|| self.compute_word_basis())
            .as_ref()
            .map_err(|e| Error::Invalid(e.clone()))
    }

    fn compute_word_basis(&self) -> std::result::Result<WordBasis, String> {
        let d = self.dim;
        let mut space = RowSpace::tracking(&self.field, d);
        let mut elems: Vec<Vec<Elem>> = Vec::new();
        let mut parents = Vec::new();
        if !space.insert(&self.unit) {
            return Err(format!("{}: unit is zero", self.name));
        }
        elems.push(self.unit.clone());
        parents.push(None);
        let mut pending = Vec::new();
        let mut w = 0;
        while w < elems.len() {
            for (gp, &g) in self.generators.iter().enumerate() {
                let mut prod = vec![0; d];
                for (i, a) in nonzeros(&elems[w]) {
                    self.mul_basis_into(&mut prod, i, g, a);
                }
                if elems.len() < d && space.insert(&prod) {
                    elems.push(prod);
                    parents.push(Some((w, gp)));
                } else {
                    pending.push((w, gp, prod));
                }
            }
            w += 1;
        }
        if elems.len() < d {
            return Err(format!(
                "{}: generators span only {} of {} dimensions",
                self.name,
                elems.len(),
                d
            ));
        }
        let to_sparse = |v: Vec<Elem>| -> SparseVec {
            nonzeros(&v).map(|(i, a)| (i as u32, a)).collect()
        };
        let mut basis_in_words = Vec::with_capacity(d);
        for i in 0..d {
            let c = space
                .coordinates(&self.basis_vec(i))
                .ok_or_else(|| "basis element outside the word span".to_string())?;
            basis_in_words.push(to_sparse(c));
        }
        let relations = pending
            .into_iter()
            .map(|(w, gp, prod)| {
                let c = space.coordinates(&prod).expect("words span the algebra");
                (w, gp, to_sparse(c))
            })
            .collect();
        Ok(WordBasis {
            parents,
            basis_in_words,
            relations,
        })
    }

    /// Basis of the span of all products of `k` elements of the
    /// augmentation ideal.
    pub fn radical_power(&self, k: usize) -> Vec<Vec<Elem>> {
        let d = self.dim;
        let f = &self.field;
        let ideal: Vec<Vec<Elem>> = {
            let mut v = Vec::new();
            for i in 0..d {
                let mut b = self.basis_vec(i);
                let e = self.augmentation[i];
                if e != 0 {
                    f.axpy(&mut b, f.neg(e), &self.unit);
                }
                v.push(b);
            }
            let mut rs = RowSpace::new(f, d);
            v.into_iter().filter(|x| rs.insert(x)).collect()
        };
        let mut current = ideal.clone();
        for _ in 1..k {
            let mut rs = RowSpace::new(f, d);
            let mut next = Vec::new();
            for x in &current {
                for y in &ideal {
                    let z = self.mul(x, y);
                    if rs.insert(&z) {
                        next.push(z);
                    }
                }
            }
            current = next;
            if current.is_empty() {
                break;
            }
        }
        if k == 0 {
            return (0..d).map(|i| self.basis_vec(i)).collect();
        }
        current
    }

    /// Smallest `k` with (augmentation ideal)^k = 0, or `None` if the powers
    /// stabilize at a nonzero ideal (the algebra is then not local).
    pub fn nilpotency_degree(&self) -> Option<usize> {
        let mut last = usize::MAX;
        for k in 1..=self.dim + 1 {
            let n = self.radical_power(k).len();
            if n == 0 {
                return Some(k);
            }
            if n == last {
                return None;
            }
            last = n;
        }
        None
    }

    /// Whether the augmentation ideal is nilpotent. Commutative algebras
    /// are decided from the generators: they are local iff every generator
    /// minus its augmentation is nilpotent.
    pub fn is_local(&self) -> bool {
        *self.local.get_or_init(|| {
            if self.dim > 64 && self.is_commutative() && self.word_basis().is_ok() {
                let f = &self.field;
                let mut steps = 0;
                while (1usize << steps) < self.dim {
                    steps += 1;
                }
                self.generators.iter().all(|&g| {
                    let mut x = self.basis_vec(g);
                    f.axpy(&mut x, f.neg(self.augmentation[g]), &self.unit);
                    for _ in 0..steps {
                        x = self.mul(&x, &x);
                    }
                    x.iter().all(|&a| a == 0)
                })
            } else {
                self.nilpotency_degree().is_some()
            }
        })
    }

    /// The subalgebra spanned by the given basis elements, which must be
    /// closed under products and, if present, coproducts and antipode.
    pub fn restrict_to_basis(&self, indices: &[usize], name: &str) -> Result<StructuredAlgebra> {
        let d = self.dim;
        let n = indices.len();
        let mut pos = vec![usize::MAX; d];
        for (a, &i) in indices.iter().enumerate() {
            pos[i] = a;
        }
        let remap = |v: SparseVec, what: &str| -> Result<SparseVec> {
            v.into_iter()
                .map(|(k, c)| {
                    let p = pos[k as usize];
                    if p == usize::MAX {
                        Err(Error::Invalid(format!("{name}: span not closed under {what}")))
                    } else {
                        Ok((p as u32, c))
                    }
                })
                .collect()
        };
        let mut mult = Vec::with_capacity(n * n);
        for &i in indices {
            for &j in indices {
                mult.push(remap(self.mul_basis(i, j), "multiplication")?);
            }
        }
        let pick = |v: &[Elem]| -> Vec<Elem> { indices.iter().map(|&i| v[i]).collect() };
        if nonzeros(&self.unit).any(|(i, _)| pos[i] == usize::MAX) {
            return Err(Error::Invalid(format!("{name}: unit outside the span")));
        }
        let generators = self
            .generators
            .iter()
            .filter_map(|&g| (pos[g] != usize::MAX).then_some(pos[g]))
            .collect();
        let mut out = StructuredAlgebra::new(
            &self.field,
            AlgebraData {
                name: name.to_string(),
                labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
                mult,
                unit: pick(&self.unit),
                augmentation: pick(&self.augmentation),
                generators,
            },
        )?;
        let pair_remap = |v: SparseVec| -> Result<SparseVec> {
            v.into_iter()
                .map(|(pk, c)| {
                    let (j, k) = (pk as usize / d, pk as usize % d);
                    if pos[j] == usize::MAX || pos[k] == usize::MAX {
                        Err(Error::Invalid(format!("{name}: span not closed under coproduct")))
                    } else {
                        Ok(((pos[j] * n + pos[k]) as u32, c))
                    }
                })
                .collect::<Result<SparseVec>>()
                .map(|mut v| {
                    v.sort_unstable_by_key(|&(i, _)| i);
                    v
                })
        };
        if let Some(h) = &self.hopf {
            let coproduct = indices
                .iter()
                .map(|&i| pair_remap(h.coproduct.row_vec(i)))
                .collect::<Result<Vec<_>>>()?;
            let antipode = indices
                .iter()
                .map(|&i| remap(h.antipode.row_vec(i), "antipode"))
                .collect::<Result<Vec<_>>>()?;
            out = out.with_hopf(HopfData {
                coproduct: SparseTable::from_rows(coproduct),
                counit: pick(&h.counit),
                antipode: SparseTable::from_rows(antipode),
            })?;
        }
        if let Some(g) = &self.group_coproduct {
            let rows = indices
                .iter()
                .map(|&i| pair_remap(g.row_vec(i)))
                .collect::<Result<Vec<_>>>()?;
            out = out.with_group_coproduct(SparseTable::from_rows(rows))?;
        }
        Ok(out)
    }

    /// Picks generators: a complement of rad² in rad among basis vectors,
    /// then further basis elements until the generated subalgebra is
    /// everything (needed for non-local algebras).
    pub fn choose_generators(&self) -> Vec<usize> {
        let d = self.dim;
        let f = &self.field;
        let mut span = RowSpace::new(f, d);
        for v in self.radical_power(2) {
            span.insert(&v);
        }
        let mut gens = Vec::new();
        for i in 0..d {
            if self.augmentation[i] != 0 {
                continue;
            }
            if span.insert(&self.basis_vec(i)) {
                gens.push(i);
            }
        }
        loop {
            let trial = self.clone().with_generators(gens.clone());
            let generated = {
                let mut rs = RowSpace::new(f, d);
                let mut elems = vec![self.unit.clone()];
                rs.insert(&self.unit);
                let mut w = 0;
                while w < elems.len() {
                    for &g in &gens {
                        let prod = trial.mul(&elems[w], &self.basis_vec(g));
                        if rs.insert(&prod) {
                            elems.push(prod);
                        }
                    }
                    w += 1;
                }
                rs
            };
            if generated.dim() == d {
                return gens;
            }
            let next = (0..d)
                .find(|&i| !generated.contains(&self.basis_vec(i)))
                .expect("a missing basis element");
            gens.push(next);
        }
    }

    pub fn coproduct_of(&self, x: &[Elem]) -> Result<SparseVec> {
        let h = self
            .hopf
            .as_ref()
            .ok_or_else(|| Error::Missing(format!("{} has no coproduct", self.name)))?;
        let mut acc = Vec::new();
        for (i, a) in nonzeros(x) {
            for (pk, c) in h.coproduct.row(i) {
                acc.push((pk as u32, self.field.mul(a, c)));
            }
        }
        Ok(normalize(&self.field, acc))
    }

    pub fn antipode_of(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        let h = self
            .hopf
            .as_ref()
            .ok_or_else(|| Error::Missing(format!("{} has no antipode", self.name)))?;
        let mut out = vec![0; self.dim];
        for (i, a) in nonzeros(x) {
            h.antipode.add_row_into(&self.field, &mut out, i, a);
        }
        Ok(out)
    }
}

/// The linear dual of a Hopf algebra: multiplication is the transpose of the
/// coproduct and the coproduct is the transpose of the multiplication.
pub fn dual_hopf(a: &StructuredAlgebra, name: &str, label: impl Fn(&str) -> String) -> Result<StructuredAlgebra> {
    let h = a
        .hopf()
        .ok_or_else(|| Error::Missing(format!("{} has no coproduct", a.name())))?;
    let d = a.dim();
    guard("dual dimension", d, MAX_DIM)?;
    let mut mult: Vec<SparseVec> = vec![Vec::new(); d * d];
    for i in 0..d {
        for (pk, c) in h.coproduct.row(i) {
            mult[pk].push((i as u32, c));
        }
    }
    let mut cop: Vec<SparseVec> = vec![Vec::new(); d];
    for j in 0..d {
        for k in 0..d {
            for (i, c) in a.mult_table().row(j * d + k) {
                cop[i].push(((j * d + k) as u32, c));
            }
        }
    }
    let mut antipode: Vec<SparseVec> = vec![Vec::new(); d];
    for i in 0..d {
        for (j, c) in h.antipode.row(i) {
            antipode[j].push((i as u32, c));
        }
    }
    let f = a.field();
    let dual = StructuredAlgebra::new(
        f,
        AlgebraData {
            name: name.to_string(),
            labels: a.labels().iter().map(|l| label(l)).collect(),
            mult,
            unit: h.counit.clone(),
            augmentation: a.unit().to_vec(),
            generators: Vec::new(),
        },
    )?
    .with_hopf(HopfData {
        coproduct: SparseTable::from_rows(cop.into_iter().map(|v| normalize(f, v))),
        counit: a.unit().to_vec(),
        antipode: SparseTable::from_rows(antipode.into_iter().map(|v| normalize(f, v))),
    })?;
    let gens = dual.choose_generators();
    Ok(dual.with_generators(gens))
}

/// Tensor product algebra `A ⊗ B` with basis index `i * dim B + j`, the
/// tensor product coproduct when both factors are Hopf, and the tensor
/// product of group coproducts (falling back to the Hopf coproduct of a
/// factor that has none).
pub fn tensor_algebra(a: &StructuredAlgebra, b: &StructuredAlgebra, name: &str) -> Result<StructuredAlgebra> {
    let (da, db) = (a.dim(), b.dim());
    let d = da * db;
    guard("tensor algebra dimension", d, MAX_DIM)?;
    let f = a.field();
    if a.field() != b.field() {
        return Err(Error::Shape("tensor factors over different fields".into()));
    }
    let mut mult = Vec::with_capacity(d * d);
    for i1 in 0..da {
        for j1 in 0..db {
            for i2 in 0..da {
                let ra = a.mul_basis(i1, i2);
                for j2 in 0..db {
                    let rb = b.mul_basis(j1, j2);
                    let mut v = Vec::with_capacity(ra.len() * rb.len());
                    for &(k, x) in &ra {
                        for &(l, y) in &rb {
                            v.push((k * db as u32 + l, f.mul(x, y)));
                        }
                    }
                    mult.push(v);
                }
            }
        }
    }
    let kron = |u: &[Elem], v: &[Elem]| -> Vec<Elem> {
        let mut out = vec![0; d];
        for (i, x) in nonzeros(u) {
            for (j, y) in nonzeros(v) {
                out[i * db + j] = f.mul(x, y);
            }
        }
        out
    };
    let not_basis = || Error::Invalid("factor unit is not a basis element".into());
    let ub = b_unit_index(b).ok_or_else(not_basis)?;
    let ua = b_unit_index(a).ok_or_else(not_basis)?;
    let mut generators: Vec<usize> = a.generators().iter().map(|&g| g * db + ub).collect();
    generators.extend(b.generators().iter().map(|&g| ua * db + g));
    let labels = a
        .labels()
        .iter()
        .flat_map(|x| b.labels().iter().map(move |y| format!("{x}#{y}")))
        .collect();
    let mut out = StructuredAlgebra::new(
        f,
        AlgebraData {
            name: name.to_string(),
            labels,
            mult,
            unit: kron(a.unit(), b.unit()),
            augmentation: kron(a.augmentation(), b.augmentation()),
            generators,
        },
    )?;
    let tensor_cop = |ca: &SparseTable, cb: &SparseTable| -> SparseTable {
        let rows = (0..da).flat_map(|i| (0..db).map(move |j| (i, j))).map(|(i, j)| {
            let mut v = Vec::new();
            for (pa, x) in ca.row(i) {
                let (a1, a2) = (pa / da, pa % da);
                for (pb, y) in cb.row(j) {
                    let (b1, b2) = (pb / db, pb % db);
                    let left = a1 * db + b1;
                    let right = a2 * db + b2;
                    v.push(((left * d + right) as u32, f.mul(x, y)));
                }
            }
            normalize(f, v)
        });
        SparseTable::from_rows(rows)
    };
    if let (Some(ha), Some(hb)) = (a.hopf(), b.hopf()) {
        let mut antipode = Vec::with_capacity(d);
        for i in 0..da {
            for j in 0..db {
                let mut v = Vec::new();
                for (k, x) in ha.antipode.row(i) {
                    for (l, y) in hb.antipode.row(j) {
                        v.push(((k * db + l) as u32, f.mul(x, y)));
                    }
                }
                antipode.push(v);
            }
        }
        out = out.with_hopf(HopfData {
            coproduct: tensor_cop(&ha.coproduct, &hb.coproduct),
            counit: kron(&ha.counit, &hb.counit),
            antipode: SparseTable::from_rows(antipode),
        })?;
        if a.group_coproduct().is_some() || b.group_coproduct().is_some() {
            let ga = a.group_coproduct().unwrap_or(&ha.coproduct);
            let gb = b.group_coproduct().unwrap_or(&hb.coproduct);
            out = out.with_group_coproduct(tensor_cop(ga, gb))?;
        }
    }
    Ok(out)
}

/// Index of the basis element equal to the unit, if the unit is one.
pub(crate) fn b_unit_index(a: &StructuredAlgebra) -> Option<usize> {
    let nz: Vec<_> = nonzeros(a.unit()).collect();
    match nz.as_slice() {
        [(i, 1)] => Some(*i),
        _ => None,
    }
}

/// Shared handle.
pub type AlgebraRef = Arc<StructuredAlgebra>;
