//! Algebra morphisms stored by the images of source basis elements.

use crate::error::{Error, Result};
use crate::field_linalg::{Elem, Matrix, RowSpace};

use super::smash::Algebra;
use super::sparse::{nonzeros, sparsify, SparseVec};

/// Source dimensions up to this size get an exhaustive multiplicativity
/// check over all basis pairs.
pub const EXHAUSTIVE_DIM: usize = 64;

#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    name: String,
    source: Algebra,
    target: Algebra,
    images: Vec<SparseVec>,
}

impl AlgebraMorphism {
    /// `images[i]` is the image of source basis element `i`.
    pub fn new(name: &str, source: Algebra, target: Algebra, images: Vec<SparseVec>) -> Result<Self> {
        if images.len() != source.dim() {
            return Err(Error::Shape(format!(
                "{name}: {} images for source dimension {}",
                images.len(),
                source.dim()
            )));
        }
        if images.iter().flatten().any(|&(k, _)| k as usize >= target.dim()) {
            return Err(Error::Shape(format!("{name}: image index out of range")));
        }
        if source.field() != target.field() {
            return Err(Error::Shape(format!("{name}: fields differ")));
        }
        Ok(AlgebraMorphism {
            name: name.to_string(),
            source,
            target,
            images,
        })
    }

    /// Builds the morphism from a function computing basis images.
    pub fn from_fn(
        name: &str,
        source: Algebra,
        target: Algebra,
        image: impl Fn(usize) -> Vec<Elem>,
    ) -> Result<Self> {
        let images = (0..source.dim()).map(|i| sparsify(&image(i))).collect();
        Self::new(name, source, target, images)
    }

    pub fn identity(a: &Algebra) -> Self {
        let images = (0..a.dim()).map(|i| vec![(i as u32, 1)]).collect();
        AlgebraMorphism {
            name: format!("id_{}", a.name()),
            source: a.clone(),
            target: a.clone(),
            images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn images(&self) -> &[SparseVec] {
        &self.images
    }

    pub fn image_of_basis(&self, i: usize) -> Vec<Elem> {
        super::sparse::densify(&self.images[i], self.target.dim())
    }

    pub fn apply(&self, x: &[Elem]) -> Vec<Elem> {
        let f = self.target.field();
        let mut out = vec![0; self.target.dim()];
        for (i, a) in nonzeros(x) {
            for &(k, c) in &self.images[i] {
                out[k as usize] = f.add(out[k as usize], f.mul(a, c));
            }
        }
        out
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if !first.target.same(&self.source) && first.target.dim() != self.source.dim() {
            return Err(Error::Shape("composition of incompatible morphisms".into()));
        }
        let images = (0..first.source.dim())
            .map(|i| sparsify(&self.apply(&first.image_of_basis(i))))
            .collect();
        AlgebraMorphism::new(
            &format!("{}∘{}", self.name, first.name),
            first.source.clone(),
            self.target.clone(),
            images,
        )
    }

    pub fn preserves_unit(&self) -> bool {
        self.apply(&self.source.unit()) == self.target.unit()
    }

    /// Checks `φ(x y) = φ(x) φ(y)`: all basis pairs when the source is small,
    /// otherwise all (basis, generator) pairs, which suffices because the
    /// generators generate. Returns the first failing pair.
    pub fn check_multiplicative(&self) -> Result<()> {
        if !self.preserves_unit() {
            return Err(Error::Axiom(format!("{}: unit not preserved", self.name)));
        }
        let d = self.source.dim();
        let right: Vec<usize> = if d <= EXHAUSTIVE_DIM {
            (0..d).collect()
        } else {
            self.source.generators()
        };
        let imgs: Vec<Vec<Elem>> = right.iter().map(|&j| self.image_of_basis(j)).collect();
        for i in 0..d {
            let xi = self.image_of_basis(i);
            let ei = self.source.basis_vec(i);
            for (&j, yj) in right.iter().zip(&imgs) {
                let prod = self.source.mul(&ei, &self.source.basis_vec(j));
                if self.apply(&prod) != self.target.mul(&xi, yj) {
                    return Err(Error::Axiom(format!(
                        "{}: not multiplicative on ({}, {})",
                        self.name,
                        self.source.label(i),
                        self.source.label(j)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rank of the linear map, computed on the columns actually hit.
    pub fn rank(&self) -> usize {
        let mut cols: Vec<u32> = self.images.iter().flatten().map(|&(k, _)| k).collect();
        cols.sort_unstable();
        cols.dedup();
        let mut space = RowSpace::new(self.target.field(), cols.len());
        let mut r = 0;
        for img in &self.images {
            let mut v = vec![0; cols.len()];
            for &(k, c) in img {
                v[cols.binary_search(&k).expect("collected column")] = c;
            }
            if space.insert(&v) {
                r += 1;
            }
        }
        r
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    /// Dense matrix (target dim × source dim).
    pub fn matrix(&self) -> Result<Matrix> {
        let mut m = Matrix::try_zeros(self.target.field(), self.target.dim(), self.source.dim())?;
        for (j, img) in self.images.iter().enumerate() {
            for &(k, c) in img {
                m.set(k as usize, j, c);
            }
        }
        Ok(m)
    }

    /// Whether `(φ⊗φ)Δ(g) = Δ(φ(g))` for each designated generator `g` of
    /// the source, using the Hopf coproducts.
    pub fn is_coalgebra_map_on_generators(&self) -> Result<bool> {
        let f = self.target.field();
        let (ds, dt) = (self.source.dim(), self.target.dim() as u64);
        for g in self.source.generators() {
            let lhs = self.source.coproduct_basis(g)?;
            let mut l: Vec<(u64, Elem)> = Vec::new();
            for (pk, c) in lhs {
                let (a, b) = (pk as usize / ds, pk as usize % ds);
                for &(x, u) in &self.images[a] {
                    for &(y, v) in &self.images[b] {
                        l.push((x as u64 * dt + y as u64, f.mul(c, f.mul(u, v))));
                    }
                }
            }
            let mut r: Vec<(u64, Elem)> = Vec::new();
            for &(k, c) in &self.images[g] {
                for (pk, d) in self.target.coproduct_basis(k as usize)? {
                    r.push((pk as u64, f.mul(c, d)));
                }
            }
            if merge64(f, l) != merge64(f, r) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub(crate) fn merge64(f: &crate::field_linalg::Field, mut v: Vec<(u64, Elem)>) -> Vec<(u64, Elem)> {
    v.sort_unstable_by_key(|&(i, _)| i);
    let mut out: Vec<(u64, Elem)> = Vec::with_capacity(v.len());
    for (i, a) in v {
        match out.last_mut() {
            Some((j, b)) if *j == i => *b = f.add(*b, a),
            _ => out.push((i, a)),
        }
    }
    out.retain(|&(_, a)| a != 0);
    out
}
