//! Constructions on modules: restriction, tensor products, duals,
//! submodules and quotients, projectivity and free summands.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_linalg::{Elem, Field, Matrix, RowSpace};
use crate::hopf::sparse::densify;
use crate::hopf::{Algebra, AlgebraMorphism};

use super::module::FDModule;

/// Which coproduct defines the action on a tensor product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoproductChoice {
    HopfCoproduct,
    GroupCoproduct,
}

impl CoproductChoice {
    pub fn name(self) -> &'static str {
        match self {
            CoproductChoice::HopfCoproduct => "hopf",
            CoproductChoice::GroupCoproduct => "group",
        }
    }
}

/// A module map given by its matrix (target dim × source dim).
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    pub source: FDModule,
    pub target: FDModule,
    pub matrix: Matrix,
}

impl ModuleMorphism {
    pub fn new(source: FDModule, target: FDModule, matrix: Matrix) -> Result<Self> {
        source.same_setting(&target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Shape("module morphism matrix shape".into()));
        }
        for (a, b) in source.actions().iter().zip(target.actions()) {
            if matrix.mul(a)? != b.mul(&matrix)? {
                return Err(Error::Axiom("matrix does not intertwine the actions".into()));
            }
        }
        Ok(ModuleMorphism { source, target, matrix })
    }
}

impl FDModule {
    /// Restriction along `φ: source → algebra of self`; generator `g` of the
    /// source acts by the action of `φ(g)`.
    pub fn restrict_along(&self, phi: &AlgebraMorphism) -> Result<FDModule> {
        if phi.target().dim() != self.algebra().dim() || phi.target().name() != self.algebra().name() {
            return Err(Error::Shape(format!(
                "restriction along a map into {} of a module over {}",
                phi.target().name(),
                self.algebra().name()
            )));
        }
        let actions = phi
            .source()
            .generators()
            .iter()
            .map(|&g| self.act(&phi.image_of_basis(g)))
            .collect::<Result<Vec<_>>>()?;
        FDModule::from_parts(
            &format!("{} restricted along {}", self.name(), phi.name()),
            phi.source().clone(),
            self.field(),
            actions,
        )
    }

    /// `M ⊗ M'` with generator `g` acting through `Δ(g)` for the chosen
    /// coproduct.
    pub fn tensor(&self, other: &FDModule, choice: CoproductChoice) -> Result<FDModule> {
        self.same_setting(other)?;
        let alg = self.algebra();
        let d = alg.dim();
        let mut actions = Vec::new();
        for &g in &alg.generators() {
            let cop = match choice {
                CoproductChoice::HopfCoproduct => alg.coproduct_basis(g)?,
                CoproductChoice::GroupCoproduct => alg.group_coproduct_basis(g)?,
            };
            let mut m = Matrix::zeros(self.field(), self.dim() * other.dim(), self.dim() * other.dim());
            for (pk, c) in cop {
                let (i, j) = (pk as usize / d, pk as usize % d);
                let t = self.act_basis(i)?.kron(&other.act_basis(j)?)?;
                m.add_scaled(c, &t);
            }
            actions.push(m);
        }
        FDModule::from_parts(
            &format!("({}) ⊗_{} ({})", self.name(), choice.name(), other.name()),
            alg.clone(),
            self.field(),
            actions,
        )
    }

    /// Dual module: `g` acts by the transpose of the action of `S(g)`.
    pub fn dual(&self) -> Result<FDModule> {
        let alg = self.algebra();
        let actions = alg
            .generators()
            .iter()
            .map(|&g| Ok(self.act(&alg.antipode_basis(g)?)?.transpose()))
            .collect::<Result<Vec<_>>>()?;
        FDModule::from_parts(&format!("({})*", self.name()), alg.clone(), self.field(), actions)
    }

    /// `M ⊠ M'` over the tensor algebra `A ⊗ B`, whose generators are those
    /// of A followed by those of B.
    pub fn external_tensor(&self, other: &FDModule, target: &Algebra) -> Result<FDModule> {
        if self.field() != other.field() {
            return Err(Error::Shape("modules over different fields".into()));
        }
        let (na, nb) = (self.actions().len(), other.actions().len());
        if target.generators().len() != na + nb || target.dim() != self.algebra().dim() * other.algebra().dim() {
            return Err(Error::Shape("target is not the tensor algebra of the two algebras".into()));
        }
        let ia = Matrix::identity(self.field(), self.dim());
        let ib = Matrix::identity(self.field(), other.dim());
        let mut actions = Vec::with_capacity(na + nb);
        for a in self.actions() {
            actions.push(a.kron(&ib)?);
        }
        for b in other.actions() {
            actions.push(ia.kron(b)?);
        }
        FDModule::from_parts(
            &format!("{} ⊠ {}", self.name(), other.name()),
            target.clone(),
            self.field(),
            actions,
        )
    }

    /// Smallest submodule containing the given vectors, as a row space.
    pub fn submodule_span(&self, vectors: &[Vec<Elem>]) -> RowSpace {
        let mut space = RowSpace::new(self.field(), self.dim());
        let mut queue: Vec<Vec<Elem>> = Vec::new();
        for v in vectors {
            if space.insert(v) {
                queue.push(v.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for a in self.actions() {
                let w = a.mul_vec(&v);
                if space.insert(&w) {
                    queue.push(w);
                }
            }
        }
        space
    }

    /// The submodule with the given basis (which must span a submodule).
    pub fn submodule(&self, basis: &[Vec<Elem>]) -> Result<FDModule> {
        let f = self.field();
        if basis.is_empty() {
            return self.zero_module();
        }
        let b = Matrix::from_columns(f, self.dim(), basis)?;
        let actions = self
            .actions()
            .iter()
            .map(|a| {
                let img = a.mul(&b)?;
                b.solve_matrix(&img)
                    .ok_or_else(|| Error::Invalid("span is not a submodule".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        FDModule::from_parts(&format!("sub of {}", self.name()), self.algebra().clone(), f, actions)
    }

    fn zero_module(&self) -> Result<FDModule> {
        let actions = self.actions().iter().map(|_| Matrix::zeros(self.field(), 0, 0)).collect();
        FDModule::from_parts("0", self.algebra().clone(), self.field(), actions)
    }

    /// `M / N` for the submodule `N` spanned by `basis`; the quotient basis
    /// is the images of the standard basis vectors outside the pivots of N.
    pub fn quotient(&self, basis: &[Vec<Elem>]) -> Result<FDModule> {
        let f = self.field();
        let d = self.dim();
        let mut sub = RowSpace::new(f, d);
        for v in basis {
            sub.insert(v);
        }
        let mut full = RowSpace::new(f, d);
        for v in sub.basis() {
            full.insert(v);
        }
        let mut comp: Vec<usize> = Vec::new();
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            if full.insert(&e) {
                comp.push(i);
            }
        }
        let q = comp.len();
        if q == 0 {
            return self.zero_module();
        }
        // columns: sub basis then complement basis vectors
        let mut cols: Vec<Vec<Elem>> = sub.basis().to_vec();
        for &i in &comp {
            let mut e = vec![0; d];
            e[i] = 1;
            cols.push(e);
        }
        let change = Matrix::from_columns(f, d, &cols)?;
        let inv = change
            .inverse()
            .ok_or_else(|| Error::Invalid("quotient basis is singular".into()))?;
        let s = sub.dim();
        let actions = self
            .actions()
            .iter()
            .map(|a| {
                let full = inv.mul(&a.mul(&change)?)?;
                for r in s..d {
                    for c in 0..s {
                        if full.get(r, c) != 0 {
                            return Err(Error::Invalid("span is not a submodule".into()));
                        }
                    }
                }
                let idx: Vec<usize> = (s..d).collect();
                Ok(full.submatrix(&idx, &idx))
            })
            .collect::<Result<Vec<_>>>()?;
        FDModule::from_parts(&format!("{} / sub", self.name()), self.algebra().clone(), f, actions)
    }

    /// `rad(A)·M`, spanned by the images of `g - ε(g)` and closed under
    /// the action.
    pub fn radical_span(&self) -> RowSpace {
        let aug = self.algebra().augmentation();
        let gens = self.algebra().generators();
        let mut imgs = Vec::new();
        for (a, &g) in self.actions().iter().zip(&gens) {
            let mut n = a.clone();
            let e = aug[g];
            if e != 0 {
                n.add_scaled(self.field().neg(e), &Matrix::identity(self.field(), self.dim()));
            }
            imgs.extend(n.columns());
        }
        self.submodule_span(&imgs)
    }

    /// Number of generators of a projective cover: `dim M / rad(A) M`.
    pub fn top_dim(&self) -> usize {
        self.dim() - self.radical_span().dim()
    }

    /// Over a local algebra projective means free, which happens iff the
    /// surjection `A^t → M` lifting a basis of the top is injective, i.e.
    /// `dim M = t · dim A`.
    pub fn is_projective_local(&self) -> Result<bool> {
        if !self.algebra().is_local() {
            return Err(Error::NotLocal(format!(
                "{} has a non-nilpotent augmentation ideal",
                self.algebra().name()
            )));
        }
        Ok(self.dim() == self.top_dim() * self.algebra().dim())
    }

    /// Action matrices of the basis of the socle element of a local
    /// Frobenius algebra `A` (the common kernel of left multiplication by
    /// the augmentation ideal). Fails unless the socle is one-dimensional.
    pub fn socle_action(&self) -> Result<Matrix> {
        self.act(&socle_element(self.algebra())?)
    }

    /// Splits `M ≅ N ⊕ A^n` with `N` free of free summands; returns `(N, n)`.
    /// Uses that over a local self-injective algebra `A·x` is free and a
    /// summand iff the socle element does not kill `x`.
    pub fn split_free(&self) -> Result<(FDModule, usize)> {
        if !self.algebra().is_local() {
            return Err(Error::NotLocal(self.algebra().name().to_string()));
        }
        let soc = self.socle_action()?;
        let n = soc.rank();
        if n == 0 {
            return Ok((self.clone(), 0));
        }
        let f = self.field();
        let d = self.dim();
        let mut chosen: Vec<Vec<Elem>> = Vec::new();
        let mut hit = RowSpace::new(f, d);
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            if hit.insert(&soc.mul_vec(&e)) {
                chosen.push(e);
                if chosen.len() == n {
                    break;
                }
            }
        }
        let span = self.submodule_span(&chosen);
        if span.dim() != n * self.algebra().dim() {
            return Err(Error::Invalid("free part has the wrong dimension".into()));
        }
        let core = self.quotient(span.basis())?.with_name(format!("core of {}", self.name()));
        Ok((core, n))
    }
}

/// The element spanning the socle of a local Frobenius algebra.
pub fn socle_element(a: &Algebra) -> Result<Vec<Elem>> {
    let d = a.dim();
    let aug = a.augmentation();
    let f = a.field();
    let gens = a.generators();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for &g in &gens {
        let mut x = a.basis_vec(g);
        if aug[g] != 0 {
            let u = a.unit();
            f.axpy(&mut x, f.neg(aug[g]), &u);
        }
        let cols: Vec<Vec<Elem>> = (0..d).map(|k| a.mul(&x, &a.basis_vec(k))).collect();
        let m = Matrix::from_columns(f, d, &cols)?;
        for r in 0..d {
            rows.push(m.row(r).to_vec());
        }
    }
    let stacked = Matrix::from_rows(f, &rows)?;
    let ker = stacked.kernel_vectors();
    match ker.len() {
        1 => Ok(ker.into_iter().next().expect("one vector")),
        n => Err(Error::Invalid(format!("{} has a socle of dimension {n}", a.name()))),
    }
}

/// All module maps `M → N`, as a basis of matrices.
pub fn hom_space(m: &FDModule, n: &FDModule) -> Result<Vec<Matrix>> {
    m.same_setting(n)?;
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let unknowns = dm * dn;
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    // X A_g - B_g X = 0 with X (dn × dm) flattened row-major
    for (a, b) in m.actions().iter().zip(n.actions()) {
        for i in 0..dn {
            for j in 0..dm {
                let mut row = vec![0; unknowns];
                for k in 0..dm {
                    let c = a.get(k, j);
                    if c != 0 {
                        row[i * dm + k] = f.add(row[i * dm + k], c);
                    }
                }
                for k in 0..dn {
                    let c = b.get(i, k);
                    if c != 0 {
                        row[k * dm + j] = f.sub(row[k * dm + j], c);
                    }
                }
                rows.push(row);
            }
        }
    }
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let kernel = if rows.is_empty() {
        (0..unknowns).map(|i| densify(&vec![(i as u32, 1)], unknowns)).collect()
    } else {
        Matrix::from_rows(f, &rows)?.kernel_vectors()
    };
    kernel
        .into_iter()
        .map(|v| Matrix::from_vec(f, dn, dm, v))
        .collect()
}

/// Isomorphism test: searches random combinations of a basis of
/// `Hom(M, N)` over `F_{p^4}` for an invertible one. An invertible
/// combination certifies isomorphism; a `false` answer after all attempts
/// is correct with probability at least `1 - (d/p^4)^attempts`.
pub fn is_isomorphic(m: &FDModule, n: &FDModule, seed: u64) -> Result<bool> {
    if m.dim() != n.dim() {
        return Ok(false);
    }
    if m.dim() == 0 {
        return Ok(true);
    }
    let hom = hom_space(m, n)?;
    if hom.is_empty() {
        return Ok(false);
    }
    let f = m.field();
    let big = Field::new(f.p(), 4)?;
    let hom_big: Vec<Matrix> = hom.iter().map(|h| h.base_change(&big)).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let mut x = Matrix::zeros(&big, n.dim(), m.dim());
        for h in &hom_big {
            x.add_scaled(big.random(&mut rng), h);
        }
        if x.rank() == m.dim() {
            return Ok(true);
        }
    }
    Ok(false)
}
