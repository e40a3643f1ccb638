//! Finite-dimensional modules given by the action of designated generators.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::field_linalg::{Elem, Field, FieldDesc, Matrix};
use crate::hopf::sparse::nonzeros;
use crate::hopf::{Algebra, StructuredAlgebra};

/// Largest module dimension accepted by the constructors.
pub const MAX_MODULE_DIM: usize = 4096;

/// Matrices of all words in the generators, per factor for a smash product.
#[derive(Clone, Debug)]
enum WordMats {
    Dense(Vec<Matrix>),
    Smash { b: Vec<Matrix>, h: Vec<Matrix> },
}

/// A left module over an [`Algebra`], possibly after extending scalars to
/// a field `K` containing the algebra's field. `actions[i]` is the matrix of
/// the `i`-th designated generator (column convention: `g·v = A v`).
#[derive(Debug)]
pub struct FDModule {
    name: String,
    algebra: Algebra,
    field: Field,
    dim: usize,
    actions: Vec<Matrix>,
    words: OnceLock<std::result::Result<Arc<WordMats>, String>>,
}

impl Clone for FDModule {
    fn clone(&self) -> Self {
        let words = OnceLock::new();
        if let Some(w) = self.words.get() {
            let _ = words.set(w.clone());
        }
        FDModule {
            name: self.name.clone(),
            algebra: self.algebra.clone(),
            field: self.field.clone(),
            dim: self.dim,
            actions: self.actions.clone(),
            words,
        }
    }
}

fn word_mats(alg: &StructuredAlgebra, gens: &[Matrix], field: &Field, dim: usize) -> Result<Vec<Matrix>> {
    let wb = alg.word_basis()?;
    let mut out: Vec<Matrix> = Vec::with_capacity(wb.parents.len());
    for parent in &wb.parents {
        let m = match parent {
            None => Matrix::identity(field, dim),
            Some((v, gp)) => out[*v].mul(&gens[*gp])?,
        };
        out.push(m);
    }
    Ok(out)
}

fn combine(field: &Field, dim: usize, mats: &[Matrix], coords: &[(u32, Elem)]) -> Matrix {
    let mut m = Matrix::zeros(field, dim, dim);
    for &(w, c) in coords {
        m.add_scaled(c, &mats[w as usize]);
    }
    m
}

impl FDModule {
    /// Builds a module and checks every defining relation of the algebra
    /// (and, for a smash product, the compatibility of the two factors).
    pub fn new(name: &str, algebra: Algebra, field: &Field, actions: Vec<Matrix>) -> Result<Self> {
        let m = Self::from_parts(name, algebra, field, actions)?;
        m.check_relations()?;
        Ok(m)
    }

    /// Builds a module whose relations hold by construction.
    pub(crate) fn from_parts(name: &str, algebra: Algebra, field: &Field, actions: Vec<Matrix>) -> Result<Self> {
        if !algebra.field().embeds_in(field) {
            return Err(Error::InvalidField(format!(
                "{} is not an extension of the field of {}",
                field.desc().order(),
                algebra.name()
            )));
        }
        let ngens = algebra.generators().len();
        if actions.len() != ngens {
            return Err(Error::Shape(format!(
                "{name}: {} action matrices for {ngens} generators",
                actions.len()
            )));
        }
        let dim = actions.first().map_or(0, |a| a.rows());
        guard("module dimension", dim, MAX_MODULE_DIM)?;
        for a in &actions {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::Shape(format!("{name}: action matrices must be {dim}x{dim}")));
            }
            if a.field() != field {
                return Err(Error::Shape(format!("{name}: action matrix over a different field")));
            }
        }
        Ok(FDModule {
            name: name.to_string(),
            algebra,
            field: field.clone(),
            dim,
            actions,
            words: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    fn words(&self) -> Result<Arc<WordMats>> {
        self.words
            .get_or_init(|| {
                let build = || -> Result<WordMats> {
                    match &self.algebra {
                        Algebra::Dense(a) => Ok(WordMats::Dense(word_mats(a, &self.actions, &self.field, self.dim)?)),
                        Algebra::Smash(s) => {
                            let nb = s.b().generators().len();
                            let b = word_mats(s.b(), &self.actions[..nb], &self.field, self.dim)?;
                            let h = word_mats(s.h(), &self.actions[nb..], &self.field, self.dim)?;
                            Ok(WordMats::Smash { b, h })
                        }
                    }
                };
                build().map(Arc::new).map_err(|e| e.to_string())
            })
            .clone()
            .map_err(Error::Invalid)
    }

    /// Action of basis element `i` of the algebra.
    pub fn act_basis(&self, i: usize) -> Result<Matrix> {
        let words = self.words()?;
        match (&self.algebra, words.as_ref()) {
            (Algebra::Dense(a), WordMats::Dense(w)) => {
                let wb = a.word_basis()?;
                Ok(combine(&self.field, self.dim, w, &wb.basis_in_words[i]))
            }
            (Algebra::Smash(s), WordMats::Smash { b, h }) => {
                let (x, y) = s.split(i);
                let mb = combine(&self.field, self.dim, b, &s.b().word_basis()?.basis_in_words[x]);
                let mh = combine(&self.field, self.dim, h, &s.h().word_basis()?.basis_in_words[y]);
                mb.mul(&mh)
            }
            _ => unreachable!("word matrices match the algebra kind"),
        }
    }

    /// Action of an algebra element whose coordinates lie in the module's
    /// field.
    pub fn act(&self, x: &[Elem]) -> Result<Matrix> {
        let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
        for (i, c) in nonzeros(x) {
            m.add_scaled(c, &self.act_basis(i)?);
        }
        Ok(m)
    }

    /// Action of `b # 1` for `b` in the first smash factor (or of `b` for a
    /// dense algebra).
    pub fn act_left_factor(&self, x: &[Elem]) -> Result<Matrix> {
        let words = self.words()?;
        match (&self.algebra, words.as_ref()) {
            (Algebra::Smash(s), WordMats::Smash { b, .. }) => {
                let wb = s.b().word_basis()?;
                let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
                for (i, c) in nonzeros(x) {
                    m.add_scaled(c, &combine(&self.field, self.dim, b, &wb.basis_in_words[i]));
                }
                Ok(m)
            }
            _ => self.act(x),
        }
    }

    /// Action of `1 # h` for `h` in the second smash factor.
    pub fn act_right_factor(&self, x: &[Elem]) -> Result<Matrix> {
        let words = self.words()?;
        match (&self.algebra, words.as_ref()) {
            (Algebra::Smash(s), WordMats::Smash { h, .. }) => {
                let wb = s.h().word_basis()?;
                let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
                for (i, c) in nonzeros(x) {
                    m.add_scaled(c, &combine(&self.field, self.dim, h, &wb.basis_in_words[i]));
                }
                Ok(m)
            }
            _ => Err(Error::Invalid("not a smash product module".into())),
        }
    }

    /// Checks the defining relations of the algebra among the action
    /// matrices.
    pub fn check_relations(&self) -> Result<()> {
        let words = self.words()?;
        let fail = |what: String| Err(Error::Axiom(format!("{}: {what}", self.name)));
        let check = |alg: &StructuredAlgebra, mats: &[Matrix], gens: &[Matrix]| -> Result<Option<String>> {
            let wb = alg.word_basis()?;
            for (w, gp, coords) in &wb.relations {
                let lhs = mats[*w].mul(&gens[*gp])?;
                if lhs != combine(&self.field, self.dim, mats, coords) {
                    return Ok(Some(format!(
                        "relation fails for word {w} times generator {}",
                        alg.labels()[alg.generators()[*gp]]
                    )));
                }
            }
            Ok(None)
        };
        match (&self.algebra, words.as_ref()) {
            (Algebra::Dense(a), WordMats::Dense(w)) => {
                if let Some(msg) = check(a, w, &self.actions)? {
                    return fail(msg);
                }
            }
            (Algebra::Smash(s), WordMats::Smash { b, h }) => {
                let nb = s.b().generators().len();
                if let Some(msg) = check(s.b(), b, &self.actions[..nb])? {
                    return fail(msg);
                }
                if let Some(msg) = check(s.h(), h, &self.actions[nb..])? {
                    return fail(msg);
                }
                let (bw, hw) = (s.b().word_basis()?, s.h().word_basis()?);
                let hd = s.h().hopf().expect("smash has Hopf H");
                let dh = s.h().dim();
                let hmat: Vec<Matrix> = (0..dh)
                    .map(|j| combine(&self.field, self.dim, h, &hw.basis_in_words[j]))
                    .collect();
                let bmat = |x: &[Elem]| -> Matrix {
                    let mut m = Matrix::zeros(&self.field, self.dim, self.dim);
                    for (i, c) in nonzeros(x) {
                        m.add_scaled(c, &combine(&self.field, self.dim, b, &bw.basis_in_words[i]));
                    }
                    m
                };
                for (j, hj) in hmat.iter().enumerate() {
                    for (gp, &g) in s.b().generators().iter().enumerate() {
                        let lhs = hj.mul(&self.actions[gp])?;
                        let mut rhs = Matrix::zeros(&self.field, self.dim, self.dim);
                        for (pk, c) in hd.coproduct.row(j) {
                            let (j1, j2) = (pk / dh, pk % dh);
                            let t = bmat(&s.act_basis(j1, g)).mul(&hmat[j2])?;
                            rhs.add_scaled(c, &t);
                        }
                        if lhs != rhs {
                            return fail(format!(
                                "smash compatibility fails for {} and {}",
                                s.h().labels()[j],
                                s.b().labels()[g]
                            ));
                        }
                    }
                }
            }
            _ => unreachable!("word matrices match the algebra kind"),
        }
        Ok(())
    }

    /// The trivial module `k`: generators act by their augmentation.
    pub fn trivial(algebra: &Algebra, field: &Field) -> Result<Self> {
        let aug = algebra.augmentation();
        let actions = algebra
            .generators()
            .iter()
            .map(|&g| Matrix::from_vec(field, 1, 1, vec![aug[g]]))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts("k", algebra.clone(), field, actions)
    }

    /// The left regular module, with basis the algebra basis.
    pub fn regular(algebra: &Algebra, field: &Field) -> Result<Self> {
        let d = algebra.dim();
        guard("regular module dimension", d, MAX_MODULE_DIM)?;
        let actions = algebra
            .generators()
            .iter()
            .map(|&g| {
                let e = algebra.basis_vec(g);
                let cols: Vec<Vec<Elem>> = (0..d).map(|k| algebra.mul(&e, &algebra.basis_vec(k))).collect();
                Ok(Matrix::from_columns(algebra.field(), d, &cols)?.base_change(field)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(&format!("regular {}", algebra.name()), algebra.clone(), field, actions)
    }

    /// Free module `A^n`.
    pub fn free(algebra: &Algebra, field: &Field, n: usize) -> Result<Self> {
        let reg = Self::regular(algebra, field)?;
        let mut out = reg.clone();
        for _ in 1..n {
            out = out.direct_sum(&reg)?;
        }
        Ok(out.with_name(format!("{} free of rank {n}", algebra.name())))
    }

    /// Same actions over a larger field.
    pub fn base_change(&self, target: &Field) -> Result<Self> {
        if !self.field.embeds_in(target) {
            return Err(Error::InvalidField("base change to a field not containing the module field".into()));
        }
        let actions = self
            .actions
            .iter()
            .map(|a| a.base_change(target))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(&self.name, self.algebra.clone(), target, actions)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &FDModule) -> Result<Self> {
        self.same_setting(other)?;
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self::from_parts(
            &format!("{} + {}", self.name, other.name),
            self.algebra.clone(),
            &self.field,
            actions,
        )
    }

    pub(crate) fn same_setting(&self, other: &FDModule) -> Result<()> {
        if !self.algebra.same(&other.algebra) && self.algebra.name() != other.algebra.name() {
            return Err(Error::Shape(format!(
                "modules over different algebras: {} and {}",
                self.algebra.name(),
                other.algebra.name()
            )));
        }
        if self.field != other.field {
            return Err(Error::Shape("modules over different fields".into()));
        }
        Ok(())
    }
}

/// On-disk form of a module: algebra name, field, and the generator action
/// matrices row-major with each entry as its coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFile {
    #[serde(default)]
    pub name: String,
    pub algebra: String,
    pub field: FieldDesc,
    pub dim: usize,
    pub actions: Vec<Vec<Vec<Vec<u32>>>>,
}

impl FDModule {
    pub fn to_file(&self) -> ModuleFile {
        let f = &self.field;
        ModuleFile {
            name: self.name.clone(),
            algebra: self.algebra.name().to_string(),
            field: f.desc().clone(),
            dim: self.dim,
            actions: self
                .actions
                .iter()
                .map(|a| {
                    (0..self.dim)
                        .map(|i| a.row(i).iter().map(|&x| f.coeffs(x)).collect())
                        .collect()
                })
                .collect(),
        }
    }

    /// Rebuilds a module over `algebra`, checking the algebra name and the
    /// defining relations.
    pub fn from_file(file: &ModuleFile, algebra: &Algebra) -> Result<Self> {
        if file.algebra != algebra.name() {
            return Err(Error::Invalid(format!(
                "module file is over {}, not {}",
                file.algebra,
                algebra.name()
            )));
        }
        let field = Field::from_desc(file.field.clone())?;
        let d = file.dim;
        guard("module dimension", d, MAX_MODULE_DIM)?;
        let actions = file
            .actions
            .iter()
            .map(|rows| {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::Shape("action matrix shape".into()));
                }
                let data = rows
                    .iter()
                    .flatten()
                    .map(|c| field.from_coeffs(c))
                    .collect::<Result<Vec<_>>>()?;
                Matrix::from_vec(&field, d, d, data)
            })
            .collect::<Result<Vec<_>>>()?;
        let name = if file.name.is_empty() { "module from file" } else { &file.name };
        Self::new(name, algebra.clone(), &field, actions)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(s: &str, algebra: &Algebra) -> Result<Self> {
        let file: ModuleFile = serde_json::from_str(s)?;
        Self::from_file(&file, algebra)
    }
}
