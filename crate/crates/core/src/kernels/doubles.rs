//! Drinfeld doubles D(G_(r)), extended doubles D̃(G_(r)), the subalgebras
//! O(G_(r)) and D̃^(s)(G_(r)), and the maps i_O, q, F # id and ν.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_linalg::Elem;
use crate::hopf::{
    sparse_rank, tensor_algebra, Algebra, AlgebraFile, AlgebraMorphism, AlgebraRef, LazySmash, MorphismFile, SmashFile,
    SparseVec, StructuredAlgebra,
};

use super::coadjoint::coadjoint_action;
use super::coord::{coordinate_algebra, group_algebra, truncated_symmetric_algebra, Monomials};
use super::spec::{CaseId, GroupSchemeSpec};

fn monomials(g: &GroupSchemeSpec, s: u32) -> Monomials {
    Monomials {
        nvars: g.dim(),
        bound: (g.p as usize).pow(s),
    }
}

fn smash_over(g: &GroupSchemeSpec, r: u32, s: u32, group: &AlgebraRef, name: String) -> Result<LazySmash> {
    let coord = coordinate_algebra(g, s)?;
    let action = coadjoint_action(&coord, g, r, s)?;
    let b = Arc::new(coord.co_opposite()?);
    LazySmash::new(&name, b, group.clone(), action)
}

/// D(G_(r)) = k[G_(r)]^cop # kG_(r).
pub fn double(g: &GroupSchemeSpec, r: u32) -> Result<LazySmash> {
    let h = Arc::new(group_algebra(g, r)?);
    smash_over(g, r, r, &h, format!("D({}_({r}))", g.short_name()))
}

/// D̃(G_(r)) = k[G_(r+1)]^cop # kG_(r).
pub fn extended_double(g: &GroupSchemeSpec, r: u32) -> Result<LazySmash> {
    let h = Arc::new(group_algebra(g, r)?);
    smash_over(g, r, r + 1, &h, format!("D~({}_({r}))", g.short_name()))
}

/// Restricts `big` to `B' # H` where `B'` is spanned by the listed basis
/// elements of B with the given generators, and returns the embedding.
fn sub_smash(
    big: &Arc<LazySmash>,
    indices: &[usize],
    generators: &[usize],
    name: &str,
    group_coproduct: Option<&StructuredAlgebra>,
) -> Result<(Arc<LazySmash>, AlgebraMorphism)> {
    let db = big.b().dim();
    let dh = big.h().dim();
    let mut pos = vec![usize::MAX; db];
    for (a, &i) in indices.iter().enumerate() {
        pos[i] = a;
    }
    let gens = generators.iter().map(|&g| pos[g]).collect::<Vec<_>>();
    if gens.contains(&usize::MAX) {
        return Err(Error::Invalid(format!("{name}: generator outside the span")));
    }
    let mut b = big.b().restrict_to_basis(indices, &format!("B of {name}"))?.with_generators(gens);
    if let Some(src) = group_coproduct {
        let cop = src.hopf().expect("Hopf source").coproduct.clone();
        b = b.with_group_coproduct(cop)?;
    }
    let n = indices.len();
    let mut action: Vec<SparseVec> = Vec::with_capacity(n * dh);
    for j in 0..dh {
        for &k in indices {
            let row = big.action_table().row_vec(j * db + k);
            let mut out = Vec::with_capacity(row.len());
            for (u, c) in row {
                let p = pos[u as usize];
                if p == usize::MAX {
                    return Err(Error::Invalid(format!("{name}: span not stable under the action")));
                }
                out.push((p as u32, c));
            }
            action.push(out);
        }
    }
    let sub = Arc::new(LazySmash::new(name, Arc::new(b), big.h().clone(), action)?);
    let images = (0..n * dh)
        .map(|idx| {
            let (i, j) = (idx / dh, idx % dh);
            vec![(big.index(indices[i], j) as u32, 1)]
        })
        .collect();
    let emb = AlgebraMorphism::new(
        &format!("{name} -> {}", big.name()),
        Algebra::from(sub.clone()),
        Algebra::from(big.clone()),
        images,
    )?;
    Ok((sub, emb))
}

/// Indices of k[G_(r+1)] monomials whose exponents are all multiples of
/// `p^s`, and the indices of the `p^s`-th powers of the variables.
fn power_span(g: &GroupSchemeSpec, r: u32, s: u32) -> (Vec<usize>, Vec<usize>) {
    let m = monomials(g, r + 1);
    let step = (g.p as usize).pow(s);
    let idx = (0..m.dim()).filter(|&i| m.exps(i).iter().all(|e| e % step == 0)).collect();
    let gens = (0..g.dim())
        .map(|v| {
            let mut e = vec![0; g.dim()];
            e[v] = step;
            m.index(&e)
        })
        .collect();
    (idx, gens)
}

/// The vector-group coordinate algebra `S(g*)/(X^p)` on uppercase copies of
/// the coordinate names.
fn symmetric_source(g: &GroupSchemeSpec) -> Result<StructuredAlgebra> {
    let names: Vec<String> = g.var_names().iter().map(|n| n.to_uppercase()).collect();
    truncated_symmetric_algebra(g.p, &names, &format!("S(g*)/(X^p) for {}", g.short_name()))
}

/// O(G_(r)) = k[(G^(r))_(1)] ⊗ kG_(r) inside D̃(G_(r)), with the group
/// coproduct transported from `S(g*)/(X^p) ⊗ kG_(r)` through ν, and the
/// embedding i_O.
pub fn o_subalgebra(g: &GroupSchemeSpec, r: u32, dt: &Arc<LazySmash>) -> Result<(Arc<LazySmash>, AlgebraMorphism)> {
    let (idx, gens) = power_span(g, r, r);
    let src = symmetric_source(g)?;
    let (o, i_o) = sub_smash(dt, &idx, &gens, &format!("O({}_({r}))", g.short_name()), Some(&src))?;
    if !i_o.is_injective() {
        return Err(Error::Axiom("i_O is not injective".into()));
    }
    Ok((o, i_o))
}

/// D̃^(s)(G_(r)) = k[(G^(s))_(r+1-s)] # kG_(r) inside D̃(G_(r)), `0 <= s <= r`.
pub fn twisted_subalgebra(
    g: &GroupSchemeSpec,
    r: u32,
    s: u32,
    dt: &Arc<LazySmash>,
) -> Result<(Arc<LazySmash>, AlgebraMorphism)> {
    if s > r {
        return Err(Error::Invalid(format!("twist s = {s} exceeds r = {r}")));
    }
    let (idx, gens) = power_span(g, r, s);
    let (sub, emb) = sub_smash(dt, &idx, &gens, &format!("D~^({s})({}_({r}))", g.short_name()), None)?;
    if !emb.is_injective() {
        return Err(Error::Axiom("i_D is not injective".into()));
    }
    Ok((sub, emb))
}

/// q: D̃(G_(r)) → D(G_(r)) induced by the truncation k[G_(r+1)] ↠ k[G_(r)].
pub fn quotient_to_double(g: &GroupSchemeSpec, r: u32, dt: &Arc<LazySmash>, d: &Arc<LazySmash>) -> Result<AlgebraMorphism> {
    let (big, small) = (monomials(g, r + 1), monomials(g, r));
    let dh = dt.h().dim();
    let images = (0..dt.dim())
        .map(|idx| {
            let (i, j) = dt.split(idx);
            let e = big.exps(i);
            if e.iter().all(|&x| x < small.bound) {
                vec![(d.index(small.index(&e), j) as u32, 1)]
            } else {
                vec![]
            }
        })
        .collect::<Vec<SparseVec>>();
    debug_assert_eq!(dh, d.h().dim());
    AlgebraMorphism::new(
        &format!("q: {} -> {}", dt.name(), d.name()),
        Algebra::from(dt.clone()),
        Algebra::from(d.clone()),
        images,
    )
}

/// F # id: D̃^(1)(G_(r)) → D(G_(r)), sending `x^{p e} # h` to
/// `(x^p)^e # h` computed in k[G_(r)].
pub fn frobenius_id(g: &GroupSchemeSpec, r: u32, twisted: &Arc<LazySmash>, d: &Arc<LazySmash>) -> Result<AlgebraMorphism> {
    let big = monomials(g, r + 1);
    let coord = d.b();
    let small = monomials(g, r);
    let p = g.p as usize;
    let dh = twisted.h().dim();
    let (span, _) = power_span(g, r, 1);
    if span.len() != twisted.b().dim() {
        return Err(Error::Shape("F#id expects D~^(1)".into()));
    }
    let frob_vars: Vec<Vec<Elem>> = (0..g.dim())
        .map(|v| coord.pow(&coord.basis_vec(small.var(v)), g.p))
        .collect();
    let mut images = Vec::with_capacity(twisted.dim());
    for idx in 0..twisted.dim() {
        let (i, j) = (idx / dh, idx % dh);
        let label = &twisted.b().labels()[i];
        let e = big.exps(span[i]);
        let mut acc = coord.unit().to_vec();
        for (v, &ev) in e.iter().enumerate() {
            if ev % p != 0 {
                return Err(Error::Invalid(format!("{label} is not a p-th power monomial")));
            }
            acc = coord.mul(&acc, &coord.pow(&frob_vars[v], (ev / p) as u32));
        }
        let mut h = vec![0; dh];
        h[j] = 1;
        images.push(crate::hopf::sparse::sparsify(&d.pure(&acc, &h)));
    }
    AlgebraMorphism::new(
        &format!("F#id: {} -> {}", twisted.name(), d.name()),
        Algebra::from(twisted.clone()),
        Algebra::from(d.clone()),
        images,
    )
}

/// ν: `S(g*)/(X^p) ⊗ kG_(r) → O(G_(r))`, `X^e ⊗ h ↦ x^{p^r e} # h`. The
/// monomial orders agree, so ν is the identity on indices.
pub fn nu_isomorphism(g: &GroupSchemeSpec, r: u32, o: &Arc<LazySmash>) -> Result<AlgebraMorphism> {
    if o.h().dim() != monomials(g, r).dim() {
        return Err(Error::Shape("O does not match the height r".into()));
    }
    let src = symmetric_source(g)?;
    let source = tensor_algebra(&src, o.h(), &format!("S(g*)/(X^p) ⊗ {}", o.h().name()))?;
    let nu = AlgebraMorphism::new(
        &format!("nu: {} -> {}", source.name(), o.name()),
        Algebra::from(source),
        Algebra::from(o.clone()),
        (0..o.dim()).map(|i| vec![(i as u32, 1)]).collect(),
    )?;
    if !(nu.is_injective() && nu.is_surjective()) {
        return Err(Error::Axiom("nu is not bijective".into()));
    }
    Ok(nu)
}

/// Outcome of the freeness check for D̃ over O.
#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub dim_extended: usize,
    pub dim_coord: usize,
    pub dim_o: usize,
    pub rank: usize,
    pub blocks: usize,
}

impl FreenessReport {
    pub fn ok(&self) -> bool {
        self.rank == self.dim_extended && self.dim_coord * self.dim_o == self.dim_extended
    }
}

/// Rank of `k[G_(r)] ⊗ O → D̃`, `f ⊗ o ↦ σ(f)·i_O(o)` with σ the monomial
/// lift, computed one `B # h_j` block at a time.
pub fn o_freeness(g: &GroupSchemeSpec, r: u32, dt: &Arc<LazySmash>, o: &Arc<LazySmash>, i_o: &AlgebraMorphism) -> Result<FreenessReport> {
    let (big, small) = (monomials(g, r + 1), monomials(g, r));
    let (db, dh) = (dt.b().dim(), dt.h().dim());
    let lifts: Vec<Vec<Elem>> = (0..small.dim())
        .map(|i| {
            let mut b = vec![0; db];
            b[big.index(&small.exps(i))] = 1;
            let mut h = vec![0; dh];
            h[dt.unit_indices().1] = 1;
            dt.pure(&b, &h)
        })
        .collect();
    let mut blocks: Vec<Vec<SparseVec>> = vec![Vec::new(); dh];
    let f = dt.field();
    for oi in 0..o.dim() {
        let io = i_o.image_of_basis(oi);
        for s in &lifts {
            let prod = dt.mul(s, &io);
            let mut per: Vec<SparseVec> = vec![Vec::new(); dh];
            for (idx, c) in crate::hopf::sparse::nonzeros(&prod) {
                let (b, j) = dt.split(idx);
                per[j].push((b as u32, c));
            }
            for (j, v) in per.into_iter().enumerate() {
                if !v.is_empty() {
                    blocks[j].push(v);
                }
            }
        }
    }
    let rank = blocks.into_iter().map(|vs| sparse_rank(f, vs)).sum();
    Ok(FreenessReport {
        dim_extended: dt.dim(),
        dim_coord: small.dim(),
        dim_o: o.dim(),
        rank,
        blocks: dh,
    })
}

/// The catalog objects attached to one case.
#[derive(Clone, Debug)]
pub struct KernelBundle {
    pub case: CaseId,
    pub coord: AlgebraRef,
    pub group: AlgebraRef,
    pub double: Arc<LazySmash>,
    pub extended: Arc<LazySmash>,
    pub o: Arc<LazySmash>,
    pub i_o: AlgebraMorphism,
    pub q: AlgebraMorphism,
}

impl KernelBundle {
    pub fn build(case: CaseId) -> Result<Self> {
        let (g, r) = (case.group, case.r);
        let double = Arc::new(double(&g, r)?);
        let extended = Arc::new(extended_double(&g, r)?);
        let (o, i_o) = o_subalgebra(&g, r, &extended)?;
        let q = quotient_to_double(&g, r, &extended, &double)?;
        let coord = Arc::new(coordinate_algebra(&g, r)?);
        let group = double.h().clone();
        Ok(KernelBundle {
            case,
            coord,
            group,
            double,
            extended,
            o,
            i_o,
            q,
        })
    }

    /// Dimensions of (k[G_(r)], kG_(r), D, D̃, O).
    pub fn dims(&self) -> [usize; 5] {
        [
            self.coord.dim(),
            self.group.dim(),
            self.double.dim(),
            self.extended.dim(),
            self.o.dim(),
        ]
    }
}

/// On-disk form of a [`KernelBundle`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BundleFile {
    pub case: String,
    pub dims: [usize; 5],
    pub coord: AlgebraFile,
    pub group: AlgebraFile,
    pub double: SmashFile,
    pub extended: SmashFile,
    pub o: SmashFile,
    pub i_o: MorphismFile,
    pub q: MorphismFile,
}

impl KernelBundle {
    pub fn to_file(&self) -> BundleFile {
        BundleFile {
            case: self.case.to_string(),
            dims: self.dims(),
            coord: AlgebraFile::from_algebra(&self.coord),
            group: AlgebraFile::from_algebra(&self.group),
            double: SmashFile::from_smash(&self.double),
            extended: SmashFile::from_smash(&self.extended),
            o: SmashFile::from_smash(&self.o),
            i_o: MorphismFile::from_morphism(&self.i_o),
            q: MorphismFile::from_morphism(&self.q),
        }
    }

    /// Reloads a bundle, rechecking every constructor invariant.
    pub fn from_file(file: &BundleFile) -> Result<Self> {
        let case: CaseId = file.case.parse()?;
        let double = Arc::new(file.double.load()?);
        let extended = Arc::new(file.extended.load()?);
        let o = Arc::new(file.o.load()?);
        if AlgebraFile::from_algebra(double.h()) != file.group {
            return Err(Error::Invalid("group algebra differs from the acting factor of D".into()));
        }
        let (dt, oa, d) = (
            Algebra::from(extended.clone()),
            Algebra::from(o.clone()),
            Algebra::from(double.clone()),
        );
        let i_o = file.i_o.load(&oa, &dt)?;
        let q = file.q.load(&dt, &d)?;
        i_o.check_multiplicative()?;
        q.check_multiplicative()?;
        let bundle = KernelBundle {
            case,
            coord: Arc::new(file.coord.load()?),
            group: double.h().clone(),
            double,
            extended,
            o,
            i_o,
            q,
        };
        if bundle.dims() != file.dims {
            return Err(Error::Shape(format!("dimensions {:?} differ from {:?}", bundle.dims(), file.dims)));
        }
        Ok(bundle)
    }
}
