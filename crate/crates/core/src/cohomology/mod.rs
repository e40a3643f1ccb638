//! Minimal free resolutions over local augmented algebras, Betti numbers,
//! chain-lifted maps on cohomology and Carlson modules.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::field_linalg::{Elem, Field, FieldDesc, Matrix, RowSpace, MAX_DIM};
use crate::hopf::sparse::{densify, nonzeros, sparsify};
use crate::hopf::{Algebra, AlgebraMorphism, SparseVec};
use crate::kernels::{coordinate_algebra, GroupSchemeSpec};
use crate::modules::FDModule;
use crate::pi_points::flat_in;

pub const MAX_RESOLUTION_ALGEBRA_DIM: usize = 512;
pub const MAX_RESOLUTION_MODULE_DIM: usize = 128;
pub const MAX_RESOLUTION_LENGTH: usize = 12;

/// Left multiplication by basis elements: `prod[k][j] = b_k b_j`.
#[derive(Clone, Debug)]
struct Mult {
    dim: usize,
    prod: Vec<Vec<SparseVec>>,
    aug: Vec<Elem>,
    gens: Vec<usize>,
}

impl Mult {
    fn new(alg: &Algebra) -> Self {
        let d = alg.dim();
        let prod = (0..d)
            .map(|k| {
                (0..d)
                    .map(|j| match alg.as_dense() {
                        Some(a) => a.mul_basis(k, j),
                        None => sparsify(&alg.mul(&alg.basis_vec(k), &alg.basis_vec(j))),
                    })
                    .collect()
            })
            .collect();
        Mult {
            dim: d,
            prod,
            aug: alg.augmentation(),
            gens: alg.generators(),
        }
    }

    /// `b_k · v` for `v` in `A^b` (componentwise left multiplication).
    fn left_basis(&self, f: &Field, k: usize, v: &[Elem]) -> Vec<Elem> {
        let d = self.dim;
        let mut out = vec![0; v.len()];
        for (idx, c) in nonzeros(v) {
            let (slot, j) = (idx / d, idx % d);
            for &(m, e) in &self.prod[k][j] {
                let o = slot * d + m as usize;
                out[o] = f.add(out[o], f.mul(c, e));
            }
        }
        out
    }

    /// `x · v` for `x` in `A_K` and `v` in `A_K^b`.
    fn left(&self, f: &Field, x: &[Elem], v: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; v.len()];
        for (k, a) in nonzeros(x) {
            let w = self.left_basis(f, k, v);
            f.axpy(&mut out, a, &w);
        }
        out
    }

    fn mul(&self, f: &Field, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        self.left(f, x, y)
    }

    fn epsilon(&self, f: &Field, x: &[Elem]) -> Elem {
        nonzeros(x).fold(0, |acc, (k, a)| f.add(acc, f.mul(a, self.aug[k])))
    }

    /// `(g - ε(g)) · v` for generator `g`.
    fn radical_gen(&self, f: &Field, g: usize, v: &[Elem]) -> Vec<Elem> {
        let mut w = self.left_basis(f, g, v);
        let e = self.aug[g];
        if e != 0 {
            f.axpy(&mut w, f.neg(e), v);
        }
        w
    }
}

/// A matrix with entries in the algebra: the free-module map
/// `A^cols → A^rows` sending `e_j` to `Σ_i entries[i][j] e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major, each entry a coordinate vector in the algebra basis.
    pub entries: Vec<Vec<Elem>>,
}

impl AlgebraMatrix {
    pub fn entry(&self, i: usize, j: usize) -> &[Elem] {
        &self.entries[i * self.cols + j]
    }

    /// Image of generator `e_j`, as a vector of `A^rows`.
    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).flat_map(|i| self.entry(i, j).to_vec()).collect()
    }
}

/// A minimal free resolution `P_n = A^{b_n}` of a module.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    algebra: Algebra,
    field: Field,
    module: FDModule,
    mult: Mult,
    betti: Vec<usize>,
    /// `differentials[n - 1] = d_n: P_n → P_{n-1}`.
    differentials: Vec<AlgebraMatrix>,
    /// Generators of Ω^0 = M, in M's coordinates.
    top: Vec<Vec<Elem>>,
    /// Ω^n for n ≥ 1 as a subspace of `P_{n-1}`.
    syzygies: Vec<RowSpace>,
}

/// Basis vectors of `space` (rows of its echelon form) outside `radical`.
fn top_generators(space: &[Vec<Elem>], radical: &RowSpace) -> Vec<Vec<Elem>> {
    let mut acc = radical.clone();
    space.iter().filter(|v| acc.insert(v)).cloned().collect()
}

/// Radical of a submodule of a free module: closure under the generators
/// of the images of `(g - ε(g))`.
fn radical_of(mult: &Mult, f: &Field, space: &RowSpace) -> RowSpace {
    let mut rad = RowSpace::new(f, space.ambient());
    let mut queue: Vec<Vec<Elem>> = Vec::new();
    for v in space.basis() {
        for &g in &mult.gens {
            let w = mult.radical_gen(f, g, v);
            if rad.insert(&w) {
                queue.push(w);
            }
        }
    }
    while let Some(v) = queue.pop() {
        for &g in &mult.gens {
            let w = mult.left_basis(f, g, &v);
            if rad.insert(&w) {
                queue.push(w);
            }
        }
    }
    rad
}

/// Matrix of `A^t → A^b`, `e_j ↦ gens[j]`, in the k-bases.
fn cover_matrix(mult: &Mult, f: &Field, gens: &[Vec<Elem>], ambient: usize) -> Result<Matrix> {
    let d = mult.dim;
    guard("cover matrix size", ambient.max(gens.len() * d), MAX_DIM)?;
    let mut cols = Vec::with_capacity(gens.len() * d);
    for g in gens {
        for k in 0..d {
            cols.push(mult.left_basis(f, k, g));
        }
    }
    Matrix::from_columns(f, ambient, &cols)
}

impl FreeResolution {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn module(&self) -> &FDModule {
        &self.module
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    pub fn length(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn differentials(&self) -> &[AlgebraMatrix] {
        &self.differentials
    }

    /// `d_n` for `1 <= n <= length`.
    pub fn differential(&self, n: usize) -> &AlgebraMatrix {
        &self.differentials[n - 1]
    }

    /// Checks `d_{n-1} ∘ d_n = 0` and that every entry lies in the
    /// augmentation ideal.
    pub fn verify(&self) -> Result<()> {
        let f = &self.field;
        for (i, d) in self.differentials.iter().enumerate() {
            if d.entries.iter().any(|e| self.mult.epsilon(f, e) != 0) {
                return Err(Error::Axiom(format!("d_{} has an entry outside the radical", i + 1)));
            }
        }
        for n in 2..=self.length() {
            let (hi, lo) = (self.differential(n), self.differential(n - 1));
            for j in 0..hi.cols {
                let img = self.apply(lo, &hi.column(j));
                if img.iter().any(|&c| c != 0) {
                    return Err(Error::Axiom(format!("d_{} ∘ d_{n} is not zero", n - 1)));
                }
            }
        }
        Ok(())
    }

    /// Applies a free-module map to a vector of `A^cols`.
    fn apply(&self, d: &AlgebraMatrix, v: &[Elem]) -> Vec<Elem> {
        apply_map(&self.mult, &self.field, d, v)
    }

    /// Generators of Ω^n: columns of `d_n` for `n >= 1`, the chosen top
    /// of M for `n = 0`.
    fn gens(&self, n: usize) -> Vec<Vec<Elem>> {
        if n == 0 {
            self.top.clone()
        } else {
            (0..self.betti[n]).map(|j| self.differential(n).column(j)).collect()
        }
    }

    /// Basis of Ω^n inside `P_{n-1}` for `n >= 1`, in the coordinates used
    /// by [`FreeResolution::syzygy`].
    pub fn syzygy_basis(&self, n: usize) -> Result<&[Vec<Elem>]> {
        if n == 0 || n > self.syzygies.len() {
            return Err(Error::Invalid(format!("syzygy {n} has no embedding in the resolution")));
        }
        Ok(self.syzygies[n - 1].basis())
    }

    /// The syzygy Ω^n(M) as a module in the basis of echelon rows inside
    /// `P_{n-1}` (Ω^0 = M).
    pub fn syzygy(&self, n: usize) -> Result<FDModule> {
        if n == 0 {
            return Ok(self.module.clone());
        }
        if n > self.syzygies.len() {
            return Err(Error::Invalid(format!("syzygy {n} beyond the computed length")));
        }
        let space = &self.syzygies[n - 1];
        let f = &self.field;
        let actions = self
            .mult
            .gens
            .iter()
            .map(|&g| {
                let cols: Vec<Vec<Elem>> = space
                    .basis()
                    .iter()
                    .map(|v| {
                        let w = self.mult.left_basis(f, g, v);
                        space.pivots().iter().map(|&p| w[p]).collect()
                    })
                    .collect();
                Matrix::from_columns(f, space.dim(), &cols)
            })
            .collect::<Result<Vec<_>>>()?;
        if space.dim() == 0 {
            let zeros = self.mult.gens.iter().map(|_| Matrix::zeros(f, 0, 0)).collect();
            return FDModule::new(&format!("Ω^{n}({})", self.module.name()), self.algebra.clone(), f, zeros);
        }
        FDModule::new(&format!("Ω^{n}({})", self.module.name()), self.algebra.clone(), f, actions)
    }

    /// The covector on Ω^n coordinates induced by a class of degree `n`.
    fn class_on_syzygy(&self, zeta: &CohomologyClass) -> Result<Vec<Elem>> {
        let n = zeta.degree;
        let f = &self.field;
        let gens = self.gens(n);
        let d = self.mult.dim;
        // π: P_n → Ω^n in Ω^n coordinates
        let (rows, coords): (usize, Box<dyn Fn(&[Elem]) -> Vec<Elem>>) = if n == 0 {
            (self.module.dim(), Box::new(|v: &[Elem]| v.to_vec()))
        } else {
            let space = &self.syzygies[n - 1];
            let piv = space.pivots().to_vec();
            (space.dim(), Box::new(move |v: &[Elem]| piv.iter().map(|&p| v[p]).collect()))
        };
        let mut cols = Vec::with_capacity(gens.len() * d);
        for g in &gens {
            for k in 0..d {
                let w = if n == 0 {
                    self.module.act_basis(k)?.mul_vec(g)
                } else {
                    self.mult.left_basis(f, k, g)
                };
                cols.push(coords(&w));
            }
        }
        let pi = Matrix::from_columns(f, rows, &cols)?;
        let target: Vec<Elem> = (0..gens.len())
            .flat_map(|j| (0..d).map(move |k| (j, k)))
            .map(|(j, k)| f.mul(zeta.coeffs[j], self.mult.aug[k]))
            .collect();
        pi.transpose()
            .solve(&target)
            .ok_or_else(|| Error::Axiom("class does not factor through the syzygy".into()))
    }
}

fn apply_map(mult: &Mult, f: &Field, d: &AlgebraMatrix, v: &[Elem]) -> Vec<Elem> {
    let dim = mult.dim;
    let mut out = vec![0; d.rows * dim];
    for j in 0..d.cols {
        let vj = &v[j * dim..(j + 1) * dim];
        if vj.iter().all(|&c| c == 0) {
            continue;
        }
        for i in 0..d.rows {
            let prod = mult.mul(f, vj, d.entry(i, j));
            f.axpy(&mut out[i * dim..(i + 1) * dim], 1, &prod);
        }
    }
    out
}

/// Minimal free resolution of `m` over the local algebra of `m`, with
/// `length + 1` free modules.
pub fn minimal_resolution(m: &FDModule, length: usize) -> Result<FreeResolution> {
    let alg = m.algebra().clone();
    guard("resolution algebra dimension", alg.dim(), MAX_RESOLUTION_ALGEBRA_DIM)?;
    guard("resolution module dimension", m.dim(), MAX_RESOLUTION_MODULE_DIM)?;
    guard("resolution length", length, MAX_RESOLUTION_LENGTH)?;
    if m.field() != alg.field() {
        return Err(Error::InvalidField("resolutions are computed over the algebra's field".into()));
    }
    if !alg.is_local() {
        return Err(Error::NotLocal(alg.name().to_string()));
    }
    let f = alg.field().clone();
    let mult = Mult::new(&alg);
    let d = alg.dim();

    // Ω^0 = M
    let rad0 = m.radical_span();
    let std: Vec<Vec<Elem>> = (0..m.dim())
        .map(|i| {
            let mut e = vec![0; m.dim()];
            e[i] = 1;
            e
        })
        .collect();
    let top = top_generators(&std, &rad0);
    let mut betti = vec![top.len()];
    let mut cols = Vec::with_capacity(top.len() * d);
    for g in &top {
        for k in 0..d {
            cols.push(m.act_basis(k)?.mul_vec(g));
        }
    }
    guard("cover matrix size", top.len() * d, MAX_DIM)?;
    let pi0 = Matrix::from_columns(&f, m.dim(), &cols)?;
    let mut differentials = Vec::new();
    let mut syzygies: Vec<RowSpace> = Vec::new();
    let mut kernel = pi0.kernel_vectors();
    let mut ambient = top.len() * d;
    for _n in 1..=length {
        let mut space = RowSpace::new(&f, ambient);
        for v in &kernel {
            space.insert(v);
        }
        let rad = radical_of(&mult, &f, &space);
        let gens = top_generators(space.basis(), &rad);
        let b_prev = ambient / d;
        let entries = (0..b_prev)
            .flat_map(|i| gens.iter().map(move |g| g[i * d..(i + 1) * d].to_vec()))
            .collect();
        differentials.push(AlgebraMatrix {
            rows: b_prev,
            cols: gens.len(),
            entries,
        });
        betti.push(gens.len());
        let cover = cover_matrix(&mult, &f, &gens, ambient)?;
        syzygies.push(space);
        kernel = cover.kernel_vectors();
        ambient = gens.len() * d;
    }
    let res = FreeResolution {
        algebra: alg,
        field: f,
        module: m.clone(),
        mult,
        betti,
        differentials,
        top,
        syzygies,
    };
    res.verify()?;
    Ok(res)
}

/// Minimal resolution of the trivial module.
pub fn resolve_trivial(alg: &Algebra, length: usize) -> Result<FreeResolution> {
    minimal_resolution(&FDModule::trivial(alg, alg.field())?, length)
}

/// Betti numbers of `k` and the degree of the polynomial they follow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareSeries {
    pub algebra: String,
    pub betti: Vec<usize>,
    /// Smallest `δ` whose `δ`-th differences are constant on the second
    /// half of the computed range; `δ + 1` is the growth rate (complexity).
    pub growth_degree: Option<usize>,
}

impl PoincareSeries {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,betti\n");
        for (n, b) in self.betti.iter().enumerate() {
            s.push_str(&format!("{n},{b}\n"));
        }
        s
    }
}

pub fn growth_degree(betti: &[usize]) -> Option<usize> {
    let mut seq: Vec<i64> = betti.iter().map(|&b| b as i64).collect();
    for delta in 0..betti.len() {
        let tail = &seq[seq.len() / 2..];
        if tail.len() >= 2 && tail.windows(2).all(|w| w[0] == w[1]) {
            return Some(delta);
        }
        if seq.len() < 2 {
            return None;
        }
        seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
    }
    None
}

pub fn poincare_series(alg: &Algebra, length: usize) -> Result<PoincareSeries> {
    let res = resolve_trivial(alg, length)?;
    Ok(PoincareSeries {
        algebra: alg.name().to_string(),
        betti: res.betti.clone(),
        growth_degree: growth_degree(&res.betti),
    })
}

/// A class in `Ext^n(M, k)`, given on the generators of the minimal
/// resolution (a covector on `P_n ⊗ k`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyClass {
    pub degree: usize,
    pub field: FieldDesc,
    pub coeffs: Vec<Elem>,
}

impl CohomologyClass {
    pub fn new(res: &FreeResolution, degree: usize, coeffs: Vec<Elem>) -> Result<Self> {
        if degree > res.length() || coeffs.len() != res.betti[degree] {
            return Err(Error::Shape(format!("class of degree {degree} with {} coefficients", coeffs.len())));
        }
        Ok(CohomologyClass {
            degree,
            field: res.field.desc().clone(),
            coeffs,
        })
    }

    /// The `i`-th basis class of degree `n`.
    pub fn basis(res: &FreeResolution, n: usize, i: usize) -> Result<Self> {
        let mut c = vec![0; res.betti.get(n).copied().unwrap_or(0)];
        if i >= c.len() {
            return Err(Error::Shape(format!("basis class {i} in degree {n}")));
        }
        c[i] = 1;
        Self::new(res, n, c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// A chain map `f_n: Q_n → φ^* P_n` lifting the identity of k, given by the
/// images of the generators of each `Q_n` (vectors of `P_n ⊗ K`).
struct ChainLift {
    maps: Vec<Vec<Vec<Elem>>>,
}

/// Lifts the identity of `k` along `φ: S → T_K`, where `images[s]` is
/// `φ(b_s)` with coefficients in `K`. With a seed, each level is perturbed
/// by a random boundary to produce a different lift.
fn lift_identity(
    source: &FreeResolution,
    target: &FreeResolution,
    images: &[Vec<Elem>],
    k: &Field,
    upto: usize,
    seed: Option<u64>,
) -> Result<ChainLift> {
    if source.module.dim() != 1 || target.module.dim() != 1 {
        return Err(Error::Invalid("chain lifts are implemented for resolutions of k".into()));
    }
    // f_0(e) = 1 in P_0 = T (both tops are the vector [1] of k)
    let mut unit = vec![0; target.mult.dim];
    for (i, c) in nonzeros(&target.algebra.unit()) {
        unit[i] = c;
    }
    lift_chain(source, 0, target, images, k, vec![unit], upto, seed)
}

/// Extends `f_0: Q_shift → P_0` (images of the generators of `Q_shift`) to a
/// chain map `f_j: Q_{shift+j} → P_j` for `j <= upto`.
#[allow(clippy::too_many_arguments)]
fn lift_chain(
    source: &FreeResolution,
    shift: usize,
    target: &FreeResolution,
    images: &[Vec<Elem>],
    k: &Field,
    initial: Vec<Vec<Elem>>,
    upto: usize,
    seed: Option<u64>,
) -> Result<ChainLift> {
    if shift + upto > source.length() || upto > target.length() {
        return Err(Error::Invalid(format!("degree {} beyond a resolution length", shift + upto)));
    }
    let tm = &target.mult;
    let dt = tm.dim;
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut maps: Vec<Vec<Vec<Elem>>> = vec![initial];
    for n in 1..=upto {
        let dq = source.differential(shift + n);
        let dp = target.differential(n);
        let cover = cover_matrix(tm, target.field(), &target.gens(n), dp.rows * dt)?.base_change(k)?;
        let next_boundary = if rng.is_some() && n < target.length() {
            Some(target.differential(n + 1))
        } else {
            None
        };
        let mut level = Vec::with_capacity(dq.cols);
        for j in 0..dq.cols {
            let mut rhs = vec![0; dp.rows * dt];
            for i in 0..dq.rows {
                let s = dq.entry(i, j);
                let mut phi_s = vec![0; dt];
                for (sb, c) in nonzeros(s) {
                    k.axpy(&mut phi_s, c, &images[sb]);
                }
                let w = tm.left(k, &phi_s, &maps[n - 1][i]);
                k.axpy(&mut rhs, 1, &w);
            }
            let mut y = cover
                .solve(&rhs)
                .ok_or_else(|| Error::Axiom(format!("no chain lift in degree {n}")))?;
            if let (Some(rng), Some(db)) = (rng.as_mut(), next_boundary) {
                let z: Vec<Elem> = (0..db.cols * dt).map(|_| rng.gen_range(0..k.order()) as Elem).collect();
                let bz = apply_map(tm, k, db, &z);
                k.axpy(&mut y, 1, &bz);
            }
            level.push(y);
        }
        maps.push(level);
    }
    Ok(ChainLift { maps })
}

/// The Yoneda product `ξ · ζ` in `Ext^{m+n}(k, k)`, computed by lifting
/// `ζ: P_n → k` to a chain map `P_{n+*} → P_*`. Up to sign, which does not
/// affect vanishing.
pub fn yoneda_product(res: &FreeResolution, zeta: &CohomologyClass, xi: &CohomologyClass) -> Result<CohomologyClass> {
    if res.module.dim() != 1 {
        return Err(Error::Invalid("products are computed on resolutions of k".into()));
    }
    let (n, m) = (zeta.degree, xi.degree);
    if n + m > res.length() {
        return Err(Error::Invalid(format!("degree {} beyond the resolution", n + m)));
    }
    let f = &res.field;
    let d = res.mult.dim;
    let unit = res.algebra.unit();
    let initial = zeta
        .coeffs
        .iter()
        .map(|&c| {
            let mut v = vec![0; d];
            for (i, u) in nonzeros(&unit) {
                v[i] = f.mul(c, u);
            }
            v
        })
        .collect();
    let images: Vec<Vec<Elem>> = (0..d)
        .map(|i| {
            let mut v = vec![0; d];
            v[i] = 1;
            v
        })
        .collect();
    let lift = lift_chain(res, n, res, &images, f, initial, m, None)?;
    Ok(CohomologyClass {
        degree: n + m,
        field: f.desc().clone(),
        coeffs: induced(res, f, &lift, m, &xi.coeffs),
    })
}

/// Smallest `e` with `ζ^e = 0` within the computed range, if any.
pub fn nilpotency_index(res: &FreeResolution, zeta: &CohomologyClass) -> Result<Option<usize>> {
    if zeta.degree == 0 {
        return Ok(if zeta.is_zero() { Some(1) } else { None });
    }
    let mut power = zeta.clone();
    let mut e = 1;
    loop {
        if power.is_zero() {
            return Ok(Some(e));
        }
        if power.degree + zeta.degree > res.length() {
            return Ok(None);
        }
        power = yoneda_product(res, zeta, &power)?;
        e += 1;
    }
}

/// `φ^*` on degree `n` given a chain lift: `(φ^*ζ)(e_j) = ζ(f_n(e_j))`.
fn induced(target: &FreeResolution, k: &Field, lift: &ChainLift, n: usize, zeta: &[Elem]) -> Vec<Elem> {
    let dt = target.mult.dim;
    lift.maps[n]
        .iter()
        .map(|y| {
            (0..zeta.len()).fold(0, |acc, i| {
                let e = target.mult.epsilon(k, &y[i * dt..(i + 1) * dt]);
                k.add(acc, k.mul(e, zeta[i]))
            })
        })
        .collect()
}

/// The map `K[t]/t^p → A_K`, `t ↦ x`.
#[derive(Clone, Debug)]
pub struct TruncatedLineMap {
    pub field: Field,
    pub image: Vec<Elem>,
}

/// Resolution of `k` over `F_p[t]/t^p`.
pub fn truncated_line_resolution(p: u32, length: usize) -> Result<FreeResolution> {
    let line = coordinate_algebra(&GroupSchemeSpec::additive(1, p)?, 1)?.with_name(format!("k[t]/t^{p}"));
    resolve_trivial(&Algebra::from(std::sync::Arc::new(line)), length)
}

/// `(t ↦ x)^* ζ ∈ H^n(K[t]/t^p, K)`, computed from a chain lift and
/// checked against a second, perturbed lift. Requires the map to be flat.
pub fn pullback_class(res: &FreeResolution, phi: &TruncatedLineMap, zeta: &CohomologyClass) -> Result<CohomologyClass> {
    let k = &phi.field;
    let p = res.field.p();
    if k.p() != p || !res.field.embeds_in(k) {
        return Err(Error::InvalidField("map field must extend the algebra field".into()));
    }
    if !flat_in(&res.algebra, k, &phi.image)? {
        return Err(Error::Invalid("t ↦ x is not flat".into()));
    }
    let n = zeta.degree;
    let line = truncated_line_resolution(p, n.max(1))?;
    let mut images = Vec::with_capacity(p as usize);
    let mut pw = densify(&sparsify(&res.algebra.unit()), res.algebra.dim());
    for _ in 0..p {
        images.push(pw.clone());
        pw = res.mult.mul(k, &pw, &phi.image);
    }
    let a = lift_identity(&line, res, &images, k, n, None)?;
    let b = lift_identity(&line, res, &images, k, n, Some(0x5eed ^ n as u64))?;
    let va = induced(res, k, &a, n, &zeta.coeffs);
    let vb = induced(res, k, &b, n, &zeta.coeffs);
    if va != vb {
        return Err(Error::Axiom("pulled-back class depends on the chain lift".into()));
    }
    Ok(CohomologyClass {
        degree: n,
        field: k.desc().clone(),
        coeffs: va,
    })
}

/// Matrices of `φ^*: H^n(T, k) → H^n(S, k)` for `n = 0..=degree`, acting on
/// coefficient vectors (`b^S_n × b^T_n`).
pub fn restriction_on_cohomology(
    phi: &AlgebraMorphism,
    source: &FreeResolution,
    target: &FreeResolution,
    degree: usize,
) -> Result<Vec<Matrix>> {
    if phi.source().dim() != source.algebra.dim() || phi.target().dim() != target.algebra.dim() {
        return Err(Error::Shape("resolutions do not match the morphism".into()));
    }
    let k = target.field.clone();
    let dt = target.algebra.dim();
    let images: Vec<Vec<Elem>> = (0..source.algebra.dim())
        .map(|s| densify(&phi.images()[s], dt))
        .collect();
    let lift = lift_identity(source, target, &images, &k, degree, None)?;
    let check = lift_identity(source, target, &images, &k, degree, Some(0xc0c ^ degree as u64))?;
    (0..=degree)
        .map(|n| {
            let bt = target.betti[n];
            let bs = source.betti[n];
            let mut m = Matrix::zeros(&k, bs, bt);
            for i in 0..bt {
                let mut e = vec![0; bt];
                e[i] = 1;
                let col = induced(target, &k, &lift, n, &e);
                if col != induced(target, &k, &check, n, &e) {
                    return Err(Error::Axiom("restriction depends on the chain lift".into()));
                }
                for (j, c) in col.into_iter().enumerate() {
                    m.set(j, i, c);
                }
            }
            Ok(m)
        })
        .collect()
}

/// `L_ζ`, the kernel of the map `Ω^n(k) → k` representing `ζ`.
pub fn carlson_module(res: &FreeResolution, zeta: &CohomologyClass) -> Result<FDModule> {
    let n = zeta.degree;
    if zeta.is_zero() {
        return Err(Error::Invalid("L_ζ needs a nonzero class".into()));
    }
    if n % 2 != 0 {
        return Err(Error::Invalid(format!("L_ζ needs an even degree, got {n}")));
    }
    if n > res.syzygies.len() {
        return Err(Error::Invalid(format!("degree {n} beyond the resolution")));
    }
    let omega = res.syzygy(n)?;
    let z = res.class_on_syzygy(zeta)?;
    let row = Matrix::from_rows(&res.field, &[z])?;
    let ker = row.kernel_vectors();
    let l = omega.submodule(&ker)?;
    Ok(l.with_name(format!("L_ζ (degree {n}) over {}", res.algebra.name())))
}

/// JSON form of a resolution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResolutionDump {
    pub algebra: String,
    pub module: String,
    pub field: FieldDesc,
    pub labels: Vec<String>,
    pub betti: Vec<usize>,
    pub differentials: Vec<AlgebraMatrix>,
}

impl FreeResolution {
    pub fn dump(&self) -> ResolutionDump {
        ResolutionDump {
            algebra: self.algebra.name().to_string(),
            module: self.module.name().to_string(),
            field: self.field.desc().clone(),
            labels: (0..self.algebra.dim()).map(|i| self.algebra.label(i)).collect(),
            betti: self.betti.clone(),
            differentials: self.differentials.clone(),
        }
    }
}
