//! Quasilogarithms and the induced isomorphisms S(g*)/I_r ≅ k[G_(r)].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field_linalg::Elem;
use crate::hopf::{Algebra, AlgebraMorphism, StructuredAlgebra};

use super::coord::{coordinate_algebra, require_quasilog, truncated_ring, Monomials};
use super::spec::{GroupSchemeSpec, Kind};

/// The pullback map along a quasilogarithm together with its checks.
#[derive(Clone, Debug)]
pub struct Quasilog {
    pub map: AlgebraMorphism,
    /// Images of the linear coordinates of `g`, as elements of k[G_(r)].
    pub coordinate_images: Vec<Vec<Elem>>,
}

impl Quasilog {
    /// Images have zero constant term (L(e) = 0).
    pub fn vanishes_at_identity(&self) -> bool {
        let coord = self.map.target();
        self.coordinate_images.iter().all(|v| coord.epsilon(v) == 0)
    }

    /// The degree-one part of the image of the `i`-th coordinate is the
    /// `i`-th coordinate function (dL at e is the identity).
    pub fn differential_is_identity(&self, m: &Monomials) -> bool {
        self.coordinate_images.iter().enumerate().all(|(i, v)| {
            (0..m.nvars).all(|k| {
                let want = if k == i { 1 } else { 0 };
                v[m.var(k)] == want
            })
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.map.is_injective() && self.map.is_surjective()
    }
}

/// `S(g*)/I_r → k[G_(r)]` induced by the quasilogarithm: the identity
/// presentation for vector groups, and `A ↦ a`, `B ↦ b`, `C ↦ c - ab/2` for
/// the Heisenberg group (the truncated matrix logarithm `N - N²/2`).
pub fn quasilogarithm(g: &GroupSchemeSpec, r: u32) -> Result<Quasilog> {
    require_quasilog(g)?;
    let coord = Arc::new(coordinate_algebra(g, r)?);
    let f = coord.field().clone();
    let names: Vec<String> = g.var_names().iter().map(|n| n.to_uppercase()).collect();
    let bound = (g.p as usize).pow(r);
    let (src, m) = truncated_ring(&f, &names, bound, &format!("S(g*)/I_{r}"))?;
    let var = |i: usize| coord.basis_vec(m.var(i));
    let coordinate_images: Vec<Vec<Elem>> = match g.kind {
        Kind::Additive(_) => (0..g.dim()).map(var).collect(),
        Kind::Heisenberg3 => {
            let half = f.inv(f.from_int(2));
            let ab = coord.mul(&var(0), &var(1));
            let mut c = var(2);
            f.axpy(&mut c, f.neg(half), &ab);
            vec![var(0), var(1), c]
        }
        Kind::Multiplicative => return Err(Error::Invalid("no quasilogarithm for Gm".into())),
    };
    let mut images: Vec<Vec<Elem>> = Vec::with_capacity(m.dim());
    for idx in 0..m.dim() {
        if idx == 0 {
            images.push(coord.unit().to_vec());
            continue;
        }
        let mut e = m.exps(idx);
        let v = e.iter().position(|&x| x > 0).expect("nonconstant monomial");
        e[v] -= 1;
        let next = coord.mul(&images[m.index(&e)], &coordinate_images[v]);
        images.push(next);
    }
    let src: StructuredAlgebra = src;
    let map = AlgebraMorphism::from_fn(
        &format!("quasilog pullback for {}", g.short_name()),
        Algebra::from(src),
        Algebra::from(coord),
        |i| images[i].clone(),
    )?;
    map.check_multiplicative()?;
    Ok(Quasilog { map, coordinate_images })
}
