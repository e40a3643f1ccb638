//! Exact axiom checks for algebras and Hopf algebras given by structure
//! constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field_linalg::{Elem, Field};

use super::algebra::StructuredAlgebra;
use super::morphism::{merge64, EXHAUSTIVE_DIM};
use super::sparse::{nonzeros, SparseTable};

/// Number of random pairs or triples examined above [`EXHAUSTIVE_DIM`].
pub const SAMPLES: usize = 10_000;

/// Outcome of an axiom check: an empty violation list means success.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub algebra: String,
    pub exhaustive: bool,
    pub seed: u64,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn pairs(d: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    if d <= EXHAUSTIVE_DIM {
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect()
    } else {
        (0..SAMPLES).map(|_| (rng.gen_range(0..d), rng.gen_range(0..d))).collect()
    }
}

/// Associativity, unit laws and multiplicativity of the augmentation.
pub fn check_algebra_axioms(a: &StructuredAlgebra, seed: u64) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = a.dim();
    let f = a.field();
    let mut v = Vec::new();
    let triples: Vec<(usize, usize, usize)> = if d <= EXHAUSTIVE_DIM {
        (0..d)
            .flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k))))
            .collect()
    } else {
        (0..SAMPLES)
            .map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d)))
            .collect()
    };
    for (i, j, k) in triples {
        let ij = a.mul(&a.basis_vec(i), &a.basis_vec(j));
        let jk = a.mul(&a.basis_vec(j), &a.basis_vec(k));
        if a.mul(&ij, &a.basis_vec(k)) != a.mul(&a.basis_vec(i), &jk) {
            v.push(format!(
                "associativity fails at ({}, {}, {})",
                a.labels()[i],
                a.labels()[j],
                a.labels()[k]
            ));
            break;
        }
    }
    for i in 0..d {
        let e = a.basis_vec(i);
        if a.mul(a.unit(), &e) != e || a.mul(&e, a.unit()) != e {
            v.push(format!("unit law fails at {}", a.labels()[i]));
            break;
        }
    }
    if a.epsilon(a.unit()) != 1 {
        v.push("augmentation of the unit is not 1".into());
    }
    for (i, j) in pairs(d, &mut rng) {
        let prod = a.mul(&a.basis_vec(i), &a.basis_vec(j));
        if a.epsilon(&prod) != f.mul(a.augmentation()[i], a.augmentation()[j]) {
            v.push(format!(
                "augmentation not multiplicative at ({}, {})",
                a.labels()[i],
                a.labels()[j]
            ));
            break;
        }
    }
    AxiomReport {
        algebra: a.name().to_string(),
        exhaustive: d <= EXHAUSTIVE_DIM,
        seed,
        violations: v,
    }
}

/// Applies `Δ` to the left (`left = true`) or right leg of a sparse pair
/// vector, producing triple indices `(x * d + y) * d + z`.
fn expand(cop: &SparseTable, d: usize, f: &Field, x: &[(u64, Elem)], left: bool) -> Vec<(u64, Elem)> {
    let d64 = d as u64;
    let mut out = Vec::new();
    for &(pk, c) in x {
        let (j, k) = ((pk / d64) as usize, (pk % d64) as usize);
        if left {
            for (q, e) in cop.row(j) {
                let q = q as u64;
                out.push((q * d64 + k as u64, f.mul(c, e)));
            }
        } else {
            for (q, e) in cop.row(k) {
                out.push((j as u64 * d64 * d64 + q as u64, f.mul(c, e)));
            }
        }
    }
    merge64(f, out)
}

fn pair_row(t: &SparseTable, i: usize) -> Vec<(u64, Elem)> {
    t.row(i).map(|(k, c)| (k as u64, c)).collect()
}

/// Multiplies sparse elements of `A ⊗ A`.
fn tensor_mul(a: &StructuredAlgebra, x: &[(u64, Elem)], y: &[(u64, Elem)]) -> Vec<(u64, Elem)> {
    let d = a.dim();
    let d64 = d as u64;
    let f = a.field();
    let mut out = Vec::new();
    for &(p, c) in x {
        let (x1, x2) = ((p / d64) as usize, (p % d64) as usize);
        for &(q, e) in y {
            let (y1, y2) = ((q / d64) as usize, (q % d64) as usize);
            let ce = f.mul(c, e);
            let l = a.mul_basis(x1, y1);
            let r = a.mul_basis(x2, y2);
            for &(u, s) in &l {
                for &(w, t) in &r {
                    out.push((u as u64 * d64 + w as u64, f.mul(ce, f.mul(s, t))));
                }
            }
        }
    }
    merge64(f, out)
}

/// Coassociativity, counit laws, antipode laws and compatibility of the
/// coproduct with multiplication, plus the algebra axioms. A `group
/// coproduct`, when present, is checked for coassociativity, counit and
/// multiplicativity as well.
pub fn check_hopf_axioms(a: &StructuredAlgebra, seed: u64) -> AxiomReport {
    let mut report = check_algebra_axioms(a, seed);
    let Some(h) = a.hopf() else {
        report.violations.push("no Hopf data".into());
        return report;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let sample = pairs(a.dim(), &mut rng);
    check_coproduct(a, &h.coproduct, "", &sample, &mut report.violations);
    if let Some(g) = a.group_coproduct() {
        check_coproduct(a, g, "group ", &sample, &mut report.violations);
    }
    let d = a.dim();
    let f = a.field();
    for i in 0..d {
        let mut left = vec![0; d];
        let mut right = vec![0; d];
        for (pk, c) in h.coproduct.row(i) {
            let (j, k) = (pk / d, pk % d);
            let sj = a.antipode_of(&a.basis_vec(j)).expect("antipode present");
            let sk = a.antipode_of(&a.basis_vec(k)).expect("antipode present");
            f.axpy(&mut left, c, &a.mul(&sj, &a.basis_vec(k)));
            f.axpy(&mut right, c, &a.mul(&a.basis_vec(j), &sk));
        }
        let mut expect = vec![0; d];
        f.axpy(&mut expect, h.counit[i], a.unit());
        if left != expect || right != expect {
            report
                .violations
                .push(format!("antipode law fails at {}", a.labels()[i]));
            break;
        }
    }
    report
}

fn check_coproduct(
    a: &StructuredAlgebra,
    cop: &SparseTable,
    what: &str,
    sample: &[(usize, usize)],
    v: &mut Vec<String>,
) {
    let d = a.dim();
    let f = a.field();
    let counit = &a.hopf().expect("checked by caller").counit;
    for i in 0..d {
        let row = pair_row(cop, i);
        if expand(cop, d, f, &row, true) != expand(cop, d, f, &row, false) {
            v.push(format!("{what}coassociativity fails at {}", a.labels()[i]));
            break;
        }
    }
    for i in 0..d {
        let mut l = vec![0; d];
        let mut r = vec![0; d];
        for (pk, c) in cop.row(i) {
            let (j, k) = (pk / d, pk % d);
            l[k] = f.add(l[k], f.mul(c, counit[j]));
            r[j] = f.add(r[j], f.mul(c, counit[k]));
        }
        let e = a.basis_vec(i);
        if l != e || r != e {
            v.push(format!("{what}counit law fails at {}", a.labels()[i]));
            break;
        }
    }
    let delta = |x: &[Elem]| -> Vec<(u64, Elem)> {
        let mut out = Vec::new();
        for (i, c) in nonzeros(x) {
            for (pk, e) in cop.row(i) {
                out.push((pk as u64, f.mul(c, e)));
            }
        }
        merge64(f, out)
    };
    let unit_pair = {
        let u = a.unit();
        let mut out = Vec::new();
        for (i, x) in nonzeros(u) {
            for (j, y) in nonzeros(u) {
                out.push(((i * d + j) as u64, f.mul(x, y)));
            }
        }
        merge64(f, out)
    };
    if delta(a.unit()) != unit_pair {
        v.push(format!("{what}coproduct of the unit is not 1⊗1"));
    }
    for &(i, j) in sample {
        let lhs = delta(&a.mul(&a.basis_vec(i), &a.basis_vec(j)));
        let rhs = tensor_mul(a, &pair_row(cop, i), &pair_row(cop, j));
        if lhs != rhs {
            v.push(format!(
                "{what}coproduct not multiplicative at ({}, {})",
                a.labels()[i],
                a.labels()[j]
            ));
            break;
        }
    }
}
