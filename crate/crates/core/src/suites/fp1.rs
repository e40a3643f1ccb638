//! Random commuting triples (α, β, γ) and the comparison of projectivity of
//! α and α + βγ over k[t]/t^p.

use rand::Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field_linalg::{is_free_nilpotent, Elem, Field, Matrix};

use super::battery::{corners, order_ideals};

/// Pairwise commuting endomorphisms with α, β p-nilpotent and γ
/// p^r-nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub alpha: Matrix,
    pub beta: Matrix,
    pub gamma: Matrix,
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<Elem>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

impl Triple {
    pub fn dim(&self) -> usize {
        self.alpha.rows()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "alpha": matrix_rows(&self.alpha),
            "beta": matrix_rows(&self.beta),
            "gamma": matrix_rows(&self.gamma),
        })
    }

    /// Checks commutation and the nilpotency hypotheses.
    pub fn check(&self, p: u32, r: u32) -> Result<()> {
        let (a, b, c) = (&self.alpha, &self.beta, &self.gamma);
        for (x, y) in [(a, b), (a, c), (b, c)] {
            if x.mul(y)? != y.mul(x)? {
                return Err(Error::Axiom("triple does not commute".into()));
            }
        }
        if !a.pow(p)?.is_zero() || !b.pow(p)?.is_zero() || !c.pow(p.pow(r))?.is_zero() {
            return Err(Error::Axiom("nilpotency hypothesis fails".into()));
        }
        Ok(())
    }

    /// Projectivity of `α` and of `α + βγ` over k[t]/t^p.
    pub fn verdicts(&self, p: u32) -> Result<(bool, bool)> {
        let shifted = self.alpha.add(&self.beta.mul(&self.gamma)?)?;
        Ok((is_free_nilpotent(&self.alpha, p), is_free_nilpotent(&shifted, p)))
    }
}

/// Random polynomial with zero constant term in the shift operators `ops`;
/// with `p_nilpotent` only monomials with `a`, `b` or `c^p` as a factor.
fn random_poly<R: Rng + ?Sized>(
    f: &Field,
    ops: &[Matrix; 3],
    exps: &[usize; 3],
    p: usize,
    p_nilpotent: bool,
    rng: &mut R,
) -> Result<Matrix> {
    let n = ops[0].rows();
    let mut out = Matrix::zeros(f, n, n);
    for i in 0..exps[0] {
        for j in 0..exps[1] {
            for k in 0..exps[2] {
                if i + j + k == 0 || (p_nilpotent && i == 0 && j == 0 && k < p) {
                    continue;
                }
                if rng.gen_range(0..3) != 0 {
                    continue;
                }
                let c = rng.gen_range(1..f.order()) as Elem;
                let m = ops[0].pow(i as u32)?.mul(&ops[1].pow(j as u32)?)?.mul(&ops[2].pow(k as u32)?)?;
                out.add_scaled(c, &m);
            }
        }
    }
    Ok(out)
}

/// One block: multiplication by a, b, c on k[a,b,c]/(a^p, b^p, c^{p^r}, I)
/// for a random monomial ideal I, and random polynomials in them.
fn random_block<R: Rng + ?Sized>(f: &Field, p: usize, r: u32, size: usize, free: bool, rng: &mut R) -> Result<Triple> {
    let q = p.pow(r);
    let bounds = [p, p, q];
    let free = free || rng.gen_bool(0.5);
    let ideal: Vec<Vec<usize>> = if free && size >= p {
        let layers = (size / p).clamp(1, p * q);
        let base = order_ideals(&[p, q], layers);
        let choice = base.iter().filter(|s| s.len() == layers).collect::<Vec<_>>();
        let pick = choice[rng.gen_range(0..choice.len())];
        let mut set: Vec<Vec<usize>> = pick
            .iter()
            .flat_map(|e| (0..p).map(move |i| vec![i, e[0], e[1]]))
            .collect();
        set.sort();
        set
    } else {
        let mut set = vec![vec![0, 0, 0]];
        while set.len() < size {
            let cs = corners(&set, &bounds);
            if cs.is_empty() {
                break;
            }
            set.push(cs[rng.gen_range(0..cs.len())].clone());
            set.sort();
        }
        set
    };
    let n = ideal.len();
    let shift = |axis: usize| {
        let mut m = Matrix::zeros(f, n, n);
        for (col, e) in ideal.iter().enumerate() {
            let mut up = e.clone();
            up[axis] += 1;
            if let Some(row) = ideal.iter().position(|x| *x == up) {
                m.set(row, col, 1);
            }
        }
        m
    };
    let ops = [shift(0), shift(1), shift(2)];
    let exps = [p, p, q];
    let mut alpha = random_poly(f, &ops, &exps, p, true, rng)?;
    if free || rng.gen_bool(0.5) {
        alpha.add_scaled(1, &ops[0]);
    }
    Ok(Triple {
        alpha,
        beta: random_poly(f, &ops, &exps, p, true, rng)?,
        gamma: random_poly(f, &ops, &exps, p, false, rng)?,
    })
}

fn random_invertible<R: Rng + ?Sized>(f: &Field, n: usize, rng: &mut R) -> (Matrix, Matrix) {
    loop {
        let m = Matrix::random(f, n, n, rng);
        if let Some(inv) = m.inverse() {
            return (m, inv);
        }
    }
}

/// A random commuting triple of dimension at most `max_dim`: a direct sum
/// of blocks, conjugated by a random invertible matrix. Half the triples
/// use only blocks free in the `a` direction, so that α is often
/// projective.
pub fn random_triple<R: Rng + ?Sized>(f: &Field, r: u32, max_dim: usize, rng: &mut R) -> Result<Triple> {
    let p = f.p() as usize;
    let free = max_dim >= p && rng.gen_bool(0.5);
    let (lo, step) = if free { (p, p) } else { (1, 1) };
    let target = rng.gen_range(lo..=max_dim);
    let mut blocks: Vec<Triple> = Vec::new();
    let mut used = 0;
    while target - used >= step {
        let size = step * rng.gen_range(1..=(target - used) / step);
        let b = random_block(f, p, r, size, free, rng)?;
        used += b.dim();
        blocks.push(b);
    }
    let sum = |get: fn(&Triple) -> &Matrix| {
        blocks
            .iter()
            .skip(1)
            .fold(get(&blocks[0]).clone(), |acc, b| acc.direct_sum(get(b)))
    };
    let (alpha, beta, gamma) = (sum(|t| &t.alpha), sum(|t| &t.beta), sum(|t| &t.gamma));
    let (c, ci) = random_invertible(f, alpha.rows(), rng);
    let conj = |m: &Matrix| c.mul(m).and_then(|x| x.mul(&ci));
    Ok(Triple {
        alpha: conj(&alpha)?,
        beta: conj(&beta)?,
        gamma: conj(&gamma)?,
    })
}
