//! Finite fields F_{p^e} with p <= 7 and e <= 4.
//!
//! An element is encoded as the integer `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`
//! where `c_0 + c_1 x + ...` is its residue modulo the defining polynomial.
//! Prime-field elements therefore have the same encoding in every extension,
//! which makes base change a reinterpretation of the stored integers.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field element in the integer encoding described in the module docs.
pub type Elem = u16;

/// Irreducible moduli, lowest coefficient first, indexed by (p, e).
/// These are the Conway polynomials for the listed pairs.
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

/// Serializable description of F_{p^e}: the prime, the degree and the monic
/// defining polynomial (coefficients lowest degree first).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl FieldDesc {
    /// The tabulated description for (p, e).
    pub fn standard(p: u32, e: u32) -> Result<Self> {
        MODULI
            .iter()
            .find(|(q, d, _)| *q == p && *d == e)
            .map(|(p, e, m)| FieldDesc {
                p: *p,
                e: *e,
                modulus: m.to_vec(),
            })
            .ok_or_else(|| {
                Error::InvalidField(format!("no tabulated modulus for p = {p}, e = {e}"))
            })
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.e)
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Brute-force irreducibility test: no monic factor of degree 1..=deg/2.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as usize) as u32);
                c /= p as usize;
            }
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

struct Tables {
    desc: FieldDesc,
    q: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field with precomputed addition and multiplication tables.
/// Cloning is cheap; all clones share the tables.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.order())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || self.t.desc == other.t.desc
    }
}

impl Eq for Field {}

impl Field {
    /// F_{p^e} with the tabulated modulus.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        Self::from_desc(FieldDesc::standard(p, e)?)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Builds the field from an explicit description, checking that `p` is
    /// prime and the modulus is monic irreducible of degree `e`.
    pub fn from_desc(desc: FieldDesc) -> Result<Self> {
        let FieldDesc { p, e, ref modulus } = desc;
        if !is_prime(p) || p > 7 {
            return Err(Error::InvalidField(format!("p = {p} must be a prime <= 7")));
        }
        if e == 0 || e > 4 {
            return Err(Error::InvalidField(format!("extension degree {e} not in 1..=4")));
        }
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree e".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must be < p".into()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let q = desc.order();
        let digits = |x: usize| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut x = x;
            for _ in 0..e {
                v.push((x % p as usize) as u32);
                x /= p as usize;
            }
            v
        };
        let encode = |v: &[u32]| -> usize {
            v.iter()
                .rev()
                .fold(0usize, |acc, &c| acc * p as usize + c as usize)
        };
        let decoded: Vec<Vec<u32>> = (0..q).map(digits).collect();
        let mut add = vec![0 as Elem; q * q];
        let mut mul = vec![0 as Elem; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = decoded[a]
                    .iter()
                    .zip(&decoded[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = encode(&s) as Elem;
                let mut prod = vec![0u32; 2 * e as usize - 1];
                for (i, x) in decoded[a].iter().enumerate() {
                    for (j, y) in decoded[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let r = poly_rem(&prod, modulus, p);
                let mut r = r;
                r.resize(e as usize, 0);
                mul[a * q + b] = encode(&r) as Elem;
            }
        }
        let mut neg = vec![0 as Elem; q];
        let mut inv = vec![0 as Elem; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                inv[a] = (1..q)
                    .find(|&b| mul[a * q + b] == 1)
                    .ok_or_else(|| Error::InvalidField("zero divisor found".into()))?
                    as Elem;
            }
        }
        Ok(Field {
            t: Arc::new(Tables {
                desc,
                q,
                add,
                mul,
                neg,
                inv,
            }),
        })
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.t.desc
    }

    pub fn p(&self) -> u32 {
        self.t.desc.p
    }

    pub fn degree(&self) -> u32 {
        self.t.desc.e
    }

    pub fn order(&self) -> usize {
        self.t.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.t.desc.e == 1
    }

    /// The prime subfield F_p.
    pub fn prime_subfield(&self) -> Field {
        if self.is_prime_field() {
            self.clone()
        } else {
            Field::prime(self.p()).expect("tabulated prime field")
        }
    }

    /// True if every element of `self` embeds in `other` by identity of
    /// encodings (same field, or `self` is the prime subfield of `other`).
    pub fn embeds_in(&self, other: &Field) -> bool {
        self == other || (self.is_prime_field() && self.p() == other.p())
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.t.add[a as usize * self.t.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.t.mul[a as usize * self.t.q + b as usize]
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.t.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, mut n: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Image of an integer under Z -> F_p -> F_{p^e}.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p() as i64) as Elem
    }

    /// Element with the given coefficient vector (lowest power of the
    /// generator first).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.degree() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::Invalid(format!(
                "coefficient vector {coeffs:?} is not an element of F_{}",
                self.order()
            )));
        }
        Ok(coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.p() as usize + c as usize) as Elem)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.p() as usize;
        let mut x = a as usize;
        (0..self.degree())
            .map(|_| {
                let c = (x % p) as u32;
                x /= p;
                c
            })
            .collect()
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p() as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order()).map(|x| x as Elem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.order()) as Elem
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(1..self.order()) as Elem
    }

    /// `dst[k] += a * src[k]` for every k.
    #[inline]
    pub fn axpy(&self, dst: &mut [Elem], a: Elem, src: &[Elem]) {
        debug_assert_eq!(dst.len(), src.len());
        if a == 0 {
            return;
        }
        let q = self.t.q;
        if self.is_prime_field() {
            let p = q as u32;
            let a = a as u32;
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = ((*d as u32 + a * s as u32) % p) as Elem;
            }
        } else {
            let row = &self.t.mul[a as usize * q..(a as usize + 1) * q];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = self.t.add[*d as usize * q + row[s as usize] as usize];
            }
        }
    }

    /// `v[k] *= a` for every k.
    pub fn scale(&self, v: &mut [Elem], a: Elem) {
        let q = self.t.q;
        let row = &self.t.mul[a as usize * q..(a as usize + 1) * q];
        for x in v.iter_mut() {
            *x = row[*x as usize];
        }
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        if self.is_prime_field() {
            let p = self.p() as u64;
            let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
            (s % p) as Elem
        } else {
            a.iter()
                .zip(b)
                .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
        }
    }

    /// Decimal rendering: the integer for prime fields, `[c0,c1,..]`
    /// otherwise.
    pub fn render(&self, a: Elem) -> String {
        if self.is_prime_field() {
            a.to_string()
        } else {
            format!("{:?}", self.coeffs(a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_tabulated_modulus_is_irreducible() {
        for &(p, e, m) in MODULI {
            assert!(is_irreducible(m, p), "p={p} e={e}");
            Field::new(p, e).unwrap();
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2
        let desc = FieldDesc {
            p: 2,
            e: 2,
            modulus: vec![1, 0, 1],
        };
        assert!(matches!(Field::from_desc(desc), Err(Error::InvalidField(_))));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2: no roots, quadratic factor
        let desc = FieldDesc {
            p: 2,
            e: 4,
            modulus: vec![1, 0, 1, 0, 1],
        };
        assert!(Field::from_desc(desc).is_err());
        assert!(Field::new(11, 1).is_err());
        assert!(Field::new(4, 1).is_err());
    }

    #[test]
    fn frobenius_fixes_prime_field_and_has_orbit_e() {
        for &(p, e, _) in MODULI {
            let f = Field::new(p, e).unwrap();
            let q = f.order() as u64;
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a, "a^(p^e) = a in F_{}", q);
                let mut b = a;
                for _ in 0..e {
                    b = f.frobenius(b);
                }
                assert_eq!(b, a);
            }
            if e == 1 {
                for a in f.elements() {
                    assert_eq!(f.frobenius(a), a);
                }
            }
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(p, e, _) in MODULI {
            let f = Field::new(p, e).unwrap();
            for _ in 0..200 {
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
        }
    }

    #[test]
    fn prime_elements_share_encoding_with_extensions() {
        let f3 = Field::prime(3).unwrap();
        let f9 = Field::new(3, 2).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(f3.mul(a, b), f9.mul(a, b));
                assert_eq!(f3.add(a, b), f9.add(a, b));
            }
        }
        assert!(f3.embeds_in(&f9));
        assert!(!f9.embeds_in(&f3));
    }

    #[test]
    fn coefficient_round_trip() {
        let f = Field::new(5, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
        }
    }
}
