//! Dirichlet characters modulo a prime: enumeration, parity, Gauss sums, and
//! the odd-character representations of the sine.
//!
//! Characters are indexed against a fixed primitive root `g`: the character
//! with index `j` sends `g^k` to `exp(2 pi i j k / (q-1))`. Values are unit
//! complex numbers built from exact rational angles; a discrete-log table of
//! size `q` is precomputed per modulus.

use num_complex::Complex64;
use std::f64::consts::TAU;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CharacterError {
    #[error("modulus {0} is not an odd prime")]
    UnsupportedModulus(u64),
    #[error("operation requires a non-principal character")]
    PrincipalCharacter,
    #[error("{0} is not coprime to the modulus {1}")]
    NotCoprime(u64, u64),
}

pub type Result<T> = std::result::Result<T, CharacterError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Shared per-modulus tables: smallest primitive root and its discrete logs.
#[derive(Debug)]
struct ModulusTable {
    q: u64,
    /// dlog[n] = k with g^k = n (mod q); dlog[0] unused.
    dlog: Vec<u32>,
}

impl ModulusTable {
    fn build(q: u64) -> Result<Arc<Self>> {
        if q < 3 || !is_prime(q) {
            return Err(CharacterError::UnsupportedModulus(q));
        }
        let g = (2..q)
            .find(|&g| is_primitive_root(g, q))
            .expect("a prime modulus has a primitive root");
        let mut dlog = vec![0u32; q as usize];
        let mut v = 1u64;
        for k in 0..(q - 1) {
            dlog[v as usize] = k as u32;
            v = v * g % q;
        }
        Ok(Arc::new(ModulusTable { q, dlog }))
    }
}

fn is_primitive_root(g: u64, q: u64) -> bool {
    // order of g divides q-1; g is primitive iff g^((q-1)/p) != 1 for all
    // prime factors p of q-1
    let mut m = q - 1;
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            factors.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    factors.iter().all(|&p| mod_pow(g, (q - 1) / p, q) != 1)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// A Dirichlet character modulo an odd prime `q`.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    table: Arc<ModulusTable>,
    index: u32,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.table.q
    }

    /// Exponent on the dual of the fixed primitive root, in `[0, q-2]`.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// chi(-1) = (-1)^index since dlog(-1) = (q-1)/2.
    pub fn parity(&self) -> Parity {
        if self.index % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    /// chi(n); zero when q | n, otherwise exp(2 pi i * index * dlog(n)/(q-1)).
    pub fn eval(&self, n: i64) -> Complex64 {
        let q = self.table.q as i64;
        let r = n.rem_euclid(q) as u64;
        if r == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let ord = self.table.q - 1;
        let e = (self.index as u64 * self.table.dlog[r as usize] as u64) % ord;
        Complex64::from_polar(1.0, TAU * e as f64 / ord as f64)
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let ord = (self.table.q - 1) as u32;
        DirichletCharacter {
            table: Arc::clone(&self.table),
            index: (ord - self.index) % ord,
        }
    }
}

/// Gauss sum value together with the modulus it came from.
#[derive(Debug, Clone, Copy)]
pub struct GaussSumValue {
    pub value: Complex64,
    pub modulus: u64,
}

/// All q-1 characters modulo a prime q, principal first.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let table = ModulusTable::build(q)?;
    Ok((0..(q - 1) as u32)
        .map(|index| DirichletCharacter {
            table: Arc::clone(&table),
            index,
        })
        .collect())
}

/// tau(chi) = sum_{n=1}^{q-1} chi(n) e^{2 pi i n / q}, non-principal chi.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<GaussSumValue> {
    if chi.is_principal() {
        return Err(CharacterError::PrincipalCharacter);
    }
    Ok(GaussSumValue {
        value: gauss_sum_any(chi),
        modulus: chi.modulus(),
    })
}

/// Direct Gauss sum for any character, principal included (the floor-sum
/// decompositions sum over every even character).
pub fn gauss_sum_any(chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..q {
        acc += chi.eval(n as i64) * Complex64::from_polar(1.0, TAU * n as f64 / q as f64);
    }
    acc
}

/// sin(2 pi n a / q) written through odd characters:
/// (1/(i phi(q))) sum_{chi odd} chi(a) tau(chibar) chi(n).
pub fn sin_as_char_sum(a: u64, q: u64, n: i64) -> Result<Complex64> {
    let chars = enumerate_characters(q)?;
    if a % q == 0 {
        return Err(CharacterError::NotCoprime(a, q));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for chi in chars.iter().filter(|c| c.is_odd()) {
        let tau_bar = gauss_sum(&chi.conjugate())?.value;
        acc += chi.eval(a as i64) * tau_bar * chi.eval(n);
    }
    let phi = (q - 1) as f64;
    Ok(acc / (Complex64::i() * phi))
}

/// sum_{chi odd} chi(a) chibar(b): +phi(q)/2 when a = b, -phi(q)/2 when
/// a = -b (both mod q, (a,q)=1), zero otherwise.
pub fn odd_char_orthogonality(a: i64, b: i64, q: u64) -> Result<Complex64> {
    let chars = enumerate_characters(q)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for chi in chars.iter().filter(|c| c.is_odd()) {
        acc += chi.eval(a) * chi.eval(b).conj();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_and_parity_split() {
        for &(q, even, odd) in &[(3u64, 1usize, 1usize), (5, 2, 2), (7, 3, 3), (11, 5, 5)] {
            let chars = enumerate_characters(q).unwrap();
            assert_eq!(chars.len(), (q - 1) as usize);
            assert_eq!(chars.iter().filter(|c| !c.is_odd()).count(), even);
            assert_eq!(chars.iter().filter(|c| c.is_odd()).count(), odd);
            assert_eq!(chars.iter().filter(|c| c.is_principal()).count(), 1);
            // parity matches chi(-1)
            for c in &chars {
                let val = c.eval(q as i64 - 1);
                let want = if c.is_odd() { -1.0 } else { 1.0 };
                assert!((val.re - want).abs() < 1e-12 && val.im.abs() < 1e-12);
            }
        }
        assert!(matches!(
            enumerate_characters(9),
            Err(CharacterError::UnsupportedModulus(9))
        ));
    }

    #[test]
    fn multiplicativity() {
        for &q in &[3u64, 5, 7, 11, 13] {
            for chi in enumerate_characters(q).unwrap() {
                for m in 1..q as i64 {
                    for n in 1..q as i64 {
                        let lhs = chi.eval(m * n);
                        let rhs = chi.eval(m) * chi.eval(n);
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_sum_mod3_and_magnitudes() {
        let chars = enumerate_characters(3).unwrap();
        let tau = gauss_sum(&chars[1]).unwrap().value;
        assert!((tau - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);

        for chi in enumerate_characters(5).unwrap().iter().skip(1) {
            let tau = gauss_sum(chi).unwrap().value;
            assert!((tau.norm_sqr() - 5.0).abs() < 1e-12);
        }
        assert!(matches!(
            gauss_sum(&enumerate_characters(5).unwrap()[0]),
            Err(CharacterError::PrincipalCharacter)
        ));
    }

    #[test]
    fn odd_gauss_sum_product_is_minus_q() {
        for &q in &[3u64, 5, 7, 11, 13] {
            for chi in enumerate_characters(q).unwrap().iter().filter(|c| c.is_odd()) {
                let tau = gauss_sum(chi).unwrap().value;
                let tau_bar = gauss_sum(&chi.conjugate()).unwrap().value;
                assert!(
                    (tau * tau_bar + Complex64::new(q as f64, 0.0)).norm() < 1e-12,
                    "q={q} idx={}",
                    chi.index()
                );
            }
        }
    }

    #[test]
    fn sine_representation_exact() {
        for &q in &[3u64, 5, 7, 11] {
            for a in 1..q {
                for n in 0..=(3 * q) as i64 {
                    let v = sin_as_char_sum(a, q, n).unwrap();
                    let want = (TAU * n as f64 * a as f64 / q as f64).sin();
                    assert!(v.im.abs() < 1e-12, "q={q} a={a} n={n}: im {}", v.im);
                    assert!((v.re - want).abs() < 1e-12, "q={q} a={a} n={n}");
                }
            }
        }
        // single odd character mod 3: sin(2 pi / 3) = sqrt(3)/2
        let v = sin_as_char_sum(1, 3, 1).unwrap();
        assert!((v.re - 3f64.sqrt() / 2.0).abs() < 1e-12);
        // chi(n) = 0 kills multiples of q
        assert!(sin_as_char_sum(1, 5, 5).unwrap().norm() < 1e-12);
        assert!(matches!(
            sin_as_char_sum(10, 5, 1),
            Err(CharacterError::NotCoprime(10, 5))
        ));
    }

    #[test]
    fn orthogonality_branches() {
        let v = odd_char_orthogonality(2, 2, 5).unwrap();
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let v = odd_char_orthogonality(2, 3, 5).unwrap(); // 3 = -2 mod 5
        assert!((v - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        let v = odd_char_orthogonality(1, 2, 7).unwrap();
        assert!(v.norm() < 1e-12);
        // full branch table for q = 5
        for a in 1..5i64 {
            for b in 1..5i64 {
                let v = odd_char_orthogonality(a, b, 5).unwrap();
                let want = if a == b {
                    2.0
                } else if (a + b) % 5 == 0 {
                    -2.0
                } else {
                    0.0
                };
                assert!((v - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }
}
