//! Exact arithmetic in cyclotomic integer rings Z[ζ_N].
//!
//! Elements are integer polynomials in ζ_N reduced modulo the N-th cyclotomic
//! polynomial Φ_N, so equality and integer-ness are canonical. This is what
//! makes brute-force traces (sums of many roots of unity) exactly testable.

use crate::phase::Phase;

/// Integer polynomial division `num / den`, `den` monic. Returns (quotient,
/// remainder).
fn poly_divmod(num: &[i128], den: &[i128]) -> (Vec<i128>, Vec<i128>) {
    assert_eq!(*den.last().unwrap(), 1, "divisor must be monic");
    let mut rem: Vec<i128> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return (vec![0], rem);
    }
    let mut quot = vec![0i128; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i - dd + j] -= c * dc;
        }
    }
    while rem.len() > 1 && *rem.last().unwrap() == 0 {
        rem.pop();
    }
    (quot, rem)
}

/// The N-th cyclotomic polynomial, coefficients for x^0..x^φ(N).
fn cyclotomic_poly(n: u64) -> Vec<i128> {
    // x^n - 1 divided by Φ_d for every proper divisor d of n.
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_poly(d);
            let (q, r) = poly_divmod(&num, &phi_d);
            assert!(r.len() == 1 && r[0] == 0, "cyclotomic division not exact");
            num = q;
        }
    }
    num
}

/// The ring Z[ζ_N] with ζ_N = exp(2πi/N).
#[derive(Clone, Debug)]
pub struct CycRing {
    order: u64,
    /// Φ_N, monic, degree φ(N).
    min_poly: Vec<i128>,
    /// ζ^k reduced mod Φ_N for k = 0..N, each of length deg.
    root_powers: Vec<Vec<i128>>,
}

impl CycRing {
    pub fn new(order: u64) -> CycRing {
        assert!(order >= 1);
        let min_poly = cyclotomic_poly(order);
        let deg = min_poly.len() - 1;
        let mut root_powers = Vec::with_capacity(order as usize);
        for k in 0..order {
            let mut p = vec![0i128; k as usize + 1];
            p[k as usize] = 1;
            let (_, mut r) = poly_divmod(&p, &min_poly);
            r.resize(deg, 0);
            root_powers.push(r);
        }
        CycRing {
            order,
            min_poly,
            root_powers,
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn zero(&self) -> Cyc {
        Cyc {
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn integer(&self, k: i128) -> Cyc {
        let mut c = self.zero();
        c.coeffs[0] = k;
        c
    }

    /// ζ_N^k as a ring element.
    pub fn root(&self, k: i64) -> Cyc {
        let k = k.rem_euclid(self.order as i64) as usize;
        Cyc {
            coeffs: self.root_powers[k].clone(),
        }
    }

    /// The unimodular scalar `exp(2πi·p)`. The phase denominator must divide N.
    pub fn phase(&self, p: Phase) -> Cyc {
        self.root(p.exponent(self.order) as i64)
    }

    pub fn add(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &Cyc, b: &Cyc) -> Cyc {
        Cyc {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn mul(&self, a: &Cyc, b: &Cyc) -> Cyc {
        let deg = self.degree();
        let mut prod = vec![0i128; 2 * deg];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let (_, mut r) = poly_divmod(&prod, &self.min_poly);
        r.resize(deg, 0);
        Cyc { coeffs: r }
    }

    pub fn scale(&self, a: &Cyc, k: i128) -> Cyc {
        Cyc {
            coeffs: a.coeffs.iter().map(|x| x * k).collect(),
        }
    }

    /// Some(k) if the element is the rational integer k.
    pub fn as_integer(&self, a: &Cyc) -> Option<i128> {
        if a.coeffs[1..].iter().all(|&c| c == 0) {
            Some(a.coeffs[0])
        } else {
            None
        }
    }
}

/// An element of a [`CycRing`]; coefficients over the power basis of ζ_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyc {
    coeffs: Vec<i128>,
}

impl Cyc {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(16), vec![1, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn gaussian_integers() {
        let ring = CycRing::new(4);
        let i = ring.root(1);
        assert_eq!(ring.mul(&i, &i), ring.integer(-1));
        // 1 + i - i = 1
        let one = ring.integer(1);
        let z = ring.sub(&ring.add(&one, &i), &i);
        assert_eq!(ring.as_integer(&z), Some(1));
    }

    #[test]
    fn full_character_sum_vanishes() {
        // sum of all N-th roots of unity is zero
        for n in [2u64, 3, 4, 8, 12, 16] {
            let ring = CycRing::new(n);
            let mut acc = ring.zero();
            for k in 0..n {
                acc = ring.add(&acc, &ring.root(k as i64));
            }
            assert!(acc.is_zero(), "order {n}");
        }
    }

    #[test]
    fn phase_embedding() {
        let ring = CycRing::new(16);
        let z = ring.phase(Phase::new(1, 4));
        assert_eq!(z, ring.root(4));
        assert_eq!(ring.as_integer(&ring.mul(&z, &z)), Some(-1));
    }
}
