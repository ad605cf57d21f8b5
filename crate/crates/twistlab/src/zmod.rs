//! Exact linear algebra over residue rings Z_L.
//!
//! The workhorse is the Howell form: a canonical echelon form for subgroups
//! of Z_L^n that supports membership tests with certificates, kernel
//! computation through the graph trick, and exact subgroup orders. All
//! moduli in play divide one lift modulus L, so a single ring suffices.

use std::collections::BTreeMap;

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn gcd_u(a: u64, b: u64) -> u64 {
    crate::phase::gcd(a, b)
}

/// A unit u of Z_L with u·a ≡ gcd(a, L) (mod L). Brute force; L is tiny here.
fn normalizing_unit(a: u64, modulus: u64) -> u64 {
    let d = gcd_u(a, modulus);
    for u in 1..modulus {
        if gcd_u(u, modulus) == 1 && (u * a) % modulus == d {
            return u;
        }
    }
    panic!("no normalizing unit for {a} mod {modulus}");
}

pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// A prime-factored nonnegative integer, for orders too large to hold flat.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactoredInt(pub BTreeMap<u64, u32>);

impl FactoredInt {
    pub fn one() -> FactoredInt {
        FactoredInt(BTreeMap::new())
    }

    pub fn mul_int(&mut self, n: u64) {
        for (p, e) in factorize(n) {
            *self.0.entry(p).or_insert(0) += e;
        }
    }

    pub fn mul_pow(&mut self, n: u64, k: u32) {
        for (p, e) in factorize(n) {
            *self.0.entry(p).or_insert(0) += e * k;
        }
    }

    /// Exact division; panics if not divisible.
    pub fn div(&self, other: &FactoredInt) -> FactoredInt {
        let mut out = self.0.clone();
        for (p, e) in &other.0 {
            let slot = out.get_mut(p).expect("not divisible");
            assert!(*slot >= *e, "not divisible");
            *slot -= e;
            if *slot == 0 {
                out.remove(p);
            }
        }
        FactoredInt(out)
    }

    pub fn to_u128(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for (&p, &e) in &self.0 {
            for _ in 0..e {
                acc = acc.checked_mul(p as u128)?;
            }
        }
        Some(acc)
    }
}

/// A subgroup of Z_L^n in canonical Howell form.
#[derive(Clone, Debug)]
pub struct Span {
    pub modulus: u64,
    pub cols: usize,
    /// Echelon rows; `pivots[i]` is the leading column of `rows[i]`, whose
    /// entry divides L.
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Span {
    /// Canonicalize the span of the given generators.
    pub fn from_generators(modulus: u64, cols: usize, gens: &[Vec<u64>]) -> Span {
        let mut work: Vec<Vec<u64>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), cols);
                g.iter().map(|&x| x % modulus).collect()
            })
            .filter(|g: &Vec<u64>| g.iter().any(|&x| x != 0))
            .collect();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for col in 0..cols {
            // rows in `work` all have leading column >= col
            let mut with_col: Vec<Vec<u64>> = Vec::new();
            let mut rest: Vec<Vec<u64>> = Vec::new();
            for r in work.drain(..) {
                if r[col] != 0 {
                    with_col.push(r);
                } else {
                    rest.push(r);
                }
            }
            work = rest;
            let Some(mut pivot_row) = with_col.pop() else {
                continue;
            };
            for r in with_col {
                let a = pivot_row[col] as i128;
                let b = r[col] as i128;
                let (g, x, y) = egcd(a, b);
                let m = modulus as i128;
                let combined: Vec<u64> = pivot_row
                    .iter()
                    .zip(&r)
                    .map(|(&p, &q)| {
                        ((x * p as i128 + y * q as i128).rem_euclid(m)) as u64
                    })
                    .collect();
                let cleared: Vec<u64> = pivot_row
                    .iter()
                    .zip(&r)
                    .map(|(&p, &q)| {
                        (((b / g) * p as i128 - (a / g) * q as i128).rem_euclid(m)) as u64
                    })
                    .collect();
                pivot_row = combined;
                if cleared.iter().any(|&x| x != 0) {
                    debug_assert_eq!(cleared[col], 0);
                    work.push(cleared);
                }
            }
            // normalize the pivot to divide L
            let u = normalizing_unit(pivot_row[col], modulus);
            for x in pivot_row.iter_mut() {
                *x = (*x * u) % modulus;
            }
            let p = pivot_row[col];
            debug_assert_eq!(modulus % p, 0);
            // Howell closure: (L/p)·row has leading column beyond col
            let q = modulus / p;
            let ann: Vec<u64> = pivot_row.iter().map(|&x| (x * q) % modulus).collect();
            if ann.iter().any(|&x| x != 0) {
                debug_assert_eq!(ann[col], 0);
                work.push(ann);
            }
            // reduce earlier rows at this column mod p
            for (r, _) in rows.iter_mut().zip(&pivots) {
                let k = r[col] / p;
                if k > 0 {
                    for (x, y) in r.iter_mut().zip(&pivot_row) {
                        *x = (*x + (modulus - (k * y) % modulus)) % modulus;
                    }
                }
            }
            rows.push(pivot_row);
            pivots.push(col);
        }
        Span {
            modulus,
            cols,
            rows,
            pivots,
        }
    }

    /// Reduce `v` against the span. Returns the residue and the coefficients
    /// used; `v` is in the span iff the residue is zero.
    pub fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        assert_eq!(v.len(), self.cols);
        let mut res: Vec<u64> = v.iter().map(|&x| x % self.modulus).collect();
        let mut coeffs = vec![0u64; self.rows.len()];
        for (i, (row, &col)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let p = row[col];
            let k = res[col] / p;
            if !res[col].is_multiple_of(p) {
                // cannot clear this column completely; clear what we can
                continue;
            }
            if k > 0 {
                coeffs[i] = k;
                for (x, y) in res.iter_mut().zip(row) {
                    *x = (*x + (self.modulus - (k * y) % self.modulus)) % self.modulus;
                }
            }
        }
        (res, coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    /// Order of the subgroup: Π (L / pivot value).
    pub fn order(&self) -> FactoredInt {
        let mut o = FactoredInt::one();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            o.mul_int(self.modulus / row[col]);
        }
        o
    }

    /// Enumerate every element of the span (unique representations).
    pub fn enumerate(&self) -> SpanIter<'_> {
        let radices: Vec<u64> = self
            .rows
            .iter()
            .zip(&self.pivots)
            .map(|(row, &col)| self.modulus / row[col])
            .collect();
        SpanIter {
            span: self,
            radices,
            counter: None,
            done: false,
        }
    }

    pub fn order_u128(&self) -> Option<u128> {
        self.order().to_u128()
    }
}

pub struct SpanIter<'a> {
    span: &'a Span,
    radices: Vec<u64>,
    counter: Option<Vec<u64>>,
    done: bool,
}

impl<'a> Iterator for SpanIter<'a> {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        match &mut self.counter {
            None => self.counter = Some(vec![0; self.radices.len()]),
            Some(c) => {
                let mut pos = 0;
                loop {
                    if pos == c.len() {
                        self.done = true;
                        return None;
                    }
                    c[pos] += 1;
                    if c[pos] < self.radices[pos] {
                        break;
                    }
                    c[pos] = 0;
                    pos += 1;
                }
            }
        }
        let c = self.counter.as_ref().unwrap();
        let mut v = vec![0u64; self.span.cols];
        for (k, row) in c.iter().zip(&self.span.rows) {
            if *k == 0 {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = (*x + k * y) % self.span.modulus;
            }
        }
        Some(v)
    }
}

/// A homomorphism ⊕_j Z_{m_j} → ⊕_i Z_{μ_i} given by an integer matrix,
/// with all moduli dividing the lift modulus L.
#[derive(Clone, Debug)]
pub struct HomZn {
    pub modulus: u64,
    pub src_moduli: Vec<u64>,
    pub dst_moduli: Vec<u64>,
    /// entries[i][j]: coefficient of source coordinate j in target row i,
    /// taken mod μ_i.
    pub entries: Vec<Vec<u64>>,
}

impl HomZn {
    pub fn new(
        modulus: u64,
        src_moduli: Vec<u64>,
        dst_moduli: Vec<u64>,
        entries: Vec<Vec<u64>>,
    ) -> HomZn {
        assert!(src_moduli.iter().all(|m| modulus.is_multiple_of(*m)));
        assert!(dst_moduli.iter().all(|m| modulus.is_multiple_of(*m)));
        assert_eq!(entries.len(), dst_moduli.len());
        for row in &entries {
            assert_eq!(row.len(), src_moduli.len());
        }
        // homomorphism well-definedness: a[i][j]·m_j ≡ 0 mod μ_i
        for (i, row) in entries.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                assert!(
                    (a * src_moduli[j]).is_multiple_of(dst_moduli[i]),
                    "entry ({i},{j}) does not define a homomorphism"
                );
            }
        }
        HomZn {
            modulus,
            src_moduli,
            dst_moduli,
            entries,
        }
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.entries
            .iter()
            .zip(&self.dst_moduli)
            .map(|(row, &mu)| {
                row.iter()
                    .zip(x)
                    .map(|(&a, &v)| (a * v) % mu)
                    .sum::<u64>()
                    % mu
            })
            .collect()
    }

    /// Graph of the homomorphism in Z_L^(r+n): rows (scaled image of e_j, e_j).
    fn graph(&self) -> Span {
        let r = self.dst_moduli.len();
        let n = self.src_moduli.len();
        let mut gens = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = vec![0u64; r + n];
            for i in 0..r {
                let scale = self.modulus / self.dst_moduli[i];
                row[i] = (self.entries[i][j] % self.dst_moduli[i]) * scale % self.modulus;
            }
            row[r + j] = 1;
            gens.push(row);
        }
        Span::from_generators(self.modulus, r + n, &gens)
    }

    /// Generators of the kernel subgroup, as source vectors (mod m_j).
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let r = self.dst_moduli.len();
        let graph = self.graph();
        graph
            .rows
            .iter()
            .zip(&graph.pivots)
            .filter(|(_, &col)| col >= r)
            .map(|(row, _)| {
                row[r..]
                    .iter()
                    .zip(&self.src_moduli)
                    .map(|(&x, &m)| x % m)
                    .collect()
            })
            .collect()
    }

    /// A particular solution of `f(x) = target`, if any.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        let r = self.dst_moduli.len();
        let n = self.src_moduli.len();
        assert_eq!(target.len(), r);
        let graph = self.graph();
        let mut res: Vec<u64> = (0..r + n)
            .map(|i| {
                if i < r {
                    (target[i] % self.dst_moduli[i]) * (self.modulus / self.dst_moduli[i])
                } else {
                    0
                }
            })
            .collect();
        for (row, &col) in graph.rows.iter().zip(&graph.pivots) {
            if col >= r {
                break;
            }
            let p = row[col];
            if !res[col].is_multiple_of(p) {
                return None;
            }
            let k = res[col] / p;
            if k > 0 {
                for (x, y) in res.iter_mut().zip(row) {
                    *x = (*x + (self.modulus - (k * y) % self.modulus)) % self.modulus;
                }
            }
        }
        if res[..r].iter().any(|&x| x != 0) {
            return None;
        }
        // (t|0) = Σ k·rows + (0|w)  ⇒  particular solution is -w
        let sol: Vec<u64> = res[r..]
            .iter()
            .zip(&self.src_moduli)
            .map(|(&w, &m)| (m - w % m) % m)
            .collect();
        debug_assert_eq!(
            self.apply(&sol),
            target
                .iter()
                .zip(&self.dst_moduli)
                .map(|(&t, &mu)| t % mu)
                .collect::<Vec<_>>()
        );
        Some(sol)
    }
}

/// Order of the subgroup of ⊕_j Z_{m_j} generated by `gens`.
pub fn subgroup_order(modulus: u64, moduli: &[u64], gens: &[Vec<u64>]) -> FactoredInt {
    // scale coordinate j by L/m_j to embed everything in Z_L
    let scaled: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| {
            g.iter()
                .zip(moduli)
                .map(|(&x, &m)| (x % m) * (modulus / m))
                .collect()
        })
        .collect();
    Span::from_generators(modulus, moduli.len(), &scaled).order()
}
