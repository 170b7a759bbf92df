//! Multi-index sets `M_n`, multinomial coefficients and control points.
//!
//! `M_n` holds every `k = (k_0, ..., k_D)` of non-negative integers with
//! `|k| = n`. Enumeration is colexicographic on the tail `(k_1, ..., k_D)`
//! with `k_0 = n - (k_1 + ... + k_D)`: `k_1` runs fastest and `k_D` is the
//! most significant entry. For `D = 2, n = 1` the order is
//! `(1,0,0), (0,1,0), (0,0,1)`. Control nets and CSV exports use this order.

use std::fmt;
use std::io::Write;
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::geometry::{Point, Simplex};

/// Largest lattice the crate will materialize.
pub const MAX_LATTICE_SIZE: u128 = 100_000_000;

/// Largest order accepted by [`multinomial_exact`].
pub const MAX_EXACT_ORDER: u32 = 60;

const LN_FACTORIAL_TABLE: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(k: Vec<u32>) -> Result<Self> {
        if k.len() < 2 {
            return Err(Error::DimensionMismatch {
                what: "multi-index",
                expected: 2,
                found: k.len(),
            });
        }
        Ok(MultiIndex(k))
    }

    /// `n · e_j`, the index of vertex `x_j`.
    pub fn vertex(dim: usize, n: u32, j: usize) -> Self {
        let mut k = vec![0; dim + 1];
        k[j] = n;
        MultiIndex(k)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// `binomial(n, k)`, or `None` on `u128` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc.checked_mul(n as u128 - i)? / (i + 1);
    }
    Some(acc)
}

/// `|M_n| = binomial(n + D, D)`, saturating at `u128::MAX`.
pub fn lattice_size(n: u32, dim: usize) -> u128 {
    binomial(n as u64 + dim as u64, dim as u64).unwrap_or(u128::MAX)
}

fn check_size(n: u32, dim: usize) -> Result<usize> {
    let size = lattice_size(n, dim);
    if size > MAX_LATTICE_SIZE {
        return Err(Error::SizeOverflow {
            size,
            cap: MAX_LATTICE_SIZE,
        });
    }
    Ok(size as usize)
}

/// Streaming enumeration of `M_n` in colexicographic order.
#[derive(Clone, Debug)]
pub struct MultiIndices {
    n: u32,
    current: Option<Vec<u32>>,
    tail_sum: u32,
}

impl MultiIndices {
    pub fn new(n: u32, dim: usize) -> Self {
        let mut first = vec![0; dim + 1];
        first[0] = n;
        MultiIndices {
            n,
            current: Some(first),
            tail_sum: 0,
        }
    }
}

impl Iterator for MultiIndices {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let out = self.current.clone()?;
        let k = self.current.as_mut().expect("checked above");
        let mut advanced = false;
        for i in 1..k.len() {
            if self.tail_sum < self.n {
                k[i] += 1;
                self.tail_sum += 1;
                advanced = true;
                break;
            }
            self.tail_sum -= k[i];
            k[i] = 0;
        }
        if advanced {
            k[0] = self.n - self.tail_sum;
        } else {
            self.current = None;
        }
        Some(MultiIndex(out))
    }
}

/// All of `M_n`, materialized. Refuses lattices above [`MAX_LATTICE_SIZE`].
pub fn enumerate_multi_indices(n: u32, dim: usize) -> Result<Vec<MultiIndex>> {
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            what: "lattice dimension",
            expected: 1,
            found: 0,
        });
    }
    let size = check_size(n, dim)?;
    let mut out = Vec::with_capacity(size);
    out.extend(MultiIndices::new(n, dim));
    Ok(out)
}

/// Position of `k` in the enumeration of `M_{|k|}`.
pub fn rank(k: &[u32]) -> usize {
    let n: u64 = k.iter().map(|&v| v as u64).sum();
    let mut above: u64 = 0;
    let mut r: u128 = 0;
    for i in (1..k.len()).rev() {
        let ki = k[i] as u64;
        let m = n - above;
        // Σ_{v < k_i} #{tails of length i-1 with sum <= m - v}
        //   = C(m + i, i) - C(m - k_i + i, i)
        r += binomial(m + i as u64, i as u64).expect("rank within lattice cap")
            - binomial(m - ki + i as u64, i as u64).expect("rank within lattice cap");
        above += ki;
    }
    r as usize
}

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE + 1);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        table.push(0.0);
        for i in 1..=LN_FACTORIAL_TABLE {
            let (s, c) = neumaier_add(sum, comp, (i as f64).ln());
            sum = s;
            comp = c;
            table.push(sum + comp);
        }
        table
    })
}

fn neumaier_add(sum: f64, comp: f64, x: f64) -> (f64, f64) {
    let t = sum + x;
    let c = if sum.abs() >= x.abs() {
        (sum - t) + x
    } else {
        (x - t) + sum
    };
    (t, comp + c)
}

/// `ln(k!)`: compensated prefix sums of `ln i` up to 1024, Stirling series
/// beyond.
pub fn ln_factorial(k: u32) -> f64 {
    let table = ln_factorial_table();
    if (k as usize) < table.len() {
        return table[k as usize];
    }
    let x = k as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv / 12.0 * (1.0 - inv2 / 30.0 * (1.0 - inv2 * 2.0 / 7.0 * (1.0 - inv2 * 3.0 / 4.0)));
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + series
}

/// `ln(n! / Π k_j!)` for `n = |k|`.
pub fn multinomial_log(k: &MultiIndex) -> f64 {
    multinomial_log_of(k.entries())
}

pub(crate) fn multinomial_log_of(k: &[u32]) -> f64 {
    let n: u32 = k.iter().sum();
    let (jmax, &kmax) = k
        .iter()
        .enumerate()
        .max_by_key(|&(_, v)| *v)
        .expect("multi-index is non-empty");
    // ln(n!/kmax!) is summed directly when short; it keeps small results
    // such as ln C(1000, 1) free of the cancellation in ln(1000!) - ln(999!).
    let head = if n - kmax <= 1024 {
        let (mut sum, mut comp) = (0.0, 0.0);
        for i in kmax + 1..=n {
            (sum, comp) = neumaier_add(sum, comp, (i as f64).ln());
        }
        sum + comp
    } else {
        ln_factorial(n) - ln_factorial(kmax)
    };
    let rest: f64 = k
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != jmax)
        .map(|(_, &v)| ln_factorial(v))
        .sum();
    head - rest
}

/// Exact multinomial coefficient, for orders up to [`MAX_EXACT_ORDER`].
pub fn multinomial_exact(k: &MultiIndex) -> Result<BigUint> {
    let n = k.order();
    if n > MAX_EXACT_ORDER {
        return Err(Error::SizeOverflow {
            size: n as u128,
            cap: MAX_EXACT_ORDER as u128,
        });
    }
    // Product of binomials C(k_0 + ... + k_j, k_j).
    let mut acc = BigUint::from(1u32);
    let mut partial: u64 = 0;
    for &kj in k.entries() {
        partial += kj as u64;
        acc *= binomial(partial, kj as u64).expect("n <= 60 fits in u128");
    }
    Ok(acc)
}

/// `M_n` together with the log multinomial of each index, flat-packed.
#[derive(Clone, Debug)]
pub struct Lattice {
    order: u32,
    dim: usize,
    entries: Vec<u32>,
    log_multinomials: Vec<f64>,
}

impl Lattice {
    pub fn new(n: u32, dim: usize) -> Result<Self> {
        let indices = enumerate_multi_indices(n, dim)?;
        let mut entries = Vec::with_capacity(indices.len() * (dim + 1));
        let mut log_multinomials = Vec::with_capacity(indices.len());
        for k in &indices {
            entries.extend_from_slice(k.entries());
            log_multinomials.push(multinomial_log(k));
        }
        Ok(Lattice {
            order: n,
            dim,
            entries,
            log_multinomials,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.log_multinomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_multinomials.is_empty()
    }

    pub fn index(&self, i: usize) -> &[u32] {
        let w = self.dim + 1;
        &self.entries[i * w..(i + 1) * w]
    }

    pub fn log_multinomial(&self, i: usize) -> f64 {
        self.log_multinomials[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.entries.chunks_exact(self.dim + 1)
    }

    /// Position of `k` in this lattice, if `k` belongs to it.
    pub fn position(&self, k: &MultiIndex) -> Option<usize> {
        (k.dim() == self.dim && k.order() == self.order).then(|| rank(k.entries()))
    }
}

/// The control points `C_n = R(M_n / n)`, paired with their multi-indices.
#[derive(Clone, Debug)]
pub struct ControlPointSet {
    order: u32,
    entries: Vec<(MultiIndex, Point)>,
}

impl ControlPointSet {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(MultiIndex, Point)] {
        &self.entries
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.entries.iter().map(|(_, p)| p)
    }

    pub fn into_points(self) -> Vec<Point> {
        self.entries.into_iter().map(|(_, p)| p).collect()
    }

    /// CSV with columns `k_0..k_D, x_1..x_D`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let dim = self.entries.first().map_or(0, |(k, _)| k.dim());
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (0..=dim)
            .map(|j| format!("k_{j}"))
            .chain((1..=dim).map(|i| format!("x_{i}")))
            .collect();
        w.write_record(&header)?;
        for (k, p) in &self.entries {
            let record: Vec<String> = k
                .entries()
                .iter()
                .map(u32::to_string)
                .chain(p.iter().map(|c| format!("{c:e}")))
                .collect();
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}

/// Lattice points `Σ_j (k_j / n) x_j` for every `k` in `M_n`.
pub fn control_points(simplex: &Simplex, n: u32) -> Result<ControlPointSet> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    check_size(n, simplex.dim())?;
    let entries = MultiIndices::new(n, simplex.dim())
        .map(|k| {
            let t: Vec<f64> = k.entries().iter().map(|&kj| kj as f64 / n as f64).collect();
            let p = simplex.point_from_weights(&t)?;
            Ok((k, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ControlPointSet { order: n, entries })
}
