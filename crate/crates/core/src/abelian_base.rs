//! Quadratic and biquadratic fields over ℚ counted by discriminant, and
//! log-log exponent fits of the counts.

use std::fmt;

use num_integer::Integer;
use num_traits::Float;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::isqrt;

/// Largest bound accepted by the counting jobs.
pub const MAX_COUNT_BOUND: u64 = 10_000_000_000;

const SEGMENT: u64 = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FundamentalDiscriminant(i64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if is_fundamental(d) {
            Ok(FundamentalDiscriminant(d))
        } else {
            Err(Error::InvalidDiscriminant(format!("{d} is not a fundamental discriminant")))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// Order by `|d|`, negative before positive.
    pub fn sort_key(self) -> (u64, bool) {
        (self.0.unsigned_abs(), self.0 > 0)
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_squarefree_u64(n: u64) -> bool {
    crate::numtheory::is_squarefree(n)
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree_u64(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree_u64(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Squarefree flags for `1..=limit` (index 0 unused).
fn squarefree_table(limit: u64) -> Vec<bool> {
    let mut flags = vec![true; limit as usize + 1];
    let mut p = 2u64;
    while p * p <= limit {
        let sq = p * p;
        let mut k = sq;
        while k <= limit {
            flags[k as usize] = false;
            k += sq;
        }
        p += 1;
    }
    flags
}

/// All fundamental discriminants with `|d| ≤ x`, by `|d|`, negative first.
pub fn fundamental_discriminants_up_to(x: u64) -> Vec<FundamentalDiscriminant> {
    if x < 3 {
        return Vec::new();
    }
    let sf = squarefree_table(x);
    let mut out = Vec::new();
    for n in 3..=x {
        for d in [-(n as i64), n as i64] {
            let ok = match d.rem_euclid(4) {
                1 => sf[n as usize],
                0 => matches!((d / 4).rem_euclid(4), 2 | 3) && sf[(n / 4) as usize],
                _ => false,
            };
            if ok {
                out.push(FundamentalDiscriminant(d));
            }
        }
    }
    out
}

/// `(sign, 2-adic valuation, odd part)` of a fundamental discriminant.
fn split(d: i64) -> (i128, u32, i128) {
    let n = d.unsigned_abs();
    let e = n.trailing_zeros();
    (d.signum() as i128, e, (n >> e) as i128)
}

/// Discriminant of the third quadratic subfield of `ℚ(√d₁, √d₂)`.
pub fn third_discriminant(d1: FundamentalDiscriminant, d2: FundamentalDiscriminant) -> Result<FundamentalDiscriminant> {
    if d1 == d2 {
        return Err(Error::InvalidDiscriminant(format!("d1 = d2 = {d1}: compositum is quadratic")));
    }
    let (s1, e1, u1) = split(d1.0);
    let (s2, e2, u2) = split(d2.0);
    let g = u1.gcd(&u2);
    let core = s1 * s2 * (u1 / g) * (u2 / g) * if (e1 + e2) % 2 == 1 { 2 } else { 1 };
    let d3 = if core.rem_euclid(4) == 1 { core } else { 4 * core };
    let d3 = i64::try_from(d3).map_err(|_| Error::InvalidDiscriminant("third discriminant overflows".into()))?;
    FundamentalDiscriminant::new(d3)
}

/// `|d₁ d₂ d₃|`, the discriminant of the biquadratic field.
pub fn biquadratic_discriminant(d1: FundamentalDiscriminant, d2: FundamentalDiscriminant) -> Result<u128> {
    let d3 = third_discriminant(d1, d2)?;
    Ok(d1.0.unsigned_abs() as u128 * d2.0.unsigned_abs() as u128 * d3.0.unsigned_abs() as u128)
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let mut composite = vec![false; n as usize + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p as usize] {
            primes.push(p);
            let mut k = p * p;
            while k <= n {
                composite[k as usize] = true;
                k += p;
            }
        }
    }
    primes
}

/// `Σ weight(n)` over squarefree `n ≤ c` for each checkpoint `c`
/// (checkpoints ascending), by a segmented sieve.
fn squarefree_tallies(checkpoints: &[u64], weight: fn(u64) -> u64, parallel: bool) -> Vec<u64> {
    let limit = checkpoints.last().copied().unwrap_or(0);
    if limit == 0 {
        return vec![0; checkpoints.len()];
    }
    let primes = primes_up_to(isqrt(limit));
    let segment = |lo: u64| -> (u64, Vec<(usize, u64)>) {
        let hi = (lo + SEGMENT).min(limit + 1);
        let mut sf = vec![true; (hi - lo) as usize];
        for &p in &primes {
            let sq = p * p;
            if sq >= hi {
                break;
            }
            let mut k = lo.div_ceil(sq) * sq;
            while k < hi {
                sf[(k - lo) as usize] = false;
                k += sq;
            }
        }
        let first = checkpoints.partition_point(|&c| c < lo);
        let mut partials = Vec::new();
        let mut next = first;
        let mut total = 0u64;
        for n in lo..hi {
            if sf[(n - lo) as usize] {
                total += weight(n);
            }
            while next < checkpoints.len() && checkpoints[next] == n {
                partials.push((next, total));
                next += 1;
            }
        }
        (total, partials)
    };
    let starts: Vec<u64> = (0..limit.div_ceil(SEGMENT) + 1).map(|i| 1 + i * SEGMENT).filter(|&lo| lo <= limit).collect();
    let parts: Vec<(u64, Vec<(usize, u64)>)> =
        if parallel { starts.par_iter().map(|&lo| segment(lo)).collect() } else { starts.iter().map(|&lo| segment(lo)).collect() };
    let mut out = vec![0u64; checkpoints.len()];
    let mut before = 0u64;
    for (total, partials) in parts {
        for (i, partial) in partials {
            out[i] = before + partial;
        }
        before += total;
    }
    out
}

fn odd_weight(n: u64) -> u64 {
    n & 1
}

/// `m = ±k` contributes once for odd `k` and twice for `k ≡ 2 mod 4`.
fn four_m_weight(k: u64) -> u64 {
    if k & 1 == 1 { 1 } else { 2 }
}

/// Number of fundamental discriminants with `|d| ≤ c` for each checkpoint.
pub fn quadratic_counts(checkpoints: &[u64], parallel: bool) -> Vec<u64> {
    // odd squarefree n > 1 gives exactly one of ±n; |d| = 4k gives ±4k by k mod 4
    let odd = squarefree_tallies(checkpoints, odd_weight, parallel);
    let quarter: Vec<u64> = checkpoints.iter().map(|&c| c / 4).collect();
    let even = squarefree_tallies(&quarter, four_m_weight, parallel);
    odd.iter().zip(&even).map(|(&o, &e)| o.saturating_sub(1) + e).collect()
}

/// Number of `V₄` fields containing `ℚ(√d₁)` with discriminant `≤ c`, one per
/// unordered pair `{d₂, d₃}` of the other two quadratic subfields.
pub fn v4_fixed_counts(d1: FundamentalDiscriminant, checkpoints: &[u64]) -> Result<Vec<u64>> {
    let limit = checkpoints.iter().copied().max().unwrap_or(0);
    let a1 = d1.0.unsigned_abs();
    // |d₂| ≤ |d₃| and |d₁ d₂ d₃| ≤ X force |d₂|² ≤ X/|d₁|
    let bound = isqrt(limit / a1);
    let mut discs = Vec::new();
    for d2 in fundamental_discriminants_up_to(bound) {
        if d2 == d1 {
            continue;
        }
        let d3 = third_discriminant(d1, d2)?;
        if d2.sort_key() < d3.sort_key() {
            discs.push(a1 as u128 * d2.0.unsigned_abs() as u128 * d3.0.unsigned_abs() as u128);
        }
    }
    discs.sort_unstable();
    Ok(checkpoints.iter().map(|&c| discs.partition_point(|&d| d <= c as u128) as u64).collect())
}

/// `from, from·10^(1/k), …, to`, rounded and deduplicated.
pub fn geometric_checkpoints(from: u64, to: u64, per_decade: u32) -> Vec<u64> {
    let from = from.max(1);
    let mut out = Vec::new();
    if from > to {
        return out;
    }
    let step = 10f64.powf(1.0 / per_decade.max(1) as f64);
    let mut x = from as f64;
    while (x.round() as u64) < to {
        out.push(x.round() as u64);
        x *= step;
    }
    out.push(to);
    out.dedup();
    out
}

/// Least-squares fit of `log count = c + α log X`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit<F> {
    pub exponent: F,
    pub intercept: F,
    /// Root-mean-square residual in log space.
    pub residual: F,
    /// Nearest fraction with denominator ≤ 12.
    pub rational: String,
    /// Diagnostic `b` from `log count − α̂ log X = c + (b−1) log log X` with
    /// `α̂` the rounded exponent; not asserted.
    pub b_diagnostic: Option<F>,
    pub points: usize,
}

fn line_fit<F: Float>(xs: &[F], ys: &[F]) -> (F, F, F) {
    let n = F::from(xs.len()).unwrap();
    let mx = xs.iter().fold(F::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(F::zero(), |a, &y| a + y) / n;
    let sxy = xs.iter().zip(ys).fold(F::zero(), |a, (&x, &y)| a + (x - mx) * (y - my));
    let sxx = xs.iter().fold(F::zero(), |a, &x| a + (x - mx) * (x - mx));
    let slope = if sxx > F::zero() { sxy / sxx } else { F::zero() };
    let intercept = my - slope * mx;
    let sse = xs.iter().zip(ys).fold(F::zero(), |a, (&x, &y)| {
        let r = y - (intercept + slope * x);
        a + r * r
    });
    (slope, intercept, (sse / n).sqrt())
}

fn nearest_fraction<F: Float>(x: F) -> (i64, i64) {
    let mut best = (0i64, 1i64);
    let mut best_err = F::infinity();
    for q in 1..=12i64 {
        let p = (x * F::from(q).unwrap()).round().to_i64().unwrap_or(0);
        let err = (x - F::from(p).unwrap() / F::from(q).unwrap()).abs();
        if err < best_err {
            best_err = err;
            best = (p, q);
        }
    }
    let g = best.0.gcd(&best.1).max(1);
    (best.0 / g, best.1 / g)
}

pub fn fit_exponent<F: Float>(checkpoints: &[u64], counts: &[u64]) -> Result<ExponentFit<F>> {
    let pts: Vec<(F, F)> = checkpoints
        .iter()
        .zip(counts)
        .filter(|&(&x, &c)| c > 0 && x > 1)
        .map(|(&x, &c)| (F::from(x).unwrap().ln(), F::from(c).unwrap().ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    let (xs, ys): (Vec<F>, Vec<F>) = pts.into_iter().unzip();
    let (exponent, intercept, residual) = line_fit(&xs, &ys);
    let (p, q) = nearest_fraction(exponent);
    let alpha = F::from(p).unwrap() / F::from(q).unwrap();
    let b_diagnostic = if xs.iter().all(|&lx| lx > F::one()) {
        let lls: Vec<F> = xs.iter().map(|&lx| lx.ln()).collect();
        let rest: Vec<F> = xs.iter().zip(&ys).map(|(&lx, &ly)| ly - alpha * lx).collect();
        Some(line_fit(&lls, &rest).0 + F::one())
    } else {
        None
    };
    let rational = if q == 1 { p.to_string() } else { format!("{p}/{q}") };
    Ok(ExponentFit { exponent, intercept, residual, rational, b_diagnostic, points: xs.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountKind {
    Quadratic,
    V4Fixed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountJob {
    pub kind: CountKind,
    pub fixed_d1: Option<FundamentalDiscriminant>,
    pub checkpoints: Vec<u64>,
    pub counts: Vec<u64>,
    pub fit: Option<ExponentFit<f64>>,
}

impl CountJob {
    pub fn run(kind: CountKind, fixed_d1: Option<FundamentalDiscriminant>, checkpoints: Vec<u64>) -> Result<Self> {
        if checkpoints.iter().any(|&x| x > MAX_COUNT_BOUND) {
            return Err(Error::CapExceeded { what: "count bound X", cap: MAX_COUNT_BOUND as usize });
        }
        let mut checkpoints = checkpoints;
        checkpoints.sort_unstable();
        checkpoints.dedup();
        let counts = match (kind, fixed_d1) {
            (CountKind::Quadratic, _) => quadratic_counts(&checkpoints, true),
            (CountKind::V4Fixed, Some(d1)) => v4_fixed_counts(d1, &checkpoints)?,
            (CountKind::V4Fixed, None) => {
                return Err(Error::InvalidDiscriminant("v4-fixed needs a fixed d1".into()))
            }
        };
        Ok(CountJob { kind, fixed_d1, checkpoints, counts, fit: None })
    }

    pub fn with_fit(mut self) -> Result<Self> {
        self.fit = Some(fit_exponent(&self.checkpoints, &self.counts)?);
        Ok(self)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("X,count\n");
        for (x, c) in self.checkpoints.iter().zip(&self.counts) {
            s.push_str(&format!("{x},{c}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    fn values(v: &[FundamentalDiscriminant]) -> Vec<i64> {
        v.iter().map(|d| d.get()).collect()
    }

    #[test]
    fn small_lists() {
        assert_eq!(values(&fundamental_discriminants_up_to(5)), vec![-3, -4, 5]);
        assert_eq!(values(&fundamental_discriminants_up_to(8)), vec![-3, -4, 5, -7, -8, 8]);
        assert!(fundamental_discriminants_up_to(2).is_empty());
        assert!(FundamentalDiscriminant::new(1).is_err());
        assert!(FundamentalDiscriminant::new(12).is_ok());
        assert!(FundamentalDiscriminant::new(-12).is_err());
    }

    #[test]
    fn third_and_biquadratic() {
        assert_eq!(third_discriminant(fd(-4), fd(8)).unwrap(), fd(-8));
        assert_eq!(third_discriminant(fd(5), fd(-3)).unwrap(), fd(-15));
        assert_eq!(third_discriminant(fd(8), fd(-8)).unwrap(), fd(-4));
        assert!(third_discriminant(fd(5), fd(5)).is_err());
        assert_eq!(biquadratic_discriminant(fd(-4), fd(8)).unwrap(), 256);
        assert_eq!(biquadratic_discriminant(fd(5), fd(-3)).unwrap(), 225);
        assert_eq!(biquadratic_discriminant(fd(-3), fd(-4)).unwrap(), 144);
    }

    #[test]
    fn quadratic_counts_match_direct_test() {
        let cps = [1, 2, 3, 4, 5, 8, 100, 1000, 10_000];
        let direct: Vec<u64> = cps
            .iter()
            .map(|&c| (-(c as i64)..=c as i64).filter(|&d| is_fundamental(d)).count() as u64)
            .collect();
        assert_eq!(quadratic_counts(&cps, true), direct);
        assert_eq!(quadratic_counts(&[3], false), vec![1]);
    }

    #[test]
    fn v4_boundaries() {
        assert_eq!(v4_fixed_counts(fd(5), &[224, 225]).unwrap(), vec![0, 1]);
        let c = v4_fixed_counts(fd(-4), &[255, 256]).unwrap();
        assert_eq!(c[1] - c[0], 1);
    }

    #[test]
    fn checkpoints_are_geometric() {
        assert_eq!(geometric_checkpoints(10, 1000, 1), vec![10, 100, 1000]);
        assert_eq!(geometric_checkpoints(1, 1, 4), vec![1]);
        assert!(geometric_checkpoints(5, 4, 2).is_empty());
    }

    #[test]
    fn synthetic_fits() {
        let xs: Vec<u64> = (1..=8).map(|k| 10u64.pow(k)).collect();
        let lin: Vec<u64> = xs.iter().map(|&x| 3 * x).collect();
        let f = fit_exponent::<f64>(&xs, &lin).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-9);
        assert_eq!(f.rational, "1");
        let xs: Vec<u64> = (1..=8).map(|k| 100u64.pow(k)).collect();
        let root: Vec<u64> = xs.iter().map(|&x| isqrt(x)).collect();
        let f = fit_exponent::<f64>(&xs, &root).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-9);
        assert_eq!(f.rational, "1/2");
        assert!(matches!(fit_exponent::<f64>(&[10, 100], &[1, 2]), Err(Error::TooFewPoints(2))));
    }

    #[test]
    fn job_rejects_huge_bounds() {
        let e = CountJob::run(CountKind::Quadratic, None, vec![MAX_COUNT_BOUND + 1]).unwrap_err();
        assert!(e.is_cap());
        let job = CountJob::run(CountKind::V4Fixed, Some(fd(5)), vec![225, 224]).unwrap();
        assert_eq!(job.to_csv(), "X,count\n224,0\n225,1\n");
    }
}
