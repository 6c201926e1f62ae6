//! Exact moments of the randomly weighted average `S_n`.
//!
//! Three independent routes, all in exact rational arithmetic:
//!
//! * [`rwa_moment_closed`]: the closed form
//!   `E(S_n^{2k}) = (1/2)_k / ((n + 1)/2)_k` (unit scale), cross-checked
//!   against the intermediate form
//!   `(2k)! (n-1)! / ((2k+n-1)! k!) · (n/2)_k`.
//! * [`rwa_moment_oracle`]: the multinomial expansion of `(Σ R_i X_i)^r`
//!   summed term by term over every composition of `r`, using the
//!   Dirichlet(1, …, 1) joint moments of the weights and the arcsine moments
//!   of the summands.
//! * [`lemma_lhs`] / [`lemma_rhs`]: the multinomial–Dirichlet identity
//!   `Σ_c multinomial(r, c) ∏ (a_j)_{i_j} = (Σ a_j)_r`, which carries the
//!   reduction from the composition sum to the closed form.
//!
//! Here `(q)_m` is the rising factorial `Γ(q + m) / Γ(q)`. Every value is a
//! coefficient at `a = 1`; the moment of order `r` at half-width `a` is the
//! coefficient times `a^r`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::distributions::arcsine_moment;
use crate::error::{Error, Result};
use crate::exact::{
    binomial, compositions, factorial, multinomial_unchecked, rising_gamma_ratio, ExactValue,
    HalfInteger, Rational,
};
use crate::rwa::{rwa_batch, RwaSpec};

fn uint(x: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Order `r` of a moment; `k = r / 2` when `r` is even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MomentOrder {
    pub r: u32,
}

impl MomentOrder {
    pub fn even(k: u32) -> Self {
        MomentOrder { r: 2 * k }
    }

    pub fn k(&self) -> Option<u32> {
        self.r.is_multiple_of(2).then_some(self.r / 2)
    }
}

/// Parameters `(a_1, …, a_n)` of a Dirichlet law, each at least 1/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletParams {
    params: Vec<HalfInteger>,
}

impl DirichletParams {
    pub fn new(params: Vec<HalfInteger>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::Parameter(
                "Dirichlet parameter list must be non-empty".into(),
            ));
        }
        Ok(DirichletParams { params })
    }

    pub fn params(&self) -> &[HalfInteger] {
        &self.params
    }

    pub fn total(&self) -> HalfInteger {
        self.params
            .iter()
            .copied()
            .reduce(|x, y| x + y)
            .expect("non-empty")
    }
}

/// `Σ_{i_1+⋯+i_n=r} multinomial(r; i) ∏_j (a_j)_{i_j}`, by enumeration.
pub fn lemma_lhs(d: &DirichletParams, r: u32) -> Rational {
    let params = d.params();
    // rising[j][m] = (a_j)_m, m = 0..=r
    let rising: Vec<Vec<Rational>> = params
        .iter()
        .map(|&q| {
            let mut row = Vec::with_capacity(r as usize + 1);
            let mut acc = Rational::one();
            row.push(acc.clone());
            for m in 0..r as u64 {
                acc *= q.add_integer(m).to_rational();
                row.push(acc.clone());
            }
            row
        })
        .collect();

    let mut total = Rational::zero();
    let mut stream = compositions(r, params.len());
    while let Some(parts) = stream.advance() {
        let mut term = uint(multinomial_unchecked(r, parts));
        for (row, &i) in rising.iter().zip(parts) {
            term *= &row[i as usize];
        }
        total += term;
    }
    total
}

/// `Γ(Σ a_j + r) / Γ(Σ a_j) = (Σ a_j)_r`.
pub fn lemma_rhs(d: &DirichletParams, r: u32) -> Rational {
    rising_gamma_ratio(d.total(), r as u64)
}

/// Result of checking the identity at one order.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub r: u32,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl LemmaRow {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn lemma_check(d: &DirichletParams, r_max: u32) -> Vec<LemmaRow> {
    (0..=r_max)
        .map(|r| LemmaRow {
            r,
            lhs: lemma_lhs(d, r),
            rhs: lemma_rhs(d, r),
        })
        .collect()
}

/// `E(S_n^{2k}) = (1/2)_k / ((n + 1)/2)_k` at unit scale.
///
/// Also evaluates the intermediate form
/// `(2k)! (n-1)! / ((2k+n-1)! k!) · (n/2)_k` and panics if the two disagree.
///
/// ```
/// use rwa_core::moments::rwa_moment_closed;
/// use rwa_core::exact::Rational;
/// assert_eq!(rwa_moment_closed(3, 2), Rational::new(1.into(), 8.into()));
/// ```
pub fn rwa_moment_closed(n: u32, k: u32) -> Rational {
    assert!(n >= 2, "n must be at least 2");
    let value = rwa_moment_closed_final(n, k);
    let intermediate = rwa_moment_closed_intermediate(n, k);
    assert_eq!(
        value, intermediate,
        "closed forms disagree at n = {n}, k = {k}"
    );
    value
}

/// `(1/2)_k / ((n + 1)/2)_k`.
pub fn rwa_moment_closed_final(n: u32, k: u32) -> Rational {
    let n_plus_one_half = HalfInteger::from_twice(n as u64 + 1).expect("n >= 1");
    rising_gamma_ratio(HalfInteger::HALF, k as u64) / rising_gamma_ratio(n_plus_one_half, k as u64)
}

/// `(2k)! (n-1)! / ((2k+n-1)! k!) · (n/2)_k`.
pub fn rwa_moment_closed_intermediate(n: u32, k: u32) -> Rational {
    let (n, k) = (n as u64, k as u64);
    let front =
        uint(factorial(2 * k) * factorial(n - 1)) / uint(factorial(2 * k + n - 1) * factorial(k));
    let half_n = HalfInteger::from_twice(n).expect("n >= 1");
    front * rising_gamma_ratio(half_n, k)
}

/// How the oracle treats compositions that contain an odd part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParityMode {
    /// Skip them before evaluating any factor; they are zero.
    #[default]
    Skip,
    /// Evaluate the multinomial and Dirichlet factors for every composition
    /// and multiply by the parity factor `∏ (1 + (-1)^{i_j}) / 2`. The
    /// arcsine factor of an odd part is irrational and is only reached when
    /// the parity factor is non-zero.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub parity: ParityMode,
    /// Split the sum by the value of the first part across worker threads.
    pub parallel: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            parity: ParityMode::Skip,
            parallel: true,
        }
    }
}

/// Number of compositions the oracle enumerates at `(n, r)`.
pub fn oracle_term_count(n: u32, r: u32) -> BigUint {
    binomial(r as u64 + n as u64 - 1, n as u64 - 1)
}

/// `E(S_n^r)` at unit scale by direct expansion:
///
/// ```text
/// Σ_{i_1+⋯+i_n=r} r!/(i_1!⋯i_n!) · E(R_1^{i_1}⋯R_n^{i_n}) · E(X^{i_1})⋯E(X^{i_n})
/// ```
///
/// with `E(R_1^{i_1}⋯R_n^{i_n}) = (n-1)! ∏ i_j! / (r+n-1)!` for uniform
/// spacings and `E(X^i)` from [`arcsine_moment`].
pub fn rwa_moment_oracle(n: u32, r: u32) -> Rational {
    rwa_moment_oracle_with(n, r, OracleOptions::default())
}

pub fn rwa_moment_oracle_with(n: u32, r: u32, options: OracleOptions) -> Rational {
    assert!(n >= 2, "n must be at least 2");
    let tables = OracleTables::new(n, r);
    let partial = |first: u32| tables.partial_sum(first, options.parity);
    if options.parallel {
        (0..=r)
            .into_par_iter()
            .map(partial)
            .reduce(Rational::zero, |x, y| x + y)
    } else {
        (0..=r).map(partial).fold(Rational::zero(), |x, y| x + y)
    }
}

struct OracleTables {
    n: u32,
    r: u32,
    factorials: Vec<Rational>,
    arcsine: Vec<Rational>,
    dirichlet_front: Rational,
}

impl OracleTables {
    fn new(n: u32, r: u32) -> Self {
        let factorials = (0..=r as u64).map(|i| uint(factorial(i))).collect();
        let arcsine = (0..=r).map(arcsine_moment).collect();
        let dirichlet_front =
            uint(factorial(n as u64 - 1)) / uint(factorial(r as u64 + n as u64 - 1));
        OracleTables {
            n,
            r,
            factorials,
            arcsine,
            dirichlet_front,
        }
    }

    /// `E(R_1^{i_1}⋯R_n^{i_n})` for Dirichlet(1, …, 1).
    fn dirichlet_moment(&self, parts: &[u32]) -> Rational {
        parts.iter().fold(self.dirichlet_front.clone(), |acc, &i| {
            acc * &self.factorials[i as usize]
        })
    }

    /// Sum over the compositions whose first part equals `first`.
    fn partial_sum(&self, first: u32, parity: ParityMode) -> Rational {
        let mut total = Rational::zero();
        if parity == ParityMode::Skip && first % 2 == 1 {
            return total;
        }
        let mut full = vec![0u32; self.n as usize];
        full[0] = first;
        let mut tail = compositions(self.r - first, self.n as usize - 1);
        while let Some(rest) = tail.advance() {
            if parity == ParityMode::Skip && rest.iter().any(|i| i % 2 == 1) {
                continue;
            }
            full[1..].copy_from_slice(rest);
            total += self.term(&full, parity);
        }
        total
    }

    fn term(&self, parts: &[u32], parity: ParityMode) -> Rational {
        let weight = uint(multinomial_unchecked(self.r, parts)) * self.dirichlet_moment(parts);
        if parity == ParityMode::Literal {
            let sign = |i: u32| if i.is_multiple_of(2) { 1 } else { -1 };
            let parity_factor = parts.iter().fold(Rational::one(), |acc, &i| {
                acc * Rational::new(BigInt::from(1 + sign(i)), BigInt::from(2))
            });
            if parity_factor.is_zero() {
                return parity_factor;
            }
            return parts.iter().fold(weight * parity_factor, |acc, &i| {
                acc * &self.arcsine[i as usize]
            });
        }
        parts
            .iter()
            .fold(weight, |acc, &i| acc * &self.arcsine[i as usize])
    }
}

/// `E(R_1^{i_1}⋯R_n^{i_n})` for the uniform-spacings weights, `n = parts.len()`.
pub fn dirichlet_joint_moment(parts: &[u32]) -> Rational {
    assert!(!parts.is_empty());
    let n = parts.len() as u64;
    let r: u64 = parts.iter().map(|&i| i as u64).sum();
    let numer = parts
        .iter()
        .fold(factorial(n - 1), |acc, &i| acc * factorial(i as u64));
    uint(numer) / uint(factorial(r + n - 1))
}

/// `E(X^{2k}) = (1/2)_k / (λ + 1)_k` for PowerSemicircle(λ, 1), with
/// `λ = twice_lambda / 2`.
///
/// ```
/// use rwa_core::moments::psc_moment;
/// use rwa_core::exact::Rational;
/// // Wigner semicircle: Catalan(3) / 4^3
/// assert_eq!(psc_moment(2, 3), Rational::new(5.into(), 64.into()));
/// ```
pub fn psc_moment(twice_lambda: u64, k: u32) -> Rational {
    let lambda_plus_one = HalfInteger::from_twice(twice_lambda + 2).expect("positive");
    rising_gamma_ratio(HalfInteger::HALF, k as u64) / rising_gamma_ratio(lambda_plus_one, k as u64)
}

/// Unit-scale moment of any order: zero for odd `r`.
pub fn rwa_moment_closed_any(n: u32, r: u32) -> Rational {
    if r % 2 == 1 {
        Rational::zero()
    } else {
        rwa_moment_closed(n, r / 2)
    }
}

/// Leading principal minors of the Hankel matrix `[m_{i+j}]`,
/// `0 ≤ i, j < size`, computed by exact Gaussian elimination.
///
/// `moments` must hold at least `2 size - 1` entries.
pub fn hankel_leading_minors(moments: &[Rational], size: usize) -> Vec<Rational> {
    assert!(moments.len() >= 2 * size - 1, "not enough moments");
    (1..=size)
        .map(|d| {
            let m: Vec<Vec<Rational>> = (0..d)
                .map(|i| (0..d).map(|j| moments[i + j].clone()).collect())
                .collect();
            determinant(m)
        })
        .collect()
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let d = m.len();
    let mut det = Rational::one();
    for col in 0..d {
        let Some(pivot) = (col..d).find(|&row| !m[row][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &p;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// Sample moment of order `2k` and its standard error
/// `√((m̂_{4k} - m̂_{2k}²) / N)`.
pub fn empirical_even_moment(values: &[f64], k: u32) -> (f64, f64) {
    let n = values.len() as f64;
    let (mut s2, mut s4) = (0.0, 0.0);
    for &v in values {
        let p = v.powi(2 * k as i32);
        s2 += p;
        s4 += p * p;
    }
    let m2 = s2 / n;
    let m4 = s4 / n;
    let var = (m4 - m2 * m2).max(0.0);
    (m2, (var / n).sqrt())
}

/// Exact and (optionally) empirical moment of order `2k` for one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub spec: RwaSpec,
    pub order: MomentOrder,
    /// Unit-scale closed form.
    pub closed_form: Rational,
    /// Unit-scale composition-sum value.
    pub oracle: Rational,
    pub empirical: Option<f64>,
    pub std_error: Option<f64>,
}

impl MomentReport {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.oracle
    }

    /// Closed-form value at the spec's half-width.
    pub fn exact_at_scale(&self) -> f64 {
        crate::exact::rational_to_f64(&self.closed_form) * self.spec.a.powi(self.order.r as i32)
    }

    /// `|empirical - exact| ≤ bands · std_error`; `None` without MC data.
    pub fn within_band(&self, bands: f64) -> Option<bool> {
        let (emp, se) = (self.empirical?, self.std_error?);
        Some((emp - self.exact_at_scale()).abs() <= bands * se)
    }

    pub fn with_empirical(mut self, values: &[f64]) -> Self {
        let k = self.order.k().expect("even order");
        let (m, se) = empirical_even_moment(values, k);
        self.empirical = Some(m);
        self.std_error = Some(se);
        self
    }
}

#[derive(Serialize)]
struct MomentReportJson<'a> {
    spec: &'a RwaSpec,
    order: MomentOrder,
    k: Option<u32>,
    closed_form: ExactValue,
    oracle: ExactValue,
    equal: bool,
    exact_at_scale: f64,
    empirical: Option<f64>,
    std_error: Option<f64>,
}

impl Serialize for MomentReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MomentReportJson {
            spec: &self.spec,
            order: self.order,
            k: self.order.k(),
            closed_form: ExactValue::from(&self.closed_form),
            oracle: ExactValue::from(&self.oracle),
            equal: self.agrees(),
            exact_at_scale: self.exact_at_scale(),
            empirical: self.empirical,
            std_error: self.std_error,
        }
        .serialize(serializer)
    }
}

/// Monte Carlo settings for [`moment_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub count: usize,
    pub seed: u64,
}

/// Closed form and oracle at order `2k`, plus an empirical estimate from a
/// fresh batch when `mc` is given.
pub fn moment_report(spec: &RwaSpec, k: u32, mc: Option<MonteCarlo>) -> Result<MomentReport> {
    let spec = RwaSpec::new(spec.n, spec.a)?;
    let report = MomentReport {
        spec,
        order: MomentOrder::even(k),
        closed_form: rwa_moment_closed(spec.n, k),
        oracle: rwa_moment_oracle(spec.n, 2 * k),
        empirical: None,
        std_error: None,
    };
    match mc {
        None => Ok(report),
        Some(mc) => {
            let batch = rwa_batch(&spec, mc.count, mc.seed)?;
            Ok(report.with_empirical(&batch.values))
        }
    }
}

/// True when every entry is non-negative.
pub fn all_non_negative(xs: &[Rational]) -> bool {
    xs.iter().all(|x| !x.is_negative())
}
