//! Numerical periods: polylogarithms, regularized iterated integrals over the
//! ordered simplex 0 ≤ t₁ ≤ … ≤ t_m ≤ 1, and the necklace period.
//!
//! A word is an ordered list of one-forms ω₁, …, ω_m and its integral is
//! ∫_Δ ω₁ ∧ … ∧ ω_m = ∫_Δ det(J) dt₁…dt_m with J_{kj} the dt_j-coefficient of
//! ω_k. For a cycle coordinate σ = c·∏ t_j^{e_j},
//!
//!   dlog(1 − 1/σ) = Σ_j e_j/(t_j(σ − 1)) dt_j.
//!
//! Regularization. The only divergence the necklace words produce is a
//! simple pole in the innermost variable at t₁ = 0. With R = lim t₁·det J,
//!
//!   reg ∫₀^{t₂} det J dt₁ = ∫₀^{t₂} (det J − R/t₁) dt₁ + R·log t₂,
//!
//! i.e. reg ∫₀^t ds/s = log t (tangential base point, Li₁(1) := 0). This is
//! the shuffle regularization: for the word (ds/s, dt/(t − b)) it turns
//! (∫₀¹ds/s)(∫₀¹dt/(t−b)) = ∫∫(ds/s)(dt/(t−b)) + ∫∫(dt/(t−b))(ds/s) with a
//! zero left side into Li₂(1/b), which integration by parts confirms:
//! ∫₀¹ log t/(t − b) dt = Σ_k b^{−k−1}/(k+1)² = Li₂(1/b).
//!
//! Quadrature is nested tanh-sinh with level doubling; the error estimate is
//! the difference of the last two levels plus the propagated inner error.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::augmented::{chi_summands, lambda_summands, XiSummand};
use crate::labels::{Monomial, Symbol, SymbolKind};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Series,
    Quadrature,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericResult {
    pub value: f64,
    #[serde(rename = "error")]
    pub error_estimate: f64,
    pub method: Method,
}

// ---------------------------------------------------------------------------
// polylogarithms

const TAIL: f64 = 1e-12;

/// Bernoulli numbers B₂ … B₁₂ for the Euler–Maclaurin tail of ζ.
const BERNOULLI: [f64; 6] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0];

/// ζ(s) for integer s ≥ 2 (Euler–Maclaurin with N = 16).
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2);
    let s_f = s as f64;
    let n = 16.0f64;
    let head: f64 = (1..16).map(|k| (k as f64).powf(-s_f)).sum();
    let mut tail = n.powf(1.0 - s_f) / (s_f - 1.0) + 0.5 * n.powf(-s_f);
    // rising factorial s(s+1)…(s+2j−2) / (2j)!
    let mut rising = s_f;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let two_j = 2.0 * (j as f64 + 1.0);
        tail += b / fact * rising * n.powf(-s_f - two_j + 1.0);
        rising *= (s_f + two_j - 1.0) * (s_f + two_j);
        fact *= (two_j + 1.0) * (two_j + 2.0);
    }
    head + tail
}

/// ζ at 1 − k for k ≥ 1 (k = 1 gives ζ(0) = −1/2), through the Bernoulli
/// numbers B_{2j} = (−1)^{j+1} 2 (2j)! ζ(2j)/(2π)^{2j}.
fn zeta_nonpositive(k: u32) -> f64 {
    if k == 1 {
        return -0.5;
    }
    if k % 2 == 1 {
        return 0.0;
    }
    let j = k / 2;
    let mut b = 2.0 * zeta(k) / (2.0 * PI).powi(k as i32);
    for i in 1..=k {
        b *= i as f64;
    }
    if j.is_multiple_of(2) {
        b = -b;
    }
    -b / k as f64
}

fn li_series(s: u32, x: f64) -> NumericResult {
    let mut sum = 0.0;
    let mut pow = 1.0;
    let mut k = 1u64;
    loop {
        pow *= x;
        sum += pow / (k as f64).powi(s as i32);
        // |Σ_{j>k} x^j/j^s| ≤ |x|^{k+1} / ((k+1)^s (1 − |x|))
        let bound = (pow * x).abs() / ((k + 1) as f64).powi(s as i32) / (1.0 - x.abs());
        if bound <= TAIL * 1e-3 || pow == 0.0 {
            return NumericResult { value: sum, error_estimate: bound, method: Method::Series };
        }
        k += 1;
    }
}

/// Expansion around x = 1 in μ = ln x, valid for |μ| < 2π:
/// Li_s(e^μ) = μ^{s−1}/(s−1)! (H_{s−1} − ln(−μ)) + Σ_{k ≠ s−1} ζ(s−k) μ^k/k!.
fn li_near_one(s: u32, x: f64) -> NumericResult {
    let mu = x.ln();
    let harmonic: f64 = (1..s).map(|j| 1.0 / j as f64).sum();
    let mut fact = 1.0;
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    for k in 0..80u32 {
        if k > 0 {
            fact *= k as f64;
        }
        let term = if k + 1 == s {
            mu.powi(k as i32) / fact * (harmonic - (-mu).ln())
        } else if k + 1 < s {
            zeta(s - k) * mu.powi(k as i32) / fact
        } else {
            zeta_nonpositive(k + 1 - s) * mu.powi(k as i32) / fact
        };
        sum += term;
        if k + 1 > s && term != 0.0 {
            last = term.abs();
            if last < TAIL * 1e-4 {
                break;
            }
        }
    }
    NumericResult { value: sum, error_estimate: last, method: Method::Series }
}

/// Li_s(x) = Σ_{k≥1} x^k/k^s for real |x| ≤ 1 (x ≠ 1 when s = 1).
pub fn polylog(s: u32, x: f64) -> Result<NumericResult, Error> {
    if s == 0 || !x.is_finite() || x.abs() > 1.0 || (s == 1 && x == 1.0) {
        return Err(Error::DomainError(format!("Li_{s}({x}) is outside |x| ≤ 1, s ≥ 1 (x ≠ 1 for s = 1)")));
    }
    let exact = |v: f64| NumericResult { value: v, error_estimate: 1e-15 * v.abs().max(1.0), method: Method::Series };
    Ok(if x == 0.0 {
        exact(0.0)
    } else if x == 1.0 {
        exact(zeta(s))
    } else if x == -1.0 {
        exact(if s == 1 { -(2f64.ln()) } else { -(1.0 - 2f64.powi(1 - s as i32)) * zeta(s) })
    } else if x.abs() <= 0.75 {
        li_series(s, x)
    } else if x > 0.0 {
        li_near_one(s, x)
    } else {
        // Li_s(x) = 2^{1−s} Li_s(x²) − Li_s(−x)
        let sq = li_near_one(s, x * x);
        let neg = li_near_one(s, -x);
        NumericResult {
            value: 2f64.powi(1 - s as i32) * sq.value - neg.value,
            error_estimate: sq.error_estimate + neg.error_estimate,
            method: Method::Series,
        }
    })
}

fn li(s: u32, x: f64) -> f64 {
    polylog(s, x).map(|r| r.value).unwrap_or(f64::NAN)
}

// ---------------------------------------------------------------------------
// words

/// A one-form on the simplex with coordinates t₁ … t_m.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum OneForm {
    /// dlog(1 − 1/σ) for a cycle coordinate σ.
    Cycle { sigma: Monomial },
    /// dt_k/(t_k − b); b = 0 is dt/t.
    Pole { coord: usize, at: f64 },
}

impl OneForm {
    pub fn dlog(coord: usize) -> OneForm {
        OneForm::Pole { coord, at: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IteratedWord {
    pub forms: Vec<OneForm>,
    /// Apply the log-insertion rule to a pole at t₁ = 0. Without it such a
    /// word is reported as non-convergent.
    pub regularize: bool,
}

impl IteratedWord {
    pub fn new(forms: Vec<OneForm>) -> Self {
        IteratedWord { forms, regularize: true }
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    /// The word of a product of single loops with the given coordinates.
    pub fn from_loops(loops: &[Monomial]) -> Self {
        IteratedWord::new(loops.iter().map(|s| OneForm::Cycle { sigma: s.clone() }).collect())
    }
}

/// Row k of J, compiled against numeric labels.
#[derive(Clone, Debug)]
enum Row {
    Cycle { c: f64, e: Vec<i32> },
    Pole { coord: usize, at: f64 },
}

fn compile(word: &IteratedWord, assignment: &BTreeMap<Symbol, f64>) -> Result<Vec<Row>, Error> {
    let m = word.dim();
    word.forms
        .iter()
        .map(|f| match f {
            OneForm::Cycle { sigma } => {
                let mut e = vec![0i32; m];
                let mut c = crate::labels::ratio_to_f64(sigma.coeff());
                for (s, &k) in sigma.exps() {
                    match s.simplex_index() {
                        Some(j) if (1..=m).contains(&j) => e[j - 1] = k as i32,
                        Some(j) => {
                            return Err(Error::DomainError(format!("coordinate t{j} outside the {m}-simplex")))
                        }
                        None => {
                            let v = *assignment.get(s).ok_or_else(|| Error::MissingAssignment(s.to_string()))?;
                            c *= v.powi(k as i32);
                        }
                    }
                }
                Ok(Row::Cycle { c, e })
            }
            OneForm::Pole { coord, at } if (1..=m).contains(coord) => Ok(Row::Pole { coord: coord - 1, at: *at }),
            OneForm::Pole { coord, .. } => Err(Error::DomainError(format!("coordinate t{coord} outside the {m}-simplex"))),
        })
        .collect()
}

fn det(mut a: Vec<f64>, n: usize) -> f64 {
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i * n + c].abs().total_cmp(&a[j * n + c].abs())).unwrap();
        if a[p * n + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for k in 0..n {
                a.swap(p * n + k, c * n + k);
            }
            d = -d;
        }
        let piv = a[c * n + c];
        d *= piv;
        for r in c + 1..n {
            let f = a[r * n + c] / piv;
            for k in c..n {
                a[r * n + k] -= f * a[c * n + k];
            }
        }
    }
    d
}

/// A signed combination of compiled words of one dimension.
struct Integrand {
    m: usize,
    terms: Vec<(f64, Vec<Row>)>,
}

impl Integrand {
    /// t₁·det J at the point t (column 1 scaled exactly).
    fn scaled(&self, t: &[f64]) -> f64 {
        let m = self.m;
        self.terms
            .iter()
            .map(|(w, rows)| {
                let mut a = vec![0.0; m * m];
                for (k, row) in rows.iter().enumerate() {
                    match row {
                        Row::Cycle { c, e } => {
                            let sigma = c * e.iter().zip(t).map(|(&ej, &tj)| tj.powi(ej)).product::<f64>();
                            for j in 0..m {
                                if e[j] != 0 {
                                    let tj = if j == 0 { 1.0 } else { t[j] };
                                    a[k * m + j] = e[j] as f64 / (tj * (sigma - 1.0));
                                }
                            }
                        }
                        Row::Pole { coord, at } => {
                            let scale = if *coord == 0 { t[0] } else { 1.0 };
                            a[k * m + coord] = scale / (t[*coord] - at);
                        }
                    }
                }
                w * det(a, m)
            })
            .sum()
    }

    /// R = lim_{t₁→0} t₁·det J, as a function of t₂ … t_m.
    fn residue(&self, t: &[f64]) -> f64 {
        let m = self.m;
        self.terms
            .iter()
            .map(|(w, rows)| {
                let mut a = vec![0.0; m * m];
                for (k, row) in rows.iter().enumerate() {
                    match row {
                        Row::Cycle { c, e } => {
                            if e[0] > 0 {
                                a[k * m] = -(e[0] as f64);
                                for j in 1..m {
                                    a[k * m + j] = -(e[j] as f64) / t[j];
                                }
                            } else if e[0] == 0 {
                                let sigma = c * e.iter().zip(t).skip(1).map(|(&ej, &tj)| tj.powi(ej)).product::<f64>();
                                for j in 1..m {
                                    a[k * m + j] = e[j] as f64 / (t[j] * (sigma - 1.0));
                                }
                            }
                        }
                        Row::Pole { coord, at } => {
                            if *coord == 0 {
                                a[k * m] = if *at == 0.0 { 1.0 } else { 0.0 };
                            } else {
                                a[k * m + coord] = 1.0 / (t[*coord] - at);
                            }
                        }
                    }
                }
                w * det(a, m)
            })
            .sum()
    }
}

const T_MAX: f64 = 4.0;
const MAX_LEVEL: u32 = 8;

/// ∫_a^b f by tanh-sinh; f receives (x, distance to a) and returns a value
/// with its own error. Convergence is relative to max(|I|, ∫|f|, floor).
fn tanh_sinh<F>(mut f: F, a: f64, b: f64, tol: f64, floor: f64) -> Result<(f64, f64), Error>
where
    F: FnMut(f64, f64) -> Result<(f64, f64), Error>,
{
    let len = b - a;
    if len == 0.0 {
        return Ok((0.0, 0.0));
    }
    let half_pi = PI / 2.0;
    // (w f, |w f|, w e) at the node t
    let mut eval = |t: f64| -> Result<(f64, f64, f64), Error> {
        let u = half_pi * t.sinh();
        let w = half_pi * t.cosh() * len * 2.0 / (u.exp() + (-u).exp()).powi(2);
        // distance of the node from a, without cancellation
        let d = len / (1.0 + (2.0 * u).exp());
        let (v, e) = f(a + d, d)?;
        Ok((w * v, (w * v).abs(), w * e))
    };
    let (mut sum, mut l1, mut inner_err) = eval(0.0)?;
    let mut add = |t: f64, sum: &mut f64, l1: &mut f64, err: &mut f64| -> Result<(), Error> {
        for x in [t, -t] {
            let (v, va, e) = eval(x)?;
            *sum += v;
            *l1 += va;
            *err += e;
        }
        Ok(())
    };
    for k in 1..=(T_MAX as i32) {
        add(k as f64, &mut sum, &mut l1, &mut inner_err)?;
    }
    let mut h = 1.0;
    let mut prev = sum * h;
    let mut diff = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h /= 2.0;
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            add(k as f64 * h, &mut sum, &mut l1, &mut inner_err)?;
            k += 2;
        }
        let cur = sum * h;
        if !cur.is_finite() {
            return Err(Error::NonConvergent(format!("non-finite quadrature sum on [{a}, {b}]")));
        }
        diff = (cur - prev).abs();
        if level >= 3 && diff <= tol * cur.abs().max(l1 * h).max(floor) {
            return Ok((cur, diff + inner_err * h));
        }
        prev = cur;
    }
    Err(Error::ToleranceNotMet(diff))
}

fn integrate_nested(f: &Integrand, regularize: bool, tol: f64) -> Result<NumericResult, Error> {
    let m = f.m;
    if m == 0 {
        let v: f64 = f.terms.iter().map(|(w, _)| w).sum();
        return Ok(NumericResult { value: v, error_estimate: 0.0, method: Method::Quadrature });
    }
    let mut t = vec![0.0; m];
    // the innermost level integrates over t₁ ∈ [0, t₂]; level k over t_k ∈ [0, t_{k+1}]
    fn level(f: &Integrand, k: usize, upper: f64, t: &mut [f64], regularize: bool, tol: f64) -> Result<(f64, f64), Error> {
        if k == 0 {
            let residue = f.residue(t);
            if residue != 0.0 && !regularize {
                return Err(Error::NonConvergent("pole at t1 = 0 without regularization".into()));
            }
            let (v, e) = tanh_sinh(
                |x, d| {
                    let mut p = t.to_vec();
                    p[0] = d.max(f64::MIN_POSITIVE);
                    let _ = x;
                    Ok(((f.scaled(&p) - residue) / p[0], 0.0))
                },
                0.0,
                upper,
                tol,
                // the subtraction loses about eps·|R| per node
                residue.abs(),
            )?;
            return Ok((v + residue * upper.ln(), e));
        }
        tanh_sinh(
            |_, d| {
                let mut p = t.to_vec();
                p[k] = d.max(f64::MIN_POSITIVE);
                let r = level(f, k - 1, p[k], &mut p, regularize, tol)?;
                Ok(r)
            },
            0.0,
            upper,
            tol,
            0.0,
        )
    }
    let (value, error) = level(f, m - 1, 1.0, &mut t, regularize, tol)?;
    Ok(NumericResult { value, error_estimate: error, method: Method::Quadrature })
}

/// Default relative tolerance of the outermost level.
pub const DEFAULT_TOL: f64 = 1e-11;

/// ∫_Δ of Σ_i w_i·word_i, all words of one dimension.
pub fn integrate_combination(
    words: &[(f64, IteratedWord)],
    assignment: &BTreeMap<Symbol, f64>,
    tol: f64,
) -> Result<NumericResult, Error> {
    let m = words.first().map_or(0, |(_, w)| w.dim());
    if words.iter().any(|(_, w)| w.dim() != m) {
        return Err(Error::DomainError("words of different simplex dimension".into()));
    }
    let regularize = words.iter().all(|(_, w)| w.regularize);
    let terms = words.iter().map(|(c, w)| Ok((*c, compile(w, assignment)?))).collect::<Result<_, Error>>()?;
    integrate_nested(&Integrand { m, terms }, regularize, tol)
}

/// ℐ of one word: ∫ over the ordered simplex of ω₁ ∧ … ∧ ω_m.
pub fn iterated_integral(word: &IteratedWord, assignment: &BTreeMap<Symbol, f64>) -> Result<NumericResult, Error> {
    integrate_combination(&[(1.0, word.clone())], assignment, DEFAULT_TOL)
}

// ---------------------------------------------------------------------------
// necklace period

/// The two words of ε⁰(top)·∏G₀(loops): ε⁰(x) = G₀(x) − G₀(1/x).
fn summand_words(s: &XiSummand) -> Vec<(f64, IteratedWord)> {
    [(1.0, s.top.clone()), (-1.0, s.top.inv())]
        .into_iter()
        .map(|(w, top)| {
            let mut loops = vec![top];
            loops.extend(s.loops.iter().cloned());
            (w, IteratedWord::from_loops(&loops))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SummandValue {
    /// "lambda" or "chi".
    pub family: &'static str,
    /// Indices whose a_j multiply a₀ in the top label (J resp. I).
    pub set: Vec<usize>,
    pub sign: i64,
    /// ℐ of the unsigned summand.
    pub value: f64,
    pub error: f64,
    /// ∏_{i≥2} Li₁(1/a_i) · Li₂(1/a₁); 0 for n = 0.
    #[serde(rename = "closedForm")]
    pub closed_form: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    pub n: usize,
    pub labels: Vec<f64>,
    /// ℐ(λⁿₙ) − ℐ(χⁿₙ), the part of bold-ξⁿ on which ℐ is defined.
    pub value: f64,
    pub error: f64,
    pub lambda: f64,
    pub chi: f64,
    pub summands: Vec<SummandValue>,
}

/// Product closed form for the word integrals of λⁿₙ and χⁿₙ.
pub fn summand_closed_form(a: &[f64]) -> f64 {
    let n = a.len() - 1;
    if n == 0 {
        return 0.0;
    }
    a[2..].iter().map(|x| li(1, 1.0 / x)).product::<f64>() * li(2, 1.0 / a[1])
}

/// Which a_j enter the top label of a summand (relative to a₀).
fn top_set(s: &XiSummand, n: usize) -> Vec<usize> {
    (1..=n).filter(|j| s.top.exp_of(&Symbol::new(format!("a{j}"))) > 0).collect()
}

pub fn necklace_period_with(labels: &[f64], tol: f64) -> Result<PeriodReport, Error> {
    let n = labels.len().checked_sub(1).ok_or_else(|| Error::DomainError("need a₀".into()))?;
    if n > 2 {
        return Err(Error::DomainError(format!("necklace period is implemented for n ≤ 2, got {n}")));
    }
    if labels.iter().any(|&x| x <= 1.0 || !x.is_finite()) {
        return Err(Error::DomainError("labels must be real and > 1".into()));
    }
    let names: Vec<Symbol> = (0..=n).map(|i| Symbol::new(format!("a{i}"))).collect();
    debug_assert!(names.iter().all(|s| s.kind() != SymbolKind::Simplex));
    let assignment: BTreeMap<Symbol, f64> = names.iter().cloned().zip(labels.iter().copied()).collect();
    let a0 = Monomial::sym("a0");
    let a: Vec<Monomial> = (1..=n).map(|i| Monomial::sym(&format!("a{i}"))).collect();

    let mut jobs: Vec<(&'static str, XiSummand)> = lambda_summands(&a0, &a, n).into_iter().map(|s| ("lambda", s)).collect();
    jobs.extend(chi_summands(&a0, &a, n).into_iter().map(|s| ("chi", s)));
    let closed = summand_closed_form(labels);
    let summands = jobs
        .par_iter()
        .map(|(family, s)| {
            let r = integrate_combination(&summand_words(s), &assignment, tol)?;
            Ok(SummandValue {
                family,
                set: top_set(s, n),
                sign: s.sign,
                value: r.value,
                error: r.error_estimate,
                closed_form: closed,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let total = |fam: &str| -> f64 {
        summands.iter().filter(|s| s.family == fam).map(|s| s.sign as f64 * s.value).sum()
    };
    let (lambda, chi) = (total("lambda"), total("chi"));
    Ok(PeriodReport {
        n,
        labels: labels.to_vec(),
        value: lambda - chi,
        error: summands.iter().map(|s| s.error).sum(),
        lambda,
        chi,
        summands,
    })
}

/// Period of bold-ξⁿ at real labels a₀ … aₙ > 1, n ≤ 2.
pub fn necklace_period(labels: &[f64]) -> Result<PeriodReport, Error> {
    necklace_period_with(labels, DEFAULT_TOL)
}

/// The renormalized double integral ∫₀¹ 1/(t−b) (reg ∫₀^t ds/s) dt by
/// quadrature, next to the series value of Li₂(1/b).
pub fn renorm_check(b: f64) -> Result<(NumericResult, NumericResult), Error> {
    let word = IteratedWord::new(vec![OneForm::dlog(1), OneForm::Pole { coord: 2, at: b }]);
    Ok((iterated_integral(&word, &BTreeMap::new())?, polylog(2, 1.0 / b)?))
}
