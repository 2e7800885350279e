//! The σ- and ρ-augmented families λ^n_m, χ^n_m, their combination ξ_top^n
//! and the circular bar element bold-ξ^n.
//!
//! With global coordinates t_{n−m}, …, t_n, t_{n+1} ≡ 1 (renamed to the
//! local t₁..t_{m+1} of the (m+1)-simplex) and A = a₀∏_J a_j:
//!
//! λ^n_m = Σ_{J ⊆ {n−m+1..n}} (−1)^{|J|} ε^{n−m}(A/t_{n−m+1}; a₁, …, a_{n−m}t_{n−m+1}/t_{n−m})
//!         · Π_{k>n−m} G₀(a_k t_{k+1}/t_k)
//!
//! χ^n_m = Σ_{I ⊆ {n−m+2..n}} (−1)^{|I|} ε^{n−m}(A/t_{n−m+1}; a₁, …, a_{n−m})
//!         · G₀(a_{n−m+1} t_{n−m+2}/t_{n−m}) · Π_{k>n−m+1} G₀(a_k t_{k+1}/t_k)
//!
//! When n = m the necklace has no beads and the factor t_{1}/t_0 of the
//! missing last bead lands on the top label: λ^n_n starts with ε⁰(A/t_0).

use itertools::Itertools;
use num_rational::BigRational;
use serde::Serialize;

use super::circular::CircularBarElement;
use super::necklace::{bold_eps, g0, make_eps};
use super::AugSum;
use crate::bar::BarElement;
use crate::canonical::GraphSum;
use crate::labels::{Monomial, Symbol};
use crate::Error;

/// One summand ±ε^{k}(top; beads)·Π G₀(loops) on an (m+1)-simplex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiSummand {
    pub sign: i64,
    pub top: Monomial,
    pub beads: Vec<Monomial>,
    pub loops: Vec<Monomial>,
    #[serde(rename = "simplexDim")]
    pub simplex_dim: usize,
}

impl XiSummand {
    pub fn to_sum(&self) -> Result<AugSum, Error> {
        let mut s = make_eps(&self.top, &self.beads)?;
        for l in &self.loops {
            s = s.product(&GraphSum::from_graph(&g0(l))?)?;
        }
        Ok(AugSum::from_sum(self.simplex_dim, s.scale(&BigRational::from_integer(self.sign.into()))))
    }
}

/// Global coordinate t_g of the family (n, m), as a local monomial.
fn coord(n: usize, m: usize, g: usize) -> Monomial {
    if g == n + 1 {
        Monomial::one()
    } else {
        Monomial::sym_pow(Symbol::t(g + m + 1 - n), 1)
    }
}

fn subsets(range: std::ops::RangeInclusive<usize>) -> impl Iterator<Item = Vec<usize>> {
    let items: Vec<usize> = range.collect();
    (0..=items.len()).flat_map(move |k| items.clone().into_iter().combinations(k))
}

fn top_arg(a0: &Monomial, a: &[Monomial], set: &[usize]) -> Monomial {
    set.iter().fold(a0.clone(), |acc, &j| acc.mul(&a[j - 1]))
}

/// Summands of λ^n_m(a₀; a), 0 ≤ m ≤ n.
pub fn lambda_summands(a0: &Monomial, a: &[Monomial], m: usize) -> Vec<XiSummand> {
    let n = a.len();
    assert!(m <= n);
    let t = |g: usize| coord(n, m, g);
    let k = n - m;
    let mut out = Vec::new();
    for j in subsets(k + 1..=n) {
        let big_a = top_arg(a0, a, &j);
        let (top, beads) = if k == 0 {
            (big_a.div(&t(0)), Vec::new())
        } else {
            let mut beads: Vec<Monomial> = a[..k].to_vec();
            beads[k - 1] = a[k - 1].mul(&t(k + 1)).div(&t(k));
            (big_a.div(&t(k + 1)), beads)
        };
        let loops = (k + 1..=n).map(|i| a[i - 1].mul(&t(i + 1)).div(&t(i))).collect();
        let sign = if j.len() % 2 == 1 { -1 } else { 1 };
        out.push(XiSummand { sign, top, beads, loops, simplex_dim: m + 1 });
    }
    out
}

/// Summands of χ^n_m(a₀; a), 1 ≤ m ≤ n; empty for m = 0.
pub fn chi_summands(a0: &Monomial, a: &[Monomial], m: usize) -> Vec<XiSummand> {
    let n = a.len();
    assert!(m <= n);
    if m == 0 {
        return Vec::new();
    }
    let t = |g: usize| coord(n, m, g);
    let k = n - m;
    let mut out = Vec::new();
    for i_set in subsets(k + 2..=n) {
        let top = top_arg(a0, a, &i_set).div(&t(k + 1));
        let mut loops = vec![a[k].mul(&t(k + 2)).div(&t(k))];
        loops.extend((k + 2..=n).map(|i| a[i - 1].mul(&t(i + 1)).div(&t(i))));
        let sign = if i_set.len() % 2 == 1 { -1 } else { 1 };
        out.push(XiSummand { sign, top, beads: a[..k].to_vec(), loops, simplex_dim: m + 1 });
    }
    out
}

fn collect(summands: &[XiSummand]) -> Result<AugSum, Error> {
    summands.iter().try_fold(AugSum::zero(), |acc, s| Ok(acc.add(&s.to_sum()?)))
}

pub fn lambda(a0: &Monomial, a: &[Monomial], m: usize) -> Result<AugSum, Error> {
    collect(&lambda_summands(a0, a, m))
}

pub fn chi(a0: &Monomial, a: &[Monomial], m: usize) -> Result<AugSum, Error> {
    collect(&chi_summands(a0, a, m))
}

/// ξ_top^n = Σ_{m=0}^n λ^n_m − Σ_{m=1}^n χ^n_m.
pub fn xi_top(a0: &Monomial, a: &[Monomial]) -> Result<AugSum, Error> {
    let mut s = AugSum::zero();
    for m in 0..=a.len() {
        s = s.add(&lambda(a0, a, m)?).sub(&chi(a0, a, m)?);
    }
    Ok(s)
}

/// How the removed letters enter the first argument of the slot factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlotArgs {
    /// ξ_top^{n−|S|}(a₀; a_{𝐧∖S}) only.
    Plain,
    /// Σ_{J ⊆ S} (−1)^{|J|} ξ_top^{n−|S|}(a₀∏_J a_j; a_{𝐧∖S}), mirroring
    /// bold-ε^n.
    Shifted,
}

/// bold-ξ^n = Σ_S (−1)^{|S|} ξ_top^{n−|S|}(a₀; a_{𝐧∖S}) ⊗ ⧢_{s∈S} G₀(a_s), with
/// the first argument expanded according to `args`.
pub fn bold_xi_with(a0: &Monomial, a: &[Monomial], args: SlotArgs) -> Result<CircularBarElement, Error> {
    let n = a.len();
    let mut out = CircularBarElement::zero();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let rest: Vec<Monomial> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| a[i].clone()).collect();
        let mut head = AugSum::zero();
        let jmasks = if args == SlotArgs::Shifted { 1u32 << s.len() } else { 1 };
        for jmask in 0..jmasks {
            let top = s
                .iter()
                .enumerate()
                .filter(|(k, _)| jmask >> k & 1 == 1)
                .fold(a0.clone(), |acc, (_, &j)| acc.mul(&a[j]));
            let x = xi_top(&top, &rest)?;
            head = if jmask.count_ones() % 2 == 1 { head.sub(&x) } else { head.add(&x) };
        }
        let letters: Vec<GraphSum> = s.iter().map(|&i| GraphSum::from_graph(&g0(&a[i]))).collect::<Result<_, _>>()?;
        let sign = BigRational::from_integer(if s.len() % 2 == 1 { -1 } else { 1 }.into());
        // bar degree 0 letters: the shuffle is the sum over orders
        for order in (0..s.len()).permutations(s.len()) {
            let word: Vec<GraphSum> = order.iter().map(|&k| letters[k].clone()).collect();
            out = out.add(&CircularBarElement::tensor(&head, &word).scale(&sign));
        }
    }
    Ok(out)
}

pub fn bold_xi(a0: &Monomial, a: &[Monomial]) -> Result<CircularBarElement, Error> {
    bold_xi_with(a0, a, SlotArgs::Shifted)
}

/// Everything built from one argument tuple.
#[derive(Clone, Debug)]
pub struct XiFamily {
    pub n: usize,
    /// λ^n_m for m = 0..=n.
    pub lambda: Vec<AugSum>,
    /// χ^n_m for m = 0..=n (χ^n_0 = 0).
    pub chi: Vec<AugSum>,
    pub xi_top: AugSum,
    pub bold_xi: CircularBarElement,
    pub bold_eps: BarElement,
    /// Number of ε-summands in ξ_top before canonical cancellation.
    pub summands: usize,
}

pub fn make_xi_family(a0: &Monomial, a: &[Monomial]) -> Result<XiFamily, Error> {
    let n = a.len();
    let lambda = (0..=n).map(|m| self::lambda(a0, a, m)).collect::<Result<Vec<_>, _>>()?;
    let chi = (0..=n).map(|m| self::chi(a0, a, m)).collect::<Result<Vec<_>, _>>()?;
    let summands = (0..=n).map(|m| lambda_summands(a0, a, m).len() + chi_summands(a0, a, m).len()).sum();
    Ok(XiFamily {
        n,
        xi_top: xi_top(a0, a)?,
        lambda,
        chi,
        bold_xi: bold_xi(a0, a)?,
        bold_eps: bold_eps(a0, a)?,
        summands,
    })
}
