//! The circular bar construction: words [(G₀,σ) | G₁ | … | G_k] whose first
//! slot is augmented (possibly the unit) and whose letters are ordinary
//! graphs.
//!
//! With deg_B = deg − 1 (the graphical degree, for the slot as well),
//!
//! μ_j  carries (−1)^{deg_B G₀ + Σ_{1≤i≤j} deg_B G_i}, μ₀ being the
//!      module product (G₀,σ)·G₁ = (G₀G₁, σ);
//! ∂_j  (j ≥ 1) carries (−1)^{deg_B G₀ + Σ_{1≤i<j} deg_B G_i};
//! ∂₀   = ∂ + δ on the slot.
//!
//! [`SlotSign::MinusM`] subtracts the simplex dimension m in the μ_j
//! exponents as well.  Under that rule every ξ-type slot (⋆_t = 0) multiplies
//! with the same sign whatever its degree, which is incompatible with the
//! λ/χ identities; the closure checks fail from n = 1 on.
//!
//! The unit slot has deg_B = −1, so (∂ + μ)(1 ⊗ bold-εⁿ) = −εⁿ and the
//! closed element is bold-ξⁿ − 1 ⊗ bold-εⁿ.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::xi::{chi, lambda};
use super::necklace::g0;
use super::{aug_delta, aug_partial, AugSum};
use crate::bar::{BarElement, BarWord};
use crate::canonical::{canonical_form_with, Canonical, CanonicalKey, GraphSum};
use crate::dga::differential_with;
use crate::graph_core::Graph;
use crate::labels::Monomial;
use crate::{Budget, Error};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircWord {
    pub dim: usize,
    pub slot: CanonicalKey,
    pub word: BarWord,
}

#[derive(Clone, Debug, Default)]
pub struct CircularBarElement {
    terms: BTreeMap<CircWord, BigRational>,
    reps: BTreeMap<CanonicalKey, Graph>,
}

impl PartialEq for CircularBarElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl CircularBarElement {
    pub fn zero() -> Self {
        CircularBarElement::default()
    }

    /// slot ⊗ l₁ ⊗ … ⊗ l_k, expanded multilinearly; unit letters are
    /// degenerate and dropped, a unit slot is kept.
    pub fn tensor(slot: &AugSum, letters: &[GraphSum]) -> Self {
        let mut out = CircularBarElement::zero();
        let mut partial: Vec<(Vec<CanonicalKey>, BigRational)> = vec![(Vec::new(), BigRational::one())];
        for s in letters {
            let mut next = Vec::new();
            for (w, c) in &partial {
                for (k, q, g) in s.iter() {
                    if g.is_empty() {
                        continue;
                    }
                    out.reps.entry(k.clone()).or_insert_with(|| g.clone());
                    let mut w2 = w.clone();
                    w2.push(k.clone());
                    next.push((w2, c * q));
                }
            }
            partial = next;
        }
        for (m, k, c, g) in slot.iter() {
            out.reps.entry(k.clone()).or_insert_with(|| g.clone());
            for (w, q) in &partial {
                out.add_term(CircWord { dim: m, slot: k.clone(), word: BarWord(w.clone()) }, c * q);
            }
        }
        out
    }

    /// 1 ⊗ x for an ordinary bar element.
    pub fn unit_tensor(x: &BarElement) -> Self {
        let mut out = CircularBarElement::zero();
        out.reps.insert(CanonicalKey::unit(), Graph::empty());
        for (w, c) in x.iter() {
            for k in &w.0 {
                out.reps.entry(k.clone()).or_insert_with(|| x.rep(k).expect("rep").clone());
            }
            out.add_term(CircWord { dim: 0, slot: CanonicalKey::unit(), word: w.clone() }, c.clone());
        }
        out
    }

    fn add_term(&mut self, w: CircWord, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &CircularBarElement) -> CircularBarElement {
        let mut s = self.clone();
        for (k, g) in &other.reps {
            s.reps.entry(k.clone()).or_insert_with(|| g.clone());
        }
        for (w, c) in &other.terms {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, q: &BigRational) -> CircularBarElement {
        let mut s = CircularBarElement { terms: BTreeMap::new(), reps: self.reps.clone() };
        for (w, c) in &self.terms {
            s.add_term(w.clone(), c * q);
        }
        s
    }

    pub fn sub(&self, other: &CircularBarElement) -> CircularBarElement {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CircWord, &BigRational)> {
        self.terms.iter()
    }

    pub fn rep(&self, k: &CanonicalKey) -> Option<&Graph> {
        self.reps.get(k)
    }

    /// (twisted degree of the slot, Σ deg_B of the letters).
    pub fn degrees(&self, w: &CircWord) -> (i64, i64) {
        let slot = self.reps[&w.slot].degree() - w.dim as i64;
        (slot, w.word.0.iter().map(|k| self.reps[k].degree() - 1).sum())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({
                        "simplexDim": w.dim,
                        "slot": w.slot.hex(),
                        "word": w.word.0.iter().map(|k| k.hex()).collect::<Vec<_>>(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for CircularBarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let ks: Vec<&str> = w.word.0.iter().map(|k| k.as_str()).collect();
            write!(f, "{c} * [(m={}) {} | {}]", w.dim, w.slot, ks.join(" | "))?;
        }
        Ok(())
    }
}

/// Sign rule for the slot in the μ_j exponents.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum SlotSign {
    /// (−1)^{deg_B G₀ + …}.
    #[default]
    Graded,
    /// (−1)^{deg_B G₀ − m + …}.
    MinusM,
}

fn sgn(e: i64) -> BigRational {
    if e.rem_euclid(2) == 1 {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// Memoized circular differential.
pub struct CircularCtx {
    pub budget: Budget,
    pub sign: SlotSign,
    slot_partial: HashMap<(usize, CanonicalKey), AugSum>,
    slot_delta: HashMap<(usize, CanonicalKey), AugSum>,
    letter_partial: HashMap<CanonicalKey, GraphSum>,
    /// Trivial faces dropped so far.
    pub trivial_faces: usize,
}

impl CircularCtx {
    pub fn new(budget: Budget, sign: SlotSign) -> Self {
        CircularCtx {
            budget,
            sign,
            slot_partial: HashMap::new(),
            slot_delta: HashMap::new(),
            letter_partial: HashMap::new(),
            trivial_faces: 0,
        }
    }

    fn single(m: usize, g: &Graph) -> AugSum {
        let mut s = GraphSum::zero();
        // already canonical: re-adding with coefficient 1 is exact
        s.add_graph(&BigRational::one(), g, &Budget::default()).expect("canonical rep");
        AugSum::from_sum(m, s)
    }

    fn slot_partial(&mut self, m: usize, k: &CanonicalKey, g: &Graph) -> Result<AugSum, Error> {
        if let Some(s) = self.slot_partial.get(&(m, k.clone())) {
            return Ok(s.clone());
        }
        let s = aug_partial(&Self::single(m, g), &self.budget)?;
        self.slot_partial.insert((m, k.clone()), s.clone());
        Ok(s)
    }

    fn slot_delta(&mut self, m: usize, k: &CanonicalKey, g: &Graph) -> Result<AugSum, Error> {
        if let Some(s) = self.slot_delta.get(&(m, k.clone())) {
            return Ok(s.clone());
        }
        let (s, t) = aug_delta(&Self::single(m, g), &self.budget)?;
        self.trivial_faces += t;
        self.slot_delta.insert((m, k.clone()), s.clone());
        Ok(s)
    }

    fn letter_partial(&mut self, k: &CanonicalKey, g: &Graph) -> Result<GraphSum, Error> {
        if let Some(s) = self.letter_partial.get(k) {
            return Ok(s.clone());
        }
        let s = differential_with(&GraphSum::from_graph_with(g, &self.budget)?, &self.budget)?;
        self.letter_partial.insert(k.clone(), s.clone());
        Ok(s)
    }

    /// ∂ + δ + μ.
    pub fn total(&mut self, x: &CircularBarElement) -> Result<CircularBarElement, Error> {
        let mut out = CircularBarElement { terms: BTreeMap::new(), reps: x.reps.clone() };
        for (w, c) in &x.terms {
            let slot_g = x.reps[&w.slot].clone();
            let m = w.dim as i64;
            let slot_b = slot_g.degree() - 1;
            let letters: Vec<Graph> = w.word.0.iter().map(|k| x.reps[k].clone()).collect();
            let put = |out: &mut CircularBarElement, s: &AugSum, word: Vec<CanonicalKey>, q: &BigRational, letter_reps: &[(CanonicalKey, Graph)]| {
                for (k, g) in letter_reps {
                    out.reps.entry(k.clone()).or_insert_with(|| g.clone());
                }
                for (dim, k, c2, g) in s.iter() {
                    out.reps.entry(k.clone()).or_insert_with(|| g.clone());
                    out.add_term(CircWord { dim, slot: k.clone(), word: BarWord(word.clone()) }, q * c2);
                }
            };
            // slot differentials
            let ps = self.slot_partial(w.dim, &w.slot, &slot_g)?;
            put(&mut out, &ps, w.word.0.clone(), c, &[]);
            let ds = self.slot_delta(w.dim, &w.slot, &slot_g)?;
            put(&mut out, &ds, w.word.0.clone(), c, &[]);
            // letter differentials
            let mut before = slot_b;
            for j in 0..letters.len() {
                let d = self.letter_partial(&w.word.0[j], &letters[j])?;
                for (k, q2, h) in d.iter() {
                    out.reps.entry(k.clone()).or_insert_with(|| h.clone());
                    let mut w2 = w.word.0.clone();
                    w2[j] = k.clone();
                    out.add_term(CircWord { dim: w.dim, slot: w.slot.clone(), word: BarWord(w2) }, c * sgn(before) * q2);
                }
                before += letters[j].degree() - 1;
            }
            // products
            let mut upto = if self.sign == SlotSign::MinusM { slot_b - m } else { slot_b };
            if let Some(first) = letters.first() {
                let mut p = GraphSum::zero();
                p.add_graph(&BigRational::one(), &slot_g.disjoint_union(first), &self.budget)?;
                put(&mut out, &AugSum::from_sum(w.dim, p), w.word.0[1..].to_vec(), &(c * sgn(upto)), &[]);
            }
            for j in 0..letters.len().saturating_sub(1) {
                upto += letters[j].degree() - 1;
                if let Canonical::Term { key, coeff, rep } = canonical_form_with(
                    &BigRational::one(),
                    &letters[j].disjoint_union(&letters[j + 1]),
                    &self.budget,
                )? {
                    let mut w2 = w.word.0[..j].to_vec();
                    w2.push(key.clone());
                    w2.extend_from_slice(&w.word.0[j + 2..]);
                    out.reps.entry(key).or_insert(rep);
                    out.add_term(CircWord { dim: w.dim, slot: w.slot.clone(), word: BarWord(w2) }, c * sgn(upto) * coeff);
                }
            }
        }
        Ok(out)
    }
}

pub fn circular_total(x: &CircularBarElement) -> Result<CircularBarElement, Error> {
    CircularCtx::new(Budget::default(), SlotSign::default()).total(x)
}

/// The product entering the λ/χ identities: X ⊗ H ↦ (−1)^{deg X} X·H,
/// i.e. H acting from the left.  It is minus μ₀ under [`SlotSign::Graded`].
pub fn mu_graded(x: &AugSum, h: &GraphSum) -> Result<AugSum, Error> {
    let mut out = AugSum::zero();
    for (m, _, c, g) in x.iter() {
        let mut s = GraphSum::zero();
        s.add_graph(c, g, &Budget::default())?;
        out = out.add(&AugSum::from_sum(m, s.product(h)?.scale(&sgn(g.degree()))));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub m: usize,
    pub holds: bool,
    pub residue_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub n: usize,
    pub sign: SlotSign,
    pub identities: Vec<IdentityCheck>,
    /// Terms of bold-ξ − 1⊗bold-ε.
    pub element_terms: usize,
    pub residue_terms: usize,
    pub closed: bool,
    pub trivial_faces_dropped: usize,
    #[serde(skip)]
    pub residue: CircularBarElement,
}

impl ClosureReport {
    pub fn all_hold(&self) -> bool {
        self.closed && self.identities.iter().all(|i| i.holds)
    }
}

fn without(a: &[Monomial], i: usize) -> Vec<Monomial> {
    a.iter().enumerate().filter(|(j, _)| *j + 1 != i).map(|(_, x)| x.clone()).collect()
}

fn face(s: &AugSum, i: usize, budget: &Budget) -> Result<AugSum, Error> {
    Ok(s.face(i, budget)?.0)
}

/// μ(Σ_{i∈range} (F(a₀; a∖i) − F(a₀aᵢ; a∖i)) ⊗ G₀(aᵢ)).
fn extraction<F>(a0: &Monomial, a: &[Monomial], range: std::ops::RangeInclusive<usize>, f: F) -> Result<AugSum, Error>
where
    F: Fn(&Monomial, &[Monomial]) -> Result<AugSum, Error>,
{
    let mut out = AugSum::zero();
    for i in range {
        let rest = without(a, i);
        let x = f(a0, &rest)?.sub(&f(&a0.mul(&a[i - 1]), &rest)?);
        out = out.add(&mu_graded(&x, &GraphSum::from_graph(&g0(&a[i - 1]))?)?);
    }
    Ok(out)
}

fn chi_or_zero(a0: &Monomial, a: &[Monomial], m: usize) -> Result<AugSum, Error> {
    if m > a.len() {
        Ok(AugSum::zero())
    } else {
        chi(a0, a, m)
    }
}

fn lambda_or_zero(a0: &Monomial, a: &[Monomial], m: usize) -> Result<AugSum, Error> {
    if m > a.len() {
        Ok(AugSum::zero())
    } else {
        lambda(a0, a, m)
    }
}

fn record(name: &str, m: usize, residue: AugSum) -> IdentityCheck {
    IdentityCheck { name: name.into(), m, holds: residue.is_zero(), residue_terms: residue.len() }
}

/// The differential identities for λ^n_m and χ^n_m, μ as in [`mu_graded`]
/// and δⁱ the i-th face:
///
/// ∂λ^n_m  = −μ(Σ_{i<n−m} (λ^{n−1}_m(a₀) − λ^{n−1}_m(a₀aᵢ)) ⊗ G₀(aᵢ))
///           + δ²χ^n_{m+1}(a₀) − δ¹χ^n_{m+1}(a₀a_{n−m})
/// −∂χ^n_m = μ(Σ_{i≤n−m} (χ^{n−1}_m(a₀) − χ^{n−1}_m(a₀aᵢ)) ⊗ G₀(aᵢ))
/// δλ^n_m  = −δ¹χ^n_m(a₀) + δ¹χ^n_m(a₀a_{n−m+1})
///           − μ(Σ_{i>n−m} (λ^{n−1}_{m−1}(a₀) − λ^{n−1}_{m−1}(a₀aᵢ)) ⊗ G₀(aᵢ))
/// −δχ^n_m = δ¹χ^n_m − δ²χ^n_m
///           + μ(Σ_{i>n−m+1} (χ^{n−1}_{m−1}(a₀) − χ^{n−1}_{m−1}(a₀aᵢ)) ⊗ G₀(aᵢ))
///
/// the last two for m ≥ 1; at m = 0, δλ^n_0 = −εⁿ.
pub fn check_identities(a0: &Monomial, a: &[Monomial], budget: &Budget) -> Result<Vec<IdentityCheck>, Error> {
    let n = a.len();
    let mut out = Vec::new();
    let d = |s: &AugSum| aug_partial(s, budget);
    let delta = |s: &AugSum| Ok::<_, Error>(aug_delta(s, budget)?.0);
    for m in 0..=n {
        let lam = lambda(a0, a, m)?;
        let mut rhs = extraction(a0, a, 1..=(n - m).saturating_sub(1), |x, r| lambda_or_zero(x, r, m))?.neg();
        if m < n {
            rhs = rhs
                .add(&face(&chi(a0, a, m + 1)?, 2, budget)?)
                .sub(&face(&chi(&a0.mul(&a[n - m - 1]), a, m + 1)?, 1, budget)?);
        }
        out.push(record("algderiv1", m, d(&lam)?.sub(&rhs)));
        if m == 0 {
            let eps = AugSum::from_sum(0, super::necklace::make_eps(a0, a)?);
            out.push(record("topoderiv0", 0, delta(&lam)?.add(&eps)));
            continue;
        }
        let ch = chi(a0, a, m)?;
        let rhs = extraction(a0, a, 1..=n - m, |x, r| chi_or_zero(x, r, m))?;
        out.push(record("algderiv2", m, d(&ch)?.neg().sub(&rhs)));
        let rhs = face(&ch, 1, budget)?
            .neg()
            .add(&face(&chi(&a0.mul(&a[n - m]), a, m)?, 1, budget)?)
            .sub(&extraction(a0, a, n - m + 1..=n, |x, r| lambda_or_zero(x, r, m - 1))?);
        out.push(record("topoderiv1", m, delta(&lam)?.sub(&rhs)));
        let rhs = face(&ch, 1, budget)?
            .sub(&face(&ch, 2, budget)?)
            .add(&extraction(a0, a, n - m + 2..=n, |x, r| chi_or_zero(x, r, m - 1))?);
        out.push(record("topoderiv2", m, delta(&ch)?.neg().sub(&rhs)));
    }
    Ok(out)
}

/// Expands bold-ξⁿ − 1⊗bold-εⁿ for generic arguments and applies ∂ + δ + μ.
pub fn check_circular_closure_with(n: usize, sign: SlotSign, budget: &Budget) -> Result<ClosureReport, Error> {
    let (a0, a) = super::necklace::generic_args(n);
    let fam = super::xi::make_xi_family(&a0, &a)?;
    let identities = check_identities(&a0, &a, budget)?;
    let x = fam.bold_xi.sub(&CircularBarElement::unit_tensor(&fam.bold_eps));
    let mut ctx = CircularCtx::new(*budget, sign);
    let residue = ctx.total(&x)?;
    Ok(ClosureReport {
        n,
        sign,
        identities,
        element_terms: x.len(),
        residue_terms: residue.len(),
        closed: residue.is_zero(),
        trivial_faces_dropped: ctx.trivial_faces,
        residue,
    })
}

pub fn check_circular_closure(n: usize) -> Result<ClosureReport, Error> {
    check_circular_closure_with(n, SlotSign::default(), &Budget::default())
}

/// As [`check_circular_closure`], failing with the residue when the total
/// differential or one of the identities does not vanish.
pub fn verify_circular_closure(n: usize) -> Result<ClosureReport, Error> {
    let r = check_circular_closure(n)?;
    if r.all_hold() {
        Ok(r)
    } else {
        let bad: Vec<String> = r.identities.iter().filter(|i| !i.holds).map(|i| format!("{} m={}", i.name, i.m)).collect();
        Err(Error::ClosureFailed(format!(
            "{} residue terms; failing identities: [{}]\n{}",
            r.residue_terms,
            bad.join(", "),
            r.residue
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augmented::xi::{bold_xi_with, SlotArgs};
    use crate::augmented::necklace::{bold_eps, generic_args, make_eps};

    #[test]
    fn closes_through_n3_with_every_identity() {
        for n in 0..=3 {
            let r = verify_circular_closure(n).unwrap();
            assert_eq!(r.identities.len(), 2 + 4 * n);
            assert!(r.trivial_faces_dropped > 0 || n == 0);
        }
    }

    #[test]
    fn unit_term_sign() {
        // 1⊗ε⁰ alone: μ₀ gives (−1)^{deg_B 1} ε⁰ = −ε⁰
        let (a0, _) = generic_args(0);
        let x = CircularBarElement::unit_tensor(&bold_eps(&a0, &[]).unwrap());
        let d = circular_total(&x).unwrap();
        let eps = AugSum::from_sum(0, make_eps(&a0, &[]).unwrap());
        assert_eq!(d, CircularBarElement::tensor(&eps, &[]).scale(&-BigRational::one()));
        // bold-ξ + 1⊗bold-ε is not closed
        let fam = crate::augmented::make_xi_family(&a0, &[]).unwrap();
        let plus = fam.bold_xi.add(&x);
        assert!(!circular_total(&plus).unwrap().is_zero());
    }

    #[test]
    fn minus_m_rule_fails_from_n1() {
        let b = Budget::default();
        assert!(check_circular_closure_with(0, SlotSign::MinusM, &b).unwrap().closed);
        assert!(!check_circular_closure_with(1, SlotSign::MinusM, &b).unwrap().closed);
    }

    #[test]
    fn plain_slot_arguments_fail_at_n1() {
        let (a0, a) = generic_args(1);
        let x = bold_xi_with(&a0, &a, SlotArgs::Plain)
            .unwrap()
            .sub(&CircularBarElement::unit_tensor(&bold_eps(&a0, &a).unwrap()));
        assert!(!circular_total(&x).unwrap().is_zero());
    }
}
