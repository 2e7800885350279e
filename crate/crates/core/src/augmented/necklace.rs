//! Necklace graphs, the sums ε^n and their closed bar elements.
//!
//! Vertices v₀..vₙ; bead i joins v_{i−1} and v_i.  Edge order (1-based):
//! position 1 is the marked top edge, position 2i the edge v_i → v_{i−1}
//! labeled 1 and position 2i+1 the edge v_{i−1} → v_i labeled a_i.  The
//! marked edge runs vₙ → v₀ for L and v₀ → vₙ for R.

use itertools::Itertools;
use num_rational::BigRational;

use crate::bar::BarElement;
use crate::canonical::GraphSum;
use crate::graph_core::{Edge, Graph};
use crate::labels::Monomial;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    L,
    R,
}

pub fn make_necklace(kind: Side, a0: &Monomial, beads: &[Monomial]) -> Graph {
    let n = beads.len();
    let top = match kind {
        Side::L => Edge::new(n, 0, a0.clone()),
        Side::R => Edge::new(0, n, a0.clone()),
    };
    let mut edges = vec![top];
    for (i, a) in beads.iter().enumerate() {
        edges.push(Edge::new(i + 1, i, Monomial::one()));
        edges.push(Edge::new(i, i + 1, a.clone()));
    }
    Graph::new(n + 1, edges).expect("necklaces are well formed")
}

/// G₀(a): one vertex, one self-loop.
pub fn g0(a: &Monomial) -> Graph {
    make_necklace(Side::L, a, &[])
}

/// ε^n(a₀; a₁..aₙ) = G^L(a₀; a) − G^R(1/a₀; a).
pub fn make_eps(a0: &Monomial, beads: &[Monomial]) -> Result<GraphSum, Error> {
    GraphSum::from_terms(&[(1, make_necklace(Side::L, a0, beads)), (-1, make_necklace(Side::R, &a0.inv(), beads))])
}

/// Σ_{i} (ε^{n−1}(a₀; a∖i) − ε^{n−1}(a₀aᵢ; a∖i))·G₀(aᵢ).
pub fn eps_boundary_formula(a0: &Monomial, beads: &[Monomial]) -> Result<GraphSum, Error> {
    let mut out = GraphSum::zero();
    for i in 0..beads.len() {
        let rest: Vec<Monomial> = beads.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| b.clone()).collect();
        let diff = make_eps(a0, &rest)?.sub(&make_eps(&a0.mul(&beads[i]), &rest)?);
        out = out.add(&diff.product(&GraphSum::from_graph(&g0(&beads[i]))?)?);
    }
    Ok(out)
}

/// Which one-edge factor the bead extraction tensors on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BeadFactor {
    /// The single graph G₀(a_s); this version is closed.
    Loop,
    /// The difference ε⁰(a_s) = G₀(a_s) − G₀(1/a_s).
    Eps0,
}

/// Σ_{S ⊆ 𝐧} (−1)^{|S|} Σ_{J ⊆ S} (−1)^{|J|} [ε^{n−|S|}(a₀∏_J a_j; a_{𝐧∖S}) | ⧢_{s∈S} F(a_s)].
pub fn bold_eps_with(a0: &Monomial, beads: &[Monomial], factor: BeadFactor) -> Result<BarElement, Error> {
    let n = beads.len();
    let mut out = BarElement::zero();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let rest: Vec<Monomial> = (0..n).filter(|i| mask >> i & 1 == 0).map(|i| beads[i].clone()).collect();
        let mut head = GraphSum::zero();
        for jmask in 0u32..(1 << s.len()) {
            let top = s
                .iter()
                .enumerate()
                .filter(|(k, _)| jmask >> k & 1 == 1)
                .fold(a0.clone(), |acc, (_, &j)| acc.mul(&beads[j]));
            let sign = if jmask.count_ones() % 2 == 1 { -1 } else { 1 };
            head = head.add(&make_eps(&top, &rest)?.scale(&BigRational::from_integer(sign.into())));
        }
        let letters: Vec<GraphSum> = s
            .iter()
            .map(|&i| match factor {
                BeadFactor::Loop => GraphSum::from_graph(&g0(&beads[i])),
                BeadFactor::Eps0 => make_eps(&beads[i], &[]),
            })
            .collect::<Result<_, _>>()?;
        let sign = BigRational::from_integer(if s.len() % 2 == 1 { -1 } else { 1 }.into());
        // letters have bar degree 0, so the shuffle is the plain sum over orders
        for order in (0..s.len()).permutations(s.len()) {
            let mut factors = vec![head.clone()];
            factors.extend(order.iter().map(|&k| letters[k].clone()));
            out = out.add(&BarElement::tensor(&factors).scale(&sign));
        }
    }
    Ok(out)
}

pub fn bold_eps(a0: &Monomial, beads: &[Monomial]) -> Result<BarElement, Error> {
    bold_eps_with(a0, beads, BeadFactor::Loop)
}

/// Generic symbolic arguments a0, a1, …, an.
pub fn generic_args(n: usize) -> (Monomial, Vec<Monomial>) {
    (Monomial::sym("a0"), (1..=n).map(|i| Monomial::sym(&format!("a{i}"))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar::{bar_total, check_completely_decomposable, lift_to_bar_closure};
    use crate::dga::{differential, is_admissible};
    use crate::Budget;

    #[test]
    fn shapes() {
        let (a0, a) = generic_args(1);
        let gl = make_necklace(Side::L, &a0, &a);
        assert_eq!(gl.num_vertices(), 2);
        assert_eq!(gl.num_edges(), 3);
        assert!(is_admissible(&gl, &Budget::default()).unwrap().admissible);
        assert!(gl.handle_decomposition().handles.is_empty());
        let e0 = make_eps(&a0, &[]).unwrap();
        let direct = GraphSum::from_terms(&[(1, g0(&a0)), (-1, g0(&a0.inv()))]).unwrap();
        assert_eq!(e0, direct);
    }

    #[test]
    fn boundary_formula() {
        for n in 1..=3 {
            let (a0, a) = generic_args(n);
            let lhs = differential(&make_eps(&a0, &a).unwrap()).unwrap();
            assert_eq!(lhs, eps_boundary_formula(&a0, &a).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn bold_eps_is_closed() {
        for n in 0..=3 {
            let (a0, a) = generic_args(n);
            assert!(bar_total(&bold_eps(&a0, &a).unwrap()).unwrap().is_zero(), "n = {n}");
        }
        let (a0, a) = generic_args(1);
        assert!(!bar_total(&bold_eps_with(&a0, &a, BeadFactor::Eps0).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn eps_decomposable_and_single_necklace_not() {
        for n in 1..=3 {
            let (a0, a) = generic_args(n);
            let eps = make_eps(&a0, &a).unwrap();
            assert!(check_completely_decomposable(&eps, 8).unwrap().is_yes());
            let lift = lift_to_bar_closure(&eps, 8, &Budget::default()).unwrap();
            assert!(bar_total(&lift).unwrap().is_zero());
            let single = GraphSum::from_graph(&make_necklace(Side::L, &a0, &a)).unwrap();
            // with one bead every contraction leaves two self-loops, so the
            // lone necklace is already decomposable; from two beads on the
            // top contraction is a connected ring of beads
            assert_eq!(check_completely_decomposable(&single, 8).unwrap().is_yes(), n == 1, "n = {n}");
        }
    }
}
