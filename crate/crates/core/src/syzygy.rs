//! Δ-syzygies of strength decompositions and Koszul syzygies of Jacobian ideals.

use crate::flattening::ruppert_matrix;
use crate::linalg::{kernel_basis, laplace_det_row_symbolic};
use crate::poly::HomogeneousPoly;
use crate::prolongation::{contract_against, span_dim, TensorElement};
use crate::Error;

/// `f = g_1 h_1 + ... + g_r h_r` with `deg g_i + deg h_i = d` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrengthDecomposition {
    gs: Vec<HomogeneousPoly>,
    hs: Vec<HomogeneousPoly>,
}

impl StrengthDecomposition {
    pub fn new(gs: Vec<HomogeneousPoly>, hs: Vec<HomogeneousPoly>) -> Result<Self, Error> {
        if gs.is_empty() || gs.len() != hs.len() {
            return Err(Error::Shape(format!("need r >= 1 pairs, got {} g's and {} h's", gs.len(), hs.len())));
        }
        let first = &gs[0];
        let d = gs[0].degree() + hs[0].degree();
        for (g, h) in gs.iter().zip(&hs) {
            for p in [g, h] {
                if p.num_vars() != first.num_vars() || p.field() != first.field() {
                    return Err(Error::Shape("all factors must share variables and field".into()));
                }
                if p.degree() == 0 {
                    return Err(Error::Shape("factors must have positive degree".into()));
                }
            }
            if g.degree() + h.degree() != d {
                return Err(Error::Shape(format!("pair degrees {} + {} do not add up to {d}", g.degree(), h.degree())));
            }
        }
        Ok(Self { gs, hs })
    }

    pub fn r(&self) -> usize {
        self.gs.len()
    }

    pub fn gs(&self) -> &[HomogeneousPoly] {
        &self.gs
    }

    pub fn hs(&self) -> &[HomogeneousPoly] {
        &self.hs
    }

    pub fn num_vars(&self) -> usize {
        self.gs[0].num_vars()
    }

    pub fn degree(&self) -> u32 {
        self.gs[0].degree() + self.hs[0].degree()
    }

    /// `Σ g_i h_i`.
    pub fn form(&self) -> HomogeneousPoly {
        let mut acc = HomogeneousPoly::zero(self.num_vars(), self.degree(), self.gs[0].field());
        for (g, h) in self.gs.iter().zip(&self.hs) {
            acc = acc.add(&g.multiply(h).expect("same shape")).expect("same degree");
        }
        acc
    }

    /// The same decomposition with `g_i` and `h_i` exchanged.
    pub fn swapped(&self, i: usize) -> Self {
        let mut out = self.clone();
        std::mem::swap(&mut out.gs[i], &mut out.hs[i]);
        out
    }
}

/// `Δ = det M`, where `M` stacks the gradients of `g_1..g_r`, then of
/// `h_1..h_r`, over a formal row `∂_0 .. ∂_2r`. Component `i` is
/// `(-1)^(2r+i)` times the minor with column `i` deleted; the degree is `r(d-2)`.
pub fn delta(dec: &StrengthDecomposition) -> Result<TensorElement, Error> {
    let r = dec.r();
    if dec.num_vars() != 2 * r + 1 {
        return Err(Error::Shape(format!("Δ for r = {r} needs {} variables, got {}", 2 * r + 1, dec.num_vars())));
    }
    let rows: Vec<Vec<HomogeneousPoly>> = dec.gs.iter().chain(&dec.hs).map(HomogeneousPoly::gradient).collect();
    Ok(TensorElement::new(laplace_det_row_symbolic(&rows)?)?)
}

/// `Σ ∂_i Δ_i = 0`: the element lies in the prolongation.
pub fn verify_delta_prolongation(t: &TensorElement) -> bool {
    t.contraction().is_zero()
}

/// `Δ(f) = Σ Δ_i ∂_i f = 0`.
pub fn verify_delta_annihilates(t: &TensorElement, f: &HomogeneousPoly) -> Result<bool, Error> {
    Ok(contract_against(t, f)?.is_zero())
}

/// `k_ij = ∂_i f ⊗ ∂_j - ∂_j f ⊗ ∂_i` for `i < j`, with the dimension of their span.
pub fn koszul_span(f: &HomogeneousPoly) -> Result<(Vec<TensorElement>, usize), Error> {
    if f.degree() < 2 {
        return Err(Error::Shape(format!("Koszul syzygies need degree >= 2, got {}", f.degree())));
    }
    let nv = f.num_vars();
    let grad = f.gradient();
    let zero = HomogeneousPoly::zero(nv, f.degree() - 1, f.field());
    let mut out = Vec::with_capacity(nv * (nv - 1) / 2);
    for i in 0..nv {
        for j in i + 1..nv {
            let mut comps = vec![zero.clone(); nv];
            comps[j] = grad[i].clone();
            comps[i] = grad[j].neg();
            out.push(TensorElement::new(comps)?);
        }
    }
    let dim = span_dim(&out)?;
    Ok((out, dim))
}

/// `dim (⟨k_ij(f)⟩ + ⟨Δ⟩)`. The decomposition is checked against `f` first.
pub fn augmented_kernel_dim(f: &HomogeneousPoly, dec: &StrengthDecomposition) -> Result<usize, Error> {
    if dec.form() != *f {
        return Err(Error::Decomposition("Σ g_i h_i differs from f".into()));
    }
    let d = delta(dec)?;
    let (mut elems, _) = koszul_span(f)?;
    if d.degree() != f.degree() - 1 {
        return Err(Error::Shape(format!(
            "Δ has degree {} but Koszul syzygies have degree {}",
            d.degree(),
            f.degree() - 1
        )));
    }
    elems.push(d);
    Ok(span_dim(&elems)?)
}

/// Exact kernel of `ρ_f^(e)`, written back as elements of `V* ⊗ S^e V`.
pub fn flattening_kernel(f: &HomogeneousPoly, e: u32) -> Result<Vec<TensorElement>, Error> {
    let fm = ruppert_matrix(f, e)?;
    let basis = fm.basis();
    let coords = basis.coordinate_matrix();
    kernel_basis(fm.matrix())
        .into_iter()
        .map(|v| {
            let amb = coords.mul_vec(&v)?;
            Ok(TensorElement::from_coordinates(f.num_vars(), e, f.field(), &amb)?)
        })
        .collect()
}

/// Whether `t` is a linear combination of `span`, by comparing ranks.
pub fn in_span(t: &TensorElement, span: &[TensorElement]) -> Result<bool, Error> {
    let base = span_dim(span)?;
    let mut with = span.to_vec();
    with.push(t.clone());
    Ok(span_dim(&with)? == base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Field;
    use crate::poly::{parse_poly, random_form};

    const Q: Field = Field::Rational;

    fn p(s: &str, nv: usize) -> HomogeneousPoly {
        parse_poly(s, nv, Q).unwrap()
    }

    #[test]
    fn r1_components_match_two_by_two_minors() {
        // g = x0, h = x1*x2: grad g = (1,0,0), grad h = (0,x2,x1)
        let dec = StrengthDecomposition::new(vec![p("x0", 3)], vec![p("x1*x2", 3)]).unwrap();
        let d = delta(&dec).unwrap();
        // Δ0 = det[[0,0],[x2,x1]] = 0, Δ1 = -det[[1,0],[0,x1]] = -x1, Δ2 = det[[1,0],[0,x2]] = x2
        assert_eq!(d.components()[0], HomogeneousPoly::zero(3, 1, Q));
        assert_eq!(d.components()[1], p("-x1", 3));
        assert_eq!(d.components()[2], p("x2", 3));
        assert_eq!(d.degree(), 1);
        assert!(verify_delta_prolongation(&d));
        assert!(verify_delta_annihilates(&d, &dec.form()).unwrap());
    }

    #[test]
    fn equal_factors_give_zero() {
        let g = random_form(3, 2, Q, 1);
        let d = delta(&StrengthDecomposition::new(vec![g.clone()], vec![g]).unwrap()).unwrap();
        assert!(d.is_zero());
        assert!(verify_delta_prolongation(&d));
        assert!(verify_delta_annihilates(&d, &random_form(3, 4, Q, 2)).unwrap());
    }

    #[test]
    fn swap_flips_sign() {
        let dec = StrengthDecomposition::new(
            vec![random_form(5, 1, Q, 1), random_form(5, 1, Q, 2)],
            vec![random_form(5, 2, Q, 3), random_form(5, 2, Q, 4)],
        )
        .unwrap();
        let d = delta(&dec).unwrap();
        for i in 0..2 {
            // swapping g_i and h_i swaps rows i and r+i
            assert_eq!(delta(&dec.swapped(i)).unwrap(), d.neg());
        }
    }

    #[test]
    fn random_element_is_not_a_syzygy() {
        for s in 0..20 {
            let comps = (0..3).map(|i| random_form(3, 2, Q, 100 * s + i)).collect();
            let t = TensorElement::new(comps).unwrap();
            assert!(!verify_delta_prolongation(&t));
        }
    }

    #[test]
    fn delta_does_not_kill_unrelated_forms() {
        let dec = StrengthDecomposition::new(vec![random_form(3, 1, Q, 5)], vec![random_form(3, 2, Q, 6)]).unwrap();
        let d = delta(&dec).unwrap();
        assert!(!verify_delta_annihilates(&d, &random_form(3, 3, Q, 7)).unwrap());
    }

    #[test]
    fn koszul_dimensions() {
        let (elems, dim) = koszul_span(&random_form(5, 3, Q, 0)).unwrap();
        assert_eq!((elems.len(), dim), (10, 10));
        for k in &elems {
            assert!(verify_delta_prolongation(k));
        }
        // x4 missing: the k_i4 keep their ∂_i f slot, nothing collapses
        let (_, dim) = koszul_span(&random_form(4, 3, Q, 1).embed(5).unwrap()).unwrap();
        assert_eq!(dim, 10);
        // x3 and x4 missing: k_34 vanishes
        let (elems, dim) = koszul_span(&random_form(3, 3, Q, 1).embed(5).unwrap()).unwrap();
        assert!(elems[9].is_zero());
        assert_eq!(dim, 9);
    }

    #[test]
    fn decomposition_is_validated() {
        let dec = StrengthDecomposition::new(vec![p("x0", 5)], vec![p("x1^2", 5)]).unwrap();
        assert!(matches!(augmented_kernel_dim(&p("x0*x1^2 + x2^3", 5), &dec), Err(Error::Decomposition(_))));
        assert!(StrengthDecomposition::new(vec![p("x0", 3)], vec![p("x1", 3), p("x2", 3)]).is_err());
        assert!(StrengthDecomposition::new(vec![p("x0", 3), p("x0^2", 3)], vec![p("x1", 3), p("x2", 3)]).is_err());
        let dec = StrengthDecomposition::new(vec![p("x0", 5)], vec![p("x1", 5)]).unwrap();
        assert!(delta(&dec).is_err());
    }
}
