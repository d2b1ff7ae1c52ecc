//! The contraction `V* ⊗ S^e V -> S^(e-1) V` and its kernel, the prolongation
//! `sl^(e-1)(V)`.
//!
//! Coordinates on `V* ⊗ S^e V` are indexed `i * dim S^e V + pos`, where `i` is
//! the slot `∂_i` and `pos` the graded-lex position of a degree-`e` monomial.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::linalg::{kernel_basis, rank_exact, ExactMatrix, Field, Scalar};
use crate::poly::{monomial_at, monomial_position, num_monomials, HomogeneousPoly, PolyError};

/// `Σ g_i ⊗ ∂_i`, with `components[i] = g_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    components: Vec<HomogeneousPoly>,
}

impl TensorElement {
    pub fn new(components: Vec<HomogeneousPoly>) -> Result<Self, PolyError> {
        let first = components.first().ok_or(PolyError::NoVariables)?;
        if components.len() != first.num_vars() {
            return Err(PolyError::VarCountMismatch { left: first.num_vars(), right: components.len() });
        }
        for c in &components {
            if c.num_vars() != first.num_vars() {
                return Err(PolyError::VarCountMismatch { left: first.num_vars(), right: c.num_vars() });
            }
            if c.degree() != first.degree() {
                return Err(PolyError::DegreeMismatch { left: first.degree(), right: c.degree() });
            }
            if c.field() != first.field() {
                return Err(PolyError::FieldMismatch { left: first.field(), right: c.field() });
            }
        }
        Ok(Self { components })
    }

    pub fn zero(num_vars: usize, degree: u32, field: Field) -> Self {
        Self { components: vec![HomogeneousPoly::zero(num_vars, degree, field); num_vars] }
    }

    /// Reassembles an element from ambient coordinates.
    pub fn from_coordinates(num_vars: usize, degree: u32, field: Field, v: &[Scalar]) -> Result<Self, PolyError> {
        let dim = num_monomials(num_vars, degree);
        if v.len() != num_vars * dim {
            return Err(PolyError::CoefficientCount { expected: num_vars * dim, found: v.len() });
        }
        let components = v
            .chunks(dim)
            .map(|c| HomogeneousPoly::from_coeffs(num_vars, degree, field, c.to_vec()))
            .collect::<Result<_, _>>()?;
        Ok(Self { components })
    }

    pub fn num_vars(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> u32 {
        self.components[0].degree()
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    pub fn components(&self) -> &[HomogeneousPoly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(HomogeneousPoly::is_zero)
    }

    /// Ambient coordinates, slot-major.
    pub fn coordinates(&self) -> Vec<Scalar> {
        self.components.iter().flat_map(|c| c.coeffs().iter().cloned()).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.num_vars() != other.num_vars() {
            return Err(PolyError::VarCountMismatch { left: self.num_vars(), right: other.num_vars() });
        }
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect::<Result<_, _>>()?;
        Ok(Self { components })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { components: self.components.iter().map(|g| g.scale(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { components: self.components.iter().map(HomogeneousPoly::neg).collect() }
    }

    /// `Σ ∂_i g_i`, zero exactly when the element lies in the prolongation.
    pub fn contraction(&self) -> HomogeneousPoly {
        let nv = self.num_vars();
        if self.degree() == 0 {
            return HomogeneousPoly::zero(nv, 0, self.field());
        }
        let mut acc = HomogeneousPoly::zero(nv, self.degree() - 1, self.field());
        for (i, g) in self.components.iter().enumerate() {
            acc = acc.add(&g.partial_derivative(i).expect("slot in range")).expect("same shape");
        }
        acc
    }
}

/// Matrix of `Σ g_i ⊗ ∂_i -> Σ ∂_i g_i`: `dim S^(e-1) V` rows, `(n+1) dim S^e V` columns.
pub fn contraction_matrix(num_vars: usize, e: u32, field: Field) -> ExactMatrix {
    assert!(e >= 1, "contraction needs e >= 1");
    let dim = num_monomials(num_vars, e);
    let mut m = ExactMatrix::zeros(num_monomials(num_vars, e - 1), num_vars * dim, field);
    for i in 0..num_vars {
        for pos in 0..dim {
            let mut exps = monomial_at(num_vars, e, pos);
            if exps[i] == 0 {
                continue;
            }
            let c = Scalar::from_i64(field, exps[i] as i64);
            exps[i] -= 1;
            m.set(monomial_position(&exps), i * dim + pos, c);
        }
    }
    m
}

/// A basis of `sl^(e-1)(V)`; element `j` is column `j` of every flattening built on it.
///
/// Elements are stored sparsely as `(slot, monomial position, coefficient)`.
#[derive(Debug, PartialEq, Eq)]
pub struct ProlongationBasis {
    num_vars: usize,
    degree: u32,
    field: Field,
    elements: Vec<Vec<(usize, usize, Scalar)>>,
}

impl ProlongationBasis {
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Nonzero entries of element `j` as `(slot, monomial position, coefficient)`.
    pub fn entries(&self, j: usize) -> &[(usize, usize, Scalar)] {
        &self.elements[j]
    }

    /// Ambient coordinate of a `(slot, monomial position)` pair.
    pub fn ambient_index(&self, slot: usize, position: usize) -> usize {
        slot * num_monomials(self.num_vars, self.degree) + position
    }

    pub fn element(&self, j: usize) -> TensorElement {
        let mut comps = vec![vec![Scalar::zero(self.field); num_monomials(self.num_vars, self.degree)]; self.num_vars];
        for (slot, pos, c) in &self.elements[j] {
            comps[*slot][*pos] = c.clone();
        }
        let components = comps
            .into_iter()
            .map(|c| HomogeneousPoly::from_coeffs(self.num_vars, self.degree, self.field, c).expect("shape"))
            .collect();
        TensorElement { components }
    }

    pub fn elements(&self) -> impl Iterator<Item = TensorElement> + '_ {
        (0..self.len()).map(|j| self.element(j))
    }

    /// The basis as columns of an ambient-coordinate matrix.
    pub fn coordinate_matrix(&self) -> ExactMatrix {
        let rows = self.num_vars * num_monomials(self.num_vars, self.degree);
        let mut m = ExactMatrix::zeros(rows, self.len(), self.field);
        for (j, entries) in self.elements.iter().enumerate() {
            for (slot, pos, c) in entries {
                m.set(self.ambient_index(*slot, *pos), j, c.clone());
            }
        }
        m
    }

    fn build(num_vars: usize, e: u32, field: Field) -> Self {
        let elements = match field {
            Field::Prime(p) if p <= e as u64 + 1 => native_kernel(num_vars, e, field),
            _ => explicit_kernel(num_vars, e, field),
        };
        let basis = Self { num_vars, degree: e, field, elements };
        for j in 0..basis.len() {
            assert!(basis.contracts_to_zero(j), "prolongation element {j} does not contract to zero");
        }
        basis
    }

    fn contracts_to_zero(&self, j: usize) -> bool {
        if self.degree == 0 {
            return true;
        }
        let mut acc = vec![Scalar::zero(self.field); num_monomials(self.num_vars, self.degree - 1)];
        for (slot, pos, c) in &self.elements[j] {
            let mut exps = monomial_at(self.num_vars, self.degree, *pos);
            if exps[*slot] == 0 {
                continue;
            }
            let mult = Scalar::from_i64(self.field, exps[*slot] as i64);
            exps[*slot] -= 1;
            acc[monomial_position(&exps)] += &(c * &mult);
        }
        acc.iter().all(Scalar::is_zero)
    }
}

/// The kernel read off the contraction matrix directly.
///
/// Every monomial of degree `e-1` is hit by exactly one slot-0 column, so the
/// columns `(0, m)` with `m_0 > 0` are the pivots. A free column `(i, m)` with
/// `m_i > 0` pairs with the pivot `(0, m - e_i + e_0)`, giving the primitive
/// vector `(m_0+1)[i, m] - m_i[0, m - e_i + e_0]` up to the gcd; free columns
/// with `m_i = 0` are unit vectors. This is the output of fraction-free
/// elimination with first-nonzero pivoting, ordered by free column.
fn explicit_kernel(num_vars: usize, e: u32, field: Field) -> Vec<Vec<(usize, usize, Scalar)>> {
    let dim = num_monomials(num_vars, e);
    let mut out = Vec::new();
    for i in 0..num_vars {
        for pos in 0..dim {
            let exps = monomial_at(num_vars, e, pos);
            if i == 0 {
                if exps[0] == 0 {
                    out.push(vec![(0, pos, Scalar::one(field))]);
                }
                continue;
            }
            if exps[i] == 0 {
                out.push(vec![(i, pos, Scalar::one(field))]);
                continue;
            }
            let mut partner = exps.clone();
            partner[i] -= 1;
            partner[0] += 1;
            let (a, b) = (exps[0] as i64 + 1, exps[i] as i64);
            let g = gcd(a, b);
            let mut entries = vec![
                (0, monomial_position(&partner), Scalar::from_i64(field, -b / g)),
                (i, pos, Scalar::from_i64(field, a / g)),
            ];
            entries.sort_by_key(|&(s, p, _)| s * dim + p);
            out.push(entries);
        }
    }
    out
}

/// Kernel by elimination, used in small characteristic where the explicit
/// pivots may vanish.
fn native_kernel(num_vars: usize, e: u32, field: Field) -> Vec<Vec<(usize, usize, Scalar)>> {
    let dim = num_monomials(num_vars, e);
    let vectors = if e == 0 {
        (0..num_vars)
            .map(|i| (0..num_vars).map(|k| if k == i { Scalar::one(field) } else { Scalar::zero(field) }).collect())
            .collect()
    } else {
        kernel_basis(&contraction_matrix(num_vars, e, field))
    };
    vectors
        .into_iter()
        .map(|v| v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k / dim, k % dim, c)).collect())
        .collect()
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

type CacheKey = (usize, u32, Field);
type Cache = Mutex<HashMap<CacheKey, Arc<OnceLock<Arc<ProlongationBasis>>>>>;

/// Memoized basis of `sl^(e-1)(V)` for `num_vars` variables.
///
/// Built at most once per `(num_vars, e, field)`; concurrent callers for the
/// same key wait on the first construction. `e = 0` is accepted and gives all
/// of `V*` (the contraction lands in the zero space).
pub fn prolongation_basis(num_vars: usize, e: u32, field: Field) -> Arc<ProlongationBasis> {
    assert!(num_vars >= 1, "need at least one variable");
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cell = {
        let mut map = CACHE.get_or_init(Default::default).lock().expect("prolongation cache poisoned");
        map.entry((num_vars, e, field)).or_default().clone()
    };
    cell.get_or_init(|| Arc::new(ProlongationBasis::build(num_vars, e, field))).clone()
}

/// `dim sl^(e-1)(V) = n(n+1+e)/e · C(n+e-1, n)` for `dim V = n+1`.
pub fn prolongation_dim(n: usize, e: u32) -> Option<u64> {
    if e == 0 {
        return None;
    }
    let e64 = e as u64;
    let n64 = n as u64;
    let b = crate::poly::monomial::binomial(n64 + e64 - 1, n64)?;
    let num = (n64 * (n64 + 1 + e64)).checked_mul(b)?;
    assert_eq!(num % e64, 0, "prolongation dimension must be an integer");
    Some(num / e64)
}

/// `Σ g_i ∂_i f`, of degree `e + d - 1`.
pub fn contract_against(t: &TensorElement, f: &HomogeneousPoly) -> Result<HomogeneousPoly, PolyError> {
    if t.num_vars() != f.num_vars() {
        return Err(PolyError::VarCountMismatch { left: t.num_vars(), right: f.num_vars() });
    }
    if t.field() != f.field() {
        return Err(PolyError::FieldMismatch { left: t.field(), right: f.field() });
    }
    if f.degree() == 0 {
        return Err(PolyError::DegreeMismatch { left: 1, right: 0 });
    }
    let mut acc = HomogeneousPoly::zero(f.num_vars(), t.degree() + f.degree() - 1, f.field());
    for (i, g) in t.components().iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        acc = acc.add(&g.multiply(&f.partial_derivative(i)?)?)?;
    }
    Ok(acc)
}

/// Exact dimension of the span of some tensor elements of a common shape.
pub fn span_dim(elements: &[TensorElement]) -> Result<usize, PolyError> {
    let Some(first) = elements.first() else { return Ok(0) };
    let cols: Vec<Vec<Scalar>> = elements
        .iter()
        .map(|t| {
            if t.num_vars() != first.num_vars() {
                return Err(PolyError::VarCountMismatch { left: first.num_vars(), right: t.num_vars() });
            }
            if t.degree() != first.degree() {
                return Err(PolyError::DegreeMismatch { left: first.degree(), right: t.degree() });
            }
            Ok(t.coordinates())
        })
        .collect::<Result<_, _>>()?;
    let m = ExactMatrix::from_columns(cols[0].len(), first.field(), &cols)?;
    Ok(rank_exact(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, random_form};
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    #[test]
    fn trace_map() {
        let m = contraction_matrix(2, 1, Q);
        assert_eq!((m.rows(), m.cols()), (1, 4));
        assert_eq!(rank_exact(&m), 1);
        assert_eq!(kernel_basis(&contraction_matrix(3, 1, Q)).len(), 8);
        assert_eq!(kernel_basis(&contraction_matrix(5, 2, Q)).len(), 70);
    }

    #[test]
    fn ternary_sizes() {
        for d in 3..=8u32 {
            assert_eq!(prolongation_basis(3, d - 2, Q).len() as u32, d * d - 1);
        }
        assert_eq!(prolongation_basis(5, 2, Q).len(), 70);
        for nv in 1..=7 {
            assert_eq!(prolongation_basis(nv, 1, Q).len(), nv * nv - 1);
        }
    }

    #[test]
    fn sizes_match_closed_formula() {
        for n in 1..=6usize {
            for e in 1..=5u32 {
                let b = ProlongationBasis::build(n + 1, e, Q);
                let expected = prolongation_dim(n, e).unwrap() as usize;
                assert_eq!(b.len(), expected, "n={n} e={e}");
                let ambient = (n + 1) * num_monomials(n + 1, e);
                assert_eq!(expected, ambient - num_monomials(n + 1, e - 1));
            }
        }
    }

    #[test]
    fn explicit_basis_equals_elimination_output() {
        for nv in 1..=4 {
            for e in 1..=4 {
                let explicit = ProlongationBasis::build(nv, e, Q).coordinate_matrix();
                let kernel = kernel_basis(&contraction_matrix(nv, e, Q));
                let by_elimination = ExactMatrix::from_columns(explicit.rows(), Q, &kernel).unwrap();
                assert_eq!(explicit, by_elimination, "nv={nv} e={e}");
            }
        }
    }

    #[test]
    fn modular_basis_is_reduction_of_rational_basis() {
        let p = 1_000_000_007;
        let q = prolongation_basis(5, 2, Q).coordinate_matrix();
        let fp = prolongation_basis(5, 2, Field::Prime(p)).coordinate_matrix();
        assert_eq!(q.reduce_mod(p).unwrap(), fp);
        // small characteristic falls back to elimination over F_p
        let small = prolongation_basis(3, 4, Field::Prime(3));
        for t in small.elements() {
            assert!(t.contraction().is_zero());
        }
        assert_eq!(small.len(), 3 * 15 - rank_exact(&contraction_matrix(3, 4, Field::Prime(3))));
    }

    #[test]
    fn every_element_contracts_to_zero() {
        for t in prolongation_basis(4, 3, Q).elements() {
            assert!(t.contraction().is_zero());
        }
    }

    #[test]
    fn zero_degree_is_all_of_dual() {
        let b = prolongation_basis(3, 0, Q);
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn monomial_contraction() {
        let f = parse_poly("x0^2", 3, Q).unwrap();
        let g0 = parse_poly("x0", 3, Q).unwrap();
        let z = HomogeneousPoly::zero(3, 1, Q);
        let t = TensorElement::new(vec![g0, z.clone(), z]).unwrap();
        assert_eq!(contract_against(&t, &f).unwrap(), parse_poly("2*x0^2", 3, Q).unwrap());
    }

    #[test]
    fn koszul_elements_kill_f() {
        let f = random_form(5, 3, Q, 4);
        let grad = f.gradient();
        for i in 0..5 {
            for j in i + 1..5 {
                let mut comps = vec![HomogeneousPoly::zero(5, 2, Q); 5];
                comps[j] = grad[i].clone();
                comps[i] = grad[j].neg();
                let k = TensorElement::new(comps).unwrap();
                assert!(k.contraction().is_zero());
                assert!(contract_against(&k, &f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn mismatches() {
        let t = TensorElement::zero(3, 1, Q);
        assert!(contract_against(&t, &random_form(4, 3, Q, 0)).is_err());
        assert!(contract_against(&t, &random_form(3, 3, Field::Prime(101), 0)).is_err());
        assert!(TensorElement::new(vec![random_form(3, 1, Q, 0), random_form(3, 2, Q, 0), random_form(3, 1, Q, 0)])
            .is_err());
    }

    #[test]
    fn cache_shares_instances() {
        let a = prolongation_basis(4, 2, Q);
        let b = prolongation_basis(4, 2, Q);
        assert!(Arc::ptr_eq(&a, &b));
        let handles: Vec<_> = (0..8).map(|_| std::thread::spawn(|| prolongation_basis(6, 2, Q))).collect();
        let all: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(all.windows(2).all(|w| Arc::ptr_eq(&w[0], &w[1])));
    }

    proptest! {
        #[test]
        fn contraction_is_bilinear(s in any::<u64>(), a in -20i64..20, b in -20i64..20) {
            let basis = prolongation_basis(4, 2, Q);
            let t1 = basis.element((s % 36) as usize);
            let t2 = basis.element((s % 33 + 3) as usize);
            let f1 = random_form(4, 3, Q, s);
            let f2 = random_form(4, 3, Q, s.wrapping_add(1));
            let (ca, cb) = (Scalar::from_i64(Q, a), Scalar::from_i64(Q, b));
            let t = t1.scale(&ca).add(&t2.scale(&cb)).unwrap();
            let lhs = contract_against(&t, &f1).unwrap();
            let rhs = contract_against(&t1, &f1).unwrap().scale(&ca).add(&contract_against(&t2, &f1).unwrap().scale(&cb)).unwrap();
            prop_assert_eq!(lhs, rhs);
            let f = f1.scale(&ca).add(&f2.scale(&cb)).unwrap();
            let lhs = contract_against(&t1, &f).unwrap();
            let rhs = contract_against(&t1, &f1).unwrap().scale(&ca).add(&contract_against(&t1, &f2).unwrap().scale(&cb)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
