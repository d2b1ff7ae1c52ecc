//! Graded-lexicographic monomial indexing (x0 > x1 > ... > xn).
//!
//! Within a fixed degree the position of a monomial has a closed form via the
//! hockey-stick identity, so dense coefficient vectors need no lookup tables.

/// `C(n, k)`, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn binom(n: usize, k: usize) -> usize {
    binomial(n as u64, k as u64).expect("binomial overflow") as usize
}

/// Number of degree-`degree` monomials in `num_vars` variables.
pub fn num_monomials(num_vars: usize, degree: u32) -> usize {
    if num_vars == 0 {
        return usize::from(degree == 0);
    }
    binom(num_vars - 1 + degree as usize, num_vars - 1)
}

/// Position of an exponent vector among monomials of the same degree.
pub fn monomial_position(exponents: &[u32]) -> usize {
    let n = exponents.len();
    let mut rem: usize = exponents.iter().map(|&e| e as usize).sum();
    let mut pos = 0;
    for (i, &a) in exponents.iter().enumerate().take(n.saturating_sub(1)) {
        let a = a as usize;
        let k = n - 1 - i;
        if rem > a {
            pos += binom(rem - a - 1 + k, k);
        }
        rem -= a;
    }
    pos
}

/// Exponent vector at `position` in degree `degree`; inverse of [`monomial_position`].
pub fn monomial_at(num_vars: usize, degree: u32, mut position: usize) -> Vec<u32> {
    assert!(position < num_monomials(num_vars, degree), "monomial position out of range");
    let mut exps = vec![0u32; num_vars];
    let mut rem = degree as usize;
    for i in 0..num_vars.saturating_sub(1) {
        let k = num_vars - 1 - i;
        let mut a = rem;
        loop {
            // monomials with this exponent at slot i: free degree rem - a over k variables
            let block = binom(rem - a + k - 1, k - 1);
            if position < block {
                break;
            }
            position -= block;
            a -= 1;
        }
        exps[i] = a as u32;
        rem -= a;
    }
    if num_vars > 0 {
        exps[num_vars - 1] = rem as u32;
    }
    exps
}

/// All exponent vectors of a degree, in graded-lex order.
pub fn monomials(num_vars: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, vars_left: usize, rem: u32, out: &mut Vec<Vec<u32>>) {
        if vars_left == 1 {
            prefix.push(rem);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=rem).rev() {
            prefix.push(a);
            rec(prefix, vars_left - 1, rem - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(num_monomials(num_vars, degree));
    if num_vars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut Vec::with_capacity(num_vars), num_vars, degree, &mut out);
    out
}

/// A monomial together with its graded-lex position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIndex {
    exponents: Vec<u32>,
    position: usize,
}

impl MonomialIndex {
    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        let position = monomial_position(&exponents);
        Self { exponents, position }
    }

    pub fn from_position(num_vars: usize, degree: u32, position: usize) -> Self {
        Self { exponents: monomial_at(num_vars, degree, position), position }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}
