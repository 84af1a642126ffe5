//! Exact sparse multivariate polynomials over the rationals.
//!
//! This is the substrate for every symbolic certificate in the crate: terms
//! are kept in a `BTreeMap` from exponent vectors to `BigRational`
//! coefficients, so arithmetic is exact, zero coefficients are never stored,
//! and term order (hence rendering and equality) is canonical.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("determinant of a non-square matrix ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VarOutOfRange { index: usize, nvars: usize },
}

/// A sparse exact polynomial in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u16; nvars], c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    /// The monomial `var_index` to the first power.
    pub fn var(nvars: usize, var_index: usize) -> Self {
        assert!(var_index < nvars, "variable index out of range");
        let mut exps = vec![0u16; nvars];
        exps[var_index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigRational::one());
        MultiPoly { nvars, terms }
    }

    /// Builds `c * prod var_i^e_i` from a sparse exponent list.
    pub fn monomial(nvars: usize, exps: &[(usize, u16)], c: i64) -> Self {
        let mut e = vec![0u16; nvars];
        for &(v, k) in exps {
            assert!(v < nvars, "variable index out of range");
            e[v] += k;
        }
        let coeff = BigRational::from_integer(BigInt::from(c));
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(e, coeff);
        }
        MultiPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(&mut self, exps: Vec<u16>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable universes differ");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable universes differ");
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect();
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut out = MultiPoly::one(self.nvars);
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, var_index: usize) -> Self {
        assert!(var_index < self.nvars, "variable index out of range");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var_index];
            if k == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[var_index] = k - 1;
            out.insert_term(exps, c * BigRational::from_integer(BigInt::from(k)));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[v];
                }
            }
            acc += term;
        }
        acc
    }

    /// Floating evaluation at a complex point (used by numeric probes that
    /// share the exact definitions).
    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong arity");
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= point[v];
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes a fixed rational value for one variable, keeping the
    /// variable universe (the substituted variable simply stops appearing).
    pub fn substitute(&self, var_index: usize, value: &BigRational) -> Self {
        assert!(var_index < self.nvars, "variable index out of range");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var_index];
            let mut coeff = c.clone();
            for _ in 0..k {
                coeff *= value;
            }
            let mut exps = e.clone();
            exps[var_index] = 0;
            out.insert_term(exps, coeff);
        }
        out
    }

    /// Substitutes another polynomial for one variable.
    pub fn substitute_poly(&self, var_index: usize, value: &Self) -> Self {
        assert!(var_index < self.nvars, "variable index out of range");
        assert_eq!(self.nvars, value.nvars, "variable universes differ");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var_index];
            let mut exps = e.clone();
            exps[var_index] = 0;
            let mut term = MultiPoly { nvars: self.nvars, terms: BTreeMap::new() };
            term.insert_term(exps, c.clone());
            if k > 0 {
                term = term.mul(&value.pow(k as u32));
            }
            out = out.add(&term);
        }
        out
    }

    /// Returns `den^d * self(var -> num/den)` where `d` is the degree of
    /// `self` in the variable: the denominator-cleared rational substitution.
    pub fn subst_ratio(&self, var_index: usize, num: &Self, den: &Self) -> Self {
        let d = self.degree_in(var_index) as u32;
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var_index] as u32;
            let mut exps = e.clone();
            exps[var_index] = 0;
            let mut term = MultiPoly { nvars: self.nvars, terms: BTreeMap::new() };
            term.insert_term(exps, c.clone());
            term = term.mul(&num.pow(k)).mul(&den.pow(d - k));
            out = out.add(&term);
        }
        out
    }

    /// Reduces every appearance of `var^2` by the replacement polynomial:
    /// `var^(2k+r)` becomes `rep^k * var^r`. Used for on-curve reduction
    /// modulo relations of the form `var^2 - rep = 0`.
    pub fn reduce_square(&self, var_index: usize, rep: &Self) -> Self {
        assert!(var_index < self.nvars, "variable index out of range");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var_index] / 2;
            let r = e[var_index] % 2;
            let mut exps = e.clone();
            exps[var_index] = r;
            let mut term = MultiPoly { nvars: self.nvars, terms: BTreeMap::new() };
            term.insert_term(exps, c.clone());
            if k > 0 {
                term = term.mul(&rep.pow(k as u32));
            }
            out = out.add(&term);
        }
        out
    }

    /// Applies the coordinate sign change `var_v -> signs[v] * var_v`
    /// (entries +1 or -1): each term picks up the parity of its odd-degree
    /// flipped variables.
    pub fn map_signs(&self, signs: &[i8]) -> Self {
        assert_eq!(signs.len(), self.nvars, "one sign per variable");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut flip = false;
            for (v, &k) in e.iter().enumerate() {
                if signs[v] < 0 && k % 2 == 1 {
                    flip = !flip;
                }
            }
            let coeff = if flip { -c.clone() } else { c.clone() };
            out.insert_term(e.clone(), coeff);
        }
        out
    }

    /// Renames variables: variable `v` becomes variable `perm[v]` (a
    /// permutation of the universe).
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars, "permutation arity mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut exps = vec![0u16; self.nvars];
            for (v, &k) in e.iter().enumerate() {
                exps[perm[v]] += k;
            }
            out.insert_term(exps, c.clone());
        }
        out
    }

    pub fn degree_in(&self, var_index: usize) -> u16 {
        assert!(var_index < self.nvars, "variable index out of range");
        self.terms.keys().map(|e| e[var_index]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// If every term has the same total exponent over the listed variables,
    /// returns that common degree.
    pub fn homogeneous_degree_in(&self, vars: &[usize]) -> Option<u32> {
        let mut seen: Option<u32> = None;
        for e in self.terms.keys() {
            let d: u32 = vars.iter().map(|&v| e[v] as u32).sum();
            match seen {
                None => seen = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        seen
    }

    /// Renders the polynomial with the supplied variable names, terms in
    /// canonical map order. A zero polynomial renders as "0".
    pub fn render(&self, names: &[&str]) -> String {
        assert!(names.len() >= self.nvars, "not enough variable names");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.iter().all(|&k| k == 0) {
                if abs.is_integer() {
                    factors.push(abs.numer().to_string());
                } else {
                    factors.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], k)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Exact determinant of a square matrix of polynomials by cofactor expansion,
/// always expanding along the row with the most zero entries among the live
/// rows. Division-free, so exactness never depends on divisibility of
/// intermediate results.
pub fn determinant(matrix: &[Vec<MultiPoly>]) -> Result<MultiPoly, PolyError> {
    let n = matrix.len();
    for row in matrix {
        if row.len() != n {
            return Err(PolyError::NotSquare { rows: n, cols: row.len() });
        }
    }
    if n == 0 {
        return Ok(MultiPoly::one(0));
    }
    let nvars = matrix[0][0].nvars();
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(det_recursive(matrix, &rows, &cols, nvars))
}

/// Exact determinant of a square matrix of rationals by Gaussian elimination
/// with exact arithmetic. Deliberately a different algorithm from the
/// polynomial cofactor expansion, so substituting a rational point into a
/// matrix and taking this determinant cross-checks the symbolic path.
pub fn rational_det(matrix: &[Vec<BigRational>]) -> Result<BigRational, PolyError> {
    let n = matrix.len();
    for row in matrix {
        if row.len() != n {
            return Err(PolyError::NotSquare { rows: n, cols: row.len() });
        }
    }
    let mut m: Vec<Vec<BigRational>> = matrix.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Ok(BigRational::zero()),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for cc in col..n {
                let sub = &factor * &m[col][cc];
                m[r][cc] -= sub;
            }
        }
    }
    Ok(det)
}

fn det_recursive(
    matrix: &[Vec<MultiPoly>],
    rows: &[usize],
    cols: &[usize],
    nvars: usize,
) -> MultiPoly {
    let n = rows.len();
    if n == 1 {
        return matrix[rows[0]][cols[0]].clone();
    }
    // Row with the most zeros wins: fewer cofactor branches.
    let (pivot_pos, _) = rows
        .iter()
        .enumerate()
        .map(|(pos, &r)| {
            let zeros = cols.iter().filter(|&&c| matrix[r][c].is_zero()).count();
            (pos, zeros)
        })
        .max_by_key(|&(pos, zeros)| (zeros, std::cmp::Reverse(pos)))
        .unwrap();
    let pivot_row = rows[pivot_pos];
    let sub_rows: Vec<usize> =
        rows.iter().copied().filter(|&r| r != pivot_row).collect();
    let mut acc = MultiPoly::zero(nvars);
    for (j, &c) in cols.iter().enumerate() {
        let entry = &matrix[pivot_row][c];
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> =
            cols.iter().copied().filter(|&cc| cc != c).collect();
        let minor = det_recursive(matrix, &sub_rows, &sub_cols, nvars);
        let signed = if (pivot_pos + j) % 2 == 0 { minor } else { minor.neg() };
        acc = acc.add(&entry.mul(&signed));
    }
    acc
}
