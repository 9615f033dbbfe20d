//! Exact arithmetic in the hypergroup *-algebra.
//!
//! Elements are finitely supported coefficient vectors over the basis `{h_n}`.
//! Basis products are computed two independent ways:
//!
//! * [`HyperAlgebra::mul_basis_recursive`] — induction on the smaller degree
//!   using only `h_0 h_n = h_n` and `h_1 h_n = r h_{n-1} + (1-r) h_{n+1}`.
//!   This is the normative route; it works for every `r != 1` including `r = 0`.
//! * [`HyperAlgebra::mul_basis_closed`] — the closed-form expansion
//!
//!   ```text
//!   (1-r)^{m-1} h_m h_n = r^m h_{n-m} + sum_{k=1}^{m-1} r^{m-k} (1-r)^{k-1} (1-2r) h_{n-m+2k}
//!                         + (1-r)^m h_{n+m}        (1 <= m <= n)
//!   ```
//!
//!   which divides by `(1-r)^{m-1}` and therefore excludes `r = 0`.
//!
//! Both run in exact rational arithmetic so their agreement is an equality of
//! rationals, not a tolerance check.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::param::Param;

/// Basis degree. Non-negative by construction.
pub type Degree = u32;

/// Coefficient rings the element type is generic over: exact rationals for the
/// algebraic core, complex floats for derived numeric views.
pub trait Coefficient: Clone + PartialEq + std::fmt::Debug + Zero + One {
    fn add_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// Complex conjugate; the identity on real coefficient rings.
    fn conjugate(&self) -> Self;
    fn abs_f64(&self) -> f64;
    fn from_rational(q: &BigRational) -> Self;
}

impl Coefficient for BigRational {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conjugate(&self) -> Self {
        self.clone()
    }
    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Coefficient for Complex64 {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conjugate(&self) -> Self {
        self.conj()
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// A finitely supported vector `sum_n a_n h_n`.
///
/// Zero coefficients are never stored, so structural equality is equality in
/// the algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperElement<C: Coefficient = BigRational> {
    coeffs: BTreeMap<Degree, C>,
}

/// Exact element, the algebra module's working type.
pub type RatElement = HyperElement<BigRational>;
/// Complex-float view used by numeric callers.
pub type CxElement = HyperElement<Complex64>;

impl<C: Coefficient> HyperElement<C> {
    pub fn zero() -> Self {
        HyperElement {
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis element `h_n`.
    pub fn basis(n: Degree) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(n, C::one());
        HyperElement { coeffs }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Degree, C)>>(pairs: I) -> Self {
        let mut e = Self::zero();
        for (n, c) in pairs {
            e.add_term(n, &c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: Degree) -> C {
        self.coeffs.get(&n).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Degree, &C)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    pub fn support(&self) -> Vec<Degree> {
        self.coeffs.keys().copied().collect()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add_term(&mut self, n: Degree, c: &C) {
        if c.is_zero() {
            return;
        }
        let updated = match self.coeffs.get(&n) {
            Some(old) => old.add_ref(c),
            None => c.clone(),
        };
        if updated.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, updated);
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in rhs.iter() {
            out.add_term(n, c);
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        HyperElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (*n, c.mul_ref(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Coefficient-wise complex conjugation; fixes every basis element.
    pub fn involution(&self) -> Self {
        HyperElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (*n, c.conjugate()))
                .collect(),
        }
    }

    /// `sum_n |a_n|` as a float.
    pub fn norm_l1(&self) -> f64 {
        self.coeffs.values().map(C::abs_f64).sum()
    }
}

impl RatElement {
    /// `sum_n |a_n|`, exact.
    pub fn norm_l1_exact(&self) -> BigRational {
        self.coeffs
            .values()
            .map(|c| c.abs())
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Sum of the coefficients, exact. For a hypergroup basis product this is
    /// exactly one.
    pub fn coeff_sum(&self) -> BigRational {
        self.coeffs
            .values()
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    pub fn to_complex(&self) -> CxElement {
        HyperElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (*n, Complex64::from_rational(c)))
                .collect(),
        }
    }
}

/// The algebra at a fixed parameter, with a bounded, shareable product cache.
///
/// All operations are pure; the cache is behind a mutex so one instance can be
/// used from several threads. A capacity of zero disables caching.
pub struct HyperAlgebra {
    r: Param,
    cache: Mutex<HashMap<(Degree, Degree), Arc<RatElement>>>,
    cache_capacity: usize,
}

impl HyperAlgebra {
    pub fn new(r: Param) -> Self {
        HyperAlgebra {
            r,
            cache: Mutex::new(HashMap::new()),
            cache_capacity: 4096,
        }
    }

    pub fn with_cache_capacity(mut self, capacity: usize) -> Self {
        self.cache_capacity = capacity;
        self
    }

    pub fn param(&self) -> &Param {
        &self.r
    }

    /// `h_m h_n` by the recursive route, consulting the cache. Arguments may
    /// come in either order (the algebra is commutative).
    pub fn mul_basis(&self, m: Degree, n: Degree) -> Arc<RatElement> {
        let key = (m.min(n), m.max(n));
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Arc::clone(hit);
        }
        let product = Arc::new(self.mul_basis_recursive(m, n));
        let mut cache = self.cache.lock().unwrap();
        if cache.len() < self.cache_capacity {
            cache.insert(key, Arc::clone(&product));
        }
        Arc::clone(&product)
    }

    /// `h_m h_n` by induction on `min(m, n)`, using only the defining
    /// relations. Exact for every `r != 1`.
    pub fn mul_basis_recursive(&self, m: Degree, n: Degree) -> RatElement {
        let (m, n) = (m.min(n), m.max(n));
        if m == 0 {
            return RatElement::basis(n);
        }
        // Walk h_k h_n up in k: h_k = (h_1 h_{k-1} - r h_{k-2}) / (1-r).
        let mut prev = RatElement::basis(n); // h_0 h_n
        let mut curr = self.mul_h1(&prev); // h_1 h_n
        for _ in 2..=m {
            let next = self.step_up(&curr, &prev);
            prev = curr;
            curr = next;
        }
        curr
    }

    /// `h_1 * x` for an arbitrary exact element `x`.
    fn mul_h1(&self, x: &RatElement) -> RatElement {
        let r = self.r.rational();
        let one_minus_r = self.r.one_minus();
        let mut out = RatElement::zero();
        for (j, c) in x.iter() {
            if j == 0 {
                out.add_term(1, c);
            } else {
                out.add_term(j - 1, &(c * r));
                out.add_term(j + 1, &(c * &one_minus_r));
            }
        }
        out
    }

    /// Given `curr = h_{k-1} h_n` and `prev = h_{k-2} h_n`, produce `h_k h_n`.
    fn step_up(&self, curr: &RatElement, prev: &RatElement) -> RatElement {
        let r = self.r.rational();
        let one_minus_r = self.r.one_minus();
        let mut out = self.mul_h1(curr);
        for (j, c) in prev.iter() {
            out.add_term(j, &(-(c * r)));
        }
        let inv = BigRational::one() / one_minus_r;
        out.scale(&inv)
    }

    /// `h_m h_n` by the closed-form expansion. Requires `1 <= m <= n` and
    /// `r` different from 0 and 1.
    pub fn mul_basis_closed(&self, m: Degree, n: Degree) -> Result<RatElement> {
        if m > n {
            return Err(Error::ArgumentOrder { m, n });
        }
        if m == 0 {
            return Err(Error::domain("closed-form product requires m >= 1"));
        }
        if self.r.is_zero() {
            return Err(Error::domain(
                "closed-form product is undefined at r = 0; use the recursive route",
            ));
        }
        let r = self.r.rational().clone();
        let one_minus_r = self.r.one_minus();
        let one_minus_2r = BigRational::one() - BigRational::from_integer(2.into()) * &r;
        let denom = pow_rational(&one_minus_r, m as i64 - 1);

        let mut out = RatElement::zero();
        out.add_term(n - m, &(pow_rational(&r, m as i64) / &denom));
        for k in 1..m {
            let c = pow_rational(&r, (m - k) as i64)
                * pow_rational(&one_minus_r, k as i64 - 1)
                * &one_minus_2r
                / &denom;
            out.add_term(n - m + 2 * k, &c);
        }
        out.add_term(n + m, &one_minus_r);
        Ok(out)
    }

    /// Bilinear extension of the basis product. Exact when `C` is rational.
    pub fn mul<C: Coefficient>(&self, a: &HyperElement<C>, b: &HyperElement<C>) -> HyperElement<C> {
        let mut out = HyperElement::zero();
        for (m, am) in a.iter() {
            for (n, bn) in b.iter() {
                let basis = self.mul_basis(m, n);
                let scale = am.mul_ref(bn);
                if scale.is_zero() {
                    continue;
                }
                for (k, ck) in basis.iter() {
                    out.add_term(k, &scale.mul_ref(&C::from_rational(ck)));
                }
            }
        }
        out
    }
}

fn pow_rational(q: &BigRational, e: i64) -> BigRational {
    match e.cmp(&0) {
        std::cmp::Ordering::Equal => BigRational::one(),
        std::cmp::Ordering::Greater => {
            let mut acc = BigRational::one();
            let mut base = q.clone();
            let mut e = e as u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc *= &base;
                }
                e >>= 1;
                if e > 0 {
                    let b = base.clone();
                    base *= b;
                }
            }
            acc
        }
        std::cmp::Ordering::Less => BigRational::one() / pow_rational(q, -e),
    }
}

/// Convenience: rational from an `i64` pair.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(num: i64, den: i64) -> HyperAlgebra {
        HyperAlgebra::new(Param::from_ratio(num, den).unwrap())
    }

    #[test]
    fn unit_acts_trivially() {
        let a = alg(1, 4);
        assert_eq!(*a.mul_basis(0, 5), RatElement::basis(5));
        assert_eq!(*a.mul_basis(5, 0), RatElement::basis(5));
    }

    #[test]
    fn defining_relation() {
        // h_1 h_2 = r h_1 + (1-r) h_3 at r = 1/4
        let a = alg(1, 4);
        let expect = RatElement::from_pairs([(1, ratio(1, 4)), (3, ratio(3, 4))]);
        assert_eq!(*a.mul_basis(1, 2), expect);
    }

    #[test]
    fn worked_product_2_3() {
        // h_2 h_3 = (1/12) h_1 + (1/6) h_3 + (3/4) h_5 at r = 1/4
        let a = alg(1, 4);
        let expect = RatElement::from_pairs([
            (1, ratio(1, 12)),
            (3, ratio(1, 6)),
            (5, ratio(3, 4)),
        ]);
        assert_eq!(a.mul_basis_recursive(2, 3), expect);
        assert_eq!(a.mul_basis_closed(2, 3).unwrap(), expect);
    }

    #[test]
    fn closed_form_m1() {
        // h_1 h_1 = r h_0 + (1-r) h_2
        let a = alg(1, 4);
        let expect = RatElement::from_pairs([(0, ratio(1, 4)), (2, ratio(3, 4))]);
        assert_eq!(a.mul_basis_closed(1, 1).unwrap(), expect);
    }

    #[test]
    fn interior_terms_vanish_at_one_half() {
        // 1 - 2r = 0 kills the interior terms: h_2 h_2 = (1/2) h_0 + (1/2) h_4
        let a = alg(1, 2);
        let expect = RatElement::from_pairs([(0, ratio(1, 2)), (4, ratio(1, 2))]);
        assert_eq!(a.mul_basis_closed(2, 2).unwrap(), expect);
        assert_eq!(a.mul_basis_recursive(2, 2), expect);
    }

    #[test]
    fn closed_form_rejects_bad_inputs() {
        let a = alg(1, 4);
        assert!(matches!(
            a.mul_basis_closed(3, 2),
            Err(Error::ArgumentOrder { m: 3, n: 2 })
        ));
        assert!(a.mul_basis_closed(0, 2).is_err());
        let zero = alg(0, 1);
        assert!(zero.mul_basis_closed(1, 1).is_err());
    }

    #[test]
    fn r_zero_recursion_shifts() {
        // At r = 0 the relation is h_1 h_n = h_{n+1}: products concentrate on m+n.
        let a = alg(0, 1);
        assert_eq!(a.mul_basis_recursive(3, 4), RatElement::basis(7));
    }

    #[test]
    fn negative_r_is_legal_for_recursion() {
        let a = alg(-1, 3);
        let p = a.mul_basis_recursive(2, 2);
        assert_eq!(p.coeff_sum(), BigRational::one());
        assert_eq!(p, a.mul_basis_closed(2, 2).unwrap());
    }

    #[test]
    fn support_and_stride() {
        let a = alg(1, 6);
        let p = a.mul_basis_recursive(4, 7);
        for d in p.support() {
            assert!((3..=11).contains(&d));
            assert_eq!(d % 2, 1); // parity of 4 + 7
        }
        assert_eq!(p.support(), vec![3, 5, 7, 9, 11]);
    }

    #[test]
    fn bilinear_product() {
        // (h_1 + h_2) h_1 = (1/4) h_0 + (1/4) h_1 + (3/4) h_2 + (3/4) h_3
        let a = alg(1, 4);
        let lhs = RatElement::basis(1).add(&RatElement::basis(2));
        let got = a.mul(&lhs, &RatElement::basis(1));
        let expect = RatElement::from_pairs([
            (0, ratio(1, 4)),
            (1, ratio(1, 4)),
            (2, ratio(3, 4)),
            (3, ratio(3, 4)),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn mul_by_unit_element() {
        let a = alg(1, 3);
        let b = RatElement::from_pairs([(2, ratio(5, 7)), (9, ratio(-1, 2))]);
        assert_eq!(a.mul(&RatElement::basis(0), &b), b);
    }

    #[test]
    fn norms() {
        let e = RatElement::basis(0).add(&RatElement::basis(3).scale(&ratio(-1, 1)));
        assert_eq!(e.norm_l1_exact(), ratio(2, 1));
        assert_eq!(RatElement::zero().norm_l1_exact(), BigRational::zero());
        let a = alg(1, 3);
        assert_eq!(a.mul_basis(4, 9).norm_l1_exact(), BigRational::one());
    }

    #[test]
    fn involution_conjugates() {
        assert_eq!(RatElement::basis(2).involution(), RatElement::basis(2));
        let e = CxElement::from_pairs([(1, Complex64::new(1.0, 1.0))]);
        let star = e.involution();
        assert_eq!(star.coeff(1), Complex64::new(1.0, -1.0));
        assert_eq!(star.involution(), e);
    }

    #[test]
    fn complex_bilinear_matches_exact() {
        let a = alg(1, 4);
        let x = RatElement::from_pairs([(1, ratio(1, 2)), (4, ratio(2, 3))]);
        let y = RatElement::from_pairs([(2, ratio(3, 5))]);
        let exact = a.mul(&x, &y).to_complex();
        let cx = a.mul(&x.to_complex(), &y.to_complex());
        for (n, c) in exact.iter() {
            assert!((cx.coeff(n) - c).norm() < 1e-15);
        }
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let a = std::sync::Arc::new(alg(1, 4));
        let mut handles = Vec::new();
        for _ in 0..4 {
            let a = std::sync::Arc::clone(&a);
            handles.push(std::thread::spawn(move || {
                for m in 0..10 {
                    for n in 0..10 {
                        let p = a.mul_basis(m, n);
                        assert_eq!(p.coeff_sum(), BigRational::one());
                    }
                }
            }));
        }
        for h in handles {
            h.join().unwrap();
        }
    }

    #[test]
    fn zero_capacity_disables_cache() {
        let a = alg(1, 4).with_cache_capacity(0);
        let p1 = a.mul_basis(2, 3);
        let p2 = a.mul_basis(2, 3);
        assert_eq!(*p1, *p2);
    }
}
