//! Real root isolation with Sturm sequences and exact algebraic points.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::rational::{format_rational, rat, ratio, sign, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// A real algebraic number. `Algebraic` holds a square-free polynomial with
/// exactly one root in the open interval `(lo, hi)`; that root is irrational
/// and neither endpoint is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicPoint {
    Rational(Rational),
    Algebraic {
        poly: UniPoly,
        lo: Rational,
        hi: Rational,
    },
}

pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone()];
    if p.is_zero() {
        return chain;
    }
    let mut next = p.derivative();
    while !next.is_zero() {
        let r = -&chain.last().unwrap().rem(&next);
        chain.push(next);
        next = r;
    }
    chain
}

fn sign_variations(chain: &[UniPoly], t: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for q in chain {
        let s = sign(&q.eval(t));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct roots of the chain's first polynomial in the open interval `(a, b)`.
fn roots_in_open(chain: &[UniPoly], a: &Rational, b: &Rational) -> usize {
    let p = &chain[0];
    let n = sign_variations(chain, a).saturating_sub(sign_variations(chain, b));
    if p.eval(b).is_zero() {
        n.saturating_sub(1)
    } else {
        n
    }
}

/// Cauchy bound: every real root lies strictly inside `(-B, B)`.
pub fn root_bound(p: &UniPoly) -> Rational {
    let lead = p.lead().abs();
    let m = p
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    m + rat(2)
}

/// Integer that clears all denominators times the leading numerator; every rational
/// root of `p` has a denominator dividing it.
fn denominator_bound(p: &UniPoly) -> BigInt {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let lead = (p.lead() * Rational::from_integer(l)).to_integer();
    lead.abs()
}

/// Real roots of `p` in increasing order, without multiplicity.
pub fn real_roots(p: &UniPoly) -> Result<Vec<AlgebraicPoint>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = p.square_free();
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(&sf);
    let b = root_bound(&sf);
    let den = Rational::from_integer(denominator_bound(&sf));
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    // Depth-first with the upper half pushed first yields ascending order.
    while let Some((lo, hi)) = stack.pop() {
        if lo == hi {
            out.push(AlgebraicPoint::Rational(lo));
            continue;
        }
        let n = roots_in_open(&chain, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(settle(&sf, &chain, lo, hi, &den));
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        let at_mid = sf.eval(&mid).is_zero();
        stack.push((mid.clone(), hi));
        // An exact hit at the midpoint becomes a degenerate interval.
        if at_mid {
            stack.push((mid.clone(), mid.clone()));
        }
        stack.push((lo, mid));
    }
    Ok(out)
}

/// Turns an isolating interval into an exact point, detecting rational roots.
/// Endpoints may be roots of `sf`; bisection is driven by Sturm counts.
fn settle(
    sf: &UniPoly,
    chain: &[UniPoly],
    mut lo: Rational,
    mut hi: Rational,
    den: &Rational,
) -> AlgebraicPoint {
    let width_target = Rational::one() / den;
    while &hi - &lo >= width_target || sf.eval(&lo).is_zero() || sf.eval(&hi).is_zero() {
        let mid = (&lo + &hi) / rat(2);
        if sf.eval(&mid).is_zero() {
            return AlgebraicPoint::Rational(mid);
        }
        if roots_in_open(chain, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Any rational root is k/den; at most one such value fits in the interval.
    let k = (&lo * den).ceil();
    let cand = k / den;
    if cand > lo && cand < hi && sf.eval(&cand).is_zero() {
        return AlgebraicPoint::Rational(cand);
    }
    AlgebraicPoint::Algebraic {
        poly: sf.clone(),
        lo,
        hi,
    }
}

/// Real roots that are not zero.
pub fn nonzero_real_roots(p: &UniPoly) -> Result<Vec<AlgebraicPoint>> {
    Ok(real_roots(p)?
        .into_iter()
        .filter(|r| !r.is_zero())
        .collect())
}

impl AlgebraicPoint {
    pub fn rational(q: Rational) -> Self {
        Self::Rational(q)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Self::Rational(q) => Some(q),
            Self::Algebraic { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Rational(q) if q.is_zero())
    }

    /// Sign of `p` evaluated at this point.
    pub fn sign_of(&self, p: &UniPoly) -> i8 {
        match self {
            Self::Rational(q) => sign(&p.eval(q)),
            Self::Algebraic { poly, lo, hi } => {
                if p.is_zero() {
                    return 0;
                }
                let g = poly.gcd(p);
                if g.degree().unwrap_or(0) > 0 && roots_in_open(&sturm_chain(&g), lo, hi) == 1 {
                    return 0;
                }
                let psf = p.square_free();
                let pchain = sturm_chain(&psf);
                let (mut lo, mut hi) = (lo.clone(), hi.clone());
                while psf.degree().unwrap_or(0) > 0 && roots_in_open(&pchain, &lo, &hi) > 0 {
                    let mid = (&lo + &hi) / rat(2);
                    if sign(&poly.eval(&mid)) == sign(&poly.eval(&lo)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                sign(&p.eval(&((lo + hi) / rat(2))))
            }
        }
    }

    /// An interval `[lo, hi]` containing the point.
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            Self::Rational(q) => (q.clone(), q.clone()),
            Self::Algebraic { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// Ordering against a rational number.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            Self::Rational(q) => q.cmp(r),
            Self::Algebraic { .. } => match self.sign_of(&UniPoly::linear_root(r)) {
                1 => Ordering::Greater,
                -1 => Ordering::Less,
                _ => Ordering::Equal,
            },
        }
    }

    /// Shrinks the isolating interval below `width`.
    pub fn refine(&mut self, width: &Rational) {
        if let Self::Algebraic { poly, lo, hi } = self {
            while &(&*hi - &*lo) > width {
                let mid = (&*lo + &*hi) / rat(2);
                if sign(&poly.eval(&mid)) == sign(&poly.eval(lo)) {
                    *lo = mid;
                } else {
                    *hi = mid;
                }
            }
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Self::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Self::Algebraic { .. } => {
                let mut c = self.clone();
                c.refine(&ratio(1, 1 << 50));
                match c {
                    Self::Algebraic { lo, hi, .. } => ((lo + hi) / rat(2)).to_f64().unwrap_or(f64::NAN),
                    Self::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
                }
            }
        }
    }
}

impl fmt::Display for AlgebraicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational(q) => write!(f, "{}", format_rational(q)),
            Self::Algebraic { poly, .. } => {
                write!(f, "~{:.6} (root of {})", self.approx(), poly)
            }
        }
    }
}

impl Serialize for AlgebraicPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Rational(q) => {
                let mut st = s.serialize_struct("AlgebraicPoint", 2)?;
                st.serialize_field("exact", &format_rational(q))?;
                st.serialize_field("approx", &self.approx())?;
                st.end()
            }
            Self::Algebraic { poly, lo, hi } => {
                let mut st = s.serialize_struct("AlgebraicPoint", 4)?;
                st.serialize_field("poly", &poly.to_string())?;
                st.serialize_field("lo", &format_rational(lo))?;
                st.serialize_field("hi", &format_rational(hi))?;
                st.serialize_field("approx", &self.approx())?;
                st.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_and_irrational_roots() {
        // (t - 1/2)(t^2 - 2)(t + 3)^2
        let a = UniPoly::new(vec![ratio(-1, 2), rat(1)]);
        let b = UniPoly::from_ints(&[-2, 0, 1]);
        let c = UniPoly::from_ints(&[3, 1]);
        let p = &(&a * &b) * &(&c * &c);
        let roots = real_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        assert_eq!(roots[0], AlgebraicPoint::Rational(rat(-3)));
        assert!((roots[1].approx() + 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(roots[2], AlgebraicPoint::Rational(ratio(1, 2)));
        assert!((roots[3].approx() - 2f64.sqrt()).abs() < 1e-9);
        assert_eq!(roots[3].sign_of(&b), 0);
        assert_eq!(roots[3].sign_of(&UniPoly::from_ints(&[-1, 1])), 1);
        assert_eq!(roots[1].cmp_rational(&rat(-1)), Ordering::Less);
    }

    #[test]
    fn no_real_roots() {
        assert!(real_roots(&UniPoly::from_ints(&[1, 0, 1])).unwrap().is_empty());
        assert!(real_roots(&UniPoly::from_ints(&[5])).unwrap().is_empty());
        assert!(real_roots(&UniPoly::zero()).is_err());
    }

    #[test]
    fn root_at_zero() {
        let p = UniPoly::from_ints(&[0, 0, -2, 0, 3]);
        let roots = real_roots(&p).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[1].is_zero());
        assert_eq!(nonzero_real_roots(&p).unwrap().len(), 2);
        // Root at a bisection midpoint next to an irrational root.
        let q = UniPoly::new(vec![rat(0), ratio(-2, 3), rat(0), rat(1)]);
        let roots = real_roots(&q).unwrap();
        assert!((roots[2].approx() - (2f64 / 3.0).sqrt()).abs() < 1e-9);
    }
}
