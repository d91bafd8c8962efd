use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::rational::{format_rational, rat, Rational};
use super::unipoly::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Var {
    X,
    Y,
}

/// A coordinate line `{x = c}` or `{y = c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Line {
    /// `{x = c}`; the restriction is a polynomial in `y`.
    XEquals(Rational),
    /// `{y = c}`; the restriction is a polynomial in `x`.
    YEquals(Rational),
}

/// Bivariate polynomial over the rationals.
///
/// Terms are keyed by the exponent pair `(i, j)` of `x^i y^j` and kept in
/// lexicographic order; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::x(),
            Var::Y => Self::y(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    /// Adds `c x^i y^j` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match v {
                Var::X => i,
                Var::Y => j,
            })
            .max()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0, 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^a y^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), v)| ((i + a, j + b), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i > 0 => out.add_term(i - 1, j, c * rat(i as i64)),
                Var::Y if j > 0 => out.add_term(i, j - 1, c * rat(j as i64)),
                _ => {}
            }
        }
        out
    }

    pub fn partial_dx(&self) -> Self {
        self.partial(Var::X)
    }

    pub fn partial_dy(&self) -> Self {
        self.partial(Var::Y)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * pow_rat(x, i) * pow_rat(y, j);
        }
        acc
    }

    /// Composition `p(x ↦ sx, y ↦ sy)`.
    pub fn substitute(&self, sx: &Poly, sy: &Poly) -> Self {
        let max_i = self.degree_in(Var::X).unwrap_or(0);
        let max_j = self.degree_in(Var::Y).unwrap_or(0);
        let xs = powers(sx, max_i);
        let ys = powers(sy, max_j);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let term = (&xs[i as usize] * &ys[j as usize]).scale(c);
            out = &out + &term;
        }
        out
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        }
    }

    /// Largest `k` with `v^k | self`; `None` stands for infinity (zero polynomial).
    pub fn max_dividing_power(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| match v {
                Var::X => i,
                Var::Y => j,
            })
            .min()
    }

    /// Exact division by `v^k`; `None` if `v^k` does not divide.
    pub fn divide_out(&self, v: Var, k: u32) -> Option<Self> {
        if let Some(m) = self.max_dividing_power(v) {
            if m < k {
                return None;
            }
        }
        Some(Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    let key = match v {
                        Var::X => (i - k, j),
                        Var::Y => (i, j - k),
                    };
                    (key, c.clone())
                })
                .collect(),
        })
    }

    pub fn restrict_to_line(&self, line: &Line) -> UniPoly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let (deg, factor) = match line {
                Line::XEquals(v) => (j, pow_rat(v, i)),
                Line::YEquals(v) => (i, pow_rat(v, j)),
            };
            let deg = deg as usize;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Rational::zero());
            }
            coeffs[deg] += c * factor;
        }
        UniPoly::new(coeffs)
    }

    /// Embeds a univariate polynomial in the given variable.
    pub fn from_uni(u: &UniPoly, v: Var) -> Self {
        let mut p = Self::zero();
        for (d, c) in u.coeffs().iter().enumerate() {
            match v {
                Var::X => p.add_term(d as u32, 0, c.clone()),
                Var::Y => p.add_term(0, d as u32, c.clone()),
            }
        }
        p
    }

    /// Coefficients as a polynomial in `y` whose coefficients are polynomials in `x`.
    pub fn to_y_coeffs(&self) -> Vec<UniPoly> {
        let dy = self.degree_in(Var::Y).map_or(0, |d| d as usize + 1);
        let mut raw: Vec<Vec<Rational>> = vec![Vec::new(); dy];
        for (&(i, j), c) in &self.terms {
            let row = &mut raw[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Rational::zero());
            }
            row[i as usize] = c.clone();
        }
        raw.into_iter().map(UniPoly::new).collect()
    }

    pub fn from_y_coeffs(cs: &[UniPoly]) -> Self {
        let mut p = Self::zero();
        for (j, u) in cs.iter().enumerate() {
            for (i, c) in u.coeffs().iter().enumerate() {
                p.add_term(i as u32, j as u32, c.clone());
            }
        }
        p
    }
}

fn pow_rat(q: &Rational, e: u32) -> Rational {
    let mut r = Rational::one();
    for _ in 0..e {
        r *= q;
    }
    r
}

fn powers(p: &Poly, n: u32) -> Vec<Poly> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Poly::one());
    for k in 1..=n as usize {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn fmt_monomial(i: u32, j: u32) -> String {
    let mut parts = Vec::new();
    match i {
        0 => {}
        1 => parts.push("x".to_string()),
        _ => parts.push(format!("x^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".to_string()),
        _ => parts.push(format!("y^{j}")),
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    /// Prints in the input grammar, terms in ascending lexicographic `(i, j)` order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (&(i, j), c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = fmt_monomial(i, j);
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{mono}", format_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::super::rational::ratio;
    use super::*;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn dividing_power() {
        assert_eq!(p("x^5*y + x^4").max_dividing_power(Var::X), Some(4));
        assert_eq!(p("x^5*y + x^4").max_dividing_power(Var::Y), Some(0));
        assert_eq!(Poly::zero().max_dividing_power(Var::X), None);
        assert_eq!(p("x^5*y + x^4").divide_out(Var::X, 4), Some(p("x*y + 1")));
        assert_eq!(p("x^5*y + x^4").divide_out(Var::Y, 1), None);
    }

    #[test]
    fn derivative() {
        assert_eq!(p("x^2*y - y^3").partial_dy(), p("x^2 - 3*y^2"));
        assert_eq!(p("x^2*y - y^3").partial_dx(), p("2*x*y"));
    }

    #[test]
    fn substitution_into_weighted_chart() {
        let sx = p("x^2");
        let sy = p("x^3*y");
        assert_eq!(p("x*y").substitute(&sx, &sy), p("x^5*y"));
    }

    #[test]
    fn restriction() {
        let r = p("1 - 3/2*y^2").restrict_to_line(&Line::XEquals(rat(0)));
        assert_eq!(r, UniPoly::new(vec![rat(1), rat(0), ratio(-3, 2)]));
        assert!(p("x^3 + x*y^2").restrict_to_line(&Line::XEquals(rat(0))).is_zero());
        let r = p("x^3 + x*y^2").restrict_to_line(&Line::YEquals(rat(1)));
        assert_eq!(r, UniPoly::new(vec![rat(0), rat(1), rat(0), rat(1)]));
    }

    #[test]
    fn printing() {
        assert_eq!(p("x^4 + x*y").to_string(), "x*y + x^4");
        assert_eq!(p("-3/2*y^2 + 1").to_string(), "1 - 3/2*y^2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("-x").to_string(), "-x");
    }

    #[test]
    fn eval_and_pow() {
        let q = p("x + y").pow(3);
        assert_eq!(q, p("x^3 + 3*x^2*y + 3*x*y^2 + y^3"));
        assert_eq!(q.eval(&rat(1), &ratio(1, 2)), ratio(27, 8));
    }
}
