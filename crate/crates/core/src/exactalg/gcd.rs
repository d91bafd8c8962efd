//! Greatest common divisors in Q[x, y] via primitive pseudo-remainder sequences.

use num_traits::One;

use super::poly::Poly;
use super::rational::Rational;
use super::unipoly::UniPoly;

fn content(cs: &[UniPoly]) -> UniPoly {
    cs.iter().fold(UniPoly::zero(), |g, c| g.gcd(c))
}

fn primitive(cs: &[UniPoly]) -> Vec<UniPoly> {
    let c = content(cs);
    if c.is_zero() {
        return Vec::new();
    }
    cs.iter().map(|a| a.exact_div(&c)).collect()
}

fn trim(mut cs: Vec<UniPoly>) -> Vec<UniPoly> {
    while cs.last().is_some_and(|c| c.is_zero()) {
        cs.pop();
    }
    cs
}

/// Pseudo-remainder of `a` by `b` as polynomials in y over Q[x].
fn prem(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r := lb * r - lr * y^(dr-db) * b
        let mut next: Vec<UniPoly> = r.iter().map(|c| lb * c).collect();
        for (k, bc) in b.iter().enumerate() {
            let idx = k + dr - db;
            next[idx] = &next[idx] - &(&lr * bc);
        }
        next.pop();
        r = trim(next);
    }
    r
}

/// Gcd in Q[x, y], normalized so its lex-leading coefficient is 1. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let ac = a.to_y_coeffs();
    let bc = b.to_y_coeffs();
    let cont = content(&ac).gcd(&content(&bc));
    let (mut f, mut g) = (primitive(&ac), primitive(&bc));
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while g.len() > 1 {
        let r = prem(&f, &g);
        f = g;
        g = primitive(&r);
    }
    // g is now zero (f is the gcd) or a nonzero element of Q[x] (coprime parts).
    let core = if g.is_empty() {
        f
    } else {
        vec![UniPoly::constant(Rational::one())]
    };
    let core: Vec<UniPoly> = core.iter().map(|c| c * &cont).collect();
    normalize(&Poly::from_y_coeffs(&core))
}

fn normalize(p: &Poly) -> Poly {
    match p.terms().last() {
        Some((_, c)) => p.scale(&(Rational::one() / c)),
        None => Poly::zero(),
    }
}

/// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
pub fn div_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    let ((bi, bj), bl) = {
        let (k, c) = b.terms().last()?;
        (*k, c.clone())
    };
    let mut r = a.clone();
    let mut q = Poly::zero();
    while let Some((&(i, j), c)) = r.terms().last() {
        if i < bi || j < bj {
            return None;
        }
        let t = Poly::monomial(c / &bl, i - bi, j - bj);
        r = &r - &(&t * b);
        q = &q + &t;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_poly;
    use super::*;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn common_factor() {
        let g = gcd(&p("(x - y)*(x + y^2)"), &p("(x - y)*(1 + x*y)"));
        assert_eq!(g, p("x - y"));
        assert_eq!(gcd(&p("x^2*y"), &p("x*y^3")), p("x*y"));
        assert!(gcd(&p("x + 1"), &p("y")).is_constant());
    }

    #[test]
    fn exact_division() {
        assert_eq!(div_exact(&p("x^2 - y^2"), &p("x + y")), Some(p("x - y")));
        assert_eq!(div_exact(&p("x^2 + y^2"), &p("x + y")), None);
    }
}
