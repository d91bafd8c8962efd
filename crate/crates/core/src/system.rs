//! Constrained systems `δ·(ẋ, ẏ) = (P, Q)` and point-wise predicates.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{div_exact, gcd, parse_poly, sign, AlgebraicPoint, Line, Poly, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstrainedSystem {
    pub p: Poly,
    pub q: Poly,
    pub delta: Poly,
    /// `false` when `δ` has a repeated factor.
    pub reduced: bool,
}

/// `A(x)·ẋ = F(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSystem {
    pub a: [[Poly; 2]; 2],
    pub f: [Poly; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    B,
    C,
}

/// A point given by rational coordinates, or a point on a coordinate line whose
/// position along the line may be algebraic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Rational(Rational, Rational),
    OnLine(Line, AlgebraicPoint),
}

impl Point {
    pub fn origin() -> Self {
        Point::Rational(Rational::zero(), Rational::zero())
    }

    /// Sign of `f` at this point.
    pub fn sign_of(&self, f: &Poly) -> i8 {
        match self {
            Point::Rational(x, y) => sign(&f.eval(x, y)),
            Point::OnLine(line, t) => t.sign_of(&f.restrict_to_line(line)),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SingularityVerdict {
    pub on_impasse: bool,
    pub equilibrium: bool,
    pub singular_impasse: bool,
    pub tangency: bool,
}

impl SingularityVerdict {
    pub fn is_singular(&self) -> bool {
        self.equilibrium || self.singular_impasse || self.tangency
    }

    /// Equilibrium of the adjoint field away from the impasse set.
    pub fn off_impasse_equilibrium(&self) -> bool {
        self.equilibrium && !self.on_impasse
    }
}

impl std::fmt::Display for SingularityVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.equilibrium {
            parts.push("Equilibrium");
        }
        if self.singular_impasse {
            parts.push("SingularImpasse");
        }
        if self.tangency {
            parts.push("Tangency");
        }
        if parts.is_empty() {
            write!(f, "NonSingular")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ElementaryCase {
    NonSingularCase,
    SemiHypOffImpasse,
    SemiHypSeparatrix,
}

impl MatrixSystem {
    pub fn det(&self) -> Poly {
        &(&self.a[0][0] * &self.a[1][1]) - &(&self.a[0][1] * &self.a[1][0])
    }
}

pub fn diagonalize(ms: &MatrixSystem) -> Result<ConstrainedSystem> {
    let delta = ms.det();
    if delta.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let [[a11, a12], [a21, a22]] = &ms.a;
    let [f1, f2] = &ms.f;
    let p = &(a22 * f1) - &(a12 * f2);
    let q = &(a11 * f2) - &(a21 * f1);
    ConstrainedSystem::new(p, q, delta)
}

impl ConstrainedSystem {
    pub fn new(p: Poly, q: Poly, delta: Poly) -> Result<Self> {
        if delta.is_zero() {
            return Err(Error::ZeroDelta);
        }
        let reduced = repeated_part(&delta).is_constant();
        Ok(Self { p, q, delta, reduced })
    }

    pub fn parse(p: &str, q: &str, delta: &str) -> Result<Self> {
        Self::new(parse_poly(p)?, parse_poly(q)?, parse_poly(delta)?)
    }

    pub fn adjoint(&self) -> (Poly, Poly) {
        (self.p.clone(), self.q.clone())
    }

    /// `(δ·P, δ·Q)`.
    pub fn auxiliary(&self) -> (Poly, Poly) {
        (&self.delta * &self.p, &self.delta * &self.q)
    }

    /// `X(δ) = P·∂ₓδ + Q·∂ᵧδ`.
    pub fn lie_derivative_delta(&self) -> Poly {
        &(&self.p * &self.delta.partial_dx()) + &(&self.q * &self.delta.partial_dy())
    }

    /// Product of the irreducible factors of `δ` whose zero set is not invariant
    /// under the adjoint field.
    pub fn non_invariant_part(&self) -> Poly {
        let red = reduced_delta(&self.delta);
        let h = gcd(&red, &self.lie_derivative_delta());
        let mut r = red;
        loop {
            let g = gcd(&r, &h);
            if g.is_constant() {
                return r;
            }
            r = div_exact(&r, &g).expect("gcd divides");
        }
    }

    /// Every branch of the impasse set through `pt` is invariant.
    pub fn impasse_invariant_at(&self, pt: &Point) -> bool {
        pt.sign_of(&self.delta) == 0 && pt.sign_of(&self.non_invariant_part()) != 0
    }

    pub fn jacobian_trace(&self) -> Poly {
        &self.p.partial_dx() + &self.q.partial_dy()
    }

    pub fn jacobian_det(&self) -> Poly {
        &(&self.p.partial_dx() * &self.q.partial_dy()) - &(&self.p.partial_dy() * &self.q.partial_dx())
    }

    pub fn is_singular_at(&self, pt: &Point) -> SingularityVerdict {
        let on_impasse = pt.sign_of(&self.delta) == 0;
        let equilibrium = pt.sign_of(&self.p) == 0 && pt.sign_of(&self.q) == 0;
        let grad_zero =
            pt.sign_of(&self.delta.partial_dx()) == 0 && pt.sign_of(&self.delta.partial_dy()) == 0;
        let singular_impasse = on_impasse && grad_zero;
        let tangency = on_impasse
            && !equilibrium
            && !grad_zero
            && pt.sign_of(&self.lie_derivative_delta()) == 0;
        SingularityVerdict {
            on_impasse,
            equilibrium,
            singular_impasse,
            tangency,
        }
    }

    /// `None` when the point is not elementary.
    pub fn is_elementary_at(&self, pt: &Point) -> Option<ElementaryCase> {
        let v = self.is_singular_at(pt);
        if !v.is_singular() {
            return Some(ElementaryCase::NonSingularCase);
        }
        if !v.equilibrium {
            return None;
        }
        let semi_hyperbolic =
            pt.sign_of(&self.jacobian_trace()) != 0 || pt.sign_of(&self.jacobian_det()) != 0;
        if !semi_hyperbolic {
            return None;
        }
        if !v.on_impasse {
            return Some(ElementaryCase::SemiHypOffImpasse);
        }
        if !v.singular_impasse && self.impasse_invariant_at(pt) {
            return Some(ElementaryCase::SemiHypSeparatrix);
        }
        None
    }

    /// Coefficient in the logarithmic basis: `a_{m,n}` of `x^{m+1}y^n` in P,
    /// `b_{m,n}` of `x^m y^{n+1}` in Q, `c_{k,l}` of `x^k y^l` in δ.
    pub fn log_coeff(&self, role: Role, m: i64, n: i64) -> Result<Rational> {
        let (poly, i, j, ok) = match role {
            Role::A => (&self.p, m + 1, n, m >= -1 && n >= 0),
            Role::B => (&self.q, m, n + 1, m >= 0 && n >= -1),
            Role::C => (&self.delta, m, n, m >= 0 && n >= 0),
        };
        if !ok || i > u32::MAX as i64 || j > u32::MAX as i64 {
            return Err(Error::IndexOutOfRange(m, n));
        }
        Ok(poly.coeff(i as u32, j as u32))
    }

    /// Translates `(a, b)` to the origin.
    pub fn translate(&self, a: &Rational, b: &Rational) -> Self {
        let sx = &Poly::x() + &Poly::constant(a.clone());
        let sy = &Poly::y() + &Poly::constant(b.clone());
        Self {
            p: self.p.substitute(&sx, &sy),
            q: self.q.substitute(&sx, &sy),
            delta: self.delta.substitute(&sx, &sy),
            reduced: self.reduced,
        }
    }
}

/// `gcd(δ, ∂ₓδ, ∂ᵧδ)`: the product of repeated factors, each with multiplicity lowered by one.
fn repeated_part(delta: &Poly) -> Poly {
    gcd(&gcd(delta, &delta.partial_dx()), &delta.partial_dy())
}

/// `δ` with repeated factors collapsed.
pub fn reduced_delta(delta: &Poly) -> Poly {
    let g = repeated_part(delta);
    if g.is_constant() {
        delta.clone()
    } else {
        div_exact(delta, &g).expect("gcd divides")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn diagonal_matrix() {
        let ms = MatrixSystem {
            a: [[p("x"), p("0")], [p("0"), p("y")]],
            f: [p("y"), p("x^2")],
        };
        let s = diagonalize(&ms).unwrap();
        assert_eq!((s.p, s.q, s.delta), (p("y^2"), p("x^3"), p("x*y")));
    }

    #[test]
    fn triangular_matrix() {
        let ms = MatrixSystem {
            a: [[p("x"), p("y")], [p("0"), p("1")]],
            f: [p("1"), p("0")],
        };
        let s = diagonalize(&ms).unwrap();
        assert_eq!((s.p, s.q, s.delta), (p("1"), p("0"), p("x")));
        let bad = MatrixSystem {
            a: [[p("x"), p("y")], [p("x"), p("y")]],
            f: [p("1"), p("0")],
        };
        assert_eq!(diagonalize(&bad), Err(Error::SingularMatrix));
    }

    #[test]
    fn auxiliary_field() {
        let s = ConstrainedSystem::parse("y^3 + x^2*y", "x*y + x^4", "y").unwrap();
        assert_eq!(s.auxiliary(), (p("y^4 + x^2*y^2"), p("x*y^2 + x^4*y")));
    }

    #[test]
    fn singularity_verdicts() {
        let o = Point::origin();
        let cusp = ConstrainedSystem::parse("y", "x^2", "x*y").unwrap();
        let v = cusp.is_singular_at(&o);
        assert!(v.equilibrium && v.singular_impasse && !v.tangency);
        assert_eq!(v.to_string(), "Equilibrium+SingularImpasse");
        assert_eq!(cusp.is_elementary_at(&o), None);
        let flat = ConstrainedSystem::parse("1", "0", "x").unwrap();
        assert!(!flat.is_singular_at(&o).is_singular());
        let tang = ConstrainedSystem::parse("y", "1", "x").unwrap();
        assert!(tang.is_singular_at(&o).tangency);
        let t2 = ConstrainedSystem::parse("1", "x", "y").unwrap();
        assert_eq!(t2.is_elementary_at(&o), None);
    }

    #[test]
    fn separatrix_case() {
        let s = ConstrainedSystem::parse("x", "-y", "y").unwrap();
        assert_eq!(s.is_elementary_at(&Point::origin()), Some(ElementaryCase::SemiHypSeparatrix));
        // Only one of the two branches of xy = 0 is invariant under (x, x + y).
        let s = ConstrainedSystem::parse("x", "y + x", "x*y").unwrap();
        assert!(!s.impasse_invariant_at(&Point::origin()));
        let s = ConstrainedSystem::parse("x", "-y", "y - 1").unwrap();
        assert_eq!(s.is_elementary_at(&Point::origin()), Some(ElementaryCase::SemiHypOffImpasse));
    }

    #[test]
    fn local_invariance_on_reducible_impasse() {
        // δ = y(x - 1): at the origin only the invariant branch y = 0 passes.
        let s = ConstrainedSystem::parse("x", "-y", "x*y - y").unwrap();
        assert!(s.impasse_invariant_at(&Point::origin()));
        assert!(!s.impasse_invariant_at(&Point::Rational(rat(1), rat(0))));
    }

    #[test]
    fn algebraic_points_on_lines() {
        let s = ConstrainedSystem::parse("x*y", "2 - 3*y^2", "y").unwrap();
        let roots = crate::exactalg::real_roots(&p("2 - 3*y^2").restrict_to_line(&Line::XEquals(rat(0)))).unwrap();
        let pt = Point::OnLine(Line::XEquals(rat(0)), roots[1].clone());
        assert!(s.is_singular_at(&pt).equilibrium);
        assert_eq!(s.is_elementary_at(&pt), Some(ElementaryCase::SemiHypOffImpasse));
        assert_eq!(pt.sign_of(&p("5*y - 4")), 1);
        assert_eq!(pt.sign_of(&p("6*y - 5")), -1);
        assert_eq!(pt.sign_of(&p("y")), 1);
    }

    #[test]
    fn logarithmic_indexing() {
        let s = ConstrainedSystem::parse("y^3 + x^2*y", "x^2", "y").unwrap();
        assert_eq!(s.log_coeff(Role::A, -1, 3).unwrap(), rat(1));
        assert_eq!(s.log_coeff(Role::A, 1, 1).unwrap(), rat(1));
        assert_eq!(s.log_coeff(Role::A, 0, 1).unwrap(), rat(0));
        assert_eq!(s.log_coeff(Role::B, 2, -1).unwrap(), rat(1));
        assert_eq!(s.log_coeff(Role::C, 0, 1).unwrap(), rat(1));
        assert!(s.log_coeff(Role::A, -2, 0).is_err());
        assert!(s.log_coeff(Role::B, 0, -2).is_err());
    }

    #[test]
    fn reducedness_flag() {
        assert!(ConstrainedSystem::parse("1", "1", "x^2 + y^3").unwrap().reduced);
        assert!(!ConstrainedSystem::parse("1", "1", "y^2*x").unwrap().reduced);
        assert_eq!(reduced_delta(&p("y^2*x")), p("x*y"));
    }
}
