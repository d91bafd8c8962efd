//! Directional weighted blow-ups and divisor bookkeeping.
//!
//! Every chart is stored in normalized coordinates `(u, v)`: the divisor is
//! `{u = 0}`, the blown-up domain is `u ≥ 0`, and `v` runs along the divisor.
//! For `x±` these are the chart's own coordinates. For `y±` the roles of the
//! two variables are exchanged; [`Chart::chart_coordinates`] converts back.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{rat, real_roots, AlgebraicPoint, Line, Poly, Rational, UniPoly, Var};
use crate::newton::Weight;
use crate::system::{ConstrainedSystem, ElementaryCase, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "x+")]
    XPos,
    #[serde(rename = "x-")]
    XNeg,
    #[serde(rename = "y+")]
    YPos,
    #[serde(rename = "y-")]
    YNeg,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::XPos,
        Direction::XNeg,
        Direction::YPos,
        Direction::YNeg,
    ];

    pub fn is_x(self) -> bool {
        matches!(self, Direction::XPos | Direction::XNeg)
    }

    pub fn sign(self) -> i64 {
        match self {
            Direction::XPos | Direction::YPos => 1,
            Direction::XNeg | Direction::YNeg => -1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::XPos => "x+",
            Direction::XNeg => "x-",
            Direction::YPos => "y+",
            Direction::YNeg => "y-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub direction: Direction,
    pub weight: Weight,
    /// Strict transform in normalized coordinates.
    pub system: ConstrainedSystem,
    /// `φ*X = u^k·(P̃, Q̃)`.
    pub k: i64,
    /// `δ∘φ = u^e·δ̃`.
    pub e: u32,
    /// The system that was blown up, centered at its origin.
    #[serde(skip)]
    pub source: ConstrainedSystem,
}

/// A point of the divisor `{u = 0}` of one chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorPoint {
    pub t: AlgebraicPoint,
    pub equilibrium: bool,
    /// The point lies on an interval of equilibria.
    pub interval: bool,
    pub impasse: bool,
    pub elementary: Option<ElementaryCase>,
}

impl DivisorPoint {
    pub fn is_special(&self) -> bool {
        if self.interval {
            self.impasse || self.elementary.is_none()
        } else {
            self.equilibrium || self.impasse || self.elementary.is_none()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorMarks {
    /// The whole divisor consists of equilibria.
    pub interval: bool,
    pub points: Vec<DivisorPoint>,
}

/// Swaps the names of the variables and the two field components.
pub fn swap_system(sys: &ConstrainedSystem) -> ConstrainedSystem {
    ConstrainedSystem {
        p: sys.q.swap_vars(),
        q: sys.p.swap_vars(),
        delta: sys.delta.swap_vars(),
        reduced: sys.reduced,
    }
}

/// Source system, weight and sign as seen in normalized coordinates.
fn normalized_source(
    sys: &ConstrainedSystem,
    w: Weight,
    dir: Direction,
) -> (ConstrainedSystem, Weight, i64) {
    if dir.is_x() {
        (sys.clone(), w, dir.sign())
    } else {
        (swap_system(sys), w.swapped(), dir.sign())
    }
}

/// `(s·u^{ω₁}, u^{ω₂}·v)`.
fn chart_map(w: Weight, s: i64) -> (Poly, Poly) {
    (Poly::monomial(rat(s), w.w1, 0), Poly::monomial(Rational::one(), w.w2, 1))
}

pub fn blow_up(sys: &ConstrainedSystem, w: Weight, dir: Direction) -> Result<Chart> {
    if w.w1 == 0 || w.w2 == 0 {
        return Err(Error::NonPositiveWeight(w.w1 as i64, w.w2 as i64));
    }
    let (src, nw, s) = normalized_source(sys, w, dir);
    let (sx, sy) = chart_map(nw, s);
    let pp = src.p.substitute(&sx, &sy);
    let qq = src.q.substitute(&sx, &sy);
    // ω₁·u^{ω₁+ω₂}·(δ∘φ)·(u̇, v̇) = (n1, n2)
    let n1 = pp.shift(nw.w2 + 1, 0).scale(&rat(s));
    let n2 = &qq.shift(nw.w1, 0).scale(&rat(nw.w1 as i64))
        - &pp.shift(nw.w2, 1).scale(&rat(s * nw.w2 as i64));
    // Largest power that can be divided out while keeping the divisor invariant.
    let m = match (n1.max_dividing_power(Var::X), n2.max_dividing_power(Var::X)) {
        (None, None) => return Err(Error::DegenerateInput),
        (Some(a), None) => a - 1,
        (None, Some(b)) => b,
        (Some(a), Some(b)) => (a - 1).min(b),
    };
    let inv_w1 = Rational::one() / rat(nw.w1 as i64);
    let p = n1.divide_out(Var::X, m).expect("order").scale(&inv_w1);
    let q = n2.divide_out(Var::X, m).expect("order").scale(&inv_w1);
    let dd = src.delta.substitute(&sx, &sy);
    let e = dd.max_dividing_power(Var::X).ok_or(Error::ZeroDelta)?;
    let delta = dd.divide_out(Var::X, e).expect("order");
    Ok(Chart {
        direction: dir,
        weight: w,
        system: ConstrainedSystem::new(p, q, delta)?,
        k: m as i64 - nw.w1 as i64 - nw.w2 as i64,
        e,
        source: sys.clone(),
    })
}

impl Chart {
    /// The strict transform written in the chart's own coordinates
    /// (`(x̃, ỹ)` with divisor `x̃ = 0` for `x±`, `(x̄, ȳ)` with divisor `ȳ = 0` for `y±`).
    pub fn chart_coordinates(&self) -> ConstrainedSystem {
        if self.direction.is_x() {
            self.system.clone()
        } else {
            swap_system(&self.system)
        }
    }

    pub fn divisor_line() -> Line {
        Line::XEquals(Rational::zero())
    }

    /// Field, impasse function and transverse derivative restricted to the divisor.
    pub fn divisor_restrictions(&self) -> (UniPoly, UniPoly, UniPoly) {
        let line = Self::divisor_line();
        (
            self.system.q.restrict_to_line(&line),
            self.system.delta.restrict_to_line(&line),
            self.system.p.partial_dx().restrict_to_line(&line),
        )
    }

    pub fn is_interval(&self) -> bool {
        self.system.q.restrict_to_line(&Self::divisor_line()).is_zero()
    }

    /// Classifies one point of the divisor.
    pub fn point(&self, t: AlgebraicPoint) -> DivisorPoint {
        let (q0, d0, _) = self.divisor_restrictions();
        let equilibrium = q0.is_zero() || t.sign_of(&q0) == 0;
        let impasse = t.sign_of(&d0) == 0;
        let elementary = self
            .system
            .is_elementary_at(&Point::OnLine(Self::divisor_line(), t.clone()));
        DivisorPoint {
            t,
            equilibrium,
            interval: q0.is_zero(),
            impasse,
            elementary,
        }
    }
}

/// Symbolic check of `Dφ·u^k·(P̃, Q̃) = X∘φ` and `δ∘φ = u^e·δ̃`.
pub fn pullback_identity_check(chart: &Chart) -> bool {
    let (src, w, s) = normalized_source(&chart.source, chart.weight, chart.direction);
    let (sx, sy) = chart_map(w, s);
    let sys = &chart.system;
    let l1 = sys.p.shift(w.w1 - 1, 0).scale(&rat(s * w.w1 as i64));
    let l2 = &sys.p.shift(w.w2 - 1, 1).scale(&rat(w.w2 as i64)) + &sys.q.shift(w.w2, 0);
    let r1 = src.p.substitute(&sx, &sy);
    let r2 = src.q.substitute(&sx, &sy);
    let field_ok = if chart.k >= 0 {
        let k = chart.k as u32;
        l1.shift(k, 0) == r1 && l2.shift(k, 0) == r2
    } else {
        let k = (-chart.k) as u32;
        l1 == r1.shift(k, 0) && l2 == r2.shift(k, 0)
    };
    let delta_ok = src.delta.substitute(&sx, &sy) == sys.delta.shift(chart.e, 0);
    field_ok && delta_ok
}

/// Equilibria, impasse crossings and other special points on the divisor,
/// ordered by increasing `v`.
pub fn mark_divisor_points(chart: &Chart) -> Result<DivisorMarks> {
    let (q0, d0, a0) = chart.divisor_restrictions();
    let interval = q0.is_zero();
    let special = if interval { &a0 * &d0 } else { &q0 * &d0 };
    if special.is_zero() {
        return Err(Error::DegenerateInput);
    }
    let points = real_roots(&special)?
        .into_iter()
        .map(|t| chart.point(t))
        .collect();
    Ok(DivisorMarks { interval, points })
}

/// Transfers a divisor coordinate between an `x` chart and a `y` chart of the
/// same blow-up, using `|t̄|^{ω₂}·|t|^{ω₁} = 1` (x to y) with the signs fixed
/// by the two directions.
pub fn glue(from: Direction, to: Direction, w: Weight, t: &Rational) -> Result<AlgebraicPoint> {
    if from.is_x() == to.is_x() {
        return Err(Error::OutsideOverlap);
    }
    let (xdir, ydir) = if from.is_x() { (from, to) } else { (to, from) };
    // The coordinate being mapped must carry the sign of the other chart's direction.
    let required = if from.is_x() { ydir.sign() } else { xdir.sign() };
    let s = crate::exactalg::sign(t) as i64;
    if s != required {
        return Err(Error::OutsideOverlap);
    }
    let (a, b) = if from.is_x() {
        (w.w2, w.w1)
    } else {
        (w.w1, w.w2)
    };
    // |result|^a · |t|^b = 1
    let tb = num_traits::pow(t.clone() * rat(s), b as usize);
    let mut coeffs = vec![Rational::zero(); a as usize + 1];
    coeffs[0] = -Rational::one();
    coeffs[a as usize] = tb;
    let roots = real_roots(&UniPoly::new(coeffs))?;
    let out_sign = if from.is_x() { xdir.sign() } else { ydir.sign() };
    let pos = roots
        .into_iter()
        .find(|r| r.cmp_rational(&Rational::zero()).is_gt())
        .ok_or(Error::OutsideOverlap)?;
    Ok(if out_sign > 0 {
        pos
    } else {
        negate(&pos)
    })
}

fn negate(p: &AlgebraicPoint) -> AlgebraicPoint {
    match p {
        AlgebraicPoint::Rational(q) => AlgebraicPoint::Rational(-q.clone()),
        AlgebraicPoint::Algebraic { poly, lo, hi } => AlgebraicPoint::Algebraic {
            poly: poly.reflect(),
            lo: -hi.clone(),
            hi: -lo.clone(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{parse_poly, ratio};

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn cusp() -> ConstrainedSystem {
        ConstrainedSystem::parse("y", "x^2", "x*y").unwrap()
    }

    const W23: Weight = Weight { w1: 2, w2: 3 };

    #[test]
    fn cusp_x_chart() {
        let c = blow_up(&cusp(), W23, Direction::XPos).unwrap();
        assert_eq!(c.system.p, p("1/2*x*y"));
        assert_eq!(c.system.q, p("1 - 3/2*y^2"));
        assert_eq!(c.system.delta, p("y"));
        assert_eq!((c.k, c.e), (1, 5));
        assert!(pullback_identity_check(&c));
    }

    #[test]
    fn cusp_y_chart() {
        let c = blow_up(&cusp(), W23, Direction::YPos).unwrap();
        let s = c.chart_coordinates();
        assert_eq!(s.p, p("1 - 2/3*x^3"));
        assert_eq!(s.q, p("1/3*x^2*y"));
        assert_eq!(s.delta, p("x"));
        assert!(pullback_identity_check(&c));
    }

    #[test]
    fn negative_charts() {
        let c = blow_up(&cusp(), W23, Direction::XNeg).unwrap();
        assert_eq!(c.system.p, p("-1/2*x*y"));
        assert_eq!(c.system.q, p("1 + 3/2*y^2"));
        assert_eq!(c.system.delta, p("-y"));
        assert!(pullback_identity_check(&c));
        let c = blow_up(&cusp(), W23, Direction::YNeg).unwrap();
        assert!(pullback_identity_check(&c));
    }

    #[test]
    fn corrupted_chart_fails_check() {
        let mut c = blow_up(&cusp(), W23, Direction::XPos).unwrap();
        c.system.p = &c.system.p + &p("x^2");
        assert!(!pullback_identity_check(&c));
    }

    #[test]
    fn radial_field_gives_equilibrium_interval() {
        let s = ConstrainedSystem::parse("x", "y", "1").unwrap();
        let c = blow_up(&s, Weight { w1: 1, w2: 1 }, Direction::XPos).unwrap();
        assert_eq!((c.system.p.clone(), c.system.q.clone()), (p("x"), p("0")));
        assert_eq!(c.k, 0);
        assert!(pullback_identity_check(&c));
        let m = mark_divisor_points(&c).unwrap();
        assert!(m.interval);
        assert!(m.points.is_empty());
    }

    #[test]
    fn cusp_marks() {
        let c = blow_up(&cusp(), W23, Direction::XPos).unwrap();
        let m = mark_divisor_points(&c).unwrap();
        assert!(!m.interval);
        assert_eq!(m.points.len(), 3);
        assert!(m.points[0].equilibrium && !m.points[0].impasse);
        assert!((m.points[0].t.approx() + (2f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!(m.points[1].impasse && !m.points[1].equilibrium);
        assert!(m.points[1].t.is_zero());
        assert!(m.points.iter().all(|pt| pt.elementary.is_some()));
    }

    #[test]
    fn gluing() {
        let w11 = Weight { w1: 1, w2: 1 };
        let g = glue(Direction::XPos, Direction::YPos, w11, &rat(2)).unwrap();
        assert_eq!(g, AlgebraicPoint::Rational(ratio(1, 2)));
        let g = glue(Direction::XPos, Direction::YPos, W23, &rat(1)).unwrap();
        assert_eq!(g, AlgebraicPoint::Rational(rat(1)));
        assert_eq!(
            glue(Direction::XPos, Direction::YPos, W23, &rat(0)),
            Err(Error::OutsideOverlap)
        );
        // |x̄|²·|ỹ| = 1 with ỹ = 4: x̄ = 1/2, and back.
        let w12 = Weight { w1: 1, w2: 2 };
        let g = glue(Direction::XPos, Direction::YPos, w12, &rat(4)).unwrap();
        assert_eq!(g, AlgebraicPoint::Rational(ratio(1, 2)));
        let back = glue(Direction::YPos, Direction::XPos, w12, &ratio(1, 2)).unwrap();
        assert_eq!(back, AlgebraicPoint::Rational(rat(4)));
        let g = glue(Direction::XNeg, Direction::YNeg, w11, &rat(-2)).unwrap();
        assert_eq!(g, AlgebraicPoint::Rational(ratio(-1, 2)));
    }
}
